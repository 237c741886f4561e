//! Exact procedures at desk scale: deciding `inv(D) ≤ k`, inversion numbers,
//! enumeration of decycling assignments, inversion distance, and the cycle
//! transversal numbers `τ` and `τ′`.
//!
//! The inversion searches work on characteristic vectors rather than on sets:
//! a family `X_1..X_k` is the same thing as a vector in F_2^k for every vertex,
//! and an edge flips iff its endpoints' vectors have odd dot product. Vertices
//! are assigned one at a time; a partial assignment is abandoned as soon as
//! the flipped digraph induced on the assigned vertices has a cycle, since
//! later assignments cannot remove it.
//!
//! All searches here use one machine word per vertex set, so digraphs are
//! limited to 64 vertices.

use std::sync::Arc;

use rayon::prelude::*;

use crate::digraph::{Digraph, InversionFamily, VertexSet};
use crate::error::{Error, Result};
use crate::f2::BitVec;

/// Hard limit: vertex sets are single `u64` words.
pub const MAX_VERTICES: usize = 64;
/// Vectors are enumerated as integers below `2^k`.
pub const MAX_FAMILY_SIZE: usize = 30;

/// Size guards for the exhaustive procedures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// `k · n` bound for [`enumerate_decycling_assignments`].
    pub enumeration_bits: usize,
    /// Vertex bound for [`tau`].
    pub tau_vertices: usize,
    /// Bound on the size of a strongly connected component in [`tau_prime`].
    pub tau_prime_component: usize,
    /// Skip every guard above (the 64-vertex limit still applies).
    pub accept_long_runtimes: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enumeration_bits: 36,
            tau_vertices: 24,
            tau_prime_component: 24,
            accept_long_runtimes: false,
        }
    }
}

impl Limits {
    fn check(&self, what: &'static str, value: usize, limit: usize) -> Result<()> {
        if value > limit && !self.accept_long_runtimes {
            return Err(Error::guard(what, value, limit));
        }
        Ok(())
    }
}

/// Options for [`decide_inv_le`] and friends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Only explore assignments whose coordinate columns are sorted, which
    /// quotients out permutations of the `k` sets.
    pub prune_symmetry: bool,
    /// Worker threads; the reported witness does not depend on this.
    pub threads: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            prune_symmetry: true,
            threads: 1,
        }
    }
}

/// A characteristic vector in F_2^k for every vertex, packed into a word.
///
/// Bit `i` of `vectors()[v]` is set iff `v ∈ X_i` in the induced family.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VectorAssignment {
    k: usize,
    vecs: Vec<u64>,
}

impl VectorAssignment {
    pub fn new(k: usize, vecs: Vec<u64>) -> Result<Self> {
        if k > 64 {
            return Err(Error::guard("k", k, 64));
        }
        let mask = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
        if let Some(&bad) = vecs.iter().find(|&&v| v & !mask != 0) {
            return Err(Error::InvalidArgument(format!("vector {bad:#b} has more than {k} coordinates")));
        }
        Ok(VectorAssignment { k, vecs })
    }

    pub fn from_family(n: usize, family: &InversionFamily) -> Result<Self> {
        family.validate(n)?;
        if family.len() > 64 {
            return Err(Error::guard("k", family.len(), 64));
        }
        let mut vecs = vec![0u64; n];
        for (i, set) in family.sets().iter().enumerate() {
            for v in set.iter() {
                vecs[v] |= 1 << i;
            }
        }
        Ok(VectorAssignment { k: family.len(), vecs })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.vecs.len()
    }

    pub fn vectors(&self) -> &[u64] {
        &self.vecs
    }

    pub fn vector(&self, v: usize) -> BitVec {
        BitVec::from_u64(self.k, self.vecs[v])
    }

    /// `X_i = { v : bit i of vecs[v] }`.
    pub fn to_family(&self) -> InversionFamily {
        let sets = (0..self.k)
            .map(|i| {
                (0..self.vecs.len())
                    .filter(|&v| (self.vecs[v] >> i) & 1 == 1)
                    .collect::<VertexSet>()
            })
            .collect();
        InversionFamily::new(sets)
    }
}

/// Result of a search bounded by `max_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bounded {
    /// The least feasible `k`, with a witness family of exactly `k` sets.
    Found { k: usize, family: InversionFamily },
    /// No family of size at most the bound exists.
    ExceedsMax(usize),
}

impl Bounded {
    pub fn value(&self) -> Option<usize> {
        match self {
            Bounded::Found { k, .. } => Some(*k),
            Bounded::ExceedsMax(_) => None,
        }
    }

    pub fn family(&self) -> Option<&InversionFamily> {
        match self {
            Bounded::Found { family, .. } => Some(family),
            Bounded::ExceedsMax(_) => None,
        }
    }
}

fn check_size(d: &Digraph, k: usize) -> Result<()> {
    if d.n() > MAX_VERTICES {
        return Err(Error::guard("n", d.n(), MAX_VERTICES));
    }
    if k > MAX_FAMILY_SIZE {
        return Err(Error::guard("k", k, MAX_FAMILY_SIZE));
    }
    Ok(())
}

#[inline]
fn ones(mut bits: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if bits == 0 {
            return None;
        }
        let b = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        Some(b)
    })
}

/// The static part of a search: a digraph relabelled into search positions.
#[derive(Debug)]
struct Problem {
    n: usize,
    k: usize,
    /// `order[p]` is the vertex assigned at position `p`.
    order: Vec<usize>,
    /// Positions `q < p` with an edge `p → q`.
    out_before: Vec<u64>,
    /// Positions `q < p` with an edge `q → p`.
    in_before: Vec<u64>,
    prune_symmetry: bool,
}

impl Problem {
    fn new(d: &Digraph, k: usize, order: Vec<usize>, prune_symmetry: bool) -> Self {
        let n = d.n();
        let mut out_before = vec![0u64; n];
        let mut in_before = vec![0u64; n];
        for p in 0..n {
            for q in 0..p {
                if d.has_edge(order[p], order[q]) {
                    out_before[p] |= 1 << q;
                }
                if d.has_edge(order[q], order[p]) {
                    in_before[p] |= 1 << q;
                }
            }
        }
        Problem {
            n,
            k,
            order,
            out_before,
            in_before,
            prune_symmetry,
        }
    }

    fn to_vertex_order(&self, positions: &[u64]) -> Vec<u64> {
        let mut vecs = vec![0u64; self.n];
        for (p, &x) in positions.iter().enumerate() {
            vecs[self.order[p]] = x;
        }
        vecs
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    Fresh,
    Running,
    Done,
}

/// Resumable depth-first search over vector assignments.
///
/// Candidate vectors at each position are tried in increasing integer order,
/// so solutions come out in lexicographic order of the position sequence.
/// Acyclicity of the assigned part is tracked with a reachability closure per
/// depth: `reach[depth][q]` is the set of assigned positions reachable from
/// `q` in the flipped digraph.
struct Engine {
    prob: Arc<Problem>,
    base: usize,
    target: usize,
    depth: usize,
    vecs: Vec<u64>,
    cols: Vec<u64>,
    reach: Vec<u64>,
    tied: Vec<u64>,
    next: Vec<u64>,
    phase: Phase,
}

impl Engine {
    fn new(prob: Arc<Problem>, prefix: &[u64], target: usize) -> Self {
        let n = prob.n;
        let k = prob.k;
        let mut e = Engine {
            base: prefix.len(),
            target,
            depth: 0,
            vecs: vec![0; n],
            cols: vec![0; k],
            reach: vec![0; (n + 1) * n.max(1)],
            tied: vec![0; n + 1],
            next: vec![0; n + 1],
            phase: Phase::Fresh,
            prob,
        };
        e.tied[0] = if k >= 2 { (1u64 << (k - 1)) - 1 } else { 0 };
        for (p, &x) in prefix.iter().enumerate() {
            let ok = e.try_assign(p, x);
            assert!(ok, "prefix must be a valid partial assignment");
            e.depth = p + 1;
        }
        e
    }

    fn try_assign(&mut self, p: usize, x: u64) -> bool {
        let prob = &*self.prob;
        let n = prob.n;
        if prob.prune_symmetry {
            // columns j and j+1 still equal must not become increasing
            if self.tied[p] & !x & (x >> 1) != 0 {
                return false;
            }
        }
        let mut flips = 0u64;
        for c in ones(x) {
            flips ^= self.cols[c];
        }
        let ob = prob.out_before[p];
        let ib = prob.in_before[p];
        let out = (ob & !flips) | (ib & flips);
        let inn = (ib & !flips) | (ob & flips);

        let (lower, upper) = self.reach.split_at_mut((p + 1) * n);
        let layer = &lower[p * n..p * n + p];
        let mut from_p = out;
        for w in ones(out) {
            from_p |= layer[w];
        }
        if from_p & inn != 0 {
            return false;
        }
        let next_layer = &mut upper[..p + 1];
        for q in 0..p {
            let r = layer[q];
            next_layer[q] = if (inn >> q) & 1 == 1 || r & inn != 0 {
                r | (1 << p) | from_p
            } else {
                r
            };
        }
        next_layer[p] = from_p;

        self.tied[p + 1] = self.tied[p] & !(x & !(x >> 1));
        self.vecs[p] = x;
        for c in ones(x) {
            self.cols[c] |= 1 << p;
        }
        true
    }

    fn unassign(&mut self, p: usize) {
        for c in ones(self.vecs[p]) {
            self.cols[c] &= !(1 << p);
        }
        self.vecs[p] = 0;
    }

    /// Advances to the next complete assignment of positions `0..target`.
    fn advance(&mut self) -> bool {
        match self.phase {
            Phase::Done => return false,
            Phase::Fresh => self.phase = Phase::Running,
            Phase::Running => {
                if self.depth == self.base {
                    self.phase = Phase::Done;
                    return false;
                }
                self.depth -= 1;
                self.unassign(self.depth);
            }
        }
        let limit = 1u64 << self.prob.k;
        loop {
            let p = self.depth;
            if p == self.target {
                return true;
            }
            let mut placed = false;
            while self.next[p] < limit {
                let x = self.next[p];
                self.next[p] += 1;
                if self.try_assign(p, x) {
                    placed = true;
                    break;
                }
            }
            if placed {
                self.depth += 1;
                if self.depth == self.target {
                    return true;
                }
                self.next[self.depth] = 0;
            } else {
                if p == self.base {
                    self.phase = Phase::Done;
                    return false;
                }
                self.depth -= 1;
                self.unassign(self.depth);
            }
        }
    }

    fn assigned(&self) -> &[u64] {
        &self.vecs[..self.depth]
    }
}

/// Search order: vertices on more directed triangles first, ties by index.
fn heuristic_order(d: &Digraph) -> Vec<usize> {
    let counts = d.triangle_counts();
    let mut order: Vec<usize> = (0..d.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(counts[v]), v));
    order
}

fn first_solution(prob: Arc<Problem>, threads: usize) -> Option<Vec<u64>> {
    let n = prob.n;
    if threads <= 1 || n < 2 {
        let mut e = Engine::new(prob, &[], n);
        return e.advance().then(|| e.assigned().to_vec());
    }
    // Split the tree into enough prefixes to keep the workers busy. The
    // earliest prefix (in search order) that has a solution wins, which is
    // exactly the solution the sequential search would report.
    let wanted = 8 * threads;
    let mut prefixes: Vec<Vec<u64>> = vec![Vec::new()];
    let mut depth = 0;
    while depth < n && prefixes.len() < wanted {
        depth += 1;
        let mut e = Engine::new(prob.clone(), &[], depth);
        prefixes.clear();
        while e.advance() {
            prefixes.push(e.assigned().to_vec());
        }
        if prefixes.is_empty() {
            return None;
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    pool.install(|| {
        prefixes.par_iter().find_map_first(|pre| {
            let mut e = Engine::new(prob.clone(), pre, n);
            e.advance().then(|| e.assigned().to_vec())
        })
    })
}

/// A decycling family of exactly `k` sets (possibly empty ones) if
/// `inv(D) ≤ k`, otherwise `None`.
///
/// The witness is the first accepting assignment in the search order, which
/// is fixed by the digraph alone; it does not depend on `opts.threads`.
pub fn decide_inv_le(d: &Digraph, k: usize, opts: SearchOptions) -> Result<Option<InversionFamily>> {
    check_size(d, k)?;
    if k == 0 {
        return Ok(d.is_acyclic().then(InversionFamily::empty));
    }
    let prob = Arc::new(Problem::new(d, k, heuristic_order(d), opts.prune_symmetry));
    let found = first_solution(prob.clone(), opts.threads);
    Ok(found.map(|positions| {
        VectorAssignment {
            k,
            vecs: prob.to_vertex_order(&positions),
        }
        .to_family()
    }))
}

/// The least `k ≤ max_k` with `inv(D) ≤ k`, with a witness.
pub fn inversion_number(d: &Digraph, max_k: usize, opts: SearchOptions) -> Result<Bounded> {
    check_size(d, max_k)?;
    for k in 0..=max_k {
        if let Some(family) = decide_inv_le(d, k, opts)? {
            return Ok(Bounded::Found { k, family });
        }
    }
    Ok(Bounded::ExceedsMax(max_k))
}

/// Every assignment of vectors in F_2^k whose family decycles the digraph,
/// each exactly once, in lexicographic order of `(vecs[0], vecs[1], ...)`
/// compared as integers.
pub struct DecyclingAssignments {
    engine: Engine,
}

impl Iterator for DecyclingAssignments {
    type Item = VectorAssignment;

    fn next(&mut self) -> Option<VectorAssignment> {
        if !self.engine.advance() {
            return None;
        }
        let vecs = self.engine.prob.to_vertex_order(self.engine.assigned());
        Some(VectorAssignment {
            k: self.engine.prob.k,
            vecs,
        })
    }
}

/// Streams all decycling assignments without symmetry pruning.
/// Guarded by `k · n ≤ limits.enumeration_bits`.
pub fn enumerate_decycling_assignments(d: &Digraph, k: usize, limits: Limits) -> Result<DecyclingAssignments> {
    check_size(d, k)?;
    limits.check("k*n", k * d.n(), limits.enumeration_bits)?;
    let prob = Arc::new(Problem::new(d, k, (0..d.n()).collect(), false));
    let n = prob.n;
    Ok(DecyclingAssignments {
        engine: Engine::new(prob, &[], n),
    })
}

fn check_same_tournaments(t1: &Digraph, t2: &Digraph) -> Result<()> {
    if t1.n() != t2.n() {
        return Err(Error::VertexCountMismatch(t1.n(), t2.n()));
    }
    if !t1.is_tournament() || !t2.is_tournament() {
        return Err(Error::NotTournament);
    }
    Ok(())
}

/// Disagreement masks: bit `q` of entry `p` is set iff the pair `{q, p}`,
/// `q < p`, is oriented differently in the two tournaments.
fn disagreements(t1: &Digraph, t2: &Digraph) -> Vec<u64> {
    (0..t1.n())
        .map(|p| (0..p).filter(|&q| t1.has_edge(q, p) != t2.has_edge(q, p)).fold(0, |m, q| m | 1 << q))
        .collect()
}

/// Backtracking for the exact constraint `vecs[q] · vecs[p] = disagree(q, p)`.
fn distance_search(
    req: &[u64],
    k: usize,
    prune_symmetry: bool,
    p: usize,
    cols: &mut [u64],
    tied: u64,
    vecs: &mut Vec<u64>,
) -> bool {
    if p == req.len() {
        return true;
    }
    for x in 0..1u64 << k {
        if prune_symmetry && tied & !x & (x >> 1) != 0 {
            continue;
        }
        let mut flips = 0u64;
        for c in ones(x) {
            flips ^= cols[c];
        }
        if flips != req[p] {
            continue;
        }
        for c in ones(x) {
            cols[c] |= 1 << p;
        }
        vecs.push(x);
        if distance_search(req, k, prune_symmetry, p + 1, cols, tied & !(x & !(x >> 1)), vecs) {
            return true;
        }
        vecs.pop();
        for c in ones(x) {
            cols[c] &= !(1 << p);
        }
    }
    false
}

/// The least number of inversions turning `t1` into `t2`, with a witness.
pub fn inversion_distance(t1: &Digraph, t2: &Digraph, max_k: usize, opts: SearchOptions) -> Result<Bounded> {
    check_same_tournaments(t1, t2)?;
    check_size(t1, max_k)?;
    let req = disagreements(t1, t2);
    for k in 0..=max_k {
        let mut cols = vec![0u64; k];
        let mut vecs = Vec::with_capacity(t1.n());
        let tied = if k >= 2 { (1u64 << (k - 1)) - 1 } else { 0 };
        if distance_search(&req, k, opts.prune_symmetry, 0, &mut cols, tied, &mut vecs) {
            let family = VectorAssignment { k, vecs }.to_family();
            return Ok(Bounded::Found { k, family });
        }
    }
    Ok(Bounded::ExceedsMax(max_k))
}

/// Out-masks of `d` restricted to `alive`; `true` if the restriction is acyclic.
fn acyclic_on(out: &[u64], alive: u64) -> bool {
    let mut remaining = alive;
    while remaining != 0 {
        // peel every current source at once
        let sinks_free: u64 = ones(remaining)
            .filter(|&v| out[v] & remaining == 0)
            .fold(0, |m, v| m | 1 << v);
        if sinks_free == 0 {
            return false;
        }
        remaining &= !sinks_free;
    }
    true
}

fn out_masks(d: &Digraph) -> Vec<u64> {
    (0..d.n()).map(|v| d.out_mask(v)).collect()
}

/// Next larger word with the same number of set bits (Gosper's hack).
#[inline]
pub(crate) fn next_combination(x: u64) -> u64 {
    let c = x & x.wrapping_neg();
    let r = x + c;
    (((r ^ x) >> 2) / c) | r
}

/// Minimum cycle transversal: the smallest `S` with `D − S` acyclic, found by
/// trying subsets in order of size (and, within a size, increasing as
/// integers). Guarded by `n ≤ limits.tau_vertices`.
pub fn tau(d: &Digraph, limits: Limits) -> Result<(usize, VertexSet)> {
    check_size(d, 0)?;
    limits.check("n", d.n(), limits.tau_vertices)?;
    let n = d.n();
    let out = out_masks(d);
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    for size in 0..=n {
        if size == 0 {
            if acyclic_on(&out, all) {
                return Ok((0, VertexSet::new()));
            }
            continue;
        }
        let mut s: u64 = if size == 64 { u64::MAX } else { (1u64 << size) - 1 };
        loop {
            if acyclic_on(&out, all & !s) {
                return Ok((size, VertexSet::from_mask(s)));
            }
            if size == n {
                break;
            }
            s = next_combination(s);
            if s > all {
                break;
            }
        }
    }
    unreachable!("removing every vertex leaves an acyclic digraph")
}

/// Strongly connected components as vertex masks, in order of least vertex.
fn strong_components(out: &[u64]) -> Vec<u64> {
    let n = out.len();
    let reach: Vec<u64> = (0..n)
        .map(|v| {
            let mut seen = 1u64 << v;
            let mut frontier = 1u64 << v;
            while frontier != 0 {
                let mut next = 0;
                for u in ones(frontier) {
                    next |= out[u];
                }
                frontier = next & !seen;
                seen |= next;
            }
            seen
        })
        .collect();
    let mut assigned = 0u64;
    let mut comps = Vec::new();
    for v in 0..n {
        if (assigned >> v) & 1 == 1 {
            continue;
        }
        let comp = ones(reach[v]).filter(|&u| (reach[u] >> v) & 1 == 1).fold(0, |m, u| m | 1 << u);
        assigned |= comp;
        comps.push(comp);
    }
    comps
}

/// Minimum feedback arc set of one strongly connected component, by dynamic
/// programming over vertex subsets: the cost of placing a set first is the
/// least number of backward edges inside it, and placing `v` after `S` adds
/// the edges from `v` into `S`.
fn component_fas(out: &[u64], comp: u64) -> Vec<(usize, usize)> {
    let verts: Vec<usize> = ones(comp).collect();
    let m = verts.len();
    let local_out: Vec<u32> = verts
        .iter()
        .map(|&v| {
            verts
                .iter()
                .enumerate()
                .filter(|&(_, &u)| (out[v] >> u) & 1 == 1)
                .fold(0u32, |acc, (i, _)| acc | 1 << i)
        })
        .collect();
    let full = (1usize << m) - 1;
    let mut cost = vec![u16::MAX; full + 1];
    let mut last = vec![0u8; full + 1];
    cost[0] = 0;
    for s in 1..=full {
        let mut best = u16::MAX;
        let mut arg = 0u8;
        for i in ones(s as u64) {
            let prev = s & !(1 << i);
            let c = cost[prev] + (local_out[i] & prev as u32).count_ones() as u16;
            if c < best {
                best = c;
                arg = i as u8;
            }
        }
        cost[s] = best;
        last[s] = arg;
    }
    let mut order = Vec::with_capacity(m);
    let mut s = full;
    while s != 0 {
        let i = last[s] as usize;
        order.push(i);
        s &= !(1 << i);
    }
    order.reverse();
    let mut pos = vec![0; m];
    for (p, &i) in order.iter().enumerate() {
        pos[i] = p;
    }
    let mut edges = Vec::new();
    for i in 0..m {
        for j in ones(local_out[i] as u64) {
            if pos[j] < pos[i] {
                edges.push((verts[i], verts[j]));
            }
        }
    }
    edges
}

/// Minimum cycle edge-transversal: the fewest edges whose deletion leaves `D`
/// acyclic, returned sorted. Only edges inside strongly connected components
/// can lie on cycles; each component is solved exactly and must have at most
/// `limits.tau_prime_component` vertices.
pub fn tau_prime(d: &Digraph, limits: Limits) -> Result<(usize, Vec<(usize, usize)>)> {
    check_size(d, 0)?;
    let out = out_masks(d);
    let comps = strong_components(&out);
    for &c in &comps {
        let size = c.count_ones() as usize;
        if size > 1 {
            // the subset table is indexed by u32 masks
            limits.check("component size", size, limits.tau_prime_component)?;
            if size > 30 {
                return Err(Error::guard("component size", size, 30));
            }
        }
    }
    let mut edges: Vec<(usize, usize)> = comps
        .iter()
        .filter(|c| c.count_ones() > 1)
        .flat_map(|&c| component_fas(&out, c))
        .collect();
    edges.sort_unstable();
    Ok((edges.len(), edges))
}
