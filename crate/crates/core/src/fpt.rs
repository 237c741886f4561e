//! Iterative compression for tournaments.
//!
//! [`compress`] shrinks a decycling family of size `s` to one of size `k`
//! (when possible) by a dynamic programme over the vertices in the order of
//! the transitive tournament `T = T0 ⊕ X`. Every vertex carries a vector of
//! length `s + k`: the first `s` coordinates record membership in `X`, the
//! last `k` are the unknown membership in the new family `Y`. Inverting `T0`
//! by `Y` is the same as inverting `T` by the concatenated vectors, so a
//! choice of `Y` works iff no ascending triple `a < b < c` of `T` becomes a
//! cyclic triangle, which depends only on the vectors of `a`, `b`, `c`. The
//! state after a prefix is therefore the set of vector triples it contains.
//!
//! [`fpt_inversion`] wraps this in the usual outer loop: add one vertex at a
//! time, make it a sink with two extra sets, and compress back to `k`.

use std::collections::HashMap;

use crate::digraph::{invert_family, Digraph, InversionFamily, TotalOrder, VertexSet};
use crate::error::{Error, Result};
use crate::f2::{dot_u64, BitVec};

/// Triple codes pack three vectors into one word.
pub const MAX_VECTOR_LEN: usize = 21;

/// Whether inverting an ascending transitive triple with these vectors
/// produces a cyclic triangle: `a·b = b·c` and `a·b ≠ a·c`.
pub fn is_bad_triple(a: &BitVec, b: &BitVec, c: &BitVec) -> Result<bool> {
    if a.len() != b.len() || b.len() != c.len() {
        return Err(Error::LengthMismatch(a.len(), if a.len() != b.len() { b.len() } else { c.len() }));
    }
    let ab = crate::f2::dot(a, b)?;
    let bc = crate::f2::dot(b, c)?;
    let ac = crate::f2::dot(a, c)?;
    Ok(ab == bc && ab != ac)
}

#[inline]
fn bad(a: u64, b: u64, c: u64) -> bool {
    let ab = dot_u64(a, b);
    ab == dot_u64(b, c) && ab != dot_u64(a, c)
}

/// Input to [`compress`]: a tournament, a decycling family `X` of size `s`,
/// the order of `T0 ⊕ X`, and the target size `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressionInput {
    t0: Digraph,
    x: InversionFamily,
    order: TotalOrder,
    k: usize,
}

impl CompressionInput {
    /// Validates the input. If `order` is given it must be the order of the
    /// transitive tournament `T0 ⊕ X`; otherwise that order is computed.
    pub fn new(t0: Digraph, x: InversionFamily, order: Option<TotalOrder>, k: usize) -> Result<Self> {
        if !t0.is_tournament() {
            return Err(Error::NotTournament);
        }
        let t = invert_family(&t0, &x)?;
        let actual = t.topological_order().ok_or(Error::NotDecycling)?;
        if x.len() + k > MAX_VECTOR_LEN {
            return Err(Error::guard("s+k", x.len() + k, MAX_VECTOR_LEN));
        }
        let order = match order {
            Some(o) if o != actual => {
                return Err(Error::InvalidOrder(
                    "order is not the order of the inverted tournament".into(),
                ))
            }
            Some(o) => o,
            None => actual,
        };
        Ok(CompressionInput { t0, x, order, k })
    }

    pub fn t0(&self) -> &Digraph {
        &self.t0
    }

    pub fn family(&self) -> &InversionFamily {
        &self.x
    }

    pub fn order(&self) -> &TotalOrder {
        &self.order
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn s(&self) -> usize {
        self.x.len()
    }
}

/// Per-vertex bookkeeping of one [`compress`] run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompressionStats {
    /// Live states after each processed vertex.
    pub live: Vec<usize>,
    /// `(state, branch)` pairs examined at each vertex.
    pub transitions: Vec<usize>,
}

impl CompressionStats {
    pub fn max_live(&self) -> usize {
        self.live.iter().copied().max().unwrap_or(0)
    }
}

/// The triples of vectors realised by a prefix, with one realising choice of
/// `Y` coordinates. Pairs and single vectors of the prefix are cached because
/// transitions need them; they are determined by the triples once the prefix
/// has three vertices.
#[derive(Clone, Debug)]
struct TripleSet {
    triples: Vec<u64>,
    pairs: Vec<u64>,
    vectors: Vec<u64>,
    rep: Vec<u64>,
}

fn insert_sorted(v: &mut Vec<u64>, x: u64) {
    if let Err(i) = v.binary_search(&x) {
        v.insert(i, x);
    }
}

fn merge_sorted(a: &[u64], mut b: Vec<u64>) -> Vec<u64> {
    b.sort_unstable();
    b.dedup();
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl TripleSet {
    /// `S(B′, w)`, or `None` if a new triple is bad.
    fn extend(&self, w: u64, y: u64, len: usize) -> Option<TripleSet> {
        let mask = (1u64 << len) - 1;
        let mut new_triples = Vec::with_capacity(self.pairs.len());
        for &p in &self.pairs {
            let (a, b) = (p >> len, p & mask);
            if bad(a, b, w) {
                return None;
            }
            new_triples.push((p << len) | w);
        }
        let new_pairs = self.vectors.iter().map(|&v| (v << len) | w).collect();
        let mut vectors = self.vectors.clone();
        insert_sorted(&mut vectors, w);
        let mut rep = Vec::with_capacity(self.rep.len() + 1);
        rep.extend_from_slice(&self.rep);
        rep.push(y);
        Some(TripleSet {
            triples: merge_sorted(&self.triples, new_triples),
            pairs: merge_sorted(&self.pairs, new_pairs),
            vectors,
            rep,
        })
    }
}

/// Runs the dynamic programme and also reports state counts.
pub fn compress_with_stats(input: &CompressionInput) -> (Option<(InversionFamily, TotalOrder)>, CompressionStats) {
    let s = input.s();
    let k = input.k;
    let len = s + k;
    let order = input.order.as_slice();
    let n = order.len();

    let x_bits: Vec<u64> = order
        .iter()
        .map(|&v| {
            input
                .x
                .sets()
                .iter()
                .enumerate()
                .filter(|(_, set)| set.contains(v))
                .fold(0u64, |m, (i, _)| m | 1 << i)
        })
        .collect();

    let mut stats = CompressionStats::default();
    let mut states = vec![TripleSet {
        triples: Vec::new(),
        pairs: Vec::new(),
        vectors: Vec::new(),
        rep: Vec::new(),
    }];
    for (pos, &fixed) in x_bits.iter().enumerate() {
        let mut next: Vec<TripleSet> = Vec::new();
        let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut examined = 0;
        // States are kept sorted by representative and branches are tried in
        // increasing order, so the first state reaching a key has the
        // lexicographically smallest representative.
        for state in &states {
            for y in 0..1u64 << k {
                examined += 1;
                let w = fixed | (y << s);
                let Some(ext) = state.extend(w, y, len) else {
                    continue;
                };
                if pos + 1 < 3 {
                    // too short to have triples: every branch is its own state
                    next.push(ext);
                } else if !index.contains_key(&ext.triples) {
                    index.insert(ext.triples.clone(), next.len());
                    next.push(ext);
                }
            }
        }
        debug_assert!(examined <= states.len() << k);
        stats.transitions.push(examined);
        stats.live.push(next.len());
        states = next;
        if states.is_empty() {
            return (None, stats);
        }
    }

    let best = &states[0];
    let mut y_of = vec![0u64; n];
    let mut full = vec![0u64; n];
    for (pos, &v) in order.iter().enumerate() {
        y_of[v] = best.rep[pos];
        full[v] = x_bits[pos] | (best.rep[pos] << s);
    }
    let family = InversionFamily::new(
        (0..k)
            .map(|i| (0..n).filter(|&v| (y_of[v] >> i) & 1 == 1).collect::<VertexSet>())
            .collect(),
    );
    let rank = input.order.positions();
    let merged = merge_atoms(n, &full, |a, b| rank[a] < rank[b]);
    let new_order = TotalOrder::new(merged).expect("atom merge yields a permutation");
    (Some((family, new_order)), stats)
}

/// Shrinks a decycling family of size `s` to one of size `k`, returning the
/// new family (exactly `k` sets) and the order of `T0 ⊕ Y`, or `None` if
/// `T0` is not `k`-invertible. Among all solutions the one whose `Y`
/// coordinates, read along the input order, are lexicographically smallest
/// is returned.
pub fn compress(input: &CompressionInput) -> Option<(InversionFamily, TotalOrder)> {
    compress_with_stats(input).0
}

/// Order of the inverted tournament from per-vertex vectors and a base
/// comparison `before(a, b)` that is a total order on every atom.
///
/// Each atom keeps the base order, reversed if its vector has self-dot 1;
/// atom fronts are then merged by comparing flipped base orientations.
fn merge_atoms(n: usize, vecs: &[u64], before: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    let mut by_vec: Vec<(u64, Vec<usize>)> = Vec::new();
    let mut slot: HashMap<u64, usize> = HashMap::new();
    for (v, &x) in vecs.iter().enumerate().take(n) {
        let i = *slot.entry(x).or_insert_with(|| {
            by_vec.push((x, Vec::new()));
            by_vec.len() - 1
        });
        by_vec[i].1.push(v);
    }
    let mut atoms: Vec<Vec<usize>> = by_vec
        .into_iter()
        .map(|(c, mut members)| {
            members.sort_by(|&a, &b| {
                if a == b {
                    std::cmp::Ordering::Equal
                } else if before(a, b) {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Greater
                }
            });
            // fronts are popped from the end; a self-dot 1 atom runs backwards
            if !dot_u64(c, c) {
                members.reverse();
            }
            members
        })
        .collect();
    let precedes = |a: usize, b: usize| before(a, b) ^ dot_u64(vecs[a], vecs[b]);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let mut best: Option<usize> = None;
        for (i, atom) in atoms.iter().enumerate() {
            if let Some(&front) = atom.last() {
                match best {
                    Some(b) if !precedes(front, *atoms[b].last().unwrap()) => {}
                    _ => best = Some(i),
                }
            }
        }
        out.push(atoms[best.unwrap()].pop().unwrap());
    }
    out
}

/// The order of the transitive tournament `T0 ⊕ F`, assembled atom by atom.
///
/// Inside an atom every edge flips or none does, so `T0` itself is transitive
/// there and its order is read off from in-atom out-degrees.
pub fn reconstruct_order(t0: &Digraph, family: &InversionFamily) -> Result<TotalOrder> {
    if !t0.is_tournament() {
        return Err(Error::NotTournament);
    }
    family.validate(t0.n())?;
    if family.len() > 64 {
        return Err(Error::guard("family size", family.len(), 64));
    }
    let n = t0.n();
    let vecs: Vec<u64> = (0..n)
        .map(|v| {
            family
                .sets()
                .iter()
                .enumerate()
                .filter(|(_, s)| s.contains(v))
                .fold(0u64, |m, (i, _)| m | 1 << i)
        })
        .collect();
    let order = merge_atoms(n, &vecs, |a, b| t0.has_edge(a, b));
    let order = TotalOrder::new(order)?;
    let inverted = invert_family(t0, family)?;
    let perm = order.as_slice();
    for i in 0..n {
        for j in i + 1..n {
            if !inverted.has_edge(perm[i], perm[j]) {
                return Err(Error::NotDecycling);
            }
        }
    }
    Ok(order)
}

/// A decycling family with the topological order of the inverted tournament.
pub type Solution = (InversionFamily, TotalOrder);

/// Decides whether a tournament is `k`-invertible by iterative compression
/// over the prefixes `{0}, {0, 1}, ...` in index order. Returns a decycling
/// family of exactly `k` sets (some possibly empty) and the order of the
/// inverted tournament.
pub fn fpt_inversion(t: &Digraph, k: usize) -> Result<Option<Solution>> {
    fpt_inversion_with_stats(t, k).map(|(r, _)| r)
}

/// [`fpt_inversion`] together with the statistics of every compression.
pub fn fpt_inversion_with_stats(
    t: &Digraph,
    k: usize,
) -> Result<(Option<Solution>, Vec<CompressionStats>)> {
    if !t.is_tournament() {
        return Err(Error::NotTournament);
    }
    if 2 * k + 2 > MAX_VECTOR_LEN {
        return Err(Error::guard("s+k", 2 * k + 2, MAX_VECTOR_LEN));
    }
    let n = t.n();
    let mut all_stats = Vec::new();
    let mut family = InversionFamily::empty_sets(k);
    let mut order: Vec<usize> = Vec::new();
    for m in 1..=n {
        let prefix: Vec<usize> = (0..m).collect();
        let tm = t.induced_subgraph(&prefix)?;
        if m <= 2 {
            // two vertices are always in transitive position
            order = tm.topological_order().expect("a tournament on two vertices").into_vec();
            continue;
        }
        let v = m - 1;
        let extended = crate::digraph::solve_vertex(&tm, v, &family)?;
        order.push(v);
        let input = CompressionInput::new(tm, extended, Some(TotalOrder::new(order.clone())?), k)?;
        let (result, stats) = compress_with_stats(&input);
        all_stats.push(stats);
        match result {
            Some((f, o)) => {
                family = f;
                order = o.into_vec();
            }
            None => return Ok((None, all_stats)),
        }
    }
    Ok((Some((family, TotalOrder::new(order)?)), all_stats))
}
