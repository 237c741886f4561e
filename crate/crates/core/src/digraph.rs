//! Oriented graphs as dense bit adjacency matrices, together with inversion of
//! vertex sets, acyclicity testing, characteristic vectors and atoms.
//!
//! Vertices are `0..n`. Row `u` of the adjacency matrix holds the
//! out-neighbourhood of `u`. Loops and digons are rejected on construction, so
//! every `Digraph` value is an oriented graph.
//!
//! Inverting a family `X_1, ..., X_k` reverses the edge between `u` and `v`
//! exactly when the characteristic vectors of `u` and `v` have odd dot
//! product; non-edges stay non-edges.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::f2::BitVec;
use crate::text;

const WORD: usize = 64;

/// A set of vertices, stored as a growable bitset.
///
/// Trailing zero words are trimmed so that equal sets compare equal
/// regardless of how they were built.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct VertexSet {
    words: Vec<u64>,
}

impl VertexSet {
    pub fn new() -> Self {
        VertexSet::default()
    }

    pub fn from_mask(mask: u64) -> Self {
        let mut s = VertexSet { words: vec![mask] };
        s.trim();
        s
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn insert(&mut self, v: usize) {
        let w = v / WORD;
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << (v % WORD);
    }

    pub fn remove(&mut self, v: usize) {
        if let Some(w) = self.words.get_mut(v / WORD) {
            *w &= !(1 << (v % WORD));
        }
        self.trim();
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.words
            .get(v / WORD)
            .is_some_and(|w| (w >> (v % WORD)) & 1 == 1)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Largest member, if any.
    pub fn max(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * WORD + 63 - last.leading_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let len = self.words.len().max(other.words.len());
        let mut words = vec![0; len];
        for (i, w) in words.iter_mut().enumerate() {
            *w = self.words.get(i).copied().unwrap_or(0) | other.words.get(i).copied().unwrap_or(0);
        }
        VertexSet { words }
    }

    /// The members as a single word; panics if a member is ≥ 64.
    pub fn to_mask(&self) -> u64 {
        assert!(self.words.len() <= 1, "vertex set does not fit in one word");
        self.words.first().copied().unwrap_or(0)
    }

    pub(crate) fn word(&self, i: usize) -> u64 {
        self.words.get(i).copied().unwrap_or(0)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::new();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// An ordered list of vertex sets to invert.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct InversionFamily {
    sets: Vec<VertexSet>,
}

impl InversionFamily {
    pub fn new(sets: Vec<VertexSet>) -> Self {
        InversionFamily { sets }
    }

    pub fn empty() -> Self {
        InversionFamily::default()
    }

    /// `k` empty sets.
    pub fn empty_sets(k: usize) -> Self {
        InversionFamily {
            sets: vec![VertexSet::new(); k],
        }
    }

    pub fn from_lists(lists: &[&[usize]]) -> Self {
        InversionFamily {
            sets: lists.iter().map(|l| l.iter().copied().collect()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }

    pub fn push(&mut self, set: VertexSet) {
        self.sets.push(set);
    }

    pub fn concat(&self, other: &InversionFamily) -> InversionFamily {
        let mut sets = self.sets.clone();
        sets.extend(other.sets.iter().cloned());
        InversionFamily { sets }
    }

    /// Number of nonempty sets.
    pub fn nonempty_len(&self) -> usize {
        self.sets.iter().filter(|s| !s.is_empty()).count()
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        for s in &self.sets {
            if let Some(m) = s.max() {
                if m >= n {
                    return Err(Error::VertexOutOfRange { vertex: m, n });
                }
            }
        }
        Ok(())
    }

    /// Family text format: `k`, then `k` lines of space-separated vertex
    /// indices, ascending. A blank line is the empty set.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.sets.len());
        for set in &self.sets {
            let items: Vec<String> = set.iter().map(|v| v.to_string()).collect();
            s.push_str(&items.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn parse(input: &str) -> Result<Self> {
        let mut lines = text::data_lines(input).skip_while(|l| l.text.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::parse(1, 1, "missing family size"))?;
        let k = text::parse_count(&header, "a family size")?;
        let mut sets = Vec::with_capacity(k);
        let mut last = header.number;
        for _ in 0..k {
            let Some(line) = lines.next() else {
                // a final empty set may lack its blank line
                if input.ends_with('\n') && sets.len() + 1 == k {
                    sets.push(VertexSet::new());
                    break;
                }
                return Err(Error::parse(last + 1, 1, format!("expected {k} sets, found {}", sets.len())));
            };
            last = line.number;
            let mut set = VertexSet::new();
            let mut column = 1;
            for tok in line.text.split(' ') {
                if !tok.is_empty() {
                    let v: usize = tok.parse().map_err(|_| {
                        Error::parse(line.number, column, format!("expected a vertex index, found {tok:?}"))
                    })?;
                    set.insert(v);
                }
                column += tok.len() + 1;
            }
            sets.push(set);
        }
        if let Some(extra) = lines.find(|l| !l.text.trim().is_empty()) {
            return Err(Error::parse(extra.number, 1, "unexpected data after the last set"));
        }
        Ok(InversionFamily { sets })
    }
}

impl fmt::Debug for InversionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.sets.iter()).finish()
    }
}

/// A total order on `0..n`, least element first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TotalOrder {
    perm: Vec<usize>,
}

impl TotalOrder {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &v in &perm {
            if v >= n || seen[v] {
                return Err(Error::InvalidOrder(format!("{perm:?} is not a permutation of 0..{n}")));
            }
            seen[v] = true;
        }
        Ok(TotalOrder { perm })
    }

    pub fn identity(n: usize) -> Self {
        TotalOrder {
            perm: (0..n).collect(),
        }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// `positions()[v]` is the rank of `v` in the order.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.perm.len()];
        for (i, &v) in self.perm.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.perm
    }
}

/// A loopless, digon-free directed graph on `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    stride: usize,
    out: Vec<u64>,
}

impl Digraph {
    /// The edgeless digraph on `n` vertices.
    pub fn new(n: usize) -> Self {
        let stride = n.div_ceil(WORD).max(1);
        Digraph {
            n,
            stride,
            out: vec![0; n * stride],
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut d = Digraph::new(n);
        for (u, v) in edges {
            d.add_edge(u, v)?;
        }
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(())
    }

    #[inline]
    fn row(&self, u: usize) -> &[u64] {
        &self.out[u * self.stride..(u + 1) * self.stride]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && (self.out[u * self.stride + v / WORD] >> (v % WORD)) & 1 == 1
    }

    /// Adds `u → v`. Rejects loops, digons and out-of-range vertices; adding an
    /// existing edge is a no-op.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::Loop(u));
        }
        if self.has_edge(v, u) {
            return Err(Error::Digon(u, v));
        }
        self.set_bit(u, v, true);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        if u < self.n && v < self.n {
            self.set_bit(u, v, false);
        }
    }

    /// Reverses the edge between `u` and `v` if there is one.
    pub fn reverse_edge(&mut self, u: usize, v: usize) {
        if self.has_edge(u, v) {
            self.set_bit(u, v, false);
            self.set_bit(v, u, true);
        } else if self.has_edge(v, u) {
            self.set_bit(v, u, false);
            self.set_bit(u, v, true);
        }
    }

    #[inline]
    fn set_bit(&mut self, u: usize, v: usize, value: bool) {
        let w = &mut self.out[u * self.stride + v / WORD];
        if value {
            *w |= 1 << (v % WORD);
        } else {
            *w &= !(1 << (v % WORD));
        }
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Edges `(u, v)` in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.out_neighbours(u).iter().map(move |v| (u, v)).collect::<Vec<_>>())
    }

    pub fn out_neighbours(&self, u: usize) -> VertexSet {
        let mut s = VertexSet {
            words: self.row(u).to_vec(),
        };
        s.trim();
        s
    }

    pub fn in_neighbours(&self, v: usize) -> VertexSet {
        (0..self.n).filter(|&u| self.has_edge(u, v)).collect()
    }

    /// Out-neighbourhood as a single word; only for `n ≤ 64`.
    #[inline]
    pub fn out_mask(&self, u: usize) -> u64 {
        debug_assert!(self.n <= WORD);
        self.out[u * self.stride]
    }

    /// In-neighbourhood as a single word; only for `n ≤ 64`.
    pub fn in_mask(&self, v: usize) -> u64 {
        debug_assert!(self.n <= WORD);
        (0..self.n)
            .filter(|&u| self.has_edge(u, v))
            .fold(0, |m, u| m | 1 << u)
    }

    fn transpose_rows(&self) -> Vec<u64> {
        let mut t = vec![0u64; self.n * self.stride];
        for u in 0..self.n {
            for v in self.out_neighbours(u).iter() {
                t[v * self.stride + u / WORD] |= 1 << (u % WORD);
            }
        }
        t
    }

    pub fn is_tournament(&self) -> bool {
        (0..self.n).all(|u| (u + 1..self.n).all(|v| self.has_edge(u, v) || self.has_edge(v, u)))
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    pub fn is_transitive(&self) -> bool {
        self.is_tournament() && self.is_acyclic()
    }

    /// Kahn-style peeling: repeatedly remove the smallest vertex with no
    /// in-edge from the remaining vertices. `None` if a cycle remains.
    pub fn topological_order(&self) -> Option<TotalOrder> {
        let t = self.transpose_rows();
        let mut remaining = vec![0u64; self.stride];
        for v in 0..self.n {
            remaining[v / WORD] |= 1 << (v % WORD);
        }
        let mut order = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            let source = (0..self.n).find(|&v| {
                (remaining[v / WORD] >> (v % WORD)) & 1 == 1
                    && t[v * self.stride..(v + 1) * self.stride]
                        .iter()
                        .zip(&remaining)
                        .all(|(a, r)| a & r == 0)
            })?;
            remaining[source / WORD] &= !(1 << (source % WORD));
            order.push(source);
        }
        Some(TotalOrder { perm: order })
    }

    /// The subdigraph induced on `vertices`, relabelled so that
    /// `vertices[i]` becomes `i`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Digraph> {
        let mut d = Digraph::new(vertices.len());
        for &v in vertices {
            self.check_vertex(v)?;
        }
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate() {
                if self.has_edge(u, v) {
                    d.set_bit(i, j, true);
                }
            }
        }
        Ok(d)
    }

    /// `D − {v}` with the remaining vertices relabelled in increasing order.
    pub fn remove_vertex(&self, v: usize) -> Result<Digraph> {
        self.check_vertex(v)?;
        let keep: Vec<usize> = (0..self.n).filter(|&u| u != v).collect();
        self.induced_subgraph(&keep)
    }

    /// Same vertex set with every edge at `v` deleted.
    pub fn isolate(&self, v: usize) -> Digraph {
        let mut d = self.clone();
        for u in 0..self.n {
            d.set_bit(u, v, false);
            d.set_bit(v, u, false);
        }
        d
    }

    /// Every edge reversed.
    pub fn reversed(&self) -> Digraph {
        Digraph {
            n: self.n,
            stride: self.stride,
            out: self.transpose_rows(),
        }
    }

    /// Number of directed triangles through each vertex.
    pub fn triangle_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n];
        for a in 0..self.n {
            for b in self.out_neighbours(a).iter() {
                for c in self.out_neighbours(b).iter() {
                    if self.has_edge(c, a) && a < b && a < c {
                        counts[a] += 1;
                        counts[b] += 1;
                        counts[c] += 1;
                    }
                }
            }
        }
        counts
    }

    /// Digraph text format: `n`, then `n` rows of `n` characters; entry
    /// `(i, j)` is `1` iff `i → j`.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for u in 0..self.n {
            for v in 0..self.n {
                s.push(if self.has_edge(u, v) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    pub fn parse(input: &str) -> Result<Self> {
        let rows = text::parse_square_bits(input)?;
        let n = rows.len();
        let mut d = Digraph::new(n);
        // Line numbers for diagnostics: recover them by re-scanning.
        let row_lines: Vec<usize> = text::data_lines(input)
            .filter(|l| !l.text.trim().is_empty())
            .skip(1)
            .map(|l| l.number)
            .collect();
        for (u, row) in rows.iter().enumerate() {
            for (v, &bit) in row.iter().enumerate() {
                if !bit {
                    continue;
                }
                if u == v {
                    return Err(Error::parse(row_lines[u], v + 1, "diagonal entry must be 0"));
                }
                if rows[v][u] {
                    return Err(Error::parse(
                        row_lines[u.max(v)],
                        u.min(v) + 1,
                        format!("digon between {u} and {v}"),
                    ));
                }
                d.set_bit(u, v, true);
            }
        }
        Ok(d)
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digraph(n={}, edges={:?})", self.n, self.edges().collect::<Vec<_>>())
    }
}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Digraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Digraph::parse(s)
    }
}

/// Parity matrix rows: bit `v` of row `u` is set iff `u` and `v` lie together
/// in an odd number of sets of `family`.
fn flip_rows(n: usize, stride: usize, family: &InversionFamily) -> Vec<u64> {
    let mut flips = vec![0u64; n * stride];
    for set in family.sets() {
        let words: Vec<u64> = (0..stride).map(|i| set.word(i)).collect();
        for u in set.iter() {
            for (f, w) in flips[u * stride..(u + 1) * stride].iter_mut().zip(&words) {
                *f ^= w;
            }
        }
    }
    flips
}

/// Inverts every set of `family` in `d`.
///
/// The edge between `u` and `v` ends up reversed iff their characteristic
/// vectors have odd dot product, so the result does not depend on the order
/// of the sets.
pub fn invert_family(d: &Digraph, family: &InversionFamily) -> Result<Digraph> {
    family.validate(d.n)?;
    let flips = flip_rows(d.n, d.stride, family);
    let inn = d.transpose_rows();
    let mut out = d.clone();
    for i in 0..out.out.len() {
        let f = flips[i];
        out.out[i] = (d.out[i] & !f) | (inn[i] & f);
    }
    Ok(out)
}

/// `(true, order)` with the smallest-index-first topological order, or
/// `(false, None)` if `d` has a directed cycle.
pub fn is_acyclic(d: &Digraph) -> (bool, Option<TotalOrder>) {
    match d.topological_order() {
        Some(o) => (true, Some(o)),
        None => (false, None),
    }
}

/// Bit `i` is set iff `v ∈ X_i`.
pub fn charvec(v: usize, family: &InversionFamily) -> BitVec {
    let mut bits = BitVec::zeros(family.len());
    for (i, set) in family.sets().iter().enumerate() {
        if set.contains(v) {
            bits.set(i, true);
        }
    }
    bits
}

/// Classes of vertices with equal characteristic vectors.
pub fn atoms(d: &Digraph, family: &InversionFamily) -> BTreeMap<BitVec, VertexSet> {
    let mut classes: BTreeMap<BitVec, VertexSet> = BTreeMap::new();
    for v in 0..d.n {
        classes.entry(charvec(v, family)).or_default().insert(v);
    }
    classes
}

/// Whether inverting `family` leaves `d` acyclic.
pub fn is_decycling(d: &Digraph, family: &InversionFamily) -> Result<bool> {
    Ok(invert_family(d, family)?.is_acyclic())
}

/// Extends a decycling family of `D − {v}` to one of `D` by appending
/// `A ∪ {v}` and `A`, where `A` is the out-neighbourhood of `v`. Afterwards
/// `v` is a sink, so the result decycles `D`.
///
/// `family` uses the labels of `d` and must not contain `v`.
pub fn solve_vertex(d: &Digraph, v: usize, family: &InversionFamily) -> Result<InversionFamily> {
    d.check_vertex(v)?;
    if family.sets().iter().any(|s| s.contains(v)) {
        return Err(Error::InvalidArgument(format!("family for D - {{{v}}} contains {v}")));
    }
    if !is_decycling(&d.isolate(v), family)? {
        return Err(Error::NotDecycling);
    }
    let a = d.out_neighbours(v);
    let mut with_v = a.clone();
    with_v.insert(v);
    let mut out = family.clone();
    out.push(with_v);
    out.push(a);
    Ok(out)
}

/// A tournament containing `d` on the same vertices for which `family` is
/// still decycling: invert, complete along the topological order, invert back.
pub fn extend_to_tournament(d: &Digraph, family: &InversionFamily) -> Result<Digraph> {
    let inverted = invert_family(d, family)?;
    let order = inverted.topological_order().ok_or(Error::NotDecycling)?;
    let perm = order.as_slice();
    let mut complete = inverted.clone();
    for (i, &u) in perm.iter().enumerate() {
        for &v in &perm[i + 1..] {
            if !complete.has_edge(v, u) {
                complete.set_bit(u, v, true);
            }
        }
    }
    invert_family(&complete, family)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3() -> Digraph {
        Digraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn transitive(n: usize) -> Digraph {
        Digraph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }

    #[test]
    fn rejects_loops_and_digons() {
        let mut d = Digraph::new(3);
        assert_eq!(d.add_edge(1, 1), Err(Error::Loop(1)));
        d.add_edge(0, 1).unwrap();
        assert_eq!(d.add_edge(1, 0), Err(Error::Digon(1, 0)));
        assert_eq!(d.add_edge(0, 3), Err(Error::VertexOutOfRange { vertex: 3, n: 3 }));
    }

    #[test]
    fn invert_single_set_on_c3() {
        let out = invert_family(&c3(), &InversionFamily::from_lists(&[&[0, 1]])).unwrap();
        let expected = Digraph::from_edges(3, [(1, 0), (1, 2), (2, 0)]).unwrap();
        assert_eq!(out, expected);
    }

    #[test]
    fn invert_empty_family_is_identity() {
        assert_eq!(invert_family(&c3(), &InversionFamily::empty()).unwrap(), c3());
    }

    #[test]
    fn invert_rejects_out_of_range() {
        let f = InversionFamily::from_lists(&[&[0, 5]]);
        assert_eq!(invert_family(&c3(), &f), Err(Error::VertexOutOfRange { vertex: 5, n: 3 }));
    }

    #[test]
    fn non_edges_never_gain_edges() {
        let d = Digraph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let out = invert_family(&d, &InversionFamily::from_lists(&[&[0, 1, 2, 3]])).unwrap();
        assert_eq!(out, Digraph::from_edges(4, [(1, 0), (3, 2)]).unwrap());
    }

    #[test]
    fn acyclicity_examples() {
        assert_eq!(is_acyclic(&transitive(5)), (true, Some(TotalOrder::identity(5))));
        assert_eq!(is_acyclic(&c3()), (false, None));
        assert_eq!(is_acyclic(&Digraph::new(0)), (true, Some(TotalOrder::identity(0))));
    }

    #[test]
    fn topological_ties_break_by_index() {
        let d = Digraph::from_edges(4, [(3, 0), (2, 1)]).unwrap();
        assert_eq!(d.topological_order().unwrap().as_slice(), &[2, 1, 3, 0]);
    }

    #[test]
    fn charvec_examples() {
        let f = InversionFamily::from_lists(&[&[0, 1], &[1, 2]]);
        assert_eq!(charvec(1, &f).to_string(), "11");
        assert_eq!(charvec(3, &f).to_string(), "00");
        assert_eq!(charvec(0, &f).to_string(), "10");
    }

    #[test]
    fn atom_examples() {
        let f = InversionFamily::from_lists(&[&[0, 1], &[1, 2]]);
        let a = atoms(&Digraph::new(3), &f);
        let listed: Vec<(String, Vec<usize>)> = a.iter().map(|(k, v)| (k.to_string(), v.to_vec())).collect();
        assert_eq!(listed.len(), 3);
        assert!(listed.contains(&("10".into(), vec![0])));
        assert!(listed.contains(&("11".into(), vec![1])));
        assert!(listed.contains(&("01".into(), vec![2])));

        let single = atoms(&Digraph::new(4), &InversionFamily::empty());
        assert_eq!(single.len(), 1);
        assert_eq!(single.values().next().unwrap().to_vec(), vec![0, 1, 2, 3]);

        let twice = atoms(&Digraph::new(3), &InversionFamily::from_lists(&[&[0, 1, 2], &[0, 1, 2]]));
        assert_eq!(twice.len(), 1);
        assert_eq!(twice.keys().next().unwrap().to_string(), "11");
    }

    #[test]
    fn decycling_examples() {
        assert!(is_decycling(&c3(), &InversionFamily::from_lists(&[&[0, 1]])).unwrap());
        assert!(!is_decycling(&c3(), &InversionFamily::empty()).unwrap());
    }

    #[test]
    fn solve_vertex_examples() {
        let single = Digraph::new(1);
        let f = solve_vertex(&single, 0, &InversionFamily::empty()).unwrap();
        assert_eq!(f, InversionFamily::from_lists(&[&[0], &[]]));
        assert!(is_decycling(&single, &f).unwrap());

        let f = solve_vertex(&c3(), 2, &InversionFamily::empty()).unwrap();
        assert_eq!(f, InversionFamily::from_lists(&[&[0, 2], &[0]]));
        // the flipped digraph: 0→1 stays, 1→2 stays, 2→0 becomes 0→2
        let flipped = invert_family(&c3(), &f).unwrap();
        assert_eq!(flipped, Digraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap());
        assert!(flipped.is_acyclic());
    }

    #[test]
    fn solve_vertex_requires_decycling_input() {
        // D − {3} contains the cycle 0→1→2→0
        let mut d = c3();
        let mut big = Digraph::new(4);
        for (u, v) in d.edges().collect::<Vec<_>>() {
            big.add_edge(u, v).unwrap();
        }
        big.add_edge(3, 0).unwrap();
        assert_eq!(solve_vertex(&big, 3, &InversionFamily::empty()), Err(Error::NotDecycling));
        d.remove_edge(2, 0);
        assert!(solve_vertex(&d, 2, &InversionFamily::from_lists(&[&[2]])).is_err());
    }

    #[test]
    fn extend_examples() {
        let partial = Digraph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let t = extend_to_tournament(&partial, &InversionFamily::empty()).unwrap();
        assert!(t.is_transitive());
        assert!(t.has_edge(0, 1) && t.has_edge(2, 3));

        let f = InversionFamily::from_lists(&[&[0, 1]]);
        assert_eq!(extend_to_tournament(&c3(), &f).unwrap(), c3());
        assert_eq!(
            extend_to_tournament(&c3(), &InversionFamily::empty()),
            Err(Error::NotDecycling)
        );
    }

    #[test]
    fn digraph_text_format() {
        let d = Digraph::parse("# c3\n3\n010\n001\n100\n").unwrap();
        assert_eq!(d, c3());
        assert_eq!(Digraph::parse(&d.to_text()).unwrap(), d);
        match Digraph::parse("2\n11\n00\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 1)),
            other => panic!("{other:?}"),
        }
        match Digraph::parse("2\n01\n10\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(Digraph::parse("3\n010\n001\n").is_err());
        assert!(Digraph::parse("x\n").is_err());
    }

    #[test]
    fn family_text_format() {
        let f = InversionFamily::from_lists(&[&[2, 0], &[], &[5]]);
        let text = f.to_text();
        assert_eq!(text, "3\n0 2\n\n5\n");
        assert_eq!(InversionFamily::parse(&text).unwrap(), f);
        assert_eq!(InversionFamily::parse("0\n").unwrap(), InversionFamily::empty());
        assert_eq!(
            InversionFamily::parse("2\n1 2\n").unwrap(),
            InversionFamily::from_lists(&[&[1, 2], &[]])
        );
        match InversionFamily::parse("1\n1 x\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn vertex_set_basics() {
        let mut s: VertexSet = [3, 70, 1].into_iter().collect();
        assert_eq!(s.to_vec(), vec![1, 3, 70]);
        assert_eq!(s.max(), Some(70));
        s.remove(70);
        assert_eq!(s, [1, 3].into_iter().collect());
        assert_eq!(s.to_mask(), 0b1010);
    }

    #[test]
    fn large_digraph_inversion() {
        let n = 130;
        let t = transitive(n);
        let all: VertexSet = (0..n).collect();
        let r = invert_family(&t, &InversionFamily::new(vec![all])).unwrap();
        assert_eq!(r, t.reversed());
        assert_eq!(r.topological_order().unwrap().as_slice(), (0..n).rev().collect::<Vec<_>>().as_slice());
    }
}
