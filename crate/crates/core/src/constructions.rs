//! Named digraphs and operators, and seeded random generators.
//!
//! Constructions that are usually written on `[n] = {1, ..., n}` are shifted
//! down by one: label `i` becomes vertex `i - 1`.
//!
//! Random generators draw from a splitmix64 stream. Each 64-bit output word is
//! consumed one bit at a time, lowest bit first, and pairs `{i, j}` with
//! `i < j` are visited in row-major order, so a seed determines the output on
//! every platform.

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::f2::{SymMatrixBuilder, SymMatrixF2};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

/// Single bits from a splitmix64 stream, lowest bit of each word first.
#[derive(Clone, Debug)]
pub struct BitStream {
    rng: SplitMix64,
    word: u64,
    left: u32,
}

impl BitStream {
    pub fn new(seed: u64) -> Self {
        BitStream {
            rng: SplitMix64::seed_from_u64(seed),
            word: 0,
            left: 0,
        }
    }

    pub fn next_bit(&mut self) -> bool {
        if self.left == 0 {
            self.word = self.rng.next_u64();
            self.left = 64;
        }
        let b = self.word & 1 == 1;
        self.word >>= 1;
        self.left -= 1;
        b
    }
}

/// The directed triangle `0 → 1 → 2 → 0`.
pub fn c3() -> Digraph {
    Digraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).expect("valid edges")
}

/// `i → j` for all `i < j`.
pub fn transitive(n: usize) -> Digraph {
    Digraph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).expect("valid edges")
}

/// Disjoint copies of the factors, numbered consecutively, plus every edge
/// from factor `i` to factor `j` for `i < j`.
pub fn kjoin(factors: &[Digraph]) -> Result<Digraph> {
    if factors.is_empty() {
        return Err(Error::InvalidArgument("k-join needs at least one factor".into()));
    }
    let n: usize = factors.iter().map(Digraph::n).sum();
    let mut d = Digraph::new(n);
    let mut offset = 0;
    for (i, f) in factors.iter().enumerate() {
        for (u, v) in f.edges() {
            d.add_edge(offset + u, offset + v)?;
        }
        let later: usize = factors[i + 1..].iter().map(Digraph::n).sum();
        for u in offset..offset + f.n() {
            for v in offset + f.n()..offset + f.n() + later {
                d.add_edge(u, v)?;
            }
        }
        offset += f.n();
    }
    Ok(d)
}

/// `L → R`.
pub fn dijoin(left: &Digraph, right: &Digraph) -> Digraph {
    kjoin(&[left.clone(), right.clone()]).expect("two factors")
}

/// The transitive tournament on `{0, 1, 2, 3}` plus an apex `4` with edges
/// `4 → 0`, `1 → 4`, `4 → 2`, `3 → 4` (labels 1..4 shifted to 0..3).
pub fn v5() -> Digraph {
    let mut d = Digraph::new(5);
    for i in 0..4 {
        for j in i + 1..4 {
            d.add_edge(i, j).expect("valid");
        }
    }
    for (u, v) in [(4, 0), (1, 4), (4, 2), (3, 4)] {
        d.add_edge(u, v).expect("valid");
    }
    d
}

/// Blocks `A = {0, 2}`, `B = {3, 5}`, `C = {6, 8}` of the 9-vertex tournament
/// in which inverting `A ∪ B`, `A ∪ C`, `B ∪ C` yields `0 < 1 < ... < 8`.
pub const COUNTEREXAMPLE_BLOCKS: [[usize; 2]; 3] = [[0, 2], [3, 5], [6, 8]];

/// The 9-vertex tournament `R`: for `i < j`, the edge points `j → i` iff both
/// endpoints lie in `A ∪ B ∪ C` but not in the same block; otherwise `i → j`.
pub fn counterexample_r() -> Digraph {
    let block = |v: usize| COUNTEREXAMPLE_BLOCKS.iter().position(|b| b.contains(&v));
    let mut d = Digraph::new(9);
    for i in 0..9 {
        for j in i + 1..9 {
            let backwards = matches!((block(i), block(j)), (Some(a), Some(b)) if a != b);
            if backwards {
                d.add_edge(j, i).expect("valid");
            } else {
                d.add_edge(i, j).expect("valid");
            }
        }
    }
    d
}

/// The decycling family `(A ∪ B, A ∪ C, B ∪ C)` of [`counterexample_r`].
pub fn counterexample_r_family() -> crate::InversionFamily {
    let [a, b, c] = COUNTEREXAMPLE_BLOCKS;
    crate::InversionFamily::from_lists(&[
        &[a[0], a[1], b[0], b[1]],
        &[a[0], a[1], c[0], c[1]],
        &[b[0], b[1], c[0], c[1]],
    ])
}

/// `Q_n` on `0..n`: for `i < j` the edge is `i → j`, except `j → i` when `j = i + 1`.
pub fn qn(n: usize) -> Digraph {
    let mut d = Digraph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if j == i + 1 {
                d.add_edge(j, i).expect("valid");
            } else {
                d.add_edge(i, j).expect("valid");
            }
        }
    }
    d
}

/// The pairs `{1, 2}, {3, 4}, ...`: `floor((n - 1) / 2)` sets decycling [`qn`].
pub fn qn_family(n: usize) -> crate::InversionFamily {
    let sets = (0..n.saturating_sub(1) / 2)
        .map(|i| [2 * i + 1, 2 * i + 2].into_iter().collect())
        .collect();
    crate::InversionFamily::new(sets)
}

/// Vertices `u_0..u_{k-1}` are `0..k` and `v_0..v_{n-1}` are `k..k+n`.
/// Edges `v_i → v_j` for `i < j`; `u_i → v_j` iff bit `i` of `j` is 0, else
/// `v_j → u_i`. No edges among the `u_i`.
pub fn tau_construction(k: usize, n: usize) -> Result<Digraph> {
    if k >= usize::BITS as usize || !n.is_multiple_of(1usize << k) {
        return Err(Error::InvalidArgument(format!("n = {n} is not divisible by 2^{k}")));
    }
    let mut d = Digraph::new(k + n);
    for i in 0..n {
        for j in i + 1..n {
            d.add_edge(k + i, k + j)?;
        }
    }
    for i in 0..k {
        for j in 0..n {
            if (j >> i) & 1 == 0 {
                d.add_edge(i, k + j)?;
            } else {
                d.add_edge(k + j, i)?;
            }
        }
    }
    Ok(d)
}

/// The tournament whose pair `{i, j}`, `i < j`, taken in row-major order as
/// bit `p` of `bits`, is `i → j` when the bit is 1 and `j → i` otherwise.
pub fn tournament_from_bits(n: usize, bits: u64) -> Digraph {
    assert!(n * n.saturating_sub(1) / 2 <= 64, "too many pairs for one word");
    let mut d = Digraph::new(n);
    let mut p = 0;
    for i in 0..n {
        for j in i + 1..n {
            if (bits >> p) & 1 == 1 {
                d.add_edge(i, j).expect("valid");
            } else {
                d.add_edge(j, i).expect("valid");
            }
            p += 1;
        }
    }
    d
}

/// Every labelled tournament on `n` vertices, in order of [`tournament_from_bits`].
pub fn all_tournaments(n: usize) -> impl Iterator<Item = Digraph> {
    let pairs = n * n.saturating_sub(1) / 2;
    assert!(pairs < 64, "too many tournaments to enumerate");
    (0..1u64 << pairs).map(move |bits| tournament_from_bits(n, bits))
}

/// One bit per pair in row-major order; 1 means `i → j`.
pub fn random_tournament(n: usize, seed: u64) -> Digraph {
    let mut bits = BitStream::new(seed);
    let mut d = Digraph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if bits.next_bit() {
                d.add_edge(i, j).expect("valid");
            } else {
                d.add_edge(j, i).expect("valid");
            }
        }
    }
    d
}

/// Two bits per pair in row-major order: the first decides whether the pair is
/// an edge, the second its orientation (1 means `i → j`). Both bits are always
/// drawn.
pub fn random_oriented_graph(n: usize, seed: u64) -> Digraph {
    let mut bits = BitStream::new(seed);
    let mut d = Digraph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            let present = bits.next_bit();
            let forward = bits.next_bit();
            if present {
                let (u, v) = if forward { (i, j) } else { (j, i) };
                d.add_edge(u, v).expect("valid");
            }
        }
    }
    d
}

/// One bit per entry `(i, j)` with `i ≤ j`, row-major over the upper
/// triangle including the diagonal.
pub fn random_sym_matrix(n: usize, seed: u64) -> SymMatrixF2 {
    let mut bits = BitStream::new(seed);
    let mut b = SymMatrixBuilder::new(n);
    for i in 0..n {
        for j in i..n {
            if bits.next_bit() {
                b.set(i, j, true);
            }
        }
    }
    b.seal()
}

/// The symmetric matrix whose upper triangle (with diagonal, row-major) is
/// read from the low bits of `bits`.
pub fn sym_matrix_from_bits(n: usize, bits: u64) -> SymMatrixF2 {
    let mut b = SymMatrixBuilder::new(n);
    let mut p = 0;
    for i in 0..n {
        for j in i..n {
            if (bits >> p) & 1 == 1 {
                b.set(i, j, true);
            }
            p += 1;
        }
    }
    b.seal()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{invert_family, is_decycling};

    #[test]
    fn splitmix_reference_values() {
        // first outputs for seed 0 of the reference splitmix64
        let mut r = SplitMix64::seed_from_u64(0);
        assert_eq!(r.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(r.next_u64(), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn basic_shapes() {
        let c = c3();
        assert_eq!(c.edge_count(), 3);
        assert!(!c.is_acyclic());
        let t = transitive(4);
        assert_eq!(t.topological_order().unwrap().as_slice(), &[0, 1, 2, 3]);
        assert_eq!(transitive(1).n(), 1);
        assert_eq!(transitive(1).edge_count(), 0);
    }

    #[test]
    fn kjoin_counts() {
        let d = kjoin(&[c3(), c3()]).unwrap();
        assert_eq!(d.n(), 6);
        assert_eq!(d.edge_count(), 15);
        assert!(d.is_tournament());
        assert!(kjoin(&[]).is_err());
    }

    #[test]
    fn kjoin_is_associative() {
        let (a, b, c) = (c3(), v5(), transitive(2));
        let nested = kjoin(&[a.clone(), kjoin(&[b.clone(), c.clone()]).unwrap()]).unwrap();
        assert_eq!(nested, kjoin(&[a, b, c]).unwrap());
    }

    #[test]
    fn v5_shape() {
        let d = v5();
        assert_eq!(d.edge_count(), 10);
        assert!(d.is_tournament());
        assert!(d.has_edge(4, 0) && d.has_edge(1, 4) && d.has_edge(4, 2) && d.has_edge(3, 4));
    }

    #[test]
    fn counterexample_family_decycles() {
        let r = counterexample_r();
        assert!(r.is_tournament());
        let flipped = invert_family(&r, &counterexample_r_family()).unwrap();
        assert_eq!(flipped, transitive(9));
    }

    #[test]
    fn qn_small() {
        assert_eq!(qn(3), Digraph::from_edges(3, [(1, 0), (0, 2), (2, 1)]).unwrap());
        for n in 1..=12 {
            assert!(qn(n).is_tournament());
            assert_eq!(qn_family(n).len(), (n - 1) / 2);
            assert!(is_decycling(&qn(n), &qn_family(n)).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn tau_construction_shape() {
        let d = tau_construction(2, 4).unwrap();
        assert_eq!(d.n(), 6);
        // u_0 → v_j iff bit 0 of j is 0: v_0, v_2, i.e. vertices 2 and 4
        let out_u0: Vec<usize> = d.out_neighbours(0).to_vec();
        assert_eq!(out_u0, vec![2, 4]);
        let out_u1: Vec<usize> = d.out_neighbours(1).to_vec();
        assert_eq!(out_u1, vec![2, 3]);
        assert!(!d.has_edge(0, 1) && !d.has_edge(1, 0));
        assert!(tau_construction(2, 6).is_err());
        // removing the u vertices leaves an acyclic digraph
        assert!(d.isolate(0).isolate(1).is_acyclic());
    }

    #[test]
    fn random_generators_are_reproducible() {
        assert_eq!(random_tournament(9, 42), random_tournament(9, 42));
        assert_ne!(random_tournament(9, 42), random_tournament(9, 43));
        assert_eq!(random_tournament(0, 1).n(), 0);
        assert_eq!(random_sym_matrix(7, 5), random_sym_matrix(7, 5));
        assert!(random_tournament(12, 3).is_tournament());
    }

    #[test]
    fn bit_layouts_agree() {
        // the first 15 stream bits determine the 6-vertex tournament
        let seed = 99;
        let mut bits = BitStream::new(seed);
        let word = (0..15).fold(0u64, |w, p| w | (bits.next_bit() as u64) << p);
        assert_eq!(random_tournament(6, seed), tournament_from_bits(6, word));
        let mut bits = BitStream::new(seed);
        let word = (0..15).fold(0u64, |w, p| w | (bits.next_bit() as u64) << p);
        assert_eq!(random_sym_matrix(5, seed), sym_matrix_from_bits(5, word));
    }

    #[test]
    fn orientation_bits_are_balanced() {
        // 3σ for 10^4 × 28 fair bits is about 0.0028, well inside ±0.02
        let n = 8;
        let samples = 10_000u64;
        let mut forward = 0usize;
        for s in 0..samples {
            let t = random_tournament(n, s);
            forward += (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| t.has_edge(i, j)).count();
        }
        let mean = forward as f64 / (samples as f64 * 28.0);
        assert!((mean - 0.5).abs() < 0.02, "mean {mean}");
    }
}
