//! Linear algebra over the two-element field.
//!
//! Vectors and matrix rows are packed into `u64` words, least significant bit
//! first. Row reduction is plain XOR elimination; the pivot of a row is its
//! lowest set bit.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::text;

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// An element of F_2^k.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Builds a vector of length `len` from the low bits of `bits`.
    pub fn from_u64(len: usize, bits: u64) -> Self {
        assert!(len <= WORD, "from_u64 supports at most 64 coordinates");
        let mut v = BitVec::zeros(len);
        if len > 0 {
            let mask = if len == WORD { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = bits & mask;
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
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

    /// The low word, for vectors of length at most 64.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= WORD);
        self.words.first().copied().unwrap_or(0)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn xor_assign(&mut self, other: &BitVec) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch(self.len, other.len));
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

/// Coordinates in order, first coordinate leftmost: `101` has bits 0 and 2 set.
impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::parse(1, i + 1, format!("expected '0' or '1', found {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BitVec::from_bools(&bits))
    }
}

/// Parity of `popcount(u AND v)`.
pub fn dot(u: &BitVec, v: &BitVec) -> Result<bool> {
    if u.len != v.len {
        return Err(Error::LengthMismatch(u.len, v.len));
    }
    let ones: u32 = u
        .words
        .iter()
        .zip(&v.words)
        .map(|(a, b)| (a & b).count_ones())
        .sum();
    Ok(ones % 2 == 1)
}

/// Dot product of two packed vectors of length at most 64.
#[inline]
pub fn dot_u64(u: u64, v: u64) -> bool {
    (u & v).count_ones() & 1 == 1
}

/// Pairwise dot 0 and self-dot 1.
pub fn is_orthonormal(vs: &[BitVec]) -> Result<bool> {
    if let Some(first) = vs.first() {
        if let Some(bad) = vs.iter().find(|v| v.len != first.len) {
            return Err(Error::LengthMismatch(first.len, bad.len));
        }
    }
    for (i, u) in vs.iter().enumerate() {
        if !dot(u, u)? {
            return Ok(false);
        }
        for w in &vs[i + 1..] {
            if dot(u, w)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A dense `rows × cols` matrix over F_2.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Stacks the vectors as rows.
    pub fn from_rows(rows: &[BitVec]) -> Result<Self> {
        let cols = rows.first().map_or(0, BitVec::len);
        let mut m = BitMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::LengthMismatch(cols, r.len()));
            }
            m.row_mut(i).copy_from_slice(r.words());
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn add(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::LengthMismatch(self.rows * self.cols, other.rows * other.cols));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
        Ok(out)
    }

    /// Row rank over F_2.
    pub fn rank(&self) -> usize {
        rank_of_rows(self.data.clone(), self.rows, self.stride)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Gaussian elimination on packed rows. Each row is reduced against the
/// pivots found so far; a surviving row contributes its lowest set bit as a
/// new pivot.
fn rank_of_rows(mut data: Vec<u64>, rows: usize, stride: usize) -> usize {
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, pivot bit)
    for r in 0..rows {
        for &(pr, bit) in &pivots {
            if (data[r * stride + bit / WORD] >> (bit % WORD)) & 1 == 1 {
                for w in 0..stride {
                    let v = data[pr * stride + w];
                    data[r * stride + w] ^= v;
                }
            }
        }
        let row = &data[r * stride..(r + 1) * stride];
        if let Some((wi, &w)) = row.iter().enumerate().find(|(_, &w)| w != 0) {
            pivots.push((r, wi * WORD + w.trailing_zeros() as usize));
        }
    }
    pivots.len()
}

/// Mutable builder for a symmetric matrix; `set` writes both `(a, b)` and `(b, a)`.
#[derive(Clone, Debug)]
pub struct SymMatrixBuilder {
    inner: BitMatrix,
}

impl SymMatrixBuilder {
    pub fn new(n: usize) -> Self {
        SymMatrixBuilder {
            inner: BitMatrix::zeros(n, n),
        }
    }

    pub fn n(&self) -> usize {
        self.inner.rows
    }

    pub fn set(&mut self, a: usize, b: usize, value: bool) -> &mut Self {
        self.inner.set(a, b, value);
        self.inner.set(b, a, value);
        self
    }

    pub fn toggle(&mut self, a: usize, b: usize) -> &mut Self {
        let v = !self.inner.get(a, b);
        self.set(a, b, v)
    }

    pub fn get(&self, a: usize, b: usize) -> bool {
        self.inner.get(a, b)
    }

    pub fn seal(self) -> SymMatrixF2 {
        SymMatrixF2 { inner: self.inner }
    }
}

/// A sealed symmetric `n × n` matrix over F_2.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymMatrixF2 {
    inner: BitMatrix,
}

impl SymMatrixF2 {
    pub fn zeros(n: usize) -> Self {
        SymMatrixBuilder::new(n).seal()
    }

    pub fn identity(n: usize) -> Self {
        SymMatrixF2 {
            inner: BitMatrix::identity(n),
        }
    }

    /// Validates symmetry of a general square matrix.
    pub fn from_matrix(m: BitMatrix) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::LengthMismatch(m.rows, m.cols));
        }
        for a in 0..m.rows {
            for b in a + 1..m.rows {
                if m.get(a, b) != m.get(b, a) {
                    return Err(Error::InvalidArgument(format!(
                        "matrix is not symmetric at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(SymMatrixF2 { inner: m })
    }

    pub fn n(&self) -> usize {
        self.inner.rows
    }

    pub fn get(&self, a: usize, b: usize) -> bool {
        self.inner.get(a, b)
    }

    pub fn as_matrix(&self) -> &BitMatrix {
        &self.inner
    }

    pub fn to_builder(&self) -> SymMatrixBuilder {
        SymMatrixBuilder {
            inner: self.inner.clone(),
        }
    }

    pub fn add(&self, other: &SymMatrixF2) -> Result<SymMatrixF2> {
        Ok(SymMatrixF2 {
            inner: self.inner.add(&other.inner)?,
        })
    }

    pub fn rank(&self) -> usize {
        self.inner.rank()
    }

    /// The leading principal `i × i` submatrix.
    pub fn leading(&self, i: usize) -> SymMatrixF2 {
        assert!(i <= self.n());
        let mut b = SymMatrixBuilder::new(i);
        for r in 0..i {
            for c in r..i {
                if self.get(r, c) {
                    b.set(r, c, true);
                }
            }
        }
        b.seal()
    }

    /// Rank-one matrix `x xᵀ`: entry `(a, b)` is 1 iff both coordinates are set.
    pub fn outer(x: &BitVec) -> SymMatrixF2 {
        let n = x.len();
        let mut b = SymMatrixBuilder::new(n);
        let ones: Vec<usize> = x.iter_ones().collect();
        for (i, &a) in ones.iter().enumerate() {
            for &c in &ones[i..] {
                b.set(a, c, true);
            }
        }
        b.seal()
    }

    pub fn to_text(&self) -> String {
        matrix_to_text(&self.inner)
    }

    pub fn parse(input: &str) -> Result<Self> {
        SymMatrixF2::from_matrix(BitMatrix::parse(input)?)
    }
}

impl fmt::Debug for SymMatrixF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sym{:?}", self.inner)
    }
}

/// Nullity `i - rank(M_i)` of every leading principal submatrix, `i = 1..=n`.
pub fn leading_nullities(m: &SymMatrixF2) -> Vec<usize> {
    (1..=m.n())
        .map(|i| i - m.leading(i).rank())
        .collect()
}

impl BitMatrix {
    /// Square matrix text format: `n`, then `n` rows of `n` bits.
    pub fn parse(input: &str) -> Result<Self> {
        let rows = text::parse_square_bits(input)?;
        let n = rows.len();
        let mut m = BitMatrix::zeros(n, n);
        for (r, row) in rows.iter().enumerate() {
            for (c, &b) in row.iter().enumerate() {
                m.set(r, c, b);
            }
        }
        Ok(m)
    }

    pub fn to_text(&self) -> String {
        matrix_to_text(self)
    }
}

fn matrix_to_text(m: &BitMatrix) -> String {
    let mut s = format!("{}\n", m.rows);
    for r in 0..m.rows {
        for c in 0..m.cols {
            s.push(if m.get(r, c) { '1' } else { '0' });
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    #[test]
    fn dot_examples() {
        assert!(dot(&bv("101"), &bv("110")).unwrap());
        assert!(!dot(&bv("000"), &bv("111")).unwrap());
        assert!(!dot(&bv("000"), &bv("010")).unwrap());
        assert!(dot(&bv("111"), &bv("111")).unwrap());
        assert_eq!(dot(&bv("11"), &bv("111")), Err(Error::LengthMismatch(2, 3)));
    }

    #[test]
    fn orthonormal_examples() {
        assert!(is_orthonormal(&[bv("100"), bv("010"), bv("001")]).unwrap());
        assert!(!is_orthonormal(&[bv("110"), bv("011")]).unwrap());
        assert!(!is_orthonormal(&[bv("100"), bv("111"), bv("001")]).unwrap());
        assert!(is_orthonormal(&[]).unwrap());
        assert!(is_orthonormal(&[bv("01"), bv("0")]).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(5).rank(), 5);
        assert_eq!(BitMatrix::zeros(4, 4).rank(), 0);
        let ones = BitMatrix::parse("3\n111\n111\n111\n").unwrap();
        assert_eq!(ones.rank(), 1);
        assert_eq!(SymMatrixF2::from_matrix(ones).unwrap().rank(), 1);
    }

    #[test]
    fn rank_wide_rows() {
        // rows spanning several words
        let mut m = BitMatrix::zeros(3, 130);
        m.set(0, 129, true);
        m.set(1, 129, true);
        m.set(1, 3, true);
        m.set(2, 3, true);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn nullity_examples() {
        assert_eq!(leading_nullities(&SymMatrixF2::identity(3)), vec![0, 0, 0]);
        assert_eq!(leading_nullities(&SymMatrixF2::zeros(3)), vec![1, 2, 3]);
        let mut b = SymMatrixBuilder::new(2);
        b.set(0, 1, true);
        assert_eq!(leading_nullities(&b.seal()), vec![1, 0]);
    }

    #[test]
    fn outer_product_has_rank_one() {
        let m = SymMatrixF2::outer(&bv("1101"));
        assert_eq!(m.rank(), 1);
        assert!(m.get(0, 3) && m.get(3, 3) && !m.get(2, 0));
        assert_eq!(SymMatrixF2::outer(&bv("0000")).rank(), 0);
    }

    #[test]
    fn parse_rejects_asymmetric_and_reports_position() {
        assert!(SymMatrixF2::parse("2\n01\n00\n").is_err());
        match BitMatrix::parse("2\n01\n0x\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 2)),
            other => panic!("unexpected {other:?}"),
        }
        let m = SymMatrixF2::parse("# comment\n2\n01\n10\n").unwrap();
        assert_eq!(SymMatrixF2::parse(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn bitvec_display_roundtrip() {
        let v = bv("0110");
        assert_eq!(v.to_string(), "0110");
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(BitVec::from_u64(4, 0b0110), v);
    }
}
