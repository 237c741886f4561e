//! Bounds on `inv(n)`, the maximum inversion number over `n`-vertex
//! tournaments, together with rank certificates and seeded experiments.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::constructions::{random_sym_matrix, random_tournament, sym_matrix_from_bits, tournament_from_bits};
use crate::digraph::{Digraph, InversionFamily};
use crate::error::{Error, Result};
use crate::exact::{decide_inv_le, SearchOptions};
use crate::f2::{BitVec, SymMatrixBuilder, SymMatrixF2};

/// Largest `n` for which [`min_rank_free_diagonal`] enumerates diagonals.
pub const MAX_FREE_DIAGONAL: usize = 20;
/// Largest number of free bits (matrix entries or tournament pairs) an
/// exhaustive experiment will enumerate.
pub const MAX_EXHAUSTIVE_BITS: usize = 24;

/// Lower and upper bounds on `inv(n)` with a note for every candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub n: usize,
    pub lower: usize,
    pub upper: usize,
    pub lower_notes: Vec<String>,
    /// Every upper-bound route considered, with its value.
    pub upper_candidates: Vec<(String, usize)>,
}

impl BoundReport {
    pub fn new(n: usize) -> Self {
        let lower = counting_lower_bound(n);
        let upper = upper_bound(n);
        let lower_notes = vec![if lower == 0 {
            "counting: no positive bound".to_string()
        } else {
            format!(
                "counting: 2^{} > {n}!*2^({n}*{}) so inv({n}) >= {lower}",
                n * n.saturating_sub(1) / 2,
                lower - 1
            )
        }];
        BoundReport {
            n,
            lower,
            upper,
            lower_notes,
            upper_candidates: upper_candidates(n),
        }
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n = {}", self.n)?;
        writeln!(f, "lower = {}", self.lower)?;
        writeln!(f, "upper = {}", self.upper)?;
        for note in &self.lower_notes {
            writeln!(f, "lower: {note}")?;
        }
        for (route, value) in &self.upper_candidates {
            writeln!(f, "upper: {route} = {value}")?;
        }
        Ok(())
    }
}

fn factorial(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).product()
}

/// The largest `k` with `2^C(n,2) > n! · 2^(n(k−1))`, so that `inv(n) ≥ k`
/// (at least 0). Exact integer arithmetic.
pub fn counting_lower_bound(n: usize) -> usize {
    let total = BigUint::from(1u8) << (n * n.saturating_sub(1) / 2);
    let fact = factorial(n);
    // 2^C > n!·2^(n(k−1))  ⟺  2^C·2^n > n!·2^(nk)
    let lhs = total << n;
    let mut k = 0;
    while lhs > (&fact << (n * (k + 1))) {
        k += 1;
    }
    k
}

/// `floor(n − log2(n + 1))`, which is `n − ceil(log2(n + 1))`.
fn log_bound(n: usize) -> usize {
    let ceil_log = (usize::BITS - n.leading_zeros()) as usize; // ceil(log2(n+1))
    n - ceil_log
}

/// Exact small values: `inv(n)` for `n ≤ 6`, except `5`, where 2 is only an
/// upper bound.
const SMALL: [usize; 7] = [0, 0, 0, 1, 1, 2, 2];

fn upper_bound_memo(n: usize, memo: &mut BTreeMap<usize, usize>) -> usize {
    if let Some(&v) = memo.get(&n) {
        return v;
    }
    let mut best = log_bound(n);
    if n < SMALL.len() {
        best = best.min(SMALL[n]);
    }
    if n >= 1 {
        best = best.min(upper_bound_memo(n - 1, memo) + 1);
        best = best.min((n - 1) / 2 + upper_bound_memo(n / 2, memo));
    }
    memo.insert(n, best);
    best
}

/// Best upper bound on `inv(n)` from the small values, `inv(n−1) + 1`, the
/// halving recursion `floor((n−1)/2) + inv(ceil((n−1)/2))`, and
/// `n − log2(n + 1)`.
pub fn upper_bound(n: usize) -> usize {
    upper_bound_memo(n, &mut BTreeMap::new())
}

fn upper_candidates(n: usize) -> Vec<(String, usize)> {
    let mut memo = BTreeMap::new();
    let mut out = Vec::new();
    if n < SMALL.len() {
        out.push((format!("small value inv({n})"), SMALL[n]));
    }
    if n >= 1 {
        out.push((format!("inv({}) + 1", n - 1), upper_bound_memo(n - 1, &mut memo) + 1));
        out.push((
            format!("{} + inv({})", (n - 1) / 2, n / 2),
            (n - 1) / 2 + upper_bound_memo(n / 2, &mut memo),
        ));
    }
    out.push((format!("floor({n} - log2({}))", n + 1), log_bound(n)));
    out
}

/// `min(1, 2^(s·log2 n − s(s−1)/2))`: the tail bound for a uniformly random
/// symmetric `n × n` matrix to have rank at most `n − s`.
pub fn rank_tail_bound(n: usize, s: usize) -> f64 {
    if s == 0 {
        return 1.0;
    }
    let exponent = s as f64 * (n as f64).log2() - (s * (s - 1) / 2) as f64;
    exponent.exp2().min(1.0)
}

/// `S = Σ x_i x_iᵀ` over the indicator vectors of the family, and its rank.
/// Off the diagonal, `S` is 1 exactly on the pairs whose edge the family
/// reverses.
pub fn rank_certificate(d: &Digraph, family: &InversionFamily) -> Result<(SymMatrixF2, usize)> {
    family.validate(d.n())?;
    let n = d.n();
    let mut s = SymMatrixF2::zeros(n);
    for set in family.sets() {
        let mut x = BitVec::zeros(n);
        for v in set.iter() {
            x.set(v, true);
        }
        s = s.add(&SymMatrixF2::outer(&x))?;
    }
    let rank = s.rank();
    Ok((s, rank))
}

/// The symmetric pattern of pairs oriented differently in two tournaments,
/// with zero diagonal.
pub fn disagreement_matrix(t1: &Digraph, t2: &Digraph) -> Result<SymMatrixF2> {
    if t1.n() != t2.n() {
        return Err(Error::VertexCountMismatch(t1.n(), t2.n()));
    }
    let mut b = SymMatrixBuilder::new(t1.n());
    for u in 0..t1.n() {
        for v in u + 1..t1.n() {
            if t1.has_edge(u, v) != t2.has_edge(u, v) {
                b.set(u, v, true);
            }
        }
    }
    Ok(b.seal())
}

fn rank_rows(mut rows: Vec<u64>) -> usize {
    let mut rank = 0;
    for i in 0..rows.len() {
        let r = rows[i];
        if r == 0 {
            continue;
        }
        rank += 1;
        let pivot = r & r.wrapping_neg();
        for row in &mut rows[i + 1..] {
            if *row & pivot != 0 {
                *row ^= r;
            }
        }
    }
    rank
}

/// Least rank over all ways of filling the diagonal of `pattern` (its own
/// diagonal is ignored). A family of `k` sets contributes a sum of `k`
/// rank-one matrices, so this is a lower bound on the inversion distance to
/// any tournament with this disagreement pattern.
pub fn min_rank_free_diagonal(pattern: &SymMatrixF2) -> Result<usize> {
    let n = pattern.n();
    if n > MAX_FREE_DIAGONAL {
        return Err(Error::guard("n", n, MAX_FREE_DIAGONAL));
    }
    let base: Vec<u64> = (0..n)
        .map(|a| (0..n).filter(|&b| b != a && pattern.get(a, b)).fold(0, |m, b| m | 1 << b))
        .collect();
    let best = (0..1u64 << n)
        .map(|diag| {
            let rows = base
                .iter()
                .enumerate()
                .map(|(a, &r)| r | (((diag >> a) & 1) << a))
                .collect();
            rank_rows(rows)
        })
        .min()
        .unwrap_or(0);
    Ok(best)
}

/// One experiment outcome, written as one CSV row.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRow {
    pub experiment: &'static str,
    pub n: usize,
    /// `s` for the rank tail, `k` for random inversion numbers.
    pub param: usize,
    /// Number of samples, or the size of the whole space when exact.
    pub trials: u64,
    pub hits: u64,
    pub empirical: f64,
    pub bound: f64,
    pub exact: bool,
}

pub const CSV_HEADER: [&str; 8] = ["experiment", "n", "param", "trials", "hits", "empirical", "bound", "exact"];

/// Writes rows as CSV with a header.
pub fn write_csv<W: Write>(rows: &[ExperimentRow], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.experiment.to_string(),
            r.n.to_string(),
            r.param.to_string(),
            r.trials.to_string(),
            r.hits.to_string(),
            r.empirical.to_string(),
            r.bound.to_string(),
            r.exact.to_string(),
        ])?;
    }
    w.flush()
}

/// How an experiment draws its samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    /// `trials` draws; trial `t` uses seed `seed ^ t`.
    Random { trials: u64, seed: u64 },
    /// Every object in the space, once.
    Exhaustive,
}

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool")
}

/// Counts indices in `0..total` satisfying `hit`, in parallel. The count does
/// not depend on scheduling.
fn count_hits<F>(total: u64, threads: usize, hit: F) -> Result<u64>
where
    F: Fn(u64) -> Result<bool> + Sync,
{
    pool(threads).install(|| {
        (0..total)
            .into_par_iter()
            .map(|i| hit(i).map(u64::from))
            .try_reduce(|| 0, |a, b| Ok(a + b))
    })
}

fn check_exhaustive(bits: usize) -> Result<u64> {
    if bits > MAX_EXHAUSTIVE_BITS {
        return Err(Error::guard("exhaustive bits", bits, MAX_EXHAUSTIVE_BITS));
    }
    Ok(1u64 << bits)
}

/// Fraction of symmetric `n × n` matrices with rank at most `n − s`, next to
/// [`rank_tail_bound`].
pub fn rank_tail_experiment(n: usize, s: usize, sampling: Sampling, threads: usize) -> Result<ExperimentRow> {
    if s > n {
        return Err(Error::InvalidArgument(format!("s = {s} exceeds n = {n}")));
    }
    let limit = n - s;
    let (trials, hits, exact) = match sampling {
        Sampling::Random { trials, seed } => {
            let hits = count_hits(trials, threads, |t| Ok(random_sym_matrix(n, seed ^ t).rank() <= limit))?;
            (trials, hits, false)
        }
        Sampling::Exhaustive => {
            let total = check_exhaustive(n * (n + 1) / 2)?;
            let hits = count_hits(total, threads, |b| Ok(sym_matrix_from_bits(n, b).rank() <= limit))?;
            (total, hits, true)
        }
    };
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    Ok(ExperimentRow {
        experiment: "rank-tail",
        n,
        param: s,
        trials,
        hits,
        empirical: hits as f64 / trials as f64,
        bound: rank_tail_bound(n, s),
        exact,
    })
}

/// `min(1, n! · 2^(nk) / 2^C(n,2))`: at most `n! · 2^(nk)` labelled tournaments
/// are `k`-invertible.
pub fn random_inv_bound(n: usize, k: usize) -> f64 {
    let count = factorial(n) << (n * k);
    let total = BigUint::from(1u8) << (n * n.saturating_sub(1) / 2);
    if count >= total {
        return 1.0;
    }
    // the denominator is a power of two, so scaling the leading bits is exact
    let shift = count.bits().saturating_sub(63);
    let top = (&count >> shift).to_u64_digits().first().copied().unwrap_or(0);
    top as f64 * (shift as f64 - (n * n.saturating_sub(1) / 2) as f64).exp2()
}

/// Fraction of labelled `n`-vertex tournaments with `inv ≤ k`, next to
/// [`random_inv_bound`].
pub fn random_inv_experiment(n: usize, k: usize, sampling: Sampling, threads: usize) -> Result<ExperimentRow> {
    let opts = SearchOptions::default();
    let pairs = n * n.saturating_sub(1) / 2;
    let (trials, hits, exact) = match sampling {
        Sampling::Random { trials, seed } => {
            let hits = count_hits(trials, threads, |t| {
                Ok(decide_inv_le(&random_tournament(n, seed ^ t), k, opts)?.is_some())
            })?;
            (trials, hits, false)
        }
        Sampling::Exhaustive => {
            let total = check_exhaustive(pairs)?;
            let hits = count_hits(total, threads, |b| {
                Ok(decide_inv_le(&tournament_from_bits(n, b), k, opts)?.is_some())
            })?;
            (total, hits, true)
        }
    };
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    Ok(ExperimentRow {
        experiment: "random-inv",
        n,
        param: k,
        trials,
        hits,
        empirical: hits as f64 / trials as f64,
        bound: random_inv_bound(n, k),
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{all_tournaments, c3, counterexample_r, counterexample_r_family, transitive};
    use crate::digraph::invert_family;
    use crate::exact::{inversion_distance, inversion_number};
    use crate::f2::leading_nullities;
    use proptest::prelude::*;

    /// Oracle in floating point: log2 of both sides.
    fn counting_oracle(n: usize) -> usize {
        let log_fact: f64 = (1..=n).map(|i| (i as f64).log2()).sum();
        let c = (n * n.saturating_sub(1) / 2) as f64;
        (0..).take_while(|&k| c > log_fact + (n * k) as f64 - n as f64).last().map_or(0, |k: usize| k)
    }

    #[test]
    fn counting_values() {
        assert_eq!(counting_lower_bound(4), 1);
        assert_eq!(counting_lower_bound(10), 3);
        let expected = [0, 0, 1, 1, 1, 1, 2, 2, 2, 3, 3];
        for (i, &e) in expected.iter().enumerate() {
            assert_eq!(counting_lower_bound(i + 1), e, "n = {}", i + 1);
        }
        for n in 1..60 {
            assert_eq!(counting_lower_bound(n), counting_oracle(n), "n = {n}");
        }
    }

    #[test]
    fn upper_values() {
        assert_eq!(upper_bound(4), 1);
        assert_eq!(upper_bound(6), 2);
        assert_eq!(upper_bound(7), 3);
        for n in 1..200 {
            assert!(counting_lower_bound(n) <= upper_bound(n));
            assert!(upper_bound(n) <= upper_bound(n - 1) + 1);
            // floor(n − log2(n+1)) by floating point
            assert_eq!(log_bound(n), (n as f64 - ((n + 1) as f64).log2()).floor() as usize);
        }
        let report = BoundReport::new(7);
        assert_eq!((report.lower, report.upper), (2, 3));
        assert_eq!(report.upper_candidates.iter().map(|c| c.1).min(), Some(3));
        assert!(report.to_string().contains("upper = 3"));
    }

    #[test]
    fn tail_bound_values() {
        assert_eq!(rank_tail_bound(10, 1), 1.0);
        assert_eq!(rank_tail_bound(7, 0), 1.0);
        let v = rank_tail_bound(10, 8);
        assert!((v - 0.372_529).abs() < 1e-5, "{v}");
        for s in 5..10 {
            assert!(rank_tail_bound(10, s + 1) <= rank_tail_bound(10, s));
        }
    }

    #[test]
    fn tail_bound_holds_exhaustively() {
        for n in 1..=5 {
            for s in 0..=n {
                let row = rank_tail_experiment(n, s, Sampling::Exhaustive, 2).unwrap();
                assert!(row.exact);
                assert!(row.empirical <= row.bound, "n={n} s={s}");
            }
        }
        let row = rank_tail_experiment(5, 5, Sampling::Exhaustive, 1).unwrap();
        assert_eq!((row.hits, row.trials), (1, 1 << 15));
    }

    #[test]
    fn tail_experiment_is_reproducible() {
        let a = rank_tail_experiment(6, 2, Sampling::Random { trials: 500, seed: 9 }, 1).unwrap();
        let b = rank_tail_experiment(6, 2, Sampling::Random { trials: 500, seed: 9 }, 4).unwrap();
        assert_eq!(a, b);
        let all = rank_tail_experiment(4, 0, Sampling::Random { trials: 50, seed: 1 }, 1).unwrap();
        assert_eq!(all.empirical, 1.0);
    }

    #[test]
    fn certificate_examples() {
        let f = InversionFamily::from_lists(&[&[0, 1]]);
        let (s, r) = rank_certificate(&c3(), &f).unwrap();
        assert_eq!(r, 1);
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(s.get(a, b), a < 2 && b < 2);
            }
        }
        let (s, r) = rank_certificate(&c3(), &InversionFamily::empty()).unwrap();
        assert_eq!((s, r), (SymMatrixF2::zeros(3), 0));
        let r9 = counterexample_r();
        let fam = counterexample_r_family();
        let (s, r) = rank_certificate(&r9, &fam).unwrap();
        assert!(r <= 3);
        let flipped = disagreement_matrix(&r9, &invert_family(&r9, &fam).unwrap()).unwrap();
        for a in 0..9 {
            for b in 0..9 {
                if a != b {
                    assert_eq!(s.get(a, b), flipped.get(a, b));
                }
            }
        }
    }

    #[test]
    fn free_diagonal_examples() {
        assert_eq!(min_rank_free_diagonal(&SymMatrixF2::zeros(4)).unwrap(), 0);
        let one_pair = disagreement_matrix(&c3(), &transitive(3)).unwrap();
        assert_eq!(min_rank_free_diagonal(&one_pair).unwrap(), 1);
        assert!(min_rank_free_diagonal(&SymMatrixF2::zeros(21)).is_err());
    }

    #[test]
    fn free_diagonal_below_distance() {
        let opts = SearchOptions::default();
        for n in 3..=4 {
            let ts: Vec<Digraph> = all_tournaments(n).collect();
            for a in &ts {
                for b in &ts {
                    let d = inversion_distance(a, b, n, opts).unwrap().value().unwrap();
                    let m = min_rank_free_diagonal(&disagreement_matrix(a, b).unwrap()).unwrap();
                    assert!(m <= d);
                }
            }
        }
    }

    #[test]
    fn random_inv_examples() {
        let row = random_inv_experiment(3, 1, Sampling::Random { trials: 200, seed: 3 }, 2).unwrap();
        assert_eq!(row.empirical, 1.0);
        let exact = random_inv_experiment(4, 0, Sampling::Exhaustive, 2).unwrap();
        assert_eq!((exact.hits, exact.trials), (24, 64));
        let mc = random_inv_experiment(4, 0, Sampling::Random { trials: 4000, seed: 11 }, 2).unwrap();
        // 4000 draws of a Bernoulli(0.375): standard error about 0.0077
        assert!((mc.empirical - 0.375).abs() < 0.04, "{}", mc.empirical);
    }

    #[test]
    fn exhaustive_fraction_respects_counting_bound() {
        for n in 3..=5 {
            for k in 0..=2 {
                let row = random_inv_experiment(n, k, Sampling::Exhaustive, 4).unwrap();
                assert!(row.empirical <= row.bound);
            }
        }
    }

    #[test]
    fn sandwich_small_n() {
        for n in 1..=5 {
            let inv_n = all_tournaments(n)
                .map(|t| inversion_number(&t, n, SearchOptions::default()).unwrap().value().unwrap())
                .max()
                .unwrap();
            assert!(counting_lower_bound(n) <= inv_n && inv_n <= upper_bound(n));
        }
    }

    #[test]
    fn csv_layout() {
        let row = rank_tail_experiment(2, 2, Sampling::Exhaustive, 1).unwrap();
        let mut buf = Vec::new();
        write_csv(&[row], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "experiment,n,param,trials,hits,empirical,bound,exact\nrank-tail,2,2,8,1,0.125,1,true\n"
        );
    }

    proptest! {
        #[test]
        fn nullity_grows_by_at_most_one(n in 1usize..=32, seed: u64) {
            let m = random_sym_matrix(n, seed);
            let nul = leading_nullities(&m);
            prop_assert!(nul[0] <= 1);
            for w in nul.windows(2) {
                prop_assert!(w[1] <= w[0] + 1);
            }
        }

        #[test]
        fn certificate_rank_at_most_family_size(seed: u64, k in 0usize..4) {
            let t = random_tournament(7, seed);
            let fam = InversionFamily::new(
                (0..k).map(|i| crate::digraph::VertexSet::from_mask((seed >> (7 * i)) & 0x7f)).collect(),
            );
            let (s, r) = rank_certificate(&t, &fam).unwrap();
            prop_assert!(r <= k);
            let flipped = disagreement_matrix(&t, &invert_family(&t, &fam).unwrap()).unwrap();
            for a in 0..7 {
                for b in 0..7 {
                    if a != b {
                        prop_assert_eq!(s.get(a, b), flipped.get(a, b));
                    }
                }
            }
        }
    }
}
