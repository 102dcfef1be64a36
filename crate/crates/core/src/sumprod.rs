//! Large subsets of `Mat_2(F_q)` and `F_q`: differences with prescribed
//! determinant, and product-difference sets `(A - B)(C - D)`.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cayley::{spectral_gap_bound, CayleyGraphSpec};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::matring::{ring_size, Matrix};
use crate::par;

/// Largest `|X| |Y|` for the witness scan.
pub const WITNESS_LIMIT: u64 = 100_000_000;

/// A set of matrices held as sorted, distinct vertex codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetOfRing {
    pub n: usize,
    pub field: Field,
    members: Vec<u64>,
}

impl SubsetOfRing {
    pub fn new(n: usize, field: &Field, codes: impl IntoIterator<Item = u64>) -> Result<Self> {
        let size = ring_size(n, field)?;
        let members: Vec<u64> = codes.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&c| c >= size) {
            return Err(Error::Parse(format!("matrix code {bad} out of range for {size} matrices")));
        }
        Ok(SubsetOfRing { n, field: field.clone(), members })
    }

    pub fn from_matrices<'a>(n: usize, field: &Field, ms: impl IntoIterator<Item = &'a Matrix>) -> Result<Self> {
        Self::new(n, field, ms.into_iter().map(Matrix::code))
    }

    pub fn codes(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn matrices(&self) -> Vec<Matrix> {
        self.members.iter().map(|&c| Matrix::from_code(&self.field, self.n, c)).collect()
    }

    pub fn random<R: Rng + ?Sized>(n: usize, field: &Field, size: usize, rng: &mut R) -> Result<Self> {
        let total = ring_size(n, field)?;
        if size as u64 > total {
            return Err(Error::TooLarge(format!("subset of size {size} in a ring of {total}")));
        }
        Self::new(n, field, sample(rng, total as usize, size).into_iter().map(|c| c as u64))
    }
}

/// A set of field elements, sorted and distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetOfField {
    pub field: Field,
    members: Vec<Elem>,
}

impl SubsetOfField {
    pub fn new(field: &Field, codes: impl IntoIterator<Item = u64>) -> Result<Self> {
        let members = codes
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(|c| u32::try_from(c).map_err(|_| Error::ElementOutOfRange { code: u32::MAX, q: field.q() }).and_then(|c| field.elem(c)))
            .collect::<Result<Vec<_>>>()?;
        Ok(SubsetOfField { field: field.clone(), members })
    }

    pub fn whole(field: &Field) -> Self {
        SubsetOfField { field: field.clone(), members: field.elements().collect() }
    }

    pub fn elements(&self) -> &[Elem] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn random<R: Rng + ?Sized>(field: &Field, size: usize, rng: &mut R) -> Result<Self> {
        let q = field.q() as usize;
        if size > q {
            return Err(Error::TooLarge(format!("subset of size {size} in a field of {q}")));
        }
        Self::new(field, sample(rng, q, size).into_iter().map(|c| c as u64))
    }
}

/// Reads one decimal code per line; `#` starts a comment.
pub fn parse_codes(text: &str) -> Result<Vec<u64>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| l.parse::<u64>().map_err(|_| Error::Parse(format!("bad code `{l}`"))))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapThreshold {
    pub q: u32,
    /// `2 q^3 sqrt(q) / (q - 1)`.
    pub weil: f64,
    /// `2 q^5 sqrt(q) / (q^3 - q)`.
    pub proof: f64,
    /// `(|V| / |S|) max |lambda|` from the determinant-one spectrum.
    pub exact: f64,
}

pub fn gap_threshold(field: &Field) -> Result<GapThreshold> {
    let q = field.q() as f64;
    let bound = spectral_gap_bound(&CayleyGraphSpec::special(2, field))?;
    Ok(GapThreshold {
        q: field.q(),
        weil: 2.0 * q.powi(3) * q.sqrt() / (q - 1.0),
        proof: bound.nstar_weil,
        exact: bound.nstar_exact,
    })
}

/// The first pair `(M, N)` in `(code M, code N)` order with
/// `det(M - N) = alpha`.
pub fn det_difference_witness(x: &SubsetOfRing, y: &SubsetOfRing, alpha: Elem) -> Result<Option<(Matrix, Matrix)>> {
    if x.n != y.n {
        return Err(Error::DimensionMismatch(x.n, y.n));
    }
    if x.field != y.field {
        return Err(Error::FieldMismatch);
    }
    x.field.elem(alpha.code() as u32)?;
    let work = x.len() as u64 * y.len() as u64;
    if work > WITNESS_LIMIT {
        return Err(Error::TooLarge(format!("{work} pairs exceeds the witness limit of {WITNESS_LIMIT}")));
    }
    let (xs, ys) = (x.matrices(), y.matrices());
    let found = par::map_reduce(
        xs.len() as u64,
        |lo, hi| {
            xs[lo as usize..hi as usize]
                .iter()
                .find_map(|m| ys.iter().find(|n| (m - n).det() == alpha).map(|n| (m.clone(), n.clone())))
        },
        None,
        |a, b| a.or(b),
    );
    Ok(found)
}

/// `X = {A : a21 = a22 = 0}`, whose differences are all singular.
pub fn non_example_subset(field: &Field) -> SubsetOfRing {
    let q = field.q() as u64;
    SubsetOfRing::new(2, field, (0..q * q).collect::<Vec<_>>()).expect("codes below q^2")
}

/// `{[[a, b], [0, c]] : a in A, c in C, b in F_q}`.
pub fn embed_field_subsets(a: &SubsetOfField, c: &SubsetOfField) -> Result<SubsetOfRing> {
    if a.field != c.field {
        return Err(Error::FieldMismatch);
    }
    let f = &a.field;
    let mut ms = Vec::with_capacity(a.len() * c.len() * f.q() as usize);
    for &x in a.elements() {
        for &z in c.elements() {
            for b in f.elements() {
                ms.push(Matrix::from_entries(f, 2, vec![x, b, Elem::ZERO, z])?);
            }
        }
    }
    SubsetOfRing::from_matrices(2, f, &ms)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    Holds,
    Fails,
    /// No choice of subsets of `F_q` can meet the threshold.
    Vacuous,
}

fn classify(value: f64, threshold: f64, q: f64) -> Hypothesis {
    if threshold >= q {
        Hypothesis::Vacuous
    } else if value > threshold {
        Hypothesis::Holds
    } else {
        Hypothesis::Fails
    }
}

/// `sqrt(2) q^(5/4) / sqrt(q - 1)`, compared with the geometric mean of the four sizes.
pub fn four_set_threshold(q: u32) -> f64 {
    let q = q as f64;
    2f64.sqrt() * q.powf(1.25) / (q - 1.0).sqrt()
}

/// `(3/2) q^(3/4)`, compared with `|A|`.
pub fn single_set_threshold(q: u32) -> f64 {
    1.5 * (q as f64).powf(0.75)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SumProdReport {
    pub q: u32,
    pub set: Vec<Elem>,
    pub covers_all: bool,
    pub four_set_threshold: f64,
    pub four_set_hypothesis: Hypothesis,
    /// Present when all four sets coincide.
    pub single_set_hypothesis: Option<Hypothesis>,
}

fn differences(x: &SubsetOfField, y: &SubsetOfField) -> Vec<bool> {
    let f = &x.field;
    let mut hit = vec![false; f.q() as usize];
    for &a in x.elements() {
        for &b in y.elements() {
            hit[f.sub(a, b).index()] = true;
        }
    }
    hit
}

/// The set `(A - B)(C - D)`, built from the two difference sets.
pub fn sumprod_cover(a: &SubsetOfField, b: &SubsetOfField, c: &SubsetOfField, d: &SubsetOfField) -> Result<SumProdReport> {
    let f = &a.field;
    if [b, c, d].iter().any(|s| &s.field != f) {
        return Err(Error::FieldMismatch);
    }
    let (left, right) = (differences(a, b), differences(c, d));
    let mut hit = vec![false; f.q() as usize];
    for x in f.elements().filter(|x| left[x.index()]) {
        for y in f.elements().filter(|y| right[y.index()]) {
            hit[f.mul(x, y).index()] = true;
        }
    }
    let set: Vec<Elem> = f.elements().filter(|x| hit[x.index()]).collect();
    let q = f.q();
    let mean = ((a.len() * b.len() * c.len() * d.len()) as f64).powf(0.25);
    let t4 = four_set_threshold(q);
    let single = (a == b && b == c && c == d).then(|| classify(a.len() as f64, single_set_threshold(q), q as f64));
    Ok(SumProdReport {
        q,
        covers_all: set.len() == q as usize,
        set,
        four_set_threshold: t4,
        four_set_hypothesis: classify(mean, t4, q as f64),
        single_set_hypothesis: single,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapTrialReport {
    pub q: u32,
    pub seed: u64,
    pub trials: usize,
    pub nstar_exact: f64,
    /// Trials where some nonzero `alpha` had no witness.
    pub failures: Vec<usize>,
}

/// Sizes `(|X|, |Y|)` with `|X| |Y| > nstar^2`: even trials are balanced,
/// odd trials skewed with the smallest admissible `|Y|`.
fn trial_sizes<R: Rng>(i: usize, nstar: f64, total: u64, rng: &mut R) -> (usize, usize) {
    let needed = |x: u64| (nstar * nstar / x as f64).floor() as u64 + 1;
    if i.is_multiple_of(2) {
        let s = nstar.floor() as u64 + 1;
        (s as usize, s as usize)
    } else {
        let lo = (1..=total).find(|&x| needed(x) <= total).expect("full ring exceeds nstar");
        let x = rng.random_range(lo..=total);
        (x as usize, needed(x) as usize)
    }
}

/// Random `(X, Y)` in `Mat_2(F_q)` just above the exact threshold, each
/// checked for a determinant-`alpha` difference for every nonzero `alpha`.
pub fn gap_trials(field: &Field, trials: usize, seed: u64) -> Result<GapTrialReport> {
    let nstar = gap_threshold(field)?.exact;
    let total = ring_size(2, field)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for i in 0..trials {
        let (sx, sy) = trial_sizes(i, nstar, total, &mut rng);
        let x = SubsetOfRing::random(2, field, sx, &mut rng)?;
        let y = SubsetOfRing::random(2, field, sy, &mut rng)?;
        debug_assert!(((x.len() * y.len()) as f64).sqrt() > nstar);
        for alpha in field.units() {
            if det_difference_witness(&x, &y, alpha)?.is_none() {
                failures.push(i);
                break;
            }
        }
    }
    Ok(GapTrialReport { q: field.q(), seed, trials, nstar_exact: nstar, failures })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SumProdTrialReport {
    pub q: u32,
    pub seed: u64,
    pub trials: usize,
    /// Trials meeting the four-set hypothesis whose product-difference set missed an element.
    pub failures: Vec<usize>,
}

/// Random `(A, B, C, D)` meeting the four-set hypothesis, sizes drawn by
/// rejection.
pub fn sumprod_trials(field: &Field, trials: usize, seed: u64) -> Result<SumProdTrialReport> {
    let q = field.q();
    let t4 = four_set_threshold(q);
    if t4 >= q as f64 {
        return Err(Error::InfeasibleParams);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for i in 0..trials {
        let sizes = loop {
            let s: [usize; 4] = std::array::from_fn(|_| rng.random_range(1..=q as usize));
            if ((s.iter().product::<usize>()) as f64).powf(0.25) > t4 {
                break s;
            }
        };
        let sets = sizes.map(|s| SubsetOfField::random(field, s, &mut rng));
        let [a, b, c, d] = sets;
        let r = sumprod_cover(&a?, &b?, &c?, &d?)?;
        debug_assert_eq!(r.four_set_hypothesis, Hypothesis::Holds);
        if !r.covers_all {
            failures.push(i);
        }
    }
    Ok(SumProdTrialReport { q, seed, trials, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matring::{enumerate_matrices, MatrixFilter};

    fn field(q: u32) -> Field {
        Field::with_order(q).unwrap()
    }

    #[test]
    fn thresholds() {
        let t3 = gap_threshold(&field(3)).unwrap();
        assert!((t3.weil - 46.765).abs() < 1e-3);
        assert!((t3.proof - 35.074).abs() < 1e-3);
        assert!((t3.exact - 20.25).abs() < 1e-9);
        assert!((gap_threshold(&field(2)).unwrap().weil - 22.627).abs() < 1e-3);
        for q in 2..=9 {
            if let Ok(f) = Field::with_order(q) {
                let t = gap_threshold(&f).unwrap();
                assert!(t.exact <= t.proof + 1e-9 && t.proof <= t.weil, "q={q}");
            }
        }
    }

    #[test]
    fn subsets_normalize() {
        let f = field(3);
        let s = SubsetOfRing::new(2, &f, [5, 1, 5, 3]).unwrap();
        assert_eq!(s.codes(), &[1, 3, 5]);
        assert!(SubsetOfRing::new(2, &f, [81]).is_err());
        let a = SubsetOfField::new(&f, [2, 0, 2]).unwrap();
        assert_eq!(a.len(), 2);
        assert!(SubsetOfField::new(&f, [3]).is_err());
        assert_eq!(parse_codes("# header\n1\n 2 # two\n\n3\n").unwrap(), vec![1, 2, 3]);
        assert!(parse_codes("x").is_err());
    }

    #[test]
    fn witness_examples() {
        for q in [2, 3, 4, 5] {
            let f = field(q);
            let x = non_example_subset(&f);
            assert_eq!(x.len() as u32, q * q);
            for m in x.matrices() {
                assert!(m.get(1, 0).is_zero() && m.get(1, 1).is_zero());
            }
            for a in f.units() {
                assert_eq!(det_difference_witness(&x, &x, a).unwrap(), None);
            }
            let qf = q as f64;
            assert!(qf * qf < 2.0 * qf.powi(3) * qf.sqrt() / (qf - 1.0));
        }
        let f2 = field(2);
        let all = SubsetOfRing::new(2, &f2, 0..16).unwrap();
        let (m, n) = det_difference_witness(&all, &all, Elem::ONE).unwrap().unwrap();
        assert_eq!((&m - &n).det(), Elem::ONE);
        // first in (code M, code N) order: M = 0, N = the lowest-code unit
        assert_eq!(m.code(), 0);
        assert_eq!(n.code(), 6);
    }

    #[test]
    fn witness_order_is_lexicographic() {
        let f = field(3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = SubsetOfRing::random(2, &f, 20, &mut rng).unwrap();
        let y = SubsetOfRing::random(2, &f, 20, &mut rng).unwrap();
        let alpha = Elem::from_code_unchecked(2);
        let brute = x.matrices().into_iter().flat_map(|m| y.matrices().into_iter().map(move |n| (m.clone(), n))).find(|(m, n)| (m - n).det() == alpha);
        assert_eq!(det_difference_witness(&x, &y, alpha).unwrap(), brute);
    }

    #[test]
    fn random_gap_trials() {
        for q in [2, 3] {
            let r = gap_trials(&field(q), 40, 11).unwrap();
            assert!(r.failures.is_empty(), "{r:?}");
        }
    }

    #[test]
    fn cover_examples() {
        let f9 = field(9);
        let all = SubsetOfField::whole(&f9);
        assert!(sumprod_cover(&all, &all, &all, &all).unwrap().covers_all);
        for skip in 0..9 {
            let a = SubsetOfField::new(&f9, (0..9).filter(|&c| c != skip)).unwrap();
            let r = sumprod_cover(&a, &a, &a, &a).unwrap();
            assert!(r.covers_all);
            assert_eq!(r.single_set_hypothesis, Some(Hypothesis::Holds));
        }
        let f3 = field(3);
        let z = SubsetOfField::new(&f3, [0]).unwrap();
        let r = sumprod_cover(&z, &z, &z, &z).unwrap();
        assert_eq!(r.set, vec![Elem::ZERO]);
        assert!(!r.covers_all);
        assert_ne!(r.single_set_hypothesis, Some(Hypothesis::Holds));
        let f5 = field(5);
        let all5 = SubsetOfField::whole(&f5);
        assert_eq!(sumprod_cover(&all5, &all5, &all5, &all5).unwrap().single_set_hypothesis, Some(Hypothesis::Vacuous));
    }

    #[test]
    fn embedding() {
        let f2 = field(2);
        let x = embed_field_subsets(&SubsetOfField::whole(&f2), &SubsetOfField::whole(&f2)).unwrap();
        assert_eq!(x.len(), 8);
        let f3 = field(3);
        let z = SubsetOfField::new(&f3, [0]).unwrap();
        let x = embed_field_subsets(&z, &z).unwrap();
        assert_eq!(x.len(), 3);
        assert!(x.matrices().iter().all(|m| !m.is_invertible()));
        let all = SubsetOfField::whole(&f3);
        let x = embed_field_subsets(&all, &all).unwrap();
        for a in f3.units() {
            assert!(det_difference_witness(&x, &x, a).unwrap().is_some());
        }
    }

    #[test]
    fn embedding_and_cover_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for q in [3, 4, 5] {
            let f = field(q);
            for _ in 0..30 {
                let sets: Vec<SubsetOfField> = (0..4)
                    .map(|_| {
                        let s = rng.random_range(1..=q as usize);
                        SubsetOfField::random(&f, s, &mut rng).unwrap()
                    })
                    .collect();
                let r = sumprod_cover(&sets[0], &sets[1], &sets[2], &sets[3]).unwrap();
                let x = embed_field_subsets(&sets[0], &sets[2]).unwrap();
                let y = embed_field_subsets(&sets[1], &sets[3]).unwrap();
                for a in f.units() {
                    let witness = det_difference_witness(&x, &y, a).unwrap().is_some();
                    assert_eq!(witness, r.set.contains(&a));
                }
            }
        }
    }

    #[test]
    fn four_set_trials() {
        let r = sumprod_trials(&field(9), 30, 1).unwrap();
        assert!(r.failures.is_empty());
        assert!((four_set_threshold(9) - 7.794).abs() < 1e-3);
        assert!((single_set_threshold(9) - 7.794).abs() < 1e-3);
        assert_eq!(sumprod_trials(&field(5), 1, 1), Err(Error::InfeasibleParams));
    }

    #[test]
    fn too_large_scan() {
        let f = field(9);
        let all = SubsetOfRing::new(2, &f, enumerate_matrices(2, &f, MatrixFilter::All).unwrap().iter().map(Matrix::code)).unwrap();
        assert!(det_difference_witness(&all, &all, Elem::ONE).unwrap().is_some());
        let f16 = field(16);
        let big = SubsetOfRing::new(2, &f16, 0..20_000).unwrap();
        assert!(matches!(det_difference_witness(&big, &big, Elem::ONE), Err(Error::TooLarge(_))));
    }
}
