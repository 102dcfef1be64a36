//! The acceptance suite: eleven exact or tolerance-bounded checks, each
//! reporting pass/fail with a short detail line.

use std::collections::HashSet;
use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cayley::{bfs_diameter, dense_spectrum_oracle, spectrum_by_classes, CayleyGraphSpec, Connection};
use crate::decomp::{sum_of_sl_zero, sum_of_two_sl, sum_of_two_units, verify_decomposition, DecompositionMode};
use crate::gf::{Elem, Field};
use crate::matring::{enumerate_matrices, gl_order, phi, ring_size, Matrix, MatrixFilter};
use crate::normform::{canonical_form, is_sl_equivalent, sl_normal_form};
use crate::par;
use crate::spectra::{
    char_sum_identities, kloosterman, sl2_spectrum_closed_form, srg_check_bruteforce, srg_params_unit_mat2,
    unit_mat2_spectrum_closed_form,
};
use crate::sumprod::{
    det_difference_witness, gap_trials, non_example_subset, sumprod_cover, sumprod_trials, SubsetOfField,
};

/// Seed for every randomized check.
pub const SEED: u64 = 20_240_601;
/// Random matrices drawn per size in the normal-form check.
pub const NORMAL_FORM_SAMPLES: usize = 10_000;
/// Random subset trials per field in the spectral-gap and sum-product checks.
pub const TRIALS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<22} {:>7.2}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

/// Outcome of one check: `Ok(detail)` passes, `Err(detail)` fails.
type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn field(q: u32) -> std::result::Result<Field, String> {
    Field::with_order(q).map_err(|e| e.to_string())
}

fn err(e: crate::Error) -> String {
    e.to_string()
}

pub const NAMES: [&str; 11] = [
    "counting",
    "phi-bound",
    "normal-form",
    "decompositions",
    "unit-graph-spectrum",
    "strongly-regular",
    "sl2-kloosterman",
    "character-identities",
    "diameters",
    "spectral-gap",
    "sum-product",
];

fn timed(id: u8, check: impl FnOnce() -> Check) -> CriterionResult {
    let start = Instant::now();
    let outcome = check();
    let seconds = start.elapsed().as_secs_f64();
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionResult { id, name: NAMES[id as usize - 1], passed, detail, seconds }
}

/// Runs criterion `id` (1-based) at its full set of sizes.
pub fn run_criterion(id: u8) -> CriterionResult {
    timed(id, || match id {
        1 => counting(&[(1, 2), (1, 3), (1, 4), (1, 5), (1, 7), (1, 8), (1, 9), (2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3)]),
        2 => phi_bound(),
        3 => normal_form(
            &[(2, 2), (2, 3)],
            &[(2, 5), (3, 2), (3, 3)],
            true,
        ),
        4 => decompositions(&[(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3)], true),
        5 => unit_graph_spectrum(&[2, 3, 4, 5, 7], &[2, 3]),
        6 => strongly_regular(&[2, 3, 4, 5], &[2, 3, 4], &[5]),
        7 => sl2_kloosterman(&[2, 3, 4, 5, 7, 8, 9]),
        8 => character_identities(&[2, 3, 4, 5, 7]),
        9 => diameters(&[3, 4, 5, 7, 8, 9], &[(2, 2), (2, 3), (3, 2)]),
        10 => spectral_gap(&[2, 3]),
        11 => sum_product(),
        _ => Err(format!("no criterion {id}")),
    })
}

pub fn run_all() -> Vec<CriterionResult> {
    (1..=11).map(run_criterion).collect()
}

/// The checks that make sense at a single size `(n, q)`.
pub fn run_at(n: usize, q: u32) -> Vec<CriterionResult> {
    let mut out = vec![timed(1, || counting(&[(n, q)]))];
    let ring = Field::with_order(q).ok().and_then(|f| ring_size(n, &f).ok()).unwrap_or(u64::MAX);
    if ring <= 1 << 16 {
        out.push(timed(3, || normal_form(&[(n, q)], &[], n == 2 && q == 2)));
        if n >= 2 {
            out.push(timed(4, || decompositions(&[(n, q)], n == 3 && q == 3)));
        }
    } else {
        out.push(timed(3, || normal_form(&[], &[(n, q)], false)));
    }
    if n == 2 {
        let dense: &[u32] = if q * q * q * q <= 4096 { &[q] } else { &[] };
        out.push(timed(5, || unit_graph_spectrum(&[q], dense)));
        if q <= 9 {
            let (yes, no): (&[u32], &[u32]) = if q == 5 { (&[], &[5]) } else if q <= 4 { (&[q], &[]) } else { (&[], &[]) };
            out.push(timed(6, || strongly_regular(&[q], yes, no)));
        }
        out.push(timed(7, || sl2_kloosterman(&[q])));
        out.push(timed(8, || character_identities(&[q])));
    }
    if ring <= 100_000 {
        let (ones, pairs): (Vec<u32>, Vec<(usize, u32)>) =
            if n == 1 { (if q >= 3 { vec![q] } else { vec![] }, vec![]) } else { (vec![], vec![(n, q)]) };
        out.push(timed(9, || diameters(&ones, &pairs)));
    }
    if n == 2 && q <= 5 {
        out.push(timed(10, || spectral_gap(&[q])));
    }
    out
}

// ------------------------------------------------------------- criteria

fn counting(sizes: &[(usize, u32)]) -> Check {
    for &(n, q) in sizes {
        let f = field(q)?;
        let total = ring_size(n, &f).map_err(err)?;
        let per_det = par::map_reduce(
            total,
            |lo, hi| {
                let mut c = vec![0u64; q as usize];
                for code in lo..hi {
                    c[Matrix::from_code(&f, n, code).det().index()] += 1;
                }
                c
            },
            vec![0u64; q as usize],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
        let gl: u64 = per_det[1..].iter().sum();
        let formula = gl_order(n, q);
        ensure(formula == gl.into(), || format!("|GL_{n}(F_{q})|: formula {formula}, enumerated {gl}"))?;
        let slice = gl / (q as u64 - 1);
        ensure(per_det[1..].iter().all(|&c| c == slice), || format!("det slices uneven at n={n} q={q}"))?;
    }
    Ok(format!("{} sizes, group orders and det slices exact", sizes.len()))
}

/// Partial sum `sum_{i <= terms} (-x)^i / i!`; an upper bound on `e^{-x}`
/// for `0 < x < 1` when `terms` is even.
fn exp_neg_upper(x: &BigRational, terms: u32) -> BigRational {
    assert!(terms.is_multiple_of(2));
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    for i in 0..=terms {
        sum += &term;
        term = -(&term * x) / BigRational::from_integer(BigInt::from(i + 1));
    }
    sum
}

fn phi_bound() -> Check {
    let values: Vec<BigRational> = (1..=20).map(|n| phi(n, 3)).collect();
    ensure(values.windows(2).all(|w| w[1] < w[0]), || "phi(n,3) not strictly decreasing".into())?;
    let last = &values[19];
    let half = BigRational::new(1.into(), 2.into());
    ensure(last > &half, || "phi(20,3) <= 1/2".into())?;
    let x = BigRational::new(581.into(), 1000.into());
    let upper = exp_neg_upper(&x, 30);
    ensure(last > &upper, || "-ln phi(20,3) >= 0.581".into())?;
    let approx = -last.to_f64().unwrap_or(f64::NAN).ln();
    Ok(format!("phi decreasing to n=20, phi(20,3) > 1/2, -ln phi(20,3) = {approx:.6} < 0.581"))
}

fn check_normal_form(a: &Matrix) -> std::result::Result<(), String> {
    let w = sl_normal_form(a);
    ensure(w.verify(), || format!("normal-form witness invalid for {a}"))?;
    let rank = a.rank();
    let det = if rank == a.n() { a.det() } else { Elem::ONE };
    ensure(w.d == canonical_form(a.n(), a.field(), rank, det), || format!("unexpected shape for {a}"))
}

fn normal_form(exhaustive: &[(usize, u32)], sampled: &[(usize, u32)], brute_equivalence: bool) -> Check {
    let mut checked = 0u64;
    for &(n, q) in exhaustive {
        let f = field(q)?;
        let total = ring_size(n, &f).map_err(err)?;
        let bad = par::map_reduce(
            total,
            |lo, hi| (lo..hi).find_map(|c| check_normal_form(&Matrix::from_code(&f, n, c)).err()),
            None,
            |a, b| a.or(b),
        );
        if let Some(e) = bad {
            return Err(e);
        }
        checked += total;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for &(n, q) in sampled {
        let f = field(q)?;
        let sample: Vec<Matrix> = (0..NORMAL_FORM_SAMPLES).map(|_| Matrix::random(n, &f, &mut rng)).collect();
        if let Some(e) = par::map_slice(&sample, |a| check_normal_form(a).err()).into_iter().flatten().next() {
            return Err(e);
        }
        checked += sample.len() as u64;
    }
    if brute_equivalence {
        let f = field(2)?;
        let all = enumerate_matrices(2, &f, MatrixFilter::All).map_err(err)?;
        let sl = enumerate_matrices(2, &f, MatrixFilter::Det(Elem::ONE)).map_err(err)?;
        for a in &all {
            let orbit: HashSet<u64> =
                sl.iter().flat_map(|p| sl.iter().map(move |q| (&(p * a) * q).code())).collect();
            for b in &all {
                let fast = is_sl_equivalent(a, b).map_err(err)?;
                ensure(fast == orbit.contains(&b.code()), || format!("equivalence mismatch for {a}, {b}"))?;
            }
        }
    }
    Ok(format!(
        "{checked} witnesses exact{}",
        if brute_equivalence { "; SL-equivalence matches brute force on Mat_2(F_2)" } else { "" }
    ))
}

fn decompositions(sizes: &[(usize, u32)], brute_zero_mat3_f3: bool) -> Check {
    let mut checked = 0u64;
    for &(n, q) in sizes {
        let f = field(q)?;
        let total = ring_size(n, &f).map_err(err)?;
        let bad = par::map_reduce(
            total,
            |lo, hi| {
                (lo..hi).find_map(|c| {
                    let a = Matrix::from_code(&f, n, c);
                    let units_ok = if n == 1 && q == 2 && !a.is_zero() {
                        true
                    } else {
                        sum_of_two_units(&a).map(|w| verify_decomposition(&w)).unwrap_or(false)
                    };
                    let sl_ok = a.is_zero() || sum_of_two_sl(&a).map(|w| verify_decomposition(&w)).unwrap_or(false);
                    (!(units_ok && sl_ok)).then(|| format!("decomposition failed for {a}"))
                })
            },
            None,
            |a, b| a.or(b),
        );
        if let Some(e) = bad {
            return Err(e);
        }
        let zero = sum_of_sl_zero(n, &f).map_err(err)?;
        let two = n % 2 == 0 || f.p() == 2;
        let expect = if two { DecompositionMode::TwoSl } else { DecompositionMode::ThreeSl };
        ensure(verify_decomposition(&zero) && zero.mode == expect, || format!("zero rule broken at n={n} q={q}"))?;
        checked += total;
    }
    if brute_zero_mat3_f3 {
        let f = field(3)?;
        let sl = enumerate_matrices(3, &f, MatrixFilter::Det(Elem::ONE)).map_err(err)?;
        // S1 + S2 = 0 forces S2 = -S1, so it suffices that det(-S1) != 1
        ensure(sl.iter().all(|s| s.neg().det() != Elem::ONE), || "0 is a sum of two SL_3(F_3) matrices".into())?;
    }
    Ok(format!(
        "{checked} matrices, both decompositions verified{}",
        if brute_zero_mat3_f3 { "; no 2-term SL split of 0 in Mat_3(F_3)" } else { "" }
    ))
}

fn merged_integers(r: &crate::cayley::SpectrumReport) -> std::result::Result<Vec<(i64, u64)>, String> {
    let mut v = Vec::new();
    for m in &r.merged {
        let x = m.eig.re.round();
        ensure(m.eig.im.abs() < 1e-9 && (m.eig.re - x).abs() < 1e-6, || format!("non-integral eigenvalue {}", m.eig))?;
        v.push((x as i64, m.mult));
    }
    v.sort();
    Ok(v)
}

fn unit_graph_spectrum(qs: &[u32], dense: &[u32]) -> Check {
    for &q in qs {
        let f = field(q)?;
        let r = spectrum_by_classes(&CayleyGraphSpec::unit_graph(2, &f)).map_err(err)?;
        let got = merged_integers(&r)?;
        let mut want = unit_mat2_spectrum_closed_form(q as i64);
        want.sort();
        ensure(got == want, || format!("q={q}: spectrum {got:?}, closed form {want:?}"))?;
    }
    for &q in dense {
        let spec = CayleyGraphSpec::unit_graph(2, &field(q)?);
        let oracle = dense_spectrum_oracle(&spec).map_err(err)?;
        let classes = spectrum_by_classes(&spec).map_err(err)?.expanded();
        let worst = oracle.iter().zip(&classes).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        ensure(oracle.len() == classes.len() && worst < 1e-6, || format!("q={q}: dense oracle off by {worst:e}"))?;
    }
    Ok(format!("closed form at q in {qs:?}; dense oracle agrees at q in {dense:?}"))
}

fn strongly_regular(unit: &[u32], sl_yes: &[u32], sl_no: &[u32]) -> Check {
    for &q in unit {
        let got = srg_check_bruteforce(&CayleyGraphSpec::unit_graph(2, &field(q)?)).map_err(err)?;
        let want = srg_params_unit_mat2(q as u64);
        ensure(got == Some(want), || format!("q={q}: unit-graph parameters {got:?}, expected {want:?}"))?;
    }
    for &q in sl_yes {
        let got = srg_check_bruteforce(&CayleyGraphSpec::special(2, &field(q)?)).map_err(err)?;
        ensure(got.is_some(), || format!("q={q}: SL_2 graph not strongly regular"))?;
    }
    for &q in sl_no {
        let got = srg_check_bruteforce(&CayleyGraphSpec::special(2, &field(q)?)).map_err(err)?;
        ensure(got.is_none(), || format!("q={q}: SL_2 graph unexpectedly strongly regular"))?;
    }
    Ok(format!("unit-graph parameters exact at q in {unit:?}; SL_2 regular at {sl_yes:?}, not at {sl_no:?}"))
}

fn sl2_kloosterman(qs: &[u32]) -> Check {
    let mut worst = 0.0f64;
    for &q in qs {
        let f = field(q)?;
        let closed = sl2_spectrum_closed_form(&f);
        let direct = spectrum_by_classes(&CayleyGraphSpec::special(2, &f)).map_err(err)?;
        for (a, b) in closed.classes.iter().zip(&direct.classes) {
            let d = (a.eig - b.eig).norm();
            worst = worst.max(d);
            ensure(a.rep == b.rep && a.mult == b.mult && d < 1e-9, || format!("q={q}, {}: closed {} vs sum {}", a.label, a.eig, b.eig))?;
        }
        for d in f.units() {
            let k = kloosterman(d, &f).map_err(err)?.value;
            ensure(k.abs() <= 2.0 * (q as f64).sqrt() + 1e-12, || format!("q={q}: |K({d})| = {k} above Weil bound"))?;
        }
    }
    Ok(format!("closed form matches class sums (max error {worst:.1e}) at q in {qs:?}; Weil bound holds"))
}

fn character_identities(qs: &[u32]) -> Check {
    let mut count = 0;
    for &q in qs {
        for c in char_sum_identities(&field(q)?).map_err(err)? {
            ensure(c.ok, || format!("q={q}: {} = {:?}, expected {}", c.name, c.computed, c.expected))?;
            count += 1;
        }
    }
    Ok(format!("{count} identities within 1e-9 at q in {qs:?}"))
}

fn diameters(unit_n1: &[u32], pairs: &[(usize, u32)]) -> Check {
    for &q in unit_n1 {
        let d = bfs_diameter(&CayleyGraphSpec::unit_graph(1, &field(q)?)).map_err(err)?;
        ensure(d.connected && d.diameter == 1, || format!("Mat_1(F_{q}) unit-graph: {d:?}"))?;
    }
    for &(n, q) in pairs {
        let f = field(q)?;
        for spec in [CayleyGraphSpec::unit_graph(n, &f), CayleyGraphSpec::special(n, &f)] {
            let d = bfs_diameter(&spec).map_err(err)?;
            ensure(d.connected && d.diameter == 2, || format!("n={n} q={q} {}: {d:?}", spec.connection))?;
        }
        for a in f.units() {
            let d = bfs_diameter(&CayleyGraphSpec::new(n, &f, Connection::Det(a)).map_err(err)?).map_err(err)?;
            ensure(d.connected, || format!("n={n} q={q} det:{a} disconnected"))?;
        }
    }
    Ok(format!("unit-graph diameter 1 at n=1, q in {unit_n1:?}; diameter 2 and all G_alpha connected at {pairs:?}"))
}

fn spectral_gap(qs: &[u32]) -> Check {
    let mut details = Vec::new();
    for &q in qs {
        let f = field(q)?;
        let r = gap_trials(&f, TRIALS, SEED).map_err(err)?;
        ensure(r.failures.is_empty(), || format!("q={q}: trials {:?} lack a witness", r.failures))?;
        let x = non_example_subset(&f);
        for a in f.units() {
            let w = det_difference_witness(&x, &x, a).map_err(err)?;
            ensure(w.is_none(), || format!("q={q}: non-example has a det-{a} difference"))?;
        }
        let qf = q as f64;
        ensure(qf * qf < 2.0 * qf.powi(3) * qf.sqrt() / (qf - 1.0), || format!("q={q}: non-example above threshold"))?;
        details.push(format!("q={q} n*={:.3}", r.nstar_exact));
    }
    Ok(format!("{TRIALS} seeded trials each ({}), non-example has no witness", details.join(", ")))
}

fn sum_product() -> Check {
    let f = field(9)?;
    for skip in 0..9u64 {
        let a = SubsetOfField::new(&f, (0..9).filter(|&c| c != skip)).map_err(err)?;
        let r = sumprod_cover(&a, &a, &a, &a).map_err(err)?;
        ensure(r.covers_all, || format!("(A-A)(A-A) misses elements for A = F_9 minus {skip}"))?;
    }
    let r = sumprod_trials(&f, TRIALS, SEED).map_err(err)?;
    ensure(r.failures.is_empty(), || format!("four-set trials {:?} fail to cover F_9", r.failures))?;
    Ok(format!("all 9 subsets of size 8 cover F_9; {TRIALS} seeded four-set trials cover F_9"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_partial_sum_bounds() {
        let x = BigRational::new(581.into(), 1000.into());
        let upper = exp_neg_upper(&x, 30);
        let approx = (-0.581f64).exp();
        let u = upper.to_f64().unwrap();
        assert!(u >= approx - 1e-15 && u - approx < 1e-12);
    }

    #[test]
    fn small_size_runs_pass() {
        for r in run_at(2, 2) {
            assert!(r.passed, "{r}");
        }
        assert!(run_at(1, 3).iter().all(|r| r.passed));
    }
}
