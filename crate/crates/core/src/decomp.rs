//! Constructive decompositions of matrices into sums of units and of
//! determinant-one matrices.
//!
//! Base cases are small explicit tables for one canonical representative
//! per class; any other matrix of the same rank (and determinant) is
//! reached by transporting the table row along an SL-equivalence
//! `A = P T Q`, which preserves determinants of the summands because
//! `det P = det Q = 1`. Larger sizes recurse on diagonal blocks.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::matring::{ring_size, Matrix};
use crate::normform::{certify_sl_equivalence, sl_normal_form};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionMode {
    TwoUnits,
    TwoSl,
    ThreeSl,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionWitness {
    pub mode: DecompositionMode,
    pub summands: Vec<Matrix>,
    pub target: Matrix,
}

/// A canonical target with an explicit pair of summands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub target: Matrix,
    pub summands: [Matrix; 2],
}

/// Re-checks every witness invariant exactly.
pub fn verify_decomposition(w: &DecompositionWitness) -> bool {
    let (n, f) = (w.target.n(), w.target.field());
    let mut sum = Matrix::zero(n, f);
    for s in &w.summands {
        match sum.checked_add(s) {
            Ok(next) => sum = next,
            Err(_) => return false,
        }
    }
    if sum != w.target {
        return false;
    }
    match w.mode {
        DecompositionMode::TwoUnits => w.summands.len() == 2 && w.summands.iter().all(Matrix::is_invertible),
        DecompositionMode::TwoSl => w.summands.len() == 2 && w.summands.iter().all(|s| s.det() == Elem::ONE),
        DecompositionMode::ThreeSl => {
            w.summands.len() == 3 && w.target.is_zero() && w.summands.iter().all(|s| s.det() == Elem::ONE)
        }
    }
}

fn transport(row: &TableRow, a: &Matrix) -> Result<[Matrix; 2]> {
    let c = certify_sl_equivalence(&row.target, a)?;
    Ok(row.summands.clone().map(|s| &(&c.p * &s) * &c.q))
}

fn witness(mode: DecompositionMode, summands: Vec<Matrix>, target: &Matrix) -> DecompositionWitness {
    DecompositionWitness { mode, summands, target: target.clone() }
}

// ---------------------------------------------------------------- units

/// Two-unit decompositions of `diag(1^r, 0)` over `F_2` for `n` in {2, 3}.
pub fn units_table_f2(n: usize, rank: usize, field: &Field) -> Option<TableRow> {
    if field.q() != 2 || rank == 0 || rank > n {
        return None;
    }
    let m = |v: &[i64]| Matrix::from_ints(field, n, v);
    let summands = match (n, rank) {
        (2, 1) => [m(&[0, 1, 1, 0]), m(&[1, 1, 1, 0])],
        (2, 2) => [m(&[1, 1, 1, 0]), m(&[0, 1, 1, 1])],
        (3, 1) => [m(&[0, 1, 0, 1, 0, 0, 0, 0, 1]), m(&[1, 1, 0, 1, 0, 0, 0, 0, 1])],
        (3, 2) => [m(&[0, 1, 0, 0, 0, 1, 1, 0, 0]), m(&[1, 1, 0, 0, 1, 1, 1, 0, 0])],
        (3, 3) => [m(&[1, 1, 0, 0, 0, 1, 1, 0, 0]), m(&[0, 1, 0, 0, 1, 1, 1, 0, 1])],
        _ => return None,
    };
    let mut diag = vec![Elem::ZERO; n];
    diag[..rank].fill(Elem::ONE);
    Some(TableRow { target: Matrix::diag(field, &diag), summands })
}

/// Writes `a` as a sum of two invertible matrices.
///
/// Fails only for the nonzero element of `Mat_1(F_2)`.
pub fn sum_of_two_units(a: &Matrix) -> Result<DecompositionWitness> {
    let pair = units_pair(a)?;
    Ok(witness(DecompositionMode::TwoUnits, pair.to_vec(), a))
}

fn units_pair(a: &Matrix) -> Result<[Matrix; 2]> {
    let (n, f) = (a.n(), a.field());
    if a.is_zero() {
        let i = Matrix::identity(n, f);
        return Ok([i.clone(), i.neg()]);
    }
    if f.q() > 2 {
        return pigeonhole_units(a);
    }
    match n {
        0 => Err(Error::Unsupported("empty matrix".into())),
        1 => Err(Error::TrivialCaseF2),
        2 | 3 => {
            let row = units_table_f2(n, a.rank(), f).expect("rank is in 1..=n");
            transport(&row, a)
        }
        _ => units_f2_block(a),
    }
}

/// For `q > 2` fewer than half of all matrices are singular, so some unit
/// `U` leaves `A - U` invertible; the first one in code order is taken.
/// Beyond the enumeration cap the split is read off the normal form.
fn pigeonhole_units(a: &Matrix) -> Result<[Matrix; 2]> {
    let (n, f) = (a.n(), a.field());
    let Ok(total) = ring_size(n, f) else {
        return diagonal_units(a);
    };
    for code in 0..total {
        let u = Matrix::from_code(f, n, code);
        if !u.is_invertible() {
            continue;
        }
        let rest = a - &u;
        if rest.is_invertible() {
            return Ok([u, rest]);
        }
    }
    unreachable!("density of units exceeds 1/2 for q > 2")
}

/// `A = P^-1 D Q^-1` with `D` diagonal; each diagonal entry `x` splits as
/// `u + (x - u)` with `u` outside `{0, x}`, which exists when `q > 2`.
fn diagonal_units(a: &Matrix) -> Result<[Matrix; 2]> {
    let (n, f) = (a.n(), a.field());
    let w = sl_normal_form(a);
    let us: Vec<Elem> = (0..n)
        .map(|i| {
            let x = w.d.get(i, i);
            f.units().find(|&u| u != x).expect("q > 2")
        })
        .collect();
    let rest: Vec<Elem> = (0..n).map(|i| f.sub(w.d.get(i, i), us[i])).collect();
    let (pinv, qinv) = (w.p.inverse()?, w.q.inverse()?);
    Ok([Matrix::diag(f, &us), Matrix::diag(f, &rest)].map(|s| &(&pinv * &s) * &qinv))
}

/// Block induction over `F_2` for `n >= 4`.
fn units_f2_block(a: &Matrix) -> Result<[Matrix; 2]> {
    let (n, f) = (a.n(), a.field());
    if a.is_invertible() {
        let head = units_table_f2(2, 2, f).expect("table row").summands;
        let tail = units_pair(&Matrix::identity(n - 2, f))?;
        let row = TableRow {
            target: Matrix::identity(n, f),
            summands: [Matrix::block_diag(&head[0], &tail[0]), Matrix::block_diag(&head[1], &tail[1])],
        };
        return transport(&row, a);
    }
    // Singular: the normal form has a vanishing last row and column.
    let w = sl_normal_form(a);
    let inner = units_pair(&w.d.principal_block(0, n - 1))?;
    let one = Matrix::identity(1, f);
    let pieces = [Matrix::block_diag(&inner[0], &one), Matrix::block_diag(&inner[1], &one.neg())];
    let (pinv, qinv) = (w.p.inverse()?, w.q.inverse()?);
    Ok(pieces.map(|s| &(&pinv * &s) * &qinv))
}

// ------------------------------------------------------------------- SL

/// Two-SL decompositions of one representative per nonzero SL-class for
/// `n` in {2, 3}. In odd characteristic the `n = 3` targets are
/// `diag(2,0,0)`, `diag(2,1,0)` and `diag(2,1,det/2)` rather than the
/// canonical form; callers transport them.
pub fn sl_table(n: usize, rank: usize, det: Elem, field: &Field) -> Option<TableRow> {
    if rank == 0 || rank > n {
        return None;
    }
    let m = |v: &[i64]| Matrix::from_ints(field, n, v);
    let x = |i: usize, j: usize, v: Elem, mut base: Matrix| {
        base.set(i, j, v);
        base
    };
    let char2 = field.p() == 2;
    let row = match (n, rank) {
        (2, 1) => TableRow { target: m(&[1, 0, 0, 0]), summands: [m(&[0, -1, 1, 0]), m(&[1, 1, -1, 0])] },
        (2, 2) => {
            let alpha = det;
            let ai = field.inv(alpha).ok()?;
            let (na, nai) = (field.neg(alpha), field.neg(ai));
            let s1 = x(0, 1, ai, x(1, 0, na, x(1, 1, alpha, Matrix::zero(2, field))));
            let s2 = x(0, 0, Elem::ONE, x(0, 1, nai, x(1, 0, alpha, Matrix::zero(2, field))));
            TableRow { target: Matrix::diag(field, &[Elem::ONE, alpha]), summands: [s1, s2] }
        }
        (3, 1) if char2 => TableRow {
            target: m(&[1, 0, 0, 0, 0, 0, 0, 0, 0]),
            summands: [m(&[1, 1, 0, 1, 0, 0, 0, 0, 1]), m(&[0, 1, 0, 1, 0, 0, 0, 0, 1])],
        },
        (3, 2) if char2 => TableRow {
            target: m(&[1, 0, 0, 0, 1, 0, 0, 0, 0]),
            summands: [m(&[1, 1, 0, 0, 1, 1, 1, 0, 0]), m(&[0, 1, 0, 0, 0, 1, 1, 0, 0])],
        },
        (3, 3) if char2 => {
            let alpha = det;
            if alpha.is_zero() {
                return None;
            }
            TableRow {
                target: Matrix::diag(field, &[Elem::ONE, Elem::ONE, alpha]),
                summands: [m(&[1, 1, 0, 0, 0, 1, 1, 0, 0]), x(2, 2, alpha, m(&[0, 1, 0, 0, 1, 1, 1, 0, 0]))],
            }
        }
        (3, 1) => TableRow {
            target: m(&[2, 0, 0, 0, 0, 0, 0, 0, 0]),
            summands: [m(&[1, 0, 0, 0, 0, -1, 0, 1, 0]), m(&[1, 0, 0, 0, 0, 1, 0, -1, 0])],
        },
        (3, 2) => TableRow {
            target: m(&[2, 0, 0, 0, 1, 0, 0, 0, 0]),
            summands: [m(&[1, 0, 0, 0, 0, -1, 0, 1, 0]), m(&[1, 0, 0, 0, 1, 1, 0, -1, 0])],
        },
        (3, 3) => {
            let alpha = det;
            let ai = field.inv(alpha).ok()?;
            let half = field.div(alpha, field.from_int(2)).ok()?;
            let s1 = x(1, 2, ai, x(2, 1, field.neg(alpha), x(2, 2, half, m(&[1, 0, 0, 0, 0, 0, 0, 0, 0]))));
            let s2 = x(1, 2, field.neg(ai), x(2, 1, alpha, m(&[1, 0, 0, 0, 1, 0, 0, 0, 0])));
            TableRow { target: Matrix::diag(field, &[field.from_int(2), Elem::ONE, half]), summands: [s1, s2] }
        }
        _ => return None,
    };
    Some(row)
}

/// Writes `a` as a sum of two determinant-one matrices.
///
/// The zero matrix is accepted only when `n` is even or the
/// characteristic is 2.
pub fn sum_of_two_sl(a: &Matrix) -> Result<DecompositionWitness> {
    let pair = sl_pair(a)?;
    Ok(witness(DecompositionMode::TwoSl, pair.to_vec(), a))
}

fn sl_pair(a: &Matrix) -> Result<[Matrix; 2]> {
    let (n, f) = (a.n(), a.field());
    if n < 2 {
        return Err(Error::Unsupported("SL decompositions need n >= 2".into()));
    }
    if a.is_zero() {
        if n % 2 == 0 || f.p() == 2 {
            let i = Matrix::identity(n, f);
            return Ok([i.clone(), i.neg()]);
        }
        return Err(Error::ZeroNeedsThree);
    }
    let w = sl_normal_form(a);
    let pieces = canonical_sl_pair(&w.d)?;
    let (pinv, qinv) = (w.p.inverse()?, w.q.inverse()?);
    Ok(pieces.map(|s| &(&pinv * &s) * &qinv))
}

/// Decomposes a nonzero canonical form `d`.
fn canonical_sl_pair(d: &Matrix) -> Result<[Matrix; 2]> {
    let (n, f) = (d.n(), d.field());
    if n <= 3 {
        let row = sl_table(n, d.rank(), d.det(), f).expect("nonzero class has a table row");
        if row.target == *d {
            return Ok(row.summands);
        }
        return transport(&row, d);
    }
    let head = sl_pair(&d.principal_block(0, n - 2))?;
    let tail = sl_pair(&d.principal_block(n - 2, 2))?;
    Ok([Matrix::block_diag(&head[0], &tail[0]), Matrix::block_diag(&head[1], &tail[1])])
}

/// The zero matrix as a sum of two SL matrices when `n` is even or the
/// characteristic is 2, and of three otherwise.
pub fn sum_of_sl_zero(n: usize, field: &Field) -> Result<DecompositionWitness> {
    let zero = Matrix::zero(n, field);
    if n < 2 {
        return Err(Error::Unsupported("SL decompositions need n >= 2".into()));
    }
    if n.is_multiple_of(2) || field.p() == 2 {
        return sum_of_two_sl(&zero);
    }
    let s = Matrix::identity(n, field);
    let [u1, u2] = sl_pair(&s.neg())?;
    Ok(witness(DecompositionMode::ThreeSl, vec![s, u1, u2], &zero))
}
