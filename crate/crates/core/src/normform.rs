//! SL_n-equivalence normal forms.
//!
//! Every `A` in `Mat_n(F_q)` of rank `r` is reduced, using only
//! determinant-one row and column operations, to the diagonal matrix
//! `D = diag(1, ..., 1, d, 0, ..., 0)` with `r` nonzero entries, where
//! `d = 1` when `r < n` and `d = det A` when `r = n`. Two matrices are
//! SL-equivalent exactly when they share `D`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::matring::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Row,
    Column,
}

/// A determinant-one elementary operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ElementaryOp {
    /// Adds `scalar` times line `src` to line `dst` (`src != dst`).
    Type1 { side: Side, src: usize, dst: usize, scalar: Elem },
    /// Scales line `i` by `alpha` and line `j` by `alpha^-1` (`i != j`).
    Type2 { side: Side, i: usize, j: usize, alpha: Elem },
}

impl ElementaryOp {
    pub fn side(&self) -> Side {
        match *self {
            ElementaryOp::Type1 { side, .. } | ElementaryOp::Type2 { side, .. } => side,
        }
    }

    /// The matrix `E` with `op(A) = E A` (row side) or `A E` (column side).
    pub fn matrix(&self, n: usize, field: &Field) -> Matrix {
        let mut e = Matrix::identity(n, field);
        match *self {
            ElementaryOp::Type1 { side: Side::Row, src, dst, scalar } => e.set(dst, src, scalar),
            ElementaryOp::Type1 { side: Side::Column, src, dst, scalar } => e.set(src, dst, scalar),
            ElementaryOp::Type2 { i, j, alpha, .. } => {
                e.set(i, i, alpha);
                e.set(j, j, field.inv(alpha).expect("type-2 scalar is nonzero"));
            }
        }
        e
    }

    /// Applies the operation to `a` in place.
    pub fn apply(&self, a: &mut Matrix) {
        let n = a.n();
        let f = a.field().clone();
        match *self {
            ElementaryOp::Type1 { side, src, dst, scalar } => {
                for t in 0..n {
                    let (from, to) = match side {
                        Side::Row => ((src, t), (dst, t)),
                        Side::Column => ((t, src), (t, dst)),
                    };
                    let v = f.add(a.get(to.0, to.1), f.mul(scalar, a.get(from.0, from.1)));
                    a.set(to.0, to.1, v);
                }
            }
            ElementaryOp::Type2 { side, i, j, alpha } => {
                let beta = f.inv(alpha).expect("type-2 scalar is nonzero");
                for t in 0..n {
                    let (ci, cj) = match side {
                        Side::Row => ((i, t), (j, t)),
                        Side::Column => ((t, i), (t, j)),
                    };
                    a.set(ci.0, ci.1, f.mul(alpha, a.get(ci.0, ci.1)));
                    a.set(cj.0, cj.1, f.mul(beta, a.get(cj.0, cj.1)));
                }
            }
        }
    }
}

/// `P A Q = D` with `det P = det Q = 1`, plus the operations that built it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalFormWitness {
    pub input: Matrix,
    pub p: Matrix,
    pub q: Matrix,
    pub d: Matrix,
    pub ops: Vec<ElementaryOp>,
}

impl NormalFormWitness {
    pub fn rank(&self) -> usize {
        (0..self.d.n()).filter(|&i| !self.d.get(i, i).is_zero()).count()
    }

    /// Re-checks every invariant exactly, including the replay of `ops`.
    pub fn verify(&self) -> bool {
        let (n, f) = (self.input.n(), self.input.field());
        if self.p.det() != Elem::ONE || self.q.det() != Elem::ONE {
            return false;
        }
        if &(&self.p * &self.input) * &self.q != self.d {
            return false;
        }
        let r = self.input.rank();
        if self.d != canonical_form(n, f, r, self.input.det()) {
            return false;
        }
        let mut replay = self.input.clone();
        for op in &self.ops {
            if op.matrix(n, f).det() != Elem::ONE {
                return false;
            }
            op.apply(&mut replay);
        }
        replay == self.d
    }
}

/// The canonical representative of the SL-class with the given rank and
/// determinant. `det` is only consulted when `rank == n`.
pub fn canonical_form(n: usize, field: &Field, rank: usize, det: Elem) -> Matrix {
    let mut diag = vec![Elem::ZERO; n];
    for d in diag.iter_mut().take(rank) {
        *d = Elem::ONE;
    }
    if rank == n && n > 0 {
        diag[n - 1] = det;
    }
    Matrix::diag(field, &diag)
}

struct Reducer {
    a: Matrix,
    p: Matrix,
    q: Matrix,
    ops: Vec<ElementaryOp>,
}

impl Reducer {
    fn push(&mut self, op: ElementaryOp) {
        let n = self.a.n();
        let e = op.matrix(n, self.a.field());
        op.apply(&mut self.a);
        match op.side() {
            Side::Row => self.p = &e * &self.p,
            Side::Column => self.q = &self.q * &e,
        }
        self.ops.push(op);
    }

    fn block_is_zero(&self, t: usize) -> bool {
        let n = self.a.n();
        (t..n).all(|i| (t..n).all(|j| self.a.get(i, j).is_zero()))
    }

    /// Puts a 1 at `(t, t)`.
    fn make_pivot(&mut self, t: usize) {
        let f = self.a.field().clone();
        let n = self.a.n();
        let att = self.a.get(t, t);
        if att == Elem::ONE {
            return;
        }
        if att.is_zero() {
            let (i, j) = (t..n)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .find(|&(i, j)| !self.a.get(i, j).is_zero())
                .expect("block is nonzero");
            let inv = f.inv(self.a.get(i, j)).expect("nonzero");
            if i == t {
                // Row t already carries the nonzero entry at (t, j), j > t.
                self.push(ElementaryOp::Type1 { side: Side::Column, src: j, dst: t, scalar: inv });
            } else {
                // Row t is zero inside the block, so this sets (t, j) to 1.
                self.push(ElementaryOp::Type1 { side: Side::Row, src: i, dst: t, scalar: inv });
                if j != t {
                    self.push(ElementaryOp::Type1 { side: Side::Column, src: j, dst: t, scalar: Elem::ONE });
                }
            }
        } else {
            let alpha = f.inv(att).expect("nonzero");
            self.push(ElementaryOp::Type2 { side: Side::Row, i: t, j: t + 1, alpha });
        }
    }

    fn clear_cross(&mut self, t: usize) {
        let f = self.a.field().clone();
        let n = self.a.n();
        for i in t + 1..n {
            let v = self.a.get(i, t);
            if !v.is_zero() {
                self.push(ElementaryOp::Type1 { side: Side::Row, src: t, dst: i, scalar: f.neg(v) });
            }
        }
        for j in t + 1..n {
            let v = self.a.get(t, j);
            if !v.is_zero() {
                self.push(ElementaryOp::Type1 { side: Side::Column, src: t, dst: j, scalar: f.neg(v) });
            }
        }
    }
}

/// Reduces `a` to its canonical SL-class representative.
pub fn sl_normal_form(a: &Matrix) -> NormalFormWitness {
    let (n, f) = (a.n(), a.field());
    let mut r = Reducer { a: a.clone(), p: Matrix::identity(n, f), q: Matrix::identity(n, f), ops: Vec::new() };
    let mut t = 0;
    // Stop once the trailing block is zero or 1x1.
    while t + 1 < n && !r.block_is_zero(t) {
        r.make_pivot(t);
        r.clear_cross(t);
        t += 1;
    }
    NormalFormWitness { input: a.clone(), p: r.p, q: r.q, d: r.a, ops: r.ops }
}

fn same_shape(a: &Matrix, b: &Matrix) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch(a.n(), b.n()));
    }
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}

pub fn is_gl_equivalent(a: &Matrix, b: &Matrix) -> Result<bool> {
    same_shape(a, b)?;
    Ok(a.rank() == b.rank())
}

pub fn is_sl_equivalent(a: &Matrix, b: &Matrix) -> Result<bool> {
    same_shape(a, b)?;
    Ok(a.rank() == b.rank() && a.det() == b.det())
}

/// A pair `(P, Q)` of determinant-one matrices with `P A Q = B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlCertificate {
    pub p: Matrix,
    pub q: Matrix,
}

impl SlCertificate {
    pub fn verify(&self, a: &Matrix, b: &Matrix) -> bool {
        self.p.det() == Elem::ONE && self.q.det() == Elem::ONE && &(&self.p * a) * &self.q == *b
    }
}

/// Chains the two normal-form witnesses of `a` and `b` through their
/// shared `D`.
pub fn certify_sl_equivalence(a: &Matrix, b: &Matrix) -> Result<SlCertificate> {
    same_shape(a, b)?;
    let wa = sl_normal_form(a);
    let wb = sl_normal_form(b);
    if wa.d != wb.d {
        return Err(Error::NotEquivalent);
    }
    let pb_inv = wb.p.inverse()?;
    let qb_inv = wb.q.inverse()?;
    Ok(SlCertificate { p: &pb_inv * &wa.p, q: &wa.q * &qb_inv })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matring::{enumerate_matrices, MatrixFilter};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field(q: u32) -> Field {
        Field::with_order(q).unwrap()
    }

    #[test]
    fn zero_matrix_is_already_normal() {
        for n in 1..=4 {
            let f = field(3);
            let w = sl_normal_form(&Matrix::zero(n, &f));
            assert_eq!(w.d, Matrix::zero(n, &f));
            assert_eq!(w.p, Matrix::identity(n, &f));
            assert_eq!(w.q, Matrix::identity(n, &f));
            assert!(w.ops.is_empty());
        }
    }

    #[test]
    fn identity_and_one_by_one() {
        let f = field(5);
        let i3 = Matrix::identity(3, &f);
        assert_eq!(sl_normal_form(&i3).d, i3);
        let a = Matrix::from_ints(&f, 1, &[3]);
        let w = sl_normal_form(&a);
        assert_eq!(w.d, a);
        assert!(w.verify());
    }

    #[test]
    fn worked_example_over_f3() {
        let f = field(3);
        let a = Matrix::from_ints(&f, 2, &[0, 2, 1, 1]);
        assert_eq!((a.det(), a.rank()), (Elem::ONE, 2));
        let w = sl_normal_form(&a);
        assert_eq!(w.d, Matrix::identity(2, &f));
        assert_eq!(&(&w.p * &a) * &w.q, w.d);
        assert_eq!((w.p.det(), w.q.det()), (Elem::ONE, Elem::ONE));
        assert!(w.verify());
    }

    #[test]
    fn pivot_from_first_row_and_lower_rows() {
        let f = field(5);
        // (1,1) = 0 and the first nonzero sits in row 1
        let a = Matrix::from_ints(&f, 3, &[0, 3, 0, 1, 0, 0, 0, 0, 2]);
        assert!(sl_normal_form(&a).verify());
        // (1,1) = 0 with the first row empty
        let b = Matrix::from_ints(&f, 3, &[0, 0, 0, 0, 0, 4, 0, 2, 0]);
        let w = sl_normal_form(&b);
        assert!(w.verify());
        assert_eq!(w.rank(), 2);
        // (1,1) not in {0, 1}
        let c = Matrix::from_ints(&f, 2, &[3, 0, 0, 1]);
        let w = sl_normal_form(&c);
        assert!(matches!(w.ops[0], ElementaryOp::Type2 { i: 0, j: 1, .. }));
        assert!(w.verify());
    }

    #[test]
    fn exhaustive_small_cases() {
        for (n, q) in [(2, 2), (2, 3), (2, 4), (3, 2)] {
            let f = field(q);
            for a in enumerate_matrices(n, &f, MatrixFilter::All).unwrap() {
                let w = sl_normal_form(&a);
                assert!(w.verify(), "{a:?}");
                assert_eq!(sl_normal_form(&w.d).d, w.d);
            }
        }
    }

    #[test]
    fn random_replay_soundness() {
        for n in [2, 3] {
            for q in [2, 3, 5] {
                let f = field(q);
                let mut rng = ChaCha8Rng::seed_from_u64((n * 100 + q as usize) as u64);
                for _ in 0..1000 {
                    let a = Matrix::random(n, &f, &mut rng);
                    let w = sl_normal_form(&a);
                    assert!(w.verify());
                    assert!(w.d.is_diagonal());
                }
            }
        }
    }

    #[test]
    fn equivalence_predicates() {
        let f2 = field(2);
        let i2 = Matrix::identity(2, &f2);
        assert!(is_gl_equivalent(&i2, &Matrix::from_ints(&f2, 2, &[1, 1, 1, 0])).unwrap());
        assert!(!is_gl_equivalent(&Matrix::zero(2, &f2), &i2).unwrap());
        let f3 = field(3);
        let d12 = Matrix::from_ints(&f3, 2, &[1, 0, 0, 2]);
        let d21 = Matrix::from_ints(&f3, 2, &[2, 0, 0, 1]);
        assert!(is_sl_equivalent(&d12, &d21).unwrap());
        assert!(!is_sl_equivalent(&Matrix::identity(2, &f3), &d12).unwrap());
        assert!(matches!(is_sl_equivalent(&d12, &Matrix::zero(3, &f3)), Err(Error::DimensionMismatch(2, 3))));
    }

    #[test]
    fn class_sizes_over_f3() {
        let f = field(3);
        let all = enumerate_matrices(2, &f, MatrixFilter::All).unwrap();
        let mut gl = std::collections::BTreeMap::new();
        let mut sl = std::collections::BTreeMap::new();
        for a in &all {
            *gl.entry(a.rank()).or_insert(0) += 1;
            *sl.entry(sl_normal_form(a).d.code()).or_insert(0) += 1;
        }
        assert_eq!(gl.into_values().collect::<Vec<_>>(), vec![1, 32, 48]);
        let mut sizes: Vec<i32> = sl.into_values().collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 24, 24, 32]);
    }

    #[test]
    fn certificates() {
        let f = field(3);
        let d = Matrix::from_ints(&f, 2, &[1, 0, 0, 2]);
        let c = certify_sl_equivalence(&d, &d).unwrap();
        assert!(c.verify(&d, &d));
        let swap = Matrix::from_ints(&f, 2, &[0, 1, 1, 0]);
        let b = &(&swap * &d) * &swap;
        let c = certify_sl_equivalence(&d, &b).unwrap();
        assert!(c.verify(&d, &b));
        assert_eq!(certify_sl_equivalence(&d, &Matrix::identity(2, &f)), Err(Error::NotEquivalent));
    }

    #[test]
    fn certify_matches_bruteforce_orbits() {
        for q in [2, 3] {
            let f = field(q);
            let all = enumerate_matrices(2, &f, MatrixFilter::All).unwrap();
            let sl = enumerate_matrices(2, &f, MatrixFilter::Det(Elem::ONE)).unwrap();
            for a in &all {
                let mut orbit = std::collections::HashSet::new();
                for p in &sl {
                    let pa = p * a;
                    for qm in &sl {
                        orbit.insert((&pa * qm).code());
                    }
                }
                for b in &all {
                    let brute = orbit.contains(&b.code());
                    assert_eq!(is_sl_equivalent(a, b).unwrap(), brute);
                    match certify_sl_equivalence(a, b) {
                        Ok(c) => assert!(brute && c.verify(a, b)),
                        Err(_) => assert!(!brute),
                    }
                }
            }
        }
    }

    #[test]
    fn witness_serializes_with_tagged_ops() {
        let f = field(3);
        let w = sl_normal_form(&Matrix::from_ints(&f, 2, &[0, 2, 1, 1]));
        let v = serde_json::to_value(&w).unwrap();
        assert_eq!(v["d"], "2;3;1,0,0,1");
        assert!(v["ops"][0]["type"].is_string());
    }
}
