//! The matrix ring `Mat_n(F_q)`: arithmetic, rank and determinant,
//! enumeration of the ring and its unit subsets, and the group-order
//! counting formulas.

use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{prime_power, Elem, Field};

/// Enumeration refuses rings with more than `2^ENUMERATION_BITS` elements.
pub const ENUMERATION_BITS: u32 = 20;

/// A square matrix over a finite field, stored row-major.
#[derive(Clone)]
pub struct Matrix {
    n: usize,
    field: Field,
    entries: Vec<Elem>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.entries == other.entries && self.field == other.field
    }
}

impl Eq for Matrix {}

impl Hash for Matrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.entries.hash(state);
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Prints the `n;q;e0,e1,...` literal.
impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let codes: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "{};{};{}", self.n, self.field.q(), codes.join(","))
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Matrix {
    pub fn zero(n: usize, field: &Field) -> Matrix {
        Matrix { n, field: field.clone(), entries: vec![Elem::ZERO; n * n] }
    }

    pub fn identity(n: usize, field: &Field) -> Matrix {
        let mut m = Matrix::zero(n, field);
        for i in 0..n {
            m.entries[i * n + i] = Elem::ONE;
        }
        m
    }

    pub fn diag(field: &Field, diagonal: &[Elem]) -> Matrix {
        let n = diagonal.len();
        let mut m = Matrix::zero(n, field);
        for (i, &d) in diagonal.iter().enumerate() {
            m.entries[i * n + i] = d;
        }
        m
    }

    pub fn from_entries(field: &Field, n: usize, entries: Vec<Elem>) -> Result<Matrix> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(n * n, entries.len()));
        }
        for e in &entries {
            field.elem(e.code() as u32)?;
        }
        Ok(Matrix { n, field: field.clone(), entries })
    }

    /// Builds a matrix from element codes given row by row.
    pub fn from_codes(field: &Field, n: usize, codes: &[u32]) -> Result<Matrix> {
        let entries = codes.iter().map(|&c| field.elem(c)).collect::<Result<Vec<_>>>()?;
        Matrix::from_entries(field, n, entries)
    }

    /// Builds a matrix from integers reduced into the prime subfield
    /// (so `-1` means `p - 1`).
    pub fn from_ints(field: &Field, n: usize, ints: &[i64]) -> Matrix {
        assert_eq!(ints.len(), n * n, "expected {} entries", n * n);
        Matrix { n, field: field.clone(), entries: ints.iter().map(|&v| field.from_int(v)).collect() }
    }

    /// Inverse of [`Matrix::code`].
    pub fn from_code(field: &Field, n: usize, mut code: u64) -> Matrix {
        let q = field.q() as u64;
        let entries = (0..n * n)
            .map(|_| {
                let e = Elem::from_code_unchecked((code % q) as u16);
                code /= q;
                e
            })
            .collect();
        Matrix { n, field: field.clone(), entries }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, field: &Field, rng: &mut R) -> Matrix {
        let q = field.q() as u16;
        Matrix {
            n,
            field: field.clone(),
            entries: (0..n * n).map(|_| Elem::from_code_unchecked(rng.random_range(0..q))).collect(),
        }
    }

    /// Parses the `n;q;e0,...` literal over the given field.
    pub fn parse_literal(s: &str, field: &Field) -> Result<Matrix> {
        let mut parts = s.trim().splitn(3, ';');
        let (Some(n), Some(q), Some(body)) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse(format!("matrix literal `{s}` must look like n;q;e0,e1,...")));
        };
        let n: usize = n.trim().parse().map_err(|_| Error::Parse(format!("bad dimension `{n}`")))?;
        let q: u32 = q.trim().parse().map_err(|_| Error::Parse(format!("bad field order `{q}`")))?;
        if q != field.q() {
            return Err(Error::FieldMismatch);
        }
        let codes = body
            .split(',')
            .map(|c| c.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad entry `{c}`"))))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_codes(field, n, &codes)
    }

    /// Parses a literal, building `F_q` from the default polynomial table.
    pub fn from_literal(s: &str) -> Result<Matrix> {
        let q: u32 = s
            .split(';')
            .nth(1)
            .and_then(|q| q.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("matrix literal `{s}` lacks a field order")))?;
        if prime_power(q).is_none() {
            return Err(Error::NonPrimeP(q));
        }
        let field = Field::with_order(q)?;
        Matrix::parse_literal(s, &field)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.entries[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// Base-`q` vertex index: `sum entries[i] * q^i`.
    pub fn code(&self) -> u64 {
        let q = self.field.q() as u64;
        self.entries.iter().rev().fold(0, |acc, e| acc * q + e.code() as u64)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j).is_zero()))
    }

    fn compatible(&self, other: &Matrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Matrix) -> Result<Matrix> {
        self.compatible(other)?;
        let f = &self.field;
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Matrix { n: self.n, field: f.clone(), entries })
    }

    pub fn checked_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.compatible(other)?;
        let f = &self.field;
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(Matrix { n: self.n, field: f.clone(), entries })
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix> {
        self.compatible(other)?;
        let (n, f) = (self.n, &self.field);
        let mut out = Matrix::zero(n, f);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let idx = i * n + j;
                    out.entries[idx] = f.add(out.entries[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Matrix {
        let f = &self.field;
        Matrix { n: self.n, field: f.clone(), entries: self.entries.iter().map(|&a| f.neg(a)).collect() }
    }

    pub fn scale(&self, c: Elem) -> Matrix {
        let f = &self.field;
        Matrix { n: self.n, field: f.clone(), entries: self.entries.iter().map(|&a| f.mul(c, a)).collect() }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                t.entries[j * self.n + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn trace(&self) -> Elem {
        (0..self.n).fold(Elem::ZERO, |acc, i| self.field.add(acc, self.get(i, i)))
    }

    /// `Tr(self * other)` without forming the product.
    pub fn trace_of_product(&self, other: &Matrix) -> Elem {
        let (n, f) = (self.n, &self.field);
        let mut acc = Elem::ZERO;
        for i in 0..n {
            for j in 0..n {
                acc = f.add(acc, f.mul(self.get(i, j), other.get(j, i)));
            }
        }
        acc
    }

    /// Gaussian elimination with the lowest-index nonzero pivot; returns
    /// `(rank, det)`.
    fn eliminate(&self) -> (usize, Elem) {
        let (n, f) = (self.n, &self.field);
        let mut a = self.entries.clone();
        let mut det = Elem::ONE;
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&r| !a[r * n + col].is_zero()) else {
                det = Elem::ZERO;
                continue;
            };
            if piv != rank {
                for j in 0..n {
                    a.swap(piv * n + j, rank * n + j);
                }
                det = f.neg(det);
            }
            let pv = a[rank * n + col];
            det = f.mul(det, pv);
            let pinv = f.inv(pv).expect("pivot is nonzero");
            for r in rank + 1..n {
                let factor = f.mul(a[r * n + col], pinv);
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = f.mul(factor, a[rank * n + j]);
                    a[r * n + j] = f.sub(a[r * n + j], v);
                }
            }
            rank += 1;
        }
        (rank, det)
    }

    pub fn det(&self) -> Elem {
        self.eliminate().1
    }

    pub fn rank(&self) -> usize {
        self.eliminate().0
    }

    pub fn is_invertible(&self) -> bool {
        !self.det().is_zero()
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Matrix> {
        let (n, f) = (self.n, &self.field);
        let mut a = self.entries.clone();
        let mut inv = Matrix::identity(n, f).entries;
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r * n + col].is_zero()).ok_or(Error::SingularMatrix)?;
            for j in 0..n {
                a.swap(piv * n + j, col * n + j);
                inv.swap(piv * n + j, col * n + j);
            }
            let pinv = f.inv(a[col * n + col])?;
            for j in 0..n {
                a[col * n + j] = f.mul(a[col * n + j], pinv);
                inv[col * n + j] = f.mul(inv[col * n + j], pinv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * n + col];
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    a[r * n + j] = f.sub(a[r * n + j], f.mul(factor, a[col * n + j]));
                    inv[r * n + j] = f.sub(inv[r * n + j], f.mul(factor, inv[col * n + j]));
                }
            }
        }
        Ok(Matrix { n, field: f.clone(), entries: inv })
    }

    /// The `size x size` block whose top-left corner is `(start, start)`.
    pub fn principal_block(&self, start: usize, size: usize) -> Matrix {
        let mut b = Matrix::zero(size, &self.field);
        for i in 0..size {
            for j in 0..size {
                b.set(i, j, self.get(start + i, start + j));
            }
        }
        b
    }

    /// `[[a, 0], [0, b]]`.
    pub fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
        let n = a.n + b.n;
        let mut m = Matrix::zero(n, &a.field);
        for i in 0..a.n {
            for j in 0..a.n {
                m.set(i, j, a.get(i, j));
            }
        }
        for i in 0..b.n {
            for j in 0..b.n {
                m.set(a.n + i, a.n + j, b.get(i, j));
            }
        }
        m
    }
}

impl std::ops::Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.checked_add(rhs).expect("matrix shapes must agree")
    }
}

impl std::ops::Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.checked_sub(rhs).expect("matrix shapes must agree")
    }
}

impl std::ops::Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).expect("matrix shapes must agree")
    }
}

impl std::ops::Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix::neg(self)
    }
}

/// Which matrices an enumeration yields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFilter {
    All,
    Invertible,
    Det(Elem),
}

impl MatrixFilter {
    pub fn accepts(&self, m: &Matrix) -> bool {
        match *self {
            MatrixFilter::All => true,
            MatrixFilter::Invertible => m.is_invertible(),
            MatrixFilter::Det(a) => m.det() == a,
        }
    }
}

/// `q^(n^2)` when it is at most `2^ENUMERATION_BITS`.
pub fn ring_size(n: usize, field: &Field) -> Result<u64> {
    let bits = (n * n) as f64 * (field.q() as f64).log2();
    if bits > ENUMERATION_BITS as f64 + 1e-9 {
        return Err(Error::TooLarge(format!(
            "Mat_{n}(F_{}) has 2^{bits:.1} elements; enumeration is capped at 2^{ENUMERATION_BITS}",
            field.q()
        )));
    }
    Ok((field.q() as u64).pow((n * n) as u32))
}

/// Matrices passing `filter` with codes in `[lo, hi)`, in code order.
pub fn enumerate_range(
    n: usize,
    field: &Field,
    filter: MatrixFilter,
    lo: u64,
    hi: u64,
) -> Result<impl Iterator<Item = Matrix> + '_> {
    let total = ring_size(n, field)?;
    let hi = hi.min(total);
    Ok((lo.min(hi)..hi).map(move |c| Matrix::from_code(field, n, c)).filter(move |m| filter.accepts(m)))
}

/// All matrices passing `filter`, in increasing code order.
pub fn enumerate_matrices(n: usize, field: &Field, filter: MatrixFilter) -> Result<Vec<Matrix>> {
    Ok(enumerate_range(n, field, filter, 0, u64::MAX)?.collect())
}

/// `(q^n - 1)(q^n - q)...(q^n - q^(n-1))`.
pub fn gl_order(n: usize, q: u32) -> BigUint {
    let q = BigUint::from(q);
    let qn = q.pow(n as u32);
    (0..n as u32).map(|i| &qn - q.pow(i)).product()
}

pub fn sl_order(n: usize, q: u32) -> BigUint {
    gl_order(n, q) / BigUint::from(q - 1)
}

/// Density of invertible matrices, `prod_{i=1..n} (1 - q^-i)`, exactly.
pub fn phi(n: usize, q: u32) -> BigRational {
    let q = BigRational::from_integer(q.into());
    (1..=n as i32).fold(BigRational::one(), |acc, i| acc * (BigRational::one() - q.pow(-i)))
}

/// Group orders for `Mat_n(F_q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupCounts {
    pub n: usize,
    pub q: u32,
    pub gl_order: BigUint,
    pub sl_order: BigUint,
    pub ring_order: BigUint,
    pub phi: BigRational,
}

impl GroupCounts {
    pub fn new(n: usize, q: u32) -> GroupCounts {
        GroupCounts {
            n,
            q,
            gl_order: gl_order(n, q),
            sl_order: sl_order(n, q),
            ring_order: BigUint::from(q).pow((n * n) as u32),
            phi: phi(n, q),
        }
    }

    /// The `{"n","q","gl","sl","phi":"a/b"}` report record.
    pub fn to_json(&self) -> serde_json::Value {
        let num = |b: &BigUint| -> serde_json::Value {
            match b.to_u64() {
                Some(v) => v.into(),
                None => b.to_string().into(),
            }
        };
        serde_json::json!({
            "n": self.n,
            "q": self.q,
            "gl": num(&self.gl_order),
            "sl": num(&self.sl_order),
            "phi": format!("{}/{}", self.phi.numer(), self.phi.denom()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field(q: u32) -> Field {
        Field::with_order(q).unwrap()
    }

    #[test]
    fn det_rank_trace_examples() {
        let f3 = field(3);
        let i2 = Matrix::identity(2, &f3);
        assert_eq!((i2.det(), i2.rank(), i2.trace()), (Elem::ONE, 2, f3.from_int(2)));
        for q in [2, 3, 4, 5] {
            let f = field(q);
            let e = Matrix::from_ints(&f, 2, &[1, 0, 0, 0]);
            assert_eq!((e.det(), e.rank(), e.trace()), (Elem::ZERO, 1, Elem::ONE));
        }
        let f5 = field(5);
        assert_eq!(Matrix::from_ints(&f5, 2, &[0, 1, -1, 0]).det(), Elem::ONE);
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        // Independent 3x3 route: Sarrus' rule.
        let f = field(7);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let m = Matrix::random(3, &f, &mut rng);
            let g = |i, j| m.get(i, j);
            let t = |a: Elem, b: Elem, c: Elem| f.mul(f.mul(a, b), c);
            let pos = f.add(f.add(t(g(0, 0), g(1, 1), g(2, 2)), t(g(0, 1), g(1, 2), g(2, 0))), t(g(0, 2), g(1, 0), g(2, 1)));
            let neg = f.add(f.add(t(g(0, 2), g(1, 1), g(2, 0)), t(g(0, 0), g(1, 2), g(2, 1))), t(g(0, 1), g(1, 0), g(2, 2)));
            assert_eq!(m.det(), f.sub(pos, neg));
        }
    }

    #[test]
    fn arithmetic_examples() {
        let f7 = field(7);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = Matrix::random(3, &f7, &mut rng);
        assert!((&m + &m.neg()).is_zero());
        let i = Matrix::identity(3, &f7);
        assert_eq!(i.inverse().unwrap(), i);
        let f2 = field(2);
        let a = Matrix::from_ints(&f2, 2, &[1, 1, 1, 0]);
        assert_eq!(a.inverse().unwrap(), Matrix::from_ints(&f2, 2, &[0, 1, 1, 1]));
        assert_eq!(Matrix::zero(2, &f2).inverse(), Err(Error::SingularMatrix));
        assert!(matches!(a.checked_add(&Matrix::zero(3, &f2)), Err(Error::DimensionMismatch(2, 3))));
        assert_eq!(a.checked_add(&Matrix::zero(2, &f7)), Err(Error::FieldMismatch));
    }

    #[test]
    fn inverse_and_multiplicativity() {
        for (n, q) in [(2, 3), (2, 4), (3, 5), (4, 2)] {
            let f = field(q);
            let mut rng = ChaCha8Rng::seed_from_u64(q as u64);
            for _ in 0..1000 {
                let a = Matrix::random(n, &f, &mut rng);
                let b = Matrix::random(n, &f, &mut rng);
                assert_eq!((&a * &b).det(), f.mul(a.det(), b.det()));
                if let Ok(ai) = a.inverse() {
                    assert_eq!(&a * &ai, Matrix::identity(n, &f));
                } else {
                    assert!(a.det().is_zero());
                }
            }
        }
    }

    #[test]
    fn code_is_a_bijection() {
        let f = field(3);
        for c in 0..81 {
            assert_eq!(Matrix::from_code(&f, 2, c).code(), c);
        }
    }

    #[test]
    fn literal_round_trip() {
        let f = field(5);
        let m = Matrix::from_ints(&f, 2, &[1, 2, 3, 4]);
        assert_eq!(m.to_string(), "2;5;1,2,3,4");
        assert_eq!(Matrix::parse_literal("2;5;1,2,3,4", &f).unwrap(), m);
        assert_eq!(Matrix::from_literal("2;5;1,2,3,4").unwrap(), m);
        assert!(Matrix::parse_literal("2;3;1,2,0,1", &f).is_err());
        assert!(Matrix::parse_literal("2;5;1,2,3", &f).is_err());
        assert!(Matrix::parse_literal("2;5;1,2,3,9", &f).is_err());
        assert!(Matrix::from_literal("2;6;1,2,3,4").is_err());
    }

    #[test]
    fn group_orders() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            assert_eq!(gl_order(1, q), BigUint::from(q - 1));
        }
        assert_eq!(gl_order(2, 2), BigUint::from(6u32));
        assert_eq!(gl_order(2, 3), BigUint::from(48u32));
        assert_eq!(sl_order(2, 3), BigUint::from(24u32));
    }

    #[test]
    fn enumeration_counts() {
        let f2 = field(2);
        assert_eq!(enumerate_matrices(2, &f2, MatrixFilter::Invertible).unwrap().len(), 6);
        let f3 = field(3);
        for a in f3.units() {
            assert_eq!(enumerate_matrices(2, &f3, MatrixFilter::Det(a)).unwrap().len(), 24);
        }
        let all = enumerate_matrices(2, &f3, MatrixFilter::All).unwrap();
        assert!(all.windows(2).all(|w| w[0].code() < w[1].code()));
        let part: usize = (0..4)
            .map(|i| enumerate_range(2, &f3, MatrixFilter::Invertible, i * 20, (i + 1) * 20 + if i == 3 { 1 } else { 0 }).unwrap().count())
            .sum();
        assert_eq!(part, 48);
        assert!(matches!(enumerate_matrices(3, &field(5), MatrixFilter::All), Err(Error::TooLarge(_))));
    }

    #[test]
    fn rank_and_det_slices_exhaustive() {
        for (n, q) in [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3)] {
            let f = field(q);
            let mut by_rank = vec![0u64; n + 1];
            let mut by_det = vec![0u64; q as usize];
            for m in enumerate_range(n, &f, MatrixFilter::All, 0, u64::MAX).unwrap() {
                let (r, d) = (m.rank(), m.det());
                assert_eq!(r == n, !d.is_zero());
                by_rank[r] += 1;
                by_det[d.index()] += 1;
            }
            assert_eq!(by_rank.iter().sum::<u64>(), (q as u64).pow((n * n) as u32));
            let sl = sl_order(n, q).to_u64().unwrap();
            assert!(by_det[1..].iter().all(|&c| c == sl), "(n,q)=({n},{q})");
        }
    }

    #[test]
    fn phi_values_and_bounds() {
        assert_eq!(phi(1, 3), BigRational::new(2.into(), 3.into()));
        assert_eq!(phi(2, 2), BigRational::new(6.into(), 16.into()));
        let half = BigRational::new(1.into(), 2.into());
        for n in 1..20 {
            assert!(phi(n + 1, 3) < phi(n, 3));
        }
        for q in [3, 4, 5, 7, 8, 9] {
            for n in 1..=20 {
                assert!(phi(n, q) > half);
            }
        }
        let counts = GroupCounts::new(2, 2);
        assert_eq!(counts.to_json().to_string(), r#"{"gl":6,"n":2,"phi":"3/8","q":2,"sl":6}"#);
    }
}
