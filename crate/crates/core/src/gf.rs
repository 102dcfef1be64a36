//! Finite fields `F_q`, `q = p^k <= 256`, with table-driven arithmetic.
//!
//! An element is stored as an integer code whose base-`p` digits
//! (little-endian) are the coefficients of its polynomial representative
//! modulo the defining polynomial. Code 0 is zero and code 1 is one.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 256;

/// An element of some [`Field`], identified by its code.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(u16);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    /// Wraps a raw code without range checking. Use [`Field::elem`] for
    /// untrusted input.
    pub const fn from_code_unchecked(code: u16) -> Self {
        Elem(code)
    }

    pub const fn code(self) -> u16 {
        self.0
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    p: u32,
    k: u32,
    q: u32,
    poly: Vec<u32>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    trace: Vec<u16>,
    chars: Vec<Complex64>,
}

/// A validated finite field. Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[p={}, k={}, poly={:?}]", self.q(), self.p(), self.k(), self.poly())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.poly == other.0.poly)
    }
}

impl Eq for Field {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, k)` with `q = p^k`, if `q` is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

/// Built-in defining polynomials (little-endian, monic).
pub fn default_polynomial(p: u32, k: u32) -> Option<Vec<u32>> {
    match (p, k) {
        (_, 1) => Some(vec![0, 1]),
        (2, 2) => Some(vec![1, 1, 1]),
        (2, 3) => Some(vec![1, 1, 0, 1]),
        (3, 2) => Some(vec![1, 0, 1]),
        (2, 4) => Some(vec![1, 1, 0, 0, 1]),
        (5, 2) => Some(vec![2, 0, 1]),
        (3, 3) => Some(vec![1, 2, 0, 1]),
        _ => None,
    }
}

// --- polynomial helpers over F_p, little-endian coefficient vectors ---

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
        }
        r = trim(r);
    }
    r
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime and small; Fermat.
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// Brute-force irreducibility: no monic divisor of degree `1..=deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut rest = low;
            for _ in 0..d {
                g.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            g.push(1);
            if poly_rem(poly, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn digits(code: u32, p: u32, k: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(k as usize);
    let mut c = code;
    for _ in 0..k {
        out.push(c % p);
        c /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

impl Field {
    /// Builds `F_{p^k}`. Without an explicit polynomial the built-in table
    /// is used; any polynomial is re-verified to be monic and irreducible.
    pub fn new(p: u32, k: u32, poly: Option<&[u32]>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NonPrimeP(p));
        }
        if k == 0 {
            return Err(Error::InvalidPolynomial("extension degree must be at least 1".into()));
        }
        let q = (p as u64).checked_pow(k).filter(|&q| q <= MAX_ORDER as u64);
        let Some(q) = q else {
            return Err(Error::UnsupportedSize { p, k });
        };
        let q = q as u32;
        let poly = match poly {
            Some(c) => c.to_vec(),
            None => default_polynomial(p, k).ok_or(Error::UnsupportedSize { p, k })?,
        };
        if poly.len() != k as usize + 1 {
            return Err(Error::InvalidPolynomial(format!(
                "expected {} coefficients, got {}",
                k + 1,
                poly.len()
            )));
        }
        if poly.iter().any(|&c| c >= p) {
            return Err(Error::InvalidPolynomial(format!("coefficients must lie in 0..{p}")));
        }
        if poly[k as usize] != 1 {
            return Err(Error::InvalidPolynomial("polynomial must be monic".into()));
        }
        if !is_irreducible(&poly, p) {
            return Err(Error::ReduciblePolynomial(poly));
        }
        Ok(Field(Arc::new(build_tables(p, k, q, poly))))
    }

    /// `F_q` for a prime power `q`, using the default polynomial.
    pub fn with_order(q: u32) -> Result<Field> {
        let (p, k) = prime_power(q).ok_or(Error::NonPrimeP(q))?;
        Field::new(p, k, None)
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn poly(&self) -> &[u32] {
        &self.0.poly
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn elem(&self, code: u32) -> Result<Elem> {
        if code < self.q() {
            Ok(Elem(code as u16))
        } else {
            Err(Error::ElementOutOfRange { code, q: self.q() })
        }
    }

    /// The image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.p() as i64) as u16)
    }

    fn check(&self, a: Elem) -> Result<Elem> {
        self.elem(a.0 as u32)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.0.add[a.index() * self.0.q as usize + b.index()])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.0.neg[a.index()])
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.0.mul[a.index() * self.0.q as usize + b.index()])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            Err(Error::ZeroInverse)
        } else {
            Ok(Elem(self.0.inv[a.index()]))
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Range-checked addition for untrusted codes.
    pub fn checked_add(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.add(self.check(a)?, self.check(b)?))
    }

    /// Range-checked multiplication for untrusted codes.
    pub fn checked_mul(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(self.check(a)?, self.check(b)?))
    }

    /// Absolute trace `a + a^p + ... + a^(p^(k-1))`, an element of the prime field.
    #[inline]
    pub fn trace(&self, a: Elem) -> Elem {
        Elem(self.0.trace[a.index()])
    }

    /// The canonical additive character `exp(2 pi i tr(a) / p)`.
    #[inline]
    pub fn character(&self, a: Elem) -> Complex64 {
        self.0.chars[a.index()]
    }

    /// Value of the canonical character on the prime-field element `t`.
    pub fn root_of_unity(&self, t: u32) -> Complex64 {
        Complex64::from_polar(1.0, TAU * (t % self.p()) as f64 / self.p() as f64)
    }

    /// All elements in increasing code order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.q() as u16).map(Elem)
    }

    /// Nonzero elements in increasing code order.
    pub fn units(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..self.q() as u16).map(Elem)
    }

    /// Configuration string in the `p=.. k=.. poly=..` format.
    pub fn config_string(&self) -> String {
        let poly: Vec<String> = self.poly().iter().map(u32::to_string).collect();
        format!("p={} k={} poly={}", self.p(), self.k(), poly.join(","))
    }
}

fn build_tables(p: u32, k: u32, q: u32, poly: Vec<u32>) -> Tables {
    let qs = q as usize;
    let mut add = vec![0u16; qs * qs];
    let mut mul = vec![0u16; qs * qs];
    let digit_cache: Vec<Vec<u32>> = (0..q).map(|c| digits(c, p, k)).collect();
    for a in 0..qs {
        for b in 0..qs {
            let s: Vec<u32> = digit_cache[a]
                .iter()
                .zip(&digit_cache[b])
                .map(|(x, y)| (x + y) % p)
                .collect();
            add[a * qs + b] = undigits(&s, p) as u16;

            let mut prod = vec![0u32; 2 * k as usize];
            for (i, x) in digit_cache[a].iter().enumerate() {
                for (j, y) in digit_cache[b].iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            let mut r = poly_rem(&prod, &poly, p);
            r.resize(k as usize, 0);
            mul[a * qs + b] = undigits(&r, p) as u16;
        }
    }
    let neg: Vec<u16> = (0..qs)
        .map(|a| (0..qs).find(|&b| add[a * qs + b] == 0).unwrap() as u16)
        .collect();
    let inv: Vec<u16> = (0..qs)
        .map(|a| {
            if a == 0 {
                0
            } else {
                (1..qs).find(|&b| mul[a * qs + b] == 1).unwrap() as u16
            }
        })
        .collect();
    let trace: Vec<u16> = (0..qs)
        .map(|a| {
            let mut acc = 0usize;
            let mut x = a;
            for _ in 0..k {
                acc = add[acc * qs + x] as usize;
                // Frobenius: x -> x^p
                let mut y = 1usize;
                for _ in 0..p {
                    y = mul[y * qs + x] as usize;
                }
                x = y;
            }
            acc as u16
        })
        .collect();
    let chars = trace
        .iter()
        .map(|&t| Complex64::from_polar(1.0, TAU * t as f64 / p as f64))
        .collect();
    Tables { p, k, q, poly, add, mul, neg, inv, trace, chars }
}

/// Parsed form of the `p=<int> k=<int> poly=<c0,...,ck>` configuration text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldConfig {
    pub p: u32,
    pub k: u32,
    pub poly: Option<Vec<u32>>,
}

impl FieldConfig {
    pub fn build(&self) -> Result<Field> {
        Field::new(self.p, self.k, self.poly.as_deref())
    }
}

pub fn parse_poly(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|c| c.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad coefficient `{c}`"))))
        .collect()
}

impl FromStr for FieldConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (mut p, mut k, mut poly) = (None, None, None);
        for tok in s.split_whitespace() {
            let (key, val) = tok
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{tok}`")))?;
            let int = || val.parse::<u32>().map_err(|_| Error::Parse(format!("bad integer `{val}`")));
            match key {
                "p" => p = Some(int()?),
                "k" => k = Some(int()?),
                "poly" => poly = Some(parse_poly(val)?),
                _ => return Err(Error::Parse(format!("unknown key `{key}`"))),
            }
        }
        Ok(FieldConfig {
            p: p.ok_or_else(|| Error::Parse("missing p".into()))?,
            k: k.unwrap_or(1),
            poly,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ORDERS: [u32; 10] = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27];

    #[test]
    fn prime_field_default_polynomial() {
        let f = Field::new(2, 1, None).unwrap();
        assert_eq!(f.q(), 2);
        assert_eq!(f.poly(), &[0, 1]);
    }

    #[test]
    fn f9_with_x2_plus_1() {
        // x^2 + 1 has no root mod 3: 0 -> 1, 1 -> 2, 2 -> 5 = 2.
        assert!((0..3u32).all(|x| (x * x + 1) % 3 != 0));
        let f = Field::new(3, 2, Some(&[1, 0, 1])).unwrap();
        assert_eq!(f.q(), 9);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Field::new(4, 1, None).unwrap_err(), Error::NonPrimeP(4));
        assert_eq!(Field::new(3, 2, Some(&[2, 0, 1])).unwrap_err(), Error::ReduciblePolynomial(vec![2, 0, 1]));
        assert!(matches!(Field::new(7, 2, None), Err(Error::UnsupportedSize { .. })));
        assert!(matches!(Field::new(2, 9, None), Err(Error::UnsupportedSize { .. })));
        assert!(matches!(Field::new(2, 2, Some(&[1, 1, 2])), Err(Error::InvalidPolynomial(_))));
        assert!(matches!(Field::new(2, 2, Some(&[1, 1])), Err(Error::InvalidPolynomial(_))));
        // x^2+x+1 over F_2 is fine when given explicitly; x^2+1 = (x+1)^2 is not
        assert!(Field::new(2, 2, Some(&[1, 0, 1])).is_err());
        // a user-supplied polynomial outside the table
        assert!(Field::new(7, 2, Some(&[1, 0, 1])).is_ok());
    }

    #[test]
    fn default_table_entries_all_verify() {
        for q in ORDERS {
            Field::with_order(q).unwrap();
        }
    }

    #[test]
    fn small_products() {
        let f3 = Field::with_order(3).unwrap();
        assert_eq!(f3.mul(Elem(2), Elem(2)), Elem(1));
        let f4 = Field::with_order(4).unwrap();
        // x * x = x^2 = x + 1 mod x^2 + x + 1
        assert_eq!(f4.mul(Elem(2), Elem(2)), Elem(3));
        let f5 = Field::with_order(5).unwrap();
        assert_eq!(f5.inv(Elem(3)).unwrap(), Elem(2));
        assert_eq!(f5.inv(Elem::ZERO), Err(Error::ZeroInverse));
        assert!(f5.checked_add(Elem(5), Elem(1)).is_err());
    }

    #[test]
    fn trace_examples() {
        let f4 = Field::with_order(4).unwrap();
        assert_eq!(f4.trace(Elem::ZERO), Elem::ZERO);
        assert_eq!(f4.trace(Elem::ONE), Elem::ZERO);
        // F_9 = F_3[x]/(x^2+1): x^3 = -x, so tr(x) = x + x^3 = 0
        let f9 = Field::with_order(9).unwrap();
        let x = Elem(3);
        let brute = f9.add(x, f9.pow(x, 3));
        assert_eq!(brute, Elem::ZERO);
        assert_eq!(f9.trace(x), brute);
        // tr(1) = 2 in F_9
        assert_eq!(f9.trace(Elem::ONE), Elem(2));
    }

    #[test]
    fn character_examples() {
        let f3 = Field::with_order(3).unwrap();
        assert!((f3.character(Elem::ZERO) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let w = f3.character(Elem::ONE);
        assert!((w.re + 0.5).abs() < 1e-12 && (w.im - 0.75f64.sqrt()).abs() < 1e-12);
        let f2 = Field::with_order(2).unwrap();
        let s: Complex64 = f2.elements().map(|a| f2.character(a)).sum();
        assert!(s.norm() < 1e-12);
    }

    #[test]
    fn field_axioms_and_character_laws() {
        for q in ORDERS {
            let f = Field::with_order(q).unwrap();
            assert_eq!(f.elements().count(), q as usize);
            assert_eq!(f.units().count(), q as usize - 1);
            let total: Complex64 = f.elements().map(|a| f.character(a)).sum();
            assert!(total.norm() < 1e-12, "q={q}");
            let mut traces = std::collections::BTreeSet::new();
            for a in f.elements() {
                traces.insert(f.trace(a));
                assert!(f.trace(a).code() < f.p() as u16);
                assert!((f.character(a).norm() - 1.0).abs() < 1e-12);
                if !a.is_zero() {
                    let ai = f.inv(a).unwrap();
                    assert_eq!(f.mul(a, ai), Elem::ONE);
                    assert_eq!(f.inv(ai).unwrap(), a);
                }
                for b in f.elements() {
                    let ab = f.add(a, b);
                    assert_eq!(f.trace(ab), f.add(f.trace(a), f.trace(b)));
                    assert!((f.character(a) * f.character(b) - f.character(ab)).norm() < 1e-12);
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                }
            }
            assert_eq!(traces.len(), f.p() as usize, "trace not surjective for q={q}");
        }
    }

    #[test]
    fn distributivity_f8() {
        let f = Field::with_order(8).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                for c in f.elements() {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn config_text_round_trip() {
        let cfg: FieldConfig = "p=3 k=2 poly=1,0,1".parse().unwrap();
        assert_eq!(cfg, FieldConfig { p: 3, k: 2, poly: Some(vec![1, 0, 1]) });
        let f = cfg.build().unwrap();
        assert_eq!(f.config_string(), "p=3 k=2 poly=1,0,1");
        let g: FieldConfig = "p=5 k=1".parse().unwrap();
        assert_eq!(g.poly, None);
        assert!("p=5 z=1".parse::<FieldConfig>().is_err());
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(256), Some((2, 8)));
    }
}
