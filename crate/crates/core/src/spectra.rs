//! Closed-form spectra on `Mat_2(F_q)` and their brute-force checks:
//! strongly regular parameters of the unit-graph, the determinant-one
//! spectrum through Kloosterman sums, and the trace character identities.

use num_complex::Complex64;
use serde::Serialize;

use crate::cayley::{
    adjacent, tidy, CayleyGraphSpec, ConnectionSet, SpectrumClass, SpectrumReport, GraphLabel,
};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::matring::{enumerate_matrices, ring_size, Matrix, MatrixFilter};
use crate::normform::canonical_form;
use crate::par;

/// Largest vertex count for the common-neighbour scan.
pub const SRG_LIMIT: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SrgParams {
    pub v: u64,
    pub k: u64,
    pub a: u64,
    pub c: u64,
}

impl SrgParams {
    /// `k(k - a - 1) = (v - k - 1) c`.
    pub fn is_feasible(&self) -> bool {
        let (v, k, a, c) = (self.v as i128, self.k as i128, self.a as i128, self.c as i128);
        k * (k - a - 1) == (v - k - 1) * c
    }
}

/// Parameters of the unit-graph on `Mat_2(F_q)`.
pub fn srg_params_unit_mat2(q: u64) -> SrgParams {
    let (q2, q3, q4) = (q * q, q * q * q, q * q * q * q);
    SrgParams { v: q4, k: q4 - q3 - q2 + q, a: q4 + 3 * q - 2 * q3 - q2, c: q4 + q - 2 * q3 }
}

/// The unit-graph spectrum on `Mat_2(F_q)` as `(eigenvalue, multiplicity)`.
pub fn unit_mat2_spectrum_closed_form(q: i64) -> Vec<(i64, u64)> {
    let (q2, q3, q4) = (q * q, q * q * q, q * q * q * q);
    vec![(q4 - q3 - q2 + q, 1), (q, (q4 - q3 - q2 + q) as u64), (q - q2, (q3 + q2 - q - 1) as u64)]
}

/// Dense bitset rows of the adjacency relation.
struct BitAdjacency {
    words: usize,
    bits: Vec<u64>,
}

impl BitAdjacency {
    fn build(spec: &CayleyGraphSpec, total: u64) -> Result<Self> {
        let set = ConnectionSet::new(spec)?;
        let words = total.div_ceil(64) as usize;
        let rows = par::map_slice(&(0..total).collect::<Vec<_>>(), |&u| {
            let um = Matrix::from_code(&spec.field, spec.n, u);
            let mut row = vec![0u64; words];
            for s in &set.members {
                let w = (&um + s).code() as usize;
                row[w / 64] |= 1 << (w % 64);
            }
            row
        });
        Ok(BitAdjacency { words, bits: rows.concat() })
    }

    fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    fn has(&self, u: usize, v: usize) -> bool {
        self.row(u)[v / 64] >> (v % 64) & 1 == 1
    }

    fn common(&self, u: usize, v: usize) -> u64 {
        self.row(u).iter().zip(self.row(v)).map(|(x, y)| (x & y).count_ones() as u64).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Count {
    Unseen,
    Constant(u64),
    Varies,
}

impl Count {
    fn add(self, x: u64) -> Count {
        match self {
            Count::Unseen => Count::Constant(x),
            Count::Constant(y) if y == x => self,
            _ => Count::Varies,
        }
    }

    fn merge(self, other: Count) -> Count {
        match other {
            Count::Unseen => self,
            Count::Constant(x) => self.add(x),
            Count::Varies => Count::Varies,
        }
    }
}

/// Counts common neighbours over every ordered pair of distinct vertices
/// and returns the parameters when both counts are constant. Empty and
/// complete graphs give `None`.
pub fn srg_check_bruteforce(spec: &CayleyGraphSpec) -> Result<Option<SrgParams>> {
    if !spec.is_symmetric() {
        return Err(Error::DirectedGraph);
    }
    let v = ring_size(spec.n, &spec.field)?;
    if v > SRG_LIMIT {
        return Err(Error::TooLarge(format!("{v} vertices exceeds the SRG scan limit of {SRG_LIMIT}")));
    }
    let k = spec.degree();
    if k == 0 || k + 1 >= v {
        return Ok(None);
    }
    let adj = BitAdjacency::build(spec, v)?;
    let (adjacent_count, other_count) = par::map_reduce(
        v,
        |lo, hi| {
            let (mut a, mut c) = (Count::Unseen, Count::Unseen);
            for u in lo as usize..hi as usize {
                for w in 0..v as usize {
                    if u == w {
                        continue;
                    }
                    let m = adj.common(u, w);
                    if adj.has(u, w) {
                        a = a.add(m);
                    } else {
                        c = c.add(m);
                    }
                }
            }
            (a, c)
        },
        (Count::Unseen, Count::Unseen),
        |(a1, c1), (a2, c2)| (a1.merge(a2), c1.merge(c2)),
    );
    match (adjacent_count, other_count) {
        (Count::Constant(a), Count::Constant(c)) => Ok(Some(SrgParams { v, k, a, c })),
        _ => Ok(None),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SrgSpectrum {
    /// `(eigenvalue, multiplicity)`: `k`, then the larger and the smaller
    /// restricted eigenvalue.
    pub eigenvalues: Vec<(f64, u64)>,
    pub delta: i64,
}

fn isqrt_exact(x: i64) -> Option<i64> {
    if x < 0 {
        return None;
    }
    let r = (x as f64).sqrt().round() as i64;
    (r - 1..=r + 1).find(|&s| s >= 0 && s * s == x)
}

/// Eigenvalues `(a - c ± sqrt(D)) / 2` with `D = (a - c)^2 + 4(k - c)`
/// and their multiplicities.
pub fn srg_eigen_from_params(p: &SrgParams) -> Result<SrgSpectrum> {
    let (v, k, a, c) = (p.v as i64, p.k as i64, p.a as i64, p.c as i64);
    let delta = (a - c) * (a - c) + 4 * (k - c);
    let num = 2 * k + (v - 1) * (a - c);
    let (m2, m3, root) = match isqrt_exact(delta) {
        Some(0) | None if delta <= 0 => return Err(Error::InfeasibleParams),
        Some(s) => {
            let (x, y) = ((v - 1) * s - num, (v - 1) * s + num);
            if x % (2 * s) != 0 || y % (2 * s) != 0 || x < 0 || y < 0 {
                return Err(Error::InfeasibleParams);
            }
            (x / (2 * s), y / (2 * s), s as f64)
        }
        None => {
            // irrational eigenvalues force equal multiplicities
            if num != 0 || (v - 1) % 2 != 0 {
                return Err(Error::InfeasibleParams);
            }
            ((v - 1) / 2, (v - 1) / 2, (delta as f64).sqrt())
        }
    };
    let amc = (a - c) as f64;
    Ok(SrgSpectrum {
        eigenvalues: vec![
            (k as f64, 1),
            ((amc + root) / 2.0, m2 as u64),
            ((amc - root) / 2.0, m3 as u64),
        ],
        delta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KloostermanValue {
    pub delta: Elem,
    pub value: f64,
}

/// `sum_{a != 0} chi(a + delta / a)` as a complex number.
pub fn kloosterman_complex(delta: Elem, field: &Field) -> Result<Complex64> {
    field.elem(delta.code() as u32)?;
    if delta.is_zero() {
        return Err(Error::ZeroDelta);
    }
    Ok(field
        .units()
        .map(|a| field.character(field.add(a, field.mul(delta, field.inv(a).expect("unit")))))
        .sum())
}

/// The Kloosterman sum `K(delta)`, which is real: the terms for `a` and
/// `-a` are conjugate in odd characteristic and each term is `±1` in
/// characteristic 2.
pub fn kloosterman(delta: Elem, field: &Field) -> Result<KloostermanValue> {
    let z = kloosterman_complex(delta, field)?;
    assert!(z.im.abs() < 1e-9, "Kloosterman sum {z} is not real");
    Ok(KloostermanValue { delta, value: z.re })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KloostermanRow {
    pub q: u32,
    pub delta: Elem,
    #[serde(rename = "K", serialize_with = "serialize_tidy")]
    pub k: f64,
    #[serde(serialize_with = "serialize_tidy")]
    pub weil_bound: f64,
}

fn serialize_tidy<S: serde::Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(tidy(*x))
}

pub fn kloosterman_table(field: &Field) -> Vec<KloostermanRow> {
    let weil_bound = 2.0 * (field.q() as f64).sqrt();
    field
        .units()
        .map(|d| KloostermanRow {
            q: field.q(),
            delta: d,
            k: kloosterman(d, field).expect("nonzero delta").value,
            weil_bound,
        })
        .collect()
}

/// Determinant-one spectrum on `Mat_2(F_q)`: `q^3 - q` once, `-q` on the
/// rank-one class, and `q K(delta)` on each determinant-`delta` class.
pub fn sl2_spectrum_closed_form(field: &Field) -> SpectrumReport {
    let q = field.q() as i64;
    let mut classes = vec![
        SpectrumClass {
            label: "rank0".into(),
            rep: canonical_form(2, field, 0, Elem::ONE),
            eig: Complex64::new((q * q * q - q) as f64, 0.0),
            mult: 1,
        },
        SpectrumClass {
            label: "rank1".into(),
            rep: canonical_form(2, field, 1, Elem::ONE),
            eig: Complex64::new(-q as f64, 0.0),
            mult: (q * q * q + q * q - q - 1) as u64,
        },
    ];
    for d in field.units() {
        classes.push(SpectrumClass {
            label: format!("det:{d}"),
            rep: canonical_form(2, field, 2, d),
            eig: Complex64::new(q as f64 * kloosterman(d, field).expect("unit").value, 0.0),
            mult: (q * q * q - q) as u64,
        });
    }
    let label = GraphLabel { n: 2, q: field.q(), connection: "det:1".into() };
    SpectrumReport::from_classes(label, classes)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub computed: [f64; 2],
    pub expected: f64,
    pub ok: bool,
}

impl IdentityCheck {
    fn new(name: String, computed: Complex64, expected: f64) -> Self {
        let ok = (computed - expected).norm() < 1e-9;
        IdentityCheck { name, computed: [computed.re, computed.im], expected, ok }
    }
}

fn char_sum(members: &[Matrix], f: impl Fn(&Matrix) -> Elem) -> Complex64 {
    let field = members[0].field();
    members.iter().map(|s| field.character(f(s))).sum()
}

/// Direct sums of `chi` over `GL_2` and `SL_2` compared with their closed forms.
pub fn char_sum_identities(field: &Field) -> Result<Vec<IdentityCheck>> {
    let q = field.q() as f64;
    let gl = enumerate_matrices(2, field, MatrixFilter::Invertible)?;
    let sl = enumerate_matrices(2, field, MatrixFilter::Det(Elem::ONE))?;
    let mut out = vec![
        IdentityCheck::new("gl_s11".into(), char_sum(&gl, |s| s.get(0, 0)), q - q * q),
        IdentityCheck::new("gl_s11_plus_s22".into(), char_sum(&gl, |s| s.trace()), q),
        IdentityCheck::new("sl_s11".into(), char_sum(&sl, |s| s.get(0, 0)), -q),
    ];
    for d in field.units() {
        let sum = char_sum(&sl, |s| field.add(s.get(0, 0), field.mul(d, s.get(1, 1))));
        out.push(IdentityCheck::new(format!("sl_s11_plus_delta_s22:{d}"), sum, q * kloosterman(d, field)?.value));
    }
    Ok(out)
}

/// Left multiplication by `diag(1, ..., 1, alpha)`, carrying the
/// determinant-one digraph onto the determinant-`alpha` one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexMap {
    pub m: Matrix,
}

impl VertexMap {
    pub fn apply(&self, x: &Matrix) -> Matrix {
        &self.m * x
    }
}

pub fn iso_g_alpha(alpha: Elem, n: usize, field: &Field) -> Result<VertexMap> {
    field.elem(alpha.code() as u32)?;
    if alpha.is_zero() {
        return Err(Error::ZeroAlpha);
    }
    let mut diag = vec![Elem::ONE; n];
    diag[n - 1] = alpha;
    Ok(VertexMap { m: Matrix::diag(field, &diag) })
}

/// Exhaustively checks that the map is a bijection and that `u -> v` in
/// the determinant-one digraph iff `Mu -> Mv` in the determinant-`alpha` one.
pub fn check_iso_g_alpha(alpha: Elem, n: usize, field: &Field) -> Result<bool> {
    let map = iso_g_alpha(alpha, n, field)?;
    let g1 = CayleyGraphSpec::special(n, field);
    let ga = CayleyGraphSpec::new(n, field, crate::cayley::Connection::Det(alpha))?;
    let all = enumerate_matrices(n, field, MatrixFilter::All)?;
    let images: Vec<Matrix> = all.iter().map(|x| map.apply(x)).collect();
    let mut seen = vec![false; all.len()];
    for img in &images {
        let c = img.code() as usize;
        if seen[c] {
            return Ok(false);
        }
        seen[c] = true;
    }
    Ok(par::all(all.len() as u64, |i| {
        let (u, mu) = (&all[i as usize], &images[i as usize]);
        all.iter().zip(&images).all(|(v, mv)| adjacent(&g1, u, v).unwrap() == adjacent(&ga, mu, mv).unwrap())
    }))
}

/// Checks that every unit-graph edge lies in exactly one determinant
/// digraph and that those digraphs have no other edges.
pub fn check_edge_partition(n: usize, field: &Field) -> Result<bool> {
    let all = enumerate_matrices(n, field, MatrixFilter::All)?;
    let units = CayleyGraphSpec::unit_graph(n, field);
    let slices: Vec<CayleyGraphSpec> = field
        .units()
        .map(|a| CayleyGraphSpec::new(n, field, crate::cayley::Connection::Det(a)))
        .collect::<Result<_>>()?;
    Ok(all.iter().all(|u| {
        all.iter().all(|v| {
            let hits = slices.iter().filter(|g| adjacent(g, u, v).unwrap()).count();
            hits == adjacent(&units, u, v).unwrap() as usize
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{dense_spectrum_oracle, spectrum_by_classes, Connection};

    fn field(q: u32) -> Field {
        Field::with_order(q).unwrap()
    }

    fn e(c: u16) -> Elem {
        Elem::from_code_unchecked(c)
    }

    #[test]
    fn srg_param_examples() {
        assert_eq!(srg_params_unit_mat2(2), SrgParams { v: 16, k: 6, a: 2, c: 2 });
        let p3 = srg_params_unit_mat2(3);
        assert_eq!(p3, SrgParams { v: 81, k: 48, a: 27, c: 30 });
        assert_eq!(48 * (48 - 27 - 1), (81 - 48 - 1) * 30);
        for q in 2..=9 {
            assert!(srg_params_unit_mat2(q).is_feasible());
        }
    }

    #[test]
    fn srg_bruteforce_unit_graph() {
        for q in [2, 3, 4, 5] {
            let got = srg_check_bruteforce(&CayleyGraphSpec::unit_graph(2, &field(q))).unwrap();
            assert_eq!(got, Some(srg_params_unit_mat2(q as u64)), "q={q}");
        }
    }

    #[test]
    fn srg_bruteforce_special_graph() {
        for q in [2, 3, 4] {
            assert!(srg_check_bruteforce(&CayleyGraphSpec::special(2, &field(q))).unwrap().is_some(), "q={q}");
        }
        assert_eq!(srg_check_bruteforce(&CayleyGraphSpec::special(2, &field(5))).unwrap(), None);
        assert_eq!(srg_check_bruteforce(&CayleyGraphSpec::special(3, &field(3))), Err(Error::DirectedGraph));
        assert!(matches!(srg_check_bruteforce(&CayleyGraphSpec::unit_graph(2, &field(16))), Err(Error::TooLarge(_))));
        // K_5 is complete, hence excluded
        assert_eq!(srg_check_bruteforce(&CayleyGraphSpec::unit_graph(1, &field(5))).unwrap(), None);
    }

    #[test]
    fn srg_eigen_examples() {
        let s = srg_eigen_from_params(&SrgParams { v: 16, k: 6, a: 2, c: 2 }).unwrap();
        assert_eq!(s.eigenvalues, vec![(6.0, 1), (2.0, 6), (-2.0, 9)]);
        let s = srg_eigen_from_params(&SrgParams { v: 81, k: 48, a: 27, c: 30 }).unwrap();
        assert_eq!(s.eigenvalues, vec![(48.0, 1), (3.0, 48), (-6.0, 32)]);
        // Paley(5) is a conference graph
        let s = srg_eigen_from_params(&SrgParams { v: 5, k: 2, a: 0, c: 1 }).unwrap();
        assert_eq!(s.eigenvalues[1].1, 2);
        assert!((s.eigenvalues[1].0 - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-12);
        assert_eq!(srg_eigen_from_params(&SrgParams { v: 10, k: 3, a: 1, c: 2 }), Err(Error::InfeasibleParams));
    }

    #[test]
    fn srg_eigen_matches_closed_form() {
        for q in 2..=9i64 {
            let s = srg_eigen_from_params(&srg_params_unit_mat2(q as u64)).unwrap();
            assert_eq!(s.delta, q.pow(4));
            let got: Vec<(i64, u64)> = s.eigenvalues.iter().map(|&(x, m)| (x as i64, m)).collect();
            assert_eq!(got, unit_mat2_spectrum_closed_form(q));
            assert_eq!(got.iter().map(|x| x.1).sum::<u64>(), q.pow(4) as u64);
            assert_eq!(got.iter().map(|&(x, m)| x * m as i64).sum::<i64>(), 0);
        }
    }

    #[test]
    fn kloosterman_examples() {
        assert!((kloosterman(Elem::ONE, &field(2)).unwrap().value - 1.0).abs() < 1e-12);
        let f3 = field(3);
        assert!((kloosterman(e(1), &f3).unwrap().value + 1.0).abs() < 1e-12);
        assert!((kloosterman(e(2), &f3).unwrap().value - 2.0).abs() < 1e-12);
        assert_eq!(kloosterman(Elem::ZERO, &f3), Err(Error::ZeroDelta));
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27] {
            let f = field(q);
            for d in f.units() {
                let z = kloosterman_complex(d, &f).unwrap();
                assert!(z.im.abs() < 1e-9);
                assert!(z.re.abs() <= 2.0 * (q as f64).sqrt() + 1e-9, "q={q} d={d}");
            }
        }
    }

    #[test]
    fn kloosterman_table_rows() {
        let rows = kloosterman_table(&field(3));
        assert_eq!(rows.len(), 2);
        assert_eq!(serde_json::to_value(&rows[1]).unwrap()["K"], serde_json::json!(2.0));
    }

    #[test]
    fn sl2_closed_form_examples() {
        let merged = |q| {
            let mut v: Vec<(i64, u64)> =
                sl2_spectrum_closed_form(&field(q)).merged.iter().map(|m| (m.eig.re.round() as i64, m.mult)).collect();
            v.sort();
            v
        };
        assert_eq!(merged(2), vec![(-2, 9), (2, 6), (6, 1)]);
        assert_eq!(merged(3), vec![(-3, 56), (6, 24), (24, 1)]);
        assert_eq!(sl2_spectrum_closed_form(&field(3)).classes.len(), 4);
        assert!(sl2_spectrum_closed_form(&field(5)).distinct_count() >= 4);
    }

    #[test]
    fn sl2_closed_form_matches_class_sums() {
        for q in [2, 3, 4, 5, 7] {
            let f = field(q);
            let closed = sl2_spectrum_closed_form(&f);
            let direct = spectrum_by_classes(&CayleyGraphSpec::special(2, &f)).unwrap();
            assert_eq!(closed.classes.len(), direct.classes.len());
            for (a, b) in closed.classes.iter().zip(&direct.classes) {
                assert_eq!(a.rep, b.rep);
                assert_eq!(a.mult, b.mult);
                assert!((a.eig - b.eig).norm() < 1e-9, "q={q} {}", a.label);
            }
        }
        let dense = dense_spectrum_oracle(&CayleyGraphSpec::special(2, &field(3))).unwrap();
        for (x, y) in dense.iter().zip(sl2_spectrum_closed_form(&field(3)).expanded()) {
            assert!((x - y).norm() < 1e-6);
        }
    }

    #[test]
    fn identity_examples() {
        for q in [2, 3, 4, 5, 7] {
            let checks = char_sum_identities(&field(q)).unwrap();
            assert_eq!(checks.len(), 3 + q as usize - 1);
            assert!(checks.iter().all(|c| c.ok), "q={q}: {checks:?}");
        }
        let c2 = char_sum_identities(&field(2)).unwrap();
        assert!((c2[0].computed[0] + 2.0).abs() < 1e-12);
        let c4 = char_sum_identities(&field(4)).unwrap();
        assert!((c4[2].computed[0] + 4.0).abs() < 1e-12);
    }

    #[test]
    fn g_alpha_isomorphism() {
        let f3 = field(3);
        assert_eq!(iso_g_alpha(Elem::ONE, 2, &f3).unwrap().m, Matrix::identity(2, &f3));
        assert_eq!(iso_g_alpha(Elem::ZERO, 2, &f3), Err(Error::ZeroAlpha));
        assert!(check_iso_g_alpha(e(2), 2, &f3).unwrap());
        for q in [2, 3, 4, 5] {
            let f = field(q);
            let base = spectrum_by_classes(&CayleyGraphSpec::special(2, &f)).unwrap().expanded();
            for a in f.units() {
                let g = spectrum_by_classes(&CayleyGraphSpec::new(2, &f, Connection::Det(a)).unwrap()).unwrap();
                for (x, y) in g.expanded().iter().zip(&base) {
                    assert!((x - y).norm() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn edge_partition() {
        for q in [2, 3] {
            assert!(check_edge_partition(2, &field(q)).unwrap());
        }
    }
}
