//! Cayley digraphs on the additive group of `Mat_n(F_q)`.
//!
//! The characters of `(Mat_n(F_q), +)` are `x -> chi(Tr(A x))`, one per
//! matrix `A`, and each is an eigenvector of the adjacency operator with
//! eigenvalue `sum_{s in S} chi(Tr(A s))`. That sum is constant on the
//! GL-classes (for `S = GL_n`) or SL-classes (for a determinant slice), so
//! the whole spectrum comes from one representative per class.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::matring::{enumerate_matrices, gl_order, ring_size, Matrix, MatrixFilter};
use crate::normform::canonical_form;
use crate::par;

/// Largest vertex count accepted by BFS.
pub const BFS_LIMIT: u64 = 100_000;
/// Largest vertex count accepted by the dense eigensolver.
pub const DENSE_LIMIT: u64 = 4096;
/// Eigenvalues closer than this are merged.
pub const MERGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connection {
    /// `S = GL_n(F_q)`: the unit-graph.
    Invertible,
    /// `S = {M : det M = alpha}`; `Det(1)` is the special unit-digraph.
    Det(Elem),
}

impl Connection {
    pub fn filter(self) -> MatrixFilter {
        match self {
            Connection::Invertible => MatrixFilter::Invertible,
            Connection::Det(a) => MatrixFilter::Det(a),
        }
    }
}

impl fmt::Display for Connection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Connection::Invertible => write!(f, "gl"),
            Connection::Det(a) => write!(f, "det:{a}"),
        }
    }
}

/// Accepts `gl`, `sl` (determinant one) and `det:<code>`.
impl FromStr for Connection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gl" | "units" => Ok(Connection::Invertible),
            "sl" => Ok(Connection::Det(Elem::ONE)),
            _ => {
                let code = s
                    .strip_prefix("det:")
                    .and_then(|c| c.parse::<u16>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown connection `{s}`; use gl, sl or det:<alpha>")))?;
                Ok(Connection::Det(Elem::from_code_unchecked(code)))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyGraphSpec {
    pub n: usize,
    pub field: Field,
    pub connection: Connection,
}

impl CayleyGraphSpec {
    pub fn new(n: usize, field: &Field, connection: Connection) -> Result<Self> {
        if n == 0 {
            return Err(Error::Unsupported("n must be at least 1".into()));
        }
        if let Connection::Det(a) = connection {
            field.elem(a.code() as u32)?;
            if a.is_zero() {
                return Err(Error::ZeroAlpha);
            }
        }
        Ok(CayleyGraphSpec { n, field: field.clone(), connection })
    }

    pub fn unit_graph(n: usize, field: &Field) -> Self {
        CayleyGraphSpec { n, field: field.clone(), connection: Connection::Invertible }
    }

    pub fn special(n: usize, field: &Field) -> Self {
        CayleyGraphSpec { n, field: field.clone(), connection: Connection::Det(Elem::ONE) }
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn vertex_count(&self) -> Result<u64> {
        ring_size(self.n, &self.field)
    }

    /// `|S|` from the group-order formula.
    pub fn degree(&self) -> u64 {
        let gl: u64 = gl_order(self.n, self.q()).try_into().expect("desk-scale group order");
        match self.connection {
            Connection::Invertible => gl,
            Connection::Det(_) => gl / (self.q() as u64 - 1),
        }
    }

    /// Whether `-S = S`: always for units, otherwise iff `n` is even or
    /// the characteristic is 2.
    pub fn is_symmetric(&self) -> bool {
        matches!(self.connection, Connection::Invertible) || self.n.is_multiple_of(2) || self.field.p() == 2
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.connection.filter().accepts(m)
    }

    pub fn label(&self) -> GraphLabel {
        GraphLabel { n: self.n, q: self.q(), connection: self.connection.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphLabel {
    pub n: usize,
    pub q: u32,
    pub connection: String,
}

/// The enumerated connection set.
#[derive(Debug, Clone)]
pub struct ConnectionSet {
    pub spec: CayleyGraphSpec,
    pub members: Vec<Matrix>,
}

impl ConnectionSet {
    pub fn new(spec: &CayleyGraphSpec) -> Result<Self> {
        let members = enumerate_matrices(spec.n, &spec.field, spec.connection.filter())?;
        Ok(ConnectionSet { spec: spec.clone(), members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Checks `-S = S` by enumeration.
    pub fn is_symmetric(&self) -> bool {
        self.members.iter().all(|s| self.spec.contains(&s.neg()))
    }
}

/// Edge `u -> v` iff `v - u` lies in the connection set.
pub fn adjacent(spec: &CayleyGraphSpec, u: &Matrix, v: &Matrix) -> Result<bool> {
    let diff = v.checked_sub(u)?;
    if diff.n() != spec.n {
        return Err(Error::DimensionMismatch(spec.n, diff.n()));
    }
    Ok(spec.contains(&diff))
}

/// The additive character `x -> chi(Tr(a x))`.
pub fn matrix_character(a: &Matrix, x: &Matrix) -> Complex64 {
    a.field().character(a.trace_of_product(x))
}

/// `sum_{s in S} chi(Tr(a s))`. Terms are tallied by their trace value in
/// the prime field first, so only `p` complex multiplications occur.
pub fn char_eigenvalue(set: &ConnectionSet, a: &Matrix) -> Complex64 {
    let f = a.field();
    let p = f.p() as usize;
    let members = &set.members;
    let counts = par::map_reduce(
        members.len() as u64,
        |lo, hi| {
            let mut c = vec![0u64; p];
            for s in &members[lo as usize..hi as usize] {
                c[f.trace(a.trace_of_product(s)).index()] += 1;
            }
            c
        },
        vec![0u64; p],
        |mut x, y| {
            x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
            x
        },
    );
    counts.iter().enumerate().map(|(t, &c)| f.root_of_unity(t as u32) * c as f64).sum()
}

/// Rounds to ten decimals and clears negative zero, so reports do not
/// carry floating-point noise from the character sums.
pub fn tidy(x: f64) -> f64 {
    let r = (x * 1e10).round() / 1e10;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn serialize_complex<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [tidy(z.re), tidy(z.im)].serialize(s)
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumClass {
    pub label: String,
    pub rep: Matrix,
    #[serde(serialize_with = "serialize_complex")]
    pub eig: Complex64,
    pub mult: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MergedEigenvalue {
    #[serde(serialize_with = "serialize_complex")]
    pub eig: Complex64,
    pub mult: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub graph: GraphLabel,
    pub classes: Vec<SpectrumClass>,
    pub merged: Vec<MergedEigenvalue>,
    pub all_real: bool,
    pub all_integer: bool,
}

impl SpectrumReport {
    /// Builds the report from per-class entries, merging equal eigenvalues
    /// in order of first appearance.
    pub fn from_classes(graph: GraphLabel, classes: Vec<SpectrumClass>) -> Self {
        let mut merged: Vec<MergedEigenvalue> = Vec::new();
        for c in &classes {
            match merged.iter_mut().find(|m| (m.eig - c.eig).norm() < MERGE_TOL) {
                Some(m) => m.mult += c.mult,
                None => merged.push(MergedEigenvalue { eig: c.eig, mult: c.mult }),
            }
        }
        let all_real = classes.iter().all(|c| c.eig.im.abs() < MERGE_TOL);
        let all_integer = all_real && classes.iter().all(|c| (c.eig.re - c.eig.re.round()).abs() < 1e-6);
        SpectrumReport { graph, classes, merged, all_real, all_integer }
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.classes.iter().map(|c| c.mult).sum()
    }

    pub fn distinct_count(&self) -> usize {
        self.merged.len()
    }

    /// Eigenvalue of the class containing the zero matrix (the degree).
    pub fn trivial(&self) -> Complex64 {
        self.classes[0].eig
    }

    /// Multiset of eigenvalues, expanded and sorted by real then imaginary part.
    pub fn expanded(&self) -> Vec<Complex64> {
        let mut v: Vec<Complex64> =
            self.classes.iter().flat_map(|c| std::iter::repeat_n(c.eig, c.mult as usize)).collect();
        sort_complex(&mut v);
        v
    }
}

pub fn sort_complex(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Class key of a matrix: its rank, plus its determinant when the
/// connection is a determinant slice and the matrix is invertible.
fn class_key(spec: &CayleyGraphSpec, m: &Matrix) -> (usize, u16) {
    let r = m.rank();
    match spec.connection {
        Connection::Det(_) if r == spec.n => (r, m.det().code()),
        _ => (r, 1),
    }
}

/// Class representatives in report order, with labels.
pub fn class_representatives(spec: &CayleyGraphSpec) -> Vec<(String, Matrix)> {
    let (n, f) = (spec.n, &spec.field);
    let mut reps: Vec<(String, Matrix)> =
        (0..n).map(|r| (format!("rank{r}"), canonical_form(n, f, r, Elem::ONE))).collect();
    match spec.connection {
        Connection::Invertible => reps.push((format!("rank{n}"), canonical_form(n, f, n, Elem::ONE))),
        Connection::Det(_) => {
            for d in f.units() {
                reps.push((format!("det:{d}"), canonical_form(n, f, n, d)));
            }
        }
    }
    reps
}

/// The spectrum from one character sum per class; multiplicities are
/// class sizes counted by enumerating the ring.
pub fn spectrum_by_classes(spec: &CayleyGraphSpec) -> Result<SpectrumReport> {
    let total = spec.vertex_count()?;
    let set = ConnectionSet::new(spec)?;
    let reps = class_representatives(spec);
    let keys: Vec<(usize, u16)> = reps.iter().map(|(_, m)| class_key(spec, m)).collect();
    let (n, f) = (spec.n, &spec.field);
    let sizes = par::map_reduce(
        total,
        |lo, hi| {
            let mut c = vec![0u64; keys.len()];
            for code in lo..hi {
                let k = class_key(spec, &Matrix::from_code(f, n, code));
                let idx = keys.iter().position(|&x| x == k).expect("every matrix has a class");
                c[idx] += 1;
            }
            c
        },
        vec![0u64; keys.len()],
        |mut x, y| {
            x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
            x
        },
    );
    let eigs = par::map_slice(&reps, |(_, m)| char_eigenvalue(&set, m));
    let classes = reps
        .into_iter()
        .zip(eigs)
        .zip(sizes)
        .map(|(((label, rep), eig), mult)| SpectrumClass { label, rep, eig, mult })
        .collect();
    Ok(SpectrumReport::from_classes(spec.label(), classes))
}

fn neighbours<'a>(v: &'a Matrix, set: &'a ConnectionSet) -> impl Iterator<Item = u64> + 'a {
    set.members.iter().map(move |s| (v + s).code())
}

/// Out-distances from `source`; unreachable vertices get `u32::MAX`.
pub fn bfs_distances(spec: &CayleyGraphSpec, set: &ConnectionSet, source: u64) -> Result<Vec<u32>> {
    let total = spec.vertex_count()?;
    if total > BFS_LIMIT {
        return Err(Error::TooLarge(format!("{total} vertices exceeds the BFS limit of {BFS_LIMIT}")));
    }
    let mut dist = vec![u32::MAX; total as usize];
    dist[source as usize] = 0;
    let mut seen = 1u64;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        if seen == total {
            break;
        }
        let um = Matrix::from_code(&spec.field, spec.n, u);
        for w in neighbours(&um, set) {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = dist[u as usize] + 1;
                seen += 1;
                queue.push_back(w);
            }
        }
    }
    Ok(dist)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DiameterReport {
    pub connected: bool,
    /// Largest out-distance from the source; meaningful when connected.
    pub diameter: u32,
}

/// Connectivity and diameter from a BFS rooted at the zero matrix.
///
/// A Cayley digraph is vertex-transitive (translation by `g` is an
/// automorphism), so every vertex has the same out-eccentricity and a
/// single source suffices.
pub fn bfs_diameter(spec: &CayleyGraphSpec) -> Result<DiameterReport> {
    let set = ConnectionSet::new(spec)?;
    let dist = bfs_distances(spec, &set, 0)?;
    let connected = dist.iter().all(|&d| d != u32::MAX);
    let diameter = dist.iter().copied().filter(|&d| d != u32::MAX).max().unwrap_or(0);
    Ok(DiameterReport { connected, diameter })
}

/// Materialized adjacency matrix, rows and columns in vertex-code order.
pub fn adjacency_matrix(spec: &CayleyGraphSpec) -> Result<DMatrix<f64>> {
    let total = spec.vertex_count()?;
    if total > DENSE_LIMIT {
        return Err(Error::TooLarge(format!("{total} vertices exceeds the dense limit of {DENSE_LIMIT}")));
    }
    let set = ConnectionSet::new(spec)?;
    let mut adj = DMatrix::<f64>::zeros(total as usize, total as usize);
    for u in 0..total {
        let um = Matrix::from_code(&spec.field, spec.n, u);
        for w in neighbours(&um, &set) {
            adj[(u as usize, w as usize)] = 1.0;
        }
    }
    Ok(adj)
}

/// Eigenvalues of the explicit adjacency matrix from a numeric
/// eigensolver, sorted by real part. Independent of the character route.
pub fn dense_spectrum_oracle(spec: &CayleyGraphSpec) -> Result<Vec<Complex64>> {
    let adj = adjacency_matrix(spec)?;
    let symmetric = adj == adj.transpose();
    let mut eigs: Vec<Complex64> = if symmetric {
        adj.symmetric_eigenvalues().iter().map(|&x| Complex64::new(x, 0.0)).collect()
    } else {
        adj.complex_eigenvalues().iter().copied().collect()
    };
    sort_complex(&mut eigs);
    Ok(eigs)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapBound {
    /// `|V| / |S| * max |lambda|` over nontrivial characters.
    pub nstar_exact: f64,
    /// Closed-form upper bound: `2 q^5 sqrt(q) / (q^3 - q)` from the Weil
    /// bound for determinant slices of `Mat_2`; equals `nstar_exact`
    /// elsewhere.
    pub nstar_weil: f64,
}

pub fn spectral_gap_bound(spec: &CayleyGraphSpec) -> Result<GapBound> {
    let report = spectrum_by_classes(spec)?;
    let v = spec.vertex_count()? as f64;
    let s = spec.degree() as f64;
    let max_nontrivial = report.classes[1..].iter().map(|c| c.eig.norm()).fold(0.0, f64::max);
    let nstar_exact = v / s * max_nontrivial;
    let q = spec.q() as f64;
    let nstar_weil = match spec.connection {
        Connection::Det(_) if spec.n == 2 => 2.0 * q.powi(5) * q.sqrt() / (q.powi(3) - q),
        _ => nstar_exact,
    };
    Ok(GapBound { nstar_exact, nstar_weil })
}
