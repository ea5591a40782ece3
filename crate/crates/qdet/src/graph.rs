//! Graph-family Hamiltonians, quantum states over their node bases, walk
//! counting, and the Ĥ-induced distance between states.
//!
//! Named families carry unit edge weights and zero on-site energies, so the
//! Hamiltonian is exactly the adjacency matrix: `Ĥ_ii = 0`, `Ĥ_ij = 1` when
//! sites i and j are connected. Custom graphs may carry real weights and real
//! on-site energies; everything stays real symmetric. Complex Hermitian
//! matrices can still be wrapped directly via [`Hamiltonian::from_complex`].

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg;
use crate::tol;

/// A description of the graph to build a Hamiltonian from.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    /// Cycle of `sites` nodes (labels `"0"… "L-1"`, edges i — i+1 mod L).
    Ring {
        /// Number of nodes; at least 3.
        sites: usize,
    },
    /// `bits`-dimensional hypercube; nodes are bit strings, edges flip one bit.
    Hypercube {
        /// Number of bits; the dimension is `2^bits`.
        bits: usize,
    },
    /// Open chain of `sites` nodes.
    Path {
        /// Number of nodes; at least 1.
        sites: usize,
    },
    /// Complete graph on `sites` nodes.
    Complete {
        /// Number of nodes; at least 1.
        sites: usize,
    },
    /// Star: node 0 is the hub, all other nodes attach to it.
    Star {
        /// Total number of nodes (hub included); at least 2.
        sites: usize,
    },
    /// Perfect binary tree in heap order (children of i are 2i+1, 2i+2).
    BinaryTree {
        /// Depth of the tree; depth d has `2^(d+1) − 1` nodes.
        depth: usize,
    },
    /// User-supplied weighted graph.
    Custom {
        /// Node labels, in canonical (insertion) order.
        nodes: Vec<String>,
        /// Undirected edges as `(i, j, weight)` index triples.
        edges: Vec<(usize, usize, f64)>,
        /// Diagonal energies, one per node (empty means all zero).
        onsite: Vec<f64>,
    },
}

/// Matrix storage; graph construction always yields the real variant.
#[derive(Debug, Clone, PartialEq)]
enum Matrix {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

/// A labeled Hermitian matrix: the generator of the unitary evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    labels: Vec<String>,
    matrix: Matrix,
}

impl Hamiltonian {
    /// Wraps a real symmetric row-major matrix. Symmetry must hold exactly.
    pub fn from_real(labels: Vec<String>, matrix: Vec<f64>) -> Result<Self> {
        let n = labels.len();
        if matrix.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: matrix.len(),
            });
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if matrix[i * n + j] != matrix[j * n + i] {
                    return Err(Error::NotHermitian(i, j));
                }
            }
        }
        Ok(Self {
            labels,
            matrix: Matrix::Real(matrix),
        })
    }

    /// Wraps a complex Hermitian row-major matrix. Hermiticity must hold
    /// exactly: `m[i][j] == conj(m[j][i])` and real diagonal.
    pub fn from_complex(labels: Vec<String>, matrix: Vec<Complex64>) -> Result<Self> {
        let n = labels.len();
        if matrix.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: matrix.len(),
            });
        }
        for i in 0..n {
            if matrix[i * n + i].im != 0.0 {
                return Err(Error::NotHermitian(i, i));
            }
            for j in (i + 1)..n {
                if matrix[i * n + j] != matrix[j * n + i].conj() {
                    return Err(Error::NotHermitian(i, j));
                }
            }
        }
        if matrix.iter().all(|z| z.im == 0.0) {
            let real = matrix.iter().map(|z| z.re).collect();
            Ok(Self {
                labels,
                matrix: Matrix::Real(real),
            })
        } else {
            Ok(Self {
                labels,
                matrix: Matrix::Complex(matrix),
            })
        }
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Node labels in canonical order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Index of a node label.
    pub fn label_index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Matrix entry `Ĥ_ij`.
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        let n = self.dim();
        match &self.matrix {
            Matrix::Real(m) => Complex64::new(m[i * n + j], 0.0),
            Matrix::Complex(m) => m[i * n + j],
        }
    }

    /// True when all entries are real (every graph-built Hamiltonian is).
    pub fn is_real(&self) -> bool {
        matches!(self.matrix, Matrix::Real(_))
    }

    pub(crate) fn real_matrix(&self) -> Option<&[f64]> {
        match &self.matrix {
            Matrix::Real(m) => Some(m),
            Matrix::Complex(_) => None,
        }
    }

    /// `Ĥ v` for a complex vector.
    pub(crate) fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        match &self.matrix {
            Matrix::Real(m) => linalg::matvec_real_complex(m, n, v, &mut out),
            Matrix::Complex(m) => linalg::matvec_complex(m, n, v, &mut out),
        }
        out
    }

    /// Upper bound on the spectral norm (max absolute row sum).
    pub(crate) fn norm_bound(&self) -> f64 {
        let n = self.dim();
        let row_sum = |i: usize| -> f64 {
            (0..n).map(|j| self.entry(i, j).norm()).sum()
        };
        (0..n).map(row_sum).fold(0.0, f64::max)
    }

    /// True when every entry is 0 or 1 with a zero diagonal, i.e. the matrix
    /// is the adjacency matrix of a simple unweighted graph.
    pub fn is_adjacency(&self) -> bool {
        let n = self.dim();
        let m = match &self.matrix {
            Matrix::Real(m) => m,
            Matrix::Complex(_) => return false,
        };
        for i in 0..n {
            for j in 0..n {
                let v = m[i * n + j];
                let ok = if i == j { v == 0.0 } else { v == 0.0 || v == 1.0 };
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    /// Neighbor lists of the underlying graph (nonzero off-diagonal entries).
    pub(crate) fn neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.dim())
            .filter(|&j| j != i && self.entry(i, j).norm() > 0.0)
            .collect()
    }
}

/// A normalized complex amplitude vector over a Hamiltonian's node basis.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    amps: Vec<Complex64>,
}

impl State {
    /// Normalizes the given amplitudes; errs on the zero vector.
    pub fn new(mut amps: Vec<Complex64>) -> Result<Self> {
        if linalg::normalize(&mut amps) == 0.0 {
            return Err(Error::ZeroState);
        }
        Ok(Self { amps })
    }

    /// Basis vector on node `index`.
    pub fn localized(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: index,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    pub(crate) fn from_normalized(amps: Vec<Complex64>) -> Self {
        debug_assert!((linalg::norm_sqr(&amps) - 1.0).abs() < 1e-9);
        Self { amps }
    }

    /// The amplitude vector (always unit norm).
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &State) -> Complex64 {
        linalg::inner(&self.amps, &other.amps)
    }

    /// Index of the single supporting node if this is a basis vector
    /// (up to global phase), else `None`.
    pub fn localized_on(&self) -> Option<usize> {
        let (idx, peak) = self
            .amps
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))?;
        (peak.norm_sqr() >= 1.0 - 1e-12).then_some(idx)
    }
}

/// How to build a [`State`] over a Hamiltonian's labels.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    /// Basis vector on the named node.
    Node(String),
    /// Arbitrary superposition from `(label, amplitude)` pairs; normalized.
    Pairs(Vec<(String, Complex64)>),
    /// Uniform superposition over the listed labels (empty = all labels).
    Uniform(Vec<String>),
}

/// Builds the Hamiltonian of a graph specification.
///
/// Named families produce adjacency matrices; the hypercube gets bit-string
/// labels ordered lexicographically and its edges flip exactly one bit.
pub fn build_hamiltonian(spec: &GraphSpec) -> Result<Hamiltonian> {
    match spec {
        GraphSpec::Ring { sites } => {
            let l = *sites;
            if l < 3 {
                return Err(Error::InvalidParameter(format!(
                    "ring needs at least 3 sites, got {l}"
                )));
            }
            let edges: Vec<(usize, usize, f64)> =
                (0..l).map(|i| (i, (i + 1) % l, 1.0)).collect();
            assemble(index_labels(l), &edges, &[])
        }
        GraphSpec::Hypercube { bits } => {
            let b = *bits;
            if b == 0 || b > 24 {
                return Err(Error::InvalidParameter(format!(
                    "hypercube bits must be in 1..=24, got {b}"
                )));
            }
            let dim = 1usize << b;
            let labels: Vec<String> = (0..dim).map(|i| bit_label(i, b)).collect();
            let mut edges = Vec::new();
            for i in 0..dim {
                for k in 0..b {
                    let j = i ^ (1 << k);
                    if i < j {
                        edges.push((i, j, 1.0));
                    }
                }
            }
            assemble(labels, &edges, &[])
        }
        GraphSpec::Path { sites } => {
            let l = *sites;
            if l == 0 {
                return Err(Error::InvalidParameter("path needs at least 1 site".into()));
            }
            let edges: Vec<(usize, usize, f64)> =
                (1..l).map(|i| (i - 1, i, 1.0)).collect();
            assemble(index_labels(l), &edges, &[])
        }
        GraphSpec::Complete { sites } => {
            let l = *sites;
            if l == 0 {
                return Err(Error::InvalidParameter(
                    "complete graph needs at least 1 site".into(),
                ));
            }
            let mut edges = Vec::new();
            for i in 0..l {
                for j in (i + 1)..l {
                    edges.push((i, j, 1.0));
                }
            }
            assemble(index_labels(l), &edges, &[])
        }
        GraphSpec::Star { sites } => {
            let l = *sites;
            if l < 2 {
                return Err(Error::InvalidParameter(format!(
                    "star needs at least 2 sites, got {l}"
                )));
            }
            let edges: Vec<(usize, usize, f64)> = (1..l).map(|i| (0, i, 1.0)).collect();
            assemble(index_labels(l), &edges, &[])
        }
        GraphSpec::BinaryTree { depth } => {
            let d = *depth;
            if d > 20 {
                return Err(Error::InvalidParameter(format!(
                    "binary tree depth must be ≤ 20, got {d}"
                )));
            }
            let n = (1usize << (d + 1)) - 1;
            let mut edges = Vec::new();
            for i in 0..n {
                for c in [2 * i + 1, 2 * i + 2] {
                    if c < n {
                        edges.push((i, c, 1.0));
                    }
                }
            }
            assemble(index_labels(n), &edges, &[])
        }
        GraphSpec::Custom {
            nodes,
            edges,
            onsite,
        } => {
            if nodes.is_empty() {
                return Err(Error::InvalidParameter("custom graph has no nodes".into()));
            }
            if !onsite.is_empty() && onsite.len() != nodes.len() {
                return Err(Error::DimensionMismatch {
                    expected: nodes.len(),
                    got: onsite.len(),
                });
            }
            assemble(nodes.clone(), edges, onsite)
        }
    }
}

fn index_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn bit_label(node: usize, bits: usize) -> String {
    (0..bits)
        .rev()
        .map(|k| if node & (1 << k) != 0 { '1' } else { '0' })
        .collect()
}

fn assemble(labels: Vec<String>, edges: &[(usize, usize, f64)], onsite: &[f64]) -> Result<Hamiltonian> {
    let n = labels.len();
    let mut m = vec![0.0; n * n];
    for &(i, j, w) in edges {
        if i >= n || j >= n {
            return Err(Error::EdgeOutOfRange(i, j, n));
        }
        if i == j {
            return Err(Error::SelfLoop(i));
        }
        if m[i * n + j] != 0.0 {
            return Err(Error::DuplicateEdge(i, j));
        }
        m[i * n + j] = w;
        m[j * n + i] = w;
    }
    for (i, &e) in onsite.iter().enumerate() {
        m[i * n + i] = e;
    }
    Hamiltonian::from_real(labels, m)
}

/// Adds independent uniform on-site energies in `[−strength, strength]` to
/// the diagonal, drawn deterministically from `seed` (ChaCha8 keyed by the
/// seed). `strength = 0` returns the input unchanged.
pub fn add_disorder(h: &Hamiltonian, seed: u64, strength: f64) -> Result<Hamiltonian> {
    if strength < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "disorder strength must be ≥ 0, got {strength}"
        )));
    }
    if strength == 0.0 {
        return Ok(h.clone());
    }
    let n = h.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| strength * (2.0 * rng.random::<f64>() - 1.0);
    match &h.matrix {
        Matrix::Real(m) => {
            let mut m = m.clone();
            for i in 0..n {
                m[i * n + i] += draw(&mut rng);
            }
            Hamiltonian::from_real(h.labels.clone(), m)
        }
        Matrix::Complex(m) => {
            let mut m = m.clone();
            for i in 0..n {
                m[i * n + i] += draw(&mut rng);
            }
            Hamiltonian::from_complex(h.labels.clone(), m)
        }
    }
}

/// Builds a normalized state over `h`'s basis from a [`StateSpec`].
pub fn make_state(h: &Hamiltonian, which: &StateSpec) -> Result<State> {
    let n = h.dim();
    match which {
        StateSpec::Node(label) => State::localized(n, h.label_index(label)?),
        StateSpec::Pairs(pairs) => {
            let mut amps = vec![Complex64::new(0.0, 0.0); n];
            for (label, a) in pairs {
                amps[h.label_index(label)?] += a;
            }
            State::new(amps)
        }
        StateSpec::Uniform(labels) => {
            let mut amps = vec![Complex64::new(0.0, 0.0); n];
            if labels.is_empty() {
                amps.fill(Complex64::new(1.0, 0.0));
            } else {
                for label in labels {
                    amps[h.label_index(label)?] = Complex64::new(1.0, 0.0);
                }
            }
            State::new(amps)
        }
    }
}

/// `⟨b|Ĥ^s|a⟩`, computed by repeated matrix-vector application to the basis
/// vector of `a`. For unweighted graphs this is the number of walks of
/// length `s` from `a` to `b` (exact while it fits the f64 integer range).
pub fn walk_count(h: &Hamiltonian, s: usize, a: &str, b: &str) -> Result<Complex64> {
    let ia = h.label_index(a)?;
    let ib = h.label_index(b)?;
    let mut v = State::localized(h.dim(), ia)?.amps;
    for _ in 0..s {
        v = h.apply(&v);
    }
    Ok(v[ib])
}

/// Smallest `s` with `|⟨ψ|Ĥ^s|d⟩|` above the scale-aware zero threshold
/// `EPS_ZERO · (norm bound)^s`; equals the graph distance for localized
/// states on unweighted graphs.
///
/// Errs with [`Error::DarkDisconnected`] when no power up to `dim − 1`
/// connects the two states.
pub fn distance(h: &Hamiltonian, psi: &State, d: &State) -> Result<usize> {
    let n = h.dim();
    if psi.dim() != n || d.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: if psi.dim() != n { psi.dim() } else { d.dim() },
        });
    }
    let bound = h.norm_bound().max(f64::MIN_POSITIVE);
    let log_bound = bound.ln();
    // z tracks the normalized direction of Ĥ^s|d⟩; log_scale the lost norm
    // relative to bound^s, so the threshold stays meaningful at any s.
    let mut z = d.amps.clone();
    let mut log_scale = 0.0;
    for s in 0..n {
        let overlap = linalg::inner(&psi.amps, &z).norm();
        if overlap > 0.0 && overlap.ln() + log_scale > tol::EPS_ZERO.ln() {
            return Ok(s);
        }
        z = h.apply(&z);
        let nz = linalg::normalize(&mut z);
        if nz == 0.0 {
            break;
        }
        log_scale += nz.ln() - log_bound;
    }
    Err(Error::DarkDisconnected(n))
}
