//! Hermitian eigendecomposition grouped into degenerate energy levels, the
//! stroboscopic propagator `Û(τ) = exp(−iτĤ)`, and detection of exceptional
//! detection periods where two levels satisfy `(E_l − E_l')τ ≡ 0 mod 2π`.

mod jacobi;

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::graph::{Hamiltonian, State};
use crate::linalg;
use crate::tol;

/// One energy level: a real eigenvalue with its orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct EnergyLevel {
    /// The eigenvalue `E_l` shared by the whole level.
    pub energy: f64,
    /// `g_l` mutually orthonormal eigenvectors spanning the level.
    pub eigenvectors: Vec<State>,
}

impl EnergyLevel {
    /// Degeneracy `g_l` of the level.
    pub fn degeneracy(&self) -> usize {
        self.eigenvectors.len()
    }
}

/// A complete eigendecomposition with eigenvalues clustered into levels.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    levels: Vec<EnergyLevel>,
    dim: usize,
    degeneracy_tol: f64,
}

impl SpectralDecomposition {
    /// Levels in ascending energy order.
    pub fn levels(&self) -> &[EnergyLevel] {
        &self.levels
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Absolute tolerance that was used to merge degenerate eigenvalues.
    pub fn degeneracy_tol(&self) -> f64 {
        self.degeneracy_tol
    }

    /// True when the eigenvectors across all levels span the full space.
    pub fn is_complete(&self) -> bool {
        self.levels.iter().map(EnergyLevel::degeneracy).sum::<usize>() == self.dim
    }

    /// Max-norm residual of `Ĥ − Σ_l E_l P_l`, a diagnostic for solver
    /// quality.
    pub fn reconstruction_residual(&self, h: &Hamiltonian) -> f64 {
        let n = self.dim;
        let mut rebuilt = vec![Complex64::new(0.0, 0.0); n * n];
        for level in &self.levels {
            for vec_ in &level.eigenvectors {
                let amps = vec_.amplitudes();
                for i in 0..n {
                    let vi = amps[i] * level.energy;
                    for j in 0..n {
                        rebuilt[i * n + j] += vi * amps[j].conj();
                    }
                }
            }
        }
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((rebuilt[i * n + j] - h.entry(i, j)).norm());
            }
        }
        worst
    }
}

/// A dense unitary `exp(−iτĤ)` remembered together with its period.
#[derive(Debug, Clone)]
pub struct Unitary {
    data: Vec<Complex64>,
    dim: usize,
    tau: f64,
}

impl Unitary {
    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The detection period the propagator was built for.
    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Matrix entry `U_ij`.
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    /// `U v`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        linalg::matvec_complex(&self.data, self.dim, v, &mut out);
        out
    }

    /// Entrywise max-norm of `U U† − 1`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let dot: Complex64 = (0..n)
                    .map(|k| self.data[i * n + k] * self.data[j * n + k].conj())
                    .sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - expect).norm());
            }
        }
        worst
    }
}

/// Full eigendecomposition of a Hermitian matrix with the default relative
/// degeneracy tolerance.
pub fn eigendecompose(h: &Hamiltonian) -> Result<SpectralDecomposition> {
    eigendecompose_with(h, tol::EPS_DEG_REL)
}

/// Full eigendecomposition; eigenvalues closer than
/// `eps_deg_rel · (E_max − E_min)` are merged into one degenerate level.
///
/// Real symmetric matrices are diagonalized directly by cyclic Jacobi
/// rotations; complex Hermitian inputs go through the standard embedding into
/// a real symmetric matrix of twice the dimension.
pub fn eigendecompose_with(h: &Hamiltonian, eps_deg_rel: f64) -> Result<SpectralDecomposition> {
    let n = h.dim();
    if n == 0 {
        return Err(Error::InvalidParameter("empty Hamiltonian".into()));
    }
    let mut pairs: Vec<(f64, Vec<Complex64>)> = if let Some(m) = h.real_matrix() {
        let (vals, vecs) = jacobi::jacobi_symmetric(m.to_vec(), n)?;
        vals.into_iter()
            .enumerate()
            .map(|(k, e)| {
                let row = &vecs[k * n..(k + 1) * n];
                (e, row.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            })
            .collect()
    } else {
        complex_hermitian_eigen(h)?
    };
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let lo = pairs.first().map(|p| p.0).unwrap_or(0.0);
    let hi = pairs.last().map(|p| p.0).unwrap_or(0.0);
    let eps_abs = eps_deg_rel * (hi - lo);
    let states = pairs
        .into_iter()
        .map(|(e, amps)| State::new(amps).map(|s| (e, s)))
        .collect::<Result<Vec<_>>>()?;
    group_levels(states, eps_abs)
}

/// Clusters eigenpairs (sorted ascending by energy) into degenerate levels:
/// adjacent eigenvalues with gap ≤ `eps_deg` share a level, and each merged
/// level is re-orthonormalized by modified Gram-Schmidt.
pub fn group_levels(
    mut pairs: Vec<(f64, State)>,
    eps_deg: f64,
) -> Result<SpectralDecomposition> {
    if pairs.is_empty() {
        return Err(Error::InvalidParameter("no eigenpairs to group".into()));
    }
    let dim = pairs[0].1.dim();
    if pairs.iter().any(|(_, s)| s.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: 0,
        });
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut levels: Vec<EnergyLevel> = Vec::new();
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && pairs[end].0 - pairs[end - 1].0 <= eps_deg {
            end += 1;
        }
        let cluster = &pairs[start..end];
        let energy = cluster.iter().map(|(e, _)| e).sum::<f64>() / cluster.len() as f64;
        let mut vectors: Vec<Vec<Complex64>> = Vec::with_capacity(cluster.len());
        for (_, s) in cluster {
            let mut v = s.amplitudes().to_vec();
            let residual =
                linalg::orthogonalize_twice(&mut v, vectors.iter().map(|b| b.as_slice()));
            if residual < 1e-8 {
                // collinear inputs would silently shrink the basis
                return Err(Error::NoConvergence { residual });
            }
            linalg::normalize(&mut v);
            linalg::fix_phase(&mut v);
            vectors.push(v);
        }
        levels.push(EnergyLevel {
            energy,
            eigenvectors: vectors.into_iter().map(State::from_normalized).collect(),
        });
        start = end;
    }

    Ok(SpectralDecomposition {
        levels,
        dim,
        degeneracy_tol: eps_deg,
    })
}

/// `Û(τ) = Σ_l exp(−iτE_l) P_l` assembled from the level projectors.
pub fn propagator(decomp: &SpectralDecomposition, tau: f64) -> Unitary {
    let n = decomp.dim();
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    for level in decomp.levels() {
        let phase = Complex64::new(0.0, -tau * level.energy).exp();
        for vec_ in &level.eigenvectors {
            let amps = vec_.amplitudes();
            for i in 0..n {
                let vi = phase * amps[i];
                let row = &mut data[i * n..(i + 1) * n];
                for (out, aj) in row.iter_mut().zip(amps) {
                    *out += vi * aj.conj();
                }
            }
        }
    }
    Unitary { data, dim: n, tau }
}

/// Result of the exceptional-τ scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ExceptionalTau {
    /// True when at least one level pair resonates with the period.
    pub exceptional: bool,
    /// Offending `(l, l')` level-index pairs.
    pub pairs: Vec<(usize, usize)>,
}

/// Flags detection periods where `|E_l − E_l'| τ` is within `eps_res` of a
/// multiple of 2π for some pair of distinct levels (distance taken on the
/// circle). The exact formula's τ-independence breaks at such isolated τ.
pub fn is_exceptional_tau(
    decomp: &SpectralDecomposition,
    tau: f64,
    eps_res: f64,
) -> Result<ExceptionalTau> {
    if tau <= 0.0 {
        return Err(Error::InvalidParameter("tau must be positive".into()));
    }
    let two_pi = 2.0 * core::f64::consts::PI;
    let mut pairs = Vec::new();
    let levels = decomp.levels();
    for l in 0..levels.len() {
        for lp in (l + 1)..levels.len() {
            let gap = (levels[l].energy - levels[lp].energy).abs() * tau;
            let rem = gap % two_pi;
            let circle = rem.min(two_pi - rem);
            if circle < eps_res {
                pairs.push((l, lp));
            }
        }
    }
    Ok(ExceptionalTau {
        exceptional: !pairs.is_empty(),
        pairs,
    })
}

/// Eigendecomposition of a complex Hermitian matrix through the real
/// symmetric embedding `[[A, −B], [B, A]]` of `H = A + iB`; each complex
/// eigenvector corresponds to a two-dimensional real eigenspace.
fn complex_hermitian_eigen(h: &Hamiltonian) -> Result<Vec<(f64, Vec<Complex64>)>> {
    let n = h.dim();
    let nn = 2 * n;
    let mut big = vec![0.0; nn * nn];
    for i in 0..n {
        for j in 0..n {
            let z = h.entry(i, j);
            big[i * nn + j] = z.re;
            big[i * nn + (j + n)] = -z.im;
            big[(i + n) * nn + j] = z.im;
            big[(i + n) * nn + (j + n)] = z.re;
        }
    }
    let (vals, vecs) = jacobi::jacobi_symmetric(big, nn)?;
    let mut order: Vec<usize> = (0..nn).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
    let lo = vals[order[0]];
    let hi = vals[order[nn - 1]];
    let pair_tol = (1e-11 * (hi - lo)).max(f64::MIN_POSITIVE);

    let mut out: Vec<(f64, Vec<Complex64>)> = Vec::with_capacity(n);
    let mut start = 0;
    while start < nn {
        let mut end = start + 1;
        while end < nn && vals[order[end]] - vals[order[end - 1]] <= pair_tol {
            end += 1;
        }
        let cluster = &order[start..end];
        if cluster.len() % 2 != 0 {
            return Err(Error::NoConvergence { residual: pair_tol });
        }
        let want = cluster.len() / 2;
        let energy = cluster.iter().map(|&k| vals[k]).sum::<f64>() / cluster.len() as f64;
        let mut found: Vec<Vec<Complex64>> = Vec::with_capacity(want);
        for &k in cluster {
            if found.len() == want {
                break;
            }
            let row = &vecs[k * nn..(k + 1) * nn];
            let mut cand: Vec<Complex64> = (0..n)
                .map(|i| Complex64::new(row[i], row[i + n]))
                .collect();
            let residual =
                linalg::orthogonalize_twice(&mut cand, found.iter().map(|b| b.as_slice()));
            if residual > 1e-6 {
                linalg::normalize(&mut cand);
                found.push(cand);
            }
        }
        if found.len() != want {
            return Err(Error::NoConvergence { residual: pair_tol });
        }
        out.extend(found.into_iter().map(|v| (energy, v)));
        start = end;
    }
    Ok(out)
}
