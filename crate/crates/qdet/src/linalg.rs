//! Small dense complex-vector kernels shared by the physics modules.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// Hermitian inner product `⟨a|b⟩ = Σ conj(a_i) b_i`.
pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

pub(crate) fn norm(v: &[Complex64]) -> f64 {
    norm_sqr(v).sqrt()
}

/// Scales `v` to unit norm and returns the original norm (0.0 if `v = 0`,
/// in which case `v` is left untouched).
pub(crate) fn normalize(v: &mut [Complex64]) -> f64 {
    let n = norm(v);
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
    n
}

/// `v ← v − ⟨b|v⟩ b` for a unit vector `b`; returns the removed coefficient.
pub(crate) fn project_out(v: &mut [Complex64], b: &[Complex64]) -> Complex64 {
    let c = inner(b, v);
    for (x, y) in v.iter_mut().zip(b) {
        *x -= c * y;
    }
    c
}

/// Rotates a global phase so the first component with modulus above
/// `1e-12 · max|v_i|` becomes real and positive. Deterministic output phases
/// make states comparable across runs.
pub(crate) fn fix_phase(v: &mut [Complex64]) {
    let peak = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return;
    }
    let cut = 1e-12 * peak;
    if let Some(z) = v.iter().find(|z| z.norm() > cut) {
        let phase = z.conj() / z.norm();
        if (phase - Complex64::new(1.0, 0.0)).norm() > 0.0 {
            for x in v.iter_mut() {
                *x *= phase;
            }
        }
    }
}

/// Dense real symmetric/general matvec `y = M v`, row-major `n × n`.
pub(crate) fn matvec_real(m: &[f64], n: usize, v: &[f64], y: &mut [f64]) {
    debug_assert_eq!(m.len(), n * n);
    for (row, out) in m.chunks_exact(n).zip(y.iter_mut()) {
        *out = row.iter().zip(v).map(|(a, b)| a * b).sum();
    }
}

/// Dense complex matvec `y = M v`, row-major `n × n`.
pub(crate) fn matvec_complex(m: &[Complex64], n: usize, v: &[Complex64], y: &mut [Complex64]) {
    debug_assert_eq!(m.len(), n * n);
    for (row, out) in m.chunks_exact(n).zip(y.iter_mut()) {
        *out = row.iter().zip(v).map(|(a, b)| a * b).sum();
    }
}

/// Real matrix applied to a complex vector by splitting real and imaginary
/// parts; roughly twice as fast as promoting the matrix to complex.
pub(crate) fn matvec_real_complex(m: &[f64], n: usize, v: &[Complex64], y: &mut [Complex64]) {
    let mut re = vec![0.0; n];
    let mut im = vec![0.0; n];
    for (i, z) in v.iter().enumerate() {
        re[i] = z.re;
        im[i] = z.im;
    }
    let mut re_out = vec![0.0; n];
    let mut im_out = vec![0.0; n];
    matvec_real(m, n, &re, &mut re_out);
    matvec_real(m, n, &im, &mut im_out);
    for (i, out) in y.iter_mut().enumerate() {
        *out = Complex64::new(re_out[i], im_out[i]);
    }
}

/// Two-pass modified Gram-Schmidt of `v` against an orthonormal set.
/// Returns the residual norm (the vector is left unnormalized).
pub(crate) fn orthogonalize_twice<'a, I>(v: &mut [Complex64], basis: I) -> f64
where
    I: Iterator<Item = &'a [Complex64]> + Clone,
{
    for b in basis.clone() {
        project_out(v, b);
    }
    for b in basis {
        project_out(v, b);
    }
    norm(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_conjugates_left_argument() {
        let a = [Complex64::new(0.0, 1.0)];
        let b = [Complex64::new(0.0, 1.0)];
        assert_eq!(inner(&a, &b), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn phase_fix_makes_leading_component_positive() {
        let mut v = [Complex64::new(0.0, -0.6), Complex64::new(0.8, 0.0)];
        fix_phase(&mut v);
        assert!((v[0].re - 0.6).abs() < 1e-15);
        assert!(v[0].im.abs() < 1e-15);
    }

    #[test]
    fn gram_schmidt_removes_components() {
        let b = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let mut v = [Complex64::new(3.0, 1.0), Complex64::new(0.0, 2.0)];
        let r = orthogonalize_twice(&mut v, core::iter::once(&b[..]));
        assert!(v[0].norm() < 1e-15);
        assert!((r - 2.0).abs() < 1e-12);
    }
}
