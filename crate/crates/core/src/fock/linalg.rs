use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub(crate) const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Above this dimension the spectral norm is estimated by Lanczos instead of a
/// dense SVD.
pub const DENSE_NORM_LIMIT: usize = 400;

const LANCZOS_MAX_STEPS: usize = 120;

/// `exp(i h)` for hermitian `h`, via its eigendecomposition.
pub fn expi_hermitian(h: &CMatrix) -> CMatrix {
    let eig = SymmetricEigen::new(h.clone());
    let v = &eig.eigenvectors;
    let phases = eig.eigenvalues.map(|l| Complex64::from_polar(1.0, l));
    let mut scaled = v.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= phases[j];
    }
    scaled * v.adjoint()
}

/// Largest entry modulus. (`camax` in nalgebra uses `|re| + |im|` instead.)
pub fn max_modulus(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest singular value of a dense matrix.
pub fn dense_spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().max()
}

/// Largest eigenvalue of the hermitian positive operator `x -> apply(x)`,
/// by Lanczos with full reorthogonalization.
pub(crate) fn lanczos_max_eigenvalue<F>(dim: usize, mut apply: F) -> f64
where
    F: FnMut(&CVector) -> CVector,
{
    if dim == 0 {
        return 0.0;
    }
    let start = CVector::from_fn(dim, |j, _| {
        let t = j as f64;
        Complex64::new(1.0 + 0.5 * (0.7 * t).cos(), 0.3 * (1.3 * t).sin())
    });
    let mut basis: Vec<CVector> = vec![&start / Complex64::from(start.norm())];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut last_ritz = f64::NAN;

    for step in 0..LANCZOS_MAX_STEPS.min(dim) {
        let q = &basis[step];
        let mut w = apply(q);
        let alpha = q.dotc(&w).re;
        alphas.push(alpha);
        for _ in 0..2 {
            for b in &basis {
                let c = b.dotc(&w);
                w -= b * c;
            }
        }
        let beta = w.norm();
        let ritz = tridiagonal_max(&alphas, &betas);
        let scale = alphas
            .iter()
            .fold(0.0f64, |m, a| m.max(a.abs()))
            .max(ritz.abs());
        if beta <= 1e-13 * scale || scale == 0.0 {
            return ritz;
        }
        if step % 8 == 7 {
            if (ritz - last_ritz).abs() <= 1e-13 * ritz.abs() {
                return ritz;
            }
            last_ritz = ritz;
        }
        betas.push(beta);
        basis.push(w / Complex64::from(beta));
    }
    tridiagonal_max(&alphas, &betas[..alphas.len().saturating_sub(1)])
}

fn tridiagonal_max(alphas: &[f64], betas: &[f64]) -> f64 {
    let n = alphas.len();
    let mut t = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        t[(i, i)] = alphas[i];
        if i + 1 < n {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    SymmetricEigen::new(t).eigenvalues.max()
}

/// Haar-random unitary: QR of a complex Gaussian matrix with the phases of
/// `R`'s diagonal pushed into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for (j, mut col) in q.column_iter_mut().enumerate() {
        let d = r[(j, j)];
        let n = d.norm();
        if n > 0.0 {
            col *= d / n;
        }
    }
    q
}
