//! Commutation structure of the four generators `(x1, x2, p1, p2)`.
//!
//! Every relation of the noncommutative Heisenberg algebra is a c-number, so
//! the whole algebra is captured by a real antisymmetric 4x4 matrix `omega`
//! with `[g_i, g_j] = i * omega[i][j]`. Degree-one combinations of the
//! generators are plain coefficient vectors and their commutators are the
//! bilinear form `u^T omega v`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default half-width of the critical band, relative to `hbar^2`.
pub const DEFAULT_CRITICAL_BAND: f64 = 1e-12;

/// Generator indices in the fixed global ordering.
pub const X1: usize = 0;
pub const X2: usize = 1;
pub const P1: usize = 2;
pub const P2: usize = 3;

/// Parameters `(theta, gamma, hbar)` of the algebra
/// `[x_i, x_j] = i theta eps_ij`, `[x_i, p_j] = i hbar delta_ij`,
/// `[p_i, p_j] = i gamma eps_ij`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlgebraParams {
    theta: f64,
    gamma: f64,
    hbar: f64,
    #[serde(skip)]
    critical_band: f64,
}

impl AlgebraParams {
    pub fn new(theta: f64, gamma: f64, hbar: f64) -> Result<Self> {
        if !(theta.is_finite() && gamma.is_finite() && hbar.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "non-finite parameter (theta={theta}, gamma={gamma}, hbar={hbar})"
            )));
        }
        if hbar <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "hbar must be > 0, got {hbar}"
            )));
        }
        if theta < 0.0 {
            return Err(Error::InvalidParams(format!(
                "theta must be >= 0, got {theta}"
            )));
        }
        Ok(Self {
            theta,
            gamma,
            hbar,
            critical_band: DEFAULT_CRITICAL_BAND,
        })
    }

    /// Replaces the relative critical-band tolerance used by [`phase`](Self::phase).
    pub fn with_critical_band(mut self, band: f64) -> Result<Self> {
        if !(band.is_finite() && band >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "critical band must be >= 0, got {band}"
            )));
        }
        self.critical_band = band;
        Ok(self)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn critical_band(&self) -> f64 {
        self.critical_band
    }

    /// `hbar^2 - gamma * theta`.
    pub fn delta(&self) -> f64 {
        self.hbar * self.hbar - self.gamma * self.theta
    }

    pub fn phase(&self) -> Phase {
        classify(self, self.critical_band)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    PositiveDelta,
    NegativeDelta,
    Critical,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::PositiveDelta => "PositiveDelta",
            Phase::NegativeDelta => "NegativeDelta",
            Phase::Critical => "Critical",
        })
    }
}

pub fn classify(params: &AlgebraParams, band: f64) -> Phase {
    let delta = params.delta();
    let width = band * params.hbar * params.hbar;
    if delta > width {
        Phase::PositiveDelta
    } else if delta < -width {
        Phase::NegativeDelta
    } else {
        Phase::Critical
    }
}

/// A real linear combination of `(x1, x2, p1, p2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinComb([f64; 4]);

impl LinComb {
    pub fn new(coeffs: [f64; 4]) -> Result<Self> {
        if coeffs.iter().all(|c| c.is_finite()) {
            Ok(Self(coeffs))
        } else {
            Err(Error::InvalidParams(format!(
                "non-finite coefficients {coeffs:?}"
            )))
        }
    }

    /// The single generator with index `index` in `(x1, x2, p1, p2)` order.
    pub fn generator(index: usize) -> Self {
        let mut coeffs = [0.0; 4];
        coeffs[index] = 1.0;
        Self(coeffs)
    }

    pub fn x1() -> Self {
        Self::generator(X1)
    }

    pub fn x2() -> Self {
        Self::generator(X2)
    }

    pub fn p1() -> Self {
        Self::generator(P1)
    }

    pub fn p2() -> Self {
        Self::generator(P2)
    }

    pub fn coeffs(&self) -> [f64; 4] {
        self.0
    }
}

impl Add for LinComb {
    type Output = LinComb;

    fn add(self, rhs: LinComb) -> LinComb {
        LinComb(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for LinComb {
    type Output = LinComb;

    fn sub(self, rhs: LinComb) -> LinComb {
        LinComb(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for LinComb {
    type Output = LinComb;

    fn neg(self) -> LinComb {
        LinComb(self.0.map(|c| -c))
    }
}

impl Mul<LinComb> for f64 {
    type Output = LinComb;

    fn mul(self, rhs: LinComb) -> LinComb {
        LinComb(rhs.0.map(|c| self * c))
    }
}

/// Antisymmetric matrix of commutator coefficients, `[g_i, g_j] = i * omega[i][j]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureMatrix(Matrix4<f64>);

impl StructureMatrix {
    /// Builds the matrix from its upper triangle; the lower triangle is the exact negation.
    fn from_upper(upper: [[f64; 4]; 4]) -> Self {
        let mut m = Matrix4::zeros();
        for i in 0..4 {
            for j in (i + 1)..4 {
                m[(i, j)] = upper[i][j];
                m[(j, i)] = -upper[i][j];
            }
        }
        Self(m)
    }

    /// Takes the upper triangle of `m`; the rest is implied by antisymmetry.
    pub fn from_antisymmetric(m: &Matrix4<f64>) -> Self {
        Self::from_upper(std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)])))
    }

    /// `sigma * J`: the canonical pattern `[y_i, q_j] = i sigma delta_ij`,
    /// all other commutators zero.
    pub fn canonical(sigma: f64) -> Self {
        let mut upper = [[0.0; 4]; 4];
        upper[X1][P1] = sigma;
        upper[X2][P2] = sigma;
        Self::from_upper(upper)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }
}

pub fn structure_matrix(params: &AlgebraParams) -> StructureMatrix {
    let mut upper = [[0.0; 4]; 4];
    upper[X1][X2] = params.theta;
    upper[X1][P1] = params.hbar;
    upper[X2][P2] = params.hbar;
    upper[P1][P2] = params.gamma;
    StructureMatrix::from_upper(upper)
}

/// Real scalar `s` with `[u, v] = i s`.
///
/// Summed over the upper triangle as `omega_ij (u_i v_j - u_j v_i)`, so swapping
/// the arguments negates every term bit-for-bit.
pub fn commutator(u: &LinComb, v: &LinComb, omega: &StructureMatrix) -> f64 {
    wedge(&u.0, &v.0, &omega.0)
}

fn wedge(u: &[f64; 4], v: &[f64; 4], omega: &Matrix4<f64>) -> f64 {
    let mut acc = 0.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            acc += omega[(i, j)] * (u[i] * v[j] - u[j] * v[i]);
        }
    }
    acc
}

/// Structure matrix of the generators `M g`: `M omega M^T`, evaluated row pair
/// by row pair so the result is exactly antisymmetric.
pub fn transform_structure(m: &Matrix4<f64>, omega: &StructureMatrix) -> Matrix4<f64> {
    let rows: [[f64; 4]; 4] = std::array::from_fn(|r| std::array::from_fn(|c| m[(r, c)]));
    let mut out = Matrix4::zeros();
    for a in 0..4 {
        for b in (a + 1)..4 {
            let s = wedge(&rows[a], &rows[b], &omega.0);
            out[(a, b)] = s;
            out[(b, a)] = -s;
        }
    }
    out
}

/// Matches `omega_prime` against the canonical pattern `sigma * J` for ordering
/// `(y1, y2, q1, q2)`, entrywise within `tol * max(1, |sigma|)`, and returns sigma.
pub fn is_canonical(omega_prime: &Matrix4<f64>, tol: f64) -> Option<f64> {
    let sigma = 0.5 * (omega_prime[(X1, P1)] + omega_prime[(X2, P2)]);
    if !sigma.is_finite() {
        return None;
    }
    let expected = StructureMatrix::canonical(sigma);
    let bound = tol * sigma.abs().max(1.0);
    let off = (omega_prime - expected.0).amax();
    (off <= bound).then_some(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(theta: f64, gamma: f64, hbar: f64) -> AlgebraParams {
        AlgebraParams::new(theta, gamma, hbar).unwrap()
    }

    #[test]
    fn structure_matrix_layout() {
        let om = structure_matrix(&params(1.0, 1.0, 1.0));
        assert_eq!(om.entry(0, 1), 1.0);
        assert_eq!(om.entry(0, 2), 1.0);
        assert_eq!(om.entry(1, 3), 1.0);
        assert_eq!(om.entry(2, 3), 1.0);
        assert_eq!(om.entry(0, 3), 0.0);
        assert_eq!(om.entry(1, 2), 0.0);
        assert_eq!(om.matrix() + om.matrix().transpose(), Matrix4::zeros());

        let commutative = structure_matrix(&params(0.0, 0.0, 1.0));
        assert_eq!(commutative, StructureMatrix::canonical(1.0));

        let om = structure_matrix(&params(2.0, 0.5, 1.0));
        assert_eq!(om.entry(0, 1), 2.0);
        assert_eq!(om.entry(2, 3), 0.5);
        assert_eq!(om.entry(3, 2), -0.5);
    }

    #[test]
    fn params_validation() {
        assert!(AlgebraParams::new(-1.0, 0.0, 1.0).is_err());
        assert!(AlgebraParams::new(1.0, 0.0, 0.0).is_err());
        assert!(AlgebraParams::new(1.0, f64::NAN, 1.0).is_err());
        assert!(AlgebraParams::new(0.0, -3.0, 0.5).is_ok());
        assert_eq!(params(1.0, 2.0, 3.0).delta(), 7.0);
    }

    #[test]
    fn commutator_examples() {
        let om = structure_matrix(&params(1.0, 1.0, 1.0));
        assert_eq!(commutator(&LinComb::x1(), &LinComb::p1(), &om), 1.0);

        let u = LinComb::new([0.3, -1.2, 4.0, 0.7]).unwrap();
        assert_eq!(commutator(&u, &u, &om), 0.0);

        // theta - hbar - hbar + gamma, expanded by hand.
        let om = structure_matrix(&params(1.0, 2.0, 3.0));
        let u = LinComb::x1() + LinComb::p2();
        let v = LinComb::x2() - LinComb::p1();
        assert_eq!(commutator(&u, &v, &om), -3.0);
    }

    #[test]
    fn transform_by_identity_and_permutation() {
        let om = structure_matrix(&params(2.0, 0.5, 1.5));
        assert_eq!(transform_structure(&Matrix4::identity(), &om), *om.matrix());

        // Swap x1 <-> x2: rows/cols 0 and 1 exchange, the theta entry flips sign.
        let mut perm = Matrix4::zeros();
        perm[(0, 1)] = 1.0;
        perm[(1, 0)] = 1.0;
        perm[(2, 2)] = 1.0;
        perm[(3, 3)] = 1.0;
        let t = transform_structure(&perm, &om);
        assert_eq!(t[(0, 1)], -2.0);
        assert_eq!(t[(0, 3)], 1.5);
        assert_eq!(t[(1, 2)], 1.5);
        assert_eq!(t[(0, 2)], 0.0);
        assert_eq!(t[(2, 3)], 0.5);
    }

    #[test]
    fn canonical_pattern_matching() {
        let hbar = 0.7;
        let exact = StructureMatrix::canonical(hbar);
        assert_eq!(is_canonical(exact.matrix(), 1e-12), Some(hbar));

        let raw = structure_matrix(&params(1.0, 1.0, 1.0));
        assert_eq!(is_canonical(raw.matrix(), 1e-10), None);

        let mut unequal = *StructureMatrix::canonical(1.0).matrix();
        unequal[(1, 3)] = 2.0;
        unequal[(3, 1)] = -2.0;
        assert_eq!(is_canonical(&unequal, 1e-10), None);
    }

    #[test]
    fn classification() {
        assert_eq!(params(1.0, 1.0, 1.0).phase(), Phase::Critical);
        assert_eq!(params(1.0, 0.0, 1.0).phase(), Phase::PositiveDelta);
        assert_eq!(params(1.0, 2.0, 1.0).phase(), Phase::NegativeDelta);
        assert_eq!(params(1.0, -2.0, 1.0).phase(), Phase::PositiveDelta);
        let p = params(1.0, 1.0 + 1e-9, 1.0);
        assert_eq!(classify(&p, 1e-12), Phase::NegativeDelta);
        assert_eq!(classify(&p, 1e-6), Phase::Critical);
        assert_eq!(p.with_critical_band(1e-6).unwrap().phase(), Phase::Critical);
    }
}
