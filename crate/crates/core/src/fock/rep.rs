use nalgebra::Matrix4;
use num_complex::Complex64;

use super::linalg::{CMatrix, I};
use super::operator::{real_combination, Layout, OperatorMatrix};
use crate::algebra::{structure_matrix, AlgebraParams};
use crate::darboux::{invert, DarbouxMap};
use crate::error::{Error, Result};

/// Default interior margin for algebra checks.
pub const DEFAULT_MARGIN: usize = 2;

/// Smallest truncation that leaves an interior after the default margin.
pub const MIN_DIM: usize = 4;

/// Truncated Fock space spanned by `|0> .. |dim-1>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockSpace {
    dim: usize,
}

impl FockSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < MIN_DIM {
            return Err(Error::InvalidParams(format!(
                "Fock truncation must be >= {MIN_DIM}, got {dim}"
            )));
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Annihilation operator on `n` levels: `b |k> = sqrt(k) |k-1>`.
pub fn ladder_matrix(n: usize) -> CMatrix {
    let mut b = CMatrix::zeros(n, n);
    for k in 1..n {
        b[(k - 1, k)] = Complex64::from((k as f64).sqrt());
    }
    b
}

pub fn ladder(space: FockSpace) -> (OperatorMatrix, OperatorMatrix) {
    let b = ladder_matrix(space.dim);
    let bdag = b.adjoint();
    let layout = Layout::Single(space.dim);
    (
        OperatorMatrix::from_dense(b, layout),
        OperatorMatrix::from_dense(bdag, layout),
    )
}

/// `(sqrt(s/2) (b + b^dagger), -i sqrt(s/2) (b - b^dagger))`, so that
/// `[first, second] = i s` away from the top level.
fn quadratures(n: usize, s: f64) -> (CMatrix, CMatrix) {
    let b = ladder_matrix(n);
    let bdag = b.adjoint();
    let c = Complex64::from((s / 2.0).sqrt());
    (&b * c + &bdag * c, (&b - &bdag) * (-I * c))
}

/// Noncommuting coordinates on configuration space: `[x1, x2] = i theta`.
pub fn position_ops(space: FockSpace, theta: f64) -> Result<(OperatorMatrix, OperatorMatrix)> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::InvalidTheta(theta));
    }
    let (x1, x2) = quadratures(space.dim, theta);
    let layout = Layout::Single(space.dim);
    Ok((
        OperatorMatrix::from_dense(x1, layout),
        OperatorMatrix::from_dense(x2, layout),
    ))
}

/// An element of the truncated Hilbert-Schmidt space: an operator on
/// configuration space, used as a state.
#[derive(Debug, Clone, PartialEq)]
pub struct HSState {
    matrix: CMatrix,
}

impl HSState {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                left: matrix.nrows(),
                right: matrix.ncols(),
            });
        }
        Ok(Self { matrix })
    }

    /// `|m><n|`
    pub fn basis(dim: usize, m: usize, n: usize) -> Self {
        let mut matrix = CMatrix::zeros(dim, dim);
        matrix[(m, n)] = Complex64::from(1.0);
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Row-major vectorization matching the composite index of [`hs_rep`].
    pub fn to_vector(&self) -> super::linalg::CVector {
        let n = self.dim();
        super::linalg::CVector::from_fn(n * n, |idx, _| self.matrix[(idx / n, idx % n)])
    }
}

/// `(phi, psi) = tr(phi^dagger psi)`.
pub fn hs_inner(phi: &HSState, psi: &HSState) -> Result<Complex64> {
    if phi.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            left: phi.dim(),
            right: psi.dim(),
        });
    }
    Ok(phi
        .matrix
        .iter()
        .zip(psi.matrix.iter())
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// The algebra a representation is meant to satisfy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RepTarget {
    /// `(y.., q..)` with `[y_i, q_j] = i sigma delta_ij`.
    Canonical { sigma: f64 },
    /// `(x1, x2, p1, p2)` with the structure matrix of these parameters.
    NonCommutative(AlgebraParams),
}

impl RepTarget {
    /// Unit used to normalize defects: `hbar`, or `sigma` for canonical targets.
    pub fn scale(&self) -> f64 {
        match self {
            RepTarget::Canonical { sigma } => sigma.abs(),
            RepTarget::NonCommutative(p) => p.hbar(),
        }
    }
}

/// Hermitian matrices realizing a set of generators.
#[derive(Debug, Clone)]
pub struct FockRep {
    generators: Vec<OperatorMatrix>,
    target: RepTarget,
    interior_margin: usize,
}

impl FockRep {
    pub fn new(generators: Vec<OperatorMatrix>, target: RepTarget) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::InvalidParams(
                "representation needs generators".into(),
            ));
        };
        let layout = first.layout();
        if let Some(g) = generators.iter().find(|g| g.layout() != layout) {
            return Err(Error::DimensionMismatch {
                left: layout.dim(),
                right: g.dim(),
            });
        }
        if generators.len() % 2 != 0 {
            return Err(Error::InvalidParams(
                "generators come in (coordinate, momentum) pairs".into(),
            ));
        }
        Ok(Self {
            generators,
            target,
            interior_margin: DEFAULT_MARGIN,
        })
    }

    pub fn with_margin(mut self, margin: usize) -> Self {
        self.interior_margin = margin;
        self
    }

    pub fn generators(&self) -> &[OperatorMatrix] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &OperatorMatrix {
        &self.generators[i]
    }

    pub fn target(&self) -> RepTarget {
        self.target
    }

    pub fn interior_margin(&self) -> usize {
        self.interior_margin
    }

    pub fn layout(&self) -> Layout {
        self.generators[0].layout()
    }

    pub fn dim(&self) -> usize {
        self.layout().dim()
    }

    /// Number of canonical modes, `generators / 2`.
    pub fn modes(&self) -> usize {
        self.generators.len() / 2
    }

    /// The sigma of a canonical target.
    pub fn sigma(&self) -> Option<f64> {
        match self.target {
            RepTarget::Canonical { sigma } => Some(sigma),
            RepTarget::NonCommutative(_) => None,
        }
    }

    /// Expected commutator coefficients `[g_i, g_j] = i expected[i][j]`.
    pub fn expected_structure(&self) -> Vec<Vec<f64>> {
        let n = self.generators.len();
        match self.target {
            RepTarget::Canonical { sigma } => {
                let m = self.modes();
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                if j == i + m {
                                    sigma
                                } else if i == j + m {
                                    -sigma
                                } else {
                                    0.0
                                }
                            })
                            .collect()
                    })
                    .collect()
            }
            RepTarget::NonCommutative(p) => {
                let om = structure_matrix(&p);
                (0..n)
                    .map(|i| (0..n).map(|j| om.entry(i, j)).collect())
                    .collect()
            }
        }
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.generators
            .iter()
            .map(OperatorMatrix::hermiticity_defect)
            .fold(0.0, f64::max)
    }

    /// The generators `matrix * g` (four generators only), relabelled with `target`.
    pub fn transformed(&self, matrix: &Matrix4<f64>, target: RepTarget) -> Result<FockRep> {
        if self.generators.len() != 4 {
            return Err(Error::DimensionMismatch {
                left: self.generators.len(),
                right: 4,
            });
        }
        let generators = (0..4)
            .map(|r| {
                let coeffs: Vec<f64> = (0..4).map(|c| matrix[(r, c)]).collect();
                real_combination(&coeffs, &self.generators)
            })
            .collect();
        Ok(FockRep {
            generators,
            target,
            interior_margin: self.interior_margin,
        })
    }
}

/// Left multiplication and the scaled adjoint action on the `n^2`-dimensional
/// space of truncated Hilbert-Schmidt operators:
/// `X_i psi = x_i psi`, `P_i psi = (hbar/theta) eps_ij [x_j, psi]`.
///
/// The four operators are materialized as dense `n^2 x n^2` matrices acting on
/// row-major vectorized states; left multiplication by `A` is `A (x) 1` and right
/// multiplication is `1 (x) A^T`.
pub fn hs_rep(space: FockSpace, theta: f64, hbar: f64) -> Result<FockRep> {
    let (x1, x2) = position_ops(space, theta)?;
    let params = AlgebraParams::new(theta, 0.0, hbar)?;
    let n = space.dim;
    let id = CMatrix::identity(n, n);
    let left = |a: &CMatrix| a.kronecker(&id);
    let right = |a: &CMatrix| id.kronecker(&a.transpose());
    let (x1, x2) = (x1.to_dense(), x2.to_dense());
    let c = Complex64::from(hbar / theta);
    let ad = |a: &CMatrix| (left(a) - right(a)) * c;

    let layout = Layout::Bipartite(n);
    let generators = vec![
        OperatorMatrix::from_dense(left(&x1), layout),
        OperatorMatrix::from_dense(left(&x2), layout),
        // eps_12 = 1: P1 = (hbar/theta) [x2, .], P2 = -(hbar/theta) [x1, .]
        OperatorMatrix::from_dense(ad(&x2), layout),
        OperatorMatrix::from_dense(-ad(&x1), layout),
    ];
    FockRep::new(generators, RepTarget::NonCommutative(params))
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSigma(sigma))
    }
}

/// One canonical pair `(y, q)` in the oscillator basis, `[y, q] = i sigma`.
pub fn canonical_pair(space: FockSpace, sigma: f64) -> Result<FockRep> {
    check_sigma(sigma)?;
    let (y, q) = quadratures(space.dim, sigma);
    let layout = Layout::Single(space.dim);
    FockRep::new(
        vec![
            OperatorMatrix::from_dense(y, layout),
            OperatorMatrix::from_dense(q, layout),
        ],
        RepTarget::Canonical { sigma },
    )
}

/// Two canonical pairs on the tensor square: `y1 = y (x) 1`, `y2 = 1 (x) y`, and
/// likewise for `q`.
pub fn two_mode_canonical(space: FockSpace, sigma: f64) -> Result<FockRep> {
    check_sigma(sigma)?;
    let n = space.dim;
    let (y, q) = quadratures(n, sigma);
    let z = CMatrix::zeros(n, n);
    FockRep::new(
        vec![
            OperatorMatrix::local(y.clone(), z.clone()),
            OperatorMatrix::local(z.clone(), y),
            OperatorMatrix::local(q.clone(), z.clone()),
            OperatorMatrix::local(z, q),
        ],
        RepTarget::Canonical { sigma },
    )
}

/// Generators of the noncommutative algebra built from a canonical
/// representation: `(x, p) = M^-1 (y, q)`.
pub fn realize_nc(map: &DarbouxMap, canonical: &FockRep) -> Result<FockRep> {
    let rep_sigma = canonical.sigma().ok_or(Error::SigmaMismatch {
        rep: f64::NAN,
        map: map.sigma,
    })?;
    if (rep_sigma - map.sigma).abs() > 1e-10 * map.sigma.abs().max(1.0) {
        return Err(Error::SigmaMismatch {
            rep: rep_sigma,
            map: map.sigma,
        });
    }
    let inverse = invert(map)?;
    canonical.transformed(&inverse, RepTarget::NonCommutative(map.params))
}
