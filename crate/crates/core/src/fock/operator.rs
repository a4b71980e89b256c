//! Operators on a truncated Fock space, or on the tensor square of one.
//!
//! Operators on a bipartite space may be held in Kronecker form. A sum of
//! single-factor terms `A (x) 1 + 1 (x) B` stays in that form under real linear
//! combination and commutators, and its exponential factorizes, which keeps
//! two-mode computations at the cost of single-mode ones. Composite indices are
//! row-major: basis state `|i> (x) |k>` has index `i * n + k`.

use num_complex::Complex64;

use super::linalg::{
    dense_spectral_norm, expi_hermitian, lanczos_max_eigenvalue, max_modulus, CMatrix, CVector,
    DENSE_NORM_LIMIT,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Layout {
    /// One truncated mode of dimension `n`.
    Single(usize),
    /// Tensor square of a mode of dimension `n`; total dimension `n^2`.
    Bipartite(usize),
}

impl Layout {
    pub fn factor_dim(&self) -> usize {
        match *self {
            Layout::Single(n) | Layout::Bipartite(n) => n,
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            Layout::Single(n) => n,
            Layout::Bipartite(n) => n * n,
        }
    }

    /// Layout of the interior `{ index < n - margin }` in every factor.
    pub fn interior(&self, margin: usize) -> Result<Layout> {
        let n = self.factor_dim();
        if margin >= n {
            return Err(Error::EmptyInterior { dim: n, margin });
        }
        Ok(match self {
            Layout::Single(_) => Layout::Single(n - margin),
            Layout::Bipartite(_) => Layout::Bipartite(n - margin),
        })
    }

    /// Positions of the interior basis states inside the full basis.
    pub fn interior_indices(&self, margin: usize) -> Result<Vec<usize>> {
        let inner = self.interior(margin)?.factor_dim();
        let n = self.factor_dim();
        Ok(match self {
            Layout::Single(_) => (0..inner).collect(),
            Layout::Bipartite(_) => (0..inner)
                .flat_map(|i| (0..inner).map(move |k| i * n + k))
                .collect(),
        })
    }
}

#[derive(Debug, Clone)]
enum Repr {
    Dense(CMatrix),
    /// `left (x) 1 + 1 (x) right`
    Local {
        left: CMatrix,
        right: CMatrix,
    },
    /// `sum_t left_t (x) right_t`
    Kron(Vec<(CMatrix, CMatrix)>),
}

#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    repr: Repr,
    layout: Layout,
}

fn zero(n: usize) -> CMatrix {
    CMatrix::zeros(n, n)
}

fn eye(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

fn kron_terms(repr: &Repr, n: usize) -> Vec<(CMatrix, CMatrix)> {
    match repr {
        Repr::Local { left, right } => vec![(left.clone(), eye(n)), (eye(n), right.clone())],
        Repr::Kron(terms) => terms.clone(),
        Repr::Dense(_) => unreachable!("dense operators have no Kronecker terms"),
    }
}

/// `a * v_mat * b^T` with `v` viewed as an `n x n` row-major matrix.
fn kron_apply(a: &CMatrix, b: &CMatrix, v: &CMatrix) -> CMatrix {
    a * v * b.transpose()
}

fn unflatten(v: &CVector, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, k| v[i * n + k])
}

fn flatten(m: &CMatrix) -> CVector {
    let n = m.nrows();
    CVector::from_fn(n * n, |idx, _| m[(idx / n, idx % n)])
}

impl OperatorMatrix {
    pub fn from_dense(matrix: CMatrix, layout: Layout) -> Self {
        assert!(
            matrix.is_square() && matrix.nrows() == layout.dim(),
            "matrix shape {:?} does not fit layout {layout:?}",
            matrix.shape()
        );
        Self {
            repr: Repr::Dense(matrix),
            layout,
        }
    }

    /// `left (x) 1 + 1 (x) right` on the tensor square of an `n`-dimensional mode.
    pub fn local(left: CMatrix, right: CMatrix) -> Self {
        let n = left.nrows();
        assert!(
            left.is_square() && right.shape() == (n, n),
            "factor shapes differ"
        );
        Self {
            repr: Repr::Local { left, right },
            layout: Layout::Bipartite(n),
        }
    }

    /// `first (x) second`.
    pub fn product(first: CMatrix, second: CMatrix) -> Self {
        let n = first.nrows();
        assert!(
            first.is_square() && second.shape() == (n, n),
            "factor shapes differ"
        );
        Self {
            repr: Repr::Kron(vec![(first, second)]),
            layout: Layout::Bipartite(n),
        }
    }

    pub fn identity(layout: Layout) -> Self {
        match layout {
            Layout::Single(n) => Self::from_dense(eye(n), layout),
            Layout::Bipartite(n) => Self::product(eye(n), eye(n)),
        }
    }

    pub fn zeros(layout: Layout) -> Self {
        match layout {
            Layout::Single(n) => Self::from_dense(zero(n), layout),
            Layout::Bipartite(n) => Self::local(zero(n), zero(n)),
        }
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    /// True if the operator is held in Kronecker form rather than as one matrix.
    pub fn is_structured(&self) -> bool {
        !matches!(self.repr, Repr::Dense(_))
    }

    /// Single-factor parts `(left, right)` when held as `left (x) 1 + 1 (x) right`.
    pub fn local_factors(&self) -> Option<(&CMatrix, &CMatrix)> {
        match &self.repr {
            Repr::Local { left, right } => Some((left, right)),
            _ => None,
        }
    }

    pub fn to_dense(&self) -> CMatrix {
        match &self.repr {
            Repr::Dense(m) => m.clone(),
            Repr::Local { left, right } => {
                let n = left.nrows();
                left.kronecker(&eye(n)) + eye(n).kronecker(right)
            }
            Repr::Kron(terms) => {
                let dim = self.dim();
                terms
                    .iter()
                    .fold(CMatrix::zeros(dim, dim), |acc, (a, b)| acc + a.kronecker(b))
            }
        }
    }

    fn same_layout(&self, other: &Self) {
        assert_eq!(self.layout, other.layout, "operator layouts differ");
    }

    pub fn adjoint(&self) -> Self {
        let repr = match &self.repr {
            Repr::Dense(m) => Repr::Dense(m.adjoint()),
            Repr::Local { left, right } => Repr::Local {
                left: left.adjoint(),
                right: right.adjoint(),
            },
            Repr::Kron(terms) => Repr::Kron(
                terms
                    .iter()
                    .map(|(a, b)| (a.adjoint(), b.adjoint()))
                    .collect(),
            ),
        };
        Self {
            repr,
            layout: self.layout,
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let repr = match &self.repr {
            Repr::Dense(m) => Repr::Dense(m * c),
            Repr::Local { left, right } => Repr::Local {
                left: left * c,
                right: right * c,
            },
            Repr::Kron(terms) => {
                Repr::Kron(terms.iter().map(|(a, b)| (a * c, b.clone())).collect())
            }
        };
        Self {
            repr,
            layout: self.layout,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_layout(other);
        let n = self.layout.factor_dim();
        let repr = match (&self.repr, &other.repr) {
            (Repr::Dense(a), _) => Repr::Dense(a + other.to_dense()),
            (_, Repr::Dense(b)) => Repr::Dense(self.to_dense() + b),
            (
                Repr::Local {
                    left: l1,
                    right: r1,
                },
                Repr::Local {
                    left: l2,
                    right: r2,
                },
            ) => Repr::Local {
                left: l1 + l2,
                right: r1 + r2,
            },
            (a, b) => {
                let mut terms = kron_terms(a, n);
                terms.extend(kron_terms(b, n));
                Repr::Kron(terms)
            }
        };
        Self {
            repr,
            layout: self.layout,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::from(-1.0)))
    }

    /// Operator product `self * other`.
    pub fn matmul(&self, other: &Self) -> Self {
        self.same_layout(other);
        let n = self.layout.factor_dim();
        let repr = match (&self.repr, &other.repr) {
            (Repr::Dense(a), _) => Repr::Dense(a * other.to_dense()),
            (_, Repr::Dense(b)) => Repr::Dense(self.to_dense() * b),
            (a, b) => {
                let (ta, tb) = (kron_terms(a, n), kron_terms(b, n));
                let mut terms = Vec::with_capacity(ta.len() * tb.len());
                for (a1, b1) in &ta {
                    for (a2, b2) in &tb {
                        terms.push((a1 * a2, b1 * b2));
                    }
                }
                Repr::Kron(terms)
            }
        };
        Self {
            repr,
            layout: self.layout,
        }
    }

    /// `[self, other]`; single-factor sums commute factor by factor.
    pub fn commutator(&self, other: &Self) -> Self {
        self.same_layout(other);
        match (&self.repr, &other.repr) {
            (
                Repr::Local {
                    left: l1,
                    right: r1,
                },
                Repr::Local {
                    left: l2,
                    right: r2,
                },
            ) => Self::local(l1 * l2 - l2 * l1, r1 * r2 - r2 * r1),
            _ => self.matmul(other).sub(&other.matmul(self)),
        }
    }

    /// Largest entry magnitude of the full matrix.
    pub fn max_abs_entry(&self) -> f64 {
        match &self.repr {
            Repr::Dense(m) => max_modulus(m),
            Repr::Local { left, right } => {
                // entry ((i,k),(j,l)) = left_ij d_kl + d_ij right_kl
                let n = left.nrows();
                let mut best = 0.0f64;
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            best = best.max(left[(i, j)].norm()).max(right[(i, j)].norm());
                        }
                    }
                }
                for i in 0..n {
                    for k in 0..n {
                        best = best.max((left[(i, i)] + right[(k, k)]).norm());
                    }
                }
                best
            }
            Repr::Kron(terms) => {
                let n = self.layout.factor_dim();
                let mut best = 0.0f64;
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            for l in 0..n {
                                let v: Complex64 =
                                    terms.iter().map(|(a, b)| a[(i, j)] * b[(k, l)]).sum();
                                best = best.max(v.norm());
                            }
                        }
                    }
                }
                best
            }
        }
    }

    /// `max |A - A^dagger|` entrywise.
    pub fn hermiticity_defect(&self) -> f64 {
        self.sub(&self.adjoint()).max_abs_entry()
    }

    /// `max |U^dagger U - 1|` entrywise.
    pub fn unitarity_defect(&self) -> f64 {
        self.adjoint()
            .matmul(self)
            .sub(&Self::identity(self.layout))
            .max_abs_entry()
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        assert_eq!(v.len(), self.dim(), "vector length does not match operator");
        match &self.repr {
            Repr::Dense(m) => m * v,
            Repr::Local { left, right } => {
                let vm = unflatten(v, left.nrows());
                flatten(&(left * &vm + &vm * right.transpose()))
            }
            Repr::Kron(terms) => {
                let n = self.layout.factor_dim();
                let vm = unflatten(v, n);
                let out = terms
                    .iter()
                    .fold(zero(n), |acc, (a, b)| acc + kron_apply(a, b, &vm));
                flatten(&out)
            }
        }
    }

    /// Compression to the interior `{ index < n - margin }` of every factor.
    pub fn project(&self, margin: usize) -> Result<Self> {
        let layout = self.layout.interior(margin)?;
        let m = layout.factor_dim();
        let cut = |a: &CMatrix| a.view((0, 0), (m, m)).into_owned();
        let repr = match &self.repr {
            Repr::Dense(d) => {
                let idx = self.layout.interior_indices(margin)?;
                Repr::Dense(CMatrix::from_fn(idx.len(), idx.len(), |r, c| {
                    d[(idx[r], idx[c])]
                }))
            }
            Repr::Local { left, right } => Repr::Local {
                left: cut(left),
                right: cut(right),
            },
            Repr::Kron(terms) => Repr::Kron(terms.iter().map(|(a, b)| (cut(a), cut(b))).collect()),
        };
        Ok(Self { repr, layout })
    }

    /// Operator norm (largest singular value). Exact SVD up to
    /// [`DENSE_NORM_LIMIT`] dimensions, Lanczos on `A^dagger A` beyond.
    pub fn spectral_norm(&self) -> f64 {
        if self.dim() <= DENSE_NORM_LIMIT {
            return dense_spectral_norm(&self.to_dense());
        }
        let adj = self.adjoint();
        lanczos_max_eigenvalue(self.dim(), |v| adj.apply(&self.apply(v)))
            .max(0.0)
            .sqrt()
    }

    /// `exp(i self)` for hermitian `self`. A single-factor sum exponentiates
    /// factor by factor into `exp(i left) (x) exp(i right)`.
    pub fn expi(&self) -> Self {
        match &self.repr {
            Repr::Dense(m) => Self::from_dense(expi_hermitian(m), self.layout),
            Repr::Local { left, right } => {
                Self::product(expi_hermitian(left), expi_hermitian(right))
            }
            Repr::Kron(_) => Self::from_dense(expi_hermitian(&self.to_dense()), self.layout),
        }
    }
}

/// `sum_k coeffs[k] * ops[k]` with real coefficients.
pub fn real_combination(coeffs: &[f64], ops: &[OperatorMatrix]) -> OperatorMatrix {
    assert_eq!(coeffs.len(), ops.len());
    let layout = ops[0].layout();
    coeffs
        .iter()
        .zip(ops)
        .fold(OperatorMatrix::zeros(layout), |acc, (c, op)| {
            acc.add(&op.scale(Complex64::from(*c)))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn random(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        CMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        })
    }

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        (a - b).camax() <= tol
    }

    #[test]
    fn structured_forms_agree_with_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 5;
        let a = OperatorMatrix::local(random(n, &mut rng), random(n, &mut rng));
        let b = OperatorMatrix::local(random(n, &mut rng), random(n, &mut rng));
        let p = OperatorMatrix::product(random(n, &mut rng), random(n, &mut rng));
        let (da, db, dp) = (a.to_dense(), b.to_dense(), p.to_dense());

        assert!(close(&a.add(&b).to_dense(), &(&da + &db), 1e-12));
        assert!(close(&a.matmul(&p).to_dense(), &(&da * &dp), 1e-11));
        assert!(close(
            &a.commutator(&b).to_dense(),
            &(&da * &db - &db * &da),
            1e-11
        ));
        assert!(close(&p.adjoint().to_dense(), &dp.adjoint(), 0.0));
        assert!((a.max_abs_entry() - max_modulus(&da)).abs() < 1e-12);
        assert!((p.add(&a).max_abs_entry() - max_modulus(&(&dp + &da))).abs() < 1e-12);

        let v = CVector::from_fn(n * n, |i, _| Complex64::new(i as f64, 1.0 - i as f64));
        assert!((a.apply(&v) - &da * &v).camax() < 1e-11);
        assert!((p.apply(&v) - &dp * &v).camax() < 1e-11);

        let pa = a.project(2).unwrap();
        let idx = a.layout().interior_indices(2).unwrap();
        let expected = CMatrix::from_fn(idx.len(), idx.len(), |r, c| da[(idx[r], idx[c])]);
        assert!(close(&pa.to_dense(), &expected, 0.0));
        assert!(a.project(5).is_err());
    }

    #[test]
    fn structured_exponential_factorizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 4;
        let herm = |m: CMatrix| (&m + m.adjoint()) * Complex64::from(0.5);
        let h = OperatorMatrix::local(herm(random(n, &mut rng)), herm(random(n, &mut rng)));
        let u = h.expi();
        let dense = expi_hermitian(&h.to_dense());
        assert!(close(&u.to_dense(), &dense, 1e-12));
        assert!(u.unitarity_defect() < 1e-12);
    }

    #[test]
    fn lanczos_norm_of_structured_operator() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 21; // 441 > DENSE_NORM_LIMIT
        let p = OperatorMatrix::product(random(n, &mut rng), random(n, &mut rng)).add(
            &OperatorMatrix::local(random(n, &mut rng), random(n, &mut rng)),
        );
        let exact = dense_spectral_norm(&p.to_dense());
        assert!((p.spectral_norm() - exact).abs() <= 1e-9 * exact);
    }
}
