//! Real linear changes of generators that bring the noncommutative algebra to
//! canonical Heisenberg form.
//!
//! Off the critical line there are two families of maps:
//!
//! * `Delta > 0`: `y_i = x_i + a eps_ij p_j`, `q_i = p_i - b eps_ij x_j` with both
//!   coefficients taken from the same branch.
//! * `Delta < 0`: `y1 = gamma x2 + a p1`, `y2 = theta p2 - a x1`,
//!   `q1 = b x1 - theta p2`, `q2 = gamma x2 + b p1` with `b` taken from the
//!   opposite branch to `a`.
//!
//! The `gamma -> 0` and `theta -> 0` limits of the `Minus` branch are smooth and
//! handled by dedicated solvers; the `Plus` branch diverges there.

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraParams, Phase};
use crate::error::{Error, Result};

/// `Plus` branch is refused when the coefficient it would produce exceeds
/// roughly `1e8` times its natural scale.
const ILL_CONDITIONED_RATIO: f64 = 1e-8;

/// Largest condition number accepted by [`invert`].
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn opposite(self) -> Branch {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DarbouxCase {
    PositiveDelta,
    NegativeDelta,
    GammaZeroLimit,
    ThetaZeroLimit,
    CommutativeIdentity,
}

/// A map `(x1, x2, p1, p2) -> (y1, y2, q1, q2)` with `[y_i, q_j] = i sigma delta_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct DarbouxMap {
    /// Rows are `y1, y2, q1, q2` as combinations of `x1, x2, p1, p2`.
    pub matrix: Matrix4<f64>,
    /// Effective Planck constant of the canonical pair.
    pub sigma: f64,
    pub branch: Branch,
    pub case: DarbouxCase,
    pub params: AlgebraParams,
    pub a: f64,
    pub b: f64,
}

impl DarbouxMap {
    pub fn y_rows(&self) -> nalgebra::SMatrix<f64, 2, 4> {
        self.matrix.fixed_rows::<2>(0).into_owned()
    }

    pub fn q_rows(&self) -> nalgebra::SMatrix<f64, 2, 4> {
        self.matrix.fixed_rows::<2>(2).into_owned()
    }
}

/// Matrix of the `Delta > 0` family for arbitrary `(a, b)`; used to probe
/// non-solution pairings.
pub fn positive_family_matrix(a: f64, b: f64) -> Matrix4<f64> {
    Matrix4::new(
        1.0, 0.0, 0.0, a, //
        0.0, 1.0, -a, 0.0, //
        0.0, -b, 1.0, 0.0, //
        b, 0.0, 0.0, 1.0,
    )
}

/// Matrix of the `Delta < 0` family for arbitrary `(a, b)`.
pub fn negative_family_matrix(params: &AlgebraParams, a: f64, b: f64) -> Matrix4<f64> {
    let (theta, gamma) = (params.theta(), params.gamma());
    Matrix4::new(
        0.0, gamma, a, 0.0, //
        -a, 0.0, 0.0, theta, //
        b, 0.0, 0.0, -theta, //
        0.0, gamma, b, 0.0,
    )
}

/// Both roots of `gamma a^2 - 2 hbar a + theta = 0` (the `y`-coefficient) and
/// `theta b^2 - 2 hbar b + gamma = 0` (the `q`-coefficient) for `Delta > 0`,
/// indexed by branch.
///
/// The `Minus` roots are formed through the product of roots, `a+ a- = theta / gamma`,
/// which avoids the cancellation in `hbar - sqrt(Delta)`.
fn positive_roots(params: &AlgebraParams, branch: Branch) -> (f64, f64) {
    let (theta, gamma, hbar) = (params.theta(), params.gamma(), params.hbar());
    let big = hbar + params.delta().sqrt();
    match branch {
        Branch::Plus => (big / gamma, big / theta),
        Branch::Minus => (theta / big, gamma / big),
    }
}

/// Root of `hbar a^2 + 2 gamma theta a + gamma theta hbar = 0` for `Delta < 0`.
fn negative_root(params: &AlgebraParams, branch: Branch) -> f64 {
    let gt = params.gamma() * params.theta();
    let hbar = params.hbar();
    let disc = (-gt * params.delta()).sqrt();
    // gamma * theta > hbar^2 > 0 here, so the Minus root has the larger magnitude.
    let minus = (-gt - disc) / hbar;
    match branch {
        Branch::Minus => minus,
        Branch::Plus => gt / minus,
    }
}

fn require_phase(params: &AlgebraParams, expected: Phase) -> Result<()> {
    let actual = params.phase();
    if actual == expected {
        Ok(())
    } else {
        Err(Error::WrongPhase { expected, actual })
    }
}

pub fn solve_positive_delta(params: &AlgebraParams, branch: Branch) -> Result<DarbouxMap> {
    require_phase(params, Phase::PositiveDelta)?;
    if params.gamma() == 0.0 || params.theta() == 0.0 {
        return Err(Error::DegenerateParams(
            "gamma = 0 or theta = 0 requires the limit solvers".into(),
        ));
    }
    let (a, b) = positive_roots(params, branch);
    let delta = params.delta();
    let (theta, gamma, hbar) = (params.theta(), params.gamma(), params.hbar());
    let root = delta.sqrt();
    // 2 (Delta / gamma theta)(hbar -/+ sqrt(Delta)); the Minus form is rewritten
    // as 2 Delta / (hbar + sqrt(Delta)) to stay accurate as gamma theta -> 0.
    let sigma = match branch {
        Branch::Plus => 2.0 * delta * (hbar + root) / (gamma * theta),
        Branch::Minus => 2.0 * delta / (hbar + root),
    };
    Ok(DarbouxMap {
        matrix: positive_family_matrix(a, b),
        sigma,
        branch,
        case: DarbouxCase::PositiveDelta,
        params: *params,
        a,
        b,
    })
}

pub fn solve_negative_delta(params: &AlgebraParams, branch: Branch) -> Result<DarbouxMap> {
    require_phase(params, Phase::NegativeDelta)?;
    let a = negative_root(params, branch);
    let b = negative_root(params, branch.opposite());
    let sigma = -2.0 * params.gamma() * params.theta() * params.delta() / params.hbar();
    Ok(DarbouxMap {
        matrix: negative_family_matrix(params, a, b),
        sigma,
        branch,
        case: DarbouxCase::NegativeDelta,
        params: *params,
        a,
        b,
    })
}

/// Smooth `gamma -> 0` limit of the `Minus` branch.
pub fn solve_gamma_zero(params: &AlgebraParams) -> Result<DarbouxMap> {
    if params.gamma() != 0.0 {
        return Err(Error::DegenerateParams(format!(
            "gamma-zero limit needs gamma = 0, got {}",
            params.gamma()
        )));
    }
    if params.theta() == 0.0 {
        return Err(Error::DegenerateParams(
            "theta = gamma = 0 is already canonical".into(),
        ));
    }
    let a = params.theta() / (2.0 * params.hbar());
    Ok(DarbouxMap {
        matrix: positive_family_matrix(a, 0.0),
        sigma: params.hbar(),
        branch: Branch::Minus,
        case: DarbouxCase::GammaZeroLimit,
        params: *params,
        a,
        b: 0.0,
    })
}

/// Smooth `theta -> 0` limit of the `Minus` branch.
pub fn solve_theta_zero(params: &AlgebraParams) -> Result<DarbouxMap> {
    if params.theta() != 0.0 {
        return Err(Error::DegenerateParams(format!(
            "theta-zero limit needs theta = 0, got {}",
            params.theta()
        )));
    }
    if params.gamma() == 0.0 {
        return Err(Error::DegenerateParams(
            "theta = gamma = 0 is already canonical".into(),
        ));
    }
    let b = params.gamma() / (2.0 * params.hbar());
    Ok(DarbouxMap {
        matrix: positive_family_matrix(0.0, b),
        sigma: params.hbar(),
        branch: Branch::Minus,
        case: DarbouxCase::ThetaZeroLimit,
        params: *params,
        a: 0.0,
        b,
    })
}

fn identity_map(params: &AlgebraParams, branch: Branch) -> DarbouxMap {
    DarbouxMap {
        matrix: Matrix4::identity(),
        sigma: params.hbar(),
        branch,
        case: DarbouxCase::CommutativeIdentity,
        params: *params,
        a: 0.0,
        b: 0.0,
    }
}

/// Dispatches on the phase and on exact zeros of `theta` and `gamma`.
///
/// Exact zeros go to the limit solvers whatever the requested branch, since only
/// the smooth branch exists there. A `Plus` request with `gamma` (or `theta`)
/// nonzero but within `1e-8 hbar^2 / theta` (`/ |gamma|`) of zero is refused as
/// ill-conditioned.
pub fn solve(params: &AlgebraParams, branch: Branch) -> Result<DarbouxMap> {
    let (theta, gamma, hbar) = (params.theta(), params.gamma(), params.hbar());
    match params.phase() {
        Phase::Critical => Err(Error::CriticalLine {
            delta_abs: params.delta().abs(),
        }),
        Phase::NegativeDelta => solve_negative_delta(params, branch),
        Phase::PositiveDelta => match (theta == 0.0, gamma == 0.0) {
            (true, true) => Ok(identity_map(params, branch)),
            (false, true) => solve_gamma_zero(params),
            (true, false) => solve_theta_zero(params),
            (false, false) => {
                if branch == Branch::Plus {
                    let scale = ILL_CONDITIONED_RATIO * hbar * hbar;
                    if gamma.abs() * theta < scale {
                        return Err(Error::IllConditioned(format!(
                            "Plus branch diverges as gamma*theta -> 0 (gamma={gamma:e}, theta={theta:e}); use Minus"
                        )));
                    }
                }
                solve_positive_delta(params, branch)
            }
        },
    }
}

/// Rescales the `q` rows so that `sigma == target`. A negative `sigma` flips
/// their sign. The `y` rows and the recorded `a`, `b` are untouched.
///
/// # Panics
///
/// If `target` is not a positive finite number.
pub fn normalize(map: &DarbouxMap, target: f64) -> DarbouxMap {
    assert!(
        target.is_finite() && target > 0.0,
        "normalize target must be > 0"
    );
    let mut out = map.clone();
    if map.sigma == target {
        return out;
    }
    let scale = target / map.sigma;
    for r in 2..4 {
        for c in 0..4 {
            out.matrix[(r, c)] *= scale;
        }
    }
    out.sigma = target;
    out
}

/// `M^-1`, refusing maps whose condition number exceeds [`MAX_CONDITION`].
pub fn invert(map: &DarbouxMap) -> Result<Matrix4<f64>> {
    let sv = map.matrix.singular_values();
    let (max, min) = (sv.max(), sv.min());
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    if !(condition <= MAX_CONDITION) {
        return Err(Error::SingularMap {
            condition,
            limit: MAX_CONDITION,
        });
    }
    map.matrix.try_inverse().ok_or(Error::SingularMap {
        condition,
        limit: MAX_CONDITION,
    })
}
