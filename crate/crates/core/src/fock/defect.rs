use num_complex::Complex64;
use serde::Serialize;

use super::operator::{real_combination, OperatorMatrix};
use super::rep::{FockRep, FockSpace};
use crate::error::{Error, Result};

/// Relative jitter allowed between successive truncations in a convergence sweep.
pub const CONVERGENCE_JITTER: f64 = 0.10;

/// Levels per factor compared by [`phase_convergence`]. A fixed low-lying block
/// keeps successive truncations comparable; a fixed margin would not, since the
/// Weyl unitaries spread across the whole truncated space.
pub const PHASE_BLOCK: usize = 14;

/// Defects below this are treated as rounding noise by convergence verdicts.
pub const ROUNDING_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefectReport {
    pub name: String,
    pub defect: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub dim: usize,
    pub margin: usize,
}

impl DefectReport {
    pub fn new(
        name: impl Into<String>,
        defect: f64,
        tolerance: f64,
        dim: usize,
        margin: usize,
    ) -> Self {
        Self {
            name: name.into(),
            defect,
            tolerance,
            pass: defect <= tolerance,
            dim,
            margin,
        }
    }
}

/// `|| P_k ([A_i, A_j] - expected) P_k || / max(|expected|, scale)` with `P_k` the
/// interior projector and `scale` the representation's `hbar` (or sigma).
pub fn commutator_defect(
    rep: &FockRep,
    pair: (usize, usize),
    expected: Complex64,
    margin: usize,
    tolerance: f64,
) -> Result<DefectReport> {
    let (i, j) = pair;
    let a = rep.generator(i);
    let b = rep.generator(j);
    let comm = a.commutator(b);
    let shifted = comm.sub(&OperatorMatrix::identity(comm.layout()).scale(expected));
    let norm = shifted.project(margin)?.spectral_norm();
    let defect = norm / expected.norm().max(rep.target().scale());
    Ok(DefectReport::new(
        format!("[g{i},g{j}]"),
        defect,
        tolerance,
        rep.dim(),
        margin,
    ))
}

/// Names used for the generators of four-generator representations.
pub fn generator_names(rep: &FockRep) -> Vec<String> {
    use super::rep::RepTarget;
    let m = rep.modes();
    let (coord, mom) = match rep.target() {
        RepTarget::NonCommutative(_) => ("x", "p"),
        RepTarget::Canonical { .. } => ("y", "q"),
    };
    (0..m)
        .map(|i| format!("{coord}{}", i + 1))
        .chain((0..m).map(|i| format!("{mom}{}", i + 1)))
        .collect()
}

/// Every independent relation `[g_i, g_j] = i expected_ij`, `i < j`.
pub fn algebra_checks(rep: &FockRep, margin: usize, tolerance: f64) -> Result<Vec<DefectReport>> {
    let expected = rep.expected_structure();
    let names = generator_names(rep);
    let n = rep.generators().len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let e = Complex64::new(0.0, expected[i][j]);
            let mut report = commutator_defect(rep, (i, j), e, margin, tolerance)?;
            report.name = format!("[{},{}]", names[i], names[j]);
            out.push(report);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeylFamily {
    /// `exp(i sum alpha_j y_j)`
    U,
    /// `exp(i sum beta_j q_j)`
    V,
}

/// Weyl unitary of one family; `coeffs` has one entry per mode.
pub fn weyl_numeric(rep: &FockRep, family: WeylFamily, coeffs: &[f64]) -> OperatorMatrix {
    let m = rep.modes();
    assert_eq!(coeffs.len(), m, "one Weyl coefficient per mode");
    let offset = match family {
        WeylFamily::U => 0,
        WeylFamily::V => m,
    };
    let gens = &rep.generators()[offset..offset + m];
    real_combination(coeffs, gens).expi()
}

/// `|| P_k (U V - e^{i omega} V U) P_k ||`.
pub fn phase_defect(
    u: &OperatorMatrix,
    v: &OperatorMatrix,
    omega: f64,
    margin: usize,
    tolerance: f64,
) -> Result<DefectReport> {
    if u.layout() != v.layout() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    let uv = u.matmul(v);
    let vu = v.matmul(u).scale(Complex64::from_polar(1.0, omega));
    let defect = uv.sub(&vu).project(margin)?.spectral_norm();
    Ok(DefectReport::new(
        "weyl_phase",
        defect,
        tolerance,
        u.dim(),
        margin,
    ))
}

/// Phase defects of one representation family across truncations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseConvergence {
    pub reports: Vec<DefectReport>,
    /// No step grows by more than the jitter allowance (above the rounding floor).
    pub non_increasing: bool,
    /// `non_increasing` and the finest truncation is within tolerance.
    pub converged: bool,
}

/// Measures [`phase_defect`] for `U(alpha)`, `V(beta)` at each truncation in
/// `dims`, always on the same low-lying block of `block` levels per factor
/// (margin `n - block`), so that successive numbers compare the same subspace.
pub fn phase_convergence<F>(
    dims: &[usize],
    block: usize,
    alpha: &[f64],
    beta: &[f64],
    omega: f64,
    tolerance: f64,
    mut build: F,
) -> Result<PhaseConvergence>
where
    F: FnMut(FockSpace) -> Result<FockRep>,
{
    let mut reports = Vec::with_capacity(dims.len());
    for &n in dims {
        if block == 0 || block > n {
            return Err(Error::EmptyInterior {
                dim: n,
                margin: n.saturating_sub(block),
            });
        }
        let rep = build(FockSpace::new(n)?)?;
        let u = weyl_numeric(&rep, WeylFamily::U, alpha);
        let v = weyl_numeric(&rep, WeylFamily::V, beta);
        let mut r = phase_defect(&u, &v, omega, n - block, tolerance)?;
        r.name = format!("weyl_phase_N{n}");
        reports.push(r);
    }
    let non_increasing = reports
        .windows(2)
        .all(|w| w[1].defect <= (1.0 + CONVERGENCE_JITTER) * w[0].defect + ROUNDING_FLOOR);
    let converged = non_increasing && reports.last().is_some_and(|r| r.pass);
    Ok(PhaseConvergence {
        reports,
        non_increasing,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::rep::{canonical_pair, two_mode_canonical};

    #[test]
    fn margin_zero_exposes_truncation_corner() {
        let n = 16;
        let rep = canonical_pair(FockSpace::new(n).unwrap(), 1.0).unwrap();
        let i = Complex64::new(0.0, 1.0);
        let inner = commutator_defect(&rep, (0, 1), i, 1, 1e-10).unwrap();
        assert!(inner.defect <= 1e-13 && inner.pass);
        let corner = commutator_defect(&rep, (0, 1), i, 0, 1e-10).unwrap();
        // [y, q] = i (1 - N |N-1><N-1|): the corner entry is -i (N-1), off by N.
        assert!((corner.defect - n as f64).abs() < 1e-10);
        assert!(!corner.pass);
        assert!(matches!(
            commutator_defect(&rep, (0, 1), i, 16, 1e-10),
            Err(Error::EmptyInterior { .. })
        ));
    }

    #[test]
    fn two_mode_cross_factor_commutators_vanish_exactly() {
        let rep = two_mode_canonical(FockSpace::new(8).unwrap(), 1.0).unwrap();
        for (i, j) in [(0, 1), (2, 3), (0, 3), (1, 2)] {
            let r = commutator_defect(&rep, (i, j), Complex64::from(0.0), 0, 0.0).unwrap();
            assert_eq!(r.defect, 0.0, "pair ({i},{j})");
        }
        let r = commutator_defect(&rep, (0, 2), Complex64::new(0.0, 1.0), 1, 1e-13).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn zero_weyl_coefficients_give_identity() {
        let rep = two_mode_canonical(FockSpace::new(6).unwrap(), 1.0).unwrap();
        let u = weyl_numeric(&rep, WeylFamily::U, &[0.0, 0.0]);
        let v = weyl_numeric(&rep, WeylFamily::V, &[0.3, 0.0]);
        assert!(u.sub(&OperatorMatrix::identity(u.layout())).max_abs_entry() < 1e-15);
        let r = phase_defect(&u, &v, 0.0, 2, 1e-12).unwrap();
        assert!(r.defect < 1e-15);
    }

    #[test]
    fn algebra_check_names() {
        let rep = two_mode_canonical(FockSpace::new(6).unwrap(), 1.0).unwrap();
        let checks = algebra_checks(&rep, 2, 1e-12).unwrap();
        let names: Vec<_> = checks.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(
            names,
            ["[y1,y2]", "[y1,q1]", "[y1,q2]", "[y2,q1]", "[y2,q2]", "[q1,q2]"]
        );
        assert!(checks.iter().all(|c| c.pass));
    }
}
