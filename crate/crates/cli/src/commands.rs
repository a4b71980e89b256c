use nalgebra::Matrix4;
use nchw_core::fock::{
    algebra_checks, conjugate_rep, hs_rep, intertwiner, max_modulus, phase_convergence,
    random_unitary, realize_nc, two_mode_canonical, vacuum_space, weyl_numeric, FockRep, FockSpace,
    Intertwiner, RepTarget, WeylFamily, PHASE_BLOCK,
};
use nchw_core::weyl::family_commutators;
use nchw_core::{
    closed_form_phase, invert, nondegenerate, normalize, solve, solve_gamma_zero, structure_matrix,
    transform_structure, weyl_group_law_check, weyl_phase, AlgebraParams, Branch, Check,
    DarbouxMap, Error, StructureMatrix, VerificationReport,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{RunConfig, UsageError};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CRITICAL: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Truncations swept by `weyl`.
pub const WEYL_DIMS: [usize; 3] = [16, 32, 64];

/// Residual bound for the plant-and-recover and round-trip intertwiners.
pub const INTERTWINER_TOL: f64 = 1e-8;
/// Residual bound for an intertwiner of a representation with itself.
pub const SELF_INTERTWINER_TOL: f64 = 1e-12;
/// Bound on `max |A - A^dagger|` for generators.
pub const HERMITICITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: VerificationReport,
    pub exit_code: i32,
}

impl Outcome {
    fn finish(report: VerificationReport) -> Self {
        let exit_code = if report.all_pass() {
            EXIT_PASS
        } else {
            EXIT_FAIL
        };
        Self { report, exit_code }
    }
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Plus => "plus",
        Branch::Minus => "minus",
    }
}

fn base_report(cfg: &RunConfig, params: &AlgebraParams) -> VerificationReport {
    let mut r = VerificationReport::new(params.phase().to_string());
    r.param("theta", cfg.theta)
        .param("gamma", cfg.gamma)
        .param("hbar", cfg.hbar)
        .param("branch", branch_name(cfg.branch))
        .param("tol_critical", cfg.tol_critical)
        .param("tol_defect", cfg.tol_defect)
        .artifact("delta", params.delta());
    r
}

/// Solves for the map, or turns a phase error into an exit-2 report.
fn solve_or_report(
    params: &AlgebraParams,
    branch: Branch,
    report: &mut VerificationReport,
) -> Option<DarbouxMap> {
    match solve(params, branch) {
        Ok(map) => Some(map),
        Err(err) => {
            let name = match err {
                Error::CriticalLine { .. } => "critical_line",
                Error::IllConditioned(_) => "ill_conditioned",
                Error::SingularMap { .. } => "singular_map",
                _ => "phase_error",
            };
            let defect = params.delta().abs() / (params.hbar() * params.hbar());
            report.push(Check {
                name: name.into(),
                defect,
                tolerance: params.critical_band(),
                pass: false,
            });
            report.artifact("error", err.to_string());
            None
        }
    }
}

fn phase_failure(report: VerificationReport) -> Outcome {
    Outcome {
        report,
        exit_code: EXIT_CRITICAL,
    }
}

fn matrix_rows(m: &Matrix4<f64>) -> Value {
    json!((0..4)
        .map(|r| (0..4).map(|c| m[(r, c)] + 0.0).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

/// `max |T - sigma J| / max(1, |sigma|)`.
fn canonical_defect(t: &Matrix4<f64>, sigma: f64) -> f64 {
    (t - StructureMatrix::canonical(sigma).matrix()).amax() / sigma.abs().max(1.0)
}

/// The map rescaled so that `sigma > 0`, as canonical representations require.
fn positive_sigma(map: &DarbouxMap) -> DarbouxMap {
    if map.sigma < 0.0 {
        normalize(map, -map.sigma)
    } else {
        map.clone()
    }
}

/// Solve, normalize to `sigma = hbar`, invert; check each stage against the
/// structure matrix.
pub fn cmd_darboux(cfg: &RunConfig) -> Result<Outcome, UsageError> {
    cfg.validate()?;
    let params = cfg.params()?;
    let mut report = base_report(cfg, &params);
    let Some(map) = solve_or_report(&params, cfg.branch, &mut report) else {
        return Ok(phase_failure(report));
    };
    let om = structure_matrix(&params);
    let tol = cfg.tol_defect;

    let t = transform_structure(&map.matrix, &om);
    report.push(Check::new(
        "canonical_form",
        canonical_defect(&t, map.sigma),
        tol,
    ));
    let measured = 0.5 * (t[(0, 2)] + t[(1, 3)]);
    report.push(Check::new(
        "sigma_closed_form",
        (measured - map.sigma).abs() / map.sigma.abs().max(f64::MIN_POSITIVE),
        tol,
    ));
    report.push(Check::flag(
        "nondegenerate",
        nondegenerate(&map, cfg.tol_critical),
    ));

    let hbar = params.hbar();
    let normalized = normalize(&positive_sigma(&map), hbar);
    let tn = transform_structure(&normalized.matrix, &om);
    report.push(Check::new(
        "normalized_canonical_form",
        canonical_defect(&tn, hbar),
        tol,
    ));

    match invert(&normalized) {
        Ok(inv) => {
            let identity = (normalized.matrix * inv - Matrix4::identity()).amax();
            report.push(Check::new("inverse_identity", identity, tol));
            let back = transform_structure(&inv, &StructureMatrix::canonical(hbar));
            let scale = hbar.max(params.theta()).max(params.gamma().abs());
            report.push(Check::new(
                "round_trip",
                (back - om.matrix()).amax() / scale,
                tol,
            ));
        }
        Err(e) => {
            report.push(Check::flag("inverse_identity", false));
            report.artifact("error", e.to_string());
        }
    }

    report
        .artifact(
            "case",
            serde_json::to_value(map.case).expect("case serializes"),
        )
        .artifact("map_branch", branch_name(map.branch))
        .artifact("a", map.a)
        .artifact("b", map.b)
        .artifact("sigma", map.sigma)
        .artifact("matrix", matrix_rows(&map.matrix))
        .artifact("normalized_sigma", normalized.sigma)
        .artifact("normalized_matrix", matrix_rows(&normalized.matrix));
    Ok(Outcome::finish(report))
}

/// Commutator checks of a truncated realization. At gamma = 0 (with theta > 0)
/// this is the Hilbert-Schmidt representation; otherwise the noncommutative
/// generators are built from a two-mode canonical representation through the
/// inverse map.
pub fn cmd_verify_rep(cfg: &RunConfig) -> Result<Outcome, UsageError> {
    cfg.validate()?;
    let params = cfg.params()?;
    let mut report = base_report(cfg, &params);
    report
        .param("dim", cfg.dim)
        .param("margin", cfg.margin)
        .param("tol_vacuum", cfg.tol_vacuum);
    let space = FockSpace::new(cfg.dim).map_err(|e| UsageError(e.to_string()))?;

    let (rep, canonical, sigma) = if params.gamma() == 0.0 && params.theta() > 0.0 {
        cfg.require_dense_dim("verify-rep at gamma = 0")?;
        let rep = hs_rep(space, params.theta(), params.hbar()).expect("validated parameters");
        let map = solve_gamma_zero(&params).expect("gamma = 0");
        let canonical = rep
            .transformed(&map.matrix, RepTarget::Canonical { sigma: map.sigma })
            .expect("four generators");
        report.artifact("route", "hs_rep");
        (rep, canonical, map.sigma)
    } else {
        let Some(map) = solve_or_report(&params, cfg.branch, &mut report) else {
            return Ok(phase_failure(report));
        };
        let map = positive_sigma(&map);
        let canonical = two_mode_canonical(space, map.sigma).expect("positive sigma");
        let rep = match realize_nc(&map, &canonical) {
            Ok(rep) => rep,
            Err(e) => {
                report
                    .push(Check::flag("realize_nc", false))
                    .artifact("error", e.to_string());
                return Ok(Outcome::finish(report));
            }
        };
        report.artifact("route", "realize_nc");
        (rep, canonical, map.sigma)
    };

    for c in algebra_checks(&rep, cfg.margin, cfg.tol_defect).expect("margin below dim") {
        report.push(Check::from(&c));
    }
    report.push(Check::new(
        "hermiticity",
        rep.hermiticity_defect(),
        HERMITICITY_TOL,
    ));

    if cfg.dim <= crate::config::MAX_DENSE_DIM {
        let vac = vacuum_space(&canonical, sigma, cfg.tol_vacuum).expect("positive sigma");
        report
            .artifact("vacuum_count", vac.count)
            .artifact("vacuum_low_spectrum", vac.low_spectrum);
    } else {
        report.artifact("vacuum_count", Value::Null);
    }
    report.artifact("sigma", sigma);
    Ok(Outcome::finish(report))
}

/// Symbolic phase, closed-form phase, and the numeric commutation phase of the
/// truncated Weyl unitaries across [`WEYL_DIMS`].
pub fn cmd_weyl(cfg: &RunConfig) -> Result<Outcome, UsageError> {
    weyl_report(cfg, false)
}

/// [`cmd_weyl`], optionally testing the numeric unitaries against the phase of
/// the wrong sign. The flipped run is a negative control and must not converge.
pub fn weyl_report(cfg: &RunConfig, flip_sign: bool) -> Result<Outcome, UsageError> {
    cfg.validate()?;
    let params = cfg.params()?;
    let mut report = base_report(cfg, &params);
    report
        .param("alpha", cfg.alpha.to_vec())
        .param("beta", cfg.beta.to_vec());
    let Some(map) = solve_or_report(&params, cfg.branch, &mut report) else {
        return Ok(phase_failure(report));
    };
    let (alpha, beta) = (&cfg.alpha, &cfg.beta);
    let omega = weyl_phase(&map, alpha, beta);
    let dot = alpha[0] * beta[0] + alpha[1] * beta[1];
    let (closed, closed_name) = match closed_form_phase(&map, alpha, beta) {
        Some(w) => (w, "closed_form"),
        None => (-params.hbar() * dot, "closed_form_limit"),
    };
    report.push(Check::new(
        closed_name,
        (omega - closed).abs(),
        1e-12 * omega.abs().max(1.0),
    ));
    report.push(Check::flag(
        "nondegenerate",
        nondegenerate(&map, cfg.tol_critical),
    ));

    let (yy, qq) = family_commutators(&map);
    let scale =
        map.matrix.norm().powi(2) * params.hbar().max(params.theta()).max(params.gamma().abs());
    report.push(Check::new(
        "families_commute",
        yy.abs().max(qq.abs()),
        1e-12 * scale,
    ));
    report.push(Check::new(
        "group_law",
        weyl_group_law_check(alpha, alpha),
        1e-15,
    ));

    // With sigma < 0 the q rows are the negated q rows of a sigma > 0 pair, so
    // V(beta) is the canonical V(-beta).
    let sigma = map.sigma.abs();
    let beta_eff = [map.sigma.signum() * beta[0], map.sigma.signum() * beta[1]];
    let target = if flip_sign { -omega } else { omega };
    let conv = phase_convergence(
        &WEYL_DIMS,
        PHASE_BLOCK,
        alpha,
        &beta_eff,
        target,
        cfg.tol_defect,
        |s| two_mode_canonical(s, sigma),
    )
    .expect("block fits every truncation");
    let last = conv.reports.last().expect("three truncations");
    report.push(Check {
        name: "phase_convergence".into(),
        defect: last.defect,
        tolerance: cfg.tol_defect,
        pass: conv.converged,
    });

    // Unitarity at the smallest truncation, where dense products are cheap.
    let rep = two_mode_canonical(FockSpace::new(WEYL_DIMS[0]).expect("dim"), sigma).expect("sigma");
    let u = weyl_numeric(&rep, WeylFamily::U, alpha);
    let v = weyl_numeric(&rep, WeylFamily::V, &beta_eff);
    report.push(Check::new(
        "unitarity",
        u.unitarity_defect().max(v.unitarity_defect()),
        1e-11,
    ));

    report
        .artifact("omega", omega)
        .artifact("omega_closed_form", closed)
        .artifact("omega_tested", target)
        .artifact("sigma", map.sigma)
        .artifact("phase_block", PHASE_BLOCK)
        .artifact(
            "phase_defects",
            WEYL_DIMS
                .iter()
                .zip(&conv.reports)
                .map(|(n, r)| json!({"n": n, "margin": r.margin, "defect": r.defect}))
                .collect::<Vec<_>>(),
        )
        .artifact("non_increasing", conv.non_increasing)
        .artifact("converged", conv.converged);
    Ok(Outcome::finish(report))
}

fn intertwiner_check(
    report: &mut VerificationReport,
    name: &str,
    result: nchw_core::Result<Intertwiner>,
    tol: f64,
) -> Option<Intertwiner> {
    match result {
        Ok(tw) => {
            report.push(Check::new(name, tw.residual, tol));
            Some(tw)
        }
        Err(e) => {
            report.push(Check::flag(name, false));
            report.artifact(&format!("{name}_error"), e.to_string());
            None
        }
    }
}

/// Plant-and-recover, self-equivalence and map round-trip intertwiners on the
/// two-mode canonical representation with the map's `|sigma|`.
pub fn cmd_intertwine(cfg: &RunConfig) -> Result<Outcome, UsageError> {
    cfg.validate()?;
    cfg.require_dense_dim("intertwine")?;
    let params = cfg.params()?;
    let mut report = base_report(cfg, &params);
    report
        .param("dim", cfg.dim)
        .param("n_interior", cfg.n_interior)
        .param("seed", cfg.seed)
        .param("tol_vacuum", cfg.tol_vacuum);
    let Some(map) = solve_or_report(&params, cfg.branch, &mut report) else {
        return Ok(phase_failure(report));
    };
    let map = positive_sigma(&map);
    let sigma = map.sigma;
    let space = FockSpace::new(cfg.dim).map_err(|e| UsageError(e.to_string()))?;
    let rep_a = two_mode_canonical(space, sigma).expect("positive sigma");
    let (k, vtol) = (cfg.n_interior, cfg.tol_vacuum);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let planted = random_unitary(rep_a.dim(), &mut rng);
    let rep_b = conjugate_rep(&rep_a, &planted).expect("square unitary");
    if let Some(tw) = intertwiner_check(
        &mut report,
        "plant_and_recover",
        intertwiner(&rep_a, &rep_b, sigma, k, vtol),
        INTERTWINER_TOL,
    ) {
        report.push(Check::new(
            "plant_unitarity",
            tw.unitarity_defect,
            INTERTWINER_TOL,
        ));
        report.push(Check::new(
            "planted_match",
            planted_mismatch(&tw, &planted),
            INTERTWINER_TOL,
        ));
    }

    intertwiner_check(
        &mut report,
        "self_equivalence",
        intertwiner(&rep_a, &rep_a, sigma, k, vtol),
        SELF_INTERTWINER_TOL,
    );

    let round_trip = realize_nc(&map, &rep_a).and_then(|nc| round_trip_rep(&nc, &map));
    let result = round_trip.and_then(|back| intertwiner(&rep_a, &back, sigma, k, vtol));
    intertwiner_check(&mut report, "round_trip", result, INTERTWINER_TOL);

    report.artifact("sigma", sigma);
    Ok(Outcome::finish(report))
}

/// `max |W E_A - e^{i phi} T E_A|` with the phase fixed by the vacuum column.
fn planted_mismatch(tw: &Intertwiner, planted: &nchw_core::fock::CMatrix) -> f64 {
    let wa = &tw.w * &tw.basis_a;
    let ta = planted * &tw.basis_a;
    let phase = ta.column(0).dotc(&wa.column(0));
    if phase.norm() == 0.0 {
        return f64::INFINITY;
    }
    max_modulus(&(wa - ta * (phase / phase.norm())))
}

/// The canonical generators recovered from a noncommutative realization by the
/// forward rows of the same map.
fn round_trip_rep(nc: &FockRep, map: &DarbouxMap) -> nchw_core::Result<FockRep> {
    nc.transformed(&map.matrix, RepTarget::Canonical { sigma: map.sigma })
}
