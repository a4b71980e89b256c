use std::io::{self, Write};

use nchw_core::{nondegenerate, solve, AlgebraParams, Branch, Phase};
use serde::{Deserialize, Serialize};

use crate::config::{RunConfig, ScanGrid, UsageError};

/// One grid cell of a phase scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub theta: f64,
    pub gamma: f64,
    pub hbar: f64,
    pub delta: f64,
    pub phase: Phase,
    pub sigma_plus: Option<f64>,
    pub sigma_minus: Option<f64>,
    pub nondegenerate: bool,
}

/// Classifies every `(theta, gamma)` cell, theta-major. Sigma is `None` where
/// the branch has no map (the critical band, or the ill-conditioned `Plus`
/// branch near `gamma theta = 0`). `nondegenerate` refers to the configured branch.
pub fn cmd_scan(grid: &ScanGrid, cfg: &RunConfig) -> Result<Vec<ScanRecord>, UsageError> {
    let band = cfg.tol_critical;
    let mut out = Vec::with_capacity(grid.theta.steps * grid.gamma.steps);
    for theta in grid.theta.values() {
        for gamma in grid.gamma.values() {
            let params = AlgebraParams::new(theta, gamma, grid.hbar)
                .and_then(|p| p.with_critical_band(band))
                .map_err(|e| UsageError(e.to_string()))?;
            let sigma = |b: Branch| solve(&params, b).ok().map(|m| m.sigma);
            let chosen = solve(&params, cfg.branch).ok();
            out.push(ScanRecord {
                theta,
                gamma,
                hbar: grid.hbar,
                delta: params.delta(),
                phase: params.phase(),
                sigma_plus: sigma(Branch::Plus),
                sigma_minus: sigma(Branch::Minus),
                nondegenerate: chosen.is_some_and(|m| nondegenerate(&m, band)),
            });
        }
    }
    Ok(out)
}

/// One JSON object per line.
pub fn write_scan<W: Write>(records: &[ScanRecord], mut w: W) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Axis;

    #[test]
    fn negative_gamma_is_always_positive_delta() {
        let grid = ScanGrid::new(
            Axis::new(0.1, 4.0, 5).unwrap(),
            Axis::new(-4.0, -0.1, 5).unwrap(),
            1.0,
        )
        .unwrap();
        let recs = cmd_scan(&grid, &RunConfig::default()).unwrap();
        assert_eq!(recs.len(), 25);
        assert!(recs
            .iter()
            .all(|r| r.phase == Phase::PositiveDelta && r.nondegenerate));
        assert_eq!((recs[1].theta, recs[1].gamma), (0.1, -4.0 + 3.9 / 4.0));
    }

    #[test]
    fn records_serialize_with_null_sigma() {
        let grid = ScanGrid::new(
            Axis::new(1.0, 2.0, 2).unwrap(),
            Axis::new(1.0, 2.0, 2).unwrap(),
            1.0,
        )
        .unwrap();
        let recs = cmd_scan(&grid, &RunConfig::default()).unwrap();
        assert_eq!(recs[0].phase, Phase::Critical);
        let mut buf = Vec::new();
        write_scan(&recs, &mut buf).unwrap();
        let first = String::from_utf8(buf)
            .unwrap()
            .lines()
            .next()
            .unwrap()
            .to_string();
        assert!(first.contains(r#""sigma_plus":null"#), "{first}");
        assert!(first.contains(r#""phase":"Critical""#));
    }
}
