use std::fmt;
use std::path::PathBuf;

use nchw_core::darboux::Branch;
use nchw_core::fock::{DEFAULT_MARGIN, DEFAULT_VACUUM_TOL, MIN_DIM};
use nchw_core::{AlgebraParams, DEFAULT_CRITICAL_BAND};

pub const DEFAULT_DIM: usize = 16;
pub const DEFAULT_TOL_DEFECT: f64 = 1e-10;
pub const DEFAULT_N_INTERIOR: usize = 8;
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Largest factor dimension accepted by the commands that work with dense
/// `N^2 x N^2` matrices (`verify-rep` at gamma = 0, `intertwine`).
pub const MAX_DENSE_DIM: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// Configuration problem that maps to the usage exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "usage error: {}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub theta: f64,
    pub gamma: f64,
    pub hbar: f64,
    pub dim: usize,
    pub margin: usize,
    pub branch: Branch,
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
    pub tol_critical: f64,
    pub tol_defect: f64,
    pub tol_vacuum: f64,
    pub n_interior: usize,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub timestamp: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            theta: 1.0,
            gamma: 0.0,
            hbar: 1.0,
            dim: DEFAULT_DIM,
            margin: DEFAULT_MARGIN,
            branch: Branch::Minus,
            alpha: [0.1, 0.0],
            beta: [0.1, 0.0],
            tol_critical: DEFAULT_CRITICAL_BAND,
            tol_defect: DEFAULT_TOL_DEFECT,
            tol_vacuum: DEFAULT_VACUUM_TOL,
            n_interior: DEFAULT_N_INTERIOR,
            seed: DEFAULT_SEED,
            output: None,
            format: Format::Json,
            timestamp: true,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), UsageError> {
        if self.dim < MIN_DIM {
            return Err(usage(format!(
                "--dim must be >= {MIN_DIM}, got {}",
                self.dim
            )));
        }
        if self.margin < 1 {
            return Err(usage("--margin must be >= 1"));
        }
        if self.margin >= self.dim {
            return Err(usage(format!(
                "--margin {} leaves no interior at --dim {}",
                self.margin, self.dim
            )));
        }
        for (name, v) in [
            ("--tol-critical", self.tol_critical),
            ("--tol-defect", self.tol_defect),
            ("--tol-vacuum", self.tol_vacuum),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(usage(format!(
                    "{name} must be a finite non-negative number"
                )));
            }
        }
        if self.alpha.iter().chain(&self.beta).any(|x| !x.is_finite()) {
            return Err(usage("--alpha and --beta must be finite"));
        }
        if self.n_interior < 1 {
            return Err(usage("--n-interior must be >= 1"));
        }
        self.params().map(|_| ())
    }

    pub fn params(&self) -> Result<AlgebraParams, UsageError> {
        AlgebraParams::new(self.theta, self.gamma, self.hbar)
            .and_then(|p| p.with_critical_band(self.tol_critical))
            .map_err(|e| usage(e.to_string()))
    }

    pub(crate) fn require_dense_dim(&self, command: &str) -> Result<(), UsageError> {
        if self.dim > MAX_DENSE_DIM {
            return Err(usage(format!(
                "{command} builds dense N^2 x N^2 matrices; --dim must be <= {MAX_DENSE_DIM}"
            )));
        }
        Ok(())
    }
}

/// Inclusive, evenly spaced axis `lo, ..., hi` with `steps` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Result<Self, UsageError> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(usage(format!(
                "scan range needs finite lo < hi, got [{lo}, {hi}]"
            )));
        }
        if steps < 2 {
            return Err(usage("scan steps must be >= 2"));
        }
        Ok(Self { lo, hi, steps })
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            return self.hi;
        }
        self.lo + (self.hi - self.lo) * i as f64 / (self.steps - 1) as f64
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.steps).map(|i| self.value(i))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanGrid {
    pub theta: Axis,
    pub gamma: Axis,
    pub hbar: f64,
}

impl ScanGrid {
    pub fn new(theta: Axis, gamma: Axis, hbar: f64) -> Result<Self, UsageError> {
        if theta.lo < 0.0 {
            return Err(usage("theta range must be non-negative"));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(usage("--hbar must be positive"));
        }
        Ok(Self { theta, gamma, hbar })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = RunConfig::default();
        assert!(cfg.validate().is_ok());
        assert_eq!(
            (cfg.hbar, cfg.dim, cfg.margin, cfg.branch),
            (1.0, 16, 2, Branch::Minus)
        );
    }

    #[test]
    fn invalid_configs_are_usage_errors() {
        let bad = [
            RunConfig {
                dim: 3,
                ..Default::default()
            },
            RunConfig {
                margin: 0,
                ..Default::default()
            },
            RunConfig {
                margin: 16,
                ..Default::default()
            },
            RunConfig {
                hbar: 0.0,
                ..Default::default()
            },
            RunConfig {
                theta: -1.0,
                ..Default::default()
            },
            RunConfig {
                tol_defect: f64::NAN,
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn axis_hits_both_endpoints() {
        let a = Axis::new(0.1, 4.0, 40).unwrap();
        let v: Vec<f64> = a.values().collect();
        assert_eq!(v.len(), 40);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[39], 4.0);
        assert!((v[9] - 1.0).abs() < 1e-15);
        assert!(Axis::new(1.0, 1.0, 4).is_err());
        assert!(Axis::new(0.0, 1.0, 1).is_err());
    }
}
