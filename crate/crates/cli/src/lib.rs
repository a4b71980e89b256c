//! Command implementations behind the `nchw` binary. Each command returns a
//! [`VerificationReport`](nchw_core::VerificationReport) together with its exit code.

pub mod commands;
pub mod config;
pub mod render;
pub mod scan;

pub use commands::{
    cmd_darboux, cmd_intertwine, cmd_verify_rep, cmd_weyl, weyl_report, Outcome, EXIT_CRITICAL,
    EXIT_FAIL, EXIT_PASS, EXIT_USAGE,
};
pub use config::{Axis, Format, RunConfig, ScanGrid, UsageError};
pub use render::render;
pub use scan::{cmd_scan, write_scan, ScanRecord};
