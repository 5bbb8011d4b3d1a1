//! Error-lab machinery around `qpoch-core`: truncation-error sweeps over the
//! asymptotic series, the optimal-truncation estimators, and deterministic
//! CSV/JSON emission for the command-line interface.

pub mod estimate;
pub mod output;
pub mod sweep;

pub use estimate::{estimate_optimal, TruncEstimate};
pub use sweep::{sweep, SweepConfig, SweepRegime, SweepRow};
