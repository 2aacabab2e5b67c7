//! Bi-infinite tilings: finite models, SL2 verification, tame/wild
//! classification, wild density and local audits.
//!
//! Coordinates are `(i, j)` with `i` the row (increasing downward) and `j` the
//! column (increasing rightward).

mod audit;
mod classify;
mod model;

pub use audit::{
    audit_model, corner_audit, corner_window, cross_window, dodgson_audit, dodgson_window,
    zero_cross_audit, AuditKind, AuditOutcome, Counterexample,
};
pub use classify::{
    classify_entry, verify_sl2, wild_density_exact, wild_density_windows, wildness_report,
    window_report, window_violations, CellReport, ColorClass, DensitySample, EntryClass, Violation,
    WildnessReport,
};
pub use model::{
    formal_variable, position_of_variable, NumericParams, ParameterAssignment, Patched, Sublattice,
    TilingBody, TilingModel, Window,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TilingError {
    #[error("invalid tiling: {0}")]
    Invalid(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
}
