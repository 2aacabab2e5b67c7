//! Text format, SVG rendering and JSON reports.

mod grid;
mod report;
mod svg;

pub use grid::{
    format_token, parse_assignment, parse_grid, parse_token, write_grid, GridDocument, GridKind,
    ParseError, Parsed, WriteOptions,
};
pub use report::{ClassEntry, DensityEntry, Report, SampleEntry, ViolationEntry};
pub use svg::{color_of, render_model_svg, render_report_svg, render_window_svg, RenderOptions};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IoError {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("{0}")]
    Invalid(String),

    #[error("refusing to render a non-SL2 input: {0}")]
    Unverified(String),

    #[error(transparent)]
    Tiling(#[from] crate::tiling::TilingError),
}
