//! Deterministic SVG rendering of classified windows.

use std::fmt::Write;

use crate::tiling::{
    verify_sl2, wildness_report, window_report, ColorClass, TilingModel, WildnessReport, Window,
};

use super::IoError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RenderOptions {
    /// Side of one cell in pixels, at least 4.
    pub cell_size: u32,
    pub labels: bool,
    /// Render even if the input fails the SL2 check.
    pub force: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            cell_size: 24,
            labels: false,
            force: false,
        }
    }
}

pub fn color_of(c: ColorClass) -> &'static str {
    match c {
        ColorClass::PlusOne => "#cfe8ff",
        ColorClass::MinusOne => "#ffd6d6",
        ColorClass::ZeroTame => "#ffffff",
        ColorClass::ZeroWild => "#000000",
        ColorClass::Parameter => "#ffe066",
        ColorClass::OtherNonzero => "#d9d9d9",
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// One square per cell, row-major, with optional centred value labels.
pub fn render_report_svg(r: &WildnessReport, opts: &RenderOptions) -> Result<String, IoError> {
    if opts.cell_size < 4 {
        return Err(IoError::Invalid(format!(
            "cell size must be at least 4, got {}",
            opts.cell_size
        )));
    }
    let s = opts.cell_size as usize;
    let (w, h) = (r.cols * s, r.rows * s);
    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
    writeln!(
        out,
        r##"<g stroke="#808080" stroke-width="1" shape-rendering="crispEdges">"##
    )
    .unwrap();
    for row in 0..r.rows {
        for col in 0..r.cols {
            let cell = r.cell(row, col);
            writeln!(
                out,
                r#"<rect x="{}" y="{}" width="{s}" height="{s}" fill="{}"/>"#,
                col * s,
                row * s,
                color_of(cell.color)
            )
            .unwrap();
        }
    }
    writeln!(out, "</g>").unwrap();
    if opts.labels {
        let font = (s * 2 / 5).max(3);
        writeln!(
            out,
            r#"<g font-family="monospace" font-size="{font}" text-anchor="middle" dominant-baseline="central">"#
        )
        .unwrap();
        for row in 0..r.rows {
            for col in 0..r.cols {
                let cell = r.cell(row, col);
                let fill = if cell.color == ColorClass::ZeroWild {
                    "#ffffff"
                } else {
                    "#000000"
                };
                writeln!(
                    out,
                    r#"<text x="{}" y="{}" fill="{fill}">{}</text>"#,
                    col * s + s / 2,
                    row * s + s / 2,
                    escape(&cell.value.to_string())
                )
                .unwrap();
            }
        }
        writeln!(out, "</g>").unwrap();
    }
    writeln!(out, "</svg>").unwrap();
    Ok(out)
}

/// Renders the `rows x cols` rectangle at `(i0, j0)` of a tiling.
pub fn render_model_svg(
    t: &TilingModel,
    i0: i64,
    j0: i64,
    rows: usize,
    cols: usize,
    opts: &RenderOptions,
) -> Result<String, IoError> {
    if !opts.force {
        if let Err(v) = verify_sl2(t) {
            return Err(IoError::Unverified(format!(
                "2x2 minor at ({}, {}) is {}",
                v.i, v.j, v.det
            )));
        }
    }
    render_report_svg(&wildness_report(t, i0, j0, rows, cols), opts)
}

/// Renders the interior of a finite window (its border lacks neighbours).
pub fn render_window_svg(w: &Window, opts: &RenderOptions) -> Result<String, IoError> {
    let r = window_report(w)?;
    if !opts.force {
        if let Some(v) = r.violations.first() {
            return Err(IoError::Unverified(format!(
                "2x2 minor at ({}, {}) is {}",
                v.i, v.j, v.det
            )));
        }
    }
    render_report_svg(&r, opts)
}
