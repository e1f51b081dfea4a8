//! Histograms, peak widths, CSV and SVG output, run reports.

mod csv;
mod histogram;
mod peak;
mod plot;
mod text;

pub use csv::{csv_string, emit_csv, parse_csv, CSV_HEADER};
pub use histogram::Histogram;
pub use peak::{core_width, truncation_factor, PeakFit, MIN_SAMPLES};
pub use plot::{emit_plot, plot_svg, Layout, PlotSpec, Style};
pub use text::{RunReport, Section};

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("degenerate sample: {0}")]
    Degenerate(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
