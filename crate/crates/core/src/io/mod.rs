//! Text formats: comma-separated record streams with a header line, and TOML
//! documents for calibrations, scenarios and pipeline settings.
//!
//! Every float is written with 9 significant digits. Record readers accept
//! columns in any order, ignore `#` comment lines and report malformed lines
//! by line number; in strict mode the first bad line aborts the read.

mod config;
mod records;

pub use config::{
    read_calibration, read_pipeline_config, read_scenario, scenario_from_toml, scenario_to_toml, write_calibration,
    write_scenario, CalibrationFile, Coefficients, PairEntry, PipelineConfig,
};
pub use records::{
    read_calibration_pairs, read_detections, read_fused_tracks, read_ground_truth, read_samples, write_accuracy_table,
    write_calibration_pairs, write_calibration_study, write_correlation_pairs, write_correlation_report,
    write_detections, write_fused_tracks, write_ground_truth, write_samples, write_separation_study, FusedRow, Records,
};

use std::fmt;

use crate::error::Error;

/// Formats `v` with 9 significant digits, plain notation for moderate
/// magnitudes and trailing zeros trimmed.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..15).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let rounded: f64 = sci.parse().expect("round trip");
        trim_zeros(format!("{rounded:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// `v` rounded to what [`fmt_num`] writes.
pub fn round9(v: f64) -> f64 {
    fmt_num(v).parse().unwrap_or(v)
}

/// A malformed input line.
#[derive(Clone, Debug, PartialEq)]
pub struct LineError {
    pub line: u64,
    pub message: String,
}

impl fmt::Display for LineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl From<LineError> for Error {
    fn from(e: LineError) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
