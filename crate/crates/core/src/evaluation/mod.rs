//! Accuracy and separation experiments against simulator ground truth.

mod accuracy;
mod calibration_study;
mod separation;
pub mod stats;

pub use accuracy::{
    labelled_correlations, matching_accuracy, matching_report, suggest_threshold, AccuracyReport, ThresholdSuggestion,
    PURITY,
};
pub use calibration_study::{
    area_bins, calibration_study, mean_projection_error, AreaBin, CalibrationStudyRow, AREA_BINS,
};
pub use separation::{separation_curve, separation_study, SeparationStudyRow, DEFAULT_OFFSETS};
