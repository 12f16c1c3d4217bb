use std::collections::HashMap;
use std::io::{Read, Write};

use csv::{ReaderBuilder, StringRecord, Trim, WriterBuilder};

use super::{fmt_num, LineError};
use crate::calibration::CalibrationPair;
use crate::error::{Error, Result};
use crate::evaluation::{AccuracyReport, CalibrationStudyRow, SeparationStudyRow};
use crate::fusion::{CorrelationReport, Decision, Detection, ProjectedSample, Sample, Track};
use crate::point::{CameraPoint, UnifiedPoint};
use crate::simulator::GroundTruth;

/// Rows parsed from a record stream, plus the lines that were skipped.
#[derive(Clone, Debug)]
pub struct Records<T> {
    pub rows: Vec<T>,
    pub errors: Vec<LineError>,
}

struct Row<'a> {
    columns: &'a HashMap<String, usize>,
    record: &'a StringRecord,
}

impl Row<'_> {
    fn get(&self, name: &str) -> Option<&str> {
        self.columns
            .get(name)
            .and_then(|&i| self.record.get(i))
            .filter(|s| !s.is_empty())
    }

    fn text(&self, name: &str) -> std::result::Result<String, String> {
        self.get(name)
            .map(String::from)
            .ok_or_else(|| format!("missing value for '{name}'"))
    }

    fn opt_text(&self, name: &str) -> Option<String> {
        self.get(name).map(String::from)
    }

    fn num(&self, name: &str) -> std::result::Result<f64, String> {
        let raw = self.get(name).ok_or_else(|| format!("missing value for '{name}'"))?;
        parse_finite(name, raw)
    }

    fn opt_num(&self, name: &str) -> std::result::Result<Option<f64>, String> {
        self.get(name).map(|raw| parse_finite(name, raw)).transpose()
    }
}

fn parse_finite(name: &str, raw: &str) -> std::result::Result<f64, String> {
    match raw.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(v) => Err(format!("'{name}' must be finite, got {v}")),
        Err(_) => Err(format!("'{name}' is not a number: '{raw}'")),
    }
}

fn read_table<R: Read, T>(
    input: R,
    required: &[&str],
    strict: bool,
    mut parse: impl FnMut(&Row<'_>) -> std::result::Result<T, String>,
) -> Result<Records<T>> {
    let mut reader = ReaderBuilder::new()
        .has_headers(true)
        .trim(Trim::All)
        .flexible(true)
        .from_reader(input);
    let columns: HashMap<String, usize> = reader
        .headers()?
        .iter()
        .enumerate()
        .map(|(i, h)| (h.to_string(), i))
        .collect();
    if let Some(missing) = required.iter().find(|c| !columns.contains_key(**c)) {
        return Err(Error::Parse(format!("header is missing column '{missing}'")));
    }
    let width = columns.len();

    let mut out = Records {
        rows: Vec::new(),
        errors: Vec::new(),
    };
    for record in reader.records() {
        let (line, parsed) = match record {
            Ok(record) if record.get(0).is_some_and(|f| f.starts_with('#')) => continue,
            Ok(record) => {
                let line = record.position().map_or(0, |p| p.line());
                let parsed = if record.len() != width {
                    Err(format!("expected {width} fields, found {}", record.len()))
                } else {
                    parse(&Row {
                        columns: &columns,
                        record: &record,
                    })
                };
                (line, parsed)
            }
            Err(e) => (e.position().map_or(0, |p| p.line()), Err(e.to_string())),
        };
        match parsed {
            Ok(row) => out.rows.push(row),
            Err(message) => {
                let err = LineError { line, message };
                if strict {
                    return Err(err.into());
                }
                out.errors.push(err);
            }
        }
    }
    Ok(out)
}

/// Reads `camera_id,t,x_cam,z_cam[,person_hint][,vertical]`.
pub fn read_detections<R: Read>(input: R, strict: bool) -> Result<Records<Detection>> {
    read_table(input, &["camera_id", "t", "x_cam", "z_cam"], strict, |row| {
        Ok(Detection {
            camera_id: row.text("camera_id")?,
            t: row.num("t")?,
            pos_cam: CameraPoint::new(row.num("x_cam")?, row.num("z_cam")?),
            person_hint: row.opt_text("person_hint"),
            vertical: row.opt_num("vertical")?,
        })
    })
}

/// Reads `camera_id,person_hint,t,x,y,quality,vertical`; hint and vertical may be empty.
pub fn read_samples<R: Read>(input: R, strict: bool) -> Result<Records<ProjectedSample>> {
    read_table(input, &["camera_id", "t", "x", "y", "quality"], strict, |row| {
        let quality = row.num("quality")?;
        if !(0.0..=1.0).contains(&quality) {
            return Err(format!("quality must lie in [0, 1], got {quality}"));
        }
        Ok(ProjectedSample {
            person_hint: row.opt_text("person_hint"),
            sample: Sample {
                t: row.num("t")?,
                pos: UnifiedPoint::new(row.num("x")?, row.num("y")?),
                quality,
                source_camera: row.text("camera_id")?,
            },
            vertical: row.opt_num("vertical")?,
        })
    })
}

/// One line of a fused track file.
#[derive(Clone, Debug, PartialEq)]
pub struct FusedRow {
    pub track_id: String,
    pub t: f64,
    pub pos: UnifiedPoint,
    pub quality: f64,
}

pub fn read_fused_tracks<R: Read>(input: R, strict: bool) -> Result<Records<FusedRow>> {
    read_table(input, &["track_id", "t", "x", "y", "quality"], strict, |row| {
        Ok(FusedRow {
            track_id: row.text("track_id")?,
            t: row.num("t")?,
            pos: UnifiedPoint::new(row.num("x")?, row.num("y")?),
            quality: row.num("quality")?,
        })
    })
}

/// Reads `label,x_cam,z_cam,x,y`. A missing label becomes `p<N>`, counting data rows from 1.
pub fn read_calibration_pairs<R: Read>(input: R, strict: bool) -> Result<Records<CalibrationPair>> {
    let mut index = 0;
    read_table(input, &["x_cam", "z_cam", "x", "y"], strict, |row| {
        index += 1;
        Ok(CalibrationPair::new(
            CameraPoint::new(row.num("x_cam")?, row.num("z_cam")?),
            UnifiedPoint::new(row.num("x")?, row.num("y")?),
            row.opt_text("label").unwrap_or_else(|| format!("p{index}")),
        ))
    })
}

pub fn read_ground_truth<R: Read>(input: R, strict: bool) -> Result<Records<GroundTruth>> {
    read_table(
        input,
        &["camera_id", "t", "t_true", "walker_id", "x", "y"],
        strict,
        |row| {
            Ok(GroundTruth {
                camera_id: row.text("camera_id")?,
                t: row.num("t")?,
                t_true: row.num("t_true")?,
                walker_id: row.text("walker_id")?,
                pos: UnifiedPoint::new(row.num("x")?, row.num("y")?),
            })
        },
    )
}

fn table<W: Write>(out: W, header: &[&str]) -> Result<csv::Writer<W>> {
    let mut w = WriterBuilder::new().from_writer(out);
    w.write_record(header)?;
    Ok(w)
}

fn finish<W: Write>(mut w: csv::Writer<W>) -> Result<()> {
    w.flush()?;
    Ok(())
}

fn opt_num(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

pub fn write_detections<W: Write>(out: W, detections: &[Detection]) -> Result<()> {
    let mut w = table(out, &["camera_id", "t", "x_cam", "z_cam", "person_hint", "vertical"])?;
    for d in detections {
        w.write_record([
            d.camera_id.clone(),
            fmt_num(d.t),
            fmt_num(d.pos_cam.x_cam),
            fmt_num(d.pos_cam.z_cam),
            d.person_hint.clone().unwrap_or_default(),
            opt_num(d.vertical),
        ])?;
    }
    finish(w)
}

pub fn write_samples<W: Write>(out: W, samples: &[ProjectedSample]) -> Result<()> {
    let mut w = table(out, &["camera_id", "person_hint", "t", "x", "y", "quality", "vertical"])?;
    for p in samples {
        let s = &p.sample;
        w.write_record([
            s.source_camera.clone(),
            p.person_hint.clone().unwrap_or_default(),
            fmt_num(s.t),
            fmt_num(s.pos.x),
            fmt_num(s.pos.y),
            fmt_num(s.quality),
            opt_num(p.vertical),
        ])?;
    }
    finish(w)
}

/// Writes every sample of every track, shifted by `datum_offset` if given.
pub fn write_fused_tracks<W: Write>(out: W, tracks: &[Track], datum_offset: Option<(f64, f64)>) -> Result<()> {
    let (dx, dy) = datum_offset.unwrap_or((0.0, 0.0));
    let mut w = table(out, &["track_id", "t", "x", "y", "quality"])?;
    for track in tracks {
        for s in track.samples() {
            w.write_record([
                track.track_id().to_string(),
                fmt_num(s.t),
                fmt_num(s.pos.x + dx),
                fmt_num(s.pos.y + dy),
                fmt_num(s.quality),
            ])?;
        }
    }
    finish(w)
}

/// One line per candidate pair. `decisions` runs parallel to `reports`.
pub fn write_correlation_report<W: Write>(
    out: W,
    reports: &[CorrelationReport],
    decisions: &[Decision],
    threshold: f64,
) -> Result<()> {
    let mut w = table(
        out,
        &[
            "track_a",
            "track_b",
            "c",
            "n_pairs",
            "c_per_pair",
            "threshold",
            "decision",
        ],
    )?;
    for (r, d) in reports.iter().zip(decisions) {
        w.write_record([
            r.track_a.clone(),
            r.track_b.clone(),
            fmt_num(r.c),
            r.n_pairs().to_string(),
            fmt_num(r.mean_c()),
            fmt_num(threshold),
            d.as_str().to_string(),
        ])?;
    }
    finish(w)
}

/// Sample-level breakdown of every report.
pub fn write_correlation_pairs<W: Write>(out: W, reports: &[CorrelationReport]) -> Result<()> {
    let mut w = table(
        out,
        &[
            "track_a",
            "track_b",
            "t_a",
            "t_b",
            "delta_t",
            "d",
            "quality",
            "distance_factor",
            "c",
        ],
    )?;
    for r in reports {
        for p in &r.pairs {
            w.write_record([
                r.track_a.clone(),
                r.track_b.clone(),
                fmt_num(p.a.t),
                fmt_num(p.b.t),
                fmt_num(p.delta_t),
                fmt_num(p.d),
                fmt_num(p.quality),
                fmt_num(p.distance_factor),
                fmt_num(p.c),
            ])?;
        }
    }
    finish(w)
}

pub fn write_calibration_pairs<W: Write>(out: W, pairs: &[CalibrationPair]) -> Result<()> {
    let mut w = table(out, &["label", "x_cam", "z_cam", "x", "y"])?;
    for p in pairs {
        w.write_record([
            p.label.clone(),
            fmt_num(p.cam.x_cam),
            fmt_num(p.cam.z_cam),
            fmt_num(p.unified.x),
            fmt_num(p.unified.y),
        ])?;
    }
    finish(w)
}

pub fn write_ground_truth<'a, W: Write>(out: W, truth: impl IntoIterator<Item = &'a GroundTruth>) -> Result<()> {
    let mut w = table(out, &["camera_id", "t", "t_true", "walker_id", "x", "y"])?;
    for g in truth {
        w.write_record([
            g.camera_id.clone(),
            fmt_num(g.t),
            fmt_num(g.t_true),
            g.walker_id.clone(),
            fmt_num(g.pos.x),
            fmt_num(g.pos.y),
        ])?;
    }
    finish(w)
}

pub fn write_calibration_study<W: Write>(out: W, rows: &[CalibrationStudyRow]) -> Result<()> {
    let mut w = table(out, &["i", "j", "k", "area", "perimeter", "mean_error"])?;
    for r in rows {
        let [i, j, k] = r.subset;
        w.write_record([
            i.to_string(),
            j.to_string(),
            k.to_string(),
            fmt_num(r.area),
            fmt_num(r.perimeter),
            fmt_num(r.mean_error),
        ])?;
    }
    finish(w)
}

pub fn write_separation_study<W: Write>(out: W, rows: &[SeparationStudyRow]) -> Result<()> {
    let mut w = table(out, &["offset", "c", "n_pairs"])?;
    for r in rows {
        w.write_record([fmt_num(r.offset), fmt_num(r.c), r.n_pairs.to_string()])?;
    }
    finish(w)
}

/// One line per fused track of each run, keyed by the run's seed.
pub fn write_accuracy_table<W: Write>(out: W, runs: &[(u64, AccuracyReport)]) -> Result<()> {
    let mut w = table(out, &["seed", "track_id", "walker_id", "purity", "run_accuracy"])?;
    for (seed, report) in runs {
        for (track, walker, purity) in &report.tracks {
            w.write_record([
                seed.to_string(),
                track.clone(),
                walker.clone(),
                fmt_num(*purity),
                fmt_num(report.accuracy),
            ])?;
        }
    }
    finish(w)
}
