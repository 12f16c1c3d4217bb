use crate::calibration::{
    project, solve_calibration, triangle_area, triangle_perimeter, CalibrationPair, CameraCalibration, DEFAULT_D_MAX,
    DEGENERACY_AREA,
};
use crate::error::{Error, Result};

/// Number of equal-count area bins used for the area/error trend.
pub const AREA_BINS: usize = 5;

/// Mean distance between projected measurements and their reference positions.
pub fn mean_projection_error(cal: &CameraCalibration, holdout: &[CalibrationPair]) -> Result<f64> {
    if holdout.is_empty() {
        return Err(Error::invalid("holdout set is empty"));
    }
    let mut total = 0.0;
    for pair in holdout {
        total += project(cal, pair.cam)?.distance(&pair.unified);
    }
    Ok(total / holdout.len() as f64)
}

/// One calibration triple of the grid study.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CalibrationStudyRow {
    pub subset: [usize; 3],
    /// Camera-frame area of the measured triangle, m².
    pub area: f64,
    pub perimeter: f64,
    /// Mean error over every grid point outside the triple.
    pub mean_error: f64,
}

/// Calibrates from every non-degenerate triple of a measured grid and scores
/// it on the remaining points. `grid` holds measured camera coordinates
/// paired with exact reference positions. Rows come out in lexicographic
/// subset order; triples the solver rejects are skipped like degenerate ones.
pub fn calibration_study(grid: &[CalibrationPair]) -> Result<Vec<CalibrationStudyRow>> {
    let n = grid.len();
    if n < 4 {
        return Err(Error::invalid(format!(
            "calibration study needs at least 4 grid points, got {n}"
        )));
    }
    let mut rows = Vec::new();
    let mut holdout = Vec::with_capacity(n - 3);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, b, c) = (&grid[i].cam, &grid[j].cam, &grid[k].cam);
                let area = triangle_area(a, b, c)?;
                if area < DEGENERACY_AREA {
                    continue;
                }
                let triple = [grid[i].clone(), grid[j].clone(), grid[k].clone()];
                let Ok(cal) = solve_calibration(&triple, "study", DEFAULT_D_MAX) else {
                    continue;
                };
                holdout.clear();
                holdout.extend(
                    grid.iter()
                        .enumerate()
                        .filter(|(m, _)| *m != i && *m != j && *m != k)
                        .map(|(_, p)| p.clone()),
                );
                rows.push(CalibrationStudyRow {
                    subset: [i, j, k],
                    area,
                    perimeter: triangle_perimeter(a, b, c)?,
                    mean_error: mean_projection_error(&cal, &holdout)?,
                });
            }
        }
    }
    Ok(rows)
}

/// Study rows grouped by ascending area into equal-count bins.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AreaBin {
    pub area_min: f64,
    pub area_max: f64,
    pub count: usize,
    pub max_error: f64,
    pub mean_error: f64,
}

/// Splits the rows, sorted by area, into `bins` groups whose sizes differ by
/// at most one.
pub fn area_bins(rows: &[CalibrationStudyRow], bins: usize) -> Vec<AreaBin> {
    let mut sorted: Vec<&CalibrationStudyRow> = rows.iter().collect();
    sorted.sort_by(|a, b| a.area.total_cmp(&b.area).then(a.subset.cmp(&b.subset)));
    let n = sorted.len();
    (0..bins)
        .filter_map(|b| {
            let chunk = &sorted[b * n / bins..(b + 1) * n / bins];
            (!chunk.is_empty()).then(|| AreaBin {
                area_min: chunk[0].area,
                area_max: chunk[chunk.len() - 1].area,
                count: chunk.len(),
                max_error: chunk.iter().map(|r| r.mean_error).fold(0.0, f64::max),
                mean_error: chunk.iter().map(|r| r.mean_error).sum::<f64>() / chunk.len() as f64,
            })
        })
        .collect()
}
