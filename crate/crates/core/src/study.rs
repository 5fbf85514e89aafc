//! h-convergence sweeps against the exact annulus solution.

use std::sync::Arc;
use std::time::Instant;

use thiserror::Error;

use crate::correction::{solve_corrected, CorrectionError, CorrectionSetup, CouplingMode, Cutoff, CutoffKind};
use crate::fem::{Degree, FunctionSpace};
use crate::mesh::{generate_disk_mesh, Mesh, MAX_LEVEL};
use crate::reference::{error_norms, exact_annulus, BoundaryData, NormError};

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub deltas: Vec<f64>,
    /// Refinement levels, in sweep order.
    pub levels: Vec<usize>,
    pub degrees: Vec<Degree>,
    pub cutoff: CutoffKind,
    pub mode: CouplingMode,
    pub g: BoundaryData,
    /// Radius of the disk excluded from the error norms.
    pub rho: f64,
    /// Measure wall-clock time per cell; when false `runtime_ms` is 0 and the
    /// records depend only on the configuration.
    pub record_timing: bool,
}

impl StudyConfig {
    pub const DEFAULT_RHO: f64 = 0.15;

    pub fn new(deltas: Vec<f64>, levels: Vec<usize>, degrees: Vec<Degree>) -> Self {
        StudyConfig {
            deltas,
            levels,
            degrees,
            cutoff: CutoffKind::Exp,
            mode: CouplingMode::Point,
            g: BoundaryData::one(),
            rho: Self::DEFAULT_RHO,
            record_timing: true,
        }
    }

    pub fn validate(&self) -> Result<(), StudyError> {
        let invalid = |m: String| Err(StudyError::InvalidConfig(m));
        if self.deltas.is_empty() || self.levels.is_empty() || self.degrees.is_empty() {
            return invalid("delta, level and degree lists must be nonempty".into());
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return invalid(format!("rho = {} must lie in (0, 1)", self.rho));
        }
        for &d in &self.deltas {
            if !(d > 0.0 && d < self.rho) {
                return invalid(format!("delta = {d} must lie in (0, rho = {})", self.rho));
            }
            if self.mode != CouplingMode::None {
                CorrectionSetup::new(d, self.cutoff, self.mode).map_err(|e| StudyError::InvalidConfig(e.to_string()))?;
            }
        }
        if let Some(&l) = self.levels.iter().find(|&&l| l > MAX_LEVEL) {
            return invalid(format!("level {l} exceeds the maximum {MAX_LEVEL}"));
        }
        Ok(())
    }
}

/// One cell of a sweep. A failed cell has NaN errors and `failure` set.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRecord {
    pub delta: f64,
    pub h_avg: f64,
    pub degree: Degree,
    pub chi: CutoffKind,
    pub mode: CouplingMode,
    pub dofs: usize,
    pub err_l2: f64,
    pub err_h1: f64,
    pub runtime_ms: f64,
    pub failure: Option<String>,
}

impl ErrorRecord {
    pub fn is_ok(&self) -> bool {
        self.failure.is_none()
    }

    pub fn error(&self, norm: Norm) -> f64 {
        match norm {
            Norm::L2 => self.err_l2,
            Norm::H1 => self.err_h1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Norm {
    L2,
    H1,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StudyError {
    #[error("invalid study configuration: {0}")]
    InvalidConfig(String),
    #[error("rate fit needs {needed} records with distinct h, got {found}")]
    TooFewPoints { needed: usize, found: usize },
}

#[derive(Debug, Error)]
enum CellError {
    #[error(transparent)]
    Correction(#[from] CorrectionError),
    #[error(transparent)]
    Norm(#[from] NormError),
}

/// Runs every `(delta, degree, level)` cell with `f = 0`, in that nesting
/// order. Cells that fail numerically are recorded and the sweep goes on.
pub fn run_study(cfg: &StudyConfig) -> Result<Vec<ErrorRecord>, StudyError> {
    cfg.validate()?;
    let meshes = mesh_family(&cfg.levels);
    let mut records = Vec::with_capacity(cfg.deltas.len() * cfg.degrees.len() * cfg.levels.len());
    for &delta in &cfg.deltas {
        for &degree in &cfg.degrees {
            for &level in &cfg.levels {
                let mesh = &meshes[level];
                let space = FunctionSpace::new(Arc::clone(mesh), degree);
                let start = Instant::now();
                let outcome = run_cell(cfg, &space, delta);
                let runtime_ms = if cfg.record_timing { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
                let (err_l2, err_h1, failure) = match outcome {
                    Ok((l2, h1)) => (l2, h1, None),
                    Err(e) => {
                        log::warn!("cell delta={delta:e} degree={degree} level={level} failed: {e}");
                        (f64::NAN, f64::NAN, Some(e.to_string()))
                    }
                };
                log::info!("delta={delta:e} {degree} level={level} dofs={} err_h1={err_h1:.3e}", space.num_dofs());
                records.push(ErrorRecord {
                    delta,
                    h_avg: mesh.h_avg(),
                    degree,
                    chi: cfg.cutoff,
                    mode: cfg.mode,
                    dofs: space.num_dofs(),
                    err_l2,
                    err_h1,
                    runtime_ms,
                    failure,
                });
            }
        }
    }
    Ok(records)
}

/// Meshes indexed by level, built by successive refinement up to the
/// largest requested level.
fn mesh_family(levels: &[usize]) -> Vec<Arc<Mesh>> {
    let top = levels.iter().copied().max().unwrap_or(0);
    let mut family = vec![Arc::new(generate_disk_mesh(0))];
    for l in 1..=top {
        let next = family[l - 1].refine_uniform();
        family.push(Arc::new(next));
    }
    family
}

fn run_cell(cfg: &StudyConfig, space: &FunctionSpace, delta: f64) -> Result<(f64, f64), CellError> {
    let setup = CorrectionSetup::with_capacity(
        delta,
        0.0,
        Cutoff::new(cfg.cutoff),
        cfg.mode,
        CorrectionSetup::DEFAULT_CIRCLE_POINTS,
    );
    // mode `none` still carries a setup for reconstruction; only the range of
    // delta matters there
    let setup = match (setup, cfg.mode) {
        (Ok(s), _) => s,
        (Err(_), CouplingMode::None) => CorrectionSetup {
            delta,
            p0: 0.0,
            cutoff: Cutoff::new(cfg.cutoff),
            mode: CouplingMode::None,
            n_circle: CorrectionSetup::DEFAULT_CIRCLE_POINTS,
        },
        (Err(e), _) => return Err(e.into()),
    };
    let load = vec![0.0; space.num_dofs()];
    let g = &cfg.g;
    let sol = solve_corrected(space, &setup, &load, |x| g.value(x))?;
    let exact = exact_annulus(g, delta);
    Ok(error_norms(&sol, &exact, cfg.rho)?)
}

/// Least-squares slope of `log(err)` against `log(h)` over the three
/// smallest `h`.
pub fn fit_rate(records: &[ErrorRecord], norm: Norm) -> Result<f64, StudyError> {
    fit_rate_finest(records, norm, 3)
}

/// As [`fit_rate`] over the `n` smallest `h` (at least two).
pub fn fit_rate_finest(records: &[ErrorRecord], norm: Norm, n: usize) -> Result<f64, StudyError> {
    let needed = n.max(2);
    let mut pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.is_ok() && r.h_avg > 0.0 && r.error(norm) > 0.0)
        .map(|r| (r.h_avg, r.error(norm)))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.dedup_by(|a, b| a.0 == b.0);
    if pts.len() < needed {
        return Err(StudyError::TooFewPoints { needed, found: pts.len() });
    }
    let pts = &pts[..needed];
    Ok(least_squares_slope(pts.iter().map(|&(h, e)| (h.ln(), e.ln()))))
}

fn least_squares_slope(pts: impl Iterator<Item = (f64, f64)> + Clone) -> f64 {
    let n = pts.clone().count() as f64;
    let (sx, sy) = pts.clone().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = pts.fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(hs: &[f64], err: impl Fn(f64) -> f64) -> Vec<ErrorRecord> {
        hs.iter()
            .map(|&h| ErrorRecord {
                delta: 1e-10,
                h_avg: h,
                degree: Degree::P1,
                chi: CutoffKind::Exp,
                mode: CouplingMode::Point,
                dofs: 0,
                err_l2: err(h),
                err_h1: err(h),
                runtime_ms: 0.0,
                failure: None,
            })
            .collect()
    }

    #[test]
    fn exact_power_law() {
        let r = synthetic(&[0.4, 0.2, 0.1, 0.05], |h| h * h);
        assert!((fit_rate(&r, Norm::H1).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn uses_finest_levels_only() {
        let r = synthetic(&[0.8, 0.4, 0.2, 0.1, 0.05], |h| if h > 0.5 { 1e3 } else { 3.0 * h });
        assert!((fit_rate(&r, Norm::L2).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn floor_barely_biases() {
        let r = synthetic(&[0.2, 0.1, 0.05], |h| 3.0 * h + 1e-9);
        assert!((fit_rate(&r, Norm::H1).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn constant_error_has_zero_slope() {
        let r = synthetic(&[0.2, 0.1, 0.05], |_| 0.3);
        assert!(fit_rate(&r, Norm::H1).unwrap().abs() < 1e-12);
    }

    #[test]
    fn too_few_points() {
        let r = synthetic(&[0.2, 0.1], |h| h);
        assert_eq!(fit_rate(&r, Norm::H1), Err(StudyError::TooFewPoints { needed: 3, found: 2 }));
        let r = synthetic(&[0.2, 0.2, 0.2], |h| h);
        assert!(fit_rate(&r, Norm::H1).is_err());
        assert!((fit_rate_finest(&synthetic(&[0.2, 0.1], |h| h), Norm::H1, 2).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn failed_records_are_skipped() {
        let mut r = synthetic(&[0.4, 0.2, 0.1, 0.05], |h| h);
        r[3].failure = Some("boom".into());
        r[3].err_h1 = f64::NAN;
        assert!((fit_rate(&r, Norm::H1).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        let ok = StudyConfig::new(vec![1e-2], vec![1, 2], vec![Degree::P1]);
        assert!(ok.validate().is_ok());
        let empty = StudyConfig::new(vec![], vec![1], vec![Degree::P1]);
        assert!(matches!(run_study(&empty), Err(StudyError::InvalidConfig(_))));
        let big = StudyConfig::new(vec![0.2], vec![1], vec![Degree::P1]);
        assert!(big.validate().is_err());
        let deep = StudyConfig::new(vec![0.01], vec![MAX_LEVEL + 1], vec![Degree::P1]);
        assert!(deep.validate().is_err());
    }

    #[test]
    fn small_sweep_is_ordered_and_deterministic() {
        let mut cfg = StudyConfig::new(vec![1e-2, 1e-6], vec![1, 2], vec![Degree::P1, Degree::P2]);
        cfg.record_timing = false;
        let a = run_study(&cfg).unwrap();
        let b = run_study(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 8);
        assert_eq!((a[0].delta, a[0].degree), (1e-2, Degree::P1));
        assert_eq!((a[3].delta, a[3].degree), (1e-2, Degree::P2));
        assert!(a[0].h_avg > a[1].h_avg);
        assert!(a.iter().all(|r| r.is_ok() && r.err_h1 >= r.err_l2 && r.runtime_ms == 0.0));
    }
}
