//! The small-hole correction.
//!
//! The far field of the solution is sought as `w + c * s_log` where `w` lives
//! in an ordinary finite element space on a mesh that ignores the hole, and
//! `s_log = chi(|x|) ln(1/|x|) / (2 pi)` carries the logarithmic singularity.
//! The coefficient `c` is a linear functional of `w` (point value at the
//! hole center, or mean over the circle of radius `delta`), which turns the
//! discrete problem into the stiffness matrix plus a rank-one term
//! `b_log d^T`.

use thiserror::Error;

mod cutoff;
mod singular;
mod solve;

pub use cutoff::{Cutoff, CutoffKind};
pub use singular::{assemble_blog, regular_part_laplacian, s_log, s_log_gradient};
pub use solve::{
    b_functional, functional_weights, reconstruct, reconstruct_gradient, solve_corrected, FarFieldSolution,
};

use crate::fem::FemError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CorrectionError {
    #[error(transparent)]
    Fem(#[from] FemError),
    #[error("ln(delta) + 2 pi (P0 - G0) vanishes")]
    ZeroDenominator,
    #[error("perturbed system near-singular (1 + d^T A^-1 b_log = {denominator:.3e}); delta is not small enough")]
    NearSingular { denominator: f64 },
    #[error("invalid correction setup: {0}")]
    InvalidSetup(String),
    #[error("gradient of s_log is undefined at the origin")]
    GradientAtOrigin,
    #[error("the coupling functional is not defined for mode `none`")]
    NoFunctional,
}

/// How the coefficient of `s_log` is read off the regular part `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CouplingMode {
    /// `w(0)`.
    Point,
    /// Mean of `w` over the circle of radius `delta`.
    Average,
    /// No correction: plain Galerkin solve of the hole-free problem.
    None,
}

impl CouplingMode {
    pub fn name(self) -> &'static str {
        match self {
            CouplingMode::Point => "point",
            CouplingMode::Average => "average",
            CouplingMode::None => "none",
        }
    }
}

impl std::str::FromStr for CouplingMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "point" => Ok(CouplingMode::Point),
            "average" => Ok(CouplingMode::Average),
            "none" => Ok(CouplingMode::None),
            _ => Err(format!("unknown mode `{s}`, expected point, average or none")),
        }
    }
}

impl std::fmt::Display for CouplingMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters of the correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectionSetup {
    /// Hole radius.
    pub delta: f64,
    /// Capacity constant of the reference hole shape (0 for a disk).
    pub p0: f64,
    pub cutoff: Cutoff,
    pub mode: CouplingMode,
    /// Trapezoid points on the circle of radius `delta` for `Average`.
    pub n_circle: usize,
}

impl CorrectionSetup {
    pub const DEFAULT_CIRCLE_POINTS: usize = 64;

    /// Disk-shaped hole (`P0 = 0`) with 64 circle points.
    pub fn new(delta: f64, cutoff: CutoffKind, mode: CouplingMode) -> Result<Self, CorrectionError> {
        Self::with_capacity(delta, 0.0, Cutoff::new(cutoff), mode, Self::DEFAULT_CIRCLE_POINTS)
    }

    pub fn with_capacity(
        delta: f64,
        p0: f64,
        cutoff: Cutoff,
        mode: CouplingMode,
        n_circle: usize,
    ) -> Result<Self, CorrectionError> {
        let setup = CorrectionSetup { delta, p0, cutoff, mode, n_circle };
        setup.validate()?;
        Ok(setup)
    }

    pub fn validate(&self) -> Result<(), CorrectionError> {
        let invalid = |m: String| Err(CorrectionError::InvalidSetup(m));
        if !(self.delta > 0.0 && self.delta < self.cutoff.inner) {
            return invalid(format!("delta = {} must lie in (0, {})", self.delta, self.cutoff.inner));
        }
        if !(0.0 < self.cutoff.inner && self.cutoff.inner < self.cutoff.outer) {
            return invalid("cut-off radii must satisfy 0 < inner < outer".into());
        }
        if self.denominator() >= 0.0 {
            return invalid(format!("ln(delta) + 2 pi P0 = {} must be negative", self.denominator()));
        }
        if self.mode == CouplingMode::Average && self.n_circle == 0 {
            return invalid("n_circle must be positive".into());
        }
        Ok(())
    }

    /// `ln(delta) + 2 pi P0`.
    pub fn denominator(&self) -> f64 {
        self.delta.ln() + 2.0 * std::f64::consts::PI * self.p0
    }

    /// `2 pi / (ln(delta) + 2 pi P0)`, the factor in front of `w(0)`.
    pub fn prefactor(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.denominator()
    }
}

/// Gauge function `2 pi / (ln(delta) + 2 pi (P0 - G0))`.
pub fn lambda_delta(delta: f64, p0: f64, g0: f64) -> Result<f64, CorrectionError> {
    let den = delta.ln() + 2.0 * std::f64::consts::PI * (p0 - g0);
    if den == 0.0 || !den.is_finite() {
        return Err(CorrectionError::ZeroDenominator);
    }
    Ok(2.0 * std::f64::consts::PI / den)
}
