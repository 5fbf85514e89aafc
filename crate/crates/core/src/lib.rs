//! Finite elements for the Poisson problem in the unit disk with a small
//! Dirichlet hole of radius `delta` at the origin, computed on meshes that
//! never resolve the hole.
//!
//! The hole enters the discrete problem only through a rank-one perturbation
//! of the usual stiffness form: the unknown `w` solves
//!
//! ```text
//! a(w, v) + b_delta(w) * b_log(v) = (f, v)      for all v in V_h
//! ```
//!
//! and the far field is reconstructed as `w + b_delta(w) * s_log`, where
//! `s_log` is a cut-off logarithm carrying the singular behaviour that the
//! finite element space cannot represent.
//!
//! Layout:
//! - [`mesh`]: disk triangulations with the origin as a vertex, plain-text IO.
//! - [`fem`]: Lagrange P1/P2/P3 spaces, assembly, Dirichlet lifting, PCG.
//! - [`correction`]: cut-offs, `s_log`, `b_log`, coupling functionals and the
//!   Sherman–Morrison corrected solve.
//! - [`reference`]: closed-form annulus solutions and excluded-disk norms.
//! - [`study`]: h-convergence sweeps and rate fitting.

pub mod correction;
pub mod fem;
pub mod mesh;
pub mod reference;
pub mod study;

/// A point of the plane.
pub type Point = [f64; 2];

pub use correction::{
    assemble_blog, b_functional, lambda_delta, reconstruct, reconstruct_gradient, s_log,
    s_log_gradient, solve_corrected, CorrectionError, CorrectionSetup, CouplingMode, Cutoff,
    CutoffKind, FarFieldSolution,
};
pub use fem::{
    apply_dirichlet, assemble_load, assemble_stiffness, evaluate, evaluate_gradient, solve_spd,
    Degree, DirichletSystem, FemError, FunctionSpace, QuadratureRule, SparseOperator,
};
pub use mesh::{generate_disk_mesh, read_mesh, write_mesh, Mesh, MeshError};
pub use reference::{
    error_norms, exact_annulus, exact_limit, first_order_far_field_disk, BoundaryData, BoundaryMode,
    ExactField, NormError,
};
pub use study::{
    fit_rate, fit_rate_finest, run_study, ErrorRecord, Norm, StudyConfig, StudyError,
};

#[inline]
pub(crate) fn norm(p: Point) -> f64 {
    p[0].hypot(p[1])
}
