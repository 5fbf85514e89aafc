//! Lagrange P1/P2/P3 finite elements on straight triangles.

use thiserror::Error;

pub mod assembly;
pub mod basis;
mod dirichlet;
pub mod quadrature;
pub mod solver;
mod space;
mod sparse;

pub use assembly::{assemble_load, assemble_stiffness, BasisTable};
pub use dirichlet::{apply_dirichlet, DirichletSystem};
pub use quadrature::QuadratureRule;
pub use solver::{solve_spd, SolverOptions, SpdSolver};
pub use space::{evaluate, evaluate_gradient, Degree, ElementGeometry, FunctionSpace};
pub use sparse::SparseOperator;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FemError {
    #[error("point ({x}, {y}) is outside the mesh")]
    PointOutsideMesh { x: f64, y: f64 },
    #[error("conjugate gradients stopped after {iterations} iterations at relative residual {residual:.3e}")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("vector of length {found} where {expected} was expected")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported polynomial degree {0}, expected 1, 2 or 3")]
    UnsupportedDegree(usize),
}
