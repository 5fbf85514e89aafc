//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use holefem::{generate_disk_mesh, Degree, FunctionSpace};

/// A function space on the disk mesh of the given level.
pub fn disk_space(level: usize, degree: Degree) -> FunctionSpace {
    FunctionSpace::new(Arc::new(generate_disk_mesh(level)), degree)
}
