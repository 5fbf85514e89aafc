use super::{FunctionSpace, SparseOperator};
use crate::Point;

/// Interior system left after symmetric elimination of the boundary dofs.
#[derive(Debug, Clone)]
pub struct DirichletSystem {
    /// Interior block `A_II` (still SPD).
    pub matrix: SparseOperator,
    /// `F_I - A_IB g_B`.
    pub rhs: Vec<f64>,
    /// Full-length vector holding the boundary values and zeros elsewhere.
    pub lifting: Vec<f64>,
    /// Full index of each interior unknown.
    pub interior: Vec<usize>,
    /// Interior index of each full dof, `None` on the boundary.
    pub reduced_index: Vec<Option<usize>>,
}

impl DirichletSystem {
    /// Full coefficient vector `interior solution + lifting`.
    pub fn expand(&self, reduced: &[f64]) -> Vec<f64> {
        let mut full = self.lifting.clone();
        for (k, &i) in self.interior.iter().enumerate() {
            full[i] = reduced[k];
        }
        full
    }

    /// Interior part of a full-length vector.
    pub fn restrict(&self, full: &[f64]) -> Vec<f64> {
        self.interior.iter().map(|&i| full[i]).collect()
    }
}

/// Eliminates boundary rows and columns. The boundary data `g` is sampled at
/// boundary nodes pushed radially onto the unit circle.
pub fn apply_dirichlet(
    a: &SparseOperator,
    load: &[f64],
    space: &FunctionSpace,
    g: impl Fn(Point) -> f64,
) -> DirichletSystem {
    let n = space.num_dofs();
    let mut lifting = vec![0.0; n];
    for &i in space.boundary_dofs() {
        let p = space.dof_coords()[i];
        let r = crate::norm(p);
        lifting[i] = g([p[0] / r, p[1] / r]);
    }
    let mut reduced_index = vec![None; n];
    let mut interior = Vec::with_capacity(n - space.boundary_dofs().len());
    for i in 0..n {
        if !space.is_boundary_dof(i) {
            reduced_index[i] = Some(interior.len());
            interior.push(i);
        }
    }
    let a_lift = a.apply(&lifting);
    let rhs = interior.iter().map(|&i| load[i] - a_lift[i]).collect();
    let matrix = a.restrict(&reduced_index, interior.len());
    DirichletSystem { matrix, rhs, lifting, interior, reduced_index }
}
