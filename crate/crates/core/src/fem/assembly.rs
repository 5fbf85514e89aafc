use super::basis::{self, MAX_LOCAL};
use super::{Degree, ElementGeometry, FunctionSpace, QuadratureRule, SparseOperator};
use crate::Point;

/// Shape function values and barycentric derivatives tabulated at the
/// points of a quadrature rule.
#[derive(Debug, Clone)]
pub struct BasisTable {
    pub rule: QuadratureRule,
    pub values: Vec<[f64; MAX_LOCAL]>,
    pub derivatives: Vec<[[f64; 3]; MAX_LOCAL]>,
}

impl BasisTable {
    pub fn new(degree: Degree, quadrature_degree: usize) -> Self {
        Self::from_rule(degree, QuadratureRule::triangle(quadrature_degree))
    }

    pub fn from_rule(degree: Degree, rule: QuadratureRule) -> Self {
        let mut values = Vec::with_capacity(rule.len());
        let mut derivatives = Vec::with_capacity(rule.len());
        for &l in &rule.points {
            let mut v = [0.0; MAX_LOCAL];
            let mut d = [[0.0; 3]; MAX_LOCAL];
            basis::values(degree, l, &mut v);
            basis::barycentric_derivatives(degree, l, &mut d);
            values.push(v);
            derivatives.push(d);
        }
        BasisTable { rule, values, derivatives }
    }
}

pub(crate) fn stiffness_pattern(space: &FunctionSpace) -> SparseOperator {
    let n = space.num_dofs();
    let nloc = space.degree().local_dofs();
    let mut rows: Vec<Vec<usize>> = vec![Vec::with_capacity(4 * nloc); n];
    for t in 0..space.mesh().num_triangles() {
        let dofs = space.cell_dofs(t);
        for &i in dofs {
            rows[i].extend_from_slice(dofs);
        }
    }
    SparseOperator::from_pattern(rows, true)
}

/// Element stiffness matrix `K_ab = int grad phi_a . grad phi_b`.
pub fn element_stiffness(degree: Degree, table: &BasisTable, geo: &ElementGeometry) -> [[f64; MAX_LOCAL]; MAX_LOCAL] {
    let n = degree.local_dofs();
    let mut k = [[0.0; MAX_LOCAL]; MAX_LOCAL];
    let mut grads = [[0.0; 2]; MAX_LOCAL];
    for (q, w) in table.rule.weights.iter().enumerate() {
        geo.physical_gradients(n, &table.derivatives[q], &mut grads);
        let wq = w * 2.0 * geo.area;
        for a in 0..n {
            for b in a..n {
                k[a][b] += wq * (grads[a][0] * grads[b][0] + grads[a][1] * grads[b][1]);
            }
        }
    }
    for a in 0..n {
        for b in 0..a {
            k[a][b] = k[b][a];
        }
    }
    k
}

/// Global stiffness matrix `A_ij = int grad phi_i . grad phi_j` over the mesh,
/// with a rule of degree `2k` (exact on straight triangles).
pub fn assemble_stiffness(space: &FunctionSpace) -> SparseOperator {
    let n = space.degree().local_dofs();
    let table = BasisTable::new(space.degree(), 2 * space.degree().order());
    let mut a = stiffness_pattern(space);
    for t in 0..space.mesh().num_triangles() {
        let k = element_stiffness(space.degree(), &table, &space.geometry(t));
        let dofs = space.cell_dofs(t);
        for i in 0..n {
            for j in 0..n {
                a.add(dofs[i], dofs[j], k[i][j]);
            }
        }
    }
    a
}

/// `F_i = int f phi_i` with a rule of degree `2k + 2`.
pub fn assemble_load(space: &FunctionSpace, f: impl Fn(Point) -> f64) -> Vec<f64> {
    let degree = space.degree();
    let table = BasisTable::new(degree, 2 * degree.order() + 2);
    assemble_load_with(space, &table, 0..space.mesh().num_triangles(), f)
}

/// Load vector restricted to the given cells, with a caller-supplied table.
pub(crate) fn assemble_load_with(
    space: &FunctionSpace,
    table: &BasisTable,
    cells: impl Iterator<Item = usize>,
    f: impl Fn(Point) -> f64,
) -> Vec<f64> {
    let n = space.degree().local_dofs();
    let mut load = vec![0.0; space.num_dofs()];
    for t in cells {
        let geo = space.geometry(t);
        let dofs = space.cell_dofs(t);
        for (q, (&l, w)) in table.rule.points.iter().zip(&table.rule.weights).enumerate() {
            let fx = f(geo.map(l)) * w * 2.0 * geo.area;
            if fx == 0.0 {
                continue;
            }
            for a in 0..n {
                load[dofs[a]] += fx * table.values[q][a];
            }
        }
    }
    load
}
