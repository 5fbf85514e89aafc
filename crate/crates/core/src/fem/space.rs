use std::sync::{Arc, OnceLock};

use super::basis::{self, MAX_LOCAL};
use super::FemError;
use crate::mesh::Mesh;
use crate::Point;

/// Polynomial degree of a Lagrange space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Degree {
    P1,
    P2,
    P3,
}

impl Degree {
    pub const ALL: [Degree; 3] = [Degree::P1, Degree::P2, Degree::P3];

    pub fn order(self) -> usize {
        match self {
            Degree::P1 => 1,
            Degree::P2 => 2,
            Degree::P3 => 3,
        }
    }

    pub fn local_dofs(self) -> usize {
        match self {
            Degree::P1 => 3,
            Degree::P2 => 6,
            Degree::P3 => 10,
        }
    }
}

impl TryFrom<usize> for Degree {
    type Error = FemError;

    fn try_from(k: usize) -> Result<Self, FemError> {
        match k {
            1 => Ok(Degree::P1),
            2 => Ok(Degree::P2),
            3 => Ok(Degree::P3),
            _ => Err(FemError::UnsupportedDegree(k)),
        }
    }
}

impl std::fmt::Display for Degree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.order())
    }
}

/// Affine data of one triangle.
#[derive(Debug, Clone, Copy)]
pub struct ElementGeometry {
    pub vertices: [Point; 3],
    pub area: f64,
    /// Constant gradients of the barycentric coordinates.
    pub grad_lambda: [[f64; 2]; 3],
}

impl ElementGeometry {
    pub fn new(vertices: [Point; 3]) -> Self {
        let [p0, p1, p2] = vertices;
        let area = crate::mesh::signed_area(p0, p1, p2);
        let inv = 0.5 / area;
        let mut grad_lambda = [[0.0; 2]; 3];
        for (i, (j, k)) in [(1, 2), (2, 0), (0, 1)].into_iter().enumerate() {
            let (pj, pk) = (vertices[j], vertices[k]);
            grad_lambda[i] = [(pj[1] - pk[1]) * inv, (pk[0] - pj[0]) * inv];
        }
        ElementGeometry { vertices, area, grad_lambda }
    }

    pub fn map(&self, l: [f64; 3]) -> Point {
        let v = &self.vertices;
        [
            l[0] * v[0][0] + l[1] * v[1][0] + l[2] * v[2][0],
            l[0] * v[0][1] + l[1] * v[1][1] + l[2] * v[2][1],
        ]
    }

    pub fn barycentric(&self, x: Point) -> [f64; 3] {
        let v = &self.vertices;
        let l1 = crate::mesh::signed_area(v[0], x, v[2]) / self.area;
        let l2 = crate::mesh::signed_area(v[0], v[1], x) / self.area;
        [1.0 - l1 - l2, l1, l2]
    }

    /// Physical gradients of the shape functions from barycentric derivatives.
    pub fn physical_gradients(&self, n: usize, dl: &[[f64; 3]; MAX_LOCAL], out: &mut [[f64; 2]; MAX_LOCAL]) {
        let g = &self.grad_lambda;
        for a in 0..n {
            let d = dl[a];
            out[a] = [
                d[0] * g[0][0] + d[1] * g[1][0] + d[2] * g[2][0],
                d[0] * g[0][1] + d[1] * g[1][1] + d[2] * g[2][1],
            ];
        }
    }
}

/// Lagrange `P_k` space on a mesh.
///
/// Dofs: vertices first, then edge nodes (two per edge for P3, ordered from
/// the lower-numbered vertex), then P3 cell centroids.
#[derive(Debug)]
pub struct FunctionSpace {
    mesh: Arc<Mesh>,
    degree: Degree,
    dof_coords: Vec<Point>,
    cell_dofs: Vec<usize>,
    boundary_dofs: Vec<usize>,
    is_boundary: Vec<bool>,
    origin_dof: usize,
    locator: OnceLock<Locator>,
}

impl FunctionSpace {
    pub fn new(mesh: Arc<Mesh>, degree: Degree) -> Self {
        let nv = mesh.num_vertices();
        let ne = mesh.num_edges();
        let nt = mesh.num_triangles();
        let nloc = degree.local_dofs();
        let ndofs = match degree {
            Degree::P1 => nv,
            Degree::P2 => nv + ne,
            Degree::P3 => nv + 2 * ne + nt,
        };

        let mut dof_coords = Vec::with_capacity(ndofs);
        dof_coords.extend_from_slice(mesh.vertices());
        for &[a, b] in mesh.edges() {
            let (pa, pb) = (mesh.vertices()[a], mesh.vertices()[b]);
            let lerp = |s: f64| [pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1])];
            match degree {
                Degree::P1 => {}
                Degree::P2 => dof_coords.push(lerp(0.5)),
                Degree::P3 => {
                    dof_coords.push(lerp(1.0 / 3.0));
                    dof_coords.push(lerp(2.0 / 3.0));
                }
            }
        }
        if degree == Degree::P3 {
            for t in 0..nt {
                let [a, b, c] = mesh.triangle_points(t);
                dof_coords.push([(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]);
            }
        }
        debug_assert_eq!(dof_coords.len(), ndofs);

        let mut cell_dofs = Vec::with_capacity(nt * nloc);
        for (t, (tri, te)) in mesh.triangles().iter().zip(mesh.triangle_edges()).enumerate() {
            cell_dofs.extend_from_slice(tri);
            for (k, &e) in te.iter().enumerate() {
                match degree {
                    Degree::P1 => {}
                    Degree::P2 => cell_dofs.push(nv + e),
                    Degree::P3 => {
                        let first = nv + 2 * e;
                        if tri[k] == mesh.edges()[e][0] {
                            cell_dofs.extend_from_slice(&[first, first + 1]);
                        } else {
                            cell_dofs.extend_from_slice(&[first + 1, first]);
                        }
                    }
                }
            }
            if degree == Degree::P3 {
                cell_dofs.push(nv + 2 * ne + t);
            }
        }

        let mut is_boundary = vec![false; ndofs];
        for (e, &[a, b]) in mesh.edges().iter().enumerate() {
            if mesh.is_boundary_edge(e) {
                is_boundary[a] = true;
                is_boundary[b] = true;
                match degree {
                    Degree::P1 => {}
                    Degree::P2 => is_boundary[nv + e] = true,
                    Degree::P3 => {
                        is_boundary[nv + 2 * e] = true;
                        is_boundary[nv + 2 * e + 1] = true;
                    }
                }
            }
        }
        let boundary_dofs = (0..ndofs).filter(|&i| is_boundary[i]).collect();
        let origin_dof = mesh.origin_vertex();

        FunctionSpace {
            mesh,
            degree,
            dof_coords,
            cell_dofs,
            boundary_dofs,
            is_boundary,
            origin_dof,
            locator: OnceLock::new(),
        }
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    pub fn num_dofs(&self) -> usize {
        self.dof_coords.len()
    }

    pub fn dof_coords(&self) -> &[Point] {
        &self.dof_coords
    }

    pub fn cell_dofs(&self, t: usize) -> &[usize] {
        let n = self.degree.local_dofs();
        &self.cell_dofs[t * n..(t + 1) * n]
    }

    pub fn boundary_dofs(&self) -> &[usize] {
        &self.boundary_dofs
    }

    pub fn is_boundary_dof(&self, i: usize) -> bool {
        self.is_boundary[i]
    }

    pub fn origin_dof(&self) -> usize {
        self.origin_dof
    }

    pub fn geometry(&self, t: usize) -> ElementGeometry {
        ElementGeometry::new(self.mesh.triangle_points(t))
    }

    /// Nodal interpolant of `f`.
    pub fn interpolate(&self, f: impl Fn(Point) -> f64) -> Vec<f64> {
        self.dof_coords.iter().map(|&p| f(p)).collect()
    }

    /// Triangle containing `x` and the barycentric coordinates of `x` in it.
    pub fn locate(&self, x: Point) -> Result<(usize, [f64; 3]), FemError> {
        self.locator
            .get_or_init(|| Locator::new(&self.mesh))
            .locate(&self.mesh, x)
            .ok_or(FemError::PointOutsideMesh { x: x[0], y: x[1] })
    }

    /// `sum_a coeffs[dof_a] phi_a` on triangle `t` at barycentric point `l`.
    pub fn eval_in_cell(&self, coeffs: &[f64], t: usize, l: [f64; 3]) -> f64 {
        let mut phi = [0.0; MAX_LOCAL];
        basis::values(self.degree, l, &mut phi);
        self.cell_dofs(t).iter().zip(&phi).map(|(&i, p)| coeffs[i] * p).sum()
    }

    pub fn eval_gradient_in_cell(&self, coeffs: &[f64], t: usize, geo: &ElementGeometry, l: [f64; 3]) -> [f64; 2] {
        let n = self.degree.local_dofs();
        let mut dl = [[0.0; 3]; MAX_LOCAL];
        let mut grads = [[0.0; 2]; MAX_LOCAL];
        basis::barycentric_derivatives(self.degree, l, &mut dl);
        geo.physical_gradients(n, &dl, &mut grads);
        let mut g = [0.0; 2];
        for (&i, grad) in self.cell_dofs(t).iter().zip(&grads) {
            g[0] += coeffs[i] * grad[0];
            g[1] += coeffs[i] * grad[1];
        }
        g
    }
}

/// `sum_i coeffs_i phi_i(x)`.
pub fn evaluate(space: &FunctionSpace, coeffs: &[f64], x: Point) -> Result<f64, FemError> {
    check_len(space, coeffs)?;
    let (t, l) = space.locate(x)?;
    Ok(space.eval_in_cell(coeffs, t, l))
}

/// Gradient of the finite element function at `x`. On an edge or vertex the
/// value from the first triangle found is returned.
pub fn evaluate_gradient(space: &FunctionSpace, coeffs: &[f64], x: Point) -> Result<[f64; 2], FemError> {
    check_len(space, coeffs)?;
    let (t, l) = space.locate(x)?;
    Ok(space.eval_gradient_in_cell(coeffs, t, &space.geometry(t), l))
}

fn check_len(space: &FunctionSpace, coeffs: &[f64]) -> Result<(), FemError> {
    if coeffs.len() != space.num_dofs() {
        return Err(FemError::DimensionMismatch { expected: space.num_dofs(), found: coeffs.len() });
    }
    Ok(())
}

/// Uniform bucket grid over the mesh bounding box.
#[derive(Debug)]
struct Locator {
    origin: Point,
    cell: f64,
    n: usize,
    buckets: Vec<Vec<usize>>,
}

const LOCATE_TOL: f64 = 1e-12;

impl Locator {
    fn new(mesh: &Mesh) -> Self {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in mesh.vertices() {
            for d in 0..2 {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        let n = ((mesh.num_triangles() as f64).sqrt().ceil() as usize).max(1);
        let cell = ((hi[0] - lo[0]).max(hi[1] - lo[1]) / n as f64).max(f64::MIN_POSITIVE);
        let mut buckets = vec![Vec::new(); n * n];
        let index = |v: f64, o: f64| (((v - o) / cell).floor().max(0.0) as usize).min(n - 1);
        for t in 0..mesh.num_triangles() {
            let p = mesh.triangle_points(t);
            let (mut a, mut b) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
            for q in &p {
                for d in 0..2 {
                    a[d] = a[d].min(q[d]);
                    b[d] = b[d].max(q[d]);
                }
            }
            for i in index(a[0], lo[0])..=index(b[0], lo[0]) {
                for j in index(a[1], lo[1])..=index(b[1], lo[1]) {
                    buckets[j * n + i].push(t);
                }
            }
        }
        Locator { origin: lo, cell, n, buckets }
    }

    fn locate(&self, mesh: &Mesh, x: Point) -> Option<(usize, [f64; 3])> {
        let fi = ((x[0] - self.origin[0]) / self.cell).floor();
        let fj = ((x[1] - self.origin[1]) / self.cell).floor();
        let n = self.n as f64;
        // allow points a hair outside the bounding box
        if !(-1.0..=n).contains(&fi) || !(-1.0..=n).contains(&fj) {
            return None;
        }
        let i = (fi.max(0.0) as usize).min(self.n - 1);
        let j = (fj.max(0.0) as usize).min(self.n - 1);
        self.buckets[j * self.n + i].iter().find_map(|&t| {
            let l = ElementGeometry::new(mesh.triangle_points(t)).barycentric(x);
            l.iter().all(|&c| c >= -LOCATE_TOL).then_some((t, l))
        })
    }
}
