#![allow(dead_code)]

use std::sync::Arc;

use holefem::{
    assemble_blog, assemble_load, assemble_stiffness, b_functional, generate_disk_mesh, CorrectionSetup, Degree,
    FarFieldSolution, FunctionSpace, Point, QuadratureRule,
};
use nalgebra::{DMatrix, DVector};

pub fn space(level: usize, degree: Degree) -> FunctionSpace {
    FunctionSpace::new(Arc::new(generate_disk_mesh(level)), degree)
}

/// `(||v - f||_{L2}, |v - f|_{H1})` of a finite element function against a
/// smooth field over the cells selected by `keep`, with a rule of the given
/// degree.
pub fn fe_errors(
    space: &FunctionSpace,
    coeffs: &[f64],
    f: impl Fn(Point) -> (f64, [f64; 2]),
    keep: impl Fn(&[Point; 3]) -> bool,
    degree: usize,
) -> (f64, f64) {
    let rule = QuadratureRule::triangle(degree);
    let (mut l2, mut semi) = (0.0, 0.0);
    for t in 0..space.mesh().num_triangles() {
        let geo = space.geometry(t);
        if !keep(&geo.vertices) {
            continue;
        }
        for (&l, &w) in rule.points.iter().zip(&rule.weights) {
            let (v, g) = f(geo.map(l));
            let vh = space.eval_in_cell(coeffs, t, l);
            let gh = space.eval_gradient_in_cell(coeffs, t, &geo, l);
            let jw = 2.0 * geo.area * w;
            l2 += jw * (vh - v).powi(2);
            semi += jw * ((gh[0] - g[0]).powi(2) + (gh[1] - g[1]).powi(2));
        }
    }
    (l2.sqrt(), semi.sqrt())
}

/// H1 norm of the difference of two reconstructed far fields on the cells
/// outside `D_rho`.
pub fn far_field_distance(a: &FarFieldSolution<'_>, b: &FarFieldSolution<'_>, rho: f64) -> f64 {
    let space = a.space;
    let rule = QuadratureRule::triangle(2 * space.degree().order() + 2);
    let mut s = 0.0;
    for t in 0..space.mesh().num_triangles() {
        let geo = space.geometry(t);
        let c = geo.map([1.0 / 3.0; 3]);
        if c[0].hypot(c[1]) < rho {
            continue;
        }
        for (&l, &w) in rule.points.iter().zip(&rule.weights) {
            let d = a.value_in_cell(t, &geo, l) - b.value_in_cell(t, &geo, l);
            let ga = a.gradient_in_cell(t, &geo, l).unwrap();
            let gb = b.gradient_in_cell(t, &geo, l).unwrap();
            s += 2.0 * geo.area * w * (d * d + (ga[0] - gb[0]).powi(2) + (ga[1] - gb[1]).powi(2));
        }
    }
    s.sqrt()
}

/// Least-squares slope of `log y` against `log x`.
pub fn slope(xy: &[(f64, f64)]) -> f64 {
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0.ln()).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let sxy: f64 = xy.iter().map(|p| (p.0.ln() - mx) * (p.1.ln() - my)).sum();
    let sxx: f64 = xy.iter().map(|p| (p.0.ln() - mx).powi(2)).sum();
    sxy / sxx
}

/// Full dense system: Dirichlet rows replaced by the identity (data taken at
/// the boundary nodes pushed onto the circle), interior rows carry
/// `a(., phi_i) + b(.) b_log(phi_i)`.
pub fn dense_augmented(s: &FunctionSpace, su: &CorrectionSetup, f: impl Fn([f64; 2]) -> f64, g: impl Fn([f64; 2]) -> f64) -> Vec<f64> {
    let n = s.num_dofs();
    let a = assemble_stiffness(s).to_dense();
    let blog = assemble_blog(s, &su.cutoff);
    let load = assemble_load(s, f);
    let d: Vec<f64> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            b_functional(s, su, &e).unwrap()
        })
        .collect();
    let mut m = DMatrix::zeros(n, n);
    let mut rhs = DVector::zeros(n);
    for i in 0..n {
        if s.is_boundary_dof(i) {
            m[(i, i)] = 1.0;
            let p = s.dof_coords()[i];
            let r = p[0].hypot(p[1]);
            rhs[i] = g([p[0] / r, p[1] / r]);
        } else {
            for j in 0..n {
                m[(i, j)] = a[i][j] + blog[i] * d[j];
            }
            rhs[i] = load[i];
        }
    }
    m.lu().solve(&rhs).unwrap().iter().copied().collect()
}
