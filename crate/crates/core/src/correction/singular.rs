use std::f64::consts::PI;

use super::{CorrectionError, Cutoff};
use crate::fem::{assembly, BasisTable, FunctionSpace, QuadratureRule};
use crate::Point;

/// `s_log(x) = chi(|x|) ln(1/|x|) / (2 pi)`; zero outside the cut-off support.
pub fn s_log(cutoff: &Cutoff, x: Point) -> f64 {
    let r = crate::norm(x);
    if r >= cutoff.outer {
        return 0.0;
    }
    -cutoff.value(r) * r.ln() / (2.0 * PI)
}

pub fn s_log_gradient(cutoff: &Cutoff, x: Point) -> Result<[f64; 2], CorrectionError> {
    let r = crate::norm(x);
    if r == 0.0 {
        return Err(CorrectionError::GradientAtOrigin);
    }
    if r >= cutoff.outer {
        return Ok([0.0, 0.0]);
    }
    let [chi, dchi, _] = cutoff.eval(r);
    let ds_dr = -(dchi * r.ln() + chi / r) / (2.0 * PI);
    Ok([ds_dr * x[0] / r, ds_dr * x[1] / r])
}

/// Laplacian of the regular part `G - s_log` of the disk Green function:
/// `((Delta chi) ln|x| + 2 grad chi . grad ln|x|) / (2 pi)`. Smooth and
/// supported in the transition annulus of the cut-off.
pub fn regular_part_laplacian(cutoff: &Cutoff, x: Point) -> f64 {
    let r = crate::norm(x);
    if r <= cutoff.inner || r >= cutoff.outer {
        return 0.0;
    }
    let [_, d1, d2] = cutoff.eval(r);
    ((d2 + d1 / r) * r.ln() + 2.0 * d1 / r) / (2.0 * PI)
}

/// Quadrature degree used for `b_log` with P_k elements.
pub(crate) fn blog_quadrature_degree(order: usize) -> usize {
    2 * order + 4
}

/// Sub-triangle size, relative to the annulus width, below which the
/// element rule is applied without further splitting.
const BLOG_CELL_FRACTION: f64 = 1.0 / 64.0;

/// `L_i = int (Delta G~) phi_i`, integrated only over triangles that meet the
/// cut-off transition annulus.
///
/// The integrand is far from polynomial on coarse triangles (and only `C^1`
/// across the annulus edges for the polynomial cut-off), so each triangle is
/// split uniformly until the pieces are small against the annulus width.
pub fn assemble_blog(space: &FunctionSpace, cutoff: &Cutoff) -> Vec<f64> {
    let mesh = space.mesh();
    let cells: Vec<usize> = (0..mesh.num_triangles())
        .filter(|&t| meets_annulus(mesh.triangle_points(t), cutoff.inner, cutoff.outer))
        .collect();
    let h_max = cells.iter().map(|&t| diameter(mesh.triangle_points(t))).fold(0.0, f64::max);
    let target = BLOG_CELL_FRACTION * (cutoff.outer - cutoff.inner);
    let depth = if h_max > target { (h_max / target).log2().ceil() as u32 } else { 0 };
    let rule = QuadratureRule::composite(blog_quadrature_degree(space.degree().order()), depth);
    let table = BasisTable::from_rule(space.degree(), rule);
    let cells = cells.into_iter();
    assembly::assemble_load_with(space, &table, cells, |x| regular_part_laplacian(cutoff, x))
}

/// Whether a triangle intersects `{inner <= |x| <= outer}`.
fn meets_annulus(p: [Point; 3], inner: f64, outer: f64) -> bool {
    let max_r = p.iter().map(|&q| crate::norm(q)).fold(0.0, f64::max);
    max_r >= inner && distance_to_origin(p) <= outer
}

fn diameter(p: [Point; 3]) -> f64 {
    let d = |a: Point, b: Point| (a[0] - b[0]).hypot(a[1] - b[1]);
    d(p[0], p[1]).max(d(p[1], p[2])).max(d(p[2], p[0]))
}

fn distance_to_origin(p: [Point; 3]) -> f64 {
    let geo = crate::fem::ElementGeometry::new(p);
    if geo.barycentric([0.0, 0.0]).iter().all(|&l| l >= 0.0) {
        return 0.0;
    }
    (0..3)
        .map(|k| {
            let (a, b) = (p[k], p[(k + 1) % 3]);
            let d = [b[0] - a[0], b[1] - a[1]];
            let s = (-(a[0] * d[0] + a[1] * d[1]) / (d[0] * d[0] + d[1] * d[1])).clamp(0.0, 1.0);
            (a[0] + s * d[0]).hypot(a[1] + s * d[1])
        })
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correction::CutoffKind;

    #[test]
    fn s_log_values() {
        let c = Cutoff::new(CutoffKind::Exp);
        assert_eq!(s_log(&c, [0.6, 0.0]), 0.0);
        assert_eq!(s_log(&c, [0.0, 1.0]), 0.0);
        let v = s_log(&c, [0.0, 0.1]);
        assert!((v - 10f64.ln() / (2.0 * PI)).abs() < 1e-15);
        assert!((v - 0.366468).abs() < 1e-6);
    }

    #[test]
    fn s_log_gradient_at_origin_fails() {
        let c = Cutoff::new(CutoffKind::Pol);
        assert_eq!(s_log_gradient(&c, [0.0, 0.0]), Err(CorrectionError::GradientAtOrigin));
    }

    #[test]
    fn s_log_gradient_matches_finite_differences() {
        let h = 1e-6;
        for kind in [CutoffKind::Exp, CutoffKind::Pol] {
            let c = Cutoff::new(kind);
            for &x in &[[0.1, 0.05], [0.2, -0.2], [-0.3, 0.1], [0.05, 0.4], [0.6, 0.1]] {
                let g = s_log_gradient(&c, x).unwrap();
                let fx = (s_log(&c, [x[0] + h, x[1]]) - s_log(&c, [x[0] - h, x[1]])) / (2.0 * h);
                let fy = (s_log(&c, [x[0], x[1] + h]) - s_log(&c, [x[0], x[1] - h])) / (2.0 * h);
                assert!((g[0] - fx).abs() < 1e-7 && (g[1] - fy).abs() < 1e-7, "{kind:?} {x:?}");
            }
        }
    }

    #[test]
    fn laplacian_is_minus_laplacian_of_s_log_on_annulus() {
        // on the annulus, Delta(G - s_log) = -Delta s_log since G is harmonic there
        let h = 1e-4;
        for kind in [CutoffKind::Exp, CutoffKind::Pol] {
            let c = Cutoff::new(kind);
            for &x in &[[0.3, 0.0], [0.0, 0.35], [0.28, 0.2], [-0.3, -0.25]] {
                let s = |p: Point| s_log(&c, p);
                let lap = (s([x[0] + h, x[1]]) + s([x[0] - h, x[1]]) + s([x[0], x[1] + h]) + s([x[0], x[1] - h])
                    - 4.0 * s(x))
                    / (h * h);
                let v = regular_part_laplacian(&c, x);
                assert!((v + lap).abs() < 1e-5 * (1.0 + v.abs()), "{kind:?} {x:?}: {v} vs {}", -lap);
            }
        }
    }

    #[test]
    fn annulus_test() {
        let tri = [[0.1, 0.0], [0.2, 0.0], [0.1, 0.1]];
        assert!(!meets_annulus(tri, 0.25, 0.5));
        let tri = [[-0.1, -0.1], [0.3, -0.1], [0.0, 0.3]];
        assert!(meets_annulus(tri, 0.25, 0.5));
        let tri = [[0.6, 0.0], [0.7, 0.0], [0.6, 0.1]];
        assert!(!meets_annulus(tri, 0.25, 0.5));
        assert_eq!(distance_to_origin([[-1.0, -1.0], [1.0, -1.0], [0.0, 1.0]]), 0.0);
        assert!((distance_to_origin([[1.0, -1.0], [1.0, 1.0], [2.0, 0.0]]) - 1.0).abs() < 1e-15);
    }
}
