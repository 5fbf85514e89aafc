//! Closed-form fields for the disk with a concentric circular hole, and
//! error norms away from the hole.
//!
//! With `f = 0`, `u = g` on the unit circle and `u = 0` on the circle of
//! radius `delta`:
//!
//! - `g = 1`: `u = 1 - ln r / ln delta`,
//! - `g = sin(n theta)`: `u = r^n (1 - (delta / r)^(2n)) / (1 - delta^(2n)) sin(n theta)`.

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::correction::{lambda_delta, CorrectionError, FarFieldSolution};
use crate::fem::BasisTable;
use crate::Point;

/// One harmonic of the boundary data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryMode {
    One,
    Sin(u32),
}

/// Dirichlet data on the unit circle: a sum of `1` and `sin(n theta)` terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoundaryData {
    terms: Vec<BoundaryMode>,
}

impl BoundaryData {
    pub fn one() -> Self {
        BoundaryData { terms: vec![BoundaryMode::One] }
    }

    pub fn sin(n: u32) -> Self {
        assert!(n > 0, "sin mode must be positive");
        BoundaryData { terms: vec![BoundaryMode::Sin(n)] }
    }

    pub fn sum(terms: Vec<BoundaryMode>) -> Self {
        assert!(!terms.is_empty());
        BoundaryData { terms }
    }

    pub fn terms(&self) -> &[BoundaryMode] {
        &self.terms
    }

    /// `g(x / |x|)`.
    pub fn value(&self, x: Point) -> f64 {
        let theta = x[1].atan2(x[0]);
        self.terms
            .iter()
            .map(|t| match *t {
                BoundaryMode::One => 1.0,
                BoundaryMode::Sin(n) => (n as f64 * theta).sin(),
            })
            .sum()
    }

    fn constant_part(&self) -> f64 {
        self.terms.iter().filter(|t| **t == BoundaryMode::One).count() as f64
    }
}

impl FromStr for BoundaryData {
    type Err = String;

    /// `one`, `sin:N`, or `+`-separated sums such as `one+sin:1`.
    fn from_str(s: &str) -> Result<Self, String> {
        let terms = s
            .split('+')
            .map(|t| match t.trim() {
                "one" => Ok(BoundaryMode::One),
                other => other
                    .strip_prefix("sin:")
                    .and_then(|n| n.parse::<u32>().ok())
                    .filter(|&n| n > 0)
                    .map(BoundaryMode::Sin)
                    .ok_or_else(|| format!("invalid boundary term `{other}`, expected one or sin:N")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BoundaryData { terms })
    }
}

impl std::fmt::Display for BoundaryData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| match t {
                BoundaryMode::One => "one".to_string(),
                BoundaryMode::Sin(n) => format!("sin:{n}"),
            })
            .collect();
        f.write_str(&parts.join("+"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum FieldKind {
    /// Exact solution with the hole of radius `delta`.
    Annulus { delta: f64 },
    /// Harmonic extension of `g` to the full disk.
    Limit,
    /// `u0 + u0(0) lambda(delta) G` with the disk Green function.
    FirstOrder { lambda: f64 },
}

/// A closed-form harmonic field, evaluable for `delta < |x| <= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactField {
    g: BoundaryData,
    kind: FieldKind,
}

pub fn exact_annulus(g: &BoundaryData, delta: f64) -> ExactField {
    assert!(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    ExactField { g: g.clone(), kind: FieldKind::Annulus { delta } }
}

pub fn exact_limit(g: &BoundaryData) -> ExactField {
    ExactField { g: g.clone(), kind: FieldKind::Limit }
}

pub fn first_order_far_field_disk(g: &BoundaryData, delta: f64) -> ExactField {
    assert!(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    let lambda = lambda_delta(delta, 0.0, 0.0).expect("ln delta < 0 for delta in (0, 1)");
    ExactField { g: g.clone(), kind: FieldKind::FirstOrder { lambda } }
}

impl ExactField {
    pub fn value(&self, x: Point) -> f64 {
        self.g.terms.iter().map(|&t| self.term(t, x).0).sum()
    }

    pub fn gradient(&self, x: Point) -> [f64; 2] {
        self.g.terms.iter().fold([0.0, 0.0], |acc, &t| {
            let g = self.term(t, x).1;
            [acc[0] + g[0], acc[1] + g[1]]
        })
    }

    fn term(&self, mode: BoundaryMode, x: Point) -> (f64, [f64; 2]) {
        let r2 = x[0] * x[0] + x[1] * x[1];
        match (mode, self.kind) {
            (BoundaryMode::One, FieldKind::Limit) => (1.0, [0.0, 0.0]),
            (BoundaryMode::One, FieldKind::Annulus { delta }) => {
                let ld = delta.ln();
                (1.0 - 0.5 * r2.ln() / ld, [-x[0] / (r2 * ld), -x[1] / (r2 * ld)])
            }
            (BoundaryMode::One, FieldKind::FirstOrder { lambda }) => {
                // 1 + lambda ln(1/r) / (2 pi)
                let k = lambda / (2.0 * PI);
                (1.0 - 0.5 * k * r2.ln(), [-k * x[0] / r2, -k * x[1] / r2])
            }
            (BoundaryMode::Sin(n), FieldKind::Limit | FieldKind::FirstOrder { .. }) => {
                // Im z^n; gradient (Im f', Re f') with f' = n z^(n-1)
                let z = Complex64::new(x[0], x[1]);
                let f = z.powu(n);
                let df = (n as f64) * z.powu(n - 1);
                (f.im, [df.im, df.re])
            }
            (BoundaryMode::Sin(n), FieldKind::Annulus { delta }) => {
                let nf = n as f64;
                let r = r2.sqrt();
                let theta = x[1].atan2(x[0]);
                let q = delta.powi(2 * n as i32);
                let scale = 1.0 / (1.0 - q);
                let rn = r.powi(n as i32);
                let radial = (rn - q / rn) * scale;
                let d_radial = nf * (rn + q / rn) / r * scale;
                let (s, c) = (nf * theta).sin_cos();
                let (er, et) = ([x[0] / r, x[1] / r], [-x[1] / r, x[0] / r]);
                let gr = d_radial * s;
                let gt = radial * nf * c / r;
                (radial * s, [gr * er[0] + gt * et[0], gr * er[1] + gt * et[1]])
            }
        }
    }

    /// `u0(0)` of the underlying limit field.
    pub fn limit_value_at_origin(&self) -> f64 {
        self.g.constant_part()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NormError {
    #[error("no triangle lies outside the disk of radius {rho}")]
    NoElements { rho: f64 },
    #[error("invalid excluded radius {0}")]
    InvalidRadius(f64),
    #[error(transparent)]
    Correction(#[from] CorrectionError),
}

/// `(||u_h - u||_{L2}, ||u_h - u||_{H1})` over the triangles whose centroid
/// satisfies `|x| >= rho`, with a rule of degree `2k + 2`.
pub fn error_norms(sol: &FarFieldSolution<'_>, exact: &ExactField, rho: f64) -> Result<(f64, f64), NormError> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(NormError::InvalidRadius(rho));
    }
    let space = sol.space;
    let mesh = space.mesh();
    let table = BasisTable::new(space.degree(), 2 * space.degree().order() + 2);
    let (mut l2, mut semi) = (0.0, 0.0);
    let mut any = false;
    for t in 0..mesh.num_triangles() {
        let p = mesh.triangle_points(t);
        let centroid = [(p[0][0] + p[1][0] + p[2][0]) / 3.0, (p[0][1] + p[1][1] + p[2][1]) / 3.0];
        if crate::norm(centroid) < rho {
            continue;
        }
        any = true;
        let geo = space.geometry(t);
        for (&l, &w) in table.rule.points.iter().zip(&table.rule.weights) {
            let x = geo.map(l);
            let jw = w * 2.0 * geo.area;
            let e = sol.value_in_cell(t, &geo, l) - exact.value(x);
            let gh = sol.gradient_in_cell(t, &geo, l)?;
            let ge = exact.gradient(x);
            l2 += jw * e * e;
            semi += jw * ((gh[0] - ge[0]).powi(2) + (gh[1] - ge[1]).powi(2));
        }
    }
    if !any {
        return Err(NormError::NoElements { rho });
    }
    Ok((l2.sqrt(), (l2 + semi).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polar(r: f64, theta: f64) -> Point {
        [r * theta.cos(), r * theta.sin()]
    }

    #[test]
    fn annulus_one_values() {
        let u = exact_annulus(&BoundaryData::one(), 0.1);
        assert!((u.value(polar(0.5, 0.3)) - 0.69897).abs() < 1e-5);
        assert!(u.value(polar(0.1, 1.0)).abs() < 1e-15);
        assert!((u.value(polar(1.0, 2.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn annulus_sin_values() {
        let u = exact_annulus(&BoundaryData::sin(1), 0.1);
        let v = u.value(polar(0.5, PI / 2.0));
        assert!((v - 4.8 / 9.9).abs() < 1e-14 && (v - 0.48485).abs() < 1e-5);
        for n in [1, 2, 5] {
            let u = exact_annulus(&BoundaryData::sin(n), 0.1);
            for k in 0..8 {
                let th = 0.7 * k as f64;
                assert!(u.value(polar(0.1, th)).abs() < 1e-14);
                assert!((u.value(polar(1.0, th)) - (n as f64 * th).sin()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn annulus_sin_is_stable_for_tiny_delta_and_high_mode() {
        let u = exact_annulus(&BoundaryData::sin(40), 1e-10);
        let v = u.value(polar(0.9, 0.1));
        assert!(v.is_finite());
        assert!((v - 0.9f64.powi(40) * (4.0f64).sin()).abs() < 1e-14);
    }

    #[test]
    fn limit_values() {
        assert_eq!(exact_limit(&BoundaryData::one()).value([0.3, 0.2]), 1.0);
        assert!((exact_limit(&BoundaryData::sin(1)).value(polar(0.5, PI / 2.0)) - 0.5).abs() < 1e-15);
        assert!((exact_limit(&BoundaryData::sin(2)).value(polar(0.3, PI / 4.0)) - 0.09).abs() < 1e-15);
    }

    #[test]
    fn first_order_matches_annulus_for_constant_data() {
        let g = BoundaryData::one();
        let v = first_order_far_field_disk(&g, 0.1);
        let u = exact_annulus(&g, 0.1);
        for &x in &[[0.3, 0.1], [0.9, 0.0], [-0.2, 0.5]] {
            assert!((v.value(x) - u.value(x)).abs() < 1e-14);
            let (gv, gu) = (v.gradient(x), u.gradient(x));
            assert!((gv[0] - gu[0]).abs() < 1e-13 && (gv[1] - gu[1]).abs() < 1e-13);
        }
        assert!((v.value([0.0, 1.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn first_order_is_limit_for_sin() {
        let g = BoundaryData::sin(3);
        let v = first_order_far_field_disk(&g, 0.01);
        let u0 = exact_limit(&g);
        assert_eq!(v.value([0.3, 0.4]), u0.value([0.3, 0.4]));
    }

    #[test]
    fn superposition() {
        let g: BoundaryData = "one+sin:1".parse().unwrap();
        let u = exact_annulus(&g, 0.01);
        let a = exact_annulus(&BoundaryData::one(), 0.01);
        let b = exact_annulus(&BoundaryData::sin(1), 0.01);
        let x = [0.3, -0.4];
        assert!((u.value(x) - a.value(x) - b.value(x)).abs() < 1e-15);
        assert_eq!(g.to_string(), "one+sin:1");
        assert!("sin:0".parse::<BoundaryData>().is_err());
        assert!("cos:1".parse::<BoundaryData>().is_err());
    }

    #[test]
    fn gradients_match_finite_differences() {
        let h = 1e-6;
        let g: BoundaryData = "one+sin:1+sin:3".parse().unwrap();
        for field in [exact_annulus(&g, 0.05), exact_limit(&g), first_order_far_field_disk(&g, 0.05)] {
            for &x in &[[0.3, 0.1], [-0.5, 0.6], [0.1, -0.9], [0.07, 0.02]] {
                let gr = field.gradient(x);
                let fx = (field.value([x[0] + h, x[1]]) - field.value([x[0] - h, x[1]])) / (2.0 * h);
                let fy = (field.value([x[0], x[1] + h]) - field.value([x[0], x[1] - h])) / (2.0 * h);
                let scale = 1.0 + gr[0].abs() + gr[1].abs();
                assert!((gr[0] - fx).abs() < 1e-8 * scale && (gr[1] - fy).abs() < 1e-8 * scale, "{x:?}");
            }
        }
    }
}
