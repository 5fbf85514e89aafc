//! Quadrature on the reference triangle `{(s, t) : s, t >= 0, s + t <= 1}`.
//!
//! Rules are collapsed (Duffy) tensor products of Gauss–Legendre rules, so
//! any exactness degree is available.

/// Points in barycentric coordinates `(l0, l1, l2)` and weights summing to
/// the reference area 1/2.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

impl QuadratureRule {
    /// Rule exact for all polynomials of total degree `<= degree`.
    pub fn triangle(degree: usize) -> Self {
        // s = u, t = (1 - u) v, Jacobian (1 - u): degree + 1 in u, degree in v.
        let n = (degree + 2).div_ceil(2);
        let (nodes, gw) = gauss_legendre_unit(n);
        let mut points = Vec::with_capacity(n * n);
        let mut weights = Vec::with_capacity(n * n);
        for (&u, &wu) in nodes.iter().zip(&gw) {
            for (&v, &wv) in nodes.iter().zip(&gw) {
                let s = u;
                let t = (1.0 - u) * v;
                points.push([1.0 - s - t, s, t]);
                weights.push(wu * wv * (1.0 - u));
            }
        }
        QuadratureRule { points, weights, degree }
    }

    /// The rule of [`QuadratureRule::triangle`] applied on each of the `4^depth`
    /// triangles of the uniformly refined reference triangle.
    pub fn composite(degree: usize, depth: u32) -> Self {
        let base = Self::triangle(degree);
        let mut cells = vec![[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]];
        for _ in 0..depth {
            cells = cells
                .iter()
                .flat_map(|&[a, b, c]| {
                    let mid = |p: [f64; 3], q: [f64; 3]| [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1]), 0.5 * (p[2] + q[2])];
                    let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
                    [[a, ab, ca], [ab, b, bc], [ca, bc, c], [bc, ca, ab]]
                })
                .collect();
        }
        let scale = 0.25f64.powi(depth as i32);
        let mut points = Vec::with_capacity(cells.len() * base.len());
        let mut weights = Vec::with_capacity(cells.len() * base.len());
        for [a, b, c] in &cells {
            for (l, &w) in base.points.iter().zip(&base.weights) {
                points.push(std::array::from_fn(|m| l[0] * a[m] + l[1] * b[m] + l[2] * c[m]));
                weights.push(w * scale);
            }
        }
        QuadratureRule { points, weights, degree }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    (x.iter().map(|x| 0.5 * (x + 1.0)).collect(), w.iter().map(|w| 0.5 * w).collect())
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                let (_, d) = legendre(n, z);
                dp = d;
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// `(P_n(z), P_n'(z))` by the three-term recurrence.
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}
