/// Smoothness class of the radial cut-off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CutoffKind {
    /// `C^inf` transition built from `exp(-1/t)`.
    Exp,
    /// Degree-7 polynomial transition, `C^3` but not `C^4`.
    Pol,
}

impl CutoffKind {
    pub fn name(self) -> &'static str {
        match self {
            CutoffKind::Exp => "exp",
            CutoffKind::Pol => "pol",
        }
    }
}

impl std::str::FromStr for CutoffKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exp" => Ok(CutoffKind::Exp),
            "pol" => Ok(CutoffKind::Pol),
            _ => Err(format!("unknown cut-off `{s}`, expected exp or pol")),
        }
    }
}

impl std::fmt::Display for CutoffKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Radial cut-off `chi(r)`: 1 on `[0, inner]`, 0 on `[outer, inf)`, and
/// nonincreasing in between.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoff {
    pub kind: CutoffKind,
    pub inner: f64,
    pub outer: f64,
}

impl Cutoff {
    pub const INNER: f64 = 0.25;
    pub const OUTER: f64 = 0.5;

    pub fn new(kind: CutoffKind) -> Self {
        Cutoff { kind, inner: Self::INNER, outer: Self::OUTER }
    }

    fn width(&self) -> f64 {
        self.outer - self.inner
    }

    fn t(&self, r: f64) -> f64 {
        (r - self.inner) / self.width()
    }

    pub fn value(&self, r: f64) -> f64 {
        self.transition(self.t(r))[0]
    }

    /// `d chi / dr`.
    pub fn d1(&self, r: f64) -> f64 {
        self.transition(self.t(r))[1] / self.width()
    }

    /// `d^2 chi / dr^2`.
    pub fn d2(&self, r: f64) -> f64 {
        self.transition(self.t(r))[2] / self.width().powi(2)
    }

    /// Value and first two derivatives in `r`.
    pub fn eval(&self, r: f64) -> [f64; 3] {
        let [v, d1, d2] = self.transition(self.t(r));
        let w = self.width();
        [v, d1 / w, d2 / (w * w)]
    }

    /// `(chi, chi', chi'')` in the transition variable `t`.
    fn transition(&self, t: f64) -> [f64; 3] {
        if t <= 0.0 {
            return [1.0, 0.0, 0.0];
        }
        if t >= 1.0 {
            return [0.0, 0.0, 0.0];
        }
        match self.kind {
            CutoffKind::Pol => {
                // chi = 1 - (35 t^4 - 84 t^5 + 70 t^6 - 20 t^7)
                let p = t.powi(4) * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)));
                let s = t * (1.0 - t);
                let d1 = 140.0 * s.powi(3);
                let d2 = 420.0 * s * s * (1.0 - 2.0 * t);
                [1.0 - p, -d1, -d2]
            }
            CutoffKind::Exp => {
                // chi = e(1-t) / (e(t) + e(1-t)), e(t) = exp(-1/t), written as
                // the logistic function of q = 1/(1-t) - 1/t.
                let q = 1.0 / (1.0 - t) - 1.0 / t;
                let dq = 1.0 / (t * t) + 1.0 / ((1.0 - t) * (1.0 - t));
                let ddq = 2.0 / (1.0 - t).powi(3) - 2.0 / t.powi(3);
                let (chi, one_minus) = if q > 0.0 {
                    let e = (-q).exp();
                    (e / (1.0 + e), 1.0 / (1.0 + e))
                } else {
                    let e = q.exp();
                    (1.0 / (1.0 + e), e / (1.0 + e))
                };
                let s = chi * one_minus;
                let d1 = -s * dq;
                let d2 = -(d1 * (one_minus - chi) * dq + s * ddq);
                [chi, d1, d2]
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const KINDS: [CutoffKind; 2] = [CutoffKind::Exp, CutoffKind::Pol];

    #[test]
    fn plateaus() {
        for kind in KINDS {
            let c = Cutoff::new(kind);
            for r in [0.0, 0.1, 0.25] {
                assert_eq!(c.value(r), 1.0);
            }
            for r in [0.5, 0.7, 1.0] {
                assert_eq!(c.value(r), 0.0);
            }
        }
    }

    #[test]
    fn monotone_on_transition() {
        for kind in KINDS {
            let c = Cutoff::new(kind);
            let mut prev = 1.0;
            for k in 0..=1000 {
                let r = 0.25 + 0.25 * k as f64 / 1000.0;
                let v = c.value(r);
                assert!(v <= prev + 1e-15, "{kind:?} r={r}");
                assert!(c.d1(r) <= 0.0);
                prev = v;
            }
        }
    }

    #[test]
    fn exp_derivatives_vanish_near_ends() {
        let c = Cutoff::new(CutoffKind::Exp);
        for r in [0.25, 0.2505, 0.251, 0.499, 0.4995, 0.5] {
            assert!(c.d1(r).abs() <= 1e-8, "r={r}: {}", c.d1(r));
            assert!(c.d2(r).abs() <= 1e-8, "r={r}: {}", c.d2(r));
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-6;
        for kind in KINDS {
            let c = Cutoff::new(kind);
            for k in 1..50 {
                let r = 0.25 + 0.25 * k as f64 / 50.0;
                let fd1 = (c.value(r + h) - c.value(r - h)) / (2.0 * h);
                let fd2 = (c.d1(r + h) - c.d1(r - h)) / (2.0 * h);
                assert!((fd1 - c.d1(r)).abs() < 1e-6 * (1.0 + c.d1(r).abs()), "{kind:?} r={r}");
                assert!((fd2 - c.d2(r)).abs() < 1e-5 * (1.0 + c.d2(r).abs()), "{kind:?} r={r}");
            }
        }
    }

    /// Coefficients of `chi_pol` in `t`, lowest degree first.
    fn pol_coefficients() -> Vec<f64> {
        vec![1.0, 0.0, 0.0, 0.0, -35.0, 84.0, -70.0, 20.0]
    }

    fn poly_derivative_at(c: &[f64], order: usize, t: f64) -> f64 {
        let mut c = c.to_vec();
        for _ in 0..order {
            c = c.iter().enumerate().skip(1).map(|(k, a)| k as f64 * a).collect();
        }
        c.iter().rev().fold(0.0, |acc, a| acc * t + a)
    }

    #[test]
    fn pol_is_c3_not_c4() {
        let c = pol_coefficients();
        assert_eq!(poly_derivative_at(&c, 0, 0.0), 1.0);
        assert!(poly_derivative_at(&c, 0, 1.0).abs() < 1e-13);
        for order in 1..=3 {
            assert!(poly_derivative_at(&c, order, 0.0).abs() < 1e-12);
            assert!(poly_derivative_at(&c, order, 1.0).abs() < 1e-10, "order {order}");
        }
        // fourth derivative jumps against the constant plateaus
        assert!(poly_derivative_at(&c, 4, 0.0).abs() > 100.0);
        assert!(poly_derivative_at(&c, 4, 1.0).abs() > 100.0);
        // and the implementation agrees with the coefficients
        let cut = Cutoff::new(CutoffKind::Pol);
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            let r = 0.25 + 0.25 * t;
            assert!((cut.value(r) - poly_derivative_at(&c, 0, t)).abs() < 1e-14);
            assert!((cut.d1(r) - poly_derivative_at(&c, 1, t) * 4.0).abs() < 1e-11);
            assert!((cut.d2(r) - poly_derivative_at(&c, 2, t) * 16.0).abs() < 1e-9);
        }
    }
}
