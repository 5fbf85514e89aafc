use std::collections::BTreeMap;

use super::{assemble_blog, s_log, s_log_gradient, CorrectionError, CorrectionSetup, CouplingMode};
use crate::fem::{apply_dirichlet, assemble_stiffness, solver::dot, ElementGeometry, FunctionSpace, SpdSolver};
use crate::Point;

const SINGULAR_TOL: f64 = 1e-10;

/// The reconstructed far field `x -> w(x) + c s_log(x)`.
#[derive(Debug, Clone)]
pub struct FarFieldSolution<'a> {
    pub space: &'a FunctionSpace,
    /// Finite element coefficients of the regular part.
    pub w: Vec<f64>,
    /// Coefficient of `s_log`; zero in mode `none`.
    pub c: f64,
    pub setup: CorrectionSetup,
}

impl FarFieldSolution<'_> {
    /// Value at the image of barycentric point `l` in triangle `t`.
    pub fn value_in_cell(&self, t: usize, geo: &ElementGeometry, l: [f64; 3]) -> f64 {
        let mut v = self.space.eval_in_cell(&self.w, t, l);
        if self.c != 0.0 {
            v += self.c * s_log(&self.setup.cutoff, geo.map(l));
        }
        v
    }

    pub fn gradient_in_cell(&self, t: usize, geo: &ElementGeometry, l: [f64; 3]) -> Result<[f64; 2], CorrectionError> {
        let mut g = self.space.eval_gradient_in_cell(&self.w, t, geo, l);
        if self.c != 0.0 {
            let s = s_log_gradient(&self.setup.cutoff, geo.map(l))?;
            g[0] += self.c * s[0];
            g[1] += self.c * s[1];
        }
        Ok(g)
    }
}

pub fn reconstruct(sol: &FarFieldSolution<'_>, x: Point) -> Result<f64, CorrectionError> {
    let (t, l) = sol.space.locate(x)?;
    Ok(sol.value_in_cell(t, &sol.space.geometry(t), l))
}

pub fn reconstruct_gradient(sol: &FarFieldSolution<'_>, x: Point) -> Result<[f64; 2], CorrectionError> {
    let (t, l) = sol.space.locate(x)?;
    sol.gradient_in_cell(t, &sol.space.geometry(t), l)
}

/// The coupling functional as sparse weights over full dof indices, prefactor
/// `2 pi / (ln delta + 2 pi P0)` included.
pub fn functional_weights(space: &FunctionSpace, setup: &CorrectionSetup) -> Result<Vec<(usize, f64)>, CorrectionError> {
    let k = setup.prefactor();
    match setup.mode {
        CouplingMode::None => Err(CorrectionError::NoFunctional),
        CouplingMode::Point => Ok(vec![(space.origin_dof(), k)]),
        CouplingMode::Average => {
            let n = setup.n_circle;
            let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
            let mut phi = [0.0; crate::fem::basis::MAX_LOCAL];
            for j in 0..n {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
                let x = [setup.delta * theta.cos(), setup.delta * theta.sin()];
                let (t, l) = space.locate(x)?;
                crate::fem::basis::values(space.degree(), l, &mut phi);
                for (&i, &p) in space.cell_dofs(t).iter().zip(&phi) {
                    *acc.entry(i).or_insert(0.0) += k * p / n as f64;
                }
            }
            Ok(acc.into_iter().collect())
        }
    }
}

/// `b_delta(w)` (point mode) or its circle-mean variant (average mode).
pub fn b_functional(space: &FunctionSpace, setup: &CorrectionSetup, coeffs: &[f64]) -> Result<f64, CorrectionError> {
    if coeffs.len() != space.num_dofs() {
        return Err(crate::fem::FemError::DimensionMismatch { expected: space.num_dofs(), found: coeffs.len() }.into());
    }
    Ok(functional_weights(space, setup)?.iter().map(|&(i, w)| w * coeffs[i]).sum())
}

/// Solves `a(w, v) + b(w) b_log(v) = (f, v)` for all interior test functions
/// `v`, with `w = g` on the boundary.
///
/// The rank-one term is handled by Sherman–Morrison on the Dirichlet-reduced
/// system: with `A y = F` and `A z = L`,
/// `w = y - z (d.y) / (1 + d.z)`.
pub fn solve_corrected<'a>(
    space: &'a FunctionSpace,
    setup: &CorrectionSetup,
    load: &[f64],
    g: impl Fn(Point) -> f64,
) -> Result<FarFieldSolution<'a>, CorrectionError> {
    setup.validate()?;
    if load.len() != space.num_dofs() {
        return Err(crate::fem::FemError::DimensionMismatch { expected: space.num_dofs(), found: load.len() }.into());
    }
    let h_min = space.mesh().h_min();
    if setup.mode != CouplingMode::None && setup.delta >= 0.5 * h_min {
        log::warn!("delta = {:e} is not small against the mesh (h_min = {h_min:.3e})", setup.delta);
    }

    let stiffness = assemble_stiffness(space);
    let mut system = apply_dirichlet(&stiffness, load, space, g);
    let solver = SpdSolver::new(&system.matrix);

    if setup.mode == CouplingMode::None {
        let y = solver.solve(&system.rhs)?;
        return Ok(FarFieldSolution { space, w: system.expand(&y), c: 0.0, setup: *setup });
    }

    let blog = system.restrict(&assemble_blog(space, &setup.cutoff));
    let weights = functional_weights(space, setup)?;
    let mut d = vec![0.0; system.interior.len()];
    let mut d_lift = 0.0;
    for &(i, w) in &weights {
        match system.reduced_index[i] {
            Some(k) => d[k] += w,
            None => d_lift += w * system.lifting[i],
        }
    }
    // b(w) = d.w_I + d_lift, so the lifting part moves to the right-hand side
    for (r, l) in system.rhs.iter_mut().zip(&blog) {
        *r -= d_lift * l;
    }

    let y = solver.solve(&system.rhs)?;
    let z = solver.solve(&blog)?;
    let denominator = 1.0 + dot(&d, &z);
    if denominator.abs() <= SINGULAR_TOL {
        return Err(CorrectionError::NearSingular { denominator });
    }
    let factor = dot(&d, &y) / denominator;
    let w_interior: Vec<f64> = y.iter().zip(&z).map(|(y, z)| y - factor * z).collect();
    let w = system.expand(&w_interior);
    let c = weights.iter().map(|&(i, wt)| wt * w[i]).sum();
    Ok(FarFieldSolution { space, w, c, setup: *setup })
}
