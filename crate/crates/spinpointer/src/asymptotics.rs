//! Large-`N` lower bound on the average fidelity.
//!
//! Inserting `|r̂⟩⟨r̂|^⊗N` into the outcome density gives
//! `p(r) ≥ |E_r|²` with `E_r = ⟨r̂|^⊗N E(r)|↑⟩^⊗N`. Since `|r̂⟩^⊗N` is the top
//! eigenvector of `r̂·S`, `E_r = cos^N(θ/2) e_J(|r|)` where
//! `e_J(r) = (2π)^{−1/2} ∫ p² dp φ̃(p) ∫ dx e^{i r p x} (cos(p/2) − i x sin(p/2))^N`
//! is the eigenvalue of `E(r ẑ)` on `|↑⟩^⊗N`. The integrand is a scalar power,
//! so the bound is computable for hundreds of spins.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::estimation::{golden_section_max, optimal_fidelity};
use crate::pointer::{momentum_profile, MomentumQuadrature, OutcomeGrid, OutcomeSpec, PointerModel};
use crate::quadrature::{gauss_legendre, ConvergenceReport, Refine};

/// From this many spins on, the outcome grid covers only the polar cap where
/// `cos^{2N}(θ/2)` is not negligible.
pub const POLAR_CAP_MIN_SPINS: usize = 150;

/// Resolution of the lower-bound integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticQuadrature {
    pub momentum: MomentumQuadrature,
    pub outcome: OutcomeSpec,
    /// Outcome radii extend to `N/2 + radial_extent_spreads·Δ`.
    pub radial_extent_spreads: f64,
    /// Polar cap `θ <= polar_cap / √N` for large `N`.
    pub polar_cap: f64,
    pub tolerance: f64,
}

impl Default for AsymptoticQuadrature {
    fn default() -> Self {
        Self {
            momentum: MomentumQuadrature::default(),
            outcome: OutcomeSpec::default(),
            radial_extent_spreads: 10.0,
            polar_cap: 10.0,
            tolerance: 1e-5,
        }
    }
}

impl AsymptoticQuadrature {
    pub fn validate(&self) -> Result<()> {
        self.momentum.validate()?;
        self.outcome.validate()?;
        if !(self.radial_extent_spreads >= 4.0) || !(self.polar_cap > 0.0) || !(self.tolerance > 0.0) {
            return Err(domain("asymptotic quadrature: extent >= 4, cap > 0 and tolerance > 0 required"));
        }
        Ok(())
    }

    /// Grid used by [`fidelity_lower_bound`].
    pub fn grid(&self, n_spins: usize, model: &PointerModel) -> Result<OutcomeGrid> {
        let r_max = 0.5 * n_spins as f64 + self.radial_extent_spreads * model.spread();
        if n_spins >= POLAR_CAP_MIN_SPINS {
            let cap = self.polar_cap / (n_spins as f64).sqrt();
            OutcomeGrid::shell_cap(&self.outcome, 0.0, r_max, cap, model.spread())
        } else {
            OutcomeGrid::ball(&self.outcome, r_max, model.spread())
        }
    }
}

impl Refine for AsymptoticQuadrature {
    fn refined(&self) -> Self {
        Self {
            momentum: self.momentum.refined(),
            outcome: self.outcome.refined(),
            ..*self
        }
    }
}

/// `e_J(r)`, tabulated on a `(|p|, cosθ_p)` Gauss–Legendre grid.
#[derive(Debug, Clone)]
pub struct AlignedEigenvalue {
    p_nodes: Vec<f64>,
    x_nodes: Vec<f64>,
    /// `w_p w_x p² φ̃(p) (cos(p/2) − i x sin(p/2))^N (2π)^{−1/2}`, row-major in `p`.
    table: Vec<Complex64>,
}

impl AlignedEigenvalue {
    /// Prepares the table for outcome radii up to `r_max`. Both node counts are
    /// raised to sample the phase `(r_max + N/2)·p_max` 1.5 times per radian.
    pub fn new(n_spins: usize, model: &PointerModel, quad: &MomentumQuadrature, r_max: f64) -> Result<Self> {
        if n_spins == 0 {
            return Err(domain("need at least one spin"));
        }
        quad.validate()?;
        let exponent = u32::try_from(n_spins).map_err(|_| domain("spin count too large"))?;
        let n_p = quad.effective_radial_nodes(model, n_spins, r_max);
        let n_x = quad.effective_polar_nodes(n_spins).max(n_p);
        let radial = gauss_legendre(n_p, 0.0, quad.cutoff(model))?;
        let polar = gauss_legendre(n_x, -1.0, 1.0)?;
        let norm = TAU.sqrt().recip();
        let mut table = Vec::with_capacity(n_p * n_x);
        for (p, wp) in radial.iter() {
            let radial_weight = wp * p * p * momentum_profile(p, model) * norm;
            let (s, c) = (0.5 * p).sin_cos();
            for (x, wx) in polar.iter() {
                table.push(Complex64::new(c, -x * s).powu(exponent) * (radial_weight * wx));
            }
        }
        Ok(Self {
            p_nodes: radial.nodes().to_vec(),
            x_nodes: polar.nodes().to_vec(),
            table,
        })
    }

    pub fn node_counts(&self) -> (usize, usize) {
        (self.p_nodes.len(), self.x_nodes.len())
    }

    pub fn eval(&self, r: f64) -> Complex64 {
        let n_x = self.x_nodes.len();
        let mut total = Complex64::new(0.0, 0.0);
        for (i, &p) in self.p_nodes.iter().enumerate() {
            let row = &self.table[i * n_x..(i + 1) * n_x];
            let kr = r * p;
            total += row
                .iter()
                .zip(&self.x_nodes)
                .map(|(g, &x)| g * Complex64::cis(kr * x))
                .sum::<Complex64>();
        }
        total
    }
}

/// `E_r = ⟨r̂|^⊗N E(r)|↑⟩^⊗N` at outcome radius `r`, polar angle `θ`.
pub fn kraus_diagonal_element(
    r: f64,
    theta: f64,
    n_spins: usize,
    model: &PointerModel,
    quad: &MomentumQuadrature,
) -> Result<Complex64> {
    if !(r >= 0.0) || !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(domain(format!("outcome (r={r}, θ={theta}) outside r >= 0, θ ∈ [0, π]")));
    }
    let e = AlignedEigenvalue::new(n_spins, model, quad, r)?.eval(r);
    Ok(e * (0.5 * theta).cos().powi(n_spins as i32))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBoundPoint {
    pub n_spins: usize,
    pub spread: f64,
    pub f_lower: f64,
    /// `N(1 − f_lower)`.
    pub epsilon_n: f64,
    /// `N(1 − F_opt) = (1 + 2/N)^{−1}`.
    pub optimal_scaling: f64,
    /// `∫ |E_r|² d³r`, the probability mass kept by the bound.
    pub bound_mass: f64,
    pub error_estimate: f64,
}

/// `(F_lower, ∫|E_r|²)` on a given grid, without refinement.
pub fn fidelity_lower_bound_on(
    n_spins: usize,
    model: &PointerModel,
    quad: &MomentumQuadrature,
    grid: &OutcomeGrid,
) -> Result<(f64, f64)> {
    let element = AlignedEigenvalue::new(n_spins, model, quad, grid.r_max())?;
    let radial: Vec<f64> = grid
        .radial()
        .nodes()
        .par_iter()
        .map(|&r| element.eval(r).norm_sqr())
        .collect();
    let angular: Vec<f64> = grid
        .polar()
        .nodes()
        .iter()
        .map(|&t| (0.5 * t).cos().powi(2 * n_spins as i32))
        .collect();
    let polar = grid.polar().nodes();
    let score = grid.integrate(|i, j| radial[i] * angular[j] * (0.5 * polar[j]).cos().powi(2));
    let mass = grid.integrate(|i, j| radial[i] * angular[j]);
    if !score.is_finite() || !mass.is_finite() {
        return Err(Error::Numeric {
            location: format!("lower-bound integrand, N={n_spins}, Δ={}", model.spread()),
        });
    }
    Ok((score, mass))
}

/// `F_lower = 2π ∫ r² sinθ |E_r|² cos²(θ/2) dr dθ` with a refinement error estimate.
pub fn fidelity_lower_bound(n_spins: usize, model: &PointerModel, quad: &AsymptoticQuadrature) -> Result<LowerBoundPoint> {
    if n_spins == 0 {
        return Err(domain("need at least one spin"));
    }
    quad.validate()?;
    let (f_lower, bound_mass) = fidelity_lower_bound_on(n_spins, model, &quad.momentum, &quad.grid(n_spins, model)?)?;
    let refined = quad.refined();
    let (f_refined, _) = fidelity_lower_bound_on(n_spins, model, &refined.momentum, &refined.grid(n_spins, model)?)?;
    let report = ConvergenceReport::new(f_lower, f_refined, quad.tolerance);
    if report.abs_diff > 10.0 * quad.tolerance {
        return Err(Error::Convergence {
            context: format!("fidelity lower bound for N={n_spins}, Δ={}", model.spread()),
            abs_diff: report.abs_diff,
            limit: 10.0 * quad.tolerance,
        });
    }
    let n = n_spins as f64;
    Ok(LowerBoundPoint {
        n_spins,
        spread: model.spread(),
        f_lower,
        epsilon_n: n * (1.0 - f_lower),
        optimal_scaling: n * (1.0 - optimal_fidelity(n_spins)),
        bound_mass,
        error_estimate: report.abs_diff,
    })
}

/// `√(N/8)`.
pub fn delta_opt_formula(n_spins: usize) -> f64 {
    (n_spins as f64 / 8.0).sqrt()
}

/// How [`epsilon_curve`] picks the spread for each `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpreadRule {
    /// `Δ = √(N/8)`.
    Formula,
    /// Maximize the lower bound over `Δ ∈ [½, 2]·√(N/8)`.
    Optimize,
}

/// Spread maximizing the lower bound, searched over `[½, 2]·√(N/8)` to a
/// relative precision of `10⁻³`.
pub fn optimize_lower_bound_spread(n_spins: usize, quad: &AsymptoticQuadrature) -> Result<f64> {
    let center = delta_opt_formula(n_spins);
    let (delta, _) = golden_section_max(0.5 * center, 2.0 * center, 1e-3 * center, |d| {
        let model = PointerModel::new(d)?;
        Ok(fidelity_lower_bound_on(n_spins, &model, &quad.momentum, &quad.grid(n_spins, &model)?)?.0)
    })?;
    Ok(delta)
}

/// One lower-bound point per `N`; failures are returned in place.
pub fn epsilon_curve(n_values: &[usize], rule: SpreadRule, quad: &AsymptoticQuadrature) -> Vec<(usize, Result<LowerBoundPoint>)> {
    n_values
        .iter()
        .map(|&n| {
            let point = (|| {
                if n == 0 {
                    return Err(domain("need at least one spin"));
                }
                let delta = match rule {
                    SpreadRule::Formula => delta_opt_formula(n),
                    SpreadRule::Optimize => optimize_lower_bound_spread(n, quad)?,
                };
                fidelity_lower_bound(n, &PointerModel::new(delta)?, quad)
            })();
            (n, point)
        })
        .collect()
}
