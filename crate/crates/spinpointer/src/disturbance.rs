//! Disturbance and post-measurement Bloch vector.
//!
//! The evolution is diagonal in pointer momentum, so tracing out the pointer
//! leaves `ρ_post = ∫ d³p |φ̃(p)|² R(p)|↑⟩⟨↑|R(p)†` with `R(p) = e^{−i p·S}`.
//! Each `R(p)|↑⟩^⊗N` is a product of rotated single spins, which gives
//! `⟨↑|ρ_post|↑⟩ = ∫ d³p |φ̃|² (1 − sin²(p/2) sin²θ_p)^N` where `θ_p` is the
//! polar angle of `p`.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::pointer::{momentum_profile, PointerModel};
use crate::quadrature::{gauss_legendre, periodic_trapezoid, refine_count, ConvergenceReport, Refine};
use crate::spin::{collective_operators, dicke_expand, full_tensor_rotation_oracle, rotated_up_amplitudes};

/// Largest spin count accepted by [`disturbance_oracle_full`].
pub const MAX_ORACLE_SPINS: usize = 3;

/// Momentum-space product rule for the disturbance and Bloch integrals.
///
/// Counts are lower bounds. Both integrands are trigonometric polynomials of
/// degree `N` in `|p|` and polynomials of degree `2N` in `cosθ_p`, so the
/// radial count is raised to cover `N·p_max` and the polar count to `N + 1`,
/// where Gauss–Legendre becomes exact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DisturbanceQuadrature {
    pub radial_nodes: usize,
    pub polar_nodes: usize,
    pub azimuthal_nodes: usize,
    pub radial_cutoff_sigmas: f64,
    pub tolerance: f64,
}

impl Default for DisturbanceQuadrature {
    fn default() -> Self {
        Self {
            radial_nodes: 64,
            polar_nodes: 64,
            azimuthal_nodes: 8,
            radial_cutoff_sigmas: 8.0,
            tolerance: 1e-6,
        }
    }
}

impl DisturbanceQuadrature {
    pub fn validate(&self) -> Result<()> {
        if self.radial_nodes < 4 || self.polar_nodes < 4 || self.azimuthal_nodes < 4 {
            return Err(domain("disturbance quadrature node counts must be at least 4"));
        }
        if !(self.radial_cutoff_sigmas >= 4.0) {
            return Err(domain("momentum cutoff must be at least 4 standard deviations"));
        }
        if !(self.tolerance > 0.0) {
            return Err(domain(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        Ok(())
    }

    pub fn cutoff(&self, model: &PointerModel) -> f64 {
        self.radial_cutoff_sigmas * model.momentum_sigma()
    }

    pub fn effective_radial_nodes(&self, model: &PointerModel, n_spins: usize) -> usize {
        let phase = n_spins as f64 * self.cutoff(model);
        self.radial_nodes.max((0.75 * phase).ceil() as usize + 16)
    }

    pub fn effective_polar_nodes(&self, n_spins: usize) -> usize {
        self.polar_nodes.max(n_spins + 1)
    }
}

impl Refine for DisturbanceQuadrature {
    fn refined(&self) -> Self {
        Self {
            radial_nodes: refine_count(self.radial_nodes),
            polar_nodes: refine_count(self.polar_nodes),
            azimuthal_nodes: refine_count(self.azimuthal_nodes),
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DisturbancePoint {
    pub n_spins: usize,
    pub spread: f64,
    pub d_exact: f64,
    pub d_lowest_order: f64,
    pub error_estimate: f64,
    pub nodes_p_radial: usize,
    pub nodes_p_polar: usize,
}

fn check_spins(n_spins: usize) -> Result<()> {
    if n_spins == 0 {
        return Err(domain("need at least one spin"));
    }
    Ok(())
}

/// `∫ d³p |φ̃|² (1 − sin²(p/2) sin²θ_p)^N` with the azimuth done analytically.
fn input_overlap(n_spins: usize, model: &PointerModel, quad: &DisturbanceQuadrature) -> Result<f64> {
    let radial = gauss_legendre(quad.effective_radial_nodes(model, n_spins), 0.0, quad.cutoff(model))?;
    let polar = gauss_legendre(quad.effective_polar_nodes(n_spins), -1.0, 1.0)?;
    let exponent = i32::try_from(n_spins).map_err(|_| domain("spin count too large"))?;
    let mut total = 0.0;
    for (p, wp) in radial.iter() {
        let s2 = (0.5 * p).sin().powi(2);
        let inner: f64 = polar.iter().map(|(x, wx)| wx * (1.0 - s2 * (1.0 - x * x)).powi(exponent)).sum();
        total += wp * p * p * momentum_profile(p, model).powi(2) * inner;
    }
    let value = TAU * total;
    if !value.is_finite() {
        return Err(Error::Numeric {
            location: format!("disturbance integrand, N={n_spins}, Δ={}", model.spread()),
        });
    }
    Ok(value)
}

/// `D = 1 − ⟨↑|ρ_post|↑⟩`, with a refinement error estimate.
pub fn disturbance_exact(n_spins: usize, model: &PointerModel, quad: &DisturbanceQuadrature) -> Result<DisturbancePoint> {
    check_spins(n_spins)?;
    quad.validate()?;
    let value = 1.0 - input_overlap(n_spins, model, quad)?;
    let refined = 1.0 - input_overlap(n_spins, model, &quad.refined())?;
    let report = ConvergenceReport::new(value, refined, quad.tolerance);
    if report.abs_diff > 10.0 * quad.tolerance {
        return Err(Error::Convergence {
            context: format!("disturbance for N={n_spins}, Δ={}", model.spread()),
            abs_diff: report.abs_diff,
            limit: 10.0 * quad.tolerance,
        });
    }
    Ok(DisturbancePoint {
        n_spins,
        spread: model.spread(),
        d_exact: value,
        d_lowest_order: disturbance_lowest_order(n_spins, model.spread()),
        error_estimate: report.abs_diff,
        nodes_p_radial: quad.effective_radial_nodes(model, n_spins),
        nodes_p_polar: quad.effective_polar_nodes(n_spins),
    })
}

/// Large-`N` approximation `(1 + 8Δ²/N)^{−1}`.
pub fn disturbance_lowest_order(n_spins: usize, spread: f64) -> f64 {
    1.0 / (1.0 + 8.0 * spread * spread / n_spins as f64)
}

/// `1/2 + 23/(1440 N²)`: the disturbance at `Δ = √(N/8)` to second order in `1/N`.
/// Only meaningful for large `N`.
pub fn disturbance_series_copt(n_spins: usize) -> f64 {
    let n = n_spins as f64;
    0.5 + 23.0 / (1440.0 * n * n)
}

/// Smallest disturbance compatible with optimal estimation, `(N+1)/(2N+1)`.
pub fn min_disturbance(n_spins: usize) -> f64 {
    let n = n_spins as f64;
    (n + 1.0) / (2.0 * n + 1.0)
}

/// Closed form of `⟨S_z⟩` after the measurement:
/// `(N/6)[1 + e^{−1/(8Δ²)}(2 − 1/(2Δ²))]`.
pub fn bloch_z_post_closed(n_spins: usize, spread: f64) -> f64 {
    let d2 = spread * spread;
    n_spins as f64 / 6.0 * (1.0 + (-1.0 / (8.0 * d2)).exp() * (2.0 - 0.5 / d2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochReport {
    pub n_spins: usize,
    pub spread: f64,
    pub sz_initial: f64,
    pub sz_post_closed: f64,
    pub sz_post_numeric: f64,
    pub sx_post: f64,
    pub sy_post: f64,
    pub error_estimate: f64,
}

fn bloch_integral(n_spins: usize, model: &PointerModel, quad: &DisturbanceQuadrature) -> Result<[f64; 3]> {
    let ops = collective_operators(n_spins)?;
    let radial = gauss_legendre(quad.effective_radial_nodes(model, n_spins), 0.0, quad.cutoff(model))?;
    let polar = gauss_legendre(quad.effective_polar_nodes(n_spins), -1.0, 1.0)?;
    let azimuth = periodic_trapezoid(quad.azimuthal_nodes, 0.0, TAU)?;
    let rows = radial
        .iter()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(p, wp)| -> Result<[f64; 3]> {
            let radial_weight = wp * p * p * momentum_profile(p, model).powi(2);
            let mut row = [0.0; 3];
            for (x, wx) in polar.iter() {
                let s = (1.0 - x * x).max(0.0).sqrt();
                for (phi, wphi) in azimuth.iter() {
                    let (a, b) = rotated_up_amplitudes([p * s * phi.cos(), p * s * phi.sin(), p * x]);
                    let moments = ops.expectation(&dicke_expand(a, b, n_spins)?);
                    let w = radial_weight * wx * wphi;
                    for (t, m) in row.iter_mut().zip(moments) {
                        *t += w * m;
                    }
                }
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = [0.0; 3];
    for row in rows {
        for (t, r) in total.iter_mut().zip(row) {
            *t += r;
        }
    }
    if total.iter().any(|t| !t.is_finite()) {
        return Err(Error::Numeric {
            location: format!("Bloch integrand, N={n_spins}, Δ={}", model.spread()),
        });
    }
    Ok(total)
}

/// `⟨S⟩` after the measurement by direct quadrature of
/// `∫ d³p |φ̃|² ⟨↑|R(p)† S R(p)|↑⟩` over Dicke vectors.
pub fn bloch_post_numeric(n_spins: usize, model: &PointerModel, quad: &DisturbanceQuadrature) -> Result<BlochReport> {
    check_spins(n_spins)?;
    quad.validate()?;
    let base = bloch_integral(n_spins, model, quad)?;
    let refined = bloch_integral(n_spins, model, &quad.refined())?;
    let report = ConvergenceReport::new(base[2], refined[2], quad.tolerance);
    if report.abs_diff > 10.0 * quad.tolerance {
        return Err(Error::Convergence {
            context: format!("Bloch vector for N={n_spins}, Δ={}", model.spread()),
            abs_diff: report.abs_diff,
            limit: 10.0 * quad.tolerance,
        });
    }
    Ok(BlochReport {
        n_spins,
        spread: model.spread(),
        sz_initial: 0.5 * n_spins as f64,
        sz_post_closed: bloch_z_post_closed(n_spins, model.spread()),
        sz_post_numeric: base[2],
        sx_post: base[0],
        sy_post: base[1],
        error_estimate: report.abs_diff,
    })
}

/// `D` from the full `2^N`-dimensional evolution `exp(−i p·S)` on a 3D momentum
/// rule, without the single-spin factorization. Limited to `N ≤ 3`.
pub fn disturbance_oracle_full(n_spins: usize, model: &PointerModel, quad: &DisturbanceQuadrature) -> Result<f64> {
    check_spins(n_spins)?;
    if n_spins > MAX_ORACLE_SPINS {
        return Err(Error::Capability {
            what: "full-tensor disturbance oracle",
            max: MAX_ORACLE_SPINS,
            got: n_spins,
        });
    }
    quad.validate()?;
    let radial = gauss_legendre(quad.effective_radial_nodes(model, n_spins), 0.0, quad.cutoff(model))?;
    let polar = gauss_legendre(quad.effective_polar_nodes(n_spins), -1.0, 1.0)?;
    let azimuth = periodic_trapezoid(quad.azimuthal_nodes, 0.0, TAU)?;
    let rows = radial
        .iter()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(p, wp)| -> Result<f64> {
            let radial_weight = wp * p * p * momentum_profile(p, model).powi(2);
            let mut row = 0.0;
            for (x, wx) in polar.iter() {
                let s = (1.0 - x * x).max(0.0).sqrt();
                for (phi, wphi) in azimuth.iter() {
                    let state = full_tensor_rotation_oracle([p * s * phi.cos(), p * s * phi.sin(), p * x], n_spins)?;
                    row += radial_weight * wx * wphi * state[0].norm_sqr();
                }
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let total: f64 = rows.iter().sum();
    Ok(1.0 - total)
}

/// Large-`Δ` expansion of the fidelity: `1/2 + √(2/π) N/(6Δ)`. Useful to
/// judge how slowly the curves approach random guessing.
pub fn weak_coupling_fidelity(n_spins: usize, spread: f64) -> f64 {
    0.5 + (2.0 / PI).sqrt() * n_spins as f64 / (6.0 * spread)
}
