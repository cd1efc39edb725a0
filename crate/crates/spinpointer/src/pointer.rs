//! The Gaussian three-dimensional pointer, its coupling `exp(−i p·S)` to the
//! spins, and the outcome amplitudes `Ψ_k(r)` obtained by integrating over
//! pointer momenta.
//!
//! The pointer starts in `φ̃(p) = (2Δ²/π)^{3/4} exp(−Δ² p²)` and outcome
//! amplitudes use plane waves normalized by `(2π)^{−3/2}`, so the Kraus
//! operators `E(r) = (2π)^{−3/2} ∫ d³p e^{i r·p} φ̃(p) e^{−i p·S}` satisfy
//! `∫ E(r)†E(r) d³r = 1`.
//!
//! `E(r)` commutes with `r̂·S`. Along the polar axis it is diagonal in the Dicke
//! basis, `E(r ẑ) = Σ_m e_m(r) |m⟩⟨m|`, and for any other outcome direction
//! `E(r) = D(r̂) E(|r| ẑ) D(r̂)†`. [`KrausSpectrum`] computes the radial
//! eigenvalue functions `e_m`: the azimuthal momentum integral is trivial for
//! a diagonal element, the polar one is done exactly through a Legendre
//! expansion (`∫ e^{iκx} P_l(x) dx = 2 iˡ j_l(κ)`), leaving one radial
//! Gauss–Legendre integral per outcome radius.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::quadrature::{composite_gauss_legendre, gauss_legendre, periodic_trapezoid, refine_count, Refine, Rule1D};
use crate::special::{legendre_all, spherical_bessel_all};
use crate::spin::{dicke_expand, dicke_rotation_matrix, rotated_up_amplitudes, su2_rotation, DickeVector, SpinHalfRotation};

/// Coupling strength `μ`; absorbed into the spread.
pub const COUPLING: f64 = 1.0;

/// Allowed deviation of the total outcome probability from one.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-4;

/// Gauss–Legendre nodes per radial outcome panel.
pub const NODES_PER_PANEL: usize = 8;

/// The Gaussian pointer of spread `Δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointerModel {
    spread: f64,
}

impl PointerModel {
    pub fn new(spread: f64) -> Result<Self> {
        if !(spread > 0.0) || !spread.is_finite() {
            return Err(domain(format!("pointer spread must be positive and finite, got {spread}")));
        }
        Ok(Self { spread })
    }

    pub fn spread(&self) -> f64 {
        self.spread
    }

    pub fn coupling(&self) -> f64 {
        COUPLING
    }

    /// Standard deviation of each momentum component under `|φ̃|²`, i.e. `1/(2Δ)`.
    pub fn momentum_sigma(&self) -> f64 {
        0.5 / self.spread
    }
}

/// `(2Δ²/π)^{3/4} exp(−Δ² p²)`.
pub fn momentum_profile(p_magnitude: f64, model: &PointerModel) -> f64 {
    let d2 = model.spread * model.spread;
    (2.0 * d2 / PI).powf(0.75) * (-d2 * p_magnitude * p_magnitude).exp()
}

/// Discretization of the momentum integral.
///
/// Node counts are lower bounds: the radial count is raised so the oscillation
/// `e^{i r·p}` is sampled at least 1.5 times per radian, and the polar count
/// never drops below what makes the Legendre projection exact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentumQuadrature {
    pub radial_nodes: usize,
    pub radial_cutoff_sigmas: f64,
    pub polar_nodes: usize,
    pub azimuthal_nodes: usize,
}

impl Default for MomentumQuadrature {
    fn default() -> Self {
        Self {
            radial_nodes: 32,
            radial_cutoff_sigmas: 8.0,
            polar_nodes: 32,
            azimuthal_nodes: 32,
        }
    }
}

impl MomentumQuadrature {
    pub fn validate(&self) -> Result<()> {
        if self.radial_nodes < 4 || self.polar_nodes < 4 || self.azimuthal_nodes < 4 {
            return Err(domain("momentum quadrature node counts must be at least 4"));
        }
        if !(self.radial_cutoff_sigmas >= 4.0) {
            return Err(domain("momentum cutoff must be at least 4 standard deviations"));
        }
        Ok(())
    }

    pub fn cutoff(&self, model: &PointerModel) -> f64 {
        self.radial_cutoff_sigmas * model.momentum_sigma()
    }

    /// Radial node count for outcomes up to `r_max`: the largest phase is
    /// `(r_max + N/2)·p_max`, position drift plus spin rotation.
    pub fn effective_radial_nodes(&self, model: &PointerModel, n_spins: usize, r_max: f64) -> usize {
        let phase = (r_max + 0.5 * n_spins as f64) * self.cutoff(model);
        self.radial_nodes.max((1.5 * phase).ceil() as usize + 16)
    }

    pub fn effective_polar_nodes(&self, n_spins: usize) -> usize {
        self.polar_nodes.max(n_spins + 2)
    }
}

impl Refine for MomentumQuadrature {
    fn refined(&self) -> Self {
        Self {
            radial_nodes: refine_count(self.radial_nodes),
            radial_cutoff_sigmas: self.radial_cutoff_sigmas,
            polar_nodes: refine_count(self.polar_nodes),
            azimuthal_nodes: refine_count(self.azimuthal_nodes),
        }
    }
}

/// Resolution of the outcome-space grid.
///
/// Radially the grid is a composite Gauss–Legendre rule with
/// [`NODES_PER_PANEL`] nodes per panel; the panel count is at least
/// `radial_nodes / 8` and grows so that, at the default 96 nodes, no panel is
/// wider than the pointer spread.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutcomeSpec {
    pub radial_nodes: usize,
    pub polar_nodes: usize,
}

impl Default for OutcomeSpec {
    fn default() -> Self {
        Self { radial_nodes: 96, polar_nodes: 64 }
    }
}

impl OutcomeSpec {
    pub fn validate(&self) -> Result<()> {
        if self.radial_nodes < 4 || self.polar_nodes < 4 {
            return Err(domain("outcome grid node counts must be at least 4"));
        }
        Ok(())
    }

    pub fn radial_panels(&self, r_lo: f64, r_hi: f64, spread: f64) -> usize {
        let by_count = self.radial_nodes.div_ceil(NODES_PER_PANEL);
        let by_width = (self.radial_nodes as f64 / 96.0 * (r_hi - r_lo) / spread).ceil() as usize;
        by_count.max(by_width).max(1)
    }
}

impl Refine for OutcomeSpec {
    fn refined(&self) -> Self {
        Self {
            radial_nodes: refine_count(self.radial_nodes),
            polar_nodes: refine_count(self.polar_nodes),
        }
    }
}

/// Product grid over outcome radius and polar angle.
///
/// Polar weights are for the measure `dθ`; integrals carry `2π r² sinθ` explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeGrid {
    radial: Rule1D,
    polar: Rule1D,
}

impl OutcomeGrid {
    pub fn new(radial: Rule1D, polar: Rule1D) -> Result<Self> {
        let (r0, _) = radial.domain();
        let (t0, t1) = polar.domain();
        if r0 < 0.0 || t0 < 0.0 || t1 > PI {
            return Err(domain("outcome grid must lie in r >= 0, θ ∈ [0, π]"));
        }
        Ok(Self { radial, polar })
    }

    /// The ball `|r| <= r_max`, polar nodes Gauss–Legendre in `cosθ`.
    pub fn ball(spec: &OutcomeSpec, r_max: f64, spread: f64) -> Result<Self> {
        spec.validate()?;
        let panels = spec.radial_panels(0.0, r_max, spread);
        let radial = composite_gauss_legendre(panels, NODES_PER_PANEL, 0.0, r_max)?;
        Self::new(radial, polar_rule_in_cosine(spec.polar_nodes)?)
    }

    /// The shell `r_lo <= |r| <= r_hi` restricted to the cap `θ <= theta_max`.
    pub fn shell_cap(spec: &OutcomeSpec, r_lo: f64, r_hi: f64, theta_max: f64, spread: f64) -> Result<Self> {
        spec.validate()?;
        let panels = spec.radial_panels(r_lo, r_hi, spread);
        let radial = composite_gauss_legendre(panels, NODES_PER_PANEL, r_lo, r_hi)?;
        let polar = gauss_legendre(spec.polar_nodes, 0.0, theta_max.min(PI))?;
        Self::new(radial, polar)
    }

    pub fn radial(&self) -> &Rule1D {
        &self.radial
    }

    pub fn polar(&self) -> &Rule1D {
        &self.polar
    }

    pub fn r_max(&self) -> f64 {
        self.radial.domain().1
    }

    /// `2π Σ w_r w_θ r² sinθ f(r, θ)` in fixed node order.
    pub fn integrate(&self, f: impl Fn(usize, usize) -> f64) -> f64 {
        let mut total = 0.0;
        for (i, (r, wr)) in self.radial.iter().enumerate() {
            let mut inner = 0.0;
            for (j, (t, wt)) in self.polar.iter().enumerate() {
                inner += wt * t.sin() * f(i, j);
            }
            total += wr * r * r * inner;
        }
        TAU * total
    }
}

/// Gauss–Legendre in `x = cosθ`, re-expressed as nodes in θ with `dθ` weights.
fn polar_rule_in_cosine(n: usize) -> Result<Rule1D> {
    let rule = gauss_legendre(n, -1.0, 1.0)?;
    let (nodes, weights): (Vec<f64>, Vec<f64>) = rule
        .iter()
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .map(|(x, w)| {
            let theta = x.acos();
            (theta, w / theta.sin())
        })
        .unzip();
    Rule1D::from_parts(nodes, weights, (0.0, PI))
}

/// `e^{−iθ S_y}` in the Dicke basis: maps `|m⟩` to the eigenstate of `r̂·S` for
/// the outcome direction at polar angle θ in the xz-plane.
pub fn polar_frame(theta: f64, n_spins: usize) -> Result<DMatrix<Complex64>> {
    dicke_rotation_matrix(&su2_rotation([0.0, theta, 0.0]), n_spins)
}

fn frame_for_direction(r: [f64; 3], n_spins: usize) -> Result<(f64, DMatrix<Complex64>)> {
    let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if norm == 0.0 {
        return Ok((0.0, DMatrix::identity(n_spins + 1, n_spins + 1)));
    }
    let theta = (r[2] / norm).clamp(-1.0, 1.0).acos();
    let phi = r[1].atan2(r[0]);
    let u: SpinHalfRotation = su2_rotation([0.0, 0.0, phi]).compose(&su2_rotation([0.0, theta, 0.0]));
    Ok((norm, dicke_rotation_matrix(&u, n_spins)?))
}

/// Radial eigenvalue functions `e_k(r)` of the Kraus operator along the polar
/// axis, `k = 0..=N` labelling `S_z = N/2 − k`.
#[derive(Debug, Clone)]
pub struct KrausSpectrum {
    n_spins: usize,
    model: PointerModel,
    p_nodes: Vec<f64>,
    /// `coefficients[i][k * (N+1) + l]`: weight of `j_l(p_i r)` in `e_k(r)`.
    coefficients: Vec<Vec<Complex64>>,
    radial_nodes: usize,
    polar_nodes: usize,
}

impl KrausSpectrum {
    /// Prepares the radial integrals for outcome radii up to `r_max`.
    pub fn new(n_spins: usize, model: &PointerModel, quad: &MomentumQuadrature, r_max: f64) -> Result<Self> {
        if n_spins == 0 {
            return Err(domain("need at least one spin"));
        }
        quad.validate()?;
        let dim = n_spins + 1;
        let radial_nodes = quad.effective_radial_nodes(model, n_spins, r_max);
        let polar_nodes = quad.effective_polar_nodes(n_spins);
        let radial = gauss_legendre(radial_nodes, 0.0, quad.cutoff(model))?;
        let polar = gauss_legendre(polar_nodes, -1.0, 1.0)?;
        let legendre: Vec<Vec<f64>> = polar
            .nodes()
            .iter()
            .map(|&x| {
                let mut p = vec![0.0; dim];
                legendre_all(x, &mut p);
                p
            })
            .collect();
        let prefactor = 2.0 / TAU.sqrt();
        let i_pow = |l: usize| match l % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        let coefficients = radial
            .iter()
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&(p, wp)| -> Result<Vec<Complex64>> {
                let radial_weight = wp * p * p * momentum_profile(p, model) * prefactor;
                let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
                for (j, (x, wx)) in polar.iter().enumerate() {
                    let sin = (1.0 - x * x).max(0.0).sqrt();
                    let rot = dicke_rotation_matrix(&su2_rotation([p * sin, 0.0, p * x]), n_spins)?;
                    for k in 0..dim {
                        let diag = rot[(k, k)] * wx;
                        for l in 0..dim {
                            out[k * dim + l] += diag * legendre[j][l];
                        }
                    }
                }
                for k in 0..dim {
                    for l in 0..dim {
                        let c = &mut out[k * dim + l];
                        *c *= i_pow(l) * (0.5 * (2 * l + 1) as f64) * radial_weight;
                        if !c.re.is_finite() || !c.im.is_finite() {
                            return Err(Error::Numeric {
                                location: format!("Legendre coefficient k={k} l={l} at |p|={p}"),
                            });
                        }
                    }
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n_spins,
            model: *model,
            p_nodes: radial.nodes().to_vec(),
            coefficients,
            radial_nodes,
            polar_nodes,
        })
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn model(&self) -> &PointerModel {
        &self.model
    }

    pub fn radial_nodes(&self) -> usize {
        self.radial_nodes
    }

    pub fn polar_nodes(&self) -> usize {
        self.polar_nodes
    }

    /// `e_k(r)` for every `k`.
    pub fn eigenvalues(&self, r: f64) -> Vec<Complex64> {
        let dim = self.n_spins + 1;
        let mut bessel = vec![0.0; dim];
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (&p, coeffs) in self.p_nodes.iter().zip(&self.coefficients) {
            spherical_bessel_all(p * r, &mut bessel);
            for (k, slot) in out.iter_mut().enumerate() {
                let row = &coeffs[k * dim..(k + 1) * dim];
                *slot += row.iter().zip(&bessel).map(|(c, &j)| c * j).sum::<Complex64>();
            }
        }
        out
    }

    /// `Ψ_k(r, θ)` for input `|↑⟩^⊗N` at an outcome in the xz-plane, given the
    /// precomputed eigenvalues at `r` and the frame at θ.
    pub fn amplitudes_from_parts(eigenvalues: &[Complex64], frame: &DMatrix<Complex64>) -> Vec<Complex64> {
        let dim = eigenvalues.len();
        let weights: Vec<Complex64> = (0..dim).map(|m| eigenvalues[m] * frame[(0, m)].conj()).collect();
        (0..dim)
            .map(|k| (0..dim).map(|m| frame[(k, m)] * weights[m]).sum())
            .collect()
    }

    /// `Ψ(r, θ) = E(r)|↑⟩^⊗N` with the outcome in the xz-plane.
    pub fn amplitudes(&self, r: f64, theta: f64) -> Result<Vec<Complex64>> {
        let frame = polar_frame(theta, self.n_spins)?;
        Ok(Self::amplitudes_from_parts(&self.eigenvalues(r), &frame))
    }

    /// The Kraus operator `E(r)` at an arbitrary outcome vector, in the Dicke basis.
    pub fn kraus_operator(&self, r: [f64; 3]) -> Result<DMatrix<Complex64>> {
        let (norm, frame) = frame_for_direction(r, self.n_spins)?;
        let e = self.eigenvalues(norm);
        let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(e));
        Ok(&frame * diag * frame.adjoint())
    }

    /// `E(r)|input⟩` at an arbitrary outcome vector.
    pub fn amplitudes_for_input(&self, r: [f64; 3], input: &DickeVector) -> Result<DickeVector> {
        Ok(input.transformed(&self.kraus_operator(r)?))
    }
}

/// `Ψ_k(r, θ)`, `k = 0..=N`, for input `|↑⟩^⊗N`.
pub fn position_amplitudes(
    r: f64,
    theta: f64,
    n_spins: usize,
    model: &PointerModel,
    quad: &MomentumQuadrature,
) -> Result<Vec<Complex64>> {
    if !(r >= 0.0) || !(0.0..=PI).contains(&theta) {
        return Err(domain(format!("outcome (r={r}, θ={theta}) outside r >= 0, θ ∈ [0, π]")));
    }
    KrausSpectrum::new(n_spins, model, quad, r)?.amplitudes(r, theta)
}

/// `p(r, θ) = Σ_k |Ψ_k(r, θ)|²`.
pub fn outcome_density(
    r: f64,
    theta: f64,
    n_spins: usize,
    model: &PointerModel,
    quad: &MomentumQuadrature,
) -> Result<f64> {
    Ok(position_amplitudes(r, theta, n_spins, model, quad)?.iter().map(|a| a.norm_sqr()).sum())
}

/// Literal evaluation of `(2π)^{−3/2} ∫ d³p e^{i r·p} φ̃(p) e^{−i p·S}|input⟩` on a
/// spherical product rule (Gauss–Legendre radius and `cosθ_p`, periodic
/// trapezoid in azimuth). Node counts are used exactly as given.
///
/// Cost grows with the cube of the node count; this exists to cross-check
/// [`KrausSpectrum`].
pub fn position_amplitudes_direct(
    r: [f64; 3],
    input: &DickeVector,
    model: &PointerModel,
    quad: &MomentumQuadrature,
) -> Result<DickeVector> {
    quad.validate()?;
    let n = input.n_spins();
    let radial = gauss_legendre(quad.radial_nodes, 0.0, quad.cutoff(model))?;
    let polar = gauss_legendre(quad.polar_nodes, -1.0, 1.0)?;
    let azimuth = periodic_trapezoid(quad.azimuthal_nodes, 0.0, TAU)?;
    let is_all_up = input.amplitudes()[0] == Complex64::new(1.0, 0.0)
        && input.amplitudes()[1..].iter().all(|a| *a == Complex64::new(0.0, 0.0));
    let norm = TAU.powf(-1.5);
    let mut acc = vec![Complex64::new(0.0, 0.0); n + 1];
    for (p, wp) in radial.iter() {
        let radial_weight = wp * p * p * momentum_profile(p, model) * norm;
        for (x, wx) in polar.iter() {
            let s = (1.0 - x * x).max(0.0).sqrt();
            for (phi, wphi) in azimuth.iter() {
                let pv = [p * s * phi.cos(), p * s * phi.sin(), p * x];
                let rotated = if is_all_up {
                    let (a, b) = rotated_up_amplitudes(pv);
                    dicke_expand(a, b, n)?
                } else {
                    input.transformed(&dicke_rotation_matrix(&su2_rotation(pv), n)?)
                };
                let phase = Complex64::from_polar(radial_weight * wx * wphi, r[0] * pv[0] + r[1] * pv[1] + r[2] * pv[2]);
                for (slot, a) in acc.iter_mut().zip(rotated.amplitudes()) {
                    *slot += phase * a;
                }
            }
        }
    }
    DickeVector::new(n, acc)
}

/// Outcome amplitudes tabulated over an [`OutcomeGrid`].
#[derive(Debug, Clone)]
pub struct AmplitudeField {
    n_spins: usize,
    model: PointerModel,
    momentum: MomentumQuadrature,
    grid: OutcomeGrid,
    /// Flattened `[radial][polar][k]`.
    values: Vec<Complex64>,
    effective_radial_momentum_nodes: usize,
    effective_polar_momentum_nodes: usize,
    total_probability: f64,
}

impl AmplitudeField {
    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn model(&self) -> &PointerModel {
        &self.model
    }

    pub fn momentum(&self) -> &MomentumQuadrature {
        &self.momentum
    }

    pub fn grid(&self) -> &OutcomeGrid {
        &self.grid
    }

    pub fn effective_momentum_nodes(&self) -> (usize, usize) {
        (self.effective_radial_momentum_nodes, self.effective_polar_momentum_nodes)
    }

    /// `Σ_k ∫ |Ψ_k|² d³r` on this grid.
    pub fn total_probability(&self) -> f64 {
        self.total_probability
    }

    pub fn normalization_tolerance(&self) -> f64 {
        NORMALIZATION_TOLERANCE
    }

    pub fn is_normalized(&self) -> bool {
        (self.total_probability - 1.0).abs() <= NORMALIZATION_TOLERANCE
    }

    pub fn amplitudes(&self, radial: usize, polar: usize) -> &[Complex64] {
        let dim = self.n_spins + 1;
        let start = (radial * self.grid.polar.len() + polar) * dim;
        &self.values[start..start + dim]
    }

    pub fn density(&self, radial: usize, polar: usize) -> f64 {
        self.amplitudes(radial, polar).iter().map(|a| a.norm_sqr()).sum()
    }

    /// `2π ∫ r² sinθ p(r, θ) g(θ) dr dθ`.
    pub fn integrate_polar_weight(&self, g: impl Fn(f64) -> f64) -> f64 {
        let polar = self.grid.polar.nodes();
        self.grid.integrate(|i, j| self.density(i, j) * g(polar[j]))
    }
}

/// Evaluates `Ψ` at every grid node for input `|↑⟩^⊗N`.
///
/// Radial nodes are processed in parallel and written back in node order, so the
/// result does not depend on the number of worker threads.
pub fn build_amplitude_field(
    n_spins: usize,
    model: &PointerModel,
    quad: &MomentumQuadrature,
    grid: &OutcomeGrid,
) -> Result<AmplitudeField> {
    let spectrum = KrausSpectrum::new(n_spins, model, quad, grid.r_max())?;
    let frames = grid
        .polar
        .nodes()
        .iter()
        .map(|&t| polar_frame(t, n_spins))
        .collect::<Result<Vec<_>>>()?;
    let rows = grid
        .radial
        .nodes()
        .par_iter()
        .map(|&r| -> Result<Vec<Complex64>> {
            let e = spectrum.eigenvalues(r);
            let mut row = Vec::with_capacity(frames.len() * (n_spins + 1));
            for (j, frame) in frames.iter().enumerate() {
                let amps = KrausSpectrum::amplitudes_from_parts(&e, frame);
                if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
                    return Err(Error::Numeric {
                        location: format!("outcome node r={r}, θ={}", grid.polar.nodes()[j]),
                    });
                }
                row.extend(amps);
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<Complex64> = rows.into_iter().flatten().collect();
    let mut field = AmplitudeField {
        n_spins,
        model: *model,
        momentum: *quad,
        grid: grid.clone(),
        values,
        effective_radial_momentum_nodes: spectrum.radial_nodes(),
        effective_polar_momentum_nodes: spectrum.polar_nodes(),
        total_probability: 0.0,
    };
    field.total_probability = field.integrate_polar_weight(|_| 1.0);
    Ok(field)
}

/// First estimate of the outcome radius enclosing essentially all probability:
/// drift by the spin length plus six pointer widths.
pub fn initial_outcome_radius(n_spins: usize, model: &PointerModel) -> f64 {
    0.5 * n_spins as f64 + 6.0 * model.spread()
}

/// Builds the field on a ball whose radius grows from [`initial_outcome_radius`]
/// in steps of `3Δ` until the captured probability reaches `1 − 10⁻⁴`.
pub fn build_adaptive_field(
    n_spins: usize,
    model: &PointerModel,
    quad: &MomentumQuadrature,
    spec: &OutcomeSpec,
) -> Result<AmplitudeField> {
    let mut r_max = initial_outcome_radius(n_spins, model);
    let mut field = build_amplitude_field(n_spins, model, quad, &OutcomeGrid::ball(spec, r_max, model.spread())?)?;
    for _ in 0..4 {
        if field.total_probability() >= 1.0 - NORMALIZATION_TOLERANCE {
            break;
        }
        r_max += 3.0 * model.spread();
        field = build_amplitude_field(n_spins, model, quad, &OutcomeGrid::ball(spec, r_max, model.spread())?)?;
    }
    Ok(field)
}
