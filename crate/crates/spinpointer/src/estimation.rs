//! Average direction-guessing fidelity for the three-pointer measurement, its
//! dependence on the pointer spread, and the closed-form reference values.
//!
//! For input `|↑⟩^⊗N` the outcome density depends only on `(r, θ)`, and a guess
//! along `±r̂` scores `cos²(θ/2)` or `sin²(θ/2)`. The average over input
//! directions therefore reduces to
//! `F_av = 2π ∫ r² sinθ p(r, θ) s(θ) dr dθ`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::pointer::{build_adaptive_field, build_amplitude_field, AmplitudeField, OutcomeGrid, MomentumQuadrature, OutcomeSpec, PointerModel, NORMALIZATION_TOLERANCE};
use crate::quadrature::{ConvergenceReport, Refine};

/// Which direction to guess after observing outcome `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GuessRule {
    /// Guess `r̂`.
    PlusR,
    /// Guess `−r̂`.
    MinusR,
    /// Whichever of `±r̂` scores higher for this `(N, Δ)`.
    BestOfAxis,
}

impl GuessRule {
    pub fn as_str(&self) -> &'static str {
        match self {
            GuessRule::PlusR => "plus_r",
            GuessRule::MinusR => "minus_r",
            GuessRule::BestOfAxis => "best_of_axis",
        }
    }
}

impl std::fmt::Display for GuessRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for GuessRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "plus_r" => Ok(GuessRule::PlusR),
            "minus_r" => Ok(GuessRule::MinusR),
            "best_of_axis" => Ok(GuessRule::BestOfAxis),
            other => Err(domain(format!("unknown guess rule {other:?}"))),
        }
    }
}

/// Momentum and outcome resolution plus the accepted refinement disagreement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FidelityQuadrature {
    pub momentum: MomentumQuadrature,
    pub outcome: OutcomeSpec,
    pub tolerance: f64,
}

impl Default for FidelityQuadrature {
    fn default() -> Self {
        Self {
            momentum: MomentumQuadrature::default(),
            outcome: OutcomeSpec::default(),
            tolerance: 1e-4,
        }
    }
}

impl FidelityQuadrature {
    pub fn validate(&self) -> Result<()> {
        self.momentum.validate()?;
        self.outcome.validate()?;
        if !(self.tolerance > 0.0) {
            return Err(domain(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        Ok(())
    }
}

impl Refine for FidelityQuadrature {
    fn refined(&self) -> Self {
        Self {
            momentum: self.momentum.refined(),
            outcome: self.outcome.refined(),
            tolerance: self.tolerance,
        }
    }
}

/// Node counts actually used for a result.
///
/// The azimuthal momentum integral of a Kraus eigenvalue is done in closed
/// form, which is recorded as a single node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadratureFingerprint {
    pub nodes_r: usize,
    pub nodes_theta: usize,
    pub nodes_p_radial: usize,
    pub nodes_p_polar: usize,
    pub nodes_p_azimuthal: usize,
}

impl QuadratureFingerprint {
    fn of(field: &AmplitudeField) -> Self {
        let (p_radial, p_polar) = field.effective_momentum_nodes();
        Self {
            nodes_r: field.grid().radial().len(),
            nodes_theta: field.grid().polar().len(),
            nodes_p_radial: p_radial,
            nodes_p_polar: p_polar,
            nodes_p_azimuthal: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FidelityPoint {
    pub n_spins: usize,
    pub spread: f64,
    pub fidelity: f64,
    pub error_estimate: f64,
    pub guess_rule: GuessRule,
    /// For `BestOfAxis`, the branch that won; otherwise the rule itself.
    pub resolved_rule: GuessRule,
    pub total_probability: f64,
    pub quadrature: QuadratureFingerprint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct AxisScores {
    plus: f64,
    minus: f64,
    total: f64,
}

fn axis_scores(field: &AmplitudeField) -> AxisScores {
    let plus = field.integrate_polar_weight(|t| (0.5 * t).cos().powi(2));
    let minus = field.integrate_polar_weight(|t| (0.5 * t).sin().powi(2));
    AxisScores {
        plus,
        minus,
        total: field.total_probability(),
    }
}

fn pick(scores: &AxisScores, rule: GuessRule) -> (f64, GuessRule) {
    match rule {
        GuessRule::PlusR => (scores.plus, GuessRule::PlusR),
        GuessRule::MinusR => (scores.minus, GuessRule::MinusR),
        GuessRule::BestOfAxis if scores.minus > scores.plus => (scores.minus, GuessRule::MinusR),
        GuessRule::BestOfAxis => (scores.plus, GuessRule::PlusR),
    }
}

fn check_inputs(n_spins: usize, quad: &FidelityQuadrature) -> Result<()> {
    if n_spins == 0 {
        return Err(domain("need at least one spin"));
    }
    quad.validate()
}

/// `F_av` at base resolution only, with no error estimate.
pub fn fidelity_value(n_spins: usize, model: &PointerModel, rule: GuessRule, quad: &FidelityQuadrature) -> Result<f64> {
    check_inputs(n_spins, quad)?;
    let field = build_adaptive_field(n_spins, model, &quad.momentum, &quad.outcome)?;
    Ok(pick(&axis_scores(&field), rule).0)
}

/// `F_av` with an error estimate from one refinement step.
///
/// Fails with [`Error::Convergence`] when the refined value differs by more than
/// ten times the tolerance, or when the outcome grid does not capture the
/// probability to within ten times [`NORMALIZATION_TOLERANCE`].
pub fn average_fidelity(n_spins: usize, model: &PointerModel, rule: GuessRule, quad: &FidelityQuadrature) -> Result<FidelityPoint> {
    check_inputs(n_spins, quad)?;
    let base = build_adaptive_field(n_spins, model, &quad.momentum, &quad.outcome)?;
    let refined_quad = quad.refined();
    let refined = build_adaptive_field(n_spins, model, &refined_quad.momentum, &refined_quad.outcome)?;
    let base_scores = axis_scores(&base);
    let refined_scores = axis_scores(&refined);
    let (fidelity, resolved_rule) = pick(&base_scores, rule);
    let (refined_fidelity, _) = pick(&refined_scores, resolved_rule);
    let report = ConvergenceReport::new(fidelity, refined_fidelity, quad.tolerance);
    let normalization_defect = (base_scores.total - 1.0).abs();
    if normalization_defect > 10.0 * NORMALIZATION_TOLERANCE {
        return Err(Error::Convergence {
            context: format!("outcome probability for N={n_spins}, Δ={}", model.spread()),
            abs_diff: normalization_defect,
            limit: 10.0 * NORMALIZATION_TOLERANCE,
        });
    }
    if report.abs_diff > 10.0 * quad.tolerance {
        return Err(Error::Convergence {
            context: format!("average fidelity for N={n_spins}, Δ={}", model.spread()),
            abs_diff: report.abs_diff,
            limit: 10.0 * quad.tolerance,
        });
    }
    Ok(FidelityPoint {
        n_spins,
        spread: model.spread(),
        fidelity,
        error_estimate: report.abs_diff,
        guess_rule: rule,
        resolved_rule,
        total_probability: base_scores.total,
        quadrature: QuadratureFingerprint::of(&base),
    })
}

/// Best fidelity of any measurement on `N` copies: `(N+1)/(N+2)`.
pub fn optimal_fidelity(n_spins: usize) -> f64 {
    (n_spins as f64 + 1.0) / (n_spins as f64 + 2.0)
}

/// `F_av` as `Δ → 0`: `(3N+2)/(4(N+1))` for even `N`, `(3N+5)/(4(N+2))` for odd `N`.
pub fn strong_coupling_limit(n_spins: usize) -> f64 {
    let n = n_spins as f64;
    if n_spins.is_multiple_of(2) {
        0.25 * (3.0 * n + 2.0) / (n + 1.0)
    } else {
        0.25 * (3.0 * n + 5.0) / (n + 2.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub points: Vec<FidelityPoint>,
    /// Spreads whose evaluation failed, with the reason.
    pub failures: Vec<(f64, Error)>,
}

impl SweepResult {
    /// `(Δ, F)` of the largest fidelity among successful points.
    pub fn maximum(&self) -> Option<(f64, f64)> {
        self.points
            .iter()
            .fold(None, |best: Option<&FidelityPoint>, p| match best {
                Some(b) if b.fidelity >= p.fidelity => Some(b),
                _ => Some(p),
            })
            .map(|p| (p.spread, p.fidelity))
    }
}

/// `spreads` must be nonempty, positive and strictly increasing.
pub fn validate_spreads(spreads: &[f64]) -> Result<()> {
    if spreads.is_empty() {
        return Err(domain("spread list is empty"));
    }
    if spreads.iter().any(|&d| !(d > 0.0) || !d.is_finite()) {
        return Err(domain("spreads must be positive and finite"));
    }
    if spreads.windows(2).any(|w| w[1] <= w[0]) {
        return Err(domain("spreads must be strictly increasing"));
    }
    Ok(())
}

/// Evaluates every spread independently. Points that fail are collected in
/// [`SweepResult::failures`] instead of aborting the sweep.
pub fn sweep_delta(n_spins: usize, spreads: &[f64], rule: GuessRule, quad: &FidelityQuadrature) -> Result<SweepResult> {
    check_inputs(n_spins, quad)?;
    validate_spreads(spreads)?;
    let outcomes: Vec<(f64, Result<FidelityPoint>)> = spreads
        .par_iter()
        .map(|&d| (d, PointerModel::new(d).and_then(|m| average_fidelity(n_spins, &m, rule, quad))))
        .collect();
    let mut result = SweepResult { points: Vec::new(), failures: Vec::new() };
    for (d, outcome) in outcomes {
        match outcome {
            Ok(p) => result.points.push(p),
            Err(e) => result.failures.push((d, e)),
        }
    }
    Ok(result)
}

/// `[0.05, max(2, 2√(N/8))]`.
pub fn default_bracket(n_spins: usize) -> (f64, f64) {
    (0.05, 2.0f64.max(2.0 * (n_spins as f64 / 8.0).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaOptimum {
    pub delta: f64,
    pub point: FidelityPoint,
    /// Set when the maximizer lies within `2·tol` of a bracket edge.
    pub boundary: bool,
    pub evaluations: usize,
}

/// Golden-section maximization of `F_av` over `Δ ∈ bracket`, run until the
/// interval is shorter than `tol`. The returned point carries a refinement
/// error estimate.
pub fn find_delta_opt(
    n_spins: usize,
    bracket: (f64, f64),
    rule: GuessRule,
    tol: f64,
    quad: &FidelityQuadrature,
) -> Result<DeltaOptimum> {
    check_inputs(n_spins, quad)?;
    let (lo, hi) = bracket;
    if !(lo > 0.0) || !(hi > lo) || !hi.is_finite() {
        return Err(domain(format!("invalid bracket ({lo}, {hi})")));
    }
    if !(tol > 0.0) {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    let mut evaluations = 0;
    let (delta, _) = golden_section_max(lo, hi, tol, |d| {
        evaluations += 1;
        fidelity_value(n_spins, &PointerModel::new(d)?, rule, quad)
    })?;
    let point = average_fidelity(n_spins, &PointerModel::new(delta)?, rule, quad)?;
    Ok(DeltaOptimum {
        delta,
        point,
        boundary: delta - lo < 2.0 * tol || hi - delta < 2.0 * tol,
        evaluations: evaluations + 1,
    })
}

/// Golden-section search for the maximum of `f` on `[lo, hi]`; returns the
/// final midpoint and the best value seen at an interior probe.
pub fn golden_section_max(mut lo: f64, mut hi: f64, tol: f64, mut f: impl FnMut(f64) -> Result<f64>) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo >= tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok((0.5 * (lo + hi), f1.max(f2)))
}

/// Fraction of outcomes in the upper hemisphere `θ < π/2` for input `|↑⟩^⊗N`,
/// integrated on a grid that ends at the equator.
pub fn upper_hemisphere_probability(n_spins: usize, model: &PointerModel, quad: &FidelityQuadrature) -> Result<f64> {
    check_inputs(n_spins, quad)?;
    let r_max = build_adaptive_field(n_spins, model, &quad.momentum, &quad.outcome)?.grid().r_max();
    let grid = OutcomeGrid::shell_cap(&quad.outcome, 0.0, r_max, 0.5 * PI, model.spread())?;
    Ok(build_amplitude_field(n_spins, model, &quad.momentum, &grid)?.total_probability())
}
