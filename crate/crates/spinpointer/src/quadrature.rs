//! Gauss–Legendre rules, product rules and refinement-based convergence checks.
//!
//! Every integral in the crate is built from [`Rule1D`] values. Node generation
//! uses Newton iteration on the three-term Legendre recurrence, so any order is
//! available; rules on the reference interval are cached per order.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::error::{domain, Error, Result};

const NEWTON_MAX_ITERATIONS: usize = 30;
const NEWTON_TOLERANCE: f64 = 1e-15;

/// A one-dimensional quadrature rule on `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule1D {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    domain: (f64, f64),
}

impl Rule1D {
    /// Builds a rule from raw parts. Weights must be positive and nodes inside `[a, b]`.
    pub fn from_parts(nodes: Vec<f64>, weights: Vec<f64>, domain: (f64, f64)) -> Result<Self> {
        if nodes.len() != weights.len() || nodes.is_empty() {
            return Err(domain_err("node and weight lists must be nonempty and of equal length"));
        }
        let (a, b) = domain;
        if !(a < b) {
            return Err(domain_err(format!("invalid interval [{a}, {b}]")));
        }
        if weights.iter().any(|&w| !(w > 0.0)) || nodes.iter().any(|&x| x < a || x > b) {
            return Err(domain_err("weights must be positive and nodes inside the interval"));
        }
        Ok(Self { nodes, weights, domain })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Iterates over `(node, weight)` pairs in ascending node order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.iter().map(|(x, w)| w * f(x)).sum()
    }
}

fn domain_err(msg: impl Into<String>) -> Error {
    domain(msg)
}

/// Evaluates `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

type ReferenceRule = Arc<(Vec<f64>, Vec<f64>)>;

fn reference_cache() -> &'static Mutex<HashMap<usize, ReferenceRule>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, ReferenceRule>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Ascending Gauss–Legendre nodes and weights on `[-1, 1]`.
fn reference_rule(n: usize) -> Result<ReferenceRule> {
    if let Some(rule) = reference_cache().lock().expect("rule cache poisoned").get(&n) {
        return Ok(Arc::clone(rule));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi's initial guess for the i-th largest root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITERATIONS {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= NEWTON_TOLERANCE {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Numeric {
                location: format!("Gauss-Legendre root {i} of order {n}"),
            });
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    let rule = Arc::new((nodes, weights));
    reference_cache()
        .lock()
        .expect("rule cache poisoned")
        .insert(n, Arc::clone(&rule));
    Ok(rule)
}

/// The `n`-point Gauss–Legendre rule mapped affinely onto `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<Rule1D> {
    if n == 0 {
        return Err(domain_err("Gauss-Legendre rule needs at least one node"));
    }
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(domain_err(format!("invalid interval [{a}, {b}]")));
    }
    let reference = reference_rule(n)?;
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let nodes = reference.0.iter().map(|&t| mid + half * t).collect();
    let weights = reference.1.iter().map(|&w| half * w).collect();
    Ok(Rule1D { nodes, weights, domain: (a, b) })
}

/// `panels` equal subintervals of `[a, b]`, each carrying an `per_panel`-point rule.
pub fn composite_gauss_legendre(panels: usize, per_panel: usize, a: f64, b: f64) -> Result<Rule1D> {
    if panels == 0 {
        return Err(domain_err("composite rule needs at least one panel"));
    }
    if !(a < b) {
        return Err(domain_err(format!("invalid interval [{a}, {b}]")));
    }
    let width = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * per_panel);
    let mut weights = Vec::with_capacity(panels * per_panel);
    for j in 0..panels {
        let lo = a + width * j as f64;
        let hi = if j + 1 == panels { b } else { lo + width };
        let panel = gauss_legendre(per_panel, lo, hi)?;
        nodes.extend_from_slice(panel.nodes());
        weights.extend_from_slice(panel.weights());
    }
    Ok(Rule1D { nodes, weights, domain: (a, b) })
}

/// Periodic trapezoid rule with `n` equally spaced nodes on `[a, b)`, offset by half a step.
pub fn periodic_trapezoid(n: usize, a: f64, b: f64) -> Result<Rule1D> {
    if n == 0 || !(a < b) {
        return Err(domain_err("periodic trapezoid needs n >= 1 and a < b"));
    }
    let h = (b - a) / n as f64;
    let nodes = (0..n).map(|j| a + h * (j as f64 + 0.5)).collect();
    Ok(Rule1D { nodes, weights: vec![h; n], domain: (a, b) })
}

/// Grows a node count by the refinement factor 1.5, rounding up.
pub fn refine_count(n: usize) -> usize {
    (3 * n).div_ceil(2)
}

/// A quadrature configuration that can produce its refined counterpart.
pub trait Refine: Sized {
    /// The same configuration with every node count scaled by 1.5.
    fn refined(&self) -> Self;
}

/// Outcome of evaluating an integral at base and refined resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub value: f64,
    pub refined_value: f64,
    pub abs_diff: f64,
    pub tolerance: f64,
    pub accepted: bool,
}

impl ConvergenceReport {
    pub fn new(value: f64, refined_value: f64, tolerance: f64) -> Self {
        let abs_diff = (refined_value - value).abs();
        Self {
            value,
            refined_value,
            abs_diff,
            tolerance,
            accepted: abs_diff <= tolerance,
        }
    }
}

/// Evaluates `integral` at `base` and at `base.refined()` and compares.
///
/// Rejection is reported through [`ConvergenceReport::accepted`], not as an error;
/// errors come only from the integrand itself.
pub fn integrate_with_refinement<S, F>(base: &S, tol: f64, mut integral: F) -> Result<ConvergenceReport>
where
    S: Refine,
    F: FnMut(&S) -> Result<f64>,
{
    if !(tol > 0.0) {
        return Err(domain_err(format!("tolerance must be positive, got {tol}")));
    }
    let value = integral(base)?;
    let refined_value = integral(&base.refined())?;
    Ok(ConvergenceReport::new(value, refined_value, tol))
}

/// One axis of a tensor-product Gauss–Legendre rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub nodes: usize,
    pub lower: f64,
    pub upper: f64,
}

/// Tensor product of Gauss–Legendre rules over a box.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductRule {
    pub axes: Vec<Axis>,
}

impl ProductRule {
    pub fn new(axes: Vec<Axis>) -> Self {
        Self { axes }
    }

    /// Sums `f` over every node of the product grid in lexicographic order.
    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> Result<f64> {
        let rules = self
            .axes
            .iter()
            .map(|ax| gauss_legendre(ax.nodes, ax.lower, ax.upper))
            .collect::<Result<Vec<_>>>()?;
        let dims = rules.len();
        let mut index = vec![0usize; dims];
        let mut point = vec![0.0; dims];
        let mut total = 0.0;
        loop {
            let mut weight = 1.0;
            for (d, rule) in rules.iter().enumerate() {
                point[d] = rule.nodes()[index[d]];
                weight *= rule.weights()[index[d]];
            }
            let value = f(&point);
            if !value.is_finite() {
                return Err(Error::Numeric {
                    location: format!("product-rule node {point:?}"),
                });
            }
            total += weight * value;
            // Odometer increment, last axis fastest.
            let mut d = dims;
            loop {
                if d == 0 {
                    return Ok(total);
                }
                d -= 1;
                index[d] += 1;
                if index[d] < rules[d].len() {
                    break;
                }
                index[d] = 0;
            }
        }
    }
}

impl Refine for ProductRule {
    fn refined(&self) -> Self {
        Self {
            axes: self
                .axes
                .iter()
                .map(|ax| Axis { nodes: refine_count(ax.nodes), ..*ax })
                .collect(),
        }
    }
}
