//! Invariant suite behind `spinpointer validate`.

use spinpointer::asymptotics::{fidelity_lower_bound, kraus_diagonal_element};
use spinpointer::disturbance::{bloch_post_numeric, disturbance_exact, disturbance_oracle_full};
use spinpointer::estimation::{average_fidelity, strong_coupling_limit, upper_hemisphere_probability, GuessRule};
use spinpointer::pointer::{build_adaptive_field, outcome_density, PointerModel};
use spinpointer::spin::{dicke_expand, full_tensor_rotation_oracle, rotated_up_amplitudes, symmetric_projection};

use crate::commands::{asymptotic_quadrature, disturbance_quadrature, fidelity_quadrature, momentum_quadrature, outcome_spec, Outcome};
use crate::config::RunConfig;
use crate::output::Table;
use crate::CliError;

/// One checked invariant: the worst measured value against its threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub measured: f64,
    pub threshold: f64,
    /// `measured <= threshold` when true, `measured >= threshold` otherwise.
    pub upper: bool,
}

impl Check {
    pub fn passed(&self) -> bool {
        if self.upper {
            self.measured <= self.threshold
        } else {
            self.measured >= self.threshold
        }
    }
}

fn model(d: f64) -> Result<PointerModel, CliError> {
    Ok(PointerModel::new(d)?)
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(f64::MIN, f64::max)
}

pub fn checks(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let fq = fidelity_quadrature(cfg);
    let dq = disturbance_quadrature(cfg);
    let aq = asymptotic_quadrature(cfg);
    let mq = momentum_quadrature(cfg);
    let spec = outcome_spec(cfg);
    let mut out = Vec::new();

    let mut rotation = 0.0f64;
    for n in 1..=4 {
        for k in 0..8 {
            let t = k as f64;
            let p = [1.3 * (0.7 * t).sin(), 0.9 * (1.1 * t).cos() - 0.2, 2.1 * (0.4 * t + 0.3).sin()];
            let (a, b) = rotated_up_amplitudes(p);
            let dicke = dicke_expand(a, b, n)?;
            let tensor = symmetric_projection(&full_tensor_rotation_oracle(p, n)?, n)?;
            for (x, y) in dicke.amplitudes().iter().zip(tensor.amplitudes()) {
                rotation = rotation.max((x - y).norm());
            }
        }
    }
    out.push(Check { name: "dicke_matches_full_tensor", measured: rotation, threshold: 1e-10, upper: true });

    let mut oracle = 0.0f64;
    for n in 1..=3 {
        for d in [0.3, 1.0] {
            let fast = disturbance_exact(n, &model(d)?, &dq)?.d_exact;
            let slow = disturbance_oracle_full(n, &model(d)?, &dq)?;
            oracle = oracle.max((fast - slow).abs());
        }
    }
    out.push(Check { name: "disturbance_matches_full_tensor", measured: oracle, threshold: 1e-8, upper: true });

    let mut completeness = 0.0f64;
    for n in 1..=6 {
        for d in [0.05, 0.3, 1.0, 3.0] {
            let field = build_adaptive_field(n, &model(d)?, &mq, &spec)?;
            completeness = completeness.max((field.total_probability() - 1.0).abs());
        }
    }
    out.push(Check { name: "kraus_completeness", measured: completeness, threshold: 1e-4, upper: true });

    let mut hemisphere = f64::MAX;
    for n in 1..=4 {
        for d in [0.2, 0.5, 0.9] {
            hemisphere = hemisphere.min(upper_hemisphere_probability(n, &model(d)?, &fq)?);
        }
    }
    out.push(Check { name: "upper_hemisphere_bias", measured: hemisphere, threshold: 0.5, upper: false });

    let m = model(0.5)?;
    let mut pointwise = f64::MIN;
    for i in 0..20 {
        let r = 0.1 + 0.12 * i as f64;
        let theta = 0.05 + 0.155 * i as f64;
        let bound = kraus_diagonal_element(r, theta, 2, &m, &mq)?.norm_sqr();
        pointwise = pointwise.max(bound - outcome_density(r, theta, 2, &m, &mq)?);
    }
    out.push(Check { name: "projection_bound_pointwise", measured: pointwise, threshold: 1e-6, upper: true });

    let mut dominance = f64::MIN;
    for n in 2..=4 {
        let m = model(0.7)?;
        let lb = fidelity_lower_bound(n, &m, &aq)?;
        let fav = average_fidelity(n, &m, GuessRule::PlusR, &fq)?;
        dominance = dominance.max(lb.f_lower - fav.fidelity - lb.error_estimate - fav.error_estimate);
    }
    out.push(Check { name: "lower_bound_below_average_fidelity", measured: dominance, threshold: 0.0, upper: true });

    let mut bloch = 0.0f64;
    let mut transverse = 0.0f64;
    for n in 1..=10 {
        for d in [0.3, 1.0, 3.0] {
            let b = bloch_post_numeric(n, &model(d)?, &dq)?;
            bloch = bloch.max((b.sz_post_closed - b.sz_post_numeric).abs());
            transverse = transverse.max(b.sx_post.abs()).max(b.sy_post.abs());
        }
    }
    out.push(Check { name: "bloch_closed_matches_numeric", measured: bloch, threshold: 1e-6, upper: true });
    out.push(Check { name: "bloch_transverse_zero", measured: transverse, threshold: 1e-8, upper: true });

    let mut endpoint = 0.0f64;
    for n in 1..=4 {
        let p = average_fidelity(n, &model(0.01)?, GuessRule::PlusR, &fq)?;
        endpoint = endpoint.max((p.fidelity - strong_coupling_limit(n)).abs());
    }
    out.push(Check { name: "strong_coupling_endpoint", measured: endpoint, threshold: 0.01, upper: true });

    // Refinement acceptance: every shipped default must reproduce itself under
    // one refinement step within its own tolerance.
    let mut fidelity_refinement = 0.0f64;
    for n in 1..=4 {
        for d in [0.05, 0.5, 2.0, 10.0] {
            fidelity_refinement = fidelity_refinement.max(average_fidelity(n, &model(d)?, GuessRule::PlusR, &fq)?.error_estimate);
        }
    }
    out.push(Check { name: "fidelity_refinement", measured: fidelity_refinement, threshold: fq.tolerance, upper: true });
    let dist_refinement = worst(
        [(1, 0.005), (3, 0.3), (10, 1.0), (200, 5.0)]
            .iter()
            .map(|&(n, d)| PointerModel::new(d).and_then(|m| disturbance_exact(n, &m, &dq)).map(|p| p.error_estimate))
            .collect::<Result<Vec<_>, _>>()?,
    );
    out.push(Check { name: "disturbance_refinement", measured: dist_refinement, threshold: dq.tolerance, upper: true });
    let asym_refinement = worst(
        [(4, 0.7), (150, 150f64.sqrt() / 8f64.sqrt())]
            .iter()
            .map(|&(n, d)| PointerModel::new(d).and_then(|m| fidelity_lower_bound(n, &m, &aq)).map(|p| p.error_estimate))
            .collect::<Result<Vec<_>, _>>()?,
    );
    out.push(Check { name: "lower_bound_refinement", measured: asym_refinement, threshold: aq.tolerance, upper: true });
    Ok(out)
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let checks = checks(cfg)?;
    let mut table = Table::new(&["check", "passed", "measured", "threshold"]);
    for c in &checks {
        table.push(vec![c.name.into(), c.passed().into(), c.measured.into(), c.threshold.into()]);
    }
    Ok(Outcome { table, failures: Vec::new() })
}

/// Names of failing checks in a rendered validation table.
pub fn failing(table: &Table) -> Vec<String> {
    table
        .rows
        .iter()
        .filter(|r| r[1] == crate::output::Cell::Bool(false))
        .map(|r| match &r[0] {
            crate::output::Cell::Text(s) => s.clone(),
            other => format!("{other:?}"),
        })
        .collect()
}
