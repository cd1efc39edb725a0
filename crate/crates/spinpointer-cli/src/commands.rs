//! The subcommands. Each turns a resolved [`RunConfig`] into a [`Table`].

use rayon::prelude::*;
use spinpointer::asymptotics::{delta_opt_formula, epsilon_curve, AsymptoticQuadrature, SpreadRule};
use spinpointer::disturbance::{
    bloch_post_numeric, disturbance_exact, disturbance_series_copt, min_disturbance, DisturbanceQuadrature,
};
use spinpointer::estimation::{
    default_bracket, find_delta_opt, optimal_fidelity, strong_coupling_limit, sweep_delta, validate_spreads, FidelityQuadrature,
    GuessRule,
};
use spinpointer::pointer::{MomentumQuadrature, OutcomeSpec, PointerModel};

use crate::config::{Format, RunConfig};
use crate::output::Table;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Sweep,
    Optimize,
    Disturbance,
    Bloch,
    Asympt,
    Reference,
    Validate,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sweep => "sweep",
            Command::Optimize => "optimize",
            Command::Disturbance => "disturbance",
            Command::Bloch => "bloch",
            Command::Asympt => "asympt",
            Command::Reference => "reference",
            Command::Validate => "validate",
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::Optimize | Command::Reference | Command::Validate => Format::Json,
            _ => Format::Csv,
        }
    }
}

/// Result of one command: the table plus points that failed without aborting.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub table: Table,
    pub failures: Vec<String>,
}

impl Outcome {
    fn complete(table: Table) -> Self {
        Self { table, failures: Vec::new() }
    }
}

/// Fills every unset parameter with the command's default, so the echoed
/// config spells out the whole run.
pub fn resolve(command: Command, mut cfg: RunConfig) -> RunConfig {
    let momentum = MomentumQuadrature::default();
    let outcome = OutcomeSpec::default();
    let disturbance = DisturbanceQuadrature::default();
    let set = |slot: &mut Option<usize>, v: usize| {
        slot.get_or_insert(v);
    };
    cfg.format.get_or_insert(command.default_format());
    let range = |cfg: &mut RunConfig| {
        if cfg.delta.is_none() {
            cfg.delta_min.get_or_insert(0.05);
            cfg.delta_max.get_or_insert(2.0);
            cfg.delta_steps.get_or_insert(40);
        }
    };
    match command {
        Command::Sweep | Command::Optimize | Command::Asympt => {
            set(&mut cfg.nodes_r, outcome.radial_nodes);
            set(&mut cfg.nodes_theta, outcome.polar_nodes);
            set(&mut cfg.nodes_p_radial, momentum.radial_nodes);
            set(&mut cfg.nodes_p_polar, momentum.polar_nodes);
            set(&mut cfg.nodes_p_azimuthal, momentum.azimuthal_nodes);
            cfg.p_cutoff_sigmas.get_or_insert(momentum.radial_cutoff_sigmas);
        }
        Command::Disturbance | Command::Bloch => {
            set(&mut cfg.nodes_p_radial, disturbance.radial_nodes);
            set(&mut cfg.nodes_p_polar, disturbance.polar_nodes);
            set(&mut cfg.nodes_p_azimuthal, disturbance.azimuthal_nodes);
            cfg.p_cutoff_sigmas.get_or_insert(disturbance.radial_cutoff_sigmas);
            cfg.tol.get_or_insert(disturbance.tolerance);
        }
        Command::Reference | Command::Validate => {}
    }
    match command {
        Command::Sweep => {
            cfg.n.get_or_insert_with(|| vec![1, 2, 3, 4]);
            cfg.guess_rule.get_or_insert(GuessRule::PlusR);
            cfg.tol.get_or_insert(FidelityQuadrature::default().tolerance);
            range(&mut cfg);
        }
        Command::Optimize => {
            cfg.n.get_or_insert_with(|| vec![1, 2, 3, 4]);
            cfg.guess_rule.get_or_insert(GuessRule::PlusR);
            cfg.tol.get_or_insert(FidelityQuadrature::default().tolerance);
            cfg.search_tol.get_or_insert(1e-3);
        }
        Command::Disturbance => {
            cfg.n.get_or_insert_with(|| vec![1, 2, 3]);
            cfg.mark_delta_opt.get_or_insert(false);
            range(&mut cfg);
        }
        Command::Bloch => {
            cfg.n.get_or_insert_with(|| vec![100]);
        }
        Command::Asympt => {
            cfg.n.get_or_insert_with(|| (150..=400).step_by(50).collect());
            cfg.spread_rule.get_or_insert(SpreadRule::Formula);
            cfg.tol.get_or_insert(AsymptoticQuadrature::default().tolerance);
        }
        Command::Reference => {
            cfg.n.get_or_insert_with(|| (1..=10).collect());
        }
        Command::Validate => {}
    }
    cfg
}

fn spins(cfg: &RunConfig) -> Result<Vec<usize>, CliError> {
    let ns = cfg.n.clone().unwrap_or_default();
    if ns.is_empty() {
        return Err(CliError::Config("no spin counts given".into()));
    }
    if ns.contains(&0) {
        return Err(CliError::Config("spin counts must be at least 1".into()));
    }
    Ok(ns)
}

fn spreads(cfg: &RunConfig) -> Result<Vec<f64>, CliError> {
    let list = cfg.spreads()?;
    validate_spreads(&list)?;
    Ok(list)
}

pub fn momentum_quadrature(cfg: &RunConfig) -> MomentumQuadrature {
    let d = MomentumQuadrature::default();
    MomentumQuadrature {
        radial_nodes: cfg.nodes_p_radial.unwrap_or(d.radial_nodes),
        radial_cutoff_sigmas: cfg.p_cutoff_sigmas.unwrap_or(d.radial_cutoff_sigmas),
        polar_nodes: cfg.nodes_p_polar.unwrap_or(d.polar_nodes),
        azimuthal_nodes: cfg.nodes_p_azimuthal.unwrap_or(d.azimuthal_nodes),
    }
}

pub fn outcome_spec(cfg: &RunConfig) -> OutcomeSpec {
    let d = OutcomeSpec::default();
    OutcomeSpec {
        radial_nodes: cfg.nodes_r.unwrap_or(d.radial_nodes),
        polar_nodes: cfg.nodes_theta.unwrap_or(d.polar_nodes),
    }
}

pub fn fidelity_quadrature(cfg: &RunConfig) -> FidelityQuadrature {
    FidelityQuadrature {
        momentum: momentum_quadrature(cfg),
        outcome: outcome_spec(cfg),
        tolerance: cfg.tol.unwrap_or(FidelityQuadrature::default().tolerance),
    }
}

pub fn disturbance_quadrature(cfg: &RunConfig) -> DisturbanceQuadrature {
    let d = DisturbanceQuadrature::default();
    DisturbanceQuadrature {
        radial_nodes: cfg.nodes_p_radial.unwrap_or(d.radial_nodes),
        polar_nodes: cfg.nodes_p_polar.unwrap_or(d.polar_nodes),
        azimuthal_nodes: cfg.nodes_p_azimuthal.unwrap_or(d.azimuthal_nodes),
        radial_cutoff_sigmas: cfg.p_cutoff_sigmas.unwrap_or(d.radial_cutoff_sigmas),
        tolerance: cfg.tol.unwrap_or(d.tolerance),
    }
}

pub fn asymptotic_quadrature(cfg: &RunConfig) -> AsymptoticQuadrature {
    AsymptoticQuadrature {
        momentum: momentum_quadrature(cfg),
        outcome: outcome_spec(cfg),
        tolerance: cfg.tol.unwrap_or(AsymptoticQuadrature::default().tolerance),
        ..AsymptoticQuadrature::default()
    }
}

pub fn execute(command: Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match command {
        Command::Sweep => sweep(cfg),
        Command::Optimize => optimize(cfg),
        Command::Disturbance => disturbance(cfg),
        Command::Bloch => bloch(cfg),
        Command::Asympt => asympt(cfg),
        Command::Reference => reference(cfg),
        Command::Validate => crate::validate::run(cfg),
    }
}

fn guess_label(requested: GuessRule, resolved: GuessRule) -> String {
    match requested {
        GuessRule::BestOfAxis => format!("best_of_axis:{resolved}"),
        other => other.to_string(),
    }
}

fn sweep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ns = spins(cfg)?;
    let deltas = spreads(cfg)?;
    let quad = fidelity_quadrature(cfg);
    quad.validate()?;
    let rule = cfg.guess_rule.unwrap_or(GuessRule::PlusR);
    let mut table = Table::new(&[
        "n_spins",
        "delta",
        "f_avg",
        "f_opt",
        "guess_rule",
        "err_estimate",
        "nodes_r",
        "nodes_theta",
        "nodes_p_radial",
        "nodes_p_polar",
        "nodes_p_azimuthal",
    ]);
    let mut failures = Vec::new();
    for n in ns {
        let result = sweep_delta(n, &deltas, rule, &quad)?;
        for p in result.points {
            let q = p.quadrature;
            table.push(vec![
                n.into(),
                p.spread.into(),
                p.fidelity.into(),
                optimal_fidelity(n).into(),
                guess_label(rule, p.resolved_rule).into(),
                p.error_estimate.into(),
                q.nodes_r.into(),
                q.nodes_theta.into(),
                q.nodes_p_radial.into(),
                q.nodes_p_polar.into(),
                q.nodes_p_azimuthal.into(),
            ]);
        }
        failures.extend(result.failures.into_iter().map(|(d, e)| format!("N={n}, Δ={d}: {e}")));
    }
    Ok(Outcome { table, failures })
}

fn optimize(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ns = spins(cfg)?;
    let quad = fidelity_quadrature(cfg);
    quad.validate()?;
    let rule = cfg.guess_rule.unwrap_or(GuessRule::PlusR);
    let search_tol = cfg.search_tol.unwrap_or(1e-3);
    let mut table = Table::new(&["n_spins", "delta_opt", "f_max", "f_opt", "gap", "boundary_flag"]);
    for n in ns {
        let (lo, hi) = default_bracket(n);
        let bracket = (cfg.delta_min.unwrap_or(lo), cfg.delta_max.unwrap_or(hi));
        let opt = find_delta_opt(n, bracket, rule, search_tol, &quad)?;
        let f_opt = optimal_fidelity(n);
        table.push(vec![
            n.into(),
            opt.delta.into(),
            opt.point.fidelity.into(),
            f_opt.into(),
            (f_opt - opt.point.fidelity).into(),
            opt.boundary.into(),
        ]);
    }
    Ok(Outcome::complete(table))
}

fn disturbance(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ns = spins(cfg)?;
    let deltas = spreads(cfg)?;
    let quad = disturbance_quadrature(cfg);
    quad.validate()?;
    let mark = cfg.mark_delta_opt.unwrap_or(false);
    let mut columns = vec!["n_spins", "delta", "d_exact", "d_lowest_order", "d_min", "err_estimate"];
    if mark {
        columns.push("at_delta_opt");
    }
    let mut table = Table::new(&columns);
    for n in ns {
        let mut points: Vec<(f64, bool)> = deltas.iter().map(|&d| (d, false)).collect();
        if mark {
            let opt = delta_opt_formula(n);
            match points.iter_mut().find(|(d, _)| *d == opt) {
                Some(point) => point.1 = true,
                None => {
                    points.push((opt, true));
                    points.sort_by(|a, b| a.0.total_cmp(&b.0));
                }
            }
        }
        let rows = points
            .par_iter()
            .map(|&(d, at_opt)| disturbance_exact(n, &PointerModel::new(d)?, &quad).map(|p| (p, at_opt)))
            .collect::<Result<Vec<_>, _>>()?;
        for (p, at_opt) in rows {
            let mut row = vec![
                n.into(),
                p.spread.into(),
                p.d_exact.into(),
                p.d_lowest_order.into(),
                min_disturbance(n).into(),
                p.error_estimate.into(),
            ];
            if mark {
                row.push(at_opt.into());
            }
            table.push(row);
        }
    }
    Ok(Outcome::complete(table))
}

fn bloch(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ns = spins(cfg)?;
    let quad = disturbance_quadrature(cfg);
    quad.validate()?;
    let explicit = if cfg.delta.is_some() || cfg.delta_steps.is_some() { Some(spreads(cfg)?) } else { None };
    let mut table = Table::new(&["n_spins", "delta", "sz_initial", "sz_post_closed", "sz_post_numeric", "sx_post", "sy_post"]);
    for n in ns {
        let deltas = explicit.clone().unwrap_or_else(|| vec![delta_opt_formula(n)]);
        for d in deltas {
            let b = bloch_post_numeric(n, &PointerModel::new(d)?, &quad)?;
            table.push(vec![
                n.into(),
                d.into(),
                b.sz_initial.into(),
                b.sz_post_closed.into(),
                b.sz_post_numeric.into(),
                b.sx_post.into(),
                b.sy_post.into(),
            ]);
        }
    }
    Ok(Outcome::complete(table))
}

fn asympt(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ns = spins(cfg)?;
    let quad = asymptotic_quadrature(cfg);
    quad.validate()?;
    let rule = cfg.spread_rule.unwrap_or(SpreadRule::Formula);
    let mut table = Table::new(&["n_spins", "delta_used", "f_lower", "epsilon_n", "optimal_scaling"]);
    let mut failures = Vec::new();
    for (n, point) in epsilon_curve(&ns, rule, &quad) {
        match point {
            Ok(p) => table.push(vec![
                n.into(),
                p.spread.into(),
                p.f_lower.into(),
                p.epsilon_n.into(),
                p.optimal_scaling.into(),
            ]),
            Err(e) => failures.push(format!("N={n}: {e}")),
        }
    }
    Ok(Outcome { table, failures })
}

fn reference(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ns = spins(cfg)?;
    let mut table = Table::new(&["n_spins", "f_opt", "strong_coupling", "d_min", "delta_opt_formula", "d_series_copt"]);
    for n in ns {
        table.push(vec![
            n.into(),
            optimal_fidelity(n).into(),
            strong_coupling_limit(n).into(),
            min_disturbance(n).into(),
            delta_opt_formula(n).into(),
            disturbance_series_copt(n).into(),
        ]);
    }
    Ok(Outcome::complete(table))
}
