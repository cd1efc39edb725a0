use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use spinpointer::asymptotics::SpreadRule;
use spinpointer::estimation::GuessRule;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GuessRuleArg {
    PlusR,
    MinusR,
    BestOfAxis,
}

impl From<GuessRuleArg> for GuessRule {
    fn from(g: GuessRuleArg) -> Self {
        match g {
            GuessRuleArg::PlusR => GuessRule::PlusR,
            GuessRuleArg::MinusR => GuessRule::MinusR,
            GuessRuleArg::BestOfAxis => GuessRule::BestOfAxis,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpreadRuleArg {
    Formula,
    Optimize,
}

impl From<SpreadRuleArg> for SpreadRule {
    fn from(s: SpreadRuleArg) -> Self {
        match s {
            SpreadRuleArg::Formula => SpreadRule::Formula,
            SpreadRuleArg::Optimize => SpreadRule::Optimize,
        }
    }
}

/// Flags shared by every subcommand. Each one overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON config file; flags given on the command line take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Spin counts, comma separated
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Explicit spreads, comma separated (overrides the min/max/steps range)
    #[arg(long, value_delimiter = ',')]
    pub delta: Option<Vec<f64>>,
    #[arg(long)]
    pub delta_min: Option<f64>,
    #[arg(long)]
    pub delta_max: Option<f64>,
    /// Number of evenly spaced spreads from delta-min to delta-max inclusive
    #[arg(long)]
    pub delta_steps: Option<usize>,
    #[arg(long, value_enum)]
    pub guess_rule: Option<GuessRuleArg>,
    /// Radial outcome nodes
    #[arg(long)]
    pub nodes_r: Option<usize>,
    /// Polar outcome nodes
    #[arg(long)]
    pub nodes_theta: Option<usize>,
    #[arg(long)]
    pub nodes_p_radial: Option<usize>,
    #[arg(long)]
    pub nodes_p_polar: Option<usize>,
    #[arg(long)]
    pub nodes_p_azimuthal: Option<usize>,
    /// Momentum cutoff in units of the momentum standard deviation 1/(2Δ)
    #[arg(long)]
    pub p_cutoff_sigmas: Option<f64>,
    /// Accepted refinement disagreement; convergence fails beyond 10x this
    #[arg(long)]
    pub tol: Option<f64>,
    /// Interval length at which the golden-section search stops
    #[arg(long)]
    pub search_tol: Option<f64>,
    /// How `asympt` picks the spread for each N
    #[arg(long, value_enum)]
    pub spread_rule: Option<SpreadRuleArg>,
    /// Add rows at Δ = √(N/8) to `disturbance` output
    #[arg(long)]
    pub mark_delta_opt: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads, 0 for one per core
    #[arg(long, env = "SPINPOINTER_WORKERS")]
    pub workers: Option<usize>,
}

/// Everything that determines a run's output. Written back verbatim (fully
/// resolved) into each output header so that it can be fed back via `--config`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guess_rule: Option<GuessRule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes_r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes_theta: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes_p_radial: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes_p_polar: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes_p_azimuthal: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_cutoff_sigmas: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spread_rule: Option<SpreadRule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mark_delta_opt: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    /// Not echoed: output location does not affect results.
    #[serde(default, skip_serializing)]
    pub out: Option<PathBuf>,
    /// Not echoed: results are identical for any worker count.
    #[serde(default, skip_serializing)]
    pub workers: Option<usize>,
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Config file (if any) overlaid with the flags that were given.
    pub fn from_args(command: &str, args: &CommonArgs) -> Result<Self, CliError> {
        let mut cfg = match &args.config {
            Some(path) => Self::from_file(path)?,
            None => Self::default(),
        };
        if let Some(c) = &cfg.command {
            if c != command {
                return Err(CliError::Config(format!("config is for command {c:?}, not {command:?}")));
            }
        }
        cfg.command = Some(command.to_string());
        macro_rules! overlay {
            ($($field:ident),*) => {$(
                if let Some(v) = args.$field.clone() {
                    cfg.$field = Some(v.into());
                }
            )*};
        }
        overlay!(
            n,
            delta,
            delta_min,
            delta_max,
            delta_steps,
            guess_rule,
            nodes_r,
            nodes_theta,
            nodes_p_radial,
            nodes_p_polar,
            nodes_p_azimuthal,
            p_cutoff_sigmas,
            tol,
            search_tol,
            spread_rule,
            format,
            out,
            workers
        );
        if args.mark_delta_opt {
            cfg.mark_delta_opt = Some(true);
        }
        Ok(cfg)
    }

    /// Spreads from the explicit list or the inclusive linear range.
    pub fn spreads(&self) -> Result<Vec<f64>, CliError> {
        if let Some(list) = &self.delta {
            return Ok(list.clone());
        }
        match (self.delta_min, self.delta_max, self.delta_steps) {
            (Some(lo), Some(hi), Some(steps)) => linear_range(lo, hi, steps),
            _ => Err(CliError::Config("spreads need --delta or all of --delta-min/--delta-max/--delta-steps".into())),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

pub fn linear_range(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    match steps {
        0 => Ok(Vec::new()),
        1 => Ok(vec![lo]),
        _ if hi.partial_cmp(&lo) != Some(std::cmp::Ordering::Greater) => Err(CliError::Config(format!("delta range ({lo}, {hi}) is empty"))),
        _ => Ok((0..steps).map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("spinpointer-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.json");
        std::fs::write(&path, r#"{"n":[3],"tol":1e-3,"nodes_r":120}"#).unwrap();
        let args = CommonArgs {
            config: Some(path),
            n: Some(vec![2]),
            ..Default::default()
        };
        let cfg = RunConfig::from_args("sweep", &args).unwrap();
        assert_eq!(cfg.n, Some(vec![2]));
        assert_eq!(cfg.tol, Some(1e-3));
        assert_eq!(cfg.nodes_r, Some(120));
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"spin_count":3}"#).is_err());
    }

    #[test]
    fn echo_round_trips() {
        let cfg = RunConfig {
            command: Some("sweep".into()),
            n: Some(vec![1, 2]),
            guess_rule: Some(GuessRule::BestOfAxis),
            tol: Some(1e-4),
            workers: Some(3),
            ..Default::default()
        };
        let back: RunConfig = serde_json::from_str(&cfg.to_json()).unwrap();
        assert_eq!(back, RunConfig { workers: None, ..cfg });
    }

    #[test]
    fn ranges() {
        assert_eq!(linear_range(0.5, 1.0, 3).unwrap(), vec![0.5, 0.75, 1.0]);
        assert!(linear_range(1.0, 0.5, 3).is_err());
        assert!(linear_range(0.5, 1.0, 0).unwrap().is_empty());
    }
}
