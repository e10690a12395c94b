//! Command-line flags, the `--config` JSON mirror and their resolution into a
//! [`RunConfig`].

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use icnls_core::{EvolveControls, ModelParams};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "icnls",
    version,
    about = "Radial numerics for the L2-critical inhomogeneous NLS"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Solve the stationary equation and write the ground state.
    Groundstate,
    /// Critical mass and best interpolation constant.
    Constants,
    /// Propagate initial data and classify the run.
    Evolve,
    /// Sample the explicit self-similar blow-up solution.
    Selfsim,
    /// Tabulate distances between chirped and plain ground states.
    Distances,
    /// Evolve self-similar data and fit blow-up rates.
    Rates,
    /// Run the full verification suite.
    Verify,
    /// Sweep mass multipliers of the ground state and report verdicts.
    Scan,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Groundstate => "groundstate",
            Command::Constants => "constants",
            Command::Evolve => "evolve",
            Command::Selfsim => "selfsim",
            Command::Distances => "distances",
            Command::Rates => "rates",
            Command::Verify => "verify",
            Command::Scan => "scan",
        }
    }
}

/// Every flag is optional; the same keys may be given in a JSON file passed
/// with `--config`, and flags win on conflict.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Options {
    /// JSON file with any of the options below.
    #[arg(long, global = true, value_name = "JSON")]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Spatial dimension N.
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Inhomogeneity exponent b.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Nonlinearity exponent; defaults to the critical value (2 - b)/N.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    /// Frequency of the stationary state.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Truncation radius.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub r_max: Option<f64>,
    /// Number of grid cells M.
    #[arg(long, global = true)]
    pub cells: Option<usize>,
    /// Initial and largest time step.
    #[arg(long, global = true)]
    pub dt0: Option<f64>,
    /// Smallest time step before the run is declared a step collapse.
    #[arg(long, global = true)]
    pub dt_min: Option<f64>,
    /// Step safety factor: dt <= c_dt / max |x|^-b |phi|^(2 sigma).
    #[arg(long, global = true)]
    pub c_dt: Option<f64>,
    /// Final time.
    #[arg(long = "tmax", visible_alias = "t-max", global = true)]
    #[serde(rename = "tmax")]
    pub t_max: Option<f64>,
    /// Blow-up is declared when the gradient norm grows by this factor.
    #[arg(long, global = true)]
    pub blowup_factor: Option<f64>,
    /// Blow-up is also declared when the width drops below this many cells (0 disables).
    #[arg(long, global = true)]
    pub resolution_cells: Option<f64>,
    /// Record observables every this many steps.
    #[arg(long, global = true)]
    pub output_stride: Option<usize>,
    /// Store a snapshot every this many recorded samples.
    #[arg(long, global = true)]
    pub snapshot_stride: Option<usize>,
    /// Tail-mass fraction that triggers the boundary warning.
    #[arg(long, global = true)]
    pub tail_limit: Option<f64>,
    /// Stop the run when the tail monitor fires.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub abort_on_tail: Option<bool>,
    /// Initial data: file:<path>, ground:<c> or selfsim:<a>.
    #[arg(long, global = true)]
    pub init: Option<String>,
    /// Directory for output artifacts.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Seed for randomized trials.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of randomized trials.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Pseudoconformal parameter a.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Sample times (comma separated).
    #[arg(long = "t", global = true, value_delimiter = ',')]
    #[serde(rename = "t")]
    pub times: Option<Vec<f64>>,
    /// Values of a for the distance table (comma separated).
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    pub a_values: Option<Vec<f64>>,
    /// Mass multipliers for the scan (comma separated).
    #[arg(long, global = true, value_delimiter = ',')]
    pub c_values: Option<Vec<f64>>,
    /// Worker threads for the scan.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

macro_rules! prefer_first {
    ($a:expr, $b:expr; $($field:ident),* $(,)?) => {
        Options { config: $a.config.or($b.config), $($field: $a.$field.or($b.$field)),* }
    };
}

impl Options {
    /// Field-wise `self` over `other`.
    pub fn or(self, other: Options) -> Options {
        prefer_first!(self, other;
            dim, b, sigma, omega, r_max, cells, dt0, dt_min, c_dt, t_max, blowup_factor,
            resolution_cells, output_stride, snapshot_stride, tail_limit, abort_on_tail, init,
            out_dir, seed, trials, a, times, a_values, c_values, threads,
        )
    }

    pub fn from_json_file(path: &Path) -> CliResult<Options> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitSpec {
    File(PathBuf),
    Ground(f64),
    SelfSimilar(f64),
}

impl std::str::FromStr for InitSpec {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let (kind, value) = s
            .split_once(':')
            .ok_or_else(|| CliError::Config(format!("init spec '{s}' lacks a ':'")))?;
        let number = |v: &str| {
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::Config(format!("init spec '{s}': bad number")))
        };
        match kind {
            "file" if !value.is_empty() => Ok(InitSpec::File(PathBuf::from(value))),
            "ground" => Ok(InitSpec::Ground(number(value)?)),
            "selfsim" => {
                let a = number(value)?;
                if a <= 0.0 {
                    return Err(CliError::Config("selfsim init needs a > 0".into()));
                }
                Ok(InitSpec::SelfSimilar(a))
            }
            _ => Err(CliError::Config(format!("unknown init spec '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub r_max: f64,
    pub cells: usize,
}

/// Fully resolved configuration of one command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub params: ModelParams,
    pub grid: GridSpec,
    pub controls: EvolveControls,
    pub init: Option<InitSpec>,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub trials: usize,
    pub a: f64,
    pub times: Vec<f64>,
    pub a_values: Vec<f64>,
    pub c_values: Vec<f64>,
    pub threads: usize,
}

pub const DEFAULT_DIM: usize = 1;
pub const DEFAULT_B: f64 = 0.5;
pub const DEFAULT_SEED: u64 = 12345;
pub const DEFAULT_TRIALS: usize = 1000;
/// Blow-up factor used by the CLI. The core default (1e3) is out of reach on
/// a fixed grid at critical mass.
pub const DEFAULT_BLOWUP_FACTOR: f64 = 15.0;

/// Grid used when no flag sets it: stationary commands resolve the ground
/// state finely, evolution commands trade resolution for speed, and
/// self-similar runs use the validated blow-up window grid.
pub fn default_grid(command: Command, init: Option<&InitSpec>, omega: f64) -> GridSpec {
    let self_similar = matches!(command, Command::Selfsim | Command::Rates)
        || matches!(init, Some(InitSpec::SelfSimilar(_)));
    if self_similar {
        GridSpec {
            r_max: 11.0 / omega,
            cells: 8192,
        }
    } else if matches!(command, Command::Evolve | Command::Scan) {
        GridSpec {
            r_max: 20.0 / omega,
            cells: 4096,
        }
    } else {
        GridSpec {
            r_max: 20.0 / omega,
            cells: 16384,
        }
    }
}

impl RunConfig {
    pub fn resolve(command: Command, flags: Options) -> CliResult<RunConfig> {
        let opts = match flags.config.clone() {
            Some(path) => flags.or(Options::from_json_file(&path)?),
            None => flags,
        };
        let dim = opts.dim.unwrap_or(DEFAULT_DIM);
        let b = opts.b.unwrap_or(DEFAULT_B);
        let sigma = opts
            .sigma
            .unwrap_or_else(|| ModelParams::critical_sigma(dim, b));
        let omega = opts.omega.unwrap_or(1.0);
        let params = ModelParams::new(dim, b, sigma, omega)?;
        let init = opts.init.as_deref().map(str::parse).transpose()?;
        if command == Command::Evolve && init.is_none() {
            return Err(CliError::Config(
                "evolve needs --init file:<path>|ground:<c>|selfsim:<a>".into(),
            ));
        }
        let fallback = default_grid(command, init.as_ref(), omega);
        let grid = GridSpec {
            r_max: opts.r_max.unwrap_or(fallback.r_max),
            cells: opts.cells.unwrap_or(fallback.cells),
        };
        if !(grid.r_max > 0.0 && grid.r_max.is_finite()) || grid.cells < 2 {
            return Err(CliError::Config("need r-max > 0 and cells >= 2".into()));
        }
        let base = EvolveControls::default();
        let controls = EvolveControls {
            dt0: opts.dt0.unwrap_or(base.dt0),
            dt_min: opts.dt_min.unwrap_or(base.dt_min),
            c_dt: opts.c_dt.unwrap_or(base.c_dt),
            t_max: opts.t_max.unwrap_or(base.t_max),
            blowup_factor: opts.blowup_factor.unwrap_or(DEFAULT_BLOWUP_FACTOR),
            resolution_cells: opts.resolution_cells.unwrap_or(base.resolution_cells),
            output_stride: opts.output_stride.unwrap_or(base.output_stride),
            tail_limit: match opts.tail_limit {
                Some(x) if x <= 0.0 => None,
                Some(x) => Some(x),
                None => base.tail_limit,
            },
            abort_on_tail: opts.abort_on_tail.unwrap_or(base.abort_on_tail),
            checkpoints: Vec::new(),
            snapshot_stride: opts.snapshot_stride.unwrap_or(0),
        };
        controls.validate()?;
        let threads = opts
            .threads
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
            .max(1);
        Ok(RunConfig {
            command,
            params,
            grid,
            controls,
            init,
            out_dir: opts.out_dir.unwrap_or_else(|| PathBuf::from(".")),
            seed: opts.seed.unwrap_or(DEFAULT_SEED),
            trials: opts.trials.unwrap_or(DEFAULT_TRIALS),
            a: opts.a.unwrap_or(1.0),
            times: opts.times.unwrap_or_else(|| vec![0.0]),
            a_values: opts.a_values.unwrap_or_else(|| vec![0.1, 0.05, 0.025]),
            c_values: opts
                .c_values
                .unwrap_or_else(|| vec![0.8, 0.9, 1.0, 1.1, 1.2]),
            threads,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("icnls").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_after_subcommand() {
        let cli = parse(&["groundstate", "--dim", "2", "--b", "1"]);
        let cfg = RunConfig::resolve(cli.command, cli.options).unwrap();
        assert_eq!(cfg.params.dim, 2);
        assert_eq!(cfg.params.sigma, 0.5);
        assert_eq!(
            cfg.grid,
            GridSpec {
                r_max: 20.0,
                cells: 16384
            }
        );
    }

    #[test]
    fn rejects_inadmissible_b() {
        let cli = parse(&["groundstate", "--dim", "2", "--b", "3"]);
        let err = RunConfig::resolve(cli.command, cli.options).unwrap_err();
        assert_eq!(err.status(), crate::error::ExitStatus::Config);
    }

    #[test]
    fn init_specs() {
        assert_eq!(
            "ground:0.9".parse::<InitSpec>().unwrap(),
            InitSpec::Ground(0.9)
        );
        assert_eq!(
            "selfsim:1".parse::<InitSpec>().unwrap(),
            InitSpec::SelfSimilar(1.0)
        );
        assert_eq!(
            "file:a.json".parse::<InitSpec>().unwrap(),
            InitSpec::File("a.json".into())
        );
        assert!("selfsim:-1".parse::<InitSpec>().is_err());
        assert!("ground".parse::<InitSpec>().is_err());
        assert!("warp:1".parse::<InitSpec>().is_err());
    }

    #[test]
    fn evolve_needs_init() {
        let cli = parse(&["evolve"]);
        assert!(RunConfig::resolve(cli.command, cli.options).is_err());
    }

    #[test]
    fn flags_override_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(
            &path,
            r#"{"dim": 3, "b": 1.0, "tmax": 4.0, "c-dt": 0.05, "a-values": [0.2]}"#,
        )
        .unwrap();
        let cli = parse(&[
            "evolve",
            "--config",
            path.to_str().unwrap(),
            "--dim",
            "2",
            "--init",
            "ground:0.9",
        ]);
        let cfg = RunConfig::resolve(cli.command, cli.options).unwrap();
        assert_eq!(cfg.params.dim, 2);
        assert_eq!(cfg.params.b, 1.0);
        assert_eq!(cfg.controls.t_max, 4.0);
        assert_eq!(cfg.controls.c_dt, 0.05);
        assert_eq!(cfg.a_values, vec![0.2]);
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, r#"{"dimension": 3}"#).unwrap();
        let cli = parse(&["constants", "--config", path.to_str().unwrap()]);
        assert!(RunConfig::resolve(cli.command, cli.options).is_err());
    }

    #[test]
    fn self_similar_runs_use_the_blowup_grid() {
        let cli = parse(&["evolve", "--init", "selfsim:1.0"]);
        let cfg = RunConfig::resolve(cli.command, cli.options).unwrap();
        assert_eq!(
            cfg.grid,
            GridSpec {
                r_max: 11.0,
                cells: 8192
            }
        );
    }
}
