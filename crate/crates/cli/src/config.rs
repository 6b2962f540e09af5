//! Command-line flags, the optional flat TOML config file, and their merge
//! into a validated [`RunConfig`].

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use filcol_core::integrator::{IntegrationConfig, DEFAULT_EPS_R, DEFAULT_EPS_W};
use filcol_core::{FullState, Params, ReducedState, Renaming};

use crate::error::{CliError, CliResult};
use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "filcol", version, about = "Collision analysis for a coaxial pair of vortex filaments")]
pub struct Cli {
    /// Flat TOML file of `flag_name = value` pairs; flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the motion started from one initial state.
    Classify {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Integrate one initial state and report the collision outcome.
    Simulate {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        integration: IntegrationArgs,
        /// Integrate the four-dimensional system instead of the reduced one.
        #[arg(long)]
        full: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Critical circulation ratio γ*(α).
    GammaStar {
        #[arg(long)]
        alpha: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Separatrix angle θ* for 1 < γ < γ* and H0 > 0.
    ThetaStar {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        h0: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Classify every node of a (θ0, W0) grid.
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        integration: IntegrationArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the verification battery and emit a JSON report.
    Verify {
        #[arg(long)]
        alpha: Option<f64>,
        /// Comma-separated check names; an empty value selects none.
        #[arg(long)]
        checks: Option<String>,
        /// Random states per sampled check.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Default, Args)]
pub struct ParamArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Circulation ratio; values below 1 are normalized by renaming the filaments.
    #[arg(long)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Default, Args)]
pub struct StateArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub theta0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub w0: Option<f64>,
    #[arg(long)]
    pub r1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub z1: Option<f64>,
    #[arg(long)]
    pub r2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub z2: Option<f64>,
}

#[derive(Debug, Default, Args)]
pub struct IntegrationArgs {
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub max_steps: Option<u64>,
    #[arg(long)]
    pub h_init: Option<f64>,
    #[arg(long)]
    pub h_min: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub eps_w: Option<f64>,
    #[arg(long)]
    pub eps_r: Option<f64>,
}

#[derive(Debug, Default, Args)]
pub struct GridArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub theta_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub w_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub w_max: Option<f64>,
    #[arg(long)]
    pub n_theta: Option<usize>,
    #[arg(long)]
    pub n_w: Option<usize>,
    /// Also run the integration oracle on every node and record agreement.
    #[arg(long)]
    pub with_oracle: bool,
}

#[derive(Debug, Default, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file (written atomically); standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Classify,
    Simulate,
    GammaStar,
    ThetaStar,
    Sweep,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Initial {
    Reduced(ReducedState),
    Full(FullState),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub theta_range: (f64, f64),
    pub w_range: (f64, f64),
    pub n_theta: usize,
    pub n_w: usize,
}

impl Grid {
    fn axis(range: (f64, f64), n: usize, i: usize) -> f64 {
        range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64
    }

    /// Nodes in row-major order (θ0 outer, W0 inner).
    pub fn nodes(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.n_theta * self.n_w);
        for i in 0..self.n_theta {
            for j in 0..self.n_w {
                out.push((Self::axis(self.theta_range, self.n_theta, i), Self::axis(self.w_range, self.n_w, j)));
            }
        }
        out
    }
}

/// Fully resolved and validated settings for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    /// Normalized parameters (`γ ≥ 1`) and how the input was renamed.
    pub params: Option<(Params, Renaming)>,
    pub alpha: f64,
    pub initial: Option<Initial>,
    pub grid: Option<Grid>,
    pub integration: IntegrationConfig,
    pub t_end: f64,
    pub eps_w: f64,
    pub eps_r: f64,
    pub h0: Option<f64>,
    pub full_system: bool,
    pub with_oracle: bool,
    /// `None` runs every check.
    pub checks: Option<Vec<String>>,
    pub samples: usize,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

const KNOWN_KEYS: &[&str] = &[
    "alpha", "gamma", "theta0", "w0", "r1", "z1", "r2", "z2", "rel_tol", "abs_tol", "max_steps", "h_init", "h_min",
    "t_end", "eps_w", "eps_r", "theta_min", "theta_max", "w_min", "w_max", "n_theta", "n_w", "with_oracle", "h0",
    "full", "checks", "samples", "seed", "format", "output",
];

/// Values from the config file, looked up when a flag is absent.
#[derive(Debug, Default)]
pub struct FileValues(toml::Table);

impl FileValues {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let table: toml::Table = text.parse().map_err(|e| CliError::config(format!("config file: {e}")))?;
        for (k, v) in &table {
            if !KNOWN_KEYS.contains(&k.as_str()) {
                return Err(CliError::config(format!("config file: unknown key {k:?}")));
            }
            if v.is_table() || v.is_array() {
                return Err(CliError::config(format!("config file: key {k:?} must be a plain value")));
            }
        }
        Ok(FileValues(table))
    }

    fn f64(&self, key: &str, flag: Option<f64>) -> CliResult<Option<f64>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.0.get(key) {
            None => Ok(None),
            Some(toml::Value::Float(x)) => Ok(Some(*x)),
            Some(toml::Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(_) => Err(CliError::config(format!("config file: {key:?} must be a number"))),
        }
    }

    fn u64(&self, key: &str, flag: Option<u64>) -> CliResult<Option<u64>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.0.get(key) {
            None => Ok(None),
            Some(toml::Value::Integer(i)) if *i >= 0 => Ok(Some(*i as u64)),
            Some(_) => Err(CliError::config(format!("config file: {key:?} must be a non-negative integer"))),
        }
    }

    fn bool(&self, key: &str, flag: bool) -> CliResult<bool> {
        if flag {
            return Ok(true);
        }
        match self.0.get(key) {
            None => Ok(false),
            Some(toml::Value::Boolean(b)) => Ok(*b),
            Some(_) => Err(CliError::config(format!("config file: {key:?} must be true or false"))),
        }
    }

    fn string(&self, key: &str, flag: Option<String>) -> CliResult<Option<String>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.0.get(key) {
            None => Ok(None),
            Some(toml::Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(CliError::config(format!("config file: {key:?} must be a string"))),
        }
    }
}

fn required(name: &str, v: Option<f64>) -> CliResult<f64> {
    v.ok_or_else(|| CliError::config(format!("--{} is required", name.replace('_', "-"))))
}

fn resolve_params(file: &FileValues, args: &ParamArgs) -> CliResult<(f64, (Params, Renaming))> {
    let alpha = required("alpha", file.f64("alpha", args.alpha)?)?;
    let gamma = required("gamma", file.f64("gamma", args.gamma)?)?;
    let normalized = Params::normalize(alpha, gamma)?;
    Ok((alpha, normalized))
}

fn resolve_initial(file: &FileValues, s: &StateArgs, renaming: Renaming) -> CliResult<Initial> {
    let theta0 = file.f64("theta0", s.theta0)?;
    let w0 = file.f64("w0", s.w0)?;
    let full = [file.f64("r1", s.r1)?, file.f64("z1", s.z1)?, file.f64("r2", s.r2)?, file.f64("z2", s.z2)?];
    let any_full = full.iter().any(Option::is_some);
    match (theta0, w0, any_full) {
        (Some(t), Some(w), false) => {
            let rs = ReducedState::new(t, w);
            if !(t.is_finite() && w.is_finite()) {
                return Err(CliError::config("theta0 and w0 must be finite"));
            }
            Ok(Initial::Reduced(rs.renamed(renaming)))
        }
        (None, None, true) => {
            let [Some(r1), Some(z1), Some(r2), Some(z2)] = full else {
                return Err(CliError::config("a full state needs all of --r1 --z1 --r2 --z2"));
            };
            let s = FullState::new(r1, z1, r2, z2);
            s.validate()?;
            Ok(Initial::Full(s.renamed(renaming)))
        }
        (None, None, false) => Err(CliError::config("give a reduced state (--theta0 --w0) or a full state (--r1 --z1 --r2 --z2)")),
        _ => Err(CliError::config("give either --theta0 and --w0, or --r1 --z1 --r2 --z2, not a mix")),
    }
}

fn resolve_integration(file: &FileValues, a: &IntegrationArgs, default_t_end: f64) -> CliResult<(IntegrationConfig, f64, f64, f64)> {
    let d = IntegrationConfig::default();
    let cfg = IntegrationConfig {
        rel_tol: file.f64("rel_tol", a.rel_tol)?.unwrap_or(d.rel_tol),
        abs_tol: file.f64("abs_tol", a.abs_tol)?.unwrap_or(d.abs_tol),
        max_steps: file.u64("max_steps", a.max_steps)?.unwrap_or(d.max_steps),
        h_init: file.f64("h_init", a.h_init)?.unwrap_or(d.h_init),
        h_min: file.f64("h_min", a.h_min)?.unwrap_or(d.h_min),
    };
    cfg.validate()?;
    let t_end = file.f64("t_end", a.t_end)?.unwrap_or(default_t_end);
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(CliError::config("--t-end must be positive"));
    }
    let eps_w = file.f64("eps_w", a.eps_w)?.unwrap_or(DEFAULT_EPS_W);
    let eps_r = file.f64("eps_r", a.eps_r)?.unwrap_or(DEFAULT_EPS_R);
    if !(eps_w > 0.0 && eps_r > 0.0 && eps_w.is_finite() && eps_r.is_finite()) {
        return Err(CliError::config("--eps-w and --eps-r must be positive"));
    }
    Ok((cfg, t_end, eps_w, eps_r))
}

fn resolve_output(file: &FileValues, o: &OutputArgs, default: Format) -> CliResult<(Format, Option<PathBuf>)> {
    let format = match o.format {
        Some(f) => f,
        None => match file.string("format", None)? {
            Some(s) => s.parse()?,
            None => default,
        },
    };
    let output = match &o.output {
        Some(p) => Some(p.clone()),
        None => file.string("output", None)?.map(PathBuf::from),
    };
    Ok((format, output))
}

impl RunConfig {
    fn base(command: CommandKind, alpha: f64, format: Format, output_path: Option<PathBuf>) -> Self {
        RunConfig {
            command,
            params: None,
            alpha,
            initial: None,
            grid: None,
            integration: IntegrationConfig::default(),
            t_end: 100.0,
            eps_w: DEFAULT_EPS_W,
            eps_r: DEFAULT_EPS_R,
            h0: None,
            full_system: false,
            with_oracle: false,
            checks: None,
            samples: 100,
            seed: 2024,
            output_path,
            format,
        }
    }

    /// Merges flags over the optional config file and validates the result.
    pub fn from_cli(cli: &Cli) -> CliResult<Self> {
        let file = match &cli.config {
            Some(path) => FileValues::load(path)?,
            None => FileValues::default(),
        };
        Self::resolve(&cli.command, &file)
    }

    pub fn resolve(command: &Command, file: &FileValues) -> CliResult<Self> {
        match command {
            Command::Classify { params, state, out } => {
                let (alpha, p) = resolve_params(file, params)?;
                let (format, path) = resolve_output(file, out, Format::Json)?;
                let mut rc = Self::base(CommandKind::Classify, alpha, format, path);
                rc.initial = Some(resolve_initial(file, state, p.1)?);
                rc.params = Some(p);
                Ok(rc)
            }
            Command::Simulate { params, state, integration, full, out } => {
                let (alpha, p) = resolve_params(file, params)?;
                let (format, path) = resolve_output(file, out, Format::Json)?;
                let mut rc = Self::base(CommandKind::Simulate, alpha, format, path);
                rc.initial = Some(resolve_initial(file, state, p.1)?);
                rc.params = Some(p);
                (rc.integration, rc.t_end, rc.eps_w, rc.eps_r) = resolve_integration(file, integration, 100.0)?;
                rc.full_system = file.bool("full", *full)?;
                Ok(rc)
            }
            Command::GammaStar { alpha, out } => {
                let alpha = required("alpha", file.f64("alpha", *alpha)?)?;
                let (format, path) = resolve_output(file, out, Format::Json)?;
                if !(alpha > 0.0 && alpha < 1.0) {
                    return Err(CliError::config("alpha must lie in (0, 1)"));
                }
                Ok(Self::base(CommandKind::GammaStar, alpha, format, path))
            }
            Command::ThetaStar { params, h0, out } => {
                let (alpha, p) = resolve_params(file, params)?;
                let (format, path) = resolve_output(file, out, Format::Json)?;
                let mut rc = Self::base(CommandKind::ThetaStar, alpha, format, path);
                rc.params = Some(p);
                rc.h0 = Some(required("h0", file.f64("h0", *h0)?)?);
                Ok(rc)
            }
            Command::Sweep { params, grid, integration, out } => {
                let (alpha, p) = resolve_params(file, params)?;
                let (format, path) = resolve_output(file, out, Format::Csv)?;
                let mut rc = Self::base(CommandKind::Sweep, alpha, format, path);
                rc.params = Some(p);
                let g = Grid {
                    theta_range: (
                        required("theta_min", file.f64("theta_min", grid.theta_min)?)?,
                        required("theta_max", file.f64("theta_max", grid.theta_max)?)?,
                    ),
                    w_range: (
                        required("w_min", file.f64("w_min", grid.w_min)?)?,
                        required("w_max", file.f64("w_max", grid.w_max)?)?,
                    ),
                    n_theta: file.u64("n_theta", grid.n_theta.map(|n| n as u64))?.unwrap_or(50) as usize,
                    n_w: file.u64("n_w", grid.n_w.map(|n| n as u64))?.unwrap_or(50) as usize,
                };
                if g.n_theta < 2 || g.n_w < 2 {
                    return Err(CliError::config("grid counts must be at least 2"));
                }
                let finite = [g.theta_range.0, g.theta_range.1, g.w_range.0, g.w_range.1].iter().all(|x| x.is_finite());
                if !finite || g.theta_range.0 >= g.theta_range.1 || g.w_range.0 >= g.w_range.1 {
                    return Err(CliError::config("grid ranges must be finite with min < max"));
                }
                rc.grid = Some(g);
                rc.with_oracle = file.bool("with_oracle", grid.with_oracle)?;
                (rc.integration, rc.t_end, rc.eps_w, rc.eps_r) = resolve_integration(file, integration, 1000.0)?;
                Ok(rc)
            }
            Command::Verify { alpha, checks, samples, seed, out } => {
                let alpha = file.f64("alpha", *alpha)?.unwrap_or(0.2);
                if !(alpha > 0.0 && alpha < 1.0) {
                    return Err(CliError::config("alpha must lie in (0, 1)"));
                }
                let (format, path) = resolve_output(file, out, Format::Json)?;
                let mut rc = Self::base(CommandKind::Verify, alpha, format, path);
                rc.checks = file.string("checks", checks.clone())?.map(|s| {
                    s.split(',').map(str::trim).filter(|c| !c.is_empty()).map(String::from).collect()
                });
                rc.samples = file.u64("samples", samples.map(|n| n as u64))?.unwrap_or(100) as usize;
                rc.seed = file.u64("seed", *seed)?.unwrap_or(2024);
                Ok(rc)
            }
        }
    }
}
