//! Run configuration: flat JSON config files, command-line flags and their
//! merge (flags override file values, defaults fill the rest).

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};

/// Command-line flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Flat key/value JSON config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Coupling strength g.
    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<f64>,

    /// Renormalized oscillator frequency.
    #[arg(long = "omega-bar", allow_negative_numbers = true)]
    pub omega_bar: Option<f64>,

    /// Coupling ratio alpha with g = alpha * omega_bar.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,

    /// Dimensionless cavity size delta = g R / (pi c); repeatable for sweeps.
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Vec<f64>,

    /// Inverse temperature; repeatable.
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Vec<f64>,

    /// Temperature (k_B T = 1/beta); repeatable.
    #[arg(long, allow_negative_numbers = true)]
    pub temperature: Vec<f64>,

    /// Real part of the coherent amplitude.
    #[arg(long = "lambda-re", allow_negative_numbers = true)]
    pub lambda_re: Option<f64>,

    /// Imaginary part of the coherent amplitude.
    #[arg(long = "lambda-im", allow_negative_numbers = true)]
    pub lambda_im: Option<f64>,

    /// Start of the time window.
    #[arg(long, allow_negative_numbers = true)]
    pub t0: Option<f64>,

    /// End of the time window.
    #[arg(long, allow_negative_numbers = true)]
    pub t1: Option<f64>,

    /// Time step.
    #[arg(long, allow_negative_numbers = true)]
    pub dt: Option<f64>,

    /// Number of retained field modes (default: adaptive).
    #[arg(long)]
    pub modes: Option<usize>,

    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Escalate soft warnings (e.g. an undersampled time grid) to errors.
    #[arg(long)]
    pub strict: bool,
}

/// One value or a list, so JSON can say `"beta": 0.26` or `"beta": [0.26, 0.51]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl OneOrMany {
    fn into_vec(self) -> Vec<f64> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

/// Flat JSON config file. Unknown keys are always rejected.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    g: Option<f64>,
    omega_bar: Option<f64>,
    alpha: Option<f64>,
    delta: Option<OneOrMany>,
    beta: Option<OneOrMany>,
    temperature: Option<OneOrMany>,
    lambda_re: Option<f64>,
    lambda_im: Option<f64>,
    t0: Option<f64>,
    t1: Option<f64>,
    dt: Option<f64>,
    modes: Option<usize>,
    out: Option<String>,
    track_min_t: Option<f64>,
    track_max_t: Option<f64>,
}

/// Fully resolved configuration, embedded verbatim in the run manifest.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunConfig {
    pub g: f64,
    pub omega_bar: f64,
    pub alpha: Option<f64>,
    pub deltas: Vec<f64>,
    pub betas: Vec<f64>,
    /// `1/(k_B beta)` for each beta, recorded alongside.
    pub temperatures: Vec<f64>,
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub t0: f64,
    pub t1: f64,
    pub dt: f64,
    pub modes: Option<usize>,
    pub out: String,
    pub strict: bool,
    /// Reference times for the extrema tracked by `sweep`.
    pub track_min_t: f64,
    pub track_max_t: f64,
    /// Every default that was applied during resolution.
    pub defaults_applied: Vec<String>,
}

/// Which subcommand the config is being resolved for; defaults differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Spectrum,
    Evolve,
    Sweep,
    OracleCheck,
}

impl CommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            CommandKind::Spectrum => "spectrum",
            CommandKind::Evolve => "evolve",
            CommandKind::Sweep => "sweep",
            CommandKind::OracleCheck => "oracle-check",
        }
    }

    fn needs_beta(&self) -> bool {
        !matches!(self, CommandKind::Spectrum)
    }
}

pub fn resolve(args: &RunArgs, kind: CommandKind) -> Result<RunConfig> {
    let file = match &args.config {
        Some(path) => load_file(path)?,
        None => ConfigFile::default(),
    };
    let mut defaults = Vec::new();

    let alpha = args.alpha.or(file.alpha);
    let omega_bar = args
        .omega_bar
        .or(file.omega_bar)
        .context("omega_bar is required (flag --omega-bar or config key omega_bar)")?;
    let g = match args.g.or(file.g) {
        Some(g) => g,
        None => match alpha {
            Some(a) => {
                defaults.push(format!("g = alpha * omega_bar = {}", a * omega_bar));
                a * omega_bar
            }
            None => bail!("g is required (flag --g, config key g, or alpha + omega_bar)"),
        },
    };

    let deltas = if !args.delta.is_empty() {
        args.delta.clone()
    } else {
        file.delta
            .clone()
            .map(OneOrMany::into_vec)
            .context("delta is required (flag --delta or config key delta)")?
    };
    if deltas.is_empty() {
        bail!("delta list must not be empty");
    }
    for &d in &deltas {
        if !d.is_finite() || d <= 0.0 {
            bail!("delta must be positive");
        }
    }
    if kind != CommandKind::Sweep && deltas.len() != 1 {
        bail!(
            "{} takes exactly one delta, got {}; use the sweep subcommand for delta lists",
            kind.name(),
            deltas.len()
        );
    }

    let mut betas: Vec<f64> = if !args.beta.is_empty() || !args.temperature.is_empty() {
        args.beta.clone()
    } else {
        file.beta
            .clone()
            .map(OneOrMany::into_vec)
            .unwrap_or_default()
    };
    let temps_in: Vec<f64> = if !args.beta.is_empty() || !args.temperature.is_empty() {
        args.temperature.clone()
    } else {
        file.temperature
            .clone()
            .map(OneOrMany::into_vec)
            .unwrap_or_default()
    };
    for &t in &temps_in {
        if !t.is_finite() || t <= 0.0 {
            bail!("temperature must be positive");
        }
        betas.push(1.0 / t);
    }
    for &b in &betas {
        if b.is_nan() || b <= 0.0 {
            bail!("beta must be positive");
        }
        if b.is_infinite() {
            bail!("beta must be finite (use a large beta for effectively zero temperature)");
        }
    }
    if kind.needs_beta() && betas.is_empty() {
        bail!("beta is required (flag --beta/--temperature or config keys beta/temperature)");
    }

    let lambda_re = pick(
        args.lambda_re,
        file.lambda_re,
        1.0,
        "lambda_re = 1",
        &mut defaults,
    );
    let lambda_im = pick(
        args.lambda_im,
        file.lambda_im,
        0.0,
        "lambda_im = 0",
        &mut defaults,
    );
    let t0 = pick(args.t0, file.t0, 0.0, "t0 = 0", &mut defaults);
    let default_t1 = if kind == CommandKind::Sweep {
        10.0
    } else {
        5.0
    };
    let t1 = pick(
        args.t1,
        file.t1,
        default_t1,
        &format!("t1 = {default_t1}"),
        &mut defaults,
    );
    let dt = pick(args.dt, file.dt, 0.005, "dt = 0.005", &mut defaults);
    if (t0.is_nan() || t1.is_nan() || t0 >= t1)
        && kind != CommandKind::Spectrum
        && kind != CommandKind::OracleCheck
    {
        bail!("t0 must be below t1");
    }
    if dt.is_nan() || dt <= 0.0 {
        bail!("dt must be positive");
    }
    if !lambda_re.is_finite() || !lambda_im.is_finite() {
        bail!("lambda must be finite");
    }

    let modes = args.modes.or(file.modes);
    if modes.is_none() {
        defaults.push("modes = auto".to_string());
    }
    let out = args
        .out
        .clone()
        .map(|p| p.display().to_string())
        .or(file.out.clone())
        .unwrap_or_else(|| {
            defaults.push("out = out".to_string());
            "out".to_string()
        });

    let track_min_t = file.track_min_t.unwrap_or(2.3);
    let track_max_t = file.track_max_t.unwrap_or(2.5);

    let temperatures = betas.iter().map(|b| 1.0 / b).collect();
    Ok(RunConfig {
        g,
        omega_bar,
        alpha,
        deltas,
        betas,
        temperatures,
        lambda_re,
        lambda_im,
        t0,
        t1,
        dt,
        modes,
        out,
        strict: args.strict,
        track_min_t,
        track_max_t,
        defaults_applied: defaults,
    })
}

fn pick(
    flag: Option<f64>,
    file: Option<f64>,
    default: f64,
    note: &str,
    defaults: &mut Vec<String>,
) -> f64 {
    flag.or(file).unwrap_or_else(|| {
        defaults.push(note.to_string());
        default
    })
}

fn load_file(path: &Path) -> Result<ConfigFile> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    let parsed: ConfigFile = serde_json::from_str(&text)
        .with_context(|| format!("invalid config file {}", path.display()))?;
    Ok(parsed)
}

impl RunConfig {
    pub fn build_params(&self, delta: f64) -> Result<dressed_cavity::CavityParams> {
        let builder = match self.alpha {
            Some(alpha) => {
                dressed_cavity::CavityParams::builder_from_alpha(alpha, self.omega_bar, delta)
            }
            None => dressed_cavity::CavityParams::builder(self.g, self.omega_bar, delta),
        };
        Ok(builder.build()?)
    }

    pub fn lambda(&self) -> Result<dressed_cavity::dynamics::CoherentAmplitude> {
        Ok(dressed_cavity::dynamics::CoherentAmplitude::new(
            self.lambda_re,
            self.lambda_im,
        )?)
    }
}
