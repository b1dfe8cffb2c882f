//! `jitterlink`: figure tables, validation and presets from the command line.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use jitterlink::config::{ModelKind, RunConfig, Suite, PRESETS};
use jitterlink::output::Table;
use jitterlink::validate::{validate, validate_all, Report};
use jitterlink::{tables, Error};

/// Exit codes: 0 success, 2 configuration error, 3 validation failure, 4 numeric failure.
const EXIT_CONFIG: u8 = 2;
const EXIT_VALIDATION: u8 = 3;
const EXIT_NUMERIC: u8 = 4;

#[derive(Parser)]
#[command(name = "jitterlink", version, about = "Pointing-error and end-to-end channel laws for vibrating directional links")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// TOML run configuration.
    #[arg(long, global = true, value_name = "PATH", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Frozen figure preset (see `jitterlink presets`).
    #[arg(long, global = true, value_name = "NAME")]
    preset: Option<String>,
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Monte-Carlo sample count.
    #[arg(long, global = true, value_name = "N")]
    samples: Option<usize>,
    /// Output file (default: standard output).
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    General,
    Symmetric,
    Ula,
    UlaApprox,
    Remark1,
}

impl From<VariantArg> for ModelKind {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::General => ModelKind::General,
            VariantArg::Symmetric => ModelKind::Symmetric,
            VariantArg::Ula => ModelKind::Ula,
            VariantArg::UlaApprox => ModelKind::UlaApprox,
            VariantArg::Remark1 => ModelKind::Remark1,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Transmit-array gain over a (θ, φ) grid.
    Pattern {
        #[arg(long)]
        n_theta: Option<usize>,
        #[arg(long)]
        n_phi: Option<usize>,
        #[arg(long, value_name = "DEG")]
        theta_max: Option<f64>,
    },
    /// Pointing-error PDF and CDF over h_p/G0.
    Pointing {
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
        /// Add a Monte-Carlo ECDF column.
        #[arg(long)]
        mc: bool,
    },
    /// End-to-end PDF and CDF of the channel gain.
    E2e {
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
        #[arg(long)]
        mc: bool,
    },
    /// Outage versus link length.
    Outage,
    /// Analytic-versus-simulation report; all validation presets unless one is selected.
    Validate,
    /// List presets, or print one as TOML.
    Presets { name: Option<String> },
}

fn load(g: &Global) -> jitterlink::Result<RunConfig> {
    let cfg = match (&g.config, &g.preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            RunConfig::from_toml(&text)?
        }
        (None, Some(name)) => RunConfig::preset(name)?,
        (None, None) => return Err(Error::Config("this command needs --config PATH or --preset NAME".into())),
    };
    cfg.with_overrides(g.seed, g.samples)
}

fn render(g: &Global, table: &Table, cfg: &RunConfig) -> String {
    match g.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(&cfg.to_json()),
    }
}

fn emit(g: &Global, text: &str) -> anyhow::Result<()> {
    match &g.out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes()).context("writing standard output")
        }
    }
}

enum Outcome {
    Done,
    ValidationFailed,
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Pattern { n_theta, n_phi, theta_max } => {
            let mut cfg = load(g)?;
            cfg.pattern.n_theta = n_theta.unwrap_or(cfg.pattern.n_theta);
            cfg.pattern.n_phi = n_phi.unwrap_or(cfg.pattern.n_phi);
            cfg.pattern.theta_max_deg = theta_max.unwrap_or(cfg.pattern.theta_max_deg);
            emit(g, &render(g, &tables::pattern_table(&cfg)?, &cfg))?;
        }
        Command::Pointing { variant, mc } | Command::E2e { variant, mc } => {
            let mut cfg = load(g)?;
            if let Some(v) = variant {
                cfg.model = (*v).into();
                cfg.validate()?;
            }
            cfg.curve.mc_overlay |= *mc;
            let t = if matches!(cli.command, Command::Pointing { .. }) { tables::pointing_table(&cfg)? } else { tables::e2e_table(&cfg)? };
            emit(g, &render(g, &t, &cfg))?;
        }
        Command::Outage => {
            let cfg = load(g)?;
            emit(g, &render(g, &tables::outage_table(&cfg)?, &cfg))?;
        }
        Command::Validate => {
            let report: Report = if g.config.is_some() || g.preset.is_some() {
                validate(&load(g)?)?
            } else {
                validate_all(g.seed, g.samples)?
            };
            let text = match g.format {
                Format::Csv => report.to_string(),
                Format::Json => serde_json::to_string_pretty(&report)? + "\n",
            };
            emit(g, &text)?;
            if !report.passed() {
                return Ok(Outcome::ValidationFailed);
            }
        }
        Command::Presets { name: Some(name) } => {
            let (_, text) = PRESETS
                .iter()
                .find(|(n, _)| n == name)
                .ok_or_else(|| RunConfig::preset(name).expect_err("preset lookup already failed"))?;
            emit(g, text)?;
        }
        Command::Presets { name: None } => {
            let mut out = String::new();
            for (name, _) in PRESETS {
                let cfg = RunConfig::preset(name)?;
                let suite = match cfg.suite {
                    Suite::Pointing => "pointing",
                    Suite::EndToEnd => "end-to-end",
                    Suite::Reach => "reach",
                    Suite::ElementSweep => "element-sweep",
                };
                out.push_str(&format!("{name}\t{suite}\t{}\n", cfg.description));
            }
            emit(g, &out)?;
        }
    }
    Ok(Outcome::Done)
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Config(_) | Error::Validity(_)) => EXIT_CONFIG,
        Some(_) => EXIT_NUMERIC,
        None => EXIT_CONFIG,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::ValidationFailed) => ExitCode::from(EXIT_VALIDATION),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Error>().is_some_and(|e| e.is_config()) {
                eprintln!("usage: jitterlink [--config PATH | --preset NAME] <pattern|pointing|e2e|outage|validate|presets>; `jitterlink presets` lists preset names");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
