#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use halfline_cli::{run_experiment, CliError, CliResult, ExperimentConfig, Preset};

#[derive(Parser)]
#[command(
    name = "halfline",
    version,
    about = "Reaction-diffusion experiments with reaction on a half-line"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one PDE problem (custom) or one profile (profile).
    Simulate(Common),
    /// One-sided profile slopes over an alpha list (lambda-laws, profile).
    Shoot(Common),
    /// Matching exponent alpha* (alpha-star).
    MatchAlpha(Common),
    /// Orbits of the planar system (phase-portrait).
    PhasePortrait(Common),
    /// Growth and blow-up rates (guprate, buprate, bupset).
    Rates(Common),
    /// Parameter sweep (regime-map, custom with a [sweep] section).
    Sweep(Common),
    /// Run any preset and write its report.
    Report(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps; 0 uses every core.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    dx: Option<f64>,
    #[arg(long)]
    tmax: Option<f64>,
    #[arg(long)]
    preset: Option<String>,
}

impl Command {
    fn parts(&self) -> (&Common, &'static [Preset]) {
        use Preset::*;
        match self {
            Command::Simulate(c) => (c, &[Custom, Profile]),
            Command::Shoot(c) => (c, &[LambdaLaws, Profile]),
            Command::MatchAlpha(c) => (c, &[AlphaStar]),
            Command::PhasePortrait(c) => (c, &[PhasePortrait]),
            Command::Rates(c) => (c, &[GrowUpRate, BlowUpRate, BlowUpSet]),
            Command::Sweep(c) => (c, &[RegimeMap, Custom]),
            Command::Report(c) => (c, &Preset::ALL),
        }
    }
}

fn build_config(cmd: &Command) -> CliResult<ExperimentConfig> {
    let (args, allowed) = cmd.parts();
    let flag_preset = args.preset.as_deref().map(str::parse::<Preset>).transpose()?;
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => {
            let mut c = ExperimentConfig::new(flag_preset.unwrap_or(allowed[0]));
            c.apply_preset_defaults();
            c
        }
    };
    if let Some(p) = flag_preset {
        if p != cfg.preset {
            return Err(CliError::Config(format!(
                "--preset {p} disagrees with the config preset {}",
                cfg.preset
            )));
        }
    }
    if !allowed.contains(&cfg.preset) {
        let names: Vec<_> = allowed.iter().map(|p| p.name()).collect();
        return Err(CliError::Config(format!(
            "preset {} does not belong to this subcommand (expected {})",
            cfg.preset,
            names.join(", ")
        )));
    }
    if let Some(out) = &args.out {
        cfg.output_dir = out.clone();
    }
    if let Some(j) = args.jobs {
        cfg.jobs = j;
    }
    if let Some(dx) = args.dx {
        cfg.problem.set("dx", &dx.to_string())?;
    }
    if let Some(t) = args.tmax {
        cfg.problem.set("max_time", &t.to_string())?;
    }
    if matches!(cmd, Command::Sweep(_)) && cfg.sweep.as_ref().is_none_or(|s| s.is_empty()) {
        return Err(CliError::Config("sweep needs a nonempty [sweep] section".into()));
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = build_config(&cli.command).and_then(|cfg| run_experiment(&cfg));
    match result {
        Ok(manifest) => {
            for c in &manifest.checks {
                println!("{}", c.line());
            }
            println!(
                "wrote {} files to {}",
                manifest.files.len(),
                manifest.output_dir.display()
            );
            ExitCode::from(manifest.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("halfline: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
