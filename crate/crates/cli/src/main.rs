use std::path::PathBuf;
use std::time::Instant;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use multisym_cli::commands::*;
use multisym_cli::report::Report;
use multisym_cli::scene::{load_scene_with_overrides, Scene};

/// Symbolic exterior-calculus checks on scene files: multisymplectic
/// structures, Hamiltonian solving, brackets, Lie-algebra actions with
/// (co)momentum maps, momentum-type submanifolds, reduction, and
/// first-order Lagrangian field theory.
#[derive(Parser)]
#[command(name = "multisym", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Treat UNDECIDED verdicts as failures in the exit code.
    #[arg(long, global = true)]
    strict: bool,

    /// Override the scene seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Override the scene sample count.
    #[arg(long, global = true)]
    samples: Option<u32>,

    /// Write the report as JSON.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,

    /// Write the structured report (.msr).
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,

    /// Suppress per-check lines; print the summary only.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Args)]
struct SceneArg {
    /// Scene file (.msc).
    scene: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Closedness and 1-nondegeneracy of declared structures.
    CheckMs {
        #[command(flatten)]
        scene: SceneArg,
        /// Structure name (default: all).
        name: Option<String>,
    },
    /// Solve i(X)Ω = dζ for a Hamiltonian vector field.
    Hvf {
        #[command(flatten)]
        scene: SceneArg,
        ms: String,
        zeta: String,
    },
    /// Bracket of two Hamiltonian forms, with antisymmetry and closure.
    Bracket {
        #[command(flatten)]
        scene: SceneArg,
        ms: String,
        zeta1: String,
        zeta2: String,
    },
    /// Classify an action: locally/strongly Hamiltonian, exact.
    ClassifyAction {
        #[command(flatten)]
        scene: SceneArg,
        action: String,
    },
    /// Build and certify a comomentum map.
    Comomentum {
        #[command(flatten)]
        scene: SceneArg,
        action: String,
    },
    /// Poissonian defect of the comomentum map.
    Defect {
        #[command(flatten)]
        scene: SceneArg,
        action: String,
    },
    /// Equivariance on the supplied group samples.
    Equivariance {
        #[command(flatten)]
        scene: SceneArg,
        action: String,
    },
    /// Momentum-type conditions for a submanifold under an action.
    Submanifold {
        #[command(flatten)]
        scene: SceneArg,
        sub: String,
        action: String,
    },
    /// Dimension classification: admissible, optimal, maximal.
    Dims { m: u64, k: u64, n: u64, s: u64 },
    /// Verify a declared reduction: basicness, π*ω̃ = ω, dω̃ = 0.
    Reduce {
        #[command(flatten)]
        scene: SceneArg,
        reduction: String,
    },
    /// Full Lagrangian suite: regularity, symmetries, Euler-Lagrange,
    /// Noether conservation, momentum-type images.
    Lagrangian {
        #[command(flatten)]
        scene: SceneArg,
        system: String,
    },
    /// Every check derivable from the scene.
    All {
        #[command(flatten)]
        scene: SceneArg,
    },
}

fn load(cli: &Cli, arg: &SceneArg) -> Result<Scene> {
    load_scene_with_overrides(&arg.scene, cli.seed, cli.samples)
}

fn run(cli: &Cli) -> Result<Report> {
    let default_ctx = multisym::ZeroCtx::default();
    let (label, settings, records) = match &cli.command {
        Command::CheckMs { scene, name } => {
            let s = load(cli, scene)?;
            let r = cmd_check_ms(&s, name.as_deref())?;
            ("check-ms", s.settings, r)
        }
        Command::Hvf { scene, ms, zeta } => {
            let s = load(cli, scene)?;
            let r = cmd_hvf(&s, ms, zeta)?;
            ("hvf", s.settings, r)
        }
        Command::Bracket {
            scene,
            ms,
            zeta1,
            zeta2,
        } => {
            let s = load(cli, scene)?;
            let r = cmd_bracket(&s, ms, zeta1, zeta2)?;
            ("bracket", s.settings, r)
        }
        Command::ClassifyAction { scene, action } => {
            let s = load(cli, scene)?;
            let r = cmd_classify_action(&s, action)?;
            ("classify-action", s.settings, r)
        }
        Command::Comomentum { scene, action } => {
            let s = load(cli, scene)?;
            let r = cmd_comomentum(&s, action)?;
            ("comomentum", s.settings, r)
        }
        Command::Defect { scene, action } => {
            let s = load(cli, scene)?;
            let r = cmd_defect(&s, action)?;
            ("defect", s.settings, r)
        }
        Command::Equivariance { scene, action } => {
            let s = load(cli, scene)?;
            let r = cmd_equivariance(&s, action)?;
            ("equivariance", s.settings, r)
        }
        Command::Submanifold { scene, sub, action } => {
            let s = load(cli, scene)?;
            let r = cmd_submanifold(&s, sub, action)?;
            ("submanifold", s.settings, r)
        }
        Command::Dims { m, k, n, s } => {
            let r = cmd_dims(*m, *k, *n, *s)?;
            ("dims", default_ctx, r)
        }
        Command::Reduce { scene, reduction } => {
            let s = load(cli, scene)?;
            let r = cmd_reduce(&s, reduction)?;
            ("reduce", s.settings, r)
        }
        Command::Lagrangian { scene, system } => {
            let s = load(cli, scene)?;
            let r = cmd_lagrangian(&s, system)?;
            ("lagrangian", s.settings, r)
        }
        Command::All { scene } => {
            let s = load(cli, scene)?;
            let r = cmd_all(&s)?;
            ("all", s.settings, r)
        }
    };
    let mut report = Report::new(label, settings.seed, settings.samples);
    report.records = records;
    Ok(report)
}

fn main() {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok(report) => {
            let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
            print!("{}", report.human(elapsed_ms, cli.quiet));
            if let Some(path) = &cli.report {
                if let Err(e) = std::fs::write(path, report.to_msr()) {
                    eprintln!("error: cannot write report: {e}");
                    std::process::exit(2);
                }
            }
            if let Some(path) = &cli.json {
                if let Err(e) = std::fs::write(path, report.to_json()) {
                    eprintln!("error: cannot write JSON report: {e}");
                    std::process::exit(2);
                }
            }
            std::process::exit(report.exit_code(cli.strict));
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}
