use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use helixlight::config::{parse_config, Command};
use helixlight::presets::{preset, PRESET_NAMES};
use helixlight::run::{base_dir_of, run, RunOptions};

/// Counterpropagating Laguerre-Gauss helices and dark-helix lattices.
#[derive(Parser)]
#[command(name = "helixlight", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample the field on the configured grid.
    EvalGrid(Common),
    /// Trace dark cores and/or bright ridges.
    Trace(Common),
    /// Trace the dark helix and write the pitch/trap report.
    Pitch(Common),
    /// Extract iso-intensity contours.
    Contour(Common),
    /// Lattice uniformity and core suppression report.
    Lattice(Common),
    /// Embedded single-helix report.
    Embed(Common),
    /// Run a built-in configuration.
    Preset {
        /// One of figure1, figure2, figure3a, figure3b, figure4b, figure4c, figure4d.
        name: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Dark-trace seed, transverse units of the config.
    #[arg(long, requires = "seed_y", allow_negative_numbers = true)]
    seed_x: Option<f64>,
    #[arg(long, requires = "seed_x", allow_negative_numbers = true)]
    seed_y: Option<f64>,
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("helixlight: {msg}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (command, common, preset_name) = match cli.command {
        Cmd::EvalGrid(c) => (Some(Command::EvalGrid), c, None),
        Cmd::Trace(c) => (Some(Command::Trace), c, None),
        Cmd::Pitch(c) => (Some(Command::Pitch), c, None),
        Cmd::Contour(c) => (Some(Command::Contour), c, None),
        Cmd::Lattice(c) => (Some(Command::Lattice), c, None),
        Cmd::Embed(c) => (Some(Command::Embed), c, None),
        Cmd::Preset { name, common } => (None, common, Some(name)),
    };
    let mut opts = RunOptions::new(&common.out);
    opts.threads = common.threads;
    opts.command = command;
    opts.seed = common.seed_x.zip(common.seed_y).map(|(x, y)| [x, y]);

    let config = match (&preset_name, &common.config) {
        (Some(_), Some(_)) => return fail(1, "preset and --config are exclusive"),
        (Some(name), None) => match preset(name) {
            Some(c) => c,
            None => return fail(1, format!("unknown preset `{name}` (known: {})", PRESET_NAMES.join(", "))),
        },
        (None, Some(path)) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => return fail(1, format!("{}: {e}", path.display())),
            };
            opts.base_dir = base_dir_of(path);
            match parse_config(&text) {
                Ok(c) => c,
                Err(e) => return fail(1, format!("{}: {e}", path.display())),
            }
        }
        (None, None) => return fail(1, "--config is required"),
    };

    match run(&config, &opts) {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("helixlight: warning: {w}");
            }
            eprintln!("helixlight: {} done, config hash {}", outcome.command, outcome.config_hash);
            for a in &outcome.artifacts {
                eprintln!("  wrote {}", a.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(e.exit_code() as u8, e),
    }
}
