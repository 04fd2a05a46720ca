use std::path::PathBuf;
use std::process::ExitCode;

use adlv_cli::{
    cmd_bgx, cmd_check, cmd_crosscheck, cmd_enumerate, cmd_render, emit, CliError, Faults, Overrides, RunConfig,
};
use clap::{Args, Parser, Subcommand};

/// Nonemptiness of affine Deligne-Lusztig varieties at Iwahori level, basic case.
#[derive(Parser)]
#[command(name = "adlv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct Flags {
    /// Root system, e.g. A2, B2, G2, A3
    #[arg(long, global = true)]
    system: Option<String>,
    /// Diagram automorphism: "id" or cycles such as "(1 3)"
    #[arg(long, global = true)]
    sigma: Option<String>,
    /// Largest length enumerated
    #[arg(long, global = true)]
    length_bound: Option<usize>,
    /// Class of b: "match-x" or a coweight whose Kottwitz class is used, e.g. "1,0"
    #[arg(long, global = true)]
    kappa_b: Option<String>,
    /// Output format: json, csv or svg
    #[arg(long, global = true)]
    format: Option<String>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Largest group or enumeration size accepted
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// File of key=value lines with the same keys; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide nonemptiness for one element, e.g. "t[1,0] s1 s2"
    Check { x: String },
    /// Table over all elements up to the length bound
    Enumerate,
    /// Run the property audit
    Crosscheck,
    /// Draw a rank-2 apartment as SVG
    Render,
    /// B(G)_x report for x = v t^mu
    Bgx { v: String, mu: String },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let f = cli.flags;
    let overrides = Overrides {
        system: f.system,
        sigma: f.sigma,
        length_bound: f.length_bound,
        kappa_b: f.kappa_b,
        format: f.format,
        out: f.out,
        jobs: f.jobs,
        cap: f.cap,
    };
    let cfg = RunConfig::load(f.config.as_deref(), &overrides)?;
    let outcome = match &cli.command {
        Command::Check { x } => cmd_check(&cfg, x)?,
        Command::Enumerate => cmd_enumerate(&cfg)?,
        Command::Crosscheck => cmd_crosscheck(&cfg, Faults::default())?,
        Command::Render => cmd_render(&cfg)?,
        Command::Bgx { v, mu } => cmd_bgx(&cfg, v, mu)?,
    };
    emit(&cfg, &outcome.document)?;
    Ok(outcome.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
