//! Command-line front end: `ecalsim generate | analyze | compare`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ecalsim::run::{cmd_analyze, cmd_compare, cmd_generate, Channel, RunConfig, RunError};

#[derive(Debug, Parser)]
#[command(name = "ecalsim", version, about = "ECAL scenario fast simulation for B physics at the Z pole")]
struct Cli {
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate Z → bb̄/cc̄ events into <out>/<channel>_<scenario>/events.txt.
    Generate(RunArgs),
    /// Run a channel analysis and write spectrum CSV, report and plot.
    Analyze(RunArgs),
    /// Compare two or more analysis output directories of one channel.
    Compare {
        /// Analysis output directories.
        inputs: Vec<PathBuf>,
        /// Directory receiving compare_<channel>/.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Run configuration (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    events: Option<u64>,
    #[arg(long)]
    scenario: Option<String>,
    /// ds_pi, pi0pi0, kstar_gamma or single_pi0.
    #[arg(long)]
    channel: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn run_config(&self) -> Result<RunConfig, RunError> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.master_seed = s;
        }
        if let Some(n) = self.events {
            cfg.n_events = n;
        }
        if let Some(s) = &self.scenario {
            cfg.scenario = s.clone();
        }
        if let Some(c) = &self.channel {
            cfg.channel = c.parse::<Channel>()?;
        }
        if let Some(o) = &self.out {
            cfg.output_dir = o.clone();
        }
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Command::Generate(args) => {
            let cfg = args.run_config()?;
            let s = cmd_generate(&cfg, cli.threads)?;
            println!("events: {}", s.n_events);
            println!("mean final-state multiplicity: {:.2}", s.mean_multiplicity);
            println!("written: {}", s.path.display());
        }
        Command::Analyze(args) => {
            let cfg = args.run_config()?;
            let (out, paths) = cmd_analyze(&cfg, cli.threads)?;
            if let Some(res) = out.report.section("results") {
                for (k, v) in &res.entries {
                    println!("{k}: {v}");
                }
            }
            if let Some(w) = out.report.get("warnings", "warning") {
                eprintln!("warning: {w}");
            }
            for p in paths {
                println!("written: {}", p.display());
            }
        }
        Command::Compare { inputs, out } => {
            let c = cmd_compare(&inputs, &out)?;
            print!("{}", c.table);
            for p in c.paths {
                println!("written: {}", p.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
