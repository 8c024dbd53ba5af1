use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use mjd_bench::{compare_report, execute_run, read_csv, RunOptions, RunOutput, DEFAULT_OUT_DIR, OUT_DIR_ENV};

/// Throughput sweeps for clustered multicell joint decoding.
#[derive(Parser)]
#[command(name = "mjd-bench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a preset sweep or a single point and write a CSV.
    Run(RunArgs),
    /// Check the analytic/simulation pairs of an existing CSV.
    Compare {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// fig2 | fig3 | fig4 | fig5
    #[arg(long)]
    preset: Option<String>,
    /// mjd | ia | rdma | ci | all; repeat or comma-separate
    #[arg(long, value_delimiter = ',')]
    scheme: Vec<String>,
    #[arg(long = "M")]
    m: Option<usize>,
    #[arg(long = "K")]
    k: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long = "gamma-db", allow_hyphen_values = true)]
    gamma_db: Option<f64>,
    /// analytic | mc | both
    #[arg(long)]
    route: Option<String>,
    /// Monte Carlo trials per point
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Directory for the CSV when --out is not given
    #[arg(long, env = OUT_DIR_ENV, default_value = DEFAULT_OUT_DIR)]
    out_dir: PathBuf,
    /// key = value file; flags given on the command line win
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Also write a gnuplot script next to the CSV
    #[arg(long)]
    gnuplot: bool,
    /// Fill the runtime_ms column (makes the CSV non-reproducible)
    #[arg(long)]
    record_runtime: bool,
}

impl RunArgs {
    fn options(&self) -> RunOptions {
        RunOptions {
            preset: self.preset.clone(),
            schemes: (!self.scheme.is_empty()).then(|| self.scheme.clone()),
            m: self.m,
            k: self.k,
            alpha: self.alpha,
            gamma_db: self.gamma_db,
            route: self.route.clone(),
            iters: self.iters,
            seed: self.seed,
            out: self.out.clone(),
            gnuplot: self.gnuplot.then_some(true),
            record_runtime: self.record_runtime.then_some(true),
        }
    }
}

fn run(args: RunArgs) -> anyhow::Result<bool> {
    let mut opts = args.options();
    if let Some(cfg) = &args.config {
        opts = opts.over(RunOptions::load(cfg)?);
    }
    let outcome = execute_run(&opts, &args.out_dir)?;
    match &outcome.output {
        RunOutput::Dof(rows) => {
            for r in rows {
                println!("{:<4} M={:<2} K={:<2} dof {}/{}", r.scheme.label(), r.m, r.k, r.dof_numer, r.dof_denom);
            }
        }
        RunOutput::Throughput { rows, summary } => {
            for r in rows.iter().filter(|r| r.is_error()) {
                eprintln!("{} {} {}: {}", r.scheme, r.route, r.point(), r.error.as_deref().unwrap_or(""));
            }
            if let Some(s) = summary {
                println!("{s}");
            }
        }
    }
    println!("wrote {}", outcome.path.display());
    Ok(outcome.passed())
}

fn compare(input: PathBuf) -> anyhow::Result<bool> {
    let rows = read_csv(&input)?;
    let summary = compare_report(&rows).with_context(|| format!("comparing {}", input.display()))?;
    println!("{summary}");
    Ok(summary.passed() && !rows.iter().any(|r| r.is_error()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Compare { input } => compare(input),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
