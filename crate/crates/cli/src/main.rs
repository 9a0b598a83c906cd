use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use geosched_cli::{cmd_plotdata, cmd_run, cmd_sweep, CliError, Report, RunConfig};
use geosched_core::sim::Policy;
use geosched_core::synth::{generate, write_sample, SampleOptions};

#[derive(Parser)]
#[command(
    name = "geosched",
    version,
    about = "Carbon- and water-aware geo-distributed job scheduling simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run each configured policy once and compare against the baseline.
    Run(Overrides),
    /// Run every (capacity scale, tolerance, policy) combination.
    Sweep(Overrides),
    /// Pivot metrics files into plot-ready series.
    Plotdata {
        /// metrics.csv files to read, concatenated in order.
        #[arg(required = true)]
        metrics: Vec<PathBuf>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Write a synthetic sample dataset.
    GenSample {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = SampleOptions::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = SampleOptions::default().jobs)]
        jobs: usize,
        #[arg(long, default_value_t = SampleOptions::default().days)]
        days: u32,
    },
}

#[derive(Args)]
struct Overrides {
    #[arg(long)]
    config: PathBuf,
    /// Output directory, replacing `out_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long = "policy", num_args = 1..)]
    policies: Vec<Policy>,
    /// For `run` the first value is used; for `sweep` all of them.
    #[arg(long = "tolerance", num_args = 1..)]
    tolerances: Vec<f64>,
    #[arg(long = "capacity-scale", num_args = 1..)]
    capacity_scales: Vec<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

impl Overrides {
    fn apply(&self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::load(&self.config)?;
        if let Some(out) = &self.out {
            cfg.out_dir = out.clone();
        }
        if !self.policies.is_empty() {
            cfg.run.policies = self.policies.clone();
        }
        if let Some(&t) = self.tolerances.first() {
            cfg.scheduler.tolerance = t;
            cfg.sweep.tolerances = self.tolerances.clone();
        }
        if !self.capacity_scales.is_empty() {
            cfg.sweep.capacity_scales = self.capacity_scales.clone();
        }
        if let Some(seed) = self.seed {
            cfg.sim.seed = seed;
        }
        Ok(cfg)
    }
}

fn summarize(report: &Report) {
    for r in &report.records {
        let pct =
            |v: Option<f64>| v.map_or_else(|| "undefined".to_string(), |x| format!("{x:+.2}%"));
        println!(
            "{:<18} tol={:<5} scale={:<5} carbon={:>14.1} g ({})  water={:>12.1} L ({})  violations={:.2}%  service={:.3}x",
            r.label.policy,
            r.label.tolerance,
            r.label.capacity_scale,
            r.total_carbon_g,
            pct(r.carbon_savings_pct),
            r.total_water_l,
            pct(r.water_savings_pct),
            100.0 * r.violation_frac,
            r.mean_norm_service,
        );
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(o) => {
            let cfg = o.apply()?;
            summarize(&cmd_run(&cfg)?);
            println!("wrote {}", cfg.out_dir.display());
        }
        Command::Sweep(o) => {
            let cfg = o.apply()?;
            summarize(&cmd_sweep(&cfg)?);
            println!("wrote {}", cfg.out_dir.display());
        }
        Command::Plotdata { metrics, out } => {
            let n = cmd_plotdata(&metrics, &out)?;
            println!("wrote {} points to {}", n, out.join("series.csv").display());
        }
        Command::GenSample {
            out,
            seed,
            jobs,
            days,
        } => {
            let sample = generate(&SampleOptions { seed, days, jobs });
            write_sample(&out, &sample).map_err(|source| CliError::Output {
                path: out.clone(),
                source,
            })?;
            println!(
                "wrote {} jobs over {} regions to {}",
                sample.trace.len(),
                sample.env.len(),
                out.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
