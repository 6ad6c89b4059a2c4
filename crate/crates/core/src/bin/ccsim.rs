use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ccsim::association::{Policy, VectorSchedulingOptions};
use ccsim::experiments::{self, parse_usize_list, ActivitySource, BoundKind};
use ccsim::model::{parse_gamma, Gamma};
use ccsim::Error;

#[derive(Parser)]
#[command(name = "ccsim", version, about = "Coded caching with shared cache states and random user activity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Base seed; every random draw is derived from it.
    #[arg(long, env = "CCSIM_SEED", default_value_t = 0)]
    seed: u64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a binary activity matrix.
    GenActivity {
        #[arg(long)]
        users: usize,
        #[arg(long)]
        slots: usize,
        /// pareto, uniform:<p> or file:<path>.
        #[arg(long, default_value = "pareto", value_parser = parse_activity)]
        activity: ActivitySource,
        /// Shorthand for --activity pareto.
        #[arg(long)]
        pareto: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Analytical bracket and sampled estimate over a parameter grid.
    BoundsSweep {
        /// List `a,b,c` or range `start:end:step`.
        #[arg(long, default_value = "50:500:50", value_parser = parse_list)]
        users: UsizeList,
        #[arg(long, default_value = "10", value_parser = parse_list)]
        states: UsizeList,
        /// Comma-separated cache fractions, each `num/den`.
        #[arg(long, default_value = "1/5", value_delimiter = ',', value_parser = parse_gamma_arg)]
        gamma: Vec<Gamma>,
        #[arg(long, default_value = "pareto", value_parser = parse_activity)]
        activity: ActivitySource,
        /// random, uniform or stat-greedy.
        #[arg(long, default_value = "random")]
        algo: Policy,
        /// auto, arbitrary or uniform.
        #[arg(long, default_value = "auto")]
        bound: BoundKind,
        #[arg(long, default_value_t = 20000)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run one association policy and write the association.
    Associate {
        /// random, uniform, stat-greedy, vecsched or sumsq.
        #[arg(long)]
        algo: Policy,
        #[arg(long)]
        users: usize,
        #[arg(long)]
        states: usize,
        #[arg(long, default_value = "1/5", value_parser = parse_gamma_arg)]
        gamma: Gamma,
        #[arg(long, default_value = "pareto", value_parser = parse_activity)]
        activity: ActivitySource,
        #[arg(long, default_value_t = 200)]
        slots: usize,
        #[command(flatten)]
        vs: VsArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Compare policies over repeated workloads.
    Compare {
        /// Comma-separated policy names.
        #[arg(long, value_delimiter = ',', default_value = "random,vecsched,sumsq")]
        algos: Vec<Policy>,
        #[arg(long)]
        users: usize,
        #[arg(long)]
        states: usize,
        #[arg(long, default_value = "1/5", value_parser = parse_gamma_arg)]
        gamma: Gamma,
        #[arg(long, default_value_t = 200)]
        slots: usize,
        #[arg(long, default_value_t = 20)]
        reps: usize,
        #[arg(long, default_value = "pareto", value_parser = parse_activity)]
        activity: ActivitySource,
        #[command(flatten)]
        vs: VsArgs,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct VsArgs {
    /// Vector scheduling: count first-phase loads when placing deferred users.
    #[arg(long)]
    combined_residual_loads: bool,
    /// Vector scheduling: override the potential base.
    #[arg(long)]
    alpha: Option<f64>,
}

impl From<VsArgs> for VectorSchedulingOptions {
    fn from(v: VsArgs) -> Self {
        VectorSchedulingOptions {
            combined_residual_loads: v.combined_residual_loads,
            alpha: v.alpha,
        }
    }
}

fn parse_activity(s: &str) -> Result<ActivitySource, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Clone)]
struct UsizeList(Vec<usize>);

fn parse_list(s: &str) -> Result<UsizeList, String> {
    parse_usize_list(s).map(UsizeList).map_err(|e| e.to_string())
}

fn parse_gamma_arg(s: &str) -> Result<Gamma, String> {
    parse_gamma(s).map_err(|e| e.to_string())
}

fn run(command: Command) -> ccsim::Result<()> {
    match command {
        Command::GenActivity {
            users,
            slots,
            activity,
            pareto,
            common,
        } => {
            let activity = if pareto { ActivitySource::Pareto } else { activity };
            experiments::gen_activity(&experiments::GenActivity {
                users,
                slots,
                seed: common.seed,
                activity,
                out: common.out,
            })?;
        }
        Command::BoundsSweep {
            users,
            states,
            gamma,
            activity,
            algo,
            bound,
            samples,
            common,
        } => {
            let rows = experiments::bounds_sweep(&experiments::BoundsSweep {
                users: users.0,
                states: states.0,
                gammas: gamma,
                activity,
                policy: algo,
                bound,
                samples,
                seed: common.seed,
                out: common.out,
            })?;
            println!("{} rows", rows.len());
        }
        Command::Associate {
            algo,
            users,
            states,
            gamma,
            activity,
            slots,
            vs,
            common,
        } => {
            let outcome = experiments::associate(&experiments::Associate {
                policy: algo,
                users,
                states,
                gamma,
                activity,
                slots,
                seed: common.seed,
                vector_scheduling: vs.into(),
                out: common.out,
            })?;
            if outcome.report.objective.is_finite() {
                println!("objective {}", outcome.report.objective);
            }
            println!("delay {}", outcome.delay);
            println!("lower_bound {}", outcome.lower_bound);
        }
        Command::Compare {
            algos,
            users,
            states,
            gamma,
            slots,
            reps,
            activity,
            vs,
            common,
        } => {
            let outcome = experiments::compare(&experiments::Compare {
                policies: algos,
                users,
                states,
                gamma,
                slots,
                repetitions: reps,
                activity,
                seed: common.seed,
                vector_scheduling: vs.into(),
                out: common.out,
            })?;
            println!("algo,mean_delay,std_delay,mean_ratio");
            for s in &outcome.summary {
                println!("{},{},{},{}", s.policy, s.mean_delay, s.std_delay, s.mean_ratio);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
