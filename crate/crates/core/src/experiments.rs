//! Experiment runners behind the `ccsim` command line. Each runner validates
//! its inputs, computes its rows, and writes a CSV with a fixed header.
//!
//! All randomness is derived from one seed: sweep point `i` and repetition
//! `r` use the substreams `seed.derive(i)` and `seed.derive(r)`, so results
//! do not depend on the order in which points are evaluated.

use std::fs::File;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use log::warn;
use rayon::prelude::*;

use crate::association::{
    assoc_random, assoc_stat_greedy, assoc_sum_squares_greedy, assoc_uniform,
    assoc_vector_scheduling, AlgoReport, Policy, VectorSchedulingOptions,
};
use crate::bounds::{arbitrary_activity_bounds, data_driven_lower_bound, sbn_estimate, uniform_activity_bounds, DelayBounds};
use crate::error::{Error, Result};
use crate::io;
use crate::model::{avg_delay_data, ActivityMatrix, ActivityProfile, Association, Gamma, SystemConfig};
use crate::synthetic::{pareto_activity, sample_activity_matrix, RngSeed};

/// Where user activity comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum ActivitySource {
    /// Five-class power-law profile; `K` must be a multiple of 5.
    Pareto,
    /// Every user active with the same probability.
    Uniform(f64),
    /// A recorded activity matrix. Its column means serve as the profile.
    File(PathBuf),
}

impl FromStr for ActivitySource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "pareto" {
            return Ok(ActivitySource::Pareto);
        }
        if let Some(p) = s.strip_prefix("uniform:") {
            let p: f64 = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad probability in {s:?}")))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability(p));
            }
            return Ok(ActivitySource::Uniform(p));
        }
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(ActivitySource::File(PathBuf::from(path)));
        }
        Err(Error::Parse(format!(
            "activity must be pareto, uniform:<p> or file:<path>, got {s:?}"
        )))
    }
}

impl ActivitySource {
    pub fn profile(&self, num_users: usize) -> Result<ActivityProfile> {
        match self {
            ActivitySource::Pareto => pareto_activity(num_users),
            ActivitySource::Uniform(p) => ActivityProfile::uniform(num_users, *p),
            ActivitySource::File(path) => {
                let d = io::load_activity_matrix(path)?;
                check_users(d.num_users(), num_users)?;
                ActivityProfile::new(d.column_means())
            }
        }
    }

    /// Recorded matrix for `File`, otherwise `S` slots sampled from the profile.
    pub fn matrix(&self, num_users: usize, num_slots: usize, seed: RngSeed) -> Result<ActivityMatrix> {
        match self {
            ActivitySource::File(path) => {
                let d = io::load_activity_matrix(path)?;
                check_users(d.num_users(), num_users)?;
                Ok(d)
            }
            other => sample_activity_matrix(&other.profile(num_users)?, num_slots, seed),
        }
    }

    /// Number of users recorded in a `File` source.
    pub fn recorded_users(&self) -> Result<Option<usize>> {
        match self {
            ActivitySource::File(path) => Ok(Some(io::load_activity_matrix(path)?.num_users())),
            _ => Ok(None),
        }
    }
}

fn check_users(found: usize, expected: usize) -> Result<()> {
    if found != expected {
        return Err(Error::DimensionMismatch {
            what: "users in activity file",
            expected,
            actual: found,
        });
    }
    Ok(())
}

fn check_out_path(path: &Path) -> Result<()> {
    if path.as_os_str().is_empty() {
        return Err(Error::Precondition("output path is empty".into()));
    }
    if path.is_dir() {
        return Err(Error::Io(std::io::Error::new(
            std::io::ErrorKind::InvalidInput,
            format!("{} is a directory", path.display()),
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------- gen-activity

#[derive(Debug, Clone)]
pub struct GenActivity {
    pub users: usize,
    pub slots: usize,
    pub seed: u64,
    pub activity: ActivitySource,
    pub out: PathBuf,
}

pub fn gen_activity(cmd: &GenActivity) -> Result<ActivityMatrix> {
    check_out_path(&cmd.out)?;
    if cmd.users == 0 || cmd.slots == 0 {
        return Err(Error::Precondition("users and slots must be positive".into()));
    }
    let d = cmd.activity.matrix(cmd.users, cmd.slots, RngSeed(cmd.seed))?;
    io::save_activity_matrix(&cmd.out, &d)?;
    Ok(d)
}

// ---------------------------------------------------------------- bounds-sweep

/// Which bracket a sweep reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundKind {
    /// Uniform-activity bracket when activity is `uniform:<p>`, the
    /// association is uniform and `Λ | K`; arbitrary-activity bracket otherwise.
    #[default]
    Auto,
    Arbitrary,
    Uniform,
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(BoundKind::Auto),
            "arbitrary" => Ok(BoundKind::Arbitrary),
            "uniform" => Ok(BoundKind::Uniform),
            _ => Err(Error::Parse(format!("bound must be auto, arbitrary or uniform, got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BoundsSweep {
    pub users: Vec<usize>,
    pub states: Vec<usize>,
    pub gammas: Vec<Gamma>,
    pub activity: ActivitySource,
    /// Association under test: random, uniform or stat-greedy.
    pub policy: Policy,
    pub bound: BoundKind,
    pub samples: usize,
    pub seed: u64,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub users: usize,
    pub states: usize,
    pub gamma: f64,
    pub t: usize,
    pub upper: f64,
    pub lower: f64,
    pub sbn_mean: f64,
    pub sbn_stderr: f64,
}

pub const SWEEP_HEADER: &str = "K,Lambda,gamma,t,AUB,ALB,SBN_mean,SBN_stderr";

pub fn bounds_sweep(cmd: &BoundsSweep) -> Result<Vec<SweepRow>> {
    check_out_path(&cmd.out)?;
    if cmd.users.is_empty() || cmd.states.is_empty() || cmd.gammas.is_empty() {
        return Err(Error::Precondition("sweep ranges must be non-empty".into()));
    }
    if cmd.samples == 0 {
        return Err(Error::Precondition("samples must be at least 1".into()));
    }
    if matches!(cmd.policy, Policy::VectorScheduling | Policy::SumSquares) {
        return Err(Error::Precondition(format!(
            "bounds-sweep evaluates random, uniform or stat-greedy associations, not {}",
            cmd.policy
        )));
    }
    let mut points = Vec::new();
    for &k in &cmd.users {
        for &lambda in &cmd.states {
            for &gamma in &cmd.gammas {
                points.push((k, lambda, gamma));
            }
        }
    }
    let rows: Vec<Option<SweepRow>> = points
        .par_iter()
        .enumerate()
        .map(|(i, &(k, lambda, gamma))| sweep_point(cmd, RngSeed(cmd.seed).derive(i as u64), k, lambda, gamma))
        .collect::<Result<_>>()?;
    let rows: Vec<SweepRow> = rows.into_iter().flatten().collect();

    let mut w = io::csv_writer(File::create(&cmd.out)?);
    w.write_record(SWEEP_HEADER.split(','))?;
    for r in &rows {
        w.serialize((r.users, r.states, r.gamma, r.t, r.upper, r.lower, r.sbn_mean, r.sbn_stderr))?;
    }
    w.flush()?;
    Ok(rows)
}

fn sweep_point(
    cmd: &BoundsSweep,
    seed: RngSeed,
    k: usize,
    lambda: usize,
    gamma: Gamma,
) -> Result<Option<SweepRow>> {
    let config = match SystemConfig::new(k, lambda, gamma) {
        Ok(c) if lambda >= 2 => c,
        Ok(_) => {
            warn!("skipping K={k} Lambda={lambda} gamma={gamma}: bounds need Lambda >= 2");
            return Ok(None);
        }
        Err(e) => {
            warn!("skipping K={k} Lambda={lambda} gamma={gamma}: {e}");
            return Ok(None);
        }
    };
    let profile = cmd.activity.profile(k)?;
    let assoc = match cmd.policy {
        Policy::Random => assoc_random(k, lambda, seed.derive(0))?,
        Policy::Uniform => assoc_uniform(k, lambda)?,
        Policy::StatGreedy => assoc_stat_greedy(&profile, lambda)?.assoc,
        _ => unreachable!("rejected above"),
    };
    let uniform_p = match cmd.activity {
        ActivitySource::Uniform(p) => Some(p),
        _ => None,
    };
    let use_uniform = match cmd.bound {
        BoundKind::Uniform => true,
        BoundKind::Arbitrary => false,
        BoundKind::Auto => uniform_p.is_some() && cmd.policy == Policy::Uniform && k.is_multiple_of(lambda),
    };
    let bounds: DelayBounds = if use_uniform {
        let p = uniform_p.ok_or_else(|| {
            Error::Precondition("the uniform bracket needs --activity uniform:<p>".into())
        })?;
        if cmd.policy != Policy::Uniform {
            return Err(Error::Precondition(
                "the uniform bracket needs the uniform association".into(),
            ));
        }
        if !k.is_multiple_of(lambda) {
            warn!("skipping K={k} Lambda={lambda}: uniform bracket needs Lambda | K");
            return Ok(None);
        }
        uniform_activity_bounds(&config, k / lambda, p)?
    } else {
        arbitrary_activity_bounds(&assoc, &profile, &config)?
    };
    let sbn = sbn_estimate(&assoc, &profile, &config, cmd.samples, seed.derive(1))?;
    Ok(Some(SweepRow {
        users: k,
        states: lambda,
        gamma: config.gamma_f64(),
        t: config.t(),
        upper: bounds.upper,
        lower: bounds.lower,
        sbn_mean: sbn.mean,
        sbn_stderr: sbn.std_error,
    }))
}

// ---------------------------------------------------------------- associate

#[derive(Debug, Clone)]
pub struct Associate {
    pub policy: Policy,
    pub users: usize,
    pub states: usize,
    pub gamma: Gamma,
    pub activity: ActivitySource,
    /// History length when the matrix is sampled rather than read.
    pub slots: usize,
    pub seed: u64,
    pub vector_scheduling: VectorSchedulingOptions,
    pub out: PathBuf,
}

#[derive(Debug, Clone)]
pub struct AssociateOutcome {
    pub report: AlgoReport,
    pub delay: f64,
    pub lower_bound: f64,
}

/// Runs one policy on one workload.
pub fn run_policy(
    policy: Policy,
    profile: &ActivityProfile,
    demands: &ActivityMatrix,
    num_states: usize,
    seed: RngSeed,
    vs: VectorSchedulingOptions,
) -> Result<AlgoReport> {
    let k = demands.num_users();
    let baseline = |assoc: Association| AlgoReport {
        assoc,
        objective: f64::NAN,
        objective_trace: Vec::new(),
        placements: Vec::new(),
        residual_users: Vec::new(),
        alpha: None,
        phase_one_max_load: None,
    };
    match policy {
        Policy::Random => Ok(baseline(assoc_random(k, num_states, seed)?)),
        Policy::Uniform => Ok(baseline(assoc_uniform(k, num_states)?)),
        Policy::StatGreedy => assoc_stat_greedy(profile, num_states),
        Policy::VectorScheduling => assoc_vector_scheduling(demands, num_states, vs),
        Policy::SumSquares => assoc_sum_squares_greedy(demands, num_states),
    }
}

pub fn associate(cmd: &Associate) -> Result<AssociateOutcome> {
    check_out_path(&cmd.out)?;
    let config = SystemConfig::new(cmd.users, cmd.states, cmd.gamma)?;
    let seed = RngSeed(cmd.seed);
    if cmd.policy == Policy::VectorScheduling && !matches!(cmd.activity, ActivitySource::File(_)) {
        crate::association::vector_scheduling_alpha(cmd.slots)?;
    }
    let demands = cmd.activity.matrix(cmd.users, cmd.slots, seed.derive(0))?;
    let profile = match cmd.activity {
        ActivitySource::File(_) => ActivityProfile::new(demands.column_means())?,
        ref other => other.profile(cmd.users)?,
    };
    let report = run_policy(cmd.policy, &profile, &demands, cmd.states, seed.derive(1), cmd.vector_scheduling)?;
    let delay = avg_delay_data(&report.assoc, &demands, &config)?;
    let lower_bound = data_driven_lower_bound(&demands, &config)?;
    io::save_association(&cmd.out, &report.assoc)?;
    Ok(AssociateOutcome {
        report,
        delay,
        lower_bound,
    })
}

// ---------------------------------------------------------------- compare

#[derive(Debug, Clone)]
pub struct Compare {
    pub policies: Vec<Policy>,
    pub users: usize,
    pub states: usize,
    pub gamma: Gamma,
    pub slots: usize,
    pub repetitions: usize,
    pub activity: ActivitySource,
    pub seed: u64,
    pub vector_scheduling: VectorSchedulingOptions,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub instance_id: usize,
    pub policy: Policy,
    pub delay: f64,
    pub lower_bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolicySummary {
    pub policy: Policy,
    pub mean_delay: f64,
    pub std_delay: f64,
    pub mean_ratio: f64,
}

#[derive(Debug, Clone)]
pub struct CompareOutcome {
    pub rows: Vec<CompareRow>,
    pub summary: Vec<PolicySummary>,
}

pub const COMPARE_HEADER: &str = "instance_id,algo,delay,lower_bound,ratio";

pub fn compare(cmd: &Compare) -> Result<CompareOutcome> {
    check_out_path(&cmd.out)?;
    if cmd.repetitions == 0 {
        return Err(Error::Precondition("repetitions must be at least 1".into()));
    }
    if cmd.policies.is_empty() {
        return Err(Error::Precondition("at least one algorithm is required".into()));
    }
    let config = SystemConfig::new(cmd.users, cmd.states, cmd.gamma)?;
    if cmd.policies.contains(&Policy::VectorScheduling) && !matches!(cmd.activity, ActivitySource::File(_)) {
        crate::association::vector_scheduling_alpha(cmd.slots)?;
    }
    let per_rep: Vec<Vec<CompareRow>> = (0..cmd.repetitions)
        .into_par_iter()
        .map(|rep| {
            let seed = RngSeed(cmd.seed).derive(rep as u64);
            let demands = cmd.activity.matrix(cmd.users, cmd.slots, seed.derive(0))?;
            let profile = match cmd.activity {
                ActivitySource::File(_) => ActivityProfile::new(demands.column_means())?,
                ref other => other.profile(cmd.users)?,
            };
            let lower_bound = data_driven_lower_bound(&demands, &config)?;
            cmd.policies
                .iter()
                .map(|&policy| {
                    let report = run_policy(policy, &profile, &demands, cmd.states, seed.derive(1), cmd.vector_scheduling)?;
                    let delay = avg_delay_data(&report.assoc, &demands, &config)?;
                    Ok(CompareRow {
                        instance_id: rep + 1,
                        policy,
                        delay,
                        lower_bound,
                        ratio: if lower_bound > 0.0 { delay / lower_bound } else { 1.0 },
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let rows: Vec<CompareRow> = per_rep.into_iter().flatten().collect();

    let mut summary = Vec::new();
    for &policy in &cmd.policies {
        let delays: Vec<f64> = rows.iter().filter(|r| r.policy == policy).map(|r| r.delay).collect();
        let ratios: Vec<f64> = rows.iter().filter(|r| r.policy == policy).map(|r| r.ratio).collect();
        let n = delays.len() as f64;
        let mean = delays.iter().sum::<f64>() / n;
        let var = if delays.len() > 1 {
            delays.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        summary.push(PolicySummary {
            policy,
            mean_delay: mean,
            std_delay: var.sqrt(),
            mean_ratio: ratios.iter().sum::<f64>() / n,
        });
    }

    let mut w = io::csv_writer(File::create(&cmd.out)?);
    w.write_record(COMPARE_HEADER.split(','))?;
    for r in &rows {
        w.serialize((r.instance_id, r.policy.name(), r.delay, r.lower_bound, r.ratio))?;
    }
    w.flush()?;
    Ok(CompareOutcome { rows, summary })
}

/// Parses `"a,b,c"` or `"start:end:step"` (inclusive) into a list.
pub fn parse_usize_list(text: &str) -> Result<Vec<usize>> {
    let bad = || Error::Parse(format!("expected a list like 10,20 or 50:500:50, got {text:?}"));
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [single] => single
            .split(',')
            .map(|v| v.trim().parse().map_err(|_| bad()))
            .collect(),
        [start, end, step] => {
            let (start, end, step): (usize, usize, usize) = (
                start.trim().parse().map_err(|_| bad())?,
                end.trim().parse().map_err(|_| bad())?,
                step.trim().parse().map_err(|_| bad())?,
            );
            if step == 0 || end < start {
                return Err(bad());
            }
            Ok((start..=end).step_by(step).collect())
        }
        _ => Err(bad()),
    }
}
