//! Repeated comparison of every policy, as run by `ccsim compare`.

use ccsim::experiments::{compare, ActivitySource, Compare};
use ccsim::model::parse_gamma;
use ccsim::Policy;

fn main() -> ccsim::Result<()> {
    let out = std::env::temp_dir().join("ccsim-compare.csv");
    let outcome = compare(&Compare {
        policies: Policy::ALL.to_vec(),
        users: 100,
        states: 10,
        gamma: parse_gamma("1/5")?,
        slots: 200,
        repetitions: 10,
        activity: ActivitySource::Pareto,
        seed: 0,
        vector_scheduling: Default::default(),
        out: out.clone(),
    })?;
    for s in &outcome.summary {
        println!("{:>12}: delay {:.4} ± {:.4}, delay / lower bound {:.4}", s.policy, s.mean_delay, s.std_delay, s.mean_ratio);
    }
    println!("per-instance rows written to {}", out.display());
    Ok(())
}
