//! Associations learned from an activity history and evaluated on fresh slots.

use ccsim::association::{assoc_random, assoc_sum_squares_greedy, assoc_vector_scheduling};
use ccsim::bounds::data_driven_lower_bound;
use ccsim::model::{avg_delay_data, SystemConfig};
use ccsim::synthetic::{pareto_activity, sample_activity_matrix, RngSeed};

fn main() -> ccsim::Result<()> {
    let (k, lambda) = (100, 10);
    let config = SystemConfig::with_replication(k, lambda, 2)?;
    let activity = pareto_activity(k)?;
    let history = sample_activity_matrix(&activity, 200, RngSeed(1))?;
    let future = sample_activity_matrix(&activity, 2000, RngSeed(2))?;

    let vs = assoc_vector_scheduling(&history, lambda, Default::default())?;
    println!("vector scheduling: alpha {:.2}, {} deferred users", vs.alpha.unwrap_or(0.0), vs.residual_users.len());
    let sq = assoc_sum_squares_greedy(&history, lambda)?;
    let random = assoc_random(k, lambda, RngSeed(3))?;

    println!("lower bound on history: {:.4}", data_driven_lower_bound(&history, &config)?);
    for (name, assoc) in [("random", &random), ("vecsched", &vs.assoc), ("sumsq", &sq.assoc)] {
        println!(
            "{name:>9}: history {:.4}, future {:.4}",
            avg_delay_data(assoc, &history, &config)?,
            avg_delay_data(assoc, &future, &config)?
        );
    }
    Ok(())
}
