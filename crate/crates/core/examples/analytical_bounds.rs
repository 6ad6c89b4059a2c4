//! Analytical brackets on the average delay against a sampled estimate.

use ccsim::association::assoc_uniform;
use ccsim::bounds::{arbitrary_activity_bounds, sbn_estimate, uniform_activity_bounds};
use ccsim::model::{ActivityProfile, SystemConfig};
use ccsim::synthetic::{pareto_activity, RngSeed};

fn main() -> ccsim::Result<()> {
    println!("{:>4} {:>8} {:>8} {:>8} {:>8}", "K", "lower", "sampled", "upper", "kind");
    for k in [50, 100, 200] {
        let config = SystemConfig::with_replication(k, 10, 2)?;
        let assoc = assoc_uniform(k, 10)?;

        let pareto = pareto_activity(k)?;
        let b = arbitrary_activity_bounds(&assoc, &pareto, &config)?;
        let est = sbn_estimate(&assoc, &pareto, &config, 20_000, RngSeed(1))?;
        println!("{k:>4} {:>8.3} {:>8.3} {:>8.3} {:>8}", b.lower, est.mean, b.upper, "pareto");

        let uniform = ActivityProfile::uniform(k, 0.2)?;
        let b = uniform_activity_bounds(&config, k / 10, 0.2)?;
        let est = sbn_estimate(&assoc, &uniform, &config, 20_000, RngSeed(2))?;
        println!("{k:>4} {:>8.3} {:>8.3} {:>8.3} {:>8}", b.lower, est.mean, b.upper, "p=0.2");
    }
    Ok(())
}
