//! The five-class power-law workload and recorded activity files.

use ccsim::io::{read_activity_matrix, write_activity_matrix};
use ccsim::synthetic::{pareto_activity, sample_activity_matrix, RngSeed};

fn main() -> ccsim::Result<()> {
    let activity = pareto_activity(20)?;
    println!("per-class activity: {:.4?}", activity.probs().chunks(4).map(|c| c[0]).collect::<Vec<_>>());
    let top: f64 = activity.probs()[..4].iter().sum();
    println!("expected active users {:.1}, top 20% share {:.3}", activity.aggregate(), top / activity.aggregate());

    let d = sample_activity_matrix(&activity, 6, RngSeed(42))?;
    let mut csv = Vec::new();
    write_activity_matrix(&mut csv, &d)?;
    print!("{}", String::from_utf8_lossy(&csv));
    assert_eq!(read_activity_matrix(&csv[..])?, d);
    Ok(())
}
