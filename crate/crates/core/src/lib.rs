//! Coded caching with a limited number of cache states and users whose
//! activity varies from slot to slot.
//!
//! The crate computes the delivery time of a load profile, brackets the
//! expected delivery time analytically, samples it, and assigns users to
//! cache states with statistics-driven or data-driven policies.
//!
//! ```
//! use ccsim::model::{delivery_time, load_vector, profile, Association, SystemConfig};
//!
//! let config = SystemConfig::with_replication(6, 3, 1).unwrap();
//! let assoc = Association::new(vec![0, 1, 2, 0, 1, 2], 3).unwrap();
//! // users 1, 2 and 4 are active: loads [2, 1, 0]
//! let loads = load_vector(&assoc, &[0, 1, 3], &config).unwrap();
//! let t = delivery_time(&profile(&loads), &config).unwrap();
//! assert!((t - 5.0 / 3.0).abs() < 1e-12);
//! ```

pub mod association;
pub mod bounds;
pub mod combinatorics;
pub mod error;
pub mod experiments;
pub mod io;
pub mod model;
pub mod synthetic;

pub use association::{AlgoReport, Policy, VectorSchedulingOptions};
pub use bounds::{DelayBounds, SbnEstimate};
pub use error::{Error, Result};
pub use model::{ActivityMatrix, ActivityProfile, Association, SystemConfig};
pub use synthetic::RngSeed;
