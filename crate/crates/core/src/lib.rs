//! Simplified swarm optimization (SSO) with two execution schedules.
//!
//! * [`sequential`]: particles are processed one after another and each
//!   global-best improvement is visible to the next particle immediately.
//! * [`parallel`]: all particles search, then all are evaluated, then the
//!   bests are updated, with a barrier between phases, on a thread pool.
//!
//! Both schedules draw randomness from the same counter-based stream
//! ([`rng::RngStream`]), so a run is a pure function of its parameters and
//! seed. [`benchmarks`] holds the test-function suite, [`stats`] the
//! hypothesis tests used to compare runs, and [`harness`] the experiment
//! driver with CSV output.

pub mod benchmarks;
pub mod error;
pub mod harness;
pub mod layout;
pub mod objective;
pub mod parallel;
pub mod params;
pub mod rng;
pub mod sequential;
pub mod stats;
pub mod step;
pub mod swarm;

pub use error::{Result, SsoError};
pub use layout::{convert_layout, LayoutMode, ParticleMatrix};
pub use objective::Objective;
pub use parallel::{run_parallel, Schedule, ScheduleKind};
pub use params::SsoParams;
pub use rng::RngStream;
pub use sequential::{run_sequential, RunOutcome};
pub use step::{step_update_variable, Branch};
pub use swarm::{initialize, Swarm};
