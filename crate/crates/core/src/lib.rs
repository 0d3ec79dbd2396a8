//! Online learning with adversarial losses and graph-structured side observations.
//!
//! Exp3-SET and Exp3-DOM, the environments that drive them, a reproducible
//! experiment harness and numerical checks of the graph inequalities behind
//! their regret bounds.

pub mod config;
pub mod environments;
pub mod error;
pub mod graphs;
pub mod harness;
pub mod oracles;
pub mod policies;
pub mod report;
pub mod seeds;

pub use config::{Experiment, ExperimentConfig, SweepAxis};
pub use environments::{GraphProcess, LossProcess};
pub use error::{ConfigError, EnvError, GraphError, HarnessError, PolicyError};
pub use graphs::{DirectedGraph, GraphStats};
pub use harness::{run_batch, run_episode, BatchResult, ExperimentResult, Policy, Setting};
pub use policies::{Exp3Dom, Exp3Set, GammaSchedule};
pub use seeds::EpisodeSeeds;
