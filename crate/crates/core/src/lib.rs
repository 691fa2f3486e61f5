//! Adaptive kriging for learning binary decision regions of a black-box
//! response from few evaluations.
//!
//! A constant-mean kriging surrogate with a Matérn 3/2 correlation is refitted
//! after every new observation. New points come either from space-filling
//! exploration over a Monte-Carlo candidate pool, or from exploitation of the
//! Voronoi cell of the most promising minor-class sample; a randomly switched,
//! geometrically decaying exploration rate chooses between the two.

pub mod classify;
pub mod controller;
pub mod dataset;
pub mod design;
pub mod error;
pub mod kernel;
pub mod kriging;
pub mod mipt;
pub mod problems;
pub mod swarm;
pub mod voronoi;

pub use classify::{Class, ClassRule};
pub use controller::{run, run_with, ExplorationSchedule, MivorConfig, MivorState, PoolSize, StepKind, StepRecord};
pub use dataset::{Dataset, ParameterDomain};
pub use design::{mc_pool, tplhd, MonteCarloPool, RngStream};
pub use error::{Error, EvalError, Result};
pub use kernel::{matern32, Hyperparameters};
pub use kriging::{reduced_likelihood, KrigingModel, Likelihood, NuggetPolicy, Prediction};
pub use problems::{Benchmark, Problem};
pub use swarm::SwarmConfig;
