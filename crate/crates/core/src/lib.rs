//! Fair diversity maximization over colored point sets.
//!
//! Given points split into `m` color groups and per-color quotas `k_1..k_m`,
//! pick exactly `k_i` points of every color so that the diversity of the union
//! is as large as possible. Three measures are supported: minimum pairwise
//! distance, sum of pairwise distances and sum of nearest-neighbour distances.
//!
//! The crate provides
//! * farthest-point greedy ([`gmm`]) and the two per-color composable
//!   core-sets built on it ([`coreset_sp`], [`coreset_nn`]),
//! * the ball-packing solver for the sum-of-nearest-neighbour measure
//!   ([`fdm_nn`]),
//! * exact and baseline solvers ([`solvers`]),
//! * ingestion, synthetic data and the experiment runner ([`pipeline`]).

pub mod coreset_nn;
pub mod coreset_sp;
pub mod dataset;
pub mod error;
pub mod fdm_nn;
pub mod gmm;
pub mod metric;
pub mod pipeline;
pub mod solvers;

pub use dataset::{ColoredDataset, Point, PointId, Quota, Selection};
pub use error::{Error, Result};
pub use fdm_nn::{solve_fdm_sum_nn, BallApproach, BallSet, SumNnConfig};
pub use gmm::{gmm, GmmRun};
pub use metric::{Measure, Metric};
pub use solvers::{brute_force_fdm, solve_dm, solve_fdm, SolverConfig};
