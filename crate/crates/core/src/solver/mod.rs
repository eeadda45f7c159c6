//! Problem instances, reductions between the arc and vertex forms, and the
//! bounded search: iterative compression, disjointness guesses, covering,
//! torso reduction and branching.

mod instance;
mod search;

use std::time::Duration;

use thiserror::Error;

use crate::graph::VertexSet;
use crate::sampling::{SamplingConfig, SamplingError, SamplingMode};

pub use instance::{
    edge_to_vertex, has_s_closed_walk, has_s_closed_walk_through, vertex_to_edge,
    verify_compression, verify_solution, CompressionInstance, EdgeInstance, EndpointSets,
    InstanceError, Solution, VertexInstance,
};
pub use search::{
    branch, critical_union, critical_vertex_superset, preprocess, AugmentedGraph,
    AuxCriticalGraph, Solver,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error("search node limit of {0} reached")]
    NodeLimit(u64),
    #[error("time limit reached")]
    Timeout,
    #[error("internal error: a lifted solution failed verification")]
    Uncertified,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    pub sampling: SamplingConfig,
    pub max_nodes: Option<u64>,
    pub timeout: Option<Duration>,
    /// Monte Carlo reruns with doubled trial counts after a NO.
    pub retries: u32,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            sampling: SamplingConfig::default(),
            max_nodes: None,
            timeout: None,
            retries: 1,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub trials: u64,
    pub covering_calls: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub solution: Option<Solution>,
    pub stats: SearchStats,
    /// `false` when a NO may be a Monte Carlo miss.
    pub exact: bool,
}

/// Solves `inst`. YES answers are always certified; a NO is exact unless
/// the sampling mode is Monte Carlo.
pub fn solve(inst: &EdgeInstance, config: &SolverConfig) -> Result<SolveReport, SolveError> {
    let mut solver = Solver::new(config.clone());
    let solution = solver.solve(inst)?;
    Ok(SolveReport {
        exact: solution.is_some() || config.sampling.mode != SamplingMode::MonteCarlo,
        solution,
        stats: solver.stats().clone(),
    })
}

/// [`Solver::solve_compression`] with a fresh solver.
pub fn solve_compression(
    inst: &CompressionInstance,
    config: &SolverConfig,
) -> Result<Option<VertexSet>, SolveError> {
    Solver::new(config.clone()).solve_compression(inst)
}

/// [`Solver::solve_disjoint_compression`] with a fresh solver.
pub fn solve_disjoint_compression(
    inst: &CompressionInstance,
    config: &SolverConfig,
) -> Result<Option<VertexSet>, SolveError> {
    Solver::new(config.clone()).solve_disjoint_compression(inst)
}
