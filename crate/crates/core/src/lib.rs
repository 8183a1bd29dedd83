//! Exact fair division of mixed goods and bads with few sharings.
//!
//! The library finds envy-free or proportional allocations that are
//! fractionally Pareto-optimal (fPO) and, among those, minimize how many
//! objects have to be split. Everything is computed over exact rationals.
//!
//! The pipeline is: enumerate every consumption graph an fPO allocation can
//! have ([`enumerate`]), then for each candidate solve a small fairness LP
//! ([`lp`]) and keep the best graph ([`solver`]). [`improve`] turns any
//! allocation into a dominating fPO one with at most `n - 1` sharings, and
//! [`oracle`] provides brute-force ground truth for small instances.

pub mod degeneracy;
pub mod enumerate;
pub mod error;
pub mod exec;
pub mod fairness;
pub mod graph;
pub mod improve;
pub mod instances;
pub mod io;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod rational;
pub mod solver;

pub use degeneracy::degeneracy;
pub use enumerate::{enumerate_fpo_graphs, EnumerateOptions, FpoGraphSet};
pub use error::{Error, Result};
pub use exec::Execution;
pub use fairness::{is_fair, sharing_stats, utilities, utility};
pub use graph::{is_fpo, is_fpo_graph, ucg_of, ConsumptionGraph, WeightCertificate};
pub use model::{
    Allocation, FairnessKind, FairnessSpec, Instance, ObjectClass, Objective, SharingStats,
};
pub use rational::Rational;
pub use solver::{
    solve_consensus, solve_min_sharing, solve_min_sharing_with, SolveOptions, SolveResult,
};
