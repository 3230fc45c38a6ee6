//! Distance-uniform graphs from a generalized Tower of Hanoi game.
//!
//! The proper Hanoi graph on length-`k` states over `{0, ..., r}` has `r^k`
//! vertices, and from every vertex all but a `k^2/r` fraction of the others
//! lie at distance exactly `2^k - 1`. This crate builds those graphs, solves
//! the game constructively, analyzes arbitrary graphs for distance uniformity,
//! checks the general upper bounds on concrete graphs, plans parameters for a
//! target size and ε, and identifies the improper Hanoi graph with iterated
//! truncations of a simplex.

pub mod blowup;
pub mod bounds;
pub mod graph;
pub mod hanoi;
pub mod planner;
pub mod rational;
pub mod solver;
pub mod truncation;
pub mod uniformity;
pub mod verify;

pub use blowup::{blow_up, copy_origins};
pub use bounds::{check_min_degree, check_neighborhood_growth, check_upper_bound};
pub use graph::{
    bfs_distances, build_explicit, diameter, load_edge_list, save_edge_list, ExplicitGraph,
    GraphError,
};
pub use hanoi::{
    apply_move, enumerate_states, has_disjoint_support, involution_segment, legal_moves,
    make_state, neighbors, HanoiError, HanoiParams, HanoiState, Move, DEFAULT_STATE_CAP,
};
pub use planner::{build_planned_graph, plan_parameters, Plan, PlanError, PlanMode};
pub use rational::Rational;
pub use solver::{solve, verify_path, MovePath};
pub use truncation::{
    base_simplex, iterate_truncation, truncate_once, verify_isomorphism, LabeledGraph,
};
pub use uniformity::{best_uniformity, is_distance_uniform, sampled_uniformity, UniformityReport};
