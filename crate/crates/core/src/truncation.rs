//! Combinatorial vertex truncation and its identification with the Hanoi
//! graph on all (not necessarily proper) states.
//!
//! Truncating a graph replaces each vertex `x` of degree `δ` by the `δ`
//! ordered pairs `(x, y)` over its neighbors. The old edge `x - y` survives
//! as the partner edge `(x, y) - (y, x)`, and the pairs around one old vertex
//! form a clique of sibling edges `(x, y) - (x, z)`. Starting from
//! `K_{r+1}`, `k - 1` truncations give a graph isomorphic to the Hanoi graph
//! of length-`k` states over `{0, ..., r}`; the pair `(x, y)` maps to `x`
//! followed by the last entry of `y`.

use std::collections::HashSet;

use thiserror::Error;

use crate::graph::{ExplicitGraph, GraphError};
use crate::hanoi::{self, HanoiError, HanoiParams, HanoiState, Move};

#[derive(Debug, Error)]
pub enum TruncationError {
    #[error("cannot truncate a graph without edges")]
    EmptyGraph,
    #[error("labels do not fit the parameters: {0}")]
    WrongShape(String),
    #[error(transparent)]
    Hanoi(#[from] HanoiError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A graph whose vertices carry Hanoi states of one common length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    pub graph: ExplicitGraph,
    pub state_labels: Vec<HanoiState>,
}

impl LabeledGraph {
    pub fn label_length(&self) -> usize {
        self.state_labels.first().map_or(0, HanoiState::len)
    }

    /// The graph with its state labels attached as text.
    pub fn to_explicit(&self) -> Result<ExplicitGraph, GraphError> {
        self.graph
            .clone()
            .with_labels(self.state_labels.iter().map(ToString::to_string).collect())
    }
}

/// `K_{r+1}` with vertex `i` labelled by the one-entry state `(i)`.
pub fn base_simplex(r: u32) -> LabeledGraph {
    LabeledGraph {
        graph: ExplicitGraph::complete(r as usize + 1),
        state_labels: (0..=r).map(|i| HanoiState::from_raw(vec![i])).collect(),
    }
}

/// Kind of an edge produced by truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    /// `(x, y) - (y, x)`, the surviving old edge.
    Partner,
    /// `(x, y) - (x, z)`, around one old vertex.
    Sibling,
}

/// Output of [`truncate_with_pairs`].
pub type Truncated = (
    LabeledGraph,
    Vec<(usize, usize)>,
    Vec<(usize, usize, EdgeKind)>,
);

/// One truncation step, also returning the old `(x, y)` pair of every new
/// vertex and the kind of every new edge.
pub fn truncate_with_pairs(t: &LabeledGraph) -> Result<Truncated, TruncationError> {
    let g = &t.graph;
    if g.edge_count() == 0 {
        return Err(TruncationError::EmptyGraph);
    }
    // pair (x, y) gets id first[x] + position of y in x's sorted neighbor list
    let mut first = Vec::with_capacity(g.n() + 1);
    first.push(0usize);
    for x in 0..g.n() {
        first.push(first[x] + g.degree(x));
    }
    let pair_id = |x: usize, y: usize| -> usize {
        first[x] + g.neighbors(x).binary_search(&(y as u32)).expect("adjacent")
    };

    let mut pairs = Vec::with_capacity(first[g.n()]);
    for x in 0..g.n() {
        pairs.extend(g.neighbors(x).iter().map(|&y| (x, y as usize)));
    }

    let mut edges = Vec::new();
    for (id, &(x, y)) in pairs.iter().enumerate() {
        let partner = pair_id(y, x);
        if id < partner {
            edges.push((id, partner, EdgeKind::Partner));
        }
        for sib in id + 1..first[x + 1] {
            edges.push((id, sib, EdgeKind::Sibling));
        }
    }
    let plain: Vec<(usize, usize)> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
    let graph = ExplicitGraph::from_edges(pairs.len(), &plain)?;

    let state_labels = pairs
        .iter()
        .map(|&(x, y)| {
            let mut entries = t.state_labels[x].entries().to_vec();
            entries.push(*t.state_labels[y].entries().last().expect("nonempty label"));
            HanoiState::from_raw(entries)
        })
        .collect();
    Ok((
        LabeledGraph {
            graph,
            state_labels,
        },
        pairs,
        edges,
    ))
}

pub fn truncate_once(t: &LabeledGraph) -> Result<LabeledGraph, TruncationError> {
    truncate_with_pairs(t).map(|(g, _, _)| g)
}

/// `base_simplex(r)` truncated `k - 1` times.
pub fn iterate_truncation(r: u32, k: usize, cap: u64) -> Result<LabeledGraph, TruncationError> {
    HanoiParams::improper(r, k)?.checked_state_count(cap)?;
    let mut t = base_simplex(r);
    for _ in 1..k {
        t = truncate_once(&t)?;
    }
    Ok(t)
}

/// Checks that the labels are a bijection onto all improper states of the
/// given parameters, that every edge joins two states one move apart, and
/// that both graphs are `r`-regular.
pub fn verify_isomorphism(t: &LabeledGraph, params: &HanoiParams) -> Result<bool, TruncationError> {
    let params = params.with_proper(false);
    if t.state_labels.len() != t.graph.n() {
        return Err(TruncationError::WrongShape(format!(
            "{} labels for {} vertices",
            t.state_labels.len(),
            t.graph.n()
        )));
    }
    if let Some(bad) = t.state_labels.iter().find(|s| s.len() != params.k()) {
        return Err(TruncationError::WrongShape(format!(
            "label {bad} has length {}, expected {}",
            bad.len(),
            params.k()
        )));
    }

    let expected = params.state_count().expect("small parameters");
    if t.graph.n() as u128 != expected {
        return Ok(false);
    }
    let mut seen = HashSet::with_capacity(t.graph.n());
    for s in &t.state_labels {
        if params.validate(s.entries()).is_err() || !seen.insert(s.entries()) {
            return Ok(false);
        }
    }

    let r = params.r() as usize;
    if t.graph.regular_degree() != Some(r) {
        return Ok(false);
    }
    for (u, v) in t.graph.edges() {
        let (a, b) = (&t.state_labels[u], &t.state_labels[v]);
        if !one_move_apart(a, b, &params) {
            return Ok(false);
        }
    }
    // the Hanoi side: every state has exactly r moves
    let hanoi_regular = t
        .state_labels
        .iter()
        .all(|s| hanoi::legal_moves(s, &params).len() == r);
    Ok(hanoi_regular)
}

fn one_move_apart(a: &HanoiState, b: &HanoiState, params: &HanoiParams) -> bool {
    let k = a.len();
    let adjust =
        a.entries()[..k - 1] == b.entries()[..k - 1] && a.entries()[k - 1] != b.entries()[k - 1];
    adjust || (k >= 2 && hanoi::apply_move(a, Move::Involute, params).is_ok_and(|x| &x == b))
}
