//! End-to-end self-check for one `(r, k)`: state counts, symmetry, solver
//! against BFS, exact distance on disjoint pairs, uniformity, diameter, the
//! bound checkers and the truncation isomorphism.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::check_all;
use crate::graph::{bfs_into, build_explicit, diameter, ExplicitGraph, UNREACHABLE};
use crate::hanoi::{
    self, apply_move, enumerate_states, has_disjoint_support, neighbors, HanoiParams, HanoiState,
    Move, StateSpace,
};
use crate::rational::{format_rational, ratio};
use crate::solver::{solve, verify_path};
use crate::truncation::{iterate_truncation, verify_isomorphism};
use crate::uniformity::{best_uniformity, is_distance_uniform};

/// Largest state count for which the quadratic checks run.
pub const ALL_PAIRS_LIMIT: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub r: u32,
    pub k: usize,
    pub rows: Vec<CheckRow>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.status != Status::Fail)
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("verify r={} k={}\n", self.r, self.k);
        for row in &self.rows {
            let tag = match row.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            out.push_str(&format!("{tag}\t{}\t{}\n", row.name, row.detail));
        }
        out
    }
}

fn row(name: &'static str, ok: bool, detail: impl Into<String>) -> CheckRow {
    CheckRow {
        name,
        status: if ok { Status::Pass } else { Status::Fail },
        detail: detail.into(),
    }
}

fn skipped(name: &'static str, detail: impl Into<String>) -> CheckRow {
    CheckRow {
        name,
        status: Status::Skipped,
        detail: detail.into(),
    }
}

/// Per-source checks of solver paths against BFS in the proper graph.
/// Returns `(pairs checked, disjoint pairs, first failure)`.
pub fn solver_against_bfs(params: &HanoiParams, g: &ExplicitGraph) -> (u64, u64, Option<String>) {
    let space = StateSpace::new(*params, u64::MAX).expect("graph already built");
    let n = g.n();
    let bound = (1u32 << params.k()) - 1;
    let results: Vec<(u64, u64, Option<String>)> = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![UNREACHABLE; n], VecDeque::new()),
            |(dist, queue), s| {
                dist.fill(UNREACHABLE);
                bfs_into(g, s, dist, queue);
                let a = space.state(s as u64);
                let mut disjoint = 0;
                for (t, &d) in dist.iter().enumerate() {
                    let b = space.state(t as u64);
                    if let Err(msg) = check_pair(&a, &b, d, bound, params) {
                        return (t as u64, disjoint, Some(format!("{a} -> {b}: {msg}")));
                    }
                    disjoint += u64::from(has_disjoint_support(&a, &b));
                }
                (n as u64, disjoint, None)
            },
        )
        .collect();
    let pairs = results.iter().map(|r| r.0).sum();
    let disjoint = results.iter().map(|r| r.1).sum();
    let failure = results.into_iter().find_map(|r| r.2);
    (pairs, disjoint, failure)
}

fn check_pair(
    a: &HanoiState,
    b: &HanoiState,
    bfs: u32,
    bound: u32,
    params: &HanoiParams,
) -> Result<(), String> {
    let path = solve(a, b, params).map_err(|e| e.to_string())?;
    let end = verify_path(&path, params).map_err(|e| e.to_string())?;
    if &end != b {
        return Err(format!("path ends at {end}"));
    }
    let len = path.len() as u32;
    if len > bound {
        return Err(format!("{len} moves exceed {bound}"));
    }
    if len < bfs {
        return Err(format!("{len} moves beat the BFS distance {bfs}"));
    }
    if has_disjoint_support(a, b) && (bfs != bound || len != bound) {
        return Err(format!(
            "disjoint pair at BFS distance {bfs}, path {len}, expected {bound}"
        ));
    }
    if let Some(s) = path
        .states()
        .iter()
        .find(|s| s.first() != a.first() && s.first() != b.first())
    {
        return Err(format!("intermediate {s} breaks the first-entry condition"));
    }
    Ok(())
}

/// Symmetry of the implicit move relation, by direct enumeration.
pub fn adjacency_symmetric(params: &HanoiParams, cap: u64) -> Result<bool, hanoi::HanoiError> {
    let states = enumerate_states(params, cap)?;
    Ok(states.par_iter().all(|x| {
        neighbors(x, params)
            .iter()
            .all(|y| y != x && neighbors(y, params).contains(x))
    }))
}

/// Involution applied twice is the identity, for every improper state.
pub fn involution_self_inverse(params: &HanoiParams, cap: u64) -> Result<bool, hanoi::HanoiError> {
    let params = params.with_proper(false);
    if params.k() < 2 {
        return Ok(true);
    }
    let states = enumerate_states(&params, cap)?;
    Ok(states.par_iter().all(|x| {
        apply_move(x, Move::Involute, &params)
            .and_then(|y| apply_move(&y, Move::Involute, &params))
            .is_ok_and(|z| &z == x)
    }))
}

pub fn run_suite(
    r: u32,
    k: usize,
    cap: u64,
) -> Result<SuiteReport, Box<dyn std::error::Error + Send + Sync>> {
    let proper = HanoiParams::proper(r, k)?;
    let improper = proper.with_proper(false);
    let mut rows = Vec::new();
    let bound = (1u64 << k) - 1;

    let n_proper = enumerate_states(&proper, cap)?.len() as u64;
    let n_improper = enumerate_states(&improper, cap)?.len() as u64;
    let (want_p, want_i) = (
        (r as u64).pow(k as u32),
        (r as u64 + 1) * (r as u64).pow(k as u32 - 1),
    );
    rows.push(row(
        "state_counts",
        n_proper == want_p && n_improper == want_i,
        format!("proper {n_proper} (want {want_p}), improper {n_improper} (want {want_i})"),
    ));

    let sym = adjacency_symmetric(&proper, cap)? && adjacency_symmetric(&improper, cap)?;
    rows.push(row("adjacency_symmetry", sym, "both modes"));
    rows.push(row(
        "involution_self_inverse",
        involution_self_inverse(&improper, cap)?,
        "improper mode",
    ));

    let g = build_explicit(&proper, cap)?;
    let gi = build_explicit(&improper, cap)?;
    let regular = k < 2 || gi.regular_degree() == Some(r as usize);
    rows.push(row(
        "improper_regularity",
        regular,
        format!("degree range {}..={}", gi.min_degree(), gi.max_degree()),
    ));

    if (2..=ALL_PAIRS_LIMIT).contains(&n_proper) {
        let (pairs, disjoint, failure) = solver_against_bfs(&proper, &g);
        let ok = failure.is_none();
        rows.push(row(
            "solver_vs_bfs",
            ok,
            failure
                .clone()
                .unwrap_or_else(|| format!("{pairs} ordered pairs, all paths <= {bound}")),
        ));
        rows.push(row(
            "disjoint_support_exact",
            ok,
            failure.unwrap_or_else(|| format!("{disjoint} disjoint pairs at distance {bound}")),
        ));

        // The claim is uniformity at d = 2^k - 1 with epsilon = k^2/r. When
        // k^2 >= r it is vacuous and the best d may sit elsewhere.
        let rep = best_uniformity(&g)?;
        let claim = ratio(k as u64 * k as u64, r as u64);
        rows.push(row(
            "uniformity",
            is_distance_uniform(&g, &claim, bound as u32),
            format!(
                "epsilon {} at d = {bound}; best d = {}, epsilon = {}",
                format_rational(&claim),
                rep.d,
                format_rational(&rep.epsilon())
            ),
        ));

        if r as usize > k {
            let diam = diameter(&g);
            rows.push(row(
                "diameter",
                diam == Some(bound as u32),
                format!("{diam:?} (want {bound})"),
            ));
        } else {
            rows.push(skipped("diameter", "needs r >= k + 1"));
        }

        let bounds = check_all(&g, &rep)?;
        rows.push(row(
            "bound_checkers",
            bounds.all_pass(),
            format!(
                "min degree {} ok={}, growth rows {} ok={}, upper bound ok={}",
                bounds.min_degree,
                bounds.min_degree_ok,
                bounds.growth.rows.len(),
                bounds.growth.all_pass(),
                bounds.upper_bound_ok
            ),
        ));
    } else {
        for name in [
            "solver_vs_bfs",
            "disjoint_support_exact",
            "uniformity",
            "diameter",
            "bound_checkers",
        ] {
            let why = if n_proper < 2 {
                format!("{n_proper} proper state")
            } else {
                format!("{n_proper} states above {ALL_PAIRS_LIMIT}")
            };
            rows.push(skipped(name, why));
        }
    }

    let t = iterate_truncation(r, k, cap)?;
    rows.push(row(
        "truncation_isomorphism",
        verify_isomorphism(&t, &improper)?,
        format!("{} vertices", t.graph.n()),
    ));

    Ok(SuiteReport { r, k, rows })
}
