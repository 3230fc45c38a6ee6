//! Distance profiles and the distance-uniformity analyzer.
//!
//! A graph is ε-distance-uniform with critical distance `d` when every vertex
//! has at most `εn` *other* vertices at a distance different from `d`. The
//! analyzer counts other vertices only, so `K_n` scores ε = 0. The inclusive
//! variant `(offcount + 1) / n`, which also charges the vertex itself, is
//! what the bound checkers in [`crate::bounds`] consume.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{bfs_into, ExplicitGraph, GraphError, UNREACHABLE};
use crate::rational::{format_rational, ratio, to_f64, Rational};

/// Sizes of the distance spheres around one source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceProfile {
    pub source: usize,
    /// Distance to number of vertices at exactly that distance; 0 is absent.
    pub counts: BTreeMap<u32, u64>,
    pub unreachable: u64,
}

impl DistanceProfile {
    fn from_distances(source: usize, dist: &[u32]) -> Self {
        let mut counts = BTreeMap::new();
        let mut unreachable = 0;
        for &d in dist {
            match d {
                0 => {}
                UNREACHABLE => unreachable += 1,
                d => *counts.entry(d).or_insert(0) += 1,
            }
        }
        DistanceProfile {
            source,
            counts,
            unreachable,
        }
    }

    pub fn n(&self) -> u64 {
        self.counts.values().sum::<u64>() + self.unreachable + 1
    }

    pub fn at(&self, d: u32) -> u64 {
        self.counts.get(&d).copied().unwrap_or(0)
    }

    /// Number of vertices within `radius`, the source included.
    pub fn within(&self, radius: u32) -> u64 {
        1 + self.counts.range(1..=radius).map(|(_, c)| c).sum::<u64>()
    }

    pub fn eccentricity(&self) -> u32 {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    /// Other vertices not at distance exactly `d`.
    pub fn offcount(&self, d: u32) -> u64 {
        self.n() - 1 - self.at(d)
    }
}

pub fn distance_profile(g: &ExplicitGraph, source: usize) -> Result<DistanceProfile, GraphError> {
    g.check_vertex(source)?;
    Ok(profiles_from(g, &[source]).pop().unwrap())
}

/// Profiles for the given sources, in the given order. Parallel over
/// sources; the output does not depend on the thread count.
pub fn profiles_from(g: &ExplicitGraph, sources: &[usize]) -> Vec<DistanceProfile> {
    let n = g.n();
    sources
        .par_iter()
        .map_init(
            || (vec![UNREACHABLE; n], VecDeque::new()),
            |(dist, queue), &s| {
                dist.fill(UNREACHABLE);
                bfs_into(g, s, dist, queue);
                DistanceProfile::from_distances(s, dist)
            },
        )
        .collect()
}

pub fn all_profiles(g: &ExplicitGraph) -> Vec<DistanceProfile> {
    let sources: Vec<usize> = (0..g.n()).collect();
    profiles_from(g, &sources)
}

/// `count` sources spread evenly over `0..n` (all of them if `count >= n`).
pub fn evenly_spaced_sources(n: usize, count: usize) -> Vec<usize> {
    if count >= n {
        return (0..n).collect();
    }
    (0..count).map(|i| i * n / count).collect()
}

/// Best critical distance of a graph and the ε it achieves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformityReport {
    pub n: usize,
    /// Critical distance minimizing ε, smallest on ties.
    pub d: u32,
    /// Sources the report was computed from; all vertices unless sampled.
    pub sources: Vec<usize>,
    /// Per source, the number of other vertices not at distance `d`.
    pub per_vertex_offcount: Vec<u64>,
    pub connected: bool,
    /// Largest finite eccentricity among the analysed sources.
    pub max_eccentricity: u32,
}

impl UniformityReport {
    pub fn max_offcount(&self) -> u64 {
        self.per_vertex_offcount.iter().copied().max().unwrap_or(0)
    }

    /// Largest fraction of other vertices off the critical distance.
    pub fn epsilon(&self) -> Rational {
        ratio(self.max_offcount(), self.n as u64)
    }

    /// ε also charging each vertex for itself: `(max offcount + 1) / n`.
    pub fn epsilon_inclusive(&self) -> Rational {
        ratio(self.max_offcount() + 1, self.n as u64)
    }

    pub fn is_sampled(&self) -> bool {
        self.sources.len() < self.n
    }

    /// Diameter, when every vertex was analysed and the graph is connected.
    pub fn diameter(&self) -> Option<u32> {
        (self.connected && !self.is_sampled()).then_some(self.max_eccentricity)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let offs = &self.per_vertex_offcount;
        let mut histogram = BTreeMap::new();
        for &o in offs {
            *histogram.entry(o).or_insert(0u64) += 1;
        }
        let eps = self.epsilon();
        serde_json::to_value(ReportJson {
            n: self.n,
            d: self.d,
            epsilon: format_rational(&eps),
            epsilon_float: to_f64(&eps),
            connected: self.connected,
            diameter: self.diameter(),
            sources_analyzed: self.sources.len(),
            per_vertex_offcount: OffcountSummary {
                min: offs.iter().copied().min().unwrap_or(0),
                max: self.max_offcount(),
                histogram,
            },
        })
        .expect("report serializes")
    }
}

#[derive(Serialize)]
struct ReportJson {
    n: usize,
    d: u32,
    epsilon: String,
    epsilon_float: f64,
    connected: bool,
    diameter: Option<u32>,
    sources_analyzed: usize,
    per_vertex_offcount: OffcountSummary,
}

#[derive(Serialize)]
struct OffcountSummary {
    min: u64,
    max: u64,
    histogram: BTreeMap<u64, u64>,
}

/// Exhaustive analysis over every source.
pub fn best_uniformity(g: &ExplicitGraph) -> Result<UniformityReport, GraphError> {
    if g.n() < 2 {
        return Err(GraphError::TooSmall(g.n()));
    }
    Ok(report_from_profiles(g.n(), &all_profiles(g)))
}

/// Analysis restricted to the given sources.
pub fn sampled_uniformity(
    g: &ExplicitGraph,
    sources: &[usize],
) -> Result<UniformityReport, GraphError> {
    if g.n() < 2 {
        return Err(GraphError::TooSmall(g.n()));
    }
    for &s in sources {
        g.check_vertex(s)?;
    }
    Ok(report_from_profiles(g.n(), &profiles_from(g, sources)))
}

pub fn report_from_profiles(n: usize, profiles: &[DistanceProfile]) -> UniformityReport {
    let max_ecc = profiles.iter().map(|p| p.eccentricity()).max().unwrap_or(0);
    let connected = profiles.iter().all(|p| p.unreachable == 0);
    let mut best = (1u32, u64::MAX);
    for d in 1..=max_ecc.max(1) {
        let worst = profiles.iter().map(|p| p.offcount(d)).max().unwrap_or(0);
        if worst < best.1 {
            best = (d, worst);
        }
    }
    let d = best.0;
    UniformityReport {
        n,
        d,
        sources: profiles.iter().map(|p| p.source).collect(),
        per_vertex_offcount: profiles.iter().map(|p| p.offcount(d)).collect(),
        connected,
        max_eccentricity: max_ecc,
    }
}

/// True iff every vertex has at most `epsilon * n` other vertices at a
/// distance other than `d`.
pub fn is_distance_uniform(g: &ExplicitGraph, epsilon: &Rational, d: u32) -> bool {
    if epsilon.is_negative() {
        return false;
    }
    let n = g.n();
    let budget = epsilon * BigInt::from(n);
    let n_u = n;
    (0..n)
        .into_par_iter()
        .map_init(
            || (vec![UNREACHABLE; n_u], VecDeque::new()),
            |(dist, queue), s| {
                dist.fill(UNREACHABLE);
                bfs_into(g, s, dist, queue);
                let at_d = dist.iter().filter(|&&x| x == d).count();
                (n_u - 1 - at_d) as u64
            },
        )
        .all(|off| Rational::from_integer(BigInt::from(off)) <= budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_explicit;
    use crate::hanoi::{HanoiParams, DEFAULT_STATE_CAP};

    #[test]
    fn complete_graph() {
        let g = ExplicitGraph::complete(6);
        let rep = best_uniformity(&g).unwrap();
        assert_eq!(rep.d, 1);
        assert_eq!(rep.epsilon(), ratio(0, 1));
        assert_eq!(rep.epsilon_inclusive(), ratio(1, 6));
        assert_eq!(rep.diameter(), Some(1));
        assert!(is_distance_uniform(
            &ExplicitGraph::complete(5),
            &ratio(0, 1),
            1
        ));
    }

    #[test]
    fn hanoi_4_2() {
        let g = build_explicit(&HanoiParams::proper(4, 2).unwrap(), DEFAULT_STATE_CAP).unwrap();
        let rep = best_uniformity(&g).unwrap();
        assert_eq!(rep.d, 3);
        assert!(rep.epsilon() <= ratio(4, 4));
        assert!(is_distance_uniform(&g, &ratio(1, 1), 3));
        assert!(!is_distance_uniform(&g, &ratio(1, 4), 2));
    }

    #[test]
    fn path_p4_matches_brute_force() {
        // distances in P_4 by hand: from an end 1,2,3; from an inner vertex 1,1,2
        let g = ExplicitGraph::path(4);
        let rep = best_uniformity(&g).unwrap();
        let brute = [[0u32, 1, 2, 3], [1, 0, 1, 2], [2, 1, 0, 1], [3, 2, 1, 0]];
        let mut best_eps = None;
        for d in 1..=3 {
            let worst = brute
                .iter()
                .map(|row| row.iter().filter(|&&x| x != 0 && x != d).count() as u64)
                .max()
                .unwrap();
            let eps = ratio(worst, 4);
            assert!(eps >= ratio(1, 2));
            if best_eps.as_ref().is_none_or(|b| &eps < b) {
                best_eps = Some(eps);
            }
        }
        assert_eq!(Some(rep.epsilon()), best_eps);
        assert_eq!(rep.d, 1);
    }

    #[test]
    fn disconnected_counts_against() {
        let g = ExplicitGraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let rep = best_uniformity(&g).unwrap();
        assert!(!rep.connected);
        assert_eq!(rep.d, 1);
        assert_eq!(rep.max_offcount(), 2);
        assert_eq!(rep.diameter(), None);
    }

    #[test]
    fn edgeless_graph() {
        let g = ExplicitGraph::from_edges(3, &[]).unwrap();
        let rep = best_uniformity(&g).unwrap();
        assert_eq!(rep.d, 1);
        assert_eq!(rep.epsilon(), ratio(2, 3));
    }

    #[test]
    fn too_small() {
        let g = ExplicitGraph::complete(1);
        assert!(matches!(best_uniformity(&g), Err(GraphError::TooSmall(1))));
    }

    #[test]
    fn profile_sums() {
        let g = ExplicitGraph::cycle(7);
        let p = distance_profile(&g, 3).unwrap();
        assert_eq!(p.n(), 7);
        assert_eq!(p.at(1), 2);
        assert_eq!(p.within(2), 5);
        assert_eq!(p.eccentricity(), 3);
        assert!(!p.counts.contains_key(&0));
    }

    #[test]
    fn json_fields() {
        let g = ExplicitGraph::cycle(5);
        let v = best_uniformity(&g).unwrap().to_json();
        assert_eq!(v["n"], 5);
        assert_eq!(v["d"], 1);
        assert_eq!(v["epsilon"], "2/5");
        assert_eq!(v["per_vertex_offcount"]["max"], 2);
        assert_eq!(v["connected"], true);
    }

    #[test]
    fn sampled_matches_full_on_transitive_graph() {
        let g = ExplicitGraph::cycle(9);
        let full = best_uniformity(&g).unwrap();
        let s = sampled_uniformity(&g, &evenly_spaced_sources(9, 3)).unwrap();
        assert_eq!(s.sources, vec![0, 3, 6]);
        assert_eq!((s.d, s.epsilon()), (full.d, full.epsilon()));
        assert!(s.is_sampled());
    }
}
