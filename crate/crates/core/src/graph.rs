//! Immutable simple undirected graphs in compressed adjacency form, BFS and
//! the `dug` edge-list file format.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use crate::hanoi::{self, HanoiError, HanoiParams, StateSpace};

pub const FORMAT_MAGIC: &str = "dug";
pub const FORMAT_VERSION: u32 = 1;

/// Marker for vertices not reachable from the BFS source.
pub const UNREACHABLE: u32 = u32::MAX;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    BadVertex { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0} - {1}")]
    DuplicateEdge(usize, usize),
    #[error("adjacency is not symmetric: {0} lists {1} but not vice versa")]
    Asymmetric(usize, usize),
    #[error("labels: {0}")]
    BadLabels(String),
    #[error("graph needs at least 2 vertices, has {0}")]
    TooSmall(usize),
    #[error("epsilon is zero; the bound is vacuous")]
    ZeroEpsilon,
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("blow-up target {target} is below the vertex count {n}")]
    TooSmallTarget { target: u64, n: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("header declares {declared} {what}, file has {found}")]
    InconsistentHeader {
        what: &'static str,
        declared: usize,
        found: usize,
    },
    #[error(transparent)]
    Hanoi(#[from] HanoiError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Simple undirected graph with sorted neighbor lists and optional labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitGraph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    labels: Option<Vec<String>>,
}

impl ExplicitGraph {
    /// Builds from per-vertex neighbor lists; sorts them and checks that the
    /// result is simple and symmetric.
    pub fn from_adjacency(mut lists: Vec<Vec<u32>>) -> Result<Self, GraphError> {
        let n = lists.len();
        lists.par_iter_mut().for_each(|l| l.sort_unstable());
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for l in &lists {
            offsets.push(offsets.last().unwrap() + l.len());
        }
        let mut targets = Vec::with_capacity(*offsets.last().unwrap());
        for l in lists {
            targets.extend(l);
        }
        let g = ExplicitGraph {
            offsets,
            targets,
            labels: None,
        };
        g.check_simple()?;
        Ok(g)
    }

    /// Builds from an undirected edge list; each edge given once in either
    /// orientation.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut lists = vec![Vec::new(); n];
        let mut seen = HashSet::with_capacity(edges.len());
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::BadVertex { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            lists[u].push(v as u32);
            lists[v].push(u as u32);
        }
        Self::from_adjacency(lists)
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let lists = (0..n)
            .map(|u| (0..n as u32).filter(|&v| v as usize != u).collect())
            .collect();
        Self::from_adjacency(lists).expect("complete graph is simple")
    }

    /// Path on `n` vertices.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges).expect("path is simple")
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges).expect("cycle is simple")
    }

    fn check_simple(&self) -> Result<(), GraphError> {
        let n = self.n();
        for u in 0..n {
            let nb = self.neighbors(u);
            for (i, &v) in nb.iter().enumerate() {
                let v = v as usize;
                if v >= n {
                    return Err(GraphError::BadVertex { vertex: v, n });
                }
                if v == u {
                    return Err(GraphError::SelfLoop(u));
                }
                if i > 0 && nb[i - 1] as usize == v {
                    return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
                }
            }
        }
        let bad = (0..n).into_par_iter().find_map_first(|u| {
            self.neighbors(u)
                .iter()
                .find(|&&v| !self.has_edge(v as usize, u))
                .map(|&v| (u, v as usize))
        });
        match bad {
            Some((u, v)) => Err(GraphError::Asymmetric(u, v)),
            None => Ok(()),
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.n() {
            return Err(GraphError::BadLabels(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n()
            )));
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for l in &labels {
            if l.is_empty() || l.contains(char::is_whitespace) {
                return Err(GraphError::BadLabels(format!(
                    "label {l:?} is empty or has whitespace"
                )));
            }
            if !seen.insert(l.as_str()) {
                return Err(GraphError::BadLabels(format!("duplicate label {l:?}")));
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// `Some(d)` if every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        if self.n() == 0 {
            return None;
        }
        let d = self.degree(0);
        (0..self.n()).all(|v| self.degree(v) == d).then_some(d)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[v].as_str())
    }

    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::BadVertex {
                vertex: v,
                n: self.n(),
            })
        }
    }
}

/// Explicit Hanoi graph: vertices in lexicographic state order, labelled by
/// the state text form.
pub fn build_explicit(params: &HanoiParams, cap: u64) -> Result<ExplicitGraph, GraphError> {
    let space = StateSpace::new(*params, cap)?;
    let n = space.len() as usize;
    let k = params.k();
    let lists: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![0u32; k], vec![0u32; k]),
            |(state, scratch), v| {
                space.unrank(v as u64, state);
                hanoi::legal_moves_raw(state, params)
                    .into_iter()
                    .map(|m| {
                        scratch.copy_from_slice(state);
                        hanoi::apply_unchecked(scratch, m);
                        space.rank(scratch) as u32
                    })
                    .collect()
            },
        )
        .collect();
    let labels = (0..n)
        .into_par_iter()
        .map(|v| space.state(v as u64).to_string())
        .collect();
    ExplicitGraph::from_adjacency(lists)?.with_labels(labels)
}

/// Shortest-path distances from one source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distances(Vec<u32>);

impl Distances {
    pub fn get(&self, v: usize) -> Option<u32> {
        match self.0[v] {
            UNREACHABLE => None,
            d => Some(d),
        }
    }

    pub fn raw(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest finite distance.
    pub fn eccentricity(&self) -> u32 {
        self.0
            .iter()
            .copied()
            .filter(|&d| d != UNREACHABLE)
            .max()
            .unwrap_or(0)
    }

    pub fn unreachable_count(&self) -> usize {
        self.0.iter().filter(|&&d| d == UNREACHABLE).count()
    }
}

pub fn bfs_distances(g: &ExplicitGraph, source: usize) -> Result<Distances, GraphError> {
    g.check_vertex(source)?;
    let mut dist = vec![UNREACHABLE; g.n()];
    let mut queue = VecDeque::new();
    bfs_into(g, source, &mut dist, &mut queue);
    Ok(Distances(dist))
}

/// BFS reusing caller buffers; `dist` must be filled with [`UNREACHABLE`].
pub(crate) fn bfs_into(
    g: &ExplicitGraph,
    source: usize,
    dist: &mut [u32],
    queue: &mut VecDeque<u32>,
) {
    queue.clear();
    dist[source] = 0;
    queue.push_back(source as u32);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize] + 1;
        for &w in g.neighbors(u as usize) {
            if dist[w as usize] == UNREACHABLE {
                dist[w as usize] = du;
                queue.push_back(w);
            }
        }
    }
}

/// Largest eccentricity, or `None` if the graph is disconnected.
pub fn diameter(g: &ExplicitGraph) -> Option<u32> {
    let n = g.n();
    (0..n)
        .into_par_iter()
        .map_init(
            || (vec![UNREACHABLE; n], VecDeque::new()),
            |(dist, queue), s| {
                dist.fill(UNREACHABLE);
                bfs_into(g, s, dist, queue);
                if dist.contains(&UNREACHABLE) {
                    None
                } else {
                    Some(*dist.iter().max().unwrap())
                }
            },
        )
        .collect::<Option<Vec<u32>>>()
        .map(|e| e.into_iter().max().unwrap_or(0))
}

/// Serializes to the `dug` edge-list text format.
pub fn to_edge_list(g: &ExplicitGraph) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{FORMAT_MAGIC} {FORMAT_VERSION} {} {}",
        g.n(),
        g.edge_count()
    )
    .unwrap();
    if let Some(labels) = g.labels() {
        for (v, l) in labels.iter().enumerate() {
            writeln!(out, "l {v} {l}").unwrap();
        }
    }
    for (u, v) in g.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    out
}

pub fn save_edge_list(g: &ExplicitGraph, path: impl AsRef<Path>) -> Result<(), GraphError> {
    fs::write(path, to_edge_list(g))?;
    Ok(())
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<ExplicitGraph, GraphError> {
    parse_edge_list(&fs::read_to_string(path)?)
}

pub fn parse_edge_list(text: &str) -> Result<ExplicitGraph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut labels: Vec<Option<String>> = Vec::new();
    let mut label_count = 0;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |msg: String| GraphError::Parse { line: line_no, msg };
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let Some((n, _)) = header else {
            if fields.len() != 4 || fields[0] != FORMAT_MAGIC {
                return Err(err(format!("expected header `{FORMAT_MAGIC} 1 <n> <m>`")));
            }
            if fields[1] != FORMAT_VERSION.to_string() {
                return Err(err(format!("unsupported format version {}", fields[1])));
            }
            let n = parse_num(fields[2]).map_err(&err)?;
            let m = parse_num(fields[3]).map_err(&err)?;
            header = Some((n, m));
            labels = vec![None; n];
            continue;
        };
        let vertex = |s: &str| -> Result<usize, GraphError> {
            let v = parse_num(s).map_err(&err)?;
            if v >= n {
                return Err(err(format!("vertex {v} out of range (n = {n})")));
            }
            Ok(v)
        };
        match fields.as_slice() {
            ["l", v, label] => {
                let v = vertex(v)?;
                if labels[v].replace((*label).to_owned()).is_some() {
                    return Err(err(format!("vertex {v} labelled twice")));
                }
                label_count += 1;
            }
            ["e", u, v] => {
                let (u, v) = (vertex(u)?, vertex(v)?);
                if u == v {
                    return Err(err(format!("self-loop at {u}")));
                }
                if u > v {
                    return Err(err(format!("edge {u} {v} must be written with u < v")));
                }
                if !seen.insert((u, v)) {
                    return Err(err(format!("duplicate edge {u} {v}")));
                }
                edges.push((u, v));
            }
            _ => return Err(err(format!("unrecognized line {line:?}"))),
        }
    }

    let (n, m) = header.ok_or(GraphError::Parse {
        line: 0,
        msg: "missing header".to_owned(),
    })?;
    if edges.len() != m {
        return Err(GraphError::InconsistentHeader {
            what: "edges",
            declared: m,
            found: edges.len(),
        });
    }
    let g = ExplicitGraph::from_edges(n, &edges)?;
    match label_count {
        0 => Ok(g),
        c if c == n => g.with_labels(labels.into_iter().map(Option::unwrap).collect()),
        c => Err(GraphError::InconsistentHeader {
            what: "labels",
            declared: n,
            found: c,
        }),
    }
}

fn parse_num(s: &str) -> Result<usize, String> {
    s.parse()
        .map_err(|_| format!("{s:?} is not a nonnegative integer"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hanoi::DEFAULT_STATE_CAP;

    #[test]
    fn hanoi_graph_shapes() {
        // (x, 0) cannot involute to (0, x), so four vertices have degree 3
        let g = build_explicit(&HanoiParams::proper(4, 2).unwrap(), DEFAULT_STATE_CAP).unwrap();
        assert_eq!(g.n(), 16);
        assert_eq!((g.min_degree(), g.max_degree()), (3, 4));
        assert_eq!((0..16).filter(|&v| g.degree(v) == 3).count(), 4);
        assert_eq!(g.edge_count(), 30);

        let k3 = build_explicit(&HanoiParams::proper(3, 1).unwrap(), DEFAULT_STATE_CAP).unwrap();
        assert_eq!(k3.n(), 3);
        assert_eq!(k3.edge_count(), 3);

        let g = build_explicit(&HanoiParams::improper(4, 2).unwrap(), DEFAULT_STATE_CAP).unwrap();
        assert_eq!(g.n(), 20);
        assert_eq!(g.regular_degree(), Some(4));
    }

    #[test]
    fn cap_is_enforced() {
        let p = HanoiParams::proper(4, 2).unwrap();
        assert!(matches!(
            build_explicit(&p, 15),
            Err(GraphError::Hanoi(HanoiError::TooLarge { .. }))
        ));
    }

    #[test]
    fn bfs_examples() {
        let k4 = ExplicitGraph::complete(4);
        assert_eq!(bfs_distances(&k4, 0).unwrap().raw(), &[0, 1, 1, 1]);

        let g = build_explicit(&HanoiParams::proper(4, 2).unwrap(), DEFAULT_STATE_CAP).unwrap();
        let a = g.find_label("1,2").unwrap();
        let b = g.find_label("3,4").unwrap();
        assert_eq!(bfs_distances(&g, a).unwrap().get(b), Some(3));

        let two = ExplicitGraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let d = bfs_distances(&two, 0).unwrap();
        assert_eq!(d.get(1), Some(1));
        assert_eq!(d.get(2), None);
        assert_eq!(d.unreachable_count(), 2);
        assert_eq!(diameter(&two), None);

        assert!(matches!(
            bfs_distances(&k4, 4),
            Err(GraphError::BadVertex { .. })
        ));
    }

    #[test]
    fn rejects_non_simple() {
        assert!(matches!(
            ExplicitGraph::from_edges(3, &[(0, 0)]),
            Err(GraphError::SelfLoop(0))
        ));
        assert!(matches!(
            ExplicitGraph::from_edges(3, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        ));
        assert!(matches!(
            ExplicitGraph::from_adjacency(vec![vec![1], vec![]]),
            Err(GraphError::Asymmetric(0, 1))
        ));
    }

    #[test]
    fn edge_list_round_trip() {
        let g = build_explicit(&HanoiParams::proper(4, 2).unwrap(), DEFAULT_STATE_CAP).unwrap();
        let text = to_edge_list(&g);
        assert!(text.starts_with("dug 1 16 30\nl 0 1,0\n"));
        assert_eq!(parse_edge_list(&text).unwrap(), g);
    }

    #[test]
    fn edge_list_errors() {
        let dup = "dug 1 3 2\ne 0 1\ne 0 1\n";
        assert!(matches!(
            parse_edge_list(dup),
            Err(GraphError::Parse { line: 3, .. })
        ));
        let lp = "# comment\ndug 1 3 1\ne 1 1\n";
        assert!(matches!(
            parse_edge_list(lp),
            Err(GraphError::Parse { line: 3, .. })
        ));
        let count = "dug 1 3 2\ne 0 1\n";
        assert!(matches!(
            parse_edge_list(count),
            Err(GraphError::InconsistentHeader { .. })
        ));
        let partial = "dug 1 2 1\nl 0 x\ne 0 1\n";
        assert!(matches!(
            parse_edge_list(partial),
            Err(GraphError::InconsistentHeader { .. })
        ));
        let range = "dug 1 2 1\ne 0 2\n";
        assert!(matches!(
            parse_edge_list(range),
            Err(GraphError::Parse { line: 2, .. })
        ));
        assert!(parse_edge_list("graph 1 2 0\n").is_err());
        assert!(parse_edge_list("").is_err());
    }
}
