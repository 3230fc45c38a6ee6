//! Vertex blow-up: every vertex becomes an independent set of copies, and
//! copies of adjacent vertices are joined completely.

use crate::graph::{ExplicitGraph, GraphError};

/// Original vertex of every copy when `n` vertices are blown up to `target`.
/// The first `target mod n` vertices get `ceil(target / n)` copies, the rest
/// `floor(target / n)`; copies of one vertex are numbered consecutively.
pub fn copy_origins(n: usize, target: u64) -> Vec<usize> {
    let target = target as usize;
    let (base, extra) = (target / n, target % n);
    (0..n)
        .flat_map(|v| std::iter::repeat_n(v, base + usize::from(v < extra)))
        .collect()
}

pub fn blow_up(g: &ExplicitGraph, n_target: u64) -> Result<ExplicitGraph, GraphError> {
    let n = g.n();
    if n == 0 || n_target < n as u64 {
        return Err(GraphError::TooSmallTarget {
            target: n_target,
            n,
        });
    }
    if n_target > u32::MAX as u64 {
        return Err(GraphError::BadParams(format!(
            "blow-up target {n_target} exceeds u32 vertex ids"
        )));
    }
    let origin = copy_origins(n, n_target);
    let mut first = vec![0usize; n + 1];
    for &v in &origin {
        first[v + 1] += 1;
    }
    for v in 0..n {
        first[v + 1] += first[v];
    }
    let lists = origin
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .flat_map(|&u| (first[u as usize]..first[u as usize + 1]).map(|c| c as u32))
                .collect()
        })
        .collect();
    let blown = ExplicitGraph::from_adjacency(lists)?;
    match g.labels() {
        Some(labels) => {
            let new_labels = origin
                .iter()
                .enumerate()
                .map(|(c, &v)| format!("{}:{}", labels[v], c - first[v]))
                .collect();
            blown.with_labels(new_labels)
        }
        None => Ok(blown),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::bfs_distances;

    #[test]
    fn k2_to_k22() {
        let g = blow_up(&ExplicitGraph::complete(2), 4).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.regular_degree(), Some(2));
        assert_eq!(g.edge_count(), 4);
        assert!(!g.has_edge(0, 1));
        assert!(!g.has_edge(2, 3));
        assert!(g.has_edge(0, 2) && g.has_edge(0, 3) && g.has_edge(1, 2) && g.has_edge(1, 3));
    }

    #[test]
    fn copy_counts() {
        assert_eq!(copy_origins(3, 8), vec![0, 0, 0, 1, 1, 1, 2, 2]);
        assert_eq!(copy_origins(3, 3), vec![0, 1, 2]);
    }

    #[test]
    fn too_small_target() {
        assert!(matches!(
            blow_up(&ExplicitGraph::complete(3), 2),
            Err(GraphError::TooSmallTarget { target: 2, n: 3 })
        ));
    }

    #[test]
    fn path_distances_preserved() {
        let g = ExplicitGraph::path(5);
        let b = blow_up(&g, 12).unwrap();
        let origin = copy_origins(5, 12);
        for s in 0..b.n() {
            let db = bfs_distances(&b, s).unwrap();
            let dg = bfs_distances(&g, origin[s]).unwrap();
            for t in 0..b.n() {
                if origin[t] != origin[s] {
                    assert_eq!(db.get(t), dg.get(origin[t]));
                } else if t != s {
                    assert_eq!(db.get(t), Some(2));
                }
            }
        }
    }

    #[test]
    fn labels_get_copy_suffix() {
        let g = ExplicitGraph::complete(2)
            .with_labels(vec!["x".into(), "y".into()])
            .unwrap();
        let b = blow_up(&g, 3).unwrap();
        assert_eq!(b.labels().unwrap(), &["x:0", "x:1", "y:0"]);
    }
}
