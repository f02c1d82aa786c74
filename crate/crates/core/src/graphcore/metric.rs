//! Finite integer metric spaces and the proximity graph `G(n, s)`.

use rayon::prelude::*;

use super::graph::{bfs_distances, Graph, UNREACHABLE};
use crate::error::{Error, Result};

/// A finite metric given by a full symmetric distance matrix.
///
/// Points are addressed by local index `0..len()`; `labels()` maps each local
/// index back to the vertex id it came from (identity for [`metric_of`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricSpace {
    labels: Vec<usize>,
    dist: Vec<u32>,
}

impl MetricSpace {
    /// Builds a metric from a row-major matrix, checking every axiom
    /// exhaustively (`O(k^3)`; intended for small hand-built instances).
    pub fn from_matrix(labels: Vec<usize>, dist: Vec<u32>) -> Result<Self> {
        let k = labels.len();
        if dist.len() != k * k {
            return Err(Error::InvalidParameter(format!(
                "distance matrix has {} entries, expected {}",
                dist.len(),
                k * k
            )));
        }
        let m = Self { labels, dist };
        if let Some(msg) = m.axiom_violation(usize::MAX) {
            return Err(Error::InvalidParameter(msg));
        }
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> u32 {
        self.dist[i * self.len() + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        let k = self.len();
        &self.dist[i * k..(i + 1) * k]
    }

    pub fn diameter(&self) -> u32 {
        self.dist.iter().copied().max().unwrap_or(0)
    }

    /// Diameter of a subset of points in this metric (0 for sets of size <= 1).
    pub fn set_diameter(&self, set: &[usize]) -> u32 {
        let mut best = 0;
        for (idx, &a) in set.iter().enumerate() {
            for &b in &set[idx + 1..] {
                best = best.max(self.d(a, b));
            }
        }
        best
    }

    /// Distance between two sets; `None` if either is empty.
    pub fn set_distance(&self, a: &[usize], b: &[usize]) -> Option<u32> {
        a.iter()
            .flat_map(|&x| b.iter().map(move |&y| (x, y)))
            .map(|(x, y)| self.d(x, y))
            .min()
    }

    /// Distance from point `x` to a set; `None` if the set is empty.
    pub fn point_set_distance(&self, x: usize, set: &[usize]) -> Option<u32> {
        set.iter().map(|&y| self.d(x, y)).min()
    }

    /// The sub-metric on `points` (local indices of `self`). Labels are carried
    /// over, so the result still reports the original vertex ids.
    pub fn restrict(&self, points: &[usize]) -> MetricSpace {
        let k = points.len();
        let mut dist = Vec::with_capacity(k * k);
        for &a in points {
            for &b in points {
                dist.push(self.d(a, b));
            }
        }
        MetricSpace {
            labels: points.iter().map(|&p| self.labels[p]).collect(),
            dist,
        }
    }

    /// Returns a description of the first violated axiom among triples whose
    /// first index is below `limit` (pass `usize::MAX` for a full check).
    pub fn axiom_violation(&self, limit: usize) -> Option<String> {
        let k = self.len();
        for a in 0..k {
            if self.d(a, a) != 0 {
                return Some(format!("d({a},{a}) != 0"));
            }
            for b in 0..k {
                if self.d(a, b) != self.d(b, a) {
                    return Some(format!("asymmetric at ({a},{b})"));
                }
                if a != b && self.d(a, b) == 0 {
                    return Some(format!("d({a},{b}) = 0 for distinct points"));
                }
            }
        }
        for a in 0..k.min(limit) {
            for b in 0..k {
                for c in 0..k {
                    let via = self.d(a, c) as u64 + self.d(c, b) as u64;
                    if self.d(a, b) as u64 > via {
                        return Some(format!("triangle inequality fails on ({a},{b}) via {c}"));
                    }
                }
            }
        }
        None
    }
}

/// Shortest-path metric of a connected graph. BFS rows are computed in
/// parallel; the result does not depend on scheduling.
pub fn metric_of(g: &Graph) -> Result<MetricSpace> {
    let n = g.n();
    let rows: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|s| bfs_distances(g, s))
        .collect();
    let mut dist = Vec::with_capacity(n * n);
    for row in rows {
        if row.contains(&UNREACHABLE) {
            return Err(Error::Disconnected);
        }
        dist.extend(row);
    }
    Ok(MetricSpace {
        labels: (0..n).collect(),
        dist,
    })
}

/// `G(n, s)`: the graph on the points of `m` (local indices) joining every pair
/// at distance at most `s`. May be disconnected.
pub fn proximity_graph(m: &MetricSpace, s: u32) -> Result<Graph> {
    if s == 0 {
        return Err(Error::InvalidParameter(
            "proximity scale s must be >= 1".into(),
        ));
    }
    let k = m.len();
    let mut edges = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            if m.d(a, b) <= s {
                edges.push((a, b));
            }
        }
    }
    Graph::new(k.max(1), edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn path_and_complete_metrics() {
        let m = metric_of(&path(9)).unwrap();
        assert_eq!(m.d(0, 8), 8);
        assert_eq!(m.diameter(), 8);
        let k4 = Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let m = metric_of(&k4).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(m.d(a, b), u32::from(a != b));
            }
        }
    }

    #[test]
    fn disconnected_metric_rejected() {
        let g = Graph::new(3, [(0, 1)]).unwrap();
        assert!(matches!(metric_of(&g), Err(Error::Disconnected)));
    }

    #[test]
    fn proximity_on_subset() {
        // pairwise distances 3, 4, 7 against s = 3
        let m = metric_of(&path(9)).unwrap().restrict(&[0, 3, 7]);
        assert_eq!(m.labels(), &[0, 3, 7]);
        let p = proximity_graph(&m, 3).unwrap();
        assert_eq!(p.edges(), &[(0, 1)]);
    }

    #[test]
    fn proximity_extremes() {
        let g = path(6);
        let m = metric_of(&g).unwrap();
        assert_eq!(proximity_graph(&m, 1).unwrap().edges(), g.edges());
        assert_eq!(proximity_graph(&m, 5).unwrap().edge_count(), 15);
        assert!(proximity_graph(&m, 0).is_err());
    }

    #[test]
    fn from_matrix_checks_axioms() {
        assert!(MetricSpace::from_matrix(vec![0, 1], vec![0, 1, 1, 0]).is_ok());
        assert!(MetricSpace::from_matrix(vec![0, 1], vec![0, 1, 2, 0]).is_err());
        // 0-1: 1, 1-2: 1, 0-2: 5 breaks the triangle inequality
        let bad = vec![0, 1, 5, 1, 0, 1, 5, 1, 0];
        assert!(MetricSpace::from_matrix(vec![0, 1, 2], bad).is_err());
    }

    #[test]
    fn set_helpers() {
        let m = metric_of(&path(9)).unwrap();
        assert_eq!(m.set_diameter(&[1, 4, 6]), 5);
        assert_eq!(m.set_diameter(&[3]), 0);
        assert_eq!(m.set_distance(&[0, 1], &[5, 8]), Some(4));
        assert_eq!(m.set_distance(&[], &[5]), None);
        assert_eq!(m.point_set_distance(4, &[0, 6]), Some(2));
    }
}
