//! Simple undirected graphs over vertex ids `0..n` and breadth-first search.
//!
//! Vertex ids double as the enumeration order used by the cutting
//! procedures: the "least" vertex of a set is the one with the smallest id.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distance value used for unreachable vertices.
pub const UNREACHABLE: u32 = u32::MAX;

/// A finite simple undirected graph.
///
/// `Graph::new` enforces simplicity and `n >= 1`. Connectivity is not part of
/// the constructor contract because proximity graphs may be disconnected;
/// generators always return connected instances and [`Graph::require_connected`]
/// is the check used by consumers that need it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "graph must have at least one vertex".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::NotSimple(format!("loop at vertex {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::NotSimple(format!("repeated edge {{{u}, {v}}}")));
            }
        }
        let edges: Vec<_> = seen.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Self { adj, edges })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            })
        }
    }

    pub fn is_connected(&self) -> bool {
        bfs_distances(self, 0).iter().all(|&d| d != UNREACHABLE)
    }

    pub fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// Largest finite BFS distance over all sources.
    pub fn diameter(&self) -> u32 {
        (0..self.n())
            .map(|s| {
                bfs_distances(self, s)
                    .into_iter()
                    .filter(|&d| d != UNREACHABLE)
                    .max()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }
}

/// Unweighted shortest-path distances from `source`; unreachable vertices get
/// [`UNREACHABLE`].
pub fn bfs_distances(g: &Graph, source: usize) -> Vec<u32> {
    let live = vec![true; g.n()];
    bfs_within(g, source, &live)
}

/// BFS restricted to the subgraph induced on `live`.
pub fn bfs_within(g: &Graph, source: usize, live: &[bool]) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; g.n()];
    if !live[source] {
        return dist;
    }
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u];
        for &v in g.neighbors(u) {
            if live[v] && dist[v] == UNREACHABLE {
                dist[v] = du + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Distance from every vertex to the nearest member of `sources`, measured in
/// the whole graph. All entries are [`UNREACHABLE`] when `sources` is empty.
pub fn multi_source_distances(g: &Graph, sources: &[usize]) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; g.n()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s] != 0 {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let du = dist[u];
        for &v in g.neighbors(u) {
            if dist[v] == UNREACHABLE {
                dist[v] = du + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Connected components of the subgraph induced on `live`, each sorted, listed
/// in increasing order of their least vertex.
pub fn components_within(g: &Graph, live: &[bool]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for start in 0..g.n() {
        if !live[start] || seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut head = 0;
        while head < comp.len() {
            let u = comp[head];
            head += 1;
            for &v in g.neighbors(u) {
                if live[v] && !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Diameter of the subgraph induced on `vertices` (distances inside the set).
/// Returns [`UNREACHABLE`] if the induced subgraph is disconnected.
pub fn induced_diameter(g: &Graph, vertices: &[usize]) -> u32 {
    let mut live = vec![false; g.n()];
    for &v in vertices {
        live[v] = true;
    }
    let mut best = 0;
    for &s in vertices {
        let d = bfs_within(g, s, &live);
        for &v in vertices {
            best = best.max(d[v]);
        }
    }
    best
}

/// `{v ∉ A : v adjacent to some u ∈ A}`, sorted.
pub fn vertex_boundary(g: &Graph, a: &[usize]) -> Vec<usize> {
    let mut in_a = vec![false; g.n()];
    for &u in a {
        in_a[u] = true;
    }
    let mut boundary = vec![false; g.n()];
    for &u in a {
        for &v in g.neighbors(u) {
            if !in_a[v] {
                boundary[v] = true;
            }
        }
    }
    (0..g.n()).filter(|&v| boundary[v]).collect()
}

pub(crate) fn mask_of(n: usize, set: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &v in set {
        mask[v] = true;
    }
    mask
}

/// On-disk graph shape shared by the JSON reader and writer.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphFile {
    fn from(g: &Graph) -> Self {
        Self {
            n: g.n(),
            edges: g.edges().iter().map(|&(u, v)| [u, v]).collect(),
        }
    }
}

impl TryFrom<GraphFile> for Graph {
    type Error = Error;

    fn try_from(f: GraphFile) -> Result<Self> {
        Graph::new(f.n, f.edges.into_iter().map(|[u, v]| (u, v)))
    }
}
