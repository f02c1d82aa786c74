//! Seeded generators for the graph families used as fixtures and controls.
//!
//! Minor-free families carry the order `r` of a complete graph they exclude as
//! a minor: trees exclude `K_3`, series-parallel graphs (and cycles) exclude
//! `K_4`, planar grids exclude `K_5`. Hypercubes and random regular graphs are
//! expander-like controls and carry no such metadata.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::graph::Graph;
use crate::error::{Error, Result};

/// Attempts allowed for the rejection sampler of random regular graphs.
pub const MAX_REGULAR_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Path { n: usize },
    Cycle { n: usize },
    Grid2d { rows: usize, cols: usize },
    RandomTree { n: usize },
    SeriesParallel { n: usize },
    Hypercube { dim: u32 },
    RandomRegular { n: usize, degree: usize },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Path { .. } => "path",
            Family::Cycle { .. } => "cycle",
            Family::Grid2d { .. } => "grid2d",
            Family::RandomTree { .. } => "random_tree",
            Family::SeriesParallel { .. } => "series_parallel",
            Family::Hypercube { .. } => "hypercube",
            Family::RandomRegular { .. } => "random_regular",
        }
    }

    /// Order `r` of an excluded complete minor `K_r`, when known.
    pub fn excluded_minor(&self) -> Option<u32> {
        match self {
            Family::Path { .. } | Family::RandomTree { .. } => Some(3),
            Family::Cycle { .. } | Family::SeriesParallel { .. } => Some(4),
            Family::Grid2d { .. } => Some(5),
            Family::Hypercube { .. } | Family::RandomRegular { .. } => None,
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(
            self,
            Family::RandomTree { .. }
                | Family::SeriesParallel { .. }
                | Family::RandomRegular { .. }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    #[serde(flatten)]
    pub family: Family,
    pub seed: u64,
}

impl FamilySpec {
    pub fn new(family: Family, seed: u64) -> Self {
        Self { family, seed }
    }

    pub fn excluded_minor(&self) -> Option<u32> {
        self.family.excluded_minor()
    }
}

/// Generates a connected instance; bit-reproducible for a fixed spec.
pub fn generate(spec: &FamilySpec) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let g = match spec.family {
        Family::Path { n } => {
            positive("n", n)?;
            Graph::new(n, (1..n).map(|i| (i - 1, i)))?
        }
        Family::Cycle { n } => {
            if n < 3 {
                return Err(Error::InvalidParameter(format!(
                    "cycle needs n >= 3, got {n}"
                )));
            }
            Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))?
        }
        Family::Grid2d { rows, cols } => {
            positive("rows", rows)?;
            positive("cols", cols)?;
            let id = |r: usize, c: usize| r * cols + c;
            let mut edges = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        edges.push((id(r, c), id(r, c + 1)));
                    }
                    if r + 1 < rows {
                        edges.push((id(r, c), id(r + 1, c)));
                    }
                }
            }
            Graph::new(rows * cols, edges)?
        }
        Family::RandomTree { n } => {
            positive("n", n)?;
            Graph::new(n, prufer_tree(n, &mut rng))?
        }
        Family::SeriesParallel { n } => {
            if n < 2 {
                return Err(Error::InvalidParameter(format!(
                    "series-parallel graph needs n >= 2, got {n}"
                )));
            }
            Graph::new(n, series_parallel(n, &mut rng))?
        }
        Family::Hypercube { dim } => {
            if dim > 20 {
                return Err(Error::TooLarge {
                    what: "hypercube dimension",
                    actual: dim as usize,
                    limit: 20,
                });
            }
            let n = 1usize << dim;
            let edges = (0..n).flat_map(|v| {
                (0..dim)
                    .map(move |b| (v, v ^ (1 << b)))
                    .filter(|&(u, w)| u < w)
            });
            Graph::new(n, edges)?
        }
        Family::RandomRegular { n, degree } => random_regular(n, degree, &mut rng)?,
    };
    debug_assert!(g.is_connected());
    Ok(g)
}

fn positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        Err(Error::InvalidParameter(format!("{name} must be >= 1")))
    } else {
        Ok(())
    }
}

/// Uniform labelled tree via a random Prüfer sequence.
fn prufer_tree(n: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    if n <= 2 {
        return (1..n).map(|i| (0, i)).collect();
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &x in &seq {
        degree[x] += 1;
    }
    let mut leaves: std::collections::BTreeSet<usize> =
        (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &x in &seq {
        let leaf = *leaves
            .iter()
            .next()
            .expect("a Prüfer sequence always leaves a leaf");
        leaves.remove(&leaf);
        edges.push((leaf, x));
        degree[x] -= 1;
        if degree[x] == 1 {
            leaves.insert(x);
        }
    }
    let rest: Vec<usize> = leaves.into_iter().collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Grows a two-terminal series-parallel graph from the edge `{0, 1}`: each new
/// vertex either subdivides a random edge (series) or is joined to both ends
/// of a random edge (parallel composition with a 2-path).
fn series_parallel(n: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut edges = vec![(0, 1)];
    for w in 2..n {
        let idx = rng.gen_range(0..edges.len());
        let (u, v) = edges[idx];
        if rng.gen_bool(0.5) {
            edges.swap_remove(idx);
        }
        edges.push((u, w));
        edges.push((w, v));
    }
    edges
}

/// Pairing model with rejection of loops, multi-edges and disconnected outcomes.
fn random_regular(n: usize, degree: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    if degree == 0 || degree >= n || (n * degree) % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "random regular graph needs 1 <= degree < n and degree*n even (n={n}, degree={degree})"
        )));
    }
    let mut points: Vec<usize> = (0..n * degree).map(|p| p / degree).collect();
    'attempt: for _ in 0..MAX_REGULAR_ATTEMPTS {
        points.shuffle(rng);
        let mut seen = std::collections::HashSet::with_capacity(n * degree / 2);
        let mut edges = Vec::with_capacity(n * degree / 2);
        for pair in points.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
            edges.push((u, v));
        }
        let g = Graph::new(n, edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::ConnectivityRetries(MAX_REGULAR_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(f: Family, seed: u64) -> Graph {
        generate(&FamilySpec::new(f, seed)).unwrap()
    }

    #[test]
    fn path_nine() {
        let g = gen(Family::Path { n: 9 }, 0);
        assert_eq!(g.n(), 9);
        assert_eq!(g.edge_count(), 8);
        assert_eq!(g.diameter(), 8);
    }

    #[test]
    fn grid_four_by_four() {
        let g = gen(Family::Grid2d { rows: 4, cols: 4 }, 0);
        assert_eq!(g.n(), 16);
        assert_eq!(g.edge_count(), 24);
        assert_eq!(g.diameter(), 6);
    }

    #[test]
    fn cubic_graph_degrees() {
        let g = gen(Family::RandomRegular { n: 16, degree: 3 }, 7);
        assert!(g.is_connected());
        assert!((0..16).all(|v| g.degree(v) == 3));
    }

    #[test]
    fn tree_and_series_parallel_sizes() {
        let t = gen(Family::RandomTree { n: 200 }, 1);
        assert_eq!(t.edge_count(), 199);
        assert!(t.is_connected());
        let sp = gen(Family::SeriesParallel { n: 150 }, 1);
        assert_eq!(sp.n(), 150);
        assert!(sp.is_connected());
        // every growth step adds one vertex and one or two net edges
        assert!((149..=297).contains(&sp.edge_count()));
    }

    #[test]
    fn hypercube() {
        let g = gen(Family::Hypercube { dim: 4 }, 0);
        assert_eq!(g.n(), 16);
        assert_eq!(g.edge_count(), 32);
        assert_eq!(g.diameter(), 4);
    }

    #[test]
    fn invalid_parameters() {
        for f in [
            Family::Path { n: 0 },
            Family::Cycle { n: 2 },
            Family::Grid2d { rows: 0, cols: 3 },
            Family::RandomRegular { n: 5, degree: 3 },
            Family::RandomRegular { n: 4, degree: 4 },
            Family::SeriesParallel { n: 1 },
        ] {
            assert!(generate(&FamilySpec::new(f, 0)).is_err(), "{f:?}");
        }
    }

    #[test]
    fn reproducible() {
        for f in [
            Family::RandomTree { n: 50 },
            Family::SeriesParallel { n: 50 },
            Family::RandomRegular { n: 32, degree: 3 },
        ] {
            assert_eq!(gen(f, 11), gen(f, 11));
        }
        assert_ne!(
            gen(Family::RandomTree { n: 50 }, 1),
            gen(Family::RandomTree { n: 50 }, 2)
        );
    }

    #[test]
    fn spec_json_shape() {
        let spec = FamilySpec::new(Family::Grid2d { rows: 4, cols: 5 }, 3);
        let s = serde_json::to_string(&spec).unwrap();
        assert_eq!(s, r#"{"family":"grid2d","rows":4,"cols":5,"seed":3}"#);
        let back: FamilySpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, spec);
    }
}
