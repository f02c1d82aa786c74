//! Vertex measures and far-pair measures on finite metric spaces.

use serde::{Deserialize, Serialize};

use super::metric::MetricSpace;
use crate::error::{Error, Result};

/// Tolerance on the total mass of a probability pair measure.
pub const PAIR_MASS_TOL: f64 = 1e-12;

/// Nonnegative weights on the points of a metric space.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexMeasure {
    weights: Vec<f64>,
    total: f64,
}

impl VertexMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w >= 0.0))
        {
            return Err(Error::InvalidParameter(format!(
                "vertex weight {w} at {i} is not a nonnegative finite number"
            )));
        }
        let total = weights.iter().sum();
        Ok(Self { weights, total })
    }

    /// Uniform probability measure on `n` points.
    pub fn uniform(n: usize) -> Self {
        Self::new(vec![1.0 / n as f64; n]).expect("uniform weights are valid")
    }

    /// Probability measure concentrated on one point.
    pub fn point_mass(n: usize, at: usize) -> Self {
        let mut w = vec![0.0; n];
        w[at] = 1.0;
        Self::new(w).expect("point mass is valid")
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, v: usize) -> f64 {
        self.weights[v]
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `ν(A)`.
    pub fn restrict(&self, a: &[usize]) -> f64 {
        measure_restrict(self, a)
    }

    /// The measure zeroed outside `keep`.
    pub fn restricted_to(&self, keep: &[usize]) -> VertexMeasure {
        let mut w = vec![0.0; self.len()];
        for &v in keep {
            w[v] = self.weights[v];
        }
        VertexMeasure::new(w).expect("restriction of a valid measure is valid")
    }

    /// Re-indexes onto a subset of points (local index `i` of the result is
    /// `points[i]` of `self`), e.g. to pair with [`MetricSpace::restrict`].
    pub fn select(&self, points: &[usize]) -> VertexMeasure {
        VertexMeasure::new(points.iter().map(|&p| self.weights[p]).collect())
            .expect("selection of a valid measure is valid")
    }
}

/// `ν(A)` as a plain sum of weights over `a`.
pub fn measure_restrict(nu: &VertexMeasure, a: &[usize]) -> f64 {
    a.iter().map(|&v| nu.weights[v]).sum()
}

/// A probability measure on ordered point pairs, stored sparsely.
#[derive(Debug, Clone, PartialEq)]
pub struct PairMeasure {
    support: Vec<(usize, usize, f64)>,
    separation: u32,
}

impl PairMeasure {
    /// Validates positivity, unit mass, and that every support pair is at
    /// distance at least `separation` in `m`.
    pub fn new(
        support: Vec<(usize, usize, f64)>,
        separation: u32,
        m: &MetricSpace,
    ) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidParameter(
                "pair measure has empty support".into(),
            ));
        }
        let mut total = 0.0;
        for &(u, v, w) in &support {
            for x in [u, v] {
                if x >= m.len() {
                    return Err(Error::VertexOutOfRange {
                        vertex: x,
                        n: m.len(),
                    });
                }
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "pair ({u},{v}) has non-positive weight {w}"
                )));
            }
            if m.d(u, v) < separation {
                return Err(Error::InvalidParameter(format!(
                    "pair ({u},{v}) at distance {} is closer than separation {separation}",
                    m.d(u, v)
                )));
            }
            total += w;
        }
        if (total - 1.0).abs() > PAIR_MASS_TOL {
            return Err(Error::InvalidParameter(format!(
                "pair weights sum to {total}, not 1"
            )));
        }
        Ok(Self {
            support,
            separation,
        })
    }

    /// Builds a measure whose separation is the least distance over its support.
    pub fn with_inferred_separation(
        support: Vec<(usize, usize, f64)>,
        m: &MetricSpace,
    ) -> Result<Self> {
        let sep = support
            .iter()
            .filter(|&&(u, v, _)| u < m.len() && v < m.len())
            .map(|&(u, v, _)| m.d(u, v))
            .min()
            .unwrap_or(0);
        Self::new(support, sep, m)
    }

    pub fn support(&self) -> &[(usize, usize, f64)] {
        &self.support
    }

    pub fn separation(&self) -> u32 {
        self.separation
    }

    /// `ν(A) = μ(A × M)` on `n` points.
    pub fn first_marginal(&self, n: usize) -> VertexMeasure {
        let mut w = vec![0.0; n];
        for &(u, _, x) in &self.support {
            w[u] += x;
        }
        VertexMeasure::new(w).expect("marginal of a valid pair measure is valid")
    }
}

/// Uniform measure on all ordered pairs at distance at least `n`.
pub fn far_pair_measure(m: &MetricSpace, n: u32) -> Result<PairMeasure> {
    let k = m.len();
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|a| (0..k).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b && m.d(a, b) >= n)
        .collect();
    if pairs.is_empty() {
        return Err(Error::NoQualifyingPair(n));
    }
    let w = 1.0 / pairs.len() as f64;
    Ok(PairMeasure {
        support: pairs.into_iter().map(|(a, b)| (a, b, w)).collect(),
        separation: n,
    })
}

/// JSON shape for vertex measures: `{"weights": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexMeasureFile {
    pub weights: Vec<f64>,
}

/// JSON shape for pair measures: `{"pairs": [[u, v, w], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairMeasureFile {
    pub pairs: Vec<(usize, usize, f64)>,
}

/// Either measure file shape.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasureFile {
    Pairs(PairMeasureFile),
    Weights(VertexMeasureFile),
}

impl MeasureFile {
    /// Resolves the file to a vertex measure on `m`; pair measures are reduced
    /// to their first marginal.
    pub fn into_vertex_measure(self, m: &MetricSpace) -> Result<VertexMeasure> {
        match self {
            MeasureFile::Weights(f) => {
                if f.weights.len() != m.len() {
                    return Err(Error::InvalidParameter(format!(
                        "measure has {} weights for {} points",
                        f.weights.len(),
                        m.len()
                    )));
                }
                VertexMeasure::new(f.weights)
            }
            MeasureFile::Pairs(f) => {
                Ok(PairMeasure::with_inferred_separation(f.pairs, m)?.first_marginal(m.len()))
            }
        }
    }
}

impl From<&PairMeasure> for PairMeasureFile {
    fn from(p: &PairMeasure) -> Self {
        Self {
            pairs: p.support.clone(),
        }
    }
}
