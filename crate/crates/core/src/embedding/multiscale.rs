use serde::{Deserialize, Serialize};

use super::scale::{embed_scale, LipschitzViolation, ScaleBlock};
use crate::decomposition::ResidueConvention;
use crate::error::{Error, Result};
use crate::graphcore::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbedConfig {
    /// Decomposition rounds per sample (the excluded-minor order).
    pub rounds: usize,
    /// Scales `i = 1..=i_max`.
    pub i_max: u32,
    pub samples: usize,
    pub seed: u64,
    /// The vertex `O` every scale is centered at.
    pub base: usize,
    #[serde(default)]
    pub convention: ResidueConvention,
}

/// `⌈log₂ diam⌉ + 1`, and 1 for graphs of diameter at most 1.
pub fn default_i_max(diameter: u32) -> u32 {
    if diameter <= 1 {
        1
    } else {
        (diameter - 1).ilog2() + 2
    }
}

/// `φ(v)` for every vertex: one block per scale `i = 1..=i_max`, each weighted
/// by `(2/3)^i`. Blocks keep the uncentered values `F_{2^i,v}`; centering at
/// `O` cancels in every difference and is applied by [`L1Point::coordinate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct L1Point {
    base: usize,
    blocks: Vec<ScaleBlock>,
}

impl L1Point {
    pub fn new(base: usize, blocks: Vec<ScaleBlock>) -> Result<Self> {
        let Some(first) = blocks.first() else {
            return Err(Error::InvalidParameter(
                "an embedding needs at least one scale".into(),
            ));
        };
        let n = first.n();
        if base >= n {
            return Err(Error::VertexOutOfRange { vertex: base, n });
        }
        for (k, b) in blocks.iter().enumerate() {
            if b.n() != n || b.index() != k as u32 + 1 {
                return Err(Error::InvalidParameter(format!(
                    "block {k} has scale index {} and {} rows; expected index {} and {n} rows",
                    b.index(),
                    b.n(),
                    k + 1
                )));
            }
        }
        Ok(Self { base, blocks })
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn blocks(&self) -> &[ScaleBlock] {
        &self.blocks
    }

    pub fn n(&self) -> usize {
        self.blocks[0].n()
    }

    pub fn i_max(&self) -> u32 {
        self.blocks.len() as u32
    }

    /// Centered integer coordinate `F_{2^i,v}(ω_k) − F_{2^i,O}(ω_k)`; the
    /// embedded coordinate is this times `(2/3)^i`.
    pub fn coordinate(&self, index: u32, v: usize, sample: usize) -> i32 {
        let b = &self.blocks[index as usize - 1];
        b.value(v, sample) - b.value(self.base, sample)
    }

    /// Weighted contribution of scale `i` to `‖φ(u) − φ(v)‖₁`.
    pub fn scale_distance(&self, index: u32, u: usize, v: usize) -> f64 {
        let b = &self.blocks[index as usize - 1];
        b.weight() * b.block_distance(u, v)
    }

    pub fn lipschitz_violations(&self, g: &Graph) -> Vec<(u32, LipschitzViolation)> {
        self.blocks
            .iter()
            .flat_map(|b| {
                b.lipschitz_violations(g)
                    .into_iter()
                    .map(|v| (b.index(), v))
            })
            .collect()
    }
}

/// `‖φ(u) − φ(v)‖₁ = Σ_i (2/3)^i · mean_k |F_{2^i,u}(ω_k) − F_{2^i,v}(ω_k)|`.
pub fn l1_distance(p: &L1Point, u: usize, v: usize) -> f64 {
    p.blocks
        .iter()
        .map(|b| b.weight() * b.block_distance(u, v))
        .sum()
}

/// Builds every scale with independent sample streams.
pub fn multiscale_embed(g: &Graph, cfg: &EmbedConfig) -> Result<L1Point> {
    if cfg.i_max == 0 {
        return Err(Error::InvalidParameter("i_max must be >= 1".into()));
    }
    g.check_vertex(cfg.base)?;
    let blocks = (1..=cfg.i_max)
        .map(|i| embed_scale(g, i, cfg.rounds, cfg.samples, cfg.seed, cfg.convention))
        .collect::<Result<Vec<_>>>()?;
    L1Point::new(cfg.base, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn cfg(i_max: u32, samples: usize) -> EmbedConfig {
        EmbedConfig {
            rounds: 2,
            i_max,
            samples,
            seed: 11,
            base: 0,
            convention: ResidueConvention::Literal,
        }
    }

    #[test]
    fn i_max_defaults() {
        assert_eq!(default_i_max(0), 1);
        assert_eq!(default_i_max(1), 1);
        assert_eq!(default_i_max(2), 2);
        assert_eq!(default_i_max(3), 3);
        assert_eq!(default_i_max(4), 3);
        assert_eq!(default_i_max(8), 4);
        assert_eq!(default_i_max(9), 5);
    }

    #[test]
    fn base_row_is_zero() {
        let g = path(9);
        let p = multiscale_embed(&g, &cfg(4, 32)).unwrap();
        for i in 1..=4 {
            for k in 0..32 {
                assert_eq!(p.coordinate(i, 0, k), 0);
            }
        }
    }

    #[test]
    fn endpoints_are_separated() {
        let g = path(9);
        let p = multiscale_embed(&g, &cfg(4, 2048)).unwrap();
        assert!(l1_distance(&p, 0, 8) > 0.0);
        assert_eq!(l1_distance(&p, 3, 3), 0.0);
    }

    #[test]
    fn upper_bound_on_path() {
        let g = path(9);
        let p = multiscale_embed(&g, &cfg(4, 256)).unwrap();
        let m = crate::graphcore::metric_of(&g).unwrap();
        let weights: f64 = (1..=4).map(|i| (2.0f64 / 3.0).powi(i)).sum();
        for u in 0..9 {
            for v in 0..9 {
                let d = f64::from(m.d(u, v));
                assert!(l1_distance(&p, u, v) <= weights * d + 1e-12);
                assert!(l1_distance(&p, u, v) <= 3.0 * d);
            }
        }
    }

    #[test]
    fn rejects_bad_configs() {
        let g = path(4);
        assert!(multiscale_embed(&g, &cfg(0, 4)).is_err());
        let mut c = cfg(2, 4);
        c.base = 7;
        assert!(multiscale_embed(&g, &c).is_err());
    }
}
