use serde::{Deserialize, Serialize};

use super::scale::{embed_scale, mean_and_error, ScaleBlock};
use crate::decomposition::ResidueConvention;
use crate::error::{Error, Result};
use crate::graphcore::Graph;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Empirical padding constant at one scale:
/// `ε̂ = min_u mean_k |F_{Δ,u}(ω_k)| / Δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PaddingEstimate {
    pub rounds: usize,
    pub delta: u32,
    pub epsilon_hat: f64,
    /// The vertex attaining the minimum.
    pub argmin: usize,
    pub samples: usize,
    /// Normal-approximation 95% half-width for `ε̂` at `argmin`.
    pub half_width: f64,
}

impl PaddingEstimate {
    pub fn from_block(block: &ScaleBlock, rounds: usize) -> Result<Self> {
        if block.n() < 2 {
            return Err(Error::Precondition(
                "padding needs at least two vertices".into(),
            ));
        }
        let delta = f64::from(block.delta());
        let means: Vec<f64> = (0..block.n())
            .map(|v| {
                block
                    .row(v)
                    .iter()
                    .map(|x| f64::from(x.unsigned_abs()))
                    .sum::<f64>()
            })
            .map(|s| s / block.samples() as f64)
            .collect();
        // first minimum wins
        let argmin =
            (0..means.len()).fold(0, |best, v| if means[v] < means[best] { v } else { best });
        let abs: Vec<f64> = block
            .row(argmin)
            .iter()
            .map(|x| f64::from(x.unsigned_abs()))
            .collect();
        let (_, se) = mean_and_error(&abs);
        Ok(Self {
            rounds,
            delta: block.delta(),
            epsilon_hat: means[argmin] / delta,
            argmin,
            samples: block.samples(),
            half_width: Z95 * se / delta,
        })
    }

    /// Half-width relative to the estimate; infinite when `ε̂ = 0`.
    pub fn relative_width(&self) -> f64 {
        if self.epsilon_hat > 0.0 {
            self.half_width / self.epsilon_hat
        } else {
            f64::INFINITY
        }
    }
}

/// Samples scale `Δ` (a power of two) and estimates its padding constant.
pub fn estimate_padding(
    g: &Graph,
    delta: u32,
    rounds: usize,
    samples: usize,
    seed: u64,
    convention: ResidueConvention,
) -> Result<PaddingEstimate> {
    if g.n() < 2 {
        return Err(Error::Precondition(
            "padding needs at least two vertices".into(),
        ));
    }
    if delta < 2 || !delta.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "scale Δ = {delta} is not a power of two >= 2"
        )));
    }
    let block = embed_scale(g, delta.trailing_zeros(), rounds, samples, seed, convention)?;
    PaddingEstimate::from_block(&block, rounds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_block() {
        // |F| means: vertex 0 → 1.5, vertex 1 → 0.5
        let block = ScaleBlock::from_values(1, 2, vec![1, -2, 0, 1]).unwrap();
        let p = PaddingEstimate::from_block(&block, 3).unwrap();
        assert_eq!(p.argmin, 1);
        assert_eq!(p.epsilon_hat, 0.25);
        assert_eq!(p.delta, 2);
        assert!(p.half_width > 0.0);
    }

    #[test]
    fn degenerate_inputs() {
        let single = Graph::new(1, []).unwrap();
        assert!(estimate_padding(&single, 4, 2, 8, 0, ResidueConvention::Literal).is_err());
        let g = Graph::new(2, [(0, 1)]).unwrap();
        assert!(estimate_padding(&g, 6, 2, 8, 0, ResidueConvention::Literal).is_err());
    }

    #[test]
    fn bounded_on_path() {
        let g = Graph::new(9, (1..9).map(|i| (i - 1, i))).unwrap();
        let p = estimate_padding(&g, 4, 2, 512, 3, ResidueConvention::Literal).unwrap();
        assert!(p.epsilon_hat > 0.0);
        assert!(p.epsilon_hat <= 0.5);
    }
}
