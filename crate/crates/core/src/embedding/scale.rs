use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::omega::{f_column, sample_one};
use crate::decomposition::ResidueConvention;
use crate::error::{Error, Result};
use crate::graphcore::Graph;

/// The functions `F_{Δ,u}` at one scale `Δ = 2^i`, represented by their values
/// on `samples` draws of `ω`. Values are stored vertex-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleBlock {
    index: u32,
    samples: usize,
    values: Vec<i32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MagnitudeViolation {
    pub vertex: usize,
    pub sample: usize,
    pub value: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LipschitzViolation {
    pub u: usize,
    pub v: usize,
    pub sample: usize,
    pub gap: u32,
}

pub(crate) fn check_scale_index(index: u32) -> Result<u32> {
    if !(1..=30).contains(&index) {
        return Err(Error::InvalidParameter(format!(
            "scale index {index} is outside 1..=30"
        )));
    }
    Ok(1 << index)
}

impl ScaleBlock {
    /// Builds a block from vertex-major values (`n × samples`).
    pub fn from_values(index: u32, samples: usize, values: Vec<i32>) -> Result<Self> {
        check_scale_index(index)?;
        if samples == 0 || values.is_empty() || values.len() % samples != 0 {
            return Err(Error::InvalidParameter(format!(
                "{} values cannot form rows of {samples} samples",
                values.len()
            )));
        }
        Ok(Self {
            index,
            samples,
            values,
        })
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn delta(&self) -> u32 {
        1 << self.index
    }

    /// `(2/3)^i`.
    pub fn weight(&self) -> f64 {
        (2.0f64 / 3.0).powi(self.index as i32)
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn n(&self) -> usize {
        self.values.len() / self.samples
    }

    pub fn row(&self, v: usize) -> &[i32] {
        &self.values[v * self.samples..(v + 1) * self.samples]
    }

    pub fn value(&self, v: usize, sample: usize) -> i32 {
        self.values[v * self.samples + sample]
    }

    /// The same block with `base`'s row subtracted from every row.
    pub fn centered(&self, base: usize) -> Self {
        let origin = self.row(base).to_vec();
        let values = self
            .values
            .chunks(self.samples)
            .flat_map(|row| row.iter().zip(&origin).map(|(x, o)| x - o))
            .collect();
        Self {
            values,
            ..self.clone()
        }
    }

    /// Sum over samples of `|x_u − x_v|`; exact.
    pub fn abs_gap_sum(&self, u: usize, v: usize) -> u64 {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| u64::from(a.abs_diff(*b)))
            .sum()
    }

    /// Empirical `‖F_u − F_v‖_{L₁}`: mean over samples of `|x_u − x_v|`.
    pub fn block_distance(&self, u: usize, v: usize) -> f64 {
        self.abs_gap_sum(u, v) as f64 / self.samples as f64
    }

    /// Block distance and the standard error of the mean.
    pub fn block_distance_with_error(&self, u: usize, v: usize) -> (f64, f64) {
        let gaps: Vec<f64> = self
            .row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| a.abs_diff(*b) as f64)
            .collect();
        mean_and_error(&gaps)
    }

    /// Entries with `|x| > Δ/2`.
    pub fn magnitude_violations(&self) -> Vec<MagnitudeViolation> {
        let delta = self.delta();
        self.values
            .iter()
            .enumerate()
            .filter(|(_, x)| 2 * x.unsigned_abs() > delta)
            .map(|(i, &value)| MagnitudeViolation {
                vertex: i / self.samples,
                sample: i % self.samples,
                value,
            })
            .collect()
    }

    /// Edges and samples with `|x_u − x_v| > 1`.
    pub fn lipschitz_violations(&self, g: &Graph) -> Vec<LipschitzViolation> {
        let mut out = Vec::new();
        for &(u, v) in g.edges() {
            for (k, (a, b)) in self.row(u).iter().zip(self.row(v)).enumerate() {
                let gap = a.abs_diff(*b);
                if gap > 1 {
                    out.push(LipschitzViolation {
                        u,
                        v,
                        sample: k,
                        gap,
                    });
                }
            }
        }
        out
    }
}

pub(crate) fn mean_and_error(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Evaluates `F_{Δ,u}` for `Δ = 2^index` on `samples` independent draws.
pub fn embed_scale(
    g: &Graph,
    index: u32,
    rounds: usize,
    samples: usize,
    seed: u64,
    convention: ResidueConvention,
) -> Result<ScaleBlock> {
    let delta = check_scale_index(index)?;
    if samples == 0 {
        return Err(Error::InvalidParameter("sample count must be >= 1".into()));
    }
    let columns: Vec<Vec<i32>> = (0..samples as u64)
        .into_par_iter()
        .map(|k| {
            let (omega, dec) = sample_one(g, delta, rounds, seed, k, convention)?;
            f_column(g, &dec, &omega.signs)
        })
        .collect::<Result<_>>()?;
    let n = g.n();
    let mut values = vec![0; n * samples];
    for (k, col) in columns.iter().enumerate() {
        for (v, &x) in col.iter().enumerate() {
            values[v * samples + k] = x;
        }
    }
    ScaleBlock::from_values(index, samples, values)
}
