//! Samples `ω = (λ, θ)` and the random-sign distance functions `f_{Δ,ω}`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomposition::{kpr_decompose, Decomposition, Offsets, ResidueConvention};
use crate::error::{Error, Result};
use crate::graphcore::{multi_source_distances, Graph};

/// Signs keyed by component leader.
pub type SignMap = BTreeMap<usize, i8>;

/// One draw from `Λ_Δ × Θ`. Only the leaders of realised components carry a
/// sign; signs are drawn in increasing leader order after the offsets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaSample {
    pub offsets: Offsets,
    pub signs: SignMap,
    /// Counter identifying this draw within the seed's stream family.
    pub stream: u64,
}

impl OmegaSample {
    pub fn sign(&self, leader: usize) -> Option<i8> {
        self.signs.get(&leader).copied()
    }
}

/// Counter-based stream id for sample `index` at scale `delta`: every
/// (scale, sample) pair owns an independent ChaCha stream, so parallel and
/// sequential evaluation agree.
pub(crate) fn stream_id(delta: u32, index: u64) -> u64 {
    ((delta as u64) << 32) | (index & 0xffff_ffff)
}

/// Draws sample `index` of the stream family `seed` at scale `delta`.
pub fn sample_one(
    g: &Graph,
    delta: u32,
    rounds: usize,
    seed: u64,
    index: u64,
    convention: ResidueConvention,
) -> Result<(OmegaSample, Decomposition)> {
    if delta == 0 || rounds == 0 {
        return Err(Error::InvalidParameter(
            "need Δ >= 1 and at least one round".into(),
        ));
    }
    let stream = stream_id(delta, index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let values: Vec<u32> = (0..rounds).map(|_| rng.gen_range(1..=delta)).collect();
    let offsets = Offsets::new(delta, values)?;
    let dec = kpr_decompose(g, &offsets, convention);
    let signs = dec
        .components
        .iter()
        .map(|c| (c.leader, if rng.gen_bool(0.5) { 1 } else { -1 }))
        .collect();
    Ok((
        OmegaSample {
            offsets,
            signs,
            stream,
        },
        dec,
    ))
}

/// `count` independent samples; identical to calling [`sample_one`] for each
/// index `0..count`.
pub fn sample_omega(
    g: &Graph,
    delta: u32,
    rounds: usize,
    seed: u64,
    count: usize,
    convention: ResidueConvention,
) -> Result<Vec<(OmegaSample, Decomposition)>> {
    if count == 0 {
        return Err(Error::InvalidParameter("sample count must be >= 1".into()));
    }
    (0..count as u64)
        .into_par_iter()
        .map(|k| sample_one(g, delta, rounds, seed, k, convention))
        .collect()
}

/// `|f_{Δ,ω}|` for every vertex: the distance to `∪ D_i` in the whole graph,
/// zero on cut vertices. When nothing was cut the distance is undefined and
/// the function is taken to be identically zero.
pub fn cut_magnitudes(g: &Graph, dec: &Decomposition) -> Vec<u32> {
    if dec.is_cut_empty() {
        return vec![0; g.n()];
    }
    multi_source_distances(g, &dec.cut_vertices())
}

/// The column `(f_{Δ,ω}(u))_u` for one decomposition and sign assignment.
pub fn f_column(g: &Graph, dec: &Decomposition, signs: &SignMap) -> Result<Vec<i32>> {
    let mags = cut_magnitudes(g, dec);
    let leaders = dec.leader_of(g.n());
    mags.iter()
        .zip(&leaders)
        .map(|(&m, leader)| match leader {
            None => Ok(0),
            Some(l) => {
                let s = signs
                    .get(l)
                    .ok_or_else(|| Error::Precondition(format!("no sign for leader {l}")))?;
                Ok(i32::from(*s) * m as i32)
            }
        })
        .collect()
}

/// `f_{Δ,ω}(u) = θ_k · dist(u, ∪ D_i)` where `k` is the leader of `u`'s
/// component; zero when `u` is cut.
pub fn eval_f(g: &Graph, dec: &Decomposition, signs: &SignMap, u: usize) -> Result<f64> {
    g.check_vertex(u)?;
    Ok(f_column(g, dec, signs)?[u] as f64)
}

/// Exact `θ`-probability that `f(u)` and `f(v)` have different signs, found by
/// enumerating the signs of the (at most two) leaders involved. Signs take
/// values in `{−1, 0, 1}`.
pub fn sign_disagreement(g: &Graph, dec: &Decomposition, u: usize, v: usize) -> Result<f64> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    let leaders = dec.leader_of(g.n());
    let involved: Vec<usize> = {
        let mut l: Vec<usize> = [leaders[u], leaders[v]].into_iter().flatten().collect();
        l.sort_unstable();
        l.dedup();
        l
    };
    let patterns = 1u32 << involved.len();
    let mut disagree = 0u32;
    for mask in 0..patterns {
        let signs: SignMap = involved
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, if mask >> i & 1 == 1 { 1 } else { -1 }))
            .chain(dec.components.iter().map(|c| (c.leader, 1)))
            .fold(SignMap::new(), |mut acc, (l, s)| {
                acc.entry(l).or_insert(s);
                acc
            });
        let col = f_column(g, dec, &signs)?;
        if col[u].signum() != col[v].signum() {
            disagree += 1;
        }
    }
    Ok(disagree as f64 / patterns as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn p9_cut() -> (Graph, Decomposition) {
        let g = path(9);
        let dec = kpr_decompose(
            &g,
            &Offsets::new(4, vec![2]).unwrap(),
            ResidueConvention::Literal,
        );
        (g, dec)
    }

    #[test]
    fn hand_computed_values() {
        let (g, dec) = p9_cut();
        let signs: SignMap = [(0, 1), (3, -1), (7, 1)].into_iter().collect();
        assert_eq!(eval_f(&g, &dec, &signs, 0).unwrap(), 2.0);
        assert_eq!(eval_f(&g, &dec, &signs, 2).unwrap(), 0.0);
        assert_eq!(eval_f(&g, &dec, &signs, 4).unwrap(), -2.0);
        assert_eq!(
            f_column(&g, &dec, &signs).unwrap(),
            vec![2, 1, 0, -1, -2, -1, 0, 1, 2]
        );
    }

    #[test]
    fn missing_sign_is_an_error() {
        let (g, dec) = p9_cut();
        let signs: SignMap = [(0, 1)].into_iter().collect();
        assert!(f_column(&g, &dec, &signs).is_err());
    }

    #[test]
    fn empty_cut_gives_zero_function() {
        let g = path(5);
        let dec = kpr_decompose(
            &g,
            &Offsets::new(16, vec![16]).unwrap(),
            ResidueConvention::SkipLeader,
        );
        assert!(dec.is_cut_empty());
        let signs: SignMap = [(0, -1)].into_iter().collect();
        assert_eq!(f_column(&g, &dec, &signs).unwrap(), vec![0; 5]);
    }

    #[test]
    fn sampling_is_reproducible_and_lazy() {
        let g = path(9);
        let a = sample_omega(&g, 4, 2, 99, 16, ResidueConvention::Literal).unwrap();
        let b = sample_omega(&g, 4, 2, 99, 16, ResidueConvention::Literal).unwrap();
        assert_eq!(a, b);
        for (omega, dec) in &a {
            let leaders: Vec<usize> = dec.components.iter().map(|c| c.leader).collect();
            assert_eq!(omega.signs.keys().copied().collect::<Vec<_>>(), leaders);
            assert!(omega.offsets.values().iter().all(|&r| (1..=4).contains(&r)));
        }
        let (one, _) = sample_one(&g, 4, 2, 99, 5, ResidueConvention::Literal).unwrap();
        assert_eq!(one, a[5].0);
        assert!(sample_omega(&g, 4, 2, 99, 0, ResidueConvention::Literal).is_err());
    }

    #[test]
    fn sign_split_is_one_half() {
        let (g, dec) = p9_cut();
        // 0 and 4 sit in different components, both uncut
        assert_eq!(sign_disagreement(&g, &dec, 0, 4).unwrap(), 0.5);
        // same component: the common sign cancels
        assert_eq!(sign_disagreement(&g, &dec, 3, 5).unwrap(), 0.0);
        // one cut vertex: 0 against ±1
        assert_eq!(sign_disagreement(&g, &dec, 2, 4).unwrap(), 1.0);
    }
}
