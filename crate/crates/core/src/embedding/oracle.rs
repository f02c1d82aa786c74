//! Exact expectations by full enumeration of `Λ_Δ = [Δ]^r`, with the signs
//! integrated out in closed form.

use rayon::prelude::*;

use super::omega::cut_magnitudes;
use crate::decomposition::{kpr_decompose, Decomposition, Offsets, ResidueConvention};
use crate::error::{Error, Result};
use crate::graphcore::Graph;

/// Largest `Δ^r` the enumerating oracles accept.
pub const MAX_ENUMERATION: u64 = 1_000_000;

/// A point's value under independent uniform signs: `None` when the value is
/// identically zero, otherwise the sign key (component leader or bump index)
/// and the magnitude.
pub type SignedMagnitude = Option<(usize, f64)>;

/// `E_θ |x − y|` for two sign-carrying values.
///
/// Same key: the common sign cancels, `|a − b|`. Different keys: the four sign
/// patterns average to `(|a − b| + |a + b|)/2`. One value zero: the other's
/// magnitude.
pub fn expected_abs_gap(x: SignedMagnitude, y: SignedMagnitude) -> f64 {
    match (x, y) {
        (None, None) => 0.0,
        (Some((_, a)), None) | (None, Some((_, a))) => a.abs(),
        (Some((i, a)), Some((j, b))) if i == j => (a - b).abs(),
        (Some((_, a)), Some((_, b))) => ((a - b).abs() + (a + b).abs()) / 2.0,
    }
}

fn enumeration_size(delta: u32, rounds: usize) -> Result<u64> {
    if delta == 0 || rounds == 0 {
        return Err(Error::InvalidParameter(
            "need Δ >= 1 and at least one round".into(),
        ));
    }
    let mut size = 1u64;
    for _ in 0..rounds {
        size = size.saturating_mul(delta as u64);
        if size > MAX_ENUMERATION {
            return Err(Error::TooLarge {
                what: "offset enumeration Δ^r",
                actual: size as usize,
                limit: MAX_ENUMERATION as usize,
            });
        }
    }
    Ok(size)
}

/// Every decomposition of `[Δ]^rounds`, in mixed-radix order.
pub fn enumerate_decompositions(
    g: &Graph,
    delta: u32,
    rounds: usize,
    convention: ResidueConvention,
) -> Result<Vec<Decomposition>> {
    let size = enumeration_size(delta, rounds)?;
    Ok((0..size)
        .into_par_iter()
        .map(|i| kpr_decompose(g, &Offsets::from_index(delta, rounds, i), convention))
        .collect())
}

fn signed_values(g: &Graph, dec: &Decomposition) -> Vec<SignedMagnitude> {
    let mags = cut_magnitudes(g, dec);
    dec.leader_of(g.n())
        .into_iter()
        .zip(mags)
        .map(|(l, m)| l.map(|l| (l, f64::from(m))))
        .collect()
}

/// `E_ω |F_{Δ,u}(ω) − F_{Δ,v}(ω)|` exactly.
pub fn exact_pair_expectation(
    g: &Graph,
    delta: u32,
    rounds: usize,
    u: usize,
    v: usize,
    convention: ResidueConvention,
) -> Result<f64> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    let size = enumeration_size(delta, rounds)?;
    let terms: Vec<f64> = (0..size)
        .into_par_iter()
        .map(|i| {
            let dec = kpr_decompose(g, &Offsets::from_index(delta, rounds, i), convention);
            let vals = signed_values(g, &dec);
            expected_abs_gap(vals[u], vals[v])
        })
        .collect();
    Ok(terms.iter().sum::<f64>() / size as f64)
}

/// The exact expectation for every ordered pair, row-major `n × n`.
pub fn exact_pair_table(
    g: &Graph,
    delta: u32,
    rounds: usize,
    convention: ResidueConvention,
) -> Result<Vec<f64>> {
    let n = g.n();
    let decs = enumerate_decompositions(g, delta, rounds, convention)?;
    let mut table = vec![0.0; n * n];
    for dec in &decs {
        let vals = signed_values(g, dec);
        for u in 0..n {
            for v in 0..n {
                table[u * n + v] += expected_abs_gap(vals[u], vals[v]);
            }
        }
    }
    let count = decs.len() as f64;
    table.iter_mut().for_each(|x| *x /= count);
    Ok(table)
}

/// Row-major `n × n` flags: `true` when `u` and `v` never lie in a common
/// component, over every offset vector.
pub fn separated_under_all_offsets(
    g: &Graph,
    delta: u32,
    rounds: usize,
    convention: ResidueConvention,
) -> Result<Vec<bool>> {
    let n = g.n();
    let size = enumeration_size(delta, rounds)?;
    let together = (0..size)
        .into_par_iter()
        .fold(
            || vec![false; n * n],
            |mut acc, i| {
                let dec = kpr_decompose(g, &Offsets::from_index(delta, rounds, i), convention);
                for comp in &dec.components {
                    for &u in &comp.vertices {
                        for &v in &comp.vertices {
                            acc[u * n + v] = true;
                        }
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![false; n * n],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x |= y);
                a
            },
        );
    Ok(together.into_iter().map(|t| !t).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn closed_form_cases() {
        assert_eq!(expected_abs_gap(Some((0, 3.0)), Some((1, 5.0))), 5.0);
        assert_eq!(expected_abs_gap(Some((0, 3.0)), Some((0, 5.0))), 2.0);
        assert_eq!(expected_abs_gap(Some((0, 3.0)), None), 3.0);
        assert_eq!(expected_abs_gap(None, Some((2, 4.0))), 4.0);
        assert_eq!(expected_abs_gap(None, None), 0.0);
    }

    #[test]
    fn closed_form_matches_sign_enumeration() {
        for a in 0..6 {
            for b in 0..6 {
                let (a, b) = (f64::from(a), f64::from(b));
                let mut total = 0.0;
                for s in [-1.0, 1.0] {
                    for t in [-1.0, 1.0] {
                        total += (s * a - t * b).abs();
                    }
                }
                assert_eq!(expected_abs_gap(Some((0, a)), Some((1, b))), total / 4.0);
            }
        }
    }

    #[test]
    fn diagonal_is_zero_and_table_agrees() {
        let g = path(6);
        let table = exact_pair_table(&g, 4, 2, ResidueConvention::Literal).unwrap();
        for u in 0..6 {
            assert_eq!(table[u * 6 + u], 0.0);
            for v in 0..6 {
                let e = exact_pair_expectation(&g, 4, 2, u, v, ResidueConvention::Literal).unwrap();
                approx::assert_abs_diff_eq!(table[u * 6 + v], e, epsilon = 1e-12);
                approx::assert_abs_diff_eq!(table[u * 6 + v], table[v * 6 + u], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn enumeration_limit() {
        let g = path(3);
        assert!(matches!(
            exact_pair_expectation(&g, 1000, 3, 0, 1, ResidueConvention::Literal),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn scale_two_isolates_every_vertex() {
        // Δ = 2 deletes one parity class of the path in the first round.
        let g = path(7);
        let sep = separated_under_all_offsets(&g, 2, 2, ResidueConvention::Literal).unwrap();
        for u in 0..7 {
            assert!(!sep[u * 7 + u]);
            for v in 0..7 {
                if u != v {
                    assert!(sep[u * 7 + v]);
                }
            }
        }
    }
}
