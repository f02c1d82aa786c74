use serde::{Deserialize, Serialize};

use super::{Component, Decomposition, Variant};
use crate::error::{Error, Result};
use crate::graphcore::{bfs_within, components_within, mask_of, Graph, VertexMeasure, UNREACHABLE};

/// Annulus width `2s` and gap `t`; the period is `Δ = t + 2s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnulusParams {
    pub s: u32,
    pub t: u32,
}

impl AnnulusParams {
    pub fn new(s: u32, t: u32) -> Result<Self> {
        if s == 0 || t == 0 {
            return Err(Error::InvalidParameter(format!(
                "annulus parameters need s >= 1 and t >= 1 (s={s}, t={t})"
            )));
        }
        Ok(Self { s, t })
    }

    pub fn delta(&self) -> u32 {
        self.t + 2 * self.s
    }

    /// Per-round surviving fraction guaranteed by averaging, `t / (2s + t)`.
    pub fn survival_ratio(&self) -> f64 {
        self.t as f64 / self.delta() as f64
    }
}

/// Whether a vertex at distance `d` from the center lies in the annulus set
/// for offset `alpha`, i.e. `(d − α) mod Δ ∈ {1, …, 2s}`.
#[inline]
pub(crate) fn in_annulus(d: u32, alpha: u32, p: AnnulusParams) -> bool {
    let delta = p.delta();
    let shifted = (d % delta + delta - alpha % delta) % delta;
    (1..=2 * p.s).contains(&shifted)
}

/// One annulus cut of `component`, measured from `center` inside the
/// component. Every `α ∈ {0, …, Δ−1}` is tried and the one deleting the least
/// `ν`-mass wins, ties going to the smallest `α`. `nu` should already be
/// restricted to the set whose mass is being protected.
pub fn annulus_round(
    g: &Graph,
    component: &[usize],
    nu: &VertexMeasure,
    params: AnnulusParams,
    center: usize,
) -> Result<(Vec<usize>, u32)> {
    if nu.len() != g.n() {
        return Err(Error::InvalidParameter(format!(
            "measure has {} weights for {} vertices",
            nu.len(),
            g.n()
        )));
    }
    if !component.contains(&center) {
        return Err(Error::Precondition(format!(
            "center {center} is not in the component"
        )));
    }
    let mask = mask_of(g.n(), component);
    let dist = bfs_within(g, center, &mask);
    if component.iter().any(|&v| dist[v] == UNREACHABLE) {
        return Err(Error::Precondition("component is not connected".into()));
    }

    let delta = params.delta();
    let mut by_residue = vec![0.0f64; delta as usize];
    for &v in component {
        by_residue[(dist[v] % delta) as usize] += nu.weight(v);
    }
    let total: f64 = by_residue.iter().sum();
    let tol = 1e-12 * total.max(1.0);
    let mut best = (f64::INFINITY, 0u32);
    for alpha in 0..delta {
        let mass: f64 = (1..=2 * params.s)
            .map(|k| by_residue[((alpha + k) % delta) as usize])
            .sum();
        if mass < best.0 - tol {
            best = (mass, alpha);
        }
    }
    let alpha = best.1;
    let mut deleted: Vec<usize> = component
        .iter()
        .copied()
        .filter(|&v| in_annulus(dist[v], alpha, params))
        .collect();
    deleted.sort_unstable();
    Ok((deleted, alpha))
}

/// `rounds` annulus rounds; each round cuts every current component around its
/// least vertex with that component's own graph distance.
pub fn annulus_decompose(
    g: &Graph,
    nu: &VertexMeasure,
    params: AnnulusParams,
    rounds: usize,
) -> Result<Decomposition> {
    if rounds == 0 {
        return Err(Error::InvalidParameter(
            "at least one round is required".into(),
        ));
    }
    let mut mask = vec![true; g.n()];
    let mut deleted = Vec::with_capacity(rounds);
    let mut offsets = Vec::new();
    for _ in 0..rounds {
        let mut round_deleted = Vec::new();
        for comp in components_within(g, &mask) {
            let (d, alpha) = annulus_round(g, &comp, nu, params, comp[0])?;
            offsets.push(alpha);
            round_deleted.extend(d);
        }
        for &v in &round_deleted {
            mask[v] = false;
        }
        round_deleted.sort_unstable();
        deleted.push(round_deleted);
    }
    Ok(Decomposition {
        delta: params.delta(),
        rounds,
        variant: Variant::Annulus,
        offsets,
        deleted,
        components: components_within(g, &mask)
            .into_iter()
            .map(Component::from_sorted)
            .collect(),
    })
}

impl Decomposition {
    /// `ν(∪ G_i)`: mass of the vertices that survive every round.
    pub fn surviving_mass(&self, nu: &VertexMeasure) -> f64 {
        self.components
            .iter()
            .map(|c| nu.restrict(&c.vertices))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn path_offsets_enumerated() {
        // residue masses (Δ = 4): {0,4,8} = 3/9, {1,5}, {2,6}, {3,7} = 2/9 each;
        // α = 0 and α = 1 both delete 4/9, α = 2 and α = 3 delete 5/9.
        let g = path(9);
        let all: Vec<usize> = (0..9).collect();
        let nu = VertexMeasure::uniform(9);
        let p = AnnulusParams::new(1, 2).unwrap();
        let (deleted, alpha) = annulus_round(&g, &all, &nu, p, 0).unwrap();
        assert_eq!(alpha, 0);
        assert_eq!(deleted, vec![1, 2, 5, 6]);
        approx::assert_abs_diff_eq!(nu.restrict(&deleted), 4.0 / 9.0, epsilon = 1e-15);
        assert!(nu.restrict(&deleted) <= 0.5);
    }

    #[test]
    fn coverage_is_exactly_two_s() {
        for (s, t) in [(1, 1), (1, 2), (2, 3), (3, 7)] {
            let p = AnnulusParams::new(s, t).unwrap();
            for d in 0..50 {
                let hits = (0..p.delta()).filter(|&a| in_annulus(d, a, p)).count();
                assert_eq!(hits as u32, 2 * s, "d={d} s={s} t={t}");
            }
        }
    }

    #[test]
    fn center_mass_survives() {
        let g = path(9);
        let all: Vec<usize> = (0..9).collect();
        let nu = VertexMeasure::point_mass(9, 0);
        let (deleted, _) =
            annulus_round(&g, &all, &nu, AnnulusParams::new(1, 2).unwrap(), 0).unwrap();
        assert!(!deleted.contains(&0));
        assert_eq!(nu.restrict(&deleted), 0.0);
    }

    #[test]
    fn one_round_surviving_mass() {
        let g = path(9);
        let nu = VertexMeasure::uniform(9);
        let p = AnnulusParams::new(1, 2).unwrap();
        let dec = annulus_decompose(&g, &nu, p, 1).unwrap();
        dec.validate(&g).unwrap();
        approx::assert_abs_diff_eq!(dec.surviving_mass(&nu), 5.0 / 9.0, epsilon = 1e-15);
        assert!(dec.surviving_mass(&nu) >= 0.5);
    }

    #[test]
    fn zero_measure_is_vacuous() {
        let g = path(9);
        let nu = VertexMeasure::new(vec![0.0; 9]).unwrap();
        let dec = annulus_decompose(&g, &nu, AnnulusParams::new(1, 2).unwrap(), 2).unwrap();
        dec.validate(&g).unwrap();
        assert_eq!(dec.surviving_mass(&nu), 0.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = path(5);
        let nu = VertexMeasure::uniform(5);
        assert!(AnnulusParams::new(0, 2).is_err());
        let p = AnnulusParams::new(1, 1).unwrap();
        assert!(annulus_round(&g, &[0, 1], &nu, p, 3).is_err());
        assert!(annulus_round(&g, &[0, 2], &nu, p, 0).is_err());
        assert!(annulus_decompose(&g, &nu, p, 0).is_err());
    }
}
