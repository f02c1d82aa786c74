//! Exhaustion of the proximity graph by small sets with small boundary.
//!
//! Starting from `F = G(n, s)`, repeatedly find `A ⊆ F` with ambient diameter
//! `< T`, `ν(A) > 0` and `ν(δ_F A) ≤ φ ν(A)`, then delete `A ∪ δ_F A`. The
//! process stops with a trace once `diam(F) < T`, or with a certificate when
//! no searched set qualifies while `diam(F) ≥ T`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphcore::{MetricSpace, VertexMeasure};

/// Largest region the exhaustive strategy enumerates.
pub const EXHAUSTIVE_LIMIT: usize = 20;

/// Absolute slack in the boundary test and in mass comparisons.
pub const MASS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Every subset of the region.
    Exhaustive,
    /// Every ball `B(c, ρ) ∩ F`.
    Balls,
    /// Every prefix of `F` ordered by distance from a center (this includes
    /// the balls).
    #[default]
    Sweep,
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::Balls => "balls",
            Strategy::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExhaustParams {
    /// Proximity scale: points within `s` are adjacent.
    pub s: u32,
    /// Diameter threshold `T`.
    pub threshold: f64,
    pub phi: f64,
    pub strategy: Strategy,
}

/// The shared acceptance test for a candidate set.
pub fn qualifies(diameter: u32, mass: f64, boundary_mass: f64, threshold: f64, phi: f64) -> bool {
    f64::from(diameter) < threshold && mass > 0.0 && boundary_mass <= phi * mass + MASS_TOL
}

/// `ν(set)`, summed in ascending vertex order.
pub(crate) fn mass_of(nu: &VertexMeasure, set: &[usize]) -> f64 {
    set.iter().map(|&v| nu.weight(v)).sum()
}

/// `δ_F A`: points of the region outside `set` within distance `s` of it.
pub fn region_boundary(m: &MetricSpace, region: &[usize], set: &[usize], s: u32) -> Vec<usize> {
    region
        .iter()
        .copied()
        .filter(|x| set.binary_search(x).is_err())
        .filter(|&x| set.iter().any(|&a| m.d(a, x) <= s))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExhaustionStep {
    /// `F_i` before the removal.
    pub region: Vec<usize>,
    /// `A_i`.
    pub removed: Vec<usize>,
    /// `δ_{F_i} A_i`.
    pub boundary: Vec<usize>,
    pub mass: f64,
    pub boundary_mass: f64,
    pub diameter: u32,
}

impl ExhaustionStep {
    pub fn ratio(&self) -> f64 {
        self.boundary_mass / self.mass
    }

    fn build(
        m: &MetricSpace,
        nu: &VertexMeasure,
        region: &[usize],
        removed: Vec<usize>,
        s: u32,
    ) -> Self {
        let boundary = region_boundary(m, region, &removed, s);
        Self {
            region: region.to_vec(),
            mass: mass_of(nu, &removed),
            boundary_mass: mass_of(nu, &boundary),
            diameter: m.set_diameter(&removed),
            removed,
            boundary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceEnd {
    /// The region's diameter fell below `T`.
    SmallDiameter,
    /// The region still has diameter `≥ T` but carries no mass.
    NoMass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExhaustionTrace {
    pub params: ExhaustParams,
    pub steps: Vec<ExhaustionStep>,
    /// What is left when the process stops.
    pub remainder: Vec<usize>,
    pub end: TraceEnd,
    pub initial_mass: f64,
}

/// Mass accounting of a trace: removed sets, their boundaries, and the
/// untouched remainder add up to the initial mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassLedger {
    pub removed: f64,
    pub boundary: f64,
    pub remainder: f64,
    pub initial: f64,
}

impl MassLedger {
    pub fn balance(&self) -> f64 {
        self.removed + self.boundary + self.remainder - self.initial
    }
}

impl ExhaustionTrace {
    /// `A_1, …, A_p`, with the remainder (if nonempty) as the last piece.
    pub fn pieces(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.steps.iter().map(|s| s.removed.clone()).collect();
        if !self.remainder.is_empty() {
            out.push(self.remainder.clone());
        }
        out
    }

    pub fn ledger(&self, nu: &VertexMeasure) -> MassLedger {
        MassLedger {
            removed: self.steps.iter().map(|s| s.mass).sum(),
            boundary: self.steps.iter().map(|s| s.boundary_mass).sum(),
            remainder: mass_of(nu, &self.remainder),
            initial: self.initial_mass,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scope {
    /// Every subset of the region was checked.
    Exhaustive,
    /// Only the named candidate family was checked.
    CandidateFamily { strategy: Strategy },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionCertificate {
    pub params: ExhaustParams,
    /// The surviving region `F`.
    pub region: Vec<usize>,
    pub region_diameter: u32,
    pub region_mass: f64,
    pub scope: Scope,
    /// Candidate sets with diameter `< T` and positive mass that were tested.
    pub checked: usize,
    /// Smallest boundary ratio among the checked sets and a set attaining it.
    pub min_ratio: Option<f64>,
    pub witness: Option<Vec<usize>>,
    /// Removals performed before the certificate was reached.
    pub history: Vec<ExhaustionStep>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ExhaustOutcome {
    Certificate(ExpansionCertificate),
    Trace(ExhaustionTrace),
}

impl ExhaustOutcome {
    pub fn steps(&self) -> &[ExhaustionStep] {
        match self {
            ExhaustOutcome::Certificate(c) => &c.history,
            ExhaustOutcome::Trace(t) => &t.steps,
        }
    }
}

#[derive(Default)]
struct Search {
    /// Qualifying set chosen so far: largest mass, then lexicographically least.
    best: Option<(f64, Vec<usize>)>,
    checked: usize,
    min_ratio: Option<(f64, Vec<usize>)>,
}

impl Search {
    fn offer(&mut self, mass: f64, set: impl FnOnce() -> Vec<usize>) {
        match &self.best {
            Some((m, _)) if mass < m - MASS_TOL => {}
            Some((m, cur)) if mass <= m + MASS_TOL => {
                let set = set();
                if set < *cur {
                    self.best = Some((mass, set));
                }
            }
            _ => self.best = Some((mass, set())),
        }
    }

    fn observe(&mut self, ratio: f64, set: impl FnOnce() -> Vec<usize>) {
        self.checked += 1;
        match &self.min_ratio {
            Some((r, _)) if ratio >= *r => {}
            _ => self.min_ratio = Some((ratio, set())),
        }
    }
}

fn search_exhaustive(
    m: &MetricSpace,
    nu: &VertexMeasure,
    region: &[usize],
    p: &ExhaustParams,
) -> Search {
    let k = region.len();
    let full = 1usize << k;
    let set_of = |mask: usize| -> Vec<usize> {
        (0..k)
            .filter(|&j| mask >> j & 1 == 1)
            .map(|j| region[j])
            .collect()
    };
    let adj: Vec<usize> = (0..k)
        .map(|j| {
            (0..k)
                .filter(|&i| i != j && m.d(region[i], region[j]) <= p.s)
                .fold(0, |acc, i| acc | 1 << i)
        })
        .collect();
    let mut mass = vec![0.0f64; full];
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        mass[mask] = mass[mask & (mask - 1)] + nu.weight(region[low]);
    }
    let mut diam = vec![0u32; full];
    let mut nbr = vec![0usize; full];
    let mut out = Search::default();
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        nbr[mask] = nbr[rest] | adj[low];
        let mut d = diam[rest];
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            d = d.max(m.d(region[low], region[j]));
            bits &= bits - 1;
        }
        diam[mask] = d;
        if f64::from(d) >= p.threshold || mass[mask] <= 0.0 {
            continue;
        }
        let bm = mass[nbr[mask] & !mask];
        out.observe(bm / mass[mask], || set_of(mask));
        if qualifies(d, mass[mask], bm, p.threshold, p.phi) {
            out.offer(mass[mask], || set_of(mask));
        }
    }
    out
}

/// Distance order from `center`: by distance, then index.
pub(crate) fn sweep_order(m: &MetricSpace, region: &[usize], center: usize) -> Vec<usize> {
    let mut order = region.to_vec();
    order.sort_by_key(|&x| (m.d(center, x), x));
    order
}

/// Whether the prefix `order[..=i]` is a ball around `order[0]`.
pub(crate) fn closes_ball(m: &MetricSpace, order: &[usize], i: usize) -> bool {
    i + 1 == order.len() || m.d(order[0], order[i + 1]) > m.d(order[0], order[i])
}

fn search_family(
    m: &MetricSpace,
    nu: &VertexMeasure,
    region: &[usize],
    p: &ExhaustParams,
) -> Search {
    let mut in_region = vec![false; m.len()];
    for &x in region {
        in_region[x] = true;
    }
    let mut out = Search::default();
    for &center in region {
        let order = sweep_order(m, region, center);
        let mut in_set = vec![false; m.len()];
        let mut near = vec![0u32; m.len()];
        let (mut mass, mut bm, mut diam) = (0.0f64, 0.0f64, 0u32);
        for (i, &y) in order.iter().enumerate() {
            for &a in &order[..i] {
                diam = diam.max(m.d(a, y));
            }
            if f64::from(diam) >= p.threshold {
                break;
            }
            in_set[y] = true;
            mass += nu.weight(y);
            if near[y] > 0 {
                bm -= nu.weight(y);
            }
            for &x in region {
                if x != y && m.d(x, y) <= p.s {
                    near[x] += 1;
                    if near[x] == 1 && !in_set[x] {
                        bm += nu.weight(x);
                    }
                }
            }
            if p.strategy == Strategy::Balls && !closes_ball(m, &order, i) {
                continue;
            }
            if mass <= 0.0 {
                continue;
            }
            let sorted = || {
                let mut s = order[..=i].to_vec();
                s.sort_unstable();
                s
            };
            out.observe(bm.max(0.0) / mass, sorted);
            // incremental sums can drift; recheck near the threshold exactly
            if bm <= p.phi * mass + 1e-9 {
                let set = sorted();
                let exact_mass = mass_of(nu, &set);
                let boundary = region_boundary(m, region, &set, p.s);
                let exact_bm = mass_of(nu, &boundary);
                if qualifies(diam, exact_mass, exact_bm, p.threshold, p.phi) {
                    out.offer(exact_mass, || set);
                }
            }
        }
    }
    out
}

fn validate(m: &MetricSpace, nu: &VertexMeasure, p: &ExhaustParams) -> Result<()> {
    if nu.len() != m.len() {
        return Err(Error::InvalidParameter(format!(
            "measure has {} weights for {} points",
            nu.len(),
            m.len()
        )));
    }
    if nu.total() <= 0.0 {
        return Err(Error::InvalidParameter("measure is empty".into()));
    }
    if !(p.threshold.is_finite() && p.threshold > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "threshold T = {} must be positive",
            p.threshold
        )));
    }
    if !p.phi.is_finite() {
        return Err(Error::InvalidParameter("φ must be finite".into()));
    }
    if p.s == 0 {
        return Err(Error::InvalidParameter(
            "proximity scale s must be >= 1".into(),
        ));
    }
    if p.strategy == Strategy::Exhaustive && m.len() > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge {
            what: "exhaustive search region",
            actual: m.len(),
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    Ok(())
}

pub fn exhaust(
    m: &MetricSpace,
    nu: &VertexMeasure,
    params: ExhaustParams,
) -> Result<ExhaustOutcome> {
    validate(m, nu, &params)?;
    let mut region: Vec<usize> = (0..m.len()).collect();
    let mut steps = Vec::new();
    let trace = |steps, remainder, end| {
        Ok(ExhaustOutcome::Trace(ExhaustionTrace {
            params,
            steps,
            remainder,
            end,
            initial_mass: nu.total(),
        }))
    };
    loop {
        let diameter = m.set_diameter(&region);
        if region.is_empty() || f64::from(diameter) < params.threshold {
            return trace(steps, region, TraceEnd::SmallDiameter);
        }
        let region_mass = mass_of(nu, &region);
        if region_mass <= 0.0 {
            return trace(steps, region, TraceEnd::NoMass);
        }
        let search = match params.strategy {
            Strategy::Exhaustive => search_exhaustive(m, nu, &region, &params),
            Strategy::Balls | Strategy::Sweep => search_family(m, nu, &region, &params),
        };
        match search.best {
            None => {
                let scope = match params.strategy {
                    Strategy::Exhaustive => Scope::Exhaustive,
                    strategy => Scope::CandidateFamily { strategy },
                };
                let (min_ratio, witness) = search.min_ratio.unzip();
                return Ok(ExhaustOutcome::Certificate(ExpansionCertificate {
                    params,
                    region,
                    region_diameter: diameter,
                    region_mass,
                    scope,
                    checked: search.checked,
                    min_ratio,
                    witness,
                    history: steps,
                }));
            }
            Some((_, set)) => {
                let step = ExhaustionStep::build(m, nu, &region, set, params.s);
                region.retain(|x| {
                    step.removed.binary_search(x).is_err()
                        && step.boundary.binary_search(x).is_err()
                });
                steps.push(step);
            }
        }
    }
}

/// Pairwise distance between distinct pieces of the trace is at least `s`.
pub fn check_separation(trace: &ExhaustionTrace, m: &MetricSpace, s: u32) -> bool {
    let pieces = trace.pieces();
    pieces.iter().enumerate().all(|(i, a)| {
        pieces[i + 1..]
            .iter()
            .all(|b| m.set_distance(a, b).map_or(true, |d| d >= s))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::{metric_of, Graph};

    fn star() -> MetricSpace {
        metric_of(&Graph::new(5, (1..5).map(|i| (0, i))).unwrap()).unwrap()
    }

    fn params(threshold: f64, phi: f64, strategy: Strategy) -> ExhaustParams {
        ExhaustParams {
            s: 1,
            threshold,
            phi,
            strategy,
        }
    }

    #[test]
    fn star_below_threshold_is_an_immediate_trace() {
        // diam = 2 < T = 3, so the process has nothing to do
        let m = star();
        let nu = VertexMeasure::uniform(5);
        let out = exhaust(&m, &nu, params(3.0, 0.3, Strategy::Exhaustive)).unwrap();
        let ExhaustOutcome::Trace(t) = out else {
            panic!("expected a trace")
        };
        assert!(t.steps.is_empty());
        assert_eq!(t.remainder, vec![0, 1, 2, 3, 4]);
        assert_eq!(t.end, TraceEnd::SmallDiameter);
    }

    #[test]
    fn star_certificate_at_threshold_two() {
        // sets of diameter < 2: singletons and center–leaf pairs; the best
        // ratio is a leaf with boundary {center}, 1.
        let m = star();
        let nu = VertexMeasure::uniform(5);
        for strategy in [Strategy::Exhaustive, Strategy::Balls, Strategy::Sweep] {
            let out = exhaust(&m, &nu, params(2.0, 0.3, strategy)).unwrap();
            let ExhaustOutcome::Certificate(c) = out else {
                panic!("expected a certificate")
            };
            assert_eq!(c.region, vec![0, 1, 2, 3, 4]);
            approx::assert_abs_diff_eq!(c.min_ratio.unwrap(), 1.0, epsilon = 1e-12);
            assert_eq!(c.witness.as_deref(), Some(&[1][..]));
        }
    }

    #[test]
    fn star_trace_at_threshold_two() {
        let m = star();
        let nu = VertexMeasure::uniform(5);
        let out = exhaust(&m, &nu, params(2.0, 1.0, Strategy::Exhaustive)).unwrap();
        let ExhaustOutcome::Trace(t) = out else {
            panic!("expected a trace")
        };
        let removed: Vec<_> = t.steps.iter().map(|s| s.removed.clone()).collect();
        assert_eq!(removed, vec![vec![1], vec![2], vec![3]]);
        assert_eq!(t.steps[0].boundary, vec![0]);
        assert!(t.steps[1].boundary.is_empty());
        assert_eq!(t.remainder, vec![4]);
        assert!(check_separation(&t, &m, 1));
        let ledger = t.ledger(&nu);
        assert!(ledger.balance().abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let m = star();
        let nu = VertexMeasure::uniform(5);
        let zero = VertexMeasure::new(vec![0.0; 5]).unwrap();
        assert!(exhaust(&m, &zero, params(2.0, 0.3, Strategy::Sweep)).is_err());
        assert!(exhaust(&m, &nu, params(0.0, 0.3, Strategy::Sweep)).is_err());
        assert!(exhaust(
            &m,
            &VertexMeasure::uniform(4),
            params(2.0, 0.3, Strategy::Sweep)
        )
        .is_err());
        let big = metric_of(&Graph::new(21, (1..21).map(|i| (i - 1, i))).unwrap()).unwrap();
        assert!(matches!(
            exhaust(
                &big,
                &VertexMeasure::uniform(21),
                params(2.0, 0.3, Strategy::Exhaustive)
            ),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn two_clusters_are_separated() {
        // two triangles joined by a path of length 10
        let mut edges = vec![(0, 1), (1, 2), (0, 2), (13, 14), (14, 15), (13, 15)];
        edges.extend((2..13).map(|i| (i, i + 1)));
        let m = metric_of(&Graph::new(16, edges).unwrap()).unwrap();
        let nu = VertexMeasure::uniform(16);
        let out = exhaust(&m, &nu, params(4.0, 0.5, Strategy::Sweep)).unwrap();
        let ExhaustOutcome::Trace(t) = out else {
            panic!("expected a trace")
        };
        assert!(t.steps.len() >= 2);
        let s2 = ExhaustParams { s: 2, ..t.params };
        let out2 = exhaust(&m, &nu, s2).unwrap();
        if let ExhaustOutcome::Trace(t2) = out2 {
            assert!(check_separation(&t2, &m, 2));
        }
        assert!(check_separation(&t, &m, 1));
    }
}
