//! Subset-enumeration oracles for the exhaustion process, written
//! independently of its search code.

use serde::{Deserialize, Serialize};

use super::exhaust::{
    closes_ball, qualifies, sweep_order, ExpansionCertificate, Scope, Strategy, EXHAUSTIVE_LIMIT,
    MASS_TOL,
};
use crate::error::{Error, Result};
use crate::graphcore::{MetricSpace, VertexMeasure};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinExpansion {
    pub set: Vec<usize>,
    pub mass: f64,
    pub boundary_mass: f64,
    pub ratio: f64,
}

struct Evaluated {
    diameter: u32,
    mass: f64,
    boundary_mass: f64,
}

fn evaluate(
    m: &MetricSpace,
    nu: &VertexMeasure,
    region: &[usize],
    set: &[usize],
    s: u32,
) -> Evaluated {
    let mut diameter = 0;
    for &a in set {
        for &b in set {
            diameter = diameter.max(m.d(a, b));
        }
    }
    let mass = set.iter().map(|&v| nu.weight(v)).sum();
    let boundary_mass = region
        .iter()
        .filter(|x| !set.contains(x) && set.iter().any(|&a| m.d(a, **x) <= s))
        .map(|&x| nu.weight(x))
        .sum();
    Evaluated {
        diameter,
        mass,
        boundary_mass,
    }
}

/// Minimum of `ν(δ_F A)/ν(A)` over all nonempty proper `A ⊊ F` (`F` = every
/// point of `m`) with diameter `< T` and `ν(A) > 0`; ties go to the
/// lexicographically least set. `None` when no set is eligible.
pub fn brute_force_min_expansion(
    m: &MetricSpace,
    nu: &VertexMeasure,
    s: u32,
    threshold: f64,
) -> Result<Option<MinExpansion>> {
    let k = m.len();
    if k > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge {
            what: "brute-force region",
            actual: k,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    if nu.len() != k {
        return Err(Error::InvalidParameter(
            "measure and metric sizes differ".into(),
        ));
    }
    let region: Vec<usize> = (0..k).collect();
    let mut best: Option<MinExpansion> = None;
    for mask in 1u32..(1 << k) - 1 {
        let set: Vec<usize> = (0..k).filter(|&j| mask >> j & 1 == 1).collect();
        let e = evaluate(m, nu, &region, &set, s);
        if f64::from(e.diameter) >= threshold || e.mass <= 0.0 {
            continue;
        }
        let ratio = e.boundary_mass / e.mass;
        let better = match &best {
            None => true,
            Some(b) => ratio < b.ratio - MASS_TOL || (ratio <= b.ratio + MASS_TOL && set < b.set),
        };
        if better {
            best = Some(MinExpansion {
                set,
                mass: e.mass,
                boundary_mass: e.boundary_mass,
                ratio,
            });
        }
    }
    Ok(best)
}

/// Independent re-verification of a certificate against `(m, ν, s, T)`.
///
/// Regions of at most [`EXHAUSTIVE_LIMIT`] points are re-checked over all
/// subsets whatever the declared scope; larger regions are re-checked over
/// the declared candidate family.
pub fn certificate_check(
    cert: &ExpansionCertificate,
    m: &MetricSpace,
    nu: &VertexMeasure,
    s: u32,
    threshold: f64,
) -> bool {
    let region = &cert.region;
    if region.is_empty()
        || nu.len() != m.len()
        || region.iter().any(|&x| x >= m.len())
        || region.windows(2).any(|w| w[0] >= w[1])
        || cert.params.s != s
        || cert.params.threshold != threshold
    {
        return false;
    }
    let mass: f64 = region.iter().map(|&v| nu.weight(v)).sum();
    let mut diameter = 0;
    for &a in region {
        for &b in region {
            diameter = diameter.max(m.d(a, b));
        }
    }
    if mass <= 0.0 || f64::from(diameter) < threshold {
        return false;
    }
    let phi = cert.params.phi;
    if region.len() <= EXHAUSTIVE_LIMIT {
        let sub = m.restrict(region);
        let sub_nu = nu.select(region);
        return match brute_force_min_expansion(&sub, &sub_nu, s, threshold) {
            Ok(None) => true,
            Ok(Some(best)) => !qualifies(0, best.mass, best.boundary_mass, f64::INFINITY, phi),
            Err(_) => false,
        };
    }
    let strategy = match cert.scope {
        Scope::Exhaustive => return false,
        Scope::CandidateFamily { strategy } => strategy,
    };
    for &center in region {
        let order = sweep_order(m, region, center);
        for i in 0..order.len() {
            if strategy == Strategy::Balls && !closes_ball(m, &order, i) {
                continue;
            }
            let mut set = order[..=i].to_vec();
            set.sort_unstable();
            let e = evaluate(m, nu, region, &set, s);
            if f64::from(e.diameter) >= threshold {
                break;
            }
            if qualifies(e.diameter, e.mass, e.boundary_mass, threshold, phi) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{exhaust, ExhaustOutcome, ExhaustParams};
    use crate::graphcore::{metric_of, Graph};

    fn star() -> MetricSpace {
        metric_of(&Graph::new(5, (1..5).map(|i| (0, i))).unwrap()).unwrap()
    }

    #[test]
    fn star_minimum() {
        // With T = 3 every subset is small enough. The four leaves and
        // {0,1,2,3} both have one boundary point against mass 4/5.
        let m = star();
        let nu = VertexMeasure::uniform(5);
        let best = brute_force_min_expansion(&m, &nu, 1, 3.0).unwrap().unwrap();
        assert_eq!(best.set, vec![0, 1, 2, 3]);
        approx::assert_abs_diff_eq!(best.ratio, 0.25, epsilon = 1e-12);
        let leaves = evaluate(&m, &nu, &[0, 1, 2, 3, 4], &[1, 2, 3, 4], 1);
        approx::assert_abs_diff_eq!(leaves.boundary_mass / leaves.mass, 0.25, epsilon = 1e-12);
        let best = brute_force_min_expansion(&m, &nu, 1, 2.0).unwrap().unwrap();
        assert_eq!(best.set, vec![1]);
        assert_eq!(best.ratio, 1.0);
    }

    #[test]
    fn complete_graph_singletons() {
        let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let m = metric_of(&Graph::new(4, edges).unwrap()).unwrap();
        let best = brute_force_min_expansion(&m, &VertexMeasure::uniform(4), 1, 1.0)
            .unwrap()
            .unwrap();
        assert_eq!(best.set, vec![0]);
        approx::assert_abs_diff_eq!(best.ratio, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn point_mass_gives_zero_ratio() {
        let m = metric_of(&Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap()).unwrap();
        let nu = VertexMeasure::point_mass(4, 0);
        let best = brute_force_min_expansion(&m, &nu, 1, 1.0).unwrap().unwrap();
        assert_eq!(best.set, vec![0]);
        assert_eq!(best.ratio, 0.0);
    }

    #[test]
    fn certificate_round_trip_and_tampering() {
        let m = star();
        let nu = VertexMeasure::uniform(5);
        let params = ExhaustParams {
            s: 1,
            threshold: 2.0,
            phi: 0.3,
            strategy: Strategy::Exhaustive,
        };
        let ExhaustOutcome::Certificate(cert) = exhaust(&m, &nu, params).unwrap() else {
            panic!("expected a certificate")
        };
        assert!(certificate_check(&cert, &m, &nu, 1, 2.0));
        let mut raised = cert.clone();
        raised.params.phi = 1.5;
        assert!(!certificate_check(&raised, &m, &nu, 1, 2.0));
        let mut empty = cert.clone();
        empty.region.clear();
        assert!(!certificate_check(&empty, &m, &nu, 1, 2.0));
        assert!(!certificate_check(&cert, &m, &nu, 1, 3.0));
    }

    #[test]
    fn too_large() {
        let m = metric_of(&Graph::new(21, (1..21).map(|i| (i - 1, i))).unwrap()).unwrap();
        assert!(brute_force_min_expansion(&m, &VertexMeasure::uniform(21), 1, 2.0).is_err());
    }
}
