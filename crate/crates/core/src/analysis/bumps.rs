use serde::{Deserialize, Serialize};

use crate::embedding::{expected_abs_gap, SignedMagnitude};
use crate::error::{Error, Result};
use crate::graphcore::{MetricSpace, PairMeasure};

/// `φ(D, s) = s/(4D) − 2`.
pub fn phi_threshold(d: f64, s: u64) -> Result<f64> {
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "D must be positive, got {d}"
        )));
    }
    Ok(s as f64 / (4.0 * d) - 2.0)
}

/// The family `f_θ(x) = θ_j (s/2 − dist(x, A_j))` on the `s/2`-neighbourhood
/// of `A_j`, zero elsewhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignedBumps {
    pub s: u32,
    pub sets: Vec<Vec<usize>>,
    /// Per point: the bump it lies in and the magnitude there.
    bump: Vec<SignedMagnitude>,
}

/// Builds the bump family; the sets must be nonempty and pairwise at distance
/// at least `s`, so that every point lies in at most one bump.
pub fn signed_bumps(m: &MetricSpace, sets: &[Vec<usize>], s: u32) -> Result<SignedBumps> {
    if s == 0 {
        return Err(Error::InvalidParameter("bump width s must be >= 1".into()));
    }
    for (j, a) in sets.iter().enumerate() {
        if a.is_empty() {
            return Err(Error::Precondition(format!("set {j} is empty")));
        }
        if let Some(&x) = a.iter().find(|&&x| x >= m.len()) {
            return Err(Error::VertexOutOfRange {
                vertex: x,
                n: m.len(),
            });
        }
        for (i, b) in sets[..j].iter().enumerate() {
            let d = m.set_distance(a, b).unwrap_or(0);
            if d < s {
                return Err(Error::Precondition(format!(
                    "sets {i} and {j} are at distance {d} < s = {s}"
                )));
            }
        }
    }
    let bump = (0..m.len())
        .map(|x| {
            sets.iter().enumerate().find_map(|(j, a)| {
                let d = m.point_set_distance(x, a)?;
                (2 * d < s).then(|| (j, f64::from(s) / 2.0 - f64::from(d)))
            })
        })
        .collect();
    Ok(SignedBumps {
        s,
        sets: sets.to_vec(),
        bump,
    })
}

impl SignedBumps {
    pub fn signed(&self, x: usize) -> SignedMagnitude {
        self.bump[x]
    }

    /// `|f_θ(x)|`, which does not depend on `θ`.
    pub fn magnitude(&self, x: usize) -> f64 {
        self.bump[x].map_or(0.0, |(_, a)| a)
    }

    pub fn eval(&self, theta: &[i8], x: usize) -> Result<f64> {
        if theta.len() != self.sets.len() {
            return Err(Error::InvalidParameter(format!(
                "{} signs for {} bumps",
                theta.len(),
                self.sets.len()
            )));
        }
        Ok(self.bump[x].map_or(0.0, |(j, a)| f64::from(theta[j]) * a))
    }

    /// Pairs `(x, y)` where some sign vector gives `|f_θ(x) − f_θ(y)| > d(x, y)`.
    pub fn lipschitz_violations(&self, m: &MetricSpace) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..m.len() {
            for y in x + 1..m.len() {
                let worst = match (self.bump[x], self.bump[y]) {
                    (None, None) => 0.0,
                    (Some((_, a)), None) | (None, Some((_, a))) => a,
                    (Some((i, a)), Some((j, b))) if i == j => (a - b).abs(),
                    (Some((_, a)), Some((_, b))) => a + b,
                };
                if worst > f64::from(m.d(x, y)) + 1e-12 {
                    out.push((x, y));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PoincareStatus {
    Holds,
    Fails,
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoincareReport {
    pub s: u32,
    pub sets: Vec<Vec<usize>>,
    /// `I = ∫ E_θ |f_θ(x) − f_θ(y)| dμ(x, y)`.
    pub integral: Option<f64>,
    /// `ν(∪ A_j)` with `ν` the first marginal of `μ`.
    pub covered_mass: Option<f64>,
    /// `L = (s/4) ν(∪ A_j)`.
    pub lower_bound: Option<f64>,
    /// Every 1-Lipschitz map into `L₁` has average displacement `I` here, so
    /// the Poincaré constant is at least this.
    pub d_lower_bound: Option<f64>,
    pub status: PoincareStatus,
}

pub const POINCARE_TOL: f64 = 1e-9;

pub fn poincare_test(
    m: &MetricSpace,
    mu: &PairMeasure,
    sets: &[Vec<usize>],
    s: u32,
) -> Result<PoincareReport> {
    let skipped = |reason: String| PoincareReport {
        s,
        sets: sets.to_vec(),
        integral: None,
        covered_mass: None,
        lower_bound: None,
        d_lower_bound: None,
        status: PoincareStatus::Skipped { reason },
    };
    let bumps = match signed_bumps(m, sets, s) {
        Ok(b) => b,
        Err(Error::Precondition(reason)) => return Ok(skipped(reason)),
        Err(e) => return Err(e),
    };
    let sep = f64::from(mu.separation());
    for (j, a) in sets.iter().enumerate() {
        let diam = f64::from(m.set_diameter(a));
        if diam >= sep - f64::from(s) / 2.0 {
            return Ok(skipped(format!(
                "set {j} has diameter {diam}, not below separation {sep} − s/2"
            )));
        }
    }
    if let Some(&(x, y, _)) = mu
        .support()
        .iter()
        .find(|&&(x, y, _)| x >= m.len() || y >= m.len())
    {
        return Err(Error::VertexOutOfRange {
            vertex: x.max(y),
            n: m.len(),
        });
    }
    let integral: f64 = mu
        .support()
        .iter()
        .map(|&(x, y, w)| w * expected_abs_gap(bumps.signed(x), bumps.signed(y)))
        .sum();
    let nu = mu.first_marginal(m.len());
    let mut covered: Vec<usize> = sets.iter().flatten().copied().collect();
    covered.sort_unstable();
    covered.dedup();
    let covered_mass = nu.restrict(&covered);
    let lower_bound = f64::from(s) / 4.0 * covered_mass;
    let status = if integral >= lower_bound - POINCARE_TOL {
        PoincareStatus::Holds
    } else {
        PoincareStatus::Fails
    };
    Ok(PoincareReport {
        s,
        sets: sets.to_vec(),
        integral: Some(integral),
        covered_mass: Some(covered_mass),
        lower_bound: Some(lower_bound),
        d_lower_bound: Some(integral),
        status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::{metric_of, Graph};

    fn p9() -> MetricSpace {
        metric_of(&Graph::new(9, (1..9).map(|i| (i - 1, i))).unwrap()).unwrap()
    }

    #[test]
    fn phi_values() {
        assert_eq!(phi_threshold(1.0, 16).unwrap(), 2.0);
        assert_eq!(phi_threshold(1.0, 8).unwrap(), 0.0);
        assert_eq!(phi_threshold(1.0, 9).unwrap(), 0.25);
        assert!(phi_threshold(0.0, 9).is_err());
    }

    #[test]
    fn bump_values() {
        let m = p9();
        let b = signed_bumps(&m, &[vec![0], vec![8]], 4).unwrap();
        assert_eq!(b.eval(&[1, -1], 0).unwrap(), 2.0);
        assert_eq!(b.eval(&[1, -1], 1).unwrap(), 1.0);
        assert_eq!(b.eval(&[1, -1], 8).unwrap(), -2.0);
        assert_eq!(b.eval(&[1, -1], 4).unwrap(), 0.0);
        assert_eq!(b.eval(&[-1, -1], 0).unwrap().abs(), b.magnitude(0));
        assert!(b.lipschitz_violations(&m).is_empty());
        assert!(signed_bumps(&m, &[vec![0], vec![3]], 4).is_err());
        assert!(b.eval(&[1], 0).is_err());
    }

    #[test]
    fn path_fixture() {
        let m = p9();
        let mu = PairMeasure::new(vec![(0, 8, 0.5), (8, 0, 0.5)], 8, &m).unwrap();
        let r = poincare_test(&m, &mu, &[vec![0], vec![8]], 4).unwrap();
        assert_eq!(r.integral, Some(2.0));
        assert_eq!(r.lower_bound, Some(1.0));
        assert_eq!(r.status, PoincareStatus::Holds);
    }

    #[test]
    fn outside_bumps_and_one_sided() {
        let m = p9();
        let mu = PairMeasure::new(vec![(3, 5, 1.0)], 2, &m).unwrap();
        // A = {0}, s = 2: bump radius 1 covers only 0
        let r = poincare_test(&m, &mu, &[vec![0]], 2).unwrap();
        assert_eq!(r.integral, Some(0.0));
        assert_eq!(r.lower_bound, Some(0.0));
        assert_eq!(r.status, PoincareStatus::Holds);

        let mu = PairMeasure::new(vec![(0, 8, 1.0)], 8, &m).unwrap();
        let r = poincare_test(&m, &mu, &[vec![0]], 4).unwrap();
        assert_eq!(r.integral, Some(2.0));
    }

    #[test]
    fn violated_preconditions_skip() {
        let m = p9();
        let mu = PairMeasure::new(vec![(0, 8, 1.0)], 8, &m).unwrap();
        let r = poincare_test(&m, &mu, &[vec![0], vec![2]], 4).unwrap();
        assert!(matches!(r.status, PoincareStatus::Skipped { .. }));
        // diameter 7 is not below 8 − 2
        let r = poincare_test(&m, &mu, &[vec![0, 7]], 4).unwrap();
        assert!(matches!(r.status, PoincareStatus::Skipped { .. }));
    }
}
