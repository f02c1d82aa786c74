use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embedding::{l1_distance, L1Point};
use crate::error::{Error, Result};
use crate::graphcore::MetricSpace;

/// Envelopes of embedded distance at graph distance `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileBucket {
    pub t: u32,
    /// Pairs at distance exactly `t`.
    pub pairs: usize,
    /// `ρ̂₁(t)`: least embedded distance over pairs with `d ≥ t`.
    pub rho1: f64,
    /// `ρ̂₂(t)`: greatest embedded distance over pairs with `d ≤ t`.
    pub rho2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionProfile {
    pub n: usize,
    pub diameter: u32,
    pub buckets: Vec<ProfileBucket>,
}

impl DistortionProfile {
    /// `ρ̂₁(t)` for any `t ≥ 1` up to the diameter.
    pub fn rho1_at(&self, t: u32) -> Option<f64> {
        self.buckets.iter().find(|b| b.t >= t).map(|b| b.rho1)
    }

    /// `ρ̂₂(t)` for any `t ≥ 1`.
    pub fn rho2_at(&self, t: u32) -> Option<f64> {
        self.buckets.iter().rev().find(|b| b.t <= t).map(|b| b.rho2)
    }

    /// Buckets with `ρ̂₂(t) > 3t`.
    pub fn upper_violations(&self) -> Vec<ProfileBucket> {
        self.buckets
            .iter()
            .filter(|b| b.rho2 > 3.0 * f64::from(b.t))
            .copied()
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,rho1,rho2\n");
        for b in &self.buckets {
            out.push_str(&format!("{},{},{}\n", b.t, b.rho1, b.rho2));
        }
        out
    }
}

/// Embedded distance envelopes over all pairs of distinct points.
pub fn contract_profile(p: &L1Point, m: &MetricSpace) -> Result<DistortionProfile> {
    let n = m.len();
    if p.n() != n {
        return Err(Error::InvalidParameter(format!(
            "embedding has {} points, metric has {n}",
            p.n()
        )));
    }
    let diameter = m.diameter();
    let slots = diameter as usize + 1;
    let empty = || {
        (
            vec![0usize; slots],
            vec![f64::INFINITY; slots],
            vec![f64::NEG_INFINITY; slots],
        )
    };
    let (count, lo, hi) = (0..n)
        .into_par_iter()
        .fold(empty, |(mut c, mut lo, mut hi), u| {
            for v in u + 1..n {
                let t = m.d(u, v) as usize;
                let x = l1_distance(p, u, v);
                c[t] += 1;
                lo[t] = lo[t].min(x);
                hi[t] = hi[t].max(x);
            }
            (c, lo, hi)
        })
        .reduce(empty, |(mut c, mut lo, mut hi), (c2, lo2, hi2)| {
            for t in 0..slots {
                c[t] += c2[t];
                lo[t] = lo[t].min(lo2[t]);
                hi[t] = hi[t].max(hi2[t]);
            }
            (c, lo, hi)
        });

    let mut buckets: Vec<ProfileBucket> = Vec::new();
    let mut running_max = f64::NEG_INFINITY;
    for t in 1..slots {
        if count[t] == 0 {
            continue;
        }
        running_max = running_max.max(hi[t]);
        buckets.push(ProfileBucket {
            t: t as u32,
            pairs: count[t],
            rho1: lo[t],
            rho2: running_max,
        });
    }
    let mut running_min = f64::INFINITY;
    for b in buckets.iter_mut().rev() {
        running_min = running_min.min(b.rho1);
        b.rho1 = running_min;
    }
    Ok(DistortionProfile {
        n,
        diameter,
        buckets,
    })
}
