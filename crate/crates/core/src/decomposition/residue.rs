use std::collections::VecDeque;

use super::{Component, Decomposition, Offsets, ResidueConvention, Variant};
use crate::error::{Error, Result};
use crate::graphcore::{components_within, mask_of, Graph, UNREACHABLE};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundOutcome {
    pub deleted: Vec<usize>,
    pub components: Vec<Component>,
}

/// One residue round over the subgraph induced on `live`.
///
/// Each component of `live` is measured from its least vertex using distances
/// inside that component; vertices at distance `≡ offset (mod Δ)` are deleted.
pub fn residue_round(
    g: &Graph,
    live: &[usize],
    delta: u32,
    offset: u32,
    convention: ResidueConvention,
) -> Result<RoundOutcome> {
    if live.is_empty() {
        return Err(Error::InvalidParameter(
            "residue round needs a nonempty live set".into(),
        ));
    }
    if delta == 0 || offset == 0 || offset > delta {
        return Err(Error::InvalidParameter(format!(
            "offset {offset} is outside [1, {delta}]"
        )));
    }
    for &v in live {
        g.check_vertex(v)?;
    }
    let mut mask = mask_of(g.n(), live);
    let comps = components_within(g, &mask);
    let deleted = round_on_mask(g, &mut mask, &comps, delta, offset, convention);
    let components = components_within(g, &mask)
        .into_iter()
        .map(Component::from_sorted)
        .collect();
    Ok(RoundOutcome {
        deleted,
        components,
    })
}

/// Applies `r` residue rounds with the given offsets, starting from the whole
/// graph (whose first leader is vertex 0).
pub fn kpr_decompose(g: &Graph, offsets: &Offsets, convention: ResidueConvention) -> Decomposition {
    let delta = offsets.delta();
    let mut mask = vec![true; g.n()];
    let mut comps = components_within(g, &mask);
    let mut deleted = Vec::with_capacity(offsets.rounds());
    for &offset in offsets.values() {
        deleted.push(round_on_mask(
            g, &mut mask, &comps, delta, offset, convention,
        ));
        comps = components_within(g, &mask);
    }
    Decomposition {
        delta,
        rounds: offsets.rounds(),
        variant: Variant::Residue,
        offsets: offsets.values().to_vec(),
        deleted,
        components: comps.into_iter().map(Component::from_sorted).collect(),
    }
}

/// Deletes the residue shells of every component in `comps` from `mask` and
/// returns them sorted. Each component must be a connected component of `mask`.
fn round_on_mask(
    g: &Graph,
    mask: &mut [bool],
    comps: &[Vec<usize>],
    delta: u32,
    offset: u32,
    convention: ResidueConvention,
) -> Vec<usize> {
    let target = offset % delta;
    let mut dist = vec![UNREACHABLE; g.n()];
    let mut queue = VecDeque::new();
    let mut deleted = Vec::new();
    for comp in comps {
        let leader = comp[0];
        dist[leader] = 0;
        queue.push_back(leader);
        while let Some(u) = queue.pop_front() {
            let du = dist[u];
            for &v in g.neighbors(u) {
                if mask[v] && dist[v] == UNREACHABLE {
                    dist[v] = du + 1;
                    queue.push_back(v);
                }
            }
        }
        for &v in comp {
            let d = dist[v];
            let skip = d == 0 && convention == ResidueConvention::SkipLeader;
            if d % delta == target && !skip {
                deleted.push(v);
            }
        }
    }
    for &v in &deleted {
        mask[v] = false;
    }
    deleted.sort_unstable();
    deleted
}
