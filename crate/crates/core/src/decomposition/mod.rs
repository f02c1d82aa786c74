//! Random cutting procedures producing low-diameter decompositions.
//!
//! Two variants share the [`Decomposition`] record:
//! - [`kpr_decompose`]: `r` rounds of residue cuts. In each round every current
//!   component is measured from its least vertex, inside the component, and the
//!   vertices whose distance is congruent to that round's offset modulo `Δ`
//!   are deleted. One offset per round is shared by all components.
//! - [`annulus_decompose`]: the measure-aware variant deleting annuli of width
//!   `2s` separated by gaps of width `t`, with the offset chosen per component
//!   to minimise the deleted mass.

mod annulus;
mod params;
mod residue;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphcore::{components_within, Graph};

pub use annulus::{annulus_decompose, annulus_round, AnnulusParams};
pub use params::{
    parameter_search, satisfies_mass_condition, satisfies_size_condition, CutParameters,
};
pub use residue::{kpr_decompose, residue_round, RoundOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Residue,
    Annulus,
}

/// How a residue offset `r_j ≡ 0 (mod Δ)` treats distance-0 vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidueConvention {
    /// Apply the congruence verbatim: the leader is deleted when `r_j ≡ 0`.
    #[default]
    Literal,
    /// Never delete a component's leader.
    SkipLeader,
}

/// Residue offsets `λ = (r_1, …, r_r) ∈ [Δ]^r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Offsets {
    delta: u32,
    values: Vec<u32>,
}

impl Offsets {
    pub fn new(delta: u32, values: Vec<u32>) -> Result<Self> {
        if delta == 0 {
            return Err(Error::InvalidParameter("scale Δ must be >= 1".into()));
        }
        if values.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one round is required".into(),
            ));
        }
        if let Some(&bad) = values.iter().find(|&&r| r == 0 || r > delta) {
            return Err(Error::InvalidParameter(format!(
                "offset {bad} is outside [1, {delta}]"
            )));
        }
        Ok(Self { delta, values })
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn rounds(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// Decodes `index ∈ 0..Δ^rounds` as a mixed-radix offset vector; used for
    /// full enumeration of `[Δ]^rounds`. The first round is the slowest digit.
    pub fn from_index(delta: u32, rounds: usize, mut index: u64) -> Self {
        let mut values = vec![0; rounds];
        for slot in values.iter_mut().rev() {
            *slot = (index % delta as u64) as u32 + 1;
            index /= delta as u64;
        }
        Self { delta, values }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Component {
    pub leader: usize,
    pub vertices: Vec<usize>,
}

impl Component {
    pub(crate) fn from_sorted(vertices: Vec<usize>) -> Self {
        Self {
            leader: vertices[0],
            vertices,
        }
    }
}

/// Result of a multi-round cutting procedure.
///
/// `deleted[j]` is the set removed in round `j + 1`; `components` are the
/// connected components of what survives all rounds, ordered by leader.
/// For the annulus variant `offsets` lists the chosen `α` per processed
/// component, round by round in leader order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Decomposition {
    pub delta: u32,
    pub rounds: usize,
    pub variant: Variant,
    pub offsets: Vec<u32>,
    pub deleted: Vec<Vec<usize>>,
    pub components: Vec<Component>,
}

impl Decomposition {
    /// `∪ D_i`, sorted.
    pub fn cut_vertices(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.deleted.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }

    pub fn is_cut_empty(&self) -> bool {
        self.deleted.iter().all(Vec::is_empty)
    }

    /// Maps each vertex to the index of its component, `None` for cut vertices.
    pub fn component_index(&self, n: usize) -> Vec<Option<usize>> {
        let mut idx = vec![None; n];
        for (c, comp) in self.components.iter().enumerate() {
            for &v in &comp.vertices {
                idx[v] = Some(c);
            }
        }
        idx
    }

    /// Maps each vertex to its component leader, `None` for cut vertices.
    pub fn leader_of(&self, n: usize) -> Vec<Option<usize>> {
        let mut lead = vec![None; n];
        for comp in &self.components {
            for &v in &comp.vertices {
                lead[v] = Some(comp.leader);
            }
        }
        lead
    }

    /// Checks the partition property: deleted sets and components are
    /// disjoint and cover `g`, each component is a connected component of the
    /// surviving subgraph, and each leader is the least vertex of its component.
    pub fn validate(&self, g: &Graph) -> std::result::Result<(), String> {
        if self.deleted.len() != self.rounds {
            return Err(format!(
                "{} deleted sets recorded for {} rounds",
                self.deleted.len(),
                self.rounds
            ));
        }
        let n = g.n();
        let mut owner = vec![0u32; n];
        for set in &self.deleted {
            for &v in set {
                if v >= n {
                    return Err(format!("deleted vertex {v} out of range"));
                }
                owner[v] += 1;
            }
        }
        let mut live = vec![false; n];
        for comp in &self.components {
            if comp.vertices.first() != Some(&comp.leader)
                || comp.vertices.windows(2).any(|w| w[0] >= w[1])
            {
                return Err(format!(
                    "component led by {} is not sorted with its leader first",
                    comp.leader
                ));
            }
            for &v in &comp.vertices {
                if v >= n {
                    return Err(format!("component vertex {v} out of range"));
                }
                owner[v] += 1;
                live[v] = true;
            }
        }
        if let Some(v) = owner.iter().position(|&c| c != 1) {
            return Err(format!("vertex {v} is covered {} times", owner[v]));
        }
        let expected: Vec<Vec<usize>> = components_within(g, &live);
        let actual: Vec<&Vec<usize>> = self.components.iter().map(|c| &c.vertices).collect();
        if expected.iter().collect::<Vec<_>>() != actual {
            return Err(
                "components are not the connected components of the surviving graph".into(),
            );
        }
        Ok(())
    }
}

/// `d_{Δ,r} = (r−1)(4(r+1)Δ+1)`, the strict upper bound on component
/// diameters of an `r`-round decomposition of a `K_r`-minor-free graph.
pub fn kpr_diameter_bound(delta: u32, r: u32) -> Result<u64> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!(
            "minor order r must be >= 2, got {r}"
        )));
    }
    if delta == 0 {
        return Err(Error::InvalidParameter("scale Δ must be >= 1".into()));
    }
    let r = r as u64;
    Ok((r - 1) * (4 * (r + 1) * delta as u64 + 1))
}
