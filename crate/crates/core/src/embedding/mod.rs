//! Random-sign distance functions and the multi-scale `L₁` embedding.
//!
//! At scale `Δ`, a sample `ω = (λ, θ)` fixes residue offsets `λ ∈ [Δ]^r` and a
//! sign per component leader. The function
//!
//! ```text
//! f_{Δ,ω}(u) = θ_{leader(u)} · dist_g(u, D_1 ∪ … ∪ D_r)      (0 on cut vertices)
//! ```
//!
//! is 1-Lipschitz, and `u ↦ F_{Δ,u} = f_{Δ,·}(u)` maps into `L₁(Ω_Δ)`. The
//! embedding stacks the scales `Δ = 2^i` with weights `(2/3)^i`, centered at a
//! base vertex. Integrals over `Ω_Δ` are replaced by empirical means over
//! sampled `ω`; the `oracle` functions enumerate `Λ_Δ` exactly for small cases.

mod dump;
mod multiscale;
mod omega;
mod oracle;
mod padding;
mod scale;

pub use dump::{read_dump, write_dump, CoordinateDefect, EmbeddingDump, DUMP_HEADER};
pub use multiscale::{default_i_max, l1_distance, multiscale_embed, EmbedConfig, L1Point};
pub use omega::{
    cut_magnitudes, eval_f, f_column, sample_omega, sample_one, sign_disagreement, OmegaSample,
    SignMap,
};
pub use oracle::{
    enumerate_decompositions, exact_pair_expectation, exact_pair_table, expected_abs_gap,
    separated_under_all_offsets, SignedMagnitude, MAX_ENUMERATION,
};
pub use padding::{estimate_padding, PaddingEstimate};
pub use scale::{embed_scale, LipschitzViolation, MagnitudeViolation, ScaleBlock};
