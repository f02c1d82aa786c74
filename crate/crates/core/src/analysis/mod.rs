//! Verification and certification on top of the embedding and the cutting
//! procedures: distortion envelopes of an embedding, the exhaustion process
//! on proximity graphs with its subset oracles, and the signed-bump Poincaré
//! computation.

mod bumps;
mod exhaust;
mod oracle;
mod profile;

pub use bumps::{
    phi_threshold, poincare_test, signed_bumps, PoincareReport, PoincareStatus, SignedBumps,
    POINCARE_TOL,
};
pub use exhaust::{
    check_separation, exhaust, qualifies, region_boundary, ExhaustOutcome, ExhaustParams,
    ExhaustionStep, ExhaustionTrace, ExpansionCertificate, MassLedger, Scope, Strategy, TraceEnd,
    EXHAUSTIVE_LIMIT, MASS_TOL,
};
pub use oracle::{brute_force_min_expansion, certificate_check, MinExpansion};
pub use profile::{contract_profile, DistortionProfile, ProfileBucket};
