//! Variable-population social welfare orderings and randomized axiom probes.
//!
//! ```
//! use popswo::{compare, Profile, SwoConfig, SwoId, Verdict};
//!
//! let ten_at_ten: Profile = "10*10".parse().unwrap();
//! let many_at_one: Profile = "101*1".parse().unwrap();
//! let cfg = SwoConfig::default();
//! assert_eq!(compare(SwoId::Total, &ten_at_ten, &many_at_one, &cfg), Verdict::Worse);
//! assert_eq!(compare(SwoId::Average, &ten_at_ten, &many_at_one, &cfg), Verdict::Better);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod axioms;
pub mod error;
pub mod ordering;
pub mod par;
pub mod probe;
pub mod profile;
pub mod search;
pub mod standard;
pub mod witnesses;

pub use axioms::{check_universal_axiom, check_universal_axiom_with, AxiomId};
pub use error::{Error, Result};
pub use ordering::{
    compare, value, FBoundedKind, FDampenKind, GKind, SwoConfig, SwoId, Verdict, DEFAULT_TOLERANCE,
};
pub use par::Execution;
pub use probe::{Comparison, ProbeResult, ProbeStatus, SamplerConfig, Witness};
pub use profile::{parse_profile, parse_profile_file, Profile};
pub use search::{
    check_avoid_repugnant, check_avoid_weak_repugnant, find_critical_level, probe_extended_continuity,
    probe_monotone_zero_addition, CriticalLevel, Ray,
};
pub use standard::{run_standard_probe, StandardProbe};
pub use witnesses::{
    check_proposition1, run_theorem1_chain, run_theorem4_chain, test_lemma2_equivalence,
    test_lemma3_implication, ChainOptions, WitnessChain,
};
