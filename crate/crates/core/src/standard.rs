//! The standard probe battery used by the axiom matrix.
//!
//! Universal axioms run on the sampler as given. Existential probes use fixed
//! inputs scaled by the sampler range `B`:
//!
//! | probe | inputs |
//! |---|---|
//! | AvoidRepugnant | candidates `(B)`, `(B,B)`; `ε = 1`; `m ≤ 1000` |
//! | AvoidWeakRepugnant | grid `{0.5, 1, 2, 5}`; candidates `(B)`, `(B,B)`, `(c+1)`; `m ≤ 1000` |
//! | WeakExistenceOfCriticalLevels | `u ∈ {(1,2,3), (B/2)}`; bracket `[-10B, 10B]` |
//! | MonotoneZeroAddition | `u = (B,B)`; default shift grid |
//! | ExtendedContinuity | the rays of [`default_continuity_rays`] |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::axioms::{check_universal_axiom, AxiomId};
use crate::error::{invalid, Error, Result};
use crate::ordering::{SwoConfig, SwoId};
use crate::probe::{Comparison, ProbeResult, ProbeStatus, SamplerConfig, Witness};
use crate::profile::Profile;
use crate::search::{
    check_avoid_repugnant, check_avoid_weak_repugnant, find_critical_level, probe_extended_continuity,
    probe_monotone_zero_addition, CriticalLevel, Ray,
};
use crate::witnesses::default_zero_addition_grid;

pub const REPUGNANCE_M_MAX: usize = 1000;
pub const WEAK_REPUGNANCE_GRID: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
pub const CONTINUITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StandardProbe {
    Universal(AxiomId),
    AvoidRepugnant,
    AvoidWeakRepugnant,
    WeakExistenceOfCriticalLevels,
    MonotoneZeroAddition,
    ExtendedContinuity,
}

impl StandardProbe {
    pub fn all() -> Vec<StandardProbe> {
        let mut probes: Vec<_> = AxiomId::ALL.into_iter().map(StandardProbe::Universal).collect();
        probes.extend([
            StandardProbe::AvoidRepugnant,
            StandardProbe::AvoidWeakRepugnant,
            StandardProbe::WeakExistenceOfCriticalLevels,
            StandardProbe::MonotoneZeroAddition,
            StandardProbe::ExtendedContinuity,
        ]);
        probes
    }

    pub fn name(self) -> String {
        match self {
            StandardProbe::Universal(a) => a.name().to_string(),
            StandardProbe::AvoidRepugnant => "AvoidRepugnant".into(),
            StandardProbe::AvoidWeakRepugnant => "AvoidWeakRepugnant".into(),
            StandardProbe::WeakExistenceOfCriticalLevels => "WeakExistenceOfCriticalLevels".into(),
            StandardProbe::MonotoneZeroAddition => "MonotoneZeroAddition".into(),
            StandardProbe::ExtendedContinuity => "ExtendedContinuity".into(),
        }
    }
}

impl fmt::Display for StandardProbe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for StandardProbe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StandardProbe::all()
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| invalid(format!("unknown axiom or probe: {s}")))
    }
}

/// `(u, ray)` pairs that straddle the zero boundary and a leximin rank tie.
pub fn default_continuity_rays() -> Vec<(Profile, Ray)> {
    let p = |s: &str| s.parse::<Profile>().expect("static profile");
    vec![
        (p("1 1"), Ray::new(p("2 0"), p("0 1"), -1.0, 1.0).expect("static ray")),
        (p("1 3"), Ray::new(p("0 2"), p("1 0"), 0.0, 2.0).expect("static ray")),
    ]
}

pub fn run_standard_probe(
    probe: StandardProbe,
    swo: SwoId,
    cfg: &SwoConfig,
    sampler: &SamplerConfig,
) -> Result<ProbeResult> {
    sampler.validate()?;
    let b = sampler.range;
    let big = || -> Result<Vec<Profile>> { Ok(vec![Profile::singleton(b)?, Profile::replicate(2, b)?]) };
    match probe {
        StandardProbe::Universal(axiom) => check_universal_axiom(axiom, swo, cfg, sampler),
        StandardProbe::AvoidRepugnant => {
            // existential in u: the first passing candidate settles it
            let mut last = None;
            for u in big()? {
                let r = check_avoid_repugnant(swo, cfg, &u, 1.0, REPUGNANCE_M_MAX)?;
                if r.is_pass() {
                    return Ok(r);
                }
                last = Some(r);
            }
            Ok(last.expect("two candidates"))
        }
        StandardProbe::AvoidWeakRepugnant => {
            check_avoid_weak_repugnant(swo, cfg, &WEAK_REPUGNANCE_GRID, REPUGNANCE_M_MAX, &big()?)
        }
        StandardProbe::WeakExistenceOfCriticalLevels => {
            let candidates = ["1 2 3".parse::<Profile>()?, Profile::singleton(b / 2.0)?];
            let mut tried = 0;
            for u in &candidates {
                tried += 1;
                if let CriticalLevel::Found(c) = find_critical_level(swo, cfg, u, -10.0 * b, 10.0 * b, 1e-9)? {
                    let w = Witness::new(vec![Comparison::observe(
                        "(u,c) vs u",
                        swo,
                        cfg,
                        u.with_added(1, c)?,
                        u.clone(),
                    )])
                    .with_parameter("c", c);
                    return Ok(ProbeResult::pass(tried, format!("critical level c = {c} for u = ({u})")).with_witness(w));
                }
            }
            if swo == SwoId::Theorem7 {
                let u = &candidates[0];
                let c = Comparison::observe("(u,0) vs u", swo, cfg, u.with_added(1, 0.0)?, u.clone());
                return Ok(ProbeResult::fail(
                    tried,
                    Witness::new(vec![c]),
                    "adding anyone enlarges the population, which always ranks strictly lower: no critical level exists",
                )
                .certify());
            }
            Ok(ProbeResult::inconclusive(tried, "no critical level found in the search brackets"))
        }
        StandardProbe::MonotoneZeroAddition => {
            probe_monotone_zero_addition(swo, cfg, &Profile::replicate(2, b)?, &default_zero_addition_grid())
        }
        StandardProbe::ExtendedContinuity => {
            let mut results = Vec::new();
            for (u, ray) in default_continuity_rays() {
                let r = probe_extended_continuity(swo, cfg, &u, &ray, CONTINUITY_TOL)?;
                if r.is_fail() {
                    return Ok(r);
                }
                results.push(r);
            }
            let passes = results.iter().filter(|r| r.is_pass()).count();
            let rays = results.len() as u64;
            Ok(if passes > 0 {
                ProbeResult::pass(rays, format!("{passes} of {rays} rays cross the indifference boundary continuously"))
            } else {
                ProbeResult::inconclusive(rays, "no ray crossed the indifference boundary")
            })
        }
    }
}

/// Expected status where the constructions make a claim; `None` where they
/// are silent.
pub fn known_answer(swo: SwoId, probe: StandardProbe) -> Option<ProbeStatus> {
    use AxiomId::*;
    use ProbeStatus::{Fail, Pass};
    use StandardProbe as P;
    let pass_set: &[StandardProbe] = match swo {
        SwoId::Theorem2 => &[
            P::Universal(Anonymity),
            P::Universal(StrongPareto),
            P::Universal(PigouDalton),
            P::Universal(AvoidSadistic),
            P::AvoidRepugnant,
            P::ExtendedContinuity,
        ],
        SwoId::ModifiedTheorem2 => &[
            P::Universal(Anonymity),
            P::Universal(StrongPareto),
            P::Universal(AvoidSadistic),
            P::AvoidRepugnant,
            P::ExtendedContinuity,
        ],
        SwoId::Theorem3 => &[
            P::Universal(Anonymity),
            P::Universal(StrongPareto),
            P::Universal(PigouDalton),
            P::Universal(AvoidSadistic),
            P::AvoidRepugnant,
            P::MonotoneZeroAddition,
        ],
        SwoId::LeximinExtended => &[
            P::Universal(Anonymity),
            P::Universal(PigouDalton),
            P::Universal(StrongPareto),
            P::AvoidWeakRepugnant,
            P::WeakExistenceOfCriticalLevels,
        ],
        SwoId::Theorem7 => &[
            P::Universal(Anonymity),
            P::Universal(PigouDalton),
            P::Universal(StrongPareto),
            P::Universal(StrongAvoidWeakSadistic),
            P::AvoidWeakRepugnant,
            P::ExtendedContinuity,
        ],
        SwoId::Total | SwoId::Clgu => &[P::Universal(Anonymity), P::Universal(StrongPareto), P::Universal(AvoidSadistic)],
        SwoId::Average => &[P::Universal(Anonymity)],
    };
    let fail_set: &[StandardProbe] = match swo {
        SwoId::Total => &[P::AvoidRepugnant],
        SwoId::Clgu => &[P::AvoidRepugnant, P::AvoidWeakRepugnant],
        SwoId::Average => &[P::Universal(AvoidSadistic)],
        SwoId::Theorem2 => &[P::MonotoneZeroAddition],
        SwoId::Theorem3 => &[P::ExtendedContinuity],
        // padding the shorter side with its own maximum lets (u, s) overtake (u, v)
        SwoId::LeximinExtended => &[P::ExtendedContinuity, P::Universal(AvoidWeakSadistic)],
        // the negative geometric-mean term rewards spreading negative levels
        SwoId::ModifiedTheorem2 => &[P::MonotoneZeroAddition, P::Universal(PigouDalton)],
        SwoId::Theorem7 => &[P::WeakExistenceOfCriticalLevels],
    };
    if pass_set.contains(&probe) {
        Some(Pass)
    } else if fail_set.contains(&probe) {
        Some(Fail)
    } else {
        None
    }
}
