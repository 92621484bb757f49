//! Randomized falsification of universally quantified axioms.
//!
//! Each axiom is a template "for all profiles (and transfers, permutations…)
//! satisfying a premise, a comparison must come out a certain way". A probe
//! draws `samples` independent instantiations from the seeded sampler and
//! evaluates the implication through [`compare`]. The first violating sample
//! (lowest index) becomes the witness.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::ordering::{compare, SwoConfig, SwoId, Verdict};
use crate::par::{self, Execution};
use crate::probe::{Comparison, ProbeResult, SamplerConfig, Sampler, Witness, SOUNDNESS_NOTE};
use crate::profile::Profile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AxiomId {
    Anonymity,
    StrongPareto,
    WeakPareto,
    MinimalIncreasing,
    PigouDalton,
    MinimalEquity,
    AvoidSadistic,
    AvoidWeakSadistic,
    StrongAvoidWeakSadistic,
    AdditionOfIndifferent,
    PositiveResponsiveness,
    UtilityIndependence,
}

impl AxiomId {
    pub const ALL: [AxiomId; 12] = [
        AxiomId::Anonymity,
        AxiomId::StrongPareto,
        AxiomId::WeakPareto,
        AxiomId::MinimalIncreasing,
        AxiomId::PigouDalton,
        AxiomId::MinimalEquity,
        AxiomId::AvoidSadistic,
        AxiomId::AvoidWeakSadistic,
        AxiomId::StrongAvoidWeakSadistic,
        AxiomId::AdditionOfIndifferent,
        AxiomId::PositiveResponsiveness,
        AxiomId::UtilityIndependence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomId::Anonymity => "Anonymity",
            AxiomId::StrongPareto => "StrongPareto",
            AxiomId::WeakPareto => "WeakPareto",
            AxiomId::MinimalIncreasing => "MinimalIncreasing",
            AxiomId::PigouDalton => "PigouDalton",
            AxiomId::MinimalEquity => "MinimalEquity",
            AxiomId::AvoidSadistic => "AvoidSadistic",
            AxiomId::AvoidWeakSadistic => "AvoidWeakSadistic",
            AxiomId::StrongAvoidWeakSadistic => "StrongAvoidWeakSadistic",
            AxiomId::AdditionOfIndifferent => "AdditionOfIndifferent",
            AxiomId::PositiveResponsiveness => "PositiveResponsiveness",
            AxiomId::UtilityIndependence => "UtilityIndependence",
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AxiomId::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| invalid(format!("unknown axiom: {s}")))
    }
}

/// Probes `axiom` for `swo` on the default execution mode.
pub fn check_universal_axiom(
    axiom: AxiomId,
    swo: SwoId,
    cfg: &SwoConfig,
    sampler: &SamplerConfig,
) -> Result<ProbeResult> {
    check_universal_axiom_with(Execution::default(), axiom, swo, cfg, sampler)
}

pub fn check_universal_axiom_with(
    exec: Execution,
    axiom: AxiomId,
    swo: SwoId,
    cfg: &SwoConfig,
    sampler: &SamplerConfig,
) -> Result<ProbeResult> {
    sampler.validate()?;
    cfg.validate()?;
    let found = par::find_first(exec, sampler.samples, |i| {
        let mut draw = sampler.sample_rng(i);
        violation(axiom, swo, cfg, &mut draw).map(|w| (i, w.with_parameter("sample_index", i as f64)))
    });
    Ok(match found {
        Some((i, witness)) => ProbeResult::fail(
            i + 1,
            witness,
            format!("{axiom} violated at sample {i}; {SOUNDNESS_NOTE}"),
        ),
        None => ProbeResult::pass(
            sampler.samples,
            format!(
                "no counterexample in {} samples; {SOUNDNESS_NOTE}",
                sampler.samples
            ),
        ),
    })
}

/// Evaluates one random instance; `Some` carries the violated comparisons.
pub fn violation(axiom: AxiomId, swo: SwoId, cfg: &SwoConfig, draw: &mut Sampler) -> Option<Witness> {
    let observe = |label: &str, left: Profile, right: Profile| {
        Comparison::observe(label, swo, cfg, left, right)
    };
    match axiom {
        AxiomId::Anonymity => {
            let u = draw.profile();
            let perm = draw.permutation(u.len());
            let permuted = u.permuted(&perm);
            let c = observe("u vs permuted u", u, permuted);
            (c.verdict != Verdict::Indifferent).then(|| Witness::new(vec![c]))
        }
        AxiomId::StrongPareto | AxiomId::WeakPareto => {
            let u = draw.profile();
            let n = u.len();
            let mut raised: Vec<bool> = if axiom == AxiomId::WeakPareto {
                vec![true; n]
            } else {
                (0..n).map(|_| draw.rng_bool()).collect()
            };
            if !raised.iter().any(|&r| r) {
                let k = draw.index(n);
                raised[k] = true;
            }
            let levels = u
                .levels()
                .iter()
                .zip(&raised)
                .map(|(&x, &r)| if r { x + draw.increment() } else { x })
                .collect();
            let v = Profile::new(levels).expect("finite");
            let c = observe("improved v vs u", v, u);
            (c.verdict != Verdict::Better).then(|| Witness::new(vec![c]))
        }
        AxiomId::MinimalIncreasing => {
            let n = draw.population();
            let b = draw.level();
            let a = b + draw.increment();
            let c = observe(
                "n*a vs n*b",
                Profile::replicate(n, a).expect("n >= 1"),
                Profile::replicate(n, b).expect("n >= 1"),
            );
            (c.verdict != Verdict::Better).then(|| {
                Witness::new(vec![c])
                    .with_parameter("a", a)
                    .with_parameter("b", b)
            })
        }
        AxiomId::PigouDalton => {
            let n = draw.population_at_least(2);
            let u = draw.profile_of(n);
            let i = draw.index(n);
            let mut j = draw.index(n - 1);
            if j >= i {
                j += 1;
            }
            let (rich, poor) = if u.levels()[i] >= u.levels()[j] { (i, j) } else { (j, i) };
            let half_gap = (u.levels()[rich] - u.levels()[poor]) / 2.0;
            if half_gap <= 0.0 {
                return None;
            }
            let eps = half_gap * (1.0 - draw.unit());
            let mut levels = u.levels().to_vec();
            levels[rich] -= eps;
            levels[poor] += eps;
            let equalized = Profile::new(levels).expect("finite");
            let c = observe("after transfer vs before", equalized, u);
            (!c.verdict.at_least_as_good()).then(|| Witness::new(vec![c]).with_parameter("epsilon", eps))
        }
        AxiomId::MinimalEquity => {
            let u = draw.profile();
            let equal = Profile::replicate(u.len(), u.mean()).expect("n >= 1");
            let c = observe("n*mean vs u", equal, u);
            (!c.verdict.at_least_as_good()).then(|| Witness::new(vec![c]))
        }
        AxiomId::AvoidSadistic => {
            let u = draw.profile();
            let v = draw.positive_profile();
            let s = draw.negative_profile();
            let c = observe("(u,v) vs (u,s)", u.concat(&v), u.concat(&s));
            (!c.verdict.at_least_as_good()).then(|| Witness::new(vec![c]))
        }
        AxiomId::AvoidWeakSadistic
        | AxiomId::StrongAvoidWeakSadistic
        | AxiomId::AdditionOfIndifferent
        | AxiomId::PositiveResponsiveness
        | AxiomId::UtilityIndependence => {
            let u = draw.profile();
            let (mut v, mut s) = draw_pair(draw);
            let mut premise = compare(swo, &v, &s, cfg);
            if premise == Verdict::Worse {
                std::mem::swap(&mut v, &mut s);
                premise = Verdict::Better;
            }
            let applies = match axiom {
                AxiomId::AvoidWeakSadistic | AxiomId::PositiveResponsiveness => premise == Verdict::Better,
                AxiomId::AdditionOfIndifferent => premise == Verdict::Indifferent,
                _ => true,
            };
            if !applies {
                return None;
            }
            let conclusion = compare(swo, &u.concat(&v), &u.concat(&s), cfg);
            let holds = match axiom {
                AxiomId::AvoidWeakSadistic => conclusion.at_least_as_good(),
                AxiomId::PositiveResponsiveness => conclusion == Verdict::Better,
                // v ≽ s ⇔ (u,v) ≽ (u,s), applied in both directions, pins the verdict
                _ => conclusion == premise,
            };
            (!holds).then(|| {
                Witness::new(vec![
                    Comparison {
                        label: "v vs s".into(),
                        left: v.clone(),
                        right: s.clone(),
                        verdict: premise,
                    },
                    Comparison {
                        label: "(u,v) vs (u,s)".into(),
                        left: u.concat(&v),
                        right: u.concat(&s),
                        verdict: conclusion,
                    },
                ])
            })
        }
    }
}

/// Pairs `(v, s)` for the adding-profiles family. Half are independent draws;
/// the rest are related constructions that often land in a tie for some
/// ordering (permutations, sum-preserving transfers, and additions at zero,
/// at the mean, or at the maximum).
fn draw_pair(draw: &mut Sampler) -> (Profile, Profile) {
    let v = draw.profile();
    let s = match draw.index(10) {
        0 => {
            let perm = draw.permutation(v.len());
            v.permuted(&perm)
        }
        1 if v.len() >= 2 => {
            let mut levels = v.levels().to_vec();
            let d = draw.level();
            levels[0] += d;
            levels[1] -= d;
            Profile::new(levels).expect("finite")
        }
        2 => v.with_added(1, 0.0).expect("finite"),
        3 => v.with_added(1, v.mean()).expect("finite"),
        4 => v.with_added(1, v.max()).expect("finite"),
        _ => draw.profile(),
    };
    (v, s)
}

impl Sampler {
    pub(crate) fn unit(&mut self) -> f64 {
        use rand::Rng;
        self.rng().gen::<f64>()
    }

    pub(crate) fn rng_bool(&mut self) -> bool {
        use rand::Rng;
        self.rng().gen::<bool>()
    }

    pub(crate) fn index(&mut self, n: usize) -> usize {
        use rand::Rng;
        self.rng().gen_range(0..n)
    }
}
