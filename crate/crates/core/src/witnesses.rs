//! Replays of the impossibility constructions against a concrete ordering.
//!
//! Each chain evaluates every step through [`compare`] and records what the
//! construction expects next to what the ordering actually says. A chain that
//! completes manufactures the undesirable conclusion; otherwise the first
//! mismatching step localizes where the ordering escapes the construction.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::axioms::{check_universal_axiom, AxiomId};
use crate::error::{invalid, Result};
use crate::ordering::{compare, SwoConfig, SwoId, Verdict};
use crate::probe::{ProbeResult, ProbeStatus, SamplerConfig};
use crate::profile::Profile;
use crate::search::{find_critical_level, probe_monotone_zero_addition, CriticalLevel};
use crate::standard::{run_standard_probe, StandardProbe};

/// Relation a construction step claims between its left and right profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expected {
    Better,
    Indifferent,
    AtLeastAsGood,
}

impl Expected {
    pub fn admits(self, observed: Verdict) -> bool {
        match self {
            Expected::Better => observed == Verdict::Better,
            Expected::Indifferent => observed == Verdict::Indifferent,
            Expected::AtLeastAsGood => observed.at_least_as_good(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainStep {
    pub description: String,
    pub left: Profile,
    pub right: Profile,
    pub expected: Expected,
    pub observed: Verdict,
}

impl ChainStep {
    pub fn holds(&self) -> bool {
        self.expected.admits(self.observed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conclusion {
    ChainCompleted,
    BrokeAtStep(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessChain {
    pub steps: Vec<ChainStep>,
    pub conclusion: Conclusion,
    pub derived_parameters: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl WitnessChain {
    pub fn completed(&self) -> bool {
        self.conclusion == Conclusion::ChainCompleted
    }

    pub fn replays(&self, swo: SwoId, cfg: &SwoConfig) -> bool {
        self.steps
            .iter()
            .all(|s| compare(swo, &s.left, &s.right, cfg) == s.observed)
    }
}

/// Tunables for the chain executors.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainOptions {
    /// Largest `m` for the explicit `(v,0) ∼ (v, m×0)` steps.
    pub lemma1_cap: usize,
    /// Largest `k` for the explicit `v ∼ (k×c, v)` steps.
    pub independence_cap: usize,
    pub critical_bracket: (f64, f64),
    pub critical_tol: f64,
    pub zero_addition_grid: Vec<f64>,
}

impl Default for ChainOptions {
    fn default() -> Self {
        Self {
            lemma1_cap: 20,
            independence_cap: 20,
            critical_bracket: (-1e3, 1e3),
            critical_tol: 1e-9,
            zero_addition_grid: default_zero_addition_grid(),
        }
    }
}

pub fn default_zero_addition_grid() -> Vec<f64> {
    vec![0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 1e3, 1e4, 1e6]
}

struct ChainBuilder<'a> {
    swo: SwoId,
    cfg: &'a SwoConfig,
    steps: Vec<ChainStep>,
    params: BTreeMap<String, f64>,
    notes: Vec<String>,
}

impl<'a> ChainBuilder<'a> {
    fn new(swo: SwoId, cfg: &'a SwoConfig) -> Self {
        Self {
            swo,
            cfg,
            steps: Vec::new(),
            params: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    fn step(&mut self, description: impl Into<String>, left: Profile, right: Profile, expected: Expected) {
        let observed = compare(self.swo, &left, &right, self.cfg);
        self.steps.push(ChainStep {
            description: description.into(),
            left,
            right,
            expected,
            observed,
        });
    }

    fn param(&mut self, name: &str, value: f64) {
        self.params.insert(name.to_string(), value);
    }

    fn finish(self) -> WitnessChain {
        let conclusion = match self.steps.iter().position(|s| !s.holds()) {
            Some(k) => Conclusion::BrokeAtStep(k),
            None => Conclusion::ChainCompleted,
        };
        WitnessChain {
            steps: self.steps,
            conclusion,
            derived_parameters: self.params,
            notes: self.notes,
        }
    }
}

/// Least `k >= 1` with `target > (k * fill + total) / (k + size)`.
///
/// Starts from the closed-form estimate and walks to the exact least integer
/// under the same floating-point evaluation the chain uses.
pub fn least_population_for_mean_bound(target: f64, fill: f64, total: f64, size: usize) -> Result<usize> {
    let gap = target - fill;
    if !(gap > 0.0) {
        return Err(invalid("mean bound needs target > fill level"));
    }
    let holds = |k: usize| target > (k as f64 * fill + total) / (k + size) as f64;
    // k * (target - fill) > total - target * size
    let estimate = ((total - target * size as f64) / gap).floor();
    let mut k = if estimate.is_finite() && estimate > 1.0 { estimate as usize } else { 1 };
    while k > 1 && holds(k - 1) {
        k -= 1;
    }
    while !holds(k) {
        k += 1;
    }
    Ok(k)
}

/// Theorem 1 construction: a compensating `v`, zero-addition invariance,
/// equalization, raising to `ε`, and the repugnant comparison
/// `(m′+n)∗ε ≻ u`.
pub fn run_theorem1_chain(
    swo: SwoId,
    cfg: &SwoConfig,
    u: &Profile,
    eps: f64,
    opts: &ChainOptions,
) -> Result<WitnessChain> {
    if !u.is_all_positive() {
        return Err(invalid("the Theorem 1 chain starts from an all-positive profile"));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(invalid("epsilon must be a positive finite real"));
    }
    let mut chain = ChainBuilder::new(swo, cfg);
    chain.notes.push(
        "minimal-equity and minimal-increasing steps are observed comparisons; a mismatch there may reflect the ordering rather than the construction".into(),
    );

    let search = probe_monotone_zero_addition(swo, cfg, u, &opts.zero_addition_grid)?;
    let v = match (&search.status, &search.witness) {
        (ProbeStatus::Pass, Some(w)) => {
            let with_zero = &w.comparisons[0].left;
            Profile::new(with_zero.levels()[..u.len()].to_vec())?
        }
        _ => {
            chain.notes.push(format!("no compensating v: {}", search.note));
            u.clone()
        }
    };
    let n = v.len();
    chain.step("v ≥ u, so v ≽ u", v.clone(), u.clone(), Expected::AtLeastAsGood);
    chain.step(
        "monotonicity for adding zero: (v,0) ≽ u",
        v.with_added(1, 0.0)?,
        u.clone(),
        Expected::AtLeastAsGood,
    );

    let total = v.sum();
    let m_prime = least_population_for_mean_bound(eps, 0.0, total, n)?;
    chain.param("m_prime", m_prime as f64);
    chain.param("population", (m_prime + n) as f64);
    chain.param("epsilon", eps);
    chain.param("sum_v", total);

    let mut lemma_ms: Vec<usize> = (2..=opts.lemma1_cap.max(1)).collect();
    if m_prime > opts.lemma1_cap {
        lemma_ms.push(m_prime);
    }
    for m in lemma_ms {
        chain.step(
            format!("zero-addition invariance: (v,0) ∼ (v,{m}×0)"),
            v.with_added(1, 0.0)?,
            v.with_added(m, 0.0)?,
            Expected::Indifferent,
        );
    }

    let size = m_prime + n;
    let mean = total / size as f64;
    let padded = v.with_added(m_prime, 0.0)?;
    chain.step(
        format!("minimal equity: {size}∗mean ≽ (v,{m_prime}×0)"),
        Profile::replicate(size, mean)?,
        padded,
        Expected::AtLeastAsGood,
    );
    chain.step(
        format!("minimal increasing: {size}∗ε ≻ {size}∗mean"),
        Profile::replicate(size, eps)?,
        Profile::replicate(size, mean)?,
        Expected::Better,
    );
    chain.step(
        format!("repugnant conclusion: {size}∗ε ≻ u"),
        Profile::replicate(size, eps)?,
        u.clone(),
        Expected::Better,
    );
    Ok(chain.finish())
}

/// Theorem 4 construction: a critical level for `u`, its extension to `v`
/// through independence, equalization and raising to `c + ε`.
pub fn run_theorem4_chain(
    swo: SwoId,
    cfg: &SwoConfig,
    u: &Profile,
    v: &Profile,
    eps: f64,
    opts: &ChainOptions,
) -> Result<WitnessChain> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(invalid("epsilon must be a positive finite real"));
    }
    let mut chain = ChainBuilder::new(swo, cfg);
    let (lo, hi) = opts.critical_bracket;
    let c = match find_critical_level(swo, cfg, u, lo, hi, opts.critical_tol)? {
        CriticalLevel::Found(c) => c,
        other => {
            chain.notes.push(format!("no critical level for u in [{lo}, {hi}]: {other:?}"));
            chain.step("critical level: (u,c) ∼ u", u.with_added(1, hi)?, u.clone(), Expected::Indifferent);
            return Ok(chain.finish());
        }
    };
    chain.param("c", c);
    chain.param("epsilon", eps);
    chain.step("critical level: (u,c) ∼ u", u.with_added(1, c)?, u.clone(), Expected::Indifferent);
    chain.step(
        "independence: (u,v) ∼ (u,c,v)",
        u.concat(v),
        u.with_added(1, c)?.concat(v),
        Expected::Indifferent,
    );

    let m = v.len();
    let total = v.sum();
    let k_prime = least_population_for_mean_bound(c + eps, c, total, m)?;
    chain.param("k_prime", k_prime as f64);
    chain.param("population", (k_prime + m) as f64);

    let mut ks: Vec<usize> = (1..=opts.independence_cap.max(1)).collect();
    if k_prime > opts.independence_cap {
        ks.push(k_prime);
    }
    let crowd_with_v = |k: usize| Profile::replicate(k, c).map(|p| p.concat(v));
    for k in ks {
        chain.step(format!("independence: ({k}×c, v) ∼ v"), crowd_with_v(k)?, v.clone(), Expected::Indifferent);
    }

    let size = k_prime + m;
    let mean = (k_prime as f64 * c + total) / size as f64;
    chain.step(
        format!("minimal equity: {size}∗mean ≽ ({k_prime}×c, v)"),
        Profile::replicate(size, mean)?,
        crowd_with_v(k_prime)?,
        Expected::AtLeastAsGood,
    );
    chain.step(
        format!("minimal increasing: {size}∗(c+ε) ≻ {size}∗mean"),
        Profile::replicate(size, c + eps)?,
        Profile::replicate(size, mean)?,
        Expected::Better,
    );
    chain.step(
        format!("weak repugnant conclusion: {size}∗(c+ε) ≻ v"),
        Profile::replicate(size, c + eps)?,
        v.clone(),
        Expected::Better,
    );
    Ok(chain.finish())
}

/// Observed verdict of `n∗c` against `m∗(c − ε)`; the reversed repugnant
/// conclusion predicts `Better`.
pub fn check_proposition1(
    swo: SwoId,
    cfg: &SwoConfig,
    c: f64,
    eps: f64,
    n: usize,
    m: usize,
) -> Result<Verdict> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(invalid("epsilon must be a positive finite real"));
    }
    Ok(compare(
        swo,
        &Profile::replicate(n, c)?,
        &Profile::replicate(m, c - eps)?,
        cfg,
    ))
}

/// `v ≽ s ⇔ (u,v) ≽ (u,s)` on sampled triples.
pub fn test_lemma2_equivalence(swo: SwoId, cfg: &SwoConfig, sampler: &SamplerConfig) -> Result<ProbeResult> {
    check_universal_axiom(AxiomId::UtilityIndependence, swo, cfg, sampler)
}

/// One sub-probe of a composite implication check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubProbe {
    pub name: String,
    pub result: ProbeResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImplicationReport {
    pub premises: Vec<SubProbe>,
    pub conclusion: SubProbe,
    /// Theorem 6 axiom set evaluated alongside; they cannot all pass together.
    pub incompatible_set: Vec<SubProbe>,
    pub result: ProbeResult,
}

/// Weak-sadistic avoidance, strong Pareto and continuity should imply strong
/// weak-sadistic avoidance. Reports a violation only when every premise
/// passes and the conclusion fails.
pub fn test_lemma3_implication(swo: SwoId, cfg: &SwoConfig, sampler: &SamplerConfig) -> Result<ImplicationReport> {
    let run = |probe: StandardProbe| -> Result<SubProbe> {
        Ok(SubProbe {
            name: probe.name(),
            result: run_standard_probe(probe, swo, cfg, sampler)?,
        })
    };
    let premises = vec![
        run(StandardProbe::Universal(AxiomId::AvoidWeakSadistic))?,
        run(StandardProbe::Universal(AxiomId::StrongPareto))?,
        run(StandardProbe::ExtendedContinuity)?,
    ];
    let conclusion = run(StandardProbe::Universal(AxiomId::StrongAvoidWeakSadistic))?;
    let incompatible_set = vec![
        run(StandardProbe::Universal(AxiomId::MinimalEquity))?,
        run(StandardProbe::WeakExistenceOfCriticalLevels)?,
        run(StandardProbe::AvoidWeakRepugnant)?,
    ];

    let premises_hold = premises.iter().all(|p| p.result.is_pass());
    let summary = |set: &[SubProbe]| {
        set.iter()
            .map(|p| format!("{}={}", p.name, p.result.status))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let mut note = format!(
        "premises [{}]; conclusion {}={}",
        summary(&premises),
        conclusion.name,
        conclusion.result.status
    );
    let all_six = premises_hold
        && incompatible_set.iter().all(|p| p.result.is_pass())
        && conclusion.result.is_pass();
    note.push_str(&format!("; with [{}]", summary(&incompatible_set)));
    if all_six {
        note.push_str("; every axiom of the incompatible set passed on this budget, which the impossibility rules out: widen the probes");
    }

    let result = if premises_hold && conclusion.result.is_fail() {
        let witness = conclusion.result.witness.clone().unwrap_or_default();
        ProbeResult::fail(
            conclusion.result.samples_run,
            witness,
            format!("implication violated: {note}"),
        )
    } else if premises_hold {
        ProbeResult::pass(conclusion.result.samples_run, format!("implication consistent: {note}"))
    } else {
        ProbeResult::pass(0, format!("implication vacuously consistent (a premise fails): {note}"))
    };
    Ok(ImplicationReport {
        premises,
        conclusion,
        incompatible_set,
        result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Profile {
        s.parse().unwrap()
    }

    /// Brute-force least k with target > (k*fill + total)/(k + size).
    fn least_k_oracle(target: f64, fill: f64, total: f64, size: usize) -> usize {
        (1..).find(|&k| target > (k as f64 * fill + total) / (k + size) as f64).unwrap()
    }

    #[test]
    fn least_population_matches_brute_force() {
        assert_eq!(least_k_oracle(1.0, 0.0, 100.0, 10), 91);
        assert_eq!(least_k_oracle(2.0, 1.0, 10.0, 2), 7);
        for &(t, f, s, n) in &[(1.0, 0.0, 100.0, 10), (2.0, 1.0, 10.0, 2), (0.3, 0.0, 7.5, 3), (1.0, 0.0, 0.5, 4), (5.5, 5.0, 1e3, 7)] {
            assert_eq!(least_population_for_mean_bound(t, f, s, n).unwrap(), least_k_oracle(t, f, s, n));
        }
        assert!(least_population_for_mean_bound(1.0, 1.0, 3.0, 1).is_err());
    }

    #[test]
    fn expectation_semantics() {
        assert!(Expected::AtLeastAsGood.admits(Verdict::Indifferent));
        assert!(!Expected::AtLeastAsGood.admits(Verdict::Worse));
        assert!(!Expected::Better.admits(Verdict::Indifferent));
    }

    #[test]
    fn theorem1_chain_for_total_reaches_101() {
        let cfg = SwoConfig::default();
        let chain = run_theorem1_chain(SwoId::Total, &cfg, &p("10*10"), 1.0, &ChainOptions::default()).unwrap();
        assert!(chain.completed(), "{chain:#?}");
        assert_eq!(chain.derived_parameters["m_prime"], 91.0);
        assert_eq!(chain.derived_parameters["population"], 101.0);
        assert!(chain.replays(SwoId::Total, &cfg));
    }

    #[test]
    fn theorem1_chain_breaks_for_theorem2_at_zero_addition() {
        let cfg = SwoConfig::default();
        let chain = run_theorem1_chain(SwoId::Theorem2, &cfg, &p("100 100"), 1.0, &ChainOptions::default()).unwrap();
        assert_eq!(chain.conclusion, Conclusion::BrokeAtStep(1));
        assert!(chain.notes.iter().any(|n| n.contains("sup f")));
    }

    #[test]
    fn theorem1_chain_breaks_for_average_at_lemma1() {
        let cfg = SwoConfig::default();
        let chain = run_theorem1_chain(SwoId::Average, &cfg, &p("10"), 1.0, &ChainOptions::default()).unwrap();
        let Conclusion::BrokeAtStep(k) = chain.conclusion else { panic!("{chain:#?}") };
        assert!(chain.steps[k].description.contains("zero-addition invariance"));
    }

    #[test]
    fn theorem4_chain_for_clgu() {
        let cfg = SwoConfig::default().with_critical_level(1.0);
        let chain = run_theorem4_chain(SwoId::Clgu, &cfg, &p("2 2"), &p("5 5"), 1.0, &ChainOptions::default()).unwrap();
        assert!(chain.completed(), "{chain:#?}");
        assert_eq!(chain.derived_parameters["c"], 1.0);
        assert_eq!(chain.derived_parameters["k_prime"], 7.0);
    }

    #[test]
    fn theorem4_chain_breaks_for_leximin_at_independence() {
        let cfg = SwoConfig::default();
        let chain =
            run_theorem4_chain(SwoId::LeximinExtended, &cfg, &p("1 5"), &p("3 3"), 1.0, &ChainOptions::default()).unwrap();
        assert_eq!(chain.derived_parameters["c"], 5.0);
        let Conclusion::BrokeAtStep(k) = chain.conclusion else { panic!("{chain:#?}") };
        assert!(chain.steps[k].description.contains("(1×c, v)"), "{:?}", chain.steps[k]);
    }

    #[test]
    fn theorem4_chain_for_total() {
        let cfg = SwoConfig::default();
        let chain = run_theorem4_chain(SwoId::Total, &cfg, &p("1"), &p("1"), 1.0, &ChainOptions::default()).unwrap();
        assert!(chain.completed(), "{chain:#?}");
        assert_eq!(chain.derived_parameters["c"], 0.0);
        assert_eq!(chain.derived_parameters["k_prime"], 1.0);
    }

    #[test]
    fn theorem4_chain_without_critical_level() {
        let cfg = SwoConfig::default();
        let chain = run_theorem4_chain(SwoId::Theorem7, &cfg, &p("1"), &p("1"), 1.0, &ChainOptions::default()).unwrap();
        assert_eq!(chain.conclusion, Conclusion::BrokeAtStep(0));
        assert!(chain.replays(SwoId::Theorem7, &cfg));
    }

    #[test]
    fn proposition1_examples() {
        let cfg = SwoConfig::default();
        let clgu10 = cfg.with_critical_level(10.0);
        assert_eq!(check_proposition1(SwoId::Clgu, &clgu10, 10.0, 0.5, 1, 1_000_000).unwrap(), Verdict::Better);
        assert_eq!(check_proposition1(SwoId::Clgu, &cfg, 0.0, 1.0, 2, 2).unwrap(), Verdict::Better);
        assert_eq!(check_proposition1(SwoId::Average, &cfg, 5.0, 1.0, 1, 3).unwrap(), Verdict::Better);
    }
}
