//! Probe results, witnesses and the seeded sampler shared by all probes.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::ordering::{compare, SwoConfig, SwoId, Verdict};
use crate::profile::Profile;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    /// Levels are drawn uniformly from `[-range, range]`.
    pub range: f64,
    /// Population sizes are drawn uniformly from `1..=max_pop`.
    pub max_pop: usize,
    pub samples: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            range: 100.0,
            max_pop: 8,
            samples: 100_000,
        }
    }
}

impl SamplerConfig {
    pub fn new(seed: u64, range: f64, max_pop: usize, samples: u64) -> Result<Self> {
        let cfg = Self {
            seed,
            range,
            max_pop,
            samples,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.range > 0.0 && self.range.is_finite()) {
            return Err(invalid("sampler range must be a positive finite real"));
        }
        if self.max_pop == 0 {
            return Err(invalid("max_pop must be at least 1"));
        }
        if self.samples == 0 {
            return Err(invalid("samples must be at least 1"));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, samples: u64) -> Self {
        self.samples = samples;
        self
    }

    /// Independent generator for sample `index`: one ChaCha stream per index,
    /// so the draw for a sample does not depend on evaluation order.
    pub fn sample_rng(&self, index: u64) -> Sampler {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        Sampler { rng, cfg: *self }
    }
}

/// Random draws for one sample.
pub struct Sampler {
    rng: ChaCha8Rng,
    cfg: SamplerConfig,
}

impl Sampler {
    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn population(&mut self) -> usize {
        self.rng.gen_range(1..=self.cfg.max_pop)
    }

    /// Population of at least `min` people (still capped below by `min`).
    pub fn population_at_least(&mut self, min: usize) -> usize {
        self.rng.gen_range(min..=self.cfg.max_pop.max(min))
    }

    pub fn level(&mut self) -> f64 {
        let b = self.cfg.range;
        self.rng.gen_range(-b..=b)
    }

    /// Uniform on `(0, range]`.
    pub fn positive_level(&mut self) -> f64 {
        self.cfg.range * (1.0 - self.rng.gen::<f64>())
    }

    /// Uniform on `[-range, 0)`.
    pub fn negative_level(&mut self) -> f64 {
        -self.positive_level()
    }

    /// Strict improvement step, uniform on `[range/100, range]` so that it
    /// stays resolvable under the indifference tolerance.
    pub fn increment(&mut self) -> f64 {
        let b = self.cfg.range;
        self.rng.gen_range(b / 100.0..=b)
    }

    fn build(&mut self, n: usize, mut draw: impl FnMut(&mut Self) -> f64) -> Profile {
        let levels = (0..n).map(|_| draw(self)).collect();
        Profile::new(levels).expect("sampled levels are finite and n >= 1")
    }

    pub fn profile(&mut self) -> Profile {
        let n = self.population();
        self.profile_of(n)
    }

    pub fn profile_of(&mut self, n: usize) -> Profile {
        self.build(n, Self::level)
    }

    /// Profile from `U₊₊`.
    pub fn positive_profile(&mut self) -> Profile {
        let n = self.population();
        self.build(n, Self::positive_level)
    }

    /// Profile from `U₋₋`.
    pub fn negative_profile(&mut self) -> Profile {
        let n = self.population();
        self.build(n, Self::negative_level)
    }

    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        use rand::seq::SliceRandom;
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut self.rng);
        perm
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProbeStatus {
    Pass,
    Fail,
    Inconclusive,
}

impl std::fmt::Display for ProbeStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ProbeStatus::Pass => "PASS",
            ProbeStatus::Fail => "FAIL",
            ProbeStatus::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// One recorded comparison: `left` compared with `right` gave `verdict`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub label: String,
    pub left: Profile,
    pub right: Profile,
    pub verdict: Verdict,
}

impl Comparison {
    /// Evaluates and records a comparison.
    pub fn observe(
        label: impl Into<String>,
        swo: SwoId,
        cfg: &SwoConfig,
        left: Profile,
        right: Profile,
    ) -> Self {
        let verdict = compare(swo, &left, &right, cfg);
        Self {
            label: label.into(),
            left,
            right,
            verdict,
        }
    }

    pub fn replays(&self, swo: SwoId, cfg: &SwoConfig) -> bool {
        compare(swo, &self.left, &self.right, cfg) == self.verdict
    }
}

/// Concrete evidence behind a probe outcome.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Witness {
    pub comparisons: Vec<Comparison>,
    pub parameters: BTreeMap<String, f64>,
}

impl Witness {
    pub fn new(comparisons: Vec<Comparison>) -> Self {
        Self {
            comparisons,
            parameters: BTreeMap::new(),
        }
    }

    pub fn with_parameter(mut self, name: &str, value: f64) -> Self {
        self.parameters.insert(name.to_string(), value);
        self
    }

    /// Every recorded comparison reproduces its verdict.
    pub fn replays(&self, swo: SwoId, cfg: &SwoConfig) -> bool {
        self.comparisons.iter().all(|c| c.replays(swo, cfg))
    }
}

pub const SOUNDNESS_NOTE: &str =
    "PASS is sampling/search evidence only; FAIL is a constructive refutation";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub status: ProbeStatus,
    pub samples_run: u64,
    pub witness: Option<Witness>,
    /// A closed-form bound settled the quantifier beyond the scanned range.
    pub certified: bool,
    pub note: String,
}

impl ProbeResult {
    pub fn pass(samples_run: u64, note: impl Into<String>) -> Self {
        Self {
            status: ProbeStatus::Pass,
            samples_run,
            witness: None,
            certified: false,
            note: note.into(),
        }
    }

    pub fn fail(samples_run: u64, witness: Witness, note: impl Into<String>) -> Self {
        Self {
            status: ProbeStatus::Fail,
            samples_run,
            witness: Some(witness),
            certified: false,
            note: note.into(),
        }
    }

    pub fn inconclusive(samples_run: u64, note: impl Into<String>) -> Self {
        Self {
            status: ProbeStatus::Inconclusive,
            samples_run,
            witness: None,
            certified: false,
            note: note.into(),
        }
    }

    pub fn with_witness(mut self, witness: Witness) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn certify(mut self) -> Self {
        self.certified = true;
        self
    }

    pub fn is_pass(&self) -> bool {
        self.status == ProbeStatus::Pass
    }

    pub fn is_fail(&self) -> bool {
        self.status == ProbeStatus::Fail
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampler_validation() {
        assert!(SamplerConfig::new(1, 0.0, 3, 10).is_err());
        assert!(SamplerConfig::new(1, 1.0, 0, 10).is_err());
        assert!(SamplerConfig::new(1, 1.0, 3, 0).is_err());
        assert!(SamplerConfig::new(1, f64::INFINITY, 3, 10).is_err());
        assert!(SamplerConfig::new(1, 1.0, 3, 10).is_ok());
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let cfg = SamplerConfig::default();
        let a = cfg.sample_rng(3).profile();
        let b = cfg.sample_rng(3).profile();
        let c = cfg.sample_rng(4).profile();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn draws_respect_ranges() {
        let cfg = SamplerConfig::new(11, 5.0, 4, 1).unwrap();
        for i in 0..500 {
            let mut s = cfg.sample_rng(i);
            let p = s.profile();
            assert!((1..=4).contains(&p.len()));
            assert!(p.levels().iter().all(|x| x.abs() <= 5.0));
            assert!(s.positive_profile().is_all_positive());
            assert!(s.negative_profile().is_all_negative());
            let d = s.increment();
            assert!((0.05..=5.0).contains(&d));
        }
    }
}
