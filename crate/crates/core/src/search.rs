//! Existential axioms: explicit scans, bisection and closed-form bounds.
//!
//! These probes cannot sample a universal statement; they search for an
//! object whose existence the axiom asserts (a critical level, a compensating
//! profile, a defeating profile) or for the comparison that refutes it.
//! Where an ordering has a known supremum over the scanned family, the probe
//! uses it to settle the quantifier beyond the scanned range.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::ordering::{
    compare, theorem3_keys, value, value_modified_theorem2, value_theorem2, SwoConfig, SwoId,
    Verdict,
};
use crate::par::{self, Execution};
use crate::probe::{Comparison, ProbeResult, Witness, SOUNDNESS_NOTE};
use crate::profile::Profile;

/// Closed-form `sup_m value(m*eps)` comparison for `u ≽ m*eps` over all `m`.
/// Returns a human-readable certificate when the bound shows `u` is never
/// beaten by any replicated population at `eps`.
fn replicated_bound(swo: SwoId, cfg: &SwoConfig, u: &Profile, eps: f64) -> Option<String> {
    let g_eps = cfg.g.apply(eps);
    let (sup, own) = match swo {
        SwoId::Theorem2 => (cfg.f_bounded.supremum() + eps, value_theorem2(u, cfg)),
        SwoId::ModifiedTheorem2 => (std::f64::consts::FRAC_PI_2 + eps, value_modified_theorem2(u, cfg)),
        SwoId::Average => (eps, u.mean()),
        SwoId::Clgu => {
            let step = g_eps - cfg.g.apply(cfg.critical_level);
            if step > 0.0 {
                return None;
            }
            (step, value(SwoId::Clgu, u, cfg)?)
        }
        SwoId::Theorem3 => {
            // all-positive u and eps > 0 share a zero first key
            let (first, second) = theorem3_keys(u, cfg);
            if first != 0.0 {
                return None;
            }
            (cfg.f_dampen.supremum() * g_eps, second)
        }
        SwoId::LeximinExtended => {
            return (u.min() >= eps).then(|| {
                format!("min(u) = {} >= {eps}: every m*{eps} is leximin-dominated", u.min())
            })
        }
        SwoId::Theorem7 | SwoId::Total => return None,
    };
    (sup.is_finite() && sup <= own)
        .then(|| format!("sup over m of value(m*{eps}) = {sup} <= value(u) = {own}"))
}

/// `u ≽ m*eps` for every `m` in `1..=m_max`, certified beyond `m_max` when a
/// closed-form supremum is available.
pub fn check_avoid_repugnant(
    swo: SwoId,
    cfg: &SwoConfig,
    candidate: &Profile,
    eps: f64,
    m_max: usize,
) -> Result<ProbeResult> {
    cfg.validate()?;
    if !candidate.is_all_positive() {
        return Err(invalid("repugnance candidate must be all-positive"));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(invalid("epsilon must be a positive finite real"));
    }
    if m_max == 0 {
        return Err(invalid("m_max must be at least 1"));
    }
    let beaten_at = first_beating_m(swo, cfg, candidate, eps, m_max);
    if let Some(m) = beaten_at {
        let c = Comparison::observe(
            "u vs m*eps",
            swo,
            cfg,
            candidate.clone(),
            Profile::replicate(m, eps)?,
        );
        let witness = Witness::new(vec![c])
            .with_parameter("m", m as f64)
            .with_parameter("epsilon", eps);
        return Ok(ProbeResult::fail(
            m as u64,
            witness,
            format!("{m}*{eps} is strictly better than u: repugnant conclusion"),
        ));
    }
    let mut note = format!("u ≽ m*{eps} for m = 1..={m_max}");
    let certificate = replicated_bound(swo, cfg, candidate, eps).or_else(|| {
        (swo == SwoId::Theorem7 && m_max >= candidate.len())
            .then(|| format!("every m > {} is a larger population and ranks below u", candidate.len()))
    });
    let result = match certificate {
        Some(cert) => {
            note.push_str(&format!("; certified for all m: {cert}"));
            ProbeResult::pass(m_max as u64, note).certify()
        }
        None => {
            note.push_str(&format!("; {SOUNDNESS_NOTE}"));
            ProbeResult::pass(m_max as u64, note)
        }
    };
    Ok(result)
}

fn first_beating_m(swo: SwoId, cfg: &SwoConfig, u: &Profile, eps: f64, m_max: usize) -> Option<usize> {
    par::find_first(Execution::default(), m_max as u64, |i| {
        let m = i as usize + 1;
        let crowd = Profile::replicate(m, eps).expect("m >= 1");
        (compare(swo, u, &crowd, cfg) == Verdict::Worse).then_some(m)
    })
}

/// No fixed level `c > 0` such that a large enough population at `c` beats
/// every all-positive profile. Each `c` in the grid must be defeated by some
/// candidate: one that no `m*c` with `m <= m_max` (or, with a closed-form
/// bound, no `m` at all) strictly beats. The singleton `(c + 1)` is always
/// tried after the supplied candidates.
pub fn check_avoid_weak_repugnant(
    swo: SwoId,
    cfg: &SwoConfig,
    c_grid: &[f64],
    m_max: usize,
    candidates: &[Profile],
) -> Result<ProbeResult> {
    cfg.validate()?;
    if c_grid.is_empty() {
        return Err(invalid("critical-level grid must be nonempty"));
    }
    if let Some(c) = c_grid.iter().find(|&&c| !(c > 0.0 && c.is_finite())) {
        return Err(invalid(format!("grid level {c} is not a positive real")));
    }
    if candidates.iter().any(|u| !u.is_all_positive()) {
        return Err(invalid("weak-repugnance candidates must be all-positive"));
    }
    if m_max == 0 {
        return Err(invalid("m_max must be at least 1"));
    }

    let mut defeats = Vec::with_capacity(c_grid.len());
    for &c in c_grid {
        let mut pool = candidates.to_vec();
        pool.push(Profile::singleton(c + 1.0)?);
        let mut beaten = Vec::new();
        let mut defeater = None;
        for u in pool {
            if let Some(cert) = replicated_bound(swo, cfg, &u, c) {
                defeater = Some(format!("c={c} defeated by ({u}) [{cert}]"));
                break;
            }
            match first_beating_m(swo, cfg, &u, c, m_max) {
                None => {
                    defeater = Some(format!("c={c} defeated by ({u}) up to m={m_max}"));
                    break;
                }
                Some(m) => beaten.push(Comparison::observe(
                    format!("{m}*c beats candidate"),
                    swo,
                    cfg,
                    Profile::replicate(m, c)?,
                    u,
                )),
            }
        }
        match defeater {
            Some(d) => defeats.push(d),
            None => {
                let witness = Witness::new(beaten).with_parameter("c", c);
                return Ok(ProbeResult::fail(
                    c_grid.len() as u64,
                    witness,
                    format!("c={c} beats every candidate: weak repugnant conclusion on the candidate set"),
                ));
            }
        }
    }
    Ok(ProbeResult::pass(c_grid.len() as u64, defeats.join("; ")))
}

/// Outcome of a critical-level search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CriticalLevel {
    Found(f64),
    /// The verdict does not change across the bracket.
    NoSignChange,
    /// The verdict jumps from strictly worse to strictly better near `near`
    /// without passing through indifference.
    DiscontinuousFlip { near: f64 },
}

impl CriticalLevel {
    pub fn level(self) -> Option<f64> {
        match self {
            CriticalLevel::Found(c) => Some(c),
            _ => None,
        }
    }
}

/// Searches `[lo, hi]` for a level `c` with `(u, c) ∼ u`.
///
/// Both edges of the indifference region are located by bisection (down to
/// adjacent floats when the region is a single point, as for order-based
/// orderings); the midpoint of the region is preferred, then its edges.
pub fn find_critical_level(
    swo: SwoId,
    cfg: &SwoConfig,
    u: &Profile,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<CriticalLevel> {
    cfg.validate()?;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(invalid(format!("need finite lo < hi, got [{lo}, {hi}]")));
    }
    if !(tol > 0.0) {
        return Err(invalid("tolerance must be positive"));
    }
    let verdict = |c: f64| {
        let extended = u.with_added(1, c).expect("finite level");
        compare(swo, &extended, u, cfg)
    };
    let (at_lo, at_hi) = (verdict(lo), verdict(hi));
    if at_lo == Verdict::Indifferent {
        return Ok(CriticalLevel::Found(lo));
    }
    if at_hi == Verdict::Indifferent {
        return Ok(CriticalLevel::Found(hi));
    }
    if at_lo == at_hi {
        return Ok(CriticalLevel::NoSignChange);
    }

    // first point that is no longer `at_lo`, and last point that is not yet `at_hi`
    let leave_lo = |precision: f64| bisect(lo, hi, precision, |c| verdict(c) != at_lo).1;
    let reach_hi = |precision: f64| bisect(lo, hi, precision, |c| verdict(c) == at_hi).0;

    let coarse = [leave_lo(tol / 2.0), reach_hi(tol / 2.0)];
    let mid = 0.5 * (coarse[0] + coarse[1]);
    if verdict(mid) == Verdict::Indifferent {
        return Ok(CriticalLevel::Found(shortest_within(mid, tol, |c| verdict(c) == Verdict::Indifferent)));
    }
    let fine = [leave_lo(0.0), reach_hi(0.0)];
    for c in [0.5 * (fine[0] + fine[1]), fine[0], fine[1]] {
        if verdict(c) == Verdict::Indifferent {
            return Ok(CriticalLevel::Found(shortest_within(c, tol, |c| verdict(c) == Verdict::Indifferent)));
        }
    }
    Ok(CriticalLevel::DiscontinuousFlip { near: fine[0] })
}

/// Fewest-decimal rounding of `x` within `tol` that still satisfies `keep`.
fn shortest_within(x: f64, tol: f64, keep: impl Fn(f64) -> bool) -> f64 {
    let max_digits = (-tol.log10()).ceil().clamp(0.0, 17.0) as i32;
    for digits in 0..=max_digits {
        let scale = 10f64.powi(digits);
        let r = (x * scale).round() / scale;
        if (r - x).abs() <= tol && keep(r) {
            return r + 0.0;
        }
    }
    x
}

/// Bisects for the boundary of a predicate that is false at `lo` and true at
/// `hi`; returns the final `(false, true)` bracket. A `precision` of zero runs
/// until the bracket ends are adjacent floats.
pub(crate) fn bisect(mut lo: f64, mut hi: f64, precision: f64, pred: impl Fn(f64) -> bool) -> (f64, f64) {
    for _ in 0..4096 {
        if hi - lo <= precision {
            break;
        }
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// A segment `base + t * dir` for `t` in `[t_start, t_end]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ray {
    pub base: Profile,
    pub dir: Profile,
    pub t_start: f64,
    pub t_end: f64,
}

impl Ray {
    pub fn new(base: Profile, dir: Profile, t_start: f64, t_end: f64) -> Result<Self> {
        if base.len() != dir.len() {
            return Err(invalid("ray base and direction must have equal length"));
        }
        if !(t_start < t_end) {
            return Err(invalid("ray parameter range must satisfy t_start < t_end"));
        }
        Ok(Self {
            base,
            dir,
            t_start,
            t_end,
        })
    }

    /// The unit segment `t ∈ [0, 1]`.
    pub fn unit(base: Profile, dir: Profile) -> Result<Self> {
        Self::new(base, dir, 0.0, 1.0)
    }

    pub fn at(&self, t: f64) -> Profile {
        self.base.along(&self.dir, t).expect("lengths checked at construction")
    }
}

/// Closedness of contour sets, probed where the verdict against `u` flips
/// along a ray. The flip is bracketed to adjacent floats; if the verdict
/// jumps between strictly worse and strictly better with no indifferent
/// point in between, one of the contour sets is not closed.
pub fn probe_extended_continuity(
    swo: SwoId,
    cfg: &SwoConfig,
    u: &Profile,
    ray: &Ray,
    tol: f64,
) -> Result<ProbeResult> {
    cfg.validate()?;
    if !(tol > 0.0) {
        return Err(invalid("tolerance must be positive"));
    }
    let verdict = |t: f64| compare(swo, &ray.at(t), u, cfg);
    let start = verdict(ray.t_start);
    if start == verdict(ray.t_end) {
        return Ok(ProbeResult::inconclusive(
            2,
            format!("no verdict change along the ray (all {start})"),
        ));
    }
    let (coarse_lo, coarse_hi) = bisect(ray.t_start, ray.t_end, tol, |t| verdict(t) != start);
    let (lo, hi) = bisect(coarse_lo, coarse_hi, 0.0, |t| verdict(t) != start);
    let (before, flip) = (verdict(lo), verdict(hi));
    let observed = |label: &str, t: f64, v: Verdict| Comparison {
        label: label.to_string(),
        left: ray.at(t),
        right: u.clone(),
        verdict: v,
    };
    let witness = Witness::new(vec![
        observed("approach side", lo, before),
        observed("flip point", hi, flip),
    ])
    .with_parameter("t_flip", hi)
    .with_parameter("t_approach", lo);

    if before.is_strict() && flip == before.inverse() {
        let unclosed = if before == Verdict::Worse { "lower" } else { "upper" };
        Ok(ProbeResult::fail(
            1,
            witness,
            format!(
                "verdict jumps {before} -> {flip} at t ≈ {hi} with no indifferent point: {unclosed} contour set not closed"
            ),
        ))
    } else {
        Ok(ProbeResult::pass(1, format!("verdict passes through {flip} at t ≈ {hi}")).with_witness(witness))
    }
}

/// Closed-form refutations: no `v ≥ u` can make `(v, 0) ≽ u`.
fn zero_addition_impossible(swo: SwoId, cfg: &SwoConfig, u: &Profile) -> Option<String> {
    match swo {
        SwoId::Theorem2 => {
            let sup = cfg.f_bounded.supremum();
            let own = value_theorem2(u, cfg);
            (sup < own - cfg.tolerance).then(|| {
                format!("value((v,0)) < sup f = {sup} < value(u) = {own} for every v: the zero level kills the geometric term")
            })
        }
        SwoId::ModifiedTheorem2 => {
            let sup = std::f64::consts::FRAC_PI_2;
            let own = value_modified_theorem2(u, cfg);
            (sup < own - cfg.tolerance)
                .then(|| format!("value((v,0)) < pi/2 = {sup} < value(u) = {own} for every v"))
        }
        SwoId::LeximinExtended => Some(format!(
            "(v,0) has worst-off level 0 < min(u) = {}: leximin ranks it below u for every v",
            u.min()
        )),
        SwoId::Theorem7 => Some("(v,0) is a larger population and ranks below u for every v".into()),
        _ => None,
    }
}

/// Searches for `v ≥ u` with `(v, 0) ≽ u`: first `v = u`, then `u + t` for
/// `t` in the grid, then `k·u` for grid values `k > 1`.
pub fn probe_monotone_zero_addition(
    swo: SwoId,
    cfg: &SwoConfig,
    u: &Profile,
    t_grid: &[f64],
) -> Result<ProbeResult> {
    cfg.validate()?;
    if !u.is_all_positive() {
        return Err(invalid("monotone zero-addition probe needs an all-positive profile"));
    }
    if let Some(proof) = zero_addition_impossible(swo, cfg, u) {
        let c = Comparison::observe("(u,0) vs u", swo, cfg, u.with_added(1, 0.0)?, u.clone());
        return Ok(ProbeResult::fail(1, Witness::new(vec![c]), proof).certify());
    }
    let mut candidates = vec![u.clone()];
    candidates.extend(t_grid.iter().filter(|t| **t > 0.0).map(|&t| u.map(|x| x + t)).collect::<Result<Vec<_>>>()?);
    candidates.extend(t_grid.iter().filter(|k| **k > 1.0).map(|&k| u.map(|x| x * k)).collect::<Result<Vec<_>>>()?);
    let tried = candidates.len() as u64;
    for (i, v) in candidates.into_iter().enumerate() {
        let c = Comparison::observe("(v,0) vs u", swo, cfg, v.with_added(1, 0.0)?, u.clone());
        if c.verdict.at_least_as_good() {
            let w = Witness::new(vec![c]).with_parameter("candidate_index", i as f64);
            return Ok(ProbeResult::pass(i as u64 + 1, format!("compensating v = ({v})")).with_witness(w));
        }
    }
    Ok(ProbeResult::inconclusive(tried, "no compensating v on the grid"))
}
