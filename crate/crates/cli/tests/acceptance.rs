//! Acceptance criteria, one printed line each.

use std::cmp::Ordering;
use std::f64::consts::FRAC_PI_2;
use std::process::Command;
use std::time::Instant;

use popswo::axioms::AxiomId;
use popswo::ordering::{compare_theorem7, value_theorem7_reduced};
use popswo::witnesses::Conclusion;
use popswo::{
    check_avoid_repugnant, check_avoid_weak_repugnant, check_proposition1, check_universal_axiom, compare,
    find_critical_level, probe_extended_continuity, probe_monotone_zero_addition, run_standard_probe,
    run_theorem1_chain, run_theorem4_chain, test_lemma2_equivalence, ChainOptions, CriticalLevel, Profile, Ray,
    SamplerConfig, StandardProbe, SwoConfig, SwoId, Verdict,
};

const BIN: &str = env!("CARGO_BIN_EXE_popswo");

fn p(s: &str) -> Profile {
    s.parse().unwrap()
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(BIN).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn field(line: &str, key: &str) -> f64 {
    let prefix = format!("{key}=");
    line.split_whitespace()
        .find_map(|t| t.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no {key} in {line}"))
        .parse()
        .unwrap()
}

fn suite_sampler() -> SamplerConfig {
    SamplerConfig::new(7, 100.0, 8, 100_000).unwrap()
}

/// Leximin over profiles padded with their own maximum, written out directly.
fn padded_leximin_oracle(u: &[f64], v: &[f64]) -> Ordering {
    let pad = |x: &[f64], n: usize| {
        let max = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut y = x.to_vec();
        y.resize(n, max);
        y.sort_by(|a, b| a.partial_cmp(b).unwrap());
        y
    };
    let n = u.len().max(v.len());
    let (a, b) = (pad(u, n), pad(v, n));
    a.partial_cmp(&b).unwrap()
}

enum Outcome {
    Pass(String),
    Fail(String),
    /// Not attainable as stated; the analysis is recorded with the project notes.
    Unattainable(String),
}

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn criterion1() -> Check {
    let (code, out) = run_cli(&["compare", "--swo", "total", "10*10", "101*1"]);
    ensure(code == 0 && out.starts_with("WORSE"), format!("total: exit {code}, {out}"))?;
    let (code, out) = run_cli(&["compare", "--swo", "average", "10*10", "101*1"]);
    ensure(code == 0 && out.starts_with("BETTER"), format!("average: exit {code}, {out}"))?;

    let (a, b, cfg) = (p("10*10"), p("101*1"), SwoConfig::default());
    let reps = 1000;
    let start = Instant::now();
    for _ in 0..reps {
        ensure(compare(SwoId::Total, &a, &b, &cfg) == Verdict::Worse, "library total")?;
        ensure(compare(SwoId::Average, &a, &b, &cfg) == Verdict::Better, "library average")?;
    }
    let per_compare_ms = start.elapsed().as_secs_f64() * 1e3 / (2 * reps) as f64;
    ensure(per_compare_ms < 1.0, format!("{per_compare_ms} ms per comparison"))?;
    Ok(format!("total WORSE, average BETTER; {per_compare_ms:.6} ms per comparison (< 1 ms)"))
}

fn criterion2() -> Check {
    let (code, out) = run_cli(&["compare", "--swo", "average", "10*10 100*1", "10*10 -1"]);
    ensure(code == 0 && out.starts_with("WORSE"), format!("exit {code}, {out}"))?;
    let (left, right) = (field(&out, "value_left"), field(&out, "value_right"));
    let (want_left, want_right) = (200.0 / 110.0, 99.0 / 11.0);
    ensure(((left - want_left) / want_left).abs() <= 1e-12, format!("left mean {left}"))?;
    ensure(((right - want_right) / want_right).abs() <= 1e-12, format!("right mean {right}"))?;
    ensure(right == 9.0, format!("right mean {right} is not exactly 9"))?;
    Ok(format!("WORSE with means {left:.11e} vs {right:.11e}"))
}

fn criterion3() -> Check {
    let start = Instant::now();
    let cfg = SwoConfig::default();
    let sampler = suite_sampler();
    for ax in [AxiomId::Anonymity, AxiomId::StrongPareto, AxiomId::PigouDalton, AxiomId::AvoidSadistic] {
        let r = check_universal_axiom(ax, SwoId::Theorem2, &cfg, &sampler).map_err(|e| e.to_string())?;
        ensure(r.is_pass() && r.witness.is_none() && r.samples_run == 100_000, format!("{ax}: {}", r.note))?;
    }
    let u = p("100 100");
    let r = check_avoid_repugnant(SwoId::Theorem2, &cfg, &u, 1.0, 1000).map_err(|e| e.to_string())?;
    ensure(r.is_pass() && r.certified, format!("repugnant: {}", r.note))?;
    let bound = FRAC_PI_2 + 1.0;
    let value_u = 200f64.atan() + 100.0;
    ensure(bound < value_u, "bound oracle")?;
    let z = probe_monotone_zero_addition(SwoId::Theorem2, &cfg, &u, &popswo::witnesses::default_zero_addition_grid())
        .map_err(|e| e.to_string())?;
    ensure(z.is_fail() && z.note.contains("sup f"), format!("zero addition: {}", z.note))?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, format!("{secs} s"))?;
    Ok(format!(
        "4 axioms Pass over 1e5 samples; certified repugnant avoidance (pi/2 + 1 = {bound:.6} < {value_u:.6}); zero addition Fails; {secs:.2} s"
    ))
}

fn criterion4() -> Check {
    let cfg = SwoConfig::default();
    let sampler = suite_sampler();
    for ax in [AxiomId::Anonymity, AxiomId::StrongPareto, AxiomId::PigouDalton, AxiomId::AvoidSadistic] {
        let r = check_universal_axiom(ax, SwoId::Theorem3, &cfg, &sampler).map_err(|e| e.to_string())?;
        ensure(r.is_pass(), format!("{ax}: {}", r.note))?;
    }
    let r = run_standard_probe(StandardProbe::AvoidRepugnant, SwoId::Theorem3, &cfg, &sampler).map_err(|e| e.to_string())?;
    ensure(r.is_pass(), format!("repugnant: {}", r.note))?;

    let ray = Ray::new(p("2 0"), p("0 1"), -1.0, 1.0).unwrap();
    let c = probe_extended_continuity(SwoId::Theorem3, &cfg, &p("1 1"), &ray, 1e-9).map_err(|e| e.to_string())?;
    ensure(c.is_fail(), format!("continuity: {}", c.note))?;
    let t_flip = c.witness.as_ref().and_then(|w| w.parameters.get("t_flip").copied()).ok_or("no t_flip")?;
    ensure(t_flip.abs() <= 1e-9, format!("flip at {t_flip}"))?;
    let at_flip = compare(SwoId::Theorem3, &ray.at(t_flip), &p("1 1"), &cfg);
    ensure(at_flip == Verdict::Better, format!("verdict at flip {at_flip}"))?;
    let below = compare(SwoId::Theorem3, &ray.at(-1e-6), &p("1 1"), &cfg);
    ensure(below == Verdict::Worse, format!("verdict below flip {below}"))?;
    Ok(format!("4 axioms and repugnant avoidance Pass; continuity Fails with flip at t = {t_flip:e}, BETTER there"))
}

fn criterion5() -> Outcome {
    let cfg = SwoConfig::default();
    let sampler = suite_sampler();
    let mut passed = Vec::new();
    for ax in [AxiomId::Anonymity, AxiomId::PigouDalton, AxiomId::StrongPareto] {
        match check_universal_axiom(ax, SwoId::LeximinExtended, &cfg, &sampler) {
            Ok(r) if r.is_pass() => passed.push(ax.to_string()),
            Ok(r) => return Outcome::Fail(format!("{ax}: {}", r.note)),
            Err(e) => return Outcome::Fail(e.to_string()),
        }
    }

    let levels = SamplerConfig::new(7, 100.0, 8, 100).unwrap();
    for i in 0..100 {
        let u = levels.sample_rng(i).profile();
        let max = u.levels().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        match find_critical_level(SwoId::LeximinExtended, &cfg, &u, -1e3, 1e3, 1e-9) {
            Ok(CriticalLevel::Found(c)) if (c - max).abs() <= 1e-9 => {}
            other => return Outcome::Fail(format!("critical level for ({u}): {other:?}, max {max}")),
        }
    }

    // the padding rule admits a counterexample; check that it is genuine
    let r = match check_universal_axiom(AxiomId::AvoidWeakSadistic, SwoId::LeximinExtended, &cfg, &sampler) {
        Ok(r) => r,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    let head = format!("{} Pass; critical level = max(u) on 100 profiles", passed.join(", "));
    if r.is_pass() {
        return Outcome::Pass(format!("{head}; AvoidWeakSadistic Pass"));
    }
    let w = r.witness.expect("fail carries a witness");
    let (vs, uv_us) = (&w.comparisons[0], &w.comparisons[1]);
    let v_beats_s = padded_leximin_oracle(vs.left.levels(), vs.right.levels()) == Ordering::Greater;
    let us_beats_uv = padded_leximin_oracle(uv_us.left.levels(), uv_us.right.levels()) == Ordering::Less;
    let small = padded_leximin_oracle(&[0.0, 1.0], &[0.0]) == Ordering::Greater
        && padded_leximin_oracle(&[5.0, 0.0, 1.0], &[5.0, 0.0]) == Ordering::Less;
    if v_beats_s && us_beats_uv && small && w.replays(SwoId::LeximinExtended, &cfg) {
        Outcome::Unattainable(format!(
            "{head}; AvoidWeakSadistic refuted at sample {} and confirmed by an independent padding oracle \
             (smallest case: u=(5), v=(0,1), s=(0))",
            w.parameters["sample_index"]
        ))
    } else {
        Outcome::Fail(format!("AvoidWeakSadistic failed without an oracle-confirmed witness: {}", r.note))
    }
}

fn criterion6() -> Check {
    let cfg = SwoConfig::default();
    let draws = SamplerConfig::new(7, 10.0, 6, 10_000).unwrap();
    let mut disagreements = 0;
    for i in 0..10_000 {
        let mut s = draws.sample_rng(i);
        let (u, v) = (s.profile(), s.profile());
        let direct = compare_theorem7(&u, &v, &cfg);
        let reduced = Verdict::from_values(value_theorem7_reduced(&u, &cfg), value_theorem7_reduced(&v, &cfg), cfg.tolerance);
        if direct.is_strict() && reduced.is_strict() && direct != reduced {
            disagreements += 1;
        }
    }
    ensure(disagreements == 0, format!("{disagreements} disagreements"))?;
    let v = compare(SwoId::Theorem7, &p("-5"), &p("10 10"), &cfg);
    ensure(v == Verdict::Better, format!("(-5) vs (10,10): {v}"))?;
    let lemma2 = test_lemma2_equivalence(SwoId::Theorem7, &cfg, &SamplerConfig::default().with_samples(10_000))
        .map_err(|e| e.to_string())?;
    ensure(lemma2.is_pass(), format!("lemma 2: {}", lemma2.note))?;
    let weak = check_avoid_weak_repugnant(SwoId::Theorem7, &cfg, &[0.5, 1.0, 2.0, 5.0], 1000, &[])
        .map_err(|e| e.to_string())?;
    ensure(weak.is_pass(), format!("weak repugnant: {}", weak.note))?;
    Ok("0 disagreements in 1e4 pairs; (-5) BETTER than (10,10); lemma 2 Pass on 1e4 triples; weak repugnant avoided via (c+1)".into())
}

fn criterion7() -> Check {
    let opts = ChainOptions::default();
    let total = run_theorem1_chain(SwoId::Total, &SwoConfig::default(), &p("10*10"), 1.0, &opts).map_err(|e| e.to_string())?;
    ensure(total.completed(), format!("theorem 1 chain: {:?}", total.conclusion))?;
    let population = total.derived_parameters["population"];
    ensure(population == 101.0, format!("population {population}"))?;

    let clgu = SwoConfig::default().with_critical_level(1.0);
    let chain = run_theorem4_chain(SwoId::Clgu, &clgu, &p("2 2"), &p("5 5"), 1.0, &opts).map_err(|e| e.to_string())?;
    ensure(chain.conclusion == Conclusion::ChainCompleted, format!("theorem 4 chain: {:?}", chain.conclusion))?;
    let k_prime = chain.derived_parameters["k_prime"];
    // least k with 2 > (k + 10) / (k + 2)
    let oracle = (1..).find(|&k: &u32| 2.0 > f64::from(k + 10) / f64::from(k + 2)).unwrap();
    ensure(k_prime == f64::from(oracle) && oracle == 7, format!("k' = {k_prime}, oracle {oracle}"))?;

    let c10 = SwoConfig::default().with_critical_level(10.0);
    let prop = check_proposition1(SwoId::Clgu, &c10, 10.0, 0.5, 1, 1_000_000).map_err(|e| e.to_string())?;
    ensure(prop == Verdict::Better, format!("proposition 1: {prop}"))?;
    Ok(format!(
        "theorem 1 chain completes with m'+n = {population}; theorem 4 chain completes with k' = {k_prime} \
         (least k by brute force; the stated 9 is not least); proposition 1 BETTER"
    ))
}

fn criterion8() -> Check {
    let cfg = SwoConfig::default();
    let sampler = SamplerConfig::new(7, 100.0, 8, 10_000).unwrap();
    let mut violations = Vec::new();
    for swo in SwoId::ALL {
        let mut bad = 0;
        for i in 0..10_000 {
            let mut s = sampler.sample_rng(i);
            let (u, v, w) = (s.profile(), s.profile(), s.profile());
            let uv = compare(swo, &u, &v, &cfg);
            if compare(swo, &v, &u, &cfg) != uv.inverse() {
                bad += 1;
            }
            if uv.at_least_as_good()
                && compare(swo, &v, &w, &cfg).at_least_as_good()
                && compare(swo, &w, &u, &cfg) == Verdict::Better
            {
                bad += 1;
            }
            let perm = s.permutation(u.len());
            if compare(swo, &u.permuted(&perm), &u, &cfg) != Verdict::Indifferent {
                bad += 1;
            }
        }
        if bad > 0 {
            violations.push(format!("{swo}: {bad}"));
        }
    }
    ensure(violations.is_empty(), violations.join(", "))?;
    Ok(format!("{} orderings x 1e4 triples: 0 antisymmetry, transitivity or permutation violations", SwoId::ALL.len()))
}

fn criterion9() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut docs = Vec::new();
    for name in ["a.json", "b.json"] {
        let path = dir.path().join(name);
        let (code, _) = run_cli(&["matrix", "--swos", "all", "--samples", "10000", "--seed", "42", "--json", path.to_str().unwrap()]);
        ensure(code == 1, format!("matrix exit {code}"))?;
        docs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    ensure(docs[0] == docs[1], "reports differ")?;
    ensure(docs[0].ends_with(b"\n"), "report not newline-terminated")?;
    Ok(format!("two matrix runs produced identical {}-byte reports", docs[0].len()))
}

fn main() {
    let checks: Vec<(u32, Box<dyn Fn() -> Outcome>)> = vec![
        (1, Box::new(|| criterion1().map_or_else(Outcome::Fail, Outcome::Pass))),
        (2, Box::new(|| criterion2().map_or_else(Outcome::Fail, Outcome::Pass))),
        (3, Box::new(|| criterion3().map_or_else(Outcome::Fail, Outcome::Pass))),
        (4, Box::new(|| criterion4().map_or_else(Outcome::Fail, Outcome::Pass))),
        (5, Box::new(criterion5)),
        (6, Box::new(|| criterion6().map_or_else(Outcome::Fail, Outcome::Pass))),
        (7, Box::new(|| criterion7().map_or_else(Outcome::Fail, Outcome::Pass))),
        (8, Box::new(|| criterion8().map_or_else(Outcome::Fail, Outcome::Pass))),
        (9, Box::new(|| criterion9().map_or_else(Outcome::Fail, Outcome::Pass))),
    ];
    let mut failed = Vec::new();
    for (n, check) in checks {
        match check() {
            Outcome::Pass(detail) => println!("criterion {n}: PASS  {detail}"),
            Outcome::Unattainable(detail) => println!("criterion {n}: FAIL (unattainable as stated)  {detail}"),
            Outcome::Fail(detail) => {
                println!("criterion {n}: FAIL  {detail}");
                failed.push(n);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("criteria failed: {failed:?}");
        std::process::exit(1);
    }
}
