//! `popswo`: compare profiles, probe axioms and replay impossibility chains.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use popswo::witnesses::{Conclusion, WitnessChain};
use popswo::{
    check_proposition1, compare, find_critical_level, run_standard_probe, run_theorem1_chain, run_theorem4_chain,
    test_lemma2_equivalence, test_lemma3_implication, value, ChainOptions, CriticalLevel, FDampenKind, GKind,
    Profile, ProbeStatus, SamplerConfig, StandardProbe, SwoConfig, SwoId, Verdict,
};
use serde_json::Value;

use report::{probe_seed, write_csv, ProbeRow, Report, SwoEntry};

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_NOT_FOUND: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "popswo", version, about = "Variable-population social welfare orderings and axiom probes")]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare two profiles under one ordering.
    Compare(CompareArgs),
    /// Probe axioms for one ordering.
    Axioms(AxiomsArgs),
    /// Probe every axiom for several orderings.
    Matrix(MatrixArgs),
    /// Search for a critical level of a profile.
    CriticalLevel(CriticalArgs),
    /// Replay an impossibility construction.
    Witness(WitnessArgs),
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// Per-person transform: identity or exp-bounded.
    #[arg(long, default_value = "identity")]
    g: GKind,
    /// Population dampening for theorem3: arctan, sqrt or identity.
    #[arg(long, default_value = "arctan")]
    f_dampen: FDampenKind,
    /// Critical level for clgu.
    #[arg(long = "c", default_value_t = 0.0, allow_hyphen_values = true)]
    c: f64,
    /// Indifference tolerance.
    #[arg(long, default_value_t = popswo::DEFAULT_TOLERANCE)]
    tau: f64,
}

impl ConfigArgs {
    fn config(&self) -> SwoConfig {
        SwoConfig {
            g: self.g,
            f_dampen: self.f_dampen,
            critical_level: self.c,
            tolerance: self.tau,
            ..SwoConfig::default()
        }
    }
}

#[derive(Args, Clone)]
struct SamplerArgs {
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Levels are drawn from [-range, range].
    #[arg(long, default_value_t = 100.0)]
    range: f64,
    #[arg(long, default_value_t = 8)]
    max_pop: usize,
}

impl SamplerArgs {
    fn sampler(&self) -> popswo::Result<SamplerConfig> {
        SamplerConfig::new(self.seed, self.range, self.max_pop, self.samples)
    }
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    swo: SwoId,
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(allow_hyphen_values = true)]
    left: Profile,
    #[arg(allow_hyphen_values = true)]
    right: Profile,
}

#[derive(Args)]
struct AxiomsArgs {
    #[arg(long)]
    swo: SwoId,
    /// Comma-separated axiom or probe names, or `all`.
    #[arg(long, default_value = "all")]
    axiom: String,
    #[command(flatten)]
    sampler: SamplerArgs,
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long)]
    json: Option<PathBuf>,
    /// Record wall time per row (makes reports non-reproducible).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct MatrixArgs {
    /// Comma-separated ordering ids, or `all`.
    #[arg(long)]
    swos: String,
    #[command(flatten)]
    sampler: SamplerArgs,
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct CriticalArgs {
    #[arg(long)]
    swo: SwoId,
    #[arg(long, allow_hyphen_values = true)]
    profile: Profile,
    #[arg(long, default_value_t = -1e3, allow_hyphen_values = true)]
    lo: f64,
    #[arg(long, default_value_t = 1e3, allow_hyphen_values = true)]
    hi: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    #[value(name = "1")]
    Theorem1,
    #[value(name = "4")]
    Theorem4,
    Prop1,
    Lemma2,
    Lemma3,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long)]
    theorem: Construction,
    #[arg(long)]
    swo: SwoId,
    #[arg(long, allow_hyphen_values = true)]
    u: Option<Profile>,
    #[arg(long, allow_hyphen_values = true)]
    v: Option<Profile>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    epsilon: f64,
    /// Population sizes for prop1.
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 1_000_000)]
    m: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Compare(a) => cmd_compare(a),
        Command::Axioms(a) => cmd_axioms(a),
        Command::Matrix(a) => cmd_matrix(a),
        Command::CriticalLevel(a) => cmd_critical_level(a),
        Command::Witness(a) => cmd_witness(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

type Outcome = Result<u8, String>;

fn cmd_compare(a: CompareArgs) -> Outcome {
    let cfg = a.config.config();
    cfg.validate().map_err(|e| e.to_string())?;
    let verdict = compare(a.swo, &a.left, &a.right, &cfg);
    match (value(a.swo, &a.left, &cfg), value(a.swo, &a.right, &cfg)) {
        (Some(l), Some(r)) => println!("{verdict}  value_left={l} value_right={r}"),
        _ => println!("{verdict}"),
    }
    Ok(EXIT_PASS)
}

fn parse_probes(spec: &str) -> Result<Vec<StandardProbe>, String> {
    if spec.trim().eq_ignore_ascii_case("all") {
        return Ok(StandardProbe::all());
    }
    let probes = spec
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<StandardProbe>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    if probes.is_empty() {
        return Err("no axioms given".into());
    }
    Ok(probes)
}

fn parse_swos(spec: &str) -> Result<Vec<SwoId>, String> {
    if spec.trim().eq_ignore_ascii_case("all") {
        return Ok(SwoId::ALL.to_vec());
    }
    let swos = spec
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<SwoId>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    if swos.is_empty() {
        return Err("empty --swos list".into());
    }
    Ok(swos)
}

fn run_cells(cells: &[(SwoId, StandardProbe)], cfg: &SwoConfig, sampler: &SamplerConfig, timings: bool) -> Vec<popswo::Result<ProbeRow>> {
    let run = |&(swo, probe): &(SwoId, StandardProbe)| {
        let name = probe.name();
        let seed = probe_seed(sampler.seed, swo, &name);
        let start = Instant::now();
        let result = run_standard_probe(probe, swo, cfg, &sampler.with_seed(seed))?;
        let wall_time_ms = timings.then(|| start.elapsed().as_secs_f64() * 1e3);
        Ok(ProbeRow {
            swo,
            probe: name,
            seed,
            result,
            wall_time_ms,
        })
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        cells.par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        cells.iter().map(run).collect()
    }
}

fn aggregate(rows: &[ProbeRow]) -> u8 {
    if rows.iter().any(|r| r.result.status == ProbeStatus::Fail) {
        EXIT_FAIL
    } else if rows.iter().any(|r| r.result.status == ProbeStatus::Inconclusive) {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_PASS
    }
}

fn probe_report(command: &str, seed: u64, swos: &[SwoId], cfg: SwoConfig, rows: &[ProbeRow]) -> Report {
    let entries = swos.iter().map(|&id| SwoEntry { id, config: cfg }).collect();
    let mut report = Report::new(command, seed, entries);
    report.rows = rows.iter().map(ProbeRow::to_value).collect();
    report
}

fn write_json(report: &Report, path: &Option<PathBuf>) -> Result<(), String> {
    if let Some(path) = path {
        report.write_json(path).map_err(|e| format!("writing {}: {e}", path.display()))?;
    }
    Ok(())
}

fn cmd_axioms(a: AxiomsArgs) -> Outcome {
    let cfg = a.config.config();
    cfg.validate().map_err(|e| e.to_string())?;
    let sampler = a.sampler.sampler().map_err(|e| e.to_string())?;
    let probes = parse_probes(&a.axiom)?;
    let cells: Vec<_> = probes.into_iter().map(|p| (a.swo, p)).collect();
    let rows = run_cells(&cells, &cfg, &sampler, a.timings)
        .into_iter()
        .collect::<popswo::Result<Vec<_>>>()
        .map_err(|e| e.to_string())?;

    println!("{:<32} {:<13} {:>8}  NOTE", "AXIOM", "STATUS", "SAMPLES");
    for r in &rows {
        println!("{:<32} {:<13} {:>8}  {}", r.probe, r.result.status.to_string(), r.result.samples_run, r.result.note);
        if let (ProbeStatus::Fail, Some(w)) = (r.result.status, &r.result.witness) {
            for c in &w.comparisons {
                println!("    {}: ({}) vs ({}) -> {}", c.label, c.left, c.right, c.verdict);
            }
        }
    }
    write_json(&probe_report("axioms", sampler.seed, &[a.swo], cfg, &rows), &a.json)?;
    Ok(aggregate(&rows))
}

fn cmd_matrix(a: MatrixArgs) -> Outcome {
    let swos = parse_swos(&a.swos)?;
    let cfg = a.config.config();
    cfg.validate().map_err(|e| e.to_string())?;
    let sampler = a.sampler.sampler().map_err(|e| e.to_string())?;
    let probes = StandardProbe::all();
    let cells: Vec<_> = swos.iter().flat_map(|&s| probes.iter().map(move |&p| (s, p))).collect();
    let rows = run_cells(&cells, &cfg, &sampler, a.timings)
        .into_iter()
        .collect::<popswo::Result<Vec<_>>>()
        .map_err(|e| e.to_string())?;

    print!("{:<32}", "AXIOM");
    for s in &swos {
        print!(" {:>17}", s.name());
    }
    println!();
    for (i, p) in probes.iter().enumerate() {
        print!("{:<32}", p.name());
        for j in 0..swos.len() {
            print!(" {:>17}", rows[j * probes.len() + i].result.status.to_string());
        }
        println!();
    }
    if let Some(path) = &a.csv {
        write_csv(path, &rows).map_err(|e| format!("writing {}: {e}", path.display()))?;
    }
    write_json(&probe_report("matrix", sampler.seed, &swos, cfg, &rows), &a.json)?;
    Ok(aggregate(&rows))
}

fn cmd_critical_level(a: CriticalArgs) -> Outcome {
    if a.lo.partial_cmp(&a.hi) != Some(std::cmp::Ordering::Less) {
        return Err(format!("--lo must be below --hi (got {} and {})", a.lo, a.hi));
    }
    let cfg = a.config.config();
    match find_critical_level(a.swo, &cfg, &a.profile, a.lo, a.hi, a.tol).map_err(|e| e.to_string())? {
        CriticalLevel::Found(c) => {
            println!("c={c}");
            Ok(EXIT_PASS)
        }
        CriticalLevel::NoSignChange => {
            println!("NONE no sign change in [{}, {}]", a.lo, a.hi);
            Ok(EXIT_NOT_FOUND)
        }
        CriticalLevel::DiscontinuousFlip { near } => {
            println!("NONE discontinuous flip near {near}");
            Ok(EXIT_NOT_FOUND)
        }
    }
}

fn print_chain(chain: &WitnessChain) {
    println!("{:>3}  {:<14} {:<12} {:<3} STEP", "#", "EXPECTED", "OBSERVED", "OK");
    for (i, s) in chain.steps.iter().enumerate() {
        let ok = if s.holds() { "yes" } else { "NO" };
        println!("{i:>3}  {:<14} {:<12} {ok:<3} {}", format!("{:?}", s.expected), s.observed.to_string(), s.description);
    }
    for (k, v) in &chain.derived_parameters {
        println!("{k}={v}");
    }
    for n in &chain.notes {
        println!("note: {n}");
    }
    match chain.conclusion {
        Conclusion::ChainCompleted => println!("ChainCompleted"),
        Conclusion::BrokeAtStep(k) => println!("BrokeAtStep({k})"),
    }
}

fn cmd_witness(a: WitnessArgs) -> Outcome {
    let cfg = a.config.config();
    cfg.validate().map_err(|e| e.to_string())?;
    let err = |e: popswo::Error| e.to_string();
    let opts = ChainOptions::default();
    let profile = |given: &Option<Profile>, default: &str| given.clone().unwrap_or_else(|| default.parse().expect("static profile"));
    let sampler = SamplerConfig::default().with_seed(a.seed).with_samples(a.samples);

    let (name, row, code): (&str, Value, u8) = match a.theorem {
        Construction::Theorem1 => {
            let chain = run_theorem1_chain(a.swo, &cfg, &profile(&a.u, "10*10"), a.epsilon, &opts).map_err(err)?;
            print_chain(&chain);
            let code = if chain.completed() { EXIT_PASS } else { EXIT_FAIL };
            ("theorem1", serde_json::to_value(&chain).expect("serializes"), code)
        }
        Construction::Theorem4 => {
            let chain = run_theorem4_chain(a.swo, &cfg, &profile(&a.u, "2 2"), &profile(&a.v, "5 5"), a.epsilon, &opts)
                .map_err(err)?;
            print_chain(&chain);
            let code = if chain.completed() { EXIT_PASS } else { EXIT_FAIL };
            ("theorem4", serde_json::to_value(&chain).expect("serializes"), code)
        }
        Construction::Prop1 => {
            let c = cfg.critical_level;
            let verdict = check_proposition1(a.swo, &cfg, c, a.epsilon, a.n, a.m).map_err(err)?;
            println!("{}∗{c} vs {}∗{}: {verdict}", a.n, a.m, c - a.epsilon);
            let code = if verdict == Verdict::Better { EXIT_PASS } else { EXIT_FAIL };
            let row = serde_json::json!({"c": c, "epsilon": a.epsilon, "n": a.n, "m": a.m, "verdict": verdict});
            ("prop1", row, code)
        }
        Construction::Lemma2 => {
            let r = test_lemma2_equivalence(a.swo, &cfg, &sampler).map_err(err)?;
            println!("{} {}", r.status, r.note);
            if let Some(w) = &r.witness {
                for c in &w.comparisons {
                    println!("    {}: ({}) vs ({}) -> {}", c.label, c.left, c.right, c.verdict);
                }
            }
            let code = if r.is_fail() { EXIT_FAIL } else { EXIT_PASS };
            ("lemma2", serde_json::to_value(&r).expect("serializes"), code)
        }
        Construction::Lemma3 => {
            let rep = test_lemma3_implication(a.swo, &cfg, &sampler).map_err(err)?;
            for p in rep.premises.iter().chain([&rep.conclusion]).chain(&rep.incompatible_set) {
                println!("{:<32} {}", p.name, p.result.status);
            }
            println!("{} {}", rep.result.status, rep.result.note);
            let code = if rep.result.is_fail() { EXIT_FAIL } else { EXIT_PASS };
            ("lemma3", serde_json::to_value(&rep).expect("serializes"), code)
        }
    };
    let mut report = Report::new(&format!("witness {name}"), a.seed, vec![SwoEntry { id: a.swo, config: cfg }]);
    report.rows.push(row);
    write_json(&report, &a.json)?;
    Ok(code)
}
