//! `tatecoh`: complete cohomology of modules over elementary abelian p-groups.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use tatecoh::algebra::{quotient_by_relations, ModuleRep};
use tatecoh::analysis::{periodicity_check, Analyzer, Periodicity};
use tatecoh::cache::{resolve, ResolutionCache, CACHE_ENV};
use tatecoh::presentation::parse_presentation;
use tatecoh::stable::ext_hat;
use tatecoh::tate::Class;
use tatecoh::{corpus, reproduce, Error};

#[derive(Parser)]
#[command(name = "tatecoh", version, about = "Complete cohomology rings of modules over elementary abelian p-groups")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Resolution window `a..b` (must contain -1 and 0)
    #[arg(long, global = true, default_value = "-8..8", allow_hyphen_values = true, value_parser = parse_range)]
    window: (i64, i64),
    /// Directory for cached resolutions
    #[arg(long, global = true, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    /// Also write a JSON report to this path
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Seed for randomized searches and sampling
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Ranks of the minimal complete resolution, with exactness and minimality checks
    Resolve { module: String },
    /// dim Ê^n(M, M) by the cocycle route and the stable-map route
    ExtTable { module: String },
    /// Product of two classes, each written `DEG:eI` (basis vector I) or `DEG:c0,c1,...`
    Multiply {
        module: String,
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
    },
    /// Tate duality matrix between Ê^n and Ê^{-n-1}
    Pairing {
        module: String,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range, default_value = "-4..3")]
        degrees: (i64, i64),
    },
    /// Dimensions of I^n, J^n and the streak ideal per degree
    IdealScan {
        module: String,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
        degrees: Option<(i64, i64)>,
        /// Largest number of quotient lines enumerated when certifying J^n
        #[arg(long, default_value_t = 4096)]
        budget: usize,
    },
    /// Longest nonzero product of negative-degree classes
    Nilpotency {
        module: String,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range, default_value = "-6..-1")]
        scan: (i64, i64),
        #[arg(long, default_value_t = 16)]
        max_len: usize,
        #[arg(long, default_value_t = 6)]
        max_period: usize,
    },
    /// Re-derive a worked example (periodic, odd-p3, odd-p5 or growth) for the classes whose
    /// degrees lie in --window; the resolution is widened as needed
    Reproduce {
        example: String,
        /// Largest total degree of the monomials applied in the growth example
        #[arg(long, default_value_t = 4)]
        max_total_degree: usize,
    },
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected `a..b`, got `{s}`"))?;
    let a: i64 = a.trim().parse().map_err(|e| format!("bad lower end `{a}`: {e}"))?;
    let b: i64 = b.trim().parse().map_err(|e| format!("bad upper end `{b}`: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

/// A corpus id or a presentation file.
fn load_module(spec: &str) -> anyhow::Result<(String, ModuleRep)> {
    if corpus::ENTRIES.iter().any(|e| e.id == spec) {
        return Ok((spec.to_string(), corpus::load(spec)?));
    }
    let path = Path::new(spec);
    if !path.exists() {
        let ids: Vec<&str> = corpus::ENTRIES.iter().map(|e| e.id).collect();
        bail!("`{spec}` is neither a corpus id ({}) nor a file", ids.join(", "));
    }
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {spec}"))?;
    let pres = parse_presentation(&text).with_context(|| format!("parsing {spec}"))?;
    Ok((spec.to_string(), quotient_by_relations(&pres)?))
}

fn is_projective(m: &ModuleRep) -> bool {
    m.dim() == 0 || m.free_summand_rank() * m.algebra().dim() == m.dim()
}

fn parse_class(s: &str, an: &Analyzer) -> anyhow::Result<Class> {
    let (deg, body) = s.split_once(':').ok_or_else(|| anyhow!("expected `DEG:eI` or `DEG:c0,c1,...`, got `{s}`"))?;
    let degree: i64 = deg.trim().parse().with_context(|| format!("degree in `{s}`"))?;
    let dim = an.ring().dim(degree)?;
    let coords = if let Some(i) = body.strip_prefix('e') {
        let i: usize = i.parse().with_context(|| format!("basis index in `{s}`"))?;
        if i >= dim {
            bail!("Ê^{degree} has dimension {dim}; no basis vector {i}");
        }
        let mut v = vec![0u8; dim];
        v[i] = 1;
        v
    } else {
        let f = an.ring().algebra().field();
        let v: Vec<u8> = body
            .split(',')
            .map(|c| c.trim().parse::<i64>().map(|x| f.reduce(x)))
            .collect::<Result<_, _>>()
            .with_context(|| format!("coordinates in `{s}`"))?;
        if v.len() != dim {
            bail!("Ê^{degree} has dimension {dim}, got {} coordinates", v.len());
        }
        v
    };
    Ok(Class { degree, coords })
}

fn coords(v: &[u8]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

struct Outcome {
    text: String,
    report: Value,
    ok: bool,
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let c = &cli.common;
    let cache = ResolutionCache::from_env(c.cache_dir.as_deref());
    let window = c.window;
    let mut out = String::new();
    let header = |out: &mut String, cmd: &str, name: &str| {
        writeln!(out, "# {cmd} {name} window {}..{}", window.0, window.1).unwrap();
    };
    match &cli.cmd {
        Cmd::Resolve { module } => {
            let (name, m) = load_module(module)?;
            header(&mut out, "resolve", &name);
            if is_projective(&m) {
                writeln!(out, "projective module: the complete resolution is zero").unwrap();
                return Ok(Outcome { text: out, report: json!({"schema": 1, "module": name, "projective": true}), ok: true });
            }
            let res = resolve(&m, window.0, window.1, cache.as_ref())?;
            let exact = res.verify();
            let minimal = res.is_minimal();
            writeln!(out, "{:>5} {:>6}", "n", "rank").unwrap();
            for n in window.0..=window.1 {
                writeln!(out, "{n:>5} {:>6}", res.rank(n)).unwrap();
            }
            writeln!(out, "exact (d∘d = 0, no homology): {}", exact.is_ok()).unwrap();
            writeln!(out, "minimal: {minimal}").unwrap();
            let report = json!({"schema": 1, "module": name, "window": window, "ranks": res.ranks(), "exact": exact.is_ok(), "minimal": minimal});
            Ok(Outcome { text: out, report, ok: exact.is_ok() && minimal })
        }
        Cmd::ExtTable { module } => {
            let (name, m) = load_module(module)?;
            header(&mut out, "ext-table", &name);
            writeln!(out, "{:>5} {:>8} {:>8}", "n", "cocycle", "stable").unwrap();
            if is_projective(&m) {
                let rows: Vec<Value> = (window.0 + 1..window.1).map(|n| json!({"degree": n, "cocycle": 0, "stable": 0})).collect();
                for n in window.0 + 1..window.1 {
                    writeln!(out, "{n:>5} {:>8} {:>8}", 0, 0).unwrap();
                }
                return Ok(Outcome { text: out, report: json!({"schema": 1, "module": name, "window": window, "rows": rows}), ok: true });
            }
            let an = Analyzer::with_cache(&m, window.0, window.1, cache.as_ref())?;
            let (lo, hi) = an.degree_range();
            let mut rows = Vec::new();
            let mut ok = true;
            for n in lo..=hi {
                let a = an.ring().dim(n)?;
                let b = ext_hat(an.ring().complex(), n, &m)?.stable_dim();
                ok &= a == b;
                writeln!(out, "{n:>5} {a:>8} {b:>8}{}", if a == b { "" } else { "  MISMATCH" }).unwrap();
                rows.push(json!({"degree": n, "cocycle": a, "stable": b}));
            }
            Ok(Outcome { text: out, report: json!({"schema": 1, "module": name, "window": window, "rows": rows}), ok })
        }
        Cmd::Multiply { module, left, right } => {
            let (name, m) = load_module(module)?;
            header(&mut out, "multiply", &name);
            let an = Analyzer::with_cache(&m, window.0, window.1, cache.as_ref())?;
            let a = parse_class(left, &an)?;
            let b = parse_class(right, &an)?;
            let prod = an.ring().multiply(&a, &b)?;
            // the same product from non-canonical representatives
            let ca = an.ring().cocycle(&a)?;
            let cb = an.ring().cocycle(&b)?;
            let again = an.ring().multiply_cocycles(a.degree, &ca, b.degree, &cb)?;
            writeln!(out, "({}:{}) * ({}:{}) = {}:{}", a.degree, coords(&a.coords), b.degree, coords(&b.coords), prod.degree, coords(&prod.coords)).unwrap();
            let ok = again == prod;
            writeln!(out, "recomputed from cocycles: {}", if ok { "agrees" } else { "DISAGREES" }).unwrap();
            let report = json!({"schema": 1, "module": name, "window": window, "left": a, "right": b, "product": prod, "agrees": ok});
            Ok(Outcome { text: out, report, ok })
        }
        Cmd::Pairing { module, degrees } => {
            let (name, m) = load_module(module)?;
            header(&mut out, "pairing", &name);
            let an = Analyzer::with_cache(&m, window.0, window.1, cache.as_ref())?;
            writeln!(out, "{:>5} {:>8} {:>8} {:>6}", "n", "dim Ê^n", "dim Ê^-n-1", "rank").unwrap();
            let mut rows = Vec::new();
            let mut ok = true;
            for n in degrees.0..=degrees.1 {
                let d = an.duality_matrix(n)?;
                let full = d.rows() == d.cols() && d.rank() == d.rows();
                ok &= full;
                writeln!(out, "{n:>5} {:>8} {:>8} {:>6}{}", d.rows(), d.cols(), d.rank(), if full { "" } else { "  DEGENERATE" }).unwrap();
                rows.push(json!({"degree": n, "dim": d.rows(), "dual_dim": d.cols(), "rank": d.rank()}));
            }
            Ok(Outcome { text: out, report: json!({"schema": 1, "module": name, "window": window, "rows": rows}), ok })
        }
        Cmd::IdealScan { module, degrees, budget } => {
            let (name, m) = load_module(module)?;
            header(&mut out, "ideal-scan", &name);
            let an = Analyzer::with_cache(&m, window.0, window.1, cache.as_ref())?;
            let range = degrees.unwrap_or_else(|| an.degree_range());
            let scan = an.ideal_scan(range, *budget)?;
            writeln!(out, "{:>5} {:>6} {:>6} {:>6} {:>6}  {}", "n", "dim", "I", "𝔍", "J", "flags").unwrap();
            let mut ok = scan.closure_failures.is_empty();
            for r in &scan.rows {
                let mut flags = Vec::new();
                if !r.i_stabilized {
                    flags.push("I-unsettled".to_string());
                }
                if !r.j_exact {
                    flags.push("J-lower-bound".to_string());
                }
                match r.streak_stabilized_at {
                    Some(t) => flags.push(format!("𝔍-settled@{t}")),
                    None => flags.push("𝔍-unsettled".to_string()),
                }
                if r.nested == Some(false) {
                    flags.push("NOT-NESTED".to_string());
                    ok = false;
                }
                writeln!(out, "{:>5} {:>6} {:>6} {:>6} {:>6}  {}", r.degree, r.dim, r.dim_i, r.dim_streak, r.dim_j, flags.join(" ")).unwrap();
            }
            writeln!(out, "ideal closure: {} products checked, {} failures", scan.closure_checked, scan.closure_failures.len()).unwrap();
            for f in &scan.closure_failures {
                writeln!(out, "  {f}").unwrap();
            }
            Ok(Outcome { text: out, report: serde_json::to_value(&scan)?, ok })
        }
        Cmd::Nilpotency { module, scan, max_len, max_period } => {
            let (name, m) = load_module(module)?;
            header(&mut out, "nilpotency", &name);
            let per = periodicity_check(&m, *max_period, c.seed)?;
            writeln!(out, "periodicity: {}", serde_json::to_string(&per)?).unwrap();
            if per == Periodicity::Projective {
                writeln!(out, "projective module: nothing to scan").unwrap();
                return Ok(Outcome { text: out, report: json!({"schema": 1, "module": name, "periodicity": per}), ok: true });
            }
            let an = Analyzer::with_cache(&m, window.0, window.1, cache.as_ref())?;
            let r = an.nilpotency_scan(scan.0, scan.1, *max_len, &per)?;
            if !r.applicable {
                writeln!(out, "inapplicable: {}", r.reason.as_deref().unwrap_or("")).unwrap();
            } else {
                writeln!(out, "scan window {}..{}, products by length {:?}", scan.0, scan.1, r.products_by_length).unwrap();
                writeln!(out, "longest nonzero product: {}", r.max_nonzero_length).unwrap();
                let w: Vec<String> = r.witness.iter().map(|(d, i)| format!("{d}:e{i}")).collect();
                writeln!(out, "witness: {} = {}", w.join(" * "), coords(&r.witness_coords)).unwrap();
                let n = r.radical_nilpotence.map_or("?".into(), |x| x.to_string());
                let b = r.bound_i.map_or("none".into(), |x| x.to_string());
                let bound = r.theoretical_bound.map_or("?".into(), |x| x.to_string());
                writeln!(out, "N = {n}, B_I = {b}, bound 2(N+1)(max(B_I,0)+1) = {bound}").unwrap();
            }
            let ok = r.within_bound != Some(false);
            Ok(Outcome { text: out, report: serde_json::to_value(&r)?, ok })
        }
        Cmd::Reproduce { example, max_total_degree } => {
            header(&mut out, "reproduce", example);
            let rep = reproduce::by_id(example, window, *max_total_degree, cache.as_ref())?;
            for ch in &rep.checks {
                let mark = if ch.passed { "ok  " } else { "FAIL" };
                if ch.detail.is_empty() {
                    writeln!(out, "{mark} {}", ch.name).unwrap();
                } else {
                    writeln!(out, "{mark} {} ({})", ch.name, ch.detail).unwrap();
                }
            }
            if let Some(g) = &rep.growth {
                writeln!(out, "orbit: h = {:?}, verdict {}, annihilator generators {:?}", g.hilbert, g.verdict, g.ann_generators).unwrap();
            }
            let failed = rep.checks.iter().filter(|c| !c.passed).count();
            writeln!(out, "{} checks, {} failed", rep.checks.len(), failed).unwrap();
            Ok(Outcome { text: out, report: serde_json::to_value(&rep)?, ok: rep.passed() })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            if let Some(path) = &cli.common.report {
                let body = serde_json::to_string_pretty(&outcome.report).expect("report serializes") + "\n";
                if let Err(e) = std::fs::write(path, body) {
                    eprintln!("error: writing report {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            match e.downcast_ref::<Error>() {
                Some(inner @ Error::WindowTooSmall { .. }) => eprintln!("error: {inner}"),
                _ => eprintln!("error: {e:#}"),
            }
            ExitCode::from(2)
        }
    }
}
