//! `subline`: classify finite metric spaces and query subsets of the line.
//!
//! Exit codes: 0 success, 1 input error, 2 invalid metric, 3 not a subline,
//! 4 ℓ1-rectangle, 5 internal inconsistency.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use subline::report::{embedding_points, Verdict};
use subline::{classify, parse_matrix, parse_setspec, selftest};
use subline_core::groupsets::{
    analyze_trace_set, classify_semiaffine, midconvex_failure, semiaffine_failure, CyclicGroupSubset,
    IntWindowSubset, SemiaffineDecomposition, TraceShape,
};
use subline_core::involution::{build_example1, example1_certificate, CertificateParams, Example1Certificate};
use subline_core::scalar::{parse_literal, parse_scalar, Radicand, ScalarContext};
use subline_core::{
    canonicalize, check_ray_conditions, decide_embeddable, DistanceMatrix, EmbedDecision, FiniteMetricSpace,
    QuadScalar, Rational, SymbolicSet,
};

#[derive(Parser)]
#[command(name = "subline", version, about = "Exact tests for metric subspaces of the real line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a distance matrix file
    Check {
        file: PathBuf,
        /// Radicand of the field; inferred from the file when omitted
        #[arg(long = "d")]
        d: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print a line embedding as `label<TAB>coordinate`, sorted by coordinate
    Embed {
        file: PathBuf,
        /// Translate the minimum to 0 and fix the reflection
        #[arg(long)]
        canonical: bool,
        #[arg(long = "d")]
        d: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Exact queries on a symbolic set such as `cone:1,1*sqrt(2)`
    Symbolic {
        #[command(subcommand)]
        query: Query,
    },
    /// Certificate for the dense ray X = Φ[G₊] with G = ⟨1, √d⟩
    Example1 {
        #[arg(long = "d", default_value_t = 2)]
        d: u64,
        /// Coefficient bound for windows
        #[arg(long = "N", default_value_t = 50)]
        n: u32,
        /// Coefficient bound for the ray conditions
        #[arg(long = "ray-N", default_value_t = 20)]
        ray_n: u32,
        /// Density buckets on [0, 5]
        #[arg(long, default_value_t = 25)]
        buckets: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Semiaffine and midconvex tests in Z_n, trace sets in integer windows
    Groupset(GroupsetArgs),
    /// Run the acceptance suite
    Selftest {
        /// Comma-separated criterion numbers; all when omitted
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Subcommand)]
enum Query {
    /// Is x in S?
    Member {
        set: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long = "d")]
        d: Option<u64>,
    },
    /// S ∩ {c − r, c + r}
    Sphere {
        set: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        #[arg(long = "d")]
        d: Option<u64>,
    },
    /// Members with coordinates bounded by N
    Window {
        set: String,
        #[arg(long = "N")]
        n: u32,
        #[arg(long = "d")]
        d: Option<u64>,
    },
    /// Sample both ray conditions at apex o
    Ray {
        set: String,
        #[arg(long, allow_hyphen_values = true)]
        o: String,
        #[arg(long = "N")]
        n: u32,
        #[arg(long = "d")]
        d: Option<u64>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Semiaffine,
    Midconvex,
}

#[derive(clap::Args)]
struct GroupsetArgs {
    /// Work in Z_n
    #[arg(long = "mod", conflicts_with = "window")]
    modulus: Option<u32>,
    /// Work in the integer window [-N, N]
    #[arg(long)]
    window: Option<i64>,
    /// Comma-separated members
    #[arg(long, allow_hyphen_values = true)]
    set: String,
    #[arg(long, value_enum)]
    check: Option<Check>,
    /// Find a decomposition (H+a)∪(H+b) or (H∖C)+g
    #[arg(long)]
    classify: bool,
    /// Analyze the set as a trace in an integer window
    #[arg(long)]
    trace: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

/// Input problems, reported on stderr with exit code 1.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn radicand(d: Option<u64>) -> Result<Option<Radicand>, Failure> {
    d.map(|d| match Radicand::new(d) {
        Ok(r) if !r.is_rational() => Ok(r),
        _ => Err(Failure(format!("--d {d}: expected a squarefree integer >= 2"))),
    })
    .transpose()
}

fn scalar(text: &str, field: Option<Radicand>) -> Result<QuadScalar, Failure> {
    let parsed = match field {
        Some(r) => parse_scalar(text, &ScalarContext { radicand: r }),
        None => parse_literal(text).map(|l| l.value),
    };
    parsed.map_err(|e| Failure(format!("{text:?}: {e}")))
}

fn read_matrix(path: &Path, d: Option<u64>) -> Result<DistanceMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    parse_matrix(&text, radicand(d)?).map_err(|e| Failure(format!("{}:{}:{}: {}", path.display(), e.line, e.column, e.message)))
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Check { file, d, format } => {
            let report = classify(&read_matrix(&file, d)?);
            match format {
                Format::Text => print!("{}", report.to_text()),
                Format::Json => println!("{}", report.to_json()),
            }
            Ok(report.verdict.exit_code() as u8)
        }
        Command::Embed { file, canonical, d, format } => embed(&read_matrix(&file, d)?, canonical, format),
        Command::Symbolic { query } => symbolic(query),
        Command::Example1 { d, n, ray_n, buckets, format } => example1(d, n, ray_n, buckets, format),
        Command::Groupset(args) => groupset(args),
        Command::Selftest { only } => {
            let ids: Vec<u8> = if only.is_empty() { selftest::CRITERIA.iter().map(|c| c.0).collect() } else { only };
            let results = selftest::run(&ids);
            for r in &results {
                println!("{r}");
            }
            if results.len() != ids.len() {
                return Err(Failure("unknown criterion number".into()));
            }
            Ok(if results.iter().all(|r| r.passed) { 0 } else { 5 })
        }
    }
}

fn embed(matrix: &DistanceMatrix, canonical: bool, format: Format) -> Result<u8, Failure> {
    let violations = matrix.verify_metric();
    if !violations.is_empty() {
        eprintln!("error: not a metric ({} violations); run `subline check` for details", violations.len());
        return Ok(Verdict::InvalidMetric.exit_code() as u8);
    }
    let space = FiniteMetricSpace::new(matrix.clone()).expect("verified");
    match decide_embeddable(&space) {
        Ok(EmbedDecision::Embeddable(e)) => {
            let e = if canonical { canonicalize(&e) } else { e };
            let points = embedding_points(&e);
            match format {
                Format::Text => {
                    for p in points {
                        println!("{}\t{}", p.label, p.coordinate);
                    }
                }
                Format::Json => print_json(&points),
            }
            Ok(0)
        }
        Ok(EmbedDecision::NotSubline([x, y, z])) => {
            eprintln!(
                "error: not a subline: no Triangle Equality on {} {} {}",
                space.label(x),
                space.label(y),
                space.label(z)
            );
            Ok(Verdict::NotSubline.exit_code() as u8)
        }
        Ok(EmbedDecision::Rectangle(w)) => {
            let corners: Vec<&str> = w.corners.iter().map(|&i| space.label(i)).collect();
            eprintln!("error: l1-rectangle {} with p={} q={}", corners.join(" "), w.p, w.q);
            Ok(Verdict::Rectangle.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            Ok(Verdict::Inconsistent.exit_code() as u8)
        }
    }
}

fn symbolic(query: Query) -> Result<u8, Failure> {
    let load = |set: &str, d: Option<u64>| -> Result<(SymbolicSet, Option<Radicand>), Failure> {
        let field = radicand(d)?;
        let s = parse_setspec(set, field).map_err(|e| Failure(format!("set {set:?}: {e}")))?;
        Ok((s, field))
    };
    match query {
        Query::Member { set, x, d } => {
            let (s, field) = load(&set, d)?;
            println!("{}", s.member(&scalar(&x, field)?)?);
        }
        Query::Sphere { set, c, r, d } => {
            let (s, field) = load(&set, d)?;
            for p in s.sphere(&scalar(&c, field)?, &scalar(&r, field)?)? {
                println!("{p}");
            }
        }
        Query::Window { set, n, d } => {
            let (s, _) = load(&set, d)?;
            for p in s.window(n)?.elements {
                println!("{p}");
            }
        }
        Query::Ray { set, o, n, d } => {
            let (s, field) = load(&set, d)?;
            let rep = check_ray_conditions(&s, &scalar(&o, field)?, n)?;
            println!("points: {}", rep.points_checked);
            println!("radii: {}", rep.radii_checked);
            println!("cond1 failures: {}", rep.cond1_failures.len());
            for (x, r) in rep.cond1_failures.iter().take(20) {
                println!("  x={x} r={r}");
            }
            println!("cond2 failures: {}", rep.cond2_failures.len());
            for r in rep.cond2_failures.iter().take(20) {
                println!("  r={r}");
            }
        }
    }
    Ok(0)
}

fn certificate_json(c: &Example1Certificate) -> serde_json::Value {
    let pair = |p: &Option<(QuadScalar, QuadScalar)>| p.as_ref().map(|(x, y)| [x.to_string(), y.to_string()]);
    json!({
        "params": { "N": c.params.scale, "ray_N": c.params.ray_scale, "buckets": c.params.buckets },
        "passed": c.passed(),
        "parts": c.parts().iter().map(|(k, v)| json!({ "name": k, "passed": v })).collect::<Vec<_>>(),
        "antisymmetry": { "checked": c.antisymmetry.checked, "failures": c.antisymmetry.failures.len() },
        "ray": {
            "points": c.ray.points_checked,
            "radii": c.ray.radii_checked,
            "cond1_failures": c.ray.cond1_failures.len(),
            "cond2_failures": c.ray.cond2_failures.len(),
        },
        "straddle": pair(&c.straddle),
        "cone_straddle": pair(&c.cone_straddle),
        "cone_apex_failures": c.cone_apex_failures.len(),
        "density": c.density.buckets.iter().map(|b| json!({
            "lo": b.lo.to_string(), "hi": b.hi.to_string(), "count": b.count,
        })).collect::<Vec<_>>(),
    })
}

fn example1(d: u64, n: u32, ray_n: u32, buckets: usize, format: Format) -> Result<u8, Failure> {
    let one = Rational::from_integer(1.into());
    let inst = build_example1(d, &one, &one)?;
    let cert = example1_certificate(&inst, CertificateParams { scale: n, ray_scale: ray_n, buckets })?;
    if format == Format::Json {
        print_json(&certificate_json(&cert));
        return Ok(0);
    }
    println!("G = <{}>, X = image of G+ under diag(-1, 1), apex 0", inst.group.basis().iter().map(|b| b.to_string()).collect::<Vec<_>>().join(", "));
    for (name, ok) in cert.parts() {
        println!("{:<16}{}", name, if ok { "pass" } else { "FAIL" });
    }
    println!(
        "antisymmetry: {} nonzero elements of G checked, {} failures",
        cert.antisymmetry.checked,
        cert.antisymmetry.failures.len()
    );
    println!(
        "ray conditions at N={}: {} points, {} radii, {} + {} failures",
        ray_n,
        cert.ray.points_checked,
        cert.ray.radii_checked,
        cert.ray.cond1_failures.len(),
        cert.ray.cond2_failures.len()
    );
    match &cert.straddle {
        Some((x, y)) => println!("straddle in X: {x} < 0 < {y}"),
        None => println!("straddle in X: none"),
    }
    println!(
        "straddle in G+: {}; apex of G+ unique at N={}: {}",
        if cert.cone_straddle.is_some() { "found" } else { "none" },
        n,
        if cert.cone_apex_failures.is_empty() { "yes" } else { "no" }
    );
    println!("density of X on [0, 5] at N={n}:");
    for b in &cert.density.buckets {
        println!("  [{}, {})\t{}", b.lo, b.hi, b.count);
    }
    Ok(0)
}

fn parse_ints(text: &str) -> Result<Vec<i64>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Failure(format!("--set: {s:?} is not an integer"))))
        .collect()
}

fn decomposition_text(d: &SemiaffineDecomposition) -> String {
    let h = d.subgroup();
    match d {
        SemiaffineDecomposition::CosetPair { a, b, .. } => {
            format!("(H+{a}) u (H+{b}) with H = {}Z_{} of order {}", h.step, h.modulus, h.size())
        }
        SemiaffineDecomposition::GroupMinusMidconvex { removed, shift, .. } => format!(
            "(H \\ C)+{shift} with H = {}Z_{} of order {}, C = {:?}",
            h.step,
            h.modulus,
            h.size(),
            removed.members()
        ),
    }
}

fn groupset(args: GroupsetArgs) -> Result<u8, Failure> {
    let members = parse_ints(&args.set)?;
    let mut out = serde_json::Map::new();
    let mut lines = Vec::new();
    if let Some(n) = args.modulus {
        if n == 0 {
            return Err(Failure("--mod must be positive".into()));
        }
        let s = CyclicGroupSubset::from_elements(n, members);
        out.insert("members".into(), json!(s.members()));
        if let Some(check) = args.check {
            let (name, witness) = match check {
                Check::Semiaffine => ("semiaffine", semiaffine_failure(&s)),
                Check::Midconvex => ("midconvex", midconvex_failure(&s)),
            };
            out.insert(name.into(), json!(witness.is_none()));
            out.insert("witness".into(), json!(witness.map(|(x, y, z)| [x, y, z])));
            lines.push(match witness {
                None => format!("{name}: yes"),
                Some((x, y, z)) => format!("{name}: no, witness x={x} y={y} z={z}"),
            });
        }
        if args.classify {
            let d = classify_semiaffine(&s);
            out.insert("decomposition".into(), json!(d.as_ref().map(decomposition_text)));
            lines.push(match &d {
                Some(d) => format!("decomposition: {}", decomposition_text(d)),
                None => "decomposition: none".into(),
            });
        }
        if args.trace {
            return Err(Failure("--trace works on --window sets".into()));
        }
    } else if let Some(bound) = args.window {
        let t = IntWindowSubset::new(bound, members)?;
        if !args.trace {
            return Err(Failure("integer windows support --trace only".into()));
        }
        match analyze_trace_set(&t) {
            None => {
                out.insert("trace".into(), serde_json::Value::Null);
                lines.push("trace: not an odd-step progression".into());
            }
            Some(TraceShape::Empty) => {
                out.insert("trace".into(), json!("empty"));
                lines.push("trace: empty".into());
            }
            Some(TraceShape::Progression(p)) => {
                out.insert(
                    "trace".into(),
                    json!({
                        "lo": p.lo, "hi": p.hi, "step": p.step, "offset": p.offset,
                        "open_below": p.open_below, "open_above": p.open_above,
                    }),
                );
                let flag = |open: bool| if open { " (window edge)" } else { "" };
                lines.push(format!(
                    "trace: [{}{}, {}{}] with step {} offset {}; midconvex at window scale",
                    p.lo,
                    flag(p.open_below),
                    p.hi,
                    flag(p.open_above),
                    p.step,
                    p.offset
                ));
            }
        }
    } else {
        return Err(Failure("pass --mod N or --window N".into()));
    }
    match args.format {
        Format::Text => lines.iter().for_each(|l| println!("{l}")),
        Format::Json => print_json(&out),
    }
    Ok(0)
}
