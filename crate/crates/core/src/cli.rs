//! Command-line front end. [`run`] takes the argument vector and explicit
//! streams so it can be driven from tests; `main` only forwards to it.
//!
//! Exit codes: 0 success or verified, 1 violation found, 2 usage error.

use std::fs;
use std::io::{self, Read, Write};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::json;

use crate::bounds::{best_known, BoundReport, BoundSource, SpreadParams};
use crate::construct::{build_lower_bound_spread, PartialSpread};
use crate::partition::{
    check_certificate, descent_certificate, heden_check, hyperplane_profile, partition_from_spread,
    verify_partition, DescentCertificate, DEFAULT_POINT_BUDGET,
};
use crate::search::{max_partial_spread_threads, SearchBudget};

#[derive(Parser, Debug)]
#[command(name = "spreadlab", version, about = "Partial spreads: bounds, constructions, certificates, search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Best known lower and upper bounds with their sources.
    Bounds(ParamArgs),
    /// Bounds over a grid, e.g. `--q 2 --n 4..12 --t 2..4`.
    Table(TableArgs),
    /// Build and verify a spread attaining the lower bound.
    Construct(ParamArgs),
    /// Verify a spread file (`-` reads stdin).
    Verify(FileArgs),
    /// Partition type, Heden check and optional hyperplane profile of a spread.
    Analyze(AnalyzeArgs),
    /// Emit a descent certificate, or check one with `--check FILE`.
    Certify(CertifyArgs),
    /// Exhaustive maximum partial spread search.
    Search(SearchArgs),
}

#[derive(Args, Debug, Clone)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; `-` is stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug)]
struct ParamArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    t: u32,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long)]
    q: String,
    #[arg(long)]
    n: String,
    #[arg(long)]
    t: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct FileArgs {
    file: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    file: String,
    /// Also compute the hyperplane type profile.
    #[arg(long)]
    hyperplanes: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    t: Option<u32>,
    /// Excess over `ℓq^t`; defaults to the main theorem's value.
    #[arg(long)]
    x: Option<String>,
    /// Certificate file to check instead of emitting one.
    #[arg(long)]
    check: Option<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    t: u32,
    /// Node budget.
    #[arg(long)]
    budget: Option<u64>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Seed for the greedy fallback.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[command(flatten)]
    output: Output,
}

enum Failure {
    Usage(String),
}

type Outcome = Result<i32, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
}

impl Io<'_> {
    fn read(&mut self, path: &str) -> Result<String, Failure> {
        if path == "-" {
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| usage(format!("reading stdin: {e}")))?;
            Ok(s)
        } else {
            fs::read_to_string(path).map_err(|e| usage(format!("reading {path}: {e}")))
        }
    }

    fn write(&mut self, out: &Output, body: &str) -> Result<(), Failure> {
        let mut body = body.to_string();
        if !body.ends_with('\n') {
            body.push('\n');
        }
        if out.out == "-" {
            self.stdout
                .write_all(body.as_bytes())
                .map_err(|e| usage(format!("writing stdout: {e}")))
        } else {
            fs::write(&out.out, body).map_err(|e| usage(format!("writing {}: {e}", out.out)))
        }
    }
}

/// Runs one command. `argv[0]` is the program name.
pub fn run<I, S>(argv: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(text.as_bytes());
            } else {
                let _ = stderr.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let mut io = Io { stdin, stdout };
    let outcome = match cli.command {
        Command::Bounds(a) => bounds(&mut io, a),
        Command::Table(a) => table(&mut io, a),
        Command::Construct(a) => construct(&mut io, a),
        Command::Verify(a) => verify(&mut io, a),
        Command::Analyze(a) => analyze(&mut io, a),
        Command::Certify(a) => certify(&mut io, a),
        Command::Search(a) => search(&mut io, a),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}

/// [`run`] on the process arguments and standard streams.
pub fn main_with_std() -> i32 {
    run(
        std::env::args_os(),
        &mut io::stdin().lock(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    )
}

fn params(q: u64, n: u32, t: u32) -> Result<SpreadParams, Failure> {
    SpreadParams::new(q, n, t).map_err(|e| usage(e.to_string()))
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn only_json_or_text(out: &Output, cmd: &str) -> Result<(), Failure> {
    if out.format == Format::Csv {
        Err(usage(format!("{cmd} has no csv output")))
    } else {
        Ok(())
    }
}

/// Parses `7`, `4..12` (inclusive) or `4..=12`.
pub fn parse_range(s: &str) -> Result<Vec<u64>, String> {
    let bad = || format!("malformed range {s:?}; expected N or A..B");
    let num = |x: &str| x.trim().parse::<u64>().map_err(|_| bad());
    let (lo, hi) = match s.split_once("..") {
        None => {
            let v = num(s)?;
            (v, v)
        }
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

const CSV_HEADER: [&str; 8] = ["q", "n", "t", "lower", "df", "main", "exact", "source"];

fn csv_row(r: &BoundReport) -> [String; 8] {
    let opt = |v: Option<&BigInt>| v.map(ToString::to_string).unwrap_or_default();
    let p = r.params;
    [
        p.q().to_string(),
        p.n().to_string(),
        p.t().to_string(),
        r.lower.to_string(),
        opt(r.upper_from(BoundSource::DrakeFreeman)),
        opt(r.upper_from(BoundSource::MainTheorem)),
        opt(r.exact.as_ref().map(|e| &e.value)),
        r.exact
            .as_ref()
            .map(|e| e.source.tag().to_string())
            .unwrap_or_default(),
    ]
}

fn reports_csv(rows: &[BoundReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in rows {
        w.write_record(csv_row(r)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("ascii")
}

fn report_text(r: &BoundReport) -> String {
    let p = r.params;
    let mut s = format!("mu_{}({}, {})  r = {}\n", p.q(), p.n(), p.t(), p.r());
    s += &format!("  lower       {}\n", r.lower);
    for u in &r.uppers {
        s += &format!("  upper       {}  ({})\n", u.value, u.source);
    }
    match &r.exact {
        Some(e) => s += &format!("  exact       {}  ({})\n", e.value, e.source),
        None => s += &format!("  interval    [{}, {}]\n", r.lower, r.best_upper),
    }
    s
}

fn bounds(io: &mut Io, a: ParamArgs) -> Outcome {
    let r = best_known(&params(a.q, a.n, a.t)?);
    let body = match a.output.format {
        Format::Json => to_json(&r),
        Format::Csv => reports_csv(std::slice::from_ref(&r)),
        Format::Text => report_text(&r),
    };
    io.write(&a.output, &body)?;
    Ok(0)
}

fn table(io: &mut Io, a: TableArgs) -> Outcome {
    let qs = parse_range(&a.q).map_err(usage)?;
    let ns = parse_range(&a.n).map_err(usage)?;
    let ts = parse_range(&a.t).map_err(usage)?;
    let mut rows = Vec::new();
    for &q in &qs {
        for &n in &ns {
            for &t in &ts {
                let (Ok(n), Ok(t)) = (u32::try_from(n), u32::try_from(t)) else {
                    return Err(usage("dimension out of range"));
                };
                // Grid points with t ≥ n carry no spread question; skip them.
                if t == 0 || t >= n {
                    continue;
                }
                rows.push(best_known(&params(q, n, t)?));
            }
        }
    }
    let body = match a.output.format {
        Format::Json => to_json(&rows),
        Format::Csv => reports_csv(&rows),
        Format::Text => rows.iter().map(report_text).collect::<Vec<_>>().join(""),
    };
    io.write(&a.output, &body)?;
    Ok(0)
}

fn spread_text(s: &PartialSpread) -> String {
    let p = s.params();
    let mut out = format!(
        "{} members of dimension {} in V({}, {})\n",
        s.len(),
        p.t(),
        p.n(),
        p.q()
    );
    for (i, m) in s.members().iter().enumerate() {
        out += &format!("  {i}: {:?}\n", m.rows());
    }
    out
}

fn construct(io: &mut Io, a: ParamArgs) -> Outcome {
    only_json_or_text(&a.output, "construct")?;
    let p = params(a.q, a.n, a.t)?;
    let s = build_lower_bound_spread(&p).map_err(|e| usage(e.to_string()))?;
    let body = match a.output.format {
        Format::Text => spread_text(&s),
        _ => to_json(&s),
    };
    io.write(&a.output, &body)?;
    Ok(0)
}

fn load_spread(io: &mut Io, file: &str) -> Result<PartialSpread, Failure> {
    let text = io.read(file)?;
    serde_json::from_str(&text).map_err(|e| usage(format!("parsing spread file: {e}")))
}

fn verify(io: &mut Io, a: FileArgs) -> Outcome {
    only_json_or_text(&a.output, "verify")?;
    let mut s = load_spread(io, &a.file)?;
    let p = *s.params();
    let status = s.verify().clone();
    let ok = status.is_verified();
    let body = match a.output.format {
        Format::Text => match &status {
            crate::construct::Verification::Failed { violation } => {
                format!("FAILED: {violation:?}")
            }
            _ => format!("verified: {} members", s.len()),
        },
        _ => to_json(&json!({
            "q": p.q(), "n": p.n(), "t": p.t(),
            "size": s.len(),
            "verification": status,
        })),
    };
    io.write(&a.output, &body)?;
    Ok(if ok { 0 } else { 1 })
}

fn analyze(io: &mut Io, a: AnalyzeArgs) -> Outcome {
    only_json_or_text(&a.output, "analyze")?;
    let mut s = load_spread(io, &a.file)?;
    let p = *s.params();
    if !s.verify().is_verified() {
        let body = to_json(&json!({ "q": p.q(), "n": p.n(), "t": p.t(), "verification": s.status() }));
        io.write(&a.output, &body)?;
        return Ok(1);
    }
    let part = partition_from_spread(&s).map_err(|e| usage(e.to_string()))?;
    let check = verify_partition(&part, DEFAULT_POINT_BUDGET).map_err(|e| usage(e.to_string()))?;
    let heden = heden_check(&part);
    let profile = if a.hyperplanes {
        match hyperplane_profile(&part) {
            Ok(prof) => Some(Ok(prof.summary())),
            Err(e @ crate::partition::PartitionError::IdentityViolation { .. }) => Some(Err(e.to_string())),
            Err(e) => return Err(usage(e.to_string())),
        }
    } else {
        None
    };
    let ok = check.is_valid()
        && heden.as_ref().is_none_or(|h| h.satisfied)
        && !matches!(profile, Some(Err(_)));
    let body = match a.output.format {
        Format::Text => {
            let mut t = format!("type {}\ncover {}\n", part.type_string(), if check.is_valid() { "ok" } else { "FAILED" });
            if let Some(h) = &heden {
                t += &format!("heden case {:?}: needs ≥ {}, {}\n", h.case, h.required_min, if h.satisfied { "ok" } else { "VIOLATED" });
            }
            match &profile {
                Some(Ok(sum)) => {
                    t += &format!("hyperplanes {} dims {:?}\n", sum.hyperplanes, sum.dims);
                    for ty in &sum.types {
                        t += &format!("  b = {:?}  s = {}\n", ty.b, ty.s);
                    }
                }
                Some(Err(e)) => t += &format!("profile FAILED: {e}\n"),
                None => {}
            }
            t
        }
        _ => {
            let mut v = json!({
                "q": p.q(), "n": p.n(), "t": p.t(),
                "type": part.type_string(),
                "type_vector": part.type_entries(),
                "partition": check,
                "heden": heden,
            });
            match profile {
                Some(Ok(sum)) => v["hyperplane_profile"] = json!(sum),
                Some(Err(e)) => v["hyperplane_profile_error"] = json!(e),
                None => {}
            }
            to_json(&v)
        }
    };
    io.write(&a.output, &body)?;
    Ok(if ok { 0 } else { 1 })
}

fn certify(io: &mut Io, a: CertifyArgs) -> Outcome {
    only_json_or_text(&a.output, "certify")?;
    if let Some(path) = &a.check {
        let text = io.read(path)?;
        let cert: DescentCertificate =
            serde_json::from_str(&text).map_err(|e| usage(format!("parsing certificate: {e}")))?;
        let mut verdict = check_certificate(&cert);
        // Stated parameters on the command line must match the file.
        for (field, want, got) in [
            ("q", a.q, cert.q),
            ("n", a.n.map(u64::from), cert.n as u64),
            ("t", a.t.map(u64::from), cert.t as u64),
        ] {
            if verdict.valid && want.is_some_and(|w| w != got) {
                verdict.valid = false;
                verdict.mismatch = Some(field.to_string());
            }
        }
        let body = match a.output.format {
            Format::Text => match &verdict.mismatch {
                None => "certificate valid".to_string(),
                Some(f) => format!("certificate INVALID at {f}"),
            },
            _ => to_json(&verdict),
        };
        io.write(&a.output, &body)?;
        return Ok(if verdict.valid { 0 } else { 1 });
    }
    let (Some(q), Some(n), Some(t)) = (a.q, a.n, a.t) else {
        return Err(usage("certify needs --q, --n and --t unless --check is given"));
    };
    let p = params(q, n, t)?;
    let x = match &a.x {
        Some(s) => Some(s.parse::<BigInt>().map_err(|_| usage(format!("--x must be an integer, got {s:?}")))?),
        None => None,
    };
    let cert = descent_certificate(&p, x).map_err(|e| usage(e.to_string()))?;
    let body = match a.output.format {
        Format::Text => certificate_text(&cert),
        _ => to_json(&cert),
    };
    io.write(&a.output, &body)?;
    Ok(0)
}

fn certificate_text(c: &DescentCertificate) -> String {
    let mut s = format!(
        "mu_{}({}, {}) <= {}  (x = {}, h = {}, l = {})\n",
        c.q, c.n, c.t, c.claimed_bound, c.x, c.h, c.ell
    );
    s += &format!("assume n_t = {}, then n_1 = {}\n", c.n_t, c.n_1);
    for st in &c.steps {
        s += &format!(
            "  j={} V({}): m_1 = c*{} + {} with c <= {}\n",
            st.j, st.ambient_dim, st.modulus, st.delta, st.c_cap
        );
    }
    s += &format!("closure: {:?}\n", c.closure);
    s
}

fn search(io: &mut Io, a: SearchArgs) -> Outcome {
    only_json_or_text(&a.output, "search")?;
    let p = params(a.q, a.n, a.t)?;
    let mut budget = SearchBudget {
        greedy_seed: a.seed,
        ..SearchBudget::default()
    };
    if let Some(nodes) = a.budget {
        budget.max_nodes = nodes;
    }
    if let Some(secs) = a.time_limit {
        budget.max_time = Duration::try_from_secs_f64(secs)
            .map_err(|_| usage(format!("--time-limit must be a nonnegative number, got {secs}")))?;
    }
    let r = max_partial_spread_threads(&p, &budget, a.threads);
    let body = match a.output.format {
        Format::Text => format!(
            "{:?}: {} members after {} nodes in {:.3}s\n{}",
            r.status,
            r.best_size,
            r.nodes_explored,
            r.wall_time,
            spread_text(&r.witness)
        ),
        _ => to_json(&r),
    };
    io.write(&a.output, &body)?;
    Ok(0)
}
