//! `moonshine`: exact computations and verification suites for replicable
//! functions.
//!
//! Every command writes one JSON document to stdout and a short summary to
//! stderr. Exit codes: 0 computed or verified, 1 falsified, 2 usage or input
//! error.

use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

use clap::{error::ErrorKind, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use moonshine_core::arith::format_rat;
use moonshine_core::faber::{faber_sequence, normalized_prefix};
use moonshine_core::frames::classify_degree24;
use moonshine_core::grunsky::grunsky_by_recursion;
use moonshine_core::mahler::{mahler_compute, SecondReplicate};
use moonshine_core::norton::{basis_values, reconstruct_from_basis, NORTON_BASIS};
use moonshine_core::numerology::numerology;
use moonshine_core::qseries::{exp, QSeries};
use moonshine_core::verify::{self, Fault, Suite, VerifyOptions};
use moonshine_core::{Error, FunctionSpec};

const SCHEMA: u64 = 1;

#[derive(Parser, Debug)]
#[command(name = "moonshine", version, about = "Exact q-series tools for replicable functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficients a_1..a_N of a function, by one or more methods.
    Coeffs {
        /// j, fiction:c=<-1|0|1>, eta:<frame>[+<int>|-<int>|+shift], explicit:a1,a2,...
        spec: String,
        #[arg(long, default_value_t = 10)]
        terms: usize,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "oracle")]
        method: Vec<Method>,
    },
    /// Faber polynomials F_1..F_n.
    Faber {
        spec: String,
        #[arg(long, default_value_t = 6)]
        degree: usize,
    },
    /// Grunsky coefficients h_{m,n} with m + n <= grade.
    Grunsky {
        spec: String,
        #[arg(long, default_value_t = 12)]
        grade: u64,
    },
    /// Multiplicative eta products among the partitions of 24.
    Classify24 {
        #[arg(long, default_value_t = 3000)]
        bound: u64,
    },
    /// Small arithmetic identities around the j coefficients.
    Numerology,
    /// Run a verification suite: faber, grunsky, replicable, basis, hecke, mahler or all.
    Verify {
        suite: String,
        #[arg(long)]
        trunc: Option<i64>,
        #[arg(long)]
        grade: Option<u64>,
        #[arg(long, hide = true, default_value = "none")]
        inject_fault: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Oracle,
    Recurrence,
    Basis,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Recurrence => "recurrence",
            Method::Basis => "basis",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Computed,
    Verified,
    Falsified,
    Error,
}

impl Status {
    fn name(self) -> &'static str {
        match self {
            Status::Computed => "computed",
            Status::Verified => "verified",
            Status::Falsified => "falsified",
            Status::Error => "error",
        }
    }

    fn exit_code(self) -> u8 {
        match self {
            Status::Computed | Status::Verified => 0,
            Status::Falsified => 1,
            Status::Error => 2,
        }
    }

    fn verdict(ok: bool) -> Status {
        if ok {
            Status::Verified
        } else {
            Status::Falsified
        }
    }
}

struct Outcome {
    command: &'static str,
    status: Status,
    payload: Value,
    summary: String,
}

/// Input errors map to exit 2.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

type CmdResult = std::result::Result<Outcome, Failure>;

/// Renders every JSON number as a decimal string.
fn stringify_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(xs) => Value::Array(xs.into_iter().map(stringify_numbers).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, stringify_numbers(v))).collect()),
        other => other,
    }
}

fn emit(command: &str, status: Status, payload: Value, summary: &str) -> ExitCode {
    let mut doc = Map::new();
    if let Value::Object(m) = stringify_numbers(payload) {
        doc.extend(m);
    }
    doc.insert("command".into(), json!(command));
    doc.insert("status".into(), json!(status.name()));
    doc.insert("schema".into(), json!(SCHEMA));
    let text = serde_json::to_string_pretty(&Value::Object(doc)).expect("json renders");
    // A closed pipe on stdout is not an error of the computation.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    eprintln!("{command}: {} ({summary})", status.name());
    ExitCode::from(status.exit_code())
}

fn strings(xs: &[BigRational]) -> Vec<String> {
    xs.iter().map(format_rat).collect()
}

fn parse_spec(s: &str) -> std::result::Result<FunctionSpec, Failure> {
    s.parse::<FunctionSpec>().map_err(|e| Failure(format!("bad function spec {s:?}: {e}")))
}

/// `a_1..a_n` of a normalized spec.
fn normalized_terms(spec: &FunctionSpec, n: usize) -> std::result::Result<Vec<BigRational>, Failure> {
    let f = spec.realize(exp(n as i64 + 1))?;
    Ok(f.normalized_coefficients()?[1..=n].to_vec())
}

fn by_recurrence(spec: &FunctionSpec, n: usize) -> std::result::Result<Vec<BigRational>, Failure> {
    let second = spec
        .second_replicate()
        .ok_or_else(|| Failure(format!("recurrence needs f^(2) in closed form, unknown for {spec}")))?;
    let head = normalized_terms(spec, 5)?;
    let seeds: BTreeMap<u64, BigRational> = [1u64, 2, 3, 5].iter().map(|&k| (k, head[k as usize - 1].clone())).collect();
    let source = if &second == spec {
        SecondReplicate::SelfReplicate
    } else {
        SecondReplicate::Series(second.realize(exp(n as i64 + 1))?)
    };
    let f = mahler_compute(&seeds, &source, n as i64 + 1)?;
    Ok(f.normalized_coefficients()?[1..=n].to_vec())
}

fn by_basis(spec: &FunctionSpec, n: usize) -> std::result::Result<Vec<BigRational>, Failure> {
    let top = *NORTON_BASIS.last().expect("nonempty") as usize;
    let mut a = vec![BigRational::from_integer(0.into())];
    a.extend(normalized_terms(spec, top)?);
    let f: QSeries = reconstruct_from_basis(&basis_values(&a, &NORTON_BASIS), n as i64 + 1)?;
    Ok(f.normalized_coefficients()?[1..=n].to_vec())
}

fn cmd_coeffs(spec_text: &str, terms: usize, methods: &[Method]) -> CmdResult {
    let spec = parse_spec(spec_text)?;
    if terms == 0 {
        return Err(Failure("--terms must be at least 1".into()));
    }
    let mut methods = methods.to_vec();
    methods.dedup();

    let probe = spec.expand(exp(2))?;
    if !probe.is_normalized() {
        // Raw eta quotients: lead exponent plus the first `terms` coefficients.
        if methods != [Method::Oracle] {
            return Err(Failure(format!("{spec} is not normalized; only --method oracle applies")));
        }
        let lead = probe.lead_exp();
        let f = spec.expand(lead + exp(terms as i64))?;
        let c: Vec<String> = f.terms().take(terms).map(|(_, c)| format_rat(c)).collect();
        let payload = json!({
            "spec": spec.to_string(),
            "terms": terms,
            "normalized": false,
            "lead_exponent": lead.to_string(),
            "step": f.step().to_string(),
            "coefficients": c,
        });
        return Ok(Outcome {
            command: "coeffs",
            status: Status::Computed,
            payload,
            summary: format!("{terms} coefficients of {spec} from q^{lead}"),
        });
    }

    let mut tables: Vec<(Method, Vec<BigRational>)> = Vec::new();
    for &m in &methods {
        let a = match m {
            Method::Oracle => normalized_terms(&spec, terms)?,
            Method::Recurrence => by_recurrence(&spec, terms)?,
            Method::Basis => by_basis(&spec, terms)?,
        };
        tables.push((m, a));
    }
    let reference = &tables[0].1;
    let first_mismatch = tables[1..]
        .iter()
        .filter_map(|(m, a)| {
            a.iter()
                .zip(reference)
                .position(|(x, y)| x != y)
                .map(|i| json!({"index": i + 1, "method": m.name()}))
        })
        .next();
    let status = if tables.len() > 1 {
        Status::verdict(first_mismatch.is_none())
    } else {
        Status::Computed
    };
    let by_method: Map<String, Value> = tables.iter().map(|(m, a)| (m.name().to_string(), json!(strings(a)))).collect();
    let payload = json!({
        "spec": spec.to_string(),
        "terms": terms,
        "normalized": true,
        "methods": methods.iter().map(|m| m.name()).collect::<Vec<_>>(),
        "coefficients": strings(reference),
        "by_method": by_method,
        "agree": first_mismatch.is_none(),
        "first_mismatch": first_mismatch,
    });
    let names: Vec<&str> = methods.iter().map(|m| m.name()).collect();
    Ok(Outcome {
        command: "coeffs",
        status,
        payload,
        summary: format!("a_1..a_{terms} of {spec} via {}", names.join(",")),
    })
}

fn cmd_faber(spec_text: &str, degree: usize) -> CmdResult {
    let spec = parse_spec(spec_text)?;
    if degree == 0 {
        return Err(Failure("--degree must be at least 1".into()));
    }
    let f = spec.realize(exp(degree as i64 + 1))?;
    let a = normalized_prefix(&f, degree)?;
    let polys = faber_sequence(&a, degree)?;
    let rendered: Vec<Value> = polys
        .iter()
        .map(|p| json!({"degree": p.degree(), "coefficients": strings(&p.coeffs()), "text": p.to_string()}))
        .collect();
    Ok(Outcome {
        command: "faber",
        status: Status::Computed,
        payload: json!({"spec": spec.to_string(), "degree": degree, "polynomials": rendered}),
        summary: format!("F_1..F_{degree} of {spec}"),
    })
}

fn cmd_grunsky(spec_text: &str, grade: u64) -> CmdResult {
    let spec = parse_spec(spec_text)?;
    if grade < 2 {
        return Err(Failure("--grade must be at least 2".into()));
    }
    let f = spec.realize(exp(grade as i64 + 1))?;
    let a = normalized_prefix(&f, grade as usize)?;
    let t = grunsky_by_recursion(&a, grade)?;
    let violations: Vec<Value> = t.denominator_violations().into_iter().map(|(m, n)| json!([m, n])).collect();
    Ok(Outcome {
        command: "grunsky",
        status: Status::Computed,
        payload: json!({
            "spec": spec.to_string(),
            "grade": grade,
            "table": t.to_json(),
            "denominator_violations": violations,
        }),
        summary: format!("{} entries of {spec} to grade {grade}", t.len()),
    })
}

fn cmd_classify24(bound: u64) -> CmdResult {
    let c = classify_degree24(bound)?;
    let balanced = c.shapes.iter().filter(|s| s.balance.is_some()).count();
    let summary = format!("{} multiplicative shapes among {} partitions, {balanced} balanced", c.shapes.len(), c.examined);
    let mut payload = serde_json::to_value(&c).expect("classification serializes");
    payload["count"] = json!(c.shapes.len());
    Ok(Outcome { command: "classify24", status: Status::Computed, payload, summary })
}

fn cmd_numerology() -> CmdResult {
    let r = numerology();
    let summary = format!(
        "sum of squares {}, j mod 70 = {}, sums {} and {}",
        r.square_sum, r.j_square_sum_mod_70, r.sum_616_first, r.sum_616_second
    );
    Ok(Outcome {
        command: "numerology",
        status: Status::verdict(r.holds()),
        payload: serde_json::to_value(&r).expect("report serializes"),
        summary,
    })
}

fn cmd_verify(suite: &str, trunc: Option<i64>, grade: Option<u64>, fault: &str) -> CmdResult {
    let suites = Suite::parse_selection(suite).map_err(|_| Failure(format!("unknown suite {suite:?}")))?;
    let fault: Fault = fault.parse()?;
    let report = verify::run(&suites, VerifyOptions { trunc, grade, fault })?;
    let failing: Vec<String> = report
        .suites
        .iter()
        .filter(|s| !s.verified)
        .map(|s| s.suite.to_string())
        .collect();
    let summary = if failing.is_empty() {
        format!("{} suite(s) verified", report.suites.len())
    } else {
        format!("falsified in {}", failing.join(", "))
    };
    let mut payload = serde_json::to_value(&report).expect("report serializes");
    payload["suite"] = json!(suite);
    Ok(Outcome { command: "verify", status: Status::verdict(report.verified), payload, summary })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Coeffs { .. } => "coeffs",
        Command::Faber { .. } => "faber",
        Command::Grunsky { .. } => "grunsky",
        Command::Classify24 { .. } => "classify24",
        Command::Numerology => "numerology",
        Command::Verify { .. } => "verify",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            let first = msg.lines().next().unwrap_or("usage error").trim_start_matches("error: ").to_string();
            eprint!("{msg}");
            return emit("usage", Status::Error, json!({"error": first}), "bad invocation");
        }
    };
    let name = command_name(&cli.command);
    let result = match &cli.command {
        Command::Coeffs { spec, terms, method } => cmd_coeffs(spec, *terms, method),
        Command::Faber { spec, degree } => cmd_faber(spec, *degree),
        Command::Grunsky { spec, grade } => cmd_grunsky(spec, *grade),
        Command::Classify24 { bound } => cmd_classify24(*bound),
        Command::Numerology => cmd_numerology(),
        Command::Verify { suite, trunc, grade, inject_fault } => cmd_verify(suite, *trunc, *grade, inject_fault),
    };
    match result {
        Ok(o) => emit(o.command, o.status, o.payload, &o.summary),
        Err(Failure(msg)) => emit(name, Status::Error, json!({"error": msg}), &msg),
    }
}
