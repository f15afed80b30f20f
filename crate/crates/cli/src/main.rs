//! `facto`: atoms, single-element invariants, bounded scans and theorem checks
//! for presented monoids given as JSON specs.

use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use facto::engine::{catenary_of, delta, elasticity, factorizations, scan, PresentedMonoid, ScanOptions};
use facto::families::{build, BuildOptions, MonoidSpec};
use facto::group::DEFAULT_ORDER_CAP;
use facto::harness::{list_checks, run_check, RunContext, Status};
use facto::Error;
use serde_json::{json, Map, Value};

const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "facto", version, about = "Exact factorization invariants of presented monoids")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Emit the JSON report instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for scans.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest group order any construction may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER_CAP)]
    cap_order: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the atoms of a monoid with their ids.
    Atoms {
        /// Spec file, `-` for stdin, or inline JSON.
        spec: String,
    },
    /// Invariants of a single element.
    Element {
        spec: String,
        /// Element literal in JSON (an integer for numerical monoids).
        element: String,
        /// Invariants to report; all by default.
        #[arg(long, value_enum, value_delimiter = ',')]
        what: Vec<What>,
    },
    /// Scan every element up to a size bound.
    Scan {
        spec: String,
        #[arg(long, default_value_t = 9)]
        bound: u64,
        /// Report U_k and rho_k for this k; repeatable.
        #[arg(long = "k")]
        ks: Vec<u64>,
        /// Skip catenary degrees (lengths only).
        #[arg(long)]
        no_catenary: bool,
    },
    /// Run theorem checks by id, or `all`.
    Verify {
        #[arg(default_value = "all")]
        ids: Vec<String>,
        /// Overrides the `bound` parameter of every selected check that has one.
        #[arg(long)]
        bound: Option<u64>,
        /// JSON object mapping check ids to parameter overrides.
        #[arg(long)]
        params: Option<String>,
    },
    /// List the available checks and their default parameters.
    List,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum What {
    Factorizations,
    Lengths,
    Catenary,
    Delta,
    Elasticity,
}

/// A failure with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidElement(_) | Error::NotAnAtom(_) | Error::GroupMismatch(_) => 3,
            Error::ScopeOverflow(_) | Error::CapExceeded { .. } | Error::Overflow(_) => 4,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn read_spec(arg: &str) -> Result<Value, Failure> {
    let text = if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("reading stdin: {e}")))?;
        s
    } else if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| usage(format!("reading {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| usage(format!("spec is not valid JSON: {e}")))
}

fn load(arg: &str, g: &Global) -> Result<(Value, Box<dyn PresentedMonoid>), Failure> {
    let raw = read_spec(arg)?;
    let spec = MonoidSpec::from_json(&raw)?;
    let m = build(&spec, &BuildOptions { cap_order: g.cap_order })?;
    let canonical = serde_json::to_value(&spec).map_err(|e| usage(e.to_string()))?;
    Ok((canonical, m))
}

struct Report {
    spec: Value,
    scope: String,
    results: Value,
    status: &'static str,
}

fn cmd_atoms(spec: &str, g: &Global) -> Result<Report, Failure> {
    let (spec, m) = load(spec, g)?;
    let atoms: Vec<Value> =
        m.atoms().iter().enumerate().map(|(id, a)| json!({"id": id, "atom": m.render_element(a)})).collect();
    Ok(Report { spec, scope: m.describe(), results: json!({"count": atoms.len(), "atoms": atoms}), status: "OK" })
}

fn cmd_element(spec: &str, literal: &str, what: &[What], g: &Global) -> Result<Report, Failure> {
    let (spec, m) = load(spec, g)?;
    let literal: Value = serde_json::from_str(literal)
        .map_err(|e| Failure { code: 3, message: format!("element is not valid JSON: {e}") })?;
    let a = m.parse_element(&literal)?;
    let zs = factorizations(m.as_ref(), &a)?;
    let l = zs.iter().map(|z| z.len()).collect();
    let all = [What::Factorizations, What::Lengths, What::Catenary, What::Delta, What::Elasticity];
    let what = if what.is_empty() { &all[..] } else { what };
    let mut out = Map::new();
    out.insert("element".into(), m.render_element(&a));
    for w in what {
        let (key, value) = match w {
            What::Factorizations => (
                "factorizations",
                json!(zs.iter().map(|z| json!({"atoms": z.to_pairs(), "length": z.len()})).collect::<Vec<_>>()),
            ),
            What::Lengths => ("lengths", json!(l)),
            What::Catenary => ("catenary", json!(catenary_of(&zs))),
            What::Delta => ("delta", json!(delta(&l))),
            What::Elasticity => {
                let r = elasticity(&l);
                ("elasticity", json!({"num": r.num(), "den": r.den()}))
            }
        };
        out.insert(key.into(), value);
    }
    Ok(Report { spec, scope: m.describe(), results: Value::Object(out), status: "OK" })
}

fn cmd_scan(spec: &str, bound: u64, ks: &[u64], catenary: bool, g: &Global) -> Result<Report, Failure> {
    let (spec, m) = load(spec, g)?;
    let opts = ScanOptions { bound, workers: g.workers as usize, ks: ks.to_vec(), catenary };
    let report = scan(m.as_ref(), &opts)?;
    Ok(Report { spec, scope: report.scope.clone(), results: report.to_json(m.as_ref()), status: "OK" })
}

fn cmd_verify(ids: &[String], bound: Option<u64>, params: Option<&str>, g: &Global) -> Result<Report, Failure> {
    let catalog = list_checks();
    let selected: Vec<&str> = if ids.iter().any(|id| id == "all") {
        catalog.iter().map(|c| c.id).collect()
    } else {
        ids.iter().map(String::as_str).collect()
    };
    let overrides: Map<String, Value> = match params {
        None => Map::new(),
        Some(text) => match serde_json::from_str(text) {
            Ok(Value::Object(m)) => m,
            _ => return Err(usage("--params must be a JSON object keyed by check id")),
        },
    };
    for id in overrides.keys() {
        if !selected.contains(&id.as_str()) {
            return Err(usage(format!("--params names {id:?}, which is not selected")));
        }
    }
    let ctx = RunContext { workers: g.workers as usize, seed: g.seed, cap_order: g.cap_order, drop_atom: None };
    let mut results = Vec::new();
    let mut worst = Status::Pass;
    for id in &selected {
        let mut p = overrides.get(*id).cloned().unwrap_or_else(|| json!({}));
        if let Some(b) = bound {
            let has_bound = catalog.iter().any(|c| c.id == *id && c.defaults.get("bound").is_some());
            if has_bound && p.get("bound").is_none() {
                p["bound"] = json!(b);
            }
        }
        let report = run_check(id, &p, &ctx)?;
        eprintln!("{:<18} {:<8} {:.2?}", report.id, report.status.as_str(), report.elapsed);
        worst = worst.max(report.status);
        results.push(serde_json::to_value(&report).map_err(|e| usage(e.to_string()))?);
    }
    Ok(Report {
        spec: Value::Null,
        scope: format!("checks: {}", selected.join(", ")),
        results: Value::Array(results),
        status: worst.as_str(),
    })
}

fn cmd_list() -> Report {
    let checks: Vec<Value> = list_checks()
        .into_iter()
        .map(|c| json!({"id": c.id, "description": c.description, "defaults": c.defaults}))
        .collect();
    Report { spec: Value::Null, scope: "check catalog".into(), results: Value::Array(checks), status: "OK" }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn is_leaf(v: &Value) -> bool {
    match v {
        Value::Object(m) => m.values().all(|x| !x.is_object() && !x.is_array()) && m.len() <= 3,
        Value::Array(a) => a.iter().all(|x| !x.is_object() && !x.is_array() || is_leaf(x)) && a.len() <= 12,
        _ => true,
    }
}

/// Indented rendering of the same value the JSON report carries.
fn render_table(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if is_leaf(x) {
                    out.push_str(&format!("{pad}{k}: {}\n", compact(x)));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    render_table(x, indent + 1, out);
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                if is_leaf(x) {
                    out.push_str(&format!("{pad}- {}\n", compact(x)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    render_table(x, indent + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", compact(other))),
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Atoms { spec } => cmd_atoms(spec, g),
        Command::Element { spec, element, what } => cmd_element(spec, element, what, g),
        Command::Scan { spec, bound, ks, no_catenary } => cmd_scan(spec, *bound, ks, !no_catenary, g),
        Command::Verify { ids, bound, params } => cmd_verify(ids, *bound, params.as_deref(), g),
        Command::List => Ok(cmd_list()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return ExitCode::from(f.code);
        }
    };
    if cli.global.json {
        let doc = json!({
            "tool_version": TOOL_VERSION,
            "spec": report.spec,
            "scope": report.scope,
            "results": report.results,
            "status": report.status,
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("values serialize"));
    } else {
        let mut out = format!("scope: {}\n", report.scope);
        render_table(&report.results, 0, &mut out);
        out.push_str(&format!("status: {}\n", report.status));
        print!("{out}");
    }
    eprintln!("done in {:.2?}", start.elapsed());
    if report.status == "FAIL" {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
