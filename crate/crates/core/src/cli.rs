//! Command-line front end. Every subcommand prints one deterministic JSON
//! envelope `{command, inputs, result[, certificates]}` (or CSV where asked)
//! with rationals as lowest-terms strings.
//!
//! Exit codes: 0 on a computed result (a "no" verdict included), 2 on invalid
//! input, 1 on internal failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::capacities::{cap_seq, DominanceReport};
use crate::cone::class_to_json;
use crate::embed::{
    ball_packing, decide_with_capacity_check, decide, squeeze, staircase, Bracket, EmbedDecision, Ellipsoid,
};
use crate::error::Error;
use crate::oracle::{constraint_scan, DEFAULT_SCAN_DEGREE};
use crate::rational::{parse_rational, Rational};
use crate::weights::{continued_fraction, weight_sequence};

/// Largest ball count for which "no" verdicts get a brute-force scan witness.
const SCAN_MAX_BALLS: usize = 10;

#[derive(Debug, Parser)]
#[command(name = "symplectic-embed", version, about = "Exact symplectic embedding decisions for 4-dimensional ellipsoids and balls")]
struct Cli {
    /// Write the output to PATH instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Capacity sequence N(A, B) up to index K.
    Caps {
        a: String,
        b: String,
        #[arg(long, value_name = "K")]
        count: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Weight expansion W(P, Q) and the continued fraction of P/Q.
    Weights { p: String, q: String },
    /// Does the disjoint union of the domains embed in the target?
    Decide {
        /// Domains as "a,b" pairs separated by ';' (a single value is a ball).
        #[arg(long)]
        domain: String,
        /// Target ellipsoid "c,d" (a single value is a ball).
        #[arg(long)]
        target: String,
        /// Include the full reduction log and oracle witnesses.
        #[arg(long)]
        certificate: bool,
        /// Also compare capacity sequences up to index K.
        #[arg(long, value_name = "K")]
        capacity_check: Option<usize>,
    },
    /// Do balls of the given sizes pack into B(MU)?
    Pack {
        /// Comma-separated ball sizes.
        sizes: String,
        #[arg(long, value_name = "MU")]
        into: String,
    },
    /// Bracket the largest scale s with int E(s·a, s·b) embedding in the target.
    Squeeze {
        #[arg(long)]
        domain: String,
        #[arg(long)]
        target: String,
        #[arg(long, value_name = "E")]
        eps: String,
    },
    /// Bracket c(a) = inf{A : int E(1,a) embeds in B(A)} over a range of a.
    Staircase {
        #[arg(long, value_name = "A0")]
        min: String,
        #[arg(long, value_name = "A1")]
        max: String,
        #[arg(long, value_name = "H")]
        step: String,
        #[arg(long, value_name = "E")]
        eps: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn r(x: &Rational) -> Value {
    Value::String(x.to_string())
}

fn rats(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(r).collect())
}

fn parse_ellipsoid(s: &str) -> Result<Ellipsoid, Failure> {
    let parts: Vec<&str> = s.split(',').collect();
    let e = match parts.as_slice() {
        [c] => Ellipsoid::ball(parse_rational(c)?)?,
        [a, b] => Ellipsoid::new(parse_rational(a)?, parse_rational(b)?)?,
        _ => return Err(Failure::Input(format!("expected \"a,b\", got {s:?}"))),
    };
    Ok(e)
}

fn parse_domains(s: &str) -> Result<Vec<Ellipsoid>, Failure> {
    s.split(';').filter(|p| !p.trim().is_empty()).map(parse_ellipsoid).collect()
}

fn parse_list(s: &str) -> Result<Vec<Rational>, Failure> {
    s.split(',').map(|x| parse_rational(x).map_err(Failure::from)).collect()
}

fn parse_positive_int(s: &str) -> Result<BigInt, Failure> {
    let v: BigInt = s.trim().parse().map_err(|_| Failure::Input(format!("not an integer: {s:?}")))?;
    if v <= BigInt::from(0) {
        return Err(Failure::Input(format!("expected a positive integer, got {v}")));
    }
    Ok(v)
}

fn ellipsoid_json(e: &Ellipsoid) -> Value {
    json!({ "a": r(e.a()), "b": r(e.b()) })
}

fn envelope(command: &str, inputs: Value, result: Value, certificates: Option<Value>) -> Value {
    let mut obj = Map::new();
    obj.insert("command".into(), Value::String(command.into()));
    obj.insert("inputs".into(), inputs);
    obj.insert("result".into(), result);
    if let Some(c) = certificates {
        obj.insert("certificates".into(), c);
    }
    Value::Object(obj)
}

fn decision_json(d: &EmbedDecision) -> Value {
    let mut obj = Map::new();
    obj.insert("verdict".into(), Value::String(d.verdict.as_str().into()));
    obj.insert("route".into(), Value::String("cone".into()));
    obj.insert("certificate_kind".into(), Value::String(d.cone.certificate.kind().into()));
    obj.insert("class".into(), class_to_json(&d.class.class));
    obj.insert("scale".into(), r(&d.class.scale));
    obj.insert("domain_balls".into(), rats(&d.class.balls[..d.class.domain_balls]));
    obj.insert("target_balls".into(), rats(&d.class.balls[d.class.domain_balls..]));
    if let Some(w) = &d.capacity_witness {
        obj.insert(
            "capacity_witness".into(),
            json!({ "index": w.index, "lhs": r(&w.lhs), "rhs": r(&w.rhs) }),
        );
    }
    Value::Object(obj)
}

fn certificates_json(d: &EmbedDecision) -> Result<Value, Failure> {
    let mut obj = Map::new();
    obj.insert("cone".into(), d.cone.certificate.to_json());
    if !d.verdict.is_yes() && d.class.balls.len() <= SCAN_MAX_BALLS {
        let hit = constraint_scan(&d.class.class, DEFAULT_SCAN_DEGREE)?;
        let witness = match hit {
            Some(h) => json!({
                "tuple": {"d": h.tuple.d, "m": h.tuple.m},
                "pairing": r(&h.pairing),
            }),
            None => Value::Null,
        };
        obj.insert("oracle_scan".into(), json!({ "max_degree": DEFAULT_SCAN_DEGREE, "witness": witness }));
    }
    Ok(Value::Object(obj))
}

fn bracket_json(b: &Bracket) -> Value {
    json!({ "lo": r(&b.lo), "hi": r(&b.hi), "width": r(&b.width()) })
}

enum Output {
    Json(Value),
    Text(String),
}

fn execute(command: Command) -> Result<Output, Failure> {
    let out = match command {
        Command::Caps { a, b, count, format } => {
            let (a, b) = (parse_rational(&a)?, parse_rational(&b)?);
            let seq = cap_seq(&a, &b, count)?;
            match format {
                Format::Csv => {
                    let mut s = String::from("k,value\n");
                    for (k, t) in seq.terms().iter().enumerate() {
                        s.push_str(&format!("{k},{t}\n"));
                    }
                    Output::Text(s)
                }
                Format::Json => Output::Json(envelope(
                    "caps",
                    json!({ "a": r(&a), "b": r(&b), "count": count }),
                    json!({ "terms": rats(&seq.terms()) }),
                    None,
                )),
            }
        }
        Command::Weights { p, q } => {
            let (p, q) = (parse_positive_int(&p)?, parse_positive_int(&q)?);
            let (p, q) = if p >= q { (p, q) } else { (q, p) };
            let w = weight_sequence(&p, &q)?;
            let cf = continued_fraction(&p, &q)?;
            let strs = |xs: &[BigInt]| Value::Array(xs.iter().map(|x| Value::String(x.to_string())).collect());
            let parts: Vec<Value> = w
                .parts()
                .iter()
                .map(|(x, l)| json!({ "value": x.to_string(), "multiplicity": l }))
                .collect();
            Output::Json(envelope(
                "weights",
                json!({ "p": p.to_string(), "q": q.to_string() }),
                json!({
                    "weights": strs(&w.flatten()),
                    "parts": parts,
                    "continued_fraction": strs(&cf),
                    "sum_of_squares": w.sum_of_squares().to_string(),
                }),
                None,
            ))
        }
        Command::Decide { domain, target, certificate, capacity_check } => {
            let domains = parse_domains(&domain)?;
            let target = parse_ellipsoid(&target)?;
            let mut inputs = json!({
                "domains": domains.iter().map(ellipsoid_json).collect::<Vec<_>>(),
                "target": ellipsoid_json(&target),
            });
            let (decision, report) = match capacity_check {
                Some(k) => {
                    inputs["capacity_check"] = Value::from(k);
                    let (d, rep) = decide_with_capacity_check(&domains, &target, k)?;
                    (d, Some(rep))
                }
                None => (decide(&domains, &target)?, None),
            };
            let mut result = decision_json(&decision);
            if let Some(rep) = report {
                let cap = match rep {
                    DominanceReport::Holds { up_to } => json!({ "holds_up_to": up_to }),
                    DominanceReport::Violation { index, lhs, rhs } => {
                        json!({ "first_violation": { "index": index, "lhs": r(&lhs), "rhs": r(&rhs) } })
                    }
                };
                result["capacity_check"] = cap;
            }
            let certs = if certificate { Some(certificates_json(&decision)?) } else { None };
            Output::Json(envelope("decide", inputs, result, certs))
        }
        Command::Pack { sizes, into } => {
            let sizes = parse_list(&sizes)?;
            let mu = parse_rational(&into)?;
            let decision = ball_packing(&sizes, &mu)?;
            let result = json!({
                "verdict": decision.verdict.as_str(),
                "route": "cone",
                "certificate_kind": decision.cone.certificate.kind(),
                "class": class_to_json(&decision.class.class),
            });
            Output::Json(envelope(
                "pack",
                json!({ "sizes": rats(&sizes), "into": r(&mu) }),
                result,
                Some(certificates_json(&decision)?),
            ))
        }
        Command::Squeeze { domain, target, eps } => {
            let domain = parse_ellipsoid(&domain)?;
            let target = parse_ellipsoid(&target)?;
            let eps = parse_rational(&eps)?;
            let b = squeeze(&domain, &target, &eps)?;
            Output::Json(envelope(
                "squeeze",
                json!({ "domain": ellipsoid_json(&domain), "target": ellipsoid_json(&target), "eps": r(&eps) }),
                bracket_json(&b),
                None,
            ))
        }
        Command::Staircase { min, max, step, eps, format } => {
            let (min, max) = (parse_rational(&min)?, parse_rational(&max)?);
            let (step, eps) = (parse_rational(&step)?, parse_rational(&eps)?);
            let rows = staircase(&min, &max, &step, &eps)?;
            match format {
                Format::Csv => {
                    let mut s = String::from("a,lo,hi\n");
                    for (a, b) in &rows {
                        s.push_str(&format!("{a},{},{}\n", b.lo, b.hi));
                    }
                    Output::Text(s)
                }
                Format::Json => Output::Json(envelope(
                    "staircase",
                    json!({ "min": r(&min), "max": r(&max), "step": r(&step), "eps": r(&eps) }),
                    json!({
                        "rows": rows.iter().map(|(a, b)| json!({ "a": r(a), "lo": r(&b.lo), "hi": r(&b.hi) })).collect::<Vec<_>>(),
                    }),
                    None,
                )),
            }
        }
    };
    Ok(out)
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(stderr, "{first}");
            return 2;
        }
    };
    let rendered = match execute(cli.command) {
        Ok(Output::Json(v)) => match serde_json::to_string_pretty(&v) {
            Ok(s) => s + "\n",
            Err(e) => return fail(stderr, Failure::Internal(e.to_string())),
        },
        Ok(Output::Text(s)) => s,
        Err(f) => return fail(stderr, f),
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, rendered.as_bytes()),
        None => stdout.write_all(rendered.as_bytes()),
    };
    match written {
        Ok(()) => 0,
        Err(e) => fail(stderr, Failure::Internal(format!("write failed: {e}"))),
    }
}

fn fail(stderr: &mut dyn Write, f: Failure) -> i32 {
    match f {
        Failure::Input(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Failure::Internal(msg) => {
            let _ = writeln!(stderr, "internal error: {msg}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("symplectic-embed").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn domain_parsing() {
        let d = parse_domains("1,4; 3/2 ,2;5").ok().unwrap();
        assert_eq!(d.len(), 3);
        assert!(d[2].is_ball());
        assert!(parse_domains("1,2,3").is_err());
        assert!(parse_domains("1,-2").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        let (code, out, err) = call(&["caps", "1"]);
        assert_eq!(code, 2);
        assert!(out.is_empty());
        assert_eq!(err.lines().count(), 1);
        let (code, _, err) = call(&["caps", "0", "1", "--count", "3"]);
        assert_eq!(code, 2);
        assert!(err.contains("positive"));
        let (code, _, _) = call(&["weights", "3", "x"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn help_exits_0() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("staircase"));
    }
}
