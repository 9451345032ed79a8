//! Command-line front end. [`run`] is the whole program minus process exit,
//! so tests can drive it with in-memory streams.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde_json::json;

use crate::error::{Error, Result};
use crate::lucas::{self, BinaryRecurrence};
use crate::ntheory;
use crate::oracle::{self, SearchBounds};
use crate::pell::{self, PellProblem, QuadPair};
use crate::primdiv::{self, CARMICHAEL_THRESHOLD};
use crate::solver::{self, SolutionTuple};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "dioph11",
    version,
    about = "Solve x^2 + 11^(2k) = y^n and inspect the machinery behind it"
)]
pub struct Command {
    #[command(subcommand)]
    pub sub: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Print the solution family and the certificates for every case
    Solve {
        #[arg(long = "lambda-max")]
        lambda_max: String,
        #[arg(long)]
        json: bool,
    },
    /// Check a tuple against the equation
    Verify {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        #[arg(allow_hyphen_values = true)]
        k: String,
        #[arg(allow_hyphen_values = true)]
        n: String,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustive search of x^2 + p^(2k) = y^n in a box
    Search {
        #[arg(long = "x-max")]
        x_max: String,
        #[arg(long = "k-max")]
        k_max: String,
        #[arg(long = "n-max")]
        n_max: String,
        #[arg(long, default_value = "11")]
        prime: String,
        #[arg(long, default_value = "1")]
        jobs: String,
        #[arg(long)]
        json: bool,
    },
    /// Solutions of X^2 - D Y^2 = N
    Pell {
        #[arg(long = "d")]
        d: String,
        #[arg(long = "n", default_value = "1", allow_hyphen_values = true)]
        n: String,
        #[arg(long)]
        count: String,
        #[arg(long)]
        json: bool,
    },
    /// Terms, residues and zero classes of t_(r+1) = P t_r - Q t_(r-1)
    Lucas(LucasArgs),
    /// Primitive-divisor screens
    Screen(ScreenArgs),
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("query").required(true).args(["term", "modulus", "zeros"]))]
pub struct LucasArgs {
    #[arg(long, allow_hyphen_values = true)]
    p: String,
    #[arg(long, allow_hyphen_values = true)]
    q: String,
    #[arg(long, allow_hyphen_values = true)]
    t0: String,
    #[arg(long, allow_hyphen_values = true)]
    tm1: String,
    #[arg(long, allow_hyphen_values = true)]
    term: Option<String>,
    #[arg(long = "mod")]
    modulus: Option<String>,
    #[arg(long)]
    zeros: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("mode").required(true).args(["exponent", "carmichael_d"]))]
pub struct ScreenArgs {
    #[arg(long, default_value = "11")]
    prime: String,
    #[arg(long)]
    exponent: Option<String>,
    #[arg(long = "carmichael-d")]
    carmichael_d: Option<String>,
    #[arg(long)]
    json: bool,
}

fn big(s: &str) -> Result<BigInt> {
    ntheory::parse_bigint(s)
}

fn small(name: &str, s: &str) -> Result<u64> {
    big(s)?
        .to_u64()
        .ok_or_else(|| Error::Domain(format!("--{name} {s} is out of range")))
}

fn json_text(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes") + "\n"
}

fn tuples_json(ts: &[SolutionTuple]) -> serde_json::Value {
    serde_json::to_value(ts).expect("tuples serialize")
}

fn pair_json(p: &QuadPair) -> serde_json::Value {
    json!({"x": p.x.to_string(), "y": p.y.to_string()})
}

/// Runs one command; returns the output text on success.
pub fn execute(cmd: Command) -> Result<String> {
    match cmd.sub {
        Sub::Solve { lambda_max, json } => {
            let r = solver::solve_all(small("lambda-max", &lambda_max)?)?;
            for t in r.tuples() {
                if !solver::verify_solution(&t)? {
                    return Err(Error::Invariant(format!("{t} fails verification")));
                }
            }
            if json {
                return Ok(serde_json::to_string_pretty(&r).expect("serializes") + "\n");
            }
            let mut out = String::from("family:\n");
            for s in &r.family {
                out.push_str(&format!(
                    "{} {} {} {} lambda={}\n",
                    s.x, s.y, s.k, s.n, s.lambda
                ));
            }
            for c in &r.certificates {
                out.push('\n');
                out.push_str(&c.to_text());
            }
            Ok(out)
        }
        Sub::Verify { x, y, k, n, json } => {
            let t = SolutionTuple::new(big(&x)?, big(&y)?, small("k", &k)?, small("n", &n)?)?;
            let valid = solver::verify_solution(&t)?;
            let reduction = if valid {
                Some(solver::reduce_to_primitive(&t)?)
            } else {
                None
            };
            if json {
                let mut v = json!({"tuple": t, "valid": valid});
                if let Some(r) = &reduction {
                    v["primitive"] = serde_json::to_value(&r.primitive).expect("serializes");
                    v["a"] = json!(r.a);
                    v["b"] = json!(r.b);
                }
                return Ok(json_text(&v));
            }
            let mut out = String::from(if valid { "valid\n" } else { "invalid\n" });
            if let Some(r) = reduction {
                out.push_str(&format!(
                    "primitive: {} {} {} {} (a={}, b={})\n",
                    r.primitive.x, r.primitive.y, r.primitive.k, r.primitive.n, r.a, r.b
                ));
            }
            Ok(out)
        }
        Sub::Search {
            x_max,
            k_max,
            n_max,
            prime,
            jobs,
            json,
        } => {
            let bounds = SearchBounds::new(
                big(&x_max)?,
                small("k-max", &k_max)?,
                small("n-max", &n_max)?,
            )
            .with_base_prime(small("prime", &prime)?);
            let jobs = small("jobs", &jobs)?.max(1) as usize;
            let found = oracle::brute_force_search_with_jobs(&bounds, jobs)?;
            for t in &found {
                if !solver::verify_solution(t)? && bounds.base_prime == solver::BASE {
                    return Err(Error::Invariant(format!("{t} fails verification")));
                }
            }
            if json {
                return Ok(json_text(
                    &json!({"bounds": bounds, "solutions": tuples_json(&found)}),
                ));
            }
            Ok(oracle::dump_tuples(&found))
        }
        Sub::Pell { d, n, count, json } => {
            let problem = PellProblem::new(big(&d)?, big(&n)?)?;
            let count = small("count", &count)? as usize;
            let cf = pell::cf_sqrt(problem.d())?;
            let (unit, sign) = pell::fundamental_unit(problem.d())?;
            let positive = pell::positive_unit(problem.d())?;
            let bases: Vec<QuadPair> = if problem.n().is_one() {
                vec![QuadPair::new(1, 0)]
            } else {
                pell::base_solutions(&problem)?
            };
            let mut solutions = Vec::new();
            for b in &bases {
                solutions.extend(pell::orbit(b, &positive, problem.d(), count)?);
            }
            for s in &solutions {
                if !problem.is_solution(s) {
                    return Err(Error::Invariant(format!(
                        "({}, {}) is not a solution",
                        s.x, s.y
                    )));
                }
            }
            if json {
                return Ok(json_text(&json!({
                    "d": problem.d().to_string(),
                    "n": problem.n().to_string(),
                    "cf": {"a0": cf.a0.to_string(), "period": cf.period.iter().map(|a| a.to_string()).collect::<Vec<_>>()},
                    "fundamental_unit": {"x": unit.x.to_string(), "y": unit.y.to_string(), "norm": sign},
                    "base_solutions": bases.iter().map(pair_json).collect::<Vec<_>>(),
                    "solutions": solutions.iter().map(pair_json).collect::<Vec<_>>(),
                })));
            }
            let mut out = format!(
                "cf: [{}; {}]\nfundamental unit: {} {} norm {}\n",
                cf.a0,
                cf.period
                    .iter()
                    .map(|a| a.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
                unit.x,
                unit.y,
                sign
            );
            for s in &solutions {
                out.push_str(&format!("{} {}\n", s.x, s.y));
            }
            Ok(out)
        }
        Sub::Lucas(a) => {
            let seq = BinaryRecurrence::new(big(&a.p)?, big(&a.q)?, big(&a.tm1)?, big(&a.t0)?);
            if let Some(r) = a.term {
                let r = lucas::index_from_bigint(&big(&r)?)?;
                let v = seq.term(r)?;
                return Ok(if a.json {
                    json_text(&json!({"r": r, "term": v.to_string()}))
                } else {
                    format!("{v}\n")
                });
            }
            if let Some(m) = a.modulus {
                let c = seq.residues_mod(small("mod", &m)?, -1)?;
                return Ok(if a.json {
                    json_text(&serde_json::to_value(&c).expect("serializes"))
                } else {
                    format!(
                        "period {}\npreperiod {}\nresidues {}\n",
                        c.period,
                        c.preperiod,
                        c.residues
                            .iter()
                            .map(|r| r.to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    )
                });
            }
            let m = small(
                "zeros",
                a.zeros.as_deref().expect("clap enforces one query"),
            )?;
            let z = seq.zero_classes_mod(m)?;
            Ok(if a.json {
                json_text(&serde_json::to_value(&z).expect("serializes"))
            } else {
                format!(
                    "period {}\nzero classes {}\n",
                    z.period,
                    z.classes
                        .iter()
                        .map(|c| format!("{c} mod {}", z.period))
                        .collect::<Vec<_>>()
                        .join(", ")
                )
            })
        }
        Sub::Screen(a) => {
            let p = small("prime", &a.prime)?;
            if let Some(n) = a.exponent {
                let v = primdiv::congruence_screen(p, small("exponent", &n)?)?;
                return Ok(if a.json {
                    json_text(&json!({"screen": "congruence", "verdict": v, "text": v.to_string()}))
                } else {
                    format!("{v}\n")
                });
            }
            let d = big(a.carmichael_d.as_deref().expect("clap enforces one mode"))?;
            let r = primdiv::carmichael_screen(&d, p, CARMICHAEL_THRESHOLD)?;
            Ok(if a.json {
                json_text(
                    &json!({"screen": "carmichael", "report": r, "text": r.verdict.to_string()}),
                )
            } else {
                let mut out = format!("{}\n", r.verdict);
                for c in &r.direct {
                    let tag = match c.power_exponent {
                        Some(e) => format!(" = {p}^{e}"),
                        None => String::new(),
                    };
                    out.push_str(&format!("X_{} = {}{}\n", c.m, c.x, tag));
                }
                out
            })
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invariant(_) => EXIT_INTERNAL,
        _ => EXIT_INVALID,
    }
}

/// Parses `argv` (program name first), writes results to `out` and
/// diagnostics to `err`, and returns the exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cmd = match Command::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_INVALID
                }
            };
        }
    };
    match execute(cmd) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
