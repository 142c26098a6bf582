//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when validation fails, 2 on malformed input.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::brauer::{hilbert_symbol, ramification, Place, QuaternionSymbol};
use crate::error::{Error, Result};
use crate::exactfield::json::descriptor_from_json;
use crate::exactfield::{format_rational, parse_rational, rat, Rational};
use crate::kspipeline::{
    cyclic_generator, even_weight_orbits, integer_family_grid, ks_report, six_lines_family, symmetric_generators,
    KSReport, HAMILTON,
};
use crate::qform::GramForm;

#[derive(Parser, Debug)]
#[command(name = "kuga-satake", version, about = "Endomorphism algebras of Kuga-Satake varieties")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Hilbert symbol (a, b)_p over Q
    Hilbert {
        #[arg(short, allow_hyphen_values = true)]
        a: String,
        #[arg(short, allow_hyphen_values = true)]
        b: String,
        /// A prime or `inf`
        #[arg(short)]
        p: String,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Ramification of the quaternion algebra (a, b)_Q
    Classify {
        #[arg(short, allow_hyphen_values = true)]
        a: String,
        #[arg(short, allow_hyphen_values = true)]
        b: String,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Full report for a field and Gram matrix read from JSON
    Report {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// The six-lines family over Q(sqrt d) with d = c^2 + e^2
    SixLines(SixLinesArgs),
    /// Orbits of even-weight sign vectors
    Orbits {
        #[arg(long)]
        degree: usize,
        #[arg(long, conflicts_with = "full")]
        cycle: bool,
        #[arg(long)]
        full: bool,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Regression run on three members of the six-lines family
    Selftest {
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Args, Debug)]
pub struct SixLinesArgs {
    #[arg(long, required_unless_present = "sweep")]
    d: Option<String>,
    #[arg(long, required_unless_present = "sweep")]
    c: Option<String>,
    #[arg(long, required_unless_present = "sweep")]
    e: Option<String>,
    /// Run every integer triple with squarefree d = c^2 + e^2 <= N
    #[arg(long, value_name = "N", conflicts_with_all = ["d", "c", "e"])]
    sweep: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Malformed { .. }
        | Error::InvalidDescriptor(_)
        | Error::InvalidGram(_)
        | Error::NotAPlace(_)
        | Error::ZeroInput
        | Error::ZeroSlot
        | Error::InvalidPermutation(_)
        | Error::FieldMismatch
        | Error::NonGaloisField(_) => 2,
        _ => 1,
    }
}

fn rational_arg(s: &str, key: &str) -> Result<Rational> {
    parse_rational(s).ok_or_else(|| Error::malformed(key, format!("invalid rational `{s}`")))
}

struct Output {
    body: String,
    code: i32,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, code: 0 }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("value serializes")
}

fn render(report: &KSReport, format: Format) -> String {
    match format {
        Format::Json => report.to_json_string(),
        Format::Text => report.to_text(),
    }
}

fn report_code(report: &KSReport) -> i32 {
    if report.validation.passed {
        0
    } else {
        1
    }
}

fn execute(cmd: Command) -> Result<Output> {
    match cmd {
        Command::Hilbert { a, b, p, format } => {
            let (ra, rb) = (rational_arg(&a, "a")?, rational_arg(&b, "b")?);
            let place = Place::parse(&p)?;
            let v = hilbert_symbol(&ra, &rb, &place)?;
            let shown = if v == 1 { "+1" } else { "-1" };
            Ok(Output::ok(match format.unwrap_or(Format::Text) {
                Format::Text => shown.to_string(),
                Format::Json => pretty(&json!({
                    "a": format_rational(&ra),
                    "b": format_rational(&rb),
                    "place": place.to_string(),
                    "value": v,
                })),
            }))
        }
        Command::Classify { a, b, format } => {
            let s = QuaternionSymbol::rational(rational_arg(&a, "a")?, rational_arg(&b, "b")?)?;
            let ram = ramification(&s)?;
            let places: Vec<String> = ram.places.iter().map(ToString::to_string).collect();
            Ok(Output::ok(match format.unwrap_or(Format::Text) {
                Format::Text => format!(
                    "ramification: {ram}\nsplit: {}\ndefinite: {}",
                    ram.is_empty(),
                    ram.contains_infinity()
                ),
                Format::Json => pretty(&json!({
                    "symbol": s.to_string(),
                    "ramification": places,
                    "split": ram.is_empty(),
                    "definite": ram.contains_infinity(),
                })),
            }))
        }
        Command::Report { input, format } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| Error::malformed("input", format!("{}: {e}", input.display())))?;
            let doc: Value =
                serde_json::from_str(&text).map_err(|e| Error::malformed("input", format!("invalid JSON: {e}")))?;
            let field_doc = doc.get("field").ok_or_else(|| Error::malformed("field", "missing key"))?;
            let f = descriptor_from_json(field_doc, "field")?;
            let form_doc = doc.get("form").ok_or_else(|| Error::malformed("form", "missing key"))?;
            let g = GramForm::from_json(form_doc, &f, "form")?;
            let report = ks_report(&f, &g)?;
            Ok(Output {
                body: render(&report, format.unwrap_or(Format::Json)),
                code: report_code(&report),
            })
        }
        Command::SixLines(args) => {
            let format = args.format.unwrap_or(Format::Json);
            if let Some(max_d) = args.sweep {
                return sweep(max_d, format);
            }
            let get = |v: &Option<String>, k: &str| rational_arg(v.as_deref().unwrap_or_default(), k);
            let report = six_lines_family(&get(&args.d, "d")?, &get(&args.c, "c")?, &get(&args.e, "e")?)?;
            Ok(Output {
                body: render(&report, format),
                code: report_code(&report),
            })
        }
        Command::Orbits {
            degree,
            cycle: _,
            full,
            format,
        } => {
            let gens = if full {
                symmetric_generators(degree)
            } else {
                cyclic_generator(degree)
            };
            let data = even_weight_orbits(degree, &gens)?;
            Ok(Output::ok(match format.unwrap_or(Format::Json) {
                Format::Json => pretty(&serde_json::to_value(&data).expect("orbit data serializes")),
                Format::Text => {
                    let mut lines = vec![format!("d = {}, |G| = {}", data.d, data.group_order)];
                    for o in &data.orbits {
                        let rep: String = o.representative.iter().map(|x| x.to_string()).collect();
                        lines.push(format!("{rep}: size {}, stabilizer {}", o.size, o.stabilizer_order));
                    }
                    lines.push(format!("orbit sizes: {:?}", data.sizes()));
                    lines.join("\n")
                }
            }))
        }
        Command::Selftest { format } => selftest(format.unwrap_or(Format::Json)),
    }
}

fn sweep(max_d: u64, format: Format) -> Result<Output> {
    let grid = integer_family_grid(max_d);
    let results: Vec<(u64, u64, u64, std::result::Result<KSReport, Error>)> = grid
        .par_iter()
        .map(|&(d, c, e)| (d, c, e, six_lines_family(&rat(d as i64), &rat(c as i64), &rat(e as i64))))
        .collect();
    let failed = results.iter().any(|r| r.3.is_err());
    let body = match format {
        Format::Json => {
            let items: Vec<Value> = results
                .iter()
                .map(|(d, c, e, r)| match r {
                    Ok(rep) => json!({
                        "d": d, "c": c, "e": e,
                        "report": serde_json::to_value(rep).expect("report serializes"),
                    }),
                    Err(err) => json!({"d": d, "c": c, "e": e, "error": err.to_string()}),
                })
                .collect();
            pretty(&Value::Array(items))
        }
        Format::Text => results
            .iter()
            .map(|(d, c, e, r)| match r {
                Ok(rep) => format!(
                    "({d},{c},{e}): cores {} ramification {:?}",
                    rep.cores.as_deref().unwrap_or("-"),
                    rep.ramification.clone().unwrap_or_default()
                ),
                Err(err) => format!("({d},{c},{e}): error: {err}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
    };
    Ok(Output {
        body,
        code: if failed { 1 } else { 0 },
    })
}

fn selftest(format: Format) -> Result<Output> {
    let cases = [(2, 1, 1), (5, 1, 2), (13, 2, 3)];
    let mut rows = Vec::new();
    let mut all = true;
    for (d, c, e) in cases {
        let outcome = six_lines_family(&rat(d), &rat(c), &rat(e));
        let pass = outcome.as_ref().is_ok_and(|r| {
            r.cores.as_deref() == Some(HAMILTON)
                && r.definite == Some(true)
                && r.ramification.as_ref().is_some_and(|p| *p == vec![json!(2), json!("inf")])
                && r.cores_invariant_route.as_ref().is_some_and(|i| i.dim == 16 && i.center_dim == 1)
        });
        all &= pass;
        rows.push((d, c, e, pass, outcome.err().map(|e| e.to_string())));
    }
    let body = match format {
        Format::Json => pretty(&json!({
            "passed": all,
            "cases": rows.iter().map(|(d, c, e, p, err)| json!({
                "d": d, "c": c, "e": e, "passed": p, "error": err,
            })).collect::<Vec<_>>(),
        })),
        Format::Text => rows
            .iter()
            .map(|(d, c, e, p, err)| {
                let status = if *p { "PASS" } else { "FAIL" };
                match err {
                    Some(msg) => format!("{status} ({d},{c},{e}): {msg}"),
                    None => format!("{status} ({d},{c},{e})"),
                }
            })
            .collect::<Vec<_>>()
            .join("\n"),
    };
    Ok(Output {
        body,
        code: if all { 0 } else { 1 },
    })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(cli.command) {
        Ok(o) => {
            let _ = writeln!(out, "{}", o.body.trim_end());
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
