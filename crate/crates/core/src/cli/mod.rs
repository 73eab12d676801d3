//! Command-line surface: expression parsing, query dispatch, JSON jobs and
//! exact output.

mod parse;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use parse::{parse_expression, parse_form, parse_poly, split_list};

use crate::error::{Error, Result};
use crate::finite_trace::{klt_trace, trace_function, FinitePresentation};
use crate::fractions::{d_fraction, fraction_is_zero, fraction_rescale, residue_of_fraction, GenFraction};
use crate::groebner::{buchberger, default_order};
use crate::projective::{class_is_zero, cohomology_dim, fraction_to_cech_class, pn_integral};
use crate::residue::{residue_symbol, tate_lambda, tate_presentation, DenomTuple};
use crate::ring::{CoeffField, Ctx, MonomialOrder, Poly, RingContext};
use crate::verify::{run_rule, InstanceSpec, Rule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Residue,
    ResidueRel,
    Trace,
    TateLambda,
    Klt,
    Groebner,
    Quotient,
    Fraction,
    Cech,
    Verify,
}

/// One query; which fields are read depends on `cmd`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Query {
    pub cmd: CommandKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denoms: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polys: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub op: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
}

impl Query {
    pub fn new(cmd: CommandKind) -> Query {
        Query {
            cmd,
            form: None,
            denoms: None,
            element: None,
            polys: None,
            order: None,
            exponents: None,
            op: None,
            gamma: None,
            r: None,
            twist: None,
            alpha: None,
            rule: None,
            trials: None,
            seed: None,
            n: None,
            m: None,
            degree: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDecl {
    pub field: String,
    #[serde(default)]
    pub base: Vec<String>,
    pub fiber: Vec<String>,
}

impl RingDecl {
    pub fn context(&self) -> Result<Ctx> {
        RingContext::relative(CoeffField::parse(&self.field)?, &self.base, &self.fiber)
    }
}

/// A batch of queries over one ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    pub ring: RingDecl,
    pub queries: Vec<Query>,
}

impl JobFile {
    pub fn parse(text: &str) -> Result<JobFile> {
        serde_json::from_str(text).map_err(|e| Error::Syntax { line: e.line(), col: e.column(), msg: e.to_string() })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutputRecord {
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub code: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub query: Option<Query>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
    #[serde(skip)]
    usage: bool,
    #[serde(skip)]
    failed: bool,
}

impl OutputRecord {
    pub fn ok(value: Value, query: Option<Query>) -> OutputRecord {
        let failed = value.get("failed").and_then(Value::as_u64).is_some_and(|f| f > 0);
        OutputRecord { status: "ok", code: None, message: None, value: Some(value), query, timing_ms: None, usage: false, failed }
    }

    pub fn error(e: &Error, query: Option<Query>) -> OutputRecord {
        OutputRecord {
            status: "error",
            code: Some(e.code()),
            message: Some(e.to_string()),
            value: None,
            query,
            timing_ms: None,
            usage: e.is_usage(),
            failed: true,
        }
    }

    /// 0 on success, 1 on a computation failure (including failing verify
    /// trials), 2 on a usage or parse error.
    pub fn exit_code(&self) -> i32 {
        if self.usage {
            2
        } else if self.failed {
            1
        } else {
            0
        }
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(text_value).collect::<Vec<_>>().join("\n"),
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}"),
                other => format!("{k}: {other}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        other => other.to_string(),
    }
}

/// One NDJSON line in json mode; a human-readable block in text mode.
pub fn format_output(rec: &OutputRecord, mode: OutputMode) -> String {
    match mode {
        OutputMode::Json => serde_json::to_string(rec).expect("serializable") + "\n",
        OutputMode::Text => {
            let mut s = match (&rec.value, rec.code) {
                (Some(v), _) => text_value(v),
                (None, Some(code)) => format!("error {code}: {}", rec.message.as_deref().unwrap_or("")),
                (None, None) => String::new(),
            };
            if let Some(ms) = rec.timing_ms {
                s.push_str(&format!("\n({ms} ms)"));
            }
            s + "\n"
        }
    }
}

/// Settings shared by every query of an invocation.
#[derive(Clone, Debug)]
pub struct Session {
    pub ring: Option<Ctx>,
    pub field: CoeffField,
    pub seed: u64,
    pub trials: u64,
    pub timing: bool,
}

impl Session {
    fn ring(&self, q: &Query) -> Result<&Ctx> {
        self.ring.as_ref().ok_or_else(|| {
            Error::Usage(format!("a ring declaration is required for `{}`", serde_json::to_value(q.cmd).expect("str")))
        })
    }
}

fn need<'a, T>(v: &'a Option<T>, name: &str) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| Error::Usage(format!("missing `{name}`")))
}

fn polys(texts: &[String], ctx: &Ctx) -> Result<Vec<Poly>> {
    texts.iter().map(|t| parse_poly(t, ctx)).collect()
}

fn string(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

/// Runs one query.
pub fn execute(session: &Session, q: &Query) -> Result<Value> {
    match q.cmd {
        CommandKind::Residue => {
            let ctx = session.ring(q)?.flattened();
            let omega = parse_form(need(&q.form, "form")?, &ctx)?;
            let d = DenomTuple::new(polys(need(&q.denoms, "denoms")?, &ctx)?)?;
            Ok(string(residue_symbol(&omega, &d)?))
        }
        CommandKind::ResidueRel => {
            let ctx = session.ring(q)?;
            if !ctx.is_relative() {
                return Err(Error::Usage("residue-rel needs a ring with a base block, e.g. QQ[y][T]".into()));
            }
            let omega = parse_form(need(&q.form, "form")?, ctx)?;
            let d = DenomTuple::new(polys(need(&q.denoms, "denoms")?, ctx)?)?;
            Ok(string(residue_symbol(&omega, &d)?))
        }
        CommandKind::Trace => {
            let ctx = session.ring(q)?;
            let pres = FinitePresentation::new(polys(need(&q.denoms, "denoms")?, ctx)?)?;
            let s = parse_poly(q.element.as_deref().unwrap_or("1"), ctx)?;
            Ok(string(trace_function(&pres, &s)?))
        }
        CommandKind::TateLambda => {
            let ctx = session.ring(q)?.flattened();
            let pres = tate_presentation(&polys(need(&q.denoms, "denoms")?, &ctx)?)?;
            let c = parse_poly(q.element.as_deref().unwrap_or("1"), &ctx)?;
            Ok(string(tate_lambda(&pres, &c)?))
        }
        CommandKind::Klt => {
            let ctx = session.ring(q)?;
            let pres = FinitePresentation::new(polys(need(&q.denoms, "denoms")?, ctx)?)?;
            let eta = parse_form(need(&q.form, "form")?, ctx)?;
            Ok(string(klt_trace(&pres, &eta)?))
        }
        CommandKind::Groebner => {
            let ctx = session.ring(q)?;
            let order = match q.order.as_deref() {
                None => default_order(ctx),
                Some("degrevlex") => MonomialOrder::DegRevLex,
                Some("lex") => MonomialOrder::Lex,
                Some("block") => MonomialOrder::Block { split: ctx.base_len() },
                Some(o) => return Err(Error::Usage(format!("unknown order `{o}` (degrevlex, lex, block)"))),
            };
            let gb = buchberger(&polys(need(&q.polys, "polys")?, ctx)?, order)?;
            Ok(Value::Array(gb.basis().iter().map(string).collect()))
        }
        CommandKind::Quotient => {
            let ctx = session.ring(q)?;
            let d = DenomTuple::new(polys(need(&q.denoms, "denoms")?, ctx)?)?;
            let quot = d.quotient()?;
            let basis: Vec<Value> = (0..quot.rank()).map(|i| string(quot.basis_element(i))).collect();
            Ok(json!({ "rank": quot.rank(), "basis": basis }))
        }
        CommandKind::Fraction => {
            let ctx = session.ring(q)?.flattened();
            let num = parse_form(need(&q.form, "form")?, &ctx)?;
            let dens = polys(need(&q.denoms, "denoms")?, &ctx)?;
            let exps = match &q.exponents {
                Some(e) => e.clone(),
                None => vec![1; dens.len()],
            };
            let fr = GenFraction::from_parts(num, dens, exps)?;
            match q.op.as_deref().unwrap_or("residue") {
                "residue" => Ok(string(residue_of_fraction(&fr)?)),
                "is-zero" => Ok(Value::Bool(fraction_is_zero(&fr)?)),
                "d" => Ok(Value::Array(d_fraction(&fr)?.iter().map(string).collect())),
                "rescale" => Ok(string(fraction_rescale(&fr, need(&q.gamma, "gamma")?)?)),
                o => Err(Error::Usage(format!("unknown fraction op `{o}` (residue, is-zero, d, rescale)"))),
            }
        }
        CommandKind::Cech => {
            let r = *need(&q.r, "r")?;
            if r == 0 {
                return Err(Error::Usage("r must be positive".into()));
            }
            match (&q.alpha, q.twist) {
                (Some(alpha), _) => {
                    let c = fraction_to_cech_class(&session.field, r, alpha)?;
                    let witness = class_is_zero(&c)?;
                    Ok(json!({
                        "class": c.to_string(),
                        "integral": pn_integral(&c)?.to_string(),
                        "coboundary": witness.is_some(),
                    }))
                }
                (None, Some(d)) => Ok(Value::Array((0..=r).map(|k| json!(cohomology_dim(r, d, k))).collect())),
                (None, None) => Err(Error::Usage("cech needs `alpha` or `twist`".into())),
            }
        }
        CommandKind::Verify => {
            let rule: Rule = need(&q.rule, "rule")?.parse()?;
            let defaults = InstanceSpec::default();
            let spec = InstanceSpec {
                n: q.n.unwrap_or(defaults.n),
                m: q.m.unwrap_or(defaults.m),
                degree: q.degree.unwrap_or(defaults.degree),
                field: session.field.clone(),
                seed: q.seed.unwrap_or(session.seed),
            };
            let mut report = run_rule(rule, q.trials.unwrap_or(session.trials), &spec)?;
            if !session.timing {
                report.wall_time_ms = None;
            }
            Ok(serde_json::to_value(report).expect("serializable"))
        }
    }
}

/// Runs a query and wraps the result, never panicking on user input.
pub fn run_query(session: &Session, q: &Query) -> OutputRecord {
    let start = Instant::now();
    let res = std::panic::catch_unwind(|| execute(session, q))
        .unwrap_or_else(|_| Err(Error::Internal("computation panicked".into())));
    let mut rec = match res {
        Ok(v) => OutputRecord::ok(v, Some(q.clone())),
        Err(e) => OutputRecord::error(&e, Some(q.clone())),
    };
    if session.timing {
        rec.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    rec
}

/// Runs every query of a job in parallel; records come back in input order.
pub fn run_job(job: &JobFile, session: &Session) -> Vec<OutputRecord> {
    let ring = match job.ring.context() {
        Ok(r) => r,
        Err(e) => return vec![OutputRecord::error(&e, None)],
    };
    let session = Session { field: ring.field().clone(), ring: Some(ring), ..session.clone() };
    job.queries.par_iter().map(|q| run_query(&session, q)).collect()
}

#[derive(Parser, Debug)]
#[command(name = "residue", version, about = "Exact residues, traces and local cohomology classes")]
struct Cli {
    /// Ring, e.g. `QQ[x,y]` or `QQ[y][T]` (base block, then fiber block).
    #[arg(long, global = true)]
    ring: Option<String>,
    /// Coefficient field `QQ` or `Fp:<p>`; overrides the ring's field.
    #[arg(long, global = true)]
    field: Option<String>,
    /// JSON job file to run instead of a single command.
    #[arg(long, global = true)]
    job: Option<std::path::PathBuf>,
    /// Output format; `json` (one record per line) for jobs, `text` otherwise.
    #[arg(long, global = true, value_enum)]
    output: Option<OutputMode>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 25)]
    trials: u64,
    /// Include wall-clock timings (output is then no longer reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Residue symbol over the whole ring: `residue FORM DENOMS`.
    Residue { form: String, denoms: String },
    /// Residue relative to the base block, a polynomial in the base variables.
    ResidueRel { form: String, denoms: String },
    /// Trace of multiplication by ELEMENT on the quotient by RELATIONS.
    Trace {
        relations: String,
        #[arg(default_value = "1")]
        element: String,
    },
    /// Value of the Bezoutian trace generator on ELEMENT.
    TateLambda {
        denoms: String,
        #[arg(default_value = "1")]
        element: String,
    },
    /// Trace of a top form along the finite map cut out by RELATIONS.
    Klt { form: String, relations: String },
    /// Reduced Gröbner basis.
    Groebner {
        polys: String,
        #[arg(long)]
        order: Option<String>,
    },
    /// Rank and standard basis of the quotient algebra.
    Quotient { denoms: String },
    /// Generalized fraction [FORM; DENOMS^EXPONENTS].
    Fraction {
        form: String,
        denoms: String,
        #[arg(long, value_delimiter = ',')]
        exponents: Option<Vec<u32>>,
        /// residue, is-zero, d or rescale.
        #[arg(long, default_value = "residue")]
        op: String,
        #[arg(long, value_delimiter = ',')]
        gamma: Option<Vec<u32>>,
    },
    /// Čech cohomology of O(twist) on P^r, or the class of a fraction.
    Cech {
        #[arg(long)]
        r: usize,
        #[arg(long, allow_hyphen_values = true)]
        twist: Option<i64>,
        #[arg(long, value_delimiter = ',')]
        alpha: Option<Vec<u32>>,
    },
    /// Randomized conformance suite for one rule (R1..R10, jacobian, tate,
    /// pairing, sum, cech).
    Verify {
        rule: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        degree: Option<u32>,
    },
}

fn to_query(cmd: Cmd) -> Query {
    let list = |s: String| Some(split_list(&s));
    match cmd {
        Cmd::Residue { form, denoms } => Query { form: Some(form), denoms: list(denoms), ..Query::new(CommandKind::Residue) },
        Cmd::ResidueRel { form, denoms } => {
            Query { form: Some(form), denoms: list(denoms), ..Query::new(CommandKind::ResidueRel) }
        }
        Cmd::Trace { relations, element } => {
            Query { denoms: list(relations), element: Some(element), ..Query::new(CommandKind::Trace) }
        }
        Cmd::TateLambda { denoms, element } => {
            Query { denoms: list(denoms), element: Some(element), ..Query::new(CommandKind::TateLambda) }
        }
        Cmd::Klt { form, relations } => Query { form: Some(form), denoms: list(relations), ..Query::new(CommandKind::Klt) },
        Cmd::Groebner { polys, order } => Query { polys: list(polys), order, ..Query::new(CommandKind::Groebner) },
        Cmd::Quotient { denoms } => Query { denoms: list(denoms), ..Query::new(CommandKind::Quotient) },
        Cmd::Fraction { form, denoms, exponents, op, gamma } => Query {
            form: Some(form),
            denoms: list(denoms),
            exponents,
            op: Some(op),
            gamma,
            ..Query::new(CommandKind::Fraction)
        },
        Cmd::Cech { r, twist, alpha } => Query { r: Some(r), twist, alpha, ..Query::new(CommandKind::Cech) },
        Cmd::Verify { rule, n, m, degree } => Query { rule: Some(rule), n, m, degree, ..Query::new(CommandKind::Verify) },
    }
}

fn session_from(cli: &Cli) -> Result<Session> {
    let field = cli.field.as_deref().map(CoeffField::parse).transpose()?;
    let ring = match &cli.ring {
        None => None,
        Some(text) => {
            let text = text.trim();
            let text = if text.starts_with('[') { format!("QQ{text}") } else { text.to_string() };
            let ctx = RingContext::parse(&text)?;
            Some(match &field {
                Some(f) => RingContext::new(f.clone(), ctx.vars().to_vec(), ctx.base_len())?,
                None => ctx,
            })
        }
    };
    let field = field.or_else(|| ring.as_ref().map(|r| r.field().clone())).unwrap_or(CoeffField::Rationals);
    Ok(Session { ring, field, seed: cli.seed, trials: cli.trials, timing: cli.timing })
}

fn emit(out: &mut dyn Write, records: &[OutputRecord], mode: OutputMode) -> i32 {
    let mut code = 0;
    for rec in records {
        let _ = out.write_all(format_output(rec, mode).as_bytes());
        code = code.max(rec.exit_code());
    }
    let _ = out.flush();
    code
}

/// Entry point of the `residue` binary; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let target: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let mode = cli.output.unwrap_or(if cli.job.is_some() { OutputMode::Json } else { OutputMode::Text });
    let session = match session_from(&cli) {
        Ok(s) => s,
        Err(e) => return emit(out, &[OutputRecord::error(&e, None)], mode),
    };
    let records = match (&cli.job, cli.command) {
        (Some(path), None) => {
            let job = std::fs::read_to_string(path)
                .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))
                .and_then(|text| JobFile::parse(&text));
            match job {
                Ok(job) => run_job(&job, &session),
                Err(e) => vec![OutputRecord::error(&e, None)],
            }
        }
        (None, Some(cmd)) => {
            let rec = run_query(&session, &to_query(cmd));
            // single commands echo no query
            vec![OutputRecord { query: None, ..rec }]
        }
        (Some(_), Some(_)) => vec![OutputRecord::error(&Error::Usage("give either --job or a command".into()), None)],
        (None, None) => vec![OutputRecord::error(&Error::Usage("no command given; see --help".into()), None)],
    };
    emit(out, &records, mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn session(ring: &str) -> Session {
        let ctx = RingContext::parse(ring).unwrap();
        Session { field: ctx.field().clone(), ring: Some(ctx), seed: 0, trials: 5, timing: false }
    }

    fn query(cmd: CommandKind, form: &str, denoms: &[&str]) -> Query {
        Query {
            form: Some(form.into()),
            denoms: Some(denoms.iter().map(|s| s.to_string()).collect()),
            ..Query::new(cmd)
        }
    }

    #[test]
    fn documented_queries() {
        let s = session("QQ[x,y]");
        let v = execute(&s, &query(CommandKind::Residue, "d(x)/\\d(y)", &["x", "y"])).unwrap();
        assert_eq!(v, json!("1"));
        let s = session("QQ[T]");
        let v = execute(&s, &query(CommandKind::Residue, "d(T)", &["T^2-1"])).unwrap();
        assert_eq!(v, json!("0"));
        let q = Query { rule: Some("R6".into()), trials: Some(25), seed: Some(7), n: Some(2), m: Some(0), ..Query::new(CommandKind::Verify) };
        let v = execute(&s, &q).unwrap();
        assert_eq!(v["failed"], json!(0));
        assert_eq!(v["attempted"], json!(25));
    }

    #[test]
    fn records() {
        let rec = OutputRecord::ok(json!("1"), None);
        assert_eq!(format_output(&rec, OutputMode::Json), "{\"status\":\"ok\",\"value\":\"1\"}\n");
        assert_eq!(format_output(&rec, OutputMode::Text), "1\n");
        let rec = OutputRecord::error(&Error::NotZeroDimensional, None);
        assert!(format_output(&rec, OutputMode::Json).starts_with("{\"status\":\"error\",\"code\":\"NOT_ZERO_DIMENSIONAL\","));
        assert_eq!(rec.exit_code(), 1);
        assert_eq!(OutputRecord::error(&Error::Usage("x".into()), None).exit_code(), 2);
    }

    #[test]
    fn relative_and_other_commands() {
        let s = session("QQ[y][T]");
        let v = execute(&s, &query(CommandKind::ResidueRel, "T*d(T)", &["T^2 - y"])).unwrap();
        assert_eq!(v, json!("1"));
        let q = Query { denoms: Some(vec!["T^2 - y".into()]), element: Some("T^2".into()), ..Query::new(CommandKind::Trace) };
        assert_eq!(execute(&s, &q).unwrap(), json!("2*y"));
        let q = query(CommandKind::Klt, "d(y)", &["T^2 - y"]);
        assert_eq!(execute(&s, &q).unwrap(), json!("2*d(y)"));
        let s = session("QQ[x,y]");
        let q = Query { polys: Some(vec!["x^2 - y".into(), "x*y - 1".into()]), order: Some("lex".into()), ..Query::new(CommandKind::Groebner) };
        assert!(execute(&s, &q).unwrap().is_array());
        let q = Query { denoms: Some(vec!["x^2".into(), "y".into()]), ..Query::new(CommandKind::Quotient) };
        assert_eq!(execute(&s, &q).unwrap()["rank"], json!(2));
        let q = Query { exponents: Some(vec![2, 1]), op: Some("is-zero".into()), ..query(CommandKind::Fraction, "x^2*d(x)/\\d(y)", &["x", "y"]) };
        assert_eq!(execute(&s, &q).unwrap(), json!(true));
        let q = Query { r: Some(2), twist: Some(-4), ..Query::new(CommandKind::Cech) };
        assert_eq!(execute(&s, &q).unwrap(), json!([0, 0, 3]));
        let q = Query { r: Some(1), alpha: Some(vec![1]), ..Query::new(CommandKind::Cech) };
        assert_eq!(execute(&s, &q).unwrap()["integral"], json!("1"));
    }

    #[test]
    fn usage_errors() {
        let s = session("QQ[x]");
        let e = execute(&s, &query(CommandKind::ResidueRel, "d(x)", &["x"])).unwrap_err();
        assert!(e.is_usage());
        let e = execute(&s, &query(CommandKind::Residue, "d(x) + 1", &["x"])).unwrap_err();
        assert_eq!(e.code(), "MIXED_DEGREE");
        let e = execute(&s, &query(CommandKind::Residue, "d(x)", &["x", "1"])).unwrap_err();
        assert_eq!(e.code(), "DEGREE_MISMATCH");
    }

    #[test]
    fn job_round_trip() {
        let text = r#"{"ring":{"field":"QQ","base":["y"],"fiber":["T"]},"queries":[{"cmd":"residue-rel","form":"T*d(T)","denoms":["T^2 - y"]},{"cmd":"trace","denoms":["T^2 - y"],"element":"T^2"}]}"#;
        let job = JobFile::parse(text).unwrap();
        assert_eq!(job.to_json(), text);
        let recs = run_job(&job, &session("QQ[x]"));
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[1].value, Some(json!("2*y")));
        assert!(JobFile::parse(r#"{"ring":{"field":"QQ","fiber":["T"]},"queries":[{"cmd":"nope"}]}"#).is_err());
    }
}
