//! Command-line front end.
//!
//! Exit codes: 0 computed or certified, 1 not certified (or a cross-check
//! disagreement), 2 usage error. Rationals are always printed as `p` or
//! `p/q`, never as floating point.
//!
//! JSON output is a single object with the fields `command`, `inputs`,
//! `result`, `certificate` (null when there is none) and `chain` (a list of
//! `[k, "R(f, f^(k))"]` pairs, empty for commands that do not run the chain).

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::calculus::{partial, partial_rowsum, DerivativeRequest};
use crate::error::{Error, Result};
use crate::poly::{parse_rational, Polynomial, Rational, RootSpec};
use crate::recovery::{
    analyze, common_multiple_root, recover_first_order, recover_higher_order, simple_common_root,
    Analysis, RootCertificate,
};
use crate::resultant::{discriminant, resultant, Side};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_CERTIFIED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "resdiff",
    version,
    about = "Exact resultants, resultant derivatives and certified multiple-root recovery"
)]
pub struct CliRequest {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// R(f, g) as the Sylvester determinant.
    Resultant(Inputs),
    /// D(f) = (-1)^(n(n-1)/2) R(f, f') / a0.
    Discriminant(Inputs),
    /// One mixed partial of R(f, g) w.r.t. the coefficients of f (a) or g (b).
    Partial(Inputs),
    /// Detect the largest multiplicity of f and recover the multiple root.
    Analyze(Inputs),
    /// Check a claimed root structure: --s for f alone, --g for a simple
    /// common root, --g --s --p for a common multiple root.
    Check(Inputs),
    /// Run both partial-derivative algorithms and/or both recovery routes
    /// and require exact agreement.
    CrossCheck(Inputs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Resultant(_) => "resultant",
            Command::Discriminant(_) => "discriminant",
            Command::Partial(_) => "partial",
            Command::Analyze(_) => "analyze",
            Command::Check(_) => "check",
            Command::CrossCheck(_) => "cross-check",
        }
    }

    fn inputs(&self) -> &Inputs {
        match self {
            Command::Resultant(i)
            | Command::Discriminant(i)
            | Command::Partial(i)
            | Command::Analyze(i)
            | Command::Check(i)
            | Command::CrossCheck(i) => i,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Wrt {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Inputs {
    /// Coefficients of f, descending powers: `1,-3,0,4`.
    #[arg(long = "f", allow_hyphen_values = true)]
    pub f: Option<String>,
    /// Coefficients of g.
    #[arg(long = "g", allow_hyphen_values = true)]
    pub g: Option<String>,
    /// Roots of f as `r:m,r:m` with optional `@leading`.
    #[arg(long = "roots-f", allow_hyphen_values = true)]
    pub roots_f: Option<String>,
    /// Roots of g.
    #[arg(long = "roots-g", allow_hyphen_values = true)]
    pub roots_g: Option<String>,
    #[arg(long, value_enum)]
    pub wrt: Option<Wrt>,
    /// Coefficient indices to differentiate by, with repeats: `2,2`.
    #[arg(long)]
    pub indices: Option<String>,
    /// Multiplicity of the root in f.
    #[arg(long)]
    pub s: Option<usize>,
    /// Multiplicity of the common root in g.
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// Exit code plus what goes to standard output and standard error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: msg.into(),
        }
    }
}

/// Comma-separated rationals in descending powers.
pub fn parse_poly_arg(text: &str) -> Result<Polynomial> {
    let coeffs = text
        .split(',')
        .map(parse_rational)
        .collect::<Result<Vec<_>>>()?;
    if coeffs.is_empty() {
        return Err(Error::MalformedPolynomial("no coefficients".into()));
    }
    Polynomial::new(coeffs).map_err(|_| {
        Error::MalformedPolynomial(format!(
            "leading coefficient `{}` is zero",
            text.split(',').next().unwrap_or_default().trim()
        ))
    })
}

/// `r:m,r:m,...` with an optional `@c` suffix for the leading coefficient.
pub fn parse_roots_arg(text: &str) -> Result<RootSpec> {
    let (body, leading) = match text.split_once('@') {
        Some((b, c)) => (b, parse_rational(c)?),
        None => (text, Rational::from_integer(1.into())),
    };
    let mut roots = Vec::new();
    if !body.trim().is_empty() {
        for item in body.split(',') {
            let (r, m) = item.split_once(':').ok_or_else(|| {
                Error::MalformedPolynomial(format!("root `{item}` is not of the form r:m"))
            })?;
            let mult: usize = m.trim().parse().map_err(|_| {
                Error::MalformedPolynomial(format!("bad multiplicity `{m}` in `{item}`"))
            })?;
            if mult == 0 {
                return Err(Error::MalformedPolynomial(format!(
                    "multiplicity must be at least 1 in `{item}`"
                )));
            }
            roots.push((parse_rational(r)?, mult));
        }
    }
    RootSpec::new(leading, roots)
}

fn parse_indices(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::BadRequest(format!("bad index `{t}`")))
        })
        .collect()
}

fn pick_poly(
    label: &str,
    coeffs: &Option<String>,
    roots: &Option<String>,
) -> Result<Option<Polynomial>> {
    match (coeffs, roots) {
        (Some(_), Some(_)) => Err(Error::BadRequest(format!(
            "give either --{label} or --roots-{label}, not both"
        ))),
        (Some(c), None) => parse_poly_arg(c).map(Some),
        (None, Some(r)) => parse_roots_arg(r).map(|s| Some(s.expand())),
        (None, None) => Ok(None),
    }
}

fn require(p: Option<Polynomial>, label: &str) -> Result<Polynomial> {
    p.ok_or_else(|| Error::BadRequest(format!("missing --{label} (or --roots-{label})")))
}

fn rat_str(r: &Rational) -> String {
    r.to_string()
}

fn coeff_strs(p: &Polynomial) -> Vec<String> {
    p.coeffs().iter().map(rat_str).collect()
}

#[derive(Serialize)]
struct EchoedInputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    f: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    g: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wrt: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    indices: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<usize>,
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    inputs: EchoedInputs,
    result: Value,
    certificate: Option<Value>,
    chain: Vec<(usize, String)>,
}

fn certificate_json(c: &RootCertificate) -> Value {
    json!({
        "root": rat_str(&c.root),
        "multiplicity_in_f": c.multiplicity_in_f,
        "multiplicity_in_g": c.multiplicity_in_g,
        "route": c.route.name(),
        "hypothesis": c.route.hypothesis(),
        "verified": c.verified,
        "conditions": c.conditions.iter().map(|k| json!({
            "name": k.name,
            "value": rat_str(&k.value),
            "passed": k.passed,
        })).collect::<Vec<_>>(),
    })
}

fn route_json(r: &Option<Result<RootCertificate>>) -> Value {
    match r {
        None => json!({ "status": "not-run" }),
        Some(Ok(c)) => json!({ "status": "certified", "root": rat_str(&c.root) }),
        Some(Err(Error::NotCertified { condition, .. })) => {
            json!({ "status": "not-certified", "failed_condition": condition })
        }
        Some(Err(e)) => json!({ "status": "error", "message": e.to_string() }),
    }
}

fn route_text(r: &Option<Result<RootCertificate>>) -> String {
    match r {
        None => "not run".into(),
        Some(Ok(c)) => format!("certified, root {}", c.root),
        Some(Err(Error::NotCertified { condition, .. })) => {
            format!("not certified ({condition} failed)")
        }
        Some(Err(e)) => format!("error: {e}"),
    }
}

fn certificate_text(out: &mut String, c: &RootCertificate) {
    let _ = writeln!(out, "root: {}", c.root);
    let _ = write!(out, "multiplicity in f: {}", c.multiplicity_in_f);
    if let Some(p) = c.multiplicity_in_g {
        let _ = write!(out, ", in g: {p}");
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "route: {} (assumes {})", c.route, c.route.hypothesis());
    let _ = writeln!(out, "verified: {}", c.verified);
    let _ = writeln!(out, "conditions:");
    for k in &c.conditions {
        let mark = if k.passed { "ok" } else { "FAIL" };
        let _ = writeln!(out, "  [{mark}] {} (value {})", k.name, k.value);
    }
}

/// What a command computed, before formatting.
struct Computed {
    code: i32,
    result: Value,
    text: String,
    certificate: Option<RootCertificate>,
    chain: Vec<(usize, Rational)>,
}

impl Computed {
    fn value(v: Rational) -> Self {
        Self {
            code: EXIT_OK,
            text: format!("{v}\n"),
            result: json!({ "value": rat_str(&v) }),
            certificate: None,
            chain: Vec::new(),
        }
    }
}

fn analysis_computed(a: &Analysis) -> Computed {
    let rep = &a.report;
    let cert = a.certificate.clone();
    let code = if a.uncertified() || !a.routes_agree() {
        EXIT_NOT_CERTIFIED
    } else {
        EXIT_OK
    };
    let result = json!({
        "zero_root_multiplicity": rep.zero_root_multiplicity,
        "reduced": coeff_strs(&rep.reduced),
        "s_max": rep.s_max,
        "attempted_multiplicity": a.attempted_multiplicity,
        "root": cert.as_ref().map(|c| rat_str(&c.root)),
        "multiplicity": cert.as_ref().map(|c| c.multiplicity_in_f),
        "routes": {
            "first_order": route_json(&a.first_order),
            "higher_order": route_json(&a.higher_order),
        },
        "routes_agree": a.routes_agree(),
    });
    let mut text = String::new();
    let _ = writeln!(text, "reduced: {}", rep.reduced);
    let _ = writeln!(
        text,
        "zero root multiplicity: {}",
        rep.zero_root_multiplicity
    );
    for (k, r) in &rep.chain {
        let _ = writeln!(text, "R(f, f^({k})) = {r}");
    }
    let _ = writeln!(text, "s_max: {}", rep.s_max);
    if a.attempted_multiplicity.is_some() {
        let _ = writeln!(text, "first-order route: {}", route_text(&a.first_order));
        let _ = writeln!(text, "higher-order route: {}", route_text(&a.higher_order));
    }
    match &cert {
        Some(c) => certificate_text(&mut text, c),
        None if a.uncertified() => {
            let _ = writeln!(text, "no certified multiple root");
        }
        None => {
            let _ = writeln!(text, "squarefree");
        }
    }
    Computed {
        code,
        result,
        text,
        certificate: cert,
        chain: rep.chain.clone(),
    }
}

fn single_certificate(r: Result<RootCertificate>) -> Result<Computed> {
    match r {
        Ok(c) => {
            let mut text = String::new();
            certificate_text(&mut text, &c);
            Ok(Computed {
                code: EXIT_OK,
                result: json!({ "status": "certified", "root": rat_str(&c.root) }),
                text,
                certificate: Some(c),
                chain: Vec::new(),
            })
        }
        Err(Error::NotCertified {
            condition,
            conditions,
        }) => {
            let mut text = format!("not certified: {condition}\n");
            for k in &conditions {
                let mark = if k.passed { "ok" } else { "FAIL" };
                let _ = writeln!(text, "  [{mark}] {} (value {})", k.name, k.value);
            }
            Ok(Computed {
                code: EXIT_NOT_CERTIFIED,
                result: json!({ "status": "not-certified", "failed_condition": condition }),
                text,
                certificate: None,
                chain: Vec::new(),
            })
        }
        Err(e) => Err(e),
    }
}

/// Both routes at a user-supplied multiplicity.
fn check_routes(f: &Polynomial, s: usize) -> Computed {
    let first = Some(recover_first_order(f, s));
    let higher = Some(recover_higher_order(f, s));
    let certs: Vec<&RootCertificate> = [&first, &higher]
        .into_iter()
        .filter_map(|r| r.as_ref().and_then(|x| x.as_ref().ok()))
        .collect();
    let agree = certs.windows(2).all(|w| w[0].root == w[1].root);
    let certificate = if agree {
        certs.first().map(|c| (*c).clone())
    } else {
        None
    };
    let code = if certificate.is_some() {
        EXIT_OK
    } else {
        EXIT_NOT_CERTIFIED
    };
    let mut text = String::new();
    let _ = writeln!(text, "first-order route: {}", route_text(&first));
    let _ = writeln!(text, "higher-order route: {}", route_text(&higher));
    if let Some(c) = &certificate {
        certificate_text(&mut text, c);
    }
    Computed {
        code,
        result: json!({
            "status": if code == EXIT_OK { "certified" } else { "not-certified" },
            "routes": { "first_order": route_json(&first), "higher_order": route_json(&higher) },
            "routes_agree": agree,
        }),
        text,
        certificate,
        chain: Vec::new(),
    }
}

fn side_of(w: Wrt) -> Side {
    match w {
        Wrt::A => Side::A,
        Wrt::B => Side::B,
    }
}

fn derivative_request(inputs: &Inputs) -> Result<Option<DerivativeRequest>> {
    match (inputs.wrt, &inputs.indices) {
        (Some(w), Some(idx)) => DerivativeRequest::new(side_of(w), parse_indices(idx)?).map(Some),
        (None, None) => Ok(None),
        _ => Err(Error::BadRequest("--wrt and --indices go together".into())),
    }
}

fn compute(command: &Command, f: Option<Polynomial>, g: Option<Polynomial>) -> Result<Computed> {
    let inputs = command.inputs();
    match command {
        Command::Resultant(_) => Ok(Computed::value(resultant(
            &require(f, "f")?,
            &require(g, "g")?,
        )?)),
        Command::Discriminant(_) => Ok(Computed::value(discriminant(&require(f, "f")?)?)),
        Command::Partial(_) => {
            let req = derivative_request(inputs)?
                .ok_or_else(|| Error::BadRequest("partial needs --wrt and --indices".into()))?;
            Ok(Computed::value(partial(
                &require(f, "f")?,
                &require(g, "g")?,
                &req,
            )?))
        }
        Command::Analyze(_) => Ok(analysis_computed(&analyze(&require(f, "f")?)?)),
        Command::Check(_) => {
            let f = require(f, "f")?;
            match (g, inputs.s, inputs.p) {
                (None, Some(s), None) => Ok(check_routes(&f, s)),
                (Some(g), None, None) => single_certificate(simple_common_root(&f, &g)),
                (Some(g), Some(s), Some(p)) => {
                    single_certificate(common_multiple_root(&f, &g, s, p))
                }
                _ => Err(Error::BadRequest(
                    "check takes --s alone, --g alone, or --g with --s and --p".into(),
                )),
            }
        }
        Command::CrossCheck(_) => cross_check(inputs, require(f, "f")?, g),
    }
}

fn cross_check(inputs: &Inputs, f: Polynomial, g: Option<Polynomial>) -> Result<Computed> {
    let mut result = serde_json::Map::new();
    let mut text = String::new();
    let mut agree = true;
    let mut certificate = None;
    let mut chain = Vec::new();

    if let Some(req) = derivative_request(inputs)? {
        let g = require(g, "g")?;
        let jet = partial(&f, &g, &req)?;
        let rows = partial_rowsum(&f, &g, &req)?;
        let same = jet == rows;
        agree &= same;
        let _ = writeln!(text, "partial (jet): {jet}");
        let _ = writeln!(text, "partial (row replacement): {rows}");
        let _ = writeln!(text, "partials agree: {same}");
        result.insert(
            "partial".into(),
            json!({ "jet": rat_str(&jet), "rowsum": rat_str(&rows), "agree": same }),
        );
    } else {
        let a = analyze(&f)?;
        let ok = a.both_certified() && a.routes_agree();
        agree &= ok;
        let _ = writeln!(text, "s_max: {}", a.report.s_max);
        let _ = writeln!(text, "first-order route: {}", route_text(&a.first_order));
        let _ = writeln!(text, "higher-order route: {}", route_text(&a.higher_order));
        let _ = writeln!(text, "routes agree: {ok}");
        result.insert(
            "recovery".into(),
            json!({
                "s_max": a.report.s_max,
                "attempted_multiplicity": a.attempted_multiplicity,
                "first_order": route_json(&a.first_order),
                "higher_order": route_json(&a.higher_order),
                "agree": ok,
            }),
        );
        certificate = a.certificate.clone();
        chain = a.report.chain.clone();
    }
    result.insert("agree".into(), json!(agree));
    Ok(Computed {
        code: if agree { EXIT_OK } else { EXIT_NOT_CERTIFIED },
        result: Value::Object(result),
        text,
        certificate,
        chain,
    })
}

/// Runs one parsed request.
pub fn run(req: &CliRequest) -> Outcome {
    let command = &req.command;
    let inputs = command.inputs();
    let polys = pick_poly("f", &inputs.f, &inputs.roots_f)
        .and_then(|f| pick_poly("g", &inputs.g, &inputs.roots_g).map(|g| (f, g)));
    let (f, g) = match polys {
        Ok(fg) => fg,
        Err(e) => return Outcome::usage(format!("error: {e}\n")),
    };
    let echoed = EchoedInputs {
        f: f.as_ref().map(coeff_strs),
        g: g.as_ref().map(coeff_strs),
        wrt: inputs.wrt.map(|w| match w {
            Wrt::A => "a",
            Wrt::B => "b",
        }),
        indices: inputs
            .indices
            .as_deref()
            .and_then(|t| parse_indices(t).ok()),
        s: inputs.s,
        p: inputs.p,
    };
    let computed = match compute(command, f, g) {
        Ok(c) => c,
        Err(e) => return Outcome::usage(format!("error: {e}\n")),
    };
    let stdout = match inputs.format {
        Format::Text => computed.text,
        Format::Json => {
            let report = Report {
                command: command.name(),
                inputs: echoed,
                result: computed.result,
                certificate: computed.certificate.as_ref().map(certificate_json),
                chain: computed
                    .chain
                    .iter()
                    .map(|(k, r)| (*k, rat_str(r)))
                    .collect(),
            };
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
    };
    Outcome {
        code: computed.code,
        stdout,
        stderr: String::new(),
    }
}

/// Parses `args` (including the program name) and runs the request.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match CliRequest::try_parse_from(args) {
        Ok(req) => run(&req),
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                Outcome::usage(rendered)
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: rendered,
                    stderr: String::new(),
                }
            }
        }
    }
}
