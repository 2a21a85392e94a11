//! Batch command-line frontend. [`run`] turns a [`JobSpec`] into a single
//! report document and an exit code; the `k0var` binary only parses
//! arguments and prints.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value as Json};

use crate::count::{count_points, CountQuery, DEFAULT_BUDGET};
use crate::descent::{class_of_descended_arrangement, descend_subspace, GaloisContext};
use crate::error::{Error, Result};
use crate::fields::{Field, FieldElem};
use crate::kclass::{Check, Residue, Step, Verdict};
use crate::poly::{parse_element, parse_poly, HomogPoly};
use crate::strat::{
    class_of_arrangement, class_of_cone, class_of_quadric, class_of_singular_cubic,
    class_of_two_quadric_union, Options, StratResult,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

/// Environment variable overriding the default point count budget.
pub const BUDGET_ENV: &str = "K0VAR_BUDGET";

#[derive(Debug, Parser)]
#[command(
    name = "k0var",
    version,
    about = "Classes of low-degree hypersurfaces in K0(Var), checked by point counting"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Count points of V(polys) in P^n over a finite field.
    Count(JobArgs),
    ClassQuadric(JobArgs),
    ClassArrangement(JobArgs),
    /// Cone with apex [0:...:0:1]; the polys must not involve x_n.
    ClassCone(JobArgs),
    ClassCubicSingular(JobArgs),
    ClassTwoQuadrics(JobArgs),
    /// Descend a hyperplane union from F_{p^m} to F_p (`--field p,m`).
    Descend(JobArgs),
    /// Pick the operation from the input shape and always verify.
    Verify(JobArgs),
    /// Run the built-in fixture suite.
    Selftest(JobArgs),
}

#[derive(Debug, Clone, Args)]
pub struct JobArgs {
    /// `p`, `p,m` or `Q`.
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long)]
    pub ambient: Option<usize>,
    #[arg(long = "poly")]
    pub polys: Vec<String>,
    /// Linear form (arrangements and descent).
    #[arg(long = "form")]
    pub forms: Vec<String>,
    /// Comma-separated coordinates of a point.
    #[arg(long)]
    pub point: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub height: u32,
    #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub no_verify: bool,
    /// Include wall-clock time in the report.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Count,
    ClassQuadric,
    ClassArrangement,
    ClassCone,
    ClassCubicSingular,
    ClassTwoQuadrics,
    Descend,
    Verify,
    Selftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Count => "count",
            Command::ClassQuadric => "class-quadric",
            Command::ClassArrangement => "class-arrangement",
            Command::ClassCone => "class-cone",
            Command::ClassCubicSingular => "class-cubic-singular",
            Command::ClassTwoQuadrics => "class-two-quadrics",
            Command::Descend => "descend",
            Command::Verify => "verify",
            Command::Selftest => "selftest",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldArg {
    Rationals,
    Finite { p: u32, m: u32 },
}

impl FieldArg {
    pub fn field(self) -> Result<Field> {
        match self {
            FieldArg::Rationals => Ok(Field::rationals()),
            FieldArg::Finite { p, m } => Field::extension(p, m),
        }
    }
}

impl FromStr for FieldArg {
    type Err = Error;

    fn from_str(s: &str) -> Result<FieldArg> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(FieldArg::Rationals);
        }
        let bad = || Error::InvalidField(format!("cannot parse field {s:?}"));
        let mut parts = s.split(',').map(|x| x.trim().parse::<u32>());
        let p = parts.next().ok_or_else(bad)?.map_err(|_| bad())?;
        let m = match parts.next() {
            Some(m) => m.map_err(|_| bad())?,
            None => 1,
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(FieldArg::Finite { p, m })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobSpec {
    pub command: Command,
    pub field: Option<FieldArg>,
    pub ambient: Option<usize>,
    pub polys: Vec<String>,
    pub forms: Vec<String>,
    pub point: Option<Vec<String>>,
    pub options: Options,
    pub json: bool,
    pub verify: bool,
    pub timing: bool,
}

impl JobSpec {
    pub fn new(command: Command) -> JobSpec {
        JobSpec {
            command,
            field: None,
            ambient: None,
            polys: Vec::new(),
            forms: Vec::new(),
            point: None,
            options: Options::default(),
            json: false,
            verify: true,
            timing: false,
        }
    }

    pub fn from_args(command: Command, a: &JobArgs) -> Result<JobSpec> {
        Ok(JobSpec {
            command,
            field: a.field.as_deref().map(str::parse).transpose()?,
            ambient: a.ambient,
            polys: a.polys.clone(),
            forms: a.forms.clone(),
            point: a
                .point
                .as_ref()
                .map(|p| p.split(',').map(|c| c.trim().to_string()).collect()),
            options: Options {
                budget: a.budget,
                height: a.height,
                seed: a.seed,
            },
            json: a.json,
            verify: !a.no_verify,
            timing: a.timing,
        })
    }

    pub fn with_field(mut self, field: FieldArg) -> JobSpec {
        self.field = Some(field);
        self
    }

    pub fn with_ambient(mut self, n: usize) -> JobSpec {
        self.ambient = Some(n);
        self
    }

    pub fn with_poly(mut self, src: &str) -> JobSpec {
        self.polys.push(src.to_string());
        self
    }

    pub fn with_form(mut self, src: &str) -> JobSpec {
        self.forms.push(src.to_string());
        self
    }

    fn require_field(&self) -> Result<Field> {
        self.field
            .ok_or_else(|| Error::Precondition("--field is required".into()))?
            .field()
    }

    fn require_ambient(&self) -> Result<usize> {
        self.ambient
            .ok_or_else(|| Error::Precondition("--ambient is required".into()))
    }

    fn parse_all(&self, srcs: &[String], field: &Field) -> Result<Vec<HomogPoly>> {
        let nv = self.require_ambient()? + 1;
        srcs.iter().map(|s| parse_poly(s, field, nv)).collect()
    }

    fn linear_sources(&self) -> &[String] {
        if self.forms.is_empty() {
            &self.polys
        } else {
            &self.forms
        }
    }

    fn input_json(&self) -> Json {
        json!({
            "field": self.field.map(|f| match f {
                FieldArg::Rationals => "Q".to_string(),
                FieldArg::Finite { p, m: 1 } => p.to_string(),
                FieldArg::Finite { p, m } => format!("{p},{m}"),
            }),
            "ambient": self.ambient,
            "polys": self.polys,
            "forms": self.forms,
            "point": self.point,
            "seed": self.options.seed,
            "height": self.options.height,
            "budget": self.options.budget,
        })
    }
}

/// A finished run: one JSON document plus the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub doc: Json,
    pub exit_code: i32,
}

impl Report {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.doc).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        render_text(&self.doc)
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            self.to_json_string()
        } else {
            self.to_text()
        }
    }
}

pub fn exit_code_for(e: &Error) -> i32 {
    if e.is_defect() {
        EXIT_MISMATCH
    } else {
        EXIT_PRECONDITION
    }
}

pub fn run(job: &JobSpec) -> Report {
    let start = Instant::now();
    let mut doc = json!({
        "command": job.command.name(),
        "input": job.input_json(),
    });
    let exit_code = match dispatch(job) {
        Ok((body, code)) => {
            merge(&mut doc, body);
            code
        }
        Err(e) => {
            doc["status"] = json!("error");
            doc["error"] = json!(e.to_string());
            exit_code_for(&e)
        }
    };
    if job.timing {
        doc["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
    }
    Report { doc, exit_code }
}

fn merge(doc: &mut Json, body: Json) {
    if let (Some(d), Json::Object(b)) = (doc.as_object_mut(), body) {
        d.extend(b);
    }
}

fn dispatch(job: &JobSpec) -> Result<(Json, i32)> {
    match job.command {
        Command::Count => run_count(job),
        Command::Selftest => Ok(run_selftest(job)),
        Command::Descend => run_descend(job),
        Command::Verify => {
            let mut forced = job.clone();
            forced.verify = true;
            let (op, result) = auto_dispatch(&forced)?;
            let (mut body, code) = result_body(&forced, &result);
            body["operation"] = json!(op.name());
            Ok((body, code))
        }
        _ => {
            let result = run_operation(job, job.command)?;
            Ok(result_body(job, &result))
        }
    }
}

fn run_count(job: &JobSpec) -> Result<(Json, i32)> {
    let field = job.require_field()?;
    if !field.is_finite() {
        return Err(Error::NotFinite);
    }
    let n = job.require_ambient()?;
    let polys = job.parse_all(&job.polys, &field)?;
    let q = CountQuery::new(&field, n).with_all(polys);
    let count = count_points(&q, job.options.budget)?;
    Ok((
        json!({"status": "ok", "locus": q.describe(), "count": count}),
        EXIT_OK,
    ))
}

fn parse_point(job: &JobSpec, field: &Field) -> Result<Option<Vec<FieldElem>>> {
    job.point
        .as_ref()
        .map(|cs| cs.iter().map(|c| parse_element(c, field)).collect())
        .transpose()
}

fn run_operation(job: &JobSpec, op: Command) -> Result<StratResult> {
    let field = job.require_field()?;
    let n = job.require_ambient()?;
    let o = &job.options;
    match op {
        Command::ClassQuadric => match job.parse_all(&job.polys, &field)?.as_slice() {
            [f] => class_of_quadric(f, o),
            _ => Err(Error::Precondition(
                "class-quadric takes exactly one --poly".into(),
            )),
        },
        Command::ClassArrangement => {
            class_of_arrangement(&job.parse_all(job.linear_sources(), &field)?, o)
        }
        Command::ClassCone => {
            let gens = job
                .parse_all(&job.polys, &field)?
                .iter()
                .map(|g| {
                    g.drop_variable(n).map_err(|_| {
                        Error::Precondition(format!(
                            "cone generator {g} involves the apex variable x{n}"
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            class_of_cone(&gens, o)
        }
        Command::ClassCubicSingular => match job.parse_all(&job.polys, &field)?.as_slice() {
            [f] => class_of_singular_cubic(f, parse_point(job, &field)?.as_deref(), o),
            _ => Err(Error::Precondition(
                "class-cubic-singular takes exactly one --poly".into(),
            )),
        },
        Command::ClassTwoQuadrics => match job.parse_all(&job.polys, &field)?.as_slice() {
            [q1, q2] => class_of_two_quadric_union(q1, q2, o),
            _ => Err(Error::Precondition(
                "class-two-quadrics takes exactly two --poly".into(),
            )),
        },
        other => Err(Error::Precondition(format!(
            "{} is not a class operation",
            other.name()
        ))),
    }
}

/// Chooses the operation from the degrees of the input polynomials.
fn auto_dispatch(job: &JobSpec) -> Result<(Command, StratResult)> {
    let field = job.require_field()?;
    if !job.forms.is_empty() {
        return Ok((
            Command::ClassArrangement,
            run_operation(job, Command::ClassArrangement)?,
        ));
    }
    let polys = job.parse_all(&job.polys, &field)?;
    let degrees: Vec<u32> = polys.iter().map(HomogPoly::degree).collect();
    let op = match degrees.as_slice() {
        [] => return Err(Error::Precondition("verify needs --poly or --form".into())),
        ds if ds.iter().all(|&d| d == 1) => Command::ClassArrangement,
        [2] => Command::ClassQuadric,
        [3] => Command::ClassCubicSingular,
        [2, 2] => Command::ClassTwoQuadrics,
        _ => {
            return Err(Error::Precondition(format!(
                "no operation for polynomials of degrees {degrees:?}"
            )))
        }
    };
    Ok((op, run_operation(job, op)?))
}

fn run_descend(job: &JobSpec) -> Result<(Json, i32)> {
    let Some(FieldArg::Finite { p, m }) = job.field else {
        return Err(Error::Precondition("descend needs --field p,m".into()));
    };
    let ctx = GaloisContext::build(p, m)?;
    let forms = job.parse_all(job.linear_sources(), ctx.ext())?;
    let result = class_of_descended_arrangement(&ctx, &forms, &job.options)?;
    let basis = descend_subspace(&ctx, &forms, job.options.seed)?;
    let (mut body, code) = result_body(job, &result);
    body["base_field"] = json!(ctx.base().to_string());
    body["extension"] = json!(ctx.ext().to_string());
    body["descended_basis"] = json!(basis.iter().map(|h| h.to_string()).collect::<Vec<_>>());
    Ok((body, code))
}

fn residue_json(r: &Residue) -> Json {
    match r {
        Residue::Value(v) => json!(v),
        Residue::Indeterminate => json!("indeterminate"),
    }
}

fn verify_step(step: &Step, budget: u64) -> Verdict {
    match step.verify(budget) {
        Ok(v) => v,
        Err(e) => Verdict::Skipped(e.to_string()),
    }
}

/// Serializes a result, running the trace and master checks when the
/// field is finite and verification is on.
fn result_body(job: &JobSpec, result: &StratResult) -> (Json, i32) {
    let budget = job.options.budget;
    let finite = result.input.field.is_finite();
    let verifying = finite && job.verify;
    let mut failed = false;
    let steps: Vec<Json> = result
        .trace
        .steps()
        .iter()
        .map(|s| {
            let mut j = json!({
                "rule": s.rule,
                "depth": s.depth,
                "description": s.description,
                "check": s.check_text(),
            });
            if verifying {
                let v = verify_step(s, budget);
                failed |= v.is_fail();
                j["verification"] = v.to_json();
            }
            j
        })
        .collect();
    let oracle = if verifying {
        let master = Step {
            rule: "master".into(),
            description: "counting measure of the class".into(),
            depth: 0,
            check: Check::Class {
                class: result.class.clone(),
                locus: result.input.clone(),
            },
        };
        let v = verify_step(&master, budget);
        failed |= v.is_fail();
        match v {
            Verdict::Pass { lhs, rhs } | Verdict::Fail { lhs, rhs } => json!({
                "count_measure": lhs.to_string(),
                "count_points": rhs.to_string(),
                "status": if lhs == rhs { "pass" } else { "fail" },
            }),
            Verdict::Skipped(why) => json!({"status": "skipped", "reason": why}),
        }
    } else if !finite {
        json!({"status": "skipped", "reason": "not over a finite field"})
    } else {
        json!({"status": "skipped", "reason": "verification disabled"})
    };
    let status = if failed {
        "fail"
    } else if verifying {
        "pass"
    } else {
        "unverified"
    };
    let body = json!({
        "status": status,
        "variety": result.input.describe(),
        "class": result.class.to_string(),
        "class_expr": result.class.to_json(),
        "residue": residue_json(&result.residue),
        "hypotheses": result.hypotheses_json(),
        "warnings": result.warnings,
        "trace": steps,
        "oracle": oracle,
    });
    (body, if failed { EXIT_MISMATCH } else { EXIT_OK })
}

struct Fixture {
    name: &'static str,
    job: JobSpec,
    /// Required residue and count (at the field order).
    residue: i64,
    count: Option<u64>,
}

fn fixtures(options: Options) -> Vec<Fixture> {
    let f = |p| FieldArg::Finite { p, m: 1 };
    let job = |c, field, n| {
        let mut j = JobSpec::new(c).with_field(field).with_ambient(n);
        j.options = options;
        j
    };
    vec![
        Fixture {
            name: "nodal cubic over F5",
            job: job(Command::ClassCubicSingular, f(5), 2).with_poly("x1^2*x2 - x0^3 - x0^2*x2"),
            residue: 0,
            count: Some(5),
        },
        Fixture {
            name: "nodal cubic over F7",
            job: job(Command::ClassCubicSingular, f(7), 2).with_poly("x1^2*x2 - x0^3 - x0^2*x2"),
            residue: 0,
            count: Some(7),
        },
        Fixture {
            name: "cone over a plane cubic over F5",
            job: job(Command::ClassCone, f(5), 3).with_poly("x1^2*x2 - x0^3 - x0*x2^2 - x2^3"),
            residue: 1,
            count: None,
        },
        Fixture {
            name: "coordinate hyperplanes in P^3 over F3",
            job: job(Command::ClassArrangement, f(3), 3)
                .with_form("x0")
                .with_form("x1")
                .with_form("x2"),
            residue: 1,
            count: Some(28),
        },
        Fixture {
            name: "hyperbolic quadric in P^3 over F3",
            job: job(Command::ClassQuadric, f(3), 3).with_poly("x0*x1 - x2*x3"),
            residue: 1,
            count: Some(16),
        },
        Fixture {
            name: "conjugate lines descended to P^2 over F3",
            job: job(Command::Descend, FieldArg::Finite { p: 3, m: 2 }, 2)
                .with_form("x0 + t*x1")
                .with_form("x0 - t*x1"),
            residue: 1,
            count: Some(1),
        },
        Fixture {
            name: "conjugate planes descended to P^3 over F3",
            job: job(Command::Descend, FieldArg::Finite { p: 3, m: 2 }, 3)
                .with_form("x0 + t*x1")
                .with_form("x0 - t*x1"),
            residue: 1,
            count: Some(4),
        },
    ]
}

fn run_selftest(job: &JobSpec) -> (Json, i32) {
    let mut all = true;
    let cases: Vec<Json> = fixtures(job.options)
        .into_iter()
        .map(|fx| {
            let r = run(&fx.job);
            let counted = r.doc["oracle"]["count_points"]
                .as_str()
                .and_then(|s| s.parse::<u64>().ok());
            let ok = r.exit_code == EXIT_OK
                && r.doc["status"] == "pass"
                && r.doc["residue"] == json!(fx.residue)
                && fx.count.is_none_or(|c| counted == Some(c));
            all &= ok;
            json!({
                "name": fx.name,
                "command": fx.job.command.name(),
                "class": r.doc["class"],
                "residue": r.doc["residue"],
                "count": counted,
                "status": if ok { "pass" } else { "fail" },
            })
        })
        .collect();
    (
        json!({"status": if all { "pass" } else { "fail" }, "cases": cases}),
        if all { EXIT_OK } else { EXIT_MISMATCH },
    )
}

fn render_text(doc: &Json) -> String {
    let mut s = String::new();
    let str_of = |v: &Json| match v {
        Json::String(x) => x.clone(),
        other => other.to_string(),
    };
    let _ = writeln!(s, "command: {}", str_of(&doc["command"]));
    if let Some(e) = doc.get("error") {
        let _ = writeln!(s, "error: {}", str_of(e));
        return s;
    }
    if let Some(cases) = doc.get("cases").and_then(Json::as_array) {
        for c in cases {
            let _ = writeln!(
                s,
                "[{}] {}: {}",
                str_of(&c["status"]),
                str_of(&c["name"]),
                str_of(&c["class"])
            );
        }
        let _ = writeln!(s, "status: {}", str_of(&doc["status"]));
        return s;
    }
    if let Some(c) = doc.get("count") {
        let _ = writeln!(s, "{}: {}", str_of(&doc["locus"]), c);
        return s;
    }
    for key in [
        "operation",
        "base_field",
        "extension",
        "variety",
        "class",
        "residue",
    ] {
        if let Some(v) = doc.get(key) {
            let _ = writeln!(s, "{key}: {}", str_of(v));
        }
    }
    if let Some(b) = doc.get("descended_basis").and_then(Json::as_array) {
        let b: Vec<String> = b.iter().map(str_of).collect();
        let _ = writeln!(s, "descended basis: {}", b.join(", "));
    }
    for h in doc["hypotheses"].as_array().into_iter().flatten() {
        let mark = if h["holds"] == true { "ok" } else { "violated" };
        let _ = writeln!(s, "hypothesis: {} [{mark}]", str_of(&h["name"]));
    }
    for w in doc["warnings"].as_array().into_iter().flatten() {
        let _ = writeln!(s, "warning: {}", str_of(w));
    }
    let _ = writeln!(s, "trace:");
    for st in doc["trace"].as_array().into_iter().flatten() {
        let indent = "  ".repeat(st["depth"].as_u64().unwrap_or(0) as usize + 1);
        let _ = writeln!(
            s,
            "{indent}{}: {}",
            str_of(&st["rule"]),
            str_of(&st["description"])
        );
        if let Some(c) = st["check"].as_str() {
            let v = &st["verification"];
            let verdict = match v["status"].as_str() {
                Some("pass") | Some("fail") => {
                    format!(
                        " -> {} ({} vs {})",
                        str_of(&v["status"]),
                        str_of(&v["lhs"]),
                        str_of(&v["rhs"])
                    )
                }
                Some(other) => format!(" -> {other}"),
                None => String::new(),
            };
            let _ = writeln!(s, "{indent}  check {c}{verdict}");
        }
    }
    let o = &doc["oracle"];
    match o["status"].as_str() {
        Some("skipped") => {
            let _ = writeln!(s, "oracle: skipped ({})", str_of(&o["reason"]));
        }
        Some(st) => {
            let _ = writeln!(
                s,
                "oracle: count_measure {} vs count_points {}: {st}",
                str_of(&o["count_measure"]),
                str_of(&o["count_points"])
            );
        }
        None => {}
    }
    if let Some(ms) = doc.get("elapsed_ms") {
        let _ = writeln!(s, "elapsed: {ms} ms");
    }
    let _ = writeln!(s, "status: {}", str_of(&doc["status"]));
    s
}

/// Entry point shared by the binary: parses arguments, prints the report
/// and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_PRECONDITION
            } else {
                EXIT_OK
            };
        }
    };
    let (command, a) = match &cli.command {
        CliCommand::Count(a) => (Command::Count, a),
        CliCommand::ClassQuadric(a) => (Command::ClassQuadric, a),
        CliCommand::ClassArrangement(a) => (Command::ClassArrangement, a),
        CliCommand::ClassCone(a) => (Command::ClassCone, a),
        CliCommand::ClassCubicSingular(a) => (Command::ClassCubicSingular, a),
        CliCommand::ClassTwoQuadrics(a) => (Command::ClassTwoQuadrics, a),
        CliCommand::Descend(a) => (Command::Descend, a),
        CliCommand::Verify(a) => (Command::Verify, a),
        CliCommand::Selftest(a) => (Command::Selftest, a),
    };
    let job = match JobSpec::from_args(command, a) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    let report = run(&job);
    print!("{}", report.render(job.json));
    if job.json {
        println!();
    }
    report.exit_code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(c: Command, field: &str, n: usize) -> JobSpec {
        JobSpec::new(c)
            .with_field(field.parse().unwrap())
            .with_ambient(n)
    }

    #[test]
    fn field_args() {
        assert_eq!("Q".parse::<FieldArg>().unwrap(), FieldArg::Rationals);
        assert_eq!(
            "5".parse::<FieldArg>().unwrap(),
            FieldArg::Finite { p: 5, m: 1 }
        );
        assert_eq!(
            "3,2".parse::<FieldArg>().unwrap(),
            FieldArg::Finite { p: 3, m: 2 }
        );
        assert!("3,2,1".parse::<FieldArg>().is_err());
        assert!("x".parse::<FieldArg>().is_err());
    }

    #[test]
    fn count_example() {
        let r = run(&job(Command::Count, "3", 2).with_poly("x0^2+x1^2"));
        assert_eq!(r.exit_code, 0);
        assert_eq!(r.doc["count"], 1);
    }

    #[test]
    fn quadric_example() {
        let r = run(&job(Command::ClassQuadric, "3", 3).with_poly("x0*x1 - x2*x3"));
        assert_eq!(r.exit_code, 0);
        assert_eq!(r.doc["class"], "1 + 2*L + L^2");
        assert_eq!(r.doc["oracle"]["count_points"], "16");
        assert_eq!(r.doc["oracle"]["count_measure"], "16");
        assert!(r.to_text().contains("status: pass"));
    }

    #[test]
    fn precondition_exit_codes() {
        let r = run(&job(Command::ClassQuadric, "3", 2).with_poly("x0 + x1^2"));
        assert_eq!(r.exit_code, EXIT_PRECONDITION);
        let r = run(&JobSpec::new(Command::ClassQuadric).with_poly("x0^2"));
        assert_eq!(r.exit_code, EXIT_PRECONDITION);
        let r = run(&job(Command::Count, "Q", 2).with_poly("x0"));
        assert_eq!(r.exit_code, EXIT_PRECONDITION);
        let r = run(&job(Command::Descend, "3,2", 2).with_form("x0 + t*x1"));
        assert_eq!(r.exit_code, EXIT_PRECONDITION);
        let r = run(&job(Command::ClassCone, "3", 2).with_poly("x0*x2"));
        assert_eq!(r.exit_code, EXIT_PRECONDITION);
    }

    #[test]
    fn verify_dispatch_and_rationals() {
        let mut j = job(Command::Verify, "5", 3).with_poly("x0*x1 - x2^2");
        j.verify = false;
        let r = run(&j);
        assert_eq!(r.doc["operation"], "class-quadric");
        assert_eq!(r.doc["status"], "pass");
        let r = run(&job(Command::ClassQuadric, "Q", 2).with_poly("x0^2 + x1^2 - x2^2"));
        assert_eq!(r.exit_code, 0);
        assert_eq!(r.doc["oracle"]["status"], "skipped");
        assert_eq!(r.doc["residue"], 1);
    }

    #[test]
    fn cubic_with_point() {
        let mut j = job(Command::ClassCubicSingular, "3", 3).with_poly("x3*(x0*x1 - x2^2) + x0^3");
        j.point = Some(vec!["0".into(), "0".into(), "0".into(), "1".into()]);
        let r = run(&j);
        assert_eq!(r.exit_code, 0);
        assert_eq!(r.doc["oracle"]["count_points"], "13");
    }

    #[test]
    fn selftest_passes() {
        let r = run(&JobSpec::new(Command::Selftest));
        assert_eq!(r.exit_code, 0, "{}", r.to_json_string());
    }

    #[test]
    fn argument_parsing() {
        let code = main_with_args([
            "k0var",
            "count",
            "--field",
            "3",
            "--ambient",
            "2",
            "--poly",
            "x0^2+x1^2",
        ]);
        assert_eq!(code, 0);
        assert!(Cli::try_parse_from(["k0var", "count", "--bogus"]).is_err());
    }
}
