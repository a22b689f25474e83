//! Command-line front end: argument model, pipelines and report assembly.
//!
//! Every subcommand produces a [`Report`]: a JSON document tagged with
//! [`SCHEMA`], a plain-text rendering and, for tabular results, CSV.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use facseries::accel::{Method, OmegaStrategy, TransformInput, TransformTable};
use facseries::applications::{
    e1_quadrature, oscillator_energy, pade_degrees, scaled_e1_reference, E1Series, OscillatorMethod, E_EXACT,
};
use facseries::evaluation::{euler_integral_eval, eval_power_as_factorial, sum_factorial_series, QuadratureSpec};
use facseries::pade::{pade_construct_reducing, pade_eval};
use facseries::series::{parse_rational, RationalRepr, SeriesFile};
use facseries::stirling::StirlingCache;
use facseries::transform::{factorial_to_inverse_power, inverse_power_to_factorial, power_to_factorial_coeffs};
use facseries::{BigFloat, BigRational, FormalSeries, PrecisionContext, Real, SeriesKind, StirlingKind};
use serde_json::{json, Value};

pub const SCHEMA: &str = "facseries/1";

#[derive(Debug, Parser)]
#[command(name = "facseries", version, about = "Factorial series, sequence transformations and Padé summation")]
pub struct Cli {
    /// Working precision in decimal digits (at least 16).
    #[arg(long, global = true, env = "FACSERIES_PRECISION", default_value_t = 64)]
    pub precision: u32,

    /// Emit the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Write the report to PATH instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Also write tabular results as CSV.
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stirling numbers: a full row, or a single entry with --k.
    Stirling(StirlingArgs),
    /// Convert a series file between representations.
    Transform(TransformArgs),
    /// Levin or Weniger transformation of a list of series terms.
    Accelerate(AccelerateArgs),
    /// Padé approximant of a power series file.
    Pade(PadeArgs),
    /// Evaluate a series file by direct factorial summation, product form or Euler integral.
    Sum(SumArgs),
    /// Factorial series of the exponential integral.
    E1(E1Args),
    /// Ground-state energy of the quartic anharmonic oscillator.
    Oscillator(OscillatorArgs),
}

#[derive(Debug, Args)]
pub struct StirlingArgs {
    /// 1 for signed first kind, 2 for second kind.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub kind: u8,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Repr {
    Invpow,
    Fact,
    Pow,
}

impl Repr {
    fn kind(self) -> SeriesKind {
        match self {
            Repr::Invpow => SeriesKind::InversePower,
            Repr::Fact => SeriesKind::Factorial,
            Repr::Pow => SeriesKind::Power,
        }
    }
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long, value_enum)]
    pub from: Repr,
    #[arg(long, value_enum)]
    pub to: Repr,
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    /// Highest output index; defaults to the input length minus one.
    #[arg(long)]
    pub order: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AccelMethod {
    Levin,
    Weniger,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OmegaArg {
    FirstNeglected,
    ScaledTerm,
}

#[derive(Debug, Args)]
pub struct AccelerateArgs {
    #[arg(long, value_enum)]
    pub method: AccelMethod,
    #[arg(long, default_value = "1")]
    pub beta: String,
    #[arg(long, value_enum, default_value = "first-neglected")]
    pub omega: OmegaArg,
    /// JSON file `{"terms": [...]}`; entries are numbers or rational strings.
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    /// Highest transformation order.
    #[arg(long)]
    pub k: usize,
}

#[derive(Debug, Args)]
pub struct PadeArgs {
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    #[arg(long = "L")]
    pub l: usize,
    #[arg(long = "M")]
    pub m: usize,
    /// Evaluate the approximant at this (rational) point.
    #[arg(long)]
    pub eval: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Direct,
    Product,
    Integral,
}

#[derive(Debug, Args)]
pub struct SumArgs {
    #[arg(long, value_enum, default_value = "direct")]
    pub backend: Backend,
    #[arg(long)]
    pub z: String,
    #[arg(long)]
    pub terms: usize,
    /// Padé degrees for the integral backend; default is the plain truncation.
    #[arg(long, num_args = 2, value_names = ["L", "M"])]
    pub pade: Option<Vec<usize>>,
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct E1Args {
    #[arg(long)]
    pub z: String,
    #[arg(long, default_value_t = 15)]
    pub terms: usize,
    /// Include reference values, the divergent asymptotic sums and the ratio.
    #[arg(long)]
    pub compare: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OscMethod {
    Factorial,
    Pade,
    Integral,
}

impl From<OscMethod> for OscillatorMethod {
    fn from(m: OscMethod) -> Self {
        match m {
            OscMethod::Factorial => OscillatorMethod::Factorial,
            OscMethod::Pade => OscillatorMethod::Pade,
            OscMethod::Integral => OscillatorMethod::Integral,
        }
    }
}

#[derive(Debug, Args)]
pub struct OscillatorArgs {
    #[arg(long)]
    pub beta: String,
    /// Number of shifted coefficients minus one (34 uses b_1 .. b_35).
    #[arg(long, default_value_t = 34)]
    pub order: usize,
    #[arg(long, value_enum, default_value = "pade")]
    pub method: OscMethod,
    /// Run every method and tabulate against the reference.
    #[arg(long)]
    pub all: bool,
}

/// Failure of a run, split by exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, unreadable files or malformed input (exit 1).
    Usage(String),
    /// Pole, degeneracy, instability and similar (exit 2).
    Numerical(facseries::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    pub fn to_json(&self) -> Value {
        let (kind, message) = match self {
            CliError::Usage(m) => ("usage".to_string(), m.clone()),
            CliError::Numerical(e) => (error_kind(e).to_string(), e.to_string()),
        };
        json!({ "schema": SCHEMA, "error": { "kind": kind, "message": message, "exit_code": self.exit_code() } })
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Numerical(e) => write!(f, "{e}"),
        }
    }
}

impl From<facseries::Error> for CliError {
    fn from(e: facseries::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e)
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

fn error_kind(e: &facseries::Error) -> &'static str {
    use facseries::Error::*;
    match e {
        Domain(_) => "domain",
        InvalidInput(_) => "invalid_input",
        Pole(_) => "pole",
        Degeneracy { .. } => "degeneracy",
        Instability(_) => "instability",
        Integration(_) => "integration",
        PoleInDomain(_) => "pole_in_domain",
        Integrity(_) => "integrity",
        DimensionMismatch { .. } => "dimension_mismatch",
        MissingCompanion => "missing_companion",
        Estimate(_) => "estimate",
        Convergence(_) => "convergence",
        Format(_) => "format",
    }
}

type Outcome<T> = std::result::Result<T, CliError>;

/// Output of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub json: Value,
    pub text: String,
    pub csv: Option<String>,
}

impl Report {
    /// The rendering selected by `--json`, newline-terminated.
    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut s = serde_json::to_string_pretty(&self.json).expect("report serializes");
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

/// Execute the parsed command line and write all requested artifacts.
pub fn execute(cli: &Cli) -> Outcome<String> {
    let report = run(cli)?;
    let rendered = report.render(cli.json);
    if let Some(path) = &cli.csv {
        let csv = report.csv.as_deref().ok_or_else(|| CliError::Usage("this command has no tabular output".into()))?;
        write_file(path, csv)?;
    }
    match &cli.out {
        Some(path) => {
            write_file(path, &rendered)?;
            Ok(String::new())
        }
        None => Ok(rendered),
    }
}

/// Build the report for `cli` without touching the filesystem for output.
pub fn run(cli: &Cli) -> Outcome<Report> {
    let ctx = PrecisionContext::new(cli.precision)?;
    let mut report = match &cli.command {
        Command::Stirling(a) => stirling(a),
        Command::Transform(a) => transform(a),
        Command::Accelerate(a) => accelerate(a, &ctx),
        Command::Pade(a) => pade(a, &ctx),
        Command::Sum(a) => sum(a, &ctx),
        Command::E1(a) => e1(a, &ctx),
        Command::Oscillator(a) => oscillator(a, &ctx),
    }?;
    if let Value::Object(map) = &mut report.json {
        map.insert("schema".into(), json!(SCHEMA));
        map.insert("precision".into(), json!(cli.precision));
    }
    Ok(report)
}

fn write_file(path: &Path, contents: &str) -> Outcome<()> {
    std::fs::write(path, contents).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn read_file(path: &Path) -> Outcome<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn parse_json(path: &Path) -> Outcome<Value> {
    serde_json::from_str(&read_file(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// A bare series file, or any report carrying one under `"series"`.
fn read_series(path: &Path) -> Outcome<FormalSeries> {
    let mut value = parse_json(path)?;
    if let Some(inner) = value.get_mut("series") {
        value = inner.take();
    }
    let file: SeriesFile =
        serde_json::from_value(value).map_err(|e| CliError::Usage(format!("{}: not a series file: {e}", path.display())))?;
    Ok(FormalSeries::try_from(&file)?)
}

fn rational_arg(name: &str, text: &str) -> Outcome<BigRational> {
    parse_rational(text).map_err(|_| CliError::Usage(format!("--{name}: not a rational number: {text:?}")))
}

fn rational_json(v: &BigRational) -> Value {
    serde_json::to_value(RationalRepr::from(v)).expect("rational serializes")
}

fn rationals_json(v: &[BigRational]) -> Value {
    Value::Array(v.iter().map(rational_json).collect())
}

fn series_json(s: &FormalSeries) -> Value {
    serde_json::to_value(SeriesFile::from(s)).expect("series serializes")
}

fn decimal(v: &BigFloat, ctx: &PrecisionContext) -> String {
    v.to_decimal_string(ctx.digits() as usize)
}

fn decimals(v: &[BigFloat], ctx: &PrecisionContext) -> Value {
    Value::Array(v.iter().map(|x| json!(decimal(x, ctx))).collect())
}

fn require_kind(series: &FormalSeries, expected: SeriesKind, flag: &str) -> Outcome<()> {
    if series.kind() != expected {
        return Err(CliError::Usage(format!("{flag} says {expected} but the file holds a {} series", series.kind())));
    }
    Ok(())
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn stirling(a: &StirlingArgs) -> Outcome<Report> {
    let kind = if a.kind == 1 { StirlingKind::First } else { StirlingKind::Second };
    let table = StirlingCache::new(kind, a.n);
    let row = table.row(a.n)?;
    let values: Vec<String> = match a.k {
        Some(k) => vec![table.get(a.n, k)?.to_string()],
        None => row.iter().map(ToString::to_string).collect(),
    };
    let mut text = String::new();
    for v in &values {
        writeln!(text, "{v}").unwrap();
    }
    let mut json = json!({ "command": "stirling", "kind": a.kind, "n": a.n });
    match a.k {
        Some(k) => {
            json["k"] = json!(k);
            json["value"] = json!(values[0]);
        }
        None => json["row"] = json!(values),
    }
    let csv = csv_table(
        &["k", "value"],
        values.iter().enumerate().map(|(i, v)| vec![a.k.unwrap_or(i).to_string(), v.clone()]),
    );
    Ok(Report { json, text, csv: Some(csv) })
}

fn transform(a: &TransformArgs) -> Outcome<Report> {
    let input = read_series(&a.input)?;
    require_kind(&input, a.from.kind(), "--from")?;
    if input.is_empty() {
        return Err(CliError::Usage("series file has no coefficients".into()));
    }
    let order = a.order.unwrap_or(input.len() - 1);
    let output = match (a.from, a.to) {
        (Repr::Invpow, Repr::Fact) => inverse_power_to_factorial(&input, order)?,
        (Repr::Fact, Repr::Invpow) => factorial_to_inverse_power(&input, order)?,
        (Repr::Pow, Repr::Fact) => FormalSeries::new(SeriesKind::Factorial, power_to_factorial_coeffs(&input, order)?),
        (from, to) => {
            return Err(CliError::Usage(format!("no transform from {:?} to {:?}", from, to).to_lowercase()));
        }
    };
    let mut text = format!("{} -> {} (N = {order})\n", input.kind(), output.kind());
    for (n, c) in output.coeffs().iter().enumerate() {
        writeln!(text, "{n} {c}").unwrap();
    }
    let json = json!({
        "command": "transform",
        "from": input.kind(),
        "to": output.kind(),
        "order": order,
        "series": series_json(&output),
    });
    let csv = csv_table(
        &["n", "num", "den"],
        output.coeffs().iter().enumerate().map(|(n, c)| vec![n.to_string(), c.numer().to_string(), c.denom().to_string()]),
    );
    Ok(Report { json, text, csv: Some(csv) })
}

fn read_terms(path: &Path) -> Outcome<Vec<BigRational>> {
    let value = parse_json(path)?;
    let entries = value
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Usage(format!("{}: expected {{\"terms\": [...]}}", path.display())))?;
    entries
        .iter()
        .map(|e| match e {
            Value::String(s) => rational_arg("in", s),
            Value::Number(n) => rational_arg("in", &n.to_string()),
            other => Err(CliError::Usage(format!("{}: bad term {other}", path.display()))),
        })
        .collect()
}

fn accelerate(a: &AccelerateArgs, ctx: &PrecisionContext) -> Outcome<Report> {
    let terms: Vec<BigFloat> = read_terms(&a.input)?.iter().map(|t| BigFloat::from_rational(t, ctx)).collect();
    let beta = BigFloat::from_rational(&rational_arg("beta", &a.beta)?, ctx);
    let (method, method_name) = match a.method {
        AccelMethod::Levin => (Method::Levin, "levin"),
        AccelMethod::Weniger => (Method::WenigerS, "weniger"),
    };
    let (strategy, omega_name) = match a.omega {
        OmegaArg::FirstNeglected => (OmegaStrategy::FirstNeglected, "first_neglected"),
        OmegaArg::ScaledTerm => (OmegaStrategy::ScaledTerm, "scaled_term"),
    };
    let input = TransformInput::from_terms(&terms, strategy, beta, ctx)?;
    if a.k >= input.len() {
        return Err(CliError::Usage(format!("--k {} needs at least {} usable partial sums, have {}", a.k, a.k + 1, input.len())));
    }
    let table = TransformTable::build(method, &input, a.k, ctx);
    let mut rows = Vec::new();
    let mut text = format!("{method_name} transformation, omega = {omega_name}, beta = {}\n", a.beta);
    for k in 0..=a.k {
        let cell = table.get(k, 0).expect("window fits");
        let (value, error) = match cell {
            Ok(v) => (Some(decimal(v, ctx)), None),
            Err(e) => (None, Some(e.to_string())),
        };
        writeln!(text, "k = {k}: {}", value.as_deref().or(error.as_deref()).unwrap_or_default()).unwrap();
        rows.push(json!({ "k": k, "value": value, "error": error }));
    }
    let estimate = table.get(a.k, 0).expect("window fits").clone()?;
    let json = json!({
        "command": "accelerate",
        "method": method_name,
        "omega": omega_name,
        "beta": a.beta,
        "k": a.k,
        "partial_sums": decimals(input.partial_sums(), ctx),
        "first_row": rows,
        "estimate": decimal(&estimate, ctx),
    });
    let csv = csv_table(
        &["k", "value"],
        (0..=a.k).map(|k| {
            let v = table.get(k, 0).and_then(|c| c.as_ref().ok()).map(|v| decimal(v, ctx)).unwrap_or_default();
            vec![k.to_string(), v]
        }),
    );
    Ok(Report { json, text, csv: Some(csv) })
}

fn pade(a: &PadeArgs, ctx: &PrecisionContext) -> Outcome<Report> {
    let series = read_series(&a.input)?;
    require_kind(&series, SeriesKind::Power, "pade input")?;
    let (p, reduced) = pade_construct_reducing(series.coeffs(), a.l, a.m)?;
    let mut text = format!("[{}/{}]{}\n", p.l, p.m, if reduced { " (denominator degree reduced)" } else { "" });
    let fmt_poly = |c: &[BigRational]| c.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    writeln!(text, "num: {}", fmt_poly(&p.num)).unwrap();
    writeln!(text, "den: {}", fmt_poly(&p.den)).unwrap();
    let mut json = json!({
        "command": "pade",
        "requested": { "L": a.l, "M": a.m },
        "L": p.l,
        "M": p.m,
        "reduced": reduced,
        "numerator": rationals_json(&p.num),
        "denominator": rationals_json(&p.den),
    });
    if let Some(z) = &a.eval {
        let zq = rational_arg("eval", z)?;
        let value = pade_eval(&p, &BigFloat::from_rational(&zq, ctx), ctx)?;
        let exact = p.eval_exact(&zq)?;
        writeln!(text, "value at {z}: {}", decimal(&value, ctx)).unwrap();
        json["eval"] = json!({ "z": z, "value": decimal(&value, ctx), "exact": rational_json(&exact) });
    }
    Ok(Report { json, text, csv: None })
}

fn sum(a: &SumArgs, ctx: &PrecisionContext) -> Outcome<Report> {
    let series = read_series(&a.input)?;
    let zq = rational_arg("z", &a.z)?;
    let z = BigFloat::from_rational(&zq, ctx);
    if a.terms == 0 {
        return Err(CliError::Usage("--terms must be positive".into()));
    }
    if a.pade.is_some() && a.backend != Backend::Integral {
        return Err(CliError::Usage("--pade applies to the integral backend only".into()));
    }
    // inverse power input is converted to its factorial series first
    let as_factorial = |s: &FormalSeries| -> Outcome<FormalSeries> {
        match s.kind() {
            SeriesKind::Factorial => Ok(s.clone()),
            SeriesKind::InversePower => Ok(inverse_power_to_factorial(s, a.terms - 1)?),
            SeriesKind::Power => Err(CliError::Usage("power series input needs --backend product".into())),
        }
    };
    let mut json = json!({
        "command": "sum",
        "z": a.z,
        "terms": a.terms,
        "input_kind": series.kind(),
    });
    let mut text = String::new();
    let mut csv = None;
    match a.backend {
        Backend::Direct | Backend::Product => {
            let (name, report) = if a.backend == Backend::Direct {
                let d = as_factorial(&series)?;
                json["coefficients"] = series_json(&d);
                ("direct", sum_factorial_series(&d, &z, a.terms, ctx)?)
            } else {
                require_kind(&series, SeriesKind::Power, "product backend")?;
                let lambda = power_to_factorial_coeffs(&series, a.terms - 1)?;
                json["lambda"] = rationals_json(&lambda);
                ("product", eval_power_as_factorial(&lambda, &z, a.terms, ctx)?)
            };
            json["backend"] = json!(name);
            json["partial_sums"] = decimals(&report.partial_sums, ctx);
            json["value"] = json!(decimal(&report.final_value, ctx));
            writeln!(text, "{name} sum at z = {}, {} terms", a.z, a.terms).unwrap();
            for (n, s) in report.partial_sums.iter().enumerate() {
                writeln!(text, "{} {}", n + 1, decimal(s, ctx)).unwrap();
            }
            csv = Some(csv_table(
                &["terms", "partial_sum"],
                report.partial_sums.iter().enumerate().map(|(n, s)| vec![(n + 1).to_string(), decimal(s, ctx)]),
            ));
        }
        Backend::Integral => {
            let d = as_factorial(&series)?.truncated(a.terms - 1)?;
            let reduced = d.reduced_coefficients()?;
            let (l, m) = match a.pade.as_deref() {
                Some([l, m]) => (*l, *m),
                _ => (a.terms - 1, 0),
            };
            let result = euler_integral_eval::<BigFloat>(&reduced, &zq, l, m, &QuadratureSpec::default(), ctx)?;
            json["backend"] = json!("integral");
            json["pade"] = json!({ "L": l, "M": m });
            json["value"] = json!(decimal(&result.value, ctx));
            json["quadrature"] = json!({
                "doubling_difference": decimal(&result.quadrature.doubling_difference, ctx),
                "converged": result.quadrature.converged,
            });
            writeln!(text, "integral at z = {} with [{l}/{m}]: {}", a.z, decimal(&result.value, ctx)).unwrap();
            writeln!(text, "doubling difference: {}", decimal(&result.quadrature.doubling_difference, ctx)).unwrap();
        }
    }
    Ok(Report { json, text, csv })
}

fn e1(a: &E1Args, ctx: &PrecisionContext) -> Outcome<Report> {
    if a.terms == 0 {
        return Err(CliError::Usage("--terms must be positive".into()));
    }
    let z = BigFloat::from_rational(&rational_arg("z", &a.z)?, ctx);
    let series = E1Series::new(a.terms - 1);
    let mut report = sum_factorial_series(&series.factorial, &z, a.terms, ctx)?;
    let mut json = json!({
        "command": "e1",
        "z": a.z,
        "terms": a.terms,
        "factorial_coefficients": rationals_json(series.factorial.coeffs()),
        "partial_sums": decimals(&report.partial_sums, ctx),
        "value": decimal(&report.final_value, ctx),
    });
    let mut text = format!("e^z E1(z) factorial series at z = {}, {} terms: {}\n", a.z, a.terms, decimal(&report.final_value, ctx));
    let mut csv_rows: Vec<Vec<String>> = report
        .partial_sums
        .iter()
        .enumerate()
        .map(|(n, s)| vec![(n + 1).to_string(), decimal(s, ctx)])
        .collect();
    let mut header = vec!["terms", "factorial_sum"];
    if a.compare {
        let reference = scaled_e1_reference(&z, ctx)?;
        let quadrature = e1_quadrature(&z, ctx)?;
        report = report.with_reference(reference.clone());
        let errors = report.relative_errors.clone().expect("reference attached");
        let asymptotic = facseries::evaluation::sum_inverse_power_series(&series.inverse_power, &z, a.terms, ctx)?
            .with_reference(reference.clone());
        let ratio = report.final_value.clone() / reference.clone();
        let ratio_text = ratio.to_decimal_string(10);
        json["reference"] = json!({
            "continued_fraction": decimal(&reference, ctx),
            "quadrature": decimal(&quadrature, ctx),
        });
        json["relative_errors"] = decimals(&errors, ctx);
        json["asymptotic_partial_sums"] = decimals(&asymptotic.partial_sums, ctx);
        json["asymptotic_relative_errors"] = decimals(asymptotic.relative_errors.as_deref().unwrap_or_default(), ctx);
        json["ratio"] = json!(ratio_text);
        json["ratio_full"] = json!(decimal(&ratio, ctx));
        writeln!(text, "reference: {}", decimal(&reference, ctx)).unwrap();
        writeln!(text, "ratio: {ratio_text}").unwrap();
        header.extend(["relative_error", "asymptotic_sum", "asymptotic_relative_error"]);
        let asym_err = asymptotic.relative_errors.unwrap_or_default();
        for (i, row) in csv_rows.iter_mut().enumerate() {
            row.push(errors[i].to_decimal_string(6));
            row.push(decimal(&asymptotic.partial_sums[i], ctx));
            row.push(asym_err[i].to_decimal_string(6));
        }
    }
    Ok(Report { json, text, csv: Some(csv_table(&header, csv_rows)) })
}

fn oscillator(a: &OscillatorArgs, ctx: &PrecisionContext) -> Outcome<Report> {
    let beta = rational_arg("beta", &a.beta)?;
    let methods: Vec<OscillatorMethod> =
        if a.all { OscillatorMethod::ALL.to_vec() } else { vec![OscillatorMethod::from(a.method)] };
    let reference = (beta == BigRational::new(1.into(), 5.into()))
        .then(|| BigFloat::from_rational(&parse_rational(E_EXACT).expect("valid constant"), ctx));
    let (l, m) = pade_degrees(a.order);
    let mut results = Vec::new();
    let mut text = format!("E(beta = {}), order {}, Padé [{l}/{m}]\n", a.beta, a.order);
    let mut csv_rows = Vec::new();
    for method in methods {
        let outcome = oscillator_energy::<BigFloat>(&beta, a.order, method, ctx);
        let value = match (&outcome, a.all) {
            (Ok(v), _) => v.clone(),
            (Err(e), true) => {
                writeln!(text, "{}: {e}", method.name()).unwrap();
                results.push(json!({ "method": method.name(), "error": e.to_string() }));
                continue;
            }
            (Err(_), false) => outcome?,
        };
        let mut entry = json!({ "method": method.name(), "value": decimal(&value, ctx) });
        let mut line = format!("{}: {}", method.name(), value.to_decimal_string(16));
        let mut row = vec![method.name().to_string(), decimal(&value, ctx)];
        if let Some(r) = &reference {
            let err = (value - r.clone()).abs();
            entry["abs_error"] = json!(err.to_decimal_string(6));
            write!(line, " (error {})", err.to_decimal_string(3)).unwrap();
            row.push(err.to_decimal_string(6));
        }
        writeln!(text, "{line}").unwrap();
        results.push(entry);
        csv_rows.push(row);
    }
    let mut json = json!({
        "command": "oscillator",
        "beta": a.beta,
        "order": a.order,
        "pade_degrees": { "L": l, "M": m },
        "results": results,
    });
    let mut header = vec!["method", "value"];
    if reference.is_some() {
        json["reference"] = json!(E_EXACT);
        header.push("abs_error");
    }
    Ok(Report { json, text, csv: Some(csv_table(&header, csv_rows)) })
}
