//! The `f1an` command line. [`run`] takes argv and stdin and returns the
//! exit code with both output streams, so tests drive it without a
//! subprocess.
//!
//! Exit codes: 0 on success, 1 when a mathematical check fails (the
//! counterexample is printed as JSON), 2 for malformed flags or input.

use std::io::Read;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::basechange::{bc_norm, cofinality_check, convolve, F1Element, GaussNormSpec, Mode};
use crate::error::{Error, Result};
use crate::monoids::quotient_cokernel_norm;
use crate::norm::NormValue;
use crate::perfectoid::{Lattice, PuiseuxPoly};
use crate::rational::{parse_rat, Rat};
use crate::scalars::ScalarNormSpec;
use crate::spectrum::{eval_point, export_tree, validate_point, ExportFormat, IntervalRingSpec, SpectrumPoint};
use crate::verify::{run_suite, SuiteReport, SUITES};
use crate::witt::vector::ghost;
use crate::witt::{ff_gauss_norm, ff_two_sided_norm, witt_alpha_norm, witt_from_integer, FFElement, WittVector};

#[derive(Debug, Parser)]
#[command(name = "f1an", version, about = "Analytic geometry over F1 at finite scale")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the norm of an element read as JSON.
    Norm(NormArgs),
    /// Truncated Witt vector arithmetic over F_p or Z.
    Witt(WittArgs),
    /// Base change norms, convolution and cofinality constants.
    Basechange(BasechangeArgs),
    /// Quotient norm of a class in the cokernel of the diagonal N -> N².
    Quotient(QuotientArgs),
    /// Export or probe the spectrum of Z.
    Spectrum(SpectrumArgs),
    /// Run a named property suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NormKind {
    /// An F1Element; see `basechange`.
    Element,
    /// A Puiseux polynomial over F_p.
    Puiseux,
    /// A Witt vector `{"p", "digits"}`.
    Witt,
    /// A Fargues–Fontaine element `{"p", "terms"}`.
    Ff,
}

#[derive(Debug, Args)]
struct NormArgs {
    kind: NormKind,
    /// Element JSON; read from stdin when absent.
    #[arg(long)]
    x: Option<String>,
    #[arg(long, value_name = "num/den")]
    radius: Option<String>,
    #[arg(long, value_name = "num/den")]
    alpha: Option<String>,
    #[arg(long, value_name = "num/den")]
    rho: Option<String>,
    #[arg(long, value_enum, default_value_t = NormMode::L1)]
    mode: NormMode,
    /// Scalar norm: `plain`, `exp:s` or `two:s1:s2`.
    #[arg(long, default_value = "plain")]
    scalar: String,
    /// Use the two-sided Fargues–Fontaine norm over `[1/ρ, ρ]`.
    #[arg(long)]
    two_sided: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NormMode {
    L1,
    Sup,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WittOp {
    Add,
    Mul,
    Neg,
    Frobenius,
    Ghost,
    Norm,
    FromInt,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DigitRing {
    /// Digits in F_p, lifted to constant Puiseux polynomials.
    Fp,
    /// Integer digits; the Witt polynomials are evaluated over Z.
    Z,
}

#[derive(Debug, Args)]
struct WittArgs {
    op: WittOp,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    len: usize,
    /// Digits as a JSON array of integers or Puiseux objects.
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    y: Option<String>,
    #[arg(long, value_enum, default_value_t = DigitRing::Fp)]
    ring: DigitRing,
    #[arg(long, value_name = "num/den")]
    alpha: Option<String>,
    #[arg(long, value_name = "num/den")]
    radius: Option<String>,
    /// The integer for `from-int`.
    #[arg(long)]
    m: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BasechangeOp {
    Norm,
    Convolve,
    Cofinality,
}

#[derive(Debug, Args)]
struct BasechangeArgs {
    op: BasechangeOp,
    /// Element JSON (`{"x","y"}` for convolve); read from stdin when absent.
    #[arg(long)]
    x: Option<String>,
    #[arg(long, value_enum, default_value_t = NormMode::L1)]
    mode: NormMode,
    #[arg(long, value_name = "num/den")]
    radius: Option<String>,
    #[arg(long, value_name = "num/den")]
    rho: Option<String>,
    #[arg(long, value_name = "num/den")]
    rho_prime: Option<String>,
    #[arg(long, default_value = "plain")]
    scalar: String,
}

#[derive(Debug, Args)]
struct QuotientArgs {
    #[arg(long, value_name = "num/den")]
    r_prime: String,
    #[arg(long, value_name = "num/den")]
    radius: String,
    /// The class `[(n, 0)]`.
    #[arg(long)]
    n: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SpectrumOp {
    Export,
    Eval,
    Validate,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Svg,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    op: SpectrumOp,
    #[arg(long, default_value_t = 7)]
    max_prime: u64,
    #[arg(long, default_value_t = 9)]
    samples: usize,
    /// Interval ring such as `padic:3:0.5:2`, `zp:3:0:1/2` or `real:1/4:1]`.
    #[arg(long)]
    overlay: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Point JSON for `eval` and `validate`.
    #[arg(long)]
    point: Option<String>,
    /// Integer to evaluate at.
    #[arg(long, allow_hyphen_values = true)]
    n: Option<String>,
    /// Validation samples are `-bound..=bound`.
    #[arg(long, default_value_t = 50)]
    bound: i64,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Exit code and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }
}

/// Runs the CLI on `argv` (program name first).
pub fn run<I, S>(argv: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome::ok(text),
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match dispatch(cli.command, stdin) {
        Ok(Output::Text(s)) => Outcome::ok(s),
        Ok(Output::Json(v)) => Outcome::ok(format!("{v}\n")),
        Ok(Output::Failed(v)) => Outcome {
            code: 1,
            stdout: format!("{v}\n"),
            stderr: "check failed\n".into(),
        },
        Err(e) if e.is_check_failure() => Outcome {
            code: 1,
            stdout: format!("{}\n", json!({"counterexample": e.to_string()})),
            stderr: format!("{e}\n"),
        },
        Err(e) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

enum Output {
    Json(Value),
    Text(String),
    /// A check ran and failed; the value describes the counterexample.
    Failed(Value),
}

fn dispatch(cmd: Command, stdin: &mut dyn Read) -> Result<Output> {
    match cmd {
        Command::Norm(a) => norm_cmd(a, stdin).map(Output::Json),
        Command::Witt(a) => witt_cmd(a).map(Output::Json),
        Command::Basechange(a) => basechange_cmd(a, stdin).map(Output::Json),
        Command::Quotient(a) => {
            let r_prime = parse_rat(&a.r_prime)?;
            let r = parse_rat(&a.radius)?;
            let norm = quotient_cokernel_norm(&r_prime, &r, a.n)?;
            Ok(Output::Json(json!({"class": a.n, "norm": norm.to_json()})))
        }
        Command::Spectrum(a) => spectrum_cmd(a),
        Command::Verify(a) => verify_cmd(a),
    }
}

fn read_json(inline: Option<String>, stdin: &mut dyn Read) -> Result<Value> {
    let text = match inline {
        Some(s) => s,
        None => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| Error::Parse(format!("reading stdin: {e}")))?;
            s
        }
    };
    Ok(serde_json::from_str(&text)?)
}

fn radius_flag(flag: &str, v: &Option<String>) -> Result<NormValue> {
    let s = v
        .as_deref()
        .ok_or_else(|| Error::Parse(format!("--{flag} is required")))?;
    let q = parse_rat(s)?;
    if q <= Rat::zero() {
        return Err(Error::InvalidRadii(format!("--{flag} must be positive")));
    }
    NormValue::from_rat(&q)
}

fn rat_flag(flag: &str, v: &Option<String>) -> Result<Rat> {
    parse_rat(v.as_deref().ok_or_else(|| Error::Parse(format!("--{flag} is required")))?)
}

fn parse_scalar(s: &str) -> Result<ScalarNormSpec> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["plain"] => Ok(ScalarNormSpec::Plain),
        ["exp", e] => Ok(ScalarNormSpec::Exponent(parse_rat(e)?)),
        ["two", a, b] => ScalarNormSpec::two_sided(parse_rat(a)?, parse_rat(b)?),
        _ => Err(Error::Parse(format!("scalar norm {s:?}: expected plain, exp:s or two:s1:s2"))),
    }
}

fn norm_cmd(a: NormArgs, stdin: &mut dyn Read) -> Result<Value> {
    let v = read_json(a.x.clone(), stdin)?;
    let norm = match a.kind {
        NormKind::Element => {
            let e = F1Element::from_json(&v)?;
            bc_norm(&e, &gauss_spec(a.mode, &a.scalar, &a.radius)?)?
        }
        NormKind::Puiseux => PuiseuxPoly::from_json(&v)?.sup_norm(&radius_flag("radius", &a.radius)?)?,
        NormKind::Witt => {
            let x = WittVector::<PuiseuxPoly>::from_json(&v)?;
            witt_alpha_norm(&x, &radius_flag("alpha", &a.alpha)?, &radius_flag("radius", &a.radius)?)?
        }
        NormKind::Ff => {
            let x = FFElement::from_json(&v)?;
            let rho = rat_flag("rho", &a.rho)?;
            let r = radius_flag("radius", &a.radius)?;
            if a.two_sided {
                ff_two_sided_norm(&x, &rho, &r)?
            } else {
                ff_gauss_norm(&x, &rho, &r)?
            }
        }
    };
    Ok(json!({"norm": norm.to_json()}))
}

fn gauss_spec(mode: NormMode, scalar: &str, radius: &Option<String>) -> Result<GaussNormSpec> {
    let mode = match mode {
        NormMode::L1 => Mode::L1,
        NormMode::Sup => Mode::Sup,
    };
    let spec = GaussNormSpec::new(mode, parse_scalar(scalar)?);
    Ok(match radius {
        Some(_) => spec.at_radius(radius_flag("radius", radius)?),
        None => spec,
    })
}

/// Digits from a JSON array: integers are read in the digit ring,
/// objects as Puiseux polynomials over F_p.
fn fp_digits(p: u64, len: usize, text: &str) -> Result<Vec<PuiseuxPoly>> {
    let v: Value = serde_json::from_str(text)?;
    let arr = v.as_array().ok_or_else(|| Error::Parse("digits must be a JSON array".into()))?;
    let lattice = Lattice::PPower { bound: 8 };
    let mut out = Vec::with_capacity(len);
    for d in arr {
        out.push(match d {
            Value::Number(n) => {
                let c = n.as_i64().ok_or_else(|| Error::Parse(format!("digit {n} is not an integer")))?;
                PuiseuxPoly::constant(p, lattice, c)
            }
            Value::Object(_) => {
                let f = PuiseuxPoly::from_json(d)?;
                if f.p() != p {
                    return Err(Error::TagMismatch(format!("digit over F_{} in W(F_{p})", f.p())));
                }
                f
            }
            other => return Err(Error::Parse(format!("bad digit {other}"))),
        });
    }
    pad(out, len, PuiseuxPoly::constant(p, lattice, 0))
}

fn int_digits(len: usize, text: &str) -> Result<Vec<BigInt>> {
    let v: Value = serde_json::from_str(text)?;
    let arr = v.as_array().ok_or_else(|| Error::Parse("digits must be a JSON array".into()))?;
    let out = arr
        .iter()
        .map(|d| match d {
            Value::Number(n) => n.to_string().parse::<BigInt>().map_err(|_| Error::Parse(format!("digit {n} is not an integer"))),
            Value::String(s) => s.parse::<BigInt>().map_err(|_| Error::Parse(format!("digit {s:?} is not an integer"))),
            other => Err(Error::Parse(format!("bad digit {other}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    pad(out, len, BigInt::zero())
}

fn pad<T: Clone>(mut digits: Vec<T>, len: usize, zero: T) -> Result<Vec<T>> {
    if len == 0 {
        return Err(Error::Parse("--len must be at least 1".into()));
    }
    if digits.len() > len {
        return Err(Error::Parse(format!("{} digits given for length {len}", digits.len())));
    }
    digits.resize(len, zero);
    Ok(digits)
}

fn fp_json(x: &WittVector<PuiseuxPoly>) -> Value {
    let digits: Vec<Value> = x
        .digits()
        .iter()
        .map(|d| {
            if d.terms().keys().all(Zero::is_zero) {
                json!(d.constant_term())
            } else {
                d.to_json()
            }
        })
        .collect();
    Value::Array(digits)
}

fn int_json(digits: &[BigInt]) -> Value {
    Value::Array(
        digits
            .iter()
            .map(|d| match i64::try_from(d) {
                Ok(v) => json!(v),
                Err(_) => json!(d.to_string()),
            })
            .collect(),
    )
}

fn witt_cmd(a: WittArgs) -> Result<Value> {
    let need = |flag: &str, v: &Option<String>| {
        v.clone()
            .ok_or_else(|| Error::Parse(format!("--{flag} is required")))
    };
    if let WittOp::FromInt = a.op {
        let m: BigInt = need("m", &a.m)?
            .trim()
            .parse()
            .map_err(|_| Error::Parse("--m must be an integer".into()))?;
        return Ok(fp_json(&witt_from_integer(&m, a.p, a.len)?));
    }
    let x_text = need("x", &a.x)?;
    match a.ring {
        DigitRing::Fp => {
            let x = WittVector::new(a.p, fp_digits(a.p, a.len, &x_text)?)?;
            let y = || -> Result<WittVector<PuiseuxPoly>> { WittVector::new(a.p, fp_digits(a.p, a.len, &need("y", &a.y)?)?) };
            Ok(match a.op {
                WittOp::Add => fp_json(&x.add(&y()?)?),
                WittOp::Mul => fp_json(&x.mul(&y()?)?),
                WittOp::Neg => fp_json(&x.neg()?),
                WittOp::Frobenius => fp_json(&x.frobenius(1)?),
                WittOp::Norm => {
                    let n = witt_alpha_norm(&x, &radius_flag("alpha", &a.alpha)?, &radius_flag("radius", &a.radius)?)?;
                    json!({"norm": n.to_json()})
                }
                WittOp::Ghost => return Err(Error::Unsupported("ghost components need --ring z".into())),
                WittOp::FromInt => unreachable!("handled above"),
            })
        }
        DigitRing::Z => {
            let x = WittVector::new(a.p, int_digits(a.len, &x_text)?)?;
            let y = || -> Result<WittVector<BigInt>> { WittVector::new(a.p, int_digits(a.len, &need("y", &a.y)?)?) };
            Ok(match a.op {
                WittOp::Add => int_json(x.add(&y()?)?.digits()),
                WittOp::Mul => int_json(x.mul(&y()?)?.digits()),
                WittOp::Neg => int_json(x.neg()?.digits()),
                WittOp::Ghost => int_json(&ghost(&x)),
                WittOp::Frobenius | WittOp::Norm => {
                    return Err(Error::Unsupported("Frobenius and norms need --ring fp".into()))
                }
                WittOp::FromInt => unreachable!("handled above"),
            })
        }
    }
}

fn basechange_cmd(a: BasechangeArgs, stdin: &mut dyn Read) -> Result<Value> {
    let v = read_json(a.x.clone(), stdin)?;
    match a.op {
        BasechangeOp::Norm => {
            let e = F1Element::from_json(&v)?;
            let spec = gauss_spec(a.mode, &a.scalar, &a.radius)?;
            Ok(json!({"norm": bc_norm(&e, &spec)?.to_json(), "spec": spec.to_json()}))
        }
        BasechangeOp::Convolve => {
            let part = |k: &str| {
                v.get(k)
                    .ok_or_else(|| Error::Parse(format!("convolve input needs {k:?}")))
                    .and_then(F1Element::from_json)
            };
            Ok(convolve(&part("x")?, &part("y")?)?.to_json())
        }
        BasechangeOp::Cofinality => {
            let e = F1Element::from_json(&v)?;
            let rep = cofinality_check(
                &e,
                &radius_flag("rho", &a.rho)?,
                &radius_flag("rho-prime", &a.rho_prime)?,
                &parse_scalar(&a.scalar)?,
            )?;
            Ok(rep.to_json())
        }
    }
}

fn spectrum_cmd(a: SpectrumArgs) -> Result<Output> {
    match a.op {
        SpectrumOp::Export => {
            let overlays = a
                .overlay
                .iter()
                .map(|s| IntervalRingSpec::parse(s))
                .collect::<Result<Vec<_>>>()?;
            let format = match a.format {
                Format::Json => ExportFormat::Json,
                Format::Svg => ExportFormat::Svg,
            };
            let mut text = export_tree(a.max_prime, a.samples, &overlays, format);
            if !text.ends_with('\n') {
                text.push('\n');
            }
            Ok(Output::Text(text))
        }
        SpectrumOp::Eval => {
            let pt = SpectrumPoint::from_json(&serde_json::from_str(
                a.point.as_deref().ok_or_else(|| Error::Parse("--point is required".into()))?,
            )?)?;
            let n: BigInt = a
                .n
                .as_deref()
                .ok_or_else(|| Error::Parse("--n is required".into()))?
                .trim()
                .parse()
                .map_err(|_| Error::Parse("--n must be an integer".into()))?;
            Ok(Output::Json(json!({
                "point": pt.to_json(),
                "n": n.to_string(),
                "norm": eval_point(&pt, &n).to_json(),
            })))
        }
        SpectrumOp::Validate => {
            let pt = SpectrumPoint::from_json(&serde_json::from_str(
                a.point.as_deref().ok_or_else(|| Error::Parse("--point is required".into()))?,
            )?)?;
            let samples: Vec<BigInt> = (-a.bound..=a.bound).map(BigInt::from).collect();
            let rep = validate_point(&pt, &samples)?;
            Ok(Output::Json(json!({"point": pt.to_json(), "pairs_checked": rep.pairs_checked})))
        }
    }
}

fn verify_cmd(a: VerifyArgs) -> Result<Output> {
    let names: Vec<&str> = if a.suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&a.suite.as_str()) {
        vec![a.suite.as_str()]
    } else {
        return Err(Error::Parse(format!(
            "unknown suite {:?}; expected one of {} or all",
            a.suite,
            SUITES.join(", ")
        )));
    };
    let reports: Vec<SuiteReport> = names
        .iter()
        .map(|n| run_suite(n, a.seed))
        .collect::<Result<_>>()?;
    let passed = reports.iter().all(SuiteReport::passed);
    let doc = json!({
        "seed": a.seed,
        "passed": passed,
        "suites": reports.iter().map(SuiteReport::to_json).collect::<Vec<_>>(),
    });
    Ok(if passed { Output::Json(doc) } else { Output::Failed(doc) })
}

