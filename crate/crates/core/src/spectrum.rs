//! Points of the spectrum of Z along its branches, interval subrings,
//! validation of sampled seminorms, tree export and the complex strip
//! evaluation of monoid-ring elements.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::basechange::{Base, F1Element};
use crate::error::{Error, Result};
use crate::norm::{compensated_sum, NormValue};
use crate::rational::{format_rat, int, is_prime, parse_rat, primes_up_to, rat, to_f64, valuation, Rat};
use crate::scalars::GroundScalar;

/// The exponent on a prime branch; `Infinite` is the residue seminorm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Eps {
    Finite(Rat),
    Infinite,
}

impl Eps {
    fn label(&self) -> String {
        match self {
            Eps::Finite(e) => format_rat(e),
            Eps::Infinite => "inf".into(),
        }
    }

    /// Position along the branch in `(0, 1]`.
    fn position(&self) -> f64 {
        match self {
            Eps::Finite(e) => {
                let e = to_f64(e);
                e / (1.0 + e)
            }
            Eps::Infinite => 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpectrumPoint {
    Trivial,
    Prime { p: u64, eps: Eps },
    Arch { eps: Rat },
}

impl SpectrumPoint {
    pub fn prime(p: u64, eps: Rat) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidElement(format!("{p} is not prime")));
        }
        if !eps.is_positive() {
            return Err(Error::InvalidRadii(format!("ε = {} must be positive", format_rat(&eps))));
        }
        Ok(SpectrumPoint::Prime { p, eps: Eps::Finite(eps) })
    }

    pub fn residue(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidElement(format!("{p} is not prime")));
        }
        Ok(SpectrumPoint::Prime { p, eps: Eps::Infinite })
    }

    pub fn arch(eps: Rat) -> Result<Self> {
        if !eps.is_positive() || eps > Rat::one() {
            return Err(Error::InvalidRadii(format!("ε = {} must lie in (0, 1]", format_rat(&eps))));
        }
        Ok(SpectrumPoint::Arch { eps })
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self, SpectrumPoint::Arch { .. })
    }

    pub fn label(&self) -> String {
        match self {
            SpectrumPoint::Trivial => "trivial".into(),
            SpectrumPoint::Prime { p, eps } => format!("p={p},eps={}", eps.label()),
            SpectrumPoint::Arch { eps } => format!("inf,eps={}", format_rat(eps)),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            SpectrumPoint::Trivial => json!({"branch": "trivial"}),
            SpectrumPoint::Prime { p, eps } => json!({"branch": "prime", "p": p, "eps": eps.label()}),
            SpectrumPoint::Arch { eps } => json!({"branch": "arch", "eps": format_rat(eps)}),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let eps = || -> Result<String> {
            match v.get("eps") {
                Some(Value::String(s)) => Ok(s.clone()),
                Some(Value::Number(n)) => Ok(n.to_string()),
                _ => Err(Error::Parse("point needs eps".into())),
            }
        };
        match v.get("branch").and_then(Value::as_str) {
            Some("trivial") => Ok(SpectrumPoint::Trivial),
            Some("prime") => {
                let p = v.get("p").and_then(Value::as_u64).ok_or_else(|| Error::Parse("prime point needs p".into()))?;
                match eps()?.as_str() {
                    "inf" => Self::residue(p),
                    e => Self::prime(p, parse_rat(e)?),
                }
            }
            Some("arch") => Self::arch(parse_rat(&eps()?)?),
            _ => Err(Error::Parse("branch must be trivial, prime or arch".into())),
        }
    }
}

pub fn eval_point(pt: &SpectrumPoint, n: &BigInt) -> NormValue {
    if n.is_zero() {
        return NormValue::zero();
    }
    match pt {
        SpectrumPoint::Trivial => NormValue::one(),
        SpectrumPoint::Prime { p, eps: Eps::Finite(e) } => {
            let v = valuation(n, *p).expect("nonzero") as i64;
            NormValue::power(&int(*p as i64), &(-e * int(v))).expect("positive base")
        }
        SpectrumPoint::Prime { p, eps: Eps::Infinite } => {
            if (n % BigInt::from(*p)).is_zero() {
                NormValue::zero()
            } else {
                NormValue::one()
            }
        }
        SpectrumPoint::Arch { eps } => NormValue::from_rat(&Rat::from_integer(n.abs()))
            .expect("positive")
            .pow(eps)
            .expect("nonzero base"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub pairs_checked: usize,
}

/// Multiplicativity and the boundedness clause for an arbitrary evaluator;
/// `archimedean` selects `|n| <= |n|_∞` instead of `|n| <= 1`.
pub fn validate_with(eval: impl Fn(&BigInt) -> NormValue, archimedean: bool, samples: &[BigInt]) -> Result<ValidationReport> {
    let values: Vec<NormValue> = samples.iter().map(&eval).collect();
    for (n, v) in samples.iter().zip(&values) {
        let bound = if archimedean {
            NormValue::from_rat(&Rat::from_integer(n.abs()))?
        } else {
            NormValue::one()
        };
        if !v.le(&bound) {
            return Err(Error::CounterexampleFound(format!("|{n}| = {v} exceeds the bound {bound}")));
        }
    }
    let mut pairs = 0;
    for (a, va) in samples.iter().zip(&values) {
        for (b, vb) in samples.iter().zip(&values) {
            let ab = eval(&(a * b));
            let prod = va.mul(vb);
            if !ab.approx_eq(&prod) {
                return Err(Error::CounterexampleFound(format!("|{a}·{b}| = {ab} but |{a}||{b}| = {prod}")));
            }
            pairs += 1;
        }
    }
    Ok(ValidationReport { pairs_checked: pairs })
}

pub fn validate_point(pt: &SpectrumPoint, samples: &[BigInt]) -> Result<ValidationReport> {
    validate_with(|n| eval_point(pt, n), pt.is_archimedean(), samples)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntervalKind {
    Padic(u64),
    Real,
    /// The integral ring `(Z_p)_{(r1, r2)}`, which only depends on `r2`.
    IntegralPadic(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalRingSpec {
    pub kind: IntervalKind,
    pub r1: Rat,
    pub r2: Rat,
    pub closed_left: bool,
    pub closed_right: bool,
}

impl IntervalRingSpec {
    pub fn open(kind: IntervalKind, r1: Rat, r2: Rat) -> Result<Self> {
        let spec = IntervalRingSpec {
            kind,
            r1,
            r2,
            closed_left: false,
            closed_right: false,
        };
        spec.check()?;
        Ok(spec)
    }

    fn check(&self) -> Result<()> {
        if self.r1.is_negative() || self.r1 >= self.r2 {
            return Err(Error::InvalidRadii(format!(
                "need 0 <= r1 < r2, got {} and {}",
                format_rat(&self.r1),
                format_rat(&self.r2)
            )));
        }
        match self.kind {
            IntervalKind::Padic(p) | IntervalKind::IntegralPadic(p) if !is_prime(p) => {
                Err(Error::InvalidElement(format!("{p} is not prime")))
            }
            _ => Ok(()),
        }
    }

    /// Parses `padic:3:0.5:2`, `real:a:b` or `zp:3:a:b`. A leading `[` on
    /// the left endpoint or a trailing `]` on the right one closes it.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let prime = |x: &str| -> Result<u64> { x.parse().map_err(|_| Error::Parse(format!("bad prime {x:?}"))) };
        let (kind, a, b) = match parts.as_slice() {
            ["padic", p, a, b] => (IntervalKind::Padic(prime(p)?), *a, *b),
            ["zp", p, a, b] => (IntervalKind::IntegralPadic(prime(p)?), *a, *b),
            ["real", a, b] => (IntervalKind::Real, *a, *b),
            _ => return Err(Error::Parse(format!("overlay {s:?} is not kind:…:r1:r2"))),
        };
        let closed_left = a.starts_with('[');
        let closed_right = b.ends_with(']');
        let spec = IntervalRingSpec {
            kind,
            r1: parse_rat(a.trim_start_matches(['[', '(']))?,
            r2: parse_rat(b.trim_end_matches([']', ')']))?,
            closed_left,
            closed_right,
        };
        spec.check()?;
        Ok(spec)
    }

    pub fn label(&self) -> String {
        let l = if self.closed_left { "[" } else { "" };
        let r = if self.closed_right { "]" } else { "" };
        let (r1, r2) = (format_rat(&self.r1), format_rat(&self.r2));
        match self.kind {
            IntervalKind::Padic(p) => format!("padic:{p}:{l}{r1}:{r2}{r}"),
            IntervalKind::IntegralPadic(p) => format!("zp:{p}:{l}{r1}:{r2}{r}"),
            IntervalKind::Real => format!("real:{l}{r1}:{r2}{r}"),
        }
    }

    fn in_range(&self, e: &Rat, ignore_left: bool) -> bool {
        let left = ignore_left || (if self.closed_left { *e >= self.r1 } else { *e > self.r1 });
        let right = if self.closed_right { *e <= self.r2 } else { *e < self.r2 };
        left && right
    }

    /// Whether the point is a bounded seminorm of the interval ring.
    pub fn contains(&self, pt: &SpectrumPoint) -> bool {
        match (&self.kind, pt) {
            (IntervalKind::Padic(q), SpectrumPoint::Prime { p, eps: Eps::Finite(e) }) => q == p && self.in_range(e, false),
            (IntervalKind::IntegralPadic(q), SpectrumPoint::Prime { p, eps: Eps::Finite(e) }) => {
                q == p && self.in_range(e, true)
            }
            (IntervalKind::IntegralPadic(_), SpectrumPoint::Trivial) => true,
            (IntervalKind::Real, SpectrumPoint::Arch { eps }) => self.in_range(eps, false),
            _ => false,
        }
    }

    fn branch_label(&self) -> String {
        match self.kind {
            IntervalKind::Padic(p) | IntervalKind::IntegralPadic(p) => p.to_string(),
            IntervalKind::Real => "inf".into(),
        }
    }

    /// The highlighted part of the branch, in branch positions.
    fn segment(&self) -> (f64, f64) {
        let pos = |e: &Rat| {
            let e = to_f64(e);
            e / (1.0 + e)
        };
        let arch = |e: &Rat| to_f64(&e.clone().min(Rat::one())) / 2.0;
        match self.kind {
            IntervalKind::Padic(_) => (pos(&self.r1), pos(&self.r2)),
            IntervalKind::IntegralPadic(_) => (0.0, pos(&self.r2)),
            IntervalKind::Real => (arch(&self.r1), arch(&self.r2)),
        }
    }
}

/// The sampled exponents of a branch: `i/(s-i)` for `i < s` and the
/// residue tip on prime branches, `i/s` on the archimedean branch.
pub fn branch_samples(branch: Option<u64>, samples: usize) -> Vec<SpectrumPoint> {
    let s = samples.max(1) as i64;
    match branch {
        Some(p) => {
            let mut out: Vec<SpectrumPoint> = (1..s)
                .map(|i| SpectrumPoint::Prime { p, eps: Eps::Finite(rat(i, s - i)) })
                .collect();
            out.push(SpectrumPoint::Prime { p, eps: Eps::Infinite });
            out
        }
        None => (1..=s).map(|i| SpectrumPoint::Arch { eps: rat(i, s) }).collect(),
    }
}

fn position(pt: &SpectrumPoint) -> f64 {
    match pt {
        SpectrumPoint::Trivial => 0.0,
        SpectrumPoint::Prime { eps, .. } => eps.position(),
        // ε ∈ (0, 1] drawn on the same scale as ε/(1+ε), which tops out at 1/2.
        SpectrumPoint::Arch { eps } => to_f64(eps) / 2.0,
    }
}

/// FNV-1a, used to spread branch angles.
fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn angle_of(label: &str) -> f64 {
    (fnv1a(label) % 3600) as f64 / 10.0
}

const CENTER: f64 = 260.0;
const INNER: f64 = 30.0;
const REACH: f64 = 200.0;

fn coords(angle_deg: f64, pos: f64) -> (f64, f64) {
    let a = angle_deg.to_radians();
    let rad = INNER + REACH * pos;
    (CENTER + rad * a.cos(), CENTER - rad * a.sin())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Svg,
}

impl ExportFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ExportFormat::Json),
            "svg" => Ok(ExportFormat::Svg),
            _ => Err(Error::Parse(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Branch {
    pub label: String,
    pub prime: Option<u64>,
    pub angle: f64,
    pub points: Vec<SpectrumPoint>,
}

#[derive(Clone, Debug)]
pub struct SpectrumTree {
    pub branches: Vec<Branch>,
    pub overlays: Vec<IntervalRingSpec>,
}

pub fn build_tree(max_prime: u64, samples_per_branch: usize, overlays: &[IntervalRingSpec]) -> SpectrumTree {
    let mut branches: Vec<Branch> = primes_up_to(max_prime)
        .into_iter()
        .map(|p| Branch {
            label: p.to_string(),
            prime: Some(p),
            angle: angle_of(&p.to_string()),
            points: branch_samples(Some(p), samples_per_branch),
        })
        .collect();
    branches.push(Branch {
        label: "inf".into(),
        prime: None,
        angle: angle_of("inf"),
        points: branch_samples(None, samples_per_branch),
    });
    SpectrumTree {
        branches,
        overlays: overlays.to_vec(),
    }
}

fn f3(x: f64) -> String {
    format!("{x:.3}")
}

impl SpectrumTree {
    pub fn all_points(&self) -> impl Iterator<Item = &SpectrumPoint> {
        std::iter::once(&SpectrumPoint::Trivial).chain(self.branches.iter().flat_map(|b| b.points.iter()))
    }

    pub fn to_json(&self) -> Value {
        let overlay_ids = |pt: &SpectrumPoint| -> Vec<usize> {
            self.overlays
                .iter()
                .enumerate()
                .filter(|(_, o)| o.contains(pt))
                .map(|(i, _)| i)
                .collect()
        };
        let branches: Vec<Value> = self
            .branches
            .iter()
            .map(|b| {
                let points: Vec<Value> = b
                    .points
                    .iter()
                    .map(|pt| {
                        let (x, y) = coords(b.angle, position(pt));
                        let mut v = pt.to_json();
                        let obj = v.as_object_mut().expect("object");
                        obj.insert("position".into(), json!(f3(position(pt))));
                        obj.insert("x".into(), json!(f3(x)));
                        obj.insert("y".into(), json!(f3(y)));
                        obj.insert("overlays".into(), json!(overlay_ids(pt)));
                        v
                    })
                    .collect();
                json!({"label": b.label, "angle": f3(b.angle), "points": points})
            })
            .collect();
        let overlays: Vec<Value> = self
            .overlays
            .iter()
            .map(|o| {
                let (lo, hi) = o.segment();
                json!({"spec": o.label(), "branch": o.branch_label(), "segment": [f3(lo), f3(hi)]})
            })
            .collect();
        json!({
            "center": {"label": "trivial", "overlays": overlay_ids(&SpectrumPoint::Trivial)},
            "branches": branches,
            "overlays": overlays,
        })
    }

    pub fn to_svg(&self) -> String {
        let mut s = String::new();
        let size = 2.0 * CENTER;
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
        );
        let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
        for b in &self.branches {
            let (x0, y0) = coords(b.angle, 0.0);
            let (x1, y1) = coords(b.angle, 1.0);
            let colour = if b.prime.is_some() { "#555555" } else { "#1f4e9c" };
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{colour}" stroke-width="1.5"/>"#,
                f3(x0),
                f3(y0),
                f3(x1),
                f3(y1)
            );
            let (lx, ly) = coords(b.angle, 1.08);
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" font-family="monospace" font-size="12" text-anchor="middle">{}</text>"#,
                f3(lx),
                f3(ly),
                b.label
            );
        }
        for o in &self.overlays {
            let Some(b) = self.branches.iter().find(|b| b.label == o.branch_label()) else {
                continue;
            };
            let (lo, hi) = o.segment();
            let (x0, y0) = coords(b.angle, lo.min(1.0));
            let (x1, y1) = coords(b.angle, hi.min(1.0));
            let _ = writeln!(
                s,
                r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#d9531e" stroke-width="6" stroke-opacity="0.6"><title>{}</title></line>"##,
                f3(x0),
                f3(y0),
                f3(x1),
                f3(y1),
                o.label()
            );
        }
        for b in &self.branches {
            for pt in &b.points {
                let (x, y) = coords(b.angle, position(pt));
                let fill = if self.overlays.iter().any(|o| o.contains(pt)) { "#d9531e" } else { "#222222" };
                let _ = writeln!(
                    s,
                    r#"<circle cx="{}" cy="{}" r="3" fill="{fill}"><title>{}</title></circle>"#,
                    f3(x),
                    f3(y),
                    pt.label()
                );
            }
        }
        let _ = writeln!(
            s,
            r##"<circle cx="{c}" cy="{c}" r="6" fill="#000000"><title>trivial</title></circle>"##,
            c = f3(CENTER)
        );
        s.push_str("</svg>\n");
        s
    }
}

pub fn export_tree(max_prime: u64, samples_per_branch: usize, overlays: &[IntervalRingSpec], format: ExportFormat) -> String {
    let tree = build_tree(max_prime, samples_per_branch, overlays);
    match format {
        ExportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&tree.to_json()).expect("serializable");
            s.push('\n');
            s
        }
        ExportFormat::Svg => tree.to_svg(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexEval {
    pub value: Complex64,
    /// ℓ¹ norm of the element at radius `e^(Re z)`.
    pub bound: f64,
}

fn complex_coeff(c: &GroundScalar) -> Result<Complex64> {
    match c {
        GroundScalar::Complex { value, .. } => Ok(*value),
        GroundScalar::Real { value, .. } => Ok(Complex64::new(*value, 0.0)),
        other => Err(Error::TagMismatch(format!("{} is not a real or complex coefficient", other.tag()))),
    }
}

/// `Σ a_q e^(q z)` with the bound `|f(z)| <= Σ |a_q| e^(q Re z)`.
pub fn complex_eval(f: &F1Element, z: Complex64) -> Result<ComplexEval> {
    if !matches!(f.base(), Base::Monoid(_)) {
        return Err(Error::Unsupported("complex evaluation needs an exponent monoid".into()));
    }
    let mut value = Complex64::new(0.0, 0.0);
    let mut weights = Vec::with_capacity(f.terms().len());
    for (k, c) in f.terms() {
        let q = to_f64(k.exp().expect("monoid key"));
        let a = complex_coeff(c)?;
        value += a * (z * q).exp();
        weights.push(a.norm() * (q * z.re).exp());
    }
    let bound = compensated_sum(weights);
    if value.norm() > bound + 1e-9 {
        return Err(Error::InternalError(format!("|f(z)| = {} exceeds the ℓ¹ bound {bound}", value.norm())));
    }
    Ok(ComplexEval { value, bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoids::{Carrier, GeometricMonoid};

    fn samples() -> Vec<BigInt> {
        (-50..=50).map(BigInt::from).collect()
    }

    #[test]
    fn eval_examples() {
        let n = BigInt::from(12);
        assert_eq!(eval_point(&SpectrumPoint::prime(2, int(1)).unwrap(), &n).to_rat(), Some(rat(1, 4)));
        let arch = eval_point(&SpectrumPoint::arch(rat(1, 2)).unwrap(), &n);
        assert!((arch.to_f64() - 12f64.sqrt()).abs() < 1e-12);
        assert_eq!(eval_point(&SpectrumPoint::Trivial, &n).to_rat(), Some(int(1)));
        assert!(eval_point(&SpectrumPoint::residue(3).unwrap(), &n).is_zero());
        assert!(eval_point(&SpectrumPoint::Trivial, &BigInt::zero()).is_zero());
        assert!(SpectrumPoint::arch(int(2)).is_err());
        assert!(SpectrumPoint::prime(4, int(1)).is_err());
    }

    #[test]
    fn validation_examples() {
        let s: Vec<BigInt> = [2, 3, 6, 9].iter().map(|&x| BigInt::from(x)).collect();
        let rep = validate_point(&SpectrumPoint::prime(3, int(2)).unwrap(), &s).unwrap();
        assert_eq!(rep.pairs_checked, 16);
        validate_point(&SpectrumPoint::Trivial, &samples()).unwrap();
        // |n| = 1 + v_2(n) is not multiplicative.
        let fake = |n: &BigInt| {
            if n.is_zero() {
                NormValue::zero()
            } else {
                NormValue::from_rat(&rat(1, 1 + valuation(n, 2).unwrap() as i64)).unwrap()
            }
        };
        assert!(matches!(validate_with(fake, false, &s), Err(Error::CounterexampleFound(_))));
    }

    #[test]
    fn branch_dichotomy() {
        for p in [2u64, 3, 5] {
            for n in 1..40i64 {
                let n = BigInt::from(n);
                let vals: Vec<NormValue> = [rat(1, 3), int(1), int(3)]
                    .into_iter()
                    .map(|e| eval_point(&SpectrumPoint::prime(p, e).unwrap(), &n))
                    .collect();
                if (&n % BigInt::from(p)).is_zero() {
                    assert!(vals.windows(2).all(|w| w[1].le(&w[0]) && !w[1].approx_eq(&w[0])));
                } else {
                    assert!(vals.iter().all(|v| v.exact_eq(&NormValue::one()) == Some(true)));
                }
            }
        }
    }

    #[test]
    fn interval_membership() {
        let o = IntervalRingSpec::parse("padic:3:0.5:2").unwrap();
        assert!(o.contains(&SpectrumPoint::prime(3, int(1)).unwrap()));
        assert!(!o.contains(&SpectrumPoint::prime(3, rat(1, 2)).unwrap()));
        assert!(!o.contains(&SpectrumPoint::prime(2, int(1)).unwrap()));
        let closed = IntervalRingSpec::parse("padic:3:[0.5:2]").unwrap();
        assert!(closed.contains(&SpectrumPoint::prime(3, rat(1, 2)).unwrap()));
        let zp = IntervalRingSpec::parse("zp:3:1:2").unwrap();
        let zp_low = IntervalRingSpec::parse("zp:3:0:2").unwrap();
        for e in [rat(1, 5), rat(1, 2), rat(3, 2)] {
            let pt = SpectrumPoint::prime(3, e).unwrap();
            assert_eq!(zp.contains(&pt), zp_low.contains(&pt));
            assert!(zp.contains(&pt));
        }
        assert!(zp.contains(&SpectrumPoint::Trivial));
        let real = IntervalRingSpec::parse("real:0:1/2").unwrap();
        assert!(real.contains(&SpectrumPoint::arch(rat(1, 4)).unwrap()));
        assert!(!real.contains(&SpectrumPoint::arch(int(1)).unwrap()));
        assert!(IntervalRingSpec::parse("padic:3:2:1").is_err());
        assert!(IntervalRingSpec::parse("cube:1:2").is_err());
    }

    #[test]
    fn export_examples() {
        let doc = export_tree(5, 4, &[], ExportFormat::Json);
        let v: Value = serde_json::from_str(&doc).unwrap();
        let labels: Vec<&str> = v["branches"].as_array().unwrap().iter().map(|b| b["label"].as_str().unwrap()).collect();
        assert_eq!(labels, ["2", "3", "5", "inf"]);
        let overlay = IntervalRingSpec::parse("padic:3:0.5:2").unwrap();
        let doc = export_tree(5, 4, std::slice::from_ref(&overlay), ExportFormat::Json);
        let v: Value = serde_json::from_str(&doc).unwrap();
        assert_eq!(v["overlays"][0]["branch"], "3");
        let three = &v["branches"][1]["points"];
        let highlighted: Vec<&Value> = three.as_array().unwrap().iter().filter(|p| p["overlays"] == json!([0])).collect();
        // ε ∈ {1/3, 1, 3, ∞}; only ε = 1 lies in (1/2, 2).
        assert_eq!(highlighted.len(), 1);
        assert_eq!(highlighted[0]["eps"], "1");
        let a = export_tree(7, 9, std::slice::from_ref(&overlay), ExportFormat::Svg);
        let b = export_tree(7, 9, &[overlay], ExportFormat::Svg);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg") && a.ends_with("</svg>\n"));
    }

    #[test]
    fn sampled_points_are_valid() {
        let tree = build_tree(7, 5, &[]);
        let s: Vec<BigInt> = (-12..=12).map(BigInt::from).collect();
        for pt in tree.all_points() {
            validate_point(pt, &s).unwrap();
        }
    }

    #[test]
    fn complex_examples() {
        let m = GeometricMonoid::single(Carrier::QPos, &rat(1, 2)).unwrap();
        let one = GroundScalar::Complex { eps: int(1), value: Complex64::new(1.0, 0.0) };
        let ln2 = std::f64::consts::LN_2;
        let x = F1Element::over_monoid(&m, [(int(1), one.clone())]).unwrap();
        let e = complex_eval(&x, Complex64::new(-ln2, 0.0)).unwrap();
        assert!((e.value.re - 0.5).abs() < 1e-12 && (e.bound - 0.5).abs() < 1e-12);
        let unit = F1Element::over_monoid(&m, [(int(0), one.clone())]).unwrap();
        for z in [Complex64::new(-1.0, 3.0), Complex64::new(-0.1, -7.0)] {
            let e = complex_eval(&unit, z).unwrap();
            assert!((e.value - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
        let f = F1Element::over_monoid(&m, [(rat(1, 2), one.clone()), (int(1), one)]).unwrap();
        let e = complex_eval(&f, Complex64::new(-2.0 * ln2, 0.0)).unwrap();
        assert!((e.value.re - 0.75).abs() < 1e-12 && (e.bound - 0.75).abs() < 1e-12);
    }
}
