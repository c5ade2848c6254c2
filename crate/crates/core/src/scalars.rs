//! Ground Banach rings: F_p and Q with trivial norms, Q_p at a fixed
//! absolute precision, Z with a power of the absolute value, and real or
//! complex floats with `|x|^ε`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::norm::NormValue;
use crate::rational::{format_rat, int, serde_rat, to_f64, valuation, Rat};

/// Default number of p-adic digits; `F1AN_PRECISION` overrides it.
pub const DEFAULT_PRECISION: i64 = 32;

pub fn default_precision() -> i64 {
    std::env::var("F1AN_PRECISION")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(DEFAULT_PRECISION)
}

fn p_pow(p: u64, k: i64) -> BigInt {
    debug_assert!(k >= 0);
    BigInt::from(p).pow(k as u32)
}

/// An element of Q_p known modulo `p^abs_prec`: either `p^val * unit` with
/// `unit` a p-adic unit reduced modulo `p^(abs_prec - val)`, or
/// indistinguishable from zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Padic {
    p: u64,
    abs_prec: i64,
    val: Option<i64>,
    unit: BigInt,
}

impl Padic {
    pub fn zero(p: u64, abs_prec: i64) -> Self {
        Padic {
            p,
            abs_prec,
            val: None,
            unit: BigInt::zero(),
        }
    }

    pub fn from_integer(m: &BigInt, p: u64, abs_prec: i64) -> Self {
        Self::from_rat(&Rat::from_integer(m.clone()), p, abs_prec)
    }

    pub fn from_i64(m: i64, p: u64, abs_prec: i64) -> Self {
        Self::from_integer(&BigInt::from(m), p, abs_prec)
    }

    pub fn from_rat(q: &Rat, p: u64, abs_prec: i64) -> Self {
        if q.is_zero() {
            return Self::zero(p, abs_prec);
        }
        let vn = valuation(q.numer(), p).expect("nonzero") as i64;
        let vd = valuation(q.denom(), p).expect("nonzero") as i64;
        let v = vn - vd;
        if v >= abs_prec {
            return Self::zero(p, abs_prec);
        }
        let num = q.numer() / p_pow(p, vn);
        let den = q.denom() / p_pow(p, vd);
        let modulus = p_pow(p, abs_prec - v);
        let inv = mod_inverse(&den, &modulus).expect("denominator is a unit");
        Self::normalized(p, abs_prec, v, (num * inv).mod_floor(&modulus))
    }

    /// Builds `p^shift * m` known modulo `p^abs_prec`, stripping factors of
    /// `p` from `m` to find the valuation.
    fn normalized(p: u64, abs_prec: i64, shift: i64, m: BigInt) -> Self {
        if shift >= abs_prec {
            return Self::zero(p, abs_prec);
        }
        let modulus = p_pow(p, abs_prec - shift);
        let m = m.mod_floor(&modulus);
        if m.is_zero() {
            return Self::zero(p, abs_prec);
        }
        let extra = valuation(&m, p).expect("nonzero") as i64;
        let v = shift + extra;
        if v >= abs_prec {
            return Self::zero(p, abs_prec);
        }
        let unit = (m / p_pow(p, extra)).mod_floor(&p_pow(p, abs_prec - v));
        Padic {
            p,
            abs_prec,
            val: Some(v),
            unit,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn abs_prec(&self) -> i64 {
        self.abs_prec
    }

    /// Valuation, or `None` when the element is indistinguishable from 0.
    pub fn valuation(&self) -> Option<i64> {
        self.val
    }

    pub fn is_zero(&self) -> bool {
        self.val.is_none()
    }

    /// `p^shift * m` with the shift at which [`Self::digits`] starts.
    fn scaled(&self, shift: i64) -> BigInt {
        match self.val {
            None => BigInt::zero(),
            Some(v) => &self.unit * p_pow(self.p, v - shift),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let abs_prec = self.abs_prec.min(other.abs_prec);
        let shift = self.val.unwrap_or(abs_prec).min(other.val.unwrap_or(abs_prec)).min(abs_prec);
        let m = self.scaled(shift) + other.scaled(shift);
        Self::normalized(self.p, abs_prec, shift, m)
    }

    pub fn neg(&self) -> Self {
        match self.val {
            None => self.clone(),
            Some(v) => Self::normalized(self.p, self.abs_prec, v, -self.unit.clone()),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let abs_prec = match (self.val, other.val) {
            (Some(v1), Some(v2)) => (self.abs_prec + v2).min(other.abs_prec + v1),
            (None, Some(v2)) => self.abs_prec + v2,
            (Some(v1), None) => other.abs_prec + v1,
            (None, None) => self.abs_prec + other.abs_prec,
        };
        match (self.val, other.val) {
            (Some(v1), Some(v2)) => Self::normalized(self.p, abs_prec, v1 + v2, &self.unit * &other.unit),
            _ => Self::zero(self.p, abs_prec),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let Some(v) = self.val else {
            return Err(Error::DivisionByZero);
        };
        let rel = self.abs_prec - v;
        let modulus = p_pow(self.p, rel);
        let inv = mod_inverse(&self.unit, &modulus).expect("units are invertible");
        Ok(Self::normalized(self.p, -v + rel, -v, inv))
    }

    /// Offset of the first digit: `min(0, val)`.
    pub fn offset(&self) -> i64 {
        self.val.map_or(0, |v| v.min(0))
    }

    /// Base-`p` digits of the coefficients of `p^offset, ..., p^(abs_prec-1)`.
    pub fn digits(&self) -> Vec<u64> {
        let offset = self.offset();
        let len = (self.abs_prec - offset).max(0) as usize;
        let mut m = self.scaled(offset);
        let p = BigInt::from(self.p);
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            let (q, r) = m.div_mod_floor(&p);
            out.push(r.to_u64().expect("digit below p"));
            m = q;
        }
        out
    }

    pub fn from_digits(p: u64, abs_prec: i64, offset: i64, digits: &[u64]) -> Result<Self> {
        if let Some(d) = digits.iter().find(|&&d| d >= p) {
            return Err(Error::Parse(format!("digit {d} is not below p = {p}")));
        }
        if offset > 0 {
            return Err(Error::Parse("digit offset must be <= 0".into()));
        }
        let mut m = BigInt::zero();
        for d in digits.iter().rev() {
            m = m * BigInt::from(p) + BigInt::from(*d);
        }
        Ok(Self::normalized(p, abs_prec, offset, m))
    }

    /// A rational representative of the class (exact for inputs of small height).
    pub fn to_rat(&self) -> Rat {
        match self.val {
            None => Rat::zero(),
            Some(v) => {
                let unit = Rat::from_integer(self.unit.clone());
                if v >= 0 {
                    unit * Rat::from_integer(p_pow(self.p, v))
                } else {
                    unit / Rat::from_integer(p_pow(self.p, -v))
                }
            }
        }
    }

    pub fn norm(&self) -> Result<NormValue> {
        self.norm_pow(&Rat::one())
    }

    /// `|x|_p^s = p^(-s v(x))`.
    pub fn norm_pow(&self, s: &Rat) -> Result<NormValue> {
        match self.val {
            None => Err(Error::PrecisionExhausted(format!(
                "element is 0 modulo {}^{}",
                self.p, self.abs_prec
            ))),
            Some(v) => NormValue::power(&int(self.p as i64), &(-s * int(v))),
        }
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// How a scalar's base norm is raised: as is, to one power, or the max of
/// two powers.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarNormSpec {
    Plain,
    Exponent(Rat),
    TwoSided(Rat, Rat),
}

impl ScalarNormSpec {
    pub fn two_sided(s1: Rat, s2: Rat) -> Result<Self> {
        if !s1.is_positive() || s1 >= s2 {
            return Err(Error::InvalidNorm(format!(
                "two-sided norm needs 0 < s1 < s2, got {} and {}",
                format_rat(&s1),
                format_rat(&s2)
            )));
        }
        Ok(ScalarNormSpec::TwoSided(s1, s2))
    }

    pub fn apply(&self, base: &NormValue) -> Result<NormValue> {
        match self {
            ScalarNormSpec::Plain => Ok(base.clone()),
            ScalarNormSpec::Exponent(s) => base.pow(s),
            ScalarNormSpec::TwoSided(s1, s2) => Ok(base.pow(s1)?.max(&base.pow(s2)?)),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            ScalarNormSpec::Plain => json!({"kind": "plain"}),
            ScalarNormSpec::Exponent(s) => json!({"kind": "exponent", "s": serde_rat::to_value(s)}),
            ScalarNormSpec::TwoSided(a, b) => {
                json!({"kind": "two-sided", "s1": serde_rat::to_value(a), "s2": serde_rat::to_value(b)})
            }
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| {
            v.get(k)
                .ok_or_else(|| Error::Parse(format!("scalar norm spec needs {k}")))
                .and_then(serde_rat::from_value)
        };
        match v.get("kind").and_then(Value::as_str).unwrap_or("plain") {
            "plain" => Ok(ScalarNormSpec::Plain),
            "exponent" => Ok(ScalarNormSpec::Exponent(field("s")?)),
            "two-sided" => Self::two_sided(field("s1")?, field("s2")?),
            k => Err(Error::Parse(format!("unknown scalar norm kind {k:?}"))),
        }
    }
}

/// A tagged element of one of the supported ground rings.
#[derive(Clone, Debug, PartialEq)]
pub enum GroundScalar {
    PrimeField { p: u64, value: u64 },
    Padic(Padic),
    ArchInt { beta: Rat, value: BigInt },
    RationalTrivial(Rat),
    Real { eps: Rat, value: f64 },
    Complex { eps: Rat, value: Complex64 },
}

impl GroundScalar {
    pub fn fp(p: u64, value: i64) -> Self {
        GroundScalar::PrimeField {
            p,
            value: value.rem_euclid(p as i64) as u64,
        }
    }

    pub fn padic(m: i64, p: u64) -> Self {
        GroundScalar::Padic(Padic::from_i64(m, p, default_precision()))
    }

    pub fn tag(&self) -> String {
        match self {
            GroundScalar::PrimeField { p, .. } => format!("F_{p}"),
            GroundScalar::Padic(x) => format!("Q_{}", x.p),
            GroundScalar::ArchInt { beta, .. } => format!("Z^{}", format_rat(beta)),
            GroundScalar::RationalTrivial(_) => "Q_triv".into(),
            GroundScalar::Real { eps, .. } => format!("R^{}", format_rat(eps)),
            GroundScalar::Complex { eps, .. } => format!("C^{}", format_rat(eps)),
        }
    }

    pub fn same_ring(&self, other: &Self) -> bool {
        self.tag() == other.tag()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(Error::TagMismatch(format!("{} vs {}", self.tag(), other.tag())))
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            GroundScalar::PrimeField { value, .. } => *value == 0,
            GroundScalar::Padic(x) => x.is_zero(),
            GroundScalar::ArchInt { value, .. } => value.is_zero(),
            GroundScalar::RationalTrivial(q) => q.is_zero(),
            GroundScalar::Real { value, .. } => *value == 0.0,
            GroundScalar::Complex { value, .. } => *value == Complex64::new(0.0, 0.0),
        }
    }

    /// The element `n · 1` of the same ring.
    pub fn from_int_like(&self, n: i64) -> Self {
        match self {
            GroundScalar::PrimeField { p, .. } => Self::fp(*p, n),
            GroundScalar::Padic(x) => GroundScalar::Padic(Padic::from_i64(n, x.p, x.abs_prec)),
            GroundScalar::ArchInt { beta, .. } => GroundScalar::ArchInt {
                beta: beta.clone(),
                value: BigInt::from(n),
            },
            GroundScalar::RationalTrivial(_) => GroundScalar::RationalTrivial(int(n)),
            GroundScalar::Real { eps, .. } => GroundScalar::Real {
                eps: eps.clone(),
                value: n as f64,
            },
            GroundScalar::Complex { eps, .. } => GroundScalar::Complex {
                eps: eps.clone(),
                value: Complex64::new(n as f64, 0.0),
            },
        }
    }

    pub fn zero_like(&self) -> Self {
        self.from_int_like(0)
    }

    pub fn one_like(&self) -> Self {
        self.from_int_like(1)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(match (self, other) {
            (GroundScalar::PrimeField { p, value: a }, GroundScalar::PrimeField { value: b, .. }) => {
                GroundScalar::PrimeField { p: *p, value: (a + b) % p }
            }
            (GroundScalar::Padic(a), GroundScalar::Padic(b)) => GroundScalar::Padic(a.add(b)),
            (GroundScalar::ArchInt { beta, value: a }, GroundScalar::ArchInt { value: b, .. }) => {
                GroundScalar::ArchInt { beta: beta.clone(), value: a + b }
            }
            (GroundScalar::RationalTrivial(a), GroundScalar::RationalTrivial(b)) => GroundScalar::RationalTrivial(a + b),
            (GroundScalar::Real { eps, value: a }, GroundScalar::Real { value: b, .. }) => {
                GroundScalar::Real { eps: eps.clone(), value: a + b }
            }
            (GroundScalar::Complex { eps, value: a }, GroundScalar::Complex { value: b, .. }) => {
                GroundScalar::Complex { eps: eps.clone(), value: a + b }
            }
            _ => unreachable!("tags checked"),
        })
    }

    pub fn neg(&self) -> Self {
        match self {
            GroundScalar::PrimeField { p, value } => GroundScalar::PrimeField { p: *p, value: (p - value) % p },
            GroundScalar::Padic(a) => GroundScalar::Padic(a.neg()),
            GroundScalar::ArchInt { beta, value } => GroundScalar::ArchInt { beta: beta.clone(), value: -value },
            GroundScalar::RationalTrivial(a) => GroundScalar::RationalTrivial(-a),
            GroundScalar::Real { eps, value } => GroundScalar::Real { eps: eps.clone(), value: -value },
            GroundScalar::Complex { eps, value } => GroundScalar::Complex { eps: eps.clone(), value: -value },
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(match (self, other) {
            (GroundScalar::PrimeField { p, value: a }, GroundScalar::PrimeField { value: b, .. }) => {
                GroundScalar::PrimeField { p: *p, value: ((*a as u128 * *b as u128) % *p as u128) as u64 }
            }
            (GroundScalar::Padic(a), GroundScalar::Padic(b)) => GroundScalar::Padic(a.mul(b)),
            (GroundScalar::ArchInt { beta, value: a }, GroundScalar::ArchInt { value: b, .. }) => {
                GroundScalar::ArchInt { beta: beta.clone(), value: a * b }
            }
            (GroundScalar::RationalTrivial(a), GroundScalar::RationalTrivial(b)) => GroundScalar::RationalTrivial(a * b),
            (GroundScalar::Real { eps, value: a }, GroundScalar::Real { value: b, .. }) => {
                GroundScalar::Real { eps: eps.clone(), value: a * b }
            }
            (GroundScalar::Complex { eps, value: a }, GroundScalar::Complex { value: b, .. }) => {
                GroundScalar::Complex { eps: eps.clone(), value: a * b }
            }
            _ => unreachable!("tags checked"),
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            GroundScalar::PrimeField { p, value } => {
                let inv = mod_inverse(&BigInt::from(*value), &BigInt::from(*p)).ok_or(Error::DivisionByZero)?;
                GroundScalar::PrimeField { p: *p, value: inv.to_u64().expect("below p") }
            }
            GroundScalar::Padic(a) => GroundScalar::Padic(a.inverse()?),
            GroundScalar::ArchInt { beta, value } => {
                if value.abs().is_one() {
                    GroundScalar::ArchInt { beta: beta.clone(), value: value.clone() }
                } else {
                    return Err(Error::Unsupported(format!("{value} is not a unit of Z")));
                }
            }
            GroundScalar::RationalTrivial(a) => GroundScalar::RationalTrivial(a.recip()),
            GroundScalar::Real { eps, value } => GroundScalar::Real { eps: eps.clone(), value: value.recip() },
            GroundScalar::Complex { eps, value } => GroundScalar::Complex { eps: eps.clone(), value: value.inv() },
        })
    }

    /// The ring's own norm before any [`ScalarNormSpec`] is applied.
    pub fn base_norm(&self) -> Result<NormValue> {
        Ok(match self {
            GroundScalar::PrimeField { .. } | GroundScalar::RationalTrivial(_) => {
                if self.is_zero() {
                    NormValue::zero()
                } else {
                    NormValue::one()
                }
            }
            GroundScalar::Padic(x) => x.norm()?,
            GroundScalar::ArchInt { beta, value } => {
                NormValue::power(&Rat::from_integer(value.abs()), beta)?
            }
            GroundScalar::Real { eps, value } => NormValue::from_f64(value.abs())?.pow_f64(to_f64(eps)),
            GroundScalar::Complex { eps, value } => NormValue::from_f64(value.norm())?.pow_f64(to_f64(eps)),
        })
    }

    pub fn norm(&self, spec: &ScalarNormSpec) -> Result<NormValue> {
        if let (GroundScalar::Padic(x), ScalarNormSpec::Exponent(s)) = (self, spec) {
            return x.norm_pow(s);
        }
        spec.apply(&self.base_norm()?)
    }

    pub fn to_json(&self) -> Value {
        match self {
            GroundScalar::PrimeField { p, value } => json!({"ring": "fp", "p": p, "value": value}),
            GroundScalar::Padic(x) => json!({
                "ring": "padic",
                "p": x.p,
                "N": x.abs_prec,
                "offset": x.offset(),
                "digits": x.digits(),
                "val": x.val,
            }),
            GroundScalar::ArchInt { beta, value } => json!({
                "ring": "z",
                "beta": serde_rat::to_value(beta),
                "value": serde_rat::to_value(&Rat::from_integer(value.clone()))["num"],
            }),
            GroundScalar::RationalTrivial(q) => json!({"ring": "q", "value": serde_rat::to_value(q)}),
            GroundScalar::Real { eps, value } => json!({"ring": "real", "eps": serde_rat::to_value(eps), "value": value}),
            GroundScalar::Complex { eps, value } => json!({
                "ring": "complex",
                "eps": serde_rat::to_value(eps),
                "re": value.re,
                "im": value.im,
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("scalar: {what}"));
        let ring = v.get("ring").and_then(Value::as_str).ok_or_else(|| bad("missing ring"))?;
        let p = || v.get("p").and_then(Value::as_u64).ok_or_else(|| bad("missing p"));
        let rat_field = |k: &str| v.get(k).ok_or_else(|| bad(&format!("missing {k}"))).and_then(serde_rat::from_value);
        let f64_field = |k: &str| v.get(k).and_then(Value::as_f64).ok_or_else(|| bad(&format!("missing {k}")));
        Ok(match ring {
            "fp" => {
                let p = p()?;
                let value = rat_field("value")?;
                if !value.is_integer() {
                    return Err(bad("F_p value must be an integer"));
                }
                let m = value.to_integer().mod_floor(&BigInt::from(p));
                GroundScalar::PrimeField { p, value: m.to_u64().expect("below p") }
            }
            "padic" => {
                let p = p()?;
                let n = v.get("N").and_then(Value::as_i64).unwrap_or_else(default_precision);
                if let Some(value) = v.get("value") {
                    GroundScalar::Padic(Padic::from_rat(&serde_rat::from_value(value)?, p, n))
                } else {
                    let digits: Vec<u64> = serde_json::from_value(v.get("digits").cloned().ok_or_else(|| bad("missing digits"))?)?;
                    let offset = v.get("offset").and_then(Value::as_i64).unwrap_or(0);
                    let x = Padic::from_digits(p, n, offset, &digits)?;
                    if let Some(val) = v.get("val") {
                        let claimed = val.as_i64();
                        if claimed != x.val {
                            return Err(bad("val does not match the digits"));
                        }
                    }
                    GroundScalar::Padic(x)
                }
            }
            "z" => {
                let value = rat_field("value")?;
                if !value.is_integer() {
                    return Err(bad("Z value must be an integer"));
                }
                GroundScalar::ArchInt { beta: rat_field("beta")?, value: value.to_integer() }
            }
            "q" => GroundScalar::RationalTrivial(rat_field("value")?),
            "real" => GroundScalar::Real { eps: rat_field("eps")?, value: f64_field("value")? },
            "complex" => GroundScalar::Complex {
                eps: rat_field("eps")?,
                value: Complex64::new(f64_field("re")?, f64_field("im")?),
            },
            other => return Err(bad(&format!("unknown ring {other:?}"))),
        })
    }
}

impl fmt::Display for GroundScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundScalar::PrimeField { value, .. } => write!(f, "{value}"),
            GroundScalar::Padic(x) => write!(f, "{} + O({}^{})", format_rat(&x.to_rat()), x.p, x.abs_prec),
            GroundScalar::ArchInt { value, .. } => write!(f, "{value}"),
            GroundScalar::RationalTrivial(q) => write!(f, "{}", format_rat(q)),
            GroundScalar::Real { value, .. } => write!(f, "{value}"),
            GroundScalar::Complex { value, .. } => write!(f, "{value}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn pad(m: i64, p: u64, n: i64) -> Padic {
        Padic::from_i64(m, p, n)
    }

    #[test]
    fn ring_op_examples() {
        let one = GroundScalar::fp(2, 1);
        assert!(one.add(&one).unwrap().is_zero());
        let a = GroundScalar::Padic(pad(3, 2, 8));
        let b = GroundScalar::Padic(pad(5, 2, 8));
        let GroundScalar::Padic(c) = a.mul(&b).unwrap() else { panic!() };
        assert_eq!(c.to_rat(), int(15));
        assert_eq!(&c.digits()[..4], &[1, 1, 1, 1]);
        let x = GroundScalar::ArchInt { beta: int(1), value: BigInt::from(-3) };
        let y = GroundScalar::ArchInt { beta: int(1), value: BigInt::from(4) };
        assert_eq!(x.mul(&y).unwrap(), GroundScalar::ArchInt { beta: int(1), value: BigInt::from(-12) });
        assert!(matches!(one.add(&a), Err(Error::TagMismatch(_))));
        assert!(matches!(GroundScalar::fp(3, 0).inverse(), Err(Error::DivisionByZero)));
        assert_eq!(GroundScalar::fp(7, 3).inverse().unwrap(), GroundScalar::fp(7, 5));
    }

    #[test]
    fn norm_examples() {
        let x = GroundScalar::Padic(pad(12, 2, 32));
        assert_eq!(x.norm(&ScalarNormSpec::Exponent(int(1))).unwrap().to_rat(), Some(rat(1, 4)));
        let two = ScalarNormSpec::two_sided(rat(1, 2), int(2)).unwrap();
        assert_eq!(x.norm(&two).unwrap().to_rat(), Some(rat(1, 2)));
        let z = GroundScalar::ArchInt { beta: rat(1, 2), value: BigInt::from(-9) };
        assert_eq!(z.norm(&ScalarNormSpec::Plain).unwrap().to_rat(), Some(int(3)));
        let zero = GroundScalar::Padic(pad(0, 2, 32));
        assert!(matches!(zero.norm(&ScalarNormSpec::Plain), Err(Error::PrecisionExhausted(_))));
        assert!(GroundScalar::fp(5, 0).base_norm().unwrap().is_zero());
        assert_eq!(GroundScalar::fp(5, 3).base_norm().unwrap().to_rat(), Some(int(1)));
    }

    #[test]
    fn padic_from_integer_examples() {
        let six = pad(6, 2, 4);
        assert_eq!(six.digits(), vec![0, 1, 1, 0]);
        assert_eq!(six.valuation(), Some(1));
        assert!(pad(0, 2, 4).is_zero());
        assert_eq!(pad(-1, 2, 4).digits(), vec![1, 1, 1, 1]);
        assert!(pad(16, 2, 4).is_zero());
    }

    #[test]
    fn padic_precision_tracking() {
        // 1/2 in Q_2 at precision 8 inverts 2 and keeps 7 relative digits.
        let half = pad(2, 2, 8).inverse().unwrap();
        assert_eq!(half.valuation(), Some(-1));
        assert_eq!(half.abs_prec(), 6);
        assert_eq!(half.to_rat(), rat(1, 2));
        let back = half.mul(&pad(2, 2, 8));
        assert_eq!(back.to_rat(), int(1));
        // 1 - 1 collapses to zero at the common precision.
        let z = pad(1, 3, 5).add(&pad(-1, 3, 5));
        assert!(z.is_zero());
        assert_eq!(z.abs_prec(), 5);
        // Multiplying by p^k raises absolute precision by k.
        assert_eq!(pad(3, 3, 5).mul(&pad(1, 3, 5)).abs_prec(), 5);
        assert_eq!(pad(1, 3, 5).mul(&pad(9, 3, 5)).abs_prec(), 5);
        let q = Padic::from_rat(&rat(5, 12), 2, 10);
        assert_eq!(q.valuation(), Some(-2));
        assert_eq!(q.mul(&pad(12, 2, 10)).to_rat(), int(5));
    }

    #[test]
    fn json_round_trip() {
        for s in [
            GroundScalar::fp(5, 3),
            GroundScalar::Padic(pad(6, 2, 4)),
            GroundScalar::Padic(Padic::from_rat(&rat(7, 9), 3, 6)),
            GroundScalar::Padic(pad(0, 3, 6)),
            GroundScalar::ArchInt { beta: rat(1, 2), value: BigInt::from(10).pow(30) },
            GroundScalar::RationalTrivial(rat(-2, 3)),
            GroundScalar::Real { eps: rat(1, 2), value: -0.1 },
            GroundScalar::Complex { eps: int(1), value: Complex64::new(0.5, -2.0) },
        ] {
            let back = GroundScalar::from_json(&s.to_json()).unwrap();
            assert_eq!(back, s);
        }
        let v = json!({"ring": "padic", "p": 2, "N": 4, "digits": [0, 1, 1, 0], "val": 1});
        assert_eq!(GroundScalar::from_json(&v).unwrap(), GroundScalar::Padic(pad(6, 2, 4)));
    }
}
