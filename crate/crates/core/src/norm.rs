//! Nonnegative norm magnitudes held in the log domain.
//!
//! A [`NormValue`] is either exactly zero, an exact product of rational
//! powers of primes (so `r^q` for rational `r` and `q` stays exact), or a
//! floating log2 magnitude. Products, quotients and rational powers of exact
//! values stay exact; sums stay exact only when every term is a rational
//! number, otherwise they fall back to a compensated float sum.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{factor, format_rat, log2_rat_abs, serde_rat, Rat};

/// Relative tolerance for comparisons in the linear domain.
pub const TAU: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ExactRationalPower,
    Float,
}

/// Exact positive real of the form `prod p^(e_p)` with rational exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimePowers(BTreeMap<u64, Rat>);

impl PrimePowers {
    fn from_rat(q: &Rat) -> Option<Self> {
        debug_assert!(q.is_positive());
        let mut map: BTreeMap<u64, Rat> = BTreeMap::new();
        for (p, e) in factor(q.numer().magnitude())? {
            *map.entry(p).or_insert_with(Rat::zero) += Rat::from_integer(BigInt::from(e));
        }
        for (p, e) in factor(q.denom().magnitude())? {
            *map.entry(p).or_insert_with(Rat::zero) -= Rat::from_integer(BigInt::from(e));
        }
        map.retain(|_, e| !e.is_zero());
        Some(PrimePowers(map))
    }

    fn log2(&self) -> f64 {
        self.0
            .iter()
            .map(|(p, e)| crate::rational::to_f64(e) * (*p as f64).log2())
            .sum()
    }

    fn mul(&self, other: &Self) -> Self {
        let mut map = self.0.clone();
        for (p, e) in &other.0 {
            *map.entry(*p).or_insert_with(Rat::zero) += e;
        }
        map.retain(|_, e| !e.is_zero());
        PrimePowers(map)
    }

    fn pow(&self, q: &Rat) -> Self {
        if q.is_zero() {
            return PrimePowers::default();
        }
        PrimePowers(self.0.iter().map(|(p, e)| (*p, e * q)).collect())
    }

    fn to_rat(&self) -> Option<Rat> {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (p, e) in &self.0 {
            if !e.is_integer() {
                return None;
            }
            let k = e.to_integer();
            let k_abs = k.abs().to_u32()?;
            let pk = BigInt::from(*p).pow(k_abs);
            if k.is_positive() {
                num *= pk;
            } else {
                den *= pk;
            }
        }
        Some(Rat::new(num, den))
    }

    pub fn factors(&self) -> impl Iterator<Item = (u64, &Rat)> {
        self.0.iter().map(|(p, e)| (*p, e))
    }
}

#[derive(Clone, Debug)]
enum Repr {
    Zero,
    Exact(PrimePowers),
    Float,
}

#[derive(Clone, Debug)]
pub struct NormValue {
    log2: f64,
    repr: Repr,
}

impl NormValue {
    pub fn zero() -> Self {
        NormValue {
            log2: f64::NEG_INFINITY,
            repr: Repr::Zero,
        }
    }

    pub fn one() -> Self {
        NormValue {
            log2: 0.0,
            repr: Repr::Exact(PrimePowers::default()),
        }
    }

    pub fn from_rat(q: &Rat) -> Result<Self> {
        if q.is_negative() {
            return Err(Error::InvalidNorm(format!("negative magnitude {}", format_rat(q))));
        }
        if q.is_zero() {
            return Ok(Self::zero());
        }
        Ok(Self::from_positive_rat(q))
    }

    fn from_positive_rat(q: &Rat) -> Self {
        match PrimePowers::from_rat(q) {
            Some(pp) => NormValue {
                log2: pp.log2(),
                repr: Repr::Exact(pp),
            },
            None => NormValue {
                log2: log2_rat_abs(q),
                repr: Repr::Float,
            },
        }
    }

    pub fn from_f64(x: f64) -> Result<Self> {
        if x.is_nan() || x < 0.0 || x.is_infinite() {
            return Err(Error::InvalidNorm(format!("magnitude {x} is not a finite nonnegative real")));
        }
        if x == 0.0 {
            return Ok(Self::zero());
        }
        Ok(NormValue {
            log2: x.log2(),
            repr: Repr::Float,
        })
    }

    /// A float magnitude `2^log2`; `-inf` gives zero.
    pub fn from_log2(log2: f64) -> Self {
        if log2 == f64::NEG_INFINITY {
            return Self::zero();
        }
        assert!(log2.is_finite(), "log2 magnitude must be finite, got {log2}");
        NormValue {
            log2,
            repr: Repr::Float,
        }
    }

    /// Exact `base^exp` for a nonnegative rational base.
    pub fn power(base: &Rat, exp: &Rat) -> Result<Self> {
        Self::from_rat(base)?.pow(exp)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self.repr, Repr::Float)
    }

    pub fn provenance(&self) -> Provenance {
        if self.is_exact() {
            Provenance::ExactRationalPower
        } else {
            Provenance::Float
        }
    }

    pub fn log2(&self) -> f64 {
        self.log2
    }

    pub fn to_f64(&self) -> f64 {
        self.log2.exp2()
    }

    /// The exact value when it is a rational number.
    pub fn to_rat(&self) -> Option<Rat> {
        match &self.repr {
            Repr::Zero => Some(Rat::zero()),
            Repr::Exact(pp) => pp.to_rat(),
            Repr::Float => None,
        }
    }

    pub fn prime_powers(&self) -> Option<&PrimePowers> {
        match &self.repr {
            Repr::Exact(pp) => Some(pp),
            _ => None,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (&self.repr, &other.repr) {
            (Repr::Zero, _) | (_, Repr::Zero) => Self::zero(),
            (Repr::Exact(a), Repr::Exact(b)) => {
                let pp = a.mul(b);
                NormValue {
                    log2: pp.log2(),
                    repr: Repr::Exact(pp),
                }
            }
            _ => Self::from_log2(self.log2 + other.log2),
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.mul(&other.recip()?))
    }

    pub fn recip(&self) -> Result<Self> {
        self.pow(&-Rat::one())
    }

    /// Rational power; `0^q` is 0 for q > 0 and 1 for q = 0.
    pub fn pow(&self, q: &Rat) -> Result<Self> {
        match &self.repr {
            Repr::Zero => {
                if q.is_positive() {
                    Ok(Self::zero())
                } else if q.is_zero() {
                    Ok(Self::one())
                } else {
                    Err(Error::DivisionByZero)
                }
            }
            Repr::Exact(pp) => {
                let pp = pp.pow(q);
                Ok(NormValue {
                    log2: pp.log2(),
                    repr: Repr::Exact(pp),
                })
            }
            Repr::Float => Ok(Self::from_log2(self.log2 * crate::rational::to_f64(q))),
        }
    }

    pub fn pow_int(&self, k: i64) -> Result<Self> {
        self.pow(&Rat::from_integer(BigInt::from(k)))
    }

    /// Real power; always leaves the exact domain unless the exponent is 1.
    pub fn pow_f64(&self, e: f64) -> Self {
        if self.is_zero() {
            return if e > 0.0 { Self::zero() } else { Self::one() };
        }
        Self::from_log2(self.log2 * e)
    }

    pub fn max(&self, other: &Self) -> Self {
        if self.total_cmp(other) == Ordering::Less {
            other.clone()
        } else {
            self.clone()
        }
    }

    pub fn min(&self, other: &Self) -> Self {
        if self.total_cmp(other) == Ordering::Greater {
            other.clone()
        } else {
            self.clone()
        }
    }

    pub fn max_of<'a>(values: impl IntoIterator<Item = &'a NormValue>) -> Self {
        values
            .into_iter()
            .fold(Self::zero(), |acc, v| acc.max(v))
    }

    /// Sum of magnitudes. Exact when every term is a rational number; otherwise
    /// a compensated (Neumaier) sum in the linear domain, rescaled by the
    /// largest term so huge or tiny magnitudes do not overflow.
    pub fn sum<'a>(values: impl IntoIterator<Item = &'a NormValue>) -> Self {
        let values: Vec<&NormValue> = values.into_iter().filter(|v| !v.is_zero()).collect();
        if values.is_empty() {
            return Self::zero();
        }
        if values.len() == 1 {
            return values[0].clone();
        }
        let rationals: Option<Vec<Rat>> = values.iter().map(|v| v.to_rat()).collect();
        if let Some(rs) = rationals {
            let total: Rat = rs.into_iter().fold(Rat::zero(), |a, b| a + b);
            return Self::from_positive_rat(&total);
        }
        let top = values
            .iter()
            .map(|v| v.log2)
            .fold(f64::NEG_INFINITY, f64::max);
        let total = compensated_sum(values.iter().map(|v| (v.log2 - top).exp2()));
        Self::from_log2(top + total.log2())
    }

    /// Exact equality when both sides are exact; `None` when undecidable
    /// without a tolerance.
    pub fn exact_eq(&self, other: &Self) -> Option<bool> {
        match (&self.repr, &other.repr) {
            (Repr::Zero, Repr::Zero) => Some(true),
            (Repr::Zero, _) | (_, Repr::Zero) => Some(false),
            (Repr::Exact(a), Repr::Exact(b)) => Some(a == b),
            _ => None,
        }
    }

    /// `|a - b| <= tol * max(a, b)`, symmetric in its arguments.
    pub fn approx_eq_tol(&self, other: &Self, tol: f64) -> bool {
        if let Some(eq) = self.exact_eq(other) {
            if eq {
                return true;
            }
        }
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        let (hi, lo) = if self.log2 >= other.log2 {
            (self.log2, other.log2)
        } else {
            (other.log2, self.log2)
        };
        let rel_gap = -((lo - hi) * std::f64::consts::LN_2).exp_m1();
        rel_gap <= tol
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.approx_eq_tol(other, TAU)
    }

    /// `a <= b * (1 + tol)`.
    pub fn le_tol(&self, other: &Self, tol: f64) -> bool {
        if self.is_zero() {
            return true;
        }
        if other.is_zero() {
            return false;
        }
        if self.exact_eq(other) == Some(true) {
            return true;
        }
        self.log2 <= other.log2 + tol.ln_1p() / std::f64::consts::LN_2
    }

    pub fn le(&self, other: &Self) -> bool {
        self.le_tol(other, TAU)
    }

    /// Total order on magnitudes; exact equality wins over float noise.
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        if self.exact_eq(other) == Some(true) {
            return Ordering::Equal;
        }
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self.log2.total_cmp(&other.log2),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(NormJson::from(self)).expect("norm serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let j: NormJson = serde_json::from_value(v.clone())?;
        j.try_into()
    }

    /// Short form used inside larger documents: a bare rational when the
    /// value is rational, the full object otherwise.
    pub fn to_json_compact(&self) -> serde_json::Value {
        match self.to_rat() {
            Some(q) => serde_rat::to_value(&q),
            None => self.to_json(),
        }
    }

    /// Accepts a rational (number, string or `{"num","den"}`), an exact power
    /// `{"base": r, "exp": q}`, or the full object written by [`Self::to_json`].
    pub fn from_json_loose(v: &serde_json::Value) -> Result<Self> {
        if let serde_json::Value::Object(map) = v {
            if let (Some(base), Some(exp)) = (map.get("base"), map.get("exp")) {
                let base = serde_rat::from_value(base)?;
                let exp = serde_rat::from_value(exp)?;
                return Self::power(&base, &exp);
            }
            if map.contains_key("num") {
                return Self::from_rat(&serde_rat::from_value(v)?);
            }
            return Self::from_json(v);
        }
        Self::from_rat(&serde_rat::from_value(v)?)
    }
}

impl PartialEq for NormValue {
    /// Equality of magnitudes within [`TAU`].
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other)
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.to_rat() {
            return write!(f, "{}", format_rat(&q));
        }
        if let Repr::Exact(pp) = &self.repr {
            let parts: Vec<String> = pp
                .factors()
                .map(|(p, e)| format!("{p}^({})", format_rat(e)))
                .collect();
            return write!(f, "{}", parts.join("*"));
        }
        write!(f, "{}", format_sig12(self.to_f64()))
    }
}

/// Twelve significant digits in scientific notation.
pub fn format_sig12(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[derive(Serialize, Deserialize)]
struct FactorJson {
    p: u64,
    #[serde(with = "serde_rat")]
    e: Rat,
}

#[derive(Serialize, Deserialize)]
struct NormJson {
    #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::rational::serde_rat_opt")]
    value: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exact: Option<Vec<FactorJson>>,
    decimal: Option<String>,
    log2: Option<f64>,
    #[serde(default)]
    zero: bool,
}

impl From<&NormValue> for NormJson {
    fn from(v: &NormValue) -> Self {
        let exact = v.prime_powers().map(|pp| {
            pp.factors()
                .map(|(p, e)| FactorJson { p, e: e.clone() })
                .collect()
        });
        NormJson {
            value: v.to_rat(),
            exact,
            decimal: Some(format_sig12(v.to_f64())),
            log2: if v.is_zero() { None } else { Some(v.log2) },
            zero: v.is_zero(),
        }
    }
}

impl TryFrom<NormJson> for NormValue {
    type Error = Error;

    fn try_from(j: NormJson) -> Result<Self> {
        if j.zero {
            return Ok(NormValue::zero());
        }
        if let Some(factors) = j.exact {
            let mut map = BTreeMap::new();
            for f in factors {
                if !crate::rational::is_prime(f.p) {
                    return Err(Error::Parse(format!("{} is not prime", f.p)));
                }
                if !f.e.is_zero() {
                    map.insert(f.p, f.e);
                }
            }
            let pp = PrimePowers(map);
            return Ok(NormValue {
                log2: pp.log2(),
                repr: Repr::Exact(pp),
            });
        }
        if let Some(q) = j.value {
            return NormValue::from_rat(&q);
        }
        match j.log2 {
            Some(l) if l.is_finite() => Ok(NormValue::from_log2(l)),
            _ => Err(Error::Parse("norm value needs zero, exact, value or log2".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn exact_powers_stay_exact() {
        let r = NormValue::from_rat(&rat(1, 2)).unwrap();
        let a = r.pow(&rat(3, 2)).unwrap();
        let b = NormValue::power(&rat(1, 8), &rat(1, 2)).unwrap();
        assert_eq!(a.exact_eq(&b), Some(true));
        assert!(a.is_exact());
        assert_eq!(format!("{a}"), "2^(-3/2)");
    }

    #[test]
    fn rational_sums_are_exact() {
        let terms = [
            NormValue::from_rat(&rat(1, 4)).unwrap(),
            NormValue::from_rat(&int(3)).unwrap(),
        ];
        let s = NormValue::sum(terms.iter());
        assert_eq!(s.to_rat(), Some(rat(13, 4)));
    }

    #[test]
    fn irrational_sums_are_compensated_floats() {
        let half_root = NormValue::power(&int(2), &rat(-1, 2)).unwrap();
        let s = NormValue::sum([half_root.clone(), half_root].iter());
        assert!(!s.is_exact());
        assert!((s.to_f64() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn zero_sentinel() {
        let z = NormValue::zero();
        assert!(z.is_zero());
        assert_eq!(z.log2(), f64::NEG_INFINITY);
        assert!(z.le(&NormValue::one()));
        assert!(!NormValue::one().le(&z));
        assert_eq!(z.mul(&NormValue::one()).exact_eq(&z), Some(true));
        assert!(NormValue::from_rat(&int(-1)).is_err());
        assert!(NormValue::from_f64(-0.5).is_err());
        assert!(matches!(NormValue::one().div(&z), Err(Error::DivisionByZero)));
    }

    #[test]
    fn tolerance_is_symmetric() {
        let a = NormValue::from_f64(1.0).unwrap();
        let b = NormValue::from_f64(1.0 + 5e-10).unwrap();
        let c = NormValue::from_f64(1.0 + 5e-9).unwrap();
        assert!(a.approx_eq(&b) && b.approx_eq(&a));
        assert!(!a.approx_eq(&c) && !c.approx_eq(&a));
        assert!(c.le_tol(&a, 1e-8));
        assert!(!c.le(&a));
    }

    #[test]
    fn incommensurable_bases_compare_by_float() {
        let a = NormValue::power(&int(2), &rat(1, 2)).unwrap();
        let b = NormValue::power(&int(3), &rat(1, 3)).unwrap();
        assert_eq!(a.exact_eq(&b), Some(false));
        assert_eq!(a.total_cmp(&b), Ordering::Less);
        assert_eq!(NormValue::max_of([&a, &b]).exact_eq(&b), Some(true));
    }

    #[test]
    fn json_round_trip() {
        for v in [
            NormValue::zero(),
            NormValue::from_rat(&rat(13, 4)).unwrap(),
            NormValue::power(&rat(1, 2), &rat(1, 3)).unwrap(),
            NormValue::from_f64(0.3).unwrap(),
        ] {
            let back = NormValue::from_json(&v.to_json()).unwrap();
            assert!(back.approx_eq_tol(&v, 1e-15));
            assert_eq!(back.is_exact(), v.is_exact());
        }
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut vals = vec![1e16];
        vals.extend(std::iter::repeat_n(1.0, 1000));
        vals.push(-1e16);
        assert_eq!(compensated_sum(vals), 1000.0);
    }
}
