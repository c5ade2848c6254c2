//! Exact rationals, their JSON form and a few integer helpers shared by every
//! module.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"3"`, `"-1/2"` or a finite decimal such as `"0.75"` into an exact
/// rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.trim_start().starts_with('-');
        let whole: BigInt = match whole {
            "" | "-" | "+" => BigInt::zero(),
            w => w.parse().map_err(|_| bad())?,
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac: BigInt = frac.parse().map_err(|_| bad())?;
        let magnitude = whole.abs() * &scale + frac;
        let num = if negative { -magnitude } else { magnitude };
        return Ok(Rat::new(num, scale));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rat::from_integer(n))
}

pub fn format_rat(q: &Rat) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn to_f64(q: &Rat) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() && (v != 0.0 || q.is_zero()) {
            return v;
        }
    }
    let sign = if q.is_negative() { -1.0 } else { 1.0 };
    sign * log2_rat_abs(q).exp2()
}

/// log2 of |n|, accurate for integers of any size.
pub fn log2_bigint(n: &BigInt) -> f64 {
    log2_biguint(n.magnitude())
}

pub fn log2_biguint(n: &BigUint) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().map(f64::log2).unwrap_or(f64::INFINITY);
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(f64::MAX);
    top.log2() + shift as f64
}

pub fn log2_rat_abs(q: &Rat) -> f64 {
    log2_bigint(q.numer()) - log2_bigint(q.denom())
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| is_prime(n)).collect()
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// p-adic valuation of a nonzero rational.
pub fn valuation_rat(q: &Rat, p: u64) -> Option<i64> {
    let vn = valuation(q.numer(), p)? as i64;
    let vd = valuation(q.denom(), p)? as i64;
    Some(vn - vd)
}

const TRIAL_LIMIT: u64 = 1 << 16;

/// Complete factorization of a positive integer as prime → multiplicity, or
/// `None` when a cofactor is too large to certify as prime by trial division.
pub fn factor(n: &BigUint) -> Option<Vec<(u64, u64)>> {
    if n.is_zero() {
        return None;
    }
    let mut m = n.clone();
    let mut out = Vec::new();
    let mut d = 2u64;
    while d <= TRIAL_LIMIT {
        let big_d = BigUint::from(d);
        if BigUint::from(d) * BigUint::from(d) > m {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = m.div_rem(&big_d);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m.is_one() {
        return Some(out);
    }
    // Every factor below TRIAL_LIMIT is gone, so a cofactor below its square is prime.
    let limit_sq = BigUint::from(TRIAL_LIMIT) * BigUint::from(TRIAL_LIMIT);
    if m < limit_sq || BigUint::from(d) * BigUint::from(d) > m {
        let p = m.to_u64()?;
        out.push((p, 1));
        out.sort_unstable();
        return Some(out);
    }
    None
}

pub fn pow_biguint(base: u64, exp: u32) -> BigUint {
    BigUint::from(base).pow(exp)
}

pub fn bigint_from_sign(sign: Sign, mag: BigUint) -> BigInt {
    BigInt::from_biguint(sign, mag)
}

/// Serde adapter for `{"num": n, "den": d}`; integers that do not fit in an
/// `i64` are written as decimal strings.
pub mod serde_rat {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Repr {
        num: IntRepr,
        #[serde(default = "one_repr")]
        den: IntRepr,
    }

    fn one_repr() -> IntRepr {
        IntRepr::Small(1)
    }

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum IntRepr {
        Small(i64),
        Big(String),
    }

    impl IntRepr {
        fn from_big(n: &BigInt) -> Self {
            match n.to_i64() {
                Some(v) => IntRepr::Small(v),
                None => IntRepr::Big(n.to_string()),
            }
        }
        fn to_big(&self) -> std::result::Result<BigInt, String> {
            match self {
                IntRepr::Small(v) => Ok(BigInt::from(*v)),
                IntRepr::Big(s) => s.parse().map_err(|_| format!("bad integer {s:?}")),
            }
        }
    }

    pub fn serialize<S: Serializer>(q: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        Repr {
            num: IntRepr::from_big(q.numer()),
            den: IntRepr::from_big(q.denom()),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let r = Repr::deserialize(d)?;
        let num = r.num.to_big().map_err(D::Error::custom)?;
        let den = r.den.to_big().map_err(D::Error::custom)?;
        if den.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Rat::new(num, den))
    }

    pub fn to_value(q: &Rat) -> serde_json::Value {
        serialize(q, serde_json::value::Serializer).expect("rational serializes")
    }

    pub fn from_value(v: &serde_json::Value) -> Result<Rat> {
        match v {
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(int(i))
                } else {
                    parse_rat(&n.to_string())
                }
            }
            serde_json::Value::String(s) => parse_rat(s),
            other => deserialize(other).map_err(|e| Error::Parse(e.to_string())),
        }
    }
}

/// Serde adapter for optional rationals.
pub mod serde_rat_opt {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match q {
            Some(q) => serde_rat::to_value(q).serialize(s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Rat>, D::Error> {
        let v = Option::<serde_json::Value>::deserialize(d)?;
        match v {
            None | Some(serde_json::Value::Null) => Ok(None),
            Some(v) => serde_rat::from_value(&v)
                .map(Some)
                .map_err(D::Error::custom),
        }
    }
}

/// Serde adapter for a rational given either as `{"num","den"}`, a JSON
/// integer, or a string such as `"1/2"`.
pub mod serde_rat_loose {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_rat::serialize(q, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        serde_rat::from_value(&v).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rat("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("0.5").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rat("2").unwrap(), int(2));
        assert_eq!(parse_rat("-3/6").unwrap(), rat(-1, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert!(parse_rat("1.").is_err());
    }

    #[test]
    fn factors_small_and_rejects_huge_cofactors() {
        assert_eq!(factor(&BigUint::from(360u32)).unwrap(), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor(&BigUint::from(1u32)).unwrap(), vec![]);
        assert_eq!(factor(&BigUint::from(65537u32)).unwrap(), vec![(65537, 1)]);
        let big = BigUint::from(4294967311u64) * BigUint::from(4294967357u64);
        assert!(factor(&big).is_none());
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&BigInt::from(12), 2), Some(2));
        assert_eq!(valuation(&BigInt::from(-9), 3), Some(2));
        assert_eq!(valuation(&BigInt::from(0), 3), None);
        assert_eq!(valuation_rat(&rat(3, 8), 2), Some(-3));
    }

    #[test]
    fn log2_of_huge_integers() {
        let n = BigInt::from(3).pow(2000);
        let expected = 2000.0 * 3f64.log2();
        assert!((log2_bigint(&n) - expected).abs() < 1e-9 * expected);
    }

    #[test]
    fn json_round_trip() {
        let q = rat(-7, 3);
        let v = serde_rat::to_value(&q);
        assert_eq!(v, serde_json::json!({"num": -7, "den": 3}));
        assert_eq!(serde_rat::from_value(&v).unwrap(), q);
        let big = Rat::from_integer(BigInt::from(10).pow(30));
        assert_eq!(serde_rat::from_value(&serde_rat::to_value(&big)).unwrap(), big);
        assert_eq!(serde_rat::from_value(&serde_json::json!("1/2")).unwrap(), rat(1, 2));
    }
}
