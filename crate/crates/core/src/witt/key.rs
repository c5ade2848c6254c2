//! Exponent transform comparing `|a|^s r^q` with `|a|^(s') R^q`, and the
//! case bounds relating the two families of sup norms.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::norm::NormValue;
use crate::rational::{format_rat, Rat};
use crate::scalars::Padic;

/// `s / log_R r`, exact when `r` and `R` are rational powers of a common
/// base.
#[derive(Clone, Debug, PartialEq)]
pub struct KeyExponent {
    pub exact: Option<Rat>,
    pub value: f64,
}

impl KeyExponent {
    fn apply(&self, x: &NormValue) -> Result<NormValue> {
        match &self.exact {
            Some(q) => x.pow(q),
            None => Ok(x.pow_f64(self.value)),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"exact": self.exact.as_ref().map(format_rat), "value": self.value})
    }
}

fn in_unit_interval(x: &NormValue, name: &str) -> Result<()> {
    if x.is_zero() || !x.le_tol(&NormValue::one(), 0.0) || x.exact_eq(&NormValue::one()) == Some(true) {
        return Err(Error::InvalidRadii(format!("{name} = {x} must lie strictly between 0 and 1")));
    }
    Ok(())
}

/// Exact `log_b a` when both are exact with proportional prime exponents.
fn exact_log(a: &NormValue, b: &NormValue) -> Option<Rat> {
    let fa: BTreeMap<u64, Rat> = a.prime_powers()?.factors().map(|(p, e)| (p, e.clone())).collect();
    let fb: BTreeMap<u64, Rat> = b.prime_powers()?.factors().map(|(p, e)| (p, e.clone())).collect();
    if fa.keys().ne(fb.keys()) {
        return None;
    }
    let mut ratio: Option<Rat> = None;
    for (p, eb) in &fb {
        let q = &fa[p] / eb;
        match &ratio {
            Some(r) if *r != q => return None,
            _ => ratio = Some(q),
        }
    }
    ratio
}

pub fn key_exponent_transform(s: &Rat, big_r: &NormValue, r: &NormValue) -> Result<KeyExponent> {
    if *s <= Rat::from_integer(0.into()) {
        return Err(Error::InvalidRadii("s must be positive".into()));
    }
    in_unit_interval(big_r, "R")?;
    in_unit_interval(r, "r")?;
    let exact = exact_log(r, big_r).map(|l| s / l);
    let value = crate::rational::to_f64(s) * big_r.log2() / r.log2();
    Ok(KeyExponent { exact, value })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KeyCase {
    /// `q >= 0`, `|a_q| <= 1`.
    PositiveUnit,
    /// `q >= 0`, `|a_q| > 1`.
    PositiveOuter,
    /// `q < 0`, `|a_q| > 1`.
    NegativeOuter,
    /// `q < 0`, `|a_q| <= 1`.
    NegativeUnit,
}

impl KeyCase {
    pub const ALL: [KeyCase; 4] = [
        KeyCase::PositiveUnit,
        KeyCase::PositiveOuter,
        KeyCase::NegativeOuter,
        KeyCase::NegativeUnit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KeyCase::PositiveUnit => "positive-unit",
            KeyCase::PositiveOuter => "positive-outer",
            KeyCase::NegativeOuter => "negative-outer",
            KeyCase::NegativeUnit => "negative-unit",
        }
    }

    fn contains(self, q: &Rat, a: &NormValue) -> bool {
        let positive = *q >= Rat::from_integer(0.into());
        let unit = a.le_tol(&NormValue::one(), 0.0);
        match self {
            KeyCase::PositiveUnit => positive && unit,
            KeyCase::PositiveOuter => positive && !unit,
            KeyCase::NegativeOuter => !positive && !unit,
            KeyCase::NegativeUnit => !positive && unit,
        }
    }

    /// On the unit ball the larger exponent `s_2` is needed and outside
    /// it the smaller `s_1`, on either side of `q = 0`.
    fn sound_uses_s2(self) -> bool {
        matches!(self, KeyCase::PositiveUnit | KeyCase::NegativeUnit)
    }
}

#[derive(Clone, Debug)]
pub struct Bound {
    pub lhs: NormValue,
    pub rhs: NormValue,
    pub holds: bool,
}

impl Bound {
    fn to_json(&self) -> Value {
        json!({"lhs": self.lhs.to_json(), "rhs": self.rhs.to_json(), "holds": self.holds})
    }
}

#[derive(Clone, Debug)]
pub struct CaseReport {
    pub case: KeyCase,
    pub support: usize,
    /// The bound with the exponent assignment as usually displayed
    /// (`s_1` on the positive unit ball and the negative outer part).
    pub as_displayed: Bound,
    /// The bound with the exponents exchanged, which holds termwise.
    pub exchanged: Bound,
}

#[derive(Clone, Debug)]
pub struct KeyReport {
    pub s1: KeyExponent,
    pub s2: KeyExponent,
    /// `sup |a_q|^s r_1^q` and `sup |a_q|^s r_2^q`.
    pub left_pair: (NormValue, NormValue),
    /// `sup |a_q|^(s_1) R^q` and `sup |a_q|^(s_2) R^q`.
    pub right_pair: (NormValue, NormValue),
    pub cases: Vec<CaseReport>,
}

impl KeyReport {
    pub fn displayed_hold(&self) -> bool {
        self.cases.iter().all(|c| c.as_displayed.holds)
    }

    pub fn exchanged_hold(&self) -> bool {
        self.cases.iter().all(|c| c.exchanged.holds)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "s1": self.s1.to_json(),
            "s2": self.s2.to_json(),
            "left_pair": [self.left_pair.0.to_json(), self.left_pair.1.to_json()],
            "right_pair": [self.right_pair.0.to_json(), self.right_pair.1.to_json()],
            "cases": self.cases.iter().map(|c| json!({
                "case": c.case.name(),
                "support": c.support,
                "as_displayed": c.as_displayed.to_json(),
                "exchanged": c.exchanged.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn sup_weighted(terms: &[(Rat, NormValue)], exp: &KeyExponent, radius: &NormValue) -> Result<NormValue> {
    let mut best = NormValue::zero();
    for (q, a) in terms {
        best = best.max(&exp.apply(a)?.mul(&radius.pow(q)?));
    }
    Ok(best)
}

/// Evaluates both norm pairs on `a` and checks the four case bounds on
/// the sign/unit-ball split of `a`.
pub fn key_inequality_check(
    a: &BTreeMap<Rat, Padic>,
    s: &Rat,
    big_r: &NormValue,
    r1: &NormValue,
    r2: &NormValue,
) -> Result<KeyReport> {
    if !(r1.le_tol(big_r, 0.0) && big_r.le_tol(r2, 0.0)) || r1.approx_eq(big_r) || big_r.approx_eq(r2) {
        return Err(Error::InvalidRadii(format!("need r1 < R < r2, got {r1}, {big_r}, {r2}")));
    }
    let s1 = key_exponent_transform(s, big_r, r1)?;
    let s2 = key_exponent_transform(s, big_r, r2)?;
    let plain = KeyExponent {
        exact: Some(s.clone()),
        value: crate::rational::to_f64(s),
    };
    let mut terms = Vec::new();
    for (q, x) in a {
        if x.is_zero() {
            continue;
        }
        terms.push((q.clone(), x.norm()?));
    }
    let left_pair = (sup_weighted(&terms, &plain, r1)?, sup_weighted(&terms, &plain, r2)?);
    let right_pair = (sup_weighted(&terms, &s1, big_r)?, sup_weighted(&terms, &s2, big_r)?);
    let mut cases = Vec::with_capacity(4);
    for case in KeyCase::ALL {
        let part: Vec<(Rat, NormValue)> = terms.iter().filter(|(q, x)| case.contains(q, x)).cloned().collect();
        let radius = match case {
            KeyCase::PositiveUnit | KeyCase::PositiveOuter => r2,
            KeyCase::NegativeOuter | KeyCase::NegativeUnit => r1,
        };
        let rhs = sup_weighted(&part, &plain, radius)?;
        let (sound, unsound) = if case.sound_uses_s2() { (&s2, &s1) } else { (&s1, &s2) };
        let make = |e: &KeyExponent| -> Result<Bound> {
            let lhs = sup_weighted(&part, e, big_r)?;
            let holds = lhs.le(&rhs);
            Ok(Bound { lhs, rhs: rhs.clone(), holds })
        };
        cases.push(CaseReport {
            case,
            support: part.len(),
            as_displayed: make(unsound)?,
            exchanged: make(sound)?,
        });
    }
    Ok(KeyReport {
        s1,
        s2,
        left_pair,
        right_pair,
        cases,
    })
}
