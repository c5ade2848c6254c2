//! Puiseux polynomials over F_p with exact rational exponents: the finite
//! truncations standing in for perfectoid fields of characteristic p.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::norm::NormValue;
use crate::rational::{format_rat, int, serde_rat, Rat};

/// Default cap on the denominator of a widened `(1/n)Z` lattice.
pub const FRACTION_CAP: u64 = 1 << 20;

/// The group of exponents a polynomial may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lattice {
    /// Exponents with denominator `p^k`, `k <= bound`.
    PPower { bound: u32 },
    /// Exponents in `(1/n)Z`; roots widen `n` to `n p` up to `max`.
    Fraction { n: u64, max: u64 },
}

impl Lattice {
    pub fn fraction(n: u64) -> Self {
        Lattice::Fraction { n, max: FRACTION_CAP }
    }

    fn admits(&self, p: u64, q: &Rat) -> bool {
        match self {
            Lattice::PPower { bound } => {
                let mut d = q.denom().clone();
                let pb = BigInt::from(p);
                let mut k = 0;
                while (&d % &pb).is_zero() {
                    d /= &pb;
                    k += 1;
                }
                d.is_one() && k <= *bound
            }
            Lattice::Fraction { n, .. } => (BigInt::from(*n) % q.denom()).is_zero(),
        }
    }

    fn join(&self, other: &Lattice) -> Result<Lattice> {
        match (self, other) {
            (Lattice::PPower { bound: a }, Lattice::PPower { bound: b }) => Ok(Lattice::PPower { bound: (*a).max(*b) }),
            (Lattice::Fraction { n: a, max: ma }, Lattice::Fraction { n: b, max: mb }) => {
                let n = a.lcm(b);
                let max = (*ma).min(*mb);
                if n > max {
                    return Err(Error::LatticeOverflow(format!("(1/{n})Z exceeds the denominator cap {max}")));
                }
                Ok(Lattice::Fraction { n, max })
            }
            _ => Err(Error::TagMismatch("p-power and fraction lattices do not mix".into())),
        }
    }

    /// The lattice after dividing every exponent by `p`.
    fn root(&self, p: u64) -> Result<Lattice> {
        match self {
            Lattice::PPower { .. } => Ok(*self),
            Lattice::Fraction { n, max } => {
                let wider = n.checked_mul(p).filter(|m| m <= max).ok_or_else(|| {
                    Error::LatticeOverflow(format!("(1/{}p)Z exceeds the denominator cap {max}", n))
                })?;
                Ok(Lattice::Fraction { n: wider, max: *max })
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Lattice::PPower { bound } => json!({"kind": "p-power", "bound": bound}),
            Lattice::Fraction { n, max } => json!({"kind": "fraction", "n": n, "max": max}),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let num = |k: &str| {
            v.get(k)
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse(format!("lattice needs {k}")))
        };
        match v.get("kind").and_then(Value::as_str) {
            Some("p-power") => Ok(Lattice::PPower { bound: num("bound")? as u32 }),
            Some("fraction") => Ok(Lattice::Fraction {
                n: num("n")?,
                max: v.get("max").and_then(Value::as_u64).unwrap_or(FRACTION_CAP),
            }),
            _ => Err(Error::Parse("lattice kind must be p-power or fraction".into())),
        }
    }
}

/// A finite sum `Σ c_q t^q` with `c_q ∈ F_p` and exponents in a lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxPoly {
    p: u64,
    lattice: Lattice,
    terms: BTreeMap<Rat, u64>,
}

impl PuiseuxPoly {
    pub fn zero(p: u64, lattice: Lattice) -> Self {
        PuiseuxPoly {
            p,
            lattice,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(p: u64, lattice: Lattice) -> Self {
        Self::constant(p, lattice, 1)
    }

    pub fn constant(p: u64, lattice: Lattice, c: i64) -> Self {
        Self::monomial(p, lattice, c, Rat::zero()).expect("0 is in every lattice")
    }

    pub fn monomial(p: u64, lattice: Lattice, c: i64, q: Rat) -> Result<Self> {
        Self::from_terms(p, lattice, [(q, c)])
    }

    /// Sums the given terms (coefficients reduced mod `p`).
    pub fn from_terms(p: u64, lattice: Lattice, terms: impl IntoIterator<Item = (Rat, i64)>) -> Result<Self> {
        let mut out = Self::zero(p, lattice);
        for (q, c) in terms {
            if !lattice.admits(p, &q) {
                return Err(Error::LatticeOverflow(format!("exponent {} is outside the lattice", format_rat(&q))));
            }
            let c = c.rem_euclid(p as i64) as u64;
            out.add_term(q, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, q: Rat, c: u64) {
        if c == 0 {
            return;
        }
        let p = self.p;
        let entry = self.terms.entry(q.clone()).or_insert(0);
        *entry = (*entry + c) % p;
        if *entry == 0 {
            self.terms.remove(&q);
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn terms(&self) -> &BTreeMap<Rat, u64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exponent(&self) -> Option<&Rat> {
        self.terms.keys().next()
    }

    /// All exponents nonnegative (an element of the valuation ring).
    pub fn is_integral(&self) -> bool {
        self.min_exponent().is_none_or(|q| !q.is_negative())
    }

    /// The coefficient of `t^0`.
    pub fn constant_term(&self) -> u64 {
        self.terms.get(&Rat::zero()).copied().unwrap_or(0)
    }

    fn check(&self, other: &Self) -> Result<Lattice> {
        if self.p != other.p {
            return Err(Error::TagMismatch(format!("F_{} vs F_{}", self.p, other.p)));
        }
        self.lattice.join(&other.lattice)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let lattice = self.check(other)?;
        let mut out = self.clone();
        out.lattice = lattice;
        for (q, c) in &other.terms {
            out.add_term(q.clone(), *c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let p = self.p;
        PuiseuxPoly {
            p,
            lattice: self.lattice,
            terms: self.terms.iter().map(|(q, c)| (q.clone(), p - c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: i64) -> Self {
        let c = c.rem_euclid(self.p as i64) as u64;
        let mut out = Self::zero(self.p, self.lattice);
        for (q, a) in &self.terms {
            out.add_term(q.clone(), ((*a as u128 * c as u128) % self.p as u128) as u64);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let lattice = self.check(other)?;
        let mut out = Self::zero(self.p, lattice);
        for (q1, c1) in &self.terms {
            for (q2, c2) in &other.terms {
                out.add_term(q1 + q2, ((*c1 as u128 * *c2 as u128) % self.p as u128) as u64);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut k: u64) -> Result<Self> {
        let mut base = self.clone();
        let mut acc = Self::one(self.p, self.lattice);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// The `p`-th root: exponents divided by `p`, coefficients unchanged
    /// because Frobenius fixes F_p.
    pub fn root(&self) -> Result<Self> {
        let lattice = self.lattice.root(self.p)?;
        let pr = int(self.p as i64);
        let mut terms = BTreeMap::new();
        for (q, c) in &self.terms {
            let r = q / &pr;
            if !lattice.admits(self.p, &r) {
                return Err(Error::LatticeOverflow(format!(
                    "root of t^{} leaves the lattice",
                    format_rat(q)
                )));
            }
            terms.insert(r, *c);
        }
        Ok(PuiseuxPoly {
            p: self.p,
            lattice,
            terms,
        })
    }

    /// `f ↦ f^(p^m)`; negative `m` takes iterated roots. In characteristic
    /// `p` this multiplies every exponent by `p^m`.
    pub fn frobenius(&self, m: i64) -> Result<Self> {
        let mut out = self.clone();
        if m >= 0 {
            let scale = int(self.p as i64).pow(m as i32);
            out.terms = self.terms.iter().map(|(q, c)| (q * &scale, *c)).collect();
        } else {
            for _ in 0..(-m) {
                out = out.root()?;
            }
        }
        Ok(out)
    }

    /// Sup (valuation) norm at `|t| = r`: `r^(min exponent)`.
    pub fn sup_norm(&self, r: &NormValue) -> Result<NormValue> {
        check_radius(r)?;
        match self.min_exponent() {
            None => Ok(NormValue::zero()),
            Some(q) => r.pow(q),
        }
    }

    /// ℓ¹ norm `Σ r^q`. Not multiplicative; only used for cross-checks
    /// against base change.
    pub fn l1_norm(&self, r: &NormValue) -> Result<NormValue> {
        check_radius(r)?;
        let parts: Vec<NormValue> = self.terms.keys().map(|q| r.pow(q)).collect::<Result<_>>()?;
        Ok(NormValue::sum(parts.iter()))
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(q, c)| json!({"exp": serde_rat::to_value(q), "c": c}))
            .collect();
        json!({"p": self.p, "lattice": self.lattice.to_json(), "terms": terms})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let p = v
            .get("p")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("puiseux: missing p".into()))?;
        let lattice = match v.get("lattice") {
            Some(l) => Lattice::from_json(l)?,
            None => Lattice::PPower { bound: 8 },
        };
        let mut terms = Vec::new();
        for t in v.get("terms").and_then(Value::as_array).into_iter().flatten() {
            let q = serde_rat::from_value(t.get("exp").ok_or_else(|| Error::Parse("term needs exp".into()))?)?;
            let c = t
                .get("c")
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::Parse("term needs integer c".into()))?;
            terms.push((q, c));
        }
        Self::from_terms(p, lattice, terms)
    }
}

pub fn check_radius(r: &NormValue) -> Result<()> {
    if r.is_zero() || !r.le_tol(&NormValue::one(), 0.0) || r.exact_eq(&NormValue::one()) == Some(true) {
        return Err(Error::InvalidRadii(format!("need 0 < r < 1, got {r}")));
    }
    Ok(())
}

impl fmt::Display for PuiseuxPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(q, c)| {
                let coeff = if *c == 1 && !q.is_zero() { String::new() } else { c.to_string() };
                if q.is_zero() {
                    coeff
                } else if q.is_one() {
                    format!("{coeff}t")
                } else {
                    format!("{coeff}t^{}", format_rat(q))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    const L: Lattice = Lattice::PPower { bound: 8 };

    fn poly(p: u64, terms: &[(Rat, i64)]) -> PuiseuxPoly {
        PuiseuxPoly::from_terms(p, L, terms.iter().cloned()).unwrap()
    }

    #[test]
    fn mul_examples() {
        let f = poly(2, &[(rat(1, 2), 1), (int(1), 1)]);
        let g = poly(2, &[(rat(1, 2), 1)]);
        assert_eq!(f.mul(&g).unwrap(), poly(2, &[(int(1), 1), (rat(3, 2), 1)]));
        assert_eq!(f.mul(&PuiseuxPoly::one(2, L)).unwrap(), f);
        let h = poly(2, &[(int(0), 1), (rat(1, 2), 1)]);
        assert_eq!(h.pow(2).unwrap(), poly(2, &[(int(0), 1), (int(1), 1)]));
    }

    #[test]
    fn sup_norm_examples() {
        let r = NormValue::from_rat(&rat(1, 2)).unwrap();
        let f = poly(2, &[(rat(1, 2), 1), (int(1), 1)]);
        let n = f.sup_norm(&r).unwrap();
        assert_eq!(n.exact_eq(&NormValue::power(&int(2), &rat(-1, 2)).unwrap()), Some(true));
        assert!(PuiseuxPoly::zero(2, L).sup_norm(&r).unwrap().is_zero());
        assert_eq!(PuiseuxPoly::one(2, L).sup_norm(&r).unwrap().to_rat(), Some(int(1)));
        assert!(f.sup_norm(&NormValue::one()).is_err());
    }

    #[test]
    fn root_examples() {
        let t = poly(2, &[(int(1), 1)]);
        assert_eq!(t.root().unwrap(), poly(2, &[(rat(1, 2), 1)]));
        assert_eq!(PuiseuxPoly::one(2, L).root().unwrap(), PuiseuxPoly::one(2, L));
        let f = poly(2, &[(int(1), 1), (int(2), 1)]);
        let r = f.root().unwrap();
        assert_eq!(r, poly(2, &[(rat(1, 2), 1), (int(1), 1)]));
        assert_eq!(r.pow(2).unwrap(), f);
    }

    #[test]
    fn lattice_limits_are_enforced() {
        let tiny = Lattice::PPower { bound: 1 };
        let f = PuiseuxPoly::monomial(2, tiny, 1, rat(1, 2)).unwrap();
        assert!(matches!(f.root(), Err(Error::LatticeOverflow(_))));
        assert!(matches!(PuiseuxPoly::monomial(2, tiny, 1, rat(1, 3)), Err(Error::LatticeOverflow(_))));
        let frac = Lattice::Fraction { n: 3, max: 6 };
        let g = PuiseuxPoly::monomial(2, frac, 1, rat(1, 3)).unwrap();
        let g2 = g.root().unwrap();
        assert_eq!(g2.lattice(), Lattice::Fraction { n: 6, max: 6 });
        assert!(matches!(g2.root(), Err(Error::LatticeOverflow(_))));
    }

    #[test]
    fn frobenius_and_l1() {
        let f = poly(3, &[(rat(1, 3), 2), (int(1), 1)]);
        let phi = f.frobenius(1).unwrap();
        assert_eq!(phi, f.pow(3).unwrap());
        assert_eq!(phi.frobenius(-1).unwrap(), f);
        let r = NormValue::from_rat(&rat(1, 8)).unwrap();
        // (1/8)^{1/3} + 1/8 = 5/8
        assert_eq!(f.l1_norm(&r).unwrap().to_rat(), Some(rat(5, 8)));
    }

    #[test]
    fn json_round_trip() {
        let f = poly(2, &[(rat(-1, 4), 1), (int(3), 1)]);
        let v = f.to_json();
        assert_eq!(PuiseuxPoly::from_json(&v).unwrap(), f);
        let spec = json!({"p":2,"lattice":{"kind":"p-power","bound":8},"terms":[{"exp":{"num":1,"den":2},"c":1}]});
        assert_eq!(PuiseuxPoly::from_json(&spec).unwrap(), poly(2, &[(rat(1, 2), 1)]));
    }
}
