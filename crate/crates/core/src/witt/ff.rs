//! Finite sums `Σ [a_n] p^n` with Puiseux coefficients: the elements of
//! `W(K°)[1/p]` seen at finite support, with Gauss norms and Frobenius.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::vector::WittVector;
use crate::basechange::{bc_norm, cofinality_check, CofinalityReport, F1Element, GaussNormSpec, Mode};
use crate::error::{Error, Result};
use crate::monoids::{Carrier, GeometricMonoid};
use crate::norm::NormValue;
use crate::perfectoid::PuiseuxPoly;
use crate::rational::{int, is_prime, Rat};
use crate::scalars::{GroundScalar, Padic, ScalarNormSpec};

#[derive(Clone, Debug, PartialEq)]
pub struct FFElement {
    p: u64,
    terms: BTreeMap<i64, PuiseuxPoly>,
}

impl FFElement {
    pub fn zero(p: u64) -> Self {
        FFElement { p, terms: BTreeMap::new() }
    }

    pub fn new(p: u64, terms: impl IntoIterator<Item = (i64, PuiseuxPoly)>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidElement(format!("{p} is not prime")));
        }
        let mut out = Self::zero(p);
        for (n, a) in terms {
            if a.p() != p {
                return Err(Error::TagMismatch(format!("coefficient over F_{} in an element over p = {p}", a.p())));
            }
            if out.terms.contains_key(&n) {
                return Err(Error::InvalidElement(format!("index {n} appears twice")));
            }
            if !a.is_zero() {
                out.terms.insert(n, a);
            }
        }
        Ok(out)
    }

    /// `[a] p^n`.
    pub fn term(n: i64, a: PuiseuxPoly) -> Result<Self> {
        Self::new(a.p(), [(n, a)])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn terms(&self) -> &BTreeMap<i64, PuiseuxPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficientwise `a ↦ a^(p^m)`; negative `m` takes roots.
    pub fn frobenius(&self, m: i64) -> Result<Self> {
        Ok(FFElement {
            p: self.p,
            terms: self
                .terms
                .iter()
                .map(|(n, a)| Ok((*n, a.frobenius(m)?)))
                .collect::<Result<_>>()?,
        })
    }

    fn to_witt(&self, lo: i64, len: usize) -> Result<WittVector<PuiseuxPoly>> {
        let proto = self.terms.values().next().expect("nonzero element");
        let digits = (0..len)
            .map(|i| match self.terms.get(&(lo + i as i64)) {
                Some(a) => a.frobenius(i as i64),
                None => Ok(PuiseuxPoly::zero(self.p, proto.lattice())),
            })
            .collect::<Result<Vec<_>>>()?;
        WittVector::new(self.p, digits)
    }

    fn from_witt(w: &WittVector<PuiseuxPoly>, lo: i64) -> Result<Self> {
        let a = w.teichmuller_digits()?;
        Self::new(w.p(), a.into_iter().enumerate().map(|(i, d)| (lo + i as i64, d)))
    }

    fn span(&self) -> Option<(i64, i64)> {
        Some((*self.terms.keys().next()?, *self.terms.keys().next_back()?))
    }

    /// Product through Witt coordinates. The result is exact below index
    /// `lo + span + margin`, where `span` covers both supports; carries
    /// beyond that are dropped.
    pub fn mul(&self, other: &Self, margin: usize) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::TagMismatch(format!("p = {} vs p = {}", self.p, other.p)));
        }
        let (Some((a0, a1)), Some((b0, b1))) = (self.span(), other.span()) else {
            return Ok(Self::zero(self.p));
        };
        let len = ((a1 - a0) + (b1 - b0)) as usize + 1 + margin;
        let x = self.to_witt(a0, len)?;
        let y = other.to_witt(b0, len)?;
        Self::from_witt(&x.mul(&y)?, a0 + b0)
    }

    /// Sum through Witt coordinates, exact below `lo + span + margin`.
    pub fn add(&self, other: &Self, margin: usize) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::TagMismatch(format!("p = {} vs p = {}", self.p, other.p)));
        }
        let (Some((a0, a1)), Some((b0, b1))) = (self.span(), other.span()) else {
            return Ok(if self.is_zero() { other.clone() } else { self.clone() });
        };
        let lo = a0.min(b0);
        let len = (a1.max(b1) - lo) as usize + 1 + margin;
        Self::from_witt(&self.to_witt(lo, len)?.add(&other.to_witt(lo, len)?)?, lo)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "terms": self.terms.iter().map(|(n, a)| json!({"n": n, "coeff": a.to_json()})).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let p = v.get("p").and_then(Value::as_u64).ok_or_else(|| Error::Parse("element needs p".into()))?;
        let mut terms = Vec::new();
        for t in v.get("terms").and_then(Value::as_array).into_iter().flatten() {
            let n = t.get("n").and_then(Value::as_i64).ok_or_else(|| Error::Parse("term needs n".into()))?;
            let mut c = t.get("coeff").cloned().ok_or_else(|| Error::Parse("term needs coeff".into()))?;
            if let Some(obj) = c.as_object_mut() {
                obj.entry("p").or_insert(json!(p));
            }
            terms.push((n, PuiseuxPoly::from_json(&c)?));
        }
        Self::new(p, terms)
    }
}

/// `sup_n |a_n|_r p^(-ρ n)`.
pub fn ff_gauss_norm(x: &FFElement, rho: &Rat, r: &NormValue) -> Result<NormValue> {
    if *rho <= Rat::zero() {
        return Err(Error::InvalidRadii("ρ must be positive".into()));
    }
    let p = int(x.p as i64);
    let mut best = NormValue::zero();
    for (n, a) in &x.terms {
        let scale = NormValue::power(&p, &(-rho * int(*n)))?;
        best = best.max(&a.sup_norm(r)?.mul(&scale));
    }
    Ok(best)
}

/// `max(|x|_ρ, |x|_(1/ρ))` for `ρ >= 1`.
pub fn ff_two_sided_norm(x: &FFElement, rho: &Rat, r: &NormValue) -> Result<NormValue> {
    if *rho < Rat::one() {
        return Err(Error::InvalidRadii("two-sided norm needs ρ >= 1".into()));
    }
    Ok(ff_gauss_norm(x, rho, r)?.max(&ff_gauss_norm(x, &rho.recip(), r)?))
}

/// The Teichmüller lift of `c ∈ F_p` in `Z_p`, to `prec` digits.
pub fn teichmuller_zp(c: u64, p: u64, prec: i64) -> Padic {
    let modulus = BigInt::from(p).pow(prec as u32);
    let lift = BigInt::from(c).modpow(&BigInt::from(p).pow(prec as u32), &modulus);
    Padic::from_integer(&lift, p, prec)
}

/// A finite double array `c_{q,n} ∈ F_p^×` standing for `Σ c_{q,n} t^q p^n`.
#[derive(Clone, Debug)]
pub struct DoubleProbe {
    pub p: u64,
    pub coeffs: BTreeMap<(Rat, i64), u64>,
}

#[derive(Clone, Debug)]
pub struct SandwichReport {
    /// ℓ¹ base-change norm at `(ρ, r)`.
    pub l1: NormValue,
    /// ℓ¹ base-change norm at `(ρ, r')`.
    pub l1_shrunk: NormValue,
    /// Two-sided Fargues–Fontaine norm at `(ρ, r)`.
    pub ff_sup: NormValue,
    pub cofinality: CofinalityReport,
}

impl SandwichReport {
    pub fn to_json(&self) -> Value {
        json!({
            "l1": self.l1.to_json(),
            "l1_shrunk": self.l1_shrunk.to_json(),
            "ff_sup": self.ff_sup.to_json(),
            "cofinality": self.cofinality.to_json(),
        })
    }
}

fn scalar_spec_for(rho: &Rat) -> Result<ScalarNormSpec> {
    if rho.is_one() {
        Ok(ScalarNormSpec::Plain)
    } else {
        ScalarNormSpec::two_sided(rho.recip(), rho.clone())
    }
}

impl DoubleProbe {
    /// The Fargues–Fontaine side: `a_n = Σ_q c_{q,n} t^q`.
    pub fn ff_element(&self, lattice: crate::perfectoid::Lattice) -> Result<FFElement> {
        let mut rows: BTreeMap<i64, Vec<(Rat, i64)>> = BTreeMap::new();
        for ((q, n), c) in &self.coeffs {
            rows.entry(*n).or_default().push((q.clone(), *c as i64));
        }
        FFElement::new(
            self.p,
            rows.into_iter()
                .map(|(n, terms)| Ok((n, PuiseuxPoly::from_terms(self.p, lattice, terms)?)))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    /// The base-change side: over `Q^+` with coefficient
    /// `b_q = Σ_n [c_{q,n}] p^n ∈ Q_p`.
    pub fn bc_element(&self, r: &Rat, prec: i64) -> Result<F1Element> {
        let m = GeometricMonoid::single(Carrier::QPos, r)?;
        let mut cols: BTreeMap<Rat, Padic> = BTreeMap::new();
        for ((q, n), c) in &self.coeffs {
            let pn = Padic::from_rat(&int(self.p as i64).pow(*n as i32), self.p, prec + n.max(&0));
            let term = teichmuller_zp(*c, self.p, prec).mul(&pn);
            let entry = cols.entry(q.clone()).or_insert_with(|| Padic::zero(self.p, prec));
            *entry = entry.add(&term);
        }
        F1Element::over_monoid(&m, cols.into_iter().map(|(q, b)| (q, GroundScalar::Padic(b))))
    }
}

/// Compares the ℓ¹ base-change norm and the two-sided Fargues–Fontaine
/// sup norm of one probe: `FF(ρ, r) <= L1(ρ, r)` and
/// `L1(ρ, r') <= FF(ρ, r) · C` with `C` the cofinality constant for
/// `r' < r` certified on the probe's support.
pub fn sandwich_check(probe: &DoubleProbe, rho: &Rat, r: &Rat, r_prime: &Rat) -> Result<SandwichReport> {
    let scalar = scalar_spec_for(rho)?;
    let prec = crate::scalars::default_precision();
    let lattice = crate::perfectoid::Lattice::fraction(
        probe
            .coeffs
            .keys()
            .fold(BigInt::one(), |acc, (q, _)| acc.lcm(q.denom()))
            .try_into()
            .map_err(|_| Error::LatticeOverflow("exponent denominators too large".into()))?,
    );
    let ff = probe.ff_element(lattice)?;
    let bc = probe.bc_element(r, prec)?;
    let r_nv = NormValue::from_rat(r)?;
    let rp_nv = NormValue::from_rat(r_prime)?;
    let ff_sup = ff_two_sided_norm(&ff, rho, &r_nv)?;
    let l1 = bc_norm(&bc, &GaussNormSpec::new(Mode::L1, scalar.clone()))?;
    let cofinality = cofinality_check(&bc, &r_nv, &rp_nv, &scalar)?;
    let l1_shrunk = cofinality.l1_at_rho_prime.clone();
    if !ff_sup.le(&l1) {
        return Err(Error::CounterexampleFound(format!("FF sup norm {ff_sup} exceeds ℓ¹ norm {l1}")));
    }
    if !cofinality.sup_at_rho.approx_eq(&ff_sup) {
        return Err(Error::CounterexampleFound(format!(
            "base-change sup norm {} differs from the FF norm {ff_sup}",
            cofinality.sup_at_rho
        )));
    }
    let bound = ff_sup.mul(&cofinality.constant);
    if !l1_shrunk.le(&bound) {
        return Err(Error::CounterexampleFound(format!("ℓ¹ at r' = {l1_shrunk} exceeds {bound}")));
    }
    Ok(SandwichReport {
        l1,
        l1_shrunk,
        ff_sup,
        cofinality,
    })
}
