//! Truncated Witt vectors over a digit algebra, Teichmüller lifts, the
//! Frobenius and the α-analytic norm.

use std::collections::HashMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::poly::{ghost_int, ghost_solve_int, witt_table};
use crate::error::{Error, Result};
use crate::norm::NormValue;
use crate::perfectoid::{Lattice, PuiseuxPoly};
use crate::rational::is_prime;

/// The digit algebra of a Witt vector.
pub trait DigitRing: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Result<Self>;
    fn mul(&self, other: &Self) -> Result<Self>;
    fn pow(&self, e: u64) -> Result<Self>;
    /// The image of an integer, reduced mod `p` in characteristic `p`.
    fn lift_int(&self, c: &BigInt) -> Self;
    /// `Some(p)` for F_p-algebras.
    fn characteristic(&self) -> Option<u64>;
    fn compatible(&self, other: &Self) -> bool;
    /// The digit as an integer, when the algebra is Z.
    fn as_integer(&self) -> Option<BigInt>;
}

impl DigitRing for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Result<Self> {
        Ok(self + other)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        Ok(self * other)
    }
    fn pow(&self, e: u64) -> Result<Self> {
        Ok(num_traits::pow::pow(self.clone(), e as usize))
    }
    fn lift_int(&self, c: &BigInt) -> Self {
        c.clone()
    }
    fn characteristic(&self) -> Option<u64> {
        None
    }
    fn compatible(&self, _: &Self) -> bool {
        true
    }
    fn as_integer(&self) -> Option<BigInt> {
        Some(self.clone())
    }
}

impl DigitRing for PuiseuxPoly {
    fn zero_like(&self) -> Self {
        PuiseuxPoly::zero(self.p(), self.lattice())
    }
    fn one_like(&self) -> Self {
        PuiseuxPoly::one(self.p(), self.lattice())
    }
    fn is_zero(&self) -> bool {
        PuiseuxPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Result<Self> {
        PuiseuxPoly::add(self, other)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        PuiseuxPoly::mul(self, other)
    }
    /// Splits `e` in base `p`: each `p^j`-th power is a Frobenius twist.
    fn pow(&self, mut e: u64) -> Result<Self> {
        let p = self.p();
        let mut acc = self.one_like();
        let mut j = 0;
        while e > 0 {
            let d = e % p;
            if d > 0 {
                acc = acc.mul(&self.frobenius(j)?.pow(d)?)?;
            }
            e /= p;
            j += 1;
        }
        Ok(acc)
    }
    fn lift_int(&self, c: &BigInt) -> Self {
        let r = c.mod_floor(&BigInt::from(self.p())).to_i64().expect("residue below p");
        PuiseuxPoly::constant(self.p(), self.lattice(), r)
    }
    fn characteristic(&self) -> Option<u64> {
        Some(self.p())
    }
    fn compatible(&self, other: &Self) -> bool {
        self.p() == other.p()
    }
    fn as_integer(&self) -> Option<BigInt> {
        None
    }
}

/// A truncated p-typical Witt vector `(d_0, …, d_{n-1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct WittVector<D> {
    p: u64,
    digits: Vec<D>,
}

/// Depths at which the tables are built; beyond these the integer route
/// solves the ghost identities directly.
pub fn table_feasible(p: u64, depth: usize) -> bool {
    depth <= 5 && (p as u128).pow(depth as u32) <= 125
}

/// Nested evaluation over lexicographically sorted monomials: terms sharing
/// an exponent of the leading variable are summed first, so each power of
/// that variable multiplies once per group instead of once per term.
fn eval_nested<D: DigitRing, C>(
    terms: &[(Vec<u32>, C)],
    v: usize,
    vals: &[D],
    coeff: &dyn Fn(&C) -> D,
    powers: &mut HashMap<(usize, u32), D>,
) -> Result<D> {
    let exp = |m: &Vec<u32>| m.get(v).copied().unwrap_or(0);
    let mut total = vals[0].zero_like();
    if v == vals.len() {
        for (_, c) in terms {
            total = total.add(&coeff(c))?;
        }
        return Ok(total);
    }
    let mut start = 0;
    while start < terms.len() {
        let e = exp(&terms[start].0);
        let mut end = start + 1;
        while end < terms.len() && exp(&terms[end].0) == e {
            end += 1;
        }
        let mut inner = eval_nested(&terms[start..end], v + 1, vals, coeff, powers)?;
        if e > 0 && !inner.is_zero() {
            if let std::collections::hash_map::Entry::Vacant(slot) = powers.entry((v, e)) {
                slot.insert(vals[v].pow(e as u64)?);
            }
            inner = inner.mul(&powers[&(v, e)])?;
        }
        total = total.add(&inner)?;
        start = end;
    }
    Ok(total)
}

fn eval_poly<D: DigitRing>(
    proto: &D,
    terms: &[(Vec<u32>, BigInt)],
    modp: &[(Vec<u32>, u64)],
    vals: &[D],
) -> Result<D> {
    let mut powers = HashMap::new();
    if proto.characteristic().is_some() {
        eval_nested(modp, 0, vals, &|c: &u64| proto.lift_int(&BigInt::from(*c)), &mut powers)
    } else {
        eval_nested(terms, 0, vals, &|c: &BigInt| proto.lift_int(c), &mut powers)
    }
}

impl<D: DigitRing> WittVector<D> {
    pub fn new(p: u64, digits: Vec<D>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidElement(format!("{p} is not prime")));
        }
        if digits.is_empty() {
            return Err(Error::InvalidElement("a Witt vector needs at least one digit".into()));
        }
        if let Some(ch) = digits[0].characteristic() {
            if ch != p {
                return Err(Error::TagMismatch(format!("digits of characteristic {ch} in W_{p}")));
            }
        }
        if digits.iter().any(|d| !d.compatible(&digits[0])) {
            return Err(Error::TagMismatch("digits from different algebras".into()));
        }
        Ok(WittVector { p, digits })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digits(&self) -> &[D] {
        &self.digits
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(DigitRing::is_zero)
    }

    pub fn zero_like(&self) -> Self {
        WittVector {
            p: self.p,
            digits: vec![self.digits[0].zero_like(); self.len()],
        }
    }

    pub fn one_like(&self) -> Self {
        teichmuller(self.p, self.digits[0].one_like(), self.len())
    }

    fn check_pair(&self, other: &Self) -> Result<()> {
        if self.p != other.p || self.len() != other.len() {
            return Err(Error::TagMismatch(format!(
                "W_{}^{} vs W_{}^{}",
                self.p,
                self.len(),
                other.p,
                other.len()
            )));
        }
        if !self.digits[0].compatible(&other.digits[0]) {
            return Err(Error::TagMismatch("digit algebras differ".into()));
        }
        Ok(())
    }

    fn interleave(&self, other: &Self) -> Vec<D> {
        self.digits
            .iter()
            .zip(&other.digits)
            .flat_map(|(x, y)| [x.clone(), y.clone()])
            .collect()
    }

    fn combine(&self, other: &Self, product: bool) -> Result<Self> {
        self.check_pair(other)?;
        let n = self.len();
        let proto = &self.digits[0];
        if proto.characteristic().is_none() && !table_feasible(self.p, n - 1) {
            return self.combine_via_ghost(other, product);
        }
        let table = witt_table(self.p, n - 1)?;
        let vals = self.interleave(other);
        let (polys, modp) = if product {
            (&table.prod_terms, &table.prod_mod_p)
        } else {
            (&table.sum_terms, &table.sum_mod_p)
        };
        let digits = (0..n)
            .map(|k| eval_poly(proto, &polys[k], &modp[k], &vals))
            .collect::<Result<Vec<_>>>()?;
        Ok(WittVector { p: self.p, digits })
    }

    /// Integer digits only: componentwise ghost arithmetic followed by the
    /// exact inverse of the ghost map.
    fn combine_via_ghost(&self, other: &Self, product: bool) -> Result<Self> {
        let as_int = |v: &Self| -> Result<Vec<BigInt>> {
            v.digits
                .iter()
                .map(|d| d.as_integer().ok_or_else(|| Error::Unsupported("ghost route needs integer digits".into())))
                .collect()
        };
        let (gx, gy) = (ghost_int(self.p, &as_int(self)?), ghost_int(self.p, &as_int(other)?));
        let target: Vec<BigInt> = gx
            .iter()
            .zip(&gy)
            .map(|(a, b)| if product { a * b } else { a + b })
            .collect();
        let z = ghost_solve_int(self.p, &target)?;
        let proto = &self.digits[0];
        Ok(WittVector {
            p: self.p,
            digits: z.iter().map(|c| proto.lift_int(c)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, false)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.combine(other, true)
    }

    /// Additive inverse, found as the solution of `x + y = 0` digit by
    /// digit: `S_k` is `X_k + Y_k` plus terms in lower digits.
    pub fn neg(&self) -> Result<Self> {
        let n = self.len();
        let mut y = self.zero_like();
        for k in 0..n {
            let s = self.add(&y)?;
            // s_k = x_k + y_k + (lower terms); subtracting s_k from y_k kills it.
            let minus = s.digits[k].mul(&s.digits[k].lift_int(&BigInt::from(-1)))?;
            y.digits[k] = y.digits[k].add(&minus)?;
        }
        Ok(y)
    }

    /// `[p^k]` shift `V^k`: digits move up by `k`, the top ones drop.
    pub fn verschiebung(&self, k: usize) -> Self {
        let n = self.len();
        let zero = self.digits[0].zero_like();
        let mut digits = vec![zero; k.min(n)];
        digits.extend(self.digits.iter().take(n.saturating_sub(k)).cloned());
        WittVector { p: self.p, digits }
    }
}

/// `[a] = (a, 0, …, 0)`.
pub fn teichmuller<D: DigitRing>(p: u64, a: D, n: usize) -> WittVector<D> {
    let zero = a.zero_like();
    let mut digits = vec![zero; n.max(1)];
    digits[0] = a;
    WittVector { p, digits }
}

/// Ghost components of a vector with integer digits.
pub fn ghost(x: &WittVector<BigInt>) -> Vec<BigInt> {
    ghost_int(x.p, &x.digits)
}

/// The image of an integer `m` in `W_n(F_p) = Z/p^n`, digits as constant
/// Puiseux polynomials. Uses the Teichmüller expansion `m = Σ [a_i] p^i`;
/// over F_p the Witt digits coincide with the `a_i`.
pub fn witt_from_integer(m: &BigInt, p: u64, n: usize) -> Result<WittVector<PuiseuxPoly>> {
    if !is_prime(p) {
        return Err(Error::InvalidElement(format!("{p} is not prime")));
    }
    let modulus = BigInt::from(p).pow(n as u32);
    let teich_exp = BigInt::from(p).pow(n.saturating_sub(1) as u32);
    let lattice = Lattice::PPower { bound: 8 };
    let mut rest = m.mod_floor(&modulus);
    let mut digits = Vec::with_capacity(n);
    for _ in 0..n {
        let a = rest.mod_floor(&BigInt::from(p));
        let lift = a.modpow(&teich_exp, &modulus);
        rest = (&rest - &lift).mod_floor(&modulus);
        debug_assert!(rest.is_multiple_of(&BigInt::from(p)));
        rest /= p;
        digits.push(PuiseuxPoly::constant(p, lattice, a.to_i64().expect("digit below p")));
    }
    WittVector::new(p, digits)
}

impl WittVector<PuiseuxPoly> {
    /// Digitwise `d ↦ d^(p^m)`; negative `m` takes roots in the perfection.
    pub fn frobenius(&self, m: i64) -> Result<Self> {
        Ok(WittVector {
            p: self.p,
            digits: self.digits.iter().map(|d| d.frobenius(m)).collect::<Result<_>>()?,
        })
    }

    /// Teichmüller digits `a_i` with `x = Σ [a_i] p^i`, namely
    /// `a_i = d_i^(1/p^i)`.
    pub fn teichmuller_digits(&self) -> Result<Vec<PuiseuxPoly>> {
        self.digits
            .iter()
            .enumerate()
            .map(|(i, d)| d.frobenius(-(i as i64)))
            .collect()
    }

    pub fn from_teichmuller_digits(p: u64, a: &[PuiseuxPoly]) -> Result<Self> {
        let digits = a
            .iter()
            .enumerate()
            .map(|(i, d)| d.frobenius(i as i64))
            .collect::<Result<Vec<_>>>()?;
        WittVector::new(p, digits)
    }

    pub fn to_json(&self) -> Value {
        json!({"p": self.p, "digits": self.digits.iter().map(PuiseuxPoly::to_json).collect::<Vec<_>>()})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let p = v.get("p").and_then(Value::as_u64).ok_or_else(|| Error::Parse("Witt vector needs p".into()))?;
        let digits = v
            .get("digits")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("Witt vector needs digits".into()))?
            .iter()
            .map(|d| {
                let mut d = d.clone();
                if let Some(obj) = d.as_object_mut() {
                    obj.entry("p").or_insert(json!(p));
                }
                PuiseuxPoly::from_json(&d)
            })
            .collect::<Result<Vec<_>>>()?;
        WittVector::new(p, digits)
    }
}

/// `max_i |a_i|_r α^i` over the Teichmüller digits `a_i`, indexed from 0.
pub fn witt_alpha_norm(x: &WittVector<PuiseuxPoly>, alpha: &NormValue, r: &NormValue) -> Result<NormValue> {
    if alpha.is_zero() {
        return Err(Error::InvalidRadii("α must be positive".into()));
    }
    let mut best = NormValue::zero();
    for (i, a) in x.teichmuller_digits()?.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        best = best.max(&a.sup_norm(r)?.mul(&alpha.pow_int(i as i64)?));
    }
    Ok(best)
}

/// Whether `x` lies in the ball of radius `B` for the α-norm.
pub fn is_alpha_bounded(x: &WittVector<PuiseuxPoly>, alpha: &NormValue, r: &NormValue, bound: &NormValue) -> Result<bool> {
    Ok(witt_alpha_norm(x, alpha, r)?.le(bound))
}

/// Witt digits of an integer over Z (the ghost solve of the constant ghost
/// vector), used as an independent route to `witt_from_integer`.
pub fn integer_witt_digits(m: &BigInt, p: u64, n: usize) -> Result<Vec<BigInt>> {
    ghost_solve_int(p, &vec![m.clone(); n])
}

/// `m` as a vector of constant digits, reduced mod `p`.
pub fn reduce_digits(p: u64, digits: &[BigInt]) -> Result<WittVector<PuiseuxPoly>> {
    let lattice = Lattice::PPower { bound: 8 };
    let proto = PuiseuxPoly::zero(p, lattice);
    WittVector::new(p, digits.iter().map(|d| proto.lift_int(d)).collect())
}

/// Helper for tests and generators: a vector with small integer digits.
pub fn int_vector(p: u64, digits: &[i64]) -> Result<WittVector<BigInt>> {
    WittVector::new(p, digits.iter().map(|&d| BigInt::from(d)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ghost_route_matches_tables() {
        let x = int_vector(3, &[2, -1, 4]).unwrap();
        let y = int_vector(3, &[-3, 5, 1]).unwrap();
        assert_eq!(x.add(&y).unwrap(), x.combine_via_ghost(&y, false).unwrap());
        assert_eq!(x.mul(&y).unwrap(), x.combine_via_ghost(&y, true).unwrap());
    }

    #[test]
    fn feasibility_boundary() {
        assert!(table_feasible(2, 5) && table_feasible(3, 4) && table_feasible(5, 3));
        assert!(!table_feasible(5, 4) && !table_feasible(2, 6));
    }
}
