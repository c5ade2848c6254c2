//! Integer polynomials in the Witt variables and the tables of Witt sum and
//! product polynomials, solved from the ghost components.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::rational::is_prime;

/// Largest table depth accepted by [`gen_witt_polys`].
pub const MAX_DEPTH: usize = 6;

/// Term budget per polynomial during the ghost solve.
pub const TERM_BUDGET: usize = 400_000;

/// Variable index of `X_i`; `Y_i` is the next one. Interleaving keeps the
/// variables of `S_k` a prefix of those of `S_{k+1}`.
pub fn var_x(i: usize) -> usize {
    2 * i
}

pub fn var_y(i: usize) -> usize {
    2 * i + 1
}

/// Number of variables a monomial can hold: `X_0..X_d`, `Y_0..Y_d` at the
/// largest depth.
const NVARS: usize = 2 * (MAX_DEPTH + 1);

type Mono = [u32; NVARS];

fn pack(m: &[u32]) -> Mono {
    assert!(m.len() <= NVARS || m[NVARS..].iter().all(|&e| e == 0), "monomial uses more than {NVARS} variables");
    let mut out = [0; NVARS];
    for (o, &e) in out.iter_mut().zip(m) {
        *o = e;
    }
    out
}

fn unpack(m: &Mono) -> Vec<u32> {
    let len = m.iter().rposition(|&e| e != 0).map_or(0, |i| i + 1);
    m[..len].to_vec()
}

/// A polynomial with integer coefficients. Monomials are exponent vectors
/// in the interleaved Witt variables, with trailing zeros trimmed at the
/// API boundary.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntPoly {
    terms: FxHashMap<Mono, BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigInt) -> Self {
        let mut out = Self::zero();
        out.add_term([0; NVARS], c);
        out
    }

    pub fn var(v: usize) -> Self {
        let mut m = [0; NVARS];
        m[v] = 1;
        let mut out = Self::zero();
        out.add_term(m, BigInt::one());
        out
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>) -> Self {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.add_term(pack(&m), c);
        }
        out
    }

    fn add_term(&mut self, m: Mono, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Vec<u32>, &BigInt)> {
        self.terms.iter().map(|(m, c)| (unpack(m), c))
    }

    /// Terms in lexicographic monomial order.
    pub fn sorted_terms(&self) -> Vec<(Vec<u32>, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_unstable_by(|a, b| a.0.cmp(b.0));
        v.into_iter().map(|(m, c)| (unpack(m), c)).collect()
    }

    pub fn coeff(&self, m: &[u32]) -> BigInt {
        self.terms.get(&pack(m)).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c);
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        IntPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero();
        let mut t = BigInt::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut m = *m1;
                for (a, b) in m.iter_mut().zip(m2) {
                    *a = a.checked_add(*b).ok_or_else(|| Error::TooLarge("monomial exponent overflow".into()))?;
                }
                t.clone_from(c1);
                t *= c2;
                out.add_term(m, t.clone());
            }
            if out.len() > TERM_BUDGET {
                return Err(Error::TooLarge(format!("polynomial product exceeds {TERM_BUDGET} terms")));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut k: u64) -> Result<Self> {
        let mut base = self.clone();
        let mut acc = Self::constant(BigInt::one());
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

    /// Exact division of every coefficient; fails if one is not divisible.
    pub fn div_exact(&self, d: &BigInt) -> Option<Self> {
        let mut terms = FxHashMap::default();
        terms.reserve(self.terms.len());
        for (m, c) in &self.terms {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            terms.insert(*m, q);
        }
        Some(IntPoly { terms })
    }

    /// Coefficients reduced into `[0, p)`, zero terms dropped.
    pub fn reduce_mod(&self, p: u64) -> Vec<(Vec<u32>, u64)> {
        let pb = BigInt::from(p);
        let mut out: Vec<(Vec<u32>, u64)> = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let r = c.mod_floor(&pb);
                (!r.is_zero()).then(|| (unpack(m), r.try_into().expect("residue below p")))
            })
            .collect();
        out.sort();
        out
    }

    /// Evaluates at integer values of the variables.
    pub fn eval_int(&self, vals: &[BigInt]) -> BigInt {
        let mut cache: HashMap<(usize, u32), BigInt> = HashMap::new();
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.iter().enumerate().take(vals.len()) {
                if e == 0 {
                    continue;
                }
                let pw = cache.entry((v, e)).or_insert_with(|| num_traits::pow::pow(vals[v].clone(), e as usize));
                t *= &*pw;
            }
            total += t;
        }
        total
    }
}

/// Ghost component `w_k = Σ_{i≤k} p^i V_i^(p^(k-i))` for the variable
/// family `var(i)`.
pub fn ghost_poly(p: u64, k: usize, var: impl Fn(usize) -> usize) -> Result<IntPoly> {
    let mut out = IntPoly::zero();
    for i in 0..=k {
        let e = (p as u32).pow((k - i) as u32);
        let mut m = vec![0; var(i) + 1];
        m[var(i)] = e;
        out = out.add(&IntPoly::from_terms([(m, BigInt::from(p).pow(i as u32))]));
    }
    Ok(out)
}

/// Integer ghost components of a digit vector.
pub fn ghost_int(p: u64, digits: &[BigInt]) -> Vec<BigInt> {
    (0..digits.len())
        .map(|k| {
            (0..=k)
                .map(|i| BigInt::from(p).pow(i as u32) * num_traits::pow::pow(digits[i].clone(), (p as usize).pow((k - i) as u32)))
                .sum()
        })
        .collect()
}

/// Solves digits `z` with `ghost(z) = target` by the recursion
/// `p^k z_k = target_k - Σ_{i<k} p^i z_i^(p^(k-i))`, checking every
/// division is exact.
pub fn ghost_solve_int(p: u64, target: &[BigInt]) -> Result<Vec<BigInt>> {
    let mut z: Vec<BigInt> = Vec::with_capacity(target.len());
    for (k, t) in target.iter().enumerate() {
        let mut rest = t.clone();
        for (i, zi) in z.iter().enumerate() {
            rest -= BigInt::from(p).pow(i as u32) * num_traits::pow::pow(zi.clone(), (p as usize).pow((k - i) as u32));
        }
        let (q, r) = rest.div_rem(&BigInt::from(p).pow(k as u32));
        if !r.is_zero() {
            return Err(Error::InternalError(format!("ghost solve is not integral at digit {k}")));
        }
        z.push(q);
    }
    Ok(z)
}

/// Witt sum and product polynomials `S_0..S_n`, `P_0..P_n`.
#[derive(Debug)]
pub struct WittPolyTable {
    pub p: u64,
    pub depth: usize,
    pub sum: Vec<IntPoly>,
    pub prod: Vec<IntPoly>,
    /// Sorted integer terms, for evaluation in characteristic zero.
    pub sum_terms: Vec<Vec<(Vec<u32>, BigInt)>>,
    pub prod_terms: Vec<Vec<(Vec<u32>, BigInt)>>,
    /// Coefficients reduced mod `p`, for evaluation in characteristic `p`.
    pub sum_mod_p: Vec<Vec<(Vec<u32>, u64)>>,
    pub prod_mod_p: Vec<Vec<(Vec<u32>, u64)>>,
}

/// Solves `p^k z_k = target - Σ_{i<k} p^i z_i^(p^(k-i))`, where
/// `powered[i]` already holds `z_i^(p^(k-i))`.
fn solve_next(p: u64, k: usize, ghost_target: &IntPoly, powered: &[IntPoly]) -> Result<IntPoly> {
    let mut rest = ghost_target.clone();
    for (i, zp) in powered.iter().enumerate() {
        rest = rest.sub(&zp.scale(&BigInt::from(p).pow(i as u32)));
    }
    rest.div_exact(&BigInt::from(p).pow(k as u32))
        .ok_or_else(|| Error::InternalError(format!("Witt polynomial of degree {k} is not integral for p = {p}")))
}

/// Raises each stored power to the `p`-th and appends `newest^p`.
fn advance_powers(p: u64, powered: &mut Vec<IntPoly>, newest: &IntPoly) -> Result<()> {
    for z in powered.iter_mut() {
        *z = z.pow(p)?;
    }
    powered.push(newest.pow(p)?);
    Ok(())
}

/// Builds the table by solving the ghost identities over the integers and
/// asserting exact divisibility at each step.
pub fn gen_witt_polys(p: u64, n: usize) -> Result<WittPolyTable> {
    if !is_prime(p) {
        return Err(Error::InvalidElement(format!("{p} is not prime")));
    }
    if n > MAX_DEPTH {
        return Err(Error::TooLarge(format!("depth {n} exceeds {MAX_DEPTH}")));
    }
    let mut sum = Vec::with_capacity(n + 1);
    let mut prod = Vec::with_capacity(n + 1);
    let (mut sum_pows, mut prod_pows) = (Vec::new(), Vec::new());
    for k in 0..=n {
        if k > 0 {
            advance_powers(p, &mut sum_pows, &sum[k - 1])?;
            advance_powers(p, &mut prod_pows, &prod[k - 1])?;
        }
        let wx = ghost_poly(p, k, var_x)?;
        let wy = ghost_poly(p, k, var_y)?;
        sum.push(solve_next(p, k, &wx.add(&wy), &sum_pows)?);
        prod.push(solve_next(p, k, &wx.mul(&wy)?, &prod_pows)?);
    }
    Ok(WittPolyTable {
        p,
        depth: n,
        sum_mod_p: sum.iter().map(|s| s.reduce_mod(p)).collect(),
        prod_mod_p: prod.iter().map(|s| s.reduce_mod(p)).collect(),
        sum_terms: sum.iter().map(owned_sorted).collect(),
        prod_terms: prod.iter().map(owned_sorted).collect(),
        sum,
        prod,
    })
}

fn owned_sorted(f: &IntPoly) -> Vec<(Vec<u32>, BigInt)> {
    f.sorted_terms().into_iter().map(|(m, c)| (m, c.clone())).collect()
}

type TableCache = Mutex<HashMap<(u64, usize), Arc<WittPolyTable>>>;

/// Shared table of at least depth `n`, computed once per prime.
pub fn witt_table(p: u64, n: usize) -> Result<Arc<WittPolyTable>> {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("table cache").get(&(p, n)) {
        return Ok(t.clone());
    }
    let table = Arc::new(gen_witt_polys(p, n)?);
    cache.lock().expect("table cache").insert((p, n), table.clone());
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(pairs: &[(usize, u32)]) -> Vec<u32> {
        let len = pairs.iter().map(|&(v, _)| v + 1).max().unwrap_or(0);
        let mut m = vec![0; len];
        for &(v, e) in pairs {
            m[v] = e;
        }
        m
    }

    #[test]
    fn low_degree_polynomials() {
        let t = gen_witt_polys(2, 1).unwrap();
        let s0 = IntPoly::var(var_x(0)).add(&IntPoly::var(var_y(0)));
        assert_eq!(t.sum[0], s0);
        assert_eq!(t.prod[0], IntPoly::var(var_x(0)).mul(&IntPoly::var(var_y(0))).unwrap());
        // S_1 = X_1 + Y_1 - X_0 Y_0 for p = 2
        let s1 = IntPoly::from_terms([
            (mono(&[(var_x(1), 1)]), BigInt::from(1)),
            (mono(&[(var_y(1), 1)]), BigInt::from(1)),
            (mono(&[(var_x(0), 1), (var_y(0), 1)]), BigInt::from(-1)),
        ]);
        assert_eq!(t.sum[1], s1);
        // P_1 = X_0^2 Y_1 + X_1 Y_0^2 + 2 X_1 Y_1
        let p1 = IntPoly::from_terms([
            (mono(&[(var_x(0), 2), (var_y(1), 1)]), BigInt::from(1)),
            (mono(&[(var_x(1), 1), (var_y(0), 2)]), BigInt::from(1)),
            (mono(&[(var_x(1), 1), (var_y(1), 1)]), BigInt::from(2)),
        ]);
        assert_eq!(t.prod[1], p1);
        for p in [3, 5, 7] {
            let t = gen_witt_polys(p, 0).unwrap();
            assert_eq!(t.sum[0], s0);
        }
    }

    #[test]
    fn guards() {
        assert!(matches!(gen_witt_polys(4, 1), Err(Error::InvalidElement(_))));
        assert!(matches!(gen_witt_polys(2, 7), Err(Error::TooLarge(_))));
    }

    #[test]
    fn ghost_solve_inverts_ghost_map() {
        let d: Vec<BigInt> = [3, -2, 5].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(ghost_solve_int(3, &ghost_int(3, &d)).unwrap(), d);
        let bad = vec![BigInt::from(0), BigInt::from(1)];
        assert!(ghost_solve_int(2, &bad).is_err());
    }
}
