//! Base change from F1 to a Banach ring at finite support: elements
//! `Σ r_x x` over a normed set or a geometric monoid, their ℓ¹ and sup
//! Gauss norms, monoid-ring multiplication, and the quantitative checks
//! comparing the different ways of computing these norms.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::monoids::{Carrier, GeometricMonoid, NormSpec};
use crate::norm::{compensated_sum, NormValue, TAU};
use crate::normcore::{FiniteNormedSet, PointedMap};
use crate::rational::{format_rat, serde_rat, Rat};
use crate::scalars::{GroundScalar, ScalarNormSpec};

/// What an element is supported on.
#[derive(Clone, Debug)]
pub enum Base {
    Monoid(GeometricMonoid),
    Set(FiniteNormedSet),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseKey {
    Exp(Rat),
    Elem(String),
}

impl BaseKey {
    pub fn exp(&self) -> Option<&Rat> {
        match self {
            BaseKey::Exp(q) => Some(q),
            BaseKey::Elem(_) => None,
        }
    }
}

impl Base {
    fn check_key(&self, key: &BaseKey) -> Result<()> {
        match (self, key) {
            (Base::Monoid(m), BaseKey::Exp(q)) => m.check(q),
            (Base::Set(x), BaseKey::Elem(id)) => match x.index_of(id) {
                Some(i) if i == x.basepoint() => {
                    Err(Error::InvalidElement(format!("{id:?} is the basepoint")))
                }
                Some(_) => Ok(()),
                None => Err(Error::InvalidElement(format!("{id:?} is not in the base set"))),
            },
            _ => Err(Error::InvalidElement("key kind does not match the base".into())),
        }
    }

    /// Weight of a generator. Monoid generators `X^q` weigh `r^q`, with the
    /// unit monomial `X^0` of weight 1; `radius` replaces the monoid's norm.
    pub fn weight(&self, key: &BaseKey, radius: Option<&NormSpec>) -> NormValue {
        match (self, key) {
            (Base::Monoid(m), BaseKey::Exp(q)) => {
                if q.is_zero() {
                    return NormValue::one();
                }
                radius.unwrap_or(&m.spec).eval(q)
            }
            (Base::Set(x), BaseKey::Elem(id)) => x.norm_of(id).cloned().unwrap_or_else(NormValue::zero),
            _ => NormValue::zero(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Base::Monoid(m) => m.to_json(),
            Base::Set(x) => x.to_json(),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        if v.get("carrier").is_some() {
            Ok(Base::Monoid(GeometricMonoid::from_json(v)?))
        } else {
            Ok(Base::Set(FiniteNormedSet::from_json(v)?))
        }
    }
}

/// A finite combination `Σ r_x x` with all coefficients in one ring.
#[derive(Clone, Debug)]
pub struct F1Element {
    base: Base,
    terms: BTreeMap<BaseKey, GroundScalar>,
}

impl F1Element {
    pub fn new(base: Base, terms: impl IntoIterator<Item = (BaseKey, GroundScalar)>) -> Result<Self> {
        let mut out = F1Element {
            base,
            terms: BTreeMap::new(),
        };
        for (k, c) in terms {
            out.base.check_key(&k)?;
            out.add_term(k, c)?;
        }
        Ok(out)
    }

    pub fn zero(base: Base) -> Self {
        F1Element {
            base,
            terms: BTreeMap::new(),
        }
    }

    /// Convenience constructor over a monoid.
    pub fn over_monoid(m: &GeometricMonoid, terms: impl IntoIterator<Item = (Rat, GroundScalar)>) -> Result<Self> {
        Self::new(Base::Monoid(m.clone()), terms.into_iter().map(|(q, c)| (BaseKey::Exp(q), c)))
    }

    /// Convenience constructor over a normed set.
    pub fn over_set(x: &FiniteNormedSet, terms: impl IntoIterator<Item = (String, GroundScalar)>) -> Result<Self> {
        Self::new(Base::Set(x.clone()), terms.into_iter().map(|(id, c)| (BaseKey::Elem(id), c)))
    }

    fn add_term(&mut self, k: BaseKey, c: GroundScalar) -> Result<()> {
        if let Some((_, first)) = self.terms.iter().next() {
            if !first.same_ring(&c) {
                return Err(Error::TagMismatch(format!("{} vs {}", first.tag(), c.tag())));
            }
        }
        let sum = match self.terms.remove(&k) {
            Some(old) => old.add(&c)?,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(k, sum);
        }
        Ok(())
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn terms(&self) -> &BTreeMap<BaseKey, GroundScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn ring_tag(&self) -> Option<String> {
        self.terms.values().next().map(GroundScalar::tag)
    }

    pub fn coeff(&self, k: &BaseKey) -> Option<&GroundScalar> {
        self.terms.get(k)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone())?;
        }
        Ok(out)
    }

    /// Image under a pointed map of the base sets; coefficients landing on
    /// the same element are added, those landing on the basepoint vanish.
    pub fn pushforward(&self, f: &PointedMap) -> Result<Self> {
        let Base::Set(x) = &self.base else {
            return Err(Error::Unsupported("pushforward needs a normed-set base".into()));
        };
        if x.elements() != f.source.elements() {
            return Err(Error::InvalidMap("map source differs from the element's base".into()));
        }
        let mut out = F1Element::zero(Base::Set(f.target.clone()));
        for (k, c) in &self.terms {
            let BaseKey::Elem(id) = k else { unreachable!("set bases carry element keys") };
            let j = f.apply(x.index_of(id).expect("validated key"));
            if j != f.target.basepoint() {
                out.add_term(BaseKey::Elem(f.target.elements()[j].clone()), c.clone())?;
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(k, c)| match k {
                BaseKey::Exp(q) => json!({"exp": serde_rat::to_value(q), "coeff": c.to_json()}),
                BaseKey::Elem(id) => json!({"elem": id, "coeff": c.to_json()}),
            })
            .collect();
        json!({
            "base": self.base.to_json(),
            "ring": self.ring_tag(),
            "terms": terms,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let base = Base::from_json(v.get("base").ok_or_else(|| Error::Parse("element needs a base".into()))?)?;
        let mut terms = Vec::new();
        for t in v.get("terms").and_then(Value::as_array).into_iter().flatten() {
            let coeff = GroundScalar::from_json(t.get("coeff").ok_or_else(|| Error::Parse("term needs coeff".into()))?)?;
            let key = if let Some(q) = t.get("exp") {
                BaseKey::Exp(serde_rat::from_value(q)?)
            } else if let Some(id) = t.get("elem").and_then(Value::as_str) {
                BaseKey::Elem(id.to_string())
            } else {
                return Err(Error::Parse("term needs exp or elem".into()));
            };
            terms.push((key, coeff));
        }
        Self::new(base, terms)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    L1,
    Sup,
}

#[derive(Clone, Debug)]
pub struct GaussNormSpec {
    pub mode: Mode,
    pub scalar: ScalarNormSpec,
    /// Replaces the base monoid's own norm.
    pub radius: Option<NormSpec>,
}

impl GaussNormSpec {
    pub fn new(mode: Mode, scalar: ScalarNormSpec) -> Self {
        GaussNormSpec {
            mode,
            scalar,
            radius: None,
        }
    }

    pub fn at_radius(mut self, r: NormValue) -> Self {
        self.radius = Some(NormSpec::Single(r));
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "mode": match self.mode { Mode::L1 => "l1", Mode::Sup => "sup" },
            "scalar": self.scalar.to_json(),
            "radius": self.radius.as_ref().map(NormSpec::to_json),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let mode = match v.get("mode").and_then(Value::as_str).unwrap_or("l1") {
            "l1" => Mode::L1,
            "sup" => Mode::Sup,
            m => return Err(Error::Parse(format!("unknown mode {m:?}"))),
        };
        let scalar = match v.get("scalar") {
            Some(s) => ScalarNormSpec::from_json(s)?,
            None => ScalarNormSpec::Plain,
        };
        let radius = match v.get("radius") {
            None | Some(Value::Null) => None,
            Some(r) if r.is_object() && (r.get("radius").is_some() || r.get("radii").is_some() || r.get("frechet").is_some()) => {
                Some(NormSpec::from_json(r)?)
            }
            Some(r) => Some(NormSpec::Single(NormValue::from_json_loose(r)?)),
        };
        Ok(GaussNormSpec { mode, scalar, radius })
    }
}

/// Per-term contributions `|r_x| · |x|`.
pub fn term_norms(e: &F1Element, spec: &GaussNormSpec) -> Result<Vec<NormValue>> {
    e.terms
        .iter()
        .map(|(k, c)| Ok(c.norm(&spec.scalar)?.mul(&e.base.weight(k, spec.radius.as_ref()))))
        .collect()
}

/// `Σ |r_x| |x|` (ℓ¹) or `max |r_x| |x|` (sup).
pub fn bc_norm(e: &F1Element, spec: &GaussNormSpec) -> Result<NormValue> {
    let parts = term_norms(e, spec)?;
    Ok(match spec.mode {
        Mode::L1 => NormValue::sum(parts.iter()),
        Mode::Sup => NormValue::max_of(parts.iter()),
    })
}

fn same_monoid(a: &GeometricMonoid, b: &GeometricMonoid) -> bool {
    a.carrier == b.carrier && a.to_json() == b.to_json()
}

/// Cauchy product in the monoid ring `R[M]`.
pub fn convolve(f: &F1Element, g: &F1Element) -> Result<F1Element> {
    let (Base::Monoid(m1), Base::Monoid(m2)) = (&f.base, &g.base) else {
        return Err(Error::Unsupported("convolution needs a monoid base".into()));
    };
    if !same_monoid(m1, m2) {
        return Err(Error::TagMismatch("elements live over different monoids".into()));
    }
    if let (Some(a), Some(b)) = (f.ring_tag(), g.ring_tag()) {
        if a != b {
            return Err(Error::TagMismatch(format!("{a} vs {b}")));
        }
    }
    let mut out = F1Element::zero(f.base.clone());
    for (k1, c1) in &f.terms {
        for (k2, c2) in &g.terms {
            let q = k1.exp().expect("monoid key") + k2.exp().expect("monoid key");
            m1.check(&q)?;
            out.add_term(BaseKey::Exp(q), c1.mul(c2)?)?;
        }
    }
    Ok(out)
}

/// A probe for the tensor compatibility check: a sum of elementary tensors
/// `Σ a_i ⊗ b_i` with `a_i` over `X` and `b_i` over `Y`.
pub type TensorProbe = Vec<(F1Element, F1Element)>;

#[derive(Clone, Debug)]
pub struct TensorReport {
    /// Norm in `(X ∧ Y) ⊗ R`.
    pub left: NormValue,
    /// Norm in `(X ⊗ R) ⊗_R (Y ⊗ R)` via the codiagonal isometries
    /// `[R]_{|x|} ⊗ [R]_{|y|} -> [R]_{|x||y|}`.
    pub right: NormValue,
    /// `‖a‖·‖b‖` when the probe is a single elementary tensor.
    pub factor_product: Option<NormValue>,
}

/// Builds both sides of `(X ∧ Y) ⊗ R ≅ (X ⊗ R) ⊗_R (Y ⊗ R)` on each probe
/// and compares their ℓ¹ norms.
pub fn tensor_compat_check(
    x: &FiniteNormedSet,
    y: &FiniteNormedSet,
    scalar: &ScalarNormSpec,
    probes: &[TensorProbe],
) -> Result<Vec<TensorReport>> {
    let xy = crate::normcore::smash(x, y);
    let spec = GaussNormSpec::new(Mode::L1, scalar.clone());
    let mut reports = Vec::with_capacity(probes.len());
    for (n, probe) in probes.iter().enumerate() {
        // Bilinear expansion into coefficients of x ⊗ y.
        let mut coeffs: BTreeMap<(String, String), GroundScalar> = BTreeMap::new();
        for (a, b) in probe {
            for (ka, ca) in &a.terms {
                for (kb, cb) in &b.terms {
                    let (BaseKey::Elem(ia), BaseKey::Elem(ib)) = (ka, kb) else {
                        return Err(Error::Unsupported("tensor probes live over normed sets".into()));
                    };
                    let prod = ca.mul(cb)?;
                    let key = (ia.clone(), ib.clone());
                    let sum = match coeffs.remove(&key) {
                        Some(old) => old.add(&prod)?,
                        None => prod,
                    };
                    if !sum.is_zero() {
                        coeffs.insert(key, sum);
                    }
                }
            }
        }
        let left_elem = F1Element::over_set(
            &xy,
            coeffs.iter().map(|((a, b), c)| (format!("({a},{b})"), c.clone())),
        )?;
        let left = bc_norm(&left_elem, &spec)?;

        let mut right_parts = Vec::with_capacity(coeffs.len());
        for ((a, b), c) in &coeffs {
            let wx = x.norm_of(a).ok_or_else(|| Error::InvalidElement(a.clone()))?;
            let wy = y.norm_of(b).ok_or_else(|| Error::InvalidElement(b.clone()))?;
            right_parts.push(c.norm(scalar)?.mul(&wx.mul(wy)));
        }
        let right = NormValue::sum(right_parts.iter());

        let factor_product = match probe.as_slice() {
            [(a, b)] => Some(bc_norm(a, &spec)?.mul(&bc_norm(b, &spec)?)),
            _ => None,
        };
        if !left.approx_eq(&right) {
            return Err(Error::CounterexampleFound(format!(
                "probe {n}: smash route {left} vs codiagonal route {right}"
            )));
        }
        reports.push(TensorReport {
            left,
            right,
            factor_product,
        });
    }
    Ok(reports)
}

#[derive(Clone, Debug)]
pub struct CofinalityReport {
    pub l1_at_rho_prime: NormValue,
    pub sup_at_rho: NormValue,
    /// `(1 - ρ'/ρ)^(-1)` for N-support, `Σ_q (ρ'/ρ)^q` otherwise.
    pub constant: NormValue,
    pub bound: NormValue,
    pub geometric: bool,
}

impl CofinalityReport {
    pub fn to_json(&self) -> Value {
        json!({
            "l1_at_rho_prime": self.l1_at_rho_prime.to_json(),
            "sup_at_rho": self.sup_at_rho.to_json(),
            "constant": self.constant.to_json(),
            "bound": self.bound.to_json(),
            "geometric": self.geometric,
        })
    }
}

/// `(1 - t)^(-1)` for `0 < t < 1`, exact when `t` is rational.
fn geometric_constant(t: &NormValue) -> Result<NormValue> {
    if let Some(q) = t.to_rat() {
        return NormValue::from_rat(&(Rat::one() - q).recip());
    }
    NormValue::from_f64(1.0 / (-t.to_f64()).ln_1p().exp_m1().abs())
}

/// Compares the ℓ¹ norm at `ρ'` with the sup norm at `ρ > ρ'`. For
/// support in N the bound is `sup · (1 - ρ'/ρ)^(-1)`; for other finite
/// supports it is the support-dependent `sup · Σ_q (ρ'/ρ)^q`.
pub fn cofinality_check(a: &F1Element, rho: &NormValue, rho_prime: &NormValue, scalar: &ScalarNormSpec) -> Result<CofinalityReport> {
    if rho_prime.is_zero() || !rho_prime.le_tol(rho, 0.0) || rho_prime.exact_eq(rho) == Some(true) {
        return Err(Error::InvalidRadii(format!("need 0 < ρ' < ρ, got ρ' = {rho_prime}, ρ = {rho}")));
    }
    let Base::Monoid(_) = &a.base else {
        return Err(Error::Unsupported("cofinality is defined over exponent monoids".into()));
    };
    let l1 = bc_norm(a, &GaussNormSpec::new(Mode::L1, scalar.clone()).at_radius(rho_prime.clone()))?;
    let sup = bc_norm(a, &GaussNormSpec::new(Mode::Sup, scalar.clone()).at_radius(rho.clone()))?;
    let ratio = rho_prime.div(rho)?;
    let geometric = a
        .terms
        .keys()
        .all(|k| k.exp().is_some_and(|q| q.is_integer() && !q.is_negative()));
    let constant = if geometric {
        geometric_constant(&ratio)?
    } else {
        let parts: Vec<NormValue> = a
            .terms
            .keys()
            .map(|k| ratio.pow(k.exp().expect("monoid key")))
            .collect::<Result<_>>()?;
        NormValue::sum(parts.iter())
    };
    let bound = sup.mul(&constant);
    if !l1.le(&bound) {
        return Err(Error::CounterexampleFound(format!(
            "ℓ¹ at ρ' = {l1} exceeds sup at ρ times constant = {bound}"
        )));
    }
    Ok(CofinalityReport {
        l1_at_rho_prime: l1,
        sup_at_rho: sup,
        constant,
        bound,
        geometric,
    })
}

/// Nuclearity witness along increasing radii `ρ_0 < ρ_1 < …`: each sup
/// norm at `ρ_k` controls the ℓ¹ norm at `ρ_{k-1}` through the cofinality
/// constant, and the sup norm never exceeds the ℓ¹ norm at the same radius.
pub fn nuclearity_witness(a: &F1Element, radii: &[NormValue], scalar: &ScalarNormSpec) -> Result<Vec<CofinalityReport>> {
    let mut out = Vec::new();
    for r in radii {
        let l1 = bc_norm(a, &GaussNormSpec::new(Mode::L1, scalar.clone()).at_radius(r.clone()))?;
        let sup = bc_norm(a, &GaussNormSpec::new(Mode::Sup, scalar.clone()).at_radius(r.clone()))?;
        if !sup.le(&l1) {
            return Err(Error::InternalError(format!("sup {sup} exceeds ℓ¹ {l1} at radius {r}")));
        }
    }
    for w in radii.windows(2) {
        out.push(cofinality_check(a, &w[1], &w[0], scalar)?);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct FamilyReport {
    /// Member norms computed by base change first, then the member norm.
    pub base_change_first: Vec<NormValue>,
    /// Member norms computed from per-generator member norms summed over
    /// the support.
    pub member_first: Vec<NormValue>,
}

/// Finite-support shadow of `M ⊗ lim R_i ≅ lim (M ⊗ R_i)`: for each probe
/// element and each member norm of the ring family, the two orders of
/// evaluation agree.
pub fn family_base_change(family: &[ScalarNormSpec], probes: &[F1Element]) -> Result<Vec<FamilyReport>> {
    let mut out = Vec::with_capacity(probes.len());
    for (n, e) in probes.iter().enumerate() {
        let base_change_first: Vec<NormValue> = family
            .iter()
            .map(|s| bc_norm(e, &GaussNormSpec::new(Mode::L1, s.clone())))
            .collect::<Result<_>>()?;
        // Rows are generators, columns are members; sum each column after
        // computing the whole table.
        let mut table: Vec<Vec<f64>> = Vec::with_capacity(e.terms.len());
        let mut exact_table: Vec<Vec<NormValue>> = Vec::with_capacity(e.terms.len());
        for (k, c) in &e.terms {
            let w = e.base.weight(k, None);
            let row: Vec<NormValue> = family.iter().map(|s| Ok(c.norm(s)?.mul(&w))).collect::<Result<_>>()?;
            table.push(row.iter().map(NormValue::to_f64).collect());
            exact_table.push(row);
        }
        let member_first: Vec<NormValue> = (0..family.len())
            .map(|i| {
                let column: Vec<NormValue> = exact_table.iter().rev().map(|row| row[i].clone()).collect();
                NormValue::sum(column.iter())
            })
            .collect();
        for (i, (a, b)) in base_change_first.iter().zip(&member_first).enumerate() {
            if !a.approx_eq(b) {
                return Err(Error::CounterexampleFound(format!("probe {n}, member {i}: {a} vs {b}")));
            }
        }
        // Interchanging the two coproducts with member weights 1/(i+1).
        let by_member = compensated_sum(base_change_first.iter().enumerate().map(|(i, v)| v.to_f64() / (i + 1) as f64));
        let by_generator = compensated_sum(
            table
                .iter()
                .map(|row| compensated_sum(row.iter().enumerate().map(|(i, v)| v / (i + 1) as f64))),
        );
        if (by_member - by_generator).abs() > TAU * by_member.abs().max(by_generator.abs()) {
            return Err(Error::CounterexampleFound(format!(
                "probe {n}: interchanged sums {by_member} vs {by_generator}"
            )));
        }
        out.push(FamilyReport {
            base_change_first,
            member_first,
        });
    }
    Ok(out)
}

/// Adjunction shadow: a pointed map `φ: X -> R` of bound `C` extends
/// linearly to `X ⊗ R -> R` with operator norm `C` for the ℓ¹ norm.
/// Checks equality on deltas and the bound `|Φ(e)| <= C ‖e‖` on probes.
pub fn adjunction_check(
    x: &FiniteNormedSet,
    phi: &BTreeMap<String, GroundScalar>,
    scalar: &ScalarNormSpec,
    probes: &[F1Element],
) -> Result<NormValue> {
    let mut c = NormValue::zero();
    for i in x.non_base() {
        let id = &x.elements()[i];
        let Some(v) = phi.get(id) else { continue };
        let image = v.norm(scalar)?;
        if image.is_zero() {
            continue;
        }
        let src = x.norm(i);
        if src.is_zero() {
            return Err(Error::Unbounded(format!("{id:?} has norm 0 but φ({id}) ≠ 0")));
        }
        c = c.max(&image.div(src)?);
    }
    let spec = GaussNormSpec::new(Mode::L1, scalar.clone());
    let extend = |e: &F1Element| -> Result<Option<GroundScalar>> {
        let mut acc: Option<GroundScalar> = None;
        for (k, r) in &e.terms {
            let BaseKey::Elem(id) = k else { unreachable!("set base") };
            let Some(v) = phi.get(id) else { continue };
            let t = r.mul(v)?;
            acc = Some(match acc {
                Some(a) => a.add(&t)?,
                None => t,
            });
        }
        Ok(acc)
    };
    let value_norm = |v: Option<GroundScalar>| -> Result<NormValue> {
        match v {
            None => Ok(NormValue::zero()),
            Some(v) if v.is_zero() => Ok(NormValue::zero()),
            Some(v) => v.norm(scalar),
        }
    };
    // On deltas the ratio equals |φ(x)|/|x|; the largest is C.
    let mut delta_max = NormValue::zero();
    for i in x.non_base() {
        let id = x.elements()[i].clone();
        let Some(v) = phi.get(&id) else { continue };
        if x.norm(i).is_zero() {
            continue;
        }
        let delta = F1Element::over_set(x, [(id, v.one_like())])?;
        let ratio = value_norm(extend(&delta)?)?.div(&bc_norm(&delta, &spec)?)?;
        delta_max = delta_max.max(&ratio);
    }
    if !delta_max.approx_eq(&c) {
        return Err(Error::CounterexampleFound(format!("delta ratios peak at {delta_max}, bound is {c}")));
    }
    for (n, e) in probes.iter().enumerate() {
        let lhs = value_norm(extend(e)?)?;
        let rhs = c.mul(&bc_norm(e, &spec)?);
        if !lhs.le(&rhs) {
            return Err(Error::CounterexampleFound(format!("probe {n}: |Φ(e)| = {lhs} > C‖e‖ = {rhs}")));
        }
    }
    Ok(c)
}

/// For an isometric inclusion `X -> Y`, elements over `X` keep their ℓ¹
/// and sup norms when pushed into `Y`.
pub fn strict_mono_check(inclusion: &PointedMap, elements: &[F1Element], scalar: &ScalarNormSpec) -> Result<()> {
    let class = crate::normcore::classify_morphism(inclusion)?;
    if !(class.mono && class.isometric_strict) {
        return Err(Error::InvalidMap("map is not an isometric inclusion".into()));
    }
    for (n, e) in elements.iter().enumerate() {
        let pushed = e.pushforward(inclusion)?;
        for mode in [Mode::L1, Mode::Sup] {
            let spec = GaussNormSpec::new(mode, scalar.clone());
            let (a, b) = (bc_norm(e, &spec)?, bc_norm(&pushed, &spec)?);
            if !a.approx_eq(&b) {
                return Err(Error::CounterexampleFound(format!("element {n}, {mode:?}: {a} over X vs {b} over Y")));
            }
        }
    }
    Ok(())
}

/// A monoid over N with the given radius, used by cofinality helpers.
pub fn n_monoid(r: &Rat) -> Result<GeometricMonoid> {
    if !r.is_positive() {
        return Err(Error::InvalidRadii(format!("radius {} is not positive", format_rat(r))));
    }
    GeometricMonoid::single(Carrier::N, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::scalars::Padic;
    use num_bigint::BigInt;

    fn nv(n: i64, d: i64) -> NormValue {
        NormValue::from_rat(&rat(n, d)).unwrap()
    }

    fn q2(m: i64) -> GroundScalar {
        GroundScalar::Padic(Padic::from_i64(m, 2, 32))
    }

    #[test]
    fn bc_norm_examples() {
        let x = FiniteNormedSet::from_pairs(&[("a", nv(1, 2)), ("b", nv(3, 1))]).unwrap();
        let e = F1Element::over_set(&x, [("a".to_string(), q2(2)), ("b".to_string(), q2(1))]).unwrap();
        let l1 = bc_norm(&e, &GaussNormSpec::new(Mode::L1, ScalarNormSpec::Plain)).unwrap();
        assert_eq!(l1.to_rat(), Some(rat(13, 4)));
        let sup = bc_norm(&e, &GaussNormSpec::new(Mode::Sup, ScalarNormSpec::Plain)).unwrap();
        assert_eq!(sup.to_rat(), Some(int(3)));
        let empty = F1Element::zero(Base::Set(x));
        assert!(bc_norm(&empty, &GaussNormSpec::new(Mode::L1, ScalarNormSpec::Plain)).unwrap().is_zero());
    }

    #[test]
    fn convolve_examples() {
        let m = n_monoid(&rat(1, 2)).unwrap();
        let one = GroundScalar::fp(2, 1);
        let f = F1Element::over_monoid(&m, [(int(0), one.clone()), (int(1), one.clone())]).unwrap();
        let sq = convolve(&f, &f).unwrap();
        assert_eq!(sq.terms().len(), 2);
        assert!(sq.coeff(&BaseKey::Exp(int(1))).is_none());
        let l1 = bc_norm(&sq, &GaussNormSpec::new(Mode::L1, ScalarNormSpec::Plain)).unwrap();
        assert_eq!(l1.to_rat(), Some(rat(5, 4)));
        let unit = F1Element::over_monoid(&m, [(int(0), one.clone())]).unwrap();
        assert_eq!(convolve(&f, &unit).unwrap().to_json(), f.to_json());
        let da = F1Element::over_monoid(&m, [(int(2), GroundScalar::fp(3, 2))]).unwrap();
        let db = F1Element::over_monoid(&m, [(int(3), GroundScalar::fp(3, 2))]).unwrap();
        let dab = convolve(&da, &db).unwrap();
        assert_eq!(dab.coeff(&BaseKey::Exp(int(5))), Some(&GroundScalar::fp(3, 1)));
        let other = F1Element::over_monoid(&m, [(int(0), GroundScalar::fp(3, 1))]).unwrap();
        assert!(matches!(convolve(&f, &other), Err(Error::TagMismatch(_))));
    }

    #[test]
    fn tensor_compat_examples() {
        let x = FiniteNormedSet::from_pairs(&[("a", nv(2, 1))]).unwrap();
        let y = FiniteNormedSet::from_pairs(&[("c", nv(3, 1))]).unwrap();
        let one = GroundScalar::fp(5, 1);
        let a = F1Element::over_set(&x, [("a".to_string(), one.clone())]).unwrap();
        let c = F1Element::over_set(&y, [("c".to_string(), one)]).unwrap();
        let r = tensor_compat_check(&x, &y, &ScalarNormSpec::Plain, &[vec![(a.clone(), c)]]).unwrap();
        assert_eq!(r[0].left.to_rat(), Some(int(6)));
        assert_eq!(r[0].right.to_rat(), Some(int(6)));
        assert_eq!(r[0].factor_product.as_ref().unwrap().to_rat(), Some(int(6)));

        let pt = FiniteNormedSet::point();
        let zero = F1Element::zero(Base::Set(pt.clone()));
        let r = tensor_compat_check(&x, &pt, &ScalarNormSpec::Plain, &[vec![(a, zero)]]).unwrap();
        assert!(r[0].left.is_zero() && r[0].right.is_zero());
    }

    #[test]
    fn cofinality_examples() {
        let m = n_monoid(&rat(1, 2)).unwrap();
        let ones = F1Element::over_monoid(&m, (0..=10).map(|n| (int(n), q2(1)))).unwrap();
        let rep = cofinality_check(&ones, &nv(1, 2), &nv(1, 4), &ScalarNormSpec::Plain).unwrap();
        assert_eq!(rep.sup_at_rho.to_rat(), Some(int(1)));
        // Σ_{n≤10} 4^{-n}, by hand: (1 - 4^{-11}) / (3/4)
        let expected = (Rat::one() - rat(1, 4_194_304)) * rat(4, 3);
        assert_eq!(rep.l1_at_rho_prime.to_rat(), Some(expected));
        assert_eq!(rep.bound.to_rat(), Some(int(2)));

        let z = |n: i64| GroundScalar::ArchInt { beta: int(1), value: BigInt::from(2).pow(n as u32) };
        let pow2 = F1Element::over_monoid(&m, (0..=10).map(|n| (int(n), z(n)))).unwrap();
        let rep = cofinality_check(&pow2, &nv(1, 2), &nv(1, 4), &ScalarNormSpec::Plain).unwrap();
        assert_eq!(rep.sup_at_rho.to_rat(), Some(int(1)));
        assert!(rep.l1_at_rho_prime.to_f64() < 2.0);

        let single = F1Element::over_monoid(&m, [(int(3), q2(1))]).unwrap();
        let rep = cofinality_check(&single, &nv(1, 2), &nv(1, 4), &ScalarNormSpec::Plain).unwrap();
        let sup_prime = bc_norm(&single, &GaussNormSpec::new(Mode::Sup, ScalarNormSpec::Plain).at_radius(nv(1, 4))).unwrap();
        assert!(rep.l1_at_rho_prime.approx_eq(&sup_prime));
        assert!(sup_prime.le(&rep.sup_at_rho));
        assert!(matches!(
            cofinality_check(&single, &nv(1, 4), &nv(1, 2), &ScalarNormSpec::Plain),
            Err(Error::InvalidRadii(_))
        ));
    }

    #[test]
    fn family_examples() {
        let x = FiniteNormedSet::from_pairs(&[("a", nv(1, 2)), ("b", nv(2, 1)), ("c", nv(1, 3))]).unwrap();
        let fam = [
            ScalarNormSpec::two_sided(rat(1, 2), int(2)).unwrap(),
            ScalarNormSpec::two_sided(rat(1, 3), int(3)).unwrap(),
        ];
        let delta = F1Element::over_set(&x, [("a".to_string(), q2(4))]).unwrap();
        let three = F1Element::over_set(&x, [("a".into(), q2(4)), ("b".into(), q2(3)), ("c".into(), q2(6))]).unwrap();
        let reps = family_base_change(&fam, &[delta, three]).unwrap();
        assert_eq!(reps.len(), 2);
        assert!(family_base_change(&fam, &[]).unwrap().is_empty());
    }

    #[test]
    fn adjunction_and_strict_mono() {
        let x = FiniteNormedSet::from_pairs(&[("a", nv(1, 2)), ("b", nv(2, 1))]).unwrap();
        let phi: BTreeMap<String, GroundScalar> = [("a".to_string(), q2(1)), ("b".to_string(), q2(4))].into();
        let e = F1Element::over_set(&x, [("a".into(), q2(3)), ("b".into(), q2(1))]).unwrap();
        let c = adjunction_check(&x, &phi, &ScalarNormSpec::Plain, std::slice::from_ref(&e)).unwrap();
        assert_eq!(c.to_rat(), Some(int(2)));

        let y = FiniteNormedSet::from_pairs(&[("a", nv(1, 2)), ("b", nv(2, 1)), ("z", nv(7, 1))]).unwrap();
        let inc = PointedMap::from_fn(x, y, |id| id.to_string()).unwrap();
        strict_mono_check(&inc, &[e], &ScalarNormSpec::Plain).unwrap();
    }

    #[test]
    fn json_round_trip() {
        let m = n_monoid(&rat(1, 2)).unwrap();
        let f = F1Element::over_monoid(&m, [(int(0), q2(3)), (int(2), q2(-4))]).unwrap();
        let back = F1Element::from_json(&f.to_json()).unwrap();
        assert_eq!(back.to_json(), f.to_json());
        let spec = GaussNormSpec::new(Mode::Sup, ScalarNormSpec::Exponent(rat(1, 2))).at_radius(nv(1, 3));
        let back = GaussNormSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back.to_json(), spec.to_json());
    }
}
