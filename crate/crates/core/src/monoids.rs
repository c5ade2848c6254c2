//! Geometric normed monoids: N, Z, fractional and p-divisible variants and
//! finitely supported Q, with norms `r^q` or a two-radius piecewise norm.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::norm::NormValue;
use crate::rational::{format_rat, int, is_prime, rat, serde_rat, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Carrier {
    N,
    Z,
    /// `(1/n) N`
    FracN(u64),
    /// `(1/n) Z`
    FracZ(u64),
    QPos,
    Q,
    /// `Z[1/p]`
    ZInvP(u64),
    /// Nonnegative part of `Z[1/p]`.
    ZInvPPos(u64),
}

impl Carrier {
    pub fn contains(&self, q: &Rat) -> bool {
        let nonneg = !q.is_negative();
        let den = q.denom();
        let den_divides = |n: u64| (BigInt::from(n) % den).is_zero();
        let p_power_den = |p: u64| {
            let mut d = den.clone();
            let p = BigInt::from(p);
            while (&d % &p).is_zero() {
                d /= &p;
            }
            d.is_one()
        };
        match self {
            Carrier::N => nonneg && q.is_integer(),
            Carrier::Z => q.is_integer(),
            Carrier::FracN(n) => nonneg && den_divides(*n),
            Carrier::FracZ(n) => den_divides(*n),
            Carrier::QPos => nonneg,
            Carrier::Q => true,
            Carrier::ZInvP(p) => p_power_den(*p),
            Carrier::ZInvPPos(p) => nonneg && p_power_den(*p),
        }
    }

    pub fn has_negatives(&self) -> bool {
        matches!(self, Carrier::Z | Carrier::FracZ(_) | Carrier::Q | Carrier::ZInvP(_))
    }

    /// Whether `q -> q/p` maps the carrier onto itself.
    pub fn divisible_by(&self, p: u64) -> bool {
        match self {
            Carrier::Q | Carrier::QPos => true,
            Carrier::ZInvP(l) | Carrier::ZInvPPos(l) => *l == p,
            _ => false,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Carrier::N => "N".into(),
            Carrier::Z => "Z".into(),
            Carrier::FracN(n) => format!("(1/{n})N"),
            Carrier::FracZ(n) => format!("(1/{n})Z"),
            Carrier::QPos => "Q+".into(),
            Carrier::Q => "Q".into(),
            Carrier::ZInvP(p) => format!("Z[1/{p}]"),
            Carrier::ZInvPPos(p) => format!("Z[1/{p}]+"),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown carrier {s:?}"));
        let num = |t: &str| t.parse::<u64>().map_err(|_| bad());
        Ok(match s {
            "N" => Carrier::N,
            "Z" => Carrier::Z,
            "Q+" => Carrier::QPos,
            "Q" => Carrier::Q,
            _ => {
                if let Some(rest) = s.strip_prefix("(1/") {
                    if let Some(n) = rest.strip_suffix(")N") {
                        Carrier::FracN(num(n)?)
                    } else if let Some(n) = rest.strip_suffix(")Z") {
                        Carrier::FracZ(num(n)?)
                    } else {
                        return Err(bad());
                    }
                } else if let Some(rest) = s.strip_prefix("Z[1/") {
                    if let Some(p) = rest.strip_suffix("]+") {
                        Carrier::ZInvPPos(num(p)?)
                    } else if let Some(p) = rest.strip_suffix(']') {
                        Carrier::ZInvP(num(p)?)
                    } else {
                        return Err(bad());
                    }
                } else {
                    return Err(bad());
                }
            }
        })
    }
}

#[derive(Clone, Debug)]
pub enum NormSpec {
    /// `|q| = r^q`
    Single(NormValue),
    /// `|q| = neg^q` for `q < 0` and `pos^q` for `q > 0`.
    TwoRadii { neg: NormValue, pos: NormValue },
}

impl NormSpec {
    pub fn single(r: &Rat) -> Result<Self> {
        Ok(NormSpec::Single(positive_radius(r)?))
    }

    /// The radii `(r1, r2)` with `r1 < r2`; `r1` governs negative exponents.
    pub fn two_radii(r1: &Rat, r2: &Rat) -> Result<Self> {
        if r1 >= r2 {
            return Err(Error::InvalidRadii(format!(
                "two radii need r1 < r2, got {} and {}",
                format_rat(r1),
                format_rat(r2)
            )));
        }
        Ok(NormSpec::TwoRadii {
            neg: positive_radius(r1)?,
            pos: positive_radius(r2)?,
        })
    }

    /// The norm `r^q` for `q >= 0` and `(1 - r)^q` for `q <= 0`.
    pub fn frechet(r: &Rat) -> Result<Self> {
        if !r.is_positive() || *r >= Rat::one() {
            return Err(Error::InvalidRadii(format!("need 0 < r < 1, got {}", format_rat(r))));
        }
        Ok(NormSpec::TwoRadii {
            neg: NormValue::from_rat(&(Rat::one() - r))?,
            pos: NormValue::from_rat(r)?,
        })
    }

    pub fn eval(&self, q: &Rat) -> NormValue {
        if q.is_zero() {
            return NormValue::zero();
        }
        let radius = match self {
            NormSpec::Single(r) => r,
            NormSpec::TwoRadii { neg, pos } => {
                if q.is_negative() {
                    neg
                } else {
                    pos
                }
            }
        };
        radius.pow(q).expect("radii are positive")
    }

    /// Whether `|a + b| <= |a| |b|` holds for all `a, b`.
    pub fn is_submultiplicative(&self) -> bool {
        match self {
            NormSpec::Single(_) => true,
            NormSpec::TwoRadii { neg, pos } => neg.le(pos),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            NormSpec::Single(r) => json!({"radius": r.to_json_compact()}),
            NormSpec::TwoRadii { neg, pos } => json!({"radii": [neg.to_json_compact(), pos.to_json_compact()]}),
        }
    }

    /// Reads `{"radius": r}`, `{"radii": [r1, r2]}` or `{"frechet": r}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        if let Some(r) = v.get("radius") {
            let r = NormValue::from_json_loose(r)?;
            if r.is_zero() {
                return Err(Error::InvalidRadii("radius must be positive".into()));
            }
            return Ok(NormSpec::Single(r));
        }
        if let Some(rs) = v.get("radii").and_then(Value::as_array) {
            if rs.len() != 2 {
                return Err(Error::Parse("radii must have two entries".into()));
            }
            let neg = NormValue::from_json_loose(&rs[0])?;
            let pos = NormValue::from_json_loose(&rs[1])?;
            if neg.is_zero() || pos.is_zero() {
                return Err(Error::InvalidRadii("radii must be positive".into()));
            }
            return Ok(NormSpec::TwoRadii { neg, pos });
        }
        if let Some(r) = v.get("frechet") {
            return Self::frechet(&serde_rat::from_value(r)?);
        }
        Err(Error::Parse("norm spec needs radius, radii or frechet".into()))
    }
}

fn positive_radius(r: &Rat) -> Result<NormValue> {
    if !r.is_positive() {
        return Err(Error::InvalidRadii(format!("radius {} is not positive", format_rat(r))));
    }
    NormValue::from_rat(r)
}

#[derive(Clone, Debug)]
pub struct GeometricMonoid {
    pub carrier: Carrier,
    pub spec: NormSpec,
}

impl GeometricMonoid {
    pub fn new(carrier: Carrier, spec: NormSpec) -> Self {
        GeometricMonoid { carrier, spec }
    }

    pub fn single(carrier: Carrier, r: &Rat) -> Result<Self> {
        Ok(Self::new(carrier, NormSpec::single(r)?))
    }

    pub fn check(&self, q: &Rat) -> Result<()> {
        if self.carrier.contains(q) {
            Ok(())
        } else {
            Err(Error::InvalidElement(format!("{} is not in {}", format_rat(q), self.carrier.name())))
        }
    }

    pub fn norm_of(&self, q: &Rat) -> Result<NormValue> {
        self.check(q)?;
        Ok(self.spec.eval(q))
    }

    pub fn radius(&self) -> Option<&NormValue> {
        match &self.spec {
            NormSpec::Single(r) => Some(r),
            NormSpec::TwoRadii { .. } => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.spec.to_json();
        v["carrier"] = json!(self.carrier.name());
        v
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let carrier = v
            .get("carrier")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("monoid needs a carrier".into()))?;
        Ok(Self::new(Carrier::parse(carrier)?, NormSpec::from_json(v)?))
    }
}

/// Default probe set `{0} ∪ {±k, ±1/k : 1 <= k <= 8}` restricted to a carrier.
pub fn default_probes(carrier: &Carrier) -> Vec<Rat> {
    let mut out = vec![Rat::zero()];
    for k in 1..=8i64 {
        for q in [int(k), int(-k), rat(1, k), rat(-1, k)] {
            if carrier.contains(&q) && !out.contains(&q) {
                out.push(q);
            }
        }
    }
    out.sort();
    out
}

/// The multiplication-by-`p` map `M_r -> M_{r^{1/p}}` together with the
/// isometry evidence gathered on probes.
#[derive(Clone, Debug)]
pub struct ScaleByP {
    pub p: u64,
    pub source: GeometricMonoid,
    pub target: GeometricMonoid,
    /// The inverse `q -> q/p` exists on divisible carriers.
    pub has_inverse: bool,
}

impl ScaleByP {
    pub fn apply(&self, q: &Rat) -> Result<Rat> {
        self.source.check(q)?;
        Ok(q * int(self.p as i64))
    }

    pub fn apply_inverse(&self, q: &Rat) -> Result<Rat> {
        if !self.has_inverse {
            return Err(Error::Unsupported(format!("{} is not p-divisible", self.source.carrier.name())));
        }
        self.target.check(q)?;
        Ok(q / int(self.p as i64))
    }

    /// Checks `|pq|_{r^{1/p}} = |q|_r` (and the inverse direction when it
    /// exists) on every probe; returns the first failing probe.
    pub fn verify_isometry(&self, probes: &[Rat]) -> Result<()> {
        for q in probes.iter().filter(|q| self.source.carrier.contains(q)) {
            let lhs = self.target.norm_of(&self.apply(q)?)?;
            let rhs = self.source.norm_of(q)?;
            if !isometric(&lhs, &rhs) {
                return Err(Error::CounterexampleFound(format!(
                    "|{}q| = {lhs} but |q| = {rhs} at q = {}",
                    self.p,
                    format_rat(q)
                )));
            }
            if self.has_inverse && self.target.carrier.contains(q) {
                let back = self.apply_inverse(q)?;
                let lhs = self.source.norm_of(&back)?;
                let rhs = self.target.norm_of(q)?;
                if !isometric(&lhs, &rhs) {
                    return Err(Error::CounterexampleFound(format!(
                        "inverse: |q/{}| = {lhs} but |q| = {rhs} at q = {}",
                        self.p,
                        format_rat(q)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Exact when both values are exact, otherwise a 1e-12 gap in log2.
fn isometric(a: &NormValue, b: &NormValue) -> bool {
    match a.exact_eq(b) {
        Some(eq) => eq,
        None => (a.log2() - b.log2()).abs() <= 1e-12,
    }
}

pub fn scale_by_p(m: &GeometricMonoid, p: u64) -> Result<ScaleByP> {
    if !is_prime(p) {
        return Err(Error::Unsupported(format!("{p} is not prime")));
    }
    let NormSpec::Single(r) = &m.spec else {
        return Err(Error::Unsupported(
            "scale_by_p needs a single radius; use frobenius_family_bound for two-radius families".into(),
        ));
    };
    let target_radius = r.pow(&rat(1, p as i64))?;
    Ok(ScaleByP {
        p,
        source: m.clone(),
        target: GeometricMonoid::new(m.carrier.clone(), NormSpec::Single(target_radius)),
        has_inverse: m.carrier.divisible_by(p),
    })
}

/// Quotient norm of the class of `n` in the cokernel of the two maps
/// `S_{r'} ⊗ S_{r'} ⊗ S_r ⇉ S_{r'} ⊗ S_r`: the infimum of `(r')^a r^b`
/// over all representatives `a + b = n`.
pub fn quotient_cokernel_norm(r_prime: &Rat, r: &Rat, n: u64) -> Result<NormValue> {
    if !r_prime.is_positive() || r_prime >= r {
        return Err(Error::InvalidRadii(format!(
            "need 0 < r' < r, got r' = {}, r = {}",
            format_rat(r_prime),
            format_rat(r)
        )));
    }
    if n == 0 {
        return Ok(NormValue::zero());
    }
    let rp = NormValue::from_rat(r_prime)?;
    let rr = NormValue::from_rat(r)?;
    let mut best: Option<NormValue> = None;
    for a in 0..=n {
        let b = n - a;
        let v = rp.pow_int(a as i64)?.mul(&rr.pow_int(b as i64)?);
        best = Some(match best {
            Some(cur) => cur.min(&v),
            None => v,
        });
    }
    let best = best.expect("n + 1 representatives");
    let expected = rp.pow_int(n as i64)?;
    if best.exact_eq(&expected) != Some(true) {
        return Err(Error::InternalError(format!(
            "class {n}: infimum {best} differs from (r')^n = {expected}"
        )));
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Inductive,
    Projective,
}

/// A finite family of norms on one carrier, standing in for a limit or
/// colimit of normed monoids.
#[derive(Clone, Debug)]
pub struct NormFamily {
    pub kind: FamilyKind,
    pub carrier: Carrier,
    pub members: Vec<NormSpec>,
}

impl NormFamily {
    /// The projective family `Q_{r, 1-r}` for the given radii.
    pub fn frechet_q(radii: &[Rat]) -> Result<Self> {
        Ok(NormFamily {
            kind: FamilyKind::Projective,
            carrier: Carrier::Q,
            members: radii.iter().map(NormSpec::frechet).collect::<Result<_>>()?,
        })
    }
}

/// Evidence that a target member is dominated by a source member.
#[derive(Clone, Debug)]
pub struct MemberCertificate {
    pub target: usize,
    /// Source member and constant `C` with `|f(q)|_target <= C |q|_source`
    /// on every probe.
    pub source: Option<(usize, NormValue)>,
    /// When no source works: a probe where the best source's ratio still
    /// grows outward.
    pub witness: Option<Rat>,
}

#[derive(Clone, Debug)]
pub struct FamilyBound {
    pub forward: Vec<MemberCertificate>,
    pub inverse: Vec<MemberCertificate>,
}

impl FamilyBound {
    pub fn certified(&self) -> bool {
        self.forward.iter().chain(&self.inverse).all(|c| c.source.is_some())
    }

    pub fn to_json(&self) -> Value {
        let side = |cs: &[MemberCertificate]| -> Value {
            cs.iter()
                .map(|c| {
                    json!({
                        "target": c.target,
                        "source": c.source.as_ref().map(|(s, _)| *s),
                        "constant": c.source.as_ref().map(|(_, k)| k.to_json()),
                        "witness": c.witness.as_ref().map(serde_rat::to_value),
                    })
                })
                .collect()
        };
        json!({
            "certified": self.certified(),
            "forward": side(&self.forward),
            "inverse": side(&self.inverse),
        })
    }
}

/// For each member of `family`, searches for a member dominating the map
/// `q -> scale * q` on the probes. A candidate is rejected when its ratio
/// `|f(q)| / |q|` still increases at the outermost probe of either sign,
/// since the geometric norms then make it unbounded on the full carrier.
pub fn family_map_bound(family: &NormFamily, scale: &Rat, probes: &[Rat]) -> Vec<MemberCertificate> {
    let probes: Vec<&Rat> = probes
        .iter()
        .filter(|q| !q.is_zero() && family.carrier.contains(q) && family.carrier.contains(&(*q * scale)))
        .collect();
    let mut out = Vec::with_capacity(family.members.len());
    for (t, target) in family.members.iter().enumerate() {
        let mut best: Option<(usize, NormValue)> = None;
        let mut witness = None;
        for (s, source) in family.members.iter().enumerate() {
            let ratio = |q: &Rat| {
                target
                    .eval(&(q * scale))
                    .div(&source.eval(q))
                    .expect("nonzero probes have positive norm")
            };
            match growing_outward(&probes, &ratio) {
                Some(w) => {
                    witness.get_or_insert(w);
                }
                None => {
                    let c = NormValue::max_of(probes.iter().map(|q| ratio(q)).collect::<Vec<_>>().iter());
                    if best.as_ref().is_none_or(|(_, b)| c.total_cmp(b).is_lt()) {
                        best = Some((s, c));
                    }
                }
            }
        }
        out.push(MemberCertificate {
            target: t,
            witness: if best.is_some() { None } else { witness },
            source: best,
        });
    }
    out
}

/// The outermost probe of a sign at which `ratio` is still increasing.
fn growing_outward(probes: &[&Rat], ratio: &dyn Fn(&Rat) -> NormValue) -> Option<Rat> {
    for positive in [true, false] {
        let mut side: Vec<&Rat> = probes.iter().copied().filter(|q| q.is_positive() == positive).collect();
        side.sort_by_key(|q| q.abs());
        if let [.., inner, outer] = side.as_slice() {
            let (ri, ro) = (ratio(inner), ratio(outer));
            if !ro.le(&ri) {
                return Some((*outer).clone());
            }
        }
    }
    None
}

/// Boundedness of `q -> p q` and `q -> q / p` on a projective family of
/// `Q_{r, 1-r}` norms. Fails with `NotBounded` naming the first member
/// without a dominating source.
pub fn frobenius_family_bound(family: &NormFamily, p: u64, probes: &[Rat]) -> Result<FamilyBound> {
    let bound = frobenius_family_report(family, p, probes)?;
    for (dir, certs) in [("q -> pq", &bound.forward), ("q -> q/p", &bound.inverse)] {
        if let Some(c) = certs.iter().find(|c| c.source.is_none()) {
            return Err(Error::NotBounded(format!(
                "{dir}: no member dominates target member {} (witness q = {})",
                c.target,
                c.witness.as_ref().map(format_rat).unwrap_or_else(|| "-".into())
            )));
        }
    }
    Ok(bound)
}

/// Like [`frobenius_family_bound`] but returns the per-member report even
/// when some member is not dominated.
pub fn frobenius_family_report(family: &NormFamily, p: u64, probes: &[Rat]) -> Result<FamilyBound> {
    if family.kind != FamilyKind::Projective {
        return Err(Error::Unsupported("Frobenius bounds are defined for projective families".into()));
    }
    if !is_prime(p) {
        return Err(Error::Unsupported(format!("{p} is not prime")));
    }
    let pq = int(p as i64);
    Ok(FamilyBound {
        forward: family_map_bound(family, &pq, probes),
        inverse: family_map_bound(family, &pq.recip(), probes),
    })
}

/// Exact rational `p^k` as a scale factor (negative `k` allowed).
pub fn p_power(p: u64, k: i32) -> Rat {
    let base = BigInt::from(p).pow(k.unsigned_abs());
    if k >= 0 {
        Rat::from_integer(base)
    } else {
        Rat::new(BigInt::one(), base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_of_examples() {
        let n = GeometricMonoid::single(Carrier::N, &rat(1, 2)).unwrap();
        assert_eq!(n.norm_of(&int(3)).unwrap().to_rat(), Some(rat(1, 8)));
        let z = GeometricMonoid::new(Carrier::Z, NormSpec::two_radii(&rat(1, 4), &rat(1, 2)).unwrap());
        assert_eq!(z.norm_of(&int(-2)).unwrap().to_rat(), Some(int(16)));
        let q = GeometricMonoid::single(Carrier::Q, &rat(1, 2)).unwrap();
        let v = q.norm_of(&rat(1, 2)).unwrap();
        assert!((v.to_f64() - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(matches!(n.norm_of(&rat(1, 2)), Err(Error::InvalidElement(_))));
        assert!(matches!(n.norm_of(&int(-1)), Err(Error::InvalidElement(_))));
        assert!(NormSpec::two_radii(&rat(1, 2), &rat(1, 4)).is_err());
    }

    #[test]
    fn carriers() {
        assert!(Carrier::ZInvP(3).contains(&rat(-5, 9)));
        assert!(!Carrier::ZInvP(3).contains(&rat(1, 6)));
        assert!(Carrier::FracN(6).contains(&rat(1, 3)));
        assert!(!Carrier::FracN(6).contains(&rat(1, 4)));
        for c in [Carrier::N, Carrier::FracZ(4), Carrier::ZInvPPos(5), Carrier::QPos] {
            assert_eq!(Carrier::parse(&c.name()).unwrap(), c);
        }
    }

    #[test]
    fn scale_by_p_examples() {
        let n = GeometricMonoid::single(Carrier::N, &rat(1, 4)).unwrap();
        let s = scale_by_p(&n, 2).unwrap();
        let image = s.apply(&int(3)).unwrap();
        assert_eq!(image, int(6));
        assert_eq!(s.source.norm_of(&int(3)).unwrap().to_rat(), Some(rat(1, 64)));
        assert_eq!(s.target.norm_of(&image).unwrap().to_rat(), Some(rat(1, 64)));
        assert!(s.target.norm_of(&s.apply(&int(0)).unwrap()).unwrap().is_zero());
        assert!(!s.has_inverse);

        let q = GeometricMonoid::single(Carrier::Q, &rat(1, 4)).unwrap();
        let s = scale_by_p(&q, 2).unwrap();
        assert!(s.has_inverse);
        assert_eq!(s.apply(&rat(1, 2)).unwrap(), int(1));
        assert_eq!(s.source.norm_of(&rat(1, 2)).unwrap().to_rat(), Some(rat(1, 2)));
        assert_eq!(s.target.norm_of(&int(1)).unwrap().to_rat(), Some(rat(1, 2)));
        s.verify_isometry(&default_probes(&Carrier::Q)).unwrap();

        let two = GeometricMonoid::new(Carrier::Z, NormSpec::two_radii(&rat(1, 4), &rat(1, 2)).unwrap());
        assert!(matches!(scale_by_p(&two, 2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(quotient_cokernel_norm(&rat(1, 4), &rat(1, 2), 2).unwrap().to_rat(), Some(rat(1, 16)));
        assert!(quotient_cokernel_norm(&rat(1, 4), &rat(1, 2), 0).unwrap().is_zero());
        assert_eq!(quotient_cokernel_norm(&rat(1, 4), &rat(1, 2), 1).unwrap().to_rat(), Some(rat(1, 4)));
        assert!(matches!(
            quotient_cokernel_norm(&rat(1, 2), &rat(1, 2), 1),
            Err(Error::InvalidRadii(_))
        ));
    }

    #[test]
    fn identity_map_on_a_singleton_family_has_constant_one() {
        let fam = NormFamily::frechet_q(&[rat(1, 2)]).unwrap();
        let certs = family_map_bound(&fam, &int(1), &default_probes(&Carrier::Q));
        let (s, c) = certs[0].source.clone().unwrap();
        assert_eq!(s, 0);
        assert_eq!(c.to_rat(), Some(int(1)));
    }

    #[test]
    fn halving_on_a_singleton_family_is_unbounded() {
        // |q/2| / |q| = 2^{q/2} keeps growing on the positive probes.
        let fam = NormFamily::frechet_q(&[rat(1, 2)]).unwrap();
        let certs = family_map_bound(&fam, &rat(1, 2), &default_probes(&Carrier::Q));
        assert!(certs[0].source.is_none());
        assert_eq!(certs[0].witness, Some(int(8)));
    }

    #[test]
    fn frobenius_on_a_finite_window() {
        // Target r = 1/2 is dominated for both directions by r = 3/4: the
        // forward map needs r_s >= max(r^2, 1-(1-r)^2) = 3/4 and the inverse
        // needs r_s >= max(r^{1/2}, 1-(1-r)^{1/2}) ~ 0.707. The top member has
        // no dominating source inside the window.
        let fam = NormFamily::frechet_q(&[rat(1, 2), rat(3, 4)]).unwrap();
        let probes: Vec<Rat> = [1, -1, 2, -2].iter().map(|&k| int(k)).chain([rat(1, 2), rat(-1, 2)]).collect();
        let report = frobenius_family_report(&fam, 2, &probes).unwrap();
        assert_eq!(report.forward[0].source.as_ref().unwrap().0, 1);
        assert_eq!(report.inverse[0].source.as_ref().unwrap().0, 1);
        assert!(report.forward[1].source.is_none());
        assert!(report.inverse[1].source.is_none());
        assert!(matches!(frobenius_family_bound(&fam, 2, &probes), Err(Error::NotBounded(_))));
    }

    #[test]
    fn two_radius_submultiplicativity_depends_on_order() {
        assert!(NormSpec::two_radii(&rat(1, 4), &rat(1, 2)).unwrap().is_submultiplicative());
        assert!(!NormSpec::frechet(&rat(1, 4)).unwrap().is_submultiplicative());
        assert!(NormSpec::frechet(&rat(3, 4)).unwrap().is_submultiplicative());
    }

    #[test]
    fn json_round_trip() {
        for m in [
            GeometricMonoid::single(Carrier::Q, &rat(1, 2)).unwrap(),
            GeometricMonoid::new(Carrier::Z, NormSpec::two_radii(&rat(1, 4), &rat(1, 2)).unwrap()),
            scale_by_p(&GeometricMonoid::single(Carrier::QPos, &rat(1, 3)).unwrap(), 3).unwrap().target,
        ] {
            let back = GeometricMonoid::from_json(&m.to_json()).unwrap();
            assert_eq!(back.to_json(), m.to_json());
        }
        let f = GeometricMonoid::from_json(&json!({"carrier": "Q", "frechet": "1/4"})).unwrap();
        assert_eq!(f.norm_of(&int(-1)).unwrap().to_rat(), Some(rat(4, 3)));
    }
}
