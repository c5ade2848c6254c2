//! Finite pointed normed sets and the calculus of bounded pointed maps:
//! separation, products, wedges, coequalizers, the smash tensor, internal
//! hom, and strictness of morphisms.

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::norm::{NormValue, TAU};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    SemiNormed,
    Normed,
}

/// A finite pointed set with a seminorm vanishing at the basepoint.
#[derive(Clone, Debug)]
pub struct FiniteNormedSet {
    elements: Vec<String>,
    basepoint: usize,
    norms: Vec<NormValue>,
    log2s: Vec<f64>,
    index: HashMap<String, usize>,
}

impl FiniteNormedSet {
    /// Builds a set from ids, a basepoint id, and norms of the other
    /// elements. The basepoint may be omitted from `norms`; if present its
    /// norm must be exactly zero.
    pub fn new(
        elements: Vec<String>,
        basepoint: &str,
        norms: &BTreeMap<String, NormValue>,
    ) -> Result<Self> {
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::InvalidElement(format!("duplicate element id {e:?}")));
            }
        }
        let base = *index
            .get(basepoint)
            .ok_or_else(|| Error::InvalidElement(format!("basepoint {basepoint:?} not among elements")))?;
        for key in norms.keys() {
            if !index.contains_key(key) {
                return Err(Error::InvalidElement(format!("norm given for unknown element {key:?}")));
            }
        }
        let mut values = Vec::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            let v = match norms.get(e) {
                Some(v) => v.clone(),
                None if i == base => NormValue::zero(),
                None => return Err(Error::InvalidNorm(format!("missing norm for {e:?}"))),
            };
            if i == base && !v.is_zero() {
                return Err(Error::InvalidNorm(format!("basepoint {e:?} has nonzero norm {v}")));
            }
            values.push(v);
        }
        Ok(Self::from_parts(elements, base, values, index))
    }

    fn from_parts(
        elements: Vec<String>,
        basepoint: usize,
        norms: Vec<NormValue>,
        index: HashMap<String, usize>,
    ) -> Self {
        let log2s = norms.iter().map(NormValue::log2).collect();
        FiniteNormedSet {
            elements,
            basepoint,
            norms,
            log2s,
            index,
        }
    }

    /// Internal constructor for derived sets whose ids are known to be unique.
    fn build(elements: Vec<String>, basepoint: usize, norms: Vec<NormValue>) -> Self {
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        Self::from_parts(elements, basepoint, norms, index)
    }

    /// Convenience constructor: basepoint `"*"` plus `(id, norm)` pairs.
    pub fn from_pairs(pairs: &[(&str, NormValue)]) -> Result<Self> {
        let mut elements = vec!["*".to_string()];
        let mut norms = BTreeMap::new();
        for (id, v) in pairs {
            elements.push(id.to_string());
            norms.insert(id.to_string(), v.clone());
        }
        Self::new(elements, "*", &norms)
    }

    pub fn point() -> Self {
        Self::build(vec!["*".into()], 0, vec![NormValue::zero()])
    }

    /// Monoidal unit for the smash tensor: one element of norm 1.
    pub fn unit() -> Self {
        Self::build(
            vec!["*".into(), "1".into()],
            0,
            vec![NormValue::zero(), NormValue::one()],
        )
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn basepoint_id(&self) -> &str {
        &self.elements[self.basepoint]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn norm(&self, i: usize) -> &NormValue {
        &self.norms[i]
    }

    pub fn norm_of(&self, id: &str) -> Option<&NormValue> {
        self.index_of(id).map(|i| &self.norms[i])
    }

    pub fn log2_norms(&self) -> &[f64] {
        &self.log2s
    }

    /// Indices of all elements other than the basepoint, in carrier order.
    pub fn non_base(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| i != self.basepoint)
    }

    pub fn kind(&self) -> Kind {
        if self.non_base().all(|i| !self.norms[i].is_zero()) {
            Kind::Normed
        } else {
            Kind::SemiNormed
        }
    }

    /// Same ids, basepoint and norms (norms compared within tolerance).
    pub fn same_as(&self, other: &Self) -> bool {
        self.elements == other.elements
            && self.basepoint == other.basepoint
            && self
                .norms
                .iter()
                .zip(&other.norms)
                .all(|(a, b)| a.approx_eq(b))
    }

    pub fn to_json(&self) -> Value {
        let mut norms = Map::new();
        for i in self.non_base() {
            norms.insert(self.elements[i].clone(), self.norms[i].to_json_compact());
        }
        json!({
            "elements": self.elements,
            "basepoint": self.basepoint_id(),
            "norms": norms,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("normed set: {what}"));
        let elements: Vec<String> = v
            .get("elements")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing elements array"))?
            .iter()
            .map(|e| e.as_str().map(str::to_string).ok_or_else(|| bad("element ids must be strings")))
            .collect::<Result<_>>()?;
        let basepoint = v
            .get("basepoint")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing basepoint"))?;
        let mut norms = BTreeMap::new();
        if let Some(obj) = v.get("norms") {
            let obj = obj.as_object().ok_or_else(|| bad("norms must be an object"))?;
            for (k, nv) in obj {
                norms.insert(k.clone(), NormValue::from_json_loose(nv)?);
            }
        }
        Self::new(elements, basepoint, &norms)
    }
}

/// A basepoint-preserving map between finite normed sets, stored as target
/// indices.
#[derive(Clone, Debug)]
pub struct PointedMap {
    pub source: FiniteNormedSet,
    pub target: FiniteNormedSet,
    assignment: Vec<usize>,
}

impl PointedMap {
    pub fn from_indices(source: FiniteNormedSet, target: FiniteNormedSet, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != source.len() {
            return Err(Error::InvalidMap(format!(
                "assignment has {} entries for a source of size {}",
                assignment.len(),
                source.len()
            )));
        }
        if let Some(&bad) = assignment.iter().find(|&&t| t >= target.len()) {
            return Err(Error::InvalidMap(format!("target index {bad} out of range")));
        }
        if assignment[source.basepoint] != target.basepoint {
            return Err(Error::InvalidMap("basepoint is not sent to the basepoint".into()));
        }
        Ok(PointedMap {
            source,
            target,
            assignment,
        })
    }

    /// Builds a map from an id → id table; the basepoint may be omitted.
    pub fn new(source: FiniteNormedSet, target: FiniteNormedSet, table: &BTreeMap<String, String>) -> Result<Self> {
        let mut assignment = vec![usize::MAX; source.len()];
        assignment[source.basepoint] = target.basepoint;
        for (from, to) in table {
            let i = source
                .index_of(from)
                .ok_or_else(|| Error::InvalidMap(format!("unknown source element {from:?}")))?;
            let j = target
                .index_of(to)
                .ok_or_else(|| Error::InvalidMap(format!("unknown target element {to:?}")))?;
            assignment[i] = j;
        }
        if let Some(i) = assignment.iter().position(|&t| t == usize::MAX) {
            return Err(Error::InvalidMap(format!("no image for {:?}", source.elements[i])));
        }
        Self::from_indices(source, target, assignment)
    }

    /// Builds a map by naming the image of every id.
    pub fn from_fn(source: FiniteNormedSet, target: FiniteNormedSet, f: impl Fn(&str) -> String) -> Result<Self> {
        let table = source
            .elements
            .iter()
            .map(|e| (e.clone(), f(e)))
            .collect();
        Self::new(source, target, &table)
    }

    pub fn identity(x: &FiniteNormedSet) -> Self {
        PointedMap {
            source: x.clone(),
            target: x.clone(),
            assignment: (0..x.len()).collect(),
        }
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn apply(&self, i: usize) -> usize {
        self.assignment[i]
    }

    pub fn compose(&self, after: &PointedMap) -> Result<PointedMap> {
        if after.source.elements != self.target.elements {
            return Err(Error::InvalidMap("composition of non-matching maps".into()));
        }
        let assignment = self.assignment.iter().map(|&j| after.assignment[j]).collect();
        Self::from_indices(self.source.clone(), after.target.clone(), assignment)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.assignment.iter().all(|&j| !std::mem::replace(&mut seen[j], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.len()];
        for &j in &self.assignment {
            hit[j] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn to_json(&self) -> Value {
        let table: Map<String, Value> = self
            .source
            .elements
            .iter()
            .zip(&self.assignment)
            .map(|(e, &j)| (e.clone(), Value::String(self.target.elements[j].clone())))
            .collect();
        json!({
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "map": table,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let source = FiniteNormedSet::from_json(v.get("source").ok_or_else(|| Error::Parse("map: missing source".into()))?)?;
        let target = FiniteNormedSet::from_json(v.get("target").ok_or_else(|| Error::Parse("map: missing target".into()))?)?;
        let table = v
            .get("map")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("map: missing map object".into()))?
            .iter()
            .map(|(k, t)| {
                t.as_str()
                    .map(|t| (k.clone(), t.to_string()))
                    .ok_or_else(|| Error::Parse("map: images must be ids".into()))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        Self::new(source, target, &table)
    }
}

/// Least `C` with `|f(x)| <= C |x|`, computed exactly where the norms are
/// exact.
pub fn bound_constant(f: &PointedMap) -> Result<NormValue> {
    let mut best = NormValue::zero();
    for i in f.source.non_base() {
        let image = f.target.norm(f.assignment[i]);
        if image.is_zero() {
            continue;
        }
        let src = f.source.norm(i);
        if src.is_zero() {
            return Err(Error::Unbounded(format!(
                "{:?} has norm 0 but its image {:?} has norm {}",
                f.source.elements[i], f.target.elements[f.assignment[i]], image
            )));
        }
        best = best.max(&image.div(src)?);
    }
    Ok(best)
}

/// log2 of the bound constant of the map `assignment` from a set with norm
/// logs `src` to one with norm logs `tgt`; `None` when unbounded. This is the
/// allocation-free path used by exhaustive enumerations.
#[inline]
pub fn bound_constant_log2(src: &[f64], tgt: &[f64], assignment: impl IntoIterator<Item = (usize, usize)>) -> Option<f64> {
    let mut best = f64::NEG_INFINITY;
    for (i, j) in assignment {
        let t = tgt[j];
        if t == f64::NEG_INFINITY {
            continue;
        }
        let s = src[i];
        if s == f64::NEG_INFINITY {
            return None;
        }
        best = best.max(t - s);
    }
    Some(best)
}

pub fn is_contracting(f: &PointedMap) -> Result<bool> {
    Ok(bound_constant(f)?.le(&NormValue::one()))
}

/// Collapses every zero-norm element onto the basepoint. Returns the
/// separated set and the quotient map.
pub fn separation(x: &FiniteNormedSet) -> (FiniteNormedSet, PointedMap) {
    let mut elements = vec![x.basepoint_id().to_string()];
    let mut norms = vec![NormValue::zero()];
    let mut assignment = vec![0usize; x.len()];
    for i in x.non_base() {
        if !x.norms[i].is_zero() {
            assignment[i] = elements.len();
            elements.push(x.elements[i].clone());
            norms.push(x.norms[i].clone());
        }
    }
    let sep = FiniteNormedSet::build(elements, 0, norms);
    let q = PointedMap {
        source: x.clone(),
        target: sep.clone(),
        assignment,
    };
    (sep, q)
}

/// The unique factorization of `f: X -> Y` (with `Y` normed) through the
/// separation of `X`.
pub fn factor_through_separation(f: &PointedMap) -> Result<PointedMap> {
    if f.target.kind() != Kind::Normed {
        return Err(Error::InvalidMap("target is not normed".into()));
    }
    let (sep, q) = separation(&f.source);
    let mut assignment = vec![usize::MAX; sep.len()];
    for i in 0..f.source.len() {
        let k = q.assignment[i];
        let image = f.assignment[i];
        if assignment[k] != usize::MAX && assignment[k] != image {
            return Err(Error::InvalidMap(format!(
                "{:?} has norm 0 but is not sent to the basepoint",
                f.source.elements[i]
            )));
        }
        assignment[k] = image;
    }
    PointedMap::from_indices(sep, f.target.clone(), assignment)
}

/// Cartesian product with the max norm.
pub fn product(x: &FiniteNormedSet, y: &FiniteNormedSet) -> FiniteNormedSet {
    let mut elements = Vec::with_capacity(x.len() * y.len());
    let mut norms = Vec::with_capacity(x.len() * y.len());
    for i in 0..x.len() {
        for j in 0..y.len() {
            elements.push(format!("({},{})", x.elements[i], y.elements[j]));
            norms.push(x.norms[i].max(&y.norms[j]));
        }
    }
    let basepoint = x.basepoint * y.len() + y.basepoint;
    FiniteNormedSet::build(elements, basepoint, norms)
}

/// Projections out of [`product`].
pub fn product_projections(x: &FiniteNormedSet, y: &FiniteNormedSet) -> (PointedMap, PointedMap) {
    let p = product(x, y);
    let left = (0..p.len()).map(|k| k / y.len()).collect();
    let right = (0..p.len()).map(|k| k % y.len()).collect();
    (
        PointedMap {
            source: p.clone(),
            target: x.clone(),
            assignment: left,
        },
        PointedMap {
            source: p,
            target: y.clone(),
            assignment: right,
        },
    )
}

/// Wedge sum: disjoint union with all basepoints identified. Ids are kept
/// when they do not collide and are tagged `(k,id)` otherwise.
pub fn coproduct(parts: &[&FiniteNormedSet]) -> FiniteNormedSet {
    let base_id = parts
        .first()
        .map(|x| x.basepoint_id().to_string())
        .unwrap_or_else(|| "*".to_string());
    let mut seen: HashMap<&str, usize> = HashMap::new();
    let mut clash = false;
    for x in parts {
        for i in x.non_base() {
            let id = x.elements[i].as_str();
            if id == base_id || seen.insert(id, 0).is_some() {
                clash = true;
            }
        }
    }
    let mut elements = vec![base_id];
    let mut norms = vec![NormValue::zero()];
    for (k, x) in parts.iter().enumerate() {
        for i in x.non_base() {
            elements.push(if clash {
                format!("({k},{})", x.elements[i])
            } else {
                x.elements[i].clone()
            });
            norms.push(x.norms[i].clone());
        }
    }
    FiniteNormedSet::build(elements, 0, norms)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Keep the smaller index as root so class order follows the carrier.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Quotient of `Y` by the equivalence relation generated by `f(x) ~ g(x)`;
/// each class gets the infimum of its members' norms. With `separate` the
/// result is additionally passed through [`separation`].
pub fn coequalizer(f: &PointedMap, g: &PointedMap, separate: bool) -> Result<(FiniteNormedSet, PointedMap)> {
    if f.source.elements != g.source.elements || f.target.elements != g.target.elements {
        return Err(Error::InvalidMap("coequalizer needs parallel maps".into()));
    }
    let y = &f.target;
    let mut uf = UnionFind::new(y.len());
    for (&a, &b) in f.assignment.iter().zip(&g.assignment) {
        uf.union(a, b);
    }
    let mut class_of_root: HashMap<usize, usize> = HashMap::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut assignment = vec![0usize; y.len()];
    for (i, slot) in assignment.iter_mut().enumerate() {
        let root = uf.find(i);
        let next = members.len();
        let c = *class_of_root.entry(root).or_insert(next);
        if c == next {
            members.push(Vec::new());
        }
        members[c].push(i);
        *slot = c;
    }
    let basepoint = assignment[y.basepoint];
    let mut elements = Vec::with_capacity(members.len());
    let mut norms = Vec::with_capacity(members.len());
    for (c, ms) in members.iter().enumerate() {
        if c == basepoint {
            elements.push(y.basepoint_id().to_string());
            norms.push(NormValue::zero());
            continue;
        }
        elements.push(if ms.len() == 1 {
            y.elements[ms[0]].clone()
        } else {
            let ids: Vec<&str> = ms.iter().map(|&i| y.elements[i].as_str()).collect();
            format!("{{{}}}", ids.join(","))
        });
        let inf = ms
            .iter()
            .map(|&i| &y.norms[i])
            .fold(None::<NormValue>, |acc, v| Some(acc.map_or(v.clone(), |a| a.min(v))))
            .expect("classes are nonempty");
        norms.push(inf);
    }
    let quotient = FiniteNormedSet::build(elements, basepoint, norms);
    let q = PointedMap {
        source: y.clone(),
        target: quotient.clone(),
        assignment,
    };
    if separate {
        let (sep, s) = separation(&quotient);
        let q = q.compose(&s)?;
        return Ok((sep, q));
    }
    Ok((quotient, q))
}

/// Smash product: pairs of non-basepoint elements plus a basepoint, with
/// multiplied norms. Non-base pairs are ordered row-major `(x_i, y_j)`.
pub fn smash(x: &FiniteNormedSet, y: &FiniteNormedSet) -> FiniteNormedSet {
    let mut elements = vec![format!("({},{})", x.basepoint_id(), y.basepoint_id())];
    let mut norms = vec![NormValue::zero()];
    for i in x.non_base() {
        for j in y.non_base() {
            elements.push(format!("({},{})", x.elements[i], y.elements[j]));
            norms.push(x.norms[i].mul(&y.norms[j]));
        }
    }
    FiniteNormedSet::build(elements, 0, norms)
}

/// Default cap on the number of pointed maps enumerated by [`internal_hom`].
pub const HOM_CAP: u128 = 100_000;

/// The set of bounded pointed maps `X -> Y` with the sup norm.
#[derive(Clone, Debug)]
pub struct HomSet {
    pub set: FiniteNormedSet,
    /// Target index for each non-basepoint source element, per hom element.
    pub maps: Vec<Vec<usize>>,
    /// Position in `set` of the map with a given code, if it is bounded.
    code_index: Vec<Option<usize>>,
}

impl HomSet {
    /// Index of the map with the given little-endian code (digit 0 is the
    /// basepoint, digit `k` the `k`-th non-base target element).
    pub fn index_of_code(&self, code: usize) -> Option<usize> {
        self.code_index.get(code).copied().flatten()
    }
}

pub fn map_count(x: &FiniteNormedSet, y: &FiniteNormedSet) -> u128 {
    (y.len() as u128).saturating_pow(x.len().saturating_sub(1) as u32)
}

pub fn internal_hom(x: &FiniteNormedSet, y: &FiniteNormedSet) -> Result<HomSet> {
    internal_hom_capped(x, y, HOM_CAP)
}

pub fn internal_hom_capped(x: &FiniteNormedSet, y: &FiniteNormedSet, cap: u128) -> Result<HomSet> {
    let count = map_count(x, y);
    if count > cap {
        return Err(Error::TooLarge(format!("{count} pointed maps exceed the cap {cap}")));
    }
    let xs: Vec<usize> = x.non_base().collect();
    let ys: Vec<usize> = std::iter::once(y.basepoint).chain(y.non_base()).collect();
    let base = ys.len();
    let mut elements = Vec::new();
    let mut norms = Vec::new();
    let mut maps = Vec::new();
    let mut code_index = vec![None; count as usize];
    let mut basepoint = 0;
    for (code, slot) in code_index.iter_mut().enumerate() {
        let mut c = code;
        let mut images = Vec::with_capacity(xs.len());
        for _ in &xs {
            images.push(ys[c % base]);
            c /= base;
        }
        let mut assignment = vec![y.basepoint; x.len()];
        for (&i, &j) in xs.iter().zip(&images) {
            assignment[i] = j;
        }
        let f = PointedMap {
            source: x.clone(),
            target: y.clone(),
            assignment,
        };
        let norm = match bound_constant(&f) {
            Ok(c) => c,
            Err(Error::Unbounded(_)) => continue,
            Err(e) => return Err(e),
        };
        if code == 0 {
            basepoint = elements.len();
        }
        let parts: Vec<String> = xs
            .iter()
            .zip(&images)
            .map(|(&i, &j)| format!("{}->{}", x.elements[i], y.elements[j]))
            .collect();
        *slot = Some(elements.len());
        elements.push(format!("[{}]", parts.join(",")));
        norms.push(norm);
        maps.push(images);
    }
    Ok(HomSet {
        set: FiniteNormedSet::build(elements, basepoint, norms),
        maps,
        code_index,
    })
}

/// Result of checking that currying `Hom(X∧Y, Z) -> Hom(X, Hom(Y, Z))`
/// preserves bound constants.
#[derive(Clone, Debug, PartialEq)]
pub struct CurryReport {
    pub maps_checked: u64,
    /// Largest relative gap between the two bound constants.
    pub max_relative_gap: f64,
    /// First map (as image ids of the smash elements) whose constants differ
    /// beyond tolerance.
    pub witness: Option<Vec<String>>,
}

/// Enumerates every pointed map `X∧Y -> Z`, curries it and compares bound
/// constants of the map and its curried form. `X` must have positive norms
/// off the basepoint for every curried map to be bounded.
pub fn currying_check(x: &FiniteNormedSet, y: &FiniteNormedSet, z: &FiniteNormedSet) -> Result<CurryReport> {
    let xy = smash(x, y);
    let hom_yz = internal_hom(y, z)?;
    let count = map_count(&xy, z);
    if count > u64::MAX as u128 / 2 {
        return Err(Error::TooLarge(format!("{count} maps")));
    }
    let xs: Vec<usize> = x.non_base().collect();
    let ys: Vec<usize> = y.non_base().collect();
    let zs: Vec<usize> = std::iter::once(z.basepoint).chain(z.non_base()).collect();
    let base = zs.len();
    let (kx, ky) = (xs.len(), ys.len());
    let lx: Vec<f64> = xs.iter().map(|&i| x.log2s[i]).collect();
    let lz: Vec<f64> = zs.iter().map(|&k| z.log2s[k]).collect();
    // Norm logs of the smash elements, row-major to match `smash`.
    let lxy: Vec<f64> = xy.log2s[1..].to_vec();
    let lh = hom_yz.set.log2_norms();
    let hom_of_code: Vec<Option<usize>> = (0..map_count(y, z) as usize).map(|c| hom_yz.index_of_code(c)).collect();
    let pow: Vec<usize> = (0..ky).map(|j| base.pow(j as u32)).collect();
    let codes = map_count(y, z) as usize;
    let digit = |code: usize, j: usize| (code / pow[j]) % base;
    // Per row and row code: the direct bound constant of that row of
    // `X∧Y`, and the curried term `|f(x_i)| / |x_i|` from the hom norms.
    let mut direct_row = vec![vec![None; codes]; kx];
    let mut curried_row = vec![vec![None; codes]; kx];
    for i in 0..kx {
        for code in 0..codes {
            direct_row[i][code] = bound_constant_log2(
                &lxy[i * ky..(i + 1) * ky],
                &lz,
                (0..ky).map(|j| (j, digit(code, j))),
            );
            curried_row[i][code] = hom_of_code[code].and_then(|h| {
                let t = lh[h];
                if t == f64::NEG_INFINITY {
                    Some(f64::NEG_INFINITY)
                } else if lx[i] == f64::NEG_INFINITY {
                    None
                } else {
                    Some(t - lx[i])
                }
            });
        }
    }

    let mut rows = vec![0usize; kx];
    let mut report = CurryReport {
        maps_checked: 0,
        max_relative_gap: 0.0,
        witness: None,
    };
    loop {
        let mut direct = Some(f64::NEG_INFINITY);
        let mut curried = Some(f64::NEG_INFINITY);
        for (i, &code) in rows.iter().enumerate() {
            direct = direct.zip(direct_row[i][code]).map(|(a, b)| a.max(b));
            curried = curried.zip(curried_row[i][code]).map(|(a, b)| a.max(b));
        }
        report.maps_checked += 1;
        let gap = match (direct, curried) {
            (None, None) => 0.0,
            (Some(a), Some(b)) if a == b => 0.0,
            (Some(a), Some(b)) => -((a.min(b) - a.max(b)) * std::f64::consts::LN_2).exp_m1(),
            _ => f64::INFINITY,
        };
        if gap > report.max_relative_gap {
            report.max_relative_gap = gap;
        }
        if gap > TAU && report.witness.is_none() {
            let (zs, digit) = (&zs, &digit);
            report.witness = Some(
                rows.iter()
                    .flat_map(|&code| (0..ky).map(move |j| z.elements[zs[digit(code, j)]].clone()))
                    .collect(),
            );
        }
        // Odometer over the rows.
        let mut k = 0;
        loop {
            if k == rows.len() {
                return Ok(report);
            }
            rows[k] += 1;
            if rows[k] < codes {
                break;
            }
            rows[k] = 0;
            k += 1;
        }
    }
}

/// Equivalence of two norms on one finite carrier: `N1 = max |k|_1/|k|_2`
/// and `N2 = max |k|_2/|k|_1`.
pub fn equivalence_constants(a: &FiniteNormedSet, b: &FiniteNormedSet) -> Result<(NormValue, NormValue)> {
    if a.elements != b.elements || a.basepoint != b.basepoint {
        return Err(Error::InvalidElement("norms live on different carriers".into()));
    }
    let mut n1 = NormValue::zero();
    let mut n2 = NormValue::zero();
    for i in a.non_base() {
        let (x, y) = (&a.norms[i], &b.norms[i]);
        if x.is_zero() || y.is_zero() {
            return Err(Error::InvalidNorm(format!("{:?} has norm zero", a.elements[i])));
        }
        n1 = n1.max(&x.div(y)?);
        n2 = n2.max(&y.div(x)?);
    }
    if a.len() == 1 {
        return Ok((NormValue::one(), NormValue::one()));
    }
    Ok((n1, n2))
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub bound: NormValue,
    pub mono: bool,
    pub epi: bool,
    pub strict_mono: bool,
    pub strict_epi: bool,
    pub strict: bool,
    pub iso: bool,
    /// Coimage to image is an isometry, the stricter notion used for
    /// contracting maps.
    pub isometric_strict: bool,
    /// Constants `(N1, N2)` with `|c|_Im <= N1 |c|_Coim` and
    /// `|c|_Coim <= N2 |c|_Im`, when both exist.
    pub coimage_constants: Option<(NormValue, NormValue)>,
}

impl Classification {
    pub fn to_json(&self) -> Value {
        let constants = self
            .coimage_constants
            .as_ref()
            .map(|(a, b)| json!([a.to_json(), b.to_json()]));
        json!({
            "bound": self.bound.to_json(),
            "mono": self.mono,
            "epi": self.epi,
            "strict_mono": self.strict_mono,
            "strict_epi": self.strict_epi,
            "strict": self.strict,
            "iso": self.iso,
            "isometric_strict": self.isometric_strict,
            "coimage_constants": constants,
        })
    }
}

/// Classifies a bounded map. The coimage is the source modulo the fibres of
/// `f` with the infimum norm; the image carries the restricted target norm.
/// On finite carriers two norms are equivalent exactly when they vanish on
/// the same elements, and `strict` asks for that on Coim -> Im.
pub fn classify_morphism(f: &PointedMap) -> Result<Classification> {
    let bound = bound_constant(f)?;
    let mono = f.is_injective();
    let epi = f.is_surjective();

    // Coimage norm of each hit target element: inf over its fibre.
    let mut coim: Vec<Option<NormValue>> = vec![None; f.target.len()];
    for (i, &j) in f.assignment.iter().enumerate() {
        let v = if j == f.target.basepoint {
            NormValue::zero()
        } else {
            f.source.norms[i].clone()
        };
        coim[j] = Some(match coim[j].take() {
            Some(c) => c.min(&v),
            None => v,
        });
    }
    let mut zero_patterns_match = true;
    let mut isometric = true;
    let mut n1 = NormValue::zero();
    let mut n2 = NormValue::zero();
    for (j, c) in coim.iter().enumerate() {
        let Some(c) = c else { continue };
        if j == f.target.basepoint {
            continue;
        }
        let im = &f.target.norms[j];
        if c.is_zero() != im.is_zero() {
            zero_patterns_match = false;
            isometric = false;
            continue;
        }
        if !c.approx_eq(im) {
            isometric = false;
        }
        if !c.is_zero() {
            n1 = n1.max(&im.div(c)?);
            n2 = n2.max(&c.div(im)?);
        }
    }
    let strict = zero_patterns_match;
    let coimage_constants = strict.then(|| {
        if coim.iter().enumerate().any(|(j, c)| c.is_some() && j != f.target.basepoint) {
            (n1, n2)
        } else {
            (NormValue::one(), NormValue::one())
        }
    });
    Ok(Classification {
        bound,
        mono,
        epi,
        strict_mono: mono && strict,
        strict_epi: epi && strict,
        strict,
        iso: mono && epi && strict,
        isometric_strict: isometric,
        coimage_constants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn nv(n: i64, d: i64) -> NormValue {
        NormValue::from_rat(&rat(n, d)).unwrap()
    }

    fn set(pairs: &[(&str, NormValue)]) -> FiniteNormedSet {
        FiniteNormedSet::from_pairs(pairs).unwrap()
    }

    #[test]
    fn construction_and_kind() {
        assert_eq!(set(&[("a", nv(2, 1))]).kind(), Kind::Normed);
        assert_eq!(set(&[("a", nv(0, 1))]).kind(), Kind::SemiNormed);
        let p = set(&[]);
        assert_eq!(p.len(), 1);
        assert!(p.norm(0).is_zero());
        let mut norms = BTreeMap::new();
        norms.insert("*".to_string(), nv(1, 1));
        assert!(matches!(
            FiniteNormedSet::new(vec!["*".into()], "*", &norms),
            Err(Error::InvalidNorm(_))
        ));
        assert!(matches!(
            FiniteNormedSet::new(vec!["*".into()], "x", &BTreeMap::new()),
            Err(Error::InvalidElement(_))
        ));
    }

    #[test]
    fn bound_constant_examples() {
        let x = set(&[("a", nv(1, 1)), ("b", nv(4, 1))]);
        let y = set(&[("a'", nv(3, 1)), ("b'", nv(2, 1))]);
        let f = PointedMap::from_fn(x.clone(), y.clone(), |e| match e {
            "a" => "a'".into(),
            "b" => "b'".into(),
            _ => "*".into(),
        })
        .unwrap();
        assert_eq!(bound_constant(&f).unwrap().to_rat(), Some(int(3)));
        assert_eq!(bound_constant(&PointedMap::identity(&x)).unwrap().to_rat(), Some(int(1)));
        let zero = PointedMap::from_fn(x, y, |_| "*".into()).unwrap();
        assert!(bound_constant(&zero).unwrap().is_zero());

        let semi = set(&[("a", NormValue::zero())]);
        let g = PointedMap::from_fn(semi, set(&[("b", nv(1, 1))]), |e| {
            if e == "a" { "b".into() } else { "*".into() }
        })
        .unwrap();
        assert!(matches!(bound_constant(&g), Err(Error::Unbounded(_))));
    }

    #[test]
    fn separation_examples() {
        let x = set(&[("a", NormValue::zero()), ("b", nv(2, 1))]);
        let (s, _) = separation(&x);
        assert_eq!(s.elements(), ["*", "b"]);
        assert_eq!(s.kind(), Kind::Normed);
        let (s2, _) = separation(&s);
        assert!(s2.same_as(&s));
        let (s3, _) = separation(&set(&[("a", NormValue::zero()), ("b", NormValue::zero())]));
        assert_eq!(s3.len(), 1);
    }

    #[test]
    fn separation_factorization_keeps_bound() {
        let x = set(&[("a", NormValue::zero()), ("b", nv(2, 1))]);
        let y = set(&[("c", nv(3, 1))]);
        let f = PointedMap::from_fn(x, y, |e| if e == "b" { "c".into() } else { "*".into() }).unwrap();
        let g = factor_through_separation(&f).unwrap();
        let (_, q) = separation(&f.source);
        assert_eq!(q.compose(&g).unwrap().assignment(), f.assignment());
        assert!(bound_constant(&g).unwrap().approx_eq(&bound_constant(&f).unwrap()));
    }

    #[test]
    fn product_and_coproduct() {
        let p = product(&set(&[("a", nv(2, 1))]), &set(&[("b", nv(3, 1))]));
        assert_eq!(p.norm_of("(a,b)").unwrap().to_rat(), Some(int(3)));
        let p = product(&set(&[("a", nv(2, 1))]), &set(&[("b", nv(1, 8))]));
        assert_eq!(p.norm_of("(a,b)").unwrap().to_rat(), Some(int(2)));
        let (l, r) = product_projections(&set(&[("a", nv(2, 1))]), &set(&[("b", nv(3, 1))]));
        assert!(is_contracting(&l).unwrap() && is_contracting(&r).unwrap());

        let w = coproduct(&[&set(&[("a", nv(2, 1))]), &set(&[("b", nv(3, 1))])]);
        assert_eq!(w.elements(), ["*", "a", "b"]);
        let singles: Vec<FiniteNormedSet> = ["a", "b", "c"].iter().map(|id| set(&[(id, nv(1, 1))])).collect();
        let w3 = coproduct(&singles.iter().collect::<Vec<_>>());
        assert_eq!(w3.len(), 4);
        let clash = coproduct(&[&set(&[("a", nv(1, 1))]), &set(&[("a", nv(2, 1))])]);
        assert_eq!(clash.elements(), ["*", "(0,a)", "(1,a)"]);
    }

    #[test]
    fn coequalizer_examples() {
        let x = set(&[("x", nv(1, 1))]);
        let y = set(&[("a", nv(1, 1)), ("b", nv(3, 1))]);
        let f = PointedMap::from_fn(x.clone(), y.clone(), |e| if e == "x" { "a".into() } else { "*".into() }).unwrap();
        let g = PointedMap::from_fn(x, y.clone(), |e| if e == "x" { "b".into() } else { "*".into() }).unwrap();
        let (q, _) = coequalizer(&f, &g, false).unwrap();
        assert_eq!(q.norm_of("{a,b}").unwrap().to_rat(), Some(int(1)));
        let (same, _) = coequalizer(&f, &f, false).unwrap();
        assert!(same.same_as(&y));

        let x2 = set(&[("u", nv(1, 1)), ("v", nv(1, 1))]);
        let y3 = set(&[("a", nv(5, 1)), ("b", nv(2, 1)), ("c", nv(4, 1))]);
        let f = PointedMap::from_fn(x2.clone(), y3.clone(), |e| match e {
            "u" => "a".into(),
            "v" => "b".into(),
            _ => "*".into(),
        })
        .unwrap();
        let g = PointedMap::from_fn(x2, y3, |e| match e {
            "u" => "b".into(),
            "v" => "c".into(),
            _ => "*".into(),
        })
        .unwrap();
        let (q, _) = coequalizer(&f, &g, true).unwrap();
        assert_eq!(q.norm_of("{a,b,c}").unwrap().to_rat(), Some(int(2)));
    }

    #[test]
    fn smash_examples() {
        let s = smash(&set(&[("a", nv(2, 1))]), &set(&[("b", nv(3, 1))]));
        assert_eq!(s.norm_of("(a,b)").unwrap().to_rat(), Some(int(6)));
        assert_eq!(smash(&set(&[("a", nv(2, 1))]), &FiniteNormedSet::point()).len(), 1);
        let s = smash(&set(&[("a", nv(1, 2)), ("b", nv(1, 1))]), &set(&[("c", nv(4, 1))]));
        assert_eq!(s.norm_of("(a,c)").unwrap().to_rat(), Some(int(2)));
        assert_eq!(s.norm_of("(b,c)").unwrap().to_rat(), Some(int(4)));
    }

    #[test]
    fn internal_hom_examples() {
        let h = internal_hom(&set(&[("a", nv(2, 1))]), &set(&[("b", nv(3, 1))])).unwrap();
        assert_eq!(h.set.len(), 2);
        assert_eq!(h.set.norm_of("[a->b]").unwrap().to_rat(), Some(rat(3, 2)));
        assert!(h.set.norm(h.set.basepoint()).is_zero());

        let x = set(&[("a", nv(2, 1)), ("b", nv(1, 2))]);
        let h = internal_hom(&x, &x).unwrap();
        assert_eq!(h.set.norm_of("[a->a,b->b]").unwrap().to_rat(), Some(int(1)));
        assert_eq!(internal_hom(&FiniteNormedSet::point(), &x).unwrap().set.len(), 1);

        let big = set(&[("a", nv(1, 1)), ("b", nv(1, 1)), ("c", nv(1, 1)), ("d", nv(1, 1)), ("e", nv(1, 1))]);
        let wide = set(&[
            ("1", nv(1, 1)), ("2", nv(1, 1)), ("3", nv(1, 1)), ("4", nv(1, 1)), ("5", nv(1, 1)),
            ("6", nv(1, 1)), ("7", nv(1, 1)), ("8", nv(1, 1)), ("9", nv(1, 1)), ("10", nv(1, 1)),
        ]);
        assert!(matches!(internal_hom(&big, &wide), Err(Error::TooLarge(_))));
    }

    #[test]
    fn curry_small_case() {
        let x = set(&[("a", nv(1, 2)), ("b", nv(2, 1))]);
        let y = set(&[("c", nv(1, 1))]);
        let z = set(&[("d", nv(2, 1)), ("e", nv(1, 2))]);
        let r = currying_check(&x, &y, &z).unwrap();
        assert_eq!(r.maps_checked, 9);
        assert!(r.witness.is_none());
    }

    #[test]
    fn classification_examples() {
        let x = set(&[("a", nv(1, 1))]);
        let y = set(&[("a", nv(1, 1)), ("b", nv(5, 1))]);
        let inc = PointedMap::from_fn(x, y, |e| e.to_string()).unwrap();
        let c = classify_morphism(&inc).unwrap();
        assert!(c.strict_mono && !c.epi && c.isometric_strict);

        let src = set(&[("a", nv(1, 1)), ("b", nv(1, 1))]);
        let tgt = set(&[("c", nv(1, 1))]);
        let fold = PointedMap::from_fn(src, tgt, |e| if e == "*" { "*".into() } else { "c".into() }).unwrap();
        let c = classify_morphism(&fold).unwrap();
        assert!(c.strict_epi && !c.mono);

        let bij = PointedMap::from_fn(set(&[("a", nv(2, 1))]), set(&[("a'", nv(1, 1))]), |e| {
            if e == "a" { "a'".into() } else { "*".into() }
        })
        .unwrap();
        let c = classify_morphism(&bij).unwrap();
        assert!(c.iso && c.mono && c.epi && c.strict && !c.isometric_strict);
        let (n1, n2) = c.coimage_constants.unwrap();
        assert_eq!((n1.to_rat(), n2.to_rat()), (Some(rat(1, 2)), Some(int(2))));

        // A zero-norm element sent to a positive-norm one cannot be bounded,
        // but a positive one collapsing onto a zero-norm target is not strict.
        let kill = PointedMap::from_fn(set(&[("a", nv(1, 1))]), set(&[("z", NormValue::zero())]), |e| {
            if e == "a" { "z".into() } else { "*".into() }
        })
        .unwrap();
        assert!(!classify_morphism(&kill).unwrap().strict);
    }

    #[test]
    fn equivalence_constant_examples() {
        let a = set(&[("x", nv(1, 1)), ("y", nv(2, 1))]);
        let b = set(&[("x", nv(4, 1)), ("y", nv(1, 1))]);
        let (n1, n2) = equivalence_constants(&a, &b).unwrap();
        assert_eq!((n1.to_rat(), n2.to_rat()), (Some(int(2)), Some(int(4))));
        let (n1, n2) = equivalence_constants(&a, &a).unwrap();
        assert_eq!((n1.to_rat(), n2.to_rat()), (Some(int(1)), Some(int(1))));
        let c = set(&[("x", nv(3, 1)), ("y", nv(6, 1))]);
        let (n1, n2) = equivalence_constants(&a, &c).unwrap();
        assert_eq!((n1.to_rat(), n2.to_rat()), (Some(rat(1, 3)), Some(int(3))));
        let z = set(&[("x", NormValue::zero()), ("y", nv(1, 1))]);
        assert!(matches!(equivalence_constants(&a, &z), Err(Error::InvalidNorm(_))));
    }

    #[test]
    fn json_round_trip_with_exact_powers() {
        let v = serde_json::json!({
            "elements": ["*", "a", "b"],
            "basepoint": "*",
            "norms": {"a": {"num": 1, "den": 2}, "b": {"base": {"num": 1, "den": 2}, "exp": {"num": 3, "den": 2}}}
        });
        let x = FiniteNormedSet::from_json(&v).unwrap();
        assert!(x.norm_of("b").unwrap().is_exact());
        let back = FiniteNormedSet::from_json(&x.to_json()).unwrap();
        assert!(back.same_as(&x));
        assert_eq!(back.to_json(), x.to_json());
    }
}
