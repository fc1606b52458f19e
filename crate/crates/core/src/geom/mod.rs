//! Exact axis-parallel geometry: rays, segments, closed intersection tests,
//! the properization perturbation and a sweep index over leftward rays.
//!
//! Every coordinate is a [`Rat`]. Intersection is closed: touching counts.

mod index;
mod properize;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Orientation, Result};

pub use index::{ExtremeTree, RayIndex};
pub use properize::{is_proper, min_positive_gap, proper_intervals, properize, Gap};

/// Exact rational scalar in lowest terms with a positive denominator.
pub type Rat = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Parses `"p/q"` or `"p"`. A zero denominator is rejected.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::invalid(format!("malformed rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(num, den))
}

/// Canonical `"p/q"` rendering; the denominator is always written.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Exact comparison with a fast path: when both values have numerator and
/// denominator within `i64`, cross-multiplies in `i128`.
pub fn rat_cmp(a: &Rat, b: &Rat) -> std::cmp::Ordering {
    use num_traits::ToPrimitive;
    let small = |r: &Rat| Some((r.numer().to_i64()? as i128, r.denom().to_i64()? as i128));
    match (small(a), small(b)) {
        (Some((an, ad)), Some((bn, bd))) => (an * bd).cmp(&(bn * ad)),
        _ => a.cmp(b),
    }
}

/// Lossy conversion used only for display and timing reports.
pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

pub(crate) mod rat_serde {
    use super::{format_rat, parse_rat, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

pub(crate) mod point_serde {
    use super::{format_rat, parse_rat, Rat};
    use serde::ser::SerializeTuple;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &(Rat, Rat), s: S) -> Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&format_rat(&p.0))?;
        t.serialize_element(&format_rat(&p.1))?;
        t.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(Rat, Rat), D::Error> {
        let (x, y) = <(String, String)>::deserialize(d)?;
        let x = parse_rat(&x).map_err(serde::de::Error::custom)?;
        let y = parse_rat(&y).map_err(serde::de::Error::custom)?;
        Ok((x, y))
    }
}

/// Horizontal ray `{(t, y) : t <= x_right}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HRay {
    pub id: usize,
    #[serde(with = "rat_serde")]
    pub y: Rat,
    #[serde(with = "rat_serde")]
    pub x_right: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VSeg {
    pub id: usize,
    #[serde(with = "rat_serde")]
    pub x: Rat,
    #[serde(with = "rat_serde")]
    pub y_lo: Rat,
    #[serde(with = "rat_serde")]
    pub y_hi: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HSeg {
    pub id: usize,
    #[serde(with = "rat_serde")]
    pub y: Rat,
    #[serde(with = "rat_serde")]
    pub x_lo: Rat,
    #[serde(with = "rat_serde")]
    pub x_hi: Rat,
}

impl HRay {
    pub fn new(id: usize, y: Rat, x_right: Rat) -> Self {
        HRay { id, y, x_right }
    }
}

impl VSeg {
    pub fn new(id: usize, x: Rat, y_lo: Rat, y_hi: Rat) -> Self {
        VSeg { id, x, y_lo, y_hi }
    }

    pub fn is_well_formed(&self) -> bool {
        self.y_lo <= self.y_hi
    }

    pub fn length(&self) -> Rat {
        &self.y_hi - &self.y_lo
    }

    pub fn contains_y(&self, y: &Rat) -> bool {
        &self.y_lo <= y && y <= &self.y_hi
    }
}

impl HSeg {
    pub fn new(id: usize, y: Rat, x_lo: Rat, x_hi: Rat) -> Self {
        HSeg { id, y, x_lo, x_hi }
    }

    pub fn is_well_formed(&self) -> bool {
        self.x_lo <= self.x_hi
    }

    pub fn length(&self) -> Rat {
        &self.x_hi - &self.x_lo
    }

    pub fn contains_x(&self, x: &Rat) -> bool {
        &self.x_lo <= x && x <= &self.x_hi
    }
}

/// Closed bounding extent; `x_lo == None` stands for minus infinity.
struct Extent<'a> {
    x_lo: Option<&'a Rat>,
    x_hi: &'a Rat,
    y_lo: &'a Rat,
    y_hi: &'a Rat,
}

impl Extent<'_> {
    fn overlaps(&self, o: &Extent<'_>) -> bool {
        let x_ok = self.x_lo.is_none_or(|lo| lo <= o.x_hi) && o.x_lo.is_none_or(|lo| lo <= self.x_hi);
        x_ok && self.y_lo <= o.y_hi && o.y_lo <= self.y_hi
    }
}

/// Any of the three primitive shapes.
#[derive(Debug, Clone, Copy)]
pub enum Feature<'a> {
    Ray(&'a HRay),
    V(&'a VSeg),
    H(&'a HSeg),
}

impl<'a> Feature<'a> {
    fn extent(&self) -> Extent<'a> {
        match *self {
            Feature::Ray(r) => Extent { x_lo: None, x_hi: &r.x_right, y_lo: &r.y, y_hi: &r.y },
            Feature::V(v) => Extent { x_lo: Some(&v.x), x_hi: &v.x, y_lo: &v.y_lo, y_hi: &v.y_hi },
            Feature::H(h) => Extent { x_lo: Some(&h.x_lo), x_hi: &h.x_hi, y_lo: &h.y, y_hi: &h.y },
        }
    }
}

impl<'a> From<&'a HRay> for Feature<'a> {
    fn from(r: &'a HRay) -> Self {
        Feature::Ray(r)
    }
}

impl<'a> From<&'a VSeg> for Feature<'a> {
    fn from(v: &'a VSeg) -> Self {
        Feature::V(v)
    }
}

impl<'a> From<&'a HSeg> for Feature<'a> {
    fn from(h: &'a HSeg) -> Self {
        Feature::H(h)
    }
}

/// True iff the closed point sets meet.
///
/// Every primitive is axis-parallel, so each one equals its own (possibly
/// degenerate, possibly left-unbounded) bounding box and the test reduces to
/// box overlap.
pub fn intersects<'a, 'b>(a: impl Into<Feature<'a>>, b: impl Into<Feature<'b>>) -> bool {
    a.into().extent().overlaps(&b.into().extent())
}

/// A horizontal or vertical segment.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Seg {
    H(HSeg),
    V(VSeg),
}

impl Seg {
    pub fn id(&self) -> usize {
        match self {
            Seg::H(h) => h.id,
            Seg::V(v) => v.id,
        }
    }

    pub fn with_id(&self, id: usize) -> Seg {
        match self {
            Seg::H(h) => Seg::H(HSeg { id, ..h.clone() }),
            Seg::V(v) => Seg::V(VSeg { id, ..v.clone() }),
        }
    }

    pub fn orientation(&self) -> Orientation {
        match self {
            Seg::H(_) => Orientation::Horizontal,
            Seg::V(_) => Orientation::Vertical,
        }
    }

    pub fn length(&self) -> Rat {
        match self {
            Seg::H(h) => h.length(),
            Seg::V(v) => v.length(),
        }
    }

    pub fn feature(&self) -> Feature<'_> {
        match self {
            Seg::H(h) => Feature::H(h),
            Seg::V(v) => Feature::V(v),
        }
    }

    pub fn intersects(&self, other: &Seg) -> bool {
        intersects(self.feature(), other.feature())
    }

    /// Projection onto the segment's own axis.
    pub fn projection(&self) -> (&Rat, &Rat) {
        match self {
            Seg::H(h) => (&h.x_lo, &h.x_hi),
            Seg::V(v) => (&v.y_lo, &v.y_hi),
        }
    }

    /// Swaps the roles of the axes; intersection is preserved.
    pub fn transpose(&self) -> Seg {
        match self {
            Seg::H(h) => Seg::V(VSeg::new(h.id, h.y.clone(), h.x_lo.clone(), h.x_hi.clone())),
            Seg::V(v) => Seg::H(HSeg::new(v.id, v.x.clone(), v.y_lo.clone(), v.y_hi.clone())),
        }
    }
}

impl<'a> From<&'a Seg> for Feature<'a> {
    fn from(s: &'a Seg) -> Self {
        s.feature()
    }
}

/// Horizontal and vertical segments sharing one id space, with designated
/// constraint and candidate subsets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthoInstance {
    pub hsegs: Vec<HSeg>,
    pub vsegs: Vec<VSeg>,
    pub constraint_ids: BTreeSet<usize>,
    pub candidate_ids: BTreeSet<usize>,
}

impl OrthoInstance {
    /// Every segment is both a constraint and a candidate.
    pub fn domination(hsegs: Vec<HSeg>, vsegs: Vec<VSeg>) -> Self {
        let ids: BTreeSet<usize> = hsegs.iter().map(|h| h.id).chain(vsegs.iter().map(|v| v.id)).collect();
        OrthoInstance { hsegs, vsegs, constraint_ids: ids.clone(), candidate_ids: ids }
    }

    pub fn segments(&self) -> impl Iterator<Item = Seg> + '_ {
        self.hsegs.iter().cloned().map(Seg::H).chain(self.vsegs.iter().cloned().map(Seg::V))
    }

    pub fn by_id(&self) -> BTreeMap<usize, Seg> {
        self.segments().map(|s| (s.id(), s)).collect()
    }

    pub fn len(&self) -> usize {
        self.hsegs.len() + self.vsegs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Checks unique ids, well-formed segments and that both role sets refer
    /// to existing segments. Feasibility is checked by the solvers.
    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for s in self.segments() {
            if !seen.insert(s.id()) {
                return Err(Error::invalid(format!("duplicate segment id {}", s.id())));
            }
            let ok = match &s {
                Seg::H(h) => h.is_well_formed(),
                Seg::V(v) => v.is_well_formed(),
            };
            if !ok {
                return Err(Error::invalid(format!("segment {} has reversed endpoints", s.id())));
            }
        }
        for id in self.constraint_ids.iter().chain(&self.candidate_ids) {
            if !seen.contains(id) {
                return Err(Error::invalid(format!("role id {id} names no segment")));
            }
        }
        Ok(())
    }

    /// Candidates intersecting each constraint, keyed by constraint id.
    pub fn neighborhoods(&self) -> BTreeMap<usize, Vec<usize>> {
        let segs = self.by_id();
        self.constraint_ids
            .iter()
            .map(|c| {
                let cs = &segs[c];
                let hits = self.candidate_ids.iter().copied().filter(|k| segs[k].intersects(cs)).collect();
                (*c, hits)
            })
            .collect()
    }
}

/// Shifts vertical segments that share an x-coordinate apart, leftwards by
/// id-ordered multiples of a step (total below a quarter of the smallest gap
/// between distinct x values) small enough that no segment's relation to any ray
/// endpoint `x_right` changes. After the call all x-coordinates are distinct,
/// so the segments are pairwise disjoint.
pub fn separate_shared_x(rays: &[HRay], segs: &mut [VSeg]) {
    let mut groups: BTreeMap<&Rat, Vec<usize>> = BTreeMap::new();
    for (i, s) in segs.iter().enumerate() {
        groups.entry(&s.x).or_default().push(i);
    }
    if groups.values().all(|g| g.len() == 1) {
        return;
    }
    let mut values: Vec<&Rat> = segs.iter().map(|s| &s.x).chain(rays.iter().map(|r| &r.x_right)).collect();
    values.sort();
    values.dedup();
    let gap = values.windows(2).map(|w| w[1] - w[0]).min().unwrap_or_else(|| int(1));
    let step = gap / int(4 * (segs.len() as i64 + 1));
    let mut shifts: Vec<(usize, Rat)> = Vec::new();
    for group in groups.values() {
        let mut group = group.clone();
        group.sort_by_key(|&i| segs[i].id);
        for (k, &i) in group.iter().enumerate().skip(1) {
            shifts.push((i, &step * int(k as i64)));
        }
    }
    for (i, d) in shifts {
        segs[i].x -= d;
    }
}

/// Reflects across the y-axis: maps a rightward ray starting at `x_start` to
/// the leftward ray ending at `-x_start`.
pub fn mirrored_ray(id: usize, y: &Rat, x_start: &Rat) -> HRay {
    HRay::new(id, y.clone(), -x_start.clone())
}

pub fn mirrored_vseg(v: &VSeg) -> VSeg {
    VSeg::new(v.id, -v.x.clone(), v.y_lo.clone(), v.y_hi.clone())
}

/// Minimum of an iterator of rationals, translated so the result is >= 0.
pub(crate) fn nonneg_shift<'a>(values: impl Iterator<Item = &'a Rat>) -> Rat {
    match values.min() {
        Some(m) if m.is_negative() => -m.clone(),
        _ => Rat::zero(),
    }
}
