//! Seeded random instance generators. Every generator produces instances
//! that satisfy their solver's preconditions by construction; the few
//! properties that cannot be forced are rejection-sampled.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{int, properize, rat, HRay, HSeg, OrthoInstance, Rat, VSeg};
use crate::io::{InstanceFile, Kind};
use crate::srs::SrsInstance;
use crate::ssr::SsrInstance;
use crate::stabbedl::{self, LPath, StabbedLInstance};
use crate::uvpg::{Dir, UnitBkInstance, UnitKBendPath};

const MAX_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    /// Primary count: rays for SSR and SRS, paths or segments otherwise.
    pub n: usize,
    /// Secondary count: segments for SSR and SRS.
    pub m: usize,
    /// Bend bound for unit paths.
    pub k: usize,
    pub h: usize,
    pub w: usize,
    /// Coordinates are drawn from `0..=coord_range` (or its negation).
    pub coord_range: i64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { n: 8, m: 8, k: 1, h: 3, w: 3, coord_range: 20 }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn generate(kind: Kind, p: &GenParams, seed: u64) -> Result<InstanceFile> {
    let mut r = rng(seed);
    Ok(match kind {
        Kind::Ssr => InstanceFile::Ssr(gen_ssr(&mut r, p)?),
        Kind::Srs => InstanceFile::Srs(gen_srs(&mut r, p)?),
        Kind::StabbedL => InstanceFile::StabbedL(gen_stabbed_l(&mut r, p)?),
        Kind::OrthoPsd => InstanceFile::OrthoPsd(gen_ortho_psd(&mut r, p)?),
        Kind::UnitBk => InstanceFile::UnitBk(gen_unit_bk(&mut r, p)),
    })
}

/// `count` distinct integers from `lo..=hi`.
fn distinct(r: &mut impl Rng, count: usize, lo: i64, hi: i64) -> Result<Vec<i64>> {
    if hi < lo || ((hi - lo + 1) as usize) < count {
        return Err(Error::GenerationExhausted(0));
    }
    let mut pool: Vec<i64> = (lo..=hi).collect();
    pool.shuffle(r);
    pool.truncate(count);
    Ok(pool)
}

fn range(p: &GenParams, at_least: usize) -> i64 {
    p.coord_range.max(at_least as i64).max(1)
}

/// Rays at distinct heights; every segment is built around a chosen ray.
pub fn gen_ssr(r: &mut impl Rng, p: &GenParams) -> Result<SsrInstance> {
    if p.n == 0 && p.m > 0 {
        return Err(Error::invalid("segments need at least one ray"));
    }
    let c = range(p, p.n);
    let ys = distinct(r, p.n, 0, c)?;
    let rays: Vec<HRay> = ys.iter().enumerate().map(|(i, &y)| HRay::new(i, int(y), int(r.gen_range(0..=c)))).collect();
    let segments = (0..p.m)
        .map(|j| {
            let anchor = &rays[r.gen_range(0..rays.len())];
            let x = r.gen_range(-1..=0) + r.gen_range(0..=c).min(int_of(&anchor.x_right));
            let y = int_of(&anchor.y);
            VSeg::new(j, int(x), int(y - r.gen_range(0..=c / 3)), int(y + r.gen_range(0..=c / 3)))
        })
        .collect();
    Ok(SsrInstance::new(rays, segments))
}

fn int_of(v: &Rat) -> i64 {
    use num_traits::ToPrimitive;
    v.to_integer().to_i64().expect("generator coordinates are small")
}

/// Segments first, then rays each ending right of a segment it crosses.
/// Ray `i` sits at an integer height plus `i/(n+1)`, so heights are distinct.
pub fn gen_srs(r: &mut impl Rng, p: &GenParams) -> Result<SrsInstance> {
    if p.m == 0 && p.n > 0 {
        return Err(Error::invalid("rays need at least one segment"));
    }
    let c = range(p, 2);
    let segments: Vec<VSeg> = (0..p.m)
        .map(|j| {
            let lo = r.gen_range(0..=c);
            VSeg::new(j, int(r.gen_range(0..=c)), int(lo), int(lo + r.gen_range(1..=c / 2 + 1)))
        })
        .collect();
    let rays = (0..p.n)
        .map(|i| {
            let s = &segments[r.gen_range(0..segments.len())];
            let y = int(r.gen_range(int_of(&s.y_lo)..int_of(&s.y_hi))) + rat(i as i64, p.n as i64 + 1);
            HRay::new(i, y, int(int_of(&s.x) + r.gen_range(0..=c / 2)))
        })
        .collect();
    Ok(SrsInstance::new(rays, segments))
}

/// Corners at distinct x and distinct y left of the line `x = 0`; every
/// horizontal leg reaches the line. Distinct coordinates rule out collinear
/// overlaps and a second contact point.
pub fn gen_stabbed_l(r: &mut impl Rng, p: &GenParams) -> Result<StabbedLInstance> {
    let c = range(p, p.n);
    let xs = distinct(r, p.n, -c, -1)?;
    let ys = distinct(r, p.n, 0, c)?;
    let paths = (0..p.n)
        .map(|i| {
            let vlen = r.gen_range(1..=c.max(2) / 2 + 1);
            let hlen = -xs[i] + r.gen_range(0..=c / 2);
            LPath::new(i, int(xs[i]), int(ys[i]), int(vlen), int(hlen))
        })
        .collect();
    let inst = StabbedLInstance::new(paths, int(0));
    stabbedl::normalize(&inst)?;
    Ok(inst)
}

/// Equal-length horizontal and vertical segments with integer anchors.
/// Ties and collinear overlaps are allowed.
pub fn gen_equal_length(r: &mut impl Rng, p: &GenParams) -> OrthoInstance {
    let c = range(p, 2);
    let len = (c / 3).max(1);
    let mut hsegs = Vec::new();
    let mut vsegs = Vec::new();
    for id in 0..p.n {
        let (a, b) = (r.gen_range(0..=c), r.gen_range(0..=c));
        if r.gen_bool(0.5) {
            hsegs.push(HSeg::new(id, int(b), int(a), int(a + len)));
        } else {
            vsegs.push(VSeg::new(id, int(a), int(b), int(b + len)));
        }
    }
    OrthoInstance::domination(hsegs, vsegs)
}

/// Equal-length segments with random roles, made proper. Constraints that
/// no candidate meets are dropped.
pub fn gen_ortho_psd(r: &mut impl Rng, p: &GenParams) -> Result<OrthoInstance> {
    let mut inst = gen_equal_length(r, p);
    let ids: Vec<usize> = (0..p.n).collect();
    for attempt in 0..MAX_ATTEMPTS {
        let cand: BTreeSet<usize> = ids.iter().copied().filter(|_| r.gen_bool(0.7)).collect();
        let cons: BTreeSet<usize> = ids.iter().copied().filter(|_| r.gen_bool(0.7)).collect();
        inst.candidate_ids = cand;
        inst.constraint_ids = cons;
        let nbhd = inst.neighborhoods();
        inst.constraint_ids.retain(|c| !nbhd[c].is_empty());
        if p.n == 0 || !inst.constraint_ids.is_empty() {
            return properize(&inst);
        }
        if attempt + 1 == MAX_ATTEMPTS {
            break;
        }
    }
    Err(Error::GenerationExhausted(MAX_ATTEMPTS))
}

/// Unit paths with 1 to k+1 alternating legs from half-integer starts.
pub fn gen_unit_bk(r: &mut impl Rng, p: &GenParams) -> UnitBkInstance {
    let c = range(p, 2);
    let paths = (0..p.n)
        .map(|id| {
            let start = (rat(r.gen_range(0..=c), 2), rat(r.gen_range(0..=c), 2));
            let count = r.gen_range(1..=p.k + 1);
            let mut horizontal = r.gen_bool(0.5);
            let legs = (0..count)
                .map(|_| {
                    let d = match (horizontal, r.gen_bool(0.5)) {
                        (true, true) => Dir::Right,
                        (true, false) => Dir::Left,
                        (false, true) => Dir::Up,
                        (false, false) => Dir::Down,
                    };
                    horizontal = !horizontal;
                    d
                })
                .collect();
            UnitKBendPath::new(id, start, legs)
        })
        .collect();
    UnitBkInstance { k: p.k, paths }
}
