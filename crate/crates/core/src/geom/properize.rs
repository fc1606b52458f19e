use num_traits::Zero;

use super::{int, OrthoInstance, Rat, Seg};
use crate::error::{Error, Orientation, Result};

/// Result of [`min_positive_gap`]; `Infinite` when there is nothing to measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gap {
    Finite(Rat),
    Infinite,
}

impl Gap {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Gap::Finite(g) => Some(g),
            Gap::Infinite => None,
        }
    }
}

fn axis_gap(a: (&Rat, &Rat), b: (&Rat, &Rat)) -> Rat {
    if a.1 < b.0 {
        b.0 - a.1
    } else if b.1 < a.0 {
        a.0 - b.1
    } else {
        Rat::zero()
    }
}

fn boxes(s: &Seg) -> ((&Rat, &Rat), (&Rat, &Rat)) {
    match s {
        Seg::H(h) => ((&h.x_lo, &h.x_hi), (&h.y, &h.y)),
        Seg::V(v) => ((&v.x, &v.x), (&v.y_lo, &v.y_hi)),
    }
}

/// Chebyshev distance between two segments (zero iff they intersect).
pub(crate) fn linf_distance(a: &Seg, b: &Seg) -> Rat {
    let (ax, ay) = boxes(a);
    let (bx, by) = boxes(b);
    axis_gap(ax, bx).max(axis_gap(ay, by))
}

/// Smallest positive separation in the instance: the minimum over disjoint
/// pairs of their Chebyshev distance, together with the minimum positive
/// difference between the low ends of two same-orientation projections.
///
/// The Chebyshev distance never exceeds the Euclidean one, so the result is
/// a valid lower bound on every positive Euclidean gap while staying rational.
pub fn min_positive_gap(inst: &OrthoInstance) -> Gap {
    let segs: Vec<Seg> = inst.segments().collect();
    let mut best: Option<Rat> = None;
    let mut offer = |d: Rat| {
        if d > Rat::zero() && best.as_ref().is_none_or(|b| &d < b) {
            best = Some(d);
        }
    };
    for (i, a) in segs.iter().enumerate() {
        for b in &segs[i + 1..] {
            offer(linf_distance(a, b));
            if a.orientation() == b.orientation() {
                let d = a.projection().0 - b.projection().0;
                offer(if d < Rat::zero() { -d } else { d });
            }
        }
    }
    best.map_or(Gap::Infinite, Gap::Finite)
}

/// True iff no interval contains another. Identical intervals contain each
/// other, so duplicates make a family improper.
pub fn proper_intervals(ivs: &[(&Rat, &Rat)]) -> bool {
    let mut sorted: Vec<_> = ivs.to_vec();
    sorted.sort_by(|a, b| a.0.cmp(b.0).then(b.1.cmp(a.1)));
    sorted.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1)
}

/// Returns the first orientation whose projections are not proper, if any.
pub fn is_proper(inst: &OrthoInstance) -> Option<Orientation> {
    let hs: Vec<_> = inst.hsegs.iter().map(|h| (&h.x_lo, &h.x_hi)).collect();
    if !proper_intervals(&hs) {
        return Some(Orientation::Horizontal);
    }
    let vs: Vec<_> = inst.vsegs.iter().map(|v| (&v.y_lo, &v.y_hi)).collect();
    if !proper_intervals(&vs) {
        return Some(Orientation::Vertical);
    }
    None
}

/// Stretches equal-length segments so that both projection families become
/// proper while every pairwise intersection (and non-intersection) is kept.
///
/// Per orientation with `n` segments, `eps = g / (4(n+1))`. Segments are
/// ranked by `(low end, id)`; rank `i` grows by `i*eps` below and
/// `(n-i)*eps` above, so all lengths stay equal and all low ends become
/// distinct. The total growth per side stays below `g/4`.
pub fn properize(inst: &OrthoInstance) -> Result<OrthoInstance> {
    let mut lengths = inst.segments().map(|s| s.length());
    if let Some(first) = lengths.next() {
        if lengths.any(|l| l != first) {
            return Err(Error::invalid("properize needs segments of equal length"));
        }
    }
    let gap = min_positive_gap(inst);
    let eps_for = |n: usize| -> Rat {
        let base = gap.finite().cloned().unwrap_or_else(|| int(1));
        base / int(4 * (n as i64 + 1))
    };

    let mut out = inst.clone();

    let n = out.hsegs.len();
    let eps = eps_for(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| out.hsegs[a].x_lo.cmp(&out.hsegs[b].x_lo).then(out.hsegs[a].id.cmp(&out.hsegs[b].id)));
    for (rank, &k) in order.iter().enumerate() {
        let h = &mut out.hsegs[k];
        h.x_lo -= &eps * int(rank as i64);
        h.x_hi += &eps * int((n - rank) as i64);
    }

    let n = out.vsegs.len();
    let eps = eps_for(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| out.vsegs[a].y_lo.cmp(&out.vsegs[b].y_lo).then(out.vsegs[a].id.cmp(&out.vsegs[b].id)));
    for (rank, &k) in order.iter().enumerate() {
        let v = &mut out.vsegs[k];
        v.y_lo -= &eps * int(rank as i64);
        v.y_hi += &eps * int((n - rank) as i64);
    }

    Ok(out)
}
