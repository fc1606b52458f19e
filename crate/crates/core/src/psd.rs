//! Domination among horizontal and vertical segments whose projections form
//! proper interval families.
//!
//! Same-orientation domination reduces to interval domination, solved
//! exactly. Cross-orientation domination is decomposed into vertical strips
//! around a set of hit points and each strip is a ray stabbing instance.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::error::{Error, Orientation, Result};
use crate::geom::{int, intersects, is_proper, proper_intervals, rat, HRay, HSeg, OrthoInstance, Rat, Seg, VSeg};
use crate::lp::{solve_lp, threshold_split, CoverProgram, SolveCertificate, SplitPart};
use crate::ssr;

/// Intervals `(id, l, r)` with no member containing another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProperIntervalSet {
    pub intervals: Vec<(usize, Rat, Rat)>,
}

impl ProperIntervalSet {
    pub fn new(intervals: Vec<(usize, Rat, Rat)>) -> Result<Self> {
        if intervals.iter().any(|(_, l, r)| l > r) {
            return Err(Error::invalid("interval with l > r"));
        }
        let ivs: Vec<_> = intervals.iter().map(|(_, l, r)| (l, r)).collect();
        if !proper_intervals(&ivs) {
            return Err(Error::invalid("interval family is not proper"));
        }
        Ok(ProperIntervalSet { intervals })
    }

    /// Members sorted by right endpoint (equivalently by left endpoint).
    pub fn sorted(&self) -> Vec<&(usize, Rat, Rat)> {
        let mut v: Vec<_> = self.intervals.iter().collect();
        v.sort_by(|a, b| a.2.cmp(&b.2).then(a.0.cmp(&b.0)));
        v
    }
}

fn meets(a: (&Rat, &Rat), b: (&Rat, &Rat)) -> bool {
    a.0 <= b.1 && b.0 <= a.1
}

/// Minimum subset of `s` meeting every target interval.
///
/// Greedy: take the uncovered target with the smallest right endpoint and the
/// candidate meeting it that reaches furthest right. Targets need not be
/// members of `s`; only `s` has to be proper for this to be optimal.
pub fn spid_targets(s: &ProperIntervalSet, targets: &[(usize, Rat, Rat)]) -> Result<BTreeSet<usize>> {
    let mut order: Vec<&(usize, Rat, Rat)> = targets.iter().collect();
    order.sort_by(|a, b| a.2.cmp(&b.2).then(a.1.cmp(&b.1)).then(a.0.cmp(&b.0)));
    let cands = s.sorted();
    let mut chosen: Vec<&(usize, Rat, Rat)> = Vec::new();
    let mut out = BTreeSet::new();
    for t in order {
        if chosen.iter().any(|c| meets((&c.1, &c.2), (&t.1, &t.2))) {
            continue;
        }
        let best = cands.iter().rev().find(|c| meets((&c.1, &c.2), (&t.1, &t.2))).ok_or(Error::InfeasibleTarget(t.0))?;
        out.insert(best.0);
        chosen.push(best);
    }
    Ok(out)
}

/// Minimum subset of `s` meeting every member of `s` whose id is in `t`.
pub fn spid_exact(s: &ProperIntervalSet, t: &BTreeSet<usize>) -> Result<BTreeSet<usize>> {
    let targets: Vec<_> = s.intervals.iter().filter(|iv| t.contains(&iv.0)).cloned().collect();
    if targets.len() != t.len() {
        return Err(Error::invalid("target ids must name members of the interval set"));
    }
    spid_targets(s, &targets)
}

/// Constraint matrix of the interval domination program with columns in
/// right-endpoint order: one row per target, listing column positions.
pub fn spid_matrix(s: &ProperIntervalSet, targets: &[(usize, Rat, Rat)]) -> Vec<Vec<usize>> {
    let cands = s.sorted();
    targets.iter().map(|t| (0..cands.len()).filter(|&j| meets((&cands[j].1, &cands[j].2), (&t.1, &t.2))).collect()).collect()
}

/// True iff every row's ones are consecutive.
pub fn consecutive_ones(rows: &[Vec<usize>]) -> bool {
    rows.iter().all(|r| r.windows(2).all(|w| w[1] == w[0] + 1))
}

/// Hit points with sentinels, the strips between consecutive points and the
/// left/right candidate split of every target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StripDecomposition {
    pub points: Vec<Rat>,
    /// `strips[i]` holds the targets with `points[i] <= x < points[i+1]`.
    pub strips: Vec<Vec<usize>>,
    pub strip_of: BTreeMap<usize, usize>,
    pub left: BTreeMap<usize, BTreeSet<usize>>,
    pub right: BTreeMap<usize, BTreeSet<usize>>,
}

/// Earliest-right-endpoint greedy maximum disjoint subfamily; returns the
/// right endpoints of its members.
fn hit_points(s: &[HSeg]) -> Vec<Rat> {
    let mut order: Vec<&HSeg> = s.iter().collect();
    order.sort_by(|a, b| a.x_hi.cmp(&b.x_hi).then(a.id.cmp(&b.id)));
    let mut pts: Vec<Rat> = Vec::new();
    for h in order {
        if pts.last().is_none_or(|p| &h.x_lo > p) {
            pts.push(h.x_hi.clone());
        }
    }
    pts
}

pub fn build_strips(s: &[HSeg], t: &[VSeg]) -> StripDecomposition {
    let coords = s.iter().flat_map(|h| [&h.x_lo, &h.x_hi]).chain(t.iter().map(|v| &v.x));
    let lo = coords.clone().min().cloned().unwrap_or_else(|| int(0)) - int(1);
    let hi = coords.max().cloned().unwrap_or_else(|| int(0)) + int(1);
    let mut points = vec![lo];
    points.extend(hit_points(s));
    points.push(hi);

    let mut strips = vec![Vec::new(); points.len() - 1];
    let mut strip_of = BTreeMap::new();
    let mut left = BTreeMap::new();
    let mut right = BTreeMap::new();
    for v in t {
        let i = points.partition_point(|p| p <= &v.x) - 1;
        strips[i].push(v.id);
        strip_of.insert(v.id, i);
        let side = |p: &Rat| -> BTreeSet<usize> { s.iter().filter(|h| intersects(*h, v) && h.contains_x(p)).map(|h| h.id).collect() };
        left.insert(v.id, side(&points[i]));
        right.insert(v.id, side(&points[i + 1]));
    }
    StripDecomposition { points, strips, strip_of, left, right }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PossReport {
    pub certificate: SolveCertificate,
    pub strips: StripDecomposition,
    pub w_lp: Rat,
    pub w1_lp: Rat,
    pub w2_lp: Rat,
    pub a1: BTreeSet<usize>,
    pub a2: BTreeSet<usize>,
}

/// Keeps the furthest-reaching ray per height; the others are dominated.
fn dedup_rays(mut rays: Vec<HRay>) -> Vec<HRay> {
    rays.sort_by(|a, b| a.y.cmp(&b.y).then(b.x_right.cmp(&a.x_right)).then(a.id.cmp(&b.id)));
    rays.dedup_by(|later, first| later.y == first.y);
    rays
}

/// Horizontal candidates `s` (proper x-projections) hitting every vertical
/// target in `t`, within 8 times the LP optimum.
pub fn poss_solve(s: &[HSeg], t: &[VSeg]) -> Result<PossReport> {
    let hs: Vec<_> = s.iter().map(|h| (&h.x_lo, &h.x_hi)).collect();
    if !proper_intervals(&hs) {
        return Err(Error::NotProper(Orientation::Horizontal));
    }
    let strips = build_strips(s, t);
    let pos: BTreeMap<usize, usize> = s.iter().enumerate().map(|(i, h)| (h.id, i)).collect();
    let mut rows = Vec::with_capacity(t.len());
    let mut parts = Vec::with_capacity(t.len());
    for v in t {
        let l: Vec<usize> = strips.left[&v.id].iter().map(|id| pos[id]).collect();
        let r: Vec<usize> = strips.right[&v.id].iter().map(|id| pos[id]).collect();
        if l.is_empty() && r.is_empty() {
            return Err(Error::InfeasibleTarget(v.id));
        }
        let mut row: Vec<usize> = l.iter().chain(&r).copied().collect();
        row.sort_unstable();
        rows.push(row);
        let mut p = Vec::new();
        if !l.is_empty() {
            p.push((0u8, l));
        }
        if !r.is_empty() {
            p.push((1u8, r));
        }
        parts.push(p);
    }
    let prog = CoverProgram { num_vars: s.len(), rows };
    let lp = solve_lp(&prog);
    let split = threshold_split(&prog, &lp, &parts, &rat(1, 2))?;
    let empty = SplitPart::default();
    let (p1, p2) = (split.get(&0).unwrap_or(&empty), split.get(&1).unwrap_or(&empty));

    // one stabbing instance per (strip, side)
    let mut jobs: Vec<ssr::SsrInstance> = Vec::new();
    for (side, part) in [(0u8, p1), (1u8, p2)] {
        let mut by_strip: BTreeMap<usize, (Vec<VSeg>, BTreeSet<usize>)> = BTreeMap::new();
        for (&row, vars) in part.rows.iter().zip(&part.row_vars) {
            let v = &t[row];
            let e = by_strip.entry(strips.strip_of[&v.id]).or_default();
            e.0.push(v.clone());
            e.1.extend(vars.iter().copied());
        }
        for (targets, cands) in by_strip.into_values() {
            let inst = if side == 0 {
                // candidates cross the strip's left line and reach right
                let rays = cands.iter().map(|&c| HRay::new(s[c].id, s[c].y.clone(), s[c].x_hi.clone())).collect();
                ssr::SsrInstance::new(dedup_rays(rays), targets)
            } else {
                // candidates cross the right line and reach left: mirror
                let rays = cands.iter().map(|&c| HRay::new(s[c].id, s[c].y.clone(), -s[c].x_lo.clone())).collect();
                let targets = targets.iter().map(|v| VSeg::new(v.id, -v.x.clone(), v.y_lo.clone(), v.y_hi.clone())).collect();
                ssr::SsrInstance::new(dedup_rays(rays), targets)
            };
            jobs.push(inst);
        }
    }
    let solved: Vec<BTreeSet<usize>> = jobs.par_iter().map(|inst| ssr::solve_fast(&ssr::normalize(inst)?)).collect::<Result<_>>()?;
    let d: BTreeSet<usize> = solved.into_iter().flatten().collect();

    let w1_lp = solve_lp(&p1.program().0).objective;
    let w2_lp = solve_lp(&p2.program().0).objective;
    let ids_of = |p: &SplitPart| p.rows.iter().map(|&r| t[r].id).collect();
    Ok(PossReport {
        certificate: SolveCertificate::new(d, lp.objective.clone(), int(8)),
        a1: ids_of(p1),
        a2: ids_of(p2),
        strips,
        w_lp: lp.objective,
        w1_lp,
        w2_lp,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsdReport {
    pub certificate: SolveCertificate,
    pub z_lp: Rat,
    /// LP optima of the same-orientation and cross-orientation parts.
    pub z1_lp: Rat,
    pub z2_lp: Rat,
    pub same_solution: BTreeSet<usize>,
    pub cross_solution: BTreeSet<usize>,
}

/// Candidates dominating every constraint segment, within 18 times the LP
/// optimum of the domination program.
pub fn psd_solve(inst: &OrthoInstance) -> Result<PsdReport> {
    inst.validate()?;
    if let Some(o) = is_proper(inst) {
        return Err(Error::NotProper(o));
    }
    let segs = inst.by_id();
    let cands: Vec<usize> = inst.candidate_ids.iter().copied().collect();
    let var: BTreeMap<usize, usize> = cands.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let cons: Vec<usize> = inst.constraint_ids.iter().copied().collect();

    let mut rows = Vec::with_capacity(cons.len());
    let mut parts = Vec::with_capacity(cons.len());
    for &u in &cons {
        let su = &segs[&u];
        let (mut same, mut cross) = (Vec::new(), Vec::new());
        for &c in &cands {
            let sc = &segs[&c];
            if sc.intersects(su) {
                if sc.orientation() == su.orientation() {
                    same.push(var[&c]);
                } else {
                    cross.push(var[&c]);
                }
            }
        }
        if same.is_empty() && cross.is_empty() {
            return Err(Error::InfeasibleConstraint(u));
        }
        let mut row: Vec<usize> = same.iter().chain(&cross).copied().collect();
        row.sort_unstable();
        rows.push(row);
        parts.push([(0u8, same), (1u8, cross)].into_iter().filter(|(_, v)| !v.is_empty()).collect::<Vec<_>>());
    }
    let prog = CoverProgram { num_vars: cands.len(), rows };
    let lp = solve_lp(&prog);
    let split = threshold_split(&prog, &lp, &parts, &rat(1, 2))?;
    let empty = SplitPart::default();
    let (p1, p2) = (split.get(&0).unwrap_or(&empty), split.get(&1).unwrap_or(&empty));
    let z1_lp = solve_lp(&p1.program().0).objective;
    let z2_lp = solve_lp(&p2.program().0).objective;

    let seg_of = |var_idx: usize| &segs[&cands[var_idx]];
    let (same, cross) = rayon::join(|| same_orientation(p1, &cons, &segs, &seg_of), || cross_orientation(p2, &cons, &segs, &seg_of));
    let (same, cross) = (same?, cross?);
    let d = same.union(&cross).copied().collect();
    Ok(PsdReport {
        certificate: SolveCertificate::new(d, lp.objective.clone(), int(18)),
        z_lp: lp.objective,
        z1_lp,
        z2_lp,
        same_solution: same,
        cross_solution: cross,
    })
}

type SegMap = BTreeMap<usize, Seg>;

/// Exact interval domination per supporting line.
fn same_orientation<'a>(
    part: &SplitPart,
    cons: &[usize],
    segs: &SegMap,
    seg_of: &(dyn Fn(usize) -> &'a Seg + Sync),
) -> Result<BTreeSet<usize>> {
    // (orientation, line coordinate) -> (targets, candidates)
    type Line = (Vec<(usize, Rat, Rat)>, BTreeMap<usize, (usize, Rat, Rat)>);
    let mut lines: BTreeMap<(Orientation, Rat), Line> = BTreeMap::new();
    let key = |s: &Seg| match s {
        Seg::H(h) => (Orientation::Horizontal, h.y.clone()),
        Seg::V(v) => (Orientation::Vertical, v.x.clone()),
    };
    let iv = |s: &Seg| {
        let (l, r) = s.projection();
        (s.id(), l.clone(), r.clone())
    };
    for (&row, vars) in part.rows.iter().zip(&part.row_vars) {
        let u = &segs[&cons[row]];
        let e = lines.entry(key(u)).or_default();
        e.0.push(iv(u));
        for &v in vars {
            let c = seg_of(v);
            e.1.insert(c.id(), iv(c));
        }
    }
    let mut out = BTreeSet::new();
    for (targets, cands) in lines.into_values() {
        let set = ProperIntervalSet::new(cands.into_values().collect())?;
        out.extend(spid_targets(&set, &targets)?);
    }
    Ok(out)
}

/// Two strip-decomposition instances, one per constraint orientation.
fn cross_orientation<'a>(
    part: &SplitPart,
    cons: &[usize],
    segs: &SegMap,
    seg_of: &(dyn Fn(usize) -> &'a Seg + Sync),
) -> Result<BTreeSet<usize>> {
    // vertical targets against horizontal candidates, and the transposed case
    let mut direct: (BTreeMap<usize, VSeg>, BTreeMap<usize, HSeg>) = Default::default();
    let mut flipped: (BTreeMap<usize, VSeg>, BTreeMap<usize, HSeg>) = Default::default();
    for (&row, vars) in part.rows.iter().zip(&part.row_vars) {
        let u = &segs[&cons[row]];
        let bucket = if matches!(u, Seg::V(_)) { &mut direct } else { &mut flipped };
        let flip = |s: &Seg| if matches!(u, Seg::V(_)) { s.clone() } else { s.transpose() };
        if let Seg::V(v) = flip(u) {
            bucket.0.insert(v.id, v);
        }
        for &w in vars {
            if let Seg::H(h) = flip(seg_of(w)) {
                bucket.1.insert(h.id, h);
            }
        }
    }
    let mut out = BTreeSet::new();
    for (targets, cands) in [direct, flipped] {
        if targets.is_empty() {
            continue;
        }
        let t: Vec<VSeg> = targets.into_values().collect();
        let s: Vec<HSeg> = cands.into_values().collect();
        out.extend(poss_solve(&s, &t)?.certificate.heuristic_ids);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(id: usize, l: i64, r: i64) -> (usize, Rat, Rat) {
        (id, int(l), int(r))
    }

    #[test]
    fn spid_examples() {
        let one = ProperIntervalSet::new(vec![iv(0, 0, 1)]).unwrap();
        assert_eq!(spid_exact(&one, &BTreeSet::from([0])).unwrap(), BTreeSet::from([0]));
        let three = ProperIntervalSet::new(vec![iv(0, 0, 2), iv(1, 1, 3), iv(2, 2, 4)]).unwrap();
        let sol = spid_exact(&three, &BTreeSet::from([0, 2])).unwrap();
        assert_eq!(sol.len(), 1);
        // exhaustive: the only single interval meeting both ends is the middle one
        let hits_both: Vec<usize> = three
            .intervals
            .iter()
            .filter(|c| [0, 2].iter().all(|&t| meets((&c.1, &c.2), (&three.intervals[t].1, &three.intervals[t].2))))
            .map(|c| c.0)
            .collect();
        assert_eq!(hits_both, vec![0, 1, 2]);
        assert!(ProperIntervalSet::new(vec![iv(0, 0, 3), iv(1, 1, 2)]).is_err());
    }

    #[test]
    fn consecutive_rows() {
        assert!(consecutive_ones(&[vec![1, 2, 3], vec![0]]));
        assert!(!consecutive_ones(&[vec![0, 2]]));
    }

    fn h(id: usize, y: i64, l: i64, r: i64) -> HSeg {
        HSeg::new(id, int(y), int(l), int(r))
    }

    fn v(id: usize, x: i64, lo: i64, hi: i64) -> VSeg {
        VSeg::new(id, int(x), int(lo), int(hi))
    }

    #[test]
    fn strip_examples() {
        let d = build_strips(&[h(0, 0, 0, 2)], &[v(1, 1, -1, 1)]);
        assert_eq!(d.points.len(), 3);
        assert_eq!(d.points[1], int(2));
        assert_eq!(d.strips.iter().filter(|s| !s.is_empty()).count(), 1);
        let d = build_strips(&[h(0, 0, 0, 2), h(1, 0, 5, 7)], &[]);
        assert_eq!(d.points, vec![int(-1), int(2), int(7), int(8)]);
    }

    #[test]
    fn poss_single() {
        let r = poss_solve(&[h(0, 0, 0, 2)], &[v(1, 1, -1, 1)]).unwrap();
        assert_eq!(r.certificate.heuristic_ids, BTreeSet::from([0]));
        assert_eq!(r.w_lp, int(1));
        assert_eq!(poss_solve(&[h(0, 0, 0, 2)], &[v(1, 5, -1, 1)]).unwrap_err(), Error::InfeasibleTarget(1));
    }

    #[test]
    fn poss_left_only() {
        // targets all lie right of the hit point crossing their candidates
        let s = [h(0, 0, 0, 4), h(1, 2, 1, 5)];
        let t = [v(10, 4, -1, 1), v(11, 4, 1, 3)];
        let r = poss_solve(&s, &t).unwrap();
        assert!(r.a2.is_empty());
        assert!(int(r.certificate.heuristic_size as i64) <= int(2) * &r.w1_lp);
    }

    #[test]
    fn psd_examples() {
        let single = OrthoInstance::domination(vec![h(0, 0, 0, 1)], vec![]);
        assert_eq!(psd_solve(&single).unwrap().certificate.heuristic_ids, BTreeSet::from([0]));
        let plus = OrthoInstance::domination(vec![h(0, 0, -1, 1)], vec![v(1, 0, -1, 1)]);
        let r = psd_solve(&plus).unwrap();
        assert!(!r.certificate.heuristic_ids.is_empty());
        assert!(r.certificate.heuristic_size <= 18);
        assert_eq!(crate::oracle::exact_stab(&plus, 16).unwrap().len(), 1);
        let nested = OrthoInstance::domination(vec![h(0, 0, 0, 3), h(1, 0, 1, 2)], vec![]);
        assert_eq!(psd_solve(&nested).unwrap_err(), Error::NotProper(Orientation::Horizontal));
    }
}
