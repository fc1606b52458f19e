//! Stabbing leftward rays with vertical segments: the top/bottom greedy.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{intersects, separate_shared_x, HRay, VSeg};
use crate::lp::CoverProgram;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrsInstance {
    pub rays: Vec<HRay>,
    pub segments: Vec<VSeg>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrsRound {
    pub ray: usize,
    pub neighborhood: BTreeSet<usize>,
    pub v_top: usize,
    pub v_bot: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct SrsTrace {
    pub tokens: BTreeMap<usize, BTreeSet<usize>>,
    pub rounds: Vec<SrsRound>,
}

impl SrsTrace {
    pub fn max_multiplicity(&self) -> usize {
        let mut count: HashMap<usize, usize> = HashMap::new();
        for t in self.tokens.values() {
            for &v in t {
                *count.entry(v).or_default() += 1;
            }
        }
        count.into_values().max().unwrap_or(0)
    }
}

impl SrsInstance {
    pub fn new(rays: Vec<HRay>, segments: Vec<VSeg>) -> Self {
        SrsInstance { rays, segments }
    }

    /// Rows are rays, variables are segment positions in `self.segments`.
    pub fn cover_program(&self) -> Result<CoverProgram> {
        let rows = self.rays.iter().map(|r| (0..self.segments.len()).filter(|&j| intersects(r, &self.segments[j])).collect()).collect();
        CoverProgram::new(self.segments.len(), rows)
    }

    pub fn covers(&self, chosen: &BTreeSet<usize>) -> bool {
        let segs: Vec<&VSeg> = self.segments.iter().filter(|s| chosen.contains(&s.id)).collect();
        self.rays.iter().all(|r| segs.iter().any(|s| intersects(r, *s)))
    }

    fn validate(&self) -> Result<()> {
        let mut ids = BTreeSet::new();
        let mut ys = BTreeSet::new();
        for r in &self.rays {
            if !ids.insert(r.id) || !ys.insert(&r.y) {
                return Err(Error::invalid(format!("ray {} duplicates an id or overlaps another ray", r.id)));
            }
        }
        let mut ids = BTreeSet::new();
        for s in &self.segments {
            if !ids.insert(s.id) || !s.is_well_formed() {
                return Err(Error::invalid(format!("segment {} is duplicated or malformed", s.id)));
            }
        }
        match self.rays.iter().find(|r| !self.segments.iter().any(|s| intersects(*r, s))) {
            Some(r) => Err(Error::InfeasibleRay(r.id)),
            None => Ok(()),
        }
    }
}

/// Validates the instance and separates segments sharing an x-coordinate.
/// Ties among ray endpoints need no shifting: every choice below is broken
/// by id, which plays the role of an infinitesimal perturbation.
pub fn normalize(inst: &SrsInstance) -> Result<SrsInstance> {
    inst.validate()?;
    let mut out = inst.clone();
    separate_shared_x(&out.rays, &mut out.segments);
    Ok(out)
}

/// Repeatedly takes the live ray with the leftmost endpoint, selects the
/// top-most and bottom-most live segments meeting it, drops every ray those
/// two meet and deletes the ray's whole live neighbourhood.
pub fn solve(inst: &SrsInstance, want_trace: bool) -> Result<(BTreeSet<usize>, Option<SrsTrace>)> {
    inst.validate()?;
    let rays = &inst.rays;
    let segs = &inst.segments;
    let mut live_r = vec![true; rays.len()];
    let mut live_v = vec![true; segs.len()];
    let mut order: Vec<usize> = (0..rays.len()).collect();
    order.sort_by(|&a, &b| rays[a].x_right.cmp(&rays[b].x_right).then(rays[a].id.cmp(&rays[b].id)));

    let mut out = BTreeSet::new();
    let mut trace = SrsTrace::default();
    for &r in &order {
        if !live_r[r] {
            continue;
        }
        let nbhd: Vec<usize> = (0..segs.len()).filter(|&v| live_v[v] && intersects(&rays[r], &segs[v])).collect();
        if nbhd.is_empty() {
            return Err(Error::InfeasibleRay(rays[r].id));
        }
        let top = *nbhd.iter().max_by(|&&a, &&b| segs[a].y_hi.cmp(&segs[b].y_hi).then(segs[b].id.cmp(&segs[a].id))).expect("non-empty");
        let bot = *nbhd.iter().min_by(|&&a, &&b| segs[a].y_lo.cmp(&segs[b].y_lo).then(segs[a].id.cmp(&segs[b].id))).expect("non-empty");
        out.insert(segs[top].id);
        out.insert(segs[bot].id);
        for (j, lr) in live_r.iter_mut().enumerate() {
            if *lr && (intersects(&rays[j], &segs[top]) || intersects(&rays[j], &segs[bot])) {
                *lr = false;
            }
        }
        debug_assert!(!live_r[r]);
        let ids: BTreeSet<usize> = nbhd.iter().map(|&v| segs[v].id).collect();
        for &v in &nbhd {
            live_v[v] = false;
        }
        if want_trace {
            trace.tokens.insert(segs[top].id, ids.clone());
            trace.tokens.insert(segs[bot].id, ids.clone());
            trace.rounds.push(SrsRound { ray: rays[r].id, neighborhood: ids, v_top: segs[top].id, v_bot: segs[bot].id });
        }
    }
    if want_trace {
        for s in segs {
            trace.tokens.entry(s.id).or_default();
        }
    }
    Ok((out, want_trace.then_some(trace)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::int;
    use crate::oracle::exact_stab;

    #[test]
    fn single_pair() {
        let inst = SrsInstance::new(vec![HRay::new(0, int(0), int(5))], vec![VSeg::new(4, int(1), int(-1), int(1))]);
        let (s, t) = solve(&inst, true).unwrap();
        assert_eq!(s, BTreeSet::from([4]));
        let t = t.unwrap();
        assert_eq!(t.rounds[0].v_top, t.rounds[0].v_bot);
    }

    #[test]
    fn two_segments_attain_ratio_two() {
        let inst = SrsInstance::new(
            vec![HRay::new(0, int(0), int(5))],
            vec![VSeg::new(0, int(1), int(-1), int(2)), VSeg::new(1, int(2), int(-2), int(1))],
        );
        let (s, _) = solve(&inst, false).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(exact_stab(&inst, 16).unwrap().len(), 1);
    }

    #[test]
    fn disjoint_pairs() {
        let k = 5;
        let inst = SrsInstance::new(
            (0..k).map(|i| HRay::new(i, int(3 * i as i64), int(1))).collect(),
            (0..k).map(|i| VSeg::new(i, int(0), int(3 * i as i64), int(3 * i as i64 + 1))).collect(),
        );
        let norm = normalize(&inst).unwrap();
        assert_eq!(solve(&norm, false).unwrap().0.len(), k);
    }

    #[test]
    fn infeasible_ray() {
        let inst = SrsInstance::new(vec![HRay::new(3, int(0), int(0))], vec![VSeg::new(0, int(1), int(-1), int(1))]);
        assert_eq!(normalize(&inst).unwrap_err(), Error::InfeasibleRay(3));
    }
}
