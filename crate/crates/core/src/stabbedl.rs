//! Minimum dominating set for L-paths that all cross one vertical line.
//!
//! The LP relaxation of the domination program is split at one half between
//! each vertex's horizontal-leg neighbours and the rest. The first part is a
//! ray-stabbing-by-segments instance and the second a segment-stabbing-by-rays
//! instance; both are solved greedily and the answers are combined.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Assumption, Error, Result};
use crate::geom::{int, point_serde, rat, rat_serde, HRay, HSeg, Rat, Seg, VSeg};
use crate::lp::{solve_lp, threshold_split, CoverProgram, CoverSolution, SolveCertificate};
use crate::oracle::AbstractGraph;
use crate::{srs, ssr};

/// An 'L': a vertical leg rising from the corner and a horizontal leg
/// running right from it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LPath {
    pub id: usize,
    #[serde(with = "point_serde")]
    pub corner: (Rat, Rat),
    #[serde(with = "rat_serde")]
    pub vlen: Rat,
    #[serde(with = "rat_serde")]
    pub hlen: Rat,
}

impl LPath {
    pub fn new(id: usize, cx: Rat, cy: Rat, vlen: Rat, hlen: Rat) -> Self {
        LPath { id, corner: (cx, cy), vlen, hlen }
    }

    pub fn vertical_leg(&self) -> VSeg {
        let (x, y) = &self.corner;
        VSeg::new(self.id, x.clone(), y.clone(), y + &self.vlen)
    }

    pub fn horizontal_leg(&self) -> HSeg {
        let (x, y) = &self.corner;
        HSeg::new(self.id, y.clone(), x.clone(), x + &self.hlen)
    }

    pub fn legs(&self) -> [Seg; 2] {
        [Seg::V(self.vertical_leg()), Seg::H(self.horizontal_leg())]
    }

    pub fn intersects(&self, other: &LPath) -> bool {
        self.legs().iter().any(|a| other.legs().iter().any(|b| a.intersects(b)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabbedLInstance {
    pub paths: Vec<LPath>,
    #[serde(with = "rat_serde")]
    pub line_x: Rat,
}

/// Per vertex position: `h[u]` holds the paths meeting u's horizontal leg
/// (u included) and `v[u]` the remaining open neighbours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodPartition {
    pub h: Vec<BTreeSet<usize>>,
    pub v: Vec<BTreeSet<usize>>,
}

/// Intersection graph over path positions plus the partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabbedGraph {
    pub ids: Vec<usize>,
    pub graph: AbstractGraph,
    pub partition: NeighborhoodPartition,
}

/// Intersection of two axis-parallel segments: empty, a point or a segment.
fn overlap(a: &Seg, b: &Seg) -> Option<((Rat, Rat), (Rat, Rat))> {
    let bounds = |s: &Seg| match s {
        Seg::H(h) => (h.x_lo.clone(), h.x_hi.clone(), h.y.clone(), h.y.clone()),
        Seg::V(v) => (v.x.clone(), v.x.clone(), v.y_lo.clone(), v.y_hi.clone()),
    };
    let (ax0, ax1, ay0, ay1) = bounds(a);
    let (bx0, bx1, by0, by1) = bounds(b);
    let (x0, x1) = (ax0.max(bx0), ax1.min(bx1));
    let (y0, y1) = (ay0.max(by0), ay1.min(by1));
    (x0 <= x1 && y0 <= y1).then_some(((x0, y0), (x1, y1)))
}

/// True iff the two paths share more than one point.
fn multi_contact(a: &LPath, b: &LPath) -> bool {
    let mut points: Vec<(Rat, Rat)> = Vec::new();
    for la in a.legs() {
        for lb in b.legs() {
            if let Some((p, q)) = overlap(&la, &lb) {
                if p != q {
                    return true;
                }
                points.push(p);
            }
        }
    }
    points.sort();
    points.dedup();
    points.len() > 1
}

impl StabbedLInstance {
    pub fn new(paths: Vec<LPath>, line_x: Rat) -> Self {
        StabbedLInstance { paths, line_x }
    }

    /// Builds the pairwise intersection graph and the H/V partition.
    pub fn build_graph(&self) -> StabbedGraph {
        let n = self.paths.len();
        let mut graph = AbstractGraph::empty(n);
        for a in 0..n {
            for b in a + 1..n {
                if self.paths[a].intersects(&self.paths[b]) {
                    graph.add_edge(a, b);
                }
            }
        }
        let mut h = Vec::with_capacity(n);
        let mut v = Vec::with_capacity(n);
        for u in 0..n {
            let leg = Seg::H(self.paths[u].horizontal_leg());
            let hu: BTreeSet<usize> =
                graph.closed[u].iter().copied().filter(|&c| self.paths[c].legs().iter().any(|l| l.intersects(&leg))).collect();
            let vu = graph.closed[u].iter().copied().filter(|&c| c != u && !hu.contains(&c)).collect();
            h.push(hu);
            v.push(vu);
        }
        StabbedGraph { ids: self.paths.iter().map(|p| p.id).collect(), graph, partition: NeighborhoodPartition { h, v } }
    }

    pub fn dominates(&self, ids: &BTreeSet<usize>) -> bool {
        let g = self.build_graph();
        let pos: BTreeSet<usize> = (0..g.ids.len()).filter(|&i| ids.contains(&g.ids[i])).collect();
        g.graph.is_dominating(&pos)
    }
}

/// Translates so the stabbing line is `x = 0` and checks that the line
/// crosses every path, every corner is strictly left of it and any two
/// intersecting paths share exactly one point.
pub fn normalize(inst: &StabbedLInstance) -> Result<StabbedLInstance> {
    let mut ids = BTreeSet::new();
    for p in &inst.paths {
        if !ids.insert(p.id) {
            return Err(Error::invalid(format!("duplicate path id {}", p.id)));
        }
        if p.vlen <= Rat::zero() || p.hlen <= Rat::zero() {
            return Err(Error::invalid(format!("path {} needs positive leg lengths", p.id)));
        }
    }
    let mut out = inst.clone();
    for p in &mut out.paths {
        p.corner.0 -= &inst.line_x;
    }
    out.line_x = Rat::zero();
    let zero = Rat::zero();
    let crossing: Vec<usize> = out.paths.iter().filter(|p| &p.corner.0 + &p.hlen < zero).map(|p| p.id).collect();
    if !crossing.is_empty() {
        return Err(Error::AssumptionViolation { which: Assumption::LineCrossesAll, ids: crossing });
    }
    let corner: Vec<usize> = out.paths.iter().filter(|p| p.corner.0 >= zero).map(|p| p.id).collect();
    if !corner.is_empty() {
        return Err(Error::AssumptionViolation { which: Assumption::CornerLeftOfLine, ids: corner });
    }
    for (i, a) in out.paths.iter().enumerate() {
        for b in &out.paths[i + 1..] {
            if multi_contact(a, b) {
                return Err(Error::AssumptionViolation { which: Assumption::SinglePointContact, ids: vec![a.id, b.id] });
            }
        }
    }
    Ok(out)
}

/// A rightward ray from `x_start` at height `y`, stored mirrored through
/// `x = 0` as a leftward ray.
pub fn mirror_rightward(id: usize, y: &Rat, x_start: &Rat) -> HRay {
    HRay::new(id, y.clone(), -x_start.clone())
}

pub fn mirror_vseg(v: &VSeg) -> VSeg {
    VSeg::new(v.id, -v.x.clone(), v.y_lo.clone(), v.y_hi.clone())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabbedLReport {
    pub certificate: SolveCertificate,
    pub lp: CoverSolution,
    /// Path ids in the horizontal and vertical selections.
    pub a1: BTreeSet<usize>,
    pub a2: BTreeSet<usize>,
    /// LP optima of the two sub-programs.
    pub q1_lp: Rat,
    pub q2_lp: Rat,
    pub srs_solution: BTreeSet<usize>,
    pub ssr_solution: BTreeSet<usize>,
}

/// Approximate minimum dominating set with ratio at most 8.
pub fn solve_mds(inst: &StabbedLInstance) -> Result<StabbedLReport> {
    let inst = normalize(inst)?;
    let g = inst.build_graph();
    let n = inst.paths.len();
    let part = &g.partition;
    let rows: Vec<Vec<usize>> = g.graph.closed.iter().map(|c| c.iter().copied().collect()).collect();
    let prog = CoverProgram { num_vars: n, rows };
    let lp = solve_lp(&prog);
    let parts: Vec<Vec<(u8, Vec<usize>)>> = (0..n)
        .map(|u| {
            let mut p = vec![(0, part.h[u].iter().copied().collect())];
            if !part.v[u].is_empty() {
                p.push((1, part.v[u].iter().copied().collect()));
            }
            p
        })
        .collect();
    let split = threshold_split(&prog, &lp, &parts, &rat(1, 2))?;
    let empty = Default::default();
    let p1 = split.get(&0).unwrap_or(&empty);
    let p2 = split.get(&1).unwrap_or(&empty);
    let q1_lp = solve_lp(&p1.program().0).objective;
    let q2_lp = solve_lp(&p2.program().0).objective;

    let paths = &inst.paths;
    // horizontal part: rays are A1's horizontal legs, candidates H's vertical legs
    let srs_inst = srs::SrsInstance::new(
        p1.rows.iter().map(|&u| mirror_rightward(u, &paths[u].corner.1, &paths[u].corner.0)).collect(),
        p1.vars.iter().map(|&v| mirror_vseg(&paths[v].vertical_leg()).with_id(v)).collect(),
    );
    // vertical part: rays are V's horizontal legs, targets A2's vertical legs
    let ssr_inst = ssr::SsrInstance::new(
        p2.vars.iter().map(|&v| mirror_rightward(v, &paths[v].corner.1, &paths[v].corner.0)).collect(),
        p2.rows.iter().map(|&u| mirror_vseg(&paths[u].vertical_leg()).with_id(u)).collect(),
    );
    let (srs_sol, ssr_sol) = rayon::join(
        || -> Result<BTreeSet<usize>> { Ok(srs::solve(&srs::normalize(&srs_inst)?, false)?.0) },
        || -> Result<BTreeSet<usize>> { ssr::solve_fast(&ssr::normalize(&ssr_inst)?) },
    );
    let (srs_sol, ssr_sol) = (srs_sol?, ssr_sol?);
    let to_ids = |s: &BTreeSet<usize>| -> BTreeSet<usize> { s.iter().map(|&i| g.ids[i]).collect() };
    let d: BTreeSet<usize> = srs_sol.union(&ssr_sol).map(|&i| g.ids[i]).collect();
    let certificate = SolveCertificate::new(d, lp.objective.clone(), int(8));
    Ok(StabbedLReport {
        certificate,
        a1: p1.rows.iter().map(|&u| g.ids[u]).collect(),
        a2: p2.rows.iter().map(|&u| g.ids[u]).collect(),
        lp,
        q1_lp,
        q2_lp,
        srs_solution: to_ids(&srs_sol),
        ssr_solution: to_ids(&ssr_sol),
    })
}

trait WithId {
    fn with_id(self, id: usize) -> Self;
}

impl WithId for VSeg {
    fn with_id(mut self, id: usize) -> Self {
        self.id = id;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::intersects;
    use crate::oracle::exact_mds;

    fn l(id: usize, cx: i64, cy: i64, vlen: i64, hlen: i64) -> LPath {
        LPath::new(id, int(cx), int(cy), int(vlen), int(hlen))
    }

    #[test]
    fn single_vertex() {
        let inst = StabbedLInstance::new(vec![l(0, -2, 0, 1, 3)], int(0));
        let r = solve_mds(&inst).unwrap();
        assert_eq!(r.certificate.heuristic_ids, BTreeSet::from([0]));
        assert_eq!(r.certificate.lp_opt, int(1));
    }

    #[test]
    fn star_is_dominated() {
        // centre 0 with a long horizontal leg crossed by the leaves' vertical legs
        let mut paths = vec![l(0, -10, 0, 1, 20)];
        for i in 1..6 {
            paths.push(l(i, -11 + 2 * i as i64, -1 - i as i64, 2 + i as i64, 12 - 2 * i as i64));
        }
        let inst = StabbedLInstance::new(paths, int(1));
        let norm = normalize(&inst).unwrap();
        let g = norm.build_graph();
        assert_eq!(exact_mds(&g.graph, 16).unwrap().len(), 1);
        let r = solve_mds(&inst).unwrap();
        assert!(inst.dominates(&r.certificate.heuristic_ids));
        assert!(r.certificate.heuristic_size <= 8);
        r.certificate.check().unwrap();
    }

    #[test]
    fn crossing_and_disjoint() {
        // vertical leg of 0 crosses horizontal leg of 1
        let inst = StabbedLInstance::new(vec![l(0, -2, 0, 4, 3), l(1, -3, 2, 1, 4)], int(0));
        let g = inst.build_graph();
        assert!(g.graph.has_edge(0, 1));
        assert!(g.partition.h[1].contains(&0));
        assert!(g.partition.v[0].contains(&1));
        let apart = StabbedLInstance::new(vec![l(0, -2, 0, 1, 3), l(1, -3, 5, 1, 4)], int(0));
        let g = apart.build_graph();
        assert!(!g.graph.has_edge(0, 1));
        assert_eq!(g.partition.h[0], BTreeSet::from([0]));
    }

    #[test]
    fn normalize_examples() {
        let inst = StabbedLInstance::new(vec![l(0, 3, 0, 1, 5)], int(5));
        let norm = normalize(&inst).unwrap();
        assert_eq!(norm.line_x, int(0));
        assert_eq!(norm.paths[0].corner.0, int(-2));
        let on_line = StabbedLInstance::new(vec![l(0, 0, 0, 1, 5)], int(0));
        assert!(matches!(normalize(&on_line), Err(Error::AssumptionViolation { which: Assumption::CornerLeftOfLine, .. })));
        let short = StabbedLInstance::new(vec![l(0, -5, 0, 1, 2)], int(0));
        assert!(matches!(normalize(&short), Err(Error::AssumptionViolation { which: Assumption::LineCrossesAll, .. })));
        let collinear = StabbedLInstance::new(vec![l(0, -3, 0, 1, 5), l(1, -2, 0, 2, 5)], int(0));
        assert_eq!(
            normalize(&collinear).unwrap_err(),
            Error::AssumptionViolation { which: Assumption::SinglePointContact, ids: vec![0, 1] }
        );
    }

    #[test]
    fn mirroring_is_an_involution() {
        let ray = HRay::new(0, int(1), int(-3));
        let seg = VSeg::new(0, int(-4), int(0), int(2));
        // rightward ray from -3 at height 1 misses x = -4 but reaches x = 2
        let m = mirror_rightward(0, &ray.y, &ray.x_right);
        assert!(!intersects(&m, &mirror_vseg(&seg)));
        let far = VSeg::new(1, int(2), int(0), int(2));
        assert!(intersects(&m, &mirror_vseg(&far)));
        assert_eq!(mirror_vseg(&mirror_vseg(&seg)), seg);
        let back = mirror_rightward(0, &m.y, &m.x_right);
        assert_eq!(back, ray);
    }
}
