//! Domination for intersection graphs of unit k-bend paths.
//!
//! Every neighbour v of u is labelled by the first pair of legs (i-th of u,
//! j-th of v) that meet. The LP mass of each closed neighbourhood is split by
//! label; each label pair becomes an orthogonal segment domination instance.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{int, point_serde, properize, rat, HSeg, OrthoInstance, Rat, Seg, VSeg};
use crate::lp::{scaled_solution, solve_lp, threshold_split, CoverProgram, SolveCertificate, SplitPart};
use crate::oracle::AbstractGraph;
use crate::psd;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dir {
    Left,
    Right,
    Up,
    Down,
}

impl Dir {
    pub fn is_horizontal(self) -> bool {
        matches!(self, Dir::Left | Dir::Right)
    }

    pub fn reverse(self) -> Dir {
        match self {
            Dir::Left => Dir::Right,
            Dir::Right => Dir::Left,
            Dir::Up => Dir::Down,
            Dir::Down => Dir::Up,
        }
    }

    fn step(self, (x, y): &(Rat, Rat)) -> (Rat, Rat) {
        let one = int(1);
        match self {
            Dir::Left => (x - &one, y.clone()),
            Dir::Right => (x + &one, y.clone()),
            Dir::Up => (x.clone(), y + &one),
            Dir::Down => (x.clone(), y - &one),
        }
    }
}

/// Path of unit legs walked from `start`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitKBendPath {
    pub id: usize,
    #[serde(with = "point_serde")]
    pub start: (Rat, Rat),
    pub legs: Vec<Dir>,
}

impl UnitKBendPath {
    pub fn new(id: usize, start: (Rat, Rat), legs: Vec<Dir>) -> Self {
        UnitKBendPath { id, start, legs }
    }

    pub fn bends(&self) -> usize {
        self.legs.len().saturating_sub(1)
    }

    pub fn points(&self) -> Vec<(Rat, Rat)> {
        let mut pts = vec![self.start.clone()];
        for d in &self.legs {
            let next = d.step(pts.last().expect("non-empty"));
            pts.push(next);
        }
        pts
    }

    pub fn end(&self) -> (Rat, Rat) {
        self.points().pop().expect("non-empty")
    }

    /// The legs as segments, each carrying the path id.
    pub fn segments(&self) -> Vec<Seg> {
        let pts = self.points();
        pts.windows(2)
            .map(|w| {
                let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
                if y0 == y1 {
                    Seg::H(HSeg::new(self.id, y0.clone(), x0.min(x1).clone(), x0.max(x1).clone()))
                } else {
                    Seg::V(VSeg::new(self.id, x0.clone(), y0.min(y1).clone(), y0.max(y1).clone()))
                }
            })
            .collect()
    }

    /// Checks leg count and alternation.
    pub fn validate(&self, k: usize) -> Result<()> {
        let alternates = self.legs.windows(2).all(|w| w[0].is_horizontal() != w[1].is_horizontal());
        if self.legs.is_empty() || self.legs.len() > k + 1 || !alternates {
            return Err(Error::InvalidPath(self.id));
        }
        Ok(())
    }

    /// Same path, walked from whichever endpoint is smaller by `(x, y)`.
    pub fn canonical(&self) -> UnitKBendPath {
        let end = self.end();
        if end >= self.start {
            return self.clone();
        }
        UnitKBendPath { id: self.id, start: end, legs: self.legs.iter().rev().map(|d| d.reverse()).collect() }
    }

    pub fn intersects(&self, other: &UnitKBendPath) -> bool {
        let theirs = other.segments();
        self.segments().iter().any(|a| theirs.iter().any(|b| a.intersects(b)))
    }
}

/// Paths with at most `k` bends each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitBkInstance {
    pub k: usize,
    pub paths: Vec<UnitKBendPath>,
}

impl UnitBkInstance {
    pub fn dominates(&self, ids: &BTreeSet<usize>) -> Result<bool> {
        let g = build_graph(&self.paths)?;
        let pos = (0..g.ids.len()).filter(|&i| ids.contains(&g.ids[i])).collect();
        Ok(g.graph.is_dominating(&pos))
    }
}

/// Leg-pair label, 1-based.
pub type Label = (usize, usize);

/// Intersection graph over path positions with the labelling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UvpgGraph {
    pub ids: Vec<usize>,
    pub paths: Vec<UnitKBendPath>,
    pub graph: AbstractGraph,
    /// Label of each ordered pair `(u, v)` with v in N[u].
    pub phi: BTreeMap<(usize, usize), Label>,
    /// `classes[u][(i, j)]` is the set of v in N[u] labelled `(i, j)`.
    pub classes: Vec<BTreeMap<Label, BTreeSet<usize>>>,
}

impl UvpgGraph {
    /// True iff the label classes of every vertex partition its closed
    /// neighbourhood.
    pub fn classes_partition(&self) -> bool {
        self.classes.iter().enumerate().all(|(u, cl)| {
            let total: usize = cl.values().map(|s| s.len()).sum();
            let union: BTreeSet<usize> = cl.values().flatten().copied().collect();
            total == union.len() && union == self.graph.closed[u]
        })
    }
}

/// Lexicographically least leg pair that meets, if any.
fn first_contact(a: &[Seg], b: &[Seg]) -> Option<Label> {
    a.iter()
        .enumerate()
        .flat_map(|(i, sa)| b.iter().enumerate().map(move |(j, sb)| (i, j, sa, sb)))
        .find(|(_, _, sa, sb)| sa.intersects(sb))
        .map(|(i, j, _, _)| (i + 1, j + 1))
}

/// Builds the graph after canonicalizing leg order; paths are validated
/// for alternation only.
pub fn build_graph(paths: &[UnitKBendPath]) -> Result<UvpgGraph> {
    let mut seen = BTreeSet::new();
    for p in paths {
        p.validate(usize::MAX - 1)?;
        if !seen.insert(p.id) {
            return Err(Error::invalid(format!("duplicate path id {}", p.id)));
        }
    }
    let paths: Vec<UnitKBendPath> = paths.iter().map(|p| p.canonical()).collect();
    let segs: Vec<Vec<Seg>> = paths.iter().map(|p| p.segments()).collect();
    let n = paths.len();
    let mut graph = AbstractGraph::empty(n);
    let mut phi = BTreeMap::new();
    let mut classes: Vec<BTreeMap<Label, BTreeSet<usize>>> = vec![BTreeMap::new(); n];
    for u in 0..n {
        phi.insert((u, u), (1, 1));
        classes[u].entry((1, 1)).or_default().insert(u);
        for v in 0..n {
            if u == v {
                continue;
            }
            if let Some(lab) = first_contact(&segs[u], &segs[v]) {
                graph.add_edge(u, v);
                phi.insert((u, v), lab);
                classes[u].entry(lab).or_default().insert(v);
            }
        }
    }
    Ok(UvpgGraph { ids: paths.iter().map(|p| p.id).collect(), paths, graph, phi, classes })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UvpgReport {
    pub certificate: SolveCertificate,
    pub k: usize,
    pub q_lp: Rat,
    /// LP optimum of each label pair's sub-program.
    pub pair_lps: BTreeMap<Label, Rat>,
    pub pair_solutions: BTreeMap<Label, BTreeSet<usize>>,
    /// Whether `min(1, 2x)` and `min(1, (k+1)^2 x)` are feasible for every
    /// sub-program.
    pub doubled_feasible: bool,
    pub scaled_feasible: bool,
}

/// Approximate minimum dominating set within `18 (k+1)^4` of the LP optimum.
pub fn solve_mds(paths: &[UnitKBendPath], k: usize) -> Result<UvpgReport> {
    for p in paths {
        p.validate(k)?;
    }
    let g = build_graph(paths)?;
    let n = g.paths.len();
    let rows: Vec<Vec<usize>> = g.graph.closed.iter().map(|c| c.iter().copied().collect()).collect();
    let prog = CoverProgram { num_vars: n, rows };
    let lp = solve_lp(&prog);
    let parts: Vec<Vec<(Label, Vec<usize>)>> =
        g.classes.iter().map(|cl| cl.iter().map(|(&lab, vs)| (lab, vs.iter().copied().collect())).collect()).collect();
    let kk = ((k + 1) * (k + 1)) as i64;
    let split = threshold_split(&prog, &lp, &parts, &rat(1, kk))?;

    let feasible_under = |factor: &Rat| {
        let y = scaled_solution(&lp.values, factor);
        split.values().all(|part| {
            let (p, map) = part.program();
            p.is_feasible(&map.iter().map(|&v| y[v].clone()).collect::<Vec<_>>())
        })
    };
    let doubled_feasible = feasible_under(&int(2));
    let scaled_feasible = feasible_under(&int(kk));

    let segs: Vec<Vec<Seg>> = g.paths.iter().map(|p| p.segments()).collect();
    let solved: Vec<(Label, Rat, BTreeSet<usize>)> = split
        .par_iter()
        .map(|(&lab, part)| -> Result<_> {
            let pair_lp = solve_lp(&part.program().0).objective;
            let chosen = solve_pair(lab, part, &segs)?;
            Ok((lab, pair_lp, chosen.into_iter().map(|v| g.ids[v]).collect()))
        })
        .collect::<Result<_>>()?;
    let mut pair_lps = BTreeMap::new();
    let mut pair_solutions = BTreeMap::new();
    let mut d = BTreeSet::new();
    for (lab, l, s) in solved {
        d.extend(s.iter().copied());
        pair_lps.insert(lab, l);
        pair_solutions.insert(lab, s);
    }
    let bound = int(18 * kk * kk);
    Ok(UvpgReport {
        certificate: SolveCertificate::new(d, lp.objective.clone(), bound),
        k,
        q_lp: lp.objective,
        pair_lps,
        pair_solutions,
        doubled_feasible,
        scaled_feasible,
    })
}

/// Constraint copies of the i-th legs of the kept rows against candidate
/// copies of the j-th legs of the part's variables. Returns positions.
fn solve_pair((i, j): Label, part: &SplitPart, segs: &[Vec<Seg>]) -> Result<BTreeSet<usize>> {
    let mut hsegs = Vec::new();
    let mut vsegs = Vec::new();
    let mut constraint_ids = BTreeSet::new();
    let mut candidate_ids = BTreeSet::new();
    let mut push = |s: Seg| match s {
        Seg::H(h) => hsegs.push(h),
        Seg::V(v) => vsegs.push(v),
    };
    for &u in &part.rows {
        let id = 2 * u;
        push(segs[u][i - 1].with_id(id));
        constraint_ids.insert(id);
    }
    for &v in &part.vars {
        let id = 2 * v + 1;
        push(segs[v][j - 1].with_id(id));
        candidate_ids.insert(id);
    }
    let inst = OrthoInstance { hsegs, vsegs, constraint_ids, candidate_ids };
    let report = psd::psd_solve(&properize(&inst)?)?;
    Ok(report.certificate.heuristic_ids.iter().map(|id| id / 2).collect())
}

/// Unit L-paths whose intersection graph is the `h` by `w` grid; path
/// `(x, y)` has id `(y-1) w + (x-1)`.
pub fn grid_to_unit_b1(h: usize, w: usize) -> Vec<UnitKBendPath> {
    let eps = rat(1, (h * w) as i64);
    let mut out = Vec::with_capacity(h * w);
    for y in 1..=h {
        for x in 1..=w {
            let top = (int(x as i64), int(y as i64) - &eps * int(x as i64 - 1));
            out.push(UnitKBendPath::new((y - 1) * w + (x - 1), top, vec![Dir::Down, Dir::Right]));
        }
    }
    out
}

/// Edges of the `h` by `w` grid with the ids used by [`grid_to_unit_b1`].
pub fn grid_edges(h: usize, w: usize) -> BTreeSet<(usize, usize)> {
    let id = |x: usize, y: usize| y * w + x;
    let mut e = BTreeSet::new();
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                e.insert((id(x, y), id(x + 1, y)));
            }
            if y + 1 < h {
                e.insert((id(x, y), id(x, y + 1)));
            }
        }
    }
    e
}
