//! Brute-force exact baselines: minimum dominating set and minimum stabbing
//! subset, both by increasing-cardinality search over bitmasks.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{intersects, OrthoInstance};
use crate::lp::CoverProgram;
use crate::srs::SrsInstance;
use crate::ssr::SsrInstance;

pub const DEFAULT_CAP: usize = 16;
const HARD_CAP: usize = 64;

/// Cap from `GEODOM_SIZE_CAP` if set and valid, else [`DEFAULT_CAP`].
pub fn default_cap() -> usize {
    std::env::var("GEODOM_SIZE_CAP").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_CAP)
}

/// Simple undirected graph stored as closed neighbourhoods.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractGraph {
    pub n: usize,
    pub closed: Vec<BTreeSet<usize>>,
}

impl AbstractGraph {
    pub fn empty(n: usize) -> Self {
        AbstractGraph { n, closed: (0..n).map(|u| BTreeSet::from([u])).collect() }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.closed[u].insert(v);
        self.closed[v].insert(u);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.closed[u].contains(&v)
    }

    pub fn edges(&self) -> BTreeSet<(usize, usize)> {
        (0..self.n).flat_map(|u| self.closed[u].iter().filter(move |&&v| v > u).map(move |&v| (u, v))).collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.closed.iter().map(|c| c.len() - 1).collect()
    }

    pub fn is_dominating(&self, d: &BTreeSet<usize>) -> bool {
        self.closed.iter().all(|c| c.iter().any(|v| d.contains(v)))
    }

    /// One row `N[u]` per vertex.
    pub fn domination_program(&self) -> CoverProgram {
        CoverProgram { num_vars: self.n, rows: self.closed.iter().map(|c| c.iter().copied().collect()).collect() }
    }
}

/// Minimum subset of `num_candidates` covering every row of `cover`, where
/// `cover[i]` is the bitmask of candidates meeting constraint `i`.
fn min_cover(num_candidates: usize, cover: &[u64], cap: usize) -> Result<u64> {
    let cap = cap.min(HARD_CAP);
    if num_candidates > cap {
        return Err(Error::SizeCapExceeded { size: num_candidates, cap });
    }
    if cover.contains(&0) {
        return Err(Error::Infeasible);
    }
    fn dfs(cover: &[u64], chosen: u64, left: usize) -> Option<u64> {
        let Some(&open) = cover.iter().find(|&&c| c & chosen == 0) else { return Some(chosen) };
        if left == 0 {
            return None;
        }
        let mut bits = open;
        while bits != 0 {
            let b = bits & bits.wrapping_neg();
            bits &= bits - 1;
            if let Some(found) = dfs(cover, chosen | b, left - 1) {
                return Some(found);
            }
        }
        None
    }
    (0..=num_candidates).find_map(|k| dfs(cover, 0, k)).ok_or(Error::Infeasible)
}

fn bits_to_set(mask: u64, ids: &[usize]) -> BTreeSet<usize> {
    (0..ids.len()).filter(|&i| mask >> i & 1 == 1).map(|i| ids[i]).collect()
}

/// A minimum dominating set.
pub fn exact_mds(g: &AbstractGraph, cap: usize) -> Result<BTreeSet<usize>> {
    if g.n > cap.min(HARD_CAP) {
        return Err(Error::SizeCapExceeded { size: g.n, cap });
    }
    let cover: Vec<u64> = g.closed.iter().map(|c| c.iter().fold(0u64, |m, &v| m | 1 << v)).collect();
    let best = min_cover(g.n, &cover, cap)?;
    Ok(bits_to_set(best, &(0..g.n).collect::<Vec<_>>()))
}

/// Any of the stabbing problems the oracle can certify.
#[derive(Debug, Clone, Copy)]
pub enum StabProblem<'a> {
    Ssr(&'a SsrInstance),
    Srs(&'a SrsInstance),
    Ortho(&'a OrthoInstance),
}

impl<'a> From<&'a SsrInstance> for StabProblem<'a> {
    fn from(i: &'a SsrInstance) -> Self {
        StabProblem::Ssr(i)
    }
}

impl<'a> From<&'a SrsInstance> for StabProblem<'a> {
    fn from(i: &'a SrsInstance) -> Self {
        StabProblem::Srs(i)
    }
}

impl<'a> From<&'a OrthoInstance> for StabProblem<'a> {
    fn from(i: &'a OrthoInstance) -> Self {
        StabProblem::Ortho(i)
    }
}

/// A minimum set of candidate ids meeting every constraint: rays for SSR,
/// segments for SRS, candidate segments for ortho instances.
pub fn exact_stab<'a>(problem: impl Into<StabProblem<'a>>, cap: usize) -> Result<BTreeSet<usize>> {
    let (ids, cover): (Vec<usize>, Vec<u64>) = match problem.into() {
        StabProblem::Ssr(inst) => {
            let ids = inst.rays.iter().map(|r| r.id).collect();
            let cover = inst.segments.iter().map(|s| mask(inst.rays.iter().map(|r| intersects(r, s)))).collect();
            (ids, cover)
        }
        StabProblem::Srs(inst) => {
            let ids = inst.segments.iter().map(|s| s.id).collect();
            let cover = inst.rays.iter().map(|r| mask(inst.segments.iter().map(|s| intersects(r, s)))).collect();
            (ids, cover)
        }
        StabProblem::Ortho(inst) => {
            let segs = inst.by_id();
            let ids: Vec<usize> = inst.candidate_ids.iter().copied().collect();
            let cover = inst.constraint_ids.iter().map(|c| mask(ids.iter().map(|k| segs[k].intersects(&segs[c])))).collect();
            (ids, cover)
        }
    };
    if ids.len() > cap.min(HARD_CAP) {
        return Err(Error::SizeCapExceeded { size: ids.len(), cap });
    }
    Ok(bits_to_set(min_cover(ids.len(), &cover, cap)?, &ids))
}

fn mask(hits: impl Iterator<Item = bool>) -> u64 {
    hits.enumerate().fold(0, |m, (i, h)| if h { m | 1 << i } else { m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{int, HRay, VSeg};
    use crate::lp::solve_ilp_exact;

    #[test]
    fn small_graphs() {
        let tri = AbstractGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        assert_eq!(exact_mds(&tri, 16).unwrap().len(), 1);
        let p4 = AbstractGraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]);
        assert_eq!(exact_mds(&p4, 16).unwrap().len(), 2);
        assert_eq!(exact_mds(&AbstractGraph::empty(5), 16).unwrap().len(), 5);
        assert!(matches!(exact_mds(&AbstractGraph::empty(17), 16), Err(Error::SizeCapExceeded { .. })));
    }

    #[test]
    fn path_of_four_by_enumeration() {
        let p4 = AbstractGraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]);
        let best =
            (0u32..16).filter(|m| p4.is_dominating(&(0..4).filter(|v| m >> v & 1 == 1).collect())).map(|m| m.count_ones()).min().unwrap();
        assert_eq!(best, 2);
    }

    #[test]
    fn stab_examples() {
        let all =
            SsrInstance::new(vec![HRay::new(0, int(1), int(9))], (0..3).map(|i| VSeg::new(i, int(i as i64), int(0), int(2))).collect());
        assert_eq!(exact_stab(&all, 16).unwrap(), BTreeSet::from([0]));
        let pairs = SsrInstance::new(
            (0..3).map(|i| HRay::new(i, int(3 * i as i64), int(5))).collect(),
            (0..3).map(|i| VSeg::new(i, int(1), int(3 * i as i64), int(3 * i as i64 + 1))).collect(),
        );
        assert_eq!(exact_stab(&pairs, 16).unwrap().len(), 3);
        let none = SsrInstance::new(vec![HRay::new(0, int(1), int(0))], vec![VSeg::new(0, int(1), int(0), int(2))]);
        assert_eq!(exact_stab(&none, 16).unwrap_err(), Error::Infeasible);
    }

    proptest::proptest! {
        #[test]
        fn mds_agrees_with_ilp_and_is_monotone(
            n in 1usize..10,
            raw in proptest::collection::vec((0usize..10, 0usize..10), 0..20),
            extra in (0usize..10, 0usize..10),
        ) {
            let edges: Vec<(usize, usize)> = raw.into_iter().map(|(a, b)| (a % n, b % n)).filter(|(a, b)| a != b).collect();
            let g = AbstractGraph::from_edges(n, edges);
            let d = exact_mds(&g, 16).unwrap();
            proptest::prop_assert!(g.is_dominating(&d));
            let ilp = solve_ilp_exact(&g.domination_program(), 24).unwrap();
            proptest::prop_assert_eq!(int(d.len() as i64), ilp.objective);
            let mut g2 = g.clone();
            if extra.0 % n != extra.1 % n {
                g2.add_edge(extra.0 % n, extra.1 % n);
            }
            proptest::prop_assert!(exact_mds(&g2, 16).unwrap().len() <= d.len());
        }
    }
}
