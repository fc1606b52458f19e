//! Exact covering programs: `minimize sum x` subject to every row holding at
//! least one unit of mass, with an exact simplex for the relaxation, a
//! branch-and-bound oracle for the integral optimum and threshold splitting.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{int, rat_serde, Rat};

/// `minimize sum_v x_v` subject to `sum_{v in row} x_v >= 1` for every row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverProgram {
    pub num_vars: usize,
    pub rows: Vec<Vec<usize>>,
}

impl CoverProgram {
    /// Builds a program, sorting and deduplicating each row.
    pub fn new(num_vars: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let mut clean = Vec::with_capacity(rows.len());
        for (i, mut row) in rows.into_iter().enumerate() {
            row.sort_unstable();
            row.dedup();
            if row.is_empty() {
                return Err(Error::invalid(format!("row {i} is empty")));
            }
            if row.last().is_some_and(|&v| v >= num_vars) {
                return Err(Error::invalid(format!("row {i} names a variable outside 0..{num_vars}")));
            }
            clean.push(row);
        }
        Ok(CoverProgram { num_vars, rows: clean })
    }

    pub fn is_feasible(&self, x: &[Rat]) -> bool {
        x.len() == self.num_vars
            && x.iter().all(|v| !v.is_negative() && v <= &Rat::one())
            && self.rows.iter().all(|row| row.iter().map(|&v| &x[v]).sum::<Rat>() >= Rat::one())
    }

    pub fn is_cover(&self, chosen: &BTreeSet<usize>) -> bool {
        self.rows.iter().all(|row| row.iter().any(|v| chosen.contains(v)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSolution {
    #[serde(with = "rat_vec")]
    pub values: Vec<Rat>,
    #[serde(with = "rat_serde")]
    pub objective: Rat,
    pub integral: bool,
}

mod rat_vec {
    use crate::geom::{format_rat, parse_rat, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rat))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        Vec::<String>::deserialize(d)?.iter().map(|s| parse_rat(s).map_err(serde::de::Error::custom)).collect()
    }
}

impl CoverSolution {
    fn from_values(values: Vec<Rat>) -> Self {
        let objective = values.iter().sum();
        let integral = values.iter().all(|v| v.is_zero() || v.is_one());
        CoverSolution { values, objective, integral }
    }

    /// Variables at value one.
    pub fn support(&self) -> BTreeSet<usize> {
        self.values.iter().enumerate().filter(|(_, v)| v.is_one()).map(|(i, _)| i).collect()
    }
}

/// Heuristic answer together with the numbers that bound its quality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveCertificate {
    pub heuristic_ids: BTreeSet<usize>,
    pub heuristic_size: usize,
    #[serde(with = "rat_serde")]
    pub lp_opt: Rat,
    pub exact_opt: Option<usize>,
    #[serde(with = "rat_serde")]
    pub claimed_ratio_bound: Rat,
}

impl SolveCertificate {
    pub fn new(ids: BTreeSet<usize>, lp_opt: Rat, bound: Rat) -> Self {
        SolveCertificate { heuristic_size: ids.len(), heuristic_ids: ids, lp_opt, exact_opt: None, claimed_ratio_bound: bound }
    }

    /// Checks the ordering `lp <= exact <= heuristic <= bound * lp`.
    pub fn check(&self) -> std::result::Result<(), String> {
        let h = int(self.heuristic_size as i64);
        if self.heuristic_size != self.heuristic_ids.len() {
            return Err("heuristic_size disagrees with heuristic_ids".into());
        }
        if h < self.lp_opt {
            return Err(format!("heuristic {} below lp optimum {}", h, self.lp_opt));
        }
        if h > &self.claimed_ratio_bound * &self.lp_opt {
            return Err(format!("heuristic {} exceeds {} * {}", h, self.claimed_ratio_bound, self.lp_opt));
        }
        if let Some(e) = self.exact_opt {
            let e = int(e as i64);
            if e < self.lp_opt || e > h {
                return Err(format!("exact optimum {} out of [{}, {}]", e, self.lp_opt, h));
            }
        }
        Ok(())
    }
}

/// Optimal fractional solution, exact.
///
/// Runs a primal simplex with Bland's rule on the packing dual
/// `max sum y  s.t.  sum_{rows i containing v} y_i <= 1`, which starts
/// feasible at the origin. The covering solution is read off the reduced
/// costs of the slack columns. Upper bounds `x <= 1` never bind at an optimum
/// of a covering program, and the result is checked against them.
pub fn solve_lp(p: &CoverProgram) -> CoverSolution {
    let m = p.rows.len();
    let n = p.num_vars;
    if m == 0 {
        return CoverSolution::from_values(vec![Rat::zero(); n]);
    }
    let cols = m + n;
    // tableau row j: constraint for primal variable j; last entry is rhs
    let mut t: Vec<Vec<Rat>> = vec![vec![Rat::zero(); cols + 1]; n];
    for (i, row) in p.rows.iter().enumerate() {
        for &v in row {
            t[v][i] = Rat::one();
        }
    }
    for (j, tr) in t.iter_mut().enumerate() {
        tr[m + j] = Rat::one();
        tr[cols] = Rat::one();
    }
    let mut basis: Vec<usize> = (m..cols).collect();
    // reduced costs d_k = c_k - c_B B^-1 a_k for maximisation
    let mut d: Vec<Rat> = (0..cols).map(|k| if k < m { Rat::one() } else { Rat::zero() }).collect();

    while let Some(enter) = (0..cols).find(|&k| d[k].is_positive()) {
        let mut leave: Option<(usize, Rat)> = None;
        for (r, tr) in t.iter().enumerate() {
            if tr[enter].is_positive() {
                let ratio = &tr[cols] / &tr[enter];
                let better = match &leave {
                    None => true,
                    Some((lr, lratio)) => ratio < *lratio || (ratio == *lratio && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        // the packing polytope is bounded, so some row always limits the step
        let (pr, _) = leave.expect("bounded packing dual");
        let piv = t[pr][enter].clone();
        if !piv.is_one() {
            for v in t[pr].iter_mut() {
                *v /= &piv;
            }
        }
        let prow = t[pr].clone();
        let nz: Vec<usize> = (0..=cols).filter(|&k| !prow[k].is_zero()).collect();
        for (r, tr) in t.iter_mut().enumerate() {
            if r == pr || tr[enter].is_zero() {
                continue;
            }
            let f = tr[enter].clone();
            for &k in &nz {
                let delta = &f * &prow[k];
                tr[k] -= delta;
            }
        }
        if !d[enter].is_zero() {
            let f = d[enter].clone();
            for &k in &nz {
                if k < cols {
                    let delta = &f * &prow[k];
                    d[k] -= delta;
                }
            }
        }
        basis[pr] = enter;
    }

    let values: Vec<Rat> = (0..n).map(|j| -d[m + j].clone()).collect();
    debug_assert!(p.is_feasible(&values), "simplex returned an infeasible cover");
    CoverSolution::from_values(values)
}

/// Minimum-cardinality integral cover by branch and bound.
///
/// Branches on the fractional variable closest to one half, prunes with the
/// relaxation bound and seeds the incumbent by greedy rounding.
pub fn solve_ilp_exact(p: &CoverProgram, size_cap: usize) -> Result<CoverSolution> {
    if p.num_vars > size_cap {
        return Err(Error::SizeCapExceeded { size: p.num_vars, cap: size_cap });
    }
    let root = solve_lp(p);
    let mut best = greedy_round(p, &root.values);
    let mut fixed: Vec<Option<bool>> = vec![None; p.num_vars];
    branch(p, &mut fixed, Some(root), &mut best);
    let mut values = vec![Rat::zero(); p.num_vars];
    for v in best {
        values[v] = Rat::one();
    }
    Ok(CoverSolution::from_values(values))
}

pub const DEFAULT_ILP_CAP: usize = 24;

fn greedy_round(p: &CoverProgram, x: &[Rat]) -> BTreeSet<usize> {
    let mut order: Vec<usize> = (0..p.num_vars).collect();
    order.sort_by(|&a, &b| x[b].cmp(&x[a]).then(a.cmp(&b)));
    let mut chosen = BTreeSet::new();
    for row in &p.rows {
        if !row.iter().any(|v| chosen.contains(v)) {
            let pick = order.iter().find(|v| row.contains(v)).copied().expect("row non-empty");
            chosen.insert(pick);
        }
    }
    // drop redundant picks, lowest LP value first
    for &v in order.iter().rev() {
        if chosen.remove(&v) && !p.is_cover(&chosen) {
            chosen.insert(v);
        }
    }
    chosen
}

/// Sub-program left after fixing variables; `None` if some row is dead.
fn restrict(p: &CoverProgram, fixed: &[Option<bool>]) -> Option<CoverProgram> {
    let mut rows = Vec::new();
    for row in &p.rows {
        if row.iter().any(|&v| fixed[v] == Some(true)) {
            continue;
        }
        let free: Vec<usize> = row.iter().copied().filter(|&v| fixed[v].is_none()).collect();
        if free.is_empty() {
            return None;
        }
        rows.push(free);
    }
    Some(CoverProgram { num_vars: p.num_vars, rows })
}

fn branch(p: &CoverProgram, fixed: &mut Vec<Option<bool>>, lp: Option<CoverSolution>, best: &mut BTreeSet<usize>) {
    let Some(sub) = restrict(p, fixed) else { return };
    let ones = fixed.iter().filter(|f| **f == Some(true)).count();
    let lp = lp.unwrap_or_else(|| solve_lp(&sub));
    let bound = int(ones as i64) + &lp.objective;
    // an integral improvement needs ceil(bound) < |best|
    if bound.ceil() >= int(best.len() as i64) {
        return;
    }
    let frac = (0..p.num_vars).filter(|&v| fixed[v].is_none() && !lp.values[v].is_zero() && !lp.values[v].is_one()).min_by(|&a, &b| {
        let half = crate::geom::rat(1, 2);
        (&lp.values[a] - &half).abs().cmp(&(&lp.values[b] - &half).abs()).then(a.cmp(&b))
    });
    match frac {
        None => {
            let mut sol: BTreeSet<usize> = (0..p.num_vars).filter(|&v| fixed[v] == Some(true)).collect();
            sol.extend(lp.support());
            if sol.len() < best.len() {
                *best = sol;
            }
        }
        Some(v) => {
            for choice in [true, false] {
                fixed[v] = Some(choice);
                branch(p, fixed, None, best);
            }
            fixed[v] = None;
        }
    }
}

/// `min(1, factor * x_v)` for every variable.
pub fn scaled_solution(values: &[Rat], factor: &Rat) -> Vec<Rat> {
    values.iter().map(|v| (v * factor).min(Rat::one())).collect()
}

/// Rows (and their part variables) that one label of a threshold split keeps.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SplitPart {
    /// Indices of the selected rows of the original program.
    pub rows: Vec<usize>,
    /// For each selected row, the variables of this part in that row.
    pub row_vars: Vec<Vec<usize>>,
    /// Union of `row_vars`.
    pub vars: BTreeSet<usize>,
}

impl SplitPart {
    /// The part as a stand-alone program over `vars`, with the local to
    /// original id map.
    pub fn program(&self) -> (CoverProgram, Vec<usize>) {
        let map: Vec<usize> = self.vars.iter().copied().collect();
        let local: BTreeMap<usize, usize> = map.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let rows = self.row_vars.iter().map(|r| r.iter().map(|v| local[v]).collect()).collect();
        (CoverProgram { num_vars: map.len(), rows }, map)
    }
}

/// For each label, selects the rows whose mass on that label's part is at
/// least `theta` and gathers the part's variables over those rows.
///
/// `parts[i]` partitions row `i` into labelled variable sets. Every row must
/// reach `theta` in some part; otherwise `UncoveredRow`.
pub fn threshold_split<L: Ord + Clone>(
    p: &CoverProgram,
    sol: &CoverSolution,
    parts: &[Vec<(L, Vec<usize>)>],
    theta: &Rat,
) -> Result<BTreeMap<L, SplitPart>> {
    if parts.len() != p.rows.len() {
        return Err(Error::invalid("one partition per row is required"));
    }
    let mut out: BTreeMap<L, SplitPart> = BTreeMap::new();
    for (i, (row, row_parts)) in p.rows.iter().zip(parts).enumerate() {
        let mut seen: Vec<usize> = row_parts.iter().flat_map(|(_, vs)| vs.iter().copied()).collect();
        seen.sort_unstable();
        if &seen != row {
            return Err(Error::invalid(format!("partition of row {i} does not match its variables")));
        }
        let mut landed = false;
        for (label, vars) in row_parts {
            let mass: Rat = vars.iter().map(|&v| &sol.values[v]).sum();
            if !vars.is_empty() && &mass >= theta {
                landed = true;
                let part = out.entry(label.clone()).or_default();
                part.rows.push(i);
                part.row_vars.push(vars.clone());
                part.vars.extend(vars.iter().copied());
            }
        }
        if !landed {
            return Err(Error::UncoveredRow(i));
        }
    }
    Ok(out)
}
