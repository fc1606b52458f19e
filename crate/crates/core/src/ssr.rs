//! Stabbing vertical segments with leftward rays: the token-passing greedy
//! with an optional execution trace, and an equivalent sweep implementation.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{intersects, nonneg_shift, rat_cmp, separate_shared_x, ExtremeTree, HRay, Rat, RayIndex, VSeg};
use crate::lp::CoverProgram;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsrInstance {
    pub rays: Vec<HRay>,
    pub segments: Vec<VSeg>,
}

pub type Tokens = BTreeMap<usize, BTreeSet<usize>>;

/// A ray found to be the only live stabber of `witness`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalEvent {
    pub ray: usize,
    pub witness: usize,
}

/// State at the end of one iteration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsrIteration {
    pub live_rays: BTreeSet<usize>,
    pub live_segments: BTreeSet<usize>,
    pub solution: BTreeSet<usize>,
    pub critical: Vec<CriticalEvent>,
    pub chosen: Option<usize>,
    pub tokens: Tokens,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenTrace {
    pub initial_tokens: Tokens,
    pub iterations: Vec<SsrIteration>,
}

impl TokenTrace {
    pub fn final_tokens(&self) -> &Tokens {
        self.iterations.last().map_or(&self.initial_tokens, |it| &it.tokens)
    }

    /// Tokens in force when iteration `i` (0-based) began.
    pub fn tokens_before(&self, i: usize) -> &Tokens {
        if i == 0 {
            &self.initial_tokens
        } else {
            &self.iterations[i - 1].tokens
        }
    }

    /// Largest number of final tokens any single ray id appears in.
    pub fn max_multiplicity(&self) -> usize {
        let mut count: HashMap<usize, usize> = HashMap::new();
        for t in self.final_tokens().values() {
            for &x in t {
                *count.entry(x).or_default() += 1;
            }
        }
        count.into_values().max().unwrap_or(0)
    }
}

impl SsrInstance {
    pub fn new(rays: Vec<HRay>, segments: Vec<VSeg>) -> Self {
        SsrInstance { rays, segments }
    }

    /// Rows are segments, variables are ray positions in `self.rays`.
    pub fn cover_program(&self) -> Result<CoverProgram> {
        let rows = self.segments.iter().map(|s| (0..self.rays.len()).filter(|&j| intersects(&self.rays[j], s)).collect()).collect();
        CoverProgram::new(self.rays.len(), rows)
    }

    pub fn covers(&self, chosen: &BTreeSet<usize>) -> bool {
        let rays: Vec<&HRay> = self.rays.iter().filter(|r| chosen.contains(&r.id)).collect();
        self.segments.iter().all(|s| rays.iter().any(|r| intersects(*r, s)))
    }

    fn check_ids(&self) -> Result<()> {
        let mut ids = BTreeSet::new();
        for r in &self.rays {
            if !ids.insert(r.id) {
                return Err(Error::invalid(format!("duplicate ray id {}", r.id)));
            }
        }
        let mut ys: Vec<&HRay> = self.rays.iter().collect();
        ys.sort_unstable_by(|a, b| rat_cmp(&a.y, &b.y));
        if let Some(w) = ys.windows(2).find(|w| w[0].y == w[1].y) {
            return Err(Error::invalid(format!("ray {} overlaps another ray", w[1].id)));
        }
        let mut ids = BTreeSet::new();
        for s in &self.segments {
            if !ids.insert(s.id) {
                return Err(Error::invalid(format!("duplicate segment id {}", s.id)));
            }
            if !s.is_well_formed() {
                return Err(Error::invalid(format!("segment {} has y_lo > y_hi", s.id)));
            }
        }
        Ok(())
    }
}

/// Translates into the first quadrant, separates segments sharing an
/// x-coordinate and checks that every segment is stabbed.
pub fn normalize(inst: &SsrInstance) -> Result<SsrInstance> {
    inst.check_ids()?;
    let mut out = inst.clone();
    separate_shared_x(&out.rays, &mut out.segments);
    let dx = nonneg_shift(out.segments.iter().map(|s| &s.x).chain(out.rays.iter().map(|r| &r.x_right)));
    let dy = nonneg_shift(out.segments.iter().map(|s| &s.y_lo).chain(out.rays.iter().map(|r| &r.y)));
    for r in &mut out.rays {
        r.x_right += &dx;
        r.y += &dy;
    }
    for s in &mut out.segments {
        s.x += &dx;
        s.y_lo += &dy;
        s.y_hi += &dy;
    }
    check_feasible(&out)?;
    Ok(out)
}

fn check_feasible(inst: &SsrInstance) -> Result<()> {
    inst.check_ids()?;
    let idx = RayIndex::build(&inst.rays);
    match inst.segments.iter().find(|s| idx.any_intersecting(s).is_none()) {
        Some(s) => Err(Error::InfeasibleSegment(s.id)),
        None => Ok(()),
    }
}

/// The token-passing greedy, run literally. Returns the chosen ray ids and,
/// when asked, the full per-iteration trace.
pub fn solve(inst: &SsrInstance, want_trace: bool) -> Result<(BTreeSet<usize>, Option<TokenTrace>)> {
    check_feasible(inst)?;
    let n = inst.rays.len();
    let m = inst.segments.len();
    let hit: Vec<Vec<bool>> = inst.segments.iter().map(|s| inst.rays.iter().map(|r| intersects(r, s)).collect()).collect();
    let ray_id = |j: usize| inst.rays[j].id;

    // rays by y so neighbours are adjacent live entries
    let mut by_y: Vec<usize> = (0..n).collect();
    by_y.sort_by(|&a, &b| inst.rays[a].y.cmp(&inst.rays[b].y));

    let mut live_r = vec![true; n];
    let mut live_v = vec![true; m];
    let mut in_s = vec![false; n];
    let mut tokens: Vec<BTreeSet<usize>> = (0..n).map(|j| BTreeSet::from([j])).collect();

    let snapshot = |tokens: &[BTreeSet<usize>]| -> Tokens {
        tokens.iter().enumerate().map(|(j, t)| (ray_id(j), t.iter().map(|&x| ray_id(x)).collect())).collect()
    };
    let mut trace = want_trace.then(|| TokenTrace { initial_tokens: snapshot(&tokens), iterations: Vec::new() });

    while live_v.iter().any(|&b| b) {
        // (a) critical rays, ascending id, witness = smallest segment id
        let mut witness: BTreeMap<usize, usize> = BTreeMap::new();
        for v in (0..m).filter(|&v| live_v[v]) {
            let mut stabbers = (0..n).filter(|&j| live_r[j] && hit[v][j]);
            if let (Some(j), None) = (stabbers.next(), stabbers.next()) {
                let seg_id = inst.segments[v].id;
                witness.entry(j).and_modify(|w| *w = (*w).min(seg_id)).or_insert(seg_id);
            }
        }
        let mut critical: Vec<CriticalEvent> = witness.iter().map(|(&j, &w)| CriticalEvent { ray: ray_id(j), witness: w }).collect();
        critical.sort_by_key(|e| e.ray);
        for &j in witness.keys() {
            in_s[j] = true;
            live_r[j] = false;
        }
        // (b) drop covered segments
        for (v, lv) in live_v.iter_mut().enumerate() {
            if *lv && witness.keys().any(|&j| hit[v][j]) {
                *lv = false;
            }
        }
        // (c) shortest remaining ray passes its token and leaves
        let chosen =
            (0..n).filter(|&j| live_r[j]).min_by(|&a, &b| inst.rays[a].x_right.cmp(&inst.rays[b].x_right).then(ray_id(a).cmp(&ray_id(b))));
        if let Some(r) = chosen {
            let pos = by_y.iter().position(|&j| j == r).expect("ray present");
            let above = by_y[pos + 1..].iter().copied().find(|&j| live_r[j]);
            let below = by_y[..pos].iter().rev().copied().find(|&j| live_r[j]);
            let moving: Vec<usize> = tokens[r].iter().copied().collect();
            for nb in [above, below].into_iter().flatten() {
                for &x in &moving {
                    let shared = (0..m).any(|v| live_v[v] && hit[v][x] && hit[v][nb] && hit[v][r]);
                    if shared {
                        tokens[nb].insert(x);
                    }
                }
            }
            tokens[r].clear();
            live_r[r] = false;
        }
        if let Some(t) = trace.as_mut() {
            t.iterations.push(SsrIteration {
                live_rays: (0..n).filter(|&j| live_r[j]).map(ray_id).collect(),
                live_segments: (0..m).filter(|&v| live_v[v]).map(|v| inst.segments[v].id).collect(),
                solution: (0..n).filter(|&j| in_s[j]).map(ray_id).collect(),
                critical,
                chosen: chosen.map(ray_id),
                tokens: snapshot(&tokens),
            });
        }
        if chosen.is_none() && witness.is_empty() {
            // unreachable on feasible input; guards against looping forever
            break;
        }
    }
    let sol = (0..n).filter(|&j| in_s[j]).map(ray_id).collect();
    Ok((sol, trace))
}

/// Same output as [`solve`] in `O((n + m) log(n + m))`.
///
/// Rays leave in order of `x_right`, so once the current threshold `t`
/// passes a segment's x every live ray in its y-range stabs it. Deleting a
/// ray can then only make a segment critical if its y-range holds exactly
/// one of the two live rays adjacent to the deleted one; two range-extremum
/// trees over activated segments find those segments, each at most once.
///
/// The sweep runs on coordinate ranks, which keeps every comparison and
/// tree update on machine integers.
pub fn solve_fast(inst: &SsrInstance) -> Result<BTreeSet<usize>> {
    inst.check_ids()?;
    let n = inst.rays.len();
    let m = inst.segments.len();
    let rk = Ranked::new(inst);

    // ray slots ordered by y; ray heights are distinct, so ranks are too
    let mut by_y: Vec<usize> = (0..n).collect();
    by_y.sort_unstable_by_key(|&j| rk.ry[j]);
    let y_sorted: Vec<u32> = by_y.iter().map(|&j| rk.ry[j]).collect();
    let y_slot = inverse(&by_y);
    let span = |v: usize| (y_sorted.partition_point(|&y| y < rk.slo[v]), y_sorted.partition_point(|&y| y <= rk.shi[v]));
    let stabbed = |tree: &ExtremeTree<u32>, v: usize| {
        let (a, b) = span(v);
        tree.query(a, b).is_some_and(|(x, _)| x >= rk.sx[v])
    };

    let mut all = ExtremeTree::max_tree(n);
    for (&slot, &x) in y_slot.iter().zip(&rk.rx) {
        all.set(slot, Some(x));
    }
    if let Some(v) = (0..m).find(|&v| !stabbed(&all, v)) {
        return Err(Error::InfeasibleSegment(inst.segments[v].id));
    }
    if m == 0 {
        return Ok(BTreeSet::new());
    }

    let mut critical = initial_critical(&rk);
    let id = |j: usize| inst.rays[j].id;
    let mut live_y: BTreeMap<u32, usize> = (0..n).map(|j| (rk.ry[j], j)).collect();
    let mut order: BTreeSet<(u32, usize, usize)> = (0..n).map(|j| (rk.rx[j], id(j), j)).collect();
    let mut chosen = ExtremeTree::max_tree(n);
    let mut solution = BTreeSet::new();

    let mut by_x: Vec<usize> = (0..m).collect();
    by_x.sort_unstable_by_key(|&v| rk.sx[v]);
    let mut next_act = 0;

    let mut lo_order: Vec<usize> = (0..m).collect();
    lo_order.sort_unstable_by_key(|&v| (rk.slo[v], v));
    let mut hi_order: Vec<usize> = (0..m).collect();
    hi_order.sort_unstable_by_key(|&v| (rk.shi[v], v));
    let lo_slot = inverse(&lo_order);
    let hi_slot = inverse(&hi_order);
    let lo_keys: Vec<u32> = lo_order.iter().map(|&v| rk.slo[v]).collect();
    let hi_keys: Vec<u32> = hi_order.iter().map(|&v| rk.shi[v]).collect();
    // lo_tree: slots by y_lo, value y_hi (min); hi_tree: slots by y_hi, value y_lo (max)
    let mut lo_tree: ExtremeTree<u32> = ExtremeTree::min_tree(m);
    let mut hi_tree: ExtremeTree<u32> = ExtremeTree::max_tree(m);

    while !live_y.is_empty() || !critical.is_empty() {
        for &j in &critical {
            solution.insert(id(j));
            live_y.remove(&rk.ry[j]);
            order.remove(&(rk.rx[j], id(j), j));
            chosen.set(y_slot[j], Some(rk.rx[j]));
        }
        critical.clear();
        let Some(&(t, _, r)) = order.iter().next() else { break };
        order.remove(&(t, id(r), r));
        live_y.remove(&rk.ry[r]);

        while next_act < m && rk.sx[by_x[next_act]] <= t {
            let v = by_x[next_act];
            lo_tree.set(lo_slot[v], Some(rk.shi[v]));
            hi_tree.set(hi_slot[v], Some(rk.slo[v]));
            next_act += 1;
        }

        let ry = rk.ry[r];
        let mut up = live_y.range(ry..).map(|(_, &j)| j);
        let (a1, a2) = (up.next(), up.next());
        let mut down = live_y.range(..ry).rev().map(|(_, &j)| j);
        let (b1, b2) = (down.next(), down.next());
        let y_of = |j: Option<usize>| j.map(|j| rk.ry[j]);

        // segments with y_lo in (b1, r.y] and y_hi below a2
        let lo_a = b1.map_or(0, |b| lo_keys.partition_point(|&k| k <= rk.ry[b]));
        let lo_b = lo_keys.partition_point(|&k| k <= ry);
        while let Some((hi, s)) = lo_tree.query(lo_a, lo_b) {
            if y_of(a2).is_some_and(|a2y| hi >= a2y) {
                break;
            }
            let v = lo_order[s];
            lo_tree.set(lo_slot[v], None);
            hi_tree.set(hi_slot[v], None);
            if !stabbed(&chosen, v) {
                critical.extend(a1);
            }
        }
        // segments with y_hi in [r.y, a1) and y_lo above b2
        let hi_a = hi_keys.partition_point(|&k| k < ry);
        let hi_b = a1.map_or(m, |a| hi_keys.partition_point(|&k| k < rk.ry[a]));
        while let Some((lo, s)) = hi_tree.query(hi_a, hi_b) {
            if y_of(b2).is_some_and(|b2y| lo <= b2y) {
                break;
            }
            let v = hi_order[s];
            lo_tree.set(lo_slot[v], None);
            hi_tree.set(hi_slot[v], None);
            if !stabbed(&chosen, v) {
                critical.extend(b1);
            }
        }
    }
    Ok(solution)
}

/// Coordinates replaced by ranks: x values are ranked together, and so are
/// y values, so every order relation the sweep tests is preserved.
struct Ranked {
    ry: Vec<u32>,
    rx: Vec<u32>,
    sx: Vec<u32>,
    slo: Vec<u32>,
    shi: Vec<u32>,
}

impl Ranked {
    fn new(inst: &SsrInstance) -> Self {
        let (rays, segs) = (&inst.rays, &inst.segments);
        let (n, m) = (rays.len(), segs.len());
        let xs: Vec<&Rat> = segs.iter().map(|s| &s.x).chain(rays.iter().map(|r| &r.x_right)).collect();
        let ys: Vec<&Rat> = segs.iter().flat_map(|s| [&s.y_lo, &s.y_hi]).chain(rays.iter().map(|r| &r.y)).collect();
        let (xr, yr) = (ranks(&xs), ranks(&ys));
        Ranked {
            ry: yr[2 * m..].to_vec(),
            rx: xr[m..m + n].to_vec(),
            sx: xr[..m].to_vec(),
            slo: (0..m).map(|v| yr[2 * v]).collect(),
            shi: (0..m).map(|v| yr[2 * v + 1]).collect(),
        }
    }
}

/// Dense ranks of `values`; equal values share a rank.
fn ranks(values: &[&Rat]) -> Vec<u32> {
    use num_traits::ToPrimitive;
    let mut idx: Vec<usize> = (0..values.len()).collect();
    let small: Option<Vec<(i128, i128)>> =
        values.iter().map(|r| Some((r.numer().to_i64()? as i128, r.denom().to_i64()? as i128))).collect();
    let mut out = vec![0u32; values.len()];
    let mut assign = |idx: &[usize], same: &dyn Fn(usize, usize) -> bool| {
        let mut rank = 0;
        for w in 0..idx.len() {
            if w > 0 && !same(idx[w - 1], idx[w]) {
                rank += 1;
            }
            out[idx[w]] = rank;
        }
    };
    match small {
        Some(k) => {
            let cmp = |a: usize, b: usize| (k[a].0 * k[b].1).cmp(&(k[b].0 * k[a].1));
            idx.sort_unstable_by(|&a, &b| cmp(a, b));
            assign(&idx, &|a, b| cmp(a, b).is_eq());
        }
        None => {
            idx.sort_unstable_by(|&a, &b| values[a].cmp(values[b]));
            assign(&idx, &|a, b| values[a] == values[b]);
        }
    }
    out
}

fn inverse(order: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; order.len()];
    for (slot, &v) in order.iter().enumerate() {
        inv[v] = slot;
    }
    inv
}

/// Ray positions that are the unique stabber of some segment.
fn initial_critical(rk: &Ranked) -> BTreeSet<usize> {
    let mut rays_desc: Vec<usize> = (0..rk.rx.len()).collect();
    rays_desc.sort_unstable_by(|&a, &b| rk.rx[b].cmp(&rk.rx[a]));
    let mut segs_desc: Vec<usize> = (0..rk.sx.len()).collect();
    segs_desc.sort_unstable_by(|&a, &b| rk.sx[b].cmp(&rk.sx[a]));
    let mut active: BTreeMap<u32, usize> = BTreeMap::new();
    let mut next = 0;
    let mut out = BTreeSet::new();
    for v in segs_desc {
        while next < rays_desc.len() && rk.rx[rays_desc[next]] >= rk.sx[v] {
            let j = rays_desc[next];
            active.insert(rk.ry[j], j);
            next += 1;
        }
        let mut hits = active.range(rk.slo[v]..=rk.shi[v]).map(|(_, &j)| j);
        if let (Some(j), None) = (hits.next(), hits.next()) {
            out.insert(j);
        }
    }
    out
}
