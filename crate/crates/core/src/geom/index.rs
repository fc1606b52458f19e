use std::collections::HashMap;

use super::{HRay, Rat, VSeg};

/// Range-extremum tree over a fixed array of slots. Each slot is either
/// empty or holds a key; queries return the best key and its slot.
#[derive(Debug, Clone)]
pub struct ExtremeTree<K> {
    size: usize,
    want_max: bool,
    nodes: Vec<Option<(K, usize)>>,
}

impl<K: Ord + Clone> ExtremeTree<K> {
    pub fn new(len: usize, want_max: bool) -> Self {
        let size = len.next_power_of_two().max(1);
        ExtremeTree { size, want_max, nodes: vec![None; 2 * size] }
    }

    pub fn max_tree(len: usize) -> Self {
        Self::new(len, true)
    }

    pub fn min_tree(len: usize) -> Self {
        Self::new(len, false)
    }

    fn better(&self, a: &Option<(K, usize)>, b: &Option<(K, usize)>) -> Option<(K, usize)> {
        match (a, b) {
            (None, x) | (x, None) => x.clone(),
            (Some(x), Some(y)) => {
                let pick_x = if self.want_max { x.0 >= y.0 } else { x.0 <= y.0 };
                Some(if pick_x { x.clone() } else { y.clone() })
            }
        }
    }

    pub fn set(&mut self, slot: usize, key: Option<K>) {
        let mut i = slot + self.size;
        self.nodes[i] = key.map(|k| (k, slot));
        while i > 1 {
            i /= 2;
            self.nodes[i] = self.better(&self.nodes[2 * i], &self.nodes[2 * i + 1]);
        }
    }

    pub fn get(&self, slot: usize) -> Option<&K> {
        self.nodes[slot + self.size].as_ref().map(|(k, _)| k)
    }

    /// Best entry among slots in `lo..hi`.
    pub fn query(&self, lo: usize, hi: usize) -> Option<(K, usize)> {
        let (mut l, mut r) = (lo + self.size, hi + self.size);
        let mut acc: Option<(K, usize)> = None;
        while l < r {
            if l & 1 == 1 {
                acc = self.better(&acc, &self.nodes[l]);
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                acc = self.better(&acc, &self.nodes[r]);
            }
            l /= 2;
            r /= 2;
        }
        acc
    }
}

/// Live set of leftward rays supporting "report and remove every live ray
/// meeting this vertical segment". Rays are laid out by `(y, id)` and a
/// max-tree over `x_right` answers each report in logarithmic time.
#[derive(Debug, Clone)]
pub struct RayIndex {
    rays: Vec<HRay>,
    slot: HashMap<usize, usize>,
    tree: ExtremeTree<Rat>,
    live: usize,
}

impl RayIndex {
    /// Index over all `rays`, every one live.
    pub fn build(rays: &[HRay]) -> Self {
        let mut idx = Self::empty(rays);
        for i in 0..idx.rays.len() {
            idx.tree.set(i, Some(idx.rays[i].x_right.clone()));
        }
        idx.live = idx.rays.len();
        idx
    }

    /// Index over `rays` with nothing live yet.
    pub fn empty(rays: &[HRay]) -> Self {
        let mut rays = rays.to_vec();
        rays.sort_by(|a, b| a.y.cmp(&b.y).then(a.id.cmp(&b.id)));
        let slot = rays.iter().enumerate().map(|(i, r)| (r.id, i)).collect();
        let tree = ExtremeTree::max_tree(rays.len());
        RayIndex { rays, slot, tree, live: 0 }
    }

    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    pub fn contains(&self, id: usize) -> bool {
        self.slot.get(&id).is_some_and(|&s| self.tree.get(s).is_some())
    }

    pub fn insert(&mut self, id: usize) {
        let s = self.slot[&id];
        if self.tree.get(s).is_none() {
            self.tree.set(s, Some(self.rays[s].x_right.clone()));
            self.live += 1;
        }
    }

    pub fn remove(&mut self, id: usize) {
        let s = self.slot[&id];
        if self.tree.get(s).is_some() {
            self.tree.set(s, None);
            self.live -= 1;
        }
    }

    fn y_range(&self, seg: &VSeg) -> (usize, usize) {
        let lo = self.rays.partition_point(|r| r.y < seg.y_lo);
        let hi = self.rays.partition_point(|r| r.y <= seg.y_hi);
        (lo, hi.max(lo))
    }

    /// Ids of live rays meeting `seg`, which are then removed.
    pub fn query_delete(&mut self, seg: &VSeg) -> Vec<usize> {
        let (lo, hi) = self.y_range(seg);
        let mut out = Vec::new();
        while let Some((x, s)) = self.tree.query(lo, hi) {
            if x < seg.x {
                break;
            }
            self.tree.set(s, None);
            self.live -= 1;
            out.push(self.rays[s].id);
        }
        out.sort_unstable();
        out
    }

    /// Some live ray meeting `seg`, without removing anything.
    pub fn any_intersecting(&self, seg: &VSeg) -> Option<usize> {
        let (lo, hi) = self.y_range(seg);
        match self.tree.query(lo, hi) {
            Some((x, s)) if x >= seg.x => Some(self.rays[s].id),
            _ => None,
        }
    }
}
