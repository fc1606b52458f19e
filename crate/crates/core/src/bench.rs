//! Ratio benchmark sweeps: generate, solve, compare with the exact optimum.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gen::{generate, GenParams};
use crate::geom::{format_rat, int, rat_to_f64};
use crate::io::{solve, Kind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub kind: Kind,
    pub seed: u64,
    pub sizes: String,
    pub heuristic_size: usize,
    pub lp_opt: String,
    pub exact_opt: Option<usize>,
    pub ratio: Option<f64>,
    pub bound: String,
    /// Exact check of `heuristic <= bound * exact`, when the optimum is known.
    pub within_bound: Option<bool>,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepParams {
    pub kind: Kind,
    /// Sizes cycle through `1..=max_size`.
    pub max_size: usize,
    pub trials: usize,
    pub seed: u64,
    pub k: usize,
    pub coord_range: i64,
    pub cap: usize,
}

/// Solves one instance per trial, concurrently. Records come back ordered by
/// trial; trial `t` uses seed `seed + t`.
pub fn sweep(p: &SweepParams) -> Result<Vec<BenchRecord>> {
    if p.max_size == 0 {
        return Err(Error::invalid("max size must be positive"));
    }
    (0..p.trials)
        .into_par_iter()
        .map(|t| {
            let size = 1 + t % p.max_size;
            let gp = GenParams { n: size, m: size, k: p.k, coord_range: p.coord_range, ..Default::default() };
            let seed = p.seed + t as u64;
            let inst = generate(p.kind, &gp, seed)?;
            let start = Instant::now();
            let solved = solve(&inst, false)?;
            let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
            let c = solved.certificate;
            let exact_opt = match inst.exact(p.cap) {
                Ok(e) => Some(e.len()),
                Err(Error::SizeCapExceeded { .. }) => None,
                Err(e) => return Err(e),
            };
            let ratio = exact_opt.map(|e| if e == 0 { 1.0 } else { c.heuristic_size as f64 / e as f64 });
            let within_bound = exact_opt.map(|e| int(c.heuristic_size as i64) <= &c.claimed_ratio_bound * int(e as i64));
            Ok(BenchRecord {
                kind: p.kind,
                seed,
                sizes: inst.sizes(),
                heuristic_size: c.heuristic_size,
                lp_opt: format_rat(&c.lp_opt),
                exact_opt,
                ratio,
                bound: format!("{}", rat_to_f64(&c.claimed_ratio_bound)),
                within_bound,
                wall_time_ms,
            })
        })
        .collect()
}

pub fn write_csv<W: std::io::Write>(records: &[BenchRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(|e| Error::invalid(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::invalid(e.to_string()))
}
