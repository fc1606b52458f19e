//! Instance and solution files, and a uniform entry point that runs the
//! solver matching an instance kind.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{int, OrthoInstance};
use crate::lp::{solve_lp, SolveCertificate};
use crate::oracle::{exact_mds, exact_stab};
use crate::psd;
use crate::srs::{self, SrsInstance};
use crate::ssr::{self, SsrInstance};
use crate::stabbedl::{self, StabbedLInstance};
use crate::uvpg::{self, UnitBkInstance};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceFile {
    Ssr(SsrInstance),
    Srs(SrsInstance),
    StabbedL(StabbedLInstance),
    OrthoPsd(OrthoInstance),
    UnitBk(UnitBkInstance),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Ssr,
    Srs,
    StabbedL,
    OrthoPsd,
    UnitBk,
}

impl Kind {
    pub const ALL: [Kind; 5] = [Kind::Ssr, Kind::Srs, Kind::StabbedL, Kind::OrthoPsd, Kind::UnitBk];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Ssr => "ssr",
            Kind::Srs => "srs",
            Kind::StabbedL => "stabbed_l",
            Kind::OrthoPsd => "ortho_psd",
            Kind::UnitBk => "unit_bk",
        }
    }

    /// Name of the algorithm that solves this kind.
    pub fn alg(self) -> &'static str {
        match self {
            Kind::Ssr => "ssr",
            Kind::Srs => "srs",
            Kind::StabbedL => "stabbed-l",
            Kind::OrthoPsd => "psd",
            Kind::UnitBk => "uvpg",
        }
    }

    pub fn from_alg(alg: &str) -> Result<Kind> {
        Kind::ALL.into_iter().find(|k| k.alg() == alg).ok_or_else(|| Error::invalid(format!("unknown algorithm {alg:?}")))
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Kind> {
        Kind::ALL.into_iter().find(|k| k.name() == s || k.alg() == s).ok_or_else(|| Error::invalid(format!("unknown kind {s:?}")))
    }
}

fn dense(ids: impl Iterator<Item = usize>, what: &str) -> Result<()> {
    let mut v: Vec<usize> = ids.collect();
    v.sort_unstable();
    if v.iter().enumerate().any(|(i, &id)| i != id) {
        return Err(Error::invalid(format!("{what} ids must be 0..n without gaps or repeats")));
    }
    Ok(())
}

impl InstanceFile {
    pub fn kind(&self) -> Kind {
        match self {
            InstanceFile::Ssr(_) => Kind::Ssr,
            InstanceFile::Srs(_) => Kind::Srs,
            InstanceFile::StabbedL(_) => Kind::StabbedL,
            InstanceFile::OrthoPsd(_) => Kind::OrthoPsd,
            InstanceFile::UnitBk(_) => Kind::UnitBk,
        }
    }

    /// Checks that ids are dense; geometric checks are left to the solvers.
    pub fn check_ids(&self) -> Result<()> {
        match self {
            InstanceFile::Ssr(i) => {
                dense(i.rays.iter().map(|r| r.id), "ray")?;
                dense(i.segments.iter().map(|s| s.id), "segment")
            }
            InstanceFile::Srs(i) => {
                dense(i.rays.iter().map(|r| r.id), "ray")?;
                dense(i.segments.iter().map(|s| s.id), "segment")
            }
            InstanceFile::StabbedL(i) => dense(i.paths.iter().map(|p| p.id), "path"),
            InstanceFile::OrthoPsd(i) => {
                dense(i.segments().map(|s| s.id()), "segment")?;
                i.validate()
            }
            InstanceFile::UnitBk(i) => dense(i.paths.iter().map(|p| p.id), "path"),
        }
    }

    pub fn from_json(s: &str) -> Result<InstanceFile> {
        let inst: InstanceFile = serde_json::from_str(s).map_err(|e| Error::invalid(e.to_string()))?;
        inst.check_ids()?;
        Ok(inst)
    }

    /// Pretty JSON with every rational in canonical form.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instances serialize") + "\n"
    }

    /// Number of candidates the exact oracle would enumerate.
    pub fn oracle_size(&self) -> usize {
        match self {
            InstanceFile::Ssr(i) => i.rays.len(),
            InstanceFile::Srs(i) => i.segments.len(),
            InstanceFile::StabbedL(i) => i.paths.len(),
            InstanceFile::OrthoPsd(i) => i.candidate_ids.len(),
            InstanceFile::UnitBk(i) => i.paths.len(),
        }
    }

    /// Sizes for reports, as `name=value` pairs joined by `;`.
    pub fn sizes(&self) -> String {
        match self {
            InstanceFile::Ssr(i) => format!("rays={};segments={}", i.rays.len(), i.segments.len()),
            InstanceFile::Srs(i) => format!("rays={};segments={}", i.rays.len(), i.segments.len()),
            InstanceFile::StabbedL(i) => format!("paths={}", i.paths.len()),
            InstanceFile::OrthoPsd(i) => {
                format!("segments={};constraints={};candidates={}", i.len(), i.constraint_ids.len(), i.candidate_ids.len())
            }
            InstanceFile::UnitBk(i) => format!("paths={};k={}", i.paths.len(), i.k),
        }
    }

    /// The minimum solution size, by brute force.
    pub fn exact(&self, cap: usize) -> Result<BTreeSet<usize>> {
        match self {
            InstanceFile::Ssr(i) => exact_stab(i, cap),
            InstanceFile::Srs(i) => exact_stab(i, cap),
            InstanceFile::OrthoPsd(i) => exact_stab(i, cap),
            InstanceFile::StabbedL(i) => {
                let g = i.build_graph();
                Ok(exact_mds(&g.graph, cap)?.into_iter().map(|p| g.ids[p]).collect())
            }
            InstanceFile::UnitBk(i) => {
                let g = uvpg::build_graph(&i.paths)?;
                Ok(exact_mds(&g.graph, cap)?.into_iter().map(|p| g.ids[p]).collect())
            }
        }
    }

    /// True iff `ids` is a feasible solution.
    pub fn verify(&self, ids: &BTreeSet<usize>) -> Result<bool> {
        Ok(match self {
            InstanceFile::Ssr(i) => ids.iter().all(|id| i.rays.iter().any(|r| r.id == *id)) && i.covers(ids),
            InstanceFile::Srs(i) => ids.iter().all(|id| i.segments.iter().any(|s| s.id == *id)) && i.covers(ids),
            InstanceFile::StabbedL(i) => i.dominates(ids),
            InstanceFile::OrthoPsd(i) => {
                let segs = i.by_id();
                ids.is_subset(&i.candidate_ids) && i.constraint_ids.iter().all(|c| ids.iter().any(|k| segs[k].intersects(&segs[c])))
            }
            InstanceFile::UnitBk(i) => i.dominates(ids)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub kind: Kind,
    pub alg: String,
    pub ids: BTreeSet<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<SolveCertificate>,
}

impl SolutionFile {
    pub fn from_json(s: &str) -> Result<SolutionFile> {
        serde_json::from_str(s).map_err(|e| Error::invalid(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solutions serialize") + "\n"
    }
}

/// Result of running the solver for an instance.
#[derive(Debug, Clone)]
pub struct Solved {
    pub certificate: SolveCertificate,
    pub trace: Option<serde_json::Value>,
}

/// Runs the algorithm matching the instance kind. With `want_trace` the
/// greedy solvers return their full trace; the LP-based ones return the
/// optima of their sub-programs.
pub fn solve(inst: &InstanceFile, want_trace: bool) -> Result<Solved> {
    use crate::geom::format_rat as f;
    use serde_json::json;
    let (certificate, trace) = match inst {
        InstanceFile::Ssr(i) => {
            let norm = ssr::normalize(i)?;
            let lp = solve_lp(&norm.cover_program()?).objective;
            let (ids, trace) = if want_trace {
                let (ids, t) = ssr::solve(&norm, true)?;
                (ids, t.map(|t| to_value(&t)))
            } else {
                (ssr::solve_fast(&norm)?, None)
            };
            (SolveCertificate::new(ids, lp, int(2)), trace)
        }
        InstanceFile::Srs(i) => {
            let norm = srs::normalize(i)?;
            let lp = solve_lp(&norm.cover_program()?).objective;
            let (ids, trace) = srs::solve(&norm, want_trace)?;
            (SolveCertificate::new(ids, lp, int(2)), trace.map(|t| to_value(&t)))
        }
        InstanceFile::StabbedL(i) => {
            let r = stabbedl::solve_mds(i)?;
            let t = json!({
                "lp": f(&r.certificate.lp_opt), "q1_lp": f(&r.q1_lp), "q2_lp": f(&r.q2_lp),
                "a1": r.a1, "a2": r.a2, "srs_solution": r.srs_solution, "ssr_solution": r.ssr_solution,
            });
            (r.certificate, Some(t))
        }
        InstanceFile::OrthoPsd(i) => {
            let r = psd::psd_solve(i)?;
            let t = json!({
                "lp": f(&r.z_lp), "same_lp": f(&r.z1_lp), "cross_lp": f(&r.z2_lp),
                "same_solution": r.same_solution, "cross_solution": r.cross_solution,
            });
            (r.certificate, Some(t))
        }
        InstanceFile::UnitBk(i) => {
            let r = uvpg::solve_mds(&i.paths, i.k)?;
            let pairs: Vec<_> = r
                .pair_lps
                .iter()
                .map(|(&(a, b), lp)| json!({"pair": [a, b], "lp": f(lp), "solution": r.pair_solutions[&(a, b)]}))
                .collect();
            let t = json!({"lp": f(&r.q_lp), "pairs": pairs});
            (r.certificate, Some(t))
        }
    };
    Ok(Solved { certificate, trace: if want_trace { trace } else { None } })
}

fn to_value<T: Serialize>(t: &T) -> serde_json::Value {
    serde_json::to_value(t).expect("traces serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{HRay, VSeg};

    fn sample() -> InstanceFile {
        InstanceFile::Ssr(SsrInstance::new(vec![HRay::new(0, int(1), crate::geom::rat(5, 2))], vec![VSeg::new(0, int(1), int(0), int(2))]))
    }

    #[test]
    fn round_trip() {
        let s = sample().to_json();
        assert!(s.contains("\"kind\": \"ssr\""));
        assert!(s.contains("\"5/2\""));
        let back = InstanceFile::from_json(&s).unwrap();
        assert_eq!(back, sample());
        assert_eq!(back.to_json(), s);
    }

    #[test]
    fn rejects_bad_input() {
        let s = sample().to_json().replace("5/2", "3/0");
        assert!(matches!(InstanceFile::from_json(&s), Err(Error::InvalidInput(_))));
        let s = sample().to_json().replace("\"id\": 0,\n      \"y\"", "\"id\": 3,\n      \"y\"");
        assert!(matches!(InstanceFile::from_json(&s), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn solve_and_verify() {
        let inst = sample();
        let s = solve(&inst, true).unwrap();
        assert!(inst.verify(&s.certificate.heuristic_ids).unwrap());
        assert!(!inst.verify(&BTreeSet::new()).unwrap());
        assert!(s.trace.is_some());
        assert_eq!("stabbed-l".parse::<Kind>().unwrap(), Kind::StabbedL);
    }
}
