//! Approximation algorithms for stabbing and domination problems on
//! axis-parallel rays, segments and paths, with exact rational arithmetic
//! and brute-force oracles.

pub mod bench;
pub mod error;
pub mod gen;
pub mod geom;
pub mod io;
pub mod lp;
pub mod oracle;
pub mod psd;
pub mod render;
pub mod srs;
pub mod ssr;
pub mod stabbedl;
pub mod uvpg;

pub use error::{Assumption, Error, Orientation, Result};
pub use geom::{format_rat, intersects, parse_rat, HRay, HSeg, OrthoInstance, Rat, Seg, VSeg};
pub use io::{InstanceFile, Kind, SolutionFile};
pub use lp::{CoverProgram, CoverSolution, SolveCertificate};
pub use srs::SrsInstance;
pub use ssr::SsrInstance;
pub use stabbedl::{LPath, StabbedLInstance};
pub use uvpg::{Dir, UnitBkInstance, UnitKBendPath};
