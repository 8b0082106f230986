//! Exact arithmetic on congruent number curves and the nearly-perfect cuboids
//! built from pairs of their points.
//!
//! Everything is exact: coordinates are arbitrary-precision rationals and
//! every construction can be checked by substituting back.

pub mod cuboid;
pub mod curve;
pub mod error;
pub mod factor;
pub mod inverse;
pub mod json;
pub mod rational;
pub mod search;
pub mod theorem;

pub use cuboid::{build_npc, Cuboid, Parametrization, Relation};
pub use curve::{Curve, CurvePoint, KummerPoint, SolutionPair};
pub use error::{Error, Result};
pub use factor::FactorBudget;
pub use inverse::{recover, InverseFamily, RecoveredSolutions, Which};
pub use rational::Rational;
pub use search::{run_search, SearchJob, SearchRecord};
