//! Numerics for Poisson approximation of Poisson-binomial laws: exact pmfs
//! and distances, Charlier polynomial machinery, Charlier-Jordan expansions,
//! signed approximants, closed-form error bounds with validity predicates,
//! and randomized verification batteries.

pub mod bounds;
pub mod charlier;
pub mod error;
pub mod expansion;
pub mod measures;
pub mod metrics;
pub mod numeric;
pub mod params;
pub mod pmf;
pub mod verify;

pub use error::{Error, Result};
pub use expansion::{ExpansionCoefficients, ExpansionVariant, ParsevalReport};
pub use measures::Approximant;
pub use metrics::{DistanceKind, DistanceReport};
pub use params::{params_from_json, BernoulliParams};
pub use pmf::{Pmf, SignedPmf, TailSplit};
