//! Exact intersection theory on five toric threefolds, section-dominating
//! checks over Cox rings, and the algebraic hyperbolicity classification
//! of very general surfaces in them.

pub mod ambient;
pub mod cone;
pub mod cox;
pub mod error;
pub mod hyperbolicity;
pub mod identities;
pub mod linalg;
pub mod oracles;
pub mod selftest;
pub mod symbolic;

pub use ambient::{make_ambient, AmbientId, AmbientKind, AmbientThreefold, DivisorClass, LinearInequality, Params};
pub use error::{Error, Result};
