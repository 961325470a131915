//! Torus-equivariant vector bundles on projective space in Klyachko's
//! filtration language: sheaf cohomology over exact rationals, Chern data,
//! and the census of rank-2 bundles on `P^2` whose cohomology vanishes in
//! the middle along every `d`-th twist.

pub mod bundle;
pub mod census;
pub mod chern;
pub mod cohomology;
pub mod error;
pub mod fan;
pub mod io;
pub mod linalg;
pub mod resolution;
pub mod shifting;
pub mod validate;

pub use bundle::{Filtration, Step, ToricBundle};
pub use census::{CensusEntry, CensusType, Normalized};
pub use chern::ChernData;
pub use error::{Error, Result};
pub use fan::{Character, Cone, Divisor, Fan};
pub use linalg::{Rational, Subspace};
pub use shifting::ShiftingIndices;
