//! Finite T0-spaces as posets: cores, homotopy of maps, degrees of maps
//! between Khalimsky circles, and LS-category and topological complexity.

pub mod circle;
pub mod complex;
pub mod error;
pub mod homotopy;
pub mod invariants;
pub mod witness;
pub mod pointset;
pub mod space;

pub use error::{Error, Result};
pub use pointset::PointSet;
pub use space::{product, DownSet, FiniteSpace, KhalimskyCircle, KhalimskyInterval, OrderMap, Subspace};
