//! Stable modular graphs with curve-class markings, genus-0 intersection
//! theory on `M̄_{0,n}`, and an exact check of the product formula for
//! Gromov-Witten classes of `P¹ × P¹`.

pub mod curve;
pub mod error;
pub mod fraction;
pub mod functors;
pub mod graph;
pub mod gw;
pub mod mbar;

pub use curve::{CurveClass, DegreeMonoid, MonoidMap};
pub use error::{Error, Result};
pub mod sample;
pub mod verify;
