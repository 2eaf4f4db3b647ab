//! Genus-0 Gromov-Witten side: target data, `P¹` classes on `M̄_{0,n}`,
//! exact linear algebra and the associativity oracle.

pub mod linalg;
mod p1;
mod sign;
mod target;
mod wdvv;

pub use p1::{
    class_dimension_p1, reconstruct, reconstruct_and_cup, reconstruct_and_cup_with_order, stratum_pairing_p1,
    vertex_invariant_p1, GWPairingVector, Reconstruction,
};
pub use sign::kunneth_sign;
pub use target::TargetSpace;
pub use wdvv::{wdvv_number, WdvvSolver};
