//! Genus-0 intersection theory: boundary strata of `M̄_{0,n}`, integrals of
//! monomials in boundary divisors and ψ-classes, and strata pairings.

mod monomial;
mod pairing;
mod strata;

pub use monomial::{evaluate_monomial, evaluate_with_pivots, CycleMonomial, Evaluation};
pub use pairing::{pairing_matrix, PairingMatrix, MAX_PAIRING_ENTRIES};
pub use strata::{
    all_splits, compatible, enumerate_strata, fmt_split, full_mask, normalize_split, parse_split, split_from_mask,
    split_points, Split, StratumTree,
};

/// Default upper bound on `n`.
pub const DEFAULT_CAP_N: usize = 9;
