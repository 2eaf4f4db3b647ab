use num_rational::BigRational;
use rayon::prelude::*;

use super::monomial::{evaluate_monomial, CycleMonomial};
use super::strata::{enumerate_strata, StratumTree};
use crate::error::{Error, Result};

/// Intersection numbers between strata of dimension `k` (rows) and strata of
/// the complementary dimension `n − 3 − k` (columns).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingMatrix {
    pub n: usize,
    pub k: usize,
    pub rows: Vec<StratumTree>,
    pub cols: Vec<StratumTree>,
    pub entries: Vec<Vec<BigRational>>,
}

impl PairingMatrix {
    pub fn is_square(&self) -> bool {
        self.rows.len() == self.cols.len()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows.len()).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }
}

/// Largest number of entries [`pairing_matrix`] will build.
pub const MAX_PAIRING_ENTRIES: usize = 20_000_000;

pub fn pairing_matrix(n: usize, k: usize) -> Result<PairingMatrix> {
    if n < 3 || k > n - 3 {
        return Err(Error::DimensionOutOfRange(format!("k = {k} for n = {n}")));
    }
    let rows = enumerate_strata(n, k)?;
    let cols = enumerate_strata(n, n - 3 - k)?;
    if rows.len().saturating_mul(cols.len()) > MAX_PAIRING_ENTRIES {
        return Err(Error::TooLarge(format!(
            "pairing matrix for n = {n}, k = {k} has {} x {} entries",
            rows.len(),
            cols.len()
        )));
    }
    let col_monomials: Vec<CycleMonomial> = cols.iter().map(CycleMonomial::from_stratum).collect();
    let entries = rows
        .par_iter()
        .map(|r| {
            let rm = CycleMonomial::from_stratum(r);
            col_monomials
                .iter()
                .map(|c| evaluate_monomial(&rm.times(c).expect("same n")).value)
                .collect()
        })
        .collect();
    Ok(PairingMatrix {
        n,
        k,
        rows,
        cols,
        entries,
    })
}
