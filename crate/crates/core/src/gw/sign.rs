use crate::error::{Error, Result};

/// `(−1)^s` with `s = Σ_{i>j} deg γ_i · deg ε_j`, the sign relating
/// `⊗(γ_i ⊗ ε_i)` to `(⊗γ_i) ⊗ (⊗ε_i)`.
pub fn kunneth_sign(gamma_degs: &[i64], eps_degs: &[i64]) -> Result<i32> {
    if gamma_degs.len() != eps_degs.len() {
        return Err(Error::LengthMismatch(gamma_degs.len(), eps_degs.len()));
    }
    // only parities matter: count odd ε seen so far against each odd γ
    let mut odd_eps = 0u64;
    let mut s = 0u64;
    for (g, e) in gamma_degs.iter().zip(eps_degs) {
        if g.rem_euclid(2) == 1 {
            s += odd_eps;
        }
        if e.rem_euclid(2) == 1 {
            odd_eps += 1;
        }
    }
    Ok(if s.is_multiple_of(2) { 1 } else { -1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(kunneth_sign(&[2, 4, 0], &[2, 2, 6]).unwrap(), 1);
        assert_eq!(kunneth_sign(&[3], &[5]).unwrap(), 1);
        assert_eq!(kunneth_sign(&[1, 1], &[1, 1]).unwrap(), -1);
        assert_eq!(kunneth_sign(&[-1, 1], &[1, 0]).unwrap(), -1);
        assert!(kunneth_sign(&[1], &[]).is_err());
    }
}
