//! Genus-0 curve counts on surfaces from the associativity (WDVV) equations.
//!
//! For a surface whose cohomology is spanned by `1`, divisors `D_k` and the
//! point class, write `n_β = c₁(β) − 1` for the number of point conditions.
//! Taking the associativity equation with insertions `(D_i, D_j, pt, pt)` and
//! reading off the coefficient of `e^{β·t} y^{n_β − 3}` gives, for
//! `D_i·D_j ≠ 0`,
//!
//! ```text
//! (D_i·D_j) N_β = Σ_{β₁+β₂=β} N_{β₁} N_{β₂} (β₁·β₂) (β₁·D_i)
//!                 [ (β₂·D_j) C(N; n₁−1, n₂−1) − (β₁·D_j) C(N; n₁, n₂−2) ]
//! ```
//!
//! with `N = n_β − 3`, sums over nonzero effective classes, and `C` the
//! multinomial coefficient (zero when an entry is negative). Nothing here
//! touches the moduli-space intersection code.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::target::TargetSpace;
use crate::curve::CurveClass;
use crate::error::{Error, Result};

/// Recursion state for one target.
pub struct WdvvSolver {
    target: TargetSpace,
    /// `(D_k·D_l)^{-1}` restricted to divisors, used for `β₁·β₂`.
    inverse_divisor_pairing: Vec<Vec<BigRational>>,
    divisor_pair: (usize, usize),
    memo: HashMap<CurveClass, BigRational>,
}

impl WdvvSolver {
    pub fn new(target: &TargetSpace) -> Result<Self> {
        Self::with_divisor_pair(target, None)
    }

    /// Uses the associativity equation for the given pair of divisor
    /// positions instead of the first pair with nonzero intersection.
    pub fn with_divisor_pair(target: &TargetSpace, pair: Option<(usize, usize)>) -> Result<Self> {
        let unsupported = |why: &str| Err(Error::UnsupportedTarget(format!("{}: {why}", target.name)));
        if target.dim != 2 {
            return unsupported("associativity recursion needs a surface");
        }
        target.check()?;
        let codims: Vec<u32> = target.basis.iter().map(|(_, c)| *c).collect();
        if codims[0] != 0 {
            return unsupported("basis must start with the identity");
        }
        let points: Vec<usize> = (0..codims.len()).filter(|&i| codims[i] == 2).collect();
        let divisors: Vec<usize> = (0..codims.len()).filter(|&i| codims[i] == 1).collect();
        if points.len() != 1 || divisors != target.divisor_indices || 2 + divisors.len() != codims.len() {
            return unsupported("cohomology is not generated by divisors");
        }
        let ginv = target.inverse_pairing()?;
        let inverse_divisor_pairing: Vec<Vec<BigRational>> = divisors
            .iter()
            .map(|&k| divisors.iter().map(|&l| ginv[k][l].clone()).collect())
            .collect();
        let dd = |i: usize, j: usize| target.triple(0, divisors[i], divisors[j]);
        let divisor_pair = match pair {
            Some((i, j)) if dd(i, j) != 0 => (i, j),
            Some(_) => return unsupported("chosen divisors do not meet"),
            None => match (0..divisors.len())
                .flat_map(|i| (0..divisors.len()).map(move |j| (i, j)))
                .find(|&(i, j)| dd(i, j) != 0)
            {
                Some(p) => p,
                None => return unsupported("no pair of meeting divisors"),
            },
        };
        Ok(WdvvSolver {
            target: target.clone(),
            inverse_divisor_pairing,
            divisor_pair,
            memo: HashMap::new(),
        })
    }

    fn point_conditions(&self, beta: &CurveClass) -> i64 {
        self.target.monoid.c1_pairing(beta).unwrap() as i64 - 1
    }

    fn dot(&self, a: &CurveClass, b: &CurveClass) -> BigRational {
        let k = self.target.divisor_indices.len();
        let da: Vec<i64> = (0..k).map(|i| self.target.divisor_degree(i, a)).collect();
        let db: Vec<i64> = (0..k).map(|i| self.target.divisor_degree(i, b)).collect();
        let mut acc = BigRational::zero();
        for i in 0..k {
            for j in 0..k {
                acc += &self.inverse_divisor_pairing[i][j] * BigRational::from_integer((da[i] * db[j]).into());
            }
        }
        acc
    }

    /// Number of rational curves of class `beta` through `c₁(β) − 1` general
    /// points.
    pub fn number(&mut self, beta: &CurveClass) -> Result<BigRational> {
        self.target.monoid.check(beta)?;
        if beta.is_zero() {
            return Err(Error::DimensionOutOfRange("curve class must be nonzero".into()));
        }
        Ok(self.count(beta))
    }

    fn count(&mut self, beta: &CurveClass) -> BigRational {
        if let Some(v) = self.memo.get(beta) {
            return v.clone();
        }
        let nb = self.point_conditions(beta);
        let value = if nb < 3 {
            let base = self
                .target
                .base_invariants
                .iter()
                .find(|(c, _)| c == beta)
                .map_or(0, |(_, v)| *v);
            BigRational::from_integer(base.into())
        } else {
            self.recurse(beta, nb)
        };
        self.memo.insert(beta.clone(), value.clone());
        value
    }

    fn recurse(&mut self, beta: &CurveClass, nb: i64) -> BigRational {
        let (i, j) = self.divisor_pair;
        let divs = &self.target.divisor_indices;
        let dij = self.target.triple(0, divs[i], divs[j]);
        let total = (nb - 3) as usize;
        let mut acc = BigRational::zero();
        for (b1, b2) in beta.decompositions() {
            if b1.is_zero() || b2.is_zero() {
                continue;
            }
            let (n1, n2) = (self.point_conditions(&b1), self.point_conditions(&b2));
            let inter = self.dot(&b1, &b2);
            if inter.is_zero() {
                continue;
            }
            let b1i = self.target.divisor_degree(i, &b1);
            if b1i == 0 {
                continue;
            }
            let b1j = self.target.divisor_degree(j, &b1);
            let b2j = self.target.divisor_degree(j, &b2);
            let bracket = BigInt::from(b2j) * multinomial(total, n1 - 1, n2 - 1)
                - BigInt::from(b1j) * multinomial(total, n1, n2 - 2);
            if bracket.is_zero() {
                continue;
            }
            let prod = self.count(&b1) * self.count(&b2);
            acc += prod * inter * BigRational::from_integer(BigInt::from(b1i) * bracket);
        }
        acc / BigRational::from_integer(dij.into())
    }
}

/// `total! / (a! b!)` when `a + b = total` and both are nonnegative, else 0.
fn multinomial(total: usize, a: i64, b: i64) -> BigInt {
    if a < 0 || b < 0 || (a + b) as usize != total {
        return BigInt::zero();
    }
    let fact = |k: usize| (1..=k).fold(BigInt::one(), |acc, i| acc * i);
    fact(total) / (fact(a as usize) * fact(b as usize))
}

/// Curve count `N_β` of a divisor-generated surface.
pub fn wdvv_number(target: &TargetSpace, beta: &CurveClass) -> Result<BigRational> {
    WdvvSolver::new(target)?.number(beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn plane_counts() {
        let t = TargetSpace::p2();
        let mut s = WdvvSolver::new(&t).unwrap();
        let expected = [1, 1, 12, 620, 87304];
        for (d, &e) in expected.iter().enumerate() {
            assert_eq!(
                s.number(&CurveClass::new(vec![d as u64 + 1])).unwrap(),
                q(e),
                "degree {}",
                d + 1
            );
        }
    }

    #[test]
    fn quadric_counts() {
        let t = TargetSpace::p1xp1();
        let n = |a, b| wdvv_number(&t, &CurveClass::new(vec![a, b])).unwrap();
        assert_eq!(n(1, 1), q(1));
        assert_eq!(n(2, 1), q(1));
        assert_eq!(n(2, 2), q(12));
        assert_eq!(n(3, 1), q(1));
        assert_eq!(n(2, 0), q(0));
        assert_eq!(n(3, 3), q(3510));
    }

    #[test]
    fn divisor_pair_choice_is_irrelevant() {
        let t = TargetSpace::p1xp1();
        let mut a = WdvvSolver::with_divisor_pair(&t, Some((0, 1))).unwrap();
        let mut b = WdvvSolver::with_divisor_pair(&t, Some((1, 0))).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                if x + y == 0 {
                    continue;
                }
                let beta = CurveClass::new(vec![x, y]);
                assert_eq!(a.number(&beta).unwrap(), b.number(&beta).unwrap());
            }
        }
        assert!(WdvvSolver::with_divisor_pair(&t, Some((0, 0))).is_err());
    }

    #[test]
    fn rejects_unsupported() {
        assert!(matches!(
            wdvv_number(&TargetSpace::p1(), &CurveClass::new(vec![1])),
            Err(Error::UnsupportedTarget(_))
        ));
        assert!(wdvv_number(&TargetSpace::p2(), &CurveClass::new(vec![0])).is_err());
    }
}
