//! Top intersections of boundary divisors and ψ-classes on `M̄_{0,n}`.
//!
//! A monomial is evaluated by restricting to one of its divisors
//! `D_S ≅ M̄_{0,S∪{•}} × M̄_{0,Sᶜ∪{•}}`:
//!
//! * a divisor crossing `S` restricts to zero,
//! * a divisor nested on one side becomes a divisor of that factor,
//! * another copy of `D_S` restricts to `−ψ_• ⊗ 1 − 1 ⊗ ψ_•`,
//! * `ψ_i` restricts to `ψ_i` on the factor holding `i`.
//!
//! With only ψ-classes left, `∫ ∏ψ_i^{a_i} = (m − 3)! / ∏ a_i!`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::strata::{fmt_split, normalize_split, parse_split, split_from_mask, Split, StratumTree};
use crate::error::{Error, Result};

/// A product of boundary divisors and ψ-classes on `M̄_{0,n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleMonomial {
    n: usize,
    /// Normalized splits, sorted; repeats allowed.
    divisors: Vec<Split>,
    /// Exponent of `ψ_i` at index `i - 1`.
    psi: Vec<u32>,
}

/// Result of [`evaluate_monomial`]: the integral, and whether the monomial
/// failed the degree check (in which case the value is zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub value: BigRational,
    pub degree_mismatch: bool,
}

impl CycleMonomial {
    pub fn new(n: usize, divisors: Vec<Split>, psi: Vec<u32>) -> Result<Self> {
        if n < 3 {
            return Err(Error::DimensionOutOfRange(format!("n = {n} < 3")));
        }
        if psi.len() != n {
            return Err(Error::LengthMismatch(psi.len(), n));
        }
        let mut divisors = divisors
            .into_iter()
            .map(|d| split_from_mask(n, d))
            .collect::<Result<Vec<_>>>()?;
        divisors.sort_unstable();
        Ok(CycleMonomial { n, divisors, psi })
    }

    pub fn one(n: usize) -> Self {
        CycleMonomial {
            n,
            divisors: Vec::new(),
            psi: vec![0; n],
        }
    }

    /// Product of the edge divisors of a stratum; genus-0 boundary is normal
    /// crossings, so this is the class of the stratum.
    pub fn from_stratum(s: &StratumTree) -> Self {
        let mut divisors = s.splits().to_vec();
        divisors.sort_unstable();
        CycleMonomial {
            n: s.n(),
            divisors,
            psi: vec![0; s.n()],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn divisors(&self) -> &[Split] {
        &self.divisors
    }

    pub fn psi_exponents(&self) -> &[u32] {
        &self.psi
    }

    pub fn degree(&self) -> usize {
        self.divisors.len() + self.psi.iter().map(|&a| a as usize).sum::<usize>()
    }

    pub fn with_divisor(mut self, text: &str) -> Result<Self> {
        let d = parse_split(self.n, text)?;
        self.divisors.push(d);
        self.divisors.sort_unstable();
        Ok(self)
    }

    pub fn with_psi(mut self, point: usize, power: u32) -> Result<Self> {
        if point == 0 || point > self.n {
            return Err(Error::MalformedSubset(format!("ψ index {point} outside 1..{}", self.n)));
        }
        self.psi[point - 1] += power;
        Ok(self)
    }

    pub fn times(&self, other: &CycleMonomial) -> Result<CycleMonomial> {
        if self.n != other.n {
            return Err(Error::LengthMismatch(self.n, other.n));
        }
        let mut divisors = self.divisors.clone();
        divisors.extend_from_slice(&other.divisors);
        divisors.sort_unstable();
        let psi = self.psi.iter().zip(&other.psi).map(|(a, b)| a + b).collect();
        Ok(CycleMonomial {
            n: self.n,
            divisors,
            psi,
        })
    }

    /// Parses a JSON list of factors: `"1,2"` or `["1,2"]` is the divisor
    /// `D_{12}`, `"psi3"` is `ψ_3`.
    pub fn parse_factors(n: usize, text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let items = value
            .as_array()
            .ok_or_else(|| Error::Parse("monomial must be a JSON array".into()))?;
        let mut m = CycleMonomial::one(n);
        for item in items {
            let s = match item {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Array(a) if a.len() == 1 && a[0].is_string() => a[0].as_str().unwrap().to_string(),
                other => return Err(Error::Parse(format!("bad factor {other}"))),
            };
            m = match s.trim().strip_prefix("psi").or_else(|| s.trim().strip_prefix("ψ")) {
                Some(idx) => {
                    let i = idx
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad ψ factor {s}")))?;
                    m.with_psi(i, 1)?
                }
                None => m.with_divisor(&s)?,
            };
        }
        Ok(m)
    }

    /// Applies a permutation of `{1..n}` (`perm[i - 1]` is the image of `i`).
    pub fn relabel(&self, perm: &[usize]) -> CycleMonomial {
        let map = |s: Split| {
            let img = (0..self.n)
                .filter(|i| s >> i & 1 == 1)
                .fold(0u32, |acc, i| acc | 1 << (perm[i] - 1));
            normalize_split(self.n, img)
        };
        let mut divisors: Vec<Split> = self.divisors.iter().map(|&s| map(s)).collect();
        divisors.sort_unstable();
        let mut psi = vec![0; self.n];
        for (i, &a) in self.psi.iter().enumerate() {
            psi[perm[i] - 1] = a;
        }
        CycleMonomial {
            n: self.n,
            divisors,
            psi,
        }
    }
}

impl fmt::Display for CycleMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.divisors.iter().map(|&d| format!("D{}", fmt_split(d))).collect();
        for (i, &a) in self.psi.iter().enumerate() {
            match a {
                0 => {}
                1 => parts.push(format!("ψ{}", i + 1)),
                _ => parts.push(format!("ψ{}^{a}", i + 1)),
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("·"))
        }
    }
}

pub fn evaluate_monomial(m: &CycleMonomial) -> Evaluation {
    if m.degree() != m.n - 3 {
        return Evaluation {
            value: BigRational::zero(),
            degree_mismatch: true,
        };
    }
    let value = CACHE.with(|c| {
        eval(
            m.n,
            m.divisors.clone(),
            m.psi.clone(),
            &mut |_| 0,
            Some(&mut c.borrow_mut()),
        )
    });
    Evaluation {
        value: BigRational::from_integer(value),
        degree_mismatch: false,
    }
}

/// Same value, pivoting on the divisor chosen by `pick` (given the number of
/// divisors left) at every step, with no memoization.
pub fn evaluate_with_pivots(m: &CycleMonomial, pick: &mut dyn FnMut(usize) -> usize) -> Evaluation {
    if m.degree() != m.n - 3 {
        return Evaluation {
            value: BigRational::zero(),
            degree_mismatch: true,
        };
    }
    let value = eval(m.n, m.divisors.clone(), m.psi.clone(), pick, None);
    Evaluation {
        value: BigRational::from_integer(value),
        degree_mismatch: false,
    }
}

type Key = (usize, Vec<Split>, Vec<u32>);

thread_local! {
    static CACHE: RefCell<HashMap<Key, BigInt>> = RefCell::new(HashMap::new());
}

fn multinomial(total: usize, parts: &[u32]) -> BigInt {
    let fact = |k: usize| (1..=k).fold(BigInt::one(), |acc, i| acc * i);
    let denom = parts.iter().fold(BigInt::one(), |acc, &a| acc * fact(a as usize));
    fact(total) / denom
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Integral over `M̄_{0,m}` (points `0..m`) of the product of the given
/// normalized divisors (bit 0 never set) and ψ powers.
fn eval(
    m: usize,
    mut divisors: Vec<Split>,
    psi: Vec<u32>,
    pick: &mut dyn FnMut(usize) -> usize,
    mut cache: Option<&mut HashMap<Key, BigInt>>,
) -> BigInt {
    let degree = divisors.len() + psi.iter().map(|&a| a as usize).sum::<usize>();
    if degree != m - 3 {
        return BigInt::zero();
    }
    if divisors.is_empty() {
        return multinomial(m - 3, &psi);
    }
    divisors.sort_unstable();
    let key = (m, divisors.clone(), psi.clone());
    if let Some(c) = cache.as_deref() {
        if let Some(v) = c.get(&key) {
            return v.clone();
        }
    }
    let value = restrict(m, &divisors, &psi, pick, cache.as_deref_mut());
    if let Some(c) = cache {
        c.insert(key, value.clone());
    }
    value
}

fn restrict(
    m: usize,
    divisors: &[Split],
    psi: &[u32],
    pick: &mut dyn FnMut(usize) -> usize,
    mut cache: Option<&mut HashMap<Key, BigInt>>,
) -> BigInt {
    let full: u32 = if m >= 32 { u32::MAX } else { (1 << m) - 1 };
    let p = pick(divisors.len()).min(divisors.len() - 1);
    let s = divisors[p];
    let sc = full & !s;

    // local coordinates: left factor holds S then •, right holds Sᶜ then •
    let side_index = |side: u32| {
        let mut idx = vec![usize::MAX; m];
        let mut k = 0;
        for (i, slot) in idx.iter_mut().enumerate() {
            if side >> i & 1 == 1 {
                *slot = k;
                k += 1;
            }
        }
        (idx, k)
    };
    let (lidx, lstar) = side_index(s);
    let (ridx, rstar) = side_index(sc);
    let (lm, rm) = (lstar + 1, rstar + 1);
    let local = |t: u32, idx: &[usize], size: usize| {
        let img = (0..m)
            .filter(|i| t >> i & 1 == 1)
            .fold(0u32, |acc, i| acc | 1 << idx[i]);
        normalize_split(size, img)
    };

    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut self_copies = 0usize;
    for (i, &t) in divisors.iter().enumerate() {
        if i == p {
            continue;
        }
        if t == s {
            self_copies += 1;
            continue;
        }
        let tc = full & !t;
        if let Some(a) = [t, tc].into_iter().find(|&a| a & !s == 0) {
            left.push(local(a, &lidx, lm));
        } else if let Some(a) = [t, tc].into_iter().find(|&a| a & !sc == 0) {
            right.push(local(a, &ridx, rm));
        } else {
            return BigInt::zero();
        }
    }
    let mut lpsi = vec![0u32; lm];
    let mut rpsi = vec![0u32; rm];
    for (i, &a) in psi.iter().enumerate() {
        if s >> i & 1 == 1 {
            lpsi[lidx[i]] = a;
        } else {
            rpsi[ridx[i]] = a;
        }
    }
    // −(ψ_• ⊗ 1 + 1 ⊗ ψ_•)^k: only one power of ψ_• on the left has the
    // right degree
    let ldeg = left.len() + lpsi.iter().map(|&a| a as usize).sum::<usize>();
    let Some(j) = (lm - 3).checked_sub(ldeg).filter(|&j| j <= self_copies) else {
        return BigInt::zero();
    };
    lpsi[lstar] += j as u32;
    rpsi[rstar] += (self_copies - j) as u32;
    let lv = eval(lm, left, lpsi, pick, cache.as_deref_mut());
    if lv.is_zero() {
        return lv;
    }
    let rv = eval(rm, right, rpsi, pick, cache);
    let sign = if self_copies.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    sign * binomial(self_copies, j) * lv * rv
}
