//! Exact linear algebra: fraction-free Gauss-Jordan elimination over the
//! integers for consistent, possibly underdetermined systems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Solves `A x = b`. Columns are scanned in `order`; each pivot is the first
/// unused row (in row order) with a nonzero entry. Free variables are set to
/// zero, so different orders may give different solutions of the same system.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational], order: &[usize]) -> Result<Vec<BigRational>> {
    solve_ranked(a, b, order).map(|(x, _)| x)
}

/// As [`solve`], also returning the rank of `A`.
pub fn solve_ranked(a: &[Vec<BigRational>], b: &[BigRational], order: &[usize]) -> Result<(Vec<BigRational>, usize)> {
    let rows = a.len();
    let cols = a.first().map_or(order.len(), Vec::len);
    if b.len() != rows {
        return Err(Error::LengthMismatch(b.len(), rows));
    }
    if order.len() != cols {
        return Err(Error::LengthMismatch(order.len(), cols));
    }
    // clear denominators row by row; the last entry is the right-hand side
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let lcm = row
                .iter()
                .chain(std::iter::once(rhs))
                .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            row.iter()
                .chain(std::iter::once(rhs))
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect()
        })
        .collect();
    for row in &mut m {
        reduce_content(row);
    }

    let mut used = vec![false; rows];
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for &c in order {
        let Some(r) = (0..rows).find(|&r| !used[r] && !m[r][c].is_zero()) else {
            continue;
        };
        used[r] = true;
        pivots.push((r, c));
        let pivot_row = m[r].clone();
        let p = pivot_row[c].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if y.is_zero() {
                    *x *= &p;
                } else {
                    *x = &*x * &p - &f * y;
                }
            }
            reduce_content(row);
        }
    }
    for r in (0..rows).filter(|&r| !used[r]) {
        if !m[r][cols].is_zero() {
            return Err(Error::InconsistentSystem(format!(
                "equation {r} reduces to 0 = {}",
                m[r][cols]
            )));
        }
    }
    let mut x = vec![BigRational::zero(); cols];
    for &(r, c) in &pivots {
        x[c] = BigRational::new(m[r][cols].clone(), m[r][c].clone());
    }
    Ok((x, pivots.len()))
}

fn reduce_content(row: &mut [BigInt]) {
    let g = row
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// Inverse of a small square rational matrix, or `None` if singular.
pub fn invert(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        let pivot = a[c].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != c && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `Σ x_i y_i`.
pub fn dot(x: &[BigRational], y: &[BigRational]) -> BigRational {
    x.iter().zip(y).fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
}

pub fn mat_vec(a: &[Vec<BigRational>], x: &[BigRational]) -> Vec<BigRational> {
    a.iter().map(|row| dot(row, x)).collect()
}

pub fn is_integral(x: &BigRational) -> bool {
    x.denom().abs().is_one()
}
