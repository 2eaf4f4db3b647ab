//! Effective curve classes as free commutative monoids `ℕ^r`.

use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The monoid of effective curve classes of a target, with the value of
/// `∫ c₁(T)` on each generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMonoid")]
pub struct DegreeMonoid {
    rank: usize,
    #[serde(rename = "generators")]
    generator_names: Vec<String>,
    #[serde(rename = "c1")]
    c1_pairings: Vec<u64>,
}

#[derive(Deserialize)]
struct RawMonoid {
    rank: Option<usize>,
    generators: Vec<String>,
    c1: Vec<u64>,
}

impl TryFrom<RawMonoid> for DegreeMonoid {
    type Error = Error;

    fn try_from(raw: RawMonoid) -> Result<Self> {
        if let Some(r) = raw.rank.filter(|&r| r != raw.generators.len()) {
            return Err(Error::RankMismatch {
                expected: r,
                got: raw.generators.len(),
            });
        }
        DegreeMonoid::new(raw.generators, raw.c1)
    }
}

impl DegreeMonoid {
    pub fn new(generator_names: Vec<String>, c1_pairings: Vec<u64>) -> Result<Self> {
        let rank = generator_names.len();
        if rank == 0 {
            return Err(Error::InvalidMonoid("rank must be at least 1".into()));
        }
        if c1_pairings.len() != rank {
            return Err(Error::InvalidMonoid(format!(
                "{} generators but {} c1 values",
                rank,
                c1_pairings.len()
            )));
        }
        Ok(DegreeMonoid {
            rank,
            generator_names,
            c1_pairings,
        })
    }

    /// `H₂(P¹)⁺ = ℕ`, generated by the class of a line with `c₁ = 2`.
    pub fn p1() -> Self {
        DegreeMonoid::new(vec!["line".into()], vec![2]).unwrap()
    }

    /// `H₂(P²)⁺ = ℕ` with `c₁(line) = 3`.
    pub fn p2() -> Self {
        DegreeMonoid::new(vec!["line".into()], vec![3]).unwrap()
    }

    /// `H₂(P¹×P¹)⁺ = ℕ²`; coordinate `i` is the degree of the projection to
    /// factor `i`.
    pub fn p1xp1() -> Self {
        Self::product(&Self::p1(), &Self::p1())
    }

    /// Monoid of the product of two targets; generators are the disjoint union.
    pub fn product(a: &DegreeMonoid, b: &DegreeMonoid) -> Self {
        let names = a
            .generator_names
            .iter()
            .map(|n| format!("{n}.0"))
            .chain(b.generator_names.iter().map(|n| format!("{n}.1")))
            .collect();
        let c1 = a.c1_pairings.iter().chain(&b.c1_pairings).copied().collect();
        DegreeMonoid::new(names, c1).unwrap()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn c1_values(&self) -> &[u64] {
        &self.c1_pairings
    }

    pub fn zero(&self) -> CurveClass {
        CurveClass::zero(self.rank)
    }

    pub fn check(&self, beta: &CurveClass) -> Result<()> {
        if beta.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: beta.rank(),
            });
        }
        Ok(())
    }

    /// Linear extension of the generator values of `c₁`.
    pub fn c1_pairing(&self, beta: &CurveClass) -> Result<u64> {
        self.check(beta)?;
        Ok(beta.coords.iter().zip(&self.c1_pairings).map(|(b, c)| b * c).sum())
    }
}

/// An effective curve class, a tuple of naturals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CurveClass {
    coords: Vec<u64>,
}

impl CurveClass {
    pub fn new(coords: Vec<u64>) -> Self {
        CurveClass { coords }
    }

    pub fn zero(rank: usize) -> Self {
        CurveClass { coords: vec![0; rank] }
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn total(&self) -> u64 {
        self.coords.iter().sum()
    }

    pub fn checked_add(&self, other: &CurveClass) -> Result<CurveClass> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                got: other.rank(),
            });
        }
        Ok(self + other)
    }

    /// `self - other` if the result is effective.
    pub fn checked_sub(&self, other: &CurveClass) -> Option<CurveClass> {
        if self.rank() != other.rank() {
            return None;
        }
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(CurveClass::new)
    }

    /// All ordered pairs `(β₁, β₂)` of effective classes with `β₁ + β₂ = β`,
    /// lexicographic in `β₁`.
    pub fn decompositions(&self) -> Vec<(CurveClass, CurveClass)> {
        let mut out = Vec::new();
        let mut first = vec![0u64; self.rank()];
        loop {
            let second = self.coords.iter().zip(&first).map(|(b, a)| b - a).collect();
            out.push((CurveClass::new(first.clone()), CurveClass::new(second)));
            // odometer, last coordinate fastest
            let mut i = self.rank();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if first[i] < self.coords[i] {
                    first[i] += 1;
                    for f in first.iter_mut().skip(i + 1) {
                        *f = 0;
                    }
                    break;
                }
            }
        }
    }
}

impl Add for &CurveClass {
    type Output = CurveClass;

    fn add(self, rhs: &CurveClass) -> CurveClass {
        assert_eq!(self.rank(), rhs.rank(), "adding curve classes of different rank");
        CurveClass::new(self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// An additive map between curve-class monoids given by a nonnegative
/// integer matrix of shape `target.rank × source.rank`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMap")]
pub struct MonoidMap {
    source: DegreeMonoid,
    target: DegreeMonoid,
    matrix: Vec<Vec<u64>>,
}

#[derive(Deserialize)]
struct RawMap {
    source: DegreeMonoid,
    target: DegreeMonoid,
    matrix: Vec<Vec<u64>>,
}

impl TryFrom<RawMap> for MonoidMap {
    type Error = Error;

    fn try_from(raw: RawMap) -> Result<Self> {
        MonoidMap::new(raw.source, raw.target, raw.matrix)
    }
}

impl MonoidMap {
    pub fn new(source: DegreeMonoid, target: DegreeMonoid, matrix: Vec<Vec<u64>>) -> Result<Self> {
        if matrix.len() != target.rank() {
            return Err(Error::RankMismatch {
                expected: target.rank(),
                got: matrix.len(),
            });
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != source.rank()) {
            return Err(Error::RankMismatch {
                expected: source.rank(),
                got: row.len(),
            });
        }
        Ok(MonoidMap { source, target, matrix })
    }

    pub fn identity(monoid: &DegreeMonoid) -> Self {
        let r = monoid.rank();
        let matrix = (0..r).map(|i| (0..r).map(|j| u64::from(i == j)).collect()).collect();
        MonoidMap {
            source: monoid.clone(),
            target: monoid.clone(),
            matrix,
        }
    }

    /// The map to the rank-1 monoid sending everything to zero. Used to forget
    /// a marking entirely.
    pub fn zero(monoid: &DegreeMonoid) -> Self {
        let target = DegreeMonoid::new(vec!["0".into()], vec![0]).unwrap();
        MonoidMap {
            source: monoid.clone(),
            target,
            matrix: vec![vec![0; monoid.rank()]],
        }
    }

    /// Projection from `product(a, b)` onto the factor `a` (`which = 0`) or `b`.
    pub fn projection(a: &DegreeMonoid, b: &DegreeMonoid, which: usize) -> Self {
        let source = DegreeMonoid::product(a, b);
        let (target, offset) = if which == 0 {
            (a.clone(), 0)
        } else {
            (b.clone(), a.rank())
        };
        let matrix = (0..target.rank())
            .map(|i| (0..source.rank()).map(|j| u64::from(j == i + offset)).collect())
            .collect();
        MonoidMap { source, target, matrix }
    }

    pub fn source(&self) -> &DegreeMonoid {
        &self.source
    }

    pub fn target(&self) -> &DegreeMonoid {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    pub fn pushforward(&self, beta: &CurveClass) -> Result<CurveClass> {
        self.source.check(beta)?;
        Ok(CurveClass::new(
            self.matrix
                .iter()
                .map(|row| row.iter().zip(beta.coords()).map(|(m, b)| m * b).sum())
                .collect(),
        ))
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &MonoidMap) -> Result<MonoidMap> {
        if first.target.rank() != self.source.rank() {
            return Err(Error::RankMismatch {
                expected: self.source.rank(),
                got: first.target.rank(),
            });
        }
        let matrix = self
            .matrix
            .iter()
            .map(|row| {
                (0..first.source.rank())
                    .map(|j| row.iter().enumerate().map(|(k, m)| m * first.matrix[k][j]).sum())
                    .collect()
            })
            .collect();
        Ok(MonoidMap {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix,
        })
    }
}
