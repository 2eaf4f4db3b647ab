use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::curve::{CurveClass, DegreeMonoid};
use crate::error::{Error, Result};
use crate::gw::linalg::invert;

/// A smooth projective target with even cohomology, described by its
/// classical cubic form, divisor degrees on curve classes and the Künneth
/// decomposition of its diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSpace {
    pub name: String,
    pub dim: u32,
    /// `(label, complex codimension)`; index 0 is the identity class.
    pub basis: Vec<(String, u32)>,
    /// Nonzero values `∫ γ_a γ_b γ_c` for `a ≤ b ≤ c`.
    pub triple_products: Vec<([usize; 3], i64)>,
    pub divisor_indices: Vec<usize>,
    pub monoid: DegreeMonoid,
    /// `divisor_degrees[i][g]` is `∫_{g} D_i` for divisor `i` (position in
    /// `divisor_indices`) and monoid generator `g`.
    pub divisor_degrees: Vec<Vec<i64>>,
    /// Class of the diagonal as `Σ c · γ_a ⊗ γ_b`.
    pub diagonal: Vec<(usize, usize, i64)>,
    /// Invariants of classes that pass through fewer than three points,
    /// which the associativity recursion cannot reach.
    pub base_invariants: Vec<(CurveClass, i64)>,
}

impl TargetSpace {
    pub fn p1() -> Self {
        TargetSpace {
            name: "p1".into(),
            dim: 1,
            basis: vec![("1".into(), 0), ("pt".into(), 1)],
            triple_products: vec![([0, 0, 1], 1)],
            divisor_indices: vec![1],
            monoid: DegreeMonoid::p1(),
            divisor_degrees: vec![vec![1]],
            diagonal: vec![(0, 1, 1), (1, 0, 1)],
            base_invariants: vec![],
        }
    }

    pub fn p2() -> Self {
        TargetSpace {
            name: "p2".into(),
            dim: 2,
            basis: vec![("1".into(), 0), ("H".into(), 1), ("pt".into(), 2)],
            triple_products: vec![([0, 0, 2], 1), ([0, 1, 1], 1)],
            divisor_indices: vec![1],
            monoid: DegreeMonoid::p2(),
            divisor_degrees: vec![vec![1]],
            diagonal: vec![(0, 2, 1), (1, 1, 1), (2, 0, 1)],
            // one line through two points
            base_invariants: vec![(CurveClass::new(vec![1]), 1)],
        }
    }

    /// `P¹ × P¹`; `H₁`, `H₂` are pullbacks of the point class, so a curve of
    /// bidegree `(d₁, d₂)` has `∫ H_i = d_i`.
    pub fn p1xp1() -> Self {
        TargetSpace {
            name: "p1xp1".into(),
            dim: 2,
            basis: vec![("1".into(), 0), ("H1".into(), 1), ("H2".into(), 1), ("pt".into(), 2)],
            triple_products: vec![([0, 0, 3], 1), ([0, 1, 2], 1)],
            divisor_indices: vec![1, 2],
            monoid: DegreeMonoid::p1xp1(),
            divisor_degrees: vec![vec![1, 0], vec![0, 1]],
            diagonal: vec![(0, 3, 1), (1, 2, 1), (2, 1, 1), (3, 0, 1)],
            // a fibre through one point
            base_invariants: vec![(CurveClass::new(vec![1, 0]), 1), (CurveClass::new(vec![0, 1]), 1)],
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "p1" => Ok(Self::p1()),
            "p2" => Ok(Self::p2()),
            "p1xp1" | "p1p1" | "p1*p1" => Ok(Self::p1xp1()),
            other => Err(Error::UnsupportedTarget(other.to_string())),
        }
    }

    pub fn triple(&self, a: usize, b: usize, c: usize) -> i64 {
        let mut k = [a, b, c];
        k.sort_unstable();
        self.triple_products
            .iter()
            .find(|(t, _)| *t == k)
            .map_or(0, |(_, v)| *v)
    }

    /// `g_{ab} = ∫ γ_a γ_b`.
    pub fn poincare_pairing(&self) -> Vec<Vec<BigRational>> {
        let r = self.basis.len();
        (0..r)
            .map(|a| {
                (0..r)
                    .map(|b| BigRational::from_integer(self.triple(0, a, b).into()))
                    .collect()
            })
            .collect()
    }

    pub fn inverse_pairing(&self) -> Result<Vec<Vec<BigRational>>> {
        invert(&self.poincare_pairing())
            .ok_or_else(|| Error::UnsupportedTarget(format!("{}: degenerate Poincaré pairing", self.name)))
    }

    /// Checks nondegeneracy of the pairing and that the diagonal acts as the
    /// identity: `Σ c ∫(γ γ_a) γ_b = γ` for every basis class `γ`.
    pub fn check(&self) -> Result<()> {
        self.inverse_pairing()?;
        let g = self.poincare_pairing();
        let r = self.basis.len();
        for e in 0..r {
            let mut image = vec![BigRational::zero(); r];
            for &(a, b, c) in &self.diagonal {
                image[b] += &g[e][a] * BigRational::from_integer(c.into());
            }
            let expect: Vec<BigRational> = (0..r)
                .map(|i| {
                    if i == e {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect();
            if image != expect {
                return Err(Error::UnsupportedTarget(format!(
                    "{}: diagonal fails on {}",
                    self.name, self.basis[e].0
                )));
            }
        }
        Ok(())
    }

    /// `∫_β D_i` for the `i`-th divisor.
    pub fn divisor_degree(&self, i: usize, beta: &CurveClass) -> i64 {
        self.divisor_degrees[i]
            .iter()
            .zip(beta.coords())
            .map(|(a, &b)| a * b as i64)
            .sum()
    }

    /// Dimension of the class `I_{0,n}(β)(γ₁ ⊗ … ⊗ γ_n)` as a cycle on
    /// `M̄_{0,n}`: `c₁(β) + dim V + n − 3 − Σ codim γ_i`.
    pub fn class_dimension(&self, beta: &CurveClass, n: usize, insertion_codims: &[u32]) -> Result<i64> {
        let c1 = self.monoid.c1_pairing(beta)? as i64;
        let codims: i64 = insertion_codims.iter().map(|&c| c as i64).sum();
        Ok(c1 + self.dim as i64 + n as i64 - 3 - codims)
    }
}
