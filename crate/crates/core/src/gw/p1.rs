//! Genus-0 invariants of `P¹` with point insertions, their pairings against
//! boundary strata of `M̄_{0,n}`, and reconstruction of the classes from
//! those pairings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use super::linalg::{dot, solve_ranked};
use super::target::TargetSpace;
use crate::curve::CurveClass;
use crate::error::{Error, Result};
use crate::fraction;
use crate::mbar::{enumerate_strata, Evaluation, PairingMatrix, StratumTree};

/// `⟨pt^a, 1^b⟩_{0,a+b,d}` on `P¹`, as a number on `M̄_{0,a+b}`.
///
/// A nonzero value needs the class to be zero-dimensional, which forces
/// `b = 2 − 2d`; the remaining cases are the classical `∫ pt = 1` and the
/// unique degree-one map through the points.
pub fn vertex_invariant_p1(d: u64, a: usize, b: usize) -> Result<BigRational> {
    if a + b < 3 {
        return Err(Error::Unstable(vec![format!("vertex with {} insertions", a + b)]));
    }
    let hit = matches!((d, a, b), (0, 1, 2)) || (d == 1 && b == 0);
    Ok(if hit { BigRational::one() } else { BigRational::zero() })
}

/// Dimension of the class `I_{0,n}(d)(pt^{⊗n})` on `M̄_{0,n}`.
pub fn class_dimension_p1(d: u64, n: usize) -> i64 {
    TargetSpace::p1()
        .class_dimension(&CurveClass::new(vec![d]), n, &vec![1; n])
        .expect("rank one")
}

/// `deg([s] · I_{0,n}(d)(pt^{⊗n}))` by the splitting axiom: sum over degree
/// distributions on the vertices of `s` and over the two terms `1⊗pt`,
/// `pt⊗1` of the diagonal at every edge.
///
/// The sum factors over the tree, so it is computed bottom-up from the vertex
/// holding leaf 1, keeping for every subtree its value as a polynomial in the
/// degree it absorbs.
pub fn stratum_pairing_p1(d: u64, n: usize, s: &StratumTree) -> Result<Evaluation> {
    if s.n() != n {
        return Err(Error::LengthMismatch(s.n(), n));
    }
    let k = class_dimension_p1(d, n);
    if k < 0 || s.dimension() as i64 + k != n as i64 - 3 {
        return Ok(Evaluation {
            value: BigRational::zero(),
            degree_mismatch: true,
        });
    }
    let g = s.to_graph();
    let nv = g.vertex_count();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (a, b) in g.edge_flags() {
        let (x, y) = (g.flags()[a].vertex, g.flags()[b].vertex);
        adj[x].push(y);
        adj[y].push(x);
    }
    let tree = Tree {
        d: d as usize,
        adj,
        tails: (0..nv)
            .map(|v| g.flags_at(v).iter().filter(|&&f| g.is_tail(f)).count())
            .collect(),
        valence: (0..nv).map(|v| g.valence(v)).collect(),
    };
    let root = g.vertex_index("r").unwrap_or(0);
    let poly = tree.subtree(root, None, false)?;
    Ok(Evaluation {
        value: BigRational::from_integer(poly[d as usize].clone()),
        degree_mismatch: false,
    })
}

struct Tree {
    d: usize,
    adj: Vec<Vec<usize>>,
    tails: Vec<usize>,
    valence: Vec<usize>,
}

impl Tree {
    /// Coefficient `i` is the contribution of the subtree at `v` when it
    /// carries total degree `i`; `parent_pt` says whether the flag of `v`
    /// toward its parent carries the point class.
    fn subtree(&self, v: usize, parent: Option<usize>, parent_pt: bool) -> Result<Vec<BigInt>> {
        let children: Vec<usize> = self.adj[v].iter().copied().filter(|&c| Some(c) != parent).collect();
        // table[j][i]: j point classes on v's side of child edges, degree i below
        let mut table = vec![vec![BigInt::zero(); self.d + 1]; children.len() + 1];
        table[0][0] = BigInt::one();
        for (done, &c) in children.iter().enumerate() {
            let point_here = self.subtree(c, Some(v), false)?;
            let point_there = self.subtree(c, Some(v), true)?;
            let mut next = vec![vec![BigInt::zero(); self.d + 1]; children.len() + 1];
            for j in 0..=done {
                for i in 0..=self.d {
                    if table[j][i].is_zero() {
                        continue;
                    }
                    for e in 0..=self.d - i {
                        if !point_here[e].is_zero() {
                            next[j + 1][i + e] += &table[j][i] * &point_here[e];
                        }
                        if !point_there[e].is_zero() {
                            next[j][i + e] += &table[j][i] * &point_there[e];
                        }
                    }
                }
            }
            table = next;
        }
        let mut out = vec![BigInt::zero(); self.d + 1];
        for (j, row) in table.iter().enumerate() {
            let points = self.tails[v] + usize::from(parent_pt) + j;
            let identities = self.valence[v] - points;
            for dv in 0..=self.d.min(1) {
                if vertex_invariant_p1(dv as u64, points, identities)?.is_zero() {
                    continue;
                }
                for i in 0..=self.d - dv {
                    out[i + dv] += &row[i];
                }
            }
        }
        Ok(out)
    }
}

/// Pairings of a Gromov-Witten class of dimension `class_dim` on `M̄_{0,n}`
/// against every stratum of the complementary dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GWPairingVector {
    pub n: usize,
    pub target: String,
    pub degree: CurveClass,
    pub class_dim: usize,
    /// Strata of dimension `n − 3 − class_dim`, in canonical order.
    pub strata: Vec<StratumTree>,
    pub values: Vec<BigRational>,
}

impl GWPairingVector {
    /// `I_{0,n}(d)(pt^{⊗n})` for `P¹`.
    pub fn p1(d: u64, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::DimensionOutOfRange(format!("n = {n} < 3")));
        }
        let k = class_dimension_p1(d, n);
        if k < 0 || k > n as i64 - 3 {
            return Err(Error::DimensionOutOfRange(format!(
                "class dimension {k} outside [0, {}]",
                n - 3
            )));
        }
        let k = k as usize;
        let strata = enumerate_strata(n, n - 3 - k)?;
        let values = strata
            .par_iter()
            .map(|s| stratum_pairing_p1(d, n, s).map(|e| e.value))
            .collect::<Result<Vec<_>>>()?;
        Ok(GWPairingVector {
            n,
            target: "p1".into(),
            degree: CurveClass::new(vec![d]),
            class_dim: k,
            strata,
            values,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn to_json(&self) -> Value {
        let values: Map<String, Value> = self
            .strata
            .iter()
            .zip(&self.values)
            .map(|(s, v)| (s.key(), Value::String(fraction::to_string(v))))
            .collect();
        json!({
            "n": self.n,
            "target": self.target,
            "degree": self.degree,
            "class_dim": self.class_dim,
            "values": values,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("pairing vector: {what}"));
        let n = v["n"].as_u64().ok_or_else(|| bad("n"))? as usize;
        let class_dim = v["class_dim"].as_u64().ok_or_else(|| bad("class_dim"))? as usize;
        let target = v["target"].as_str().ok_or_else(|| bad("target"))?.to_string();
        let degree: CurveClass = serde_json::from_value(v["degree"].clone()).map_err(|_| bad("degree"))?;
        if n < 3 || class_dim > n - 3 {
            return Err(bad("class_dim out of range"));
        }
        let map = v["values"].as_object().ok_or_else(|| bad("values"))?;
        let strata = enumerate_strata(n, n - 3 - class_dim)?;
        let values = strata
            .iter()
            .map(|s| {
                let text = map
                    .get(&s.key())
                    .and_then(Value::as_str)
                    .ok_or_else(|| bad(&format!("missing {}", s.key())))?;
                fraction::parse(text)
            })
            .collect::<Result<Vec<_>>>()?;
        if map.len() != strata.len() {
            return Err(bad("unexpected strata"));
        }
        Ok(GWPairingVector {
            n,
            target,
            degree,
            class_dim,
            strata,
            values,
        })
    }
}

fn check_shapes(v1: &GWPairingVector, v2: &GWPairingVector, m: &PairingMatrix) -> Result<()> {
    let mismatch = |what: &str| Err(Error::DimensionOutOfRange(what.to_string()));
    if v1.n != m.n || v2.n != m.n {
        return mismatch("n differs between vectors and matrix");
    }
    if v1.class_dim + v2.class_dim != m.n - 3 {
        return mismatch("class dimensions are not complementary");
    }
    if v1.class_dim != m.k || v1.strata != m.cols || v2.strata != m.rows {
        return mismatch("pairing matrix does not match the class dimensions");
    }
    Ok(())
}

/// `deg(Γ₁ · Γ₂)`: writes `Γ₁ = Σ x_j [T_j]` over the row strata of `m` by
/// solving `Mᵀ x = v₁`, then returns `x · v₂`.
pub fn reconstruct_and_cup(v1: &GWPairingVector, v2: &GWPairingVector, m: &PairingMatrix) -> Result<BigRational> {
    let order: Vec<usize> = (0..m.rows.len()).collect();
    reconstruct_and_cup_with_order(v1, v2, m, &order)
}

/// As [`reconstruct_and_cup`], eliminating the unknowns in `order`.
pub fn reconstruct_and_cup_with_order(
    v1: &GWPairingVector,
    v2: &GWPairingVector,
    m: &PairingMatrix,
    order: &[usize],
) -> Result<BigRational> {
    Ok(dot(&reconstruct(v1, v2, m, order)?.coefficients, &v2.values))
}

/// Coefficients of `Γ₁` in the row strata of the pairing matrix, and the rank
/// of that matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    pub coefficients: Vec<BigRational>,
    pub rank: usize,
}

/// The solution `x` of `Mᵀ x = v₁` used by [`reconstruct_and_cup_with_order`].
pub fn reconstruct(
    v1: &GWPairingVector,
    v2: &GWPairingVector,
    m: &PairingMatrix,
    order: &[usize],
) -> Result<Reconstruction> {
    check_shapes(v1, v2, m)?;
    let transposed: Vec<Vec<BigRational>> = (0..m.cols.len())
        .map(|c| m.entries.iter().map(|row| row[c].clone()).collect())
        .collect();
    let (coefficients, rank) = solve_ranked(&transposed, &v1.values, order)?;
    Ok(Reconstruction { coefficients, rank })
}
