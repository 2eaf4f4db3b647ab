//! End-to-end checks: the product formula for `P¹ × P¹` bidegrees, and the
//! property suites over random graphs and strata.

use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::curve::{CurveClass, DegreeMonoid, MonoidMap};
use crate::error::{Error, Result};
use crate::fraction;
use crate::functors::{pushforward_stabilize, pushforward_stabilize_by, splitting_pullback, EdgeContraction};
use crate::graph::{canonicalize, Canonical, MarkedGraph};
use crate::gw::{
    class_dimension_p1, kunneth_sign, reconstruct, reconstruct_and_cup_with_order, wdvv_number, GWPairingVector,
    TargetSpace,
};
use crate::mbar::{
    evaluate_monomial, evaluate_with_pivots, pairing_matrix, CycleMonomial, PairingMatrix, DEFAULT_CAP_N,
};
use crate::sample::{random_stable_graph, SamplerConfig};

pub const DEFAULT_BIDEGREES: [(u32, u32); 4] = [(1, 1), (2, 1), (1, 2), (2, 2)];

/// Number of marked points for bidegree `(d₁, d₂)` in genus 0.
pub fn point_count(d1: u32, d2: u32) -> usize {
    2 * (d1 + d2) as usize - 1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrataCounts {
    /// Strata paired against `Γ₁` (columns of the pairing matrix).
    pub gamma1: usize,
    /// Strata paired against `Γ₂` (rows of the pairing matrix).
    pub gamma2: usize,
    pub matrix_rank: usize,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub bidegree: (u32, u32),
    pub n: usize,
    /// Associativity-recursion count on `P¹ × P¹`.
    pub lhs: BigRational,
    /// `deg(Γ₁ · Γ₂)` from the strata reconstruction.
    pub rhs: BigRational,
    pub equal: bool,
    pub class_dims: (usize, usize),
    pub strata: StrataCounts,
    pub timings: Vec<(&'static str, Duration)>,
}

impl VerificationReport {
    /// Timings vary between runs, so they are only included on request.
    pub fn to_json(&self, with_timings: bool) -> Value {
        let mut v = json!({
            "bidegree": [self.bidegree.0, self.bidegree.1],
            "n": self.n,
            "lhs": fraction::to_string(&self.lhs),
            "rhs": fraction::to_string(&self.rhs),
            "equal": self.equal,
            "class_dims": [self.class_dims.0, self.class_dims.1],
            "strata": self.strata,
        });
        if with_timings {
            let t: serde_json::Map<String, Value> = self
                .timings
                .iter()
                .map(|(k, d)| (k.to_string(), json!(d.as_secs_f64() * 1e3)))
                .collect();
            v["timings_ms"] = Value::Object(t);
        }
        v
    }
}

/// The strata-side inputs for one bidegree.
#[derive(Debug, Clone)]
pub struct ProductInputs {
    pub n: usize,
    pub gamma1: GWPairingVector,
    pub gamma2: GWPairingVector,
    pub matrix: PairingMatrix,
}

fn check_bidegree(d1: u32, d2: u32, cap_n: usize) -> Result<usize> {
    if d1 == 0 || d2 == 0 {
        return Err(Error::DegenerateBidegree(d1, d2));
    }
    let n = point_count(d1, d2);
    if n > cap_n {
        return Err(Error::CapExceeded { n, cap: cap_n });
    }
    Ok(n)
}

fn class_dim(d: u32, n: usize) -> Result<usize> {
    let k = class_dimension_p1(d as u64, n);
    if k < 0 || k > n as i64 - 3 {
        return Err(Error::DimensionOutOfRange(format!(
            "class dimension {k} for degree {d}, n = {n}"
        )));
    }
    Ok(k as usize)
}

pub fn product_inputs(d1: u32, d2: u32, cap_n: usize) -> Result<ProductInputs> {
    let n = check_bidegree(d1, d2, cap_n)?;
    let matrix = pairing_matrix(n, class_dim(d1, n)?)?;
    let gamma1 = GWPairingVector::p1(d1 as u64, n)?;
    let gamma2 = GWPairingVector::p1(d2 as u64, n)?;
    Ok(ProductInputs {
        n,
        gamma1,
        gamma2,
        matrix,
    })
}

/// Compares `N_{(d₁,d₂)}(P¹×P¹)` from the associativity recursion with the
/// degree of `I(d₁) ∪ I(d₂)` on `M̄_{0,n}`.
pub fn verify_product(d1: u32, d2: u32, cap_n: usize) -> Result<VerificationReport> {
    let n = check_bidegree(d1, d2, cap_n)?;
    let mut timings = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |name: &'static str, timings: &mut Vec<(&'static str, Duration)>| {
        timings.push((name, clock.elapsed()));
        clock = Instant::now();
    };

    let lhs = wdvv_number(&TargetSpace::p1xp1(), &CurveClass::new(vec![d1 as u64, d2 as u64]))?;
    lap("wdvv", &mut timings);
    // the matrix is the size-limited stage, so build it first
    let matrix = pairing_matrix(n, class_dim(d1, n)?)?;
    lap("pairing_matrix", &mut timings);
    let gamma1 = GWPairingVector::p1(d1 as u64, n)?;
    let gamma2 = GWPairingVector::p1(d2 as u64, n)?;
    lap("gw_pairings", &mut timings);
    let order: Vec<usize> = (0..matrix.rows.len()).collect();
    let solved = reconstruct(&gamma1, &gamma2, &matrix, &order)?;
    // every insertion is the even class pt ⊗ pt, so the sign is +1
    let sign = kunneth_sign(&vec![2; n], &vec![2; n])?;
    let rhs = crate::gw::linalg::dot(&solved.coefficients, &gamma2.values) * fraction::integer(sign as i64);
    lap("solve", &mut timings);

    Ok(VerificationReport {
        bidegree: (d1, d2),
        n,
        equal: lhs == rhs,
        lhs,
        rhs,
        class_dims: (gamma1.class_dim, gamma2.class_dim),
        strata: StrataCounts {
            gamma1: gamma1.strata.len(),
            gamma2: gamma2.strata.len(),
            matrix_rank: solved.rank,
        },
        timings,
    })
}

/// Values of `reconstruct_and_cup` under the identity elimination order, its
/// reverse, and `extra` seeded shuffles.
pub fn cup_under_orders(inputs: &ProductInputs, extra: usize, seed: u64) -> Result<Vec<BigRational>> {
    let rows = inputs.matrix.rows.len();
    let mut orders: Vec<Vec<usize>> = vec![(0..rows).collect(), (0..rows).rev().collect()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..extra {
        let mut o: Vec<usize> = (0..rows).collect();
        o.shuffle(&mut rng);
        orders.push(o);
    }
    orders
        .iter()
        .map(|o| reconstruct_and_cup_with_order(&inputs.gamma1, &inputs.gamma2, &inputs.matrix, o))
        .collect()
}

// ---------------------------------------------------------------------------
// graph laws

fn canonical_outcome(r: Result<(MarkedGraph, crate::functors::StabilizingMorphism)>) -> Result<Canonical> {
    r.map(|(g, _)| canonicalize(&g))
}

fn same_outcome(a: &Result<Canonical>, b: &Result<Canonical>) -> bool {
    match (a, b) {
        (Ok(x), Ok(y)) => x == y,
        (Err(x), Err(y)) => std::mem::discriminant(x) == std::mem::discriminant(y),
        _ => false,
    }
}

/// Stabilizing along `m₁` then `m₂` agrees with stabilizing along `m₂ ∘ m₁`.
pub fn check_functoriality(g: &MarkedGraph, m1: &MonoidMap, m2: &MonoidMap) -> std::result::Result<(), String> {
    let composite = m2.compose(m1).map_err(|e| e.to_string())?;
    let stepwise = pushforward_stabilize(g, m1).and_then(|(h, _)| pushforward_stabilize(&h, m2));
    let direct = pushforward_stabilize(g, &composite);
    let (a, b) = (canonical_outcome(stepwise), canonical_outcome(direct));
    if same_outcome(&a, &b) {
        Ok(())
    } else {
        Err(format!("stepwise {a:?} vs direct {b:?}"))
    }
}

/// Contracting unstable vertices in a random order gives the same graph as
/// the default order.
pub fn check_confluence<R: Rng>(g: &MarkedGraph, map: &MonoidMap, rng: &mut R) -> std::result::Result<(), String> {
    let reference = canonical_outcome(pushforward_stabilize(g, map));
    let shuffled = canonical_outcome(pushforward_stabilize_by(g, map, |ids| rng.gen_range(0..ids.len())));
    if same_outcome(&reference, &shuffled) {
        Ok(())
    } else {
        Err(format!("{reference:?} vs {shuffled:?}"))
    }
}

/// For every non-loop edge: each splitting of the contracted graph contracts
/// back to it, and `g` itself is among the splittings.
pub fn check_adjointness(g: &MarkedGraph) -> std::result::Result<usize, String> {
    let mut checked = 0;
    for e in g.graph().edges() {
        let Ok(contraction) = EdgeContraction::new(g.graph().clone(), e.clone()) else {
            continue;
        };
        let contracted = g.contract_edge(&e).map_err(|err| err.to_string())?;
        let pulls = splitting_pullback(&contraction, &contracted).map_err(|err| err.to_string())?;
        for p in &pulls {
            if p.contract_edge(&e).map_err(|err| err.to_string())? != contracted {
                return Err(format!("splitting along {e} does not contract back"));
            }
        }
        if !pulls.contains(g) {
            return Err(format!("original marking missing from splittings along {e}"));
        }
        checked += 1;
    }
    Ok(checked)
}

// ---------------------------------------------------------------------------
// suite

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    pub cap_n: usize,
    pub graph_count: usize,
    pub bidegrees: Vec<(u32, u32)>,
    /// Shuffled elimination orders on top of the identity and its reverse.
    pub extra_orders: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 20240521,
            cap_n: DEFAULT_CAP_N,
            graph_count: 1000,
            bidegrees: DEFAULT_BIDEGREES.to_vec(),
            extra_orders: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }
}

fn record(checks: &mut Vec<CheckResult>, name: impl Into<String>, outcome: std::result::Result<String, String>) {
    let (status, detail) = match outcome {
        Ok(d) => (Status::Pass, d),
        Err(d) => (Status::Fail, d),
    };
    checks.push(CheckResult {
        name: name.into(),
        status,
        detail,
    });
}

fn graph_laws(cfg: &SuiteConfig, checks: &mut Vec<CheckResult>) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let p1 = DegreeMonoid::p1();
    let sampler = SamplerConfig::default();
    let proj = [MonoidMap::projection(&p1, &p1, 0), MonoidMap::projection(&p1, &p1, 1)];
    let forget = MonoidMap::zero(&p1);
    let identity = MonoidMap::identity(&sampler.monoid);

    let mut failures: [Vec<String>; 3] = Default::default();
    let mut edges = 0;
    for i in 0..cfg.graph_count {
        let g = random_stable_graph(&mut rng, &sampler);
        let p = &proj[i % 2];
        if let Err(e) = check_functoriality(&g, p, &forget).and_then(|_| check_functoriality(&g, &identity, p)) {
            failures[0].push(format!("graph {i}: {e}"));
        }
        let map = if rng.gen_bool(0.5) {
            p.clone()
        } else {
            MonoidMap::zero(&sampler.monoid)
        };
        if let Err(e) = check_confluence(&g, &map, &mut rng) {
            failures[1].push(format!("graph {i}: {e}"));
        }
        match check_adjointness(&g) {
            Ok(k) => edges += k,
            Err(e) => failures[2].push(format!("graph {i}: {e}")),
        }
    }
    let summary = |f: &Vec<String>, what: String| {
        if f.is_empty() {
            Ok(what)
        } else {
            Err(format!("{} failures, first: {}", f.len(), f[0]))
        }
    };
    let count = cfg.graph_count;
    record(
        checks,
        "functoriality",
        summary(&failures[0], format!("{count} graphs")),
    );
    record(checks, "confluence", summary(&failures[1], format!("{count} graphs")));
    record(
        checks,
        "adjointness",
        summary(&failures[2], format!("{count} graphs, {edges} edges")),
    );
}

fn mbar_laws(cfg: &SuiteConfig, checks: &mut Vec<CheckResult>) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6d62);
    let n = 6.min(cfg.cap_n.max(4));
    let splits = crate::mbar::all_splits(n);
    let mut bad = Vec::new();
    for _ in 0..200 {
        let mut divisors = Vec::new();
        let mut psi = vec![0u32; n];
        for _ in 0..n - 3 {
            if rng.gen_bool(0.6) {
                divisors.push(*splits.choose(&mut rng).unwrap());
            } else {
                psi[rng.gen_range(0..n)] += 1;
            }
        }
        let m = CycleMonomial::new(n, divisors, psi).expect("valid splits");
        let value = evaluate_monomial(&m).value;
        let mut perm: Vec<usize> = (1..=n).collect();
        perm.shuffle(&mut rng);
        if evaluate_monomial(&m.relabel(&perm)).value != value {
            bad.push(format!("relabel {m}"));
        }
        if evaluate_with_pivots(&m, &mut |k| rng.gen_range(0..k)).value != value {
            bad.push(format!("pivot {m}"));
        }
    }
    record(
        checks,
        "mbar_equivariance_and_pivots",
        if bad.is_empty() {
            Ok(format!("200 monomials on M̄_0,{n}"))
        } else {
            Err(bad.join("; "))
        },
    );
    let sym = (4..=cfg.cap_n.min(7)).filter(|n| (n - 3) % 2 == 0).try_for_each(|n| {
        let m = pairing_matrix(n, (n - 3) / 2).map_err(|e| e.to_string())?;
        if m.is_symmetric() {
            Ok(())
        } else {
            Err(format!("pairing matrix n = {n} not symmetric"))
        }
    });
    record(
        checks,
        "pairing_symmetry",
        sym.map(|_| "square pairing matrices symmetric".into()),
    );
}

fn wdvv_laws(checks: &mut Vec<CheckResult>) {
    let t = TargetSpace::p1xp1();
    let mut bad = Vec::new();
    for a in 0..=4u64 {
        for b in 0..=4u64 {
            if a + b == 0 {
                continue;
            }
            let x = wdvv_number(&t, &CurveClass::new(vec![a, b]));
            let y = wdvv_number(&t, &CurveClass::new(vec![b, a]));
            if x != y {
                bad.push(format!("({a},{b})"));
            }
        }
    }
    record(
        checks,
        "wdvv_symmetry",
        if bad.is_empty() {
            Ok("bidegrees up to (4,4)".into())
        } else {
            Err(bad.join(", "))
        },
    );
    let p2 = TargetSpace::p2();
    let anchors: Vec<BigRational> = (1..=3)
        .map(|d| wdvv_number(&p2, &CurveClass::new(vec![d])).unwrap_or_else(|_| fraction::integer(-1)))
        .collect();
    let expect: Vec<BigRational> = [1, 1, 12].iter().map(|&v| fraction::integer(v)).collect();
    record(
        checks,
        "wdvv_plane_anchors",
        if anchors == expect {
            Ok("N1 = 1, N2 = 1, N3 = 12".into())
        } else {
            Err(format!("{anchors:?}"))
        },
    );
}

fn product_laws(cfg: &SuiteConfig, checks: &mut Vec<CheckResult>) {
    for &(d1, d2) in &cfg.bidegrees {
        let name = format!("product_formula({d1},{d2})");
        let order_name = format!("solution_independence({d1},{d2})");
        match verify_product(d1, d2, cfg.cap_n) {
            Err(Error::CapExceeded { n, cap }) => {
                for nm in [name, order_name] {
                    checks.push(CheckResult {
                        name: nm,
                        status: Status::Skipped,
                        detail: format!("n = {n} exceeds cap {cap}"),
                    });
                }
                continue;
            }
            Err(e) => record(checks, name, Err(e.to_string())),
            Ok(r) => record(
                checks,
                name,
                if r.equal {
                    Ok(format!("n = {}, value {}", r.n, fraction::to_string(&r.lhs)))
                } else {
                    Err(format!("lhs {} rhs {}", r.lhs, r.rhs))
                },
            ),
        }
        let outcome = product_inputs(d1, d2, cfg.cap_n)
            .and_then(|inp| cup_under_orders(&inp, cfg.extra_orders, cfg.seed))
            .map_err(|e| e.to_string())
            .and_then(|vals| {
                if vals.windows(2).all(|w| w[0] == w[1]) {
                    Ok(format!("{} orders agree", vals.len()))
                } else {
                    Err(format!("values differ: {vals:?}"))
                }
            });
        record(checks, order_name, outcome);
    }
}

/// Runs every property suite; failures are recorded, not raised.
pub fn run_suite(cfg: &SuiteConfig) -> SuiteReport {
    let mut checks = Vec::new();
    graph_laws(cfg, &mut checks);
    mbar_laws(cfg, &mut checks);
    wdvv_laws(&mut checks);
    product_laws(cfg, &mut checks);
    SuiteReport { seed: cfg.seed, checks }
}
