//! Acceptance run: one PASS/FAIL line per criterion. Every comparison is
//! exact (rational or integer equality), so the tolerance is zero throughout.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gwprod_core::curve::{CurveClass, DegreeMonoid, MonoidMap};
use gwprod_core::fraction;
use gwprod_core::functors::{splitting_pullback, EdgeContraction};
use gwprod_core::gw::{kunneth_sign, wdvv_number, TargetSpace};
use gwprod_core::mbar::{enumerate_strata, evaluate_monomial, CycleMonomial, DEFAULT_CAP_N};
use gwprod_core::sample::{random_stable_graph, SamplerConfig};
use gwprod_core::verify::{
    check_adjointness, check_confluence, check_functoriality, cup_under_orders, product_inputs, verify_product,
    DEFAULT_BIDEGREES,
};

use common::*;

const SEED: u64 = 20_240_917;
const GRAPHS: usize = 1000;
const ORDERS: usize = 5;
const SIGN_VECTORS: usize = 20;
const TOLERANCE: &str = "0 (exact)";

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn product_formula() -> Outcome {
    let mut parts = Vec::new();
    for (d1, d2) in DEFAULT_BIDEGREES {
        let r = verify_product(d1, d2, DEFAULT_CAP_N).map_err(|e| format!("({d1},{d2}): {e}"))?;
        let text = format!(
            "({d1},{d2}) {}={}",
            fraction::to_string(&r.lhs),
            fraction::to_string(&r.rhs)
        );
        if !r.equal {
            return Err(text);
        }
        parts.push(text);
    }
    Ok(parts.join(", "))
}

fn wdvv_anchors() -> Outcome {
    let p2 = TargetSpace::p2();
    let mut got = Vec::new();
    for (d, want) in [(1u64, 1i64), (2, 1), (3, 12)] {
        let v = wdvv_number(&p2, &CurveClass::new(vec![d])).map_err(|e| e.to_string())?;
        if v != q(want) {
            return Err(format!("N_{d} = {} (expected {want})", fraction::to_string(&v)));
        }
        got.push(format!("N_{d}={}", fraction::to_string(&v)));
    }
    Ok(got.join(", "))
}

fn intersection_calculus() -> Outcome {
    let mut checked = 0;
    for n in [4, 5] {
        for (divs, psi) in all_top_monomials(n) {
            let masks = divs.iter().map(side_mask).collect();
            let m = CycleMonomial::new(n, masks, psi.clone()).map_err(|e| e.to_string())?;
            let ours = evaluate_monomial(&m).value;
            let oracle = oracle_integral(n, &divs, &psi);
            if ours != oracle {
                return Err(format!("n={n} {divs:?} psi {psi:?}: {ours} vs oracle {oracle}"));
            }
            checked += 1;
        }
    }
    let spot = |n: usize, text: &str, want: i64| -> Result<(), String> {
        let m = CycleMonomial::parse_factors(n, text).map_err(|e| e.to_string())?;
        let v = evaluate_monomial(&m).value;
        if v == q(want) {
            Ok(())
        } else {
            Err(format!("{text} on n={n}: {v}, expected {want}"))
        }
    };
    spot(4, r#"["psi1"]"#, 1)?;
    spot(5, r#"["1,2","1,2"]"#, -1)?;
    spot(5, r#"["1,2","1,3"]"#, 0)?;
    Ok(format!("{checked} monomials, psi1=1, D12^2=-1, D12*D13=0"))
}

fn strata_census() -> Outcome {
    let mut parts = Vec::new();
    for (n, dim, want) in [(4, 0, 3), (5, 1, 10), (5, 0, 15)] {
        let strata = enumerate_strata(n, dim).map_err(|e| e.to_string())?;
        let exhaustive = trees_by_splitting(n);
        let expected = exhaustive.get(&(n - 3 - dim)).cloned().unwrap_or_default();
        if strata.len() != want || expected.len() != want || strata_forms(&strata) != expected {
            return Err(format!(
                "n={n} dim {dim}: {} enumerated, {} exhaustive, expected {want}",
                strata.len(),
                expected.len()
            ));
        }
        parts.push(format!("(n={n},dim {dim}) {want}"));
    }
    Ok(parts.join(", "))
}

fn functor_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let p1 = DegreeMonoid::p1();
    let pp = DegreeMonoid::p1xp1();
    let proj = [MonoidMap::projection(&p1, &p1, 0), MonoidMap::projection(&p1, &p1, 1)];
    let total = MonoidMap::new(pp.clone(), p1.clone(), vec![vec![1, 1]]).unwrap();
    let forget = MonoidMap::zero(&p1);
    let identity = MonoidMap::identity(&pp);
    let sampler = SamplerConfig::default();

    let mut edges = 0;
    for i in 0..GRAPHS {
        let g = random_stable_graph(&mut rng, &sampler);
        let p = &proj[i % 2];
        for (m1, m2) in [(p, &forget), (&identity, p), (&total, &forget)] {
            check_functoriality(&g, m1, m2).map_err(|e| format!("functoriality, graph {i}: {e}"))?;
        }
        let map = match rng.gen_range(0..3) {
            0 => p.clone(),
            1 => total.clone(),
            _ => MonoidMap::zero(&pp),
        };
        check_confluence(&g, &map, &mut rng).map_err(|e| format!("confluence, graph {i}: {e}"))?;
        edges += check_adjointness(&g).map_err(|e| format!("adjointness, graph {i}: {e}"))?;
    }

    let wide = SamplerConfig {
        max_coord: 3,
        ..SamplerConfig::default()
    };
    let mut splittings = 0;
    for i in 0..GRAPHS {
        let g = random_stable_graph(&mut rng, &wide);
        for e in g.graph().edges() {
            let Ok(c) = EdgeContraction::new(g.graph().clone(), e.clone()) else {
                continue;
            };
            let contracted = g.contract_edge(&e).map_err(|err| err.to_string())?;
            let (v1, v2) = c.endpoints();
            let beta = contracted.marking_of(&g.graph().vertices()[v1].id).unwrap();
            let ends = [v1, v2].map(|v| (g.graph().genus(v), g.graph().valence(v)));
            let want = splitting_count(beta.coords(), ends);
            let got = splitting_pullback(&c, &contracted)
                .map_err(|err| err.to_string())?
                .len();
            if got != want {
                return Err(format!("splitting count, graph {i}, edge {e}: {got} vs {want}"));
            }
            splittings += 1;
        }
    }
    Ok(format!(
        "{GRAPHS} graphs (seed {SEED}), {edges} adjoint edges, {splittings} splitting counts"
    ))
}

fn solution_independence() -> Outcome {
    let mut parts = Vec::new();
    for (d1, d2) in DEFAULT_BIDEGREES {
        let inputs = product_inputs(d1, d2, DEFAULT_CAP_N).map_err(|e| e.to_string())?;
        let values = cup_under_orders(&inputs, ORDERS, SEED).map_err(|e| e.to_string())?;
        let distinct: BTreeMap<String, usize> = values.iter().fold(BTreeMap::new(), |mut acc, v| {
            *acc.entry(fraction::to_string(v)).or_default() += 1;
            acc
        });
        if distinct.len() != 1 {
            return Err(format!("({d1},{d2}): values {distinct:?}"));
        }
        parts.push(format!(
            "({d1},{d2}) {} orders -> {}",
            values.len(),
            fraction::to_string(&values[0])
        ));
    }
    Ok(parts.join(", "))
}

fn sign_formula() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for t in 0..SIGN_VECTORS {
        let len = rng.gen_range(1..=12);
        let gamma: Vec<i64> = (0..len).map(|_| rng.gen_range(0..=6)).collect();
        let eps: Vec<i64> = (0..len).map(|_| rng.gen_range(0..=6)).collect();
        let got = kunneth_sign(&gamma, &eps).map_err(|e| e.to_string())?;
        let want = sign_by_summation(&gamma, &eps);
        if got != want {
            return Err(format!("vector {t}: {gamma:?} {eps:?}: {got} vs {want}"));
        }
    }
    Ok(format!("{SIGN_VECTORS} random vectors"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("product formula", product_formula),
        ("WDVV anchors", wdvv_anchors),
        ("intersection calculus", intersection_calculus),
        ("strata census", strata_census),
        ("functor laws", functor_laws),
        ("solution independence", solution_independence),
        ("sign formula", sign_formula),
    ];
    println!("acceptance: tolerance {TOLERANCE}");
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
