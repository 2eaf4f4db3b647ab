use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use gwprod_core::curve::{CurveClass, DegreeMonoid, MonoidMap};
use gwprod_core::error::{Error, Result};
use gwprod_core::fraction;
use gwprod_core::functors::{
    absolute_stabilization, psi_image, pushforward_stabilize, splitting_pullback, EdgeContraction,
};
use gwprod_core::graph::{canonicalize, Edge, MarkedGraph, StabilityReport};
use gwprod_core::gw::{kunneth_sign, reconstruct, wdvv_number, GWPairingVector, TargetSpace};
use gwprod_core::mbar::{enumerate_strata, evaluate_monomial, pairing_matrix, CycleMonomial, DEFAULT_CAP_N};
use gwprod_core::verify::{run_suite, verify_product, SuiteConfig, DEFAULT_BIDEGREES};

#[derive(Parser)]
#[command(
    name = "gwprod",
    version,
    about = "Stable graphs, M̄_0,n intersections and the P¹×P¹ product formula"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Operations on marked modular graphs
    #[command(subcommand)]
    Graphs(GraphCmd),
    /// Strata and intersection numbers on M̄_0,n
    #[command(subcommand)]
    Mbar(MbarCmd),
    /// Genus-0 Gromov-Witten numbers and classes
    #[command(subcommand)]
    Gw(GwCmd),
    /// Check the product formula for P¹ × P¹ bidegrees
    Verify(VerifyArgs),
    /// Run the property suites
    Suite(SuiteArgs),
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Canonical form and automorphism count
    Canon { graph: PathBuf },
    /// Stability report
    Validate { graph: PathBuf },
    /// Push the marking forward and stabilize
    Stabilize {
        /// Monoid map: a JSON file, inline JSON, or one of
        /// `identity`, `zero`, `project:0`, `project:1`
        #[arg(long)]
        map: String,
        graph: PathBuf,
    },
    /// Contract an edge and list all stable splittings of the result
    Split {
        /// Edge as `flag,flag` or a single flag id
        #[arg(long)]
        edge: String,
        graph: PathBuf,
    },
    /// Images of a graph over the product monoid under both projections
    Psi {
        /// Ranks of the two factor monoids
        #[arg(long, default_value = "1,1")]
        ranks: String,
        graph: PathBuf,
    },
}

#[derive(Subcommand)]
enum MbarCmd {
    Strata {
        #[arg(short)]
        n: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = DEFAULT_CAP_N)]
        cap_n: usize,
    },
    Eval {
        #[arg(short)]
        n: usize,
        /// JSON list of factors, e.g. '[["1,2"],["1,2"]]' or '["psi1"]'
        #[arg(long)]
        monomial: String,
        #[arg(long, default_value_t = DEFAULT_CAP_N)]
        cap_n: usize,
    },
    Pairing {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_CAP_N)]
        cap_n: usize,
    },
}

#[derive(Subcommand)]
enum GwCmd {
    /// Number of rational curves through the expected number of points
    Number {
        #[arg(long)]
        target: String,
        /// Curve class, e.g. `3` or `2,1`
        #[arg(long)]
        degree: String,
    },
    /// Pairings of I_0,n(d)(pt^n) against strata
    Pairings(ClassArgs),
    /// Coefficients of I_0,n(d)(pt^n) in a basis of strata
    Class(ClassArgs),
    /// Sign (−1)^s, s = Σ_{i>j} deg γ_i deg ε_j
    Sign {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        gamma: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        eps: Vec<i64>,
    },
}

#[derive(Args)]
struct ClassArgs {
    #[arg(long, default_value = "p1")]
    target: String,
    #[arg(long)]
    degree: u64,
    #[arg(short)]
    n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CAP_N)]
    cap_n: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// `d1,d2`; repeat for several. Defaults to (1,1), (2,1), (1,2), (2,2)
    #[arg(long)]
    bidegree: Vec<String>,
    /// Also check (3,1) and (1,3)
    #[arg(long)]
    extended: bool,
    #[arg(long, default_value_t = DEFAULT_CAP_N)]
    cap_n: usize,
    #[arg(long)]
    json: Option<PathBuf>,
    /// Include stage timings in the report
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_CAP_N)]
    cap_n: usize,
    #[arg(long, default_value_t = 1000)]
    graphs: usize,
    #[arg(long)]
    json: Option<PathBuf>,
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Pass,
    Mismatch,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Graphs(c) => graphs(c),
        Command::Mbar(c) => mbar(c),
        Command::Gw(c) => gw(c),
        Command::Verify(a) => verify(a),
        Command::Suite(a) => suite(a),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn emit(value: &Value, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("json");
    match out {
        Some(p) => fs::write(p, text + "\n").map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    Ok(())
}

fn canonical_json(g: &MarkedGraph) -> Value {
    let c = canonicalize(g);
    json!({ "canonical": c.form, "automorphisms": c.automorphisms })
}

fn parse_map(spec: &str, monoid: &DegreeMonoid) -> Result<MonoidMap> {
    let product_factors = || {
        let r = monoid.rank();
        if !r.is_multiple_of(2) {
            return Err(Error::RankMismatch { expected: 2, got: r });
        }
        let half = |k: usize| {
            DegreeMonoid::new(
                monoid.generator_names()[k..k + r / 2].to_vec(),
                monoid.c1_values()[k..k + r / 2].to_vec(),
            )
        };
        Ok((half(0)?, half(r / 2)?))
    };
    let map = match spec {
        "identity" => MonoidMap::identity(monoid),
        "zero" => MonoidMap::zero(monoid),
        "project:0" | "project:1" => {
            let (a, b) = product_factors()?;
            let which = usize::from(spec.ends_with('1'));
            let p = MonoidMap::projection(&a, &b, which);
            MonoidMap::new(monoid.clone(), p.target().clone(), p.matrix().to_vec())?
        }
        text => {
            let raw = if text.trim_start().starts_with('{') {
                text.to_string()
            } else {
                read(Path::new(text))?
            };
            serde_json::from_str(&raw).map_err(|e| Error::Parse(format!("monoid map: {e}")))?
        }
    };
    Ok(map)
}

fn parse_edge(g: &MarkedGraph, spec: &str) -> Result<Edge> {
    let graph = g.graph();
    let edge = match spec.split_once(',') {
        Some((a, b)) => Edge::new(a.trim(), b.trim()),
        None => {
            let f = graph
                .flag_index(spec.trim())
                .ok_or_else(|| Error::NotAnEdge(spec.to_string()))?;
            graph
                .edge_of_flag(f)
                .ok_or_else(|| Error::NotAnEdge(spec.to_string()))?
        }
    };
    graph
        .find_edge(&edge)
        .ok_or_else(|| Error::NotAnEdge(spec.to_string()))?;
    Ok(edge)
}

fn graphs(cmd: GraphCmd) -> Result<Outcome> {
    match cmd {
        GraphCmd::Canon { graph } => {
            let g = MarkedGraph::from_json(&read(&graph)?)?;
            emit(&canonical_json(&g), None)?;
        }
        GraphCmd::Validate { graph } => {
            let g = MarkedGraph::from_json(&read(&graph)?)?;
            let report = match g.validate()? {
                StabilityReport::Stable => json!({ "stable": true }),
                StabilityReport::Unstable(bad) => json!({ "stable": false, "unstable": bad }),
            };
            emit(&report, None)?;
        }
        GraphCmd::Stabilize { map, graph } => {
            let g = MarkedGraph::from_json(&read(&graph)?)?;
            let map = parse_map(&map, g.monoid())?;
            let (s, m) = pushforward_stabilize(&g, &map)?;
            emit(
                &json!({ "graph": s.to_json(), "canonical": canonical_json(&s), "morphism": m.to_json() }),
                None,
            )?;
        }
        GraphCmd::Split { edge, graph } => {
            let g = MarkedGraph::from_json(&read(&graph)?)?;
            let e = parse_edge(&g, &edge)?;
            let contraction = EdgeContraction::new(g.graph().clone(), e.clone())?;
            let contracted = g.contract_edge(&e)?;
            let pulls = splitting_pullback(&contraction, &contracted)?;
            emit(
                &json!({
                    "edge": e.to_string(),
                    "contracted": contracted.to_json(),
                    "count": pulls.len(),
                    "splittings": pulls.iter().map(MarkedGraph::to_json).collect::<Vec<_>>(),
                }),
                None,
            )?;
        }
        GraphCmd::Psi { ranks, graph } => {
            let g = MarkedGraph::from_json(&read(&graph)?)?;
            let (ra, rb) = ranks
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
                .ok_or_else(|| Error::Parse(format!("ranks {ranks}")))?;
            if ra + rb != g.monoid().rank() || ra == 0 || rb == 0 {
                return Err(Error::RankMismatch {
                    expected: g.monoid().rank(),
                    got: ra + rb,
                });
            }
            let m = g.monoid();
            let factor = |range: std::ops::Range<usize>| {
                DegreeMonoid::new(
                    m.generator_names()[range.clone()].to_vec(),
                    m.c1_values()[range].to_vec(),
                )
            };
            let (a, b) = (factor(0..ra)?, factor(ra..ra + rb)?);
            let project = |which: usize| -> Result<MonoidMap> {
                let p = MonoidMap::projection(&a, &b, which);
                MonoidMap::new(m.clone(), p.target().clone(), p.matrix().to_vec())
            };
            let (pv, pw) = (project(0)?, project(1)?);
            let (tau, over) = absolute_stabilization(&g)?;
            let (left, right) = psi_image(&tau, &[(g.clone(), over)], (&pv, &pw))?;
            let side = |list: &[(MarkedGraph, gwprod_core::functors::StabilizingMorphism)]| {
                list.iter()
                    .map(|(h, m)| json!({ "graph": h.to_json(), "morphism": m.to_json() }))
                    .collect::<Vec<_>>()
            };
            let tau_json = MarkedGraph::unmarked(tau.clone(), DegreeMonoid::p1()).to_json();
            emit(
                &json!({ "tau": tau_json, "first": side(&left), "second": side(&right) }),
                None,
            )?;
        }
    }
    Ok(Outcome::Pass)
}

fn mbar(cmd: MbarCmd) -> Result<Outcome> {
    match cmd {
        MbarCmd::Strata { n, dim, cap_n } => {
            check_cap(n, cap_n)?;
            let strata = enumerate_strata(n, dim)?;
            let keys: Vec<String> = strata.iter().map(|s| s.key()).collect();
            emit(
                &json!({ "n": n, "dim": dim, "count": keys.len(), "strata": keys }),
                None,
            )?;
        }
        MbarCmd::Eval { n, monomial, cap_n } => {
            check_cap(n, cap_n)?;
            let m = CycleMonomial::parse_factors(n, &monomial)?;
            let e = evaluate_monomial(&m);
            emit(
                &json!({
                    "n": n,
                    "monomial": m.to_string(),
                    "value": fraction::to_string(&e.value),
                    "degree_mismatch": e.degree_mismatch,
                }),
                None,
            )?;
        }
        MbarCmd::Pairing { n, k, out, cap_n } => {
            check_cap(n, cap_n)?;
            let m = pairing_matrix(n, k)?;
            let keys = |v: &[gwprod_core::mbar::StratumTree]| v.iter().map(|s| s.key()).collect::<Vec<_>>();
            let entries: Vec<Vec<String>> = m
                .entries
                .iter()
                .map(|r| r.iter().map(fraction::to_string).collect())
                .collect();
            emit(
                &json!({ "n": n, "k": k, "rows": keys(&m.rows), "cols": keys(&m.cols), "entries": entries }),
                out.as_deref(),
            )?;
        }
    }
    Ok(Outcome::Pass)
}

fn p1_only(target: &str) -> Result<()> {
    if TargetSpace::by_name(target)?.name != "p1" {
        return Err(Error::UnsupportedTarget(format!(
            "{target}: strata classes are implemented for p1"
        )));
    }
    Ok(())
}

fn gw(cmd: GwCmd) -> Result<Outcome> {
    match cmd {
        GwCmd::Number { target, degree } => {
            let t = TargetSpace::by_name(&target)?;
            let coords = degree
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::Parse(format!("degree {degree}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let beta = CurveClass::new(coords);
            let value = wdvv_number(&t, &beta)?;
            emit(
                &json!({ "target": t.name, "degree": beta, "value": fraction::to_string(&value) }),
                None,
            )?;
        }
        GwCmd::Pairings(a) => {
            p1_only(&a.target)?;
            check_cap(a.n, a.cap_n)?;
            emit(&GWPairingVector::p1(a.degree, a.n)?.to_json(), a.out.as_deref())?;
        }
        GwCmd::Class(a) => {
            p1_only(&a.target)?;
            check_cap(a.n, a.cap_n)?;
            let v = GWPairingVector::p1(a.degree, a.n)?;
            let m = pairing_matrix(a.n, v.class_dim)?;
            // the complementary vector only fixes shapes here; x is what we want
            let shape = GWPairingVector {
                class_dim: a.n - 3 - v.class_dim,
                strata: m.rows.clone(),
                values: vec![fraction::integer(0); m.rows.len()],
                ..v.clone()
            };
            let order: Vec<usize> = (0..m.rows.len()).collect();
            let r = reconstruct(&v, &shape, &m, &order)?;
            let coefficients: serde_json::Map<String, Value> = m
                .rows
                .iter()
                .zip(&r.coefficients)
                .filter(|(_, x)| !num_traits::Zero::is_zero(*x))
                .map(|(s, x)| (s.key(), json!(fraction::to_string(x))))
                .collect();
            emit(
                &json!({
                    "n": a.n,
                    "target": "p1",
                    "degree": [a.degree],
                    "class_dim": v.class_dim,
                    "basis_rank": r.rank,
                    "coefficients": coefficients,
                }),
                a.out.as_deref(),
            )?;
        }
        GwCmd::Sign { gamma, eps } => {
            let s = kunneth_sign(&gamma, &eps)?;
            emit(&json!({ "sign": s }), None)?;
        }
    }
    Ok(Outcome::Pass)
}

fn parse_bidegree(text: &str) -> Result<(u32, u32)> {
    let bad = || Error::Parse(format!("bidegree {text}"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn verify(a: VerifyArgs) -> Result<Outcome> {
    let mut bidegrees: Vec<(u32, u32)> = a.bidegree.iter().map(|b| parse_bidegree(b)).collect::<Result<_>>()?;
    if bidegrees.is_empty() {
        bidegrees = DEFAULT_BIDEGREES.to_vec();
    }
    if a.extended {
        bidegrees.extend([(3, 1), (1, 3)]);
    }
    let mut reports = Vec::new();
    let mut all_equal = true;
    for (d1, d2) in bidegrees {
        let r = verify_product(d1, d2, a.cap_n)?;
        all_equal &= r.equal;
        eprintln!(
            "({d1},{d2}) n={} lhs={} rhs={} {}",
            r.n,
            r.lhs,
            r.rhs,
            if r.equal { "equal" } else { "MISMATCH" }
        );
        reports.push(r.to_json(a.timings));
    }
    emit(&json!({ "reports": reports, "equal": all_equal }), a.json.as_deref())?;
    Ok(if all_equal { Outcome::Pass } else { Outcome::Mismatch })
}

fn suite(a: SuiteArgs) -> Result<Outcome> {
    let mut cfg = SuiteConfig {
        cap_n: a.cap_n,
        graph_count: a.graphs,
        ..SuiteConfig::default()
    };
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    let report = run_suite(&cfg);
    for c in &report.checks {
        eprintln!("{:<32} {:?}  {}", c.name, c.status, c.detail);
    }
    emit(&serde_json::to_value(&report).expect("json"), a.json.as_deref())?;
    Ok(if report.passed() {
        Outcome::Pass
    } else {
        Outcome::Mismatch
    })
}
