//! Seeded random stable marked graphs for property checks.

use rand::Rng;

use crate::curve::{CurveClass, DegreeMonoid};
use crate::graph::{GraphBuilder, MarkedGraph};

#[derive(Debug, Clone)]
pub struct SamplerConfig {
    pub monoid: DegreeMonoid,
    pub max_vertices: usize,
    pub max_extra_edges: usize,
    pub max_coord: u64,
    /// Probability that a vertex gets genus one.
    pub genus_rate: f64,
    /// Probability that a vertex carries a nonzero class.
    pub marking_rate: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            monoid: DegreeMonoid::p1xp1(),
            max_vertices: 5,
            max_extra_edges: 2,
            max_coord: 2,
            genus_rate: 0.15,
            marking_rate: 0.5,
        }
    }
}

/// A connected marked graph, stable at every vertex. Vertices are `v0, v1,
/// …` and tails are labelled `1, 2, …`; unstable vertices receive extra
/// tails.
pub fn random_stable_graph<R: Rng>(rng: &mut R, cfg: &SamplerConfig) -> MarkedGraph {
    let nv = rng.gen_range(1..=cfg.max_vertices.max(1));
    let mut b = GraphBuilder::new();
    let genus: Vec<u32> = (0..nv).map(|_| u32::from(rng.gen_bool(cfg.genus_rate))).collect();
    let ids: Vec<usize> = (0..nv).map(|i| b.vertex(format!("v{i}"), genus[i])).collect();
    let mut valence = vec![0usize; nv];
    for i in 1..nv {
        let j = rng.gen_range(0..i);
        b.edge(ids[j], ids[i]);
        valence[i] += 1;
        valence[j] += 1;
    }
    for _ in 0..rng.gen_range(0..=cfg.max_extra_edges) {
        let (x, y) = (rng.gen_range(0..nv), rng.gen_range(0..nv));
        b.edge(ids[x], ids[y]);
        valence[x] += 1;
        valence[y] += 1;
    }
    let marking: Vec<CurveClass> = (0..nv)
        .map(|_| {
            if rng.gen_bool(cfg.marking_rate) {
                let mut c: Vec<u64> = (0..cfg.monoid.rank())
                    .map(|_| rng.gen_range(0..=cfg.max_coord))
                    .collect();
                if c.iter().all(|&x| x == 0) {
                    let k = rng.gen_range(0..c.len());
                    c[k] = 1;
                }
                CurveClass::new(c)
            } else {
                cfg.monoid.zero()
            }
        })
        .collect();
    let mut label = 0;
    for v in 0..nv {
        let mut tails = rng.gen_range(0..=2);
        if marking[v].is_zero() {
            let need = (3 - 2 * genus[v] as i64 - valence[v] as i64).max(0) as usize;
            tails = tails.max(need);
        }
        for _ in 0..tails {
            label += 1;
            b.tail(ids[v], label.to_string());
        }
    }
    MarkedGraph::new(
        b.build().expect("sampled graph is well formed"),
        cfg.monoid.clone(),
        marking,
    )
    .expect("marking has the monoid rank")
}
