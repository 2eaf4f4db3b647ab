//! Canonical forms and automorphism counts by exhaustive search over vertex
//! orderings, pruned by colour refinement.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{GraphBuilder, MarkedGraph, ModularGraph};
use crate::curve::{CurveClass, DegreeMonoid};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalVertex {
    pub genus: u32,
    pub marking: Vec<u64>,
    pub tails: Vec<String>,
}

/// Id-free description of a marked graph; equal for isomorphic graphs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub vertices: Vec<CanonicalVertex>,
    /// Vertex-position pairs `(i, j)` with `i ≤ j`, sorted.
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical {
    pub form: CanonicalForm,
    /// Order of the automorphism group acting on flags, fixing tail labels,
    /// genera and marking.
    pub automorphisms: u64,
}

impl CanonicalForm {
    /// Realizes the form as a marked graph with ids `v0, v1, …` and edge flags
    /// `f0, f1, …`.
    pub fn to_marked_graph(&self, monoid: &DegreeMonoid) -> MarkedGraph {
        let mut b = GraphBuilder::new();
        for (i, v) in self.vertices.iter().enumerate() {
            b.vertex(format!("v{i}"), v.genus);
        }
        for &(a, c) in &self.edges {
            b.edge(a, c);
        }
        for (i, v) in self.vertices.iter().enumerate() {
            b.tails(i, v.tails.iter().cloned());
        }
        let marking = self
            .vertices
            .iter()
            .map(|v| {
                if v.marking.is_empty() {
                    monoid.zero()
                } else {
                    CurveClass::new(v.marking.clone())
                }
            })
            .collect();
        MarkedGraph::new(
            b.build().expect("canonical form is well formed"),
            monoid.clone(),
            marking,
        )
        .expect("canonical marking matches monoid")
    }
}

pub fn canonicalize(g: &MarkedGraph) -> Canonical {
    let marking: Vec<Vec<u64>> = g.marking().iter().map(|b| b.coords().to_vec()).collect();
    canonical_impl(g.graph(), &marking)
}

/// Canonical form of a graph without marking.
pub fn canonicalize_modular(g: &ModularGraph) -> Canonical {
    canonical_impl(g, &vec![Vec::new(); g.vertex_count()])
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

fn canonical_impl(g: &ModularGraph, marking: &[Vec<u64>]) -> Canonical {
    let n = g.vertex_count();
    let data: Vec<CanonicalVertex> = (0..n)
        .map(|v| {
            let mut tails: Vec<String> = g
                .flags_at(v)
                .into_iter()
                .filter_map(|f| g.flags()[f].label.clone())
                .collect();
            tails.sort();
            CanonicalVertex {
                genus: g.genus(v),
                marking: marking[v].clone(),
                tails,
            }
        })
        .collect();
    let edges = g.edge_flags();
    let ends: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(a, b)| (g.flags()[a].vertex, g.flags()[b].vertex))
        .collect();

    let colours = refine(n, &data, &ends);
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        cells.entry(colours[v]).or_default().push(v);
    }
    let cells: Vec<Vec<usize>> = cells.into_values().collect();

    let mut best: Option<Vec<(usize, usize)>> = None;
    let mut hits = 0u64;
    let mut order = Vec::with_capacity(n);
    search(&cells, 0, &mut order, &mut vec![false; n], &mut |order: &[usize]| {
        let mut pos = vec![0; n];
        for (p, &v) in order.iter().enumerate() {
            pos[v] = p;
        }
        let mut enc: Vec<(usize, usize)> = ends
            .iter()
            .map(|&(a, b)| (pos[a].min(pos[b]), pos[a].max(pos[b])))
            .collect();
        enc.sort_unstable();
        match &best {
            Some(b) if enc > *b => {}
            Some(b) if enc == *b => hits += 1,
            _ => {
                best = Some(enc);
                hits = 1;
            }
        }
    });
    let edges_enc = best.unwrap_or_default();

    let vertices: Vec<CanonicalVertex> = cells.iter().flat_map(|c| c.iter().map(|&v| data[v].clone())).collect();

    let mut multiplicity: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for e in &edges_enc {
        *multiplicity.entry(*e).or_default() += 1;
    }
    let flag_symmetries: u64 = multiplicity
        .iter()
        .map(|(&(a, b), &m)| {
            if a == b {
                factorial(m) * (1u64 << m)
            } else {
                factorial(m)
            }
        })
        .product();

    Canonical {
        form: CanonicalForm {
            vertices,
            edges: edges_enc,
        },
        automorphisms: hits * flag_symmetries,
    }
}

/// Iterated colour refinement; colours are ranks of sorted signatures, so
/// they are independent of vertex ids.
fn refine(n: usize, data: &[CanonicalVertex], ends: &[(usize, usize)]) -> Vec<usize> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in ends {
        adj[a].push(b);
        adj[b].push(a);
    }
    let base: Vec<(&CanonicalVertex, usize)> = (0..n).map(|v| (&data[v], adj[v].len())).collect();
    let mut colours = rank(&base);
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = adj[v].iter().map(|&u| colours[u]).collect();
                nb.sort_unstable();
                (colours[v], nb)
            })
            .collect();
        let next = rank(&sigs);
        let count = |c: &[usize]| c.iter().max().map_or(0, |m| m + 1);
        if count(&next) == count(&colours) {
            return next;
        }
        colours = next;
    }
}

fn rank<T: Ord>(sigs: &[T]) -> Vec<usize> {
    let mut sorted: Vec<&T> = sigs.iter().collect();
    sorted.sort();
    sorted.dedup();
    sigs.iter().map(|s| sorted.binary_search(&s).unwrap()).collect()
}

fn search(
    cells: &[Vec<usize>],
    depth: usize,
    order: &mut Vec<usize>,
    used: &mut Vec<bool>,
    visit: &mut impl FnMut(&[usize]),
) {
    // locate the cell the next position belongs to
    let mut remaining = depth;
    let mut cell = None;
    for c in cells {
        if remaining < c.len() {
            cell = Some(c);
            break;
        }
        remaining -= c.len();
    }
    let Some(cell) = cell else {
        visit(order);
        return;
    };
    for &v in cell {
        if !used[v] {
            used[v] = true;
            order.push(v);
            search(cells, depth + 1, order, used, visit);
            order.pop();
            used[v] = false;
        }
    }
}
