//! Stabilization of marked graphs along monoid maps, the induced functor on
//! fibered graph categories, and pullbacks of markings along edge
//! contractions.
//!
//! All operations preserve vertex and flag ids of the surviving parts of a
//! graph, so morphisms between a graph and its stabilization are identities
//! on ids; the interesting data is the chain record of long edges and tails.

use std::collections::{BTreeMap, BTreeSet};

use crate::curve::{CurveClass, MonoidMap};
use crate::error::{Error, Result};
use crate::graph::{compact_graph, Cell, Edge, Flag, MarkedGraph, ModularGraph, Vertex};

/// A stabilizing morphism from a graph (`fine`) to its stabilization
/// (`coarse`).
///
/// Every edge or tail of the coarse graph owns a chain of edges (and, for a
/// tail, a final tail) of the fine graph: its long edge or long tail. The
/// orbit map picks one factor of each chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizingMorphism {
    coarse: ModularGraph,
    fine: ModularGraph,
    vertex_map: BTreeMap<String, String>,
    flag_map: BTreeMap<String, String>,
    chains: BTreeMap<Cell, Vec<Cell>>,
    orbit: BTreeMap<Cell, Cell>,
    collapsed: Vec<Cell>,
}

impl StabilizingMorphism {
    pub fn coarse(&self) -> &ModularGraph {
        &self.coarse
    }

    pub fn fine(&self) -> &ModularGraph {
        &self.fine
    }

    /// Coarse vertex id → fine vertex id.
    pub fn vertex_map(&self) -> &BTreeMap<String, String> {
        &self.vertex_map
    }

    /// Coarse flag id → fine flag id.
    pub fn flag_map(&self) -> &BTreeMap<String, String> {
        &self.flag_map
    }

    /// Long edge / long tail of each coarse cell, ordered from the first flag
    /// of the edge (resp. from the vertex end of the tail).
    pub fn chains(&self) -> &BTreeMap<Cell, Vec<Cell>> {
        &self.chains
    }

    pub fn chain(&self, coarse: &Cell) -> Option<&[Cell]> {
        self.chains.get(coarse).map(Vec::as_slice)
    }

    /// Chosen factor of each long edge / long tail.
    pub fn orbit_map(&self) -> &BTreeMap<Cell, Cell> {
        &self.orbit
    }

    /// The coarse cell whose long edge or long tail contains `fine`.
    pub fn owner(&self, fine: &Cell) -> Option<&Cell> {
        self.chains.iter().find(|(_, ch)| ch.contains(fine)).map(|(c, _)| c)
    }

    /// Fine edges that belong to no chain: branches contracted into a vertex.
    pub fn collapsed(&self) -> &[Cell] {
        &self.collapsed
    }

    /// The identity morphism of a graph.
    pub fn identity(g: &ModularGraph) -> Self {
        let chains: BTreeMap<Cell, Vec<Cell>> = g.cells().into_iter().map(|c| (c.clone(), vec![c])).collect();
        let orbit = chains.iter().map(|(c, ch)| (c.clone(), ch[0].clone())).collect();
        StabilizingMorphism {
            coarse: g.clone(),
            fine: g.clone(),
            vertex_map: g.vertices().iter().map(|v| (v.id.clone(), v.id.clone())).collect(),
            flag_map: g.flags().iter().map(|f| (f.id.clone(), f.id.clone())).collect(),
            chains,
            orbit,
            collapsed: Vec::new(),
        }
    }

    /// Chains, orbit map and collapsed cells, with cells written as
    /// `{a,b}` for edges and `tail x` for tails.
    pub fn to_json(&self) -> serde_json::Value {
        let cells = |v: &[Cell]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
        let chains: serde_json::Map<String, serde_json::Value> = self
            .chains
            .iter()
            .map(|(c, ch)| (c.to_string(), serde_json::json!(cells(ch))))
            .collect();
        let orbit: serde_json::Map<String, serde_json::Value> = self
            .orbit
            .iter()
            .map(|(c, f)| (c.to_string(), serde_json::json!(f.to_string())))
            .collect();
        serde_json::json!({
            "vertex_map": self.vertex_map,
            "flag_map": self.flag_map,
            "chains": chains,
            "orbit": orbit,
            "collapsed": cells(&self.collapsed),
        })
    }

    pub fn is_bijective(&self) -> bool {
        self.collapsed.is_empty() && self.chains.iter().all(|(c, ch)| ch.len() == 1 && &ch[0] == c)
    }
}

/// Whether two graphs agree including vertex and flag ids.
pub fn same_ids(a: &ModularGraph, b: &ModularGraph) -> bool {
    type Key = (
        BTreeSet<(String, u32)>,
        BTreeSet<(String, String, String, Option<String>)>,
    );
    fn key(g: &ModularGraph) -> Key {
        let vs = g.vertices().iter().map(|v| (v.id.clone(), v.genus)).collect();
        let fs = g
            .flags()
            .iter()
            .map(|f| {
                (
                    f.id.clone(),
                    g.vertices()[f.vertex].id.clone(),
                    g.flags()[f.partner].id.clone(),
                    f.label.clone(),
                )
            })
            .collect();
        (vs, fs)
    }
    key(a) == key(b)
}

/// Mutable working copy used during stabilization.
struct Work {
    vertices: Vec<Option<Vertex>>,
    flags: Vec<Option<Flag>>,
    marking: Vec<Option<CurveClass>>,
    chains: BTreeMap<Cell, Vec<Cell>>,
    collapsed: Vec<Cell>,
}

impl Work {
    fn flag(&self, i: usize) -> &Flag {
        self.flags[i].as_ref().unwrap()
    }

    fn flags_at(&self, v: usize) -> Vec<usize> {
        (0..self.flags.len())
            .filter(|&i| self.flags[i].as_ref().is_some_and(|f| f.vertex == v))
            .collect()
    }

    fn cell(&self, f: usize) -> Cell {
        let fl = self.flag(f);
        if fl.partner == f {
            Cell::Tail(fl.label.clone().unwrap())
        } else {
            Cell::Edge(Edge::new(fl.id.clone(), self.flag(fl.partner).id.clone()))
        }
    }

    /// Chain of the edge through flag `f`, oriented from `f` to its partner.
    fn oriented_chain(&mut self, f: usize) -> Vec<Cell> {
        let cell = self.cell(f);
        let mut ch = self.chains.remove(&cell).unwrap();
        if let Cell::Edge(e) = &cell {
            if e.flags().0 != self.flag(f).id {
                ch.reverse();
            }
        }
        ch
    }

    fn unstable(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| {
                let Some(vx) = &self.vertices[v] else { return false };
                self.marking[v].as_ref().unwrap().is_zero()
                    && 2 * vx.genus as i64 - 2 + self.flags_at(v).len() as i64 <= 0
            })
            .collect()
    }

    fn remove_vertex(&mut self, v: usize) {
        self.vertices[v] = None;
        self.marking[v] = None;
    }

    /// Contracts one unstable vertex.
    fn contract(&mut self, v: usize) -> Result<()> {
        let vid = self.vertices[v].as_ref().unwrap().id.clone();
        let fs = self.flags_at(v);
        let genus = self.vertices[v].as_ref().unwrap().genus;
        let tails = fs.iter().filter(|&&f| self.flag(f).partner == f).count();
        let lost = |what: &str| Err(Error::NoStableModel(format!("component of vertex {vid} {what}")));
        match fs.as_slice() {
            [] if genus == 0 => {
                self.remove_vertex(v);
                Ok(())
            }
            [] => lost("has genus but no special points"),
            [f] if tails == 0 => {
                let p = self.flag(*f).partner;
                let ch = self.oriented_chain(*f);
                self.collapsed.extend(ch);
                self.flags[*f] = None;
                self.flags[p] = None;
                self.remove_vertex(v);
                Ok(())
            }
            [_] => lost("carries a single tail"),
            [a, b] if self.flag(*a).partner == *b => lost("is a single unstable loop"),
            [_, _] if tails == 2 => lost("carries only two tails"),
            [a, b] => {
                // orient: `inner` flags at v, `outer` flags on the far side
                let (ea, eb) = if self.flag(*a).partner == *a {
                    (*b, *a)
                } else {
                    (*a, *b)
                };
                let outer_a = self.flag(ea).partner;
                let mut ch = self.oriented_chain(outer_a);
                if self.flag(eb).partner == eb {
                    // slide the tail along the edge onto the far vertex
                    let label = self.flag(eb).label.clone().unwrap();
                    ch.extend(self.chains.remove(&Cell::Tail(label.clone())).unwrap());
                    self.flags[ea] = None;
                    self.flags[eb] = None;
                    let fa = self.flags[outer_a].as_mut().unwrap();
                    fa.partner = outer_a;
                    fa.label = Some(label.clone());
                    self.chains.insert(Cell::Tail(label), ch);
                } else {
                    let outer_b = self.flag(eb).partner;
                    ch.extend(self.oriented_chain(eb));
                    self.flags[ea] = None;
                    self.flags[eb] = None;
                    self.flags[outer_a].as_mut().unwrap().partner = outer_b;
                    self.flags[outer_b].as_mut().unwrap().partner = outer_a;
                    let (ida, idb) = (self.flag(outer_a).id.clone(), self.flag(outer_b).id.clone());
                    let e = Edge::new(ida.clone(), idb);
                    if e.flags().0 != ida {
                        ch.reverse();
                    }
                    self.chains.insert(Cell::Edge(e), ch);
                }
                self.remove_vertex(v);
                Ok(())
            }
            _ => unreachable!("vertices with three or more flags are stable"),
        }
    }
}

/// Pushes the marking forward along `map` and contracts unstable vertices
/// until none remain. `choose` picks which unstable vertex (by position in the
/// given list of ids) to contract next.
pub fn pushforward_stabilize_by(
    g: &MarkedGraph,
    map: &MonoidMap,
    mut choose: impl FnMut(&[String]) -> usize,
) -> Result<(MarkedGraph, StabilizingMorphism)> {
    if map.source() != g.monoid() {
        return Err(Error::RankMismatch {
            expected: map.source().rank(),
            got: g.monoid().rank(),
        });
    }
    if let crate::graph::StabilityReport::Unstable(bad) = g.validate()? {
        return Err(Error::Unstable(bad));
    }
    let graph = g.graph();
    let marking = g
        .marking()
        .iter()
        .map(|b| map.pushforward(b).map(Some))
        .collect::<Result<Vec<_>>>()?;
    let mut work = Work {
        vertices: graph.vertices().iter().cloned().map(Some).collect(),
        flags: graph.flags().iter().cloned().map(Some).collect(),
        marking,
        chains: graph.cells().into_iter().map(|c| (c.clone(), vec![c])).collect(),
        collapsed: Vec::new(),
    };
    loop {
        let unstable = work.unstable();
        if unstable.is_empty() {
            break;
        }
        let ids: Vec<String> = unstable
            .iter()
            .map(|&v| work.vertices[v].as_ref().unwrap().id.clone())
            .collect();
        let pick = choose(&ids).min(unstable.len() - 1);
        work.contract(unstable[pick])?;
    }

    let Work {
        vertices,
        flags,
        marking,
        chains,
        collapsed,
    } = work;
    let coarse = compact_graph(vertices, flags);
    let marking: Vec<CurveClass> = marking.into_iter().flatten().collect();
    let orbit = chains.iter().map(|(c, ch)| (c.clone(), ch[0].clone())).collect();
    let morphism = StabilizingMorphism {
        vertex_map: coarse.vertices().iter().map(|v| (v.id.clone(), v.id.clone())).collect(),
        flag_map: coarse.flags().iter().map(|f| (f.id.clone(), f.id.clone())).collect(),
        coarse: coarse.clone(),
        fine: graph.clone(),
        chains,
        orbit,
        collapsed,
    };
    let stabilized = MarkedGraph::new(coarse, map.target().clone(), marking)?;
    Ok((stabilized, morphism))
}

/// Stabilization of `g` with respect to the pushforward along `map`.
pub fn pushforward_stabilize(g: &MarkedGraph, map: &MonoidMap) -> Result<(MarkedGraph, StabilizingMorphism)> {
    pushforward_stabilize_by(g, map, |_| 0)
}

/// The stable modular graph underlying `g` once its marking is forgotten.
pub fn absolute_stabilization(g: &MarkedGraph) -> Result<(ModularGraph, StabilizingMorphism)> {
    let (m, morphism) = pushforward_stabilize(g, &MonoidMap::zero(g.monoid()))?;
    if m.graph().vertex_count() == 0 {
        return Err(Error::NoStableModel("every vertex was contracted".into()));
    }
    Ok((m.graph().clone(), morphism))
}

/// An object over `tau`: a marked graph with a stabilizing morphism onto `tau`.
pub type MarkedOver = (MarkedGraph, StabilizingMorphism);

/// Applies the stabilization functor for each of the two maps to a family of
/// marked graphs over `tau`, composing orbit maps: an edge or tail `c` of
/// `tau` goes to the unique factor of its long edge in the stabilization
/// whose own long edge contains the factor previously assigned to `c`.
pub fn psi_image(
    tau: &ModularGraph,
    family: &[MarkedOver],
    maps: (&MonoidMap, &MonoidMap),
) -> Result<(Vec<MarkedOver>, Vec<MarkedOver>)> {
    let mut left = Vec::with_capacity(family.len());
    let mut right = Vec::with_capacity(family.len());
    for (marked, over) in family {
        if !same_ids(over.coarse(), tau) {
            return Err(Error::MorphismMismatch(
                "stabilizing morphism does not land on tau".into(),
            ));
        }
        if !same_ids(over.fine(), marked.graph()) {
            return Err(Error::MorphismMismatch(
                "stabilizing morphism does not start at the marked graph".into(),
            ));
        }
        left.push(psi_component(tau, marked, over, maps.0)?);
        right.push(psi_component(tau, marked, over, maps.1)?);
    }
    Ok((left, right))
}

fn psi_component(
    tau: &ModularGraph,
    marked: &MarkedGraph,
    over: &StabilizingMorphism,
    map: &MonoidMap,
) -> Result<MarkedOver> {
    let (pushed, to_marked) = pushforward_stabilize(marked, map)?;
    let (_, to_tau) = pushforward_stabilize(&pushed, &MonoidMap::zero(pushed.monoid()))?;
    if !same_ids(to_tau.coarse(), tau) {
        return Err(Error::MorphismMismatch("stabilization does not recover tau".into()));
    }
    let mut orbit = BTreeMap::new();
    for (cell, factors) in to_tau.chains() {
        let target = over
            .orbit
            .get(cell)
            .ok_or_else(|| Error::OrbitComposition(cell.to_string()))?;
        let hits: Vec<&Cell> = factors
            .iter()
            .filter(|f| to_marked.chain(f).is_some_and(|ch| ch.contains(target)))
            .collect();
        match hits.as_slice() {
            [one] => {
                orbit.insert(cell.clone(), (*one).clone());
            }
            _ => {
                return Err(Error::OrbitComposition(format!(
                    "{cell}: {} candidate factors",
                    hits.len()
                )))
            }
        }
    }
    let morphism = StabilizingMorphism { orbit, ..to_tau };
    Ok((pushed, morphism))
}

/// Contraction of one non-looping edge `edge` of `sigma`.
#[derive(Debug, Clone)]
pub struct EdgeContraction {
    pub sigma: ModularGraph,
    pub edge: Edge,
}

impl EdgeContraction {
    pub fn new(sigma: ModularGraph, edge: Edge) -> Result<Self> {
        let (a, b) = sigma
            .find_edge(&edge)
            .ok_or_else(|| Error::NotAnEdge(edge.to_string()))?;
        if sigma.flags()[a].vertex == sigma.flags()[b].vertex {
            return Err(Error::MorphismMismatch(format!(
                "{edge} is a loop, not a single-edge contraction"
            )));
        }
        Ok(EdgeContraction { sigma, edge })
    }

    /// Endpoints `(v₁, v₂)` of the contracted edge; `v₁` keeps its id in the
    /// contracted graph.
    pub fn endpoints(&self) -> (usize, usize) {
        let (a, b) = self.sigma.find_edge(&self.edge).unwrap();
        let (va, vb) = (self.sigma.flags()[a].vertex, self.sigma.flags()[b].vertex);
        (va.min(vb), va.max(vb))
    }

    pub fn target(&self) -> ModularGraph {
        let probe = MarkedGraph::unmarked(self.sigma.clone(), crate::curve::DegreeMonoid::p1());
        probe.contract_edge(&self.edge).unwrap().graph().clone()
    }
}

/// All stable markings of `sigma` lying over `marked`: the class at the merged
/// vertex is split as `β₁ + β₂` between the two endpoints in every way.
pub fn splitting_pullback(contraction: &EdgeContraction, marked: &MarkedGraph) -> Result<Vec<MarkedGraph>> {
    let tau = contraction.target();
    if !same_ids(&tau, marked.graph()) {
        return Err(Error::MorphismMismatch(
            "marked graph is not the target of the contraction".into(),
        ));
    }
    let sigma = &contraction.sigma;
    let (v1, v2) = contraction.endpoints();
    let w = &sigma.vertices()[v1].id;
    let beta = marked.marking_of(w).unwrap();
    let mut out = Vec::new();
    for (b1, b2) in beta.decompositions() {
        let marking: Vec<CurveClass> = (0..sigma.vertex_count())
            .map(|v| match v {
                _ if v == v1 => b1.clone(),
                _ if v == v2 => b2.clone(),
                _ => marked.marking_of(&sigma.vertices()[v].id).unwrap().clone(),
            })
            .collect();
        let candidate = MarkedGraph::from_parts_unchecked(sigma.clone(), marked.monoid().clone(), marking);
        if candidate.is_stable() {
            out.push(candidate);
        }
    }
    Ok(out)
}

/// Adds tails at the given vertices.
pub fn add_tails(g: &MarkedGraph, assignment: &BTreeMap<String, String>) -> Result<MarkedGraph> {
    g.add_tails(assignment)
}
