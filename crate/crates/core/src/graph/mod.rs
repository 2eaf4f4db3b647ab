//! Modular graphs with genus labels, flags, edges and tails, optionally
//! carrying a curve-class marking on each vertex.
//!
//! A graph is a set of flags (half-edges) attached to vertices together with
//! an involution on flags. Two-cycles of the involution are edges, fixed
//! points are tails and carry a label.

mod canon;
mod json;

pub use canon::{canonicalize, canonicalize_modular, Canonical, CanonicalForm, CanonicalVertex};
pub use json::{FlagJson, GraphJson, TailJson, VertexJson};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::curve::{CurveClass, DegreeMonoid};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub id: String,
    pub genus: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Flag {
    pub id: String,
    pub vertex: usize,
    /// Image under the involution; equal to the flag's own index for tails.
    pub partner: usize,
    /// Present exactly on tails.
    pub label: Option<String>,
}

/// An edge, named by its two flag ids in sorted order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge(String, String);

impl Edge {
    pub fn new(a: impl Into<String>, b: impl Into<String>) -> Self {
        let (a, b) = (a.into(), b.into());
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn flags(&self) -> (&str, &str) {
        (&self.0, &self.1)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.0, self.1)
    }
}

/// An edge or a tail of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Edge(Edge),
    Tail(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Edge(e) => e.fmt(f),
            Cell::Tail(t) => write!(f, "tail {t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModularGraph {
    vertices: Vec<Vertex>,
    flags: Vec<Flag>,
}

impl ModularGraph {
    pub fn new(vertices: Vec<Vertex>, flags: Vec<Flag>) -> Result<Self> {
        let g = ModularGraph { vertices, flags };
        g.check()?;
        Ok(g)
    }

    pub fn empty() -> Self {
        ModularGraph {
            vertices: Vec::new(),
            flags: Vec::new(),
        }
    }

    fn check(&self) -> Result<()> {
        let mut ids = BTreeSet::new();
        for v in &self.vertices {
            if !ids.insert(v.id.as_str()) {
                return Err(Error::MalformedGraph(format!("duplicate vertex id {}", v.id)));
            }
        }
        let mut flag_ids = BTreeSet::new();
        let mut labels = BTreeSet::new();
        for (i, f) in self.flags.iter().enumerate() {
            if !flag_ids.insert(f.id.as_str()) {
                return Err(Error::MalformedGraph(format!("duplicate flag id {}", f.id)));
            }
            if f.vertex >= self.vertices.len() {
                return Err(Error::MalformedGraph(format!("flag {} at missing vertex", f.id)));
            }
            let Some(p) = self.flags.get(f.partner) else {
                return Err(Error::MalformedGraph(format!("flag {} has dangling partner", f.id)));
            };
            if p.partner != i {
                return Err(Error::MalformedGraph(format!("involution not of order 2 at {}", f.id)));
            }
            match (&f.label, f.partner == i) {
                (Some(l), true) => {
                    if !labels.insert(l.as_str()) {
                        return Err(Error::MalformedGraph(format!("duplicate tail label {l}")));
                    }
                }
                (None, true) => return Err(Error::MalformedGraph(format!("tail flag {} has no label", f.id))),
                (Some(_), false) => return Err(Error::MalformedGraph(format!("edge flag {} carries a label", f.id))),
                (None, false) => {}
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn flags(&self) -> &[Flag] {
        &self.flags
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn flag_index(&self, id: &str) -> Option<usize> {
        self.flags.iter().position(|f| f.id == id)
    }

    pub fn genus(&self, v: usize) -> u32 {
        self.vertices[v].genus
    }

    /// Indices of the flags at vertex `v`.
    pub fn flags_at(&self, v: usize) -> Vec<usize> {
        (0..self.flags.len()).filter(|&f| self.flags[f].vertex == v).collect()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.flags.iter().filter(|f| f.vertex == v).count()
    }

    pub fn is_tail(&self, f: usize) -> bool {
        self.flags[f].partner == f
    }

    /// Edges as flag-index pairs `(f, f̄)` with `f < f̄`.
    pub fn edge_flags(&self) -> Vec<(usize, usize)> {
        (0..self.flags.len())
            .filter(|&f| self.flags[f].partner > f)
            .map(|f| (f, self.flags[f].partner))
            .collect()
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.edge_flags()
            .into_iter()
            .map(|(a, b)| Edge::new(self.flags[a].id.clone(), self.flags[b].id.clone()))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.flags.iter().enumerate().filter(|(i, f)| f.partner > *i).count()
    }

    pub fn tail_flags(&self) -> Vec<usize> {
        (0..self.flags.len()).filter(|&f| self.is_tail(f)).collect()
    }

    pub fn tail_labels(&self) -> BTreeSet<String> {
        self.flags.iter().filter_map(|f| f.label.clone()).collect()
    }

    pub fn tail_flag(&self, label: &str) -> Option<usize> {
        self.flags.iter().position(|f| f.label.as_deref() == Some(label))
    }

    /// Flag indices of an edge, or `None` if it is not an edge of the graph.
    pub fn find_edge(&self, e: &Edge) -> Option<(usize, usize)> {
        let (a, b) = e.flags();
        let (ia, ib) = (self.flag_index(a)?, self.flag_index(b)?);
        (self.flags[ia].partner == ib && ia != ib).then_some((ia.min(ib), ia.max(ib)))
    }

    pub fn edge_of_flag(&self, f: usize) -> Option<Edge> {
        let p = self.flags[f].partner;
        (p != f).then(|| Edge::new(self.flags[f].id.clone(), self.flags[p].id.clone()))
    }

    /// The edge or tail a flag belongs to.
    pub fn cell_of_flag(&self, f: usize) -> Cell {
        match self.edge_of_flag(f) {
            Some(e) => Cell::Edge(e),
            None => Cell::Tail(self.flags[f].label.clone().unwrap()),
        }
    }

    pub fn cells(&self) -> Vec<Cell> {
        let mut cells: Vec<Cell> = self.edges().into_iter().map(Cell::Edge).collect();
        cells.extend(self.tail_labels().into_iter().map(Cell::Tail));
        cells
    }

    pub fn component_count(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for (a, b) in self.edge_flags() {
            let (ra, rb) = (
                find(&mut parent, self.flags[a].vertex),
                find(&mut parent, self.flags[b].vertex),
            );
            parent[ra] = rb;
        }
        (0..self.vertices.len()).filter(|&v| find(&mut parent, v) == v).count()
    }

    /// First Betti number of the underlying topological graph.
    pub fn betti_number(&self) -> usize {
        self.edge_count() + self.component_count() - self.vertices.len()
    }

    /// `Σ_v g(v) + b₁`.
    pub fn total_genus(&self) -> usize {
        self.vertices.iter().map(|v| v.genus as usize).sum::<usize>() + self.betti_number()
    }

    pub fn is_modular_stable_at(&self, v: usize) -> bool {
        2 * self.genus(v) as i64 - 2 + self.valence(v) as i64 > 0
    }

    /// `Σ_v (3g(v) − 3 + |F(v)|)`, the dimension of `∏_v M̄_{g(v),F(v)}`.
    pub fn moduli_dimension(&self) -> Result<usize> {
        let unstable: Vec<String> = (0..self.vertices.len())
            .filter(|&v| !self.is_modular_stable_at(v))
            .map(|v| self.vertices[v].id.clone())
            .collect();
        if !unstable.is_empty() {
            return Err(Error::Unstable(unstable));
        }
        Ok((0..self.vertices.len())
            .map(|v| 3 * self.genus(v) as usize + self.valence(v) - 3)
            .sum())
    }

    /// Rebuild from optional slots, dropping `None` entries and remapping
    /// indices. Partners of surviving flags must survive.
    fn compact(vertices: Vec<Option<Vertex>>, flags: Vec<Option<Flag>>) -> ModularGraph {
        let mut vmap = vec![usize::MAX; vertices.len()];
        let mut new_vertices = Vec::new();
        for (i, v) in vertices.into_iter().enumerate() {
            if let Some(v) = v {
                vmap[i] = new_vertices.len();
                new_vertices.push(v);
            }
        }
        let mut fmap = vec![usize::MAX; flags.len()];
        let mut next = 0;
        for (i, f) in flags.iter().enumerate() {
            if f.is_some() {
                fmap[i] = next;
                next += 1;
            }
        }
        let new_flags = flags
            .into_iter()
            .flatten()
            .map(|f| Flag {
                vertex: vmap[f.vertex],
                partner: fmap[f.partner],
                ..f
            })
            .collect();
        let g = ModularGraph {
            vertices: new_vertices,
            flags: new_flags,
        };
        debug_assert!(g.check().is_ok());
        g
    }

    fn slots(&self) -> (Vec<Option<Vertex>>, Vec<Option<Flag>>) {
        (
            self.vertices.iter().cloned().map(Some).collect(),
            self.flags.iter().cloned().map(Some).collect(),
        )
    }

    /// Fresh flag id not used in the graph, derived from `stem`.
    pub fn fresh_flag_id(&self, stem: &str) -> String {
        let used: BTreeSet<&str> = self.flags.iter().map(|f| f.id.as_str()).collect();
        if !used.contains(stem) {
            return stem.to_string();
        }
        (1..)
            .map(|k| format!("{stem}.{k}"))
            .find(|c| !used.contains(c.as_str()))
            .unwrap()
    }
}

/// Incremental construction of graphs; flag ids are generated as `f0, f1, …`
/// unless given explicitly.
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    vertices: Vec<Vertex>,
    flags: Vec<Flag>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, id: impl Into<String>, genus: u32) -> usize {
        self.vertices.push(Vertex { id: id.into(), genus });
        self.vertices.len() - 1
    }

    pub fn edge(&mut self, a: usize, b: usize) -> Edge {
        let (fa, fb) = (format!("f{}", self.flags.len()), format!("f{}", self.flags.len() + 1));
        self.named_edge(a, b, fa, fb)
    }

    pub fn named_edge(&mut self, a: usize, b: usize, fa: impl Into<String>, fb: impl Into<String>) -> Edge {
        let i = self.flags.len();
        let (fa, fb) = (fa.into(), fb.into());
        self.flags.push(Flag {
            id: fa.clone(),
            vertex: a,
            partner: i + 1,
            label: None,
        });
        self.flags.push(Flag {
            id: fb.clone(),
            vertex: b,
            partner: i,
            label: None,
        });
        Edge::new(fa, fb)
    }

    pub fn tail(&mut self, v: usize, label: impl Into<String>) {
        let label = label.into();
        let i = self.flags.len();
        self.flags.push(Flag {
            id: format!("t:{label}"),
            vertex: v,
            partner: i,
            label: Some(label),
        });
    }

    pub fn tails<I, S>(&mut self, v: usize, labels: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        for l in labels {
            self.tail(v, l);
        }
    }

    pub fn build(self) -> Result<ModularGraph> {
        ModularGraph::new(self.vertices, self.flags)
    }
}

/// Outcome of a stability check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StabilityReport {
    Stable,
    Unstable(Vec<String>),
}

impl StabilityReport {
    pub fn is_stable(&self) -> bool {
        matches!(self, StabilityReport::Stable)
    }
}

/// A modular graph together with a curve-class marking of its vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarkedGraph {
    graph: ModularGraph,
    monoid: DegreeMonoid,
    marking: Vec<CurveClass>,
}

impl MarkedGraph {
    pub fn new(graph: ModularGraph, monoid: DegreeMonoid, marking: Vec<CurveClass>) -> Result<Self> {
        if marking.len() != graph.vertex_count() {
            return Err(Error::MalformedGraph(format!(
                "{} markings for {} vertices",
                marking.len(),
                graph.vertex_count()
            )));
        }
        for b in &marking {
            monoid.check(b)?;
        }
        Ok(MarkedGraph { graph, monoid, marking })
    }

    /// Marks every vertex with the zero class.
    pub fn unmarked(graph: ModularGraph, monoid: DegreeMonoid) -> Self {
        let marking = vec![monoid.zero(); graph.vertex_count()];
        MarkedGraph { graph, monoid, marking }
    }

    pub fn graph(&self) -> &ModularGraph {
        &self.graph
    }

    pub fn monoid(&self) -> &DegreeMonoid {
        &self.monoid
    }

    pub fn marking(&self) -> &[CurveClass] {
        &self.marking
    }

    pub fn marking_of(&self, id: &str) -> Option<&CurveClass> {
        self.graph.vertex_index(id).map(|v| &self.marking[v])
    }

    pub fn total_class(&self) -> CurveClass {
        self.marking.iter().fold(self.monoid.zero(), |acc, b| &acc + b)
    }

    pub fn is_stable_at(&self, v: usize) -> bool {
        !self.marking[v].is_zero() || self.graph.is_modular_stable_at(v)
    }

    /// Checks `2g(v) − 2 + |F(v)| > 0` at every vertex with zero marking.
    pub fn validate(&self) -> Result<StabilityReport> {
        self.graph.check()?;
        let bad: Vec<String> = (0..self.graph.vertex_count())
            .filter(|&v| !self.is_stable_at(v))
            .map(|v| self.graph.vertices[v].id.clone())
            .collect();
        Ok(if bad.is_empty() {
            StabilityReport::Stable
        } else {
            StabilityReport::Unstable(bad)
        })
    }

    pub fn is_stable(&self) -> bool {
        self.validate().map(|r| r.is_stable()).unwrap_or(false)
    }

    /// Contracts an edge. For a non-looping edge the endpoints merge into the
    /// endpoint of lower index, adding genera and markings; a loop raises the
    /// genus of its vertex by one.
    pub fn contract_edge(&self, e: &Edge) -> Result<MarkedGraph> {
        let (fa, fb) = self.graph.find_edge(e).ok_or_else(|| Error::NotAnEdge(e.to_string()))?;
        let (va, vb) = (self.graph.flags[fa].vertex, self.graph.flags[fb].vertex);
        let (mut vertices, mut flags) = self.graph.slots();
        let mut marking: Vec<Option<CurveClass>> = self.marking.iter().cloned().map(Some).collect();
        flags[fa] = None;
        flags[fb] = None;
        if va == vb {
            vertices[va].as_mut().unwrap().genus += 1;
        } else {
            let (keep, gone) = (va.min(vb), va.max(vb));
            let g = self.graph.genus(gone);
            vertices[keep].as_mut().unwrap().genus += g;
            vertices[gone] = None;
            let m = marking[gone].take().unwrap();
            let merged = marking[keep].as_ref().unwrap() + &m;
            marking[keep] = Some(merged);
            for f in flags.iter_mut().flatten() {
                if f.vertex == gone {
                    f.vertex = keep;
                }
            }
        }
        Ok(MarkedGraph {
            graph: ModularGraph::compact(vertices, flags),
            monoid: self.monoid.clone(),
            marking: marking.into_iter().flatten().collect(),
        })
    }

    /// Adds new tails; `assignment` maps each new label to a vertex id.
    pub fn add_tails(&self, assignment: &BTreeMap<String, String>) -> Result<MarkedGraph> {
        let existing = self.graph.tail_labels();
        let mut g = self.graph.clone();
        for (label, vid) in assignment {
            if existing.contains(label) {
                return Err(Error::LabelCollision(label.clone()));
            }
            let v = g
                .vertex_index(vid)
                .ok_or_else(|| Error::MalformedGraph(format!("no vertex {vid}")))?;
            let id = g.fresh_flag_id(&format!("t:{label}"));
            let i = g.flags.len();
            g.flags.push(Flag {
                id,
                vertex: v,
                partner: i,
                label: Some(label.clone()),
            });
        }
        Ok(MarkedGraph {
            graph: g,
            monoid: self.monoid.clone(),
            marking: self.marking.clone(),
        })
    }

    pub(crate) fn from_parts_unchecked(graph: ModularGraph, monoid: DegreeMonoid, marking: Vec<CurveClass>) -> Self {
        debug_assert_eq!(graph.vertex_count(), marking.len());
        MarkedGraph { graph, monoid, marking }
    }
}

pub(crate) fn compact_graph(vertices: Vec<Option<Vertex>>, flags: Vec<Option<Flag>>) -> ModularGraph {
    ModularGraph::compact(vertices, flags)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1() -> DegreeMonoid {
        DegreeMonoid::p1()
    }

    fn one_vertex(genus: u32, tails: usize, beta: u64) -> MarkedGraph {
        let mut b = GraphBuilder::new();
        let v = b.vertex("v", genus);
        b.tails(v, (1..=tails).map(|i| i.to_string()));
        MarkedGraph::new(b.build().unwrap(), p1(), vec![CurveClass::new(vec![beta])]).unwrap()
    }

    #[test]
    fn stability_examples() {
        assert_eq!(one_vertex(0, 3, 0).validate().unwrap(), StabilityReport::Stable);
        assert_eq!(
            one_vertex(0, 2, 0).validate().unwrap(),
            StabilityReport::Unstable(vec!["v".into()])
        );
        assert_eq!(one_vertex(1, 1, 0).validate().unwrap(), StabilityReport::Stable);
        assert!(one_vertex(0, 2, 1).is_stable());
        assert!(!one_vertex(0, 0, 0).is_stable());
    }

    #[test]
    fn malformed_involution_is_rejected() {
        let vertices = vec![Vertex {
            id: "v".into(),
            genus: 0,
        }];
        let flags = vec![
            Flag {
                id: "a".into(),
                vertex: 0,
                partner: 1,
                label: None,
            },
            Flag {
                id: "b".into(),
                vertex: 0,
                partner: 2,
                label: None,
            },
            Flag {
                id: "c".into(),
                vertex: 0,
                partner: 0,
                label: None,
            },
        ];
        assert!(matches!(
            ModularGraph::new(vertices.clone(), flags),
            Err(Error::MalformedGraph(_))
        ));
        let dangling = vec![Flag {
            id: "a".into(),
            vertex: 0,
            partner: 7,
            label: None,
        }];
        assert!(ModularGraph::new(vertices.clone(), dangling).is_err());
        let bad_vertex = vec![Flag {
            id: "a".into(),
            vertex: 3,
            partner: 0,
            label: Some("1".into()),
        }];
        assert!(ModularGraph::new(vertices, bad_vertex).is_err());
    }

    #[test]
    fn contract_non_loop() {
        let mut b = GraphBuilder::new();
        let v1 = b.vertex("v1", 0);
        let v2 = b.vertex("v2", 1);
        let e = b.edge(v1, v2);
        b.tails(v1, ["1", "2"]);
        b.tails(v2, ["3"]);
        let g = MarkedGraph::new(
            b.build().unwrap(),
            p1(),
            vec![CurveClass::new(vec![1]), CurveClass::new(vec![0])],
        )
        .unwrap();
        let c = g.contract_edge(&e).unwrap();
        assert_eq!(c.graph().vertex_count(), 1);
        assert_eq!(c.graph().genus(0), 1);
        assert_eq!(c.marking()[0], CurveClass::new(vec![1]));
        assert_eq!(
            c.graph().tail_labels(),
            ["1", "2", "3"].iter().map(|s| s.to_string()).collect()
        );
        assert_eq!(c.graph().edge_count(), 0);
    }

    #[test]
    fn contract_loop() {
        let mut b = GraphBuilder::new();
        let v = b.vertex("v", 0);
        let e = b.edge(v, v);
        b.tail(v, "1");
        let g = MarkedGraph::unmarked(b.build().unwrap(), p1());
        assert_eq!(g.graph().total_genus(), 1);
        let c = g.contract_edge(&e).unwrap();
        assert_eq!(c.graph().genus(0), 1);
        assert_eq!(c.graph().total_genus(), 1);
        assert!(matches!(c.contract_edge(&e), Err(Error::NotAnEdge(_))));
    }

    #[test]
    fn moduli_dimension_examples() {
        assert_eq!(one_vertex(0, 5, 0).graph().moduli_dimension().unwrap(), 2);
        assert_eq!(one_vertex(1, 1, 0).graph().moduli_dimension().unwrap(), 1);
        let mut b = GraphBuilder::new();
        let v1 = b.vertex("a", 0);
        let v2 = b.vertex("b", 0);
        b.edge(v1, v2);
        b.tails(v1, ["1", "2"]);
        b.tails(v2, ["3", "4"]);
        assert_eq!(b.build().unwrap().moduli_dimension().unwrap(), 0);
        assert!(matches!(
            one_vertex(0, 2, 0).graph().moduli_dimension(),
            Err(Error::Unstable(_))
        ));
    }

    #[test]
    fn add_tails_examples() {
        let g = one_vertex(0, 2, 0);
        assert!(!g.is_stable());
        let mut a = BTreeMap::new();
        a.insert("x".to_string(), "v".to_string());
        let h = g.add_tails(&a).unwrap();
        assert!(h.is_stable());
        assert_eq!(h.graph().tail_labels().len(), 3);
        assert_eq!(g.add_tails(&BTreeMap::new()).unwrap(), g);
        let mut clash = BTreeMap::new();
        clash.insert("1".to_string(), "v".to_string());
        assert!(matches!(g.add_tails(&clash), Err(Error::LabelCollision(_))));
    }
}
