//! JSON encoding of (marked) graphs.
//!
//! ```json
//! {"vertices": [{"id": "v1", "genus": 0, "marking": [2, 1]}],
//!  "flags": [{"id": "f1", "vertex": "v1"}, {"id": "f2", "vertex": "v2"}],
//!  "edges": [["f1", "f2"]],
//!  "tails": [{"label": "x3", "vertex": "v1"}]}
//! ```
//!
//! Edge flags are declared in `flags`; tail flags get an id derived from the
//! label unless `flag` is given. `monoid` is optional and defaults to `ℕ^r`
//! with `c₁ = 2` on each generator, `r` being the marking length.

use serde::{Deserialize, Serialize};

use super::{Flag, MarkedGraph, ModularGraph, Vertex};
use crate::curve::{CurveClass, DegreeMonoid};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: String,
    #[serde(default)]
    pub genus: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marking: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagJson {
    pub id: String,
    pub vertex: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailJson {
    pub label: String,
    pub vertex: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    #[serde(default)]
    pub flags: Vec<FlagJson>,
    #[serde(default)]
    pub edges: Vec<[String; 2]>,
    #[serde(default)]
    pub tails: Vec<TailJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monoid: Option<DegreeMonoid>,
}

impl GraphJson {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_marked(&self) -> Result<MarkedGraph> {
        let vertices: Vec<Vertex> = self
            .vertices
            .iter()
            .map(|v| Vertex {
                id: v.id.clone(),
                genus: v.genus,
            })
            .collect();
        let vidx = |id: &str| {
            vertices
                .iter()
                .position(|v| v.id == id)
                .ok_or_else(|| Error::MalformedGraph(format!("unknown vertex {id}")))
        };
        let mut flags: Vec<Flag> = Vec::new();
        for f in &self.flags {
            flags.push(Flag {
                id: f.id.clone(),
                vertex: vidx(&f.vertex)?,
                partner: usize::MAX,
                label: None,
            });
        }
        for [a, b] in &self.edges {
            let ia = flags.iter().position(|f| &f.id == a);
            let ib = flags.iter().position(|f| &f.id == b);
            let (Some(ia), Some(ib)) = (ia, ib) else {
                return Err(Error::MalformedGraph(format!("edge [{a}, {b}] uses undeclared flags")));
            };
            if ia == ib || flags[ia].partner != usize::MAX || flags[ib].partner != usize::MAX {
                return Err(Error::MalformedGraph(format!("flag reused in edge [{a}, {b}]")));
            }
            flags[ia].partner = ib;
            flags[ib].partner = ia;
        }
        if let Some(f) = flags.iter().find(|f| f.partner == usize::MAX) {
            return Err(Error::MalformedGraph(format!("flag {} is in no edge", f.id)));
        }
        for t in &self.tails {
            let i = flags.len();
            let id = t.flag.clone().unwrap_or_else(|| format!("t:{}", t.label));
            flags.push(Flag {
                id,
                vertex: vidx(&t.vertex)?,
                partner: i,
                label: Some(t.label.clone()),
            });
        }
        let graph = ModularGraph::new(vertices, flags)?;

        let rank = self
            .monoid
            .as_ref()
            .map(|m| m.rank())
            .or_else(|| self.vertices.iter().find_map(|v| v.marking.as_ref().map(|m| m.len())))
            .unwrap_or(1);
        let monoid = match &self.monoid {
            Some(m) => m.clone(),
            None => DegreeMonoid::new((1..=rank).map(|i| format!("g{i}")).collect(), vec![2; rank])?,
        };
        let marking = self
            .vertices
            .iter()
            .map(|v| v.marking.clone().map(CurveClass::new).unwrap_or_else(|| monoid.zero()))
            .collect();
        MarkedGraph::new(graph, monoid, marking)
    }

    pub fn from_marked(g: &MarkedGraph) -> Self {
        let gr = g.graph();
        let vertices = gr
            .vertices()
            .iter()
            .zip(g.marking())
            .map(|(v, m)| VertexJson {
                id: v.id.clone(),
                genus: v.genus,
                marking: Some(m.coords().to_vec()),
            })
            .collect();
        let vid = |i: usize| gr.vertices()[i].id.clone();
        let mut flags = Vec::new();
        let mut edges = Vec::new();
        for (a, b) in gr.edge_flags() {
            let (fa, fb) = (&gr.flags()[a], &gr.flags()[b]);
            flags.push(FlagJson {
                id: fa.id.clone(),
                vertex: vid(fa.vertex),
            });
            flags.push(FlagJson {
                id: fb.id.clone(),
                vertex: vid(fb.vertex),
            });
            edges.push([fa.id.clone(), fb.id.clone()]);
        }
        let tails = gr
            .tail_flags()
            .into_iter()
            .map(|f| {
                let fl = &gr.flags()[f];
                let label = fl.label.clone().unwrap();
                let flag = (fl.id != format!("t:{label}")).then(|| fl.id.clone());
                TailJson {
                    label,
                    vertex: vid(fl.vertex),
                    flag,
                }
            })
            .collect();
        GraphJson {
            vertices,
            flags,
            edges,
            tails,
            monoid: Some(g.monoid().clone()),
        }
    }
}

impl MarkedGraph {
    pub fn from_json(text: &str) -> Result<MarkedGraph> {
        GraphJson::parse(text)?.to_marked()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GraphJson::from_marked(self)).expect("graph serializes")
    }
}
