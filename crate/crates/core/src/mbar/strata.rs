//! Boundary strata of `M̄_{0,n}` as stable trees with labeled leaves.
//!
//! A stratum is determined by the set of boundary divisors containing it,
//! which is a family of pairwise compatible splits of `{1..n}`. Each split is
//! stored as the side not containing point 1, as a bitmask (bit `i - 1` for
//! point `i`).

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, ModularGraph};

/// Normalized subset of `{1..n}` naming a boundary divisor.
pub type Split = u32;

/// Brings a subset to the side not containing point 1.
pub fn normalize_split(n: usize, s: Split) -> Split {
    let full = full_mask(n);
    if s & 1 != 0 {
        full & !s
    } else {
        s
    }
}

pub fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Parses `"1,2"` into a normalized split, checking `2 ≤ |S| ≤ n − 2`.
pub fn parse_split(n: usize, text: &str) -> Result<Split> {
    let mut s = 0u32;
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let i: usize = part.parse().map_err(|_| Error::MalformedSubset(text.to_string()))?;
        if i == 0 || i > n {
            return Err(Error::MalformedSubset(format!("{text}: point {i} outside 1..{n}")));
        }
        s |= 1 << (i - 1);
    }
    split_from_mask(n, s)
}

pub fn split_from_mask(n: usize, s: u32) -> Result<Split> {
    if !(4..=32).contains(&n) || s & !full_mask(n) != 0 {
        return Err(Error::MalformedSubset(format!("{s:#b} for n = {n}")));
    }
    let k = s.count_ones() as usize;
    if k < 2 || k > n - 2 {
        return Err(Error::MalformedSubset(format!(
            "{} has {k} points; need 2..={}",
            fmt_split(s),
            n - 2
        )));
    }
    Ok(normalize_split(n, s))
}

pub fn split_points(s: Split) -> Vec<usize> {
    (0..32).filter(|i| s >> i & 1 == 1).map(|i| i + 1).collect()
}

pub fn fmt_split(s: Split) -> String {
    let pts: Vec<String> = split_points(s).iter().map(|p| p.to_string()).collect();
    format!("{{{}}}", pts.join(","))
}

/// Two normalized splits are compatible iff nested or disjoint.
pub fn compatible(a: Split, b: Split) -> bool {
    a & b == 0 || a & b == a || a & b == b
}

/// All normalized splits of `{1..n}` in canonical order (by size, then by
/// sorted point list).
pub fn all_splits(n: usize) -> Vec<Split> {
    let mut out: Vec<Split> = (0..=full_mask(n))
        .filter(|&s| s & 1 == 0)
        .filter(|&s| (2..=n - 2).contains(&(s.count_ones() as usize)))
        .collect();
    out.sort_by_key(|&s| (s.count_ones(), split_points(s)));
    out
}

/// A boundary stratum of `M̄_{0,n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StratumTree {
    n: usize,
    splits: Vec<Split>,
}

impl StratumTree {
    /// Stratum from pairwise compatible, distinct normalized splits.
    pub fn new(n: usize, mut splits: Vec<Split>) -> Result<Self> {
        if n < 3 {
            return Err(Error::DimensionOutOfRange(format!("n = {n} < 3")));
        }
        for s in &mut splits {
            *s = split_from_mask(n, *s)?;
        }
        splits.sort_by_key(|&s| (s.count_ones(), split_points(s)));
        if splits.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedSubset("repeated split".into()));
        }
        for (i, &a) in splits.iter().enumerate() {
            if let Some(&b) = splits[i + 1..].iter().find(|&&b| !compatible(a, b)) {
                return Err(Error::MalformedSubset(format!(
                    "{} and {} cross",
                    fmt_split(a),
                    fmt_split(b)
                )));
            }
        }
        Ok(StratumTree { n, splits })
    }

    pub fn fundamental(n: usize) -> Self {
        StratumTree { n, splits: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// One normalized split per edge.
    pub fn splits(&self) -> &[Split] {
        &self.splits
    }

    pub fn edge_count(&self) -> usize {
        self.splits.len()
    }

    pub fn dimension(&self) -> usize {
        self.n - 3 - self.splits.len()
    }

    /// Canonical text form, e.g. `[{2,3},{4,5}]`.
    pub fn key(&self) -> String {
        let parts: Vec<String> = self.splits.iter().map(|&s| fmt_split(s)).collect();
        format!("[{}]", parts.join(","))
    }

    pub fn parse_key(n: usize, key: &str) -> Result<Self> {
        let inner = key
            .trim()
            .strip_prefix('[')
            .and_then(|k| k.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("stratum key {key}")))?;
        let mut splits = Vec::new();
        for part in inner
            .split('}')
            .map(|p| p.trim_start_matches(',').trim())
            .filter(|p| !p.is_empty())
        {
            let body = part
                .strip_prefix('{')
                .ok_or_else(|| Error::Parse(format!("stratum key {key}")))?;
            splits.push(parse_split(n, body)?);
        }
        StratumTree::new(n, splits)
    }

    /// The dual tree. The vertex holding leaf 1 is `r`; the vertex below
    /// split `S` is `c` followed by the points of `S`.
    pub fn to_graph(&self) -> ModularGraph {
        let mut b = GraphBuilder::new();
        let root = b.vertex("r", 0);
        let ids: Vec<usize> = self
            .splits
            .iter()
            .map(|&s| {
                let pts: Vec<String> = split_points(s).iter().map(|p| p.to_string()).collect();
                b.vertex(format!("c{}", pts.join(".")), 0)
            })
            .collect();
        // parent = smallest split strictly containing this one
        let parent = |s: Split| {
            self.splits
                .iter()
                .enumerate()
                .filter(|&(_, &t)| t != s && t & s == s)
                .min_by_key(|&(_, &t)| t.count_ones())
                .map_or(root, |(j, _)| ids[j])
        };
        for (i, &s) in self.splits.iter().enumerate() {
            let p = parent(s);
            b.named_edge(p, ids[i], format!("h{}+", i), format!("h{}-", i));
        }
        for pt in 1..=self.n {
            let bit = 1u32 << (pt - 1);
            let home = self
                .splits
                .iter()
                .enumerate()
                .filter(|&(_, &t)| t & bit != 0)
                .min_by_key(|&(_, &t)| t.count_ones())
                .map_or(root, |(j, _)| ids[j]);
            b.tail(home, pt.to_string());
        }
        b.build().expect("stratum tree is well formed")
    }
}

impl fmt::Display for StratumTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// All strata of `M̄_{0,n}` of dimension `dim`, in canonical order.
pub fn enumerate_strata(n: usize, dim: usize) -> Result<Vec<StratumTree>> {
    if !(3..=32).contains(&n) {
        return Err(Error::DimensionOutOfRange(format!("n = {n}")));
    }
    if dim > n - 3 {
        return Err(Error::DimensionOutOfRange(format!("dim {dim} > n - 3 = {}", n - 3)));
    }
    let edges = n - 3 - dim;
    let splits = if n >= 4 { all_splits(n) } else { Vec::new() };
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(edges);
    extend(&splits, 0, edges, &mut chosen, &mut |c: &[Split]| {
        out.push(StratumTree { n, splits: c.to_vec() });
    });
    Ok(out)
}

fn extend(splits: &[Split], from: usize, want: usize, chosen: &mut Vec<Split>, emit: &mut impl FnMut(&[Split])) {
    if chosen.len() == want {
        emit(chosen);
        return;
    }
    for i in from..splits.len() {
        let s = splits[i];
        if chosen.iter().all(|&c| compatible(c, s)) {
            chosen.push(s);
            extend(splits, i + 1, want, chosen, emit);
            chosen.pop();
        }
    }
}
