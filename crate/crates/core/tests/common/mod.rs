//! Brute-force oracles shared by the integration tests. None of them call
//! into the code paths they are used to check.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use gwprod_core::graph::{canonicalize_modular, CanonicalForm, GraphBuilder, ModularGraph};
use gwprod_core::mbar::StratumTree;

pub fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

// ---------------------------------------------------------------------------
// M̄_{0,n} by Keel relations

/// A boundary divisor as the side of its partition avoiding point 1.
pub type Side = BTreeSet<usize>;

pub fn side(n: usize, pts: &[usize]) -> Side {
    let s: Side = pts.iter().copied().collect();
    if s.contains(&1) {
        (1..=n).filter(|p| !s.contains(p)).collect()
    } else {
        s
    }
}

pub fn all_sides(n: usize) -> Vec<Side> {
    (0u32..1 << n)
        .map(|m| (1..=n).filter(|&p| m >> (p - 1) & 1 == 1).collect::<Side>())
        .filter(|s| !s.contains(&1) && s.len() >= 2 && n - s.len() >= 2)
        .collect()
}

fn crosses(n: usize, a: &Side, b: &Side) -> bool {
    let ac: Side = (1..=n).filter(|p| !a.contains(p)).collect();
    let bc: Side = (1..=n).filter(|p| !b.contains(p)).collect();
    [(a, b), (a, &bc), (&ac, b), (&ac, &bc)]
        .iter()
        .all(|(x, y)| x.intersection(y).next().is_some())
}

/// `∫ ∏ D_S` over `M̄_{0,n}` for `n − 3` factors. Distinct pairwise
/// compatible factors meet in one point. A repeated `D_S` is traded through
/// `Σ_{i,j∈T; k,l∉T} D_T = Σ_{i,k∈T; j,l∉T} D_T`, with `i, j` on different
/// branches at the `S` end of the edge and `k, l` on different branches at
/// the other end: the right side crosses `S`, and every surviving `D_T` on
/// the left is new, so each step removes one repeat.
pub fn keel_divisor_integral(n: usize, factors: &[Side]) -> BigInt {
    keel(n, factors.to_vec(), 0)
}

fn complement(n: usize, s: &Side) -> Side {
    (1..=n).filter(|p| !s.contains(p)).collect()
}

/// One point from each of two branches hanging below `a` in the tree of the
/// (compatible) factors.
fn two_branches(n: usize, a: &Side, factors: &[Side]) -> (usize, usize) {
    let mut below: Vec<Side> = Vec::new();
    for f in factors {
        for x in [f.clone(), complement(n, f)] {
            if x.len() < a.len() && x.is_subset(a) {
                below.push(x);
            }
        }
    }
    let maximal: BTreeSet<&Side> = below
        .iter()
        .filter(|x| !below.iter().any(|y| y.len() > x.len() && x.is_subset(y)))
        .collect();
    let mut reps: Vec<usize> = maximal.iter().map(|x| *x.iter().next().unwrap()).collect();
    reps.extend(a.iter().filter(|p| !maximal.iter().any(|x| x.contains(p))));
    (reps[0], reps[1])
}

fn keel(n: usize, mut factors: Vec<Side>, depth: usize) -> BigInt {
    assert!(depth <= n, "Keel expansion did not terminate");
    assert_eq!(factors.len(), n - 3);
    for i in 0..factors.len() {
        for j in i + 1..factors.len() {
            if crosses(n, &factors[i], &factors[j]) {
                return BigInt::zero();
            }
        }
    }
    factors.sort();
    let Some(pos) = factors.windows(2).position(|w| w[0] == w[1]) else {
        return BigInt::one();
    };
    let s = factors.remove(pos);
    let (i, j) = two_branches(n, &s, &factors);
    let (k, l) = two_branches(n, &complement(n, &s), &factors);
    let mut total = BigInt::zero();
    for t in all_sides(n) {
        let full = |p: usize| t.contains(&p);
        // T or its complement contains i, j and avoids k, l
        let hit = (full(i) && full(j) && !full(k) && !full(l)) || (!full(i) && !full(j) && full(k) && full(l));
        if hit && t != s {
            let mut next = factors.clone();
            next.push(t);
            total -= keel(n, next, depth + 1);
        }
    }
    total
}

/// `ψ_i = Σ_{S ∋ i; j,k ∉ S} D_S` for the two smallest points `j, k ≠ i`.
pub fn kapranov_psi(n: usize, i: usize) -> Vec<Side> {
    let others: Vec<usize> = (1..=n).filter(|&p| p != i).take(2).collect();
    let (j, k) = (others[0], others[1]);
    (0u32..1 << n)
        .map(|m| (1..=n).filter(|&p| m >> (p - 1) & 1 == 1).collect::<Side>())
        .filter(|s| s.contains(&i) && !s.contains(&j) && !s.contains(&k) && s.len() >= 2 && n - s.len() >= 2)
        .map(|s| side(n, &s.into_iter().collect::<Vec<_>>()))
        .collect()
}

/// Integral of `∏ D_S · ∏ ψ_i^{a_i}` with every ψ-class expanded into
/// boundary divisors.
pub fn oracle_integral(n: usize, divisors: &[Side], psi: &[u32]) -> BigRational {
    let degree = divisors.len() + psi.iter().sum::<u32>() as usize;
    if degree != n - 3 {
        return BigRational::zero();
    }
    let mut expansions: Vec<Vec<Side>> = Vec::new();
    for (idx, &a) in psi.iter().enumerate() {
        for _ in 0..a {
            expansions.push(kapranov_psi(n, idx + 1));
        }
    }
    let mut total = BigInt::zero();
    let mut chosen = divisors.to_vec();
    expand(n, &expansions, 0, &mut chosen, &mut total);
    BigRational::from_integer(total)
}

fn expand(n: usize, sums: &[Vec<Side>], at: usize, chosen: &mut Vec<Side>, total: &mut BigInt) {
    if at == sums.len() {
        *total += keel_divisor_integral(n, chosen);
        return;
    }
    for d in &sums[at] {
        chosen.push(d.clone());
        expand(n, sums, at + 1, chosen, total);
        chosen.pop();
    }
}

/// Every monomial of degree `n − 3` in boundary divisors and ψ-classes,
/// as (divisor sides, ψ exponents).
pub fn all_top_monomials(n: usize) -> Vec<(Vec<Side>, Vec<u32>)> {
    let sides = all_sides(n);
    let mut gens: Vec<Option<usize>> = sides.iter().enumerate().map(|(i, _)| Some(i)).collect();
    let psi_base = gens.len();
    gens.extend((0..n).map(|_| None));
    let total = gens.len();
    let mut out = Vec::new();
    let mut pick = Vec::new();
    multisets(total, n - 3, 0, &mut pick, &mut |choice| {
        let mut divs = Vec::new();
        let mut psi = vec![0u32; n];
        for &g in choice {
            if g < psi_base {
                divs.push(sides[g].clone());
            } else {
                psi[g - psi_base] += 1;
            }
        }
        out.push((divs, psi));
    });
    out
}

fn multisets(total: usize, size: usize, from: usize, pick: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if pick.len() == size {
        f(pick);
        return;
    }
    for g in from..total {
        pick.push(g);
        multisets(total, size, g, pick, f);
        pick.pop();
    }
}

pub fn side_mask(s: &Side) -> u32 {
    s.iter().fold(0, |m, p| m | 1 << (p - 1))
}

// ---------------------------------------------------------------------------
// stable trees by vertex splitting

/// All stable trees with leaves `1..=n`, up to isomorphism, grouped by edge
/// count. Grown from the one-vertex tree by splitting vertices in every way.
pub fn trees_by_splitting(n: usize) -> BTreeMap<usize, BTreeSet<CanonicalForm>> {
    // a tree is a list of vertices, each a list of "ports": leaf labels or
    // edge ids shared by exactly two vertices
    #[derive(Clone)]
    enum Port {
        Leaf(usize),
        Edge(usize),
    }
    fn to_graph(vertices: &[Vec<Port>]) -> ModularGraph {
        let mut b = GraphBuilder::new();
        let ids: Vec<usize> = (0..vertices.len()).map(|i| b.vertex(format!("u{i}"), 0)).collect();
        let mut ends: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, ports) in vertices.iter().enumerate() {
            for p in ports {
                match p {
                    Port::Leaf(l) => b.tail(ids[v], l.to_string()),
                    Port::Edge(e) => ends.entry(*e).or_default().push(v),
                }
            }
        }
        for (_, vs) in ends {
            b.edge(ids[vs[0]], ids[vs[1]]);
        }
        b.build().unwrap()
    }

    let mut out: BTreeMap<usize, BTreeSet<CanonicalForm>> = BTreeMap::new();
    let start = vec![(1..=n).map(Port::Leaf).collect::<Vec<_>>()];
    let mut frontier = vec![start];
    let mut edges = 0;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        let mut seen = BTreeSet::new();
        for t in &frontier {
            out.entry(edges)
                .or_default()
                .insert(canonicalize_modular(&to_graph(t)).form);
        }
        for t in frontier {
            for v in 0..t.len() {
                let ports = &t[v];
                let k = ports.len();
                if k < 4 {
                    continue;
                }
                // each side keeps at least two old ports
                for mask in 0u32..1 << k {
                    let a = mask.count_ones() as usize;
                    if a < 2 || k - a < 2 || mask & 1 == 0 {
                        continue;
                    }
                    let mut left: Vec<Port> = Vec::new();
                    let mut right: Vec<Port> = Vec::new();
                    for (i, p) in ports.iter().enumerate() {
                        if mask >> i & 1 == 1 {
                            left.push(p.clone());
                        } else {
                            right.push(p.clone());
                        }
                    }
                    left.push(Port::Edge(edges + 1000));
                    right.push(Port::Edge(edges + 1000));
                    let mut tree = t.clone();
                    tree[v] = left;
                    tree.push(right);
                    // renumber the fresh edge id so later splits stay unique
                    let fresh = 10_000 * (edges + 1) + tree.len();
                    for ports in &mut tree {
                        for p in ports.iter_mut() {
                            if let Port::Edge(e) = p {
                                if *e == edges + 1000 {
                                    *e = fresh;
                                }
                            }
                        }
                    }
                    let form = canonicalize_modular(&to_graph(&tree)).form;
                    if seen.insert(form) {
                        next.push(tree);
                    }
                }
            }
        }
        frontier = next;
        edges += 1;
    }
    out
}

pub fn strata_forms(strata: &[StratumTree]) -> BTreeSet<CanonicalForm> {
    strata
        .iter()
        .map(|s| canonicalize_modular(&s.to_graph()).form)
        .collect()
}

// ---------------------------------------------------------------------------
// P¹ splitting axiom, summed term by term

fn p1_vertex(d: u64, points: usize, identities: usize) -> i64 {
    // zero-dimensional classes only: b = 2 − 2d
    match (d, points, identities) {
        (0, 1, 2) => 1,
        (1, a, 0) if a >= 3 => 1,
        _ => 0,
    }
}

/// Sum over every degree distribution on the vertices of `s` and every
/// choice of `1⊗pt` / `pt⊗1` per edge.
pub fn exhaustive_stratum_pairing(d: u64, s: &StratumTree) -> BigInt {
    let g = s.to_graph();
    let nv = g.vertex_count();
    let tails: Vec<usize> = (0..nv)
        .map(|v| g.flags_at(v).iter().filter(|&&f| g.is_tail(f)).count())
        .collect();
    let ends: Vec<(usize, usize)> = g
        .edge_flags()
        .iter()
        .map(|&(a, b)| (g.flags()[a].vertex, g.flags()[b].vertex))
        .collect();
    let mut total = BigInt::zero();
    let mut deg = vec![0u64; nv];
    loop {
        if deg.iter().sum::<u64>() == d {
            for choice in 0u64..1 << ends.len() {
                let mut points = tails.clone();
                for (e, &(a, b)) in ends.iter().enumerate() {
                    points[if choice >> e & 1 == 1 { a } else { b }] += 1;
                }
                let term: i64 = (0..nv)
                    .map(|v| p1_vertex(deg[v], points[v], g.valence(v) - points[v]))
                    .product();
                total += term;
            }
        }
        // odometer over [0, d]^nv
        let mut i = 0;
        while i < nv && deg[i] == d {
            deg[i] = 0;
            i += 1;
        }
        if i == nv {
            break;
        }
        deg[i] += 1;
    }
    total
}

/// `(−1)^s`, `s = Σ_{i>j} γ_i ε_j`, summed literally.
pub fn sign_by_summation(gamma: &[i64], eps: &[i64]) -> i32 {
    let mut s: i64 = 0;
    for i in 0..gamma.len() {
        for j in 0..i {
            s += gamma[i] * eps[j];
        }
    }
    if s.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

// ---------------------------------------------------------------------------
// automorphisms by flag permutations

pub fn brute_force_automorphisms(g: &ModularGraph, marking: &[Vec<u64>]) -> u64 {
    let nf = g.flags().len();
    let fl = g.flags();
    let mut count = 0;
    let mut perm: Vec<usize> = (0..nf).collect();
    permute(&mut perm, 0, &mut |p| {
        let mut vmap = vec![usize::MAX; g.vertex_count()];
        for f in 0..nf {
            let (v, w) = (fl[f].vertex, fl[p[f]].vertex);
            if vmap[v] != usize::MAX && vmap[v] != w {
                return;
            }
            vmap[v] = w;
        }
        // a flagless vertex is the whole (connected) graph
        for (v, w) in vmap.iter_mut().enumerate() {
            if *w == usize::MAX && g.flags_at(v).is_empty() {
                *w = v;
            }
        }
        let ok = (0..nf).all(|f| p[fl[f].partner] == fl[p[f]].partner && fl[f].label == fl[p[f]].label)
            && (0..g.vertex_count())
                .all(|v| vmap[v] != usize::MAX && g.genus(v) == g.genus(vmap[v]) && marking[v] == marking[vmap[v]]);
        if ok {
            count += 1;
        }
    });
    count
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

// ---------------------------------------------------------------------------
// splittings of one vertex class

/// Number of ways to split the class `beta` over the two ends of a
/// contracted edge: all `∏(βᵢ + 1)` pairs, minus those leaving a zero class
/// on an end that is unstable without it. Ends are `(genus, valence)` in the
/// uncontracted graph.
pub fn splitting_count(beta: &[u64], ends: [(u32, usize); 2]) -> usize {
    let mut count = 0;
    let mut b1 = vec![0u64; beta.len()];
    loop {
        let zero1 = b1.iter().all(|&x| x == 0);
        let zero2 = b1.iter().zip(beta).all(|(x, b)| x == b);
        let stable = |(g, val): (u32, usize), zero: bool| !zero || 2 * g as usize + val >= 3;
        if stable(ends[0], zero1) && stable(ends[1], zero2) {
            count += 1;
        }
        let mut i = 0;
        while i < beta.len() && b1[i] == beta[i] {
            b1[i] = 0;
            i += 1;
        }
        if i == beta.len() {
            return count;
        }
        b1[i] += 1;
    }
}
