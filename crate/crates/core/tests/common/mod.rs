//! Shared fixtures for the integration suites.
#![allow(dead_code)]

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use sdfvs::solver::EdgeInstance;
use sdfvs::{Arc, ArcSet, Digraph, VertexId, VertexSet};

/// A graph as plain data so proptest can shrink it.
#[derive(Debug, Clone)]
pub struct RawGraph {
    pub n: usize,
    pub arcs: Vec<(usize, usize)>,
    pub undeletable: Vec<usize>,
}

impl RawGraph {
    pub fn build(&self) -> Digraph {
        Digraph::build(self.n, &self.arcs, &self.undeletable).unwrap()
    }
}

/// Graphs on `1..=max_n` vertices; parallel arcs and self-loops allowed.
pub fn arb_graph(max_n: usize, max_m: usize, with_undeletable: bool) -> impl Strategy<Value = RawGraph> {
    (1..=max_n).prop_flat_map(move |n| {
        let arcs = prop::collection::vec((0..n, 0..n), 0..=max_m);
        let und = if with_undeletable {
            prop::collection::vec(0..n, 0..=1).boxed()
        } else {
            Just(Vec::new()).boxed()
        };
        (Just(n), arcs, und).prop_map(|(n, arcs, mut undeletable)| {
            undeletable.sort_unstable();
            undeletable.dedup();
            RawGraph { n, arcs, undeletable }
        })
    })
}

/// An instance with `S` chosen by a mask over the arc list.
pub fn arb_instance(max_n: usize, max_m: usize, max_k: usize) -> impl Strategy<Value = EdgeInstance> {
    (arb_graph(max_n, max_m, true), prop::collection::vec(any::<bool>(), max_m), 0..=max_k).prop_map(
        |(raw, mask, k)| {
            let g = raw.build();
            let s: ArcSet = raw
                .arcs
                .iter()
                .zip(&mask)
                .filter(|(_, &b)| b)
                .map(|(&p, _)| Arc::from(p))
                .collect();
            EdgeInstance::new(g, s, k).unwrap()
        },
    )
}

pub fn subset_of(mask: u32, n: usize) -> VertexSet {
    (0..n).filter(|i| mask >> i & 1 == 1).map(VertexId::from).collect()
}

/// `m` uniform arcs; self-loops only when `loops` is set or `n == 1`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, m: usize, loops: bool) -> Digraph {
    let loops = loops || n == 1;
    let arcs: Vec<(usize, usize)> = (0..m)
        .map(|_| loop {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if loops || u != v {
                break (u, v);
            }
        })
        .collect();
    Digraph::build(n, &arcs, &[]).unwrap()
}

/// Each live vertex joins with probability `p`.
pub fn random_subset(rng: &mut ChaCha8Rng, pool: impl IntoIterator<Item = VertexId>, p: f64) -> VertexSet {
    pool.into_iter().filter(|_| rng.gen_bool(p)).collect()
}

/// Small instance: `n ≤ max_n`, `m ≤ max_m`, `|S| ≤ max_s`, `k ≤ max_k`.
pub fn random_instance(
    rng: &mut ChaCha8Rng,
    max_n: usize,
    max_m: usize,
    max_s: usize,
    max_k: usize,
) -> EdgeInstance {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(0..=max_m);
    let loops = rng.gen_bool(0.2);
    let g = random_graph(rng, n, m, loops);
    let undeletable: VertexSet = if rng.gen_bool(0.2) {
        [VertexId::from(rng.gen_range(0..n))].into()
    } else {
        VertexSet::new()
    };
    let g = g.with_undeletable(&undeletable);
    let mut pairs: Vec<Arc> = g.arcs().to_vec();
    pairs.sort();
    pairs.dedup();
    pairs.shuffle(rng);
    let s_len = rng.gen_range(0..=max_s.min(pairs.len()));
    let s: ArcSet = pairs[..s_len].iter().copied().collect();
    EdgeInstance::new(g, s, rng.gen_range(0..=max_k)).unwrap()
}

/// Bidirected complete graph with every arc in `S`.
pub fn complete(n: usize, k: usize) -> EdgeInstance {
    let arcs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    let g = Digraph::build(n, &arcs, &[]).unwrap();
    let s: ArcSet = g.arcs().iter().copied().collect();
    EdgeInstance::new(g, s, k).unwrap()
}

pub struct FanGraph {
    pub graph: Digraph,
    pub a: Vec<VertexId>,
    pub b: Vec<VertexId>,
    pub t: VertexSet,
}

/// Every `a_i` points at all of `T`; `b_i -> a_i`; `c_ij -> a_i, a_j`.
pub fn ab_fan(r: usize, t_len: usize) -> FanGraph {
    let a: Vec<usize> = (0..r).collect();
    let t: Vec<usize> = (r..r + t_len).collect();
    let b: Vec<usize> = (r + t_len..2 * r + t_len).collect();
    let mut next = 2 * r + t_len;
    let mut arcs = Vec::new();
    for i in 0..r {
        arcs.extend(t.iter().map(|&x| (a[i], x)));
        arcs.push((b[i], a[i]));
        for j in i + 1..r {
            arcs.push((next, a[i]));
            arcs.push((next, a[j]));
            next += 1;
        }
    }
    FanGraph {
        graph: Digraph::build(next, &arcs, &[]).unwrap(),
        a: a.into_iter().map(VertexId::from).collect(),
        b: b.into_iter().map(VertexId::from).collect(),
        t: t.into_iter().map(VertexId::from).collect(),
    }
}
