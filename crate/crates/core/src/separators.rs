//! Vertex separators, important separators and shadows.
//!
//! Minimum cuts are computed on the vertex-split network: every live vertex
//! `v` becomes `in(v) -> out(v)` with capacity 1 when `v` may be deleted and
//! unbounded capacity otherwise, and every arc `(u, v)` becomes the unbounded
//! arc `out(u) -> in(v)`. The furthest minimum cut is read off the residual
//! network as the set of vertices whose internal arc crosses from the part
//! that cannot reach the sink into the part that can.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::graph::{Digraph, VertexId, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeparatorError {
    #[error("terminal sets must be nonempty")]
    EmptyTerminals,
    #[error("terminal sets overlap at vertex {0}")]
    Overlap(VertexId),
    #[error("no separator exists: a path of undeletable vertices joins the terminal sets")]
    Inseparable,
    #[error("separator candidate meets the terminal set at vertex {0}")]
    MeetsTerminals(VertexId),
}

/// A vertex set `W` together with the pair `(X, Y)` it separates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separator {
    pub vertices: VertexSet,
    pub source: VertexSet,
    pub sink: VertexSet,
}

impl Separator {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ShadowPair {
    pub forward: VertexSet,
    pub backward: VertexSet,
}

/// Outcome of a budgeted minimum-cut query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinCut {
    /// An arc or a path through undeletable vertices joins `X` to `Y`.
    Inseparable,
    /// The minimum separator is larger than the budget.
    ExceedsBudget,
    /// Minimum size and the furthest minimum separator.
    Cut { size: usize, separator: VertexSet },
}

fn check_terminals(g: &Digraph, x: &VertexSet, y: &VertexSet) -> Result<(), SeparatorError> {
    if !x.iter().any(|&v| g.contains(v)) || !y.iter().any(|&v| g.contains(v)) {
        return Err(SeparatorError::EmptyTerminals);
    }
    if let Some(&v) = x.intersection(y).next() {
        return Err(SeparatorError::Overlap(v));
    }
    Ok(())
}

pub fn is_separator(
    g: &Digraph,
    x: &VertexSet,
    y: &VertexSet,
    w: &VertexSet,
) -> Result<bool, SeparatorError> {
    check_terminals(g, x, y)?;
    Ok(separates(g, x, y, w))
}

fn separates(g: &Digraph, x: &VertexSet, y: &VertexSet, w: &VertexSet) -> bool {
    if w.iter().any(|&v| x.contains(&v) || y.contains(&v) || g.is_undeletable(v)) {
        return false;
    }
    let reach = g.sweep(x.iter().copied(), &g.mask(w), true);
    !y.iter().any(|v| reach.get(v.index()).copied().unwrap_or(false))
}

pub fn is_minimal_separator(
    g: &Digraph,
    x: &VertexSet,
    y: &VertexSet,
    w: &VertexSet,
) -> Result<bool, SeparatorError> {
    check_terminals(g, x, y)?;
    if !separates(g, x, y, w) {
        return Ok(false);
    }
    // Separation is monotone under supersets, so single removals suffice.
    let mut smaller = w.clone();
    for &v in w {
        smaller.remove(&v);
        let still = separates(g, x, y, &smaller);
        smaller.insert(v);
        if still {
            return Ok(false);
        }
    }
    Ok(true)
}

const INF: u32 = u32::MAX / 4;

/// Residual network over the vertex-split graph.
struct CutNetwork {
    adj: Vec<Vec<u32>>,
    to: Vec<u32>,
    residual: Vec<u32>,
    source: usize,
    sink: usize,
}

impl CutNetwork {
    fn add_edge(&mut self, from: usize, to: usize, cap: u32) {
        let e = self.to.len() as u32;
        self.to.push(to as u32);
        self.residual.push(cap);
        self.adj[from].push(e);
        self.to.push(from as u32);
        self.residual.push(0);
        self.adj[to].push(e + 1);
    }

    /// `blocked` vertices are treated as removed from the graph.
    fn new(g: &Digraph, sources: &[bool], sinks: &[bool], blocked: &[bool]) -> CutNetwork {
        let cap = g.capacity();
        let nodes = 2 * cap + 2;
        let mut net = CutNetwork {
            adj: vec![Vec::new(); nodes],
            to: Vec::with_capacity(4 * (cap + g.arc_count())),
            residual: Vec::with_capacity(4 * (cap + g.arc_count())),
            source: 2 * cap,
            sink: 2 * cap + 1,
        };
        let active = |i: usize| g.live_mask()[i] && !blocked[i];
        for i in 0..cap {
            if !active(i) {
                continue;
            }
            let hard = sources[i] || sinks[i] || g.undeletable_mask()[i];
            net.add_edge(2 * i, 2 * i + 1, if hard { INF } else { 1 });
            if sources[i] {
                net.add_edge(net.source, 2 * i, INF);
            }
            if sinks[i] {
                net.add_edge(2 * i + 1, net.sink, INF);
            }
        }
        for a in g.arcs() {
            let (t, h) = (a.tail.index(), a.head.index());
            if active(t) && active(h) && t != h {
                net.add_edge(2 * t + 1, 2 * h, INF);
            }
        }
        net
    }

    /// Pushes one unit along a shortest augmenting path, if any.
    fn augment(&mut self, parent: &mut [u32]) -> bool {
        parent.fill(u32::MAX);
        let mut queue = VecDeque::new();
        queue.push_back(self.source);
        parent[self.source] = u32::MAX - 1;
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e as usize] as usize;
                if self.residual[e as usize] > 0 && parent[v] == u32::MAX {
                    parent[v] = e;
                    if v == self.sink {
                        let mut cur = self.sink;
                        while cur != self.source {
                            let e = parent[cur] as usize;
                            self.residual[e] -= 1;
                            self.residual[e ^ 1] += 1;
                            cur = self.to[e ^ 1] as usize;
                        }
                        return true;
                    }
                    queue.push_back(v);
                }
            }
        }
        false
    }

    /// Nodes that can still reach the sink in the residual network.
    fn sink_side(&self) -> Vec<bool> {
        let mut side = vec![false; self.adj.len()];
        side[self.sink] = true;
        let mut stack = vec![self.sink];
        while let Some(w) = stack.pop() {
            for &e in &self.adj[w] {
                // e: w -> u; its pair e^1: u -> w
                let u = self.to[e as usize] as usize;
                if !side[u] && self.residual[(e ^ 1) as usize] > 0 {
                    side[u] = true;
                    stack.push(u);
                }
            }
        }
        side
    }
}

/// `true` when some `X -> Y` path avoids every deletable vertex.
fn inseparable(g: &Digraph, sources: &[bool], sinks: &[bool], blocked: &[bool]) -> bool {
    let cap = g.capacity();
    let mut seen = vec![false; cap];
    let mut stack = Vec::new();
    for i in 0..cap {
        if sources[i] && g.live_mask()[i] && !blocked[i] {
            seen[i] = true;
            stack.push(i);
        }
    }
    while let Some(v) = stack.pop() {
        for &w in g.out_neighbors(VertexId::from(v)) {
            let j = w.index();
            if blocked[j] || seen[j] {
                continue;
            }
            if sinks[j] {
                return true;
            }
            if sources[j] || g.undeletable_mask()[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    false
}

/// Minimum cut between masks with `blocked` vertices removed.
fn furthest_min_cut(
    g: &Digraph,
    sources: &[bool],
    sinks: &[bool],
    blocked: &[bool],
    budget: usize,
) -> MinCut {
    if inseparable(g, sources, sinks, blocked) {
        return MinCut::Inseparable;
    }
    let mut net = CutNetwork::new(g, sources, sinks, blocked);
    let mut parent = vec![u32::MAX; net.adj.len()];
    let mut flow = 0usize;
    while net.augment(&mut parent) {
        flow += 1;
        if flow > budget {
            return MinCut::ExceedsBudget;
        }
    }
    let side = net.sink_side();
    let separator: VertexSet = g
        .vertices()
        .filter(|v| {
            let i = v.index();
            !blocked[i] && !side[2 * i] && side[2 * i + 1]
        })
        .collect();
    debug_assert_eq!(separator.len(), flow);
    MinCut::Cut {
        size: flow,
        separator,
    }
}

/// Minimum `X - Y` vertex cut of size at most `budget`, returning the unique
/// minimum separator whose removal leaves the most vertices reachable from `X`.
pub fn min_vertex_cut(
    g: &Digraph,
    x: &VertexSet,
    y: &VertexSet,
    budget: usize,
) -> Result<MinCut, SeparatorError> {
    check_terminals(g, x, y)?;
    let none = vec![false; g.capacity()];
    Ok(furthest_min_cut(g, &g.mask(x), &g.mask(y), &none, budget))
}

/// Whether `w` is an important `X - Y` separator: with `R` the vertices `X`
/// still reaches after deleting `w`, the minimum `R - Y` cut must have size
/// `|w|` and its furthest minimum separator must be `w` itself.
pub fn is_important(
    g: &Digraph,
    x: &VertexSet,
    y: &VertexSet,
    w: &VertexSet,
) -> Result<bool, SeparatorError> {
    check_terminals(g, x, y)?;
    Ok(important_unchecked(g, x, y, w))
}

fn important_unchecked(g: &Digraph, x: &VertexSet, y: &VertexSet, w: &VertexSet) -> bool {
    if !separates(g, x, y, w) {
        return false;
    }
    let reach = g.sweep(x.iter().copied(), &g.mask(w), true);
    let none = vec![false; g.capacity()];
    match furthest_min_cut(g, &reach, &g.mask(y), &none, w.len()) {
        MinCut::Cut { size, separator } => size == w.len() && &separator == w,
        _ => false,
    }
}

/// All important `X - Y` separators of size at most `k`, ordered by size and
/// then by their sorted vertex lists. At most `4^k` sets are returned.
pub fn enumerate_important_separators(
    g: &Digraph,
    x: &VertexSet,
    y: &VertexSet,
    k: usize,
) -> Result<Vec<Separator>, SeparatorError> {
    check_terminals(g, x, y)?;
    let sources = g.mask(x);
    let sinks = g.mask(y);
    let mut blocked = vec![false; g.capacity()];
    if inseparable(g, &sources, &sinks, &blocked) {
        return Err(SeparatorError::Inseparable);
    }
    let mut candidates = BTreeSet::new();
    let mut chosen = Vec::new();
    let mut sources = sources;
    branch_candidates(g, &mut sources, &sinks, &mut blocked, &mut chosen, k, &mut candidates);

    let mut out: Vec<Separator> = candidates
        .into_iter()
        .filter(|w| important_unchecked(g, x, y, w))
        .map(|w| Separator {
            vertices: w,
            source: x.clone(),
            sink: y.clone(),
        })
        .collect();
    out.sort_by(|a, b| {
        a.vertices
            .len()
            .cmp(&b.vertices.len())
            .then_with(|| a.vertices.iter().cmp(b.vertices.iter()))
    });
    Ok(out)
}

/// Branches on the lowest-id vertex of the furthest minimum cut: either it
/// joins the separator (deleted, budget - 1) or it joins the source side.
fn branch_candidates(
    g: &Digraph,
    sources: &mut Vec<bool>,
    sinks: &[bool],
    blocked: &mut Vec<bool>,
    chosen: &mut Vec<VertexId>,
    budget: usize,
    out: &mut BTreeSet<VertexSet>,
) {
    let cut = match furthest_min_cut(g, sources, sinks, blocked, budget) {
        MinCut::Cut { size, separator } => (size, separator),
        _ => return,
    };
    let (size, separator) = cut;
    if size == 0 {
        out.insert(chosen.iter().copied().collect());
        return;
    }
    let v = *separator.iter().next().expect("nonempty cut");
    let vi = v.index();

    blocked[vi] = true;
    chosen.push(v);
    branch_candidates(g, sources, sinks, blocked, chosen, budget - 1, out);
    chosen.pop();
    blocked[vi] = false;

    sources[vi] = true;
    branch_candidates(g, sources, sinks, blocked, chosen, budget, out);
    sources[vi] = false;
}

/// The collection `I_k`: every nonempty important `v - T` separator of size
/// at most `k`, over all `v ∉ T`. Duplicates (as vertex sets) keep the
/// lowest-id witness `v`.
pub fn enumerate_ik(g: &Digraph, t: &VertexSet, k: usize) -> Vec<Separator> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    if k == 0 || !t.iter().any(|&v| g.contains(v)) {
        return out;
    }
    for v in g.vertices().filter(|v| !t.contains(v)) {
        let source: VertexSet = std::iter::once(v).collect();
        let Ok(seps) = enumerate_important_separators(g, &source, t, k) else {
            continue;
        };
        for s in seps {
            if !s.vertices.is_empty() && seen.insert(s.vertices.clone()) {
                out.push(s);
            }
        }
    }
    out
}

fn check_shadow_args(t: &VertexSet, w: &VertexSet) -> Result<(), SeparatorError> {
    match w.intersection(t).next() {
        Some(&v) => Err(SeparatorError::MeetsTerminals(v)),
        None => Ok(()),
    }
}

/// Forward and reverse shadow of `w` with respect to `t`.
pub fn shadow(g: &Digraph, t: &VertexSet, w: &VertexSet) -> Result<ShadowPair, SeparatorError> {
    check_shadow_args(t, w)?;
    let blocked = g.mask(w);
    let from_t = g.sweep(t.iter().copied(), &blocked, true);
    let to_t = g.sweep(t.iter().copied(), &blocked, false);
    let mut pair = ShadowPair::default();
    for v in g.vertices() {
        if w.contains(&v) || t.contains(&v) {
            continue;
        }
        if !from_t[v.index()] {
            pair.forward.insert(v);
        }
        if !to_t[v.index()] {
            pair.backward.insert(v);
        }
    }
    Ok(pair)
}

/// Vertices `v` for which `w` is a minimal `v - T` separator.
pub fn exact_reverse_shadow(
    g: &Digraph,
    t: &VertexSet,
    w: &VertexSet,
) -> Result<VertexSet, SeparatorError> {
    check_shadow_args(t, w)?;
    Ok(exact_reverse_shadow_unchecked(g, t, w))
}

pub(crate) fn exact_reverse_shadow_unchecked(g: &Digraph, t: &VertexSet, w: &VertexSet) -> VertexSet {
    if w.iter().any(|&v| !g.contains(v) || g.is_undeletable(v)) {
        return VertexSet::new();
    }
    let blocked = g.mask(w);
    // Vertices that reach T while avoiding w.
    let to_t = g.sweep(t.iter().copied(), &blocked, false);
    // Each member of w must have an exit towards T avoiding the rest of w.
    let exits = w
        .iter()
        .all(|&x| g.out_neighbors(x).iter().any(|y| to_t[y.index()]));
    if !exits {
        return VertexSet::new();
    }
    let mut out = VertexSet::new();
    for v in g.vertices() {
        if to_t[v.index()] || w.contains(&v) || t.contains(&v) {
            continue;
        }
        let reach = g.sweep(std::iter::once(v), &blocked, true);
        let entered = w
            .iter()
            .all(|&x| g.in_neighbors(x).iter().any(|p| reach[p.index()]));
        if entered {
            out.insert(v);
        }
    }
    out
}

/// Vertices `v` for which `w` is a minimal `T - v` separator.
pub fn exact_forward_shadow(
    g: &Digraph,
    t: &VertexSet,
    w: &VertexSet,
) -> Result<VertexSet, SeparatorError> {
    check_shadow_args(t, w)?;
    Ok(exact_reverse_shadow_unchecked(&g.reverse(), t, w))
}

/// No member of `w` lies in the reverse shadow of the others.
pub fn is_thin(g: &Digraph, t: &VertexSet, w: &VertexSet) -> Result<bool, SeparatorError> {
    check_shadow_args(t, w)?;
    for &v in w {
        let mut rest = w.clone();
        rest.remove(&v);
        let to_t = g.sweep(t.iter().copied(), &g.mask(&rest), false);
        if !to_t[v.index()] {
            return Ok(false);
        }
    }
    Ok(true)
}
