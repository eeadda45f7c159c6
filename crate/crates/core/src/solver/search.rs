//! Preprocessing, critical vertices, branching and the search itself.

use std::time::Instant;

use crate::graph::{Arc, ArcSet, Digraph, VertexId, VertexSet};
use crate::sampling::{mix, Covering, SamplingMode};
use crate::separators::{enumerate_important_separators, SeparatorError};
use crate::torso::reduce_unchecked;

use super::instance::{
    has_s_closed_walk, restrict_arcs, verify_compression, verify_solution, CompressionInstance,
    EdgeInstance, Solution,
};
use super::{SearchStats, SolveError, SolverConfig};

/// Drops every terminal that cannot reach a tail of an `S`-arc, repeating
/// until none is left.
pub fn preprocess(inst: &CompressionInstance) -> CompressionInstance {
    let mut cur = inst.clone();
    loop {
        let g = cur.graph();
        let tails = cur.endpoints().s_minus;
        let reaches = g.reach_backward(&tails, &VertexSet::new());
        let dead: VertexSet = cur
            .old_solution()
            .iter()
            .filter(|v| !reaches.contains(v))
            .copied()
            .collect();
        if dead.is_empty() {
            return cur;
        }
        let graph = g.remove_unchecked(&dead);
        let s_arcs = restrict_arcs(&graph, cur.s_arcs());
        let t = cur.old_solution().difference(&dead).copied().collect();
        cur = CompressionInstance::from_parts(graph, s_arcs, t, cur.budget());
    }
}

/// Keeps only strongly connected components that contain an `S`-arc, and
/// only the `S`-arcs inside a component. Nothing removed lies on an
/// `S`-closed walk.
pub(crate) fn prune(inst: &CompressionInstance) -> CompressionInstance {
    let g = inst.graph();
    let scc = g.scc();
    let s_arcs: ArcSet = inst
        .s_arcs()
        .iter()
        .filter(|a| scc.same_component(a.tail, a.head))
        .copied()
        .collect();
    let mut hot = vec![false; scc.len()];
    for a in &s_arcs {
        if let Some(c) = scc.component_of(a.tail) {
            hot[c] = true;
        }
    }
    let drop: VertexSet = g
        .vertices()
        .filter(|&v| scc.component_of(v).is_some_and(|c| !hot[c]))
        .collect();
    if drop.is_empty() && s_arcs.len() == inst.s_arcs().len() {
        return inst.clone();
    }
    let graph = g.remove_unchecked(&drop);
    let t = inst.old_solution().difference(&drop).copied().collect();
    CompressionInstance::from_parts(graph, s_arcs, t, inst.budget())
}

/// The split graph used to bound critical vertices: every `v` becomes
/// `v_in = 2v` and `v_out = 2v + 1`, plus a source `s` and sink `t`.
#[derive(Debug, Clone)]
pub struct AuxCriticalGraph {
    pub graph: Digraph,
    pub source: VertexId,
    pub sink: VertexId,
}

impl AuxCriticalGraph {
    pub fn new(g: &Digraph, s: &ArcSet, t0: &VertexSet) -> AuxCriticalGraph {
        let cap = g.capacity();
        let source = VertexId::from(2 * cap);
        let sink = VertexId::from(2 * cap + 1);
        let mut live = vec![false; 2 * cap + 2];
        live[2 * cap] = true;
        live[2 * cap + 1] = true;
        let mut arcs = Vec::new();
        for v in g.vertices() {
            let i = v.index();
            live[2 * i] = true;
            live[2 * i + 1] = true;
            arcs.push(Arc::new(2 * i, 2 * i + 1));
            arcs.push(Arc { tail: Self::in_copy(v), head: sink });
            if t0.contains(&v) {
                arcs.push(Arc { tail: source, head: Self::out_copy(v) });
            }
        }
        for a in g.arcs() {
            let head = if s.contains(a) {
                Self::in_copy(a.head)
            } else {
                Self::out_copy(a.head)
            };
            arcs.push(Arc { tail: Self::out_copy(a.tail), head });
        }
        let undeletable = vec![false; live.len()];
        AuxCriticalGraph {
            graph: Digraph::assemble(live, undeletable, arcs),
            source,
            sink,
        }
    }

    pub fn in_copy(v: VertexId) -> VertexId {
        VertexId(2 * v.0)
    }

    pub fn out_copy(v: VertexId) -> VertexId {
        VertexId(2 * v.0 + 1)
    }

    /// The original vertex of a split copy, with `true` for the in-copy.
    pub fn original(&self, x: VertexId) -> Option<(VertexId, bool)> {
        (x != self.source && x != self.sink).then_some((VertexId(x.0 / 2), x.0.is_multiple_of(2)))
    }
}

/// A set containing every `k`-critical vertex with respect to `t0`: the
/// vertices whose in-copy lies in an important `s - t` separator of size at
/// most `2k` in the split graph.
pub fn critical_vertex_superset(g: &Digraph, s: &ArcSet, t0: &VertexSet, k: usize) -> VertexSet {
    if t0.is_empty() || k == 0 {
        return VertexSet::new();
    }
    let aux = AuxCriticalGraph::new(g, s, t0);
    let x = VertexSet::from([aux.source]);
    let y = VertexSet::from([aux.sink]);
    let Ok(seps) = enumerate_important_separators(&aux.graph, &x, &y, 2 * k) else {
        return VertexSet::new();
    };
    seps.iter()
        .flat_map(|sep| sep.vertices.iter())
        .filter_map(|&w| match aux.original(w) {
            Some((v, true)) => Some(v),
            _ => None,
        })
        .collect()
}

/// `G⁺`: `G` plus an undeletable sink joined from every tail of an `S`-arc.
#[derive(Debug, Clone)]
pub struct AugmentedGraph {
    pub graph: Digraph,
    pub sink: VertexId,
}

impl AugmentedGraph {
    pub fn new(g: &Digraph, s: &ArcSet) -> AugmentedGraph {
        let (plus, sink) = g.with_new_vertex(true);
        let tails: VertexSet = s
            .iter()
            .filter(|a| g.contains(a.tail) && g.contains(a.head))
            .map(|a| a.tail)
            .collect();
        let graph = plus.with_arcs(tails.into_iter().map(|u| Arc { tail: u, head: sink }));
        AugmentedGraph { graph, sink }
    }
}

fn subsets_of(t: &VertexSet) -> impl Iterator<Item = VertexSet> + '_ {
    let items: Vec<VertexId> = t.iter().copied().collect();
    (1u64..(1u64 << items.len())).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect()
    })
}

/// `F = ⋃ F_{T0}` over all nonempty `T0 ⊆ T`.
pub fn critical_union(inst: &CompressionInstance) -> VertexSet {
    let mut f = VertexSet::new();
    for t0 in subsets_of(inst.old_solution()) {
        f.extend(critical_vertex_superset(inst.graph(), inst.s_arcs(), &t0, inst.budget()));
    }
    f
}

/// Deletion sets of the branching step: each vertex of `F ∖ T`, then every
/// nonempty important `T0 - ({t} ∪ T ∖ T0)` separator of size at most `k`
/// in `G⁺`, smaller separators first. Duplicates are dropped.
pub(crate) fn branch_sets(inst: &CompressionInstance, f: &VertexSet) -> Vec<VertexSet> {
    let g = inst.graph();
    let t = inst.old_solution();
    let k = inst.budget();
    let mut out: Vec<VertexSet> = Vec::new();
    if k == 0 {
        return out;
    }
    for &v in f {
        if !t.contains(&v) && g.contains(v) && !g.is_undeletable(v) {
            out.push(VertexSet::from([v]));
        }
    }
    let plus = AugmentedGraph::new(g, inst.s_arcs());
    let mut seps: Vec<VertexSet> = Vec::new();
    for t0 in subsets_of(t) {
        let mut y: VertexSet = t.difference(&t0).copied().collect();
        y.insert(plus.sink);
        match enumerate_important_separators(&plus.graph, &t0, &y, k) {
            Ok(found) => seps.extend(found.into_iter().map(|s| s.vertices)),
            Err(SeparatorError::Inseparable) => continue,
            Err(e) => unreachable!("terminal sets are valid by construction: {e}"),
        }
    }
    seps.retain(|s| !s.is_empty());
    seps.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
    seps.dedup();
    for s in seps {
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

/// The children instances of the branching step.
pub fn branch(inst: &CompressionInstance, f: &VertexSet) -> Vec<CompressionInstance> {
    branch_sets(inst, f).iter().map(|d| inst.delete(d)).collect()
}

/// Lower bound on the size of any solution avoiding `locked`: greedily
/// collects `S`-closed walks with the fewest deletable vertices, requiring
/// the deletable parts to be disjoint. Stops once `limit + 1` walks are
/// found, and returns `usize::MAX` when some walk has no deletable vertex.
pub(crate) fn packing_bound(g: &Digraph, s: &ArcSet, locked: &VertexSet, limit: usize) -> usize {
    let cap = g.capacity();
    let mut blocked = vec![false; cap];
    let is_locked = g.mask(locked);
    let cost = |v: VertexId| usize::from(!is_locked[v.index()]);
    let mut dist = vec![usize::MAX; cap];
    let mut parent = vec![VertexId(u32::MAX); cap];
    let mut found = 0;
    while found <= limit {
        // Cheapest closed walk through some S-arc (u, v): v to u, 0-1 BFS.
        let mut best: Option<(usize, VertexId, VertexId, Vec<VertexId>)> = None;
        for a in s {
            let (u, v) = (a.tail, a.head);
            if !g.contains(u) || !g.contains(v) || blocked[u.index()] || blocked[v.index()] {
                continue;
            }
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            let mut deque = std::collections::VecDeque::new();
            dist[v.index()] = cost(v);
            deque.push_back(v);
            while let Some(x) = deque.pop_front() {
                for &y in g.out_neighbors(x) {
                    let j = y.index();
                    if blocked[j] {
                        continue;
                    }
                    let d = dist[x.index()] + cost(y);
                    if d < dist[j] {
                        dist[j] = d;
                        parent[j] = x;
                        if cost(y) == 0 {
                            deque.push_front(y);
                        } else {
                            deque.push_back(y);
                        }
                    }
                }
            }
            let total = if u == v { cost(v) } else { dist[u.index()] };
            if total == usize::MAX || best.as_ref().is_some_and(|b| b.0 <= total) {
                continue;
            }
            let mut path = vec![u];
            let mut cur = u;
            while cur != v {
                cur = parent[cur.index()];
                path.push(cur);
            }
            best = Some((total, u, v, path));
        }
        let Some((total, _, _, path)) = best else {
            break;
        };
        if total == 0 {
            return usize::MAX;
        }
        for w in path {
            if !is_locked[w.index()] {
                blocked[w.index()] = true;
            }
        }
        found += 1;
    }
    found
}

/// Stateful search with node accounting.
pub struct Solver {
    config: SolverConfig,
    stats: SearchStats,
    started: Instant,
    multiplier: u64,
}

impl Solver {
    pub fn new(config: SolverConfig) -> Solver {
        Solver {
            config,
            stats: SearchStats::default(),
            started: Instant::now(),
            multiplier: 1,
        }
    }

    pub fn stats(&self) -> &SearchStats {
        &self.stats
    }

    fn check_limits(&self) -> Result<(), SolveError> {
        if let Some(limit) = self.config.max_nodes {
            if self.stats.nodes > limit {
                return Err(SolveError::NodeLimit(limit));
            }
        }
        if let Some(timeout) = self.config.timeout {
            if self.started.elapsed() > timeout {
                return Err(SolveError::Timeout);
            }
        }
        Ok(())
    }

    /// Disjoint compression: a solution avoiding `T`, or `None`.
    pub fn solve_disjoint_compression(
        &mut self,
        inst: &CompressionInstance,
    ) -> Result<Option<VertexSet>, SolveError> {
        self.stats.nodes += 1;
        self.check_limits()?;
        let g = inst.graph();
        if !has_s_closed_walk(g, inst.s_arcs()) {
            return Ok(Some(VertexSet::new()));
        }
        let k = inst.budget();
        if k == 0 {
            return Ok(None);
        }
        let mut locked = g.undeletable_set();
        locked.extend(inst.old_solution().iter().copied());
        if packing_bound(g, inst.s_arcs(), &locked, k) > k {
            return Ok(None);
        }

        let work = preprocess(&prune(inst));
        if work.old_solution().is_empty() {
            // Every S-closed walk meets T, so an empty T means no walk.
            return Ok(None);
        }
        let mut sampling = self.config.sampling.clone();
        sampling.seed = mix(self.config.sampling.seed, self.stats.nodes);
        sampling.trial_multiplier = sampling.trial_multiplier.saturating_mul(self.multiplier);

        let mut cover = Covering::new(work.graph(), work.old_solution(), k, &sampling)?;
        let mut answer = None;
        for (z, _) in cover.by_ref() {
            self.check_limits()?;
            let reduced = preprocess(&prune(&reduce_unchecked(&work, &z)));
            let f = critical_union(&reduced);
            for deleted in branch_sets(&reduced, &f) {
                let child = reduced.delete(&deleted);
                if let Some(mut x) = self.solve_disjoint_compression(&child)? {
                    x.extend(deleted);
                    if !verify_compression(inst, &x) {
                        return Err(SolveError::Uncertified);
                    }
                    answer = Some(x);
                    break;
                }
            }
            if answer.is_some() {
                break;
            }
        }
        self.stats.covering_calls += 1;
        self.stats.trials += cover.trials_used();
        Ok(answer)
    }

    /// Compression: given `G ∖ T` clean, a solution of size at most `k`,
    /// trying every part `X ⊆ T` that the solution keeps from `T`.
    pub fn solve_compression(
        &mut self,
        inst: &CompressionInstance,
    ) -> Result<Option<VertexSet>, SolveError> {
        let t: Vec<VertexId> = inst.old_solution().iter().copied().collect();
        let k = inst.budget();
        let mut guesses: Vec<u64> = (0..(1u64 << t.len()))
            .filter(|m| m.count_ones() as usize <= k)
            .collect();
        guesses.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
        for mask in guesses {
            let x: VertexSet = (0..t.len()).filter(|i| mask >> i & 1 == 1).map(|i| t[i]).collect();
            if x.len() == t.len() {
                return Ok(Some(x));
            }
            let graph = inst.graph().remove_unchecked(&x);
            let s_arcs = restrict_arcs(&graph, inst.s_arcs());
            let rest = inst.old_solution().difference(&x).copied().collect();
            let child = CompressionInstance::from_parts(graph, s_arcs, rest, k - x.len());
            if let Some(mut y) = self.solve_disjoint_compression(&child)? {
                y.extend(x);
                return Ok(Some(y));
            }
        }
        Ok(None)
    }

    /// Iterative compression over the vertices, undeletable ones first.
    pub fn solve(&mut self, inst: &EdgeInstance) -> Result<Option<Solution>, SolveError> {
        self.started = Instant::now();
        let retries = if self.config.sampling.mode == SamplingMode::MonteCarlo {
            self.config.retries
        } else {
            0
        };
        for attempt in 0..=retries {
            self.multiplier = 1u64 << attempt.min(32);
            if let Some(x) = self.iterate(inst)? {
                if !verify_solution(inst, &x) {
                    return Err(SolveError::Uncertified);
                }
                return Ok(Some(Solution {
                    deleted: x,
                    certified: true,
                }));
            }
        }
        Ok(None)
    }

    fn iterate(&mut self, inst: &EdgeInstance) -> Result<Option<VertexSet>, SolveError> {
        let g = inst.graph();
        let s = inst.s_arcs();
        let k = inst.budget();
        let locked = g.undeletable_set();
        if packing_bound(g, s, &locked, k) > k {
            return Ok(None);
        }
        let mut current = locked.clone();
        let mut x = VertexSet::new();
        for v in g.vertices().filter(|v| !locked.contains(v)) {
            current.insert(v);
            let sub = g.induced(&current);
            let rest = sub.remove_unchecked(&x);
            if !has_s_closed_walk(&rest, &restrict_arcs(&rest, s)) {
                continue;
            }
            if x.len() < k {
                x.insert(v);
                continue;
            }
            let mut t = x.clone();
            t.insert(v);
            let s_sub = restrict_arcs(&sub, s);
            let comp = CompressionInstance::from_parts(sub, s_sub, t, k);
            match self.solve_compression(&comp)? {
                Some(y) => x = y,
                None => return Ok(None),
            }
        }
        Ok(Some(x))
    }
}
