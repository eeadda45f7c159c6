//! Directed multigraph with stable vertex identifiers.
//!
//! A [`Digraph`] owns a fixed identifier space `0..capacity`. Deleting
//! vertices marks them dead instead of renumbering, so every derived graph
//! (reversal, deletion, torso) keeps naming vertices by their original ids.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(i as u32)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Ordered vertex set. Iteration order is ascending id, which keeps every
/// derived result deterministic.
pub type VertexSet = BTreeSet<VertexId>;

/// Builds a [`VertexSet`] from raw indices.
pub fn vset<I: IntoIterator<Item = usize>>(ids: I) -> VertexSet {
    ids.into_iter().map(VertexId::from).collect()
}

/// Arc set such as `S`. Membership is by `(tail, head)` pair, so it covers
/// every parallel copy of an arc.
pub type ArcSet = BTreeSet<Arc>;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub tail: VertexId,
    pub head: VertexId,
}

impl Arc {
    pub fn new(tail: impl Into<VertexId>, head: impl Into<VertexId>) -> Self {
        Arc {
            tail: tail.into(),
            head: head.into(),
        }
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

impl From<(usize, usize)> for Arc {
    fn from((t, h): (usize, usize)) -> Self {
        Arc::new(t, h)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("arc endpoint {vertex} out of range for {count} vertices")]
    EndpointOutOfRange { vertex: usize, count: usize },
    #[error("undeletable vertex {0} out of range")]
    UndeletableOutOfRange(usize),
    #[error("vertex {0} is undeletable")]
    DeleteUndeletable(VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    live: Vec<bool>,
    undeletable: Vec<bool>,
    arcs: Vec<Arc>,
    out_adj: Vec<Vec<VertexId>>,
    in_adj: Vec<Vec<VertexId>>,
    live_count: usize,
}

impl Digraph {
    /// Builds a graph on vertices `0..n`.
    pub fn build(
        n: usize,
        arcs: &[(usize, usize)],
        undeletable: &[usize],
    ) -> Result<Digraph, GraphError> {
        for &(t, h) in arcs {
            for v in [t, h] {
                if v >= n {
                    return Err(GraphError::EndpointOutOfRange { vertex: v, count: n });
                }
            }
        }
        let mut undel = vec![false; n];
        for &u in undeletable {
            if u >= n {
                return Err(GraphError::UndeletableOutOfRange(u));
            }
            undel[u] = true;
        }
        Ok(Digraph::assemble(
            vec![true; n],
            undel,
            arcs.iter().map(|&a| Arc::from(a)).collect(),
        ))
    }

    /// Internal constructor. Arcs must join live vertices.
    pub(crate) fn assemble(live: Vec<bool>, undeletable: Vec<bool>, arcs: Vec<Arc>) -> Digraph {
        let cap = live.len();
        debug_assert_eq!(undeletable.len(), cap);
        let mut out_adj = vec![Vec::new(); cap];
        let mut in_adj = vec![Vec::new(); cap];
        for a in &arcs {
            debug_assert!(live[a.tail.index()] && live[a.head.index()]);
            out_adj[a.tail.index()].push(a.head);
            in_adj[a.head.index()].push(a.tail);
        }
        let live_count = live.iter().filter(|&&b| b).count();
        let undeletable = undeletable
            .into_iter()
            .zip(&live)
            .map(|(u, &l)| u && l)
            .collect();
        Digraph {
            live,
            undeletable,
            arcs,
            out_adj,
            in_adj,
            live_count,
        }
    }

    /// Size of the identifier space (live and deleted ids).
    pub fn capacity(&self) -> usize {
        self.live.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.live_count
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.live.get(v.index()).copied().unwrap_or(false)
    }

    pub fn is_undeletable(&self, v: VertexId) -> bool {
        self.undeletable.get(v.index()).copied().unwrap_or(false)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.live
            .iter()
            .enumerate()
            .filter(|(_, &l)| l)
            .map(|(i, _)| VertexId::from(i))
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices().collect()
    }

    pub fn undeletable_set(&self) -> VertexSet {
        self.vertices().filter(|&v| self.is_undeletable(v)).collect()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn out_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.out_adj[v.index()]
    }

    pub fn in_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.in_adj[v.index()]
    }

    pub fn has_arc(&self, tail: VertexId, head: VertexId) -> bool {
        self.contains(tail) && self.out_adj[tail.index()].contains(&head)
    }

    pub(crate) fn live_mask(&self) -> &[bool] {
        &self.live
    }

    pub(crate) fn undeletable_mask(&self) -> &[bool] {
        &self.undeletable
    }

    pub(crate) fn mask(&self, set: &VertexSet) -> Vec<bool> {
        let mut m = vec![false; self.capacity()];
        for v in set {
            if let Some(slot) = m.get_mut(v.index()) {
                *slot = true;
            }
        }
        m
    }

    /// Vertices reachable from `from` in `G ∖ removed`. Always contains the
    /// live members of `from` that are not removed.
    pub fn reach_forward(&self, from: &VertexSet, removed: &VertexSet) -> VertexSet {
        let seen = self.sweep(from.iter().copied(), &self.mask(removed), true);
        mask_to_set(&seen)
    }

    /// Vertices that can reach `to` in `G ∖ removed`.
    pub fn reach_backward(&self, to: &VertexSet, removed: &VertexSet) -> VertexSet {
        let seen = self.sweep(to.iter().copied(), &self.mask(removed), false);
        mask_to_set(&seen)
    }

    /// Mask-based reachability used on hot paths. `blocked` vertices are
    /// never entered, not even as sources.
    pub(crate) fn sweep<I>(&self, sources: I, blocked: &[bool], forward: bool) -> Vec<bool>
    where
        I: IntoIterator<Item = VertexId>,
    {
        let mut seen = vec![false; self.capacity()];
        let mut stack = Vec::new();
        for s in sources {
            let i = s.index();
            if i < seen.len() && self.live[i] && !blocked[i] && !seen[i] {
                seen[i] = true;
                stack.push(s);
            }
        }
        let adj = if forward { &self.out_adj } else { &self.in_adj };
        while let Some(v) = stack.pop() {
            for &w in &adj[v.index()] {
                let j = w.index();
                if !seen[j] && !blocked[j] {
                    seen[j] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    pub fn reverse(&self) -> Digraph {
        Digraph::assemble(
            self.live.clone(),
            self.undeletable.clone(),
            self.arcs.iter().map(|a| Arc { tail: a.head, head: a.tail }).collect(),
        )
    }

    /// `G ∖ X`. Fails if `X` names an undeletable vertex.
    pub fn delete_vertices(&self, set: &VertexSet) -> Result<Digraph, GraphError> {
        if let Some(&v) = set.iter().find(|&&v| self.is_undeletable(v)) {
            return Err(GraphError::DeleteUndeletable(v));
        }
        Ok(self.remove_unchecked(set))
    }

    /// `G ∖ X` without the undeletable check; used when dropping vertices
    /// that lie on no relevant walk.
    pub(crate) fn remove_unchecked(&self, set: &VertexSet) -> Digraph {
        let mut live = self.live.clone();
        for v in set {
            if let Some(l) = live.get_mut(v.index()) {
                *l = false;
            }
        }
        self.restrict_to_mask(live)
    }

    /// The subgraph induced by `keep ∩ V(G)`.
    pub fn induced(&self, keep: &VertexSet) -> Digraph {
        let mut live = vec![false; self.capacity()];
        for v in keep {
            if self.contains(*v) {
                live[v.index()] = true;
            }
        }
        self.restrict_to_mask(live)
    }

    fn restrict_to_mask(&self, live: Vec<bool>) -> Digraph {
        let arcs = self
            .arcs
            .iter()
            .filter(|a| live[a.tail.index()] && live[a.head.index()])
            .copied()
            .collect();
        Digraph::assemble(live, self.undeletable.clone(), arcs)
    }

    /// Copy of the graph with `extra` additionally marked undeletable.
    pub fn with_undeletable(&self, extra: &VertexSet) -> Digraph {
        let mut g = self.clone();
        for v in extra {
            if g.contains(*v) {
                g.undeletable[v.index()] = true;
            }
        }
        g
    }

    /// Appends a fresh vertex and returns the extended graph with its id.
    pub fn with_new_vertex(&self, undeletable: bool) -> (Digraph, VertexId) {
        let id = VertexId::from(self.capacity());
        let mut live = self.live.clone();
        live.push(true);
        let mut undel = self.undeletable.clone();
        undel.push(undeletable);
        (Digraph::assemble(live, undel, self.arcs.clone()), id)
    }

    /// Copy of the graph with additional arcs between live vertices.
    pub fn with_arcs<I: IntoIterator<Item = Arc>>(&self, extra: I) -> Digraph {
        let mut arcs = self.arcs.clone();
        arcs.extend(extra);
        Digraph::assemble(self.live.clone(), self.undeletable.clone(), arcs)
    }

    /// Strongly connected components in topological order (iterative Tarjan).
    pub fn scc(&self) -> SccDecomposition {
        const UNSEEN: u32 = u32::MAX;
        let cap = self.capacity();
        let mut index = vec![UNSEEN; cap];
        let mut low = vec![0u32; cap];
        let mut on_stack = vec![false; cap];
        let mut stack: Vec<VertexId> = Vec::new();
        let mut components: Vec<Vec<VertexId>> = Vec::new();
        let mut counter = 0u32;
        // (vertex, next out-neighbour position)
        let mut call: Vec<(VertexId, usize)> = Vec::new();

        for root in self.vertices() {
            if index[root.index()] != UNSEEN {
                continue;
            }
            call.push((root, 0));
            index[root.index()] = counter;
            low[root.index()] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root.index()] = true;

            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                let vi = v.index();
                if let Some(&w) = self.out_adj[vi].get(*pos) {
                    *pos += 1;
                    let wi = w.index();
                    if index[wi] == UNSEEN {
                        index[wi] = counter;
                        low[wi] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[wi] = true;
                        call.push((w, 0));
                    } else if on_stack[wi] {
                        low[vi] = low[vi].min(index[wi]);
                    }
                    continue;
                }
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    let pi = parent.index();
                    low[pi] = low[pi].min(low[vi]);
                }
                if low[vi] == index[vi] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w.index()] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort();
                    components.push(comp);
                }
            }
        }

        // Tarjan emits sink components first.
        components.reverse();
        let mut component_of = vec![usize::MAX; cap];
        for (i, comp) in components.iter().enumerate() {
            for v in comp {
                component_of[v.index()] = i;
            }
        }
        SccDecomposition {
            components,
            component_of,
        }
    }
}

pub(crate) fn mask_to_set(mask: &[bool]) -> VertexSet {
    mask.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| VertexId::from(i))
        .collect()
}

/// Components in a topological order of the condensation: every arc runs
/// from a lower to an equal-or-higher component index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccDecomposition {
    components: Vec<Vec<VertexId>>,
    component_of: Vec<usize>,
}

impl SccDecomposition {
    pub fn components(&self) -> &[Vec<VertexId>] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component_of(&self, v: VertexId) -> Option<usize> {
        match self.component_of.get(v.index()) {
            Some(&c) if c != usize::MAX => Some(c),
            _ => None,
        }
    }

    pub fn same_component(&self, a: VertexId, b: VertexId) -> bool {
        match (self.component_of(a), self.component_of(b)) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        }
    }

    /// The sink-most component, `C_ℓ`.
    pub fn last(&self) -> Option<&[VertexId]> {
        self.components.last().map(|c| c.as_slice())
    }
}
