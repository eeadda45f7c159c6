use thiserror::Error;

use crate::graph::{Arc, ArcSet, Digraph, VertexId, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("S names ({0}, {1}), which is not an arc of the graph")]
    UnknownArc(VertexId, VertexId),
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(VertexId),
    #[error("old solution contains undeletable vertex {0}")]
    UndeletableTerminal(VertexId),
    #[error("removing the old solution leaves an S-closed walk")]
    DirtyOldSolution,
}

/// `true` when `G` has a closed walk through some arc of `S`. Arcs of `S`
/// that are not in `G` are ignored.
pub fn has_s_closed_walk(g: &Digraph, s: &ArcSet) -> bool {
    let scc = g.scc();
    s.iter().any(|a| scc.same_component(a.tail, a.head))
}

/// `true` when some closed walk through an arc of `S` visits `w`.
pub fn has_s_closed_walk_through(g: &Digraph, s: &ArcSet, w: VertexId) -> bool {
    let scc = g.scc();
    let Some(cw) = scc.component_of(w) else {
        return false;
    };
    s.iter()
        .any(|a| scc.component_of(a.tail) == Some(cw) && scc.component_of(a.head) == Some(cw))
}

/// Keeps the arcs of `s` whose endpoints are both alive in `g`.
pub(crate) fn restrict_arcs(g: &Digraph, s: &ArcSet) -> ArcSet {
    s.iter()
        .filter(|a| g.contains(a.tail) && g.contains(a.head))
        .copied()
        .collect()
}

fn check_arcs(g: &Digraph, s: &ArcSet) -> Result<(), InstanceError> {
    match s.iter().find(|a| !g.has_arc(a.tail, a.head)) {
        Some(a) => Err(InstanceError::UnknownArc(a.tail, a.head)),
        None => Ok(()),
    }
}

fn is_clean_after(g: &Digraph, s: &ArcSet, x: &VertexSet) -> bool {
    let rest = g.remove_unchecked(x);
    !has_s_closed_walk(&rest, &restrict_arcs(&rest, s))
}

fn deletion_ok(g: &Digraph, budget: usize, x: &VertexSet) -> bool {
    x.len() <= budget && x.iter().all(|&v| g.contains(v) && !g.is_undeletable(v))
}

/// Subset-DFVS with `S` given as arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeInstance {
    graph: Digraph,
    s_arcs: ArcSet,
    budget: usize,
}

impl EdgeInstance {
    pub fn new(graph: Digraph, s_arcs: ArcSet, budget: usize) -> Result<Self, InstanceError> {
        check_arcs(&graph, &s_arcs)?;
        Ok(EdgeInstance {
            graph,
            s_arcs,
            budget,
        })
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn s_arcs(&self) -> &ArcSet {
        &self.s_arcs
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn with_budget(&self, budget: usize) -> Self {
        EdgeInstance {
            budget,
            ..self.clone()
        }
    }
}

/// Subset-DFVS with `S` given as vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexInstance {
    graph: Digraph,
    s_vertices: VertexSet,
    budget: usize,
}

impl VertexInstance {
    pub fn new(graph: Digraph, s_vertices: VertexSet, budget: usize) -> Result<Self, InstanceError> {
        if let Some(&v) = s_vertices.iter().find(|&&v| !graph.contains(v)) {
            return Err(InstanceError::UnknownVertex(v));
        }
        Ok(VertexInstance {
            graph,
            s_vertices,
            budget,
        })
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn s_vertices(&self) -> &VertexSet {
        &self.s_vertices
    }

    pub fn budget(&self) -> usize {
        self.budget
    }
}

/// Disjoint compression: `(G, S, T, k)` where `G ∖ T` is already clean and
/// the answer must avoid `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressionInstance {
    graph: Digraph,
    s_arcs: ArcSet,
    old_solution: VertexSet,
    budget: usize,
}

impl CompressionInstance {
    pub fn new(
        graph: Digraph,
        s_arcs: ArcSet,
        old_solution: VertexSet,
        budget: usize,
    ) -> Result<Self, InstanceError> {
        check_arcs(&graph, &s_arcs)?;
        if let Some(&v) = old_solution.iter().find(|&&v| !graph.contains(v)) {
            return Err(InstanceError::UnknownVertex(v));
        }
        if let Some(&v) = old_solution.iter().find(|&&v| graph.is_undeletable(v)) {
            return Err(InstanceError::UndeletableTerminal(v));
        }
        if !is_clean_after(&graph, &s_arcs, &old_solution) {
            return Err(InstanceError::DirtyOldSolution);
        }
        Ok(Self::from_parts(graph, s_arcs, old_solution, budget))
    }

    pub(crate) fn from_parts(
        graph: Digraph,
        s_arcs: ArcSet,
        old_solution: VertexSet,
        budget: usize,
    ) -> Self {
        debug_assert!(is_clean_after(&graph, &s_arcs, &old_solution));
        CompressionInstance {
            graph,
            s_arcs,
            old_solution,
            budget,
        }
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn s_arcs(&self) -> &ArcSet {
        &self.s_arcs
    }

    pub fn old_solution(&self) -> &VertexSet {
        &self.old_solution
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn endpoints(&self) -> EndpointSets {
        EndpointSets::of(&self.graph, &self.s_arcs)
    }

    /// `(G ∖ X, S, T, k - |X|)`; `X` must avoid `T` and fit the budget.
    pub(crate) fn delete(&self, x: &VertexSet) -> Self {
        debug_assert!(x.len() <= self.budget && x.is_disjoint(&self.old_solution));
        let graph = self.graph.remove_unchecked(x);
        let s_arcs = restrict_arcs(&graph, &self.s_arcs);
        CompressionInstance {
            graph,
            s_arcs,
            old_solution: self.old_solution.clone(),
            budget: self.budget - x.len(),
        }
    }
}

/// Tails and heads of the arcs of `S`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EndpointSets {
    pub s_minus: VertexSet,
    pub s_plus: VertexSet,
}

impl EndpointSets {
    pub fn of(g: &Digraph, s: &ArcSet) -> Self {
        let mut e = EndpointSets::default();
        for a in s.iter().filter(|a| g.contains(a.tail) && g.contains(a.head)) {
            e.s_minus.insert(a.tail);
            e.s_plus.insert(a.head);
        }
        e
    }
}

/// A deletion set in original vertex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub deleted: VertexSet,
    pub certified: bool,
}

pub fn verify_solution(inst: &EdgeInstance, x: &VertexSet) -> bool {
    deletion_ok(&inst.graph, inst.budget, x) && is_clean_after(&inst.graph, &inst.s_arcs, x)
}

/// [`verify_solution`] for compression instances, which also demands `X ∩ T = ∅`.
pub fn verify_compression(inst: &CompressionInstance, x: &VertexSet) -> bool {
    x.is_disjoint(&inst.old_solution)
        && deletion_ok(&inst.graph, inst.budget, x)
        && is_clean_after(&inst.graph, &inst.s_arcs, x)
}

/// Every arc touching an `S` vertex becomes an `S`-arc.
pub fn vertex_to_edge(inst: &VertexInstance) -> EdgeInstance {
    let s_arcs = inst
        .graph
        .arcs()
        .iter()
        .filter(|a| inst.s_vertices.contains(&a.tail) || inst.s_vertices.contains(&a.head))
        .copied()
        .collect();
    EdgeInstance {
        graph: inst.graph.clone(),
        s_arcs,
        budget: inst.budget,
    }
}

/// Subdivides each `S`-arc `(u, v)` through a fresh vertex `x` and makes the
/// fresh vertices the `S` set. With `every_arc`, all arcs are subdivided but
/// only the subdivisions of `S`-arcs join `S`. Fresh vertices are
/// undeletable, since removing one would amount to deleting an arc. Fresh
/// ids follow the original id range in arc order.
pub fn edge_to_vertex(inst: &EdgeInstance, every_arc: bool) -> VertexInstance {
    let g = &inst.graph;
    let cap = g.capacity();
    let mut live = g.live_mask().to_vec();
    let mut undeletable = g.undeletable_mask().to_vec();
    let mut arcs = Vec::with_capacity(g.arc_count() * 2);
    let mut s_vertices = VertexSet::new();
    let mut next = cap;
    for a in g.arcs() {
        let in_s = inst.s_arcs.contains(a);
        if !(in_s || every_arc) {
            arcs.push(*a);
            continue;
        }
        let x = VertexId::from(next);
        next += 1;
        live.push(true);
        undeletable.push(true);
        arcs.push(Arc { tail: a.tail, head: x });
        arcs.push(Arc { tail: x, head: a.head });
        if in_s {
            s_vertices.insert(x);
        }
    }
    VertexInstance {
        graph: Digraph::assemble(live, undeletable, arcs),
        s_vertices,
        budget: inst.budget,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::vset;

    fn s(pairs: &[(usize, usize)]) -> ArcSet {
        pairs.iter().map(|&p| Arc::from(p)).collect()
    }

    fn c2() -> Digraph {
        Digraph::build(2, &[(0, 1), (1, 0)], &[]).unwrap()
    }

    #[test]
    fn closed_walk_examples() {
        assert!(has_s_closed_walk(&c2(), &s(&[(0, 1)])));
        let p4 = Digraph::build(4, &[(0, 1), (1, 2), (2, 3)], &[]).unwrap();
        assert!(!has_s_closed_walk(&p4, &s(&[(0, 1), (2, 3)])));
        let pendant = Digraph::build(4, &[(0, 1), (1, 2), (2, 0), (2, 3)], &[]).unwrap();
        assert!(!has_s_closed_walk(&pendant, &s(&[(2, 3)])));
        assert!(has_s_closed_walk_through(&pendant, &s(&[(0, 1)]), VertexId(2)));
        assert!(!has_s_closed_walk_through(&pendant, &s(&[(0, 1)]), VertexId(3)));
    }

    #[test]
    fn verify_examples() {
        let inst = EdgeInstance::new(c2(), s(&[(0, 1)]), 1).unwrap();
        assert!(verify_solution(&inst, &vset([0])));
        assert!(!verify_solution(&inst, &VertexSet::new()));
        let comp = CompressionInstance::new(c2(), s(&[(0, 1)]), vset([0]), 1).unwrap();
        assert!(!verify_compression(&comp, &vset([0])));
        assert!(verify_compression(&comp, &vset([1])));
        let locked = Digraph::build(2, &[(0, 1), (1, 0)], &[0]).unwrap();
        let inst = EdgeInstance::new(locked, s(&[(0, 1)]), 1).unwrap();
        assert!(!verify_solution(&inst, &vset([0])));
    }

    #[test]
    fn instance_validation() {
        assert_eq!(
            EdgeInstance::new(c2(), s(&[(0, 0)]), 1),
            Err(InstanceError::UnknownArc(VertexId(0), VertexId(0)))
        );
        assert_eq!(
            CompressionInstance::new(c2(), s(&[(0, 1)]), VertexSet::new(), 1),
            Err(InstanceError::DirtyOldSolution)
        );
    }

    #[test]
    fn vertex_to_edge_examples() {
        let v = VertexInstance::new(c2(), vset([0]), 1).unwrap();
        assert_eq!(vertex_to_edge(&v).s_arcs(), &s(&[(0, 1), (1, 0)]));
        let v = VertexInstance::new(c2(), VertexSet::new(), 1).unwrap();
        assert!(vertex_to_edge(&v).s_arcs().is_empty());
    }

    #[test]
    fn edge_to_vertex_examples() {
        let e = EdgeInstance::new(c2(), s(&[(0, 1)]), 1).unwrap();
        let v = edge_to_vertex(&e, false);
        assert_eq!(v.s_vertices(), &vset([2]));
        assert!(v.graph().has_arc(VertexId(0), VertexId(2)));
        assert!(v.graph().has_arc(VertexId(2), VertexId(1)));
        assert!(v.graph().has_arc(VertexId(1), VertexId(0)));
        assert_eq!(v.graph().arc_count(), 3);
        assert!(v.graph().is_undeletable(VertexId(2)));

        let e = EdgeInstance::new(c2(), ArcSet::new(), 1).unwrap();
        let v = edge_to_vertex(&e, false);
        assert_eq!(v.graph(), &c2());
        assert!(v.s_vertices().is_empty());

        let strict = edge_to_vertex(&EdgeInstance::new(c2(), s(&[(0, 1)]), 1).unwrap(), true);
        assert_eq!(strict.graph().vertex_count(), 4);
        assert_eq!(strict.s_vertices(), &vset([2]));
    }
}
