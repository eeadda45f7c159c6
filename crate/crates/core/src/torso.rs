//! Torso contraction and reduced instances.
//!
//! `torso(G, C, S)` keeps the vertices of `C` and joins `a, b ∈ C` whenever
//! some `a -> b` walk in `G` has all internal vertices outside `C`. The new
//! arc belongs to `S'` when some such walk uses an arc of `S`.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::graph::{Arc, ArcSet, Digraph, VertexId, VertexSet};
use crate::solver::CompressionInstance;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorsoError {
    #[error("vertex {0} of the kept set is not in the graph")]
    NotInGraph(VertexId),
    #[error("cannot contract terminal vertex {0}")]
    ContractsTerminal(VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsoResult {
    pub graph: Digraph,
    pub s_arcs: ArcSet,
}

pub fn torso(g: &Digraph, c: &VertexSet, s: &ArcSet) -> Result<TorsoResult, TorsoError> {
    if let Some(&v) = c.iter().find(|&&v| !g.contains(v)) {
        return Err(TorsoError::NotInGraph(v));
    }
    Ok(torso_unchecked(g, c, s))
}

pub(crate) fn torso_unchecked(g: &Digraph, c: &VertexSet, s: &ArcSet) -> TorsoResult {
    let cap = g.capacity();
    let in_c = g.mask(c);
    let s_lookup: HashSet<Arc> = s.iter().copied().collect();
    let is_s = |tail: VertexId, head: VertexId| s_lookup.contains(&Arc { tail, head });

    // (a, b) -> whether some contracted walk a -> b uses an S-arc
    let mut found: BTreeMap<(VertexId, VertexId), bool> = BTreeMap::new();
    let mut seen = vec![[false; 2]; cap];
    let mut stack: Vec<(VertexId, bool)> = Vec::new();
    for &a in c {
        seen.iter_mut().for_each(|x| *x = [false; 2]);
        let mut step = |from: VertexId, flag: bool, stack: &mut Vec<(VertexId, bool)>| {
            for &b in g.out_neighbors(from) {
                let f = flag || is_s(from, b);
                if in_c[b.index()] {
                    let e = found.entry((a, b)).or_insert(false);
                    *e |= f;
                } else if !seen[b.index()][f as usize] {
                    seen[b.index()][f as usize] = true;
                    stack.push((b, f));
                }
            }
        };
        step(a, false, &mut stack);
        while let Some((x, f)) = stack.pop() {
            step(x, f, &mut stack);
        }
    }

    let kept = g.induced(c);
    let existing: HashSet<(VertexId, VertexId)> =
        kept.arcs().iter().map(|a| (a.tail, a.head)).collect();
    let mut s_arcs: ArcSet = s
        .iter()
        .filter(|a| existing.contains(&(a.tail, a.head)))
        .copied()
        .collect();
    let mut extra = Vec::new();
    for (&(a, b), &flag) in &found {
        if !existing.contains(&(a, b)) {
            extra.push(Arc::new(a, b));
        }
        if flag {
            s_arcs.insert(Arc::new(a, b));
        }
    }
    TorsoResult {
        graph: kept.with_arcs(extra),
        s_arcs,
    }
}

/// The reduced instance `I/Z`: the torso on `V(G) ∖ Z` with the same
/// terminals and budget.
pub fn reduce_instance(
    inst: &CompressionInstance,
    z: &VertexSet,
) -> Result<CompressionInstance, TorsoError> {
    if let Some(&v) = z.intersection(inst.old_solution()).next() {
        return Err(TorsoError::ContractsTerminal(v));
    }
    Ok(reduce_unchecked(inst, z))
}

pub(crate) fn reduce_unchecked(inst: &CompressionInstance, z: &VertexSet) -> CompressionInstance {
    let g = inst.graph();
    if !z.iter().any(|&v| g.contains(v)) {
        return inst.clone();
    }
    let keep: VertexSet = g.vertices().filter(|v| !z.contains(v)).collect();
    let t = torso_unchecked(g, &keep, inst.s_arcs());
    CompressionInstance::from_parts(t.graph, t.s_arcs, inst.old_solution().clone(), inst.budget())
}
