//! Exhaustive reference implementations, straight from the definitions.
//!
//! Nothing here shares code with the solver beyond the graph container:
//! reachability and closed-walk detection are re-derived with plain
//! depth-first search so the oracle can catch bugs in the fast paths.

use thiserror::Error;

use crate::graph::{ArcSet, Digraph, VertexId, VertexSet};
use crate::solver::{EdgeInstance, Solution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{vertices} vertices exceed the oracle limit of {limit}")]
    TooLarge { vertices: usize, limit: usize },
    #[error("{subsets} candidate sets exceed the oracle limit of {limit}")]
    TooManySubsets { subsets: u64, limit: u64 },
    #[error("terminal sets are empty or overlap")]
    BadTerminals,
    #[error("no separator exists")]
    Inseparable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_vertices: usize,
    pub max_subsets: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_vertices: 10,
            max_subsets: 1 << 22,
        }
    }
}

impl OracleBudget {
    fn admit(&self, g: &Digraph, pool: usize, k: usize) -> Result<(), OracleError> {
        if g.vertex_count() > self.max_vertices {
            return Err(OracleError::TooLarge {
                vertices: g.vertex_count(),
                limit: self.max_vertices,
            });
        }
        let subsets = count_subsets(pool, k);
        if subsets > self.max_subsets {
            return Err(OracleError::TooManySubsets {
                subsets,
                limit: self.max_subsets,
            });
        }
        Ok(())
    }
}

fn count_subsets(n: usize, k: usize) -> u64 {
    let mut total = 0u64;
    let mut c = 1u64;
    for i in 0..=k.min(n) {
        total = total.saturating_add(c);
        c = c.saturating_mul((n - i) as u64) / (i as u64 + 1);
    }
    total
}

/// Subsets of `pool` with at most `k` elements, by size and then
/// lexicographically.
fn subsets_upto(pool: &[VertexId], k: usize) -> Vec<VertexSet> {
    fn rec(pool: &[VertexId], start: usize, left: usize, cur: &mut Vec<VertexId>, out: &mut Vec<VertexSet>) {
        if left == 0 {
            out.push(cur.iter().copied().collect());
            return;
        }
        for i in start..pool.len() {
            cur.push(pool[i]);
            rec(pool, i + 1, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for size in 0..=k.min(pool.len()) {
        rec(pool, 0, size, &mut Vec::new(), &mut out);
    }
    out
}

/// Vertices reachable from `from` in `G ∖ removed`, by depth-first search
/// over the raw arc list.
fn reach(g: &Digraph, from: &VertexSet, removed: &VertexSet) -> VertexSet {
    let alive = |v: &VertexId| g.contains(*v) && !removed.contains(v);
    let mut seen: VertexSet = from.iter().filter(|v| alive(v)).copied().collect();
    let mut stack: Vec<VertexId> = seen.iter().copied().collect();
    while let Some(v) = stack.pop() {
        for a in g.arcs().iter().filter(|a| a.tail == v) {
            if alive(&a.head) && seen.insert(a.head) {
                stack.push(a.head);
            }
        }
    }
    seen
}

/// Some arc `(u, v)` of `S` survives and `v` reaches `u`.
fn has_closed_walk(g: &Digraph, s: &ArcSet, removed: &VertexSet) -> bool {
    let alive = |v: &VertexId| g.contains(*v) && !removed.contains(v);
    s.iter().any(|a| {
        alive(&a.tail)
            && alive(&a.head)
            && g.has_arc(a.tail, a.head)
            && reach(g, &VertexSet::from([a.head]), removed).contains(&a.tail)
    })
}

/// Deletion set check written against the problem statement.
pub fn is_solution(inst: &EdgeInstance, x: &VertexSet) -> bool {
    let g = inst.graph();
    x.len() <= inst.budget()
        && x.iter().all(|&v| g.contains(v) && !g.is_undeletable(v))
        && !has_closed_walk(g, inst.s_arcs(), x)
}

/// The lexicographically least among the smallest solutions of size at
/// most `k`, or `None`.
pub fn brute_force_solve(
    inst: &EdgeInstance,
    budget: &OracleBudget,
) -> Result<Option<Solution>, OracleError> {
    let g = inst.graph();
    let pool: Vec<VertexId> = g.vertices().filter(|&v| !g.is_undeletable(v)).collect();
    budget.admit(g, pool.len(), inst.budget())?;
    Ok(subsets_upto(&pool, inst.budget())
        .into_iter()
        .find(|x| is_solution(inst, x))
        .map(|deleted| Solution {
            deleted,
            certified: true,
        }))
}

/// Smallest solution size, searching budgets up to `max_k`.
pub fn brute_force_optimum(
    inst: &EdgeInstance,
    max_k: usize,
    budget: &OracleBudget,
) -> Result<Option<usize>, OracleError> {
    let found = brute_force_solve(&inst.with_budget(max_k), budget)?;
    Ok(found.map(|s| s.deleted.len()))
}

fn separates(g: &Digraph, x: &VertexSet, y: &VertexSet, w: &VertexSet) -> bool {
    reach(g, x, w).is_disjoint(y)
}

/// Important `X - Y` separators of size at most `k`, by checking
/// minimality and non-domination over every candidate set.
pub fn brute_force_important_separators(
    g: &Digraph,
    x: &VertexSet,
    y: &VertexSet,
    k: usize,
    budget: &OracleBudget,
) -> Result<Vec<VertexSet>, OracleError> {
    if x.is_empty() || y.is_empty() || !x.is_disjoint(y) {
        return Err(OracleError::BadTerminals);
    }
    let pool: Vec<VertexId> = g
        .vertices()
        .filter(|v| !x.contains(v) && !y.contains(v) && !g.is_undeletable(*v))
        .collect();
    budget.admit(g, pool.len(), k)?;
    let everything: VertexSet = pool.iter().copied().collect();
    if !separates(g, x, y, &everything) {
        return Err(OracleError::Inseparable);
    }
    let candidates = subsets_upto(&pool, k);
    let separators: Vec<(VertexSet, VertexSet)> = candidates
        .into_iter()
        .filter(|w| separates(g, x, y, w))
        .map(|w| {
            let r = reach(g, x, &w);
            (w, r)
        })
        .collect();
    let mut out = Vec::new();
    for (w, r) in &separators {
        let minimal = w.iter().all(|v| {
            let mut smaller = w.clone();
            smaller.remove(v);
            !separates(g, x, y, &smaller)
        });
        if !minimal {
            continue;
        }
        let dominated = separators
            .iter()
            .any(|(w2, r2)| w2.len() <= w.len() && r2.len() > r.len() && r.is_subset(r2));
        if !dominated {
            out.push(w.clone());
        }
    }
    Ok(out)
}

/// Every `k`-critical vertex with respect to `t0`, found by trying every
/// witness set `W`.
pub fn brute_force_critical(
    g: &Digraph,
    s: &ArcSet,
    t0: &VertexSet,
    k: usize,
    budget: &OracleBudget,
) -> Result<VertexSet, OracleError> {
    let pool: Vec<VertexId> = g.vertices().filter(|v| !t0.contains(v)).collect();
    budget.admit(g, pool.len(), k)?;
    let live_s: Vec<_> = s
        .iter()
        .filter(|a| g.contains(a.tail) && g.contains(a.head) && g.has_arc(a.tail, a.head))
        .collect();
    let mut out = VertexSet::new();
    for w in subsets_upto(&pool, k) {
        let r = reach(g, t0, &w);
        let traversable = live_s
            .iter()
            .any(|a| !w.contains(&a.tail) && !w.contains(&a.head) && r.contains(&a.tail));
        if traversable {
            continue;
        }
        for a in &live_s {
            if w.contains(&a.head) && !t0.contains(&a.head) && r.contains(&a.tail) {
                out.insert(a.head);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{vset, Arc};

    fn s(pairs: &[(usize, usize)]) -> ArcSet {
        pairs.iter().map(|&p| Arc::from(p)).collect()
    }

    fn bidirected(n: usize) -> Digraph {
        let arcs: Vec<_> = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        Digraph::build(n, &arcs, &[]).unwrap()
    }

    #[test]
    fn solve_examples() {
        let budget = OracleBudget::default();
        let c2 = Digraph::build(2, &[(0, 1), (1, 0)], &[]).unwrap();
        let inst = EdgeInstance::new(c2, s(&[(0, 1)]), 1).unwrap();
        assert_eq!(brute_force_solve(&inst, &budget).unwrap().unwrap().deleted, vset([0]));

        let p4 = Digraph::build(4, &[(0, 1), (1, 2), (2, 3)], &[]).unwrap();
        let inst = EdgeInstance::new(p4, s(&[(0, 1), (2, 3)]), 0).unwrap();
        assert!(brute_force_solve(&inst, &budget).unwrap().unwrap().deleted.is_empty());

        let k4 = bidirected(4);
        let all: ArcSet = k4.arcs().iter().copied().collect();
        let inst = EdgeInstance::new(k4, all, 2).unwrap();
        assert!(brute_force_solve(&inst, &budget).unwrap().is_none());
    }

    #[test]
    fn refuses_large_graphs() {
        let g = Digraph::build(11, &[], &[]).unwrap();
        let inst = EdgeInstance::new(g, ArcSet::new(), 1).unwrap();
        assert_eq!(
            brute_force_solve(&inst, &OracleBudget::default()),
            Err(OracleError::TooLarge { vertices: 11, limit: 10 })
        );
    }

    #[test]
    fn separator_examples() {
        let budget = OracleBudget::default();
        let p4 = Digraph::build(4, &[(0, 1), (1, 2), (2, 3)], &[]).unwrap();
        let d4 = Digraph::build(4, &[(0, 1), (0, 2), (1, 3), (2, 3)], &[]).unwrap();
        let (x, y) = (vset([0]), vset([3]));
        assert_eq!(brute_force_important_separators(&p4, &x, &y, 2, &budget).unwrap(), vec![vset([2])]);
        assert_eq!(
            brute_force_important_separators(&d4, &x, &y, 2, &budget).unwrap(),
            vec![vset([1, 2])]
        );
        let direct = Digraph::build(2, &[(0, 1)], &[]).unwrap();
        assert_eq!(
            brute_force_important_separators(&direct, &vset([0]), &vset([1]), 2, &budget),
            Err(OracleError::Inseparable)
        );
    }

    #[test]
    fn critical_examples() {
        let budget = OracleBudget::default();
        let g = Digraph::build(3, &[(0, 1), (1, 2), (2, 0)], &[]).unwrap();
        let t0 = vset([0]);
        assert_eq!(brute_force_critical(&g, &s(&[(1, 2)]), &t0, 1, &budget).unwrap(), vset([2]));
        assert!(brute_force_critical(&g, &ArcSet::new(), &t0, 1, &budget).unwrap().is_empty());
        assert!(brute_force_critical(&g, &s(&[(1, 2)]), &t0, 0, &budget).unwrap().is_empty());
    }
}
