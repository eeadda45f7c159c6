//! Seeded instance generators.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Arc, ArcSet, Digraph, VertexSet};
use crate::solver::EdgeInstance;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("cannot place {m} arcs; only {available} are available")]
    TooManyArcs { m: usize, available: usize },
    #[error("planted set of size {k} does not fit in {n} vertices")]
    BudgetTooLarge { k: usize, n: usize },
    #[error("S fraction {0} is not in [0, 1]")]
    BadFraction(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    pub n: usize,
    pub m: usize,
    pub s_fraction: f64,
    pub k: usize,
    pub seed: u64,
}

fn finish(
    n: usize,
    pairs: Vec<(usize, usize)>,
    s_fraction: f64,
    k: usize,
    rng: &mut ChaCha8Rng,
) -> EdgeInstance {
    let mut pairs = pairs;
    pairs.sort_unstable();
    let s: ArcSet = pairs
        .iter()
        .filter(|_| rng.gen_bool(s_fraction))
        .map(|&p| Arc::from(p))
        .collect();
    let g = Digraph::build(n, &pairs, &[]).expect("generated endpoints are in range");
    EdgeInstance::new(g, s, k).expect("S is drawn from the arcs")
}

fn check_fraction(f: f64) -> Result<(), GenError> {
    if (0.0..=1.0).contains(&f) {
        Ok(())
    } else {
        Err(GenError::BadFraction(f))
    }
}

/// `m` distinct arcs without self-loops drawn uniformly, each joining `S`
/// with probability `s_fraction`.
pub fn random_instance(p: &GenParams) -> Result<EdgeInstance, GenError> {
    check_fraction(p.s_fraction)?;
    let available = p.n * p.n.saturating_sub(1);
    if p.m > available {
        return Err(GenError::TooManyArcs { m: p.m, available });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let pairs = index::sample(&mut rng, available, p.m)
        .into_iter()
        .map(|i| {
            let (u, r) = (i / (p.n - 1), i % (p.n - 1));
            (u, if r >= u { r + 1 } else { r })
        })
        .collect();
    Ok(finish(p.n, pairs, p.s_fraction, p.k, &mut rng))
}

/// An instance that is YES at budget `k`: a hidden set `X` of `k` vertices,
/// arcs among the other vertices that all point forward in a random order,
/// and arbitrary arcs touching `X`. Returns the instance and `X`.
pub fn planted_instance(p: &GenParams) -> Result<(EdgeInstance, VertexSet), GenError> {
    check_fraction(p.s_fraction)?;
    if p.k > p.n {
        return Err(GenError::BudgetTooLarge { k: p.k, n: p.n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut order: Vec<usize> = (0..p.n).collect();
    order.shuffle(&mut rng);
    let hidden: Vec<usize> = order[..p.k].to_vec();
    let rest = &order[p.k..];
    let mut is_hidden = vec![false; p.n];
    for &x in &hidden {
        is_hidden[x] = true;
    }

    let mut pool = Vec::new();
    for (i, &u) in rest.iter().enumerate() {
        for &v in &rest[i + 1..] {
            pool.push((u, v));
        }
    }
    for u in 0..p.n {
        for v in 0..p.n {
            if u != v && (is_hidden[u] || is_hidden[v]) {
                pool.push((u, v));
            }
        }
    }
    if p.m > pool.len() {
        return Err(GenError::TooManyArcs {
            m: p.m,
            available: pool.len(),
        });
    }
    let pairs = index::sample(&mut rng, pool.len(), p.m)
        .into_iter()
        .map(|i| pool[i])
        .collect();
    let inst = finish(p.n, pairs, p.s_fraction, p.k, &mut rng);
    Ok((inst, hidden.into_iter().map(Into::into).collect()))
}
