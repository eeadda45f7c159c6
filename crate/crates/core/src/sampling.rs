//! Random sampling of important separators and the two-phase covering
//! procedure that produces candidate sets `Z` for the torso reduction.
//!
//! A sample draws a vertex set `P` and returns the union of the exact
//! reverse shadows of those members of `I_k` that lie inside `P`. Only
//! vertices that occur in some member of `I_k` can influence the result, so
//! `P` is drawn over that universe alone.

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use thiserror::Error;

use crate::graph::{Digraph, VertexId, VertexSet};
use crate::separators::{enumerate_ik, exact_reverse_shadow_unchecked};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SamplingError {
    #[error("splitter needs {symbols} symbols, above the limit of {limit}")]
    SplitterTooLarge { symbols: u64, limit: u64 },
    #[error("exhaustive sampling over {vertices} vertices exceeds the limit of {limit}")]
    TooManyVertices { vertices: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SamplingMode {
    #[default]
    MonteCarlo,
    /// Every `P` over the universe; exact, small graphs only.
    ExhaustiveP,
    /// Splitter-based family; exact, tiny budgets only.
    Deterministic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplingConfig {
    pub mode: SamplingMode,
    /// Trials per covering call; `None` uses `4^(k²) + 64`.
    pub trials: Option<u64>,
    pub trial_multiplier: u64,
    pub seed: u64,
    pub splitter_limit: u64,
    pub exhaustive_limit: usize,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            mode: SamplingMode::MonteCarlo,
            trials: None,
            trial_multiplier: 1,
            seed: 0,
            splitter_limit: 64,
            exhaustive_limit: 16,
        }
    }
}

impl SamplingConfig {
    pub fn trials_for(&self, k: usize) -> u64 {
        let base = self.trials.unwrap_or_else(|| default_trials(k));
        base.saturating_mul(self.trial_multiplier).max(1)
    }
}

pub fn default_trials(k: usize) -> u64 {
    let exp = (2 * k * k) as u32;
    2u64.checked_pow(exp).unwrap_or(u64::MAX).saturating_add(64)
}

/// Where a member of a [`SampleFamily`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Monte Carlo trial `index` under `seed`.
    Trial { seed: u64, index: u64 },
    /// Exhaustive mode: the `P` subsets (as universe bitmasks) of both phases.
    Subsets { first: u64, second: u64 },
    /// Deterministic mode: `(function, subset)` index pairs of both phases.
    Splitter {
        first: (u64, u64),
        second: (u64, u64),
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SampleFamily {
    pub sets: Vec<VertexSet>,
    pub provenance: Vec<Provenance>,
}

impl SampleFamily {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// SplitMix64 step, used to derive independent per-trial seeds.
pub(crate) fn mix(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct Member {
    /// Separator as sorted positions in the universe.
    sep: Vec<usize>,
    shadow: VertexSet,
}

/// `I_k` with the exact reverse shadow of every member, restricted to
/// members whose shadow is nonempty. Shadows may contain undeletable
/// vertices; contracting them is as sound as contracting any other.
pub(crate) struct ShadowIndex {
    universe: Vec<VertexId>,
    members: Vec<Member>,
    by_first: Vec<Vec<usize>>,
    k: usize,
}

impl ShadowIndex {
    pub(crate) fn build(g: &Digraph, t: &VertexSet, k: usize) -> ShadowIndex {
        let mut raw = Vec::new();
        for sep in enumerate_ik(g, t, k) {
            let shadow = exact_reverse_shadow_unchecked(g, t, &sep.vertices);
            if !shadow.is_empty() {
                raw.push((sep.vertices, shadow));
            }
        }
        let universe: Vec<VertexId> = raw
            .iter()
            .flat_map(|(s, _)| s.iter().copied())
            .collect::<VertexSet>()
            .into_iter()
            .collect();
        let pos: HashMap<VertexId, usize> =
            universe.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut by_first = vec![Vec::new(); universe.len()];
        let members = raw
            .into_iter()
            .enumerate()
            .map(|(i, (sep, shadow))| {
                let sep: Vec<usize> = sep.iter().map(|v| pos[v]).collect();
                by_first[sep[0]].push(i);
                Member { sep, shadow }
            })
            .collect();
        ShadowIndex {
            universe,
            members,
            by_first,
            k,
        }
    }

    pub(crate) fn universe_len(&self) -> usize {
        self.universe.len()
    }

    /// Union of shadows of members inside `P`; `picked` holds the sorted
    /// universe positions of `P` and `mask` is scratch of universe length.
    fn z_for(&self, picked: &[usize], mask: &mut [bool]) -> VertexSet {
        let mut z = VertexSet::new();
        for &p in picked {
            mask[p] = true;
        }
        for &p in picked {
            for &m in &self.by_first[p] {
                let member = &self.members[m];
                if member.sep.iter().all(|&q| mask[q]) {
                    z.extend(member.shadow.iter().copied());
                }
            }
        }
        for &p in picked {
            mask[p] = false;
        }
        z
    }

    /// Draws `P` with probability `4^-k` per universe vertex.
    fn draw(&self, rng: &mut ChaCha8Rng, picked: &mut Vec<usize>) {
        picked.clear();
        if self.universe.is_empty() {
            return;
        }
        let p = 0.25f64.powi(self.k as i32);
        let geo = Geometric::new(p).expect("probability in (0, 1]");
        let mut next = 0u64;
        loop {
            next = next.saturating_add(geo.sample(rng));
            if next >= self.universe.len() as u64 {
                break;
            }
            picked.push(next as usize);
            next += 1;
        }
    }

    fn sample(&self, seed: u64) -> VertexSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut picked = Vec::new();
        self.draw(&mut rng, &mut picked);
        let mut mask = vec![false; self.universe.len()];
        self.z_for(&picked, &mut mask)
    }
}

/// One random sample `Z ⊆ V(G) ∖ T`. Reproducible in `seed`.
pub fn random_set(g: &Digraph, t: &VertexSet, k: usize, seed: u64) -> VertexSet {
    if k == 0 {
        return VertexSet::new();
    }
    ShadowIndex::build(g, t, k).sample(seed)
}

/// Number of splitter symbols `k + k²·4^k`.
pub fn splitter_symbols(k: usize) -> u64 {
    let k = k as u64;
    4u64.checked_pow(k as u32)
        .and_then(|p| p.checked_mul(k * k))
        .and_then(|b| b.checked_add(k))
        .unwrap_or(u64::MAX)
}

/// Functions `[u] -> [m]` that are injective on every set of at most `r`
/// elements for some member, where `m = r²`. A single identity map when
/// `u ≤ m`; otherwise all maps `x -> ((αx + β) mod p) mod m` for a prime
/// `p ≥ u`. Over that family two fixed elements collide with probability
/// at most `1/m`, so some member is injective on any `r`-set.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Splitter {
    range: u64,
    prime: u64,
}

impl Splitter {
    pub(crate) fn new(universe: usize, r: u64) -> Splitter {
        let range = (r * r).max(1);
        let prime = if (universe as u64) <= range {
            0
        } else {
            next_prime(universe as u64)
        };
        Splitter { range, prime }
    }

    pub(crate) fn len(&self) -> u64 {
        if self.prime == 0 {
            1
        } else {
            self.prime * (self.prime - 1)
        }
    }

    pub(crate) fn range(&self) -> u64 {
        self.range
    }

    pub(crate) fn apply(&self, index: u64, x: usize) -> u64 {
        if self.prime == 0 {
            return x as u64;
        }
        let alpha = 1 + index / self.prime;
        let beta = index % self.prime;
        ((alpha * x as u64 + beta) % self.prime) % self.range
    }
}

fn next_prime(n: u64) -> u64 {
    let is_prime = |c: u64| c >= 2 && (2..).take_while(|d| d * d <= c).all(|d| !c.is_multiple_of(d));
    (n.max(2)..).find(|&c| is_prime(c)).expect("primes are unbounded")
}

/// All subsets of `{0..m}` of size at most `k`, in order of size then
/// lexicographically.
fn small_subsets(m: u64, k: usize) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for s in &layer {
            let start = s.last().map_or(0, |&x: &u64| x + 1);
            for x in start..m {
                let mut t = s.clone();
                t.push(x);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// One phase of an exact family: the sequence of `P` sets over a universe.
enum PSets {
    Exhaustive { size: usize },
    Splitter { splitter: Splitter, subsets: Vec<Vec<u64>> },
}

impl PSets {
    fn for_mode(
        mode: SamplingMode,
        index: &ShadowIndex,
        k: usize,
        limits: &SamplingConfig,
        vertices: usize,
    ) -> Result<PSets, SamplingError> {
        match mode {
            SamplingMode::ExhaustiveP => {
                if vertices > limits.exhaustive_limit || index.universe_len() > 63 {
                    return Err(SamplingError::TooManyVertices {
                        vertices,
                        limit: limits.exhaustive_limit,
                    });
                }
                Ok(PSets::Exhaustive {
                    size: index.universe_len(),
                })
            }
            _ => {
                let r = splitter_symbols(k);
                if r > limits.splitter_limit {
                    return Err(SamplingError::SplitterTooLarge {
                        symbols: r,
                        limit: limits.splitter_limit,
                    });
                }
                let splitter = Splitter::new(index.universe_len(), r);
                let subsets = small_subsets(splitter.range(), k);
                Ok(PSets::Splitter { splitter, subsets })
            }
        }
    }

    /// Calls `f(provenance, picked)` for every `P`.
    fn for_each(&self, universe: usize, mut f: impl FnMut((u64, u64), &[usize])) {
        let mut picked = Vec::new();
        match self {
            PSets::Exhaustive { size } => {
                for mask in 0..(1u64 << size) {
                    picked.clear();
                    picked.extend((0..*size).filter(|i| mask >> i & 1 == 1));
                    f((mask, 0), &picked);
                }
            }
            PSets::Splitter { splitter, subsets } => {
                let mut image = vec![0u64; universe];
                for h in 0..splitter.len() {
                    for (x, slot) in image.iter_mut().enumerate() {
                        *slot = splitter.apply(h, x);
                    }
                    for (j, hs) in subsets.iter().enumerate() {
                        picked.clear();
                        picked.extend((0..universe).filter(|&x| hs.contains(&image[x])));
                        f((h, j as u64), &picked);
                    }
                }
            }
        }
    }
}

/// Distinct `Z` produced by one phase of an exact family, with the
/// provenance of their first occurrence.
fn exact_phase(index: &ShadowIndex, psets: &PSets) -> Vec<(VertexSet, (u64, u64))> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut mask = vec![false; index.universe_len()];
    psets.for_each(index.universe_len(), |prov, picked| {
        let z = index.z_for(picked, &mut mask);
        if seen.insert(z.clone()) {
            out.push((z, prov));
        }
    });
    out
}

fn exact_provenance(mode: SamplingMode, first: (u64, u64), second: (u64, u64)) -> Provenance {
    match mode {
        SamplingMode::ExhaustiveP => Provenance::Subsets {
            first: first.0,
            second: second.0,
        },
        _ => Provenance::Splitter { first, second },
    }
}

/// The single-phase deterministic family: every distinct `Z` obtained from
/// the splitter-defined `P` sets.
pub fn deterministic_family(
    g: &Digraph,
    t: &VertexSet,
    k: usize,
    config: &SamplingConfig,
) -> Result<SampleFamily, SamplingError> {
    let index = ShadowIndex::build(g, t, k);
    let psets = PSets::for_mode(SamplingMode::Deterministic, &index, k, config, g.vertex_count())?;
    let mut family = SampleFamily::default();
    for (z, prov) in exact_phase(&index, &psets) {
        family.sets.push(z);
        family.provenance.push(Provenance::Splitter {
            first: prov,
            second: (0, 0),
        });
    }
    Ok(family)
}

enum Plan {
    MonteCarlo {
        seed: u64,
        trials: u64,
        next: u64,
    },
    Exact {
        mode: SamplingMode,
        first: Vec<(VertexSet, (u64, u64))>,
        position: usize,
        pending: std::vec::IntoIter<(VertexSet, Provenance)>,
    },
}

/// Lazy two-phase covering. Each item is a distinct `Z = Z1 ∪ Z2`, where
/// `Z1` is sampled on `G` and `Z2` on the reverse of `G` with `Z1` made
/// undeletable.
pub struct Covering<'a> {
    g: &'a Digraph,
    t: &'a VertexSet,
    k: usize,
    config: SamplingConfig,
    first: ShadowIndex,
    second: HashMap<VertexSet, Rc<ShadowIndex>>,
    reversed: Digraph,
    seen: HashSet<VertexSet>,
    plan: Plan,
    trials_used: u64,
}

impl<'a> Covering<'a> {
    pub fn new(
        g: &'a Digraph,
        t: &'a VertexSet,
        k: usize,
        config: &SamplingConfig,
    ) -> Result<Covering<'a>, SamplingError> {
        let first = ShadowIndex::build(g, t, k);
        let plan = match config.mode {
            SamplingMode::MonteCarlo => Plan::MonteCarlo {
                seed: config.seed,
                trials: config.trials_for(k),
                next: 0,
            },
            mode => {
                let psets = PSets::for_mode(mode, &first, k, config, g.vertex_count())?;
                Plan::Exact {
                    mode,
                    first: exact_phase(&first, &psets),
                    position: 0,
                    pending: Vec::new().into_iter(),
                }
            }
        };
        Ok(Covering {
            g,
            t,
            k,
            config: config.clone(),
            first,
            second: HashMap::new(),
            reversed: g.reverse(),
            seen: HashSet::new(),
            plan,
            trials_used: 0,
        })
    }

    /// Samples drawn so far (Monte Carlo trials, or exact-family members).
    pub fn trials_used(&self) -> u64 {
        self.trials_used
    }

    fn second_index(&mut self, z1: &VertexSet) -> Rc<ShadowIndex> {
        if let Some(ix) = self.second.get(z1) {
            return Rc::clone(ix);
        }
        let g2 = self.reversed.with_undeletable(z1);
        let ix = Rc::new(ShadowIndex::build(&g2, self.t, self.k));
        self.second.insert(z1.clone(), Rc::clone(&ix));
        ix
    }

    fn next_exact(&mut self) -> Option<(VertexSet, Provenance)> {
        loop {
            let Plan::Exact {
                mode,
                first,
                position,
                pending,
            } = &mut self.plan
            else {
                unreachable!()
            };
            if let Some(item) = pending.next() {
                return Some(item);
            }
            if *position >= first.len() {
                return None;
            }
            let (z1, p1) = first[*position].clone();
            *position += 1;
            let mode = *mode;
            let ix = self.second_index(&z1);
            let psets = match PSets::for_mode(mode, &ix, self.k, &self.config, self.g.vertex_count()) {
                Ok(p) => p,
                // The universe of the second phase is no larger than the
                // graph, which already passed the same check.
                Err(_) => unreachable!("second phase exceeds limits checked for the first"),
            };
            let mut batch = Vec::new();
            for (z2, p2) in exact_phase(&ix, &psets) {
                self.trials_used += 1;
                let z: VertexSet = z1.union(&z2).copied().collect();
                if self.seen.insert(z.clone()) {
                    batch.push((z, exact_provenance(mode, p1, p2)));
                }
            }
            if let Plan::Exact { pending, .. } = &mut self.plan {
                *pending = batch.into_iter();
            }
        }
    }
}

impl Iterator for Covering<'_> {
    type Item = (VertexSet, Provenance);

    fn next(&mut self) -> Option<Self::Item> {
        if self.k == 0 {
            // I_0 is empty, so the only sample is Z = ∅.
            return self.seen.insert(VertexSet::new()).then(|| {
                self.trials_used += 1;
                (VertexSet::new(), Provenance::Trial { seed: self.config.seed, index: 0 })
            });
        }
        if matches!(self.plan, Plan::Exact { .. }) {
            return self.next_exact();
        }
        let mut picked = Vec::new();
        let mut mask = vec![false; self.g.capacity()];
        loop {
            let Plan::MonteCarlo { seed, trials, next } = &mut self.plan else {
                unreachable!()
            };
            if *next >= *trials {
                return None;
            }
            let (seed, index) = (*seed, *next);
            *next += 1;
            self.trials_used += 1;

            let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, 2 * index));
            self.first.draw(&mut rng, &mut picked);
            let z1 = self.first.z_for(&picked, &mut mask);
            let second = self.second_index(&z1);
            let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, 2 * index + 1));
            second.draw(&mut rng, &mut picked);
            let z2 = second.z_for(&picked, &mut mask);
            let z: VertexSet = z1.union(&z2).copied().collect();
            if self.seen.insert(z.clone()) {
                return Some((z, Provenance::Trial { seed, index }));
            }
        }
    }
}

/// Collects every distinct `Z` of a covering run.
pub fn covering(
    g: &Digraph,
    t: &VertexSet,
    k: usize,
    config: &SamplingConfig,
) -> Result<SampleFamily, SamplingError> {
    let mut family = SampleFamily::default();
    for (z, prov) in Covering::new(g, t, k, config)? {
        family.sets.push(z);
        family.provenance.push(prov);
    }
    Ok(family)
}
