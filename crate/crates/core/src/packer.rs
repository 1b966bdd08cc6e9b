//! Phase I: randomized packing into a t-(n,k,{0,1})-design, plus leave
//! diagnostics.
//!
//! Two strategies are exposed. `greedy_pack` makes one pass over all
//! `C(n,k)` candidate edges in a seeded pseudorandom order and commits every
//! edge that collides with nothing committed so far; the result is a maximal
//! packing. `nibble_pack` first commits random bites round by round,
//! discarding in-batch and cross-batch conflicts, then finishes with the
//! same greedy cleanup.

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Binomial, Distribution};

use crate::combinatorics::{binomial, unrank_subset};
use crate::error::{Error, Result};
use crate::hypergraph::{Design, LeaveHypergraph, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Greedy,
    Nibble,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PassOrder {
    RandomPermutation,
    RankOrder,
}

#[derive(Clone, Debug)]
pub struct PackingConfig {
    pub strategy: Strategy,
    pub seed: u64,
    /// Fraction of the ideal edge count attempted per nibble round.
    pub nibble_bite_fraction: f64,
    pub nibble_rounds: u32,
    pub greedy_pass_order: PassOrder,
}

impl Default for PackingConfig {
    fn default() -> Self {
        PackingConfig {
            strategy: Strategy::Greedy,
            seed: 0,
            nibble_bite_fraction: 0.1,
            nibble_rounds: 10,
            greedy_pass_order: PassOrder::RandomPermutation,
        }
    }
}

impl PackingConfig {
    fn validate(&self) -> Result<()> {
        if !(self.nibble_bite_fraction > 0.0 && self.nibble_bite_fraction <= 1.0) {
            return Err(Error::Parameter(format!(
                "nibble_bite_fraction must be in (0,1], got {}",
                self.nibble_bite_fraction
            )));
        }
        if self.nibble_rounds < 1 {
            return Err(Error::Parameter("nibble_rounds must be >= 1".into()));
        }
        Ok(())
    }
}

fn check_params(n: u32, k: u32, t: u32) -> Result<()> {
    if !(n > k && k > t && t >= 2) {
        return Err(Error::Parameter(format!(
            "need n > k > t >= 2, got n={n} k={k} t={t}"
        )));
    }
    if n < k + t {
        return Err(Error::Parameter(format!(
            "ground set too small: need n >= k + t, got n={n} k={k} t={t}"
        )));
    }
    Ok(())
}

/// A seeded pseudorandom permutation of `[0, size)` built from a 4-round
/// Feistel network with cycle walking, so candidate orders are reproducible
/// without materializing all `C(n,k)` ranks.
struct RankPermutation {
    size: u64,
    half_bits: u32,
    keys: [u64; 4],
}

impl RankPermutation {
    fn new(size: u64, seed: u64) -> Self {
        let bits = 64 - size.max(2).saturating_sub(1).leading_zeros();
        let half_bits = bits.div_ceil(2).max(1);
        let mut s = seed;
        let keys = [0; 4].map(|_| {
            s = splitmix64(s);
            s
        });
        RankPermutation { size, half_bits, keys }
    }

    fn apply(&self, i: u64) -> u64 {
        debug_assert!(i < self.size);
        if self.size == 1 {
            return 0;
        }
        let mask = (1u64 << self.half_bits) - 1;
        let mut x = i;
        loop {
            let mut left = x >> self.half_bits;
            let mut right = x & mask;
            for key in self.keys {
                let f = splitmix64(right ^ key) & mask;
                let next_right = left ^ f;
                left = right;
                right = next_right;
            }
            x = (left << self.half_bits) | right;
            if x < self.size {
                return x;
            }
        }
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mutable packing state shared by both strategies.
struct PackState {
    n: u32,
    k: u32,
    t: u32,
    covered: HashSet<VertexSet>,
    edges: BTreeSet<VertexSet>,
}

impl PackState {
    fn new(n: u32, k: u32, t: u32) -> Self {
        PackState { n, k, t, covered: HashSet::new(), edges: BTreeSet::new() }
    }

    fn edge_fits(&self, e: &VertexSet) -> bool {
        e.subsets(self.t as usize).all(|s| !self.covered.contains(&s))
    }

    fn commit(&mut self, e: VertexSet) {
        for s in e.subsets(self.t as usize) {
            self.covered.insert(s);
        }
        self.edges.insert(e);
    }

    fn into_design(self) -> Design {
        Design::with_edges(self.n, self.k, self.edges).expect("state edges are valid")
    }
}

/// One full greedy pass over all candidate edges; leaves `state` maximal.
fn greedy_pass(state: &mut PackState, seed: u64, order: PassOrder) -> Result<()> {
    let total = binomial(state.n as u64, state.k as u64)?;
    let perm = RankPermutation::new(total, seed);
    for i in 0..total {
        let rank = match order {
            PassOrder::RandomPermutation => perm.apply(i),
            PassOrder::RankOrder => i,
        };
        let e = unrank_subset(rank, state.n, state.k)?;
        if state.edge_fits(&e) {
            state.commit(e);
        }
    }
    Ok(())
}

/// Random-greedy packing: a t-(n,k,{0,1})-design, deterministic in the seed.
pub fn greedy_pack(n: u32, k: u32, t: u32, cfg: &PackingConfig) -> Result<Design> {
    check_params(n, k, t)?;
    cfg.validate()?;
    let mut state = PackState::new(n, k, t);
    greedy_pass(&mut state, splitmix64(cfg.seed), cfg.greedy_pass_order)?;
    Ok(state.into_design())
}

/// One nibble round: tentatively draws a Binomial-sized batch of uniform
/// k-sets, drops every edge that collides with committed coverage or with
/// another batch edge on some t-set, and commits the survivors.
fn nibble_round(state: &mut PackState, rng: &mut ChaCha12Rng, bite_fraction: f64) -> Result<()> {
    let total_t = binomial(state.n as u64, state.t as u64)?;
    let uncovered = total_t - state.covered.len() as u64;
    let per_edge = binomial(state.k as u64, state.t as u64)?;
    let ideal = uncovered.div_ceil(per_edge);
    if ideal == 0 {
        return Ok(());
    }
    let dist = Binomial::new(ideal, bite_fraction)
        .map_err(|e| Error::Parameter(format!("bad bite fraction: {e}")))?;
    let batch_size = dist.sample(rng);

    let total_k = binomial(state.n as u64, state.k as u64)?;
    let mut batch: Vec<VertexSet> = Vec::with_capacity(batch_size as usize);
    for _ in 0..batch_size {
        let rank = rng.gen_range(0..total_k);
        batch.push(unrank_subset(rank, state.n, state.k)?);
    }

    let mut hits: HashMap<VertexSet, u32> = HashMap::new();
    for e in &batch {
        for s in e.subsets(state.t as usize) {
            *hits.entry(s).or_insert(0) += 1;
        }
    }
    for e in batch {
        let survives = state.edge_fits(&e)
            && e.subsets(state.t as usize).all(|s| hits[&s] == 1);
        if survives {
            state.commit(e);
        }
    }
    Ok(())
}

/// Iterated random-bite packing with a final greedy cleanup pass.
pub fn nibble_pack(n: u32, k: u32, t: u32, cfg: &PackingConfig) -> Result<Design> {
    check_params(n, k, t)?;
    cfg.validate()?;
    let mut state = PackState::new(n, k, t);
    let mut rng = ChaCha12Rng::seed_from_u64(splitmix64(cfg.seed ^ 0x6e69_6262_6c65));
    for _ in 0..cfg.nibble_rounds {
        nibble_round(&mut state, &mut rng, cfg.nibble_bite_fraction)?;
    }
    greedy_pass(&mut state, splitmix64(cfg.seed), cfg.greedy_pass_order)?;
    Ok(state.into_design())
}

/// Per-level maximum degrees of the leave hypergraph.
#[derive(Clone, Debug)]
pub struct LevelDegree {
    pub ell: u32,
    /// Max number of leave edges containing any fixed ell-set.
    pub max_degree: u64,
    /// `log(max_degree) / log(n)`, 0 when `max_degree <= 1`.
    pub exponent_estimate: f64,
}

#[derive(Clone, Debug)]
pub struct LeaveProfile {
    pub per_level: Vec<LevelDegree>,
    pub leave_fraction: f64,
}

impl LeaveProfile {
    /// Line-oriented key-value report.
    pub fn format_report(&self) -> String {
        let mut out = String::new();
        for level in &self.per_level {
            out.push_str(&format!(
                "ell={} max_degree={} exponent={:.6}\n",
                level.ell, level.max_degree, level.exponent_estimate
            ));
        }
        out.push_str(&format!("leave_fraction={:.6}\n", self.leave_fraction));
        out
    }
}

/// Exact per-level max degrees and leave fraction of a leave hypergraph.
pub fn leave_profile(lv: &LeaveHypergraph) -> Result<LeaveProfile> {
    let n = lv.n();
    let t = lv.t();
    let ln_n = (n as f64).ln();
    let mut per_level = Vec::with_capacity(t as usize);
    for ell in 0..t {
        let max_degree = if ell == 0 {
            lv.len() as u64
        } else {
            let mut counts: HashMap<VertexSet, u64> = HashMap::new();
            for edge in lv.edges() {
                for sub in edge.subsets(ell as usize) {
                    *counts.entry(sub).or_insert(0) += 1;
                }
            }
            counts.values().copied().max().unwrap_or(0)
        };
        let exponent_estimate = if max_degree <= 1 || ln_n <= 0.0 {
            0.0
        } else {
            (max_degree as f64).ln() / ln_n
        };
        per_level.push(LevelDegree { ell, max_degree, exponent_estimate });
    }
    let total_t = binomial(n as u64, t as u64)?;
    let leave_fraction = if total_t == 0 { 0.0 } else { lv.len() as f64 / total_t as f64 };
    Ok(LeaveProfile { per_level, leave_fraction })
}

/// Largest epsilon consistent with the per-level degree profile at this n:
/// the min over levels of `t - ell - exponent_estimate(ell)`, floored at 0.
pub fn epsilon_estimate(profile: &LeaveProfile, t: u32) -> f64 {
    profile
        .per_level
        .iter()
        .map(|l| t as f64 - l.ell as f64 - l.exponent_estimate)
        .fold(f64::INFINITY, f64::min)
        .max(0.0)
}
