//! Independent checking: multiplicity verification against a set of allowed
//! counts, exact backtracking search for tiny designs, and edge-count
//! statistics.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::combinatorics::{binomial, subsets_of, unrank_subset};
use crate::error::{Error, Result};
use crate::hypergraph::{coverage_map, Design, LeaveHypergraph, VertexSet};

/// The nonempty set of allowed per-t-set edge counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaSet {
    values: BTreeSet<u64>,
}

impl LambdaSet {
    pub fn new(values: impl IntoIterator<Item = u64>) -> Result<Self> {
        let values: BTreeSet<u64> = values.into_iter().collect();
        if values.is_empty() {
            return Err(Error::Parameter("lambda set must be nonempty".into()));
        }
        Ok(LambdaSet { values })
    }

    pub fn contains(&self, c: u64) -> bool {
        self.values.contains(&c)
    }

    pub fn min(&self) -> u64 {
        *self.values.iter().next().expect("nonempty")
    }

    pub fn max(&self) -> u64 {
        *self.values.iter().next_back().expect("nonempty")
    }
}

/// Outcome of a multiplicity check; failures carry the colex-first
/// offending t-set and its count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyOutcome {
    Pass,
    Fail { witness: VertexSet, count: u64 },
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, VerifyOutcome::Pass)
    }
}

/// True iff every t-set's coverage count belongs to `lam`.
pub fn verify_multiplicity(d: &Design, t: u32, lam: &LambdaSet) -> Result<VerifyOutcome> {
    if t >= d.k() {
        return Err(Error::Parameter(format!("need t < k, got t={t} k={}", d.k())));
    }
    let cov = coverage_map(d, t)?;
    let ground: Vec<u32> = (0..d.n()).collect();
    for s in subsets_of(&ground, t as usize) {
        let s = VertexSet::new(s, d.n())?;
        let c = cov.count(&s);
        if !lam.contains(c) {
            return Ok(VerifyOutcome::Fail { witness: s, count: c });
        }
    }
    Ok(VerifyOutcome::Pass)
}

/// Result of the exact design search: found, proven nonexistent within the
/// explored (complete) space, or out of node budget.
#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found(Design),
    ProvenNonexistent,
    BudgetExhausted,
}

/// Deterministic backtracking search for a t-(n,k,lam)-design.
///
/// Branches on the colex-first t-set whose count is below the smallest
/// allowed value, trying every k-edge through it (in colex order) that does
/// not push any t-set past the largest allowed value. Intended for tiny
/// instances (n <= 9 for exact Steiner search; nonexistence proofs are
/// budget-bounded).
pub fn brute_force_design_search(
    n: u32,
    k: u32,
    t: u32,
    lam: &LambdaSet,
    max_nodes: u64,
) -> Result<SearchOutcome> {
    if !(n > k && k > t && t >= 2) {
        return Err(Error::Parameter(format!("need n > k > t >= 2, got n={n} k={k} t={t}")));
    }
    let total_edges = binomial(n as u64, k as u64)?;
    let edges: Vec<VertexSet> = (0..total_edges)
        .map(|r| unrank_subset(r, n, k))
        .collect::<Result<_>>()?;
    let ground: Vec<u32> = (0..n).collect();
    let t_sets: Vec<VertexSet> = subsets_of(&ground, t as usize)
        .map(VertexSet::from_sorted)
        .collect();
    let t_index: HashMap<&VertexSet, usize> =
        t_sets.iter().enumerate().map(|(i, s)| (s, i)).collect();

    // For each t-set, the colex-ordered edges containing it.
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); t_sets.len()];
    // For each edge, its t-set indices.
    let mut edge_subsets: Vec<Vec<usize>> = Vec::with_capacity(edges.len());
    for (ei, e) in edges.iter().enumerate() {
        let subs: Vec<usize> = e.subsets(t as usize).map(|s| t_index[&s]).collect();
        for &si in &subs {
            through[si].push(ei);
        }
        edge_subsets.push(subs);
    }

    struct Ctx<'a> {
        lam: &'a LambdaSet,
        edge_subsets: &'a [Vec<usize>],
        through: &'a [Vec<usize>],
        counts: Vec<u64>,
        chosen: Vec<usize>,
        nodes: u64,
        max_nodes: u64,
    }

    enum Found {
        Yes,
        No,
        Budget,
    }

    fn rec(ctx: &mut Ctx) -> Found {
        ctx.nodes += 1;
        if ctx.nodes > ctx.max_nodes {
            return Found::Budget;
        }
        // Colex-first t-set still below the minimum allowed count.
        let deficient = ctx.counts.iter().position(|&c| c < ctx.lam.min());
        let Some(si) = deficient else {
            // Nothing is deficient; accept iff every count is allowed.
            let ok = ctx.counts.iter().all(|&c| ctx.lam.contains(c));
            return if ok { Found::Yes } else { Found::No };
        };
        let max = ctx.lam.max();
        let candidates: Vec<usize> = ctx.through[si].to_vec();
        for ei in candidates {
            if ctx.edge_subsets[ei].iter().any(|&s| ctx.counts[s] + 1 > max) {
                continue;
            }
            for &s in &ctx.edge_subsets[ei] {
                ctx.counts[s] += 1;
            }
            ctx.chosen.push(ei);
            match rec(ctx) {
                Found::Yes => return Found::Yes,
                Found::Budget => return Found::Budget,
                Found::No => {}
            }
            ctx.chosen.pop();
            for &s in &ctx.edge_subsets[ei] {
                ctx.counts[s] -= 1;
            }
        }
        Found::No
    }

    let mut ctx = Ctx {
        lam,
        edge_subsets: &edge_subsets,
        through: &through,
        counts: vec![0; t_sets.len()],
        chosen: Vec::new(),
        nodes: 0,
        max_nodes,
    };
    match rec(&mut ctx) {
        Found::Yes => {
            let d = Design::with_edges(n, k, ctx.chosen.iter().map(|&ei| edges[ei].clone()))?;
            Ok(SearchOutcome::Found(d))
        }
        Found::No => Ok(SearchOutcome::ProvenNonexistent),
        Found::Budget => Ok(SearchOutcome::BudgetExhausted),
    }
}

/// Reduced exact rational, used for the ideal Steiner edge count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rational {
    pub numerator: u64,
    pub denominator: u64,
}

impl Rational {
    fn new(num: u64, den: u64) -> Self {
        let g = gcd(num.max(1), den);
        Rational { numerator: num / g.max(1), denominator: den / g.max(1) }
    }

    pub fn to_f64(self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Debug)]
pub struct DesignStats {
    pub edge_count: u64,
    /// Exact `C(n,t) / C(k,t)`.
    pub ideal_count: Rational,
    pub overhead_ratio: f64,
    pub multiplicity_histogram: BTreeMap<u64, u64>,
}

impl DesignStats {
    pub fn format_report(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("edge_count={}\n", self.edge_count));
        out.push_str(&format!(
            "ideal_count={}/{}\n",
            self.ideal_count.numerator, self.ideal_count.denominator
        ));
        out.push_str(&format!("overhead_ratio={:.6}\n", self.overhead_ratio));
        for (mult, freq) in &self.multiplicity_histogram {
            out.push_str(&format!("multiplicity_{mult}={freq}\n"));
        }
        out
    }
}

/// Edge-count statistics and the exact multiplicity histogram.
pub fn design_stats(d: &Design, t: u32) -> Result<DesignStats> {
    let cov = coverage_map(d, t)?;
    let total_t = binomial(d.n() as u64, t as u64)?;
    let per_edge = binomial(d.k() as u64, t as u64)?;

    let mut histogram: BTreeMap<u64, u64> = BTreeMap::new();
    let mut nonzero = 0u64;
    for (_, c) in cov.covered() {
        *histogram.entry(c).or_insert(0) += 1;
        nonzero += 1;
    }
    let zeros = total_t - nonzero;
    if zeros > 0 {
        histogram.insert(0, zeros);
    }

    let ideal = Rational::new(total_t, per_edge);
    let edge_count = d.edge_count() as u64;
    let overhead_ratio = if ideal.numerator == 0 {
        0.0
    } else {
        edge_count as f64 / ideal.to_f64()
    };
    Ok(DesignStats { edge_count, ideal_count: ideal, overhead_ratio, multiplicity_histogram: histogram })
}

/// Union bound on `|T_A \ S_A|`: over leave edges `B != A`, the number of
/// continuations of `A u B` to a k-set, `C(n - |A u B|, k - |A u B|)`.
pub fn claim1_gap_bound(
    a: &VertexSet,
    leave: &LeaveHypergraph,
    n: u32,
    k: u32,
    _t: u32,
) -> Result<u64> {
    if !leave.contains(a) {
        return Err(Error::Contract(format!("{a:?} is not a leave edge")));
    }
    let mut bound: u64 = 0;
    for b in leave.edges() {
        if b == a {
            continue;
        }
        let u = a.union(b).len() as u64;
        if u > k as u64 {
            continue;
        }
        let term = binomial(n as u64 - u, k as u64 - u)?;
        bound = bound
            .checked_add(term)
            .ok_or(Error::Overflow { a: n as u64 - u, b: k as u64 - u })?;
    }
    Ok(bound)
}
