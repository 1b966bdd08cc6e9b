//! Ground-set subsets, designs, coverage counting, and leave hypergraphs.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::combinatorics::subsets_of;
use crate::error::{Error, Result};

/// A strictly ascending set of vertex ids.
///
/// Ordering is colexicographic (largest elements compared first), so sorted
/// containers of equal-size sets iterate in colex rank order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet(Vec<u32>);

impl VertexSet {
    /// Builds a vertex set, validating strict ascent and `id < n`.
    pub fn new(vertices: Vec<u32>, n: u32) -> Result<Self> {
        if !vertices.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Parameter(format!(
                "vertex list {vertices:?} is not strictly ascending"
            )));
        }
        if let Some(&last) = vertices.last() {
            if last >= n {
                return Err(Error::Parameter(format!(
                    "vertex id {last} outside ground set of size {n}"
                )));
            }
        }
        Ok(VertexSet(vertices))
    }

    /// Wraps a list already known to be strictly ascending.
    pub(crate) fn from_sorted(vertices: Vec<u32>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        VertexSet(vertices)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, u32> {
        self.0.iter()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    /// Size of the intersection with `other`; both sides are sorted.
    pub fn intersection_size(&self, other: &VertexSet) -> usize {
        let (mut i, mut j, mut c) = (0, 0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    c += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        c
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut v: Vec<u32> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    /// All size-`r` subsets, in colex order.
    pub fn subsets(&self, r: usize) -> impl Iterator<Item = VertexSet> + '_ {
        subsets_of(&self.0, r).map(VertexSet)
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// A k-uniform hypergraph on ground set `{0..n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Design {
    n: u32,
    k: u32,
    edges: BTreeSet<VertexSet>,
}

impl Design {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if n <= k {
            return Err(Error::Parameter(format!("need n > k, got n={n} k={k}")));
        }
        Ok(Design { n, k, edges: BTreeSet::new() })
    }

    pub fn with_edges(n: u32, k: u32, edges: impl IntoIterator<Item = VertexSet>) -> Result<Self> {
        let mut d = Design::new(n, k)?;
        for e in edges {
            d.insert(e)?;
        }
        Ok(d)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in colex order.
    pub fn edges(&self) -> impl Iterator<Item = &VertexSet> {
        self.edges.iter()
    }

    pub fn contains_edge(&self, e: &VertexSet) -> bool {
        self.edges.contains(e)
    }

    /// Inserts an edge; rejects wrong sizes, out-of-range ids, duplicates.
    pub fn insert(&mut self, e: VertexSet) -> Result<()> {
        if e.len() != self.k as usize {
            return Err(Error::Parameter(format!(
                "edge {e:?} has {} vertices, expected {}",
                e.len(),
                self.k
            )));
        }
        if let Some(&last) = e.as_slice().last() {
            if last >= self.n {
                return Err(Error::Parameter(format!(
                    "edge {e:?} outside ground set of size {}",
                    self.n
                )));
            }
        }
        if !self.edges.insert(e.clone()) {
            return Err(Error::Parameter(format!("duplicate edge {e:?}")));
        }
        Ok(())
    }
}

/// Multiplicity function from t-sets to coverage counts.
///
/// Absent keys read as zero, so the domain is implicitly all `C(n,t)`
/// t-subsets of the ground set.
#[derive(Clone, Debug)]
pub struct CoverageMap {
    n: u32,
    t: u32,
    counts: HashMap<VertexSet, u64>,
}

impl CoverageMap {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn count(&self, a: &VertexSet) -> u64 {
        self.counts.get(a).copied().unwrap_or(0)
    }

    /// Sum of all counts; equals `|edges| * C(k,t)` for the source design.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// The t-sets with nonzero count (iteration order unspecified).
    pub fn covered(&self) -> impl Iterator<Item = (&VertexSet, u64)> {
        self.counts.iter().map(|(s, &c)| (s, c))
    }
}

/// Counts, for every t-subset, the design edges containing it.
pub fn coverage_map(d: &Design, t: u32) -> Result<CoverageMap> {
    if t >= d.k {
        return Err(Error::Parameter(format!(
            "need t < k, got t={t} k={}",
            d.k
        )));
    }
    let mut counts: HashMap<VertexSet, u64> = HashMap::new();
    for e in d.edges() {
        for s in e.subsets(t as usize) {
            *counts.entry(s).or_insert(0) += 1;
        }
    }
    Ok(CoverageMap { n: d.n, t, counts })
}

/// The t-uniform hypergraph of t-sets uncovered by a partial design.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeaveHypergraph {
    n: u32,
    t: u32,
    edges: BTreeSet<VertexSet>,
}

impl LeaveHypergraph {
    pub fn new(n: u32, t: u32, edges: impl IntoIterator<Item = VertexSet>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for e in edges {
            if e.len() != t as usize {
                return Err(Error::Parameter(format!(
                    "leave edge {e:?} has {} vertices, expected {t}",
                    e.len()
                )));
            }
            if let Some(&last) = e.as_slice().last() {
                if last >= n {
                    return Err(Error::Parameter(format!(
                        "leave edge {e:?} outside ground set of size {n}"
                    )));
                }
            }
            set.insert(e);
        }
        Ok(LeaveHypergraph { n, t, edges: set })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, a: &VertexSet) -> bool {
        self.edges.contains(a)
    }

    /// Leave edges in colex order.
    pub fn edges(&self) -> impl Iterator<Item = &VertexSet> {
        self.edges.iter()
    }
}

/// The zero-count t-sets of `coverage_map(d, t)`.
///
/// With `check_partial` set, first confirms no t-set is covered more than
/// once and reports a contract error otherwise.
pub fn leave_hypergraph(d: &Design, t: u32, check_partial: bool) -> Result<LeaveHypergraph> {
    let cov = coverage_map(d, t)?;
    if check_partial {
        for (s, c) in cov.covered() {
            if c > 1 {
                return Err(Error::Contract(format!(
                    "input is not a {{0,1}}-design: t-set {s:?} covered {c} times"
                )));
            }
        }
    }
    let ground: Vec<u32> = (0..d.n).collect();
    let mut edges = BTreeSet::new();
    for s in subsets_of(&ground, t as usize) {
        let s = VertexSet::from_sorted(s);
        if cov.count(&s) == 0 {
            edges.insert(s);
        }
    }
    Ok(LeaveHypergraph { n: d.n, t, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{binomial, unrank_subset};

    fn vs(v: &[u32]) -> VertexSet {
        VertexSet::from_sorted(v.to_vec())
    }

    fn complete_design(n: u32, k: u32) -> Design {
        let ground: Vec<u32> = (0..n).collect();
        Design::with_edges(n, k, subsets_of(&ground, k as usize).map(VertexSet::from_sorted))
            .unwrap()
    }

    #[test]
    fn vertex_set_validation() {
        assert!(VertexSet::new(vec![0, 2, 2], 5).is_err());
        assert!(VertexSet::new(vec![2, 1], 5).is_err());
        assert!(VertexSet::new(vec![0, 5], 5).is_err());
        assert!(VertexSet::new(vec![0, 4], 5).is_ok());
    }

    #[test]
    fn colex_order_matches_rank_order() {
        let mut sets: Vec<VertexSet> = (0..crate::combinatorics::binomial(6, 3).unwrap())
            .map(|r| unrank_subset(r, 6, 3).unwrap())
            .collect();
        let mut sorted = sets.clone();
        sorted.sort();
        assert_eq!(sets, sorted);
        sets.reverse();
        sets.sort();
        assert_eq!(sets, sorted);
    }

    #[test]
    fn coverage_of_empty_design() {
        let d = Design::new(7, 3).unwrap();
        let cov = coverage_map(&d, 2).unwrap();
        assert_eq!(cov.total(), 0);
        assert_eq!(cov.count(&vs(&[0, 1])), 0);
    }

    #[test]
    fn coverage_of_complete_design() {
        let d = complete_design(7, 3);
        let cov = coverage_map(&d, 2).unwrap();
        // Every pair lies in C(n-t, k-t) = C(5,1) = 5 edges.
        for a in 0..7u32 {
            for b in (a + 1)..7 {
                assert_eq!(cov.count(&vs(&[a, b])), 5);
            }
        }
    }

    #[test]
    fn coverage_rejects_t_ge_k() {
        let d = Design::new(7, 3).unwrap();
        assert!(coverage_map(&d, 3).is_err());
    }

    #[test]
    fn coverage_sum_identity() {
        let d = complete_design(8, 4);
        let cov = coverage_map(&d, 2).unwrap();
        assert_eq!(cov.total(), d.edge_count() as u64 * binomial(4, 2).unwrap());
    }

    #[test]
    fn leave_of_empty_design_is_everything() {
        let d = Design::new(6, 3).unwrap();
        let lv = leave_hypergraph(&d, 2, true).unwrap();
        assert_eq!(lv.len() as u64, binomial(6, 2).unwrap());
    }

    #[test]
    fn leave_of_single_edge() {
        let mut d = Design::new(8, 4).unwrap();
        d.insert(vs(&[0, 1, 2, 3])).unwrap();
        let lv = leave_hypergraph(&d, 2, true).unwrap();
        assert_eq!(lv.len() as u64, binomial(8, 2).unwrap() - binomial(4, 2).unwrap());
        assert!(!lv.contains(&vs(&[1, 3])));
        assert!(lv.contains(&vs(&[3, 4])));
    }

    #[test]
    fn leave_check_rejects_doubly_covered() {
        let mut d = Design::new(8, 4).unwrap();
        d.insert(vs(&[0, 1, 2, 3])).unwrap();
        d.insert(vs(&[0, 1, 4, 5])).unwrap();
        assert!(leave_hypergraph(&d, 2, true).is_err());
        assert!(leave_hypergraph(&d, 2, false).is_ok());
    }

    #[test]
    fn leave_and_covered_partition_all_t_sets() {
        let mut d = Design::new(9, 3).unwrap();
        d.insert(vs(&[0, 1, 2])).unwrap();
        d.insert(vs(&[3, 4, 5])).unwrap();
        d.insert(vs(&[0, 3, 6])).unwrap();
        let cov = coverage_map(&d, 2).unwrap();
        let lv = leave_hypergraph(&d, 2, true).unwrap();
        let covered = cov.covered().count();
        assert_eq!(covered as u64 + lv.len() as u64, binomial(9, 2).unwrap());
    }
}
