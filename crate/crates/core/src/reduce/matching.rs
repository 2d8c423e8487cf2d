//! Good query sets and disjoint matchings.
//!
//! A set r is good for index i when the decoder, conditioned on querying r,
//! predicts x_i with probability at least 1/2 + ε/2 under μ. A maximal
//! disjoint family of good sets has size at least εm/(qc) for any verified
//! (q,c,ε)-smooth code; the builder treats a shortfall as proof that the
//! input was not smooth and errors out.

use crate::codes::eval::observable_expectation;
use crate::codes::{InputDistribution, QuantumCode, QuantumDecoder, QuerySet};
use crate::error::{Error, Result};
use crate::tol::Tolerances;
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct GoodEdgeSet {
    pub i: usize,
    /// Good sets in canonical order (size, then positions lexicographically).
    pub edges: Vec<QuerySet>,
    pub conditional_success: BTreeMap<QuerySet, f64>,
}

/// Canonical edge order: size ascending, then positions lexicographically
/// (which puts the minimum element first).
pub fn canonical_edge_order(edges: &mut [QuerySet]) {
    edges.sort_by_key(|e| (e.size(), e.positions()));
}

/// The positively-probable query sets whose conditional success for index i
/// meets the 1/2 + ε/2 threshold, with exact conditional probabilities.
pub fn good_query_sets(
    code: &QuantumCode,
    dec: &QuantumDecoder,
    i: usize,
    mu: &InputDistribution,
    eps: f64,
    tol: &Tolerances,
) -> Result<GoodEdgeSet> {
    if i >= code.n() {
        return Err(Error::IndexOutOfRange {
            index: i,
            size: code.n(),
        });
    }
    let mut conditional_success = BTreeMap::new();
    let mut edges = Vec::new();
    for (p, set) in dec.plan().entries(i) {
        if *p <= 0.0 {
            continue;
        }
        let meas = dec
            .measurement(i, set)
            .ok_or_else(|| Error::Invalid(format!("missing measurement for set {set}")))?;
        let obs = meas.observable();
        let positions = set.positions();
        let mut success = 0.0;
        for (x, weight) in mu.support() {
            let expect = observable_expectation(code.encode(&x), &positions, &obs)?;
            success += weight * (1.0 + f64::from(x.sign(i)) * expect) / 2.0;
        }
        conditional_success.insert(*set, success);
        if success >= 0.5 + eps / 2.0 - tol.trace {
            edges.push(*set);
        }
    }
    canonical_edge_order(&mut edges);
    Ok(GoodEdgeSet {
        i,
        edges,
        conditional_success,
    })
}

/// Classical counterpart of `good_query_sets`: conditional success computed
/// from output tables on (randomized) codewords.
pub fn good_query_sets_classical(
    code: crate::codes::ClassicalCodeRef<'_>,
    dec: &crate::codes::ClassicalDecoder,
    i: usize,
    mu: &InputDistribution,
    eps: f64,
    tol: &Tolerances,
) -> Result<GoodEdgeSet> {
    if i >= code.n() {
        return Err(Error::IndexOutOfRange {
            index: i,
            size: code.n(),
        });
    }
    let mut conditional_success = BTreeMap::new();
    let mut edges = Vec::new();
    for (p, set) in dec.plan().entries(i) {
        if *p <= 0.0 {
            continue;
        }
        let table = dec
            .output(i, set)
            .ok_or_else(|| Error::Invalid(format!("missing output table for set {set}")))?;
        let positions = set.positions();
        let mut success = 0.0;
        for (x, weight) in mu.support() {
            let rows: Vec<(f64, crate::codes::Word)> = match code {
                crate::codes::ClassicalCodeRef::Plain(c) => vec![(1.0, c.encode(&x))],
                crate::codes::ClassicalCodeRef::Randomized(c) => c.row(&x).to_vec(),
            };
            for (p_row, word) in rows {
                let out = table.eval(&word.restrict(&positions));
                success += weight * p_row * (1.0 + f64::from(x.sign(i)) * f64::from(out)) / 2.0;
            }
        }
        conditional_success.insert(*set, success);
        if success >= 0.5 + eps / 2.0 - tol.trace {
            edges.push(*set);
        }
    }
    canonical_edge_order(&mut edges);
    Ok(GoodEdgeSet {
        i,
        edges,
        conditional_success,
    })
}

/// A disjoint family of good sets for one index.
#[derive(Debug, Clone)]
pub struct Matching {
    pub i: usize,
    pub sets: Vec<QuerySet>,
}

impl Matching {
    pub fn pairwise_disjoint(&self) -> bool {
        for (a, sa) in self.sets.iter().enumerate() {
            for sb in &self.sets[a + 1..] {
                if !sa.is_disjoint(sb) {
                    return false;
                }
            }
        }
        true
    }

    pub fn union(&self) -> QuerySet {
        self.sets
            .iter()
            .fold(QuerySet::empty(), |acc, s| acc.union(s))
    }
}

/// Greedy maximal matching over the good edges, in canonical order. The
/// counting bound |M_i| ≥ εm/(qc) is enforced, not assumed.
pub fn build_matching(
    edges: &GoodEdgeSet,
    m: usize,
    q: usize,
    c: f64,
    eps: f64,
) -> Result<Matching> {
    let mut sets: Vec<QuerySet> = Vec::new();
    let mut used = QuerySet::empty();
    for e in &edges.edges {
        if e.is_disjoint(&used) {
            used = used.union(e);
            sets.push(*e);
        }
    }
    // Maximality: nothing skipped can still fit.
    debug_assert!(edges
        .edges
        .iter()
        .all(|e| !e.is_disjoint(&used) || sets.contains(e)));
    let bound = eps * m as f64 / (q as f64 * c);
    if (sets.len() as f64) + 1e-12 < bound {
        return Err(Error::MatchingGuaranteeViolated {
            i: edges.i,
            got: sets.len(),
            bound,
            q,
            c,
            eps,
        });
    }
    Ok(Matching { i: edges.i, sets })
}

/// Matchings for every index, plus the signs attached once a measurement
/// sequence is chosen, and optional completions to exact m/q covers.
#[derive(Debug, Clone)]
pub struct MatchingFamily {
    pub m: usize,
    pub q: usize,
    pub matchings: Vec<Matching>,
    pub signs: BTreeMap<(usize, QuerySet), i8>,
}

impl MatchingFamily {
    pub fn new(m: usize, q: usize, matchings: Vec<Matching>) -> Result<Self> {
        for (i, matching) in matchings.iter().enumerate() {
            if matching.i != i {
                return Err(Error::Invalid(
                    "matchings must be listed in index order".into(),
                ));
            }
            if matching.sets.is_empty() {
                return Err(Error::EmptyMatching(i));
            }
            if !matching.pairwise_disjoint() {
                return Err(Error::Invalid(format!(
                    "matching for index {} is not pairwise disjoint",
                    i + 1
                )));
            }
        }
        Ok(MatchingFamily {
            m,
            q,
            matchings,
            signs: BTreeMap::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.matchings.len()
    }

    pub fn sets(&self, i: usize) -> &[QuerySet] {
        &self.matchings[i].sets
    }

    pub fn min_size(&self) -> usize {
        self.matchings
            .iter()
            .map(|m| m.sets.len())
            .min()
            .unwrap_or(0)
    }

    pub fn sign(&self, i: usize, set: &QuerySet) -> Option<i8> {
        self.signs.get(&(i, *set)).copied()
    }

    pub fn set_signs(&mut self, signs: BTreeMap<(usize, QuerySet), i8>) {
        self.signs = signs;
    }
}
