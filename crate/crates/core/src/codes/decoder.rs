//! Query plans and decoders.
//!
//! A decoder is a query plan (per-index distribution over query sets, chosen
//! before any querying) plus, per (index, set), either a classical output
//! table or a two-outcome quantum measurement on the selected qubits.

use super::bits::Word;
use crate::error::{Error, Result};
use crate::quantum::TwoOutcomeMeasurement;
use crate::tol::Tolerances;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Subset of codeword positions, as a bitmask with position j at bit j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QuerySet(u64);

impl QuerySet {
    pub fn from_positions(positions: &[usize]) -> Self {
        let mut mask = 0u64;
        for &p in positions {
            mask |= 1 << p;
        }
        QuerySet(mask)
    }

    pub fn empty() -> Self {
        QuerySet(0)
    }

    pub fn mask(&self) -> u64 {
        self.0
    }

    pub fn size(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, position: usize) -> bool {
        (self.0 >> position) & 1 == 1
    }

    pub fn is_disjoint(&self, other: &QuerySet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(&self, other: &QuerySet) -> QuerySet {
        QuerySet(self.0 | other.0)
    }

    pub fn difference(&self, other: &QuerySet) -> QuerySet {
        QuerySet(self.0 & !other.0)
    }

    pub fn intersection(&self, other: &QuerySet) -> QuerySet {
        QuerySet(self.0 & other.0)
    }

    pub fn min_position(&self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Positions in ascending order.
    pub fn positions(&self) -> Vec<usize> {
        (0..64).filter(|&p| self.contains(p)).collect()
    }

    /// All subsets of [m] with 1 ≤ size ≤ max_size, ordered by
    /// (size, then mask value).
    pub fn all_up_to(m: usize, max_size: usize) -> Vec<QuerySet> {
        let mut out: Vec<QuerySet> = (1u64..(1u64 << m))
            .map(QuerySet)
            .filter(|s| s.size() <= max_size)
            .collect();
        out.sort_by_key(|s| (s.size(), s.0));
        out
    }
}

impl fmt::Display for QuerySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, p) in self.positions().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", p + 1)?; // 1-based for humans
        }
        write!(f, "}}")
    }
}

/// Per-index distribution over query sets; non-adaptive by construction.
#[derive(Debug, Clone)]
pub struct QueryPlan {
    n: usize,
    m: usize,
    q: usize,
    entries: Vec<Vec<(f64, QuerySet)>>,
}

impl QueryPlan {
    pub fn new(
        n: usize,
        m: usize,
        q: usize,
        entries: Vec<Vec<(f64, QuerySet)>>,
        tol: &Tolerances,
    ) -> Result<Self> {
        if entries.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: entries.len(),
            });
        }
        let mut merged_entries = Vec::with_capacity(n);
        for row in entries {
            let mut merged: BTreeMap<QuerySet, f64> = BTreeMap::new();
            let mut sum = 0.0;
            for (p, set) in row {
                if p < 0.0 || !p.is_finite() {
                    return Err(Error::Invalid(format!("invalid plan probability {p}")));
                }
                if set.size() > q {
                    return Err(Error::QueryBudgetExceeded { got: set.size(), q });
                }
                if let Some(&top) = set.positions().last() {
                    if top >= m {
                        return Err(Error::IndexOutOfRange {
                            index: top,
                            size: m,
                        });
                    }
                }
                if p == 0.0 {
                    continue;
                }
                *merged.entry(set).or_insert(0.0) += p;
                sum += p;
            }
            if (sum - 1.0).abs() > tol.trace {
                return Err(Error::NotNormalized { sum });
            }
            merged_entries.push(merged.into_iter().map(|(s, p)| (p, s)).collect());
        }
        Ok(QueryPlan {
            n,
            m,
            q,
            entries: merged_entries,
        })
    }

    /// Point mass on one set per index.
    pub fn point(n: usize, m: usize, sets: Vec<QuerySet>, tol: &Tolerances) -> Result<Self> {
        let q = sets.iter().map(|s| s.size()).max().unwrap_or(1).max(1);
        let entries = sets.into_iter().map(|s| vec![(1.0, s)]).collect();
        Self::new(n, m, q, entries, tol)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn entries(&self, i: usize) -> &[(f64, QuerySet)] {
        &self.entries[i]
    }

    pub fn max_set_size(&self) -> usize {
        self.entries
            .iter()
            .flatten()
            .map(|(_, s)| s.size())
            .max()
            .unwrap_or(0)
    }

    /// Pr[index j is queried when decoding i], for every j.
    pub fn marginal(&self, i: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.m];
        for (p, set) in &self.entries[i] {
            for j in set.positions() {
                out[j] += p;
            }
        }
        out
    }
}

/// Classical output rule for one (index, query set): a truth table over the
/// queried bits in ascending position order. Entries are the expected output
/// in {-1, 0, +1}; 0 means a fair coin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputTable {
    arity: usize,
    values: Vec<i8>,
}

impl OutputTable {
    pub fn new(arity: usize, values: Vec<i8>) -> Result<Self> {
        if values.len() != 1 << arity {
            return Err(Error::DimensionMismatch {
                expected: 1 << arity,
                actual: values.len(),
            });
        }
        if values.iter().any(|v| !(-1..=1).contains(v)) {
            return Err(Error::Invalid(
                "output table entries must be -1, 0, or +1".into(),
            ));
        }
        Ok(OutputTable { arity, values })
    }

    pub fn constant(arity: usize, value: i8) -> Self {
        OutputTable {
            arity,
            values: vec![value; 1 << arity],
        }
    }

    pub fn coin(arity: usize) -> Self {
        Self::constant(arity, 0)
    }

    /// sign · ∏ of the queried bits at `active` (indices into the queried
    /// tuple), ignoring the rest.
    pub fn signed_parity(arity: usize, active: &[usize], sign: i8) -> Self {
        let values = (0..(1usize << arity))
            .map(|idx| {
                let w = Word::from_index(idx as u64, arity);
                sign * w.sign_product_over(active.iter().copied())
            })
            .collect();
        OutputTable { arity, values }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    /// Expected output on the queried subword.
    pub fn eval(&self, queried: &Word) -> i8 {
        debug_assert_eq!(queried.len(), self.arity);
        self.values[queried.index()]
    }
}

#[derive(Debug, Clone)]
pub struct ClassicalDecoder {
    plan: QueryPlan,
    outputs: BTreeMap<(usize, QuerySet), OutputTable>,
}

impl ClassicalDecoder {
    pub fn new(plan: QueryPlan, outputs: BTreeMap<(usize, QuerySet), OutputTable>) -> Result<Self> {
        for i in 0..plan.n() {
            for (p, set) in plan.entries(i) {
                if *p <= 0.0 {
                    continue;
                }
                match outputs.get(&(i, *set)) {
                    None => {
                        return Err(Error::Invalid(format!(
                            "no output function for index {} and set {set}",
                            i + 1
                        )))
                    }
                    Some(t) if t.arity() != set.size() => {
                        return Err(Error::DimensionMismatch {
                            expected: set.size(),
                            actual: t.arity(),
                        })
                    }
                    _ => {}
                }
            }
        }
        Ok(ClassicalDecoder { plan, outputs })
    }

    pub fn plan(&self) -> &QueryPlan {
        &self.plan
    }

    pub fn output(&self, i: usize, set: &QuerySet) -> Option<&OutputTable> {
        self.outputs.get(&(i, *set))
    }

    pub fn outputs(&self) -> &BTreeMap<(usize, QuerySet), OutputTable> {
        &self.outputs
    }

    /// E[A^y(i)] over the decoder's own randomness, for a fixed received word.
    pub fn expectation_on_word(&self, i: usize, y: &Word) -> f64 {
        let mut acc = 0.0;
        for (p, set) in self.plan.entries(i) {
            let table = &self.outputs[&(i, *set)];
            acc += p * f64::from(table.eval(&y.restrict(&set.positions())));
        }
        acc
    }
}

#[derive(Debug, Clone)]
pub struct QuantumDecoder {
    plan: QueryPlan,
    measurements: BTreeMap<(usize, QuerySet), TwoOutcomeMeasurement>,
}

impl QuantumDecoder {
    pub fn new(
        plan: QueryPlan,
        measurements: BTreeMap<(usize, QuerySet), TwoOutcomeMeasurement>,
    ) -> Result<Self> {
        for i in 0..plan.n() {
            for (p, set) in plan.entries(i) {
                if *p <= 0.0 {
                    continue;
                }
                match measurements.get(&(i, *set)) {
                    None => {
                        return Err(Error::Invalid(format!(
                            "no measurement for index {} and set {set}",
                            i + 1
                        )))
                    }
                    Some(meas) if meas.dim() != 1 << set.size() => {
                        return Err(Error::DimensionMismatch {
                            expected: 1 << set.size(),
                            actual: meas.dim(),
                        })
                    }
                    _ => {}
                }
            }
        }
        Ok(QuantumDecoder { plan, measurements })
    }

    pub fn plan(&self) -> &QueryPlan {
        &self.plan
    }

    pub fn measurement(&self, i: usize, set: &QuerySet) -> Option<&TwoOutcomeMeasurement> {
        self.measurements.get(&(i, *set))
    }

    pub fn measurements(&self) -> &BTreeMap<(usize, QuerySet), TwoOutcomeMeasurement> {
        &self.measurements
    }
}
