//! Search for a single m-letter Pauli measurement sequence that is
//! simultaneously good for every index.
//!
//! The average bias B̄(S,i) = (1/|M_i|)·Σ_{r∈M_i} B'(i,S_(r),r) only depends
//! on S through its letters inside each matching set, and the sets of one
//! matching are disjoint, so all per-set biases are precomputed once per
//! (set, local assignment) and every candidate costs a handful of table
//! lookups. A candidate succeeds when min_i B̄(S,i) ≥ ε/(2·4^q); the small
//! instances where no candidate reaches the threshold are a first-class
//! outcome, reported with the best achievable biases.

use super::bias::pauli_bias_raw;
use super::matching::MatchingFamily;
use crate::codes::{InputDistribution, QuantumCode, QuerySet};
use crate::error::{Error, Result};
use crate::quantum::{PauliLetter, PauliString};
use crate::rng::stream;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchStrategy {
    /// Exhaustive when 4^m fits the cap, else seeded sampling.
    Auto,
    Exhaustive,
    Sample,
    Greedy,
}

impl SearchStrategy {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(SearchStrategy::Auto),
            "exhaustive" => Ok(SearchStrategy::Exhaustive),
            "sample" => Ok(SearchStrategy::Sample),
            "greedy" => Ok(SearchStrategy::Greedy),
            other => Err(Error::Parse(format!("unknown search strategy {other:?}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SearchStrategy::Auto => "auto",
            SearchStrategy::Exhaustive => "exhaustive",
            SearchStrategy::Sample => "sample",
            SearchStrategy::Greedy => "greedy",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub strategy: SearchStrategy,
    pub seed: u64,
    /// Exhaustive search allowed while 4^m ≤ this.
    pub exhaustive_cap: u64,
    pub sample_budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            strategy: SearchStrategy::Auto,
            seed: 0,
            exhaustive_cap: 1_000_000,
            sample_budget: 100_000,
        }
    }
}

/// Everything known about the chosen (or best failing) sequence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BiasReport {
    pub s_star: String,
    pub threshold: f64,
    pub per_index: Vec<IndexBias>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndexBias {
    pub index: usize,
    pub b_bar: f64,
    pub entries: Vec<SetBias>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetBias {
    /// 1-based positions of the matching set.
    pub set: Vec<usize>,
    /// B(i,r), the decoder-measurement bias; attached by the caller, which
    /// owns the decoder (see `attach_measurement_biases`).
    pub b: Option<f64>,
    /// B'(i, S*_(r), r).
    pub b_prime: f64,
    pub sign: i8,
}

impl BiasReport {
    /// Fill in the B(i,r) column from the decoder's measurements. Entries
    /// are aligned with the matching family's set order.
    pub fn attach_measurement_biases(
        &mut self,
        code: &QuantumCode,
        dec: &crate::codes::QuantumDecoder,
        family: &MatchingFamily,
        mu: &InputDistribution,
    ) -> Result<()> {
        for idx_bias in &mut self.per_index {
            let i = idx_bias.index;
            for (entry, set) in idx_bias.entries.iter_mut().zip(family.sets(i)) {
                entry.b = Some(super::bias::measurement_bias(code, dec, i, set, mu)?);
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found {
        s_star: PauliString,
        signs: BTreeMap<(usize, QuerySet), i8>,
        report: BiasReport,
    },
    Failed {
        best: PauliString,
        best_min: f64,
        per_index: Vec<f64>,
        violating: Vec<usize>,
        /// min_i B̄(S,i) for every candidate, present when the space was
        /// small enough to tabulate.
        table: Option<Vec<(String, f64)>>,
    },
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub strategy_used: SearchStrategy,
    pub candidates_evaluated: u64,
    pub threshold: f64,
}

impl SearchResult {
    pub fn succeeded(&self) -> bool {
        matches!(self.outcome, SearchOutcome::Found { .. })
    }
}

/// Precomputed per-(index, set, local letter assignment) raw correlations.
struct BiasTables {
    /// Distinct matching sets with their ascending positions.
    sets: Vec<(QuerySet, Vec<usize>)>,
    /// tables[i] = list of (set index, raw bias per local assignment id).
    tables: Vec<Vec<(usize, Vec<f64>)>>,
}

impl BiasTables {
    fn build(code: &QuantumCode, family: &MatchingFamily, mu: &InputDistribution) -> Result<Self> {
        let m = code.m();
        let mut set_index: BTreeMap<QuerySet, usize> = BTreeMap::new();
        let mut sets: Vec<(QuerySet, Vec<usize>)> = Vec::new();
        for i in 0..family.n() {
            for set in family.sets(i) {
                set_index.entry(*set).or_insert_with(|| {
                    sets.push((*set, set.positions()));
                    sets.len() - 1
                });
            }
        }
        // raw[set][i][local id] over all local assignments of the set.
        let mut raw_per_set: Vec<Vec<Vec<f64>>> = Vec::with_capacity(sets.len());
        for (set, positions) in &sets {
            let k = positions.len();
            let mut per_index = vec![vec![0.0; 1 << (2 * k)]; family.n()];
            for local in PauliString::all(k) {
                // Lift the local word onto the full register at `positions`.
                let mut letters = vec![PauliLetter::I; m];
                for (t, &p) in positions.iter().enumerate() {
                    letters[p] = local.letter(t);
                }
                let full = PauliString::new(letters)?;
                let id = local.id() as usize;
                for (i, row) in per_index.iter_mut().enumerate() {
                    if family.sets(i).contains(set) {
                        row[id] = pauli_bias_raw(code, i, &full, set, mu)?;
                    }
                }
            }
            raw_per_set.push(per_index);
        }
        let tables = (0..family.n())
            .map(|i| {
                family
                    .sets(i)
                    .iter()
                    .map(|set| {
                        let si = set_index[set];
                        (si, raw_per_set[si][i].clone())
                    })
                    .collect()
            })
            .collect();
        Ok(BiasTables { sets, tables })
    }

    fn local_id(&self, s: &PauliString, set_idx: usize) -> usize {
        let positions = &self.sets[set_idx].1;
        positions
            .iter()
            .fold(0usize, |acc, &p| acc * 4 + letter_digit(s.letter(p)))
    }

    /// (B̄(S,i), per-set raw biases) for one index.
    fn b_bar(&self, s: &PauliString, i: usize) -> f64 {
        let rows = &self.tables[i];
        let total: f64 = rows
            .iter()
            .map(|(si, raw)| raw[self.local_id(s, *si)].abs())
            .sum();
        total / rows.len() as f64
    }

    fn min_b_bar(&self, s: &PauliString) -> f64 {
        (0..self.tables.len())
            .map(|i| self.b_bar(s, i))
            .fold(f64::INFINITY, f64::min)
    }
}

fn letter_digit(l: PauliLetter) -> usize {
    match l {
        PauliLetter::I => 0,
        PauliLetter::X => 1,
        PauliLetter::Y => 2,
        PauliLetter::Z => 3,
    }
}

/// Find S* with B̄(S*,i) ≥ ε/(2·4^q) for every i, or report the best
/// achievable candidate.
pub fn find_pauli_sequence(
    code: &QuantumCode,
    family: &MatchingFamily,
    mu: &InputDistribution,
    eps: f64,
    q: usize,
    config: &SearchConfig,
) -> Result<SearchResult> {
    let n = family.n();
    if n == 0 {
        return Err(Error::Invalid("matching family is empty".into()));
    }
    for i in 0..n {
        if family.sets(i).is_empty() {
            return Err(Error::EmptyMatching(i));
        }
    }
    let m = code.m();
    let threshold = eps / (2.0 * 4f64.powi(q as i32));
    let tables = BiasTables::build(code, family, mu)?;

    let space: u64 = 4u64
        .checked_pow(m as u32)
        .ok_or_else(|| Error::Invalid("m too large for candidate enumeration".into()))?;
    let strategy_used = match config.strategy {
        SearchStrategy::Auto => {
            if space <= config.exhaustive_cap {
                SearchStrategy::Exhaustive
            } else {
                SearchStrategy::Sample
            }
        }
        s => s,
    };

    let mut best: Option<(PauliString, f64)> = None;
    let mut evaluated = 0u64;
    let mut table: Option<Vec<(String, f64)>> = None;

    match strategy_used {
        SearchStrategy::Exhaustive => {
            if space > config.exhaustive_cap {
                return Err(Error::BudgetExceeded {
                    needed: space as u128,
                    budget: config.exhaustive_cap as u128,
                });
            }
            let tabulate = space <= 1024;
            let mut tab = Vec::new();
            for s in PauliString::all(m) {
                let min_bias = tables.min_b_bar(&s);
                evaluated += 1;
                if tabulate {
                    tab.push((s.to_string(), min_bias));
                }
                if best.as_ref().is_none_or(|(_, b)| min_bias > *b) {
                    best = Some((s, min_bias));
                }
            }
            if tabulate {
                table = Some(tab);
            }
        }
        SearchStrategy::Sample => {
            let mut rng = stream(config.seed, "pauli-sequence-sample");
            for _ in 0..config.sample_budget {
                let id = rng.gen_range(0..space);
                let s = PauliString::from_id(id, m)?;
                let min_bias = tables.min_b_bar(&s);
                evaluated += 1;
                if best.as_ref().is_none_or(|(_, b)| min_bias > *b) {
                    best = Some((s, min_bias));
                }
                if best.as_ref().map(|(_, b)| *b).unwrap_or(0.0) >= threshold {
                    break;
                }
            }
        }
        SearchStrategy::Greedy => {
            // Coordinate ascent on min_i B̄, starting from the all-Z word,
            // sweeping positions in order until a full pass changes nothing.
            let mut current = PauliString::new(vec![PauliLetter::Z; m])?;
            let mut current_val = tables.min_b_bar(&current);
            evaluated += 1;
            loop {
                let mut improved = false;
                for j in 0..m {
                    for letter in PauliLetter::ALL {
                        if letter == current.letter(j) {
                            continue;
                        }
                        let candidate = current.with_letter(j, letter);
                        let val = tables.min_b_bar(&candidate);
                        evaluated += 1;
                        if val > current_val + 1e-15 {
                            current = candidate;
                            current_val = val;
                            improved = true;
                        }
                    }
                }
                if !improved {
                    break;
                }
            }
            best = Some((current, current_val));
        }
        SearchStrategy::Auto => unreachable!(),
    }

    let (best_s, best_min) = best.expect("at least one candidate evaluated");
    if best_min + 1e-12 >= threshold {
        // Assemble signs and the full report for the winner.
        let mut signs = BTreeMap::new();
        let mut per_index = Vec::with_capacity(n);
        for i in 0..n {
            let mut entries = Vec::new();
            let mut total = 0.0;
            for set in family.sets(i) {
                let raw = pauli_bias_raw(code, i, &best_s, set, mu)?;
                let sign = if raw < 0.0 { -1 } else { 1 };
                signs.insert((i, *set), sign);
                entries.push(SetBias {
                    set: set.positions().iter().map(|p| p + 1).collect(),
                    b: None,
                    b_prime: raw.abs(),
                    sign,
                });
                total += raw.abs();
            }
            per_index.push(IndexBias {
                index: i,
                b_bar: total / family.sets(i).len() as f64,
                entries,
            });
        }
        let report = BiasReport {
            s_star: best_s.to_string(),
            threshold,
            per_index,
        };
        Ok(SearchResult {
            outcome: SearchOutcome::Found {
                s_star: best_s,
                signs,
                report,
            },
            strategy_used,
            candidates_evaluated: evaluated,
            threshold,
        })
    } else {
        let per_index: Vec<f64> = (0..n).map(|i| tables.b_bar(&best_s, i)).collect();
        let violating = per_index
            .iter()
            .enumerate()
            .filter(|(_, b)| **b + 1e-12 < threshold)
            .map(|(i, _)| i)
            .collect();
        Ok(SearchResult {
            outcome: SearchOutcome::Failed {
                best: best_s,
                best_min,
                per_index,
                violating,
                table,
            },
            strategy_used,
            candidates_evaluated: evaluated,
            threshold,
        })
    }
}
