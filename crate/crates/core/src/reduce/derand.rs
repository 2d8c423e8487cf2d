//! Derandomizing a μ-average randomized smooth code into a deterministic
//! code that stays good for a constant fraction of the indices.
//!
//! The randomized code's rows are realized through one shared uniform
//! variable z ∈ [0,1): the grid of all cumulative row breakpoints (exact
//! rationals) couples every row to the same z, each grid cell fixes one
//! deterministic code R(·,z), and an averaging argument guarantees some cell
//! decodes at least εn indices with half the bias.

use crate::codes::{
    bias_classical, ClassicalCode, ClassicalCodeRef, ClassicalDecoder, InputDistribution,
    RandomizedCode, Word,
};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeSet;

const BIAS_SLACK: f64 = 1e-9;

/// Exact-rational realization of R as a function of shared randomness.
#[derive(Debug, Clone)]
pub struct RandomnessCoupling {
    /// Cell boundaries, ascending, starting at 0 and ending at 1.
    pub breakpoints: Vec<BigRational>,
    /// cell_words[cell][x.index()] = the codeword R(x, z) on that cell.
    pub cell_words: Vec<Vec<Word>>,
    /// Snapped row probabilities, per x: (probability, word).
    pub rows: Vec<Vec<(BigRational, Word)>>,
    /// True when some floating row probability was not exactly dyadic and
    /// had to be snapped.
    pub snapped: bool,
    pub max_snap_error: f64,
}

impl RandomnessCoupling {
    pub fn cell_count(&self) -> usize {
        self.cell_words.len()
    }

    pub fn cell_weight(&self, cell: usize) -> BigRational {
        &self.breakpoints[cell + 1] - &self.breakpoints[cell]
    }

    /// The cell-weighted word distribution of every x, which must equal the
    /// snapped rows exactly.
    pub fn reproduces_rows(&self) -> bool {
        let num_x = self.rows.len();
        for x_idx in 0..num_x {
            let mut acc: Vec<(Word, BigRational)> = Vec::new();
            for cell in 0..self.cell_count() {
                let w = self.cell_words[cell][x_idx];
                let weight = self.cell_weight(cell);
                match acc.iter_mut().find(|(word, _)| *word == w) {
                    Some((_, total)) => *total += weight,
                    None => acc.push((w, weight)),
                }
            }
            for (p, word) in &self.rows[x_idx] {
                let got = acc
                    .iter()
                    .find(|(w, _)| w == word)
                    .map(|(_, t)| t.clone())
                    .unwrap_or_else(BigRational::zero);
                if got != *p {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Debug)]
pub struct DerandResult {
    pub code: ClassicalCode,
    /// Indices whose per-cell μ-bias meets ε on the chosen cell.
    pub good_indices: Vec<usize>,
    pub chosen_cell: usize,
    /// E_z[X_z], the coupling-average count of ε-good indices.
    pub expected_good: f64,
    /// μ-bias per index on the chosen cell.
    pub per_index_bias: Vec<f64>,
    pub coupling: RandomnessCoupling,
}

/// Snap a probability to a rational with denominator 2^`bits`.
fn snap(p: f64, bits: u32) -> (BigRational, f64) {
    let denom = BigInt::from(1u64) << bits;
    let scaled = (p * (1u64 << bits) as f64).round();
    let num = BigInt::from(scaled as i128);
    let r = BigRational::new(num, denom);
    let err = (r.to_f64().unwrap_or(0.0) - p).abs();
    (r, err)
}

/// Derandomize a μ-average randomized smooth code with bias 2ε into a
/// deterministic code good for at least ⌈εn⌉ indices.
pub fn derandomize(
    code: &RandomizedCode,
    dec: &ClassicalDecoder,
    mu: &InputDistribution,
    eps: f64,
    snap_bits: u32,
) -> Result<DerandResult> {
    let n = code.n();
    let m = code.m();

    // Precondition: the decoder achieves bias ≥ 2ε on every index.
    for i in 0..n {
        let bias = bias_classical(ClassicalCodeRef::Randomized(code), dec, i, mu, None)?;
        if bias < 2.0 * eps - BIAS_SLACK {
            return Err(Error::DerandomizationPrecondition {
                i,
                bias,
                required: 2.0 * eps,
            });
        }
    }

    // Snap rows to exact rationals; repair each row's total to exactly 1 by
    // adjusting its largest entry.
    let mut snapped = false;
    let mut max_snap_error = 0.0f64;
    let mut rows: Vec<Vec<(BigRational, Word)>> = Vec::with_capacity(1 << n);
    for x in Word::all(n) {
        let raw = code.row(&x);
        let mut row: Vec<(BigRational, Word)> = Vec::with_capacity(raw.len());
        for (p, w) in raw {
            let (r, err) = snap(*p, snap_bits);
            if err > 0.0 {
                snapped = true;
                max_snap_error = max_snap_error.max(err);
            }
            row.push((r, *w));
        }
        let total: BigRational = row.iter().map(|(p, _)| p.clone()).sum();
        let residual = BigRational::one() - total;
        if residual.to_f64().unwrap_or(1.0).abs() > 1e-6 {
            return Err(Error::Invalid(format!(
                "row for x = {x} is far from normalized after snapping"
            )));
        }
        if !residual.is_zero() {
            let argmax = row
                .iter()
                .enumerate()
                .max_by(|(_, (a, _)), (_, (b, _))| a.cmp(b))
                .map(|(k, _)| k)
                .expect("nonempty row");
            row[argmax].0 += residual;
            if row[argmax].0.is_negative() {
                return Err(Error::Invalid(
                    "snap repair produced a negative probability".into(),
                ));
            }
        }
        rows.push(row);
    }

    // Shared-randomness grid: union of all cumulative breakpoints.
    let mut grid: BTreeSet<BigRational> = BTreeSet::new();
    grid.insert(BigRational::zero());
    grid.insert(BigRational::one());
    let mut cumulative: Vec<Vec<BigRational>> = Vec::with_capacity(rows.len());
    for row in &rows {
        let mut cum = vec![BigRational::zero()];
        for (p, _) in row {
            let next = cum.last().unwrap() + p;
            cum.push(next.clone());
            grid.insert(next);
        }
        cumulative.push(cum);
    }
    let breakpoints: Vec<BigRational> = grid.into_iter().collect();
    let cell_count = breakpoints.len() - 1;

    // Words per cell.
    let mut cell_words: Vec<Vec<Word>> = Vec::with_capacity(cell_count);
    for cell in 0..cell_count {
        let a = &breakpoints[cell];
        let mut words = Vec::with_capacity(rows.len());
        for (row, cum) in rows.iter().zip(&cumulative) {
            // Last segment whose start is ≤ a; zero-width segments are
            // skipped because a < cum[j+1] must hold.
            let mut j = cum.partition_point(|c| c <= a) - 1;
            while j + 1 < cum.len() && &cum[j + 1] <= a {
                j += 1;
            }
            // Guard against zero-probability segments.
            while j < row.len() && row[j].0.is_zero() {
                j += 1;
            }
            if j >= row.len() {
                return Err(Error::Invalid("cell fell outside every row segment".into()));
            }
            words.push(row[j].1);
        }
        cell_words.push(words);
    }

    // Per-cell per-index biases and the good-index counts.
    let mut expected_good_exact = BigRational::zero();
    let mut best: Option<(usize, usize)> = None; // (X_z, cell), first argmax
    let mut per_cell_bias: Vec<Vec<f64>> = Vec::with_capacity(cell_count);
    for (cell, words) in cell_words.iter().enumerate() {
        let weight = &breakpoints[cell + 1] - &breakpoints[cell];
        let mut biases = Vec::with_capacity(n);
        let mut count = 0usize;
        for i in 0..n {
            let mut beta = 0.0;
            for (x, w) in mu.support() {
                beta += w * f64::from(x.sign(i)) * dec.expectation_on_word(i, &words[x.index()]);
            }
            if beta >= eps - BIAS_SLACK {
                count += 1;
            }
            biases.push(beta);
        }
        expected_good_exact += weight * BigRational::from(BigInt::from(count));
        per_cell_bias.push(biases);
        if best.is_none_or(|(best_count, _)| count > best_count) {
            best = Some((count, cell));
        }
    }
    let (_, chosen_cell) = best.expect("at least one cell");
    let per_index_bias = per_cell_bias[chosen_cell].clone();
    let good_indices: Vec<usize> = (0..n)
        .filter(|&i| per_index_bias[i] >= eps - BIAS_SLACK)
        .collect();
    let table = cell_words[chosen_cell].clone();
    let deterministic = ClassicalCode::new(n, m, table)?;

    Ok(DerandResult {
        code: deterministic,
        good_indices,
        chosen_cell,
        expected_good: expected_good_exact.to_f64().unwrap_or(f64::NAN),
        per_index_bias,
        coupling: RandomnessCoupling {
            breakpoints,
            cell_words,
            rows,
            snapped,
            max_snap_error,
        },
    })
}
