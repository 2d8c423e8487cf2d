//! Measurement and Pauli biases, and the decomposition inequality chain
//! linking them: ε ≤ B(i,r) = Σ_S Â(S)·E[Tr(S·Q(x))·x_i] ≤ Σ_S B'(i,S,r),
//! which forces at least one Pauli word with bias B(i,r)/4^q.

use crate::codes::eval::observable_expectation;
use crate::codes::{InputDistribution, QuantumCode, QuantumDecoder, QuerySet};
use crate::error::{Error, Result};
use crate::quantum::{pauli_decompose, pauli_matrix, PauliString};
use crate::tol::Tolerances;
use serde::{Deserialize, Serialize};

/// B(i,r) = E_{x∼μ}[Tr(A_{i,r}·Q(x))·x_i].
pub fn measurement_bias(
    code: &QuantumCode,
    dec: &QuantumDecoder,
    i: usize,
    set: &QuerySet,
    mu: &InputDistribution,
) -> Result<f64> {
    let meas = dec.measurement(i, set).ok_or_else(|| {
        Error::Invalid(format!(
            "no measurement defined for index {} set {set}",
            i + 1
        ))
    })?;
    let obs = meas.observable();
    let positions = set.positions();
    let mut acc = 0.0;
    for (x, weight) in mu.support() {
        acc += weight
            * f64::from(x.sign(i))
            * observable_expectation(code.encode(&x), &positions, &obs)?;
    }
    Ok(acc)
}

/// Signed correlation of a restricted Pauli word with x_i:
/// raw = E_{x∼μ}[Tr(S_(r)·Q(x))·x_i]. Returns (|raw|, sign), sign(0) = +1.
pub fn pauli_bias(
    code: &QuantumCode,
    i: usize,
    s: &PauliString,
    set: &QuerySet,
    mu: &InputDistribution,
) -> Result<(f64, i8)> {
    if s.len() != code.m() {
        return Err(Error::DimensionMismatch {
            expected: code.m(),
            actual: s.len(),
        });
    }
    let raw = pauli_bias_raw(code, i, s, set, mu)?;
    Ok((raw.abs(), if raw < 0.0 { -1 } else { 1 }))
}

/// The unrestricted expectation behind `pauli_bias`. `s` is restricted to
/// `set` (identity elsewhere), which by the partial-trace identity equals
/// evaluating the projected word on the reduced state.
pub fn pauli_bias_raw(
    code: &QuantumCode,
    i: usize,
    s: &PauliString,
    set: &QuerySet,
    mu: &InputDistribution,
) -> Result<f64> {
    let positions = set.positions();
    let mut acc = 0.0;
    if positions.is_empty() {
        // S_(∅) = identity: Tr(Q(x)) = 1.
        for (x, weight) in mu.support() {
            acc += weight * f64::from(x.sign(i));
        }
        return Ok(acc);
    }
    let local = pauli_matrix(&s.project_onto(&positions)?);
    for (x, weight) in mu.support() {
        let reduced = code.encode(&x).reduced_to(&positions)?;
        acc += weight * f64::from(x.sign(i)) * reduced.expectation(&local)?;
    }
    Ok(acc)
}

/// Outcome of checking the decomposition chain on one (i, r).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub i: usize,
    pub set: Vec<usize>,
    pub b: f64,
    /// Σ_S Â(S)·E[Tr(S·Q(x))·x_i], which must reconstruct b.
    pub reconstructed: f64,
    pub sum_abs: f64,
    pub max_term_word: String,
    pub max_term: f64,
    /// b / 4^q with the claimed query budget q.
    pub quarter_bound: f64,
    pub equality_holds: bool,
    pub chain_holds: bool,
    pub quarter_holds: bool,
}

impl DecompositionReport {
    pub fn holds(&self) -> bool {
        self.equality_holds && self.chain_holds && self.quarter_holds
    }
}

/// Verify, for one (i, r), that the measurement bias decomposes over the
/// local Pauli basis, that the absolute-value chain bounds it, and that the
/// best single word attains at least b/4^q.
pub fn decomposition_bound_check(
    code: &QuantumCode,
    dec: &QuantumDecoder,
    i: usize,
    set: &QuerySet,
    mu: &InputDistribution,
    q: usize,
    tol: &Tolerances,
) -> Result<DecompositionReport> {
    let b = measurement_bias(code, dec, i, set, mu)?;
    let meas = dec.measurement(i, set).ok_or_else(|| {
        Error::Invalid(format!(
            "no measurement defined for index {} set {set}",
            i + 1
        ))
    })?;
    let positions = set.positions();
    let coeffs = pauli_decompose(&meas.observable(), tol.herm)?;

    let mut reconstructed = 0.0;
    let mut sum_abs = 0.0;
    let mut max_term = f64::NEG_INFINITY;
    let mut max_word = String::new();
    for (local_word, coeff) in &coeffs {
        // Raw correlation of the local word on the reduced states.
        let local = pauli_matrix(local_word);
        let mut raw = 0.0;
        for (x, weight) in mu.support() {
            raw += weight
                * f64::from(x.sign(i))
                * observable_expectation(code.encode(&x), &positions, &local)?;
        }
        reconstructed += coeff * raw;
        sum_abs += raw.abs();
        if raw.abs() > max_term {
            max_term = raw.abs();
            max_word = local_word.to_string();
        }
    }
    let quarter_bound = b / 4f64.powi(q as i32);
    Ok(DecompositionReport {
        i,
        set: positions,
        b,
        reconstructed,
        sum_abs,
        max_term_word: max_word,
        max_term,
        quarter_bound,
        equality_holds: (b - reconstructed).abs() <= tol.recon,
        chain_holds: b <= sum_abs + tol.recon,
        quarter_holds: max_term + tol.recon >= quarter_bound,
    })
}
