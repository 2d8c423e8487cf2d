//! From a Pauli sequence to a randomized code with a parity decoder.

use super::matching::MatchingFamily;
use crate::codes::{ClassicalDecoder, OutputTable, QuantumCode, QueryPlan, RandomizedCode, Word};
use crate::error::{Error, Result};
use crate::quantum::{measure_pauli_string_joint, PauliString};
use crate::tol::Tolerances;
use std::collections::BTreeMap;

/// R(x) = the outcome distribution of measuring every qubit of Q(x) with the
/// corresponding letter of `s_star`.
pub fn build_randomized_code(
    code: &QuantumCode,
    s_star: &PauliString,
    tol: &Tolerances,
) -> Result<RandomizedCode> {
    if s_star.len() != code.m() {
        return Err(Error::DimensionMismatch {
            expected: code.m(),
            actual: s_star.len(),
        });
    }
    let m = code.m();
    let rows = Word::all(code.n())
        .map(|x| {
            let dist = measure_pauli_string_joint(code.encode(&x), s_star, tol)?;
            Ok(dist
                .probabilities()
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0.0)
                .map(|(w, &p)| (p, Word::from_index(w as u64, m)))
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    RandomizedCode::new(code.n(), m, rows, tol)
}

/// Parity decoding over a matching: pick r ∈ M_i uniformly and
/// output a_{i,r}·∏ y_j over the positions of r that `s_star` actually
/// measures. Identity letters yield state-independent coins, so their bits
/// are excluded from the parity; the query sets stay whole, which keeps the
/// smoothness bound at qc/(εm).
pub fn build_parity_decoder(
    family: &MatchingFamily,
    s_star: &PauliString,
    tol: &Tolerances,
) -> Result<ClassicalDecoder> {
    let n = family.n();
    let m = family.m;
    if s_star.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: s_star.len(),
        });
    }
    let mut entries = Vec::with_capacity(n);
    let mut outputs = BTreeMap::new();
    for i in 0..n {
        let sets = family.sets(i);
        if sets.is_empty() {
            return Err(Error::EmptyMatching(i));
        }
        let p = 1.0 / sets.len() as f64;
        let mut row = Vec::with_capacity(sets.len());
        for set in sets {
            let sign = family.sign(i, set).ok_or_else(|| {
                Error::Invalid(format!("no sign recorded for index {} set {set}", i + 1))
            })?;
            let positions = set.positions();
            let active: Vec<usize> = positions
                .iter()
                .enumerate()
                .filter(|(_, &pos)| s_star.letter(pos) != crate::quantum::PauliLetter::I)
                .map(|(t, _)| t)
                .collect();
            row.push((p, *set));
            outputs.insert(
                (i, *set),
                OutputTable::signed_parity(positions.len(), &active, sign),
            );
        }
        entries.push(row);
    }
    let plan = QueryPlan::new(n, m, family.q, entries, tol)?;
    ClassicalDecoder::new(plan, outputs)
}
