//! Classical codes as diagonal quantum codes.
//!
//! Probability distributions are diagonal density operators, so a
//! (randomized) classical code with table decoders embeds as a quantum code
//! with diagonal observables, reproducing the classical success exactly.

use super::bits::Word;
use super::decoder::{ClassicalDecoder, QuantumDecoder};
use super::types::{ClassicalCode, QuantumCode, RandomizedCode};
use crate::error::Result;
use crate::quantum::{ComplexMatrix, DensityOperator, TwoOutcomeMeasurement};
use crate::tol::Tolerances;
use num_complex::Complex64;
use std::collections::BTreeMap;

pub fn embed_classical(
    code: &ClassicalCode,
    dec: &ClassicalDecoder,
    tol: &Tolerances,
) -> Result<(QuantumCode, QuantumDecoder)> {
    let randomized = RandomizedCode::from_deterministic(code);
    embed_randomized(&randomized, dec, tol)
}

pub fn embed_randomized(
    code: &RandomizedCode,
    dec: &ClassicalDecoder,
    tol: &Tolerances,
) -> Result<(QuantumCode, QuantumDecoder)> {
    let m = code.m();
    tol.check_qubits(m)?;
    let states = Word::all(code.n())
        .map(|x| {
            let mut mat = ComplexMatrix::zeros(1 << m);
            for (p, w) in code.row(&x) {
                let idx = w.index();
                let cur = mat.get(idx, idx);
                mat.set(idx, idx, cur + Complex64::new(*p, 0.0));
            }
            DensityOperator::new(m, mat, tol)
        })
        .collect::<Result<Vec<_>>>()?;
    let quantum_code = QuantumCode::new(code.n(), m, states)?;

    let mut measurements = BTreeMap::new();
    for ((i, set), table) in dec.outputs() {
        let k = set.size();
        let dim = 1usize << k;
        let mut plus = ComplexMatrix::zeros(dim);
        let mut minus = ComplexMatrix::zeros(dim);
        for idx in 0..dim {
            let v = f64::from(table.eval(&Word::from_index(idx as u64, k)));
            plus.set(idx, idx, Complex64::new((1.0 + v) / 2.0, 0.0));
            minus.set(idx, idx, Complex64::new((1.0 - v) / 2.0, 0.0));
        }
        measurements.insert((*i, *set), TwoOutcomeMeasurement::new(plus, minus, tol)?);
    }
    let decoder = QuantumDecoder::new(dec.plan().clone(), measurements)?;
    Ok((quantum_code, decoder))
}
