//! Exact finite-dimensional quantum mechanics on a few qubits.
//!
//! Dense matrices only. Qubit `j` of an `m`-qubit system is the j'th tensor
//! factor from the left, i.e. bit of weight `2^(m-1-j)` in a basis index.
//! States are density operators; measurements are two-outcome POVM pairs or
//! per-qubit Pauli batteries; noise is a Kraus channel.

pub mod channel;
pub mod density;
pub mod eig;
pub mod matrix;
pub mod measure;
pub mod pauli;

pub use channel::KrausChannel;
pub use density::DensityOperator;
pub use matrix::ComplexMatrix;
pub use measure::{
    measure_pauli_string_joint, measure_two_outcome, OutcomeDistribution, TwoOutcomeMeasurement,
};
pub use pauli::{
    pauli_decompose, pauli_eigenprojectors, pauli_inner_product, pauli_matrix, pauli_reconstruct,
    PauliLetter, PauliString,
};

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Bit of `index` that addresses qubit `j` in an `m`-qubit register.
#[inline]
pub(crate) fn qubit_bit(index: usize, j: usize, m: usize) -> usize {
    (index >> (m - 1 - j)) & 1
}

#[inline]
pub(crate) fn set_qubit_bit(index: usize, j: usize, m: usize, bit: usize) -> usize {
    let w = m - 1 - j;
    (index & !(1 << w)) | (bit << w)
}

/// Embed an operator on the listed qubits (ascending) into the full register,
/// acting as identity elsewhere.
pub fn embed_on_qubits(
    local: &ComplexMatrix,
    positions: &[usize],
    m: usize,
) -> Result<ComplexMatrix> {
    let k = positions.len();
    if local.dim() != 1 << k {
        return Err(Error::DimensionMismatch {
            expected: 1 << k,
            actual: local.dim(),
        });
    }
    for (a, b) in positions.iter().zip(positions.iter().skip(1)) {
        if a >= b {
            return Err(Error::Invalid(
                "qubit positions must be strictly ascending".into(),
            ));
        }
    }
    if let Some(&last) = positions.last() {
        if last >= m {
            return Err(Error::IndexOutOfRange {
                index: last,
                size: m,
            });
        }
    }
    let dim = 1usize << m;
    let mut out = ComplexMatrix::zeros(dim);
    let rest_mask: usize = {
        let mut mask = (1 << m) - 1;
        for &p in positions {
            mask &= !(1 << (m - 1 - p));
        }
        mask
    };
    for r in 0..dim {
        let r_loc = local_pattern(r, positions, m);
        for c in 0..dim {
            if (r & rest_mask) != (c & rest_mask) {
                continue;
            }
            let c_loc = local_pattern(c, positions, m);
            out.set(r, c, local.get(r_loc, c_loc));
        }
    }
    Ok(out)
}

/// Extract the tensor factor on `positions` assuming the operator is identity
/// elsewhere: partial trace over the rest divided by its dimension.
pub fn extract_from_qubits(
    full: &ComplexMatrix,
    positions: &[usize],
    m: usize,
) -> Result<ComplexMatrix> {
    if full.dim() != 1 << m {
        return Err(Error::DimensionMismatch {
            expected: 1 << m,
            actual: full.dim(),
        });
    }
    let k = positions.len();
    let rest = m - k;
    let mut out = ComplexMatrix::zeros(1 << k);
    let rest_positions: Vec<usize> = (0..m).filter(|p| !positions.contains(p)).collect();
    for a in 0..(1 << k) {
        for b in 0..(1 << k) {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..(1usize << rest) {
                let r = assemble_index(a, positions, c, &rest_positions, m);
                let s = assemble_index(b, positions, c, &rest_positions, m);
                acc += full.get(r, s);
            }
            out.set(a, b, acc / Complex64::new((1u64 << rest) as f64, 0.0));
        }
    }
    Ok(out)
}

/// Apply a single-qubit unitary to qubit `j` of a dense operator: u ρ u†.
pub fn conjugate_single_qubit(
    mat: &ComplexMatrix,
    j: usize,
    m: usize,
    u: &ComplexMatrix,
) -> ComplexMatrix {
    let dim = 1usize << m;
    // B = (embedded u) · mat
    let mut b = ComplexMatrix::zeros(dim);
    for r in 0..dim {
        let rb = qubit_bit(r, j, m);
        let r0 = set_qubit_bit(r, j, m, 0);
        let r1 = set_qubit_bit(r, j, m, 1);
        for c in 0..dim {
            let v = u.get(rb, 0) * mat.get(r0, c) + u.get(rb, 1) * mat.get(r1, c);
            b.set(r, c, v);
        }
    }
    // out = B · (embedded u)†
    let mut out = ComplexMatrix::zeros(dim);
    for r in 0..dim {
        for c in 0..dim {
            let cb = qubit_bit(c, j, m);
            let c0 = set_qubit_bit(c, j, m, 0);
            let c1 = set_qubit_bit(c, j, m, 1);
            let v = b.get(r, c0) * u.get(cb, 0).conj() + b.get(r, c1) * u.get(cb, 1).conj();
            out.set(r, c, v);
        }
    }
    out
}

/// Local pattern (ascending positions → bits, leftmost position most
/// significant) carried by a full register index.
pub(crate) fn local_pattern(index: usize, positions: &[usize], m: usize) -> usize {
    let k = positions.len();
    let mut p = 0usize;
    for (t, &pos) in positions.iter().enumerate() {
        p |= qubit_bit(index, pos, m) << (k - 1 - t);
    }
    p
}

/// Inverse of `local_pattern` over two disjoint position groups.
pub(crate) fn assemble_index(
    pat_a: usize,
    pos_a: &[usize],
    pat_b: usize,
    pos_b: &[usize],
    m: usize,
) -> usize {
    let mut idx = 0usize;
    for (t, &p) in pos_a.iter().enumerate() {
        idx = set_qubit_bit(idx, p, m, (pat_a >> (pos_a.len() - 1 - t)) & 1);
    }
    for (t, &p) in pos_b.iter().enumerate() {
        idx = set_qubit_bit(idx, p, m, (pat_b >> (pos_b.len() - 1 - t)) & 1);
    }
    idx
}
