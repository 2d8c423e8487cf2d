//! Two-outcome measurements and per-qubit Pauli measurement batteries.

use super::density::DensityOperator;
use super::eig::min_eigenvalue;
use super::matrix::ComplexMatrix;
use super::pauli::{PauliLetter, PauliString};
use super::{conjugate_single_qubit, qubit_bit};
use crate::error::{Error, Result};
use crate::tol::Tolerances;

/// A ±1-valued measurement {A⁺, A⁻} with A⁺ + A⁻ = I.
#[derive(Debug, Clone)]
pub struct TwoOutcomeMeasurement {
    plus_op: ComplexMatrix,
    minus_op: ComplexMatrix,
    degenerate: bool,
}

impl TwoOutcomeMeasurement {
    pub fn new(plus_op: ComplexMatrix, minus_op: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if plus_op.dim() != minus_op.dim() {
            return Err(Error::DimensionMismatch {
                expected: plus_op.dim(),
                actual: minus_op.dim(),
            });
        }
        for op in [&plus_op, &minus_op] {
            let lambda = min_eigenvalue(op, tol.herm)?;
            if lambda < -tol.psd {
                return Err(Error::NotPositive {
                    eigenvalue: lambda,
                    tolerance: tol.psd,
                });
            }
        }
        let sum = plus_op.add(&minus_op)?;
        let dev = sum.max_abs_diff(&ComplexMatrix::identity(plus_op.dim()));
        if dev > tol.sum {
            return Err(Error::IncompleteMeasurement { deviation: dev });
        }
        Ok(TwoOutcomeMeasurement {
            plus_op,
            minus_op,
            degenerate: false,
        })
    }

    /// Construct an observable A with ‖A‖ ≤ 1 into the pair ((I+A)/2, (I-A)/2).
    pub fn from_observable(obs: &ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let identity = ComplexMatrix::identity(obs.dim());
        let plus = identity.add(obs)?.scale_re(0.5);
        let minus = identity.sub(obs)?.scale_re(0.5);
        Self::new(plus, minus, tol)
    }

    pub(crate) fn trusted(
        plus_op: ComplexMatrix,
        minus_op: ComplexMatrix,
        degenerate: bool,
    ) -> Self {
        TwoOutcomeMeasurement {
            plus_op,
            minus_op,
            degenerate,
        }
    }

    pub fn plus_op(&self) -> &ComplexMatrix {
        &self.plus_op
    }

    pub fn minus_op(&self) -> &ComplexMatrix {
        &self.minus_op
    }

    pub fn degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn dim(&self) -> usize {
        self.plus_op.dim()
    }

    pub fn num_qubits(&self) -> usize {
        self.plus_op.dim().trailing_zeros() as usize
    }

    /// A = A⁺ - A⁻, the expectation-value observable.
    pub fn observable(&self) -> ComplexMatrix {
        self.plus_op.sub(&self.minus_op).expect("validated dims")
    }

    /// Probability-weighted mixture of two measurements on the same space.
    pub fn mix(&self, w_self: f64, other: &Self, w_other: f64) -> Result<Self> {
        let total = w_self + w_other;
        let a = w_self / total;
        let b = w_other / total;
        Ok(TwoOutcomeMeasurement {
            plus_op: self.plus_op.scale_re(a).add(&other.plus_op.scale_re(b))?,
            minus_op: self.minus_op.scale_re(a).add(&other.minus_op.scale_re(b))?,
            degenerate: false,
        })
    }
}

/// Distribution over ±1 outcome words. Word `w` is indexed by the integer
/// whose bit of weight 2^(m-1-j) is 1 exactly when outcome j is -1.
#[derive(Debug, Clone)]
pub struct OutcomeDistribution {
    num_bits: usize,
    probabilities: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn new(num_bits: usize, mut probabilities: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        if probabilities.len() != 1 << num_bits {
            return Err(Error::DimensionMismatch {
                expected: 1 << num_bits,
                actual: probabilities.len(),
            });
        }
        let mut sum = 0.0;
        for p in probabilities.iter_mut() {
            if *p < -tol.psd {
                return Err(Error::Invalid(format!("negative outcome probability {p}")));
            }
            if *p < 0.0 {
                *p = 0.0; // clamp sub-tolerance noise on emit
            }
            sum += *p;
        }
        if (sum - 1.0).abs() > tol.trace {
            return Err(Error::NotNormalized { sum });
        }
        Ok(OutcomeDistribution {
            num_bits,
            probabilities,
        })
    }

    pub fn num_bits(&self) -> usize {
        self.num_bits
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn prob(&self, word_index: usize) -> f64 {
        self.probabilities[word_index]
    }

    /// Sign of outcome j in word `word_index`.
    pub fn outcome_sign(word_index: usize, j: usize, num_bits: usize) -> i8 {
        if qubit_bit(word_index, j, num_bits) == 1 {
            -1
        } else {
            1
        }
    }

    /// E[∏_{j ∈ positions} b_j] under this distribution.
    pub fn product_expectation(&self, positions: &[usize]) -> f64 {
        let mut acc = 0.0;
        for (w, &p) in self.probabilities.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let mut sign = 1.0;
            for &j in positions {
                if qubit_bit(w, j, self.num_bits) == 1 {
                    sign = -sign;
                }
            }
            acc += sign * p;
        }
        acc
    }
}

/// Outcome probabilities (Tr(A⁺ρ), Tr(A⁻ρ)).
pub fn measure_two_outcome(
    rho: &DensityOperator,
    meas: &TwoOutcomeMeasurement,
) -> Result<(f64, f64)> {
    if meas.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            actual: meas.dim(),
        });
    }
    let p_plus = rho.expectation(&meas.plus_op)?;
    let p_minus = rho.expectation(&meas.minus_op)?;
    Ok((p_plus, p_minus))
}

/// Measure every qubit of ρ with the corresponding letter of `s`, viewed as m
/// separate one-qubit measurements. Identity letters contribute a fair ±1
/// coin independent of the state.
///
/// Implementation rotates each non-identity qubit into its letter's
/// eigenbasis and reads the diagonal, then convolves fair coins onto the
/// identity positions.
pub fn measure_pauli_string_joint(
    rho: &DensityOperator,
    s: &PauliString,
    tol: &Tolerances,
) -> Result<OutcomeDistribution> {
    let m = rho.num_qubits();
    if s.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: s.len(),
        });
    }
    let mut sigma = rho.matrix().clone();
    for (j, &letter) in s.letters().iter().enumerate() {
        if matches!(letter, PauliLetter::X | PauliLetter::Y) {
            sigma = conjugate_single_qubit(&sigma, j, m, &letter.eigenbasis_rotation());
        }
    }
    let dim = 1usize << m;
    let diag: Vec<f64> = (0..dim).map(|d| sigma.get(d, d).re).collect();

    let identity_mask: usize = s
        .letters()
        .iter()
        .enumerate()
        .filter(|(_, &l)| l == PauliLetter::I)
        .map(|(j, _)| 1usize << (m - 1 - j))
        .sum();
    let num_identity = identity_mask.count_ones() as usize;
    let coin_weight = 1.0 / (1u64 << num_identity) as f64;

    // Marginal over the measured (non-identity) positions.
    let mut marginal = vec![0.0f64; dim];
    for d in 0..dim {
        marginal[d & !identity_mask] += diag[d];
    }

    let probabilities: Vec<f64> = (0..dim)
        .map(|w| marginal[w & !identity_mask] * coin_weight)
        .collect();
    OutcomeDistribution::new(m, probabilities, tol)
}
