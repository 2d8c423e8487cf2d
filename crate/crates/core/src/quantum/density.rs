//! Density operators and the partial-trace machinery.

use super::eig::min_eigenvalue;
use super::matrix::ComplexMatrix;
use super::{assemble_index, local_pattern};
use crate::error::{Error, Result};
use crate::tol::Tolerances;
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    num_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Validate Hermiticity, positivity and unit trace before accepting.
    pub fn new(num_qubits: usize, matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        tol.check_qubits(num_qubits)?;
        if matrix.dim() != 1 << num_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << num_qubits,
                actual: matrix.dim(),
            });
        }
        let dev = matrix.hermitian_deviation();
        if dev > tol.herm {
            return Err(Error::NotHermitian {
                deviation: dev,
                tolerance: tol.herm,
            });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol.trace || tr.im.abs() > tol.trace {
            return Err(Error::BadTrace {
                trace: tr.re,
                tolerance: tol.trace,
            });
        }
        // Gershgorin screen first: λ_min ≥ min_i (a_ii − Σ_{j≠i}|a_ij|), an
        // O(d²) sufficient condition that settles near-diagonal states
        // without the O(d³) eigensolve.
        let gershgorin = (0..matrix.dim())
            .map(|i| {
                let off: f64 = (0..matrix.dim())
                    .filter(|&j| j != i)
                    .map(|j| matrix.get(i, j).norm())
                    .sum();
                matrix.get(i, i).re - off
            })
            .fold(f64::INFINITY, f64::min);
        if gershgorin < -tol.psd {
            let lambda_min = min_eigenvalue(&matrix, tol.herm)?;
            if lambda_min < -tol.psd {
                return Err(Error::NotPositive {
                    eigenvalue: lambda_min,
                    tolerance: tol.psd,
                });
            }
        }
        Ok(DensityOperator { num_qubits, matrix })
    }

    /// For outputs whose validity is guaranteed by construction
    /// (channel outputs, partial traces of valid states).
    pub(crate) fn trusted(num_qubits: usize, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.dim(), 1 << num_qubits);
        DensityOperator { num_qubits, matrix }
    }

    pub fn pure(num_qubits: usize, amplitudes: &[Complex64], tol: &Tolerances) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: amplitudes.len(),
            });
        }
        let mut matrix = ComplexMatrix::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                matrix.set(r, c, amplitudes[r] * amplitudes[c].conj());
            }
        }
        Self::new(num_qubits, matrix, tol)
    }

    /// |b⟩⟨b| for a computational basis index.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, size: dim });
        }
        let mut matrix = ComplexMatrix::zeros(dim);
        matrix.set(index, index, Complex64::new(1.0, 0.0));
        Ok(DensityOperator { num_qubits, matrix })
    }

    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        DensityOperator {
            num_qubits,
            matrix: ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64),
        }
    }

    /// Single-qubit state (I + v·σ)/2 from a Bloch vector with ‖v‖ ≤ 1.
    pub fn from_bloch(v: [f64; 3]) -> Result<Self> {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if norm > 1.0 + 1e-12 {
            return Err(Error::Invalid(format!(
                "Bloch vector norm {norm} exceeds 1"
            )));
        }
        let mut matrix = ComplexMatrix::zeros(2);
        matrix.set(0, 0, Complex64::new((1.0 + v[2]) / 2.0, 0.0));
        matrix.set(1, 1, Complex64::new((1.0 - v[2]) / 2.0, 0.0));
        matrix.set(0, 1, Complex64::new(v[0] / 2.0, -v[1] / 2.0));
        matrix.set(1, 0, Complex64::new(v[0] / 2.0, v[1] / 2.0));
        Ok(DensityOperator {
            num_qubits: 1,
            matrix,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn kron(&self, other: &Self) -> Self {
        DensityOperator {
            num_qubits: self.num_qubits + other.num_qubits,
            matrix: self.matrix.kron(&other.matrix),
        }
    }

    /// Tr(obs · ρ). The observable must be Hermitian for this to be real;
    /// the real part is returned.
    pub fn expectation(&self, obs: &ComplexMatrix) -> Result<f64> {
        Ok(obs.trace_product(&self.matrix)?.re)
    }

    /// Reduced state on the listed qubits (strictly ascending), tracing out
    /// the rest.
    pub fn reduced_to(&self, positions: &[usize]) -> Result<DensityOperator> {
        let m = self.num_qubits;
        for (a, b) in positions.iter().zip(positions.iter().skip(1)) {
            if a >= b {
                return Err(Error::Invalid(
                    "positions must be strictly ascending".into(),
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
        } else {
            return Err(Error::Invalid("cannot reduce to zero qubits".into()));
        }
        let k = positions.len();
        let rest: Vec<usize> = (0..m).filter(|p| !positions.contains(p)).collect();
        let mut out = ComplexMatrix::zeros(1 << k);
        for a in 0..(1usize << k) {
            for b in 0..(1usize << k) {
                let mut acc = Complex64::new(0.0, 0.0);
                for c in 0..(1usize << rest.len()) {
                    let r = assemble_index(a, positions, c, &rest, m);
                    let s = assemble_index(b, positions, c, &rest, m);
                    acc += self.matrix.get(r, s);
                }
                out.set(a, b, acc);
            }
        }
        Ok(DensityOperator::trusted(k, out))
    }

    /// Replace the qubits in `subset` with the maximally mixed state,
    /// leaving the reduced state outside `subset` unchanged.
    pub fn replace_with_maximally_mixed(&self, subset: &[usize]) -> Result<DensityOperator> {
        let m = self.num_qubits;
        let mut sorted: Vec<usize> = subset.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if let Some(&last) = sorted.last() {
            if last >= m {
                return Err(Error::IndexOutOfRange {
                    index: last,
                    size: m,
                });
            }
        } else {
            return Ok(self.clone());
        }
        if sorted.len() == m {
            return Ok(DensityOperator::maximally_mixed(m));
        }
        let keep: Vec<usize> = (0..m).filter(|p| !sorted.contains(p)).collect();
        let kept = self.reduced_to(&keep)?;
        // Reassemble: kept state on `keep`, I/2^|subset| on `subset`.
        let dim = 1usize << m;
        let mut out = ComplexMatrix::zeros(dim);
        let norm = 1.0 / (1u64 << sorted.len()) as f64;
        for r in 0..dim {
            for c in 0..dim {
                let r_sub = local_pattern(r, &sorted, m);
                let c_sub = local_pattern(c, &sorted, m);
                if r_sub != c_sub {
                    continue;
                }
                let r_keep = local_pattern(r, &keep, m);
                let c_keep = local_pattern(c, &keep, m);
                out.set(
                    r,
                    c,
                    kept.matrix.get(r_keep, c_keep) * Complex64::new(norm, 0.0),
                );
            }
        }
        Ok(DensityOperator::trusted(m, out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::pauli::{pauli_matrix, PauliString};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn bell() -> DensityOperator {
        let s = 1.0 / 2f64.sqrt();
        DensityOperator::pure(
            2,
            &[
                Complex64::new(s, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(s, 0.0),
            ],
            &tol(),
        )
        .unwrap()
    }

    #[test]
    fn constructor_rejects_invalid_states() {
        // Trace 2.
        let m = ComplexMatrix::identity(2);
        assert!(matches!(
            DensityOperator::new(1, m, &tol()),
            Err(Error::BadTrace { .. })
        ));
        // Hermitian, trace 1, but indefinite: diag(2, -1).
        let mut ind = ComplexMatrix::zeros(2);
        ind.set(0, 0, Complex64::new(2.0, 0.0));
        ind.set(1, 1, Complex64::new(-1.0, 0.0));
        assert!(matches!(
            DensityOperator::new(1, ind, &tol()),
            Err(Error::NotPositive { .. })
        ));
        // Non-Hermitian.
        let mut nh = ComplexMatrix::zeros(2);
        nh.set(0, 0, Complex64::new(1.0, 0.0));
        nh.set(0, 1, Complex64::new(0.5, 0.0));
        assert!(matches!(
            DensityOperator::new(1, nh, &tol()),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn bloch_states_have_unit_trace_and_right_expectations() {
        let v = [1.0 / 2f64.sqrt(), 0.0, 1.0 / 2f64.sqrt()];
        let rho = DensityOperator::from_bloch(v).unwrap();
        let x = pauli_matrix(&PauliString::parse("X").unwrap());
        let z = pauli_matrix(&PauliString::parse("Z").unwrap());
        assert!((rho.expectation(&x).unwrap() - v[0]).abs() < 1e-14);
        assert!((rho.expectation(&z).unwrap() - v[2]).abs() < 1e-14);
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn replace_empty_subset_is_identity() {
        let rho = DensityOperator::basis(2, 0b01).unwrap();
        let out = rho.replace_with_maximally_mixed(&[]).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn replace_first_qubit_of_01() {
        // |01⟩⟨01| with qubit 0 replaced → (I/2) ⊗ |1⟩⟨1|.
        let rho = DensityOperator::basis(2, 0b01).unwrap();
        let out = rho.replace_with_maximally_mixed(&[0]).unwrap();
        let expect =
            DensityOperator::maximally_mixed(1).kron(&DensityOperator::basis(1, 1).unwrap());
        assert!(out.matrix().max_abs_diff(expect.matrix()) < 1e-15);
    }

    #[test]
    fn replace_on_bell_state_mixes_both() {
        // Oracle: partial trace of the Bell state on either side is I/2, so
        // replacing qubit 0 yields I/2 ⊗ I/2 = I/4.
        let out = bell().replace_with_maximally_mixed(&[0]).unwrap();
        let expect = DensityOperator::maximally_mixed(2);
        assert!(out.matrix().max_abs_diff(expect.matrix()) < 1e-14);
    }

    #[test]
    fn reduced_bell_is_maximally_mixed() {
        let rho = bell();
        for q in [0usize, 1] {
            let red = rho.reduced_to(&[q]).unwrap();
            assert!(
                red.matrix()
                    .max_abs_diff(DensityOperator::maximally_mixed(1).matrix())
                    < 1e-14
            );
        }
    }

    #[test]
    fn reduced_product_state_recovers_factor() {
        let a = DensityOperator::from_bloch([0.3, 0.4, 0.5]).unwrap();
        let b = DensityOperator::basis(1, 1).unwrap();
        let joint = a.kron(&b);
        assert!(
            joint
                .reduced_to(&[0])
                .unwrap()
                .matrix()
                .max_abs_diff(a.matrix())
                < 1e-14
        );
        assert!(
            joint
                .reduced_to(&[1])
                .unwrap()
                .matrix()
                .max_abs_diff(b.matrix())
                < 1e-14
        );
    }
}
