//! Kraus channels: adversarial corruption of a subset of qubits.

use super::density::DensityOperator;
use super::matrix::ComplexMatrix;
use super::pauli::PauliString;
use super::{embed_on_qubits, extract_from_qubits};
use crate::error::{Error, Result};
use crate::tol::Tolerances;
use num_complex::Complex64;

/// A completely positive trace-preserving map Σ E_k ρ E_k†, together with the
/// set of qubits it may act on. Operators are stored at full register
/// dimension; the constructor checks they are identity off `acted_qubits`.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    num_qubits: usize,
    operators: Vec<ComplexMatrix>,
    acted_qubits: Vec<usize>,
}

impl KrausChannel {
    pub fn new(
        num_qubits: usize,
        operators: Vec<ComplexMatrix>,
        acted_qubits: Vec<usize>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let dim = 1usize << num_qubits;
        let mut acted = acted_qubits;
        acted.sort_unstable();
        acted.dedup();
        if let Some(&last) = acted.last() {
            if last >= num_qubits {
                return Err(Error::IndexOutOfRange {
                    index: last,
                    size: num_qubits,
                });
            }
        }
        if operators.is_empty() {
            return Err(Error::Invalid(
                "channel needs at least one Kraus operator".into(),
            ));
        }
        // Completeness: Σ E†E = I.
        let mut sum = ComplexMatrix::zeros(dim);
        for op in &operators {
            if op.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: op.dim(),
                });
            }
            sum = sum.add(&op.dagger().mul(op)?)?;
        }
        let dev = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if dev > tol.sum {
            return Err(Error::InvalidChannel { deviation: dev });
        }
        // Tensor-factor check: each operator must be identity off the acted set.
        if acted.len() < num_qubits {
            for op in &operators {
                let local = extract_from_qubits(op, &acted, num_qubits)?;
                let rebuilt = embed_on_qubits(&local, &acted, num_qubits)?;
                let dev = rebuilt.max_abs_diff(op);
                if dev > tol.sum.max(1e-9) {
                    return Err(Error::Invalid(format!(
                        "Kraus operator acts outside its declared qubits (deviation {dev:.3e})"
                    )));
                }
            }
        }
        Ok(KrausChannel {
            num_qubits,
            operators,
            acted_qubits: acted,
        })
    }

    /// Build from operators on the acted qubits only, embedding with identity
    /// elsewhere. The invariant holds by construction.
    pub fn from_local(
        num_qubits: usize,
        local_ops: Vec<ComplexMatrix>,
        acted_qubits: Vec<usize>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let mut acted = acted_qubits;
        acted.sort_unstable();
        acted.dedup();
        let operators = local_ops
            .into_iter()
            .map(|op| embed_on_qubits(&op, &acted, num_qubits))
            .collect::<Result<Vec<_>>>()?;
        Self::new(num_qubits, operators, acted, tol)
    }

    pub fn identity(num_qubits: usize) -> Self {
        KrausChannel {
            num_qubits,
            operators: vec![ComplexMatrix::identity(1 << num_qubits)],
            acted_qubits: Vec::new(),
        }
    }

    /// Unitary Pauli error: ρ ↦ P ρ P†.
    pub fn pauli_error(word: &PauliString, tol: &Tolerances) -> Result<Self> {
        let m = word.len();
        let acted = word.non_identity_positions();
        if acted.is_empty() {
            return Ok(Self::identity(m));
        }
        let local = super::pauli::pauli_matrix(&word.project_onto(&acted)?);
        Self::from_local(m, vec![local], acted, tol)
    }

    /// Replace one qubit with a fixed single-qubit state.
    pub fn replace_qubit(
        num_qubits: usize,
        qubit: usize,
        state: &DensityOperator,
        tol: &Tolerances,
    ) -> Result<Self> {
        if state.num_qubits() != 1 {
            return Err(Error::Invalid(
                "replacement state must be a single qubit".into(),
            ));
        }
        // Kraus set {√λ_v |v⟩⟨b|}: here the six Pauli eigenstates and I/2 are
        // the only inputs, so a 2-term spectral split suffices.
        let mat = state.matrix();
        // Spectral decomposition of a 2x2 Hermitian PSD matrix, closed form.
        let a = mat.get(0, 0).re;
        let d = mat.get(1, 1).re;
        let b = mat.get(0, 1);
        let tr = a + d;
        let det = a * d - b.norm_sqr();
        let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
        let l1 = tr / 2.0 + disc;
        let l2 = (tr / 2.0 - disc).max(0.0);
        let mut locals = Vec::new();
        for (lambda, vec) in eigvecs_2x2(a, d, b, l1, l2) {
            if lambda < 1e-15 {
                continue;
            }
            let amp = lambda.sqrt();
            for basis in 0..2usize {
                let mut op = ComplexMatrix::zeros(2);
                op.set(0, basis, vec[0] * Complex64::new(amp, 0.0));
                op.set(1, basis, vec[1] * Complex64::new(amp, 0.0));
                locals.push(op);
            }
        }
        Self::from_local(num_qubits, locals, vec![qubit], tol)
    }

    /// Sequential composition: apply `self`, then `later`.
    pub fn then(&self, later: &KrausChannel, tol: &Tolerances) -> Result<Self> {
        if self.num_qubits != later.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                actual: later.num_qubits,
            });
        }
        let mut operators = Vec::with_capacity(self.operators.len() * later.operators.len());
        for e2 in &later.operators {
            for e1 in &self.operators {
                operators.push(e2.mul(e1)?);
            }
        }
        let mut acted: Vec<usize> = self
            .acted_qubits
            .iter()
            .chain(later.acted_qubits.iter())
            .copied()
            .collect();
        acted.sort_unstable();
        acted.dedup();
        Self::new(self.num_qubits, operators, acted, tol)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn acted_qubits(&self) -> &[usize] {
        &self.acted_qubits
    }

    /// 𝓔(ρ) = Σ E ρ E†.
    pub fn apply(&self, rho: &DensityOperator, tol: &Tolerances) -> Result<DensityOperator> {
        if rho.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                actual: rho.num_qubits(),
            });
        }
        let dim = rho.dim();
        let mut out = ComplexMatrix::zeros(dim);
        for op in &self.operators {
            let term = op.mul(rho.matrix())?.mul(&op.dagger())?;
            out = out.add(&term)?;
        }
        let tr = out.trace();
        if (tr.re - 1.0).abs() > tol.trace || tr.im.abs() > tol.trace {
            return Err(Error::BadTrace {
                trace: tr.re,
                tolerance: tol.trace,
            });
        }
        Ok(DensityOperator::trusted(self.num_qubits, out))
    }
}

/// Apply a channel to a state; thin named wrapper over `KrausChannel::apply`.
pub fn apply_channel(
    rho: &DensityOperator,
    channel: &KrausChannel,
    tol: &Tolerances,
) -> Result<DensityOperator> {
    channel.apply(rho, tol)
}

/// Eigenpairs of a 2x2 Hermitian matrix [[a, b],[b̄, d]] given its eigenvalues.
fn eigvecs_2x2(a: f64, d: f64, b: Complex64, l1: f64, l2: f64) -> Vec<(f64, [Complex64; 2])> {
    if b.norm() < 1e-15 {
        // Already diagonal.
        return vec![
            (a, [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]),
            (d, [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]),
        ];
    }
    let mut out = Vec::new();
    for lambda in [l1, l2] {
        // (a - λ)v0 + b v1 = 0  →  v = (b, λ - a), normalized.
        let v0 = b;
        let v1 = Complex64::new(lambda - a, 0.0);
        let norm = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
        out.push((lambda, [v0 / norm, v1 / norm]));
    }
    let _ = d;
    out
}
