//! Pauli words: matrices, the normalized trace inner product, basis
//! decomposition of observables, and eigenprojector pairs.

use super::matrix::ComplexMatrix;
use super::measure::TwoOutcomeMeasurement;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub const ALL: [PauliLetter; 4] = [
        PauliLetter::I,
        PauliLetter::X,
        PauliLetter::Y,
        PauliLetter::Z,
    ];

    pub fn matrix(self) -> ComplexMatrix {
        match self {
            PauliLetter::I => ComplexMatrix::from_real_2x2(1.0, 0.0, 0.0, 1.0),
            PauliLetter::X => ComplexMatrix::from_real_2x2(0.0, 1.0, 1.0, 0.0),
            PauliLetter::Y => ComplexMatrix::from_rows(&[
                &[Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
                &[Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
            ])
            .expect("static 2x2"),
            PauliLetter::Z => ComplexMatrix::from_real_2x2(1.0, 0.0, 0.0, -1.0),
        }
    }

    /// Unitary whose rows are the ⟨+1| and ⟨-1| eigenbras, so that
    /// u P u† = Z for non-identity letters (u = I for the identity).
    pub fn eigenbasis_rotation(self) -> ComplexMatrix {
        let s = 1.0 / 2f64.sqrt();
        match self {
            PauliLetter::I | PauliLetter::Z => ComplexMatrix::identity(2),
            PauliLetter::X => ComplexMatrix::from_real_2x2(s, s, s, -s),
            PauliLetter::Y => ComplexMatrix::from_rows(&[
                &[Complex64::new(s, 0.0), Complex64::new(0.0, -s)],
                &[Complex64::new(s, 0.0), Complex64::new(0.0, s)],
            ])
            .expect("static 2x2"),
        }
    }

    pub fn from_char(ch: char) -> Result<Self> {
        match ch {
            'I' | 'i' => Ok(PauliLetter::I),
            'X' | 'x' => Ok(PauliLetter::X),
            'Y' | 'y' => Ok(PauliLetter::Y),
            'Z' | 'z' => Ok(PauliLetter::Z),
            other => Err(Error::InvalidPauliLetter(other)),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }

    fn digit(self) -> u64 {
        match self {
            PauliLetter::I => 0,
            PauliLetter::X => 1,
            PauliLetter::Y => 2,
            PauliLetter::Z => 3,
        }
    }

    fn from_digit(d: u64) -> Self {
        match d {
            0 => PauliLetter::I,
            1 => PauliLetter::X,
            2 => PauliLetter::Y,
            _ => PauliLetter::Z,
        }
    }
}

/// A word over {I,X,Y,Z}; letter 0 is the leftmost tensor factor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PauliString {
    letters: Vec<PauliLetter>,
}

impl PauliString {
    pub fn new(letters: Vec<PauliLetter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptyPauliString);
        }
        Ok(PauliString { letters })
    }

    pub fn identity(len: usize) -> Result<Self> {
        Self::new(vec![PauliLetter::I; len])
    }

    pub fn parse(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(PauliLetter::from_char)
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction forbids empty words
    }

    pub fn letters(&self) -> &[PauliLetter] {
        &self.letters
    }

    pub fn letter(&self, j: usize) -> PauliLetter {
        self.letters[j]
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&l| l == PauliLetter::I)
    }

    pub fn non_identity_positions(&self) -> Vec<usize> {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, &l)| l != PauliLetter::I)
            .map(|(j, _)| j)
            .collect()
    }

    /// Keep the letters at `positions`, replace everything else with I.
    pub fn restricted_to(&self, positions: &[usize]) -> PauliString {
        let mut letters = vec![PauliLetter::I; self.letters.len()];
        for &p in positions {
            letters[p] = self.letters[p];
        }
        PauliString { letters }
    }

    /// Shrink to the listed positions (ascending), producing a word of that length.
    pub fn project_onto(&self, positions: &[usize]) -> Result<PauliString> {
        let letters: Vec<PauliLetter> = positions.iter().map(|&p| self.letters[p]).collect();
        Self::new(letters)
    }

    /// Numeric id; lexicographic over letters with I<X<Y<Z, letter 0 most
    /// significant. The id order is the canonical enumeration order.
    pub fn id(&self) -> u64 {
        self.letters.iter().fold(0u64, |acc, l| acc * 4 + l.digit())
    }

    pub fn from_id(mut id: u64, len: usize) -> Result<Self> {
        let mut letters = vec![PauliLetter::I; len];
        for j in (0..len).rev() {
            letters[j] = PauliLetter::from_digit(id % 4);
            id /= 4;
        }
        Self::new(letters)
    }

    pub fn all(len: usize) -> impl Iterator<Item = PauliString> {
        (0..(4u64.checked_pow(len as u32).expect("length too large")))
            .map(move |id| PauliString::from_id(id, len).expect("len >= 1"))
    }

    /// Replace the letter at one position, returning a new word.
    pub fn with_letter(&self, j: usize, letter: PauliLetter) -> PauliString {
        let mut letters = self.letters.clone();
        letters[j] = letter;
        PauliString { letters }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

/// Tensor product of the defining 2x2 matrices, in letter order.
pub fn pauli_matrix(s: &PauliString) -> ComplexMatrix {
    let mut out = s.letters()[0].matrix();
    for l in &s.letters()[1..] {
        out = out.kron(&l.matrix());
    }
    out
}

/// ⟨A,B⟩ = Tr(A†B) / 2^k for 2^k-dimensional operators.
pub fn pauli_inner_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    if !a.dim().is_power_of_two() {
        return Err(Error::Invalid(format!(
            "dimension {} is not a power of two",
            a.dim()
        )));
    }
    let tr = a.dagger().trace_product(b)?;
    Ok(tr / Complex64::new(a.dim() as f64, 0.0))
}

/// Coefficients Â(S) = ⟨A,S⟩ of a Hermitian observable in the Pauli basis,
/// in canonical id order over all 4^q words.
pub fn pauli_decompose(a: &ComplexMatrix, herm_tol: f64) -> Result<Vec<(PauliString, f64)>> {
    let dev = a.hermitian_deviation();
    if dev > herm_tol {
        return Err(Error::NotHermitian {
            deviation: dev,
            tolerance: herm_tol,
        });
    }
    let q = a.dim().trailing_zeros() as usize;
    if a.dim() != 1 << q {
        return Err(Error::Invalid(format!(
            "dimension {} is not a power of two",
            a.dim()
        )));
    }
    let mut out = Vec::with_capacity(1 << (2 * q));
    for s in PauliString::all(q) {
        let coeff = pauli_inner_product(&pauli_matrix(&s), a)?;
        out.push((s, coeff.re));
    }
    Ok(out)
}

/// Σ Â(S)·S, the inverse of `pauli_decompose`.
pub fn pauli_reconstruct(coeffs: &[(PauliString, f64)], q: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(1 << q);
    for (s, coeff) in coeffs {
        if *coeff == 0.0 {
            continue;
        }
        out = out
            .add(&pauli_matrix(s).scale_re(*coeff))
            .expect("uniform dims");
    }
    out
}

/// The projector pair S = S⁺ - S⁻. For the all-identity word the
/// decomposition degenerates to (I, 0); the flag records that.
pub fn pauli_eigenprojectors(s: &PauliString) -> TwoOutcomeMeasurement {
    let dim = 1usize << s.len();
    let identity = ComplexMatrix::identity(dim);
    if s.is_identity() {
        return TwoOutcomeMeasurement::trusted(identity, ComplexMatrix::zeros(dim), true);
    }
    let sm = pauli_matrix(s);
    let plus = identity.add(&sm).expect("dims").scale_re(0.5);
    let minus = identity.sub(&sm).expect("dims").scale_re(0.5);
    TwoOutcomeMeasurement::trusted(plus, minus, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_letter_matrices() {
        let z = pauli_matrix(&PauliString::parse("Z").unwrap());
        assert_eq!(z.get(0, 0).re, 1.0);
        assert_eq!(z.get(1, 1).re, -1.0);
        let i = pauli_matrix(&PauliString::parse("I").unwrap());
        assert!(i.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn tensor_matches_direct_kronecker() {
        // Independent oracle: kron computed entry-by-entry from the 2x2 tables.
        let xz = pauli_matrix(&PauliString::parse("XZ").unwrap());
        let x = PauliLetter::X.matrix();
        let z = PauliLetter::Z.matrix();
        for r in 0..4 {
            for c in 0..4 {
                let expect = x.get(r / 2, c / 2) * z.get(r % 2, c % 2);
                assert!((xz.get(r, c) - expect).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn inner_product_identities() {
        let i = pauli_matrix(&PauliString::parse("I").unwrap());
        let x = pauli_matrix(&PauliString::parse("X").unwrap());
        let z = pauli_matrix(&PauliString::parse("Z").unwrap());
        assert!((pauli_inner_product(&i, &i).unwrap().re - 1.0).abs() < 1e-15);
        assert!(pauli_inner_product(&x, &z).unwrap().norm() < 1e-15);
        let xz = pauli_matrix(&PauliString::parse("XZ").unwrap());
        assert!((pauli_inner_product(&xz, &xz).unwrap().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn orthonormal_basis_up_to_three_qubits() {
        for k in 1..=3usize {
            for a in PauliString::all(k) {
                let ma = pauli_matrix(&a);
                for b in PauliString::all(k) {
                    let ip = pauli_inner_product(&ma, &pauli_matrix(&b)).unwrap();
                    let expect = if a == b { 1.0 } else { 0.0 };
                    assert!(
                        (ip.re - expect).abs() < 1e-12 && ip.im.abs() < 1e-12,
                        "⟨{a},{b}⟩ = {ip}"
                    );
                }
            }
        }
    }

    #[test]
    fn decompose_basis_elements() {
        let z = pauli_matrix(&PauliString::parse("Z").unwrap());
        let coeffs = pauli_decompose(&z, 1e-12).unwrap();
        for (s, c) in &coeffs {
            let expect = if s.to_string() == "Z" { 1.0 } else { 0.0 };
            assert!((c - expect).abs() < 1e-13);
        }
        let i2 = ComplexMatrix::identity(4);
        for (s, c) in pauli_decompose(&i2, 1e-12).unwrap() {
            let expect = if s.is_identity() { 1.0 } else { 0.0 };
            assert!((c - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn decompose_diagonal_mixture() {
        // (X+Z)/sqrt(2): coefficients 1/sqrt(2) on X and Z, else 0.
        let s = 1.0 / 2f64.sqrt();
        let obs = PauliLetter::X
            .matrix()
            .scale_re(s)
            .add(&PauliLetter::Z.matrix().scale_re(s))
            .unwrap();
        for (word, c) in pauli_decompose(&obs, 1e-12).unwrap() {
            let expect = match word.to_string().as_str() {
                "X" | "Z" => s,
                _ => 0.0,
            };
            assert!((c - expect).abs() < 1e-13, "{word}: {c}");
        }
    }

    #[test]
    fn decompose_then_reconstruct() {
        let obs = pauli_matrix(&PauliString::parse("XY").unwrap())
            .scale_re(0.3)
            .add(&pauli_matrix(&PauliString::parse("ZI").unwrap()).scale_re(-0.5))
            .unwrap();
        let coeffs = pauli_decompose(&obs, 1e-12).unwrap();
        let back = pauli_reconstruct(&coeffs, 2);
        assert!(back.max_abs_diff(&obs) < 1e-12);
    }

    #[test]
    fn eigenprojectors_closed_form() {
        let z = pauli_eigenprojectors(&PauliString::parse("Z").unwrap());
        assert!((z.plus_op().get(0, 0).re - 1.0).abs() < 1e-15);
        assert!(z.plus_op().get(1, 1).norm() < 1e-15);
        assert!((z.minus_op().get(1, 1).re - 1.0).abs() < 1e-15);

        let x = pauli_eigenprojectors(&PauliString::parse("X").unwrap());
        for r in 0..2 {
            for c in 0..2 {
                assert!((x.plus_op().get(r, c).re - 0.5).abs() < 1e-15);
            }
        }

        let ii = pauli_eigenprojectors(&PauliString::parse("II").unwrap());
        assert!(ii.degenerate());
        assert!(ii.plus_op().max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn eigenprojectors_idempotent_and_reconstruct() {
        for word in ["XZ", "YY", "ZI"] {
            let s = PauliString::parse(word).unwrap();
            let meas = pauli_eigenprojectors(&s);
            let plus = meas.plus_op();
            let minus = meas.minus_op();
            assert!(plus.mul(plus).unwrap().max_abs_diff(plus) < 1e-12);
            assert!(minus.mul(minus).unwrap().max_abs_diff(minus) < 1e-12);
            let diff = plus.sub(minus).unwrap();
            assert!(diff.max_abs_diff(&pauli_matrix(&s)) < 1e-12);
        }
    }

    #[test]
    fn id_round_trip_and_order() {
        let all: Vec<PauliString> = PauliString::all(2).collect();
        assert_eq!(all.len(), 16);
        assert_eq!(all[0].to_string(), "II");
        assert_eq!(all[1].to_string(), "IX");
        assert_eq!(all[4].to_string(), "XI");
        assert_eq!(all[15].to_string(), "ZZ");
        for (k, s) in all.iter().enumerate() {
            assert_eq!(s.id(), k as u64);
            assert_eq!(&PauliString::from_id(s.id(), 2).unwrap(), s);
        }
    }

    #[test]
    fn restriction_keeps_listed_positions() {
        let s = PauliString::parse("XYZ").unwrap();
        assert_eq!(s.restricted_to(&[0, 2]).to_string(), "XIZ");
        assert_eq!(s.project_onto(&[0, 2]).unwrap().to_string(), "XZ");
        assert_eq!(s.non_identity_positions(), vec![0, 1, 2]);
        assert_eq!(s.restricted_to(&[1]).non_identity_positions(), vec![1]);
    }
}
