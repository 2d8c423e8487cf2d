//! Eigenvalues of Hermitian matrices via cyclic complex Jacobi rotations.
//!
//! Only eigenvalues are needed (positivity checks, operator norms), so no
//! eigenvector accumulation. Dimensions here are ≤ 2^max_qubits.

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(a: &ComplexMatrix, herm_tol: f64) -> Result<Vec<f64>> {
    let dev = a.hermitian_deviation();
    if dev > herm_tol {
        return Err(Error::NotHermitian {
            deviation: dev,
            tolerance: herm_tol,
        });
    }
    let d = a.dim();
    let mut m = a.clone();
    // Symmetrize away the sub-tolerance asymmetry so rotations stay exact.
    for i in 0..d {
        for j in 0..d {
            let avg = (m.get(i, j) + m.get(j, i).conj()) * Complex64::new(0.5, 0.0);
            m.set(i, j, avg);
        }
    }

    let scale = m.max_abs().max(1.0);
    let stop = 1e-14 * scale;
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..d {
            for q in (p + 1)..d {
                off = off.max(m.get(p, q).norm());
            }
        }
        if off <= stop {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                rotate(&mut m, p, q);
            }
        }
    }

    let mut eig: Vec<f64> = (0..d).map(|i| m.get(i, i).re).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(eig)
}

pub fn min_eigenvalue(a: &ComplexMatrix, herm_tol: f64) -> Result<f64> {
    Ok(hermitian_eigenvalues(a, herm_tol)?[0])
}

pub fn operator_norm(a: &ComplexMatrix, herm_tol: f64) -> Result<f64> {
    let eig = hermitian_eigenvalues(a, herm_tol)?;
    Ok(eig.iter().map(|v| v.abs()).fold(0.0, f64::max))
}

/// Zero out entry (p,q) with a unitary similarity. Phase-rotates column q so
/// the pivot is real, then applies the real Jacobi rotation.
fn rotate(m: &mut ComplexMatrix, p: usize, q: usize) {
    let d = m.dim();
    let apq = m.get(p, q);
    let mag = apq.norm();
    if mag < 1e-300 {
        return;
    }
    let phase = apq / mag; // e^{iθ}
    let phase_conj = phase.conj();
    // Column q ← column q · e^{-iθ}, row q ← row q · e^{iθ}.
    for k in 0..d {
        let v = m.get(k, q) * phase_conj;
        m.set(k, q, v);
    }
    for k in 0..d {
        let v = m.get(q, k) * phase;
        m.set(q, k, v);
    }

    let app = m.get(p, p).re;
    let aqq = m.get(q, q).re;
    let b = m.get(p, q).re; // = mag
    let theta = (aqq - app) / (2.0 * b);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    m.set(p, p, Complex64::new(app - t * b, 0.0));
    m.set(q, q, Complex64::new(aqq + t * b, 0.0));
    m.set(p, q, Complex64::new(0.0, 0.0));
    m.set(q, p, Complex64::new(0.0, 0.0));

    for k in 0..d {
        if k == p || k == q {
            continue;
        }
        let akp = m.get(k, p);
        let akq = m.get(k, q);
        let new_kp = akp * c - akq * s;
        let new_kq = akp * s + akq * c;
        m.set(k, p, new_kp);
        m.set(k, q, new_kq);
        m.set(p, k, new_kp.conj());
        m.set(q, k, new_kq.conj());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pauli_eigenvalues_are_plus_minus_one() {
        let x = ComplexMatrix::from_real_2x2(0.0, 1.0, 1.0, 0.0);
        let y =
            ComplexMatrix::from_rows(&[&[c(0.0, 0.0), c(0.0, -1.0)], &[c(0.0, 1.0), c(0.0, 0.0)]])
                .unwrap();
        let z = ComplexMatrix::from_real_2x2(1.0, 0.0, 0.0, -1.0);
        for m in [x, y, z] {
            let e = hermitian_eigenvalues(&m, 1e-12).unwrap();
            assert!((e[0] + 1.0).abs() < 1e-12 && (e[1] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hadamard_direction_eigenvalues() {
        // (X+Z)/sqrt(2) has eigenvalues ±1.
        let s = 1.0 / 2f64.sqrt();
        let h = ComplexMatrix::from_real_2x2(s, s, s, -s);
        let e = hermitian_eigenvalues(&h, 1e-12).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-12 && (e[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rank_one_projector_spectrum() {
        // Bell projector on 2 qubits: eigenvalues (0,0,0,1).
        let mut b = ComplexMatrix::zeros(4);
        for &(i, j) in &[(0usize, 0usize), (0, 3), (3, 0), (3, 3)] {
            b.set(i, j, c(0.5, 0.0));
        }
        let e = hermitian_eigenvalues(&b, 1e-12).unwrap();
        assert!(e[0].abs() < 1e-12 && e[1].abs() < 1e-12 && e[2].abs() < 1e-12);
        assert!((e[3] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complex_hermitian_against_closed_form() {
        // [[2, 1-i],[1+i, 3]] has eigenvalues (5 ± sqrt(1+4·2))/2 = (5±3)/2.
        let m =
            ComplexMatrix::from_rows(&[&[c(2.0, 0.0), c(1.0, -1.0)], &[c(1.0, 1.0), c(3.0, 0.0)]])
                .unwrap();
        let e = hermitian_eigenvalues(&m, 1e-12).unwrap();
        assert!((e[0] - 1.0).abs() < 1e-10);
        assert!((e[1] - 4.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_2x2(0.0, 1.0, 0.0, 0.0);
        assert!(hermitian_eigenvalues(&m, 1e-12).is_err());
    }
}
