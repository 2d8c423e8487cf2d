//! Exact success probabilities and biases, by full enumeration.

use super::bits::Word;
use super::decoder::{ClassicalDecoder, QuantumDecoder, QueryPlan};
use super::dist::InputDistribution;
use super::types::{ClassicalCode, ErrorPattern, QuantumCode, RandomizedCode};
use crate::error::{Error, Result};
use crate::quantum::KrausChannel;
use crate::tol::Tolerances;

/// Either code species the classical evaluator accepts.
#[derive(Clone, Copy)]
pub enum ClassicalCodeRef<'a> {
    Plain(&'a ClassicalCode),
    Randomized(&'a RandomizedCode),
}

impl<'a> ClassicalCodeRef<'a> {
    pub fn n(&self) -> usize {
        match self {
            ClassicalCodeRef::Plain(c) => c.n(),
            ClassicalCodeRef::Randomized(c) => c.n(),
        }
    }

    pub fn m(&self) -> usize {
        match self {
            ClassicalCodeRef::Plain(c) => c.m(),
            ClassicalCodeRef::Randomized(c) => c.m(),
        }
    }

    fn row(&self, x: &Word) -> Vec<(f64, Word)> {
        match self {
            ClassicalCodeRef::Plain(c) => vec![(1.0, c.encode(x))],
            ClassicalCodeRef::Randomized(c) => c.row(x).to_vec(),
        }
    }
}

/// Pr[decoder outputs x_i], averaged over μ, the code's own randomness, and
/// the decoder's query choice, with an optional error pattern applied to the
/// received word.
pub fn success_classical(
    code: ClassicalCodeRef<'_>,
    dec: &ClassicalDecoder,
    i: usize,
    mu: &InputDistribution,
    err: Option<&ErrorPattern>,
) -> Result<f64> {
    let n = code.n();
    let m = code.m();
    if mu.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: mu.n(),
        });
    }
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, size: n });
    }
    if let Some(e) = err {
        if e.m() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                actual: e.m(),
            });
        }
        if e.weight() as usize > m {
            return Err(Error::Invalid("error weight exceeds code length".into()));
        }
    }
    let mut acc = 0.0;
    for (x, weight) in mu.support() {
        let target = f64::from(x.sign(i));
        for (p_row, codeword) in code.row(&x) {
            if p_row == 0.0 {
                continue;
            }
            let received = match err {
                Some(e) => e.apply(&codeword),
                None => codeword,
            };
            let expect = dec.expectation_on_word(i, &received);
            acc += weight * p_row * (1.0 + target * expect) / 2.0;
        }
    }
    Ok(acc)
}

/// Bias of the same prediction: 2·(success − 1/2).
pub fn bias_classical(
    code: ClassicalCodeRef<'_>,
    dec: &ClassicalDecoder,
    i: usize,
    mu: &InputDistribution,
    err: Option<&ErrorPattern>,
) -> Result<f64> {
    Ok(2.0 * (success_classical(code, dec, i, mu, err)? - 0.5))
}

/// Expectation of a measurement observable on the reduced state at the
/// listed positions. An empty query set means "measure nothing": the
/// observable is a 1x1 scalar (a possibly biased coin) independent of ρ.
pub fn observable_expectation(
    state: &crate::quantum::DensityOperator,
    positions: &[usize],
    obs: &crate::quantum::ComplexMatrix,
) -> Result<f64> {
    if positions.is_empty() {
        if obs.dim() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                actual: obs.dim(),
            });
        }
        return Ok(obs.get(0, 0).re);
    }
    state.reduced_to(positions)?.expectation(obs)
}

/// Pr[quantum decoder outputs x_i] on (possibly corrupted) codewords,
/// averaged over μ and the query choice.
pub fn success_quantum(
    code: &QuantumCode,
    dec: &QuantumDecoder,
    i: usize,
    mu: &InputDistribution,
    channel: Option<&KrausChannel>,
    tol: &Tolerances,
) -> Result<f64> {
    let n = code.n();
    if mu.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: mu.n(),
        });
    }
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, size: n });
    }
    let mut acc = 0.0;
    for (x, weight) in mu.support() {
        let target = f64::from(x.sign(i));
        let state = match channel {
            Some(ch) => ch.apply(code.encode(&x), tol)?,
            None => code.encode(&x).clone(),
        };
        for (p_r, set) in dec.plan().entries(i) {
            if *p_r == 0.0 {
                continue;
            }
            let meas = dec
                .measurement(i, set)
                .ok_or_else(|| Error::Invalid(format!("missing measurement for set {set}")))?;
            let expect = observable_expectation(&state, &set.positions(), &meas.observable())?;
            acc += weight * p_r * (1.0 + target * expect) / 2.0;
        }
    }
    Ok(acc)
}

/// Per-position query probabilities of a plan for one index.
pub fn query_marginal(plan: &QueryPlan, i: usize) -> Vec<f64> {
    plan.marginal(i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::decoder::{OutputTable, QuerySet};
    use crate::codes::generators::{basis_code, hadamard_code};
    use std::collections::BTreeMap;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn hadamard_perfect_decoding() {
        // Oracle: exhaustive enumeration is the definition here; the parity
        // identity makes every (x, i, S) correct.
        let (code, dec) = hadamard_code(2, &tol()).unwrap();
        let mu = InputDistribution::uniform(2);
        for i in 0..2 {
            let s = success_classical(ClassicalCodeRef::Plain(&code), &dec, i, &mu, None).unwrap();
            assert!((s - 1.0).abs() < 1e-12, "index {i}: {s}");
        }
    }

    #[test]
    fn coin_decoder_is_half() {
        let (code, dec) = hadamard_code(2, &tol()).unwrap();
        let mut outputs = BTreeMap::new();
        for i in 0..2 {
            for (_, set) in dec.plan().entries(i) {
                outputs.insert((i, *set), OutputTable::coin(set.size()));
            }
        }
        let coin_dec = ClassicalDecoder::new(dec.plan().clone(), outputs).unwrap();
        let mu = InputDistribution::uniform(2);
        let s = success_classical(ClassicalCodeRef::Plain(&code), &coin_dec, 0, &mu, None).unwrap();
        assert!((s - 0.5).abs() < 1e-12);
    }

    #[test]
    fn hadamard_single_flip_success() {
        // Oracle: enumeration over the 2 query pairs x error positions.
        // The decoder queries any fixed position with probability 2/m = 1/2,
        // and one flipped queried bit always flips the parity, so every
        // single-bit error yields success exactly 1/2.
        let (code, dec) = hadamard_code(2, &tol()).unwrap();
        let mu = InputDistribution::uniform(2);
        for pos in 0..4 {
            let err = ErrorPattern::from_positions(4, &[pos]);
            for i in 0..2 {
                let s = success_classical(ClassicalCodeRef::Plain(&code), &dec, i, &mu, Some(&err))
                    .unwrap();
                assert!((s - 0.5).abs() < 1e-12, "flip {pos}, index {i}: {s}");
            }
        }
        // At n=3 the same enumeration gives 1 - 2/8 = 0.75 under any single flip.
        let (code3, dec3) = hadamard_code(3, &tol()).unwrap();
        let mu3 = InputDistribution::uniform(3);
        for pos in 0..8 {
            let err = ErrorPattern::from_positions(8, &[pos]);
            for i in 0..3 {
                let s =
                    success_classical(ClassicalCodeRef::Plain(&code3), &dec3, i, &mu3, Some(&err))
                        .unwrap();
                assert!((s - 0.75).abs() < 1e-12, "flip {pos}, index {i}: {s}");
            }
        }
    }

    #[test]
    fn basis_code_decodes_perfectly() {
        let (code, dec) = basis_code(2, &tol()).unwrap();
        let mu = InputDistribution::uniform(2);
        for i in 0..2 {
            let s = success_quantum(&code, &dec, i, &mu, None, &tol()).unwrap();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn quantum_success_respects_point_mass() {
        let (code, dec) = basis_code(2, &tol()).unwrap();
        let x = Word::parse("-+").unwrap();
        let mu = InputDistribution::point_mass(x);
        let s = success_quantum(&code, &dec, 0, &mu, None, &tol()).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn total_probability_over_plan() {
        // success = Σ_r plan(r)·Pr[f_{i,r} correct]; cross-check by summing
        // per-set contributions directly on the Hadamard instance.
        let (code, dec) = hadamard_code(2, &tol()).unwrap();
        let mu = InputDistribution::uniform(2);
        let i = 1usize;
        let mut manual = 0.0;
        for (p, set) in dec.plan().entries(i) {
            let table = dec.output(i, set).unwrap();
            let mut per_set = 0.0;
            for (x, w) in mu.support() {
                let y = code.encode(&x).restrict(&set.positions());
                let out = table.eval(&y);
                per_set += w * (1.0 + f64::from(x.sign(i)) * f64::from(out)) / 2.0;
            }
            manual += p * per_set;
        }
        let s = success_classical(ClassicalCodeRef::Plain(&code), &dec, i, &mu, None).unwrap();
        assert!((manual - s).abs() < 1e-12);
    }

    #[test]
    fn error_dimension_checked() {
        let (code, dec) = hadamard_code(2, &tol()).unwrap();
        let mu = InputDistribution::uniform(2);
        let err = ErrorPattern::from_positions(3, &[0]);
        assert!(matches!(
            success_classical(ClassicalCodeRef::Plain(&code), &dec, 0, &mu, Some(&err)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn query_set_wrapper_matches_plan() {
        let (_, dec) = hadamard_code(2, &tol()).unwrap();
        for i in 0..2 {
            let marg = query_marginal(dec.plan(), i);
            for (j, &p) in marg.iter().enumerate() {
                assert!((p - 0.5).abs() < 1e-12, "index {i} position {j}: {p}");
            }
        }
        let _ = QuerySet::empty();
    }
}
