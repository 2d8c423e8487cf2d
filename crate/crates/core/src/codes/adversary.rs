//! Adversarial corruption search.
//!
//! Classical adversaries are error patterns with a bounded number of flips,
//! searched exhaustively when the pattern count fits the budget. Quantum
//! adversaries come from a declared restricted class: Pauli errors on a
//! bounded support, or per-qubit replacement with a Pauli eigenstate or the
//! maximally mixed state.

use super::bits::Word;
use super::dist::InputDistribution;
use super::eval::{success_classical, success_quantum, ClassicalCodeRef};
use super::types::{CodeInstance, ErrorPattern};
use crate::error::{Error, Result};
use crate::quantum::{DensityOperator, KrausChannel, PauliLetter, PauliString};
use crate::tol::Tolerances;
use serde::{Deserialize, Serialize};
use std::fmt;

/// What a replaced qubit is replaced with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Replacement {
    MaximallyMixed,
    /// ±1 eigenstate of a non-identity Pauli letter.
    Eigenstate(PauliLetter, i8),
}

impl Replacement {
    pub const ALL: [Replacement; 7] = [
        Replacement::MaximallyMixed,
        Replacement::Eigenstate(PauliLetter::X, 1),
        Replacement::Eigenstate(PauliLetter::X, -1),
        Replacement::Eigenstate(PauliLetter::Y, 1),
        Replacement::Eigenstate(PauliLetter::Y, -1),
        Replacement::Eigenstate(PauliLetter::Z, 1),
        Replacement::Eigenstate(PauliLetter::Z, -1),
    ];

    pub fn state(&self) -> DensityOperator {
        match self {
            Replacement::MaximallyMixed => DensityOperator::maximally_mixed(1),
            Replacement::Eigenstate(letter, sign) => {
                let s = f64::from(*sign);
                let v = match letter {
                    PauliLetter::X => [s, 0.0, 0.0],
                    PauliLetter::Y => [0.0, s, 0.0],
                    _ => [0.0, 0.0, s],
                };
                DensityOperator::from_bloch(v).expect("unit Bloch vector")
            }
        }
    }
}

impl fmt::Display for Replacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Replacement::MaximallyMixed => write!(f, "I/2"),
            Replacement::Eigenstate(l, s) => {
                write!(f, "{}{}", if *s > 0 { '+' } else { '-' }, l.to_char())
            }
        }
    }
}

/// One corruption from the admissible class, with a displayable description.
#[derive(Debug, Clone)]
pub enum Corruption {
    None,
    Flips(ErrorPattern),
    PauliError(PauliString),
    Replace(Vec<(usize, Replacement)>),
}

impl Corruption {
    /// Number of positions touched.
    pub fn weight(&self) -> usize {
        match self {
            Corruption::None => 0,
            Corruption::Flips(e) => e.weight() as usize,
            Corruption::PauliError(s) => s.non_identity_positions().len(),
            Corruption::Replace(r) => r.len(),
        }
    }

    pub fn channel(&self, m: usize, tol: &Tolerances) -> Result<KrausChannel> {
        match self {
            Corruption::None => Ok(KrausChannel::identity(m)),
            Corruption::Flips(e) => {
                let letters = (0..m)
                    .map(|j| {
                        if e.flips().sign(j) < 0 {
                            PauliLetter::X
                        } else {
                            PauliLetter::I
                        }
                    })
                    .collect();
                KrausChannel::pauli_error(&PauliString::new(letters)?, tol)
            }
            Corruption::PauliError(s) => KrausChannel::pauli_error(s, tol),
            Corruption::Replace(assignments) => {
                let mut ch = KrausChannel::identity(m);
                for (qubit, replacement) in assignments {
                    let step = KrausChannel::replace_qubit(m, *qubit, &replacement.state(), tol)?;
                    ch = ch.then(&step, tol)?;
                }
                Ok(ch)
            }
        }
    }
}

impl fmt::Display for Corruption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Corruption::None => write!(f, "none"),
            Corruption::Flips(e) => write!(f, "flips {e}"),
            Corruption::PauliError(s) => write!(f, "pauli {s}"),
            Corruption::Replace(r) => {
                write!(f, "replace ")?;
                for (k, (qubit, rep)) in r.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}←{rep}", qubit + 1)?;
                }
                Ok(())
            }
        }
    }
}

/// All error patterns with at most `max_flips` flips, ordered by weight then
/// bit value. Includes the identity pattern.
pub fn error_patterns(m: usize, max_flips: usize) -> Vec<ErrorPattern> {
    let mut out: Vec<ErrorPattern> = Word::all(m)
        .filter(|w| (w.minus_count() as usize) <= max_flips)
        .map(ErrorPattern::new)
        .collect();
    out.sort_by_key(|e| (e.weight(), e.flips().index()));
    out
}

pub fn count_error_patterns(m: usize, max_flips: usize) -> u128 {
    (0..=max_flips.min(m)).map(|w| binomial(m, w)).sum()
}

fn binomial(n: usize, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for t in 0..k {
        acc = acc * (n - t) as u128 / (t + 1) as u128;
    }
    acc
}

/// Every corruption in the restricted quantum adversary class with support
/// of at most `max_qubits` qubits. Includes the identity corruption.
pub fn restricted_corruptions(m: usize, max_qubits: usize) -> Vec<Corruption> {
    let mut out = vec![Corruption::None];
    let supports = supports_up_to(m, max_qubits);
    for support in &supports {
        // (a) Pauli words over {X,Y,Z} with exactly this support.
        let k = support.len();
        let letters = [PauliLetter::X, PauliLetter::Y, PauliLetter::Z];
        for mut code in 0..3usize.pow(k as u32) {
            let mut word = vec![PauliLetter::I; m];
            for &q in support {
                word[q] = letters[code % 3];
                code /= 3;
            }
            out.push(Corruption::PauliError(
                PauliString::new(word).expect("m >= 1"),
            ));
        }
        // (b) Per-qubit replacements from the 7 canonical states.
        for mut code in 0..Replacement::ALL.len().pow(k as u32) {
            let mut assignment = Vec::with_capacity(k);
            for &q in support {
                assignment.push((q, Replacement::ALL[code % Replacement::ALL.len()]));
                code /= Replacement::ALL.len();
            }
            out.push(Corruption::Replace(assignment));
        }
    }
    out
}

pub fn count_restricted_corruptions(m: usize, max_qubits: usize) -> u128 {
    let mut total: u128 = 1;
    for k in 1..=max_qubits.min(m) {
        total += binomial(m, k) * (3u128.pow(k as u32) + 7u128.pow(k as u32));
    }
    total
}

fn supports_up_to(m: usize, max_qubits: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << m) {
        let k = mask.count_ones() as usize;
        if k <= max_qubits {
            out.push((0..m).filter(|&j| (mask >> j) & 1 == 1).collect());
        }
    }
    out.sort_by_key(|s: &Vec<usize>| (s.len(), s.clone()));
    out
}

pub struct WorstCase {
    pub corruption: Corruption,
    pub success: f64,
    /// False when the exhaustive budget was exceeded and a greedy descent
    /// was used instead.
    pub optimal: bool,
}

/// Admissible corruption minimizing the decoder's success for index `i`,
/// with budget ⌊δm⌋. Exhaustive when the class fits the enumeration budget,
/// greedy per-position descent (flagged non-optimal) otherwise.
pub fn worst_case_error(
    instance: &CodeInstance,
    i: usize,
    delta: f64,
    mu: &InputDistribution,
    tol: &Tolerances,
) -> Result<WorstCase> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::Invalid(format!("δ = {delta} must lie in [0, 1)")));
    }
    let m = instance.m();
    let budget = (delta * m as f64).floor() as usize;
    match instance {
        CodeInstance::Classical { code, decoder } => {
            worst_classical(ClassicalCodeRef::Plain(code), decoder, i, budget, mu, tol)
        }
        CodeInstance::Randomized { code, decoder } => worst_classical(
            ClassicalCodeRef::Randomized(code),
            decoder,
            i,
            budget,
            mu,
            tol,
        ),
        CodeInstance::Quantum { code, decoder } => {
            let count = count_restricted_corruptions(m, budget);
            let per_eval = (1u128 << code.n()) * decoder.plan().entries(i).len().max(1) as u128;
            if count * per_eval <= tol.enumeration_budget {
                let mut best: Option<WorstCase> = None;
                for corruption in restricted_corruptions(m, budget) {
                    let ch = corruption.channel(m, tol)?;
                    let s = success_quantum(code, decoder, i, mu, Some(&ch), tol)?;
                    if best.as_ref().is_none_or(|b| s < b.success) {
                        best = Some(WorstCase {
                            corruption,
                            success: s,
                            optimal: true,
                        });
                    }
                }
                Ok(best.expect("class includes the identity"))
            } else {
                // Greedy: replace one qubit at a time with the locally worst
                // canonical state.
                let mut chosen: Vec<(usize, Replacement)> = Vec::new();
                let mut current = success_quantum(code, decoder, i, mu, None, tol)?;
                for _ in 0..budget {
                    let mut best_step: Option<((usize, Replacement), f64)> = None;
                    for qubit in 0..m {
                        if chosen.iter().any(|(q, _)| *q == qubit) {
                            continue;
                        }
                        for rep in Replacement::ALL {
                            let mut trial = chosen.clone();
                            trial.push((qubit, rep));
                            let ch = Corruption::Replace(trial).channel(m, tol)?;
                            let s = success_quantum(code, decoder, i, mu, Some(&ch), tol)?;
                            if best_step.as_ref().is_none_or(|(_, b)| s < *b) {
                                best_step = Some(((qubit, rep), s));
                            }
                        }
                    }
                    if let Some((step, s)) = best_step {
                        if s < current {
                            chosen.push(step);
                            current = s;
                        } else {
                            break;
                        }
                    }
                }
                Ok(WorstCase {
                    corruption: if chosen.is_empty() {
                        Corruption::None
                    } else {
                        Corruption::Replace(chosen)
                    },
                    success: current,
                    optimal: false,
                })
            }
        }
    }
}

fn worst_classical(
    code: ClassicalCodeRef<'_>,
    decoder: &super::decoder::ClassicalDecoder,
    i: usize,
    budget: usize,
    mu: &InputDistribution,
    tol: &Tolerances,
) -> Result<WorstCase> {
    let m = code.m();
    let count = count_error_patterns(m, budget);
    let per_eval = (1u128 << code.n()) * decoder.plan().entries(i).len().max(1) as u128;
    if count * per_eval <= tol.enumeration_budget {
        let mut best: Option<(ErrorPattern, f64)> = None;
        for pattern in error_patterns(m, budget) {
            let s = success_classical(code, decoder, i, mu, Some(&pattern))?;
            if best.as_ref().is_none_or(|(_, b)| s < *b) {
                best = Some((pattern, s));
            }
        }
        let (pattern, success) = best.expect("identity pattern always present");
        Ok(WorstCase {
            corruption: if pattern.weight() == 0 {
                Corruption::None
            } else {
                Corruption::Flips(pattern)
            },
            success,
            optimal: true,
        })
    } else {
        let mut pattern = ErrorPattern::identity(m);
        let mut current = success_classical(code, decoder, i, mu, None)?;
        for _ in 0..budget {
            let mut best_step: Option<(usize, f64)> = None;
            for j in 0..m {
                if pattern.flips().sign(j) < 0 {
                    continue;
                }
                let trial = ErrorPattern::new(pattern.flips().with_sign(j, -1));
                let s = success_classical(code, decoder, i, mu, Some(&trial))?;
                if best_step.as_ref().is_none_or(|(_, b)| s < *b) {
                    best_step = Some((j, s));
                }
            }
            if let Some((j, s)) = best_step {
                if s < current {
                    pattern = ErrorPattern::new(pattern.flips().with_sign(j, -1));
                    current = s;
                } else {
                    break;
                }
            }
        }
        Ok(WorstCase {
            corruption: if pattern.weight() == 0 {
                Corruption::None
            } else {
                Corruption::Flips(pattern)
            },
            success: current,
            optimal: false,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::decoder::{ClassicalDecoder, OutputTable, QueryPlan, QuerySet};
    use crate::codes::generators::{basis_code, hadamard_code};
    use crate::codes::types::ClassicalCode;
    use std::collections::BTreeMap;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn zero_delta_is_identity() {
        let (code, decoder) = hadamard_code(2, &tol()).unwrap();
        let inst = CodeInstance::Classical { code, decoder };
        let mu = InputDistribution::uniform(2);
        let w = worst_case_error(&inst, 0, 0.0, &mu, &tol()).unwrap();
        assert!(matches!(w.corruption, Corruption::None));
        assert!((w.success - 1.0).abs() < 1e-12);
        assert!(w.optimal);
    }

    #[test]
    fn repetition_code_survives_one_flip() {
        // 1 bit repeated 3 times, majority decoder reading all three.
        let table: Vec<Word> = Word::all(1)
            .map(|x| Word::from_signs(&[x.sign(0); 3]))
            .collect();
        let code = ClassicalCode::new(1, 3, table).unwrap();
        let set = QuerySet::from_positions(&[0, 1, 2]);
        let plan = QueryPlan::new(1, 3, 3, vec![vec![(1.0, set)]], &tol()).unwrap();
        let majority = OutputTable::new(
            3,
            (0..8)
                .map(|idx| {
                    let w = Word::from_index(idx, 3);
                    if w.minus_count() >= 2 {
                        -1
                    } else {
                        1
                    }
                })
                .collect(),
        )
        .unwrap();
        let mut outputs = BTreeMap::new();
        outputs.insert((0usize, set), majority);
        let decoder = ClassicalDecoder::new(plan, outputs).unwrap();
        let inst = CodeInstance::Classical { code, decoder };
        let mu = InputDistribution::uniform(1);
        let w = worst_case_error(&inst, 0, 1.0 / 3.0, &mu, &tol()).unwrap();
        assert!((w.success - 1.0).abs() < 1e-12, "success {}", w.success);
        assert!(w.optimal);
    }

    #[test]
    fn hadamard_single_flip_worst_case() {
        // Frozen from the enumeration oracle: any single flip yields 1/2.
        let (code, decoder) = hadamard_code(2, &tol()).unwrap();
        let inst = CodeInstance::Classical { code, decoder };
        let mu = InputDistribution::uniform(2);
        let w = worst_case_error(&inst, 0, 0.25, &mu, &tol()).unwrap();
        assert!((w.success - 0.5).abs() < 1e-12);
        assert!(matches!(w.corruption, Corruption::Flips(e) if e.weight() == 1));
        assert!(w.optimal);
    }

    #[test]
    fn flip_kills_basis_code_bit() {
        let (code, decoder) = basis_code(2, &tol()).unwrap();
        let inst = CodeInstance::Quantum { code, decoder };
        let mu = InputDistribution::uniform(2);
        let w = worst_case_error(&inst, 0, 0.5, &mu, &tol()).unwrap();
        // The worst single-qubit corruption is an X on the queried qubit,
        // which deterministically inverts the Z outcome. Replacement with a
        // fixed state only reaches success 1/2.
        assert!(w.success.abs() < 1e-12, "success {}", w.success);
        assert_eq!(w.corruption.weight(), 1);
        assert!(w.optimal);
        let replaced = Corruption::Replace(vec![(0, Replacement::MaximallyMixed)])
            .channel(2, &tol())
            .unwrap();
        let coin = crate::codes::eval::success_quantum(
            match &inst {
                CodeInstance::Quantum { code, .. } => code,
                _ => unreachable!(),
            },
            match &inst {
                CodeInstance::Quantum { decoder, .. } => decoder,
                _ => unreachable!(),
            },
            0,
            &mu,
            Some(&replaced),
            &tol(),
        )
        .unwrap();
        assert!((coin - 0.5).abs() < 1e-12);
    }

    #[test]
    fn corruption_class_counts() {
        assert_eq!(count_error_patterns(4, 1), 5);
        assert_eq!(count_error_patterns(4, 2), 11);
        // m=2, budget 1: identity + 2 supports × (3 paulis + 7 replacements)
        assert_eq!(count_restricted_corruptions(2, 1), 21);
        assert_eq!(restricted_corruptions(2, 1).len(), 21);
    }

    #[test]
    fn classical_error_model_embeds_in_pauli_class() {
        // An X string on the flipped support acts on basis states exactly
        // like the classical pattern.
        let (code, _) = basis_code(2, &tol()).unwrap();
        let x = Word::parse("+-").unwrap();
        let corr = Corruption::PauliError(PauliString::parse("XI").unwrap());
        let ch = corr.channel(2, &tol()).unwrap();
        let out = ch.apply(code.encode(&x), &tol()).unwrap();
        let flipped = Word::parse("--").unwrap();
        let expect = DensityOperator::basis(2, flipped.index()).unwrap();
        assert!(out.matrix().max_abs_diff(expect.matrix()) < 1e-13);
    }
}
