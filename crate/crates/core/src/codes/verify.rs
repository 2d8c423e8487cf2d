//! Claim verification: check every clause of a claimed parameter tuple
//! against a code instance by exhaustive evaluation.

use super::adversary::{count_error_patterns, error_patterns};
use super::adversary::{count_restricted_corruptions, restricted_corruptions, Corruption};
use super::bits::Word;
use super::dist::InputDistribution;
use super::eval::{success_classical, success_quantum, ClassicalCodeRef};
use super::types::{CodeFamily, CodeInstance, CodeParams};
use crate::error::{Error, Result};
use crate::tol::Tolerances;
use serde::Serialize;
use std::fmt;

const SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Clause {
    QueryBudget,
    Smoothness,
    Success,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Clause::QueryBudget => write!(f, "query budget"),
            Clause::Smoothness => write!(f, "query-marginal bound"),
            Clause::Success => write!(f, "success bound"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Witness {
    pub clause: Clause,
    pub index: Option<usize>,
    pub message: Option<Word>,
    pub corruption: Option<Corruption>,
    pub measured: f64,
    pub required: f64,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated", self.clause)?;
        if let Some(i) = self.index {
            write!(f, " at index {}", i + 1)?;
        }
        if let Some(x) = &self.message {
            write!(f, ", x = {x}")?;
        }
        if let Some(c) = &self.corruption {
            write!(f, ", corruption = {c}")?;
        }
        write!(
            f,
            ": measured {:.9}, required {:.9}",
            self.measured, self.required
        )
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub holds: bool,
    pub claim: CodeParams,
    pub witness: Option<Witness>,
    pub success_cases: u64,
    pub corruptions_checked: u64,
}

impl VerifyReport {
    fn ok(claim: CodeParams, success_cases: u64, corruptions_checked: u64) -> Self {
        VerifyReport {
            holds: true,
            claim,
            witness: None,
            success_cases,
            corruptions_checked,
        }
    }

    fn violated(claim: CodeParams, witness: Witness) -> Self {
        VerifyReport {
            holds: false,
            claim,
            witness: Some(witness),
            success_cases: 0,
            corruptions_checked: 0,
        }
    }
}

/// Check every clause of the claimed definition. Violations are reported,
/// not raised; only species mismatch and blown enumeration budgets error.
pub fn verify_params(
    instance: &CodeInstance,
    claim: &CodeParams,
    mu: Option<&InputDistribution>,
    tol: &Tolerances,
) -> Result<VerifyReport> {
    if !instance.kind_matches(claim.kind.family) {
        return Err(Error::KindMismatch {
            claimed: claim.kind.to_string(),
            actual: instance.species().to_string(),
        });
    }
    let n = instance.n();
    let m = instance.m();
    let plan = match instance {
        CodeInstance::Classical { decoder, .. } | CodeInstance::Randomized { decoder, .. } => {
            decoder.plan()
        }
        CodeInstance::Quantum { decoder, .. } => decoder.plan(),
    };

    // Clause: query budget (all kinds except QRAC, which has no q).
    if claim.kind.family != CodeFamily::Qrac {
        let got = plan.max_set_size();
        if got > claim.q {
            return Ok(VerifyReport::violated(
                *claim,
                Witness {
                    clause: Clause::QueryBudget,
                    index: None,
                    message: None,
                    corruption: None,
                    measured: got as f64,
                    required: claim.q as f64,
                },
            ));
        }
    }

    // Clause: smoothness (c/m marginal bound).
    if claim.kind.family.is_smooth() {
        let bound = claim.second / m as f64;
        for i in 0..n {
            for (j, p) in plan.marginal(i).iter().enumerate() {
                if *p > bound + SLACK {
                    return Ok(VerifyReport::violated(
                        *claim,
                        Witness {
                            clause: Clause::Smoothness,
                            index: Some(i),
                            message: None,
                            corruption: Some(Corruption::Flips(
                                super::types::ErrorPattern::from_positions(m, &[j]),
                            )),
                            measured: *p,
                            required: bound,
                        },
                    ));
                }
            }
        }
    }

    // Clause: success, quantified over messages (or μ) and corruptions.
    let uniform;
    let mu_dist = match mu {
        Some(d) => d,
        None => {
            uniform = InputDistribution::uniform(n);
            &uniform
        }
    };
    let message_cases: Vec<InputDistribution> = if claim.kind.mu_average {
        vec![mu_dist.clone()]
    } else {
        Word::all(n).map(InputDistribution::point_mass).collect()
    };

    let corruptions: Vec<Corruption> = if claim.kind.family.second_is_delta() {
        let budget = claim.corruption_budget(m);
        match instance {
            CodeInstance::Quantum { .. } => {
                let count = count_restricted_corruptions(m, budget);
                check_budget(count, n, &message_cases, plan, tol)?;
                restricted_corruptions(m, budget)
            }
            _ => {
                let count = count_error_patterns(m, budget);
                check_budget(count, n, &message_cases, plan, tol)?;
                error_patterns(m, budget)
                    .into_iter()
                    .map(|e| {
                        if e.weight() == 0 {
                            Corruption::None
                        } else {
                            Corruption::Flips(e)
                        }
                    })
                    .collect()
            }
        }
    } else {
        check_budget(1, n, &message_cases, plan, tol)?;
        vec![Corruption::None]
    };

    let threshold = 0.5 + claim.eps;
    let mut success_cases = 0u64;
    let mut corruptions_checked = 0u64;
    for corruption in &corruptions {
        corruptions_checked += 1;
        for i in 0..n {
            for case in &message_cases {
                let s = case_success(instance, i, case, corruption, tol)?;
                success_cases += 1;
                if s < threshold - SLACK {
                    let message = if claim.kind.mu_average {
                        None
                    } else {
                        case.support().next().map(|(x, _)| x)
                    };
                    return Ok(VerifyReport::violated(
                        *claim,
                        Witness {
                            clause: Clause::Success,
                            index: Some(i),
                            message,
                            corruption: match corruption {
                                Corruption::None => None,
                                c => Some(c.clone()),
                            },
                            measured: s,
                            required: threshold,
                        },
                    ));
                }
            }
        }
    }
    Ok(VerifyReport::ok(*claim, success_cases, corruptions_checked))
}

fn case_success(
    instance: &CodeInstance,
    i: usize,
    mu: &InputDistribution,
    corruption: &Corruption,
    tol: &Tolerances,
) -> Result<f64> {
    match instance {
        CodeInstance::Classical { code, decoder } => {
            let err = corruption_as_pattern(corruption)?;
            success_classical(ClassicalCodeRef::Plain(code), decoder, i, mu, err.as_ref())
        }
        CodeInstance::Randomized { code, decoder } => {
            let err = corruption_as_pattern(corruption)?;
            success_classical(
                ClassicalCodeRef::Randomized(code),
                decoder,
                i,
                mu,
                err.as_ref(),
            )
        }
        CodeInstance::Quantum { code, decoder } => match corruption {
            Corruption::None => success_quantum(code, decoder, i, mu, None, tol),
            c => {
                let ch = c.channel(code.m(), tol)?;
                success_quantum(code, decoder, i, mu, Some(&ch), tol)
            }
        },
    }
}

fn corruption_as_pattern(c: &Corruption) -> Result<Option<super::types::ErrorPattern>> {
    match c {
        Corruption::None => Ok(None),
        Corruption::Flips(e) => Ok(Some(*e)),
        other => Err(Error::Invalid(format!(
            "corruption {other} is not applicable to a classical code"
        ))),
    }
}

fn check_budget(
    corruption_count: u128,
    n: usize,
    cases: &[InputDistribution],
    plan: &super::decoder::QueryPlan,
    tol: &Tolerances,
) -> Result<()> {
    let per_case: u128 = (1u128 << n)
        * (0..n)
            .map(|i| plan.entries(i).len() as u128)
            .max()
            .unwrap_or(1);
    let needed = corruption_count
        .saturating_mul(cases.len() as u128)
        .saturating_mul(n as u128)
        .saturating_mul(per_case);
    if needed > tol.enumeration_budget {
        return Err(Error::BudgetExceeded {
            needed,
            budget: tol.enumeration_budget,
        });
    }
    Ok(())
}
