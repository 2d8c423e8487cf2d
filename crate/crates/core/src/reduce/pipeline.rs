//! End-to-end reduction pipelines.
//!
//! Smooth quantum code → randomized smooth code (measure with S*, decode by
//! signed parities over a matching), optionally → locally decodable claims
//! via the δ-tradeoff, optionally → a deterministic code via the shared-
//! randomness derandomization. Every stage re-verifies its claim; search
//! failure is a structured outcome, not an error.

use super::bias::{decomposition_bound_check, DecompositionReport};
use super::build::{build_parity_decoder, build_randomized_code};
use super::convert::{ldc_to_smooth, smooth_to_ldc, ConvertedParams};
use super::derand::{derandomize, DerandResult};
use super::matching::{build_matching, good_query_sets, GoodEdgeSet, MatchingFamily};
use super::search::{find_pauli_sequence, SearchConfig, SearchOutcome, SearchResult};
use crate::codes::adversary::error_patterns;
use crate::codes::{
    success_classical, verify_params, ClassicalCodeRef, ClassicalDecoder, CodeFamily, CodeInstance,
    CodeKind, CodeParams, InputDistribution, QuantumCode, QuantumDecoder, QuerySet, RandomizedCode,
    VerifyReport,
};
use crate::error::{Error, Result};
use crate::quantum::PauliString;
use crate::tol::Tolerances;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub search: SearchConfig,
    /// Verify the input claim before transforming (for locally decodable
    /// inputs this enumerates the restricted adversary class).
    pub verify_input: bool,
    /// Verify intermediate and final claims.
    pub verify_stages: bool,
    /// Denominator bits for snapping row probabilities in derandomization.
    pub snap_bits: u32,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            search: SearchConfig::default(),
            verify_input: true,
            verify_stages: true,
            snap_bits: 48,
        }
    }
}

/// Parameter arithmetic for one stage, with the defining formula.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageParams {
    pub stage: String,
    pub kind: String,
    pub q: usize,
    pub second: f64,
    pub eps: f64,
    pub formula: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PipelineTarget {
    RandomizedLdc,
    Ldc,
}

impl PipelineTarget {
    pub fn name(&self) -> &'static str {
        match self {
            PipelineTarget::RandomizedLdc => "randomized-ldc",
            PipelineTarget::Ldc => "ldc",
        }
    }
}

/// The full parameter chain of the reduction, usable without touching any
/// code (dry runs and sweeps).
pub fn parameter_arithmetic(
    input: &CodeParams,
    delta_prime: f64,
    target: PipelineTarget,
) -> Result<Vec<StageParams>> {
    if input.kind.family != CodeFamily::Ldqc {
        return Err(Error::Invalid(format!(
            "pipeline input must be a locally decodable quantum claim, got {}",
            input.kind
        )));
    }
    let q = input.q;
    let delta = input.second;
    let eps = input.eps;
    let four_q1 = 4f64.powi(q as i32 + 1);
    let bound = match target {
        PipelineTarget::RandomizedLdc => delta * eps * eps / (q as f64 * q as f64 * four_q1),
        PipelineTarget::Ldc => delta * eps * eps / (2.0 * q as f64 * q as f64 * four_q1),
    };
    if delta_prime > bound + 1e-15 {
        return Err(Error::DeltaPrimeTooLarge { delta_prime, bound });
    }
    let c_smooth = q as f64 / delta;
    let c_r = q as f64 * c_smooth / eps;
    let eps_r = eps / four_q1;
    let mut stages = vec![
        StageParams {
            stage: "input".into(),
            kind: input.kind.to_string(),
            q,
            second: delta,
            eps,
            formula: "(q, δ, ε)".into(),
        },
        StageParams {
            stage: "smooth".into(),
            kind: CodeKind {
                family: CodeFamily::SmoothQuantum,
                mu_average: input.kind.mu_average,
            }
            .to_string(),
            q,
            second: c_smooth,
            eps,
            formula: "(q, q/δ, ε)".into(),
        },
        StageParams {
            stage: "randomized-smooth".into(),
            kind: CodeKind::mu_average(CodeFamily::RandomizedSmooth).to_string(),
            q,
            second: c_r,
            eps: eps_r,
            formula: "(q, qc/ε, ε/4^(q+1))".into(),
        },
    ];
    match target {
        PipelineTarget::RandomizedLdc => {
            stages.push(StageParams {
                stage: "randomized-ldc".into(),
                kind: CodeKind::mu_average(CodeFamily::RandomizedLdc).to_string(),
                q,
                second: delta_prime,
                eps: eps_r - delta_prime * c_r,
                formula: "(q, δ', ε/4^(q+1) − δ'·q²/(δε))".into(),
            });
        }
        PipelineTarget::Ldc => {
            stages.push(StageParams {
                stage: "smooth-deterministic".into(),
                kind: CodeKind::mu_average(CodeFamily::Smooth).to_string(),
                q,
                second: c_r,
                eps: eps_r / 2.0,
                formula: "(q, qc/ε, ε/(2·4^(q+1))) for ≥ εn/4^(q+1) indices".into(),
            });
            stages.push(StageParams {
                stage: "ldc".into(),
                kind: CodeKind::mu_average(CodeFamily::Ldc).to_string(),
                q,
                second: delta_prime,
                eps: eps_r / 2.0 - delta_prime * c_r,
                formula: "(q, δ', ε/(2·4^(q+1)) − δ'·q²/(δε))".into(),
            });
        }
    }
    Ok(stages)
}

/// Result of the core reduction: smooth quantum code → μ-average randomized
/// smooth code with the parity decoder.
#[derive(Debug)]
pub struct SmoothPipelineResult {
    pub input_params: CodeParams,
    pub input_verified: Option<VerifyReport>,
    pub edges: Vec<GoodEdgeSet>,
    pub family: MatchingFamily,
    pub search: SearchResult,
    pub success: Option<SmoothSuccess>,
}

#[derive(Debug)]
pub struct SmoothSuccess {
    pub s_star: PauliString,
    pub report: super::search::BiasReport,
    pub randomized: RandomizedCode,
    pub decoder: ClassicalDecoder,
    pub claimed: CodeParams,
    pub verified: Option<VerifyReport>,
    pub decomposition: Vec<DecompositionReport>,
}

impl SmoothPipelineResult {
    pub fn search_succeeded(&self) -> bool {
        self.success.is_some()
    }
}

/// Run the smooth-code half of the reduction: matchings, the S* search, the
/// randomized code, the parity decoder, claim verification, and the
/// decomposition-chain checks.
pub fn run_smooth_pipeline(
    code: &QuantumCode,
    dec: &QuantumDecoder,
    params: &CodeParams,
    mu: &InputDistribution,
    config: &PipelineConfig,
    tol: &Tolerances,
) -> Result<SmoothPipelineResult> {
    if params.kind.family != CodeFamily::SmoothQuantum {
        return Err(Error::Invalid(format!(
            "smooth pipeline expects a smooth-quantum claim, got {}",
            params.kind
        )));
    }
    let n = code.n();
    let m = code.m();
    let q = params.q;
    let c = params.second;
    let eps = params.eps;

    let input_verified = if config.verify_input {
        let inst = CodeInstance::Quantum {
            code: code.clone(),
            decoder: dec.clone(),
        };
        Some(verify_params(&inst, params, Some(mu), tol)?)
    } else {
        None
    };

    let mut edges = Vec::with_capacity(n);
    let mut matchings = Vec::with_capacity(n);
    for i in 0..n {
        let e = good_query_sets(code, dec, i, mu, eps, tol)?;
        matchings.push(build_matching(&e, m, q, c, eps)?);
        edges.push(e);
    }
    let mut family = MatchingFamily::new(m, q, matchings)?;

    let search = find_pauli_sequence(code, &family, mu, eps, q, &config.search)?;
    let success = match &search.outcome {
        SearchOutcome::Found {
            s_star,
            signs,
            report,
        } => {
            family.set_signs(signs.clone());
            let mut report = report.clone();
            report.attach_measurement_biases(code, dec, &family, mu)?;

            let randomized = build_randomized_code(code, s_star, tol)?;
            let decoder = build_parity_decoder(&family, s_star, tol)?;
            let claimed = CodeParams::new(
                CodeKind::mu_average(CodeFamily::RandomizedSmooth),
                q,
                q as f64 * c / eps,
                eps / 4f64.powi(q as i32 + 1),
            )?;
            let verified = if config.verify_stages {
                let inst = CodeInstance::Randomized {
                    code: randomized.clone(),
                    decoder: decoder.clone(),
                };
                Some(verify_params(&inst, &claimed, Some(mu), tol)?)
            } else {
                None
            };
            let mut decomposition = Vec::new();
            for i in 0..n {
                for set in family.sets(i) {
                    decomposition.push(decomposition_bound_check(code, dec, i, set, mu, q, tol)?);
                }
            }
            Some(SmoothSuccess {
                s_star: s_star.clone(),
                report,
                randomized,
                decoder,
                claimed,
                verified,
                decomposition,
            })
        }
        SearchOutcome::Failed { .. } => None,
    };

    Ok(SmoothPipelineResult {
        input_params: *params,
        input_verified,
        edges,
        family,
        search,
        success,
    })
}

/// Locally-decodable-input pipeline result.
#[derive(Debug)]
pub struct PipelineResult {
    pub target: PipelineTarget,
    pub input_params: CodeParams,
    pub input_verified: Option<VerifyReport>,
    pub delta_prime: f64,
    pub arithmetic: Vec<StageParams>,
    pub smoothed_params: CodeParams,
    pub heavy: Vec<QuerySet>,
    pub smooth_run: SmoothPipelineResult,
    /// Final claim (randomized LDC or deterministic LDC stage), arithmetic
    /// only; present regardless of search outcome.
    pub final_params: ConvertedParams,
    pub final_verified: Option<VerifyReport>,
    pub derand: Option<DerandStage>,
}

#[derive(Debug)]
pub struct DerandStage {
    pub result: DerandResult,
    /// μ-average LDC parameters claimed for the good indices.
    pub claimed: ConvertedParams,
    /// ⌈εn/4^(q+1)⌉ with the input ε.
    pub good_bound: usize,
    pub good_count_ok: bool,
    pub expected_good_ok: bool,
    /// Exhaustive per-good-index success check at the final parameters.
    pub good_indices_verified: Option<bool>,
}

impl PipelineResult {
    pub fn search_succeeded(&self) -> bool {
        self.smooth_run.search_succeeded()
    }
}

/// Turn a (q,δ,ε)-locally decodable quantum code into a μ-average
/// (q, δ', ε/4^(q+1) − δ'q²/(δε))-randomized locally decodable code.
pub fn pipeline_ldqc_to_rldc(
    code: &QuantumCode,
    dec: &QuantumDecoder,
    params: &CodeParams,
    mu: &InputDistribution,
    delta_prime: f64,
    config: &PipelineConfig,
    tol: &Tolerances,
) -> Result<PipelineResult> {
    run_ldqc_pipeline(
        code,
        dec,
        params,
        mu,
        delta_prime,
        PipelineTarget::RandomizedLdc,
        config,
        tol,
    )
}

/// Continue through derandomization to a μ-average deterministic LDC good
/// for at least εn/4^(q+1) indices.
pub fn pipeline_ldqc_to_ldc(
    code: &QuantumCode,
    dec: &QuantumDecoder,
    params: &CodeParams,
    mu: &InputDistribution,
    delta_prime: f64,
    config: &PipelineConfig,
    tol: &Tolerances,
) -> Result<PipelineResult> {
    run_ldqc_pipeline(
        code,
        dec,
        params,
        mu,
        delta_prime,
        PipelineTarget::Ldc,
        config,
        tol,
    )
}

#[allow(clippy::too_many_arguments)]
fn run_ldqc_pipeline(
    code: &QuantumCode,
    dec: &QuantumDecoder,
    params: &CodeParams,
    mu: &InputDistribution,
    delta_prime: f64,
    target: PipelineTarget,
    config: &PipelineConfig,
    tol: &Tolerances,
) -> Result<PipelineResult> {
    let arithmetic = parameter_arithmetic(params, delta_prime, target)?;
    let n = code.n();
    let q = params.q;
    let eps = params.eps;
    let four_q1 = 4f64.powi(q as i32 + 1);

    let input_verified = if config.verify_input {
        let inst = CodeInstance::Quantum {
            code: code.clone(),
            decoder: dec.clone(),
        };
        Some(verify_params(&inst, params, Some(mu), tol)?)
    } else {
        None
    };

    let smoothed = ldc_to_smooth(code, dec, params, tol)?;
    let inner_config = PipelineConfig {
        verify_input: config.verify_stages,
        ..config.clone()
    };
    let smooth_run = run_smooth_pipeline(
        code,
        &smoothed.decoder,
        &smoothed.params,
        mu,
        &inner_config,
        tol,
    )?;

    // Final claim arithmetic, independent of search outcome.
    let randomized_params = CodeParams::new(
        CodeKind::mu_average(CodeFamily::RandomizedSmooth),
        q,
        q as f64 * smoothed.params.second / eps,
        eps / four_q1,
    )?;
    let final_params = match target {
        PipelineTarget::RandomizedLdc => smooth_to_ldc(&randomized_params, delta_prime)?,
        PipelineTarget::Ldc => {
            // The deterministic stage halves ε before the δ' tradeoff.
            let half = CodeParams::new(
                CodeKind::mu_average(CodeFamily::Smooth),
                q,
                randomized_params.second,
                randomized_params.eps / 2.0,
            )?;
            smooth_to_ldc(&half, delta_prime)?
        }
    };

    let mut final_verified = None;
    let mut derand_stage = None;
    if let Some(success) = &smooth_run.success {
        match target {
            PipelineTarget::RandomizedLdc => {
                if config.verify_stages && !final_params.degenerate {
                    let inst = CodeInstance::Randomized {
                        code: success.randomized.clone(),
                        decoder: success.decoder.clone(),
                    };
                    final_verified =
                        Some(verify_params(&inst, &final_params.claim()?, Some(mu), tol)?);
                }
            }
            PipelineTarget::Ldc => {
                let eps_r = eps / four_q1;
                let result = derandomize(
                    &success.randomized,
                    &success.decoder,
                    mu,
                    eps_r,
                    config.snap_bits,
                )?;
                let good_bound = ((eps * n as f64) / four_q1 - 1e-9).ceil().max(1.0) as usize;
                let good_count_ok = result.good_indices.len() >= good_bound;
                let expected_good_ok = result.expected_good + 1e-9 >= eps_r * n as f64;
                let good_indices_verified = if config.verify_stages && !final_params.degenerate {
                    Some(verify_good_indices(
                        &result.code,
                        &success.decoder,
                        &result.good_indices,
                        mu,
                        final_params.eps,
                        delta_prime,
                    )?)
                } else {
                    None
                };
                derand_stage = Some(DerandStage {
                    result,
                    claimed: final_params,
                    good_bound,
                    good_count_ok,
                    expected_good_ok,
                    good_indices_verified,
                });
            }
        }
    }

    Ok(PipelineResult {
        target,
        input_params: *params,
        input_verified,
        delta_prime,
        arithmetic,
        smoothed_params: smoothed.params,
        heavy: smoothed.heavy,
        smooth_run,
        final_params,
        final_verified,
        derand: derand_stage,
    })
}

/// μ-average success of the final deterministic code on each good index,
/// under every admissible error pattern.
fn verify_good_indices(
    code: &crate::codes::ClassicalCode,
    dec: &ClassicalDecoder,
    good: &[usize],
    mu: &InputDistribution,
    eps_final: f64,
    delta_prime: f64,
) -> Result<bool> {
    let m = code.m();
    let budget = (delta_prime * m as f64).floor() as usize;
    for pattern in error_patterns(m, budget) {
        for &i in good {
            let s = success_classical(ClassicalCodeRef::Plain(code), dec, i, mu, Some(&pattern))?;
            if s < 0.5 + eps_final - 1e-9 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{basis_code, bias_classical};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn arithmetic_matches_hand_computation() {
        // (q=1, δ=0.5, ε=0.5), δ' = δε²/(q²·16) = 1/128:
        // ε'' = 0.5/16 − (1/128)·(1/0.25) = 0.03125 − 0.03125 = 0.
        let input = CodeParams::new(CodeKind::plain(CodeFamily::Ldqc), 1, 0.5, 0.5).unwrap();
        let stages =
            parameter_arithmetic(&input, 1.0 / 128.0, PipelineTarget::RandomizedLdc).unwrap();
        let last = stages.last().unwrap();
        assert!(last.eps.abs() < 1e-15, "ε'' = {}", last.eps);
        assert!((stages[1].second - 2.0).abs() < 1e-15); // q/δ
        assert!((stages[2].second - 4.0).abs() < 1e-15); // q²/(δε)
        assert!((stages[2].eps - 0.03125).abs() < 1e-15);

        // δ' = 0 keeps ε/4^(q+1) exactly.
        let stages0 = parameter_arithmetic(&input, 0.0, PipelineTarget::RandomizedLdc).unwrap();
        assert!((stages0.last().unwrap().eps - 0.03125).abs() < 1e-15);

        // Exceeding the admissible bound refuses.
        assert!(matches!(
            parameter_arithmetic(&input, 1.0 / 127.0, PipelineTarget::RandomizedLdc),
            Err(Error::DeltaPrimeTooLarge { .. })
        ));

        // The deterministic chain halves ε before the tradeoff.
        let ldc = parameter_arithmetic(&input, 0.0, PipelineTarget::Ldc).unwrap();
        assert!((ldc.last().unwrap().eps - 0.015625).abs() < 1e-15);
    }

    #[test]
    fn basis_code_end_to_end_randomized() {
        // δ = 0.4 keeps ⌊δm⌋ = 0: the basis code tolerates no corruption
        // (an X on the queried qubit inverts the outcome deterministically).
        let (code, dec) = basis_code(2, &tol()).unwrap();
        let params = CodeParams::new(CodeKind::plain(CodeFamily::Ldqc), 1, 0.4, 0.5).unwrap();
        let mu = InputDistribution::uniform(2);
        let result = pipeline_ldqc_to_rldc(
            &code,
            &dec,
            &params,
            &mu,
            0.0,
            &PipelineConfig::default(),
            &tol(),
        )
        .unwrap();
        assert!(result.search_succeeded());
        assert!(result.input_verified.as_ref().unwrap().holds);
        let success = result.smooth_run.success.as_ref().unwrap();
        assert_eq!(success.s_star.to_string(), "ZZ");
        assert!(success.verified.as_ref().unwrap().holds);
        // Decomposition chain holds on every matching set.
        for d in &success.decomposition {
            assert!(d.holds(), "{d:?}");
        }
        // μ-average success of the randomized code meets 1/2 + ε/4^(q+1).
        for i in 0..2 {
            let bias = bias_classical(
                ClassicalCodeRef::Randomized(&success.randomized),
                &success.decoder,
                i,
                &mu,
                None,
            )
            .unwrap();
            assert!(0.5 + bias / 2.0 + 1e-12 >= 0.5 + 0.5 / 16.0);
        }
        assert!(result.final_verified.as_ref().unwrap().holds);
    }

    #[test]
    fn basis_code_end_to_end_deterministic() {
        let (code, dec) = basis_code(2, &tol()).unwrap();
        let params = CodeParams::new(CodeKind::plain(CodeFamily::Ldqc), 1, 0.4, 0.5).unwrap();
        let mu = InputDistribution::uniform(2);
        let result = pipeline_ldqc_to_ldc(
            &code,
            &dec,
            &params,
            &mu,
            0.0,
            &PipelineConfig::default(),
            &tol(),
        )
        .unwrap();
        assert!(result.search_succeeded());
        let derand = result.derand.as_ref().unwrap();
        assert!(derand.good_count_ok);
        assert!(derand.expected_good_ok);
        assert_eq!(derand.good_indices_verified, Some(true));
        // The basis code derandomizes to itself: every cell decodes all
        // indices perfectly.
        assert_eq!(derand.result.good_indices, vec![0, 1]);
        for x in crate::codes::Word::all(2) {
            assert_eq!(derand.result.code.encode(&x), x);
        }
    }

    #[test]
    fn failure_is_structured_not_an_error() {
        // The 2→1 random access code on a single qubit: the search must
        // fail (shared qubit), and the pipeline reports it cleanly.
        let two = crate::codes::qrac_2to1(&tol()).unwrap();
        let eps = 0.5 / 2f64.sqrt();
        // As an LDQC claim, any corruption of the single qubit is fatal, so
        // claim δ small enough that ⌊δm⌋ = 0.
        let params = CodeParams::new(CodeKind::plain(CodeFamily::Ldqc), 1, 0.4, eps).unwrap();
        let mu = InputDistribution::uniform(2);
        let result = pipeline_ldqc_to_rldc(
            &two.code,
            &two.decoder,
            &params,
            &mu,
            0.0,
            &PipelineConfig::default(),
            &tol(),
        )
        .unwrap();
        assert!(!result.search_succeeded());
        match &result.smooth_run.search.outcome {
            SearchOutcome::Failed {
                best_min, table, ..
            } => {
                assert!(best_min.abs() < 1e-12);
                assert!(table.is_some());
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }
}
