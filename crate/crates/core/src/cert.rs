//! Reduction certificates: a stable, versioned, machine-readable record of
//! everything a pipeline run established, replayable against the input code.

use crate::codes::{CodeInstance, InputDistribution, QuerySet, Word};
use crate::error::{Error, Result};
use crate::quantum::PauliString;
use crate::reduce::{
    measurement_bias, pauli_bias, DecompositionReport, PipelineResult, SearchOutcome,
    SmoothPipelineResult, StageParams,
};
use crate::tol::Tolerances;
use serde::{Deserialize, Serialize};

pub const CERTIFICATE_VERSION: u32 = 1;

/// FNV-1a over a canonical byte encoding of the code instance. Stable across
/// runs and platforms; used to tie certificates to their inputs.
pub fn code_hash(instance: &CodeInstance) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    };
    eat(instance.species().as_bytes());
    eat(&(instance.n() as u64).to_le_bytes());
    eat(&(instance.m() as u64).to_le_bytes());
    match instance {
        CodeInstance::Classical { code, .. } => {
            for w in code.table() {
                eat(&(w.index() as u64).to_le_bytes());
            }
        }
        CodeInstance::Randomized { code, .. } => {
            for row in code.rows() {
                eat(&(row.len() as u64).to_le_bytes());
                for (p, w) in row {
                    eat(&p.to_bits().to_le_bytes());
                    eat(&(w.index() as u64).to_le_bytes());
                }
            }
        }
        CodeInstance::Quantum { code, .. } => {
            for state in code.states() {
                for e in state.matrix().entries() {
                    eat(&e.re.to_bits().to_le_bytes());
                    eat(&e.im.to_bits().to_le_bytes());
                }
            }
        }
    }
    format!("{h:016x}")
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub version: u32,
    pub seed: u64,
    pub strategy: String,
    pub input: InputRecord,
    pub mu: String,
    /// Parameter arithmetic, stage by stage.
    pub stages: Vec<StageParams>,
    pub matchings: Vec<MatchingRecord>,
    pub s_star: Option<String>,
    pub search: SearchRecord,
    pub biases: Option<crate::reduce::BiasReport>,
    pub decomposition: Vec<DecompositionReport>,
    pub randomized_rows: Option<Vec<RowRecord>>,
    pub derand: Option<DerandRecord>,
    pub verdicts: Vec<VerdictRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct InputRecord {
    pub species: String,
    pub kind: String,
    pub n: usize,
    pub m: usize,
    pub q: usize,
    pub second: f64,
    pub eps: f64,
    pub code_hash: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MatchingRecord {
    /// 1-based message index.
    pub index: usize,
    /// 1-based positions per set.
    pub sets: Vec<Vec<usize>>,
    /// Signs aligned with `sets`; empty until a sequence is found.
    pub signs: Vec<i8>,
    /// Conditional success of each set, aligned.
    pub conditional_success: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SearchRecord {
    pub strategy: String,
    pub candidates_evaluated: u64,
    pub threshold: f64,
    pub success: bool,
    pub best: String,
    pub best_min_bias: f64,
    /// Indices below threshold on failure, 1-based.
    pub violating: Vec<usize>,
    /// Per-candidate min bias when the space was small enough to tabulate.
    pub table: Option<Vec<(String, f64)>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RowRecord {
    pub x: String,
    pub entries: Vec<(f64, String)>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DerandRecord {
    pub cells: usize,
    pub chosen_cell: usize,
    pub expected_good: f64,
    /// 1-based good indices.
    pub good_indices: Vec<usize>,
    pub per_index_bias: Vec<f64>,
    pub codewords: Vec<String>,
    pub snapped: bool,
    pub max_snap_error: f64,
    pub good_bound: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub stage: String,
    pub claim: String,
    pub holds: bool,
    pub witness: Option<String>,
}

fn matching_records(result: &SmoothPipelineResult) -> Vec<MatchingRecord> {
    (0..result.family.n())
        .map(|i| {
            let sets = result.family.sets(i);
            MatchingRecord {
                index: i + 1,
                sets: sets
                    .iter()
                    .map(|s| s.positions().iter().map(|p| p + 1).collect())
                    .collect(),
                signs: sets
                    .iter()
                    .filter_map(|s| result.family.sign(i, s))
                    .collect(),
                conditional_success: sets
                    .iter()
                    .map(|s| {
                        result.edges[i]
                            .conditional_success
                            .get(s)
                            .copied()
                            .unwrap_or(f64::NAN)
                    })
                    .collect(),
            }
        })
        .collect()
}

fn search_record(result: &SmoothPipelineResult) -> SearchRecord {
    let search = &result.search;
    match &search.outcome {
        SearchOutcome::Found { s_star, report, .. } => SearchRecord {
            strategy: search.strategy_used.name().into(),
            candidates_evaluated: search.candidates_evaluated,
            threshold: search.threshold,
            success: true,
            best: s_star.to_string(),
            best_min_bias: report
                .per_index
                .iter()
                .map(|b| b.b_bar)
                .fold(f64::INFINITY, f64::min),
            violating: Vec::new(),
            table: None,
        },
        SearchOutcome::Failed {
            best,
            best_min,
            violating,
            table,
            ..
        } => SearchRecord {
            strategy: search.strategy_used.name().into(),
            candidates_evaluated: search.candidates_evaluated,
            threshold: search.threshold,
            success: false,
            best: best.to_string(),
            best_min_bias: *best_min,
            violating: violating.iter().map(|i| i + 1).collect(),
            table: table.clone(),
        },
    }
}

fn verdicts(result: &PipelineResult) -> Vec<VerdictRecord> {
    let mut out = Vec::new();
    let mut push = |stage: &str, claim: String, report: &crate::codes::VerifyReport| {
        out.push(VerdictRecord {
            stage: stage.into(),
            claim,
            holds: report.holds,
            witness: report.witness.as_ref().map(|w| w.to_string()),
        });
    };
    if let Some(r) = &result.input_verified {
        push("input", result.input_params.to_string(), r);
    }
    if let Some(r) = &result.smooth_run.input_verified {
        push("smooth", result.smoothed_params.to_string(), r);
    }
    if let Some(success) = &result.smooth_run.success {
        if let Some(r) = &success.verified {
            push("randomized-smooth", success.claimed.to_string(), r);
        }
    }
    if let Some(r) = &result.final_verified {
        push(
            result.target.name(),
            format_converted(&result.final_params),
            r,
        );
    }
    if let Some(derand) = &result.derand {
        out.push(VerdictRecord {
            stage: "derandomized".into(),
            claim: format_converted(&derand.claimed),
            holds: derand.good_count_ok
                && derand.expected_good_ok
                && derand.good_indices_verified.unwrap_or(true),
            witness: None,
        });
    }
    out
}

fn format_converted(p: &crate::reduce::ConvertedParams) -> String {
    format!(
        "{} (q={}, {}={}, ε={}){}",
        p.kind,
        p.q,
        if p.kind.family.second_is_delta() {
            "δ"
        } else {
            "c"
        },
        p.second,
        p.eps,
        if p.degenerate { " [degenerate]" } else { "" }
    )
}

/// Assemble the certificate for a locally-decodable-input pipeline run.
pub fn certificate_from_pipeline(
    result: &PipelineResult,
    instance: &CodeInstance,
    mu_label: &str,
    seed: u64,
) -> Certificate {
    let smooth = &result.smooth_run;
    let (s_star, biases, rows) = match &smooth.success {
        Some(s) => (
            Some(s.s_star.to_string()),
            Some(s.report.clone()),
            Some(
                Word::all(s.randomized.n())
                    .map(|x| RowRecord {
                        x: x.to_string(),
                        entries: s
                            .randomized
                            .row(&x)
                            .iter()
                            .map(|(p, w)| (*p, w.to_string()))
                            .collect(),
                    })
                    .collect(),
            ),
        ),
        None => (None, None, None),
    };
    let derand = result.derand.as_ref().map(|stage| DerandRecord {
        cells: stage.result.coupling.cell_count(),
        chosen_cell: stage.result.chosen_cell,
        expected_good: stage.result.expected_good,
        good_indices: stage.result.good_indices.iter().map(|i| i + 1).collect(),
        per_index_bias: stage.result.per_index_bias.clone(),
        codewords: Word::all(stage.result.code.n())
            .map(|x| stage.result.code.encode(&x).to_string())
            .collect(),
        snapped: stage.result.coupling.snapped,
        max_snap_error: stage.result.coupling.max_snap_error,
        good_bound: stage.good_bound,
    });
    Certificate {
        version: CERTIFICATE_VERSION,
        seed,
        strategy: smooth.search.strategy_used.name().into(),
        input: InputRecord {
            species: instance.species().into(),
            kind: result.input_params.kind.to_string(),
            n: instance.n(),
            m: instance.m(),
            q: result.input_params.q,
            second: result.input_params.second,
            eps: result.input_params.eps,
            code_hash: code_hash(instance),
        },
        mu: mu_label.into(),
        stages: result.arithmetic.clone(),
        matchings: matching_records(smooth),
        s_star,
        search: search_record(smooth),
        biases,
        decomposition: smooth
            .success
            .as_ref()
            .map(|s| s.decomposition.clone())
            .unwrap_or_default(),
        randomized_rows: rows,
        derand,
        verdicts: verdicts(result),
    }
}

/// Assemble the certificate for a smooth-input run (the core reduction
/// without the δ' stages).
pub fn certificate_from_smooth(
    result: &SmoothPipelineResult,
    instance: &CodeInstance,
    mu_label: &str,
    seed: u64,
) -> Certificate {
    let params = result.input_params;
    let stages = vec![
        StageParams {
            stage: "input".into(),
            kind: params.kind.to_string(),
            q: params.q,
            second: params.second,
            eps: params.eps,
            formula: "(q, c, ε)".into(),
        },
        StageParams {
            stage: "randomized-smooth".into(),
            kind: "mu-average-randomized-smooth".into(),
            q: params.q,
            second: params.q as f64 * params.second / params.eps,
            eps: params.eps / 4f64.powi(params.q as i32 + 1),
            formula: "(q, qc/ε, ε/4^(q+1))".into(),
        },
    ];
    let (s_star, biases, rows) = match &result.success {
        Some(s) => (
            Some(s.s_star.to_string()),
            Some(s.report.clone()),
            Some(
                Word::all(s.randomized.n())
                    .map(|x| RowRecord {
                        x: x.to_string(),
                        entries: s
                            .randomized
                            .row(&x)
                            .iter()
                            .map(|(p, w)| (*p, w.to_string()))
                            .collect(),
                    })
                    .collect(),
            ),
        ),
        None => (None, None, None),
    };
    let mut verdict_rows = Vec::new();
    if let Some(r) = &result.input_verified {
        verdict_rows.push(VerdictRecord {
            stage: "input".into(),
            claim: params.to_string(),
            holds: r.holds,
            witness: r.witness.as_ref().map(|w| w.to_string()),
        });
    }
    if let Some(s) = &result.success {
        if let Some(r) = &s.verified {
            verdict_rows.push(VerdictRecord {
                stage: "randomized-smooth".into(),
                claim: s.claimed.to_string(),
                holds: r.holds,
                witness: r.witness.as_ref().map(|w| w.to_string()),
            });
        }
    }
    Certificate {
        version: CERTIFICATE_VERSION,
        seed,
        strategy: result.search.strategy_used.name().into(),
        input: InputRecord {
            species: instance.species().into(),
            kind: params.kind.to_string(),
            n: instance.n(),
            m: instance.m(),
            q: params.q,
            second: params.second,
            eps: params.eps,
            code_hash: code_hash(instance),
        },
        mu: mu_label.into(),
        stages,
        matchings: matching_records(result),
        s_star,
        search: search_record(result),
        biases,
        decomposition: result
            .success
            .as_ref()
            .map(|s| s.decomposition.clone())
            .unwrap_or_default(),
        randomized_rows: rows,
        derand: None,
        verdicts: verdict_rows,
    }
}

#[derive(Debug, Serialize)]
pub struct ReplayReport {
    pub hash_matches: bool,
    pub biases_checked: usize,
    pub max_b_deviation: f64,
    pub max_b_prime_deviation: f64,
    pub ok: bool,
}

/// Recompute every recorded bias from the input instance and compare within
/// tolerances.
pub fn replay(
    cert: &Certificate,
    instance: &CodeInstance,
    mu: &InputDistribution,
    tol: &Tolerances,
) -> Result<ReplayReport> {
    let hash_matches = code_hash(instance) == cert.input.code_hash;
    if !hash_matches {
        // A different code: dimensions need not even line up, so the bias
        // recomputation is skipped.
        return Ok(ReplayReport {
            hash_matches: false,
            biases_checked: 0,
            max_b_deviation: 0.0,
            max_b_prime_deviation: 0.0,
            ok: false,
        });
    }
    let CodeInstance::Quantum { code, decoder } = instance else {
        return Ok(ReplayReport {
            hash_matches,
            biases_checked: 0,
            max_b_deviation: 0.0,
            max_b_prime_deviation: 0.0,
            ok: hash_matches,
        });
    };
    let mut checked = 0usize;
    let mut max_b = 0.0f64;
    let mut max_bp = 0.0f64;
    if let (Some(biases), Some(s_star)) = (&cert.biases, &cert.s_star) {
        let s_star = PauliString::parse(s_star)?;
        for idx in &biases.per_index {
            let i = idx.index;
            for entry in &idx.entries {
                let positions: Vec<usize> = entry.set.iter().map(|p| p - 1).collect();
                let set = QuerySet::from_positions(&positions);
                if let Some(recorded_b) = entry.b {
                    let b = measurement_bias(code, decoder, i, &set, mu)?;
                    max_b = max_b.max((b - recorded_b).abs());
                }
                let (bp, sign) = pauli_bias(code, i, &s_star, &set, mu)?;
                max_bp = max_bp.max((bp - entry.b_prime).abs());
                if sign != entry.sign && bp > tol.trace {
                    return Err(Error::Invalid(format!(
                        "replay sign mismatch at index {} set {set}",
                        i + 1
                    )));
                }
                checked += 1;
            }
        }
    }
    let ok = hash_matches && max_b <= tol.recon && max_bp <= tol.recon;
    Ok(ReplayReport {
        hash_matches,
        biases_checked: checked,
        max_b_deviation: max_b,
        max_b_prime_deviation: max_bp,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{basis_code, CodeFamily, CodeKind, CodeParams};
    use crate::reduce::{pipeline_ldqc_to_ldc, PipelineConfig};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn hash_is_stable_and_input_sensitive() {
        let (code, decoder) = basis_code(2, &tol()).unwrap();
        let a = CodeInstance::Quantum {
            code: code.clone(),
            decoder: decoder.clone(),
        };
        let h1 = code_hash(&a);
        let h2 = code_hash(&a);
        assert_eq!(h1, h2);
        let (code3, decoder3) = basis_code(3, &tol()).unwrap();
        let b = CodeInstance::Quantum {
            code: code3,
            decoder: decoder3,
        };
        assert_ne!(h1, code_hash(&b));
    }

    #[test]
    fn certificate_serializes_deterministically_and_replays() {
        let (code, decoder) = basis_code(2, &tol()).unwrap();
        let params = CodeParams::new(CodeKind::plain(CodeFamily::Ldqc), 1, 0.4, 0.5).unwrap();
        let mu = InputDistribution::uniform(2);
        let config = PipelineConfig::default();
        let run = || {
            let result =
                pipeline_ldqc_to_ldc(&code, &decoder, &params, &mu, 0.0, &config, &tol()).unwrap();
            let instance = CodeInstance::Quantum {
                code: code.clone(),
                decoder: decoder.clone(),
            };
            let cert = certificate_from_pipeline(&result, &instance, "uniform", 7);
            serde_json::to_string_pretty(&cert).unwrap()
        };
        let first = run();
        let second = run();
        assert_eq!(first, second);

        let cert: Certificate = serde_json::from_str(&first).unwrap();
        assert_eq!(cert.version, CERTIFICATE_VERSION);
        assert!(cert.search.success);
        let instance = CodeInstance::Quantum {
            code: code.clone(),
            decoder: decoder.clone(),
        };
        let replayed = replay(&cert, &instance, &mu, &tol()).unwrap();
        assert!(replayed.ok, "{replayed:?}");
        assert!(replayed.biases_checked > 0);
    }
}
