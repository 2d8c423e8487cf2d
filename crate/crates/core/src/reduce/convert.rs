//! Parameter conversions between smooth and locally decodable codes.
//!
//! Smooth → LDC costs ε ↦ ε − δc (union bound over corrupted queries);
//! LDC → smooth rebuilds the decoder to avoid its heavily-queried positions,
//! treating them as maximally mixed, at the price c = q/δ.

use crate::codes::{
    CodeFamily, CodeKind, CodeParams, QuantumCode, QuantumDecoder, QueryPlan, QuerySet,
};
use crate::error::{Error, Result};
use crate::quantum::{extract_from_qubits, TwoOutcomeMeasurement};
use crate::tol::Tolerances;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Converted parameters; ε may hit 0, which is a degenerate (vacuous) claim
/// that cannot be expressed as a `CodeParams`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ConvertedParams {
    pub kind: CodeKind,
    pub q: usize,
    pub second: f64,
    pub eps: f64,
    pub degenerate: bool,
}

impl ConvertedParams {
    pub fn claim(&self) -> Result<CodeParams> {
        if self.degenerate {
            return Err(Error::Invalid(format!(
                "converted ε = {} is not positive; the claim is vacuous",
                self.eps
            )));
        }
        CodeParams::new(self.kind, self.q, self.second, self.eps)
    }
}

fn smooth_to_ldc_family(family: CodeFamily) -> Result<CodeFamily> {
    match family {
        CodeFamily::Smooth => Ok(CodeFamily::Ldc),
        CodeFamily::RandomizedSmooth => Ok(CodeFamily::RandomizedLdc),
        CodeFamily::SmoothQuantum => Ok(CodeFamily::Ldqc),
        other => Err(Error::Invalid(format!(
            "smooth_to_ldc expects a smooth kind, got {}",
            other.name()
        ))),
    }
}

fn ldc_to_smooth_family(family: CodeFamily) -> Result<CodeFamily> {
    match family {
        CodeFamily::Ldc => Ok(CodeFamily::Smooth),
        CodeFamily::RandomizedLdc => Ok(CodeFamily::RandomizedSmooth),
        CodeFamily::Ldqc => Ok(CodeFamily::SmoothQuantum),
        other => Err(Error::Invalid(format!(
            "ldc_to_smooth expects a locally decodable kind, got {}",
            other.name()
        ))),
    }
}

/// (q,c,ε)-smooth → (q,δ,ε−δc)-locally decodable, for δ ≤ ε/c. The decoder
/// is unchanged. Applies to classical, randomized, and quantum kinds and
/// their μ-average versions.
pub fn smooth_to_ldc(params: &CodeParams, delta: f64) -> Result<ConvertedParams> {
    let family = smooth_to_ldc_family(params.kind.family)?;
    let c = params.second;
    if delta > params.eps / c + 1e-12 {
        return Err(Error::DeltaTooLarge {
            delta,
            bound: params.eps / c,
        });
    }
    if delta < 0.0 {
        return Err(Error::Invalid(format!("δ = {delta} must be nonnegative")));
    }
    let eps = params.eps - delta * c;
    Ok(ConvertedParams {
        kind: CodeKind {
            family,
            mu_average: params.kind.mu_average,
        },
        q: params.q,
        second: delta,
        eps,
        degenerate: eps <= 0.0,
    })
}

pub struct SmoothedDecoder {
    pub decoder: QuantumDecoder,
    pub params: CodeParams,
    /// Heavy sets H_i: positions queried with probability above q/(δm).
    pub heavy: Vec<QuerySet>,
}

/// (q,δ,ε)-locally decodable quantum → (q,q/δ,ε)-smooth quantum. The new
/// decoder never queries the heavy positions H_i = {j : p_i(j) > q/(δm)};
/// it measures the contracted observable that treats them as maximally
/// mixed. Success on uncorrupted codewords equals the old decoder's success
/// on codewords whose heavy qubits were replaced by I/2.
pub fn ldc_to_smooth(
    code: &QuantumCode,
    dec: &QuantumDecoder,
    params: &CodeParams,
    tol: &Tolerances,
) -> Result<SmoothedDecoder> {
    let family = ldc_to_smooth_family(params.kind.family)?;
    if family != CodeFamily::SmoothQuantum {
        return Err(Error::Invalid(
            "this decoder transform operates on quantum codes; classical kinds embed first".into(),
        ));
    }
    let n = code.n();
    let m = code.m();
    let q = params.q;
    let delta = params.second;
    if delta <= 0.0 {
        return Err(Error::Invalid(
            "δ must be positive to trade noise for smoothness".into(),
        ));
    }
    let threshold = q as f64 / (delta * m as f64);
    let flip_budget = (delta * m as f64).floor() as usize;

    let mut heavy = Vec::with_capacity(n);
    let mut entries: Vec<Vec<(f64, QuerySet)>> = Vec::with_capacity(n);
    let mut gathered: BTreeMap<(usize, QuerySet), Vec<(f64, TwoOutcomeMeasurement)>> =
        BTreeMap::new();
    for i in 0..n {
        let marginal = dec.plan().marginal(i);
        let h: Vec<usize> = (0..m)
            .filter(|&j| marginal[j] > threshold + 1e-12)
            .collect();
        if h.len() > flip_budget {
            return Err(Error::HeavySetTooLarge {
                i,
                size: h.len(),
                budget: flip_budget,
            });
        }
        let h_set = QuerySet::from_positions(&h);
        heavy.push(h_set);

        let mut row: BTreeMap<QuerySet, f64> = BTreeMap::new();
        for (p, set) in dec.plan().entries(i) {
            if *p <= 0.0 {
                continue;
            }
            let meas = dec
                .measurement(i, set)
                .ok_or_else(|| Error::Invalid(format!("missing measurement for set {set}")))?;
            let kept = set.difference(&h_set);
            let new_meas = if kept == *set {
                meas.clone()
            } else {
                contract_measurement(meas, set, &kept, tol)?
            };
            *row.entry(kept).or_insert(0.0) += *p;
            gathered.entry((i, kept)).or_default().push((*p, new_meas));
        }
        entries.push(row.into_iter().map(|(s, p)| (p, s)).collect());
    }

    // Merge duplicate contracted sets by probability-weighted mixture; the
    // success functional is linear in the measurement operators, so this is
    // exact.
    let mut measurements = BTreeMap::new();
    for ((i, set), parts) in gathered {
        let mut iter = parts.into_iter();
        let (w0, first) = iter.next().expect("nonempty");
        let mut total = w0;
        let mut merged = first;
        for (w, meas) in iter {
            merged = merged.mix(total, &meas, w)?;
            total += w;
        }
        measurements.insert((i, set), merged);
    }

    let plan = QueryPlan::new(n, m, q, entries, tol)?;
    let decoder = QuantumDecoder::new(plan, measurements)?;
    let params = CodeParams::new(
        CodeKind {
            family: CodeFamily::SmoothQuantum,
            mu_average: params.kind.mu_average,
        },
        q,
        q as f64 / delta,
        params.eps,
    )?;
    Ok(SmoothedDecoder {
        decoder,
        params,
        heavy,
    })
}

/// Contract a measurement on `set` down to `kept` ⊆ set by treating the
/// dropped qubits as maximally mixed: A' = Tr_dropped(A) / 2^#dropped.
fn contract_measurement(
    meas: &TwoOutcomeMeasurement,
    set: &QuerySet,
    kept: &QuerySet,
    tol: &Tolerances,
) -> Result<TwoOutcomeMeasurement> {
    let positions = set.positions();
    let k = positions.len();
    // Indices of the kept positions within the tuple.
    let kept_within: Vec<usize> = positions
        .iter()
        .enumerate()
        .filter(|(_, p)| kept.contains(**p))
        .map(|(t, _)| t)
        .collect();
    let plus = extract_from_qubits(meas.plus_op(), &kept_within, k)?;
    let minus = extract_from_qubits(meas.minus_op(), &kept_within, k)?;
    TwoOutcomeMeasurement::new(plus, minus, tol)
}
