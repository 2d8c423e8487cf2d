//! The code-spec file format: a declarative, human-writable TOML document
//! naming a code (generator or explicit table) and its decoder.
//!
//! ```toml
//! kind = "smooth-quantum"        # claimed kind
//!
//! [code]
//! type = "quantum"               # classical | randomized | quantum
//! generator = "qrac2"            # hadamard | basis | qrac2 | qrac3 | random
//! n = 2                          # generator parameters
//! # m = 3, q = 2, seed = 7      # extra parameters for `random`
//!
//! # Explicit codes instead of a generator:
//! # codewords = ["++", "+-", "-+", "--"]   # classical, message-index order
//! # [[code.rows]]                           # randomized
//! # x = "++"
//! # entries = [{ p = 0.5, w = "++" }, { p = 0.5, w = "--" }]
//! # [[code.states]]                         # quantum, [row][col] = [re, im]
//! # x = "+"
//! # matrix = [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]
//!
//! [decoder]                      # required for explicit codes
//! q = 2
//! [[decoder.plan]]
//! i = 1                          # 1-based message index
//! r = [1, 2]                     # 1-based queried positions
//! p = 0.5
//! [[decoder.output]]             # classical: value per queried pattern in
//! i = 1                          # pattern-index order; '+', '-', or '?'
//! r = [1, 2]                     # (fair coin)
//! table = "+--+"
//! [[decoder.measurement]]        # quantum: observable in the Pauli basis
//! i = 1
//! r = [1]
//! pauli = { Z = 1.0 }
//! ```
//!
//! Probabilities that do not normalize are rejected, as are truth tables and
//! measurements of the wrong arity.

use crate::codes::{
    basis_code, hadamard_code, qrac_2to1, qrac_3to1, random_smooth_instance, ClassicalCode,
    ClassicalDecoder, CodeInstance, CodeKind, CodeParams, InputDistribution, OutputTable,
    QuantumCode, QuantumDecoder, QueryPlan, QuerySet, RandomizedCode, Word,
};
use crate::error::{Error, Result};
use crate::quantum::{
    pauli_matrix, ComplexMatrix, DensityOperator, PauliString, TwoOutcomeMeasurement,
};
use crate::tol::Tolerances;
use num_complex::Complex64;
use serde::Deserialize;
use std::collections::BTreeMap;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDoc {
    kind: Option<String>,
    code: CodeSection,
    decoder: Option<DecoderSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CodeSection {
    #[serde(rename = "type")]
    species: String,
    generator: Option<String>,
    n: Option<usize>,
    m: Option<usize>,
    q: Option<usize>,
    seed: Option<u64>,
    codewords: Option<Vec<String>>,
    rows: Option<Vec<RowSection>>,
    states: Option<Vec<StateSection>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowSection {
    x: String,
    entries: Vec<RowEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowEntry {
    p: f64,
    w: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateSection {
    x: String,
    matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecoderSection {
    q: usize,
    plan: Vec<PlanRow>,
    #[serde(default)]
    output: Vec<OutputRow>,
    #[serde(default)]
    measurement: Vec<MeasurementRow>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanRow {
    i: usize,
    r: Vec<usize>,
    p: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputRow {
    i: usize,
    r: Vec<usize>,
    table: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasurementRow {
    i: usize,
    r: Vec<usize>,
    pauli: BTreeMap<String, f64>,
}

#[derive(Debug)]
pub struct ParsedSpec {
    pub instance: CodeInstance,
    pub claimed_kind: Option<CodeKind>,
    /// Measured parameters for generated instances that carry them.
    pub measured: Option<CodeParams>,
}

pub fn parse_code_spec(text: &str, tol: &Tolerances) -> Result<ParsedSpec> {
    let doc: SpecDoc = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let claimed_kind = doc.kind.as_deref().map(CodeKind::parse).transpose()?;
    let mut measured = None;

    let instance = if let Some(generator) = &doc.code.generator {
        if doc.decoder.is_some() {
            return Err(Error::Parse(
                "generator codes bring their own decoder; remove the [decoder] section".into(),
            ));
        }
        let n = doc
            .code
            .n
            .ok_or_else(|| Error::Parse("generator needs n".into()))?;
        match generator.as_str() {
            "hadamard" => {
                let (code, decoder) = hadamard_code(n, tol)?;
                CodeInstance::Classical { code, decoder }
            }
            "basis" => {
                let (code, decoder) = basis_code(n, tol)?;
                CodeInstance::Quantum { code, decoder }
            }
            "qrac2" => {
                let q = qrac_2to1(tol)?;
                CodeInstance::Quantum {
                    code: q.code,
                    decoder: q.decoder,
                }
            }
            "qrac3" => {
                let q = qrac_3to1(tol)?;
                CodeInstance::Quantum {
                    code: q.code,
                    decoder: q.decoder,
                }
            }
            "random" => {
                let m = doc
                    .code
                    .m
                    .ok_or_else(|| Error::Parse("random needs m".into()))?;
                let q = doc
                    .code
                    .q
                    .ok_or_else(|| Error::Parse("random needs q".into()))?;
                let seed = doc.code.seed.unwrap_or(0);
                let inst = random_smooth_instance(seed, n, m, q, tol)?;
                measured = Some(inst.params);
                CodeInstance::Quantum {
                    code: inst.code,
                    decoder: inst.decoder,
                }
            }
            other => return Err(Error::Parse(format!("unknown generator {other:?}"))),
        }
    } else {
        let decoder_doc = doc
            .decoder
            .as_ref()
            .ok_or_else(|| Error::Parse("explicit codes need a [decoder] section".into()))?;
        match doc.code.species.as_str() {
            "classical" => {
                let code = parse_classical(&doc.code)?;
                let decoder = parse_classical_decoder(decoder_doc, code.n(), code.m(), tol)?;
                CodeInstance::Classical { code, decoder }
            }
            "randomized" => {
                let code = parse_randomized(&doc.code, tol)?;
                let decoder = parse_classical_decoder(decoder_doc, code.n(), code.m(), tol)?;
                CodeInstance::Randomized { code, decoder }
            }
            "quantum" => {
                let code = parse_quantum(&doc.code, tol)?;
                let decoder = parse_quantum_decoder(decoder_doc, code.n(), code.m(), tol)?;
                CodeInstance::Quantum { code, decoder }
            }
            other => return Err(Error::Parse(format!("unknown code type {other:?}"))),
        }
    };
    Ok(ParsedSpec {
        instance,
        claimed_kind,
        measured,
    })
}

fn parse_classical(code: &CodeSection) -> Result<ClassicalCode> {
    let words = code
        .codewords
        .as_ref()
        .ok_or_else(|| Error::Parse("classical codes need `codewords`".into()))?;
    if words.is_empty() || !words.len().is_power_of_two() {
        return Err(Error::Parse(format!(
            "codeword count {} is not a power of two",
            words.len()
        )));
    }
    let n = words.len().trailing_zeros() as usize;
    let table = words
        .iter()
        .map(|w| Word::parse(w))
        .collect::<Result<Vec<_>>>()?;
    let m = table[0].len();
    ClassicalCode::new(n, m, table)
}

fn parse_randomized(code: &CodeSection, tol: &Tolerances) -> Result<RandomizedCode> {
    let rows = code
        .rows
        .as_ref()
        .ok_or_else(|| Error::Parse("randomized codes need [[code.rows]]".into()))?;
    if rows.is_empty() || !rows.len().is_power_of_two() {
        return Err(Error::Parse("row count is not a power of two".into()));
    }
    let n = rows.len().trailing_zeros() as usize;
    let mut table: Vec<Option<Vec<(f64, Word)>>> = vec![None; 1 << n];
    let mut m = None;
    for row in rows {
        let x = Word::parse(&row.x)?;
        if x.len() != n {
            return Err(Error::Parse(format!("message {} has wrong length", row.x)));
        }
        let entries = row
            .entries
            .iter()
            .map(|e| Ok((e.p, Word::parse(&e.w)?)))
            .collect::<Result<Vec<_>>>()?;
        if let Some((_, w)) = entries.first() {
            m.get_or_insert(w.len());
        }
        if table[x.index()].replace(entries).is_some() {
            return Err(Error::Parse(format!("duplicate row for x = {}", row.x)));
        }
    }
    let m = m.ok_or_else(|| Error::Parse("no row entries".into()))?;
    let rows = table
        .into_iter()
        .enumerate()
        .map(|(k, r)| {
            r.ok_or_else(|| {
                Error::Parse(format!(
                    "missing row for x = {}",
                    Word::from_index(k as u64, n)
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    RandomizedCode::new(n, m, rows, tol)
}

fn parse_quantum(code: &CodeSection, tol: &Tolerances) -> Result<QuantumCode> {
    let states = code
        .states
        .as_ref()
        .ok_or_else(|| Error::Parse("quantum codes need [[code.states]]".into()))?;
    if states.is_empty() || !states.len().is_power_of_two() {
        return Err(Error::Parse("state count is not a power of two".into()));
    }
    let n = states.len().trailing_zeros() as usize;
    let mut parsed: Vec<Option<DensityOperator>> = vec![None; 1 << n];
    let mut m = None;
    for s in states {
        let x = Word::parse(&s.x)?;
        let dim = s.matrix.len();
        if !dim.is_power_of_two() || dim == 0 {
            return Err(Error::Parse(format!(
                "matrix dimension {dim} is not a power of two"
            )));
        }
        let qubits = dim.trailing_zeros() as usize;
        m.get_or_insert(qubits);
        let mut entries = Vec::with_capacity(dim * dim);
        for row in &s.matrix {
            if row.len() != dim {
                return Err(Error::Parse("matrix is not square".into()));
            }
            for &[re, im] in row {
                entries.push(Complex64::new(re, im));
            }
        }
        let matrix = ComplexMatrix::from_entries(dim, entries)?;
        let rho = DensityOperator::new(qubits, matrix, tol)?;
        if parsed[x.index()].replace(rho).is_some() {
            return Err(Error::Parse(format!("duplicate state for x = {}", s.x)));
        }
    }
    let m = m.unwrap();
    let states = parsed
        .into_iter()
        .enumerate()
        .map(|(k, r)| {
            r.ok_or_else(|| {
                Error::Parse(format!(
                    "missing state for x = {}",
                    Word::from_index(k as u64, n)
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    QuantumCode::new(n, m, states)
}

fn parse_plan(doc: &DecoderSection, n: usize, m: usize, tol: &Tolerances) -> Result<QueryPlan> {
    let mut entries: Vec<Vec<(f64, QuerySet)>> = vec![Vec::new(); n];
    for row in &doc.plan {
        let i = one_based(row.i, n, "plan index i")?;
        let set = parse_set(&row.r, m)?;
        entries[i].push((row.p, set));
    }
    QueryPlan::new(n, m, doc.q, entries, tol)
}

fn parse_classical_decoder(
    doc: &DecoderSection,
    n: usize,
    m: usize,
    tol: &Tolerances,
) -> Result<ClassicalDecoder> {
    if !doc.measurement.is_empty() {
        return Err(Error::Parse(
            "classical decoders use [[decoder.output]], not measurements".into(),
        ));
    }
    let plan = parse_plan(doc, n, m, tol)?;
    let mut outputs = BTreeMap::new();
    for row in &doc.output {
        let i = one_based(row.i, n, "output index i")?;
        let set = parse_set(&row.r, m)?;
        let values = row
            .table
            .chars()
            .map(|ch| match ch {
                '+' => Ok(1i8),
                '-' => Ok(-1i8),
                '?' => Ok(0i8),
                other => Err(Error::Parse(format!("invalid table character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        outputs.insert((i, set), OutputTable::new(set.size(), values)?);
    }
    ClassicalDecoder::new(plan, outputs)
}

fn parse_quantum_decoder(
    doc: &DecoderSection,
    n: usize,
    m: usize,
    tol: &Tolerances,
) -> Result<QuantumDecoder> {
    if !doc.output.is_empty() {
        return Err(Error::Parse(
            "quantum decoders use [[decoder.measurement]], not output tables".into(),
        ));
    }
    let plan = parse_plan(doc, n, m, tol)?;
    let mut measurements = BTreeMap::new();
    for row in &doc.measurement {
        let i = one_based(row.i, n, "measurement index i")?;
        let set = parse_set(&row.r, m)?;
        let k = set.size();
        let mut obs = ComplexMatrix::zeros(1 << k);
        for (word, coeff) in &row.pauli {
            let s = PauliString::parse(word)?;
            if s.len() != k {
                return Err(Error::Parse(format!(
                    "Pauli word {word} has length {}, the query set has {k} positions",
                    s.len()
                )));
            }
            obs = obs.add(&pauli_matrix(&s).scale_re(*coeff))?;
        }
        measurements.insert((i, set), TwoOutcomeMeasurement::from_observable(&obs, tol)?);
    }
    QuantumDecoder::new(plan, measurements)
}

fn one_based(value: usize, bound: usize, what: &str) -> Result<usize> {
    if value == 0 || value > bound {
        return Err(Error::Parse(format!(
            "{what} = {value} out of range 1..={bound}"
        )));
    }
    Ok(value - 1)
}

fn parse_set(positions: &[usize], m: usize) -> Result<QuerySet> {
    let zero_based = positions
        .iter()
        .map(|&p| one_based(p, m, "query position"))
        .collect::<Result<Vec<_>>>()?;
    Ok(QuerySet::from_positions(&zero_based))
}

#[derive(Debug, Deserialize)]
struct MuDoc {
    weights: Vec<MuRow>,
}

#[derive(Debug, Deserialize)]
struct MuRow {
    x: String,
    w: f64,
}

/// Explicit input distribution: `[[weights]]` rows of message and weight;
/// unlisted messages get weight 0.
pub fn parse_mu(text: &str, n: usize, tol: &Tolerances) -> Result<InputDistribution> {
    let doc: MuDoc = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut weights = vec![0.0; 1 << n];
    for row in &doc.weights {
        let x = Word::parse(&row.x)?;
        if x.len() != n {
            return Err(Error::Parse(format!(
                "message {} has length {}, expected {n}",
                row.x,
                x.len()
            )));
        }
        weights[x.index()] += row.w;
    }
    InputDistribution::from_weights(n, weights, tol)
}
