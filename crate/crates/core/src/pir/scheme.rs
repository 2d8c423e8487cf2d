//! Private information retrieval from smooth codes.
//!
//! The user completes each matching M_i to exactly m/q disjoint q-tuples
//! covering every position, picks a tuple uniformly, and sends one position
//! to each of the q servers under a uniformly random tuple→server
//! assignment. Each server's query is then exactly uniform over [m]
//! (probability q/m of the tuple × 1/q for the slot), independent of i.
//! If the tuple was one of the good sets the answers decode through the
//! smooth decoder's output table, otherwise the user flips a fair coin.

use crate::codes::{ClassicalCode, InputDistribution, OutputTable, QuerySet, Word};
use crate::error::{Error, Result};
use crate::rng::stream;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::lp::{rational, rational_to_f64};

/// Append constant +1 bits until q divides the code length. Kept separate
/// from scheme construction so the length change stays visible to callers;
/// decoders for the original code remain valid on the padded one.
pub fn pad_to_multiple(code: &ClassicalCode, q: usize) -> Result<ClassicalCode> {
    if q == 0 {
        return Err(Error::Invalid("q must be positive".into()));
    }
    let m = code.m();
    let padded_m = m.div_ceil(q) * q;
    if padded_m == m {
        return Ok(code.clone());
    }
    let table = Word::all(code.n())
        .map(|x| {
            let mut signs = code.encode(&x).signs();
            signs.resize(padded_m, 1);
            Word::from_signs(&signs)
        })
        .collect();
    ClassicalCode::new(code.n(), padded_m, table)
}

/// Complete a disjoint family to exactly m/q disjoint q-tuples covering [m]:
/// undersized tuples are padded from the unused positions in ascending
/// order, then the remaining unused positions are chunked in ascending runs.
pub fn complete_matching(matching: &[QuerySet], m: usize, q: usize) -> Result<Vec<QuerySet>> {
    if q == 0 || !m.is_multiple_of(q) {
        return Err(Error::QDoesNotDivideM { q, m });
    }
    let mut used = QuerySet::empty();
    for set in matching {
        if !set.is_disjoint(&used) {
            return Err(Error::Invalid("matching sets overlap".into()));
        }
        if set.size() > q {
            return Err(Error::QueryBudgetExceeded { got: set.size(), q });
        }
        used = used.union(set);
    }
    let mut unused: Vec<usize> = (0..m).filter(|&p| !used.contains(p)).collect();
    unused.reverse(); // pop() takes the smallest
    let mut completed = Vec::with_capacity(m / q);
    for set in matching {
        let mut positions = set.positions();
        while positions.len() < q {
            positions.push(unused.pop().ok_or_else(|| {
                Error::Invalid("not enough unused positions to pad the matching".into())
            })?);
        }
        completed.push(QuerySet::from_positions(&positions));
    }
    while !unused.is_empty() {
        let chunk: Vec<usize> = (0..q).filter_map(|_| unused.pop()).collect();
        if chunk.len() != q {
            return Err(Error::Invalid(
                "leftover positions do not fill a tuple".into(),
            ));
        }
        completed.push(QuerySet::from_positions(&chunk));
    }
    debug_assert_eq!(completed.len(), m / q);
    Ok(completed)
}

/// One-round multi-server retrieval scheme.
#[derive(Debug, Clone)]
pub struct PirScheme {
    pub n: usize,
    pub m: usize,
    pub q: usize,
    pub code: ClassicalCode,
    /// Per index i: exact distribution over ordered position tuples, entry
    /// k of a tuple going to server k.
    pub query_dists: Vec<Vec<(BigRational, Vec<usize>)>>,
    /// Reconstruction data: the good sets per index with their output
    /// tables. Tuples outside the good family decode as a fair coin.
    pub recon: Option<PirReconstruction>,
}

#[derive(Debug, Clone)]
pub struct PirReconstruction {
    pub matchings: Vec<Vec<QuerySet>>,
    pub tables: BTreeMap<(usize, QuerySet), OutputTable>,
    /// Fraction of tuples that decode (|M_i| / (m/q)) per index.
    pub good_fraction: Vec<BigRational>,
}

impl PirScheme {
    /// The answer each server computes: the requested codeword bit.
    pub fn answer(&self, x: &Word, position: usize) -> i8 {
        self.code.encode(x).sign(position)
    }

    /// Exact μ-average success probability of retrieval for index i.
    pub fn analytic_success(&self, i: usize, mu: &InputDistribution) -> Result<f64> {
        let recon = self
            .recon
            .as_ref()
            .ok_or_else(|| Error::Invalid("scheme has no reconstruction data".into()))?;
        let mut acc = 0.0;
        for (prob, tuple) in &self.query_dists[i] {
            let set = QuerySet::from_positions(tuple);
            let p = rational_to_f64(prob);
            if let Some(table) = recon.tables.get(&(i, set)) {
                let positions = set.positions();
                for (x, weight) in mu.support() {
                    let out = table.eval(&self.code.encode(&x).restrict(&positions));
                    acc += p * weight * (1.0 + f64::from(x.sign(i)) * f64::from(out)) / 2.0;
                }
            } else {
                acc += p * 0.5;
            }
        }
        Ok(acc)
    }
}

/// Build the scheme from a smooth code's matchings and output tables.
/// `matchings[i]` are the good sets for index i; `tables` their decode
/// functions.
pub fn build_pir_scheme(
    code: &ClassicalCode,
    q: usize,
    matchings: Vec<Vec<QuerySet>>,
    tables: BTreeMap<(usize, QuerySet), OutputTable>,
) -> Result<PirScheme> {
    let n = code.n();
    let m = code.m();
    if matchings.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: matchings.len(),
        });
    }
    let tuples_per_index = m / q.max(1);
    let mut query_dists = Vec::with_capacity(n);
    let mut good_fraction = Vec::with_capacity(n);
    for matching in &matchings {
        let completed = complete_matching(matching, m, q)?;
        let perms = permutations(q);
        let weight = rational(1, (tuples_per_index * perms.len()) as i64);
        let mut dist = Vec::with_capacity(completed.len() * perms.len());
        for tuple in &completed {
            let positions = tuple.positions();
            for perm in &perms {
                let assigned: Vec<usize> = perm.iter().map(|&k| positions[k]).collect();
                dist.push((weight.clone(), assigned));
            }
        }
        good_fraction.push(rational(matching.len() as i64, tuples_per_index as i64));
        query_dists.push(dist);
    }
    Ok(PirScheme {
        n,
        m,
        q,
        code: code.clone(),
        query_dists,
        recon: Some(PirReconstruction {
            matchings,
            tables,
            good_fraction,
        }),
    })
}

fn permutations(q: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..q {
        let mut next = Vec::new();
        for p in &out {
            for v in 0..q {
                if !p.contains(&v) {
                    let mut np = p.clone();
                    np.push(v);
                    next.push(np);
                }
            }
        }
        out = next;
    }
    out
}

/// One simulated retrieval.
#[derive(Debug, Clone)]
pub struct TranscriptRow {
    pub trial: usize,
    pub i: usize,
    pub x: Word,
    /// Query sent to each server.
    pub queries: Vec<usize>,
    /// Each server's answered bit.
    pub answers: Vec<i8>,
    pub output: i8,
    pub correct: bool,
}

#[derive(Debug)]
pub struct TranscriptLog {
    pub rows: Vec<TranscriptRow>,
    pub successes: usize,
}

impl TranscriptLog {
    pub fn success_rate(&self) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        self.successes as f64 / self.rows.len() as f64
    }

    /// The external transcript format: one CSV row per retrieval.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,i,x,queries,answers,output,correct\n");
        for r in &self.rows {
            let queries: Vec<String> = r.queries.iter().map(|p| (p + 1).to_string()).collect();
            let answers: Vec<String> = r
                .answers
                .iter()
                .map(|a| if *a > 0 { "+".into() } else { "-".to_string() })
                .collect();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.trial,
                r.i + 1,
                r.x,
                queries.join(" "),
                answers.join(" "),
                if r.output > 0 { "+" } else { "-" },
                r.correct
            );
        }
        out
    }
}

/// Run seeded retrievals: x ~ μ, i uniform, tuple by the scheme's exact
/// distribution, reconstruction through the good-set tables.
pub fn simulate_retrievals(
    scheme: &PirScheme,
    trials: usize,
    seed: u64,
    mu: &InputDistribution,
) -> Result<TranscriptLog> {
    let recon = scheme
        .recon
        .as_ref()
        .ok_or_else(|| Error::Invalid("scheme has no reconstruction data".into()))?;
    let mut rng = stream(seed, "pir-retrievals");
    let support: Vec<(Word, f64)> = mu.support().collect();
    let mut rows = Vec::with_capacity(trials);
    let mut successes = 0usize;
    for trial in 0..trials {
        let x = sample_weighted(&support, rng.gen::<f64>());
        let i = rng.gen_range(0..scheme.n);
        let dist = &scheme.query_dists[i];
        let tuple = sample_tuple(dist, rng.gen::<f64>());
        let answers: Vec<i8> = tuple.iter().map(|&p| scheme.answer(&x, p)).collect();
        let set = QuerySet::from_positions(tuple);
        let output = match recon.tables.get(&(i, set)) {
            Some(table) => {
                // Reorder answers into ascending-position order.
                let positions = set.positions();
                let signs: Vec<i8> = positions
                    .iter()
                    .map(|p| {
                        let k = tuple.iter().position(|t| t == p).expect("tuple member");
                        answers[k]
                    })
                    .collect();
                let out = table.eval(&Word::from_signs(&signs));
                if out == 0 {
                    if rng.gen::<bool>() {
                        1
                    } else {
                        -1
                    }
                } else {
                    out
                }
            }
            None => {
                if rng.gen::<bool>() {
                    1
                } else {
                    -1
                }
            }
        };
        let correct = output == x.sign(i);
        if correct {
            successes += 1;
        }
        rows.push(TranscriptRow {
            trial,
            i,
            x,
            queries: tuple.clone(),
            answers,
            output,
            correct,
        });
    }
    Ok(TranscriptLog { rows, successes })
}

fn sample_weighted(support: &[(Word, f64)], draw: f64) -> Word {
    let mut acc = 0.0;
    for (w, p) in support {
        acc += p;
        if draw < acc {
            return *w;
        }
    }
    support.last().expect("nonempty support").0
}

fn sample_tuple(dist: &[(BigRational, Vec<usize>)], draw: f64) -> &Vec<usize> {
    let mut acc = BigRational::zero();
    for (p, tuple) in dist {
        acc += p;
        if draw < rational_to_f64(&acc) {
            return tuple;
        }
    }
    &dist.last().expect("nonempty distribution").1
}
