//! The worst-case decoder game: rows are databases, columns are
//! (matching, functions) decoding strategies, entries are exact success
//! probabilities, and the optimal mixture comes from the zero-sum LP.

use super::lp::{rational, rational_to_f64, solve_zero_sum};
use crate::codes::{
    ClassicalCode, ClassicalCodeRef, ClassicalDecoder, InputDistribution, OutputTable, QuerySet,
    Word,
};
use crate::error::{Error, Result};
use crate::reduce::matching::good_query_sets_classical;
use crate::rng::stream;
use crate::tol::Tolerances;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

/// One decoding strategy: query a uniform set from the matching, apply its
/// function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub matching: Vec<QuerySet>,
    /// Aligned with `matching`.
    pub tables: Vec<OutputTable>,
}

#[derive(Debug)]
pub struct CandidatePool {
    pub i: usize,
    pub candidates: Vec<Candidate>,
    /// True when every (matching, functions) pair with the required matching
    /// size was enumerated; false when the budget forced a generator-based
    /// subset, in which case the minimax value is only a lower bound.
    pub exhaustive: bool,
}

/// Rows indexed by every database x, columns by pool candidates; entries are
/// the exact success probabilities of the column's decoder on the row.
#[derive(Debug)]
pub struct GameMatrix {
    pub rows: Vec<Word>,
    pub entries: Vec<Vec<BigRational>>,
}

pub fn game_matrix(code: &ClassicalCode, i: usize, pool: &[Candidate]) -> GameMatrix {
    let rows: Vec<Word> = Word::all(code.n()).collect();
    let entries = rows
        .iter()
        .map(|x| {
            let codeword = code.encode(x);
            pool.iter()
                .map(|cand| {
                    // Σ over sets of (1 + x_i·f_r(y|_r)) / (2|M|), exactly.
                    let mut numer = 0i64;
                    for (set, table) in cand.matching.iter().zip(&cand.tables) {
                        let out = table.eval(&codeword.restrict(&set.positions()));
                        numer += 1 + i64::from(x.sign(i)) * i64::from(out);
                    }
                    rational(numer, 2 * cand.matching.len() as i64)
                })
                .collect()
        })
        .collect();
    GameMatrix { rows, entries }
}

#[derive(Debug)]
pub struct MinimaxSolution {
    /// Game value: the worst-case (over databases) success of the optimal
    /// mixture. A lower bound on the true optimum when the pool was
    /// truncated.
    pub value: BigRational,
    pub gap: BigRational,
    /// (candidate index, weight) with nonzero weight.
    pub nu: Vec<(usize, BigRational)>,
    /// Adversary's optimal database mixture.
    pub row_strategy: Vec<(Word, BigRational)>,
    pub pool_exhaustive: bool,
    pub pivots: u64,
}

impl MinimaxSolution {
    pub fn value_f64(&self) -> f64 {
        rational_to_f64(&self.value)
    }

    pub fn gap_f64(&self) -> f64 {
        rational_to_f64(&self.gap)
    }
}

/// Solve the game over the pool by linear programming.
pub fn minimax_decoder(
    code: &ClassicalCode,
    i: usize,
    pool: &CandidatePool,
) -> Result<MinimaxSolution> {
    if pool.candidates.is_empty() {
        return Err(Error::Invalid("candidate pool is empty".into()));
    }
    let matrix = game_matrix(code, i, &pool.candidates);
    let solution = solve_zero_sum(&matrix.entries)?;
    let nu = solution
        .col_strategy
        .iter()
        .enumerate()
        .filter(|(_, w)| !w.is_zero())
        .map(|(k, w)| (k, w.clone()))
        .collect();
    let row_strategy = matrix
        .rows
        .iter()
        .zip(&solution.row_strategy)
        .filter(|(_, w)| !w.is_zero())
        .map(|(x, w)| (*x, w.clone()))
        .collect();
    Ok(MinimaxSolution {
        value: solution.value,
        gap: solution.gap,
        nu,
        row_strategy,
        pool_exhaustive: pool.exhaustive,
        pivots: solution.pivots,
    })
}

/// Output table with identifier `id`: bit w of `id` sets the value on the
/// w'th queried pattern (+1 when set, −1 otherwise).
fn table_from_id(arity: usize, id: u64) -> OutputTable {
    let values = (0..(1usize << arity))
        .map(|w| if (id >> w) & 1 == 1 { 1 } else { -1 })
        .collect();
    OutputTable::new(arity, values).expect("values sized to arity")
}

/// Enumerate candidate (matching, functions) pairs for index i.
///
/// Exhaustive mode walks every disjoint family of query sets of size ≤ q
/// with at least ⌈εm/(qc)⌉ members and every ±1 function assignment, as long
/// as the pool fits the budget. Otherwise candidates are generated from the
/// good-edge structure under a battery of test distributions (uniform, all
/// point masses, and seeded random ones) and the pool is flagged truncated.
#[allow(clippy::too_many_arguments)]
pub fn enumerate_candidate_pool(
    code: &ClassicalCode,
    dec: &ClassicalDecoder,
    i: usize,
    q: usize,
    c: f64,
    eps: f64,
    budget: u64,
    seed: u64,
    tol: &Tolerances,
) -> Result<CandidatePool> {
    let m = code.m();
    let min_size = ((eps * m as f64 / (q as f64 * c)) - 1e-9).ceil().max(1.0) as usize;
    let sets = QuerySet::all_up_to(m, q);

    // Count first; enumerate only if the budget holds.
    let mut count: u128 = 0;
    let stack_count = |count: &mut u128| -> bool {
        fn walk(
            sets: &[QuerySet],
            start: usize,
            used: QuerySet,
            size: usize,
            tables_product: u128,
            min_size: usize,
            count: &mut u128,
            budget: u128,
        ) -> bool {
            if size >= min_size {
                *count += tables_product;
                if *count > budget {
                    return false;
                }
            }
            for j in start..sets.len() {
                if sets[j].is_disjoint(&used) {
                    let factor = 1u128 << (1usize << sets[j].size());
                    if !walk(
                        sets,
                        j + 1,
                        used.union(&sets[j]),
                        size + 1,
                        tables_product.saturating_mul(factor),
                        min_size,
                        count,
                        budget,
                    ) {
                        return false;
                    }
                }
            }
            true
        }
        walk(
            &sets,
            0,
            QuerySet::empty(),
            0,
            1,
            min_size,
            count,
            budget as u128,
        )
    };

    if stack_count(&mut count) {
        // Exhaustive enumeration: DFS over disjoint families in canonical
        // order; for each family of admissible size, every ±1 function
        // assignment via a mixed-radix counter.
        fn all_assignments(matching: &[QuerySet], candidates: &mut Vec<Candidate>) {
            let radices: Vec<u64> = matching
                .iter()
                .map(|s| 1u64 << (1usize << s.size()))
                .collect();
            let mut digits = vec![0u64; matching.len()];
            loop {
                let tables: Vec<OutputTable> = matching
                    .iter()
                    .zip(&digits)
                    .map(|(s, &d)| table_from_id(s.size(), d))
                    .collect();
                candidates.push(Candidate {
                    matching: matching.to_vec(),
                    tables,
                });
                let mut k = 0;
                loop {
                    if k == digits.len() {
                        return;
                    }
                    digits[k] += 1;
                    if digits[k] < radices[k] {
                        break;
                    }
                    digits[k] = 0;
                    k += 1;
                }
            }
        }
        fn walk(
            sets: &[QuerySet],
            start: usize,
            used: QuerySet,
            matching: &mut Vec<QuerySet>,
            min_size: usize,
            candidates: &mut Vec<Candidate>,
        ) {
            if matching.len() >= min_size {
                all_assignments(matching, candidates);
            }
            for j in start..sets.len() {
                if sets[j].is_disjoint(&used) {
                    matching.push(sets[j]);
                    walk(
                        sets,
                        j + 1,
                        used.union(&sets[j]),
                        matching,
                        min_size,
                        candidates,
                    );
                    matching.pop();
                }
            }
        }
        let mut candidates = Vec::with_capacity(count as usize);
        let mut matching = Vec::new();
        walk(
            &sets,
            0,
            QuerySet::empty(),
            &mut matching,
            min_size,
            &mut candidates,
        );
        Ok(CandidatePool {
            i,
            candidates,
            exhaustive: true,
        })
    } else {
        // Generator mode: good-edge matchings under a battery of test
        // distributions with their majority-vote functions.
        let n = code.n();
        let mut battery: Vec<InputDistribution> = vec![InputDistribution::uniform(n)];
        for x in Word::all(n) {
            battery.push(InputDistribution::point_mass(x));
        }
        let mut rng = stream(seed, "pir-pool-battery");
        for _ in 0..8 {
            let mut weights: Vec<f64> =
                (0..(1usize << n)).map(|_| -rng.gen::<f64>().ln()).collect();
            let total: f64 = weights.iter().sum();
            for w in &mut weights {
                *w /= total;
            }
            battery.push(InputDistribution::from_weights(n, weights, tol)?);
        }
        let mut candidates: Vec<Candidate> = Vec::new();
        for mu in &battery {
            let edges =
                good_query_sets_classical(ClassicalCodeRef::Plain(code), dec, i, mu, eps, tol)?;
            if edges.edges.is_empty() {
                continue;
            }
            let mut used = QuerySet::empty();
            let mut matching = Vec::new();
            for e in &edges.edges {
                if e.is_disjoint(&used) {
                    used = used.union(e);
                    matching.push(*e);
                }
            }
            if matching.len() < min_size {
                continue;
            }
            let tables: Vec<OutputTable> = matching
                .iter()
                .map(|set| majority_table(code, i, set, mu))
                .collect();
            let candidate = Candidate { matching, tables };
            if !candidates.contains(&candidate) {
                candidates.push(candidate);
            }
        }
        if candidates.is_empty() {
            return Err(Error::Invalid(
                "no candidates found; the code has no good query sets at this ε".into(),
            ));
        }
        Ok(CandidatePool {
            i,
            candidates,
            exhaustive: false,
        })
    }
}

/// Best deterministic response on one set under μ: majority vote of x_i over
/// the messages consistent with each queried pattern. Ties go to +1.
fn majority_table(
    code: &ClassicalCode,
    i: usize,
    set: &QuerySet,
    mu: &InputDistribution,
) -> OutputTable {
    let positions = set.positions();
    let k = positions.len();
    let mut score = vec![0.0f64; 1 << k];
    for (x, w) in mu.support() {
        let pattern = code.encode(&x).restrict(&positions).index();
        score[pattern] += w * f64::from(x.sign(i));
    }
    let values = score
        .iter()
        .map(|&s| if s >= 0.0 { 1 } else { -1 })
        .collect();
    OutputTable::new(k, values).expect("sized values")
}
