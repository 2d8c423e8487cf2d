//! Error type shared across the workbench.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not Hermitian: max |a - a†| = {deviation:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error(
        "operator is not positive semidefinite: eigenvalue {eigenvalue:.6e} below -{tolerance:.3e}"
    )]
    NotPositive { eigenvalue: f64, tolerance: f64 },

    #[error("trace {trace:.12} deviates from 1 by more than {tolerance:.3e}")]
    BadTrace { trace: f64, tolerance: f64 },

    #[error("measurement operators do not sum to identity (deviation {deviation:.3e})")]
    IncompleteMeasurement { deviation: f64 },

    #[error("Kraus operators violate completeness: max |ΣE†E - I| = {deviation:.3e}")]
    InvalidChannel { deviation: f64 },

    #[error("probabilities sum to {sum:.12}, not 1")]
    NotNormalized { sum: f64 },

    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("qubit count {requested} exceeds configured cap {cap}")]
    QubitCapExceeded { requested: usize, cap: usize },

    #[error("enumeration would need {needed} elementary evaluations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("empty Pauli string")]
    EmptyPauliString,

    #[error("invalid Pauli letter {0:?}; expected one of I, X, Y, Z")]
    InvalidPauliLetter(char),

    #[error("matching for index {i} has {got} sets, below the guaranteed {bound:.6} = εm/(qc); the input was not actually ({q},{c},{eps})-smooth")]
    MatchingGuaranteeViolated {
        i: usize,
        got: usize,
        bound: f64,
        q: usize,
        c: f64,
        eps: f64,
    },

    #[error("matching for index {0} is empty")]
    EmptyMatching(usize),

    #[error("query-set count {got} exceeds claimed budget q={q}")]
    QueryBudgetExceeded { got: usize, q: usize },

    #[error("δ = {delta} exceeds ε/c = {bound}")]
    DeltaTooLarge { delta: f64, bound: f64 },

    #[error("δ' = {delta_prime} exceeds the admissible bound {bound}")]
    DeltaPrimeTooLarge { delta_prime: f64, bound: f64 },

    #[error("heavy set H_{i} has {size} elements, above ⌊δm⌋ = {budget}; the input was not a (q,δ,ε)-locally decodable code")]
    HeavySetTooLarge {
        i: usize,
        size: usize,
        budget: usize,
    },

    #[error("q = {q} does not divide m = {m}; pad the code first (see pad_to_multiple)")]
    QDoesNotDivideM { q: usize, m: usize },

    #[error("decoder bias for index {i} is {bias:.9}, below the required 2ε = {required:.9}")]
    DerandomizationPrecondition { i: usize, bias: f64, required: f64 },

    #[error("linear program is {0}")]
    LpFailed(&'static str),

    #[error("Pauli sequence search failed: {0}")]
    SearchFailed(String),

    #[error("spec parse error: {0}")]
    Parse(String),

    #[error("claim kind {claimed} does not match code species {actual}")]
    KindMismatch { claimed: String, actual: String },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
