//! Code species and claimed parameter tuples.

use super::bits::Word;
use super::decoder::{ClassicalDecoder, QuantumDecoder};
use crate::error::{Error, Result};
use crate::quantum::DensityOperator;
use crate::tol::Tolerances;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Deterministic code: every message has a fixed codeword.
#[derive(Debug, Clone)]
pub struct ClassicalCode {
    n: usize,
    m: usize,
    table: Vec<Word>,
}

impl ClassicalCode {
    pub fn new(n: usize, m: usize, table: Vec<Word>) -> Result<Self> {
        if table.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                actual: table.len(),
            });
        }
        if table.iter().any(|w| w.len() != m) {
            return Err(Error::Invalid("codeword length differs from m".into()));
        }
        Ok(ClassicalCode { n, m, table })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn encode(&self, x: &Word) -> Word {
        self.table[x.index()]
    }

    pub fn table(&self) -> &[Word] {
        &self.table
    }
}

/// Randomized code: every message maps to a finite distribution of codewords.
#[derive(Debug, Clone)]
pub struct RandomizedCode {
    n: usize,
    m: usize,
    rows: Vec<Vec<(f64, Word)>>,
}

impl RandomizedCode {
    pub fn new(n: usize, m: usize, rows: Vec<Vec<(f64, Word)>>, tol: &Tolerances) -> Result<Self> {
        if rows.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                actual: rows.len(),
            });
        }
        for row in &rows {
            let mut sum = 0.0;
            for (p, w) in row {
                if *p < 0.0 || !p.is_finite() {
                    return Err(Error::Invalid(format!("invalid row probability {p}")));
                }
                if w.len() != m {
                    return Err(Error::Invalid("codeword length differs from m".into()));
                }
                sum += p;
            }
            if (sum - 1.0).abs() > tol.trace {
                return Err(Error::NotNormalized { sum });
            }
        }
        Ok(RandomizedCode { n, m, rows })
    }

    pub fn from_deterministic(code: &ClassicalCode) -> Self {
        RandomizedCode {
            n: code.n(),
            m: code.m(),
            rows: code.table().iter().map(|w| vec![(1.0, *w)]).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn row(&self, x: &Word) -> &[(f64, Word)] {
        &self.rows[x.index()]
    }

    pub fn rows(&self) -> &[Vec<(f64, Word)>] {
        &self.rows
    }
}

/// Quantum code: every message maps to an m-qubit density operator.
#[derive(Debug, Clone)]
pub struct QuantumCode {
    n: usize,
    m: usize,
    states: Vec<DensityOperator>,
}

impl QuantumCode {
    pub fn new(n: usize, m: usize, states: Vec<DensityOperator>) -> Result<Self> {
        if states.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                actual: states.len(),
            });
        }
        if states.iter().any(|s| s.num_qubits() != m) {
            return Err(Error::Invalid("state qubit count differs from m".into()));
        }
        Ok(QuantumCode { n, m, states })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn encode(&self, x: &Word) -> &DensityOperator {
        &self.states[x.index()]
    }

    pub fn states(&self) -> &[DensityOperator] {
        &self.states
    }
}

/// Adversarial bit flips: entrywise ±1 mask applied to a codeword.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorPattern {
    flips: Word,
}

impl ErrorPattern {
    pub fn identity(m: usize) -> Self {
        ErrorPattern {
            flips: Word::all_plus(m),
        }
    }

    pub fn new(flips: Word) -> Self {
        ErrorPattern { flips }
    }

    pub fn from_positions(m: usize, positions: &[usize]) -> Self {
        let mut flips = Word::all_plus(m);
        for &p in positions {
            flips = flips.with_sign(p, -1);
        }
        ErrorPattern { flips }
    }

    pub fn m(&self) -> usize {
        self.flips.len()
    }

    pub fn flips(&self) -> &Word {
        &self.flips
    }

    /// Exact count of flipped (-1) positions.
    pub fn weight(&self) -> u32 {
        self.flips.minus_count()
    }

    pub fn apply(&self, codeword: &Word) -> Word {
        codeword.product(&self.flips)
    }
}

impl fmt::Display for ErrorPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.flips)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CodeFamily {
    Ldc,
    Smooth,
    RandomizedLdc,
    RandomizedSmooth,
    Ldqc,
    SmoothQuantum,
    Qrac,
}

impl CodeFamily {
    /// Is the second parameter a noise rate δ (else a smoothness constant c)?
    pub fn second_is_delta(&self) -> bool {
        matches!(
            self,
            CodeFamily::Ldc | CodeFamily::RandomizedLdc | CodeFamily::Ldqc
        )
    }

    pub fn is_quantum(&self) -> bool {
        matches!(
            self,
            CodeFamily::Ldqc | CodeFamily::SmoothQuantum | CodeFamily::Qrac
        )
    }

    pub fn is_smooth(&self) -> bool {
        matches!(
            self,
            CodeFamily::Smooth | CodeFamily::RandomizedSmooth | CodeFamily::SmoothQuantum
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            CodeFamily::Ldc => "ldc",
            CodeFamily::Smooth => "smooth",
            CodeFamily::RandomizedLdc => "randomized-ldc",
            CodeFamily::RandomizedSmooth => "randomized-smooth",
            CodeFamily::Ldqc => "ldqc",
            CodeFamily::SmoothQuantum => "smooth-quantum",
            CodeFamily::Qrac => "qrac",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ldc" => Ok(CodeFamily::Ldc),
            "smooth" => Ok(CodeFamily::Smooth),
            "randomized-ldc" => Ok(CodeFamily::RandomizedLdc),
            "randomized-smooth" => Ok(CodeFamily::RandomizedSmooth),
            "ldqc" => Ok(CodeFamily::Ldqc),
            "smooth-quantum" => Ok(CodeFamily::SmoothQuantum),
            "qrac" => Ok(CodeFamily::Qrac),
            other => Err(Error::Parse(format!("unknown code kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeKind {
    pub family: CodeFamily,
    pub mu_average: bool,
}

impl CodeKind {
    pub fn plain(family: CodeFamily) -> Self {
        CodeKind {
            family,
            mu_average: false,
        }
    }

    pub fn mu_average(family: CodeFamily) -> Self {
        CodeKind {
            family,
            mu_average: true,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        if let Some(rest) = s.strip_prefix("mu-average-") {
            Ok(CodeKind::mu_average(CodeFamily::parse(rest)?))
        } else {
            Ok(CodeKind::plain(CodeFamily::parse(s)?))
        }
    }
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mu_average {
            write!(f, "mu-average-{}", self.family.name())
        } else {
            write!(f, "{}", self.family.name())
        }
    }
}

/// A claimed parameter tuple (kind, q, c-or-δ, ε).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CodeParams {
    pub kind: CodeKind,
    pub q: usize,
    /// c for smooth kinds, δ for locally-decodable kinds; unused for QRAC.
    pub second: f64,
    pub eps: f64,
}

impl CodeParams {
    pub fn new(kind: CodeKind, q: usize, second: f64, eps: f64) -> Result<Self> {
        if q < 1 {
            return Err(Error::Invalid("q must be at least 1".into()));
        }
        let second_ok = second.is_finite()
            && (second > 0.0
                || kind.family == CodeFamily::Qrac
                || (kind.family.second_is_delta() && second == 0.0));
        if !second_ok {
            return Err(Error::Invalid(format!(
                "second parameter {second} must be positive"
            )));
        }
        if !(eps > 0.0 && eps <= 0.5) {
            return Err(Error::Invalid(format!("ε = {eps} must lie in (0, 1/2]")));
        }
        Ok(CodeParams {
            kind,
            q,
            second,
            eps,
        })
    }

    /// Corruption budget ⌊δm⌋ for locally-decodable kinds.
    pub fn corruption_budget(&self, m: usize) -> usize {
        (self.second * m as f64).floor() as usize
    }
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let second_name = if self.kind.family.second_is_delta() {
            "δ"
        } else {
            "c"
        };
        write!(
            f,
            "{} (q={}, {}={}, ε={})",
            self.kind, self.q, second_name, self.second, self.eps
        )
    }
}

/// A code together with its decoder.
#[derive(Debug, Clone)]
pub enum CodeInstance {
    Classical {
        code: ClassicalCode,
        decoder: ClassicalDecoder,
    },
    Randomized {
        code: RandomizedCode,
        decoder: ClassicalDecoder,
    },
    Quantum {
        code: QuantumCode,
        decoder: QuantumDecoder,
    },
}

impl CodeInstance {
    pub fn n(&self) -> usize {
        match self {
            CodeInstance::Classical { code, .. } => code.n(),
            CodeInstance::Randomized { code, .. } => code.n(),
            CodeInstance::Quantum { code, .. } => code.n(),
        }
    }

    pub fn m(&self) -> usize {
        match self {
            CodeInstance::Classical { code, .. } => code.m(),
            CodeInstance::Randomized { code, .. } => code.m(),
            CodeInstance::Quantum { code, .. } => code.m(),
        }
    }

    pub fn species(&self) -> &'static str {
        match self {
            CodeInstance::Classical { .. } => "classical",
            CodeInstance::Randomized { .. } => "randomized",
            CodeInstance::Quantum { .. } => "quantum",
        }
    }

    pub fn kind_matches(&self, family: CodeFamily) -> bool {
        match self {
            CodeInstance::Classical { .. } => {
                matches!(family, CodeFamily::Ldc | CodeFamily::Smooth)
            }
            CodeInstance::Randomized { .. } => matches!(
                family,
                CodeFamily::RandomizedLdc | CodeFamily::RandomizedSmooth
            ),
            CodeInstance::Quantum { .. } => family.is_quantum(),
        }
    }
}
