//! Distributions over message words.

use super::bits::Word;
use crate::error::{Error, Result};
use crate::tol::Tolerances;

#[derive(Debug, Clone)]
pub struct InputDistribution {
    n: usize,
    weights: Vec<f64>,
}

impl InputDistribution {
    pub fn uniform(n: usize) -> Self {
        let count = 1usize << n;
        InputDistribution {
            n,
            weights: vec![1.0 / count as f64; count],
        }
    }

    pub fn point_mass(x: Word) -> Self {
        let mut weights = vec![0.0; 1 << x.len()];
        weights[x.index()] = 1.0;
        InputDistribution {
            n: x.len(),
            weights,
        }
    }

    pub fn from_weights(n: usize, weights: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        if weights.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                actual: weights.len(),
            });
        }
        let mut sum = 0.0;
        for &w in &weights {
            if w < 0.0 || !w.is_finite() {
                return Err(Error::Invalid(format!("invalid weight {w}")));
            }
            sum += w;
        }
        if (sum - 1.0).abs() > tol.trace {
            return Err(Error::NotNormalized { sum });
        }
        Ok(InputDistribution { n, weights })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self, x: &Word) -> f64 {
        self.weights[x.index()]
    }

    /// Words with nonzero weight, in index order.
    pub fn support(&self) -> impl Iterator<Item = (Word, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(move |(i, &w)| (Word::from_index(i as u64, self.n), w))
    }
}
