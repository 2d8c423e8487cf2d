//! ±1 words. Coordinate j of a length-k word lives at bit weight 2^(k-1-j),
//! with a set bit meaning -1, so the integer index of a word equals the
//! basis-state index of the corresponding computational basis vector.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word {
    len: usize,
    bits: u64,
}

impl Word {
    pub fn from_index(index: u64, len: usize) -> Self {
        debug_assert!(len == 64 || index < (1u64 << len));
        Word { len, bits: index }
    }

    pub fn all_plus(len: usize) -> Self {
        Word { len, bits: 0 }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut bits = 0u64;
        let mut len = 0usize;
        for ch in s.chars() {
            bits <<= 1;
            match ch {
                '+' => {}
                '-' => bits |= 1,
                other => {
                    return Err(Error::Parse(format!(
                        "invalid word character {other:?}; expected '+' or '-'"
                    )))
                }
            }
            len += 1;
        }
        if len == 0 {
            return Err(Error::Parse("empty word".into()));
        }
        Ok(Word { len, bits })
    }

    pub fn from_signs(signs: &[i8]) -> Self {
        let mut bits = 0u64;
        for &s in signs {
            bits <<= 1;
            if s < 0 {
                bits |= 1;
            }
        }
        Word {
            len: signs.len(),
            bits,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn index(&self) -> usize {
        self.bits as usize
    }

    #[inline]
    pub fn sign(&self, j: usize) -> i8 {
        debug_assert!(j < self.len);
        if (self.bits >> (self.len - 1 - j)) & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn with_sign(&self, j: usize, sign: i8) -> Self {
        let w = self.len - 1 - j;
        let bits = if sign < 0 {
            self.bits | (1 << w)
        } else {
            self.bits & !(1 << w)
        };
        Word {
            len: self.len,
            bits,
        }
    }

    pub fn flipped(&self, j: usize) -> Self {
        Word {
            len: self.len,
            bits: self.bits ^ (1 << (self.len - 1 - j)),
        }
    }

    /// Entrywise ±1 product.
    pub fn product(&self, other: &Word) -> Word {
        debug_assert_eq!(self.len, other.len);
        Word {
            len: self.len,
            bits: self.bits ^ other.bits,
        }
    }

    /// Number of -1 entries.
    pub fn minus_count(&self) -> u32 {
        self.bits.count_ones()
    }

    /// ∏_{j ∈ positions} sign(j).
    pub fn sign_product_over(&self, positions: impl IntoIterator<Item = usize>) -> i8 {
        let mut s = 1i8;
        for j in positions {
            s *= self.sign(j);
        }
        s
    }

    /// Subword at the given positions, in the given order.
    pub fn restrict(&self, positions: &[usize]) -> Word {
        let mut bits = 0u64;
        for &j in positions {
            bits <<= 1;
            if self.sign(j) < 0 {
                bits |= 1;
            }
        }
        Word {
            len: positions.len(),
            bits,
        }
    }

    pub fn all(len: usize) -> impl Iterator<Item = Word> {
        (0u64..(1u64 << len)).map(move |bits| Word { len, bits })
    }

    pub fn signs(&self) -> Vec<i8> {
        (0..self.len).map(|j| self.sign(j)).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.len {
            write!(f, "{}", if self.sign(j) > 0 { '+' } else { '-' })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_display_round_trip() {
        for s in ["+", "-", "+-+", "----", "+-+-"] {
            assert_eq!(Word::parse(s).unwrap().to_string(), s);
        }
        assert!(Word::parse("+0").is_err());
        assert!(Word::parse("").is_err());
    }

    #[test]
    fn index_matches_big_endian_bits() {
        let w = Word::parse("+-+-").unwrap();
        // coordinates 1 and 3 are -1 → bits 0101 = 5
        assert_eq!(w.index(), 0b0101);
        assert_eq!(w.sign(0), 1);
        assert_eq!(w.sign(1), -1);
        assert_eq!(Word::from_index(5, 4), w);
    }

    #[test]
    fn products_and_parities() {
        let a = Word::parse("+-+").unwrap();
        let b = Word::parse("--+").unwrap();
        assert_eq!(a.product(&b).to_string(), "-++");
        assert_eq!(a.sign_product_over([0, 1]), -1);
        assert_eq!(a.sign_product_over([0, 2]), 1);
        assert_eq!(a.minus_count(), 1);
    }

    #[test]
    fn restriction_preserves_order() {
        let w = Word::parse("+-+-").unwrap();
        assert_eq!(w.restrict(&[1, 3]).to_string(), "--");
        assert_eq!(w.restrict(&[0, 2]).to_string(), "++");
        assert_eq!(w.restrict(&[3, 0]).to_string(), "-+");
    }
}
