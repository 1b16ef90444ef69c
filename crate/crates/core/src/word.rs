use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::coords::Coords;

/// A word with binary exponents: `w_1^{x_1} ⋯ w_n^{x_n}` where each `w_i` is a
/// letter index (0-based) and each exponent is an arbitrary-precision integer.
///
/// The letters are either basis letters of a Mal'cev basis or, for words
/// produced by subgroup reduction, indices of subgroup generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ExpWord {
    factors: Vec<(usize, BigInt)>,
}

impl ExpWord {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a word, merging adjacent factors on the same letter and dropping
    /// zero exponents.
    pub fn from_factors<I>(factors: I) -> Self
    where
        I: IntoIterator<Item = (usize, BigInt)>,
    {
        let mut w = Self::new();
        for (letter, exp) in factors {
            w.push(letter, exp);
        }
        w
    }

    pub fn letter(letter: usize) -> Self {
        Self::from_factors([(letter, BigInt::one())])
    }

    pub fn power(letter: usize, exp: impl Into<BigInt>) -> Self {
        Self::from_factors([(letter, exp.into())])
    }

    /// The normal-form word `a_1^{α_1} ⋯ a_m^{α_m}` of a coordinate vector.
    pub fn from_coords(coords: &Coords) -> Self {
        Self::from_factors(coords.iter().cloned().enumerate())
    }

    pub fn push(&mut self, letter: usize, exp: BigInt) {
        if exp.is_zero() {
            return;
        }
        if let Some((last, e)) = self.factors.last_mut() {
            if *last == letter {
                *e += exp;
                if e.is_zero() {
                    self.factors.pop();
                }
                return;
            }
        }
        self.factors.push((letter, exp));
    }

    pub fn append(&mut self, other: &ExpWord) {
        for (l, e) in &other.factors {
            self.push(*l, e.clone());
        }
    }

    pub fn concat(&self, other: &ExpWord) -> ExpWord {
        let mut w = self.clone();
        w.append(other);
        w
    }

    pub fn inverse(&self) -> ExpWord {
        ExpWord {
            factors: self.factors.iter().rev().map(|(l, e)| (*l, -e)).collect(),
        }
    }

    pub fn factors(&self) -> &[(usize, BigInt)] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn max_letter(&self) -> Option<usize> {
        self.factors.iter().map(|(l, _)| *l).max()
    }

    /// Total number of letters `∑|x_i|` of the uncompressed word.
    pub fn expanded_length(&self) -> BigInt {
        self.factors.iter().map(|(_, e)| e.abs()).sum()
    }
}

/// Prints in the text grammar `a<k>^<exp>` with 1-based letter numbers; the
/// empty word prints as `1`.
impl fmt::Display for ExpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, (l, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if e.is_one() {
                write!(f, "a{}", l + 1)?;
            } else {
                write!(f, "a{}^{}", l + 1, e)?;
            }
        }
        Ok(())
    }
}
