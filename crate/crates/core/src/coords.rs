use std::fmt;
use std::ops::{Deref, DerefMut};

use num_bigint::BigInt;
use num_traits::Zero;

/// Exponent vector of an element with respect to a Mal'cev basis.
///
/// Entry `i` is the exponent of the basis letter `a_{i+1}` in the normal form
/// `a_1^{α_1} ⋯ a_m^{α_m}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coords(Vec<BigInt>);

/// Coordinates of an element of a free nilpotent group.
pub type FreeCoordinates = Coords;

/// Reduced coordinates of an element of a quotient group.
pub type GroupElement = Coords;

impl Coords {
    pub fn identity(m: usize) -> Self {
        Coords(vec![BigInt::zero(); m])
    }

    pub fn new(entries: Vec<BigInt>) -> Self {
        Coords(entries)
    }

    pub fn from_i64s(entries: &[i64]) -> Self {
        Coords(entries.iter().map(|&e| BigInt::from(e)).collect())
    }

    /// Unit vector for the basis letter with 0-based index `letter`.
    pub fn unit(m: usize, letter: usize) -> Self {
        let mut c = Self::identity(m);
        c.0[letter] = BigInt::from(1);
        c
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Column of the first non-zero entry.
    pub fn pivot(&self) -> Option<usize> {
        self.0.iter().position(|e| !e.is_zero())
    }

    pub fn into_vec(self) -> Vec<BigInt> {
        self.0
    }

    /// Keeps the first `len` entries.
    pub fn truncated(&self, len: usize) -> Self {
        Coords(self.0[..len].to_vec())
    }

    /// Extends with zeros up to `len` entries.
    pub fn padded(&self, len: usize) -> Self {
        let mut v = self.0.clone();
        v.resize(len, BigInt::zero());
        Coords(v)
    }
}

impl Deref for Coords {
    type Target = [BigInt];

    fn deref(&self) -> &[BigInt] {
        &self.0
    }
}

impl DerefMut for Coords {
    fn deref_mut(&mut self) -> &mut [BigInt] {
        &mut self.0
    }
}

impl From<Vec<BigInt>> for Coords {
    fn from(v: Vec<BigInt>) -> Self {
        Coords(v)
    }
}

impl FromIterator<BigInt> for Coords {
    fn from_iter<I: IntoIterator<Item = BigInt>>(iter: I) -> Self {
        Coords(iter.into_iter().collect())
    }
}

impl fmt::Display for Coords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}
