use std::collections::HashMap;
use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};

/// Upper bound on the number of basis letters accepted by default. It admits
/// every free nilpotent group with `c ≤ 5, r ≤ 3` and the rank-doubled groups
/// used for direct products of small classes.
pub const DEFAULT_BASIS_CAP: usize = 100;

/// One letter of a Hall basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasicCommutator {
    pub weight: usize,
    /// `Some((u, v))` when the letter is `[a_u, a_v]` (0-based indices).
    pub parents: Option<(usize, usize)>,
}

/// Basic commutators of a free nilpotent group `F_{c,r}` ordered by weight,
/// and within a weight lexicographically by parent indices.
///
/// A weight-`w` letter is `[u, v]` with `u > v`, `weight(u) + weight(v) = w`,
/// and, when `u = [x, y]`, `y ≤ v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallBasis {
    c: usize,
    r: usize,
    letters: Vec<BasicCommutator>,
    by_weight: Vec<Range<usize>>,
    lookup: HashMap<(usize, usize), usize>,
}

pub fn build_hall_basis(c: usize, r: usize) -> Result<HallBasis> {
    build_hall_basis_with_cap(c, r, DEFAULT_BASIS_CAP)
}

pub fn build_hall_basis_with_cap(c: usize, r: usize, cap: usize) -> Result<HallBasis> {
    if c == 0 || r == 0 {
        return Err(Error::InvalidInput(format!(
            "class and rank must be positive, got c={c}, r={r}"
        )));
    }
    let m: u128 = (1..=c).map(|w| witt_rank(r, w)).sum();
    if m > cap as u128 {
        return Err(Error::BasisTooLarge {
            c,
            r,
            m: usize::try_from(m).unwrap_or(usize::MAX),
            cap,
        });
    }

    let mut letters: Vec<BasicCommutator> = (0..r)
        .map(|_| BasicCommutator {
            weight: 1,
            parents: None,
        })
        .collect();
    let mut by_weight = vec![0..0, 0..r];
    let mut lookup = HashMap::new();
    for w in 2..=c {
        let start = letters.len();
        // Letters of smaller weight are final, so candidates can be read from
        // the prefix built so far; iterating u then v yields lexicographic order.
        let prefix = letters.len();
        for u in 0..prefix {
            for v in 0..u {
                if letters[u].weight + letters[v].weight != w {
                    continue;
                }
                if let Some((_, y)) = letters[u].parents {
                    if y > v {
                        continue;
                    }
                }
                lookup.insert((u, v), letters.len());
                letters.push(BasicCommutator {
                    weight: w,
                    parents: Some((u, v)),
                });
            }
        }
        if (letters.len() - start) as u128 != witt_rank(r, w) {
            return Err(Error::Internal(format!(
                "weight {w} has {} basic commutators, expected {}",
                letters.len() - start,
                witt_rank(r, w)
            )));
        }
        by_weight.push(start..letters.len());
    }
    Ok(HallBasis {
        c,
        r,
        letters,
        by_weight,
        lookup,
    })
}

/// Dimension of the degree-`w` component of the free Lie ring on `r`
/// generators: `(1/w) ∑_{d | w} μ(d) r^{w/d}`.
pub fn witt_rank(r: usize, w: usize) -> u128 {
    let mut total: i128 = 0;
    for d in 1..=w {
        if !w.is_multiple_of(d) {
            continue;
        }
        let mu = mobius(d);
        if mu != 0 {
            total += mu as i128 * (r as i128).pow((w / d) as u32);
        }
    }
    (total / w as i128) as u128
}

fn mobius(mut n: usize) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

impl HallBasis {
    pub fn c(&self) -> usize {
        self.c
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn m(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[BasicCommutator] {
        &self.letters
    }

    pub fn weight(&self, letter: usize) -> usize {
        self.letters[letter].weight
    }

    /// Indices of the letters of weight `w` (empty when `w` is out of range).
    pub fn weight_range(&self, w: usize) -> Range<usize> {
        self.by_weight.get(w).cloned().unwrap_or(0..0)
    }

    /// Index of the basic commutator `[u, v]`, if it is a basis letter.
    pub fn commutator_index(&self, u: usize, v: usize) -> Option<usize> {
        self.lookup.get(&(u, v)).copied()
    }

    /// Bracket notation of a letter with 1-based generator names.
    pub fn describe(&self, letter: usize) -> String {
        match self.letters[letter].parents {
            None => format!("a{}", letter + 1),
            Some((u, v)) => format!("[{},{}]", self.describe(u), self.describe(v)),
        }
    }
}

impl fmt::Display for HallBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.m() {
            writeln!(f, "a{} = {}", i + 1, self.describe(i))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bases() {
        let b = build_hall_basis(1, 2).unwrap();
        assert_eq!(b.m(), 2);
        let b = build_hall_basis(2, 2).unwrap();
        assert_eq!(b.m(), 3);
        assert_eq!(b.letters()[2].parents, Some((1, 0)));
        let b = build_hall_basis(3, 2).unwrap();
        assert_eq!(b.m(), 5);
        assert_eq!(b.letters()[3].parents, Some((2, 0)));
        assert_eq!(b.letters()[4].parents, Some((2, 1)));
        assert_eq!(b.describe(4), "[[a2,a1],a2]");
    }

    #[test]
    fn witt_numbers() {
        assert_eq!(witt_rank(2, 1), 2);
        assert_eq!(witt_rank(2, 2), 1);
        assert_eq!(witt_rank(2, 3), 2);
        assert_eq!(witt_rank(2, 4), 3);
        assert_eq!(witt_rank(2, 5), 6);
        assert_eq!(witt_rank(3, 2), 3);
        assert_eq!(witt_rank(3, 3), 8);
        assert_eq!(witt_rank(3, 4), 18);
        assert_eq!(witt_rank(3, 5), 48);
    }

    #[test]
    fn counts_match_witt_for_many_shapes() {
        for c in 1..=5 {
            for r in 1..=3 {
                let b = build_hall_basis(c, r).unwrap();
                for w in 1..=c {
                    assert_eq!(b.weight_range(w).len() as u128, witt_rank(r, w));
                    for i in b.weight_range(w) {
                        assert_eq!(b.weight(i), w);
                    }
                }
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = build_hall_basis_with_cap(5, 3, 79).unwrap_err();
        assert_eq!(
            err,
            Error::BasisTooLarge {
                c: 5,
                r: 3,
                m: 80,
                cap: 79
            }
        );
        assert!(build_hall_basis(0, 2).is_err());
    }
}
