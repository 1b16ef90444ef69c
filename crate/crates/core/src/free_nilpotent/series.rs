//! Truncated power series in non-commuting variables `X_1..X_r`.
//!
//! Coefficients are stored densely by degree; a degree-`d` monomial
//! `X_{i_1} ⋯ X_{i_d}` sits at offset `offsets[d] + Σ i_k r^{d-k}`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub(crate) type Series = Vec<BigInt>;

#[derive(Clone, Debug)]
pub(crate) struct SeriesRing {
    c: usize,
    offsets: Vec<usize>,
    r_pow: Vec<usize>,
}

impl SeriesRing {
    pub fn new(c: usize, r: usize) -> Self {
        let mut offsets = Vec::with_capacity(c + 2);
        let mut r_pow = Vec::with_capacity(c + 1);
        let mut acc = 0;
        let mut p = 1;
        for _ in 0..=c {
            offsets.push(acc);
            r_pow.push(p);
            acc += p;
            p *= r;
        }
        offsets.push(acc);
        SeriesRing { c, offsets, r_pow }
    }

    pub fn len(&self) -> usize {
        self.offsets[self.c + 1]
    }

    pub fn degree_range(&self, d: usize) -> std::ops::Range<usize> {
        self.offsets[d]..self.offsets[d + 1]
    }

    pub fn zero(&self) -> Series {
        vec![BigInt::zero(); self.len()]
    }

    pub fn one(&self) -> Series {
        let mut s = self.zero();
        s[0] = BigInt::one();
        s
    }

    /// `1 + X_i`.
    pub fn generator(&self, i: usize) -> Series {
        let mut s = self.one();
        s[self.offsets[1] + i] = BigInt::one();
        s
    }

    pub fn mul(&self, a: &Series, b: &Series) -> Series {
        let mut out = self.zero();
        let b_nonzero: Vec<Vec<usize>> = (0..=self.c)
            .map(|d| {
                self.degree_range(d)
                    .filter(|&k| !b[k].is_zero())
                    .map(|k| k - self.offsets[d])
                    .collect()
            })
            .collect();
        for da in 0..=self.c {
            for ia in 0..self.r_pow[da] {
                let ca = &a[self.offsets[da] + ia];
                if ca.is_zero() {
                    continue;
                }
                for db in 0..=(self.c - da) {
                    let base = self.offsets[da + db] + ia * self.r_pow[db];
                    for &ib in &b_nonzero[db] {
                        out[base + ib] += ca * &b[self.offsets[db] + ib];
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, a: &Series, b: &Series) -> Series {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    /// Powers `N, N², …` of a series with zero constant term, stopping before
    /// the first vanishing power.
    pub fn nil_powers(&self, n: &Series) -> Vec<Series> {
        let mut powers = Vec::new();
        let mut cur = n.clone();
        while cur.iter().any(|x| !x.is_zero()) {
            let next = self.mul(&cur, n);
            powers.push(cur);
            cur = next;
        }
        powers
    }

    /// `(1 + N)^k = Σ_j C(k, j) N^j` for any integer `k`, given the powers of `N`.
    pub fn binomial_power(&self, nil: &[Series], k: &BigInt) -> Series {
        let mut out = self.one();
        let mut binom = BigInt::one();
        for (j, nj) in nil.iter().enumerate() {
            // C(k, j+1) = C(k, j) (k - j) / (j + 1), exact at every step.
            binom = binom * (k - j) / BigInt::from(j + 1);
            if binom.is_zero() {
                break;
            }
            for (o, x) in out.iter_mut().zip(nj) {
                if !x.is_zero() {
                    *o += &binom * x;
                }
            }
        }
        out
    }

    pub fn is_one(&self, s: &Series) -> bool {
        s[0].is_one() && s[1..].iter().all(Zero::is_zero)
    }

    /// Coefficient slice of degree `d`.
    pub fn degree<'a>(&self, s: &'a [BigInt], d: usize) -> &'a [BigInt] {
        let rg = self.degree_range(d);
        &s[rg]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    fn binomial(k: &BigInt, j: usize) -> BigInt {
        let mut b = BigInt::one();
        for i in 0..j {
            b *= (k - i);
        }
        let mut fact = BigInt::one();
        for i in 1..=j {
            fact *= i;
        }
        let (q, rem) = b.div_rem(&fact);
        assert!(rem.is_zero());
        q
    }

    #[test]
    fn generator_commutator_leading_term() {
        let ring = SeriesRing::new(2, 2);
        let a = ring.generator(0);
        let b = ring.generator(1);
        let ab = ring.mul(&a, &b);
        let ba = ring.mul(&b, &a);
        // X1 X2 sits at offset 3 + 0*2 + 1 = 4, X2 X1 at 5.
        assert_eq!(ab[4], BigInt::one());
        assert_eq!(ba[5], BigInt::one());
        assert!(ab[5].is_zero());
    }

    #[test]
    fn binomial_power_inverts() {
        let ring = SeriesRing::new(3, 2);
        let g = ring.mul(&ring.generator(0), &ring.generator(1));
        let n = ring.sub(&g, &ring.one());
        let nil = ring.nil_powers(&n);
        let inv = ring.binomial_power(&nil, &BigInt::from(-1));
        assert!(ring.is_one(&ring.mul(&g, &inv)));
        let cube = ring.binomial_power(&nil, &BigInt::from(3));
        assert_eq!(cube, ring.mul(&g, &ring.mul(&g, &g)));
    }

    #[test]
    fn binomial_matches_factorial_formula() {
        for k in -6i64..=6 {
            let mut b = BigInt::one();
            for j in 0..5usize {
                assert_eq!(b, binomial(&BigInt::from(k), j));
                b = b * (BigInt::from(k) - j) / BigInt::from(j + 1);
            }
        }
    }
}
