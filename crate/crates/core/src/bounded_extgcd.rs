//! Extended gcd of many integers with coefficients bounded by `(n+1)·A²`.
//!
//! The coefficients are first obtained from the chain `d_i = gcd(d_{i-1}, a_i)`
//! and then shrunk by moving multiples of `a_i a_j` between an index with a too
//! large positive coefficient and one with a too small negative coefficient.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Result};

/// Intermediate state of [`extgcd_bounded`].
///
/// All vectors are indexed over the non-zero inputs only, in their original
/// order; `positions[k]` is the index in the caller's vector of entry `k`.
/// `d`, `P_prime`, `N_prime`, `P` and `N` have one extra leading entry for
/// index 0.
#[allow(non_snake_case)]
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedCombinationTrace {
    pub positions: Vec<usize>,
    pub a: Vec<BigInt>,
    pub A: BigInt,
    pub d: Vec<BigInt>,
    /// `(y_i, z_i)` with `d_i = y_i d_{i-1} + z_i a_i`.
    pub yz: Vec<(BigInt, BigInt)>,
    pub x_raw: Vec<BigInt>,
    pub p_prime: Vec<BigInt>,
    pub n_prime: Vec<BigInt>,
    pub P_prime: Vec<BigInt>,
    pub N_prime: Vec<BigInt>,
    pub D: BigInt,
    pub p: Vec<BigInt>,
    pub n: Vec<BigInt>,
    pub P: Vec<BigInt>,
    pub N: Vec<BigInt>,
    /// `p_{j,i}` keyed by `(j, i)` with `x_j ≤ 0 < x_i`; zero entries omitted.
    pub overlap: BTreeMap<(usize, usize), BigInt>,
    /// `y_{j,i}` on the same keys as `overlap`.
    pub y_pair: BTreeMap<(usize, usize), BigInt>,
    pub x_final: Vec<BigInt>,
    /// Set when every input was zero; all other fields are then empty.
    pub degenerate: bool,
}

/// Reduction data produced from `(a, x, A)`.
#[allow(non_snake_case)]
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub p_prime: Vec<BigInt>,
    pub n_prime: Vec<BigInt>,
    pub P_prime: Vec<BigInt>,
    pub N_prime: Vec<BigInt>,
    pub D: BigInt,
    pub p: Vec<BigInt>,
    pub n: Vec<BigInt>,
    pub P: Vec<BigInt>,
    pub N: Vec<BigInt>,
    pub overlap: BTreeMap<(usize, usize), BigInt>,
    pub y_pair: BTreeMap<(usize, usize), BigInt>,
    pub x_final: Vec<BigInt>,
}

pub fn gcd_vector(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// `(g, x, y)` with `a x + b y = g = gcd(a, b)` and `|x|, |y| ≤ max(|a|, |b|, 1)`.
///
/// Among admissible pairs the one with the smallest `|x|` is returned, ties going
/// to `x ≥ 0`; when `x` is forced (`b = 0`) the same rule picks `y`.
pub fn extgcd_pair_bounded(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    if a.is_zero() && b.is_zero() {
        return (BigInt::zero(), BigInt::zero(), BigInt::zero());
    }
    let e = a.extended_gcd(b);
    let g = e.gcd;
    if b.is_zero() {
        // a x = |a| forces x = sign(a); y is free and taken to be 0.
        return (g, a.signum(), BigInt::zero());
    }
    // x runs over x0 + k·step.
    let step = (b / &g).abs();
    let mut x = e.x.mod_floor(&step);
    let twice = &x * 2u32;
    if twice > step {
        x -= &step;
    }
    let y = (&g - a * &x) / b;
    (g, x, y)
}

/// `(g, x, trace)` with `∑ x_i a_i = g = gcd(a)` and
/// `|x_i| ≤ (n+1)·max(|a_i|/g)²`.
pub fn extgcd_bounded(a: &[BigInt]) -> (BigInt, Vec<BigInt>, BoundedCombinationTrace) {
    let g = gcd_vector(a);
    let mut x = vec![BigInt::zero(); a.len()];
    if g.is_zero() {
        return (g, x, degenerate_trace());
    }
    let positions: Vec<usize> = (0..a.len()).filter(|&i| !a[i].is_zero()).collect();
    let norm: Vec<BigInt> = positions.iter().map(|&i| a[i].abs() / &g).collect();
    #[allow(non_snake_case)]
    let A = norm.iter().max().cloned().unwrap_or_else(BigInt::one);

    let k = norm.len();
    let mut d = Vec::with_capacity(k + 1);
    d.push(BigInt::zero());
    let mut yz = Vec::with_capacity(k);
    for ai in &norm {
        let prev = d.last().unwrap().clone();
        let (di, z, y) = extgcd_pair_bounded(ai, &prev);
        d.push(di);
        yz.push((y, z));
    }

    let mut x_raw = vec![BigInt::zero(); k];
    let mut suffix = BigInt::one();
    for i in (0..k).rev() {
        x_raw[i] = &yz[i].1 * &suffix;
        suffix *= &yz[i].0;
    }

    let red = reduction(&norm, &x_raw, &A);
    for (kk, &pos) in positions.iter().enumerate() {
        x[pos] = if a[pos].is_negative() {
            -&red.x_final[kk]
        } else {
            red.x_final[kk].clone()
        };
    }
    let trace = BoundedCombinationTrace {
        positions,
        a: norm,
        A,
        d,
        yz,
        x_raw,
        p_prime: red.p_prime,
        n_prime: red.n_prime,
        P_prime: red.P_prime,
        N_prime: red.N_prime,
        D: red.D,
        p: red.p,
        n: red.n,
        P: red.P,
        N: red.N,
        overlap: red.overlap,
        y_pair: red.y_pair,
        x_final: red.x_final,
        degenerate: false,
    };
    (g, x, trace)
}

fn degenerate_trace() -> BoundedCombinationTrace {
    BoundedCombinationTrace {
        positions: Vec::new(),
        a: Vec::new(),
        A: BigInt::zero(),
        d: vec![BigInt::zero()],
        yz: Vec::new(),
        x_raw: Vec::new(),
        p_prime: Vec::new(),
        n_prime: Vec::new(),
        P_prime: vec![BigInt::zero()],
        N_prime: vec![BigInt::zero()],
        D: BigInt::zero(),
        p: Vec::new(),
        n: Vec::new(),
        P: vec![BigInt::zero()],
        N: vec![BigInt::zero()],
        overlap: BTreeMap::new(),
        y_pair: BTreeMap::new(),
        x_final: Vec::new(),
        degenerate: true,
    }
}

/// Shrinks a combination `∑ x_i a_i = 1` of positive `a_i` with `A = max a_i`
/// to one with `|x̃_i| ≤ (n+1)·A²`.
#[allow(non_snake_case)]
pub fn reduce_coefficients(a: &[BigInt], x: &[BigInt], A: &BigInt) -> Result<Vec<BigInt>> {
    Ok(reduce_coefficients_traced(a, x, A)?.x_final)
}

/// As [`reduce_coefficients`], returning every intermediate quantity.
#[allow(non_snake_case)]
pub fn reduce_coefficients_traced(a: &[BigInt], x: &[BigInt], A: &BigInt) -> Result<Reduction> {
    if a.len() != x.len() {
        return Err(invalid("coefficient and value vectors differ in length"));
    }
    if a.is_empty() {
        return Err(invalid("empty combination cannot sum to 1"));
    }
    if a.iter().any(|v| !v.is_positive()) {
        return Err(invalid("values must be positive"));
    }
    if a.iter().max() != Some(A) {
        return Err(invalid("A must equal the largest value"));
    }
    let sum: BigInt = a.iter().zip(x).map(|(ai, xi)| ai * xi).sum();
    if !sum.is_one() {
        return Err(invalid(format!("combination sums to {sum}, not 1")));
    }
    Ok(reduction(a, x, A))
}

#[allow(non_snake_case)]
fn reduction(a: &[BigInt], x: &[BigInt], A: &BigInt) -> Reduction {
    let k = a.len();
    let A2 = A * A;
    let zero = BigInt::zero();
    let p_prime: Vec<BigInt> = (0..k)
        .map(|i| (&x[i] * &a[i]).div_floor(&A2).max(zero.clone()))
        .collect();
    let n_prime: Vec<BigInt> = (0..k)
        .map(|i| (-&x[i] * &a[i]).div_floor(&A2).max(zero.clone()))
        .collect();
    let P_prime = prefix_sums(&p_prime);
    let N_prime = prefix_sums(&n_prime);
    let D = &N_prime[k] - &P_prime[k];

    // Indices with a zero coefficient are grouped with the negative ones but
    // never receive an increment.
    let pos: Vec<usize> = (0..k).filter(|&i| x[i].is_positive()).collect();
    let neg: Vec<usize> = (0..k).filter(|&i| !x[i].is_positive()).collect();
    let strict_neg: Vec<usize> = (0..k).filter(|&i| x[i].is_negative()).collect();

    // Add one to the first D positive indices (or the first -D negative ones)
    // so that P_n = N_n. The chosen side only runs out when A = 1 and there is
    // no negative coefficient; the remainder is then taken off the other side.
    let mut p = p_prime.clone();
    let mut n = n_prime.clone();
    let (grow, shrink) = if D.is_positive() {
        (&pos, &strict_neg)
    } else {
        (&strict_neg, &pos)
    };
    let mut left = D.abs();
    for &i in grow.iter() {
        if !left.is_positive() {
            break;
        }
        if D.is_positive() {
            p[i] += 1;
        } else {
            n[i] += 1;
        }
        left -= 1;
    }
    for &i in shrink.iter() {
        let v = if D.is_positive() {
            &mut n[i]
        } else {
            &mut p[i]
        };
        let take = (&left).min(&*v).clone();
        *v -= &take;
        left -= take;
    }
    let P = prefix_sums(&p);
    let N = prefix_sums(&n);

    let mut overlap = BTreeMap::new();
    let mut y_pair = BTreeMap::new();
    let mut x_final = x.to_vec();
    // Both sequences of intervals tile (0, P_n]; walk them in merge order.
    let (mut ip, mut jn) = (0, 0);
    while ip < pos.len() && jn < neg.len() {
        let (i, j) = (pos[ip], neg[jn]);
        let lo = (&P[i]).max(&N[j]);
        let hi = (&P[i + 1]).min(&N[j + 1]);
        if hi > lo {
            let pji = hi - lo;
            let y = (&pji * &A2).div_floor(&(&a[i] * &a[j]));
            x_final[i] -= &y * &a[j];
            x_final[j] += &y * &a[i];
            if !y.is_zero() {
                y_pair.insert((j, i), y);
            }
            overlap.insert((j, i), pji);
        }
        if P[i + 1] <= N[j + 1] {
            ip += 1;
        } else {
            jn += 1;
        }
    }

    Reduction {
        p_prime,
        n_prime,
        P_prime,
        N_prime,
        D,
        p,
        n,
        P,
        N,
        overlap,
        y_pair,
        x_final,
    }
}

fn prefix_sums(v: &[BigInt]) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(v.len() + 1);
    out.push(BigInt::zero());
    for e in v {
        let next = out.last().unwrap() + e;
        out.push(next);
    }
    out
}
