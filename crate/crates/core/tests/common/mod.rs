//! Independent oracles and random instance generators shared by the
//! integration tests.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use nilpotent::{
    quotient_by_elements, Coords, ExpWord, FreeNilpotentGroup, MalcevGroup, QuotientPresentation,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn c(v: &[i64]) -> Coords {
    Coords::from_i64s(v)
}

pub fn word(f: &[(usize, i64)]) -> ExpWord {
    ExpWord::from_factors(f.iter().map(|&(l, e)| (l, BigInt::from(e))))
}

/// 3×3 integer matrices.
pub type Mat = [[BigInt; 3]; 3];

pub fn mat_identity() -> Mat {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            if i == j {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    })
}

pub fn mat_mul(x: &Mat, y: &Mat) -> Mat {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| &x[i][k] * &y[k][j]).sum()))
}

/// Inverse of a unitriangular matrix `I + U`: `I - U + U²`.
pub fn mat_inv(x: &Mat) -> Mat {
    let mut u = x.clone();
    for (i, row) in u.iter_mut().enumerate() {
        row[i] -= 1;
    }
    let u2 = mat_mul(&u, &u);
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let id = if i == j {
                BigInt::one()
            } else {
                BigInt::zero()
            };
            id - &u[i][j] + &u2[i][j]
        })
    })
}

pub fn mat_pow(x: &Mat, n: &BigInt) -> Mat {
    let base = if n.is_negative() {
        mat_inv(x)
    } else {
        x.clone()
    };
    let mut n = n.abs();
    let mut acc = mat_identity();
    let mut b = base;
    while !n.is_zero() {
        if (&n & BigInt::one()).is_one() {
            acc = mat_mul(&acc, &b);
        }
        n >>= 1;
        b = mat_mul(&b, &b);
    }
    acc
}

/// Unitriangular model of the Heisenberg group `F_{2,2}` with
/// `a1 = I + e_23`, `a2 = I + e_12` and `a3 = a2^-1 a1^-1 a2 a1`.
pub struct Heisenberg {
    letters: [Mat; 3],
    /// Entry `(0, 2)` of the matrix of `a3`.
    a3_corner: BigInt,
}

impl Heisenberg {
    pub fn new() -> Self {
        let mut a1 = mat_identity();
        a1[1][2] = BigInt::one();
        let mut a2 = mat_identity();
        a2[0][1] = BigInt::one();
        let a3 = mat_mul(&mat_mul(&mat_inv(&a2), &mat_inv(&a1)), &mat_mul(&a2, &a1));
        let a3_corner = a3[0][2].clone();
        assert!(a3_corner.abs().is_one());
        Heisenberg {
            letters: [a1, a2, a3],
            a3_corner,
        }
    }

    pub fn eval(&self, w: &ExpWord) -> Mat {
        w.factors().iter().fold(mat_identity(), |acc, (l, e)| {
            mat_mul(&acc, &mat_pow(&self.letters[*l], e))
        })
    }

    pub fn matrix_of(&self, x: &Coords) -> Mat {
        (0..3).fold(mat_identity(), |acc, i| {
            mat_mul(&acc, &mat_pow(&self.letters[i], &x[i]))
        })
    }

    /// `a1^α a2^β a3^γ = I + β e_12 + α e_23 + (±γ) e_13`.
    pub fn coords(&self, m: &Mat) -> Coords {
        Coords::new(vec![
            m[1][2].clone(),
            m[0][1].clone(),
            &m[0][2] * &self.a3_corner,
        ])
    }
}

/// Number of elements when every basis column is torsion.
pub fn finite_order(p: &QuotientPresentation) -> Option<u64> {
    let mut n: u64 = 1;
    for i in 0..p.m() {
        n = n.checked_mul(p.order(i)?.to_u64()?)?;
    }
    Some(n)
}

/// Every element of a finite quotient, as reduced coordinates.
pub fn all_elements(p: &QuotientPresentation) -> Vec<Coords> {
    let orders: Vec<i64> = (0..p.m())
        .map(|i| p.order(i).expect("finite quotient").to_i64().unwrap())
        .collect();
    let mut out = vec![Vec::new()];
    for e in orders {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<i64>| {
                (0..e).map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    out.into_iter().map(|v| c(&v)).collect()
}

/// Closure of `gens` under multiplication by generators and their inverses.
pub fn enumerate_subgroup<G: MalcevGroup>(p: &G, gens: &[Coords], limit: usize) -> HashSet<Coords> {
    let mut steps: Vec<Coords> = gens.iter().map(|g| p.reduce(g)).collect();
    steps.extend(gens.iter().map(|g| p.inv(g)));
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(p.identity());
    queue.push_back(p.identity());
    while let Some(x) = queue.pop_front() {
        for s in &steps {
            let y = p.mul(&x, s);
            if seen.insert(y.clone()) {
                assert!(seen.len() <= limit, "subgroup larger than {limit}");
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Order of `x` in a group where it is known to be finite.
pub fn element_order<G: MalcevGroup>(p: &G, x: &Coords, limit: u64) -> Option<u64> {
    let mut y = p.reduce(x);
    for k in 1..=limit {
        if y.is_identity() {
            return Some(k);
        }
        y = p.mul(&y, x);
    }
    None
}

pub fn random_element<R: Rng>(rng: &mut R, p: &QuotientPresentation, bound: i64) -> Coords {
    let v: Vec<i64> = (0..p.m()).map(|_| rng.gen_range(-bound..=bound)).collect();
    p.reduce(&c(&v))
}

/// Uniform element of a finite quotient.
pub fn random_finite_element<R: Rng>(rng: &mut R, p: &QuotientPresentation) -> Coords {
    let v: Vec<i64> = (0..p.m())
        .map(|i| rng.gen_range(0..p.order(i).unwrap().to_i64().unwrap()))
        .collect();
    c(&v)
}

/// Random finite quotient of `F_{c,r}` (`c ≤ max_class`) with at most `max`
/// elements, killing `a_i^{q_i}` for each generator and sometimes an extra
/// random element.
pub fn random_finite_quotient<R: Rng>(
    rng: &mut R,
    max_class: usize,
    max: u64,
) -> QuotientPresentation {
    const SHAPES: [(usize, usize); 5] = [(1, 2), (2, 2), (2, 3), (3, 2), (1, 3)];
    let shapes: Vec<(usize, usize)> = SHAPES.into_iter().filter(|s| s.0 <= max_class).collect();
    loop {
        let (cl, r) = *shapes.choose(rng).unwrap();
        let free = FreeNilpotentGroup::new(cl, r).unwrap();
        let mut elems: Vec<Coords> = (0..r)
            .map(|i| {
                let q = rng.gen_range(2..=6);
                let mut v = Coords::identity(free.m());
                v[i] = big(q);
                v
            })
            .collect();
        if rng.gen_bool(0.3) {
            let v: Vec<i64> = (0..free.m()).map(|_| rng.gen_range(-3..=3)).collect();
            elems.push(c(&v));
        }
        let p = quotient_by_elements(&free, &elems).unwrap();
        match finite_order(&p) {
            Some(n) if n <= max => return p,
            Some(_) => continue,
            None => panic!("killing a power of every generator must give a finite group"),
        }
    }
}

/// Random quotient of `F_{c,r}`: free, or with torsion relators of the form
/// `q·e_j + (small later entries)`.
pub fn random_quotient<R: Rng>(rng: &mut R, cl: usize, r: usize) -> QuotientPresentation {
    let free = FreeNilpotentGroup::new(cl, r).unwrap();
    let relators = rng.gen_range(0..=2);
    let elems: Vec<Coords> = (0..relators)
        .map(|_| {
            let m = free.m();
            let j = rng.gen_range(0..m);
            let mut v = Coords::identity(m);
            v[j] = big(rng.gen_range(2..=6));
            for k in j + 1..m {
                v[k] = big(rng.gen_range(-2..=2));
            }
            v
        })
        .collect();
    quotient_by_elements(&free, &elems).unwrap()
}

/// Images of every basis letter of `F_{c,r}` under `a_i ↦ gens[i]`, built
/// recursively from the commutator structure of the basis.
pub fn letter_images(
    free: &Arc<FreeNilpotentGroup>,
    target: &QuotientPresentation,
    gens: &[Coords],
) -> Vec<Coords> {
    let mut images: Vec<Coords> = Vec::with_capacity(free.m());
    for letter in free.basis().letters() {
        let img = match letter.parents {
            None => target.reduce(&gens[images.len()]),
            Some((u, v)) => target.commutator(&images[u], &images[v]),
        };
        images.push(img);
    }
    images
}

/// `∏ images[k]^{x_k}`.
pub fn apply_letters(target: &QuotientPresentation, images: &[Coords], x: &Coords) -> Coords {
    x.iter()
        .zip(images)
        .fold(target.identity(), |acc, (e, img)| {
            target.mul(&acc, &target.pow(img, e))
        })
}

/// Evaluates a word over `gens` (letter `k` is `gens[k]`).
pub fn eval_over<G: MalcevGroup>(p: &G, gens: &[Coords], w: &ExpWord) -> Coords {
    w.factors().iter().fold(p.identity(), |acc, (l, e)| {
        p.mul(&acc, &p.pow(&gens[*l], e))
    })
}
