use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::collector::Collector;
use crate::coords::Coords;
use crate::error::{invalid, Result};
use crate::word::ExpWord;

/// A nilpotent presentation on generators `g_1, …, g_s` with relations
///
/// ```text
/// g_i^{e_i}      = g_{i+1}^{μ_{i,i+1}} ⋯ g_s^{μ_{i,s}}     (finite e_i)
/// g_j g_i        = g_i g_j      · tail_{ij}               (j > i)
/// g_j^{-1} g_i   = g_i g_j^{-1} · tail'_{ij}              (j > i)
/// ```
///
/// where the tails are exponent vectors supported on generators above `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentPresentation {
    orders: Vec<Option<BigInt>>,
    powers: Vec<Option<Coords>>,
    commute: Vec<Coords>,
    commute_inverse: Vec<Coords>,
}

fn slot(i: usize, j: usize) -> usize {
    j * (j - 1) / 2 + i
}

impl NilpotentPresentation {
    /// `commute` and `commute_inverse` list the tails for pairs `i < j` with
    /// `j` as the outer loop: `(0,1), (0,2), (1,2), (0,3), …`.
    pub fn from_parts(
        orders: Vec<Option<BigInt>>,
        powers: Vec<Option<Coords>>,
        commute: Vec<Coords>,
        commute_inverse: Vec<Coords>,
    ) -> Result<Self> {
        let s = orders.len();
        let pairs = s * s.saturating_sub(1) / 2;
        if powers.len() != s || commute.len() != pairs || commute_inverse.len() != pairs {
            return Err(invalid("relation tables do not match the generator count"));
        }
        let above = |t: &Coords, k: usize| t.len() == s && t.pivot().is_none_or(|p| p > k);
        for i in 0..s {
            match (&orders[i], &powers[i]) {
                (Some(e), Some(t)) => {
                    if !e.is_positive() {
                        return Err(invalid(format!(
                            "relative order of g{} must be positive",
                            i + 1
                        )));
                    }
                    if !above(t, i) {
                        return Err(invalid(format!("power tail of g{} is not above it", i + 1)));
                    }
                }
                (None, None) => {}
                _ => {
                    return Err(invalid(format!(
                        "g{} needs a power relation exactly when its order is finite",
                        i + 1
                    )))
                }
            }
        }
        for j in 0..s {
            for i in 0..j {
                let k = slot(i, j);
                if !above(&commute[k], j) || !above(&commute_inverse[k], j) {
                    return Err(invalid(format!(
                        "commutation tail for (g{}, g{}) is not above both",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(NilpotentPresentation {
            orders,
            powers,
            commute,
            commute_inverse,
        })
    }

    /// Number of generators `s`.
    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    /// `e_i`, or `None` for infinite relative order.
    pub fn order(&self, i: usize) -> Option<&BigInt> {
        self.orders[i].as_ref()
    }

    /// Right-hand side of `g_i^{e_i} = …`.
    pub fn power(&self, i: usize) -> Option<&Coords> {
        self.powers[i].as_ref()
    }

    /// Tail of `g_j g_i = g_i g_j · tail` for `i < j`.
    pub fn commutation(&self, i: usize, j: usize) -> &Coords {
        &self.commute[slot(i, j)]
    }

    /// Tail of `g_j^{-1} g_i = g_i g_j^{-1} · tail` for `i < j`.
    pub fn inverse_commutation(&self, i: usize, j: usize) -> &Coords {
        &self.commute_inverse[slot(i, j)]
    }

    /// Normal form of a word over the generators, by collection.
    pub fn collect(&self, w: &ExpWord) -> Result<Coords> {
        if w.max_letter().is_some_and(|l| l >= self.len()) {
            return Err(invalid("word uses a letter outside the presentation"));
        }
        let col = Collector::new(self);
        let mut x = Coords::identity(self.len());
        for (l, e) in w.factors() {
            x = col.mul_gen_pow(&x, *l, e);
        }
        Ok(x)
    }

    /// Whether the presentation is consistent: every overlap of relations
    /// collects to the same normal form either way.
    pub fn consistency_check(&self) -> bool {
        let s = self.len();
        let col = Collector::new(self);
        let one = BigInt::one();
        let nf = |w: &[(usize, BigInt)]| {
            let mut x = Coords::identity(s);
            for (l, e) in w {
                x = col.mul_gen_pow(&x, *l, e);
            }
            x
        };
        let g = |i: usize| nf(&[(i, one.clone())]);
        let minus = -&one;

        for i in 0..s {
            if let Some(e) = self.order(i) {
                let lhs = col.mul(&nf(&[(i, e.clone())]), &g(i));
                let rhs = col.mul(&g(i), &nf(&[(i, e.clone())]));
                if lhs != rhs {
                    return false;
                }
            }
        }
        for j in 0..s {
            for i in 0..j {
                let lhs = nf(&[(j, minus.clone()), (i, one.clone())]);
                let rhs = col.mul(
                    &nf(&[(i, one.clone()), (j, minus.clone())]),
                    self.inverse_commutation(i, j),
                );
                if lhs != rhs {
                    return false;
                }
                if let Some(e) = self.order(j) {
                    let lhs = col.mul(&nf(&[(j, e.clone())]), &g(i));
                    let rhs = col.mul(
                        &nf(&[(j, e - 1u32)]),
                        &nf(&[(j, one.clone()), (i, one.clone())]),
                    );
                    if lhs != rhs {
                        return false;
                    }
                }
                match self.order(i) {
                    Some(e) => {
                        let lhs = col.mul(&nf(&[(j, one.clone()), (i, e - 1u32)]), &g(i));
                        let rhs = col.mul(&g(j), &nf(&[(i, e.clone())]));
                        if lhs != rhs {
                            return false;
                        }
                    }
                    None => {
                        let lhs = col.mul(&nf(&[(j, one.clone()), (i, minus.clone())]), &g(i));
                        if lhs != g(j) {
                            return false;
                        }
                        if self.order(j).is_none() {
                            let lhs =
                                col.mul(&nf(&[(j, minus.clone()), (i, minus.clone())]), &g(i));
                            if lhs != nf(&[(j, minus.clone())]) {
                                return false;
                            }
                        }
                    }
                }
                for k in j + 1..s {
                    let lhs = col.mul(&nf(&[(k, one.clone()), (j, one.clone())]), &g(i));
                    let rhs = col.mul(&g(k), &nf(&[(j, one.clone()), (i, one.clone())]));
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }
}
