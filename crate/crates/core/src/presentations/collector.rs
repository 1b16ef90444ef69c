//! Collection in a nilpotent presentation.
//!
//! `x · g_i^n` is computed as `u · g_i^n · φ_i^n(v)` where `x = u v`, `u` holds
//! the exponents up to `i`, `v` lies in `⟨g_{i+1}, …⟩`, and `φ_i` is conjugation
//! by `g_i`. Everything on the right of `g_i` is again an element of the
//! subgroup above `i`, so the recursion only ever descends to larger indices.

use std::cell::RefCell;
use std::rc::Rc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::NilpotentPresentation;
use crate::coords::Coords;

type Images = Rc<Vec<Coords>>;

pub(crate) struct Collector<'a> {
    pres: &'a NilpotentPresentation,
    s: usize,
    phi: RefCell<Vec<Option<Images>>>,
    phi_inv: RefCell<Vec<Option<Images>>>,
}

impl<'a> Collector<'a> {
    pub fn new(pres: &'a NilpotentPresentation) -> Self {
        let s = pres.len();
        Collector {
            pres,
            s,
            phi: RefCell::new(vec![None; s]),
            phi_inv: RefCell::new(vec![None; s]),
        }
    }

    fn identity(&self) -> Coords {
        Coords::identity(self.s)
    }

    fn generator(&self, j: usize) -> Coords {
        self.mul_gen_pow(&self.identity(), j, &BigInt::one())
    }

    pub fn mul(&self, x: &Coords, y: &Coords) -> Coords {
        let mut out = x.clone();
        for (j, e) in y.iter().enumerate() {
            if !e.is_zero() {
                out = self.mul_gen_pow(&out, j, e);
            }
        }
        out
    }

    pub fn mul_gen_pow(&self, x: &Coords, i: usize, n: &BigInt) -> Coords {
        if n.is_zero() {
            return x.clone();
        }
        let mut head = x.clone();
        let mut v = self.identity();
        for k in i + 1..self.s {
            std::mem::swap(&mut v[k], &mut head[k]);
        }
        let total = &x[i] + n;
        let (q, r) = match self.pres.order(i) {
            Some(e) => total.div_mod_floor(e),
            None => (BigInt::zero(), total),
        };
        head[i] = r;
        let mut tail = match self.pres.power(i) {
            Some(t) if !q.is_zero() => self.pow(t, &q),
            _ => self.identity(),
        };
        if !v.is_identity() {
            let moved = self.act_power(i, n, &v);
            tail = self.mul(&tail, &moved);
        }
        for k in i + 1..self.s {
            std::mem::swap(&mut head[k], &mut tail[k]);
        }
        head
    }

    pub fn inv(&self, x: &Coords) -> Coords {
        let mut out = self.identity();
        for j in (0..self.s).rev() {
            if !x[j].is_zero() {
                out = self.mul_gen_pow(&out, j, &-&x[j]);
            }
        }
        out
    }

    pub fn pow(&self, x: &Coords, n: &BigInt) -> Coords {
        if n.is_negative() {
            return self.pow(&self.inv(x), &-n);
        }
        let mut result = self.identity();
        let mut base = x.clone();
        let mut n = n.clone();
        while !n.is_zero() {
            if n.is_odd() {
                result = self.mul(&result, &base);
            }
            n >>= 1;
            if !n.is_zero() {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    /// `∏_j images[j]^{v_j}` for `v` supported above the automorphism's index.
    fn apply(&self, images: &[Coords], v: &Coords) -> Coords {
        let mut out = self.identity();
        for (j, e) in v.iter().enumerate() {
            if !e.is_zero() {
                out = self.mul(&out, &self.pow(&images[j], e));
            }
        }
        out
    }

    fn compose(&self, first: &[Coords], second: &[Coords], from: usize) -> Vec<Coords> {
        let mut out = vec![self.identity(); self.s];
        for j in from + 1..self.s {
            out[j] = self.apply(first, &second[j]);
        }
        out
    }

    /// `φ_i^n(v)`.
    fn act_power(&self, i: usize, n: &BigInt, v: &Coords) -> Coords {
        let images = if n.is_negative() {
            self.phi_inv(i)
        } else {
            self.phi(i)
        };
        let count = n.abs();
        if let Some(small) = count.to_u32().filter(|&k| k <= 8) {
            let mut out = v.clone();
            for _ in 0..small {
                out = self.apply(&images, &out);
            }
            return out;
        }
        let mut out = v.clone();
        let mut auto: Vec<Coords> = images.as_ref().clone();
        let mut k = count;
        while !k.is_zero() {
            if k.is_odd() {
                out = self.apply(&auto, &out);
            }
            k >>= 1;
            if !k.is_zero() {
                auto = self.compose(&auto, &auto, i);
            }
        }
        out
    }

    /// Images `g_i^{-1} g_j g_i = g_j · tail_{ij}` for `j > i`.
    fn phi(&self, i: usize) -> Images {
        if let Some(im) = self.phi.borrow()[i].clone() {
            return im;
        }
        let mut images = vec![self.identity(); self.s];
        for j in i + 1..self.s {
            images[j] = self.mul(&self.generator(j), self.pres.commutation(i, j));
        }
        let images = Rc::new(images);
        self.phi.borrow_mut()[i] = Some(Rc::clone(&images));
        images
    }

    /// Images `g_i g_j g_i^{-1}`, solved from the top: writing the image as
    /// `g_j s_j`, applying `φ_i` gives `φ_i(s_j) = tail_{ij}^{-1}`, so
    /// `s_j = φ_i^{-1}(tail_{ij}^{-1})` only needs images above `j`.
    fn phi_inv(&self, i: usize) -> Images {
        if let Some(im) = self.phi_inv.borrow()[i].clone() {
            return im;
        }
        let mut images = vec![self.identity(); self.s];
        for j in (i + 1..self.s).rev() {
            let t_inv = self.inv(self.pres.commutation(i, j));
            let s = self.apply(&images, &t_inv);
            images[j] = self.mul(&self.generator(j), &s);
        }
        let images = Rc::new(images);
        self.phi_inv.borrow_mut()[i] = Some(Rc::clone(&images));
        images
    }
}
