//! Arithmetic in quotients `G = F_{c,r}/N`: normal forms of words with binary
//! exponents, the word problem, and products, inverses and powers of reduced
//! coordinate vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::coords::Coords;
use crate::error::{invalid, Result};
use crate::presentations::QuotientPresentation;
use crate::word::ExpWord;

/// A group with a Mal'cev basis `a_1, …, a_m` along a central series, so that
/// every `⟨a_i, …, a_m⟩` is normal and `a_i` is central modulo `⟨a_{i+1}, …⟩`.
///
/// Elements are coordinate vectors. Inputs may be arbitrary vectors of the
/// right length (read as the word `a_1^{x_1} ⋯ a_m^{x_m}`); outputs are always
/// reduced, i.e. `0 ≤ x_i < e_i` at every torsion position.
pub trait MalcevGroup {
    /// Number of basis letters.
    fn len(&self) -> usize;

    /// `e_i` when `a_i` has finite relative order.
    fn relative_order(&self, i: usize) -> Option<&BigInt>;

    /// The unreduced relator row `(0, …, 0, e_i, α_{i+1}, …, α_m)` for a
    /// torsion position `i`; it represents the identity.
    fn relator_row(&self, i: usize) -> Option<Coords>;

    fn reduce(&self, x: &Coords) -> Coords;

    fn mul(&self, x: &Coords, y: &Coords) -> Coords;

    fn pow(&self, x: &Coords, n: &BigInt) -> Coords;

    fn identity(&self) -> Coords {
        Coords::identity(self.len())
    }

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn inv(&self, x: &Coords) -> Coords {
        self.pow(x, &-BigInt::one())
    }

    /// `y^{-1} x y`.
    fn conjugate(&self, x: &Coords, y: &Coords) -> Coords {
        self.mul(&self.mul(&self.inv(y), x), y)
    }

    /// `[x, y] = x^{-1} y^{-1} x y`.
    fn commutator(&self, x: &Coords, y: &Coords) -> Coords {
        self.mul(&self.mul(&self.inv(x), &self.inv(y)), &self.mul(x, y))
    }

    fn is_reduced(&self, x: &Coords) -> bool {
        x.len() == self.len()
            && (0..self.len()).all(|i| match self.relative_order(i) {
                Some(e) => !x[i].is_negative() && &x[i] < e,
                None => true,
            })
    }
}

impl MalcevGroup for QuotientPresentation {
    fn len(&self) -> usize {
        self.m()
    }

    fn relative_order(&self, i: usize) -> Option<&BigInt> {
        self.order(i)
    }

    fn relator_row(&self, i: usize) -> Option<Coords> {
        self.relator_for(i).cloned()
    }

    /// Left-to-right torsion folding: at each torsion position `i` write
    /// `x_i = q·e_i + rem` and multiply on the right by `t_i^{-q}`, where `t_i`
    /// is the relator row with pivot `i`. Earlier positions are untouched
    /// because `t_i` vanishes there.
    fn reduce(&self, x: &Coords) -> Coords {
        let free = self.free();
        let mut x = x.clone();
        for &i in self.torsion() {
            let e = self.order(i).expect("torsion position has an order");
            let q = x[i].div_floor(e);
            if !q.is_zero() {
                let t = self.relator_for(i).expect("torsion position has a relator");
                x = free.mul(&x, &free.pow(t, &-q));
            }
        }
        x
    }

    fn mul(&self, x: &Coords, y: &Coords) -> Coords {
        self.reduce(&self.free().mul(x, y))
    }

    fn pow(&self, x: &Coords, n: &BigInt) -> Coords {
        self.reduce(&self.free().pow(x, n))
    }
}

/// `H × G` with the Mal'cev basis of `H` followed by that of `G`.
///
/// Coordinates are the concatenation of the two factors' coordinates. Putting
/// every letter of `H` first makes `1 × G` a term of the series, which is what
/// kernel computations need.
#[derive(Clone, Copy, Debug)]
pub struct ProductGroup<'a> {
    pub left: &'a QuotientPresentation,
    pub right: &'a QuotientPresentation,
}

impl<'a> ProductGroup<'a> {
    pub fn new(left: &'a QuotientPresentation, right: &'a QuotientPresentation) -> Self {
        ProductGroup { left, right }
    }

    pub fn pair(&self, h: &Coords, g: &Coords) -> Coords {
        h.iter().chain(g.iter()).cloned().collect()
    }

    pub fn left_part(&self, x: &Coords) -> Coords {
        x[..self.left.m()].iter().cloned().collect()
    }

    pub fn right_part(&self, x: &Coords) -> Coords {
        x[self.left.m()..].iter().cloned().collect()
    }

    fn split(&self, x: &Coords) -> (Coords, Coords) {
        (self.left_part(x), self.right_part(x))
    }
}

impl MalcevGroup for ProductGroup<'_> {
    fn len(&self) -> usize {
        self.left.m() + self.right.m()
    }

    fn relative_order(&self, i: usize) -> Option<&BigInt> {
        let k = self.left.m();
        if i < k {
            self.left.order(i)
        } else {
            self.right.order(i - k)
        }
    }

    fn relator_row(&self, i: usize) -> Option<Coords> {
        let k = self.left.m();
        if i < k {
            let t = self.left.relator_for(i)?;
            Some(self.pair(t, &self.right.free().identity()))
        } else {
            let t = self.right.relator_for(i - k)?;
            Some(self.pair(&self.left.free().identity(), t))
        }
    }

    fn reduce(&self, x: &Coords) -> Coords {
        let (h, g) = self.split(x);
        self.pair(&self.left.reduce(&h), &self.right.reduce(&g))
    }

    fn mul(&self, x: &Coords, y: &Coords) -> Coords {
        let (xh, xg) = self.split(x);
        let (yh, yg) = self.split(y);
        self.pair(&self.left.mul(&xh, &yh), &self.right.mul(&xg, &yg))
    }

    fn pow(&self, x: &Coords, n: &BigInt) -> Coords {
        let (h, g) = self.split(x);
        self.pair(&self.left.pow(&h, n), &self.right.pow(&g, n))
    }
}

fn check_element(p: &QuotientPresentation, g: &Coords) -> Result<()> {
    if g.len() != p.m() {
        return Err(invalid(format!(
            "element has {} coordinates, the presentation has {} letters",
            g.len(),
            p.m()
        )));
    }
    if !p.is_reduced(g) {
        return Err(invalid(format!("element ({g}) is not reduced")));
    }
    Ok(())
}

/// Unique normal form of `w` in `G`.
pub fn normal_form(p: &QuotientPresentation, w: &ExpWord) -> Result<Coords> {
    Ok(p.reduce(&p.free().eval(w)?))
}

/// Whether `w` represents the identity of `G`.
pub fn word_problem(p: &QuotientPresentation, w: &ExpWord) -> Result<bool> {
    Ok(normal_form(p, w)?.is_identity())
}

pub fn mult(p: &QuotientPresentation, g: &Coords, h: &Coords) -> Result<Coords> {
    check_element(p, g)?;
    check_element(p, h)?;
    Ok(p.mul(g, h))
}

pub fn inverse(p: &QuotientPresentation, g: &Coords) -> Result<Coords> {
    check_element(p, g)?;
    Ok(p.inv(g))
}

pub fn power(p: &QuotientPresentation, g: &Coords, n: &BigInt) -> Result<Coords> {
    check_element(p, g)?;
    Ok(p.pow(g, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_nilpotent::FreeNilpotentGroup;
    use crate::presentations::make_quotient_presentation;

    fn c(v: &[i64]) -> Coords {
        Coords::from_i64s(v)
    }

    fn z2_times_z() -> QuotientPresentation {
        let free = FreeNilpotentGroup::new(1, 2).unwrap();
        make_quotient_presentation(&free, &[c(&[2, 0])]).unwrap()
    }

    fn heisenberg() -> QuotientPresentation {
        QuotientPresentation::free_group(2, 2).unwrap()
    }

    fn word(f: &[(usize, i64)]) -> ExpWord {
        ExpWord::from_factors(f.iter().map(|&(l, e)| (l, BigInt::from(e))))
    }

    #[test]
    fn normal_form_examples() {
        let p = z2_times_z();
        assert_eq!(normal_form(&p, &ExpWord::new()).unwrap(), c(&[0, 0]));
        assert_eq!(
            normal_form(&p, &word(&[(0, 5), (1, -1)])).unwrap(),
            c(&[1, -1])
        );
        let h = heisenberg();
        let w = word(&[(0, 1024), (1, 1), (0, -1024)]);
        assert_eq!(normal_form(&h, &w).unwrap(), c(&[0, 1, -1024]));
    }

    #[test]
    fn word_problem_examples() {
        let p = z2_times_z();
        assert!(word_problem(&p, &ExpWord::new()).unwrap());
        assert!(word_problem(&p, &word(&[(0, 2)])).unwrap());
        let h = heisenberg();
        let w = word(&[(1, -1), (0, -1), (1, 1), (0, 1), (2, -1)]);
        assert!(word_problem(&h, &w).unwrap());
        assert!(!word_problem(&h, &word(&[(0, 1), (1, 1), (0, -1), (1, -1)])).unwrap());
    }

    #[test]
    fn arithmetic_examples() {
        let p = z2_times_z();
        assert_eq!(mult(&p, &c(&[1, 3]), &c(&[1, -1])).unwrap(), c(&[0, 2]));
        assert_eq!(mult(&p, &c(&[1, 3]), &c(&[0, 0])).unwrap(), c(&[1, 3]));
        assert!(mult(&p, &c(&[3, 0]), &c(&[0, 0])).is_err());
        let h = heisenberg();
        assert_eq!(
            power(&h, &c(&[1, 1, 0]), &BigInt::from(4)).unwrap(),
            c(&[4, 4, 6])
        );
        let g = c(&[1, 1, 0]);
        assert!(mult(&h, &g, &inverse(&h, &g).unwrap())
            .unwrap()
            .is_identity());
    }

    #[test]
    fn central_torsion_in_heisenberg() {
        let free = FreeNilpotentGroup::new(2, 2).unwrap();
        let p = make_quotient_presentation(&free, &[c(&[0, 0, 2])]).unwrap();
        // a2 a1 = a1 a2 a3, so (a2 a1)^2 = a1^2 a2^2 a3^{2+1}.
        let w = word(&[(1, 1), (0, 1), (1, 1), (0, 1)]);
        assert_eq!(normal_form(&p, &w).unwrap(), c(&[2, 2, 1]));
    }

    #[test]
    fn product_group_is_componentwise() {
        let a = z2_times_z();
        let b = heisenberg();
        let g = ProductGroup::new(&a, &b);
        let x = g.pair(&c(&[1, 2]), &c(&[0, 1, 0]));
        let y = g.pair(&c(&[1, 0]), &c(&[1, 0, 0]));
        assert_eq!(g.mul(&x, &y), c(&[0, 2, 1, 1, 1]));
        assert_eq!(g.relator_row(0), Some(c(&[2, 0, 0, 0, 0])));
        assert!(g.mul(&x, &g.inv(&x)).is_identity());
    }
}
