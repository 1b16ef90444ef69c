//! Kernels and preimages of homomorphisms, centralizers, conjugacy with
//! witnesses, the power problem and the uniform torsion bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::coords::Coords;
use crate::error::{invalid, Error, Result};
use crate::group_arith::{MalcevGroup, ProductGroup};
use crate::presentations::{FullFormMatrix, QuotientPresentation};
use crate::subgroup_reduction::{evaluate_product, full_form_rows, membership};

/// A homomorphism `φ: K → H` on `K = ⟨g_1, …, g_n⟩ ≤ G` given by `g_i ↦ h_i`.
/// That the assignment extends to a homomorphism is the caller's promise.
#[derive(Clone, Copy, Debug)]
pub struct HomSpec<'a> {
    pub source: &'a QuotientPresentation,
    pub target: &'a QuotientPresentation,
    pub domain: &'a [Coords],
    pub images: &'a [Coords],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    /// Full-form sequence of `ker φ` in the source.
    pub generators: Vec<Coords>,
    /// Some `g ∈ K` with `φ(g) = h`, when `h` was given.
    pub preimage: Option<Coords>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConjugacyAnswer {
    /// `u` with `g = u^{-1} h u`.
    Conjugate(Coords),
    NotConjugate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PowerAnswer {
    Power(BigInt),
    NoPower,
}

/// All `k` with `g^k = h` (within the requested progression).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PowerSolutions {
    None,
    Single(BigInt),
    /// `k ≡ base (mod period)` with `0 ≤ base < period`.
    Progression {
        base: BigInt,
        period: BigInt,
    },
}

fn check_element(p: &QuotientPresentation, x: &Coords, what: &str) -> Result<()> {
    if x.len() != p.m() {
        return Err(invalid(format!(
            "{what} has {} coordinates, expected {}",
            x.len(),
            p.m()
        )));
    }
    if !p.is_reduced(x) {
        return Err(invalid(format!("{what} ({x}) is not reduced")));
    }
    Ok(())
}

/// Reduces `⟨(h_i, g_i)⟩ ≤ H × G` to full form. With every `H` letter ahead of
/// the `G` letters, the rows whose pivot is in `H` come first; their `H` parts
/// form the full form of `Im φ`, and the `G` parts of the remaining rows form
/// the full form of `ker φ`.
pub fn kernel_and_preimage(spec: &HomSpec<'_>, h: Option<&Coords>) -> Result<Kernel> {
    if spec.domain.len() != spec.images.len() {
        return Err(invalid(format!(
            "{} domain generators but {} images",
            spec.domain.len(),
            spec.images.len()
        )));
    }
    for (g, x) in spec.domain.iter().zip(spec.images) {
        check_element(spec.source, g, "domain generator")?;
        check_element(spec.target, x, "image")?;
    }
    if let Some(h) = h {
        check_element(spec.target, h, "element")?;
    }
    let product = ProductGroup::new(spec.target, spec.source);
    let rows: Vec<Coords> = spec
        .images
        .iter()
        .zip(spec.domain)
        .map(|(x, g)| product.pair(x, g))
        .collect();
    let form = full_form_rows(&product, &rows);
    let split = form
        .iter()
        .position(|q| q.pivot().is_some_and(|p| p >= spec.target.m()))
        .unwrap_or(form.len());
    let generators = form[split..]
        .iter()
        .map(|q| product.right_part(q))
        .collect();
    let preimage = match h {
        None => None,
        Some(h) => {
            let image = FullFormMatrix::from_rows_unchecked(
                form[..split].iter().map(|q| product.left_part(q)).collect(),
            );
            let beta = membership(spec.target, &image, h).ok_or(Error::NotInImage)?;
            let u: Vec<Coords> = form[..split]
                .iter()
                .map(|q| product.right_part(q))
                .collect();
            Some(evaluate_product(spec.source, &u, &beta))
        }
    };
    Ok(Kernel {
        generators,
        preimage,
    })
}

/// `G/Γ_c`, the reduction of `x` into it, and a lift back.
struct LowerQuotient<'a> {
    upper: &'a QuotientPresentation,
    lower: QuotientPresentation,
}

impl<'a> LowerQuotient<'a> {
    fn new(upper: &'a QuotientPresentation) -> Result<Self> {
        Ok(LowerQuotient {
            upper,
            lower: upper.drop_last_weight()?,
        })
    }

    fn down(&self, x: &Coords) -> Coords {
        self.lower.reduce(&x.truncated(self.lower.m()))
    }

    fn up(&self, x: &Coords) -> Coords {
        self.upper.reduce(&x.padded(self.upper.m()))
    }

    /// Lifts of `lower` elements together with the weight-`c` letters.
    fn lift_with_top(&self, lower: &[Coords]) -> Vec<Coords> {
        let m = self.upper.m();
        let mut j: Vec<Coords> = lower.iter().map(|u| self.up(u)).collect();
        j.extend((self.lower.m()..m).map(|i| self.upper.reduce(&Coords::unit(m, i))));
        j
    }
}

fn generators_of(p: &QuotientPresentation) -> Vec<Coords> {
    (0..p.r())
        .map(|i| p.reduce(&Coords::unit(p.m(), i)))
        .collect()
}

/// `[g, u]` for every `u`.
fn commutator_map(p: &QuotientPresentation, g: &Coords, j: &[Coords]) -> Vec<Coords> {
    j.iter().map(|u| p.commutator(g, u)).collect()
}

fn centralizer_rec(p: &QuotientPresentation, g: &Coords) -> Result<Vec<Coords>> {
    if p.c() == 1 {
        return Ok(generators_of(p));
    }
    let lq = LowerQuotient::new(p)?;
    let below = centralizer_rec(&lq.lower, &lq.down(g))?;
    let j = lq.lift_with_top(&below);
    let images = commutator_map(p, g, &j);
    let spec = HomSpec {
        source: p,
        target: p,
        domain: &j,
        images: &images,
    };
    Ok(kernel_and_preimage(&spec, None)?.generators)
}

/// Generators of the centralizer of `g`.
pub fn centralizer(p: &QuotientPresentation, g: &Coords) -> Result<Vec<Coords>> {
    check_element(p, g, "element")?;
    centralizer_rec(p, g)
}

fn conjugacy_rec(p: &QuotientPresentation, g: &Coords, h: &Coords) -> Result<Option<Coords>> {
    if p.c() == 1 {
        return Ok((g == h).then(|| p.identity()));
    }
    let lq = LowerQuotient::new(p)?;
    let (gl, hl) = (lq.down(g), lq.down(h));
    let Some(vl) = conjugacy_rec(&lq.lower, &gl, &hl)? else {
        return Ok(None);
    };
    let v = lq.up(&vl);
    // h^v ≡ g modulo Γ_c, so z = g^{-1} h^v is central.
    let hv = p.conjugate(h, &v);
    let z = p.mul(&p.inv(g), &hv);
    let j = lq.lift_with_top(&centralizer_rec(&lq.lower, &gl)?);
    let images = commutator_map(p, g, &j);
    let spec = HomSpec {
        source: p,
        target: p,
        domain: &j,
        images: &images,
    };
    let w = match kernel_and_preimage(&spec, Some(&z)) {
        Ok(k) => k.preimage.expect("preimage requested"),
        Err(Error::NotInImage) => return Ok(None),
        Err(e) => return Err(e),
    };
    Ok(Some(p.mul(&v, &p.inv(&w))))
}

/// Decides whether `g = u^{-1} h u` for some `u` and returns one.
pub fn conjugacy(p: &QuotientPresentation, g: &Coords, h: &Coords) -> Result<ConjugacyAnswer> {
    check_element(p, g, "first element")?;
    check_element(p, h, "second element")?;
    match conjugacy_rec(p, g, h)? {
        None => Ok(ConjugacyAnswer::NotConjugate),
        Some(u) => {
            if &p.conjugate(h, &u) != g {
                return Err(Error::Internal("conjugacy witness does not verify".into()));
            }
            Ok(ConjugacyAnswer::Conjugate(u))
        }
    }
}

/// `k ≡ a (mod b)` with `b > 0`, or every integer.
type Congruence = Option<(BigInt, BigInt)>;

/// Intersection of `k ≡ a1 (mod b1)` and `k ≡ a2 (mod b2)`.
fn crt(a1: &BigInt, b1: &BigInt, a2: &BigInt, b2: &BigInt) -> Option<(BigInt, BigInt)> {
    let eg = b1.extended_gcd(b2);
    let diff = a2 - a1;
    if !diff.is_multiple_of(&eg.gcd) {
        return None;
    }
    let l = b1 / &eg.gcd * b2;
    let s = (&diff / &eg.gcd * &eg.x).mod_floor(&(b2 / &eg.gcd));
    Some(((a1 + b1 * s).mod_floor(&l), l))
}

enum Solutions {
    Every,
    Single(BigInt),
    Progression(BigInt, BigInt),
}

fn power_rec(
    p: &QuotientPresentation,
    g: &Coords,
    h: &Coords,
    cong: Congruence,
) -> Option<Solutions> {
    let Some(pi) = g.pivot() else {
        return h.is_identity().then_some(match cong {
            None => Solutions::Every,
            Some((a, b)) => Solutions::Progression(a, b),
        });
    };
    if h.pivot().is_some_and(|q| q < pi) {
        return None;
    }
    let (gp, hp) = (&g[pi], &h[pi]);
    match p.order(pi) {
        None => {
            let (k, rem) = hp.div_rem(gp);
            if !rem.is_zero() {
                return None;
            }
            if let Some((a, b)) = &cong {
                if !(&k - a).is_multiple_of(b) {
                    return None;
                }
            }
            (p.pow(g, &k) == *h).then_some(Solutions::Single(k))
        }
        Some(e) => {
            // k·g_π ≡ h_π (mod e).
            let eg = gp.extended_gcd(e);
            if !hp.is_multiple_of(&eg.gcd) {
                return None;
            }
            let period = e / &eg.gcd;
            let base = (hp / &eg.gcd * &eg.x).mod_floor(&period);
            let (t, l) = match &cong {
                None => (base, period),
                Some((a, b)) => crt(&base, &period, a, b)?,
            };
            // k = t + l·s and g^k = g^t (g^l)^s; g^l has a later pivot.
            let gl = p.pow(g, &l);
            let rest = p.mul(&p.pow(g, &-&t), h);
            Some(match power_rec(p, &gl, &rest, None)? {
                Solutions::Every => Solutions::Progression(t, l),
                Solutions::Single(s) => Solutions::Single(t + l * s),
                Solutions::Progression(a, b) => {
                    let period = &l * b;
                    Solutions::Progression((t + &l * a).mod_floor(&period), period)
                }
            })
        }
    }
}

fn progression(prog: Option<(&BigInt, &BigInt)>) -> Result<Congruence> {
    match prog {
        None => Ok(None),
        Some((_, beta)) if !beta.is_positive() => Err(invalid(format!(
            "progression step must be positive, got {beta}; omit the progression to allow every k"
        ))),
        Some((alpha, beta)) => Ok(Some((alpha.mod_floor(beta), beta.clone()))),
    }
}

/// Every `k` (in `α + βℤ` when a progression is given) with `g^k = h`.
pub fn power_solutions(
    p: &QuotientPresentation,
    g: &Coords,
    h: &Coords,
    prog: Option<(&BigInt, &BigInt)>,
) -> Result<PowerSolutions> {
    check_element(p, g, "base")?;
    check_element(p, h, "target")?;
    let cong = progression(prog)?;
    Ok(match power_rec(p, g, h, cong) {
        None => PowerSolutions::None,
        Some(Solutions::Single(k)) => PowerSolutions::Single(k),
        Some(Solutions::Every) => PowerSolutions::Progression {
            base: BigInt::zero(),
            period: BigInt::one(),
        },
        Some(Solutions::Progression(base, period)) => PowerSolutions::Progression { base, period },
    })
}

/// Some `k` with `g^k = h`; the smallest non-negative one when there are
/// infinitely many.
pub fn power_problem(
    p: &QuotientPresentation,
    g: &Coords,
    h: &Coords,
    prog: Option<(&BigInt, &BigInt)>,
) -> Result<PowerAnswer> {
    Ok(match power_solutions(p, g, h, prog)? {
        PowerSolutions::None => PowerAnswer::NoPower,
        PowerSolutions::Single(k) => PowerAnswer::Power(k),
        PowerSolutions::Progression { base, .. } => PowerAnswer::Power(base),
    })
}

/// `∏ e_i` over the torsion positions; `x^M = 1` for every torsion element.
pub fn torsion_bound(p: &QuotientPresentation) -> BigInt {
    p.torsion()
        .iter()
        .map(|&i| p.order(i).expect("torsion position has an order"))
        .product()
}
