//! Free nilpotent groups `F_{c,r}` with their standard Mal'cev basis of basic
//! commutators.
//!
//! Arithmetic runs through the Magnus embedding `a_i ↦ 1 + X_i` into power
//! series truncated above degree `c`. Coordinates are read back weight by
//! weight: the degree-`w` part of an element of `Γ_w` is an integer combination
//! of the leading Lie terms of the weight-`w` letters.

mod hall;
mod series;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::coords::Coords;
use crate::error::{invalid, Error, Result};
use crate::word::ExpWord;

pub use hall::{
    build_hall_basis, build_hall_basis_with_cap, witt_rank, BasicCommutator, HallBasis,
    DEFAULT_BASIS_CAP,
};
use series::{Series, SeriesRing};

/// Tails of the commutation relations of a Mal'cev basis.
///
/// For `i < j`, `a_j a_i = a_i a_j · t` and `a_j^{-1} a_i = a_i a_j^{-1} · t'`;
/// both tails are stored as full-length coordinate vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureRelations {
    m: usize,
    commute: Vec<Coords>,
    commute_inverse: Vec<Coords>,
}

impl StructureRelations {
    fn slot(&self, i: usize, j: usize) -> usize {
        assert!(i < j && j < self.m, "need i < j < m");
        j * (j - 1) / 2 + i
    }

    /// Tail `t` of `a_j a_i = a_i a_j t`.
    pub fn commutation(&self, i: usize, j: usize) -> &Coords {
        &self.commute[self.slot(i, j)]
    }

    /// Tail `t'` of `a_j^{-1} a_i = a_i a_j^{-1} t'`.
    pub fn inverse_commutation(&self, i: usize, j: usize) -> &Coords {
        &self.commute_inverse[self.slot(i, j)]
    }
}

struct WeightSolver {
    /// Local monomial indices whose coefficients determine the solution.
    rows: Vec<usize>,
    adj: Vec<Vec<BigInt>>,
    det: BigInt,
}

impl WeightSolver {
    fn new(columns: &[Vec<BigInt>], monomials: usize) -> Result<Self> {
        let k = columns.len();
        if k == 0 {
            return Ok(WeightSolver {
                rows: Vec::new(),
                adj: Vec::new(),
                det: BigInt::one(),
            });
        }
        // Greedily pick monomials whose coefficient rows are independent.
        let mut basis: Vec<(usize, Vec<BigRational>)> = Vec::new();
        let mut rows = Vec::new();
        for mono in 0..monomials {
            let mut v: Vec<BigRational> = columns
                .iter()
                .map(|col| BigRational::from_integer(col[mono].clone()))
                .collect();
            for (p, b) in &basis {
                if !v[*p].is_zero() {
                    let f = &v[*p] / &b[*p];
                    for t in 0..k {
                        let d = &f * &b[t];
                        v[t] -= d;
                    }
                }
            }
            if let Some(p) = v.iter().position(|x| !x.is_zero()) {
                basis.push((p, v));
                rows.push(mono);
                if rows.len() == k {
                    break;
                }
            }
        }
        if rows.len() < k {
            return Err(Error::Internal(
                "leading terms of basic commutators are dependent".into(),
            ));
        }
        let square: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|&mono| {
                columns
                    .iter()
                    .map(|col| BigRational::from_integer(col[mono].clone()))
                    .collect()
            })
            .collect();
        let (inv, det) = invert(square)?;
        let adj = inv
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|x| {
                        let y = x * BigRational::from_integer(det.clone());
                        y.to_integer()
                    })
                    .collect()
            })
            .collect();
        Ok(WeightSolver { rows, adj, det })
    }

    fn solve(&self, coeffs: &[BigInt]) -> Result<Vec<BigInt>> {
        let mut out = Vec::with_capacity(self.adj.len());
        for row in &self.adj {
            let mut acc = BigInt::zero();
            for (a, &mono) in row.iter().zip(&self.rows) {
                let c = &coeffs[mono];
                if !a.is_zero() && !c.is_zero() {
                    acc += a * c;
                }
            }
            let (q, r) = acc.div_rem(&self.det);
            if !r.is_zero() {
                return Err(Error::Internal(
                    "coordinate extraction produced a non-integral exponent".into(),
                ));
            }
            out.push(q);
        }
        Ok(out)
    }
}

/// Inverse and determinant of a square rational matrix by Gauss-Jordan.
fn invert(mut a: Vec<Vec<BigRational>>) -> Result<(Vec<Vec<BigRational>>, BigInt)> {
    let n = a.len();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut det = BigRational::one();
    for col in 0..n {
        let piv = (col..n)
            .find(|&i| !a[i][col].is_zero())
            .ok_or_else(|| Error::Internal("singular extraction matrix".into()))?;
        if piv != col {
            a.swap(piv, col);
            inv.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for t in 0..n {
            a[col][t] = &a[col][t] / &p;
            inv[col][t] = &inv[col][t] / &p;
        }
        for i in 0..n {
            if i == col || a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            for t in 0..n {
                let x = &f * &a[col][t];
                a[i][t] -= x;
                let y = &f * &inv[col][t];
                inv[i][t] -= y;
            }
        }
    }
    if !det.is_integer() {
        return Err(Error::Internal("non-integral determinant".into()));
    }
    Ok((inv, det.to_integer()))
}

struct LetterData {
    series: Series,
    /// Powers of `series - 1`.
    nil: Vec<Series>,
}

/// The free nilpotent group `F_{c,r}` together with its arithmetic engine.
pub struct FreeNilpotentGroup {
    basis: HallBasis,
    ring: SeriesRing,
    letters: Vec<LetterData>,
    solvers: Vec<WeightSolver>,
    relations: OnceLock<StructureRelations>,
}

impl std::fmt::Debug for FreeNilpotentGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FreeNilpotentGroup")
            .field("c", &self.basis.c())
            .field("r", &self.basis.r())
            .field("m", &self.basis.m())
            .finish()
    }
}

impl PartialEq for FreeNilpotentGroup {
    fn eq(&self, other: &Self) -> bool {
        self.basis.c() == other.basis.c() && self.basis.r() == other.basis.r()
    }
}

impl Eq for FreeNilpotentGroup {}

type Cache = Mutex<HashMap<(usize, usize), Arc<FreeNilpotentGroup>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl FreeNilpotentGroup {
    /// Shared instance for `(c, r)` under the default basis cap.
    pub fn new(c: usize, r: usize) -> Result<Arc<Self>> {
        let mut map = cache().lock().unwrap_or_else(|e| e.into_inner());
        if let Some(g) = map.get(&(c, r)) {
            return Ok(Arc::clone(g));
        }
        let g = Arc::new(Self::from_basis(build_hall_basis(c, r)?)?);
        map.insert((c, r), Arc::clone(&g));
        Ok(g)
    }

    /// Builds an unshared instance with an explicit basis cap.
    pub fn with_cap(c: usize, r: usize, cap: usize) -> Result<Self> {
        Self::from_basis(build_hall_basis_with_cap(c, r, cap)?)
    }

    fn from_basis(basis: HallBasis) -> Result<Self> {
        let ring = SeriesRing::new(basis.c(), basis.r());
        let mut letters: Vec<LetterData> = Vec::with_capacity(basis.m());
        for letter in basis.letters() {
            let series = match letter.parents {
                None => ring.generator(letters.len()),
                Some((u, v)) => {
                    let su = &letters[u];
                    let sv = &letters[v];
                    let minus_one = -BigInt::one();
                    let ui = ring.binomial_power(&su.nil, &minus_one);
                    let vi = ring.binomial_power(&sv.nil, &minus_one);
                    let left = ring.mul(&ui, &vi);
                    let right = ring.mul(&su.series, &sv.series);
                    ring.mul(&left, &right)
                }
            };
            let nil = ring.nil_powers(&ring.sub(&series, &ring.one()));
            letters.push(LetterData { series, nil });
        }
        let mut solvers = Vec::with_capacity(basis.c() + 1);
        solvers.push(WeightSolver::new(&[], 0)?);
        for w in 1..=basis.c() {
            let columns: Vec<Vec<BigInt>> = basis
                .weight_range(w)
                .map(|i| ring.degree(&letters[i].series, w).to_vec())
                .collect();
            solvers.push(WeightSolver::new(&columns, ring.degree_range(w).len())?);
        }
        Ok(FreeNilpotentGroup {
            basis,
            ring,
            letters,
            solvers,
            relations: OnceLock::new(),
        })
    }

    pub fn basis(&self) -> &HallBasis {
        &self.basis
    }

    pub fn c(&self) -> usize {
        self.basis.c()
    }

    pub fn r(&self) -> usize {
        self.basis.r()
    }

    pub fn m(&self) -> usize {
        self.basis.m()
    }

    pub fn identity(&self) -> Coords {
        Coords::identity(self.m())
    }

    fn letter_power(&self, letter: usize, k: &BigInt) -> Series {
        self.ring.binomial_power(&self.letters[letter].nil, k)
    }

    fn series_of(&self, u: &Coords) -> Series {
        let mut s = self.ring.one();
        for (i, e) in u.iter().enumerate() {
            if !e.is_zero() {
                s = self.ring.mul(&s, &self.letter_power(i, e));
            }
        }
        s
    }

    fn extract(&self, mut s: Series) -> Result<Coords> {
        let mut coords = Vec::with_capacity(self.m());
        for w in 1..=self.c() {
            let alpha = self.solvers[w].solve(self.ring.degree(&s, w))?;
            let range = self.basis.weight_range(w);
            let mut divisor = self.ring.one();
            for (i, a) in range.clone().zip(&alpha).rev() {
                if !a.is_zero() {
                    divisor = self.ring.mul(&divisor, &self.letter_power(i, &-a));
                }
            }
            if !self.ring.is_one(&divisor) {
                s = self.ring.mul(&divisor, &s);
            }
            coords.extend(alpha);
        }
        if !self.ring.is_one(&s) {
            return Err(Error::Internal(
                "residue after coordinate extraction is not trivial".into(),
            ));
        }
        Ok(Coords::new(coords))
    }

    fn check_len(&self, u: &Coords) -> Result<()> {
        if u.len() != self.m() {
            return Err(invalid(format!(
                "coordinate vector has length {}, expected {}",
                u.len(),
                self.m()
            )));
        }
        Ok(())
    }

    /// Coordinates of a word with binary exponents over the basis letters.
    pub fn eval(&self, w: &ExpWord) -> Result<Coords> {
        if let Some(l) = w.max_letter() {
            if l >= self.m() {
                return Err(invalid(format!(
                    "letter a{} is outside the basis a1..a{}",
                    l + 1,
                    self.m()
                )));
            }
        }
        let mut s = self.ring.one();
        for (letter, e) in w.factors() {
            s = self.ring.mul(&s, &self.letter_power(*letter, e));
        }
        self.extract(s)
    }

    /// Product of two coordinate vectors of length `m`.
    pub fn mul(&self, u: &Coords, v: &Coords) -> Coords {
        if u.is_identity() {
            return v.clone();
        }
        if v.is_identity() {
            return u.clone();
        }
        let s = self.ring.mul(&self.series_of(u), &self.series_of(v));
        self.extract(s).expect("free nilpotent arithmetic is exact")
    }

    pub fn pow(&self, u: &Coords, n: &BigInt) -> Coords {
        if n.is_zero() || u.is_identity() {
            return self.identity();
        }
        if n.is_one() {
            return u.clone();
        }
        if let Some(i) = single_letter(u) {
            let mut out = self.identity();
            out[i] = &u[i] * n;
            return out;
        }
        let s = self.series_of(u);
        let nil = self.ring.nil_powers(&self.ring.sub(&s, &self.ring.one()));
        let p = self.ring.binomial_power(&nil, n);
        self.extract(p).expect("free nilpotent arithmetic is exact")
    }

    pub fn inv(&self, u: &Coords) -> Coords {
        self.pow(u, &-BigInt::one())
    }

    /// `[u, v] = u^{-1} v^{-1} u v`.
    pub fn commutator(&self, u: &Coords, v: &Coords) -> Coords {
        let left = self.mul(&self.inv(u), &self.inv(v));
        self.mul(&left, &self.mul(u, v))
    }

    /// `v^{-1} u v`.
    pub fn conjugate(&self, u: &Coords, v: &Coords) -> Coords {
        self.mul(&self.mul(&self.inv(v), u), v)
    }

    /// Tails of the relations `a_j a_i = a_i a_j t`, computed once.
    pub fn structure_relations(&self) -> &StructureRelations {
        self.relations.get_or_init(|| {
            let m = self.m();
            let mut commute = Vec::with_capacity(m * m.saturating_sub(1) / 2);
            let mut commute_inverse = Vec::with_capacity(commute.capacity());
            let one = BigInt::one();
            for j in 0..m {
                for i in 0..j {
                    let w = ExpWord::from_factors([
                        (j, -&one),
                        (i, -&one),
                        (j, one.clone()),
                        (i, one.clone()),
                    ]);
                    commute.push(self.eval(&w).expect("letters are in range"));
                    let w = ExpWord::from_factors([
                        (j, one.clone()),
                        (i, -&one),
                        (j, -&one),
                        (i, one.clone()),
                    ]);
                    commute_inverse.push(self.eval(&w).expect("letters are in range"));
                }
            }
            StructureRelations {
                m,
                commute,
                commute_inverse,
            }
        })
    }
}

fn single_letter(u: &Coords) -> Option<usize> {
    let mut found = None;
    for (i, e) in u.iter().enumerate() {
        if !e.is_zero() {
            if found.is_some() {
                return None;
            }
            found = Some(i);
        }
    }
    found
}

pub fn eval_free(group: &FreeNilpotentGroup, w: &ExpWord) -> Result<Coords> {
    group.eval(w)
}

pub fn coords_mult(group: &FreeNilpotentGroup, u: &Coords, v: &Coords) -> Result<Coords> {
    group.check_len(u)?;
    group.check_len(v)?;
    Ok(group.mul(u, v))
}

pub fn coords_pow(group: &FreeNilpotentGroup, u: &Coords, n: &BigInt) -> Result<Coords> {
    group.check_len(u)?;
    Ok(group.pow(u, n))
}

pub fn coords_inverse(group: &FreeNilpotentGroup, u: &Coords) -> Result<Coords> {
    group.check_len(u)?;
    Ok(group.inv(u))
}

pub fn structure_relations(group: &FreeNilpotentGroup) -> &StructureRelations {
    group.structure_relations()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn heis() -> Arc<FreeNilpotentGroup> {
        FreeNilpotentGroup::new(2, 2).unwrap()
    }

    fn c(v: &[i64]) -> Coords {
        Coords::from_i64s(v)
    }

    /// (α, β, γ) ↦ upper unitriangular matrix of a1^α a2^β a3^γ with
    /// a1 = E + e12, a2 = E + e23, a3 = [a2, a1].
    fn heis_product(u: &[i64; 3], v: &[i64; 3]) -> [i64; 3] {
        [u[0] + v[0], u[1] + v[1], u[2] + v[2] + u[1] * v[0]]
    }

    #[test]
    fn word_a2_a1() {
        let g = heis();
        let w = ExpWord::from_factors([(1, BigInt::one()), (0, BigInt::one())]);
        assert_eq!(g.eval(&w).unwrap(), c(&[1, 1, 1]));
        assert_eq!(g.eval(&ExpWord::new()).unwrap(), c(&[0, 0, 0]));
    }

    #[test]
    fn huge_exponent_conjugation() {
        let g = heis();
        let big: BigInt = BigInt::one() << 60usize;
        let w = ExpWord::from_factors([(0, big.clone()), (1, BigInt::one()), (0, -&big)]);
        assert_eq!(
            g.eval(&w).unwrap(),
            Coords::new(vec![0.into(), 1.into(), -big])
        );
    }

    #[test]
    fn heisenberg_product_and_powers() {
        let g = heis();
        assert_eq!(g.mul(&c(&[1, 0, 0]), &c(&[0, 1, 0])), c(&[1, 1, 0]));
        assert_eq!(g.inv(&c(&[1, 1, 0])), c(&[-1, -1, 1]));
        for k in -5i64..=5 {
            assert_eq!(
                g.pow(&c(&[1, 1, 0]), &BigInt::from(k)),
                c(&[k, k, k * (k - 1) / 2])
            );
        }
        let u = [3, -2, 5];
        let v = [-1, 4, 7];
        assert_eq!(g.mul(&c(&u), &c(&v)), c(&heis_product(&u, &v)));
    }

    #[test]
    fn structure_relation_examples() {
        let g = heis();
        let rel = g.structure_relations();
        assert_eq!(rel.commutation(0, 1), &c(&[0, 0, 1]));
        assert_eq!(rel.inverse_commutation(0, 1), &c(&[0, 0, -1]));
        let ab = FreeNilpotentGroup::new(1, 3).unwrap();
        let rel = ab.structure_relations();
        assert!(rel.commutation(0, 2).is_identity());
    }

    #[test]
    fn tails_live_above_both_weights() {
        for (cc, r) in [(3, 2), (4, 2), (3, 3)] {
            let g = FreeNilpotentGroup::new(cc, r).unwrap();
            let rel = g.structure_relations();
            for j in 0..g.m() {
                for i in 0..j {
                    for t in [rel.commutation(i, j), rel.inverse_commutation(i, j)] {
                        if let Some(p) = t.pivot() {
                            assert!(p > j);
                            assert!(g.basis().weight(p) > g.basis().weight(j));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn basis_letters_evaluate_to_units() {
        for (cc, r) in [(3, 2), (5, 2), (4, 3)] {
            let g = FreeNilpotentGroup::new(cc, r).unwrap();
            for i in 0..g.m() {
                let unit = Coords::unit(g.m(), i);
                assert_eq!(g.eval(&ExpWord::letter(i)).unwrap(), unit);
                // a basic commutator letter equals the commutator of its parents
                if let Some((u, v)) = g.basis().letters()[i].parents {
                    let cu = Coords::unit(g.m(), u);
                    let cv = Coords::unit(g.m(), v);
                    assert_eq!(g.commutator(&cu, &cv), unit);
                }
            }
        }
    }

    #[test]
    fn rejects_out_of_range_letters() {
        let g = heis();
        assert!(g.eval(&ExpWord::letter(3)).is_err());
        assert!(coords_mult(&g, &c(&[1, 2]), &c(&[0, 0, 0])).is_err());
    }

    fn coords_strategy(m: usize) -> impl Strategy<Value = Coords> {
        prop::collection::vec(-6i64..=6, m).prop_map(|v| Coords::from_i64s(&v))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn associativity_class3(u in coords_strategy(5), v in coords_strategy(5), w in coords_strategy(5)) {
            let g = FreeNilpotentGroup::new(3, 2).unwrap();
            prop_assert_eq!(g.mul(&g.mul(&u, &v), &w), g.mul(&u, &g.mul(&v, &w)));
            prop_assert_eq!(g.mul(&u, &g.identity()), u.clone());
            prop_assert_eq!(g.mul(&u, &g.inv(&u)), g.identity());
        }

        #[test]
        fn round_trip_and_additivity(u in coords_strategy(14), v in coords_strategy(14)) {
            let g = FreeNilpotentGroup::new(5, 2).unwrap();
            prop_assert_eq!(g.eval(&ExpWord::from_coords(&u)).unwrap(), u.clone());
            let p = g.mul(&u, &v);
            for i in 0..2 {
                prop_assert_eq!(&p[i], &(&u[i] + &v[i]));
            }
        }

        #[test]
        fn pow_matches_repeated_product(u in coords_strategy(8), n in -16i64..=16) {
            let g = FreeNilpotentGroup::new(3, 3).unwrap();
            let mut acc = g.identity();
            let step = if n >= 0 { u.clone() } else { g.inv(&u) };
            for _ in 0..n.unsigned_abs() {
                acc = g.mul(&acc, &step);
            }
            prop_assert_eq!(g.pow(&u, &BigInt::from(n)), acc);
            prop_assert_eq!(&g.pow(&u, &BigInt::from(n))[0], &(&u[0] * n));
        }
    }

    #[test]
    fn signed_exponent_in_single_letter_fast_path() {
        let g = heis();
        assert_eq!(g.pow(&c(&[0, 0, 3]), &BigInt::from(-2)), c(&[0, 0, -6]));
    }
}
