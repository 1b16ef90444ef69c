//! Quotient presentations `G = F_{c,r}/N` with `N` given by a full-form
//! relator matrix, nilpotent presentations of subgroups, and the collector used
//! to check their consistency.

mod collector;
mod nilpotent;

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::coords::Coords;
use crate::error::{invalid, Error, Result};
use crate::free_nilpotent::{FreeNilpotentGroup, HallBasis};
use crate::group_arith::MalcevGroup;
use crate::subgroup_reduction::{full_form_rows, membership, validate_full_form};
use crate::word::ExpWord;

pub use nilpotent::NilpotentPresentation;

/// Rows `h_1, …, h_s` of a full-form coordinate matrix with their pivot
/// columns `π_1 < … < π_s`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FullFormMatrix {
    rows: Vec<Coords>,
    pivots: Vec<usize>,
}

impl FullFormMatrix {
    /// Wraps rows that are already known to be in full form.
    pub(crate) fn from_rows_unchecked(rows: Vec<Coords>) -> Self {
        let pivots = rows
            .iter()
            .map(|r| r.pivot().expect("full-form rows are non-zero"))
            .collect();
        FullFormMatrix { rows, pivots }
    }

    pub fn rows(&self) -> &[Coords] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `α_{kπ_k}`.
    pub fn pivot_value(&self, k: usize) -> &BigInt {
        &self.rows[k][self.pivots[k]]
    }

    /// Rows `k, k+1, …`, which form the full form of the subgroup they generate.
    pub fn suffix(&self, k: usize) -> FullFormMatrix {
        FullFormMatrix {
            rows: self.rows[k..].to_vec(),
            pivots: self.pivots[k..].to_vec(),
        }
    }

    pub fn into_rows(self) -> Vec<Coords> {
        self.rows
    }
}

/// `G = F_{c,r}/N` where `N` is generated by the rows of a full-form matrix `T`
/// over `F_{c,r}`.
///
/// Pivot columns of `T` form the torsion set; the relative order of `a_i` for
/// a torsion position `i` is the pivot value of the row with pivot `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientPresentation {
    free: Arc<FreeNilpotentGroup>,
    relators: FullFormMatrix,
    torsion: Vec<usize>,
    orders: Vec<Option<BigInt>>,
    pivot_rows: Vec<Option<usize>>,
}

impl QuotientPresentation {
    fn assemble(free: Arc<FreeNilpotentGroup>, relators: FullFormMatrix) -> Self {
        let m = free.m();
        let mut orders = vec![None; m];
        let mut pivot_rows = vec![None; m];
        for (k, &p) in relators.pivots().iter().enumerate() {
            orders[p] = Some(relators.pivot_value(k).clone());
            pivot_rows[p] = Some(k);
        }
        QuotientPresentation {
            free,
            torsion: relators.pivots().to_vec(),
            relators,
            orders,
            pivot_rows,
        }
    }

    /// `F_{c,r}` itself.
    pub fn free_group(c: usize, r: usize) -> Result<Self> {
        Ok(Self::of_free(FreeNilpotentGroup::new(c, r)?))
    }

    pub fn of_free(free: Arc<FreeNilpotentGroup>) -> Self {
        Self::assemble(free, FullFormMatrix::default())
    }

    /// Builds a presentation without checking the relator rows. Only the
    /// pivot structure is read off; zero rows are dropped. Intended for
    /// exercising [`consistency_check`] on malformed input.
    pub fn new_unchecked(free: Arc<FreeNilpotentGroup>, rows: Vec<Coords>) -> Self {
        let rows = rows.into_iter().filter(|r| !r.is_identity()).collect();
        Self::assemble(free, FullFormMatrix::from_rows_unchecked(rows))
    }

    pub fn free(&self) -> &Arc<FreeNilpotentGroup> {
        &self.free
    }

    pub fn basis(&self) -> &HallBasis {
        self.free.basis()
    }

    pub fn c(&self) -> usize {
        self.free.c()
    }

    pub fn r(&self) -> usize {
        self.free.r()
    }

    pub fn m(&self) -> usize {
        self.free.m()
    }

    /// The relator matrix `T`.
    pub fn relators(&self) -> &FullFormMatrix {
        &self.relators
    }

    /// Torsion positions in increasing order.
    pub fn torsion(&self) -> &[usize] {
        &self.torsion
    }

    /// `e_i` for a torsion position, `None` for infinite relative order.
    pub fn order(&self, i: usize) -> Option<&BigInt> {
        self.orders[i].as_ref()
    }

    /// Row of `T` with pivot `i`.
    pub fn relator_for(&self, i: usize) -> Option<&Coords> {
        self.pivot_rows[i].map(|k| &self.relators.rows()[k])
    }

    /// Relations (1)–(3) of this presentation in terms of reduced normal forms.
    pub fn nilpotent_presentation(&self) -> NilpotentPresentation {
        let m = self.m();
        let free = &self.free;
        let orders = self.orders.clone();
        let powers = (0..m)
            .map(|i| {
                self.relator_for(i).map(|t| {
                    // t = a_i^{e_i} · rest, so a_i^{e_i} = rest^{-1} in G.
                    let mut rest = t.clone();
                    rest[i] = BigInt::from(0);
                    self.reduce(&free.inv(&rest))
                })
            })
            .collect();
        let rel = free.structure_relations();
        let mut commute = Vec::new();
        let mut commute_inverse = Vec::new();
        for j in 0..m {
            for i in 0..j {
                commute.push(self.reduce(rel.commutation(i, j)));
                commute_inverse.push(self.reduce(rel.inverse_commutation(i, j)));
            }
        }
        NilpotentPresentation::from_parts(orders, powers, commute, commute_inverse)
            .expect("relation tails of a Mal'cev basis lie above both letters")
    }

    /// Presentation of `G/Γ_c` over `F_{c-1,r}`: drops the weight-`c`
    /// columns and re-reduces the truncated relator rows.
    pub fn drop_last_weight(&self) -> Result<QuotientPresentation> {
        if self.c() < 2 {
            return Err(invalid("class 1 has no lower quotient"));
        }
        let free = FreeNilpotentGroup::new(self.c() - 1, self.r())?;
        let k = free.m();
        let rows: Vec<Coords> = self
            .relators
            .rows()
            .iter()
            .map(|t| t.truncated(k))
            .filter(|t| !t.is_identity())
            .collect();
        let ambient = QuotientPresentation::of_free(Arc::clone(&free));
        let reduced = full_form_rows(&ambient, &rows);
        Ok(Self::assemble(
            free,
            FullFormMatrix::from_rows_unchecked(reduced),
        ))
    }
}

/// Validates `rows` as the full-form matrix of a normal subgroup of `F_{c,r}`
/// and wraps it as a presentation.
pub fn make_quotient_presentation(
    free: &Arc<FreeNilpotentGroup>,
    rows: &[Coords],
) -> Result<QuotientPresentation> {
    let ambient = QuotientPresentation::of_free(Arc::clone(free));
    let matrix = validate_full_form(&ambient, rows)?;
    let one = BigInt::one();
    for (k, row) in matrix.rows().iter().enumerate() {
        for g in 0..free.r() {
            for e in [&one, &-&one] {
                let x = free.pow(&Coords::unit(free.m(), g), e);
                if membership(&ambient, &matrix, &free.conjugate(row, &x)).is_none() {
                    return Err(Error::NotNormal {
                        row: k + 1,
                        generator: g + 1,
                    });
                }
            }
        }
    }
    Ok(QuotientPresentation::assemble(Arc::clone(free), matrix))
}

/// Whether normal-form multiplication under `p` is well defined: the
/// associativity and power test words all collect to the same result.
pub fn consistency_check(p: &QuotientPresentation) -> bool {
    p.nilpotent_presentation().consistency_check()
}

/// Closes `seeds` under iterated commutators with the generators and their
/// inverses up to depth `c - 1`; together they generate the normal closure.
fn normal_closure_generators(free: &FreeNilpotentGroup, seeds: &[Coords]) -> Vec<Coords> {
    let m = free.m();
    let one = BigInt::one();
    let letters: Vec<Coords> = (0..free.r())
        .flat_map(|g| {
            let u = Coords::unit(m, g);
            [free.pow(&u, &one), free.pow(&u, &-&one)]
        })
        .collect();
    let mut all: BTreeSet<Coords> = seeds.iter().filter(|s| !s.is_identity()).cloned().collect();
    let mut layer: Vec<Coords> = all.iter().cloned().collect();
    for _ in 1..free.c() {
        let mut next = Vec::new();
        for x in &layer {
            for y in &letters {
                let z = free.commutator(x, y);
                if !z.is_identity() && all.insert(z.clone()) {
                    next.push(z);
                }
            }
        }
        layer = next;
    }
    all.into_iter().collect()
}

/// Quotient presentation for the normal closure of arbitrary elements of
/// `F_{c,r}`.
pub fn quotient_by_elements(
    free: &Arc<FreeNilpotentGroup>,
    elements: &[Coords],
) -> Result<QuotientPresentation> {
    for e in elements {
        if e.len() != free.m() {
            return Err(invalid(format!(
                "relator has {} coordinates, expected {}",
                e.len(),
                free.m()
            )));
        }
    }
    let gens = normal_closure_generators(free, elements);
    let ambient = QuotientPresentation::of_free(Arc::clone(free));
    let rows = full_form_rows(&ambient, &gens);
    make_quotient_presentation(free, &rows)
}

/// Presentation `⟨a_1, …, a_r | relators⟩` in the variety of class-`c`
/// nilpotent groups.
pub fn from_finite_presentation(
    free: &Arc<FreeNilpotentGroup>,
    relators: &[ExpWord],
) -> Result<QuotientPresentation> {
    let mut elements = Vec::with_capacity(relators.len());
    for w in relators {
        if let Some(l) = w.max_letter() {
            if l >= free.r() {
                return Err(invalid(format!(
                    "relator uses a{}, but relators may only use the generators a1..a{}",
                    l + 1,
                    free.r()
                )));
            }
        }
        elements.push(free.eval(w)?);
    }
    quotient_by_elements(free, &elements)
}

/// `H × G` realized inside `F_{c,2r}`, with the letter maps of both factors.
#[derive(Clone, Debug)]
pub struct DirectProduct {
    pub presentation: QuotientPresentation,
    /// Index in the product of each basis letter of the first factor.
    pub left_letters: Vec<usize>,
    /// Index in the product of each basis letter of the second factor.
    pub right_letters: Vec<usize>,
}

impl DirectProduct {
    fn embed(&self, map: &[usize], x: &Coords) -> Coords {
        let mut out = self.presentation.free().identity();
        for (i, &j) in map.iter().enumerate() {
            out[j] = x[i].clone();
        }
        out
    }

    pub fn embed_left(&self, h: &Coords) -> Coords {
        self.presentation.reduce(&self.embed(&self.left_letters, h))
    }

    pub fn embed_right(&self, g: &Coords) -> Coords {
        self.presentation
            .reduce(&self.embed(&self.right_letters, g))
    }

    pub fn project_left(&self, x: &Coords) -> Coords {
        self.left_letters.iter().map(|&j| x[j].clone()).collect()
    }

    pub fn project_right(&self, x: &Coords) -> Coords {
        self.right_letters.iter().map(|&j| x[j].clone()).collect()
    }
}

/// Image of each basis letter of `F_{c,r}` under `a_i ↦ a_{i + shift}` in the
/// rank-`2r` basis. Renaming generators monotonically keeps basic
/// commutators basic, so every image is itself a basis letter.
fn letter_map(small: &HallBasis, big: &HallBasis, shift: usize) -> Result<Vec<usize>> {
    let mut map = Vec::with_capacity(small.m());
    for letter in small.letters() {
        let image = match letter.parents {
            None => map.len() + shift,
            Some((u, v)) => big
                .commutator_index(map[u], map[v])
                .ok_or_else(|| Error::Internal("renamed commutator is not basic".into()))?,
        };
        map.push(image);
    }
    Ok(map)
}

pub fn direct_product_with_maps(
    h: &QuotientPresentation,
    g: &QuotientPresentation,
) -> Result<DirectProduct> {
    if (h.c(), h.r()) != (g.c(), g.r()) {
        return Err(invalid(format!(
            "factors have shapes (c={}, r={}) and (c={}, r={})",
            h.c(),
            h.r(),
            g.c(),
            g.r()
        )));
    }
    let free = FreeNilpotentGroup::new(h.c(), 2 * h.r())?;
    let left_letters = letter_map(h.basis(), free.basis(), 0)?;
    let right_letters = letter_map(g.basis(), free.basis(), h.r())?;
    let mut used = vec![false; free.m()];
    for &j in left_letters.iter().chain(&right_letters) {
        used[j] = true;
    }
    let mut seeds: Vec<Coords> = (0..free.m())
        .filter(|&j| !used[j])
        .map(|j| Coords::unit(free.m(), j))
        .collect();
    let scratch = DirectProduct {
        presentation: QuotientPresentation::of_free(Arc::clone(&free)),
        left_letters,
        right_letters,
    };
    seeds.extend(
        h.relators()
            .rows()
            .iter()
            .map(|t| scratch.embed(&scratch.left_letters, t)),
    );
    seeds.extend(
        g.relators()
            .rows()
            .iter()
            .map(|t| scratch.embed(&scratch.right_letters, t)),
    );
    let presentation = quotient_by_elements(&free, &seeds)?;
    Ok(DirectProduct {
        presentation,
        ..scratch
    })
}

/// Presentation of `H × G` inside `F_{c,2r}`: the first factor on letters
/// built from `a_1..a_r`, the second on letters built from `a_{r+1}..a_{2r}`,
/// and every mixed letter killed.
pub fn direct_product(
    h: &QuotientPresentation,
    g: &QuotientPresentation,
) -> Result<QuotientPresentation> {
    Ok(direct_product_with_maps(h, g)?.presentation)
}

#[cfg(test)]
mod tests;
