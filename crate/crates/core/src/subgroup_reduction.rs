//! Subgroups given by generating coordinate rows: row operations, reduction to
//! the unique full form, membership with witnesses, and subgroup presentations.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bounded_extgcd::{extgcd_bounded, extgcd_pair_bounded};
use crate::coords::Coords;
use crate::error::{invalid, Error, Result};
use crate::group_arith::MalcevGroup;
use crate::presentations::{FullFormMatrix, NilpotentPresentation};
use crate::word::ExpWord;

/// Default limit on the number of factors of an expanded expression word.
pub const DEFAULT_WORD_CAP: usize = 1 << 20;

/// How a row was obtained from the original generators `h_1, …, h_n`.
#[derive(Debug, PartialEq, Eq)]
pub enum Expr {
    Generator(usize),
    Product(Vec<(Arc<Expr>, BigInt)>),
}

impl Expr {
    pub fn generator(i: usize) -> Arc<Expr> {
        Arc::new(Expr::Generator(i))
    }

    pub fn identity() -> Arc<Expr> {
        Arc::new(Expr::Product(Vec::new()))
    }

    /// `f_1^{k_1} ⋯ f_t^{k_t}`, dropping zero exponents.
    pub fn product(factors: Vec<(Arc<Expr>, BigInt)>) -> Arc<Expr> {
        let mut factors: Vec<_> = factors.into_iter().filter(|(_, k)| !k.is_zero()).collect();
        if factors.len() == 1 && factors[0].1.is_one() {
            return factors.pop().unwrap().0;
        }
        Arc::new(Expr::Product(factors))
    }

    /// Expands into a word over the original generators, failing once the
    /// word would exceed `cap` factors.
    pub fn to_word(self: &Arc<Self>, cap: usize) -> Result<ExpWord> {
        flatten(self, cap, &mut HashMap::new())
    }
}

fn flatten(e: &Arc<Expr>, cap: usize, memo: &mut HashMap<usize, ExpWord>) -> Result<ExpWord> {
    let key = Arc::as_ptr(e) as usize;
    if let Some(w) = memo.get(&key) {
        return Ok(w.clone());
    }
    let w = match &**e {
        Expr::Generator(i) => ExpWord::letter(*i),
        Expr::Product(factors) => {
            let mut out = ExpWord::new();
            for (f, k) in factors {
                let sub = flatten(f, cap, memo)?;
                append_power(&mut out, &sub, k, cap)?;
            }
            out
        }
    };
    memo.insert(key, w.clone());
    Ok(w)
}

fn append_power(out: &mut ExpWord, w: &ExpWord, k: &BigInt, cap: usize) -> Result<()> {
    if w.is_empty() || k.is_zero() {
        return Ok(());
    }
    if let [(l, e)] = w.factors() {
        out.push(*l, e * k);
    } else {
        let reps = k
            .abs()
            .to_usize()
            .filter(|r| r.saturating_mul(w.len()) <= cap)
            .ok_or(Error::WordTooLong { cap })?;
        let piece = if k.is_negative() {
            w.inverse()
        } else {
            w.clone()
        };
        for _ in 0..reps {
            out.append(&piece);
            if out.len() > cap {
                return Err(Error::WordTooLong { cap });
            }
        }
    }
    if out.len() > cap {
        return Err(Error::WordTooLong { cap });
    }
    Ok(())
}

/// Rows `h_1, …, h_n` generating a subgroup, optionally with the expression
/// of each row over the original generators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoordinateMatrix {
    rows: Vec<Coords>,
    expressions: Option<Vec<Arc<Expr>>>,
}

impl CoordinateMatrix {
    pub fn new(rows: Vec<Coords>) -> Self {
        CoordinateMatrix {
            rows,
            expressions: None,
        }
    }

    /// Rows that are themselves the original generators.
    pub fn tracked(rows: Vec<Coords>) -> Self {
        let expressions = Some((0..rows.len()).map(Expr::generator).collect());
        CoordinateMatrix { rows, expressions }
    }

    pub fn rows(&self) -> &[Coords] {
        &self.rows
    }

    pub fn expressions(&self) -> Option<&[Arc<Expr>]> {
        self.expressions.as_deref()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Row operations that leave the generated subgroup unchanged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowOp {
    /// (1) swap `h_i` and `h_j`.
    Swap(usize, usize),
    /// (2) replace `h_target` by `h_target · h_source^exponent`.
    MultiplyBy {
        target: usize,
        source: usize,
        exponent: BigInt,
    },
    /// (3) append a trivial row.
    AppendIdentity,
    /// (3′) append the relator row `(0, …, 0, e_i, α_{i+1}, …, α_m)`.
    AppendRelator(usize),
    /// (3) remove a row that represents the identity.
    RemoveIdentity(usize),
    /// (4) replace `h_i` by its inverse.
    Invert(usize),
    /// (5) append `h_{i_1}^{l_1} ⋯ h_{i_k}^{l_k}`.
    AppendProduct(Vec<(usize, BigInt)>),
}

pub fn apply_row_operation<G: MalcevGroup>(
    group: &G,
    m: &CoordinateMatrix,
    op: &RowOp,
) -> Result<CoordinateMatrix> {
    let n = m.rows.len();
    let check = |i: usize| {
        if i < n {
            Ok(())
        } else {
            Err(invalid(format!(
                "row {} is out of range (matrix has {n} rows)",
                i + 1
            )))
        }
    };
    let mut out = m.clone();
    let expr = |i: usize| m.expressions.as_ref().map(|e| Arc::clone(&e[i]));
    match op {
        RowOp::Swap(i, j) => {
            check(*i)?;
            check(*j)?;
            out.rows.swap(*i, *j);
            if let Some(e) = out.expressions.as_mut() {
                e.swap(*i, *j);
            }
        }
        RowOp::MultiplyBy {
            target,
            source,
            exponent,
        } => {
            check(*target)?;
            check(*source)?;
            if target == source {
                return Err(invalid("a row cannot be multiplied by a power of itself"));
            }
            out.rows[*target] = group.mul(&m.rows[*target], &group.pow(&m.rows[*source], exponent));
            if let Some(e) = out.expressions.as_mut() {
                e[*target] = Expr::product(vec![
                    (expr(*target).unwrap(), BigInt::one()),
                    (expr(*source).unwrap(), exponent.clone()),
                ]);
            }
        }
        RowOp::AppendIdentity => {
            out.rows.push(group.identity());
            if let Some(e) = out.expressions.as_mut() {
                e.push(Expr::identity());
            }
        }
        RowOp::AppendRelator(i) => {
            let t = group
                .relator_row(*i)
                .ok_or_else(|| invalid(format!("a{} has infinite relative order", i + 1)))?;
            out.rows.push(t);
            if let Some(e) = out.expressions.as_mut() {
                e.push(Expr::identity());
            }
        }
        RowOp::RemoveIdentity(i) => {
            check(*i)?;
            if !group.reduce(&m.rows[*i]).is_identity() {
                return Err(invalid(format!("row {} is not trivial", i + 1)));
            }
            out.rows.remove(*i);
            if let Some(e) = out.expressions.as_mut() {
                e.remove(*i);
            }
        }
        RowOp::Invert(i) => {
            check(*i)?;
            out.rows[*i] = group.inv(&m.rows[*i]);
            if let Some(e) = out.expressions.as_mut() {
                e[*i] = Expr::product(vec![(expr(*i).unwrap(), -BigInt::one())]);
            }
        }
        RowOp::AppendProduct(factors) => {
            let mut acc = group.identity();
            for (i, l) in factors {
                check(*i)?;
                acc = group.mul(&acc, &group.pow(&m.rows[*i], l));
            }
            out.rows.push(acc);
            if let Some(e) = out.expressions.as_mut() {
                e.push(Expr::product(
                    factors
                        .iter()
                        .map(|(i, l)| (expr(*i).unwrap(), l.clone()))
                        .collect(),
                ));
            }
        }
    }
    Ok(out)
}

/// Result of [`full_form`]: the full-form matrix and, when tracking was
/// requested, the expression of every row over the original generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullForm {
    pub matrix: FullFormMatrix,
    pub expressions: Option<Vec<Arc<Expr>>>,
}

#[derive(Clone)]
struct Row {
    coords: Coords,
    expr: Option<Arc<Expr>>,
}

fn power_row<G: MalcevGroup>(group: &G, row: &Row, k: &BigInt) -> Row {
    Row {
        coords: group.pow(&row.coords, k),
        expr: row
            .expr
            .as_ref()
            .map(|e| Expr::product(vec![(Arc::clone(e), k.clone())])),
    }
}

/// `row · pivot^{-q}`.
fn clear_with<G: MalcevGroup>(group: &G, row: &Row, pivot: &Row, q: &BigInt) -> Row {
    let neg = -q;
    Row {
        coords: group.mul(&row.coords, &group.pow(&pivot.coords, &neg)),
        expr: match (&row.expr, &pivot.expr) {
            (Some(a), Some(b)) => Some(Expr::product(vec![
                (Arc::clone(a), BigInt::one()),
                (Arc::clone(b), neg),
            ])),
            _ => None,
        },
    }
}

/// `∏ rows[j]^{x_j}` in row order.
fn combine<G: MalcevGroup>(group: &G, rows: &[Row], x: &[BigInt], track: bool) -> Row {
    let mut coords = group.identity();
    let mut factors = Vec::new();
    for (row, k) in rows.iter().zip(x) {
        if k.is_zero() {
            continue;
        }
        coords = group.mul(&coords, &group.pow(&row.coords, k));
        if let Some(e) = &row.expr {
            factors.push((Arc::clone(e), k.clone()));
        }
    }
    Row {
        coords,
        expr: track.then(|| Expr::product(factors)),
    }
}

/// `pivot^{-k} · h · pivot^{k}`.
fn conjugate_row<G: MalcevGroup>(
    group: &G,
    h: &Row,
    pivot: &Row,
    k: &BigInt,
    pk: &Coords,
    pk_inv: &Coords,
) -> Row {
    Row {
        coords: group.mul(&group.mul(pk_inv, &h.coords), pk),
        expr: match (&h.expr, &pivot.expr) {
            (Some(a), Some(b)) => Some(Expr::product(vec![
                (Arc::clone(b), -k),
                (Arc::clone(a), BigInt::one()),
                (Arc::clone(b), k.clone()),
            ])),
            _ => None,
        },
    }
}

/// Steps 1–5 on `pending`. With `closure` unset this only produces an
/// echelon generating set (no conjugate rows); that variant is used to keep
/// the working set small before closure rows are added.
fn reduce_rows<G: MalcevGroup>(
    group: &G,
    mut pending: Vec<Row>,
    closure: bool,
    track: bool,
) -> Vec<Row> {
    let m = group.len();
    let mut done: Vec<Row> = Vec::new();
    loop {
        pending.retain(|r| !r.coords.is_identity());
        let Some(pi) = pending.iter().filter_map(|r| r.coords.pivot()).min() else {
            break;
        };

        // Step 1: combine the pivot column down to its gcd.
        let column: Vec<BigInt> = pending.iter().map(|r| r.coords[pi].clone()).collect();
        let (mut delta, x, _) = extgcd_bounded(&column);
        let mut pivot = combine(group, &pending, &x, track);

        // Step 3: a torsion column can go down further, to gcd(d, e_π).
        let order = group.relative_order(pi).cloned();
        if let Some(e) = &order {
            let (g, y, _) = extgcd_pair_bounded(&delta, e);
            if g != delta {
                let scaled = power_row(group, &pivot, &y);
                pending.push(pivot);
                pivot = scaled;
                delta = g;
            }
        }
        debug_assert_eq!(pivot.coords[pi], delta);

        // Step 2: clear the column below and reduce it above.
        for row in pending.iter_mut() {
            if !row.coords[pi].is_zero() {
                let q = &row.coords[pi] / &delta;
                *row = clear_with(group, row, &pivot, &q);
            }
        }
        for row in done.iter_mut() {
            let q = row.coords[pi].div_floor(&delta);
            if !q.is_zero() {
                *row = clear_with(group, row, &pivot, &q);
            }
        }

        // Step 4: torsion power and conjugates by the pivot row.
        if let Some(e) = &order {
            pending.push(power_row(group, &pivot, &(e / &delta)));
        }
        if closure {
            pending = reduce_rows(group, pending, false, track);
            let base = pending.clone();
            for l in 1..m - pi {
                for k in [BigInt::from(l), -BigInt::from(l)] {
                    let pk = group.pow(&pivot.coords, &k);
                    let pk_inv = group.pow(&pivot.coords, &-&k);
                    for h in &base {
                        pending.push(conjugate_row(group, h, &pivot, &k, &pk, &pk_inv));
                    }
                }
            }
        }
        done.push(pivot);
    }
    done
}

fn check_rows<G: MalcevGroup>(group: &G, rows: &[Coords]) -> Result<()> {
    for (i, r) in rows.iter().enumerate() {
        if r.len() != group.len() {
            return Err(invalid(format!(
                "row {} has {} entries, expected {}",
                i + 1,
                r.len(),
                group.len()
            )));
        }
    }
    Ok(())
}

/// The unique full form of the subgroup generated by the rows of `m`.
pub fn full_form<G: MalcevGroup>(group: &G, m: &CoordinateMatrix, track: bool) -> Result<FullForm> {
    check_rows(group, &m.rows)?;
    let rows: Vec<Row> = m
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| Row {
            coords: group.reduce(r),
            expr: track.then(|| match &m.expressions {
                Some(e) => Arc::clone(&e[i]),
                None => Expr::generator(i),
            }),
        })
        .collect();
    let done = reduce_rows(group, rows, true, track);
    let expressions = track.then(|| done.iter().map(|r| r.expr.clone().unwrap()).collect());
    let matrix = FullFormMatrix::from_rows_unchecked(done.into_iter().map(|r| r.coords).collect());
    Ok(FullForm {
        matrix,
        expressions,
    })
}

/// Full-form rows for rows already known to have the right length.
pub(crate) fn full_form_rows<G: MalcevGroup>(group: &G, rows: &[Coords]) -> Vec<Coords> {
    let rows = rows
        .iter()
        .map(|r| Row {
            coords: group.reduce(r),
            expr: None,
        })
        .collect();
    reduce_rows(group, rows, true, false)
        .into_iter()
        .map(|r| r.coords)
        .collect()
}

/// Exponents `γ` with `h = g_1^{γ_1} ⋯ g_s^{γ_s}` over the rows of `form`, or
/// `None` when `h` is not in the subgroup.
pub fn membership<G: MalcevGroup>(
    group: &G,
    form: &FullFormMatrix,
    h: &Coords,
) -> Option<Vec<BigInt>> {
    if h.len() != group.len() {
        return None;
    }
    let mut x = group.reduce(h);
    let mut gamma = Vec::with_capacity(form.len());
    for (row, &pi) in form.rows().iter().zip(form.pivots()) {
        if x.pivot().is_some_and(|p| p < pi) {
            return None;
        }
        let (g, rem) = x[pi].div_rem(&row[pi]);
        if !rem.is_zero() {
            return None;
        }
        if !g.is_zero() {
            x = group.mul(&group.pow(row, &-&g), &x);
        }
        gamma.push(g);
    }
    x.is_identity().then_some(gamma)
}

/// A membership certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipWitness {
    /// `h = g_1^{γ_1} ⋯ g_s^{γ_s}` over the full-form rows.
    pub gamma: Vec<BigInt>,
    /// `h` as a word over the original generators, when tracking was on.
    pub word: Option<ExpWord>,
}

/// Membership against a full form, with the original-generator word when the
/// full form was computed with tracking.
pub fn membership_witness<G: MalcevGroup>(
    group: &G,
    form: &FullForm,
    h: &Coords,
    cap: usize,
) -> Result<Option<MembershipWitness>> {
    if h.len() != group.len() {
        return Err(invalid(format!(
            "element has {} coordinates, expected {}",
            h.len(),
            group.len()
        )));
    }
    let Some(gamma) = membership(group, &form.matrix, h) else {
        return Ok(None);
    };
    let word = match form.expressions {
        Some(_) => Some(express_in_original_generators(form, &gamma, cap)?),
        None => None,
    };
    Ok(Some(MembershipWitness { gamma, word }))
}

/// Substitutes the recorded expression of each `g_j` into `∏ g_j^{γ_j}`.
pub fn express_in_original_generators(
    form: &FullForm,
    gamma: &[BigInt],
    cap: usize,
) -> Result<ExpWord> {
    let exprs = form.expressions.as_ref().ok_or(Error::TrackingAbsent)?;
    if gamma.len() != exprs.len() {
        return Err(invalid("exponent vector does not match the full form"));
    }
    let e = Expr::product(
        exprs
            .iter()
            .zip(gamma)
            .map(|(e, g)| (Arc::clone(e), g.clone()))
            .collect(),
    );
    e.to_word(cap)
}

fn not_full(condition: &'static str, row: usize, detail: String) -> Error {
    Error::NotFullForm {
        condition,
        row: row + 1,
        detail,
    }
}

/// Checks conditions (i)–(vi) and wraps the rows.
pub fn validate_full_form<G: MalcevGroup>(group: &G, rows: &[Coords]) -> Result<FullFormMatrix> {
    check_rows(group, rows)?;
    let mut pivots = Vec::with_capacity(rows.len());
    for (k, row) in rows.iter().enumerate() {
        let p = row
            .pivot()
            .ok_or_else(|| not_full("i", k, "zero row".into()))?;
        if !group.is_reduced(row) {
            return Err(not_full("v", k, format!("({row}) is not reduced")));
        }
        if let Some(&prev) = pivots.last() {
            if p <= prev {
                return Err(not_full(
                    "ii",
                    k,
                    format!("pivot column {} does not increase", p + 1),
                ));
            }
        }
        if !row[p].is_positive() {
            return Err(not_full(
                "iii",
                k,
                format!("pivot entry {} is not positive", row[p]),
            ));
        }
        for (i, above) in rows[..k].iter().enumerate() {
            if above[p].is_negative() || above[p] >= row[p] {
                return Err(not_full(
                    "iv",
                    i,
                    format!(
                        "entry {} in pivot column {} is outside [0, {})",
                        above[p],
                        p + 1,
                        row[p]
                    ),
                ));
            }
        }
        if let Some(e) = group.relative_order(p) {
            if !e.is_multiple_of(&row[p]) {
                return Err(not_full(
                    "v",
                    k,
                    format!("pivot entry {} does not divide {e}", row[p]),
                ));
            }
        }
        pivots.push(p);
    }
    let matrix = FullFormMatrix::from_rows_unchecked(rows.to_vec());
    let one = BigInt::one();
    for k in (0..rows.len()).rev() {
        let suffix = matrix.suffix(k + 1);
        let h = &rows[k];
        let mut witnesses = Vec::new();
        for j in rows.iter().skip(k + 1) {
            witnesses.push(group.conjugate(j, h));
            witnesses.push(group.conjugate(j, &group.pow(h, &-&one)));
        }
        if let Some(e) = group.relative_order(pivots[k]) {
            witnesses.push(group.pow(h, &(e / &h[pivots[k]])));
        }
        if witnesses
            .iter()
            .any(|w| membership(group, &suffix, w).is_none())
        {
            return Err(not_full(
                "vi",
                k,
                "subgroup of later rows is not closed".into(),
            ));
        }
    }
    Ok(matrix)
}

/// `∏ gens[k]^{x_k}`.
pub fn evaluate_product<G: MalcevGroup>(group: &G, gens: &[Coords], x: &[BigInt]) -> Coords {
    let mut acc = group.identity();
    for (g, k) in gens.iter().zip(x) {
        if !k.is_zero() {
            acc = group.mul(&acc, &group.pow(g, k));
        }
    }
    acc
}

/// A subgroup's full-form sequence and the nilpotent presentation it carries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupPresentation {
    pub generators: FullFormMatrix,
    pub presentation: NilpotentPresentation,
}

/// Nilpotent presentation of `⟨gens⟩` on its full-form sequence `g_1, …, g_s`.
pub fn subgroup_presentation<G: MalcevGroup>(
    group: &G,
    gens: &[Coords],
) -> Result<SubgroupPresentation> {
    let form = full_form(group, &CoordinateMatrix::new(gens.to_vec()), false)?.matrix;
    let s = form.len();
    let g = form.rows();
    let tail = |x: &Coords, above: usize| -> Result<Coords> {
        let gamma = membership(group, &form.suffix(above + 1), x).ok_or_else(|| {
            Error::Internal(format!(
                "relation tail is not in the subgroup above g{}",
                above + 1
            ))
        })?;
        let mut t = Coords::identity(s);
        for (k, v) in gamma.into_iter().enumerate() {
            t[above + 1 + k] = v;
        }
        Ok(t)
    };
    let mut orders = Vec::with_capacity(s);
    let mut powers = Vec::with_capacity(s);
    for i in 0..s {
        match group.relative_order(form.pivots()[i]) {
            Some(e) => {
                let order = e / form.pivot_value(i);
                powers.push(Some(tail(&group.pow(&g[i], &order), i)?));
                orders.push(Some(order));
            }
            None => {
                orders.push(None);
                powers.push(None);
            }
        }
    }
    let mut commute = Vec::new();
    let mut commute_inverse = Vec::new();
    for j in 0..s {
        for i in 0..j {
            commute.push(tail(&group.commutator(&g[j], &g[i]), j)?);
            commute_inverse.push(tail(&group.commutator(&group.inv(&g[j]), &g[i]), j)?);
        }
    }
    let presentation = NilpotentPresentation::from_parts(orders, powers, commute, commute_inverse)?;
    Ok(SubgroupPresentation {
        generators: form,
        presentation,
    })
}
