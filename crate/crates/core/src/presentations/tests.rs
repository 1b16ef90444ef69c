use super::*;
use crate::group_arith::normal_form;

fn c(v: &[i64]) -> Coords {
    Coords::from_i64s(v)
}

fn rows(v: &[&[i64]]) -> Vec<Coords> {
    v.iter().map(|r| c(r)).collect()
}

fn word(f: &[(usize, i64)]) -> ExpWord {
    ExpWord::from_factors(f.iter().map(|&(l, e)| (l, BigInt::from(e))))
}

#[test]
fn make_quotient_examples() {
    let free = FreeNilpotentGroup::new(1, 2).unwrap();
    let p = make_quotient_presentation(&free, &[]).unwrap();
    assert!(p.torsion().is_empty());
    let p = make_quotient_presentation(&free, &rows(&[&[2, 0]])).unwrap();
    assert_eq!(p.torsion(), &[0]);
    assert_eq!(p.order(0), Some(&BigInt::from(2)));

    let h = FreeNilpotentGroup::new(2, 2).unwrap();
    let p = make_quotient_presentation(&h, &rows(&[&[0, 0, 2]])).unwrap();
    assert_eq!(p.torsion(), &[2]);
}

#[test]
fn make_quotient_rejects_non_normal_and_non_full() {
    let h = FreeNilpotentGroup::new(2, 2).unwrap();
    // ⟨a1⟩ is not normal: a2^{-1} a1 a2 = a1 a3^{-1}.
    assert!(matches!(
        make_quotient_presentation(&h, &rows(&[&[1, 0, 0]])),
        Err(Error::NotNormal { row: 1, .. })
    ));
    assert!(matches!(
        make_quotient_presentation(&h, &rows(&[&[2, 0, 0], &[0, 1, 0]])),
        Err(Error::NotFullForm { .. })
    ));
    assert!(make_quotient_presentation(&h, &rows(&[&[1, 0]])).is_err());
}

#[test]
fn consistency_of_free_and_valid_quotients() {
    assert!(consistency_check(
        &QuotientPresentation::free_group(2, 2).unwrap()
    ));
    assert!(consistency_check(
        &QuotientPresentation::free_group(3, 2).unwrap()
    ));
    let h = FreeNilpotentGroup::new(2, 2).unwrap();
    let p = make_quotient_presentation(&h, &rows(&[&[0, 0, 2]])).unwrap();
    assert!(consistency_check(&p));
}

#[test]
fn non_normal_relators_are_inconsistent() {
    let h = FreeNilpotentGroup::new(2, 2).unwrap();
    let p = QuotientPresentation::new_unchecked(h, rows(&[&[2, 0, 0]]));
    assert!(!consistency_check(&p));
}

#[test]
fn finite_presentation_examples() {
    let f1 = FreeNilpotentGroup::new(1, 2).unwrap();
    let p = from_finite_presentation(&f1, &[word(&[(0, 2)])]).unwrap();
    assert_eq!(p.relators().rows(), &rows(&[&[2, 0]])[..]);
    let p = from_finite_presentation(&f1, &[]).unwrap();
    assert!(p.relators().is_empty());

    let f2 = FreeNilpotentGroup::new(2, 2).unwrap();
    let p = from_finite_presentation(&f2, &[word(&[(0, 2)])]).unwrap();
    assert_eq!(p.relators().rows(), &rows(&[&[2, 0, 0], &[0, 0, 2]])[..]);
    assert!(consistency_check(&p));

    assert!(from_finite_presentation(&f2, &[word(&[(2, 1)])]).is_err());
}

#[test]
fn relator_inversion_and_rotation_give_same_quotient() {
    let f = FreeNilpotentGroup::new(3, 2).unwrap();
    let r = word(&[(0, 2), (1, -1), (0, 1), (1, 3)]);
    let base = from_finite_presentation(&f, std::slice::from_ref(&r)).unwrap();
    assert_eq!(from_finite_presentation(&f, &[r.inverse()]).unwrap(), base);
    let factors = r.factors().to_vec();
    for k in 1..factors.len() {
        let rotated = ExpWord::from_factors(factors[k..].iter().chain(&factors[..k]).cloned());
        assert_eq!(from_finite_presentation(&f, &[rotated]).unwrap(), base);
    }
}

#[test]
fn drop_last_weight_truncates() {
    let f = FreeNilpotentGroup::new(2, 2).unwrap();
    let p = from_finite_presentation(&f, &[word(&[(0, 2)])]).unwrap();
    let q = p.drop_last_weight().unwrap();
    assert_eq!(q.m(), 2);
    assert_eq!(q.relators().rows(), &rows(&[&[2, 0]])[..]);
    assert!(QuotientPresentation::free_group(1, 2)
        .unwrap()
        .drop_last_weight()
        .is_err());
}

#[test]
fn direct_product_examples() {
    let z = QuotientPresentation::free_group(1, 1).unwrap();
    let zz = direct_product(&z, &z).unwrap();
    assert_eq!(zz.m(), 2);
    assert!(zz.relators().is_empty());

    let h = QuotientPresentation::free_group(2, 2).unwrap();
    let hh = direct_product(&h, &h).unwrap();
    // F_{2,4} has 4 + 6 letters; two copies of the Heisenberg group use 6.
    assert_eq!(hh.m(), 10);
    assert_eq!(hh.relators().len(), 4);
    assert!(hh.relators().rows().iter().enumerate().all(|(k, r)| {
        let p = hh.relators().pivots()[k];
        r[p] == BigInt::one()
            && r.iter()
                .enumerate()
                .all(|(j, x)| j == p || x == &BigInt::from(0))
    }));

    let f1 = FreeNilpotentGroup::new(1, 1).unwrap();
    let z2 = make_quotient_presentation(&f1, &rows(&[&[2]])).unwrap();
    let p = direct_product(&z2, &z).unwrap();
    assert_eq!(p.relators().rows(), &rows(&[&[2, 0]])[..]);

    assert!(direct_product(&z, &h).is_err());
}

#[test]
fn direct_product_projections_recover_factors() {
    let f = FreeNilpotentGroup::new(2, 2).unwrap();
    let h = from_finite_presentation(&f, &[word(&[(0, 3)])]).unwrap();
    let g = QuotientPresentation::free_group(2, 2).unwrap();
    let d = direct_product_with_maps(&h, &g).unwrap();
    let x = normal_form(&h, &word(&[(0, 2), (1, 1), (0, 2), (1, -4)])).unwrap();
    let y = normal_form(&g, &word(&[(1, 5), (0, -1), (1, 2)])).unwrap();
    let ex = d.embed_left(&x);
    let ey = d.embed_right(&y);
    assert_eq!(d.project_left(&ex), x);
    assert_eq!(d.project_right(&ey), y);
    let xy = d.presentation.mul(&ex, &ey);
    assert_eq!(xy, d.presentation.mul(&ey, &ex));
    assert_eq!(d.project_left(&xy), x);
    assert_eq!(d.project_right(&xy), y);
}

#[test]
fn nilpotent_presentation_collects_like_free_arithmetic() {
    let p = QuotientPresentation::free_group(3, 2).unwrap();
    let n = p.nilpotent_presentation();
    let w = word(&[(1, 3), (0, -2), (3, 1), (1, -1), (0, 5)]);
    assert_eq!(n.collect(&w).unwrap(), normal_form(&p, &w).unwrap());
    assert!(n.collect(&word(&[(9, 1)])).is_err());
}
