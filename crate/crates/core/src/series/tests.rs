use super::*;
use alloc::format;
use alloc::vec;

fn g(re: i64, im: i64) -> GaussianRational {
    GaussianRational::from_ints(re, im)
}

fn ctx(names: &[(&str, usize)]) -> Context {
    Context::new(names.iter().map(|(n, a)| VarBlock::new(n, *a)).collect()).unwrap()
}

fn poly(c: &Context, order: u32, terms: &[(&[u32], GaussianRational)]) -> TruncatedSeries {
    TruncatedSeries::from_terms(c, order, terms.iter().map(|(e, k)| (e.to_vec(), k.clone()))).unwrap()
}

#[test]
fn zero_and_identity_laws() {
    let c = ctx(&[("Z", 2), ("zeta", 2)]);
    let s = poly(&c, 4, &[(&[0, 1, 0, 0], g(1, 0)), (&[0, 0, 0, 1], g(-1, 0))]);
    let r = s.mul(&TruncatedSeries::one(&c, 4)).unwrap().add(&TruncatedSeries::zero(&c, 4)).unwrap();
    assert_eq!(r, s);
}

#[test]
fn binomial_square() {
    let c = ctx(&[("Z", 1), ("zeta", 1)]);
    let s = poly(&c, 3, &[(&[1, 0], g(1, 0)), (&[0, 1], g(1, 0))]);
    let sq = s.pow(2).unwrap();
    let expected = poly(&c, 3, &[(&[2, 0], g(1, 0)), (&[1, 1], g(2, 0)), (&[0, 2], g(1, 0))]);
    assert_eq!(sq, expected);
}

#[test]
fn product_of_imaginary_terms() {
    let c = ctx(&[("Z", 2), ("zeta", 2)]);
    let s = poly(&c, 6, &[(&[1, 0, 1, 0], g(0, 2))]);
    assert_eq!(s.mul(&s).unwrap(), poly(&c, 6, &[(&[2, 0, 2, 0], g(-4, 0))]));
}

#[test]
fn product_truncates_to_min_order() {
    let c = ctx(&[("x", 1)]);
    let a = poly(&c, 5, &[(&[3], g(1, 0))]);
    let b = poly(&c, 3, &[(&[2], g(1, 0))]);
    let p = a.mul(&b).unwrap();
    assert_eq!(p.order(), 3);
    assert!(p.is_zero());
}

#[test]
fn context_mismatch_is_error() {
    let a = TruncatedSeries::one(&ctx(&[("x", 1)]), 3);
    let b = TruncatedSeries::one(&ctx(&[("y", 1)]), 3);
    assert!(matches!(a.add(&b), Err(Error::ContextMismatch)));
}

#[test]
fn duplicate_block_names_rejected() {
    assert!(Context::new(vec![VarBlock::new("t", 1), VarBlock::new("t", 2)]).is_err());
}

#[test]
fn compose_second_iterate() {
    // γ(χ, τ, t) = (t, τ + 2itχ) at (t1, 0, t2)
    let gc = ctx(&[("zeta", 2), ("t", 1)]);
    let gamma = SeriesVector::new(
        &gc,
        vec![poly(&gc, 6, &[(&[0, 0, 1], g(1, 0))]), poly(&gc, 6, &[(&[0, 1, 0], g(1, 0)), (&[1, 0, 1], g(0, 2))])],
    )
    .unwrap();
    let ic = ctx(&[("t1", 1), ("t2", 1)]);
    let inner = SeriesVector::new(
        &ic,
        vec![poly(&ic, 6, &[(&[1, 0], g(1, 0))]), TruncatedSeries::zero(&ic, 6), poly(&ic, 6, &[(&[0, 1], g(1, 0))])],
    )
    .unwrap();
    let v2 = compose_vector(&gamma, &inner).unwrap();
    assert_eq!(v2[0], poly(&ic, 6, &[(&[0, 1], g(1, 0))]));
    assert_eq!(v2[1], poly(&ic, 6, &[(&[1, 1], g(0, 2))]));
    assert_eq!(format!("{}", v2[1]), "2i*t1*t2");
}

#[test]
fn compose_identity_substitution() {
    let c = ctx(&[("x", 2)]);
    let s = poly(&c, 5, &[(&[2, 1], g(3, -1)), (&[0, 1], g(1, 1)), (&[0, 0], g(2, 0))]);
    let id = SeriesVector::variables(&c, 5, 0..2).unwrap();
    assert_eq!(compose(&s, &id).unwrap(), s);
}

#[test]
fn compose_rejects_constant_terms() {
    let c = ctx(&[("x", 1)]);
    let s = poly(&c, 3, &[(&[1], g(1, 0))]);
    let bad = SeriesVector::new(&c, vec![TruncatedSeries::one(&c, 3)]).unwrap();
    assert!(matches!(compose(&s, &bad), Err(Error::NonzeroConstantTerm { index: 0 })));
}

#[test]
fn conjugation() {
    let c = ctx(&[("t1", 1), ("t2", 1)]);
    let s = poly(&c, 4, &[(&[1, 1], g(0, 2))]);
    assert_eq!(s.conj_coeffs(), poly(&c, 4, &[(&[1, 1], g(0, -2))]));
    let r = poly(&c, 4, &[(&[2, 0], g(5, 0))]);
    assert_eq!(r.conj_coeffs(), r);
    assert_eq!(s.conj_coeffs().conj_coeffs(), s);
}

#[test]
fn derivative_examples() {
    let c = ctx(&[("t1", 1), ("t2", 1), ("t3", 1)]);
    let s = poly(&c, 6, &[(&[0, 1, 1], g(0, 2)), (&[1, 1, 0], g(0, -2))]);
    let d = s.differentiate(2).unwrap();
    assert_eq!(d, poly(&c, 5, &[(&[0, 1, 0], g(0, 2))]));
    assert_eq!(d.order(), 5);
    assert!(TruncatedSeries::one(&c, 6).differentiate(0).unwrap().is_zero());
    assert!(matches!(s.differentiate(7), Err(Error::UnknownVariable(7))));
}

#[test]
fn geometric_series() {
    let c = ctx(&[("x", 1)]);
    let den = poly(&c, 6, &[(&[0], g(1, 0)), (&[1], g(-1, 0))]);
    let q = TruncatedSeries::divide_by_unit(&TruncatedSeries::one(&c, 6), &den).unwrap();
    let expected = TruncatedSeries::from_terms(&c, 6, (0..=6).map(|k| (vec![k], g(1, 0)))).unwrap();
    assert_eq!(q, expected);
    assert!(matches!(TruncatedSeries::divide_by_unit(&den, &poly(&c, 6, &[(&[1], g(1, 0))])), Err(Error::NotAUnit)));
}

#[test]
fn identity_quotient() {
    let c = ctx(&[("t1", 1), ("t2", 1)]);
    let num = poly(&c, 5, &[(&[0, 1], g(0, 2))]);
    let den = TruncatedSeries::constant(&c, 5, g(0, 2));
    assert_eq!(TruncatedSeries::divide_by_unit(&num, &den).unwrap(), poly(&c, 5, &[(&[0, 1], g(1, 0))]));
}

#[test]
fn jets() {
    let c = ctx(&[("w", 1)]);
    let s = poly(&c, 6, &[(&[1], g(1, 0)), (&[5], g(1, 0))]);
    assert_eq!(s.jet(2).unwrap(), poly(&c, 2, &[(&[1], g(1, 0))]));
    assert!(TruncatedSeries::jets_equal(&s, &s, 6).unwrap());
    assert!(matches!(s.jet(7), Err(Error::JetOrderTooLarge { requested: 7, order: 6 })));
    let z3 = poly(&c, 6, &[(&[1], g(1, 0))]);
    assert!(TruncatedSeries::jets_equal(&s, &z3, 4).unwrap());
    assert!(!TruncatedSeries::jets_equal(&s, &z3, 5).unwrap());
}

#[test]
fn canonical_text() {
    let c = ctx(&[("x", 1), ("y", 1)]);
    let s = poly(&c, 3, &[(&[1, 0], g(1, 0)), (&[0, 2], GaussianRational::from_fracs(1, 2, -3, 4))]);
    assert_eq!(s.to_canonical_string(), "(1/1+0/1*i)*x1 + (1/2-3/4*i)*y1^2 + O(4)");
    assert_eq!(TruncatedSeries::zero(&c, 2).to_canonical_string(), "0 + O(3)");
}
