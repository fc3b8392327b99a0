use super::*;
use crate::manifold::{complexify, DefiningExpr, ManifoldSpec};

fn g(re: i64, im: i64) -> GaussianRational {
    GaussianRational::from_ints(re, im)
}

fn lewy_map(f: TruncatedSeries, gg: TruncatedSeries) -> FormalMap {
    FormalMap::new(SeriesVector::new(&z_context(2), vec![f, gg]).unwrap()).unwrap()
}

fn zv(n: usize, order: u32, i: usize) -> TruncatedSeries {
    TruncatedSeries::var(&z_context(n), order, i).unwrap()
}

fn hole() -> DefiningSystem {
    let e = DefiningExpr::im(DefiningExpr::z(2)) - DefiningExpr::abs2(DefiningExpr::z(0))
        + DefiningExpr::abs2(DefiningExpr::z(1));
    complexify(&ManifoldSpec::new(3, 1, vec![e], None, None).unwrap()).unwrap()
}

#[test]
fn base_point_must_be_preserved() {
    let ctx = z_context(1);
    let bad = SeriesVector::new(&ctx, vec![TruncatedSeries::one(&ctx, 3)]).unwrap();
    assert!(matches!(FormalMap::new(bad), Err(Error::MapNotBasePointPreserving { index: 0 })));
}

#[test]
fn identity_on_lewy() {
    let lewy = lewy_system(6);
    let id = FormalMap::identity(2, 6);
    assert!(sends_into(&id, &lewy, &lewy).unwrap().passes);
    let c = classify(&id, &lewy, &lewy).unwrap();
    assert!(c.invertible && c.cr_transversal);
    assert_eq!(c.finite, Finiteness::Finite(1));
}

#[test]
fn badmap_fails_at_degree_one() {
    let lewy = lewy_system(6);
    let f = lewy_map(zv(2, 6, 0), zv(2, 6, 1).add(&zv(2, 6, 0)).unwrap());
    let rep = sends_into(&f, &lewy, &lewy).unwrap();
    assert!(!rep.passes);
    assert_eq!(rep.offending.unwrap().degree(), 1);
    assert!(matches!(classify(&f, &lewy, &lewy), Err(Error::Precondition(_))));
}

#[test]
fn hole_self_map() {
    let m = hole();
    let ctx = z_context(3);
    let q = zv(3, 8, 0);
    let f =
        FormalMap::new(SeriesVector::new(&ctx, vec![q.clone(), q, TruncatedSeries::zero(&ctx, 8)]).unwrap()).unwrap();
    let c = classify(&f, &m, &m).unwrap();
    assert!(!c.invertible);
    assert_eq!(c.finite, Finiteness::NotCertified);
    assert!(!c.cr_transversal);
}

#[test]
fn dimension_mismatch() {
    let lewy = lewy_system(6);
    assert!(matches!(sends_into(&FormalMap::identity(3, 6), &lewy, &lewy), Err(Error::DimensionMismatch(_))));
}

#[test]
fn quotient_dims_of_monomial_map() {
    // (z², w) has colength 2
    let f = lewy_map(zv(2, 6, 0).pow(2).unwrap(), zv(2, 6, 1));
    let (fin, dims) = finiteness(&f).unwrap();
    assert_eq!(fin, Finiteness::Finite(2));
    assert_eq!(dims, vec![1, 2, 2]);
}

#[test]
fn builtins_preserve_lewy() {
    let lewy = lewy_system(6);
    let maps = [
        builtin::identity(6),
        builtin::dilation(6, &g(2, 0)).unwrap(),
        builtin::rotation(6, &GaussianRational::from_fracs(3, 5, 4, 5)).unwrap(),
        builtin::isotropy(6, &g(1, 1)).unwrap(),
    ];
    for f in &maps {
        assert!(sends_into(f, &lewy, &lewy).unwrap().passes, "{:?}", f);
    }
    assert!(builtin::rotation(6, &g(1, 1)).is_err());
    assert!(!jets_agree(&maps[3], &maps[0], 1).unwrap());
    assert!(jets_agree(&maps[3], &maps[0], 0).unwrap());
}

fn r_expected(order: u32, c: GaussianRational) -> TruncatedSeries {
    let ctx = crate::segre::iterate_context(1, 2);
    TruncatedSeries::from_terms(&ctx, order - 1, [(vec![0, 1], c)]).unwrap()
}

#[test]
fn reflection_identity() {
    let res = lewy_reflection(&builtin::identity(6)).unwrap();
    assert_eq!(res.r, r_expected(6, g(1, 0)));
    assert!(res.jets_match);
    let t = TruncatedSeries::var(res.jets.f_bar.context(), res.jets.f_bar.order(), 0).unwrap();
    assert_eq!(res.jets.f_bar, t);
}

#[test]
fn reflection_dilation_and_rotation() {
    let res = lewy_reflection(&builtin::dilation(6, &g(2, 0)).unwrap()).unwrap();
    assert_eq!(res.r, r_expected(6, g(2, 0)));
    assert!(res.jets_match);
    let u = GaussianRational::from_fracs(3, 5, 4, 5);
    let res = lewy_reflection(&builtin::rotation(6, &u).unwrap()).unwrap();
    assert_eq!(res.r, r_expected(6, u.conj()));
    assert!(res.jets_match);
}

#[test]
fn reflection_isotropy_matches_direct_jets() {
    let res = lewy_reflection(&builtin::isotropy(7, &g(1, -2)).unwrap()).unwrap();
    assert!(res.jets_match, "{:?}\n{:?}", res.jets, res.direct);
}

#[test]
fn reflection_rejects_non_invertible() {
    let f = lewy_map(TruncatedSeries::zero(&z_context(2), 6), zv(2, 6, 1));
    assert!(matches!(lewy_reflection(&f), Err(Error::NotInvertible)));
}
