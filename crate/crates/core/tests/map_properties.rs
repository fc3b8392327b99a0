use proptest::prelude::*;
use segre_core::manifold::{complexify, lewy_system, z_context};
use segre_core::maps::{builtin, sends_into, FormalMap};
use segre_core::{DefiningExpr, GaussianRational, ManifoldSpec, SeriesVector, TruncatedSeries};

fn coeff() -> impl Strategy<Value = GaussianRational> {
    (-5i64..=5, -5i64..=5, 1i64..=3).prop_map(|(a, b, d)| GaussianRational::from_fracs(a, d, b, d))
}

fn nonzero() -> impl Strategy<Value = GaussianRational> {
    coeff().prop_filter("nonzero", |c| *c != GaussianRational::from_ints(0, 0))
}

/// `(q, q, 0)` for a polynomial `q` without constant term.
fn hole_map(order: u32, q: &[(Vec<u32>, GaussianRational)]) -> FormalMap {
    let ctx = z_context(3);
    let q =
        TruncatedSeries::from_terms(&ctx, order, q.iter().filter(|(e, _)| e.iter().sum::<u32>() > 0).cloned()).unwrap();
    let v = SeriesVector::new(&ctx, vec![q.clone(), q, TruncatedSeries::zero(&ctx, order)]).unwrap();
    FormalMap::new(v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn lewy_automorphisms_compose(l in -3i64..=3, a in coeff(), b in coeff(), pick in 0usize..3) {
        prop_assume!(l != 0);
        let order = 6;
        let m = lewy_system(order);
        let f = builtin::isotropy(order, &a).unwrap();
        let g = match pick {
            0 => builtin::dilation(order, &GaussianRational::int(l)).unwrap(),
            1 => builtin::rotation(order, &GaussianRational::from_fracs(3, 5, -4, 5)).unwrap(),
            _ => builtin::isotropy(order, &b).unwrap(),
        };
        prop_assert!(sends_into(&f, &m, &m).unwrap().passes);
        prop_assert!(sends_into(&g, &m, &m).unwrap().passes);
        prop_assert!(sends_into(&g.compose(&f).unwrap(), &m, &m).unwrap().passes);
        prop_assert!(sends_into(&f.compose(&g).unwrap(), &m, &m).unwrap().passes);
    }

    #[test]
    fn hole_self_maps_compose(
        p in prop::collection::vec((prop::collection::vec(0u32..=2, 3), coeff()), 1..4),
        q in prop::collection::vec((prop::collection::vec(0u32..=2, 3), coeff()), 1..4),
        c in nonzero(),
    ) {
        let order = 5;
        let e = DefiningExpr::im(DefiningExpr::z(2)) - DefiningExpr::abs2(DefiningExpr::z(0)) + DefiningExpr::abs2(DefiningExpr::z(1));
        let hole = complexify(&ManifoldSpec::new(3, 1, vec![e], None, Some(order)).unwrap()).unwrap();
        let mut q = q;
        q.push((vec![1, 0, 0], c));
        let f = hole_map(order, &p);
        let g = hole_map(order, &q);
        prop_assert!(sends_into(&f, &hole, &hole).unwrap().passes);
        prop_assert!(sends_into(&g.compose(&f).unwrap(), &hole, &hole).unwrap().passes);
    }
}

#[test]
fn identity_preserves_random_quadrics() {
    for signs in [[1i64, 1], [1, -1], [-1, -1], [0, 1]] {
        let mut e = DefiningExpr::im(DefiningExpr::z(2));
        for (i, s) in signs.iter().enumerate() {
            e = e - DefiningExpr::int(*s) * DefiningExpr::abs2(DefiningExpr::z(i));
        }
        let m = complexify(&ManifoldSpec::new(3, 1, vec![e], None, Some(6)).unwrap()).unwrap();
        assert!(sends_into(&FormalMap::identity(3, 6), &m, &m).unwrap().passes);
    }
}
