mod common;

use proptest::prelude::*;
use segre_core::series::compose;
use segre_core::{Context, GaussianRational, SeriesVector, TruncatedSeries, VarBlock};

const ORDER: u32 = 7;

fn ctx3() -> Context {
    Context::new(vec![VarBlock::new("x", 2), VarBlock::new("y", 1)]).unwrap()
}

fn ctx2() -> Context {
    Context::new(vec![VarBlock::new("s", 2)]).unwrap()
}

fn coeff() -> impl Strategy<Value = GaussianRational> {
    (-6i64..=6, -6i64..=6, 1i64..=4).prop_map(|(a, b, d)| GaussianRational::from_fracs(a, d, b, d))
}

fn series(ctx: Context, nvars: usize, min_deg: u32) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec((prop::collection::vec(0u32..=3, nvars), coeff()), 0..6).prop_map(move |terms| {
        let terms = terms.into_iter().filter(|(e, _)| e.iter().sum::<u32>() >= min_deg);
        TruncatedSeries::from_terms(&ctx, ORDER, terms).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn product_matches_naive(a in series(ctx3(), 3, 0), b in series(ctx3(), 3, 0)) {
        let want = common::mul(&common::dense(&a), &common::dense(&b), ORDER);
        prop_assert_eq!(common::dense(&a.mul(&b).unwrap()), want);
    }

    #[test]
    fn sum_matches_naive(a in series(ctx3(), 3, 0), b in series(ctx3(), 3, 0)) {
        prop_assert_eq!(common::dense(&a.add(&b).unwrap()), common::add(&common::dense(&a), &common::dense(&b)));
    }

    #[test]
    fn composition_matches_naive(
        f in series(ctx3(), 3, 0),
        g0 in series(ctx2(), 2, 1),
        g1 in series(ctx2(), 2, 1),
        g2 in series(ctx2(), 2, 1),
    ) {
        let inner = SeriesVector::new(&ctx2(), vec![g0.clone(), g1.clone(), g2.clone()]).unwrap();
        let got = compose(&f, &inner).unwrap();
        let want = common::compose(
            &common::dense(&f),
            &[common::dense(&g0), common::dense(&g1), common::dense(&g2)],
            2,
            ORDER,
        );
        prop_assert_eq!(common::dense(&got), want);
    }

    #[test]
    fn derivative_matches_naive(a in series(ctx3(), 3, 0), i in 0usize..3) {
        prop_assert_eq!(common::dense(&a.differentiate(i).unwrap()), common::differentiate(&common::dense(&a), i));
    }

    #[test]
    fn unit_quotient_times_unit(a in series(ctx3(), 3, 0), u in series(ctx3(), 3, 1), c in coeff()) {
        prop_assume!(c != GaussianRational::from_ints(0, 0));
        let u = u.add(&TruncatedSeries::constant(&ctx3(), ORDER, c)).unwrap();
        let q = TruncatedSeries::divide_by_unit(&a, &u).unwrap();
        let back = common::mul(&common::dense(&q), &common::dense(&u), q.order());
        let a_trunc = common::dense(&a.truncated(q.order()));
        prop_assert_eq!(back, a_trunc);
    }
}
