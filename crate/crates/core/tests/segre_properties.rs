mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use segre_core::manifold::complexify;
use segre_core::nondegeneracy::{default_depth_max, finite_type_lie};
use segre_core::segre::{
    finite_type_segre, gamma_independence_check, iterate_rank, verify_idv, verify_rank_certificate, SegreChain,
};
use segre_core::{DefiningExpr, DefiningSystem, GaussianRational, ManifoldSpec};

const ORDER: u32 = 6;

/// Holomorphic exponents, antiholomorphic exponents, coefficient.
type Term = (Vec<u32>, Vec<u32>, (i64, i64));

/// `Im Z_N = Σ Re(c Z^a conj(Z)^b)` with every term of degree at least 2.
fn hypersurface(n: usize, terms: &[Term]) -> DefiningSystem {
    let mut rho = DefiningExpr::im(DefiningExpr::z(n - 1));
    for (a, b, (re, im)) in terms {
        let mut m = DefiningExpr::constant(GaussianRational::from_ints(*re, *im));
        for (i, (&p, &q)) in a.iter().zip(b).enumerate() {
            if p > 0 {
                m = m * DefiningExpr::z(i).pow(p);
            }
            if q > 0 {
                m = m * DefiningExpr::conj(DefiningExpr::z(i)).pow(q);
            }
        }
        rho = rho - DefiningExpr::re(m);
    }
    complexify(&ManifoldSpec::new(n, 1, vec![rho], None, Some(ORDER)).unwrap()).unwrap()
}

fn terms(n: usize) -> impl Strategy<Value = Vec<Term>> {
    prop::collection::vec(
        (prop::collection::vec(0u32..=2, n), prop::collection::vec(0u32..=2, n), (-3i64..=3, -3i64..=3)),
        0..4,
    )
    .prop_map(|v| v.into_iter().filter(|(a, b, _)| a.iter().chain(b).sum::<u32>() >= 2).collect())
}

fn manifold() -> impl Strategy<Value = DefiningSystem> {
    (2usize..=3).prop_flat_map(|n| terms(n).prop_map(move |t| hypersurface(n, &t)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn segre_identity_vanishes(m in manifold()) {
        for k in 1..=3 {
            prop_assert!(verify_idv(&m, k).is_ok());
        }
    }

    #[test]
    fn rank_chain_is_monotone_and_certified(m in manifold()) {
        let rep = finite_type_segre(&m).unwrap();
        prop_assert!(rep.rank_chain.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(rep.rank_chain.iter().all(|&r| r <= m.ambient_dim()));
        for (it, cert) in rep.chain.iterates.iter().zip(&rep.chain.ranks) {
            prop_assert!(verify_rank_certificate(&it.v, cert).unwrap());
        }
    }

    #[test]
    fn rank_chain_does_not_depend_on_solved_variables(m in manifold()) {
        prop_assert!(gamma_independence_check(&m).unwrap().consistent);
    }

    #[test]
    fn segre_and_lie_agree(m in manifold()) {
        let segre = finite_type_segre(&m).unwrap();
        let lie = finite_type_lie(&m, default_depth_max(m.ambient_dim())).unwrap();
        prop_assert_eq!(segre.verdict.is_finite_type(), lie.is_finite_type(), "{:?} / {:?}", segre.rank_chain, lie.verdict);
    }
}

/// Certified ranks never exceed the rank at a random point, and match it here.
#[test]
fn certified_rank_matches_rank_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cases: Vec<(&str, DefiningSystem)> = vec![
        ("lewy", hypersurface(2, &[(vec![1, 0], vec![1, 0], (1, 0))])),
        ("z4", hypersurface(2, &[(vec![2, 0], vec![2, 0], (1, 0))])),
        ("hole", hypersurface(3, &[(vec![1, 0, 0], vec![1, 0, 0], (1, 0)), (vec![0, 1, 0], vec![0, 1, 0], (-1, 0))])),
        ("product", hypersurface(3, &[(vec![1, 0, 0], vec![1, 0, 0], (1, 0))])),
        ("mixed", hypersurface(2, &[(vec![1, 0], vec![1, 0], (1, 0)), (vec![2, 0], vec![1, 0], (2, 1))])),
    ];
    for (name, m) in cases {
        let chain = SegreChain::build(&m, None, 3).unwrap();
        for it in &chain.iterates {
            let cert = iterate_rank(it).unwrap();
            let cols: Vec<usize> = (0..it.v.context().nvars()).collect();
            let mut best = 0;
            for _ in 0..3 {
                let point: Vec<GaussianRational> = cols
                    .iter()
                    .map(|_| GaussianRational::from_fracs(rng.gen_range(-9..=9), 7, rng.gen_range(-9..=9), 5))
                    .collect();
                best = best.max(common::rank(common::jacobian_at(&it.v, &cols, &point)));
            }
            assert!(cert.certified_rank <= best, "{} v{}: {} > {}", name, it.j, cert.certified_rank, best);
            assert_eq!(cert.certified_rank, best, "{} v{}", name, it.j);
        }
    }
}
