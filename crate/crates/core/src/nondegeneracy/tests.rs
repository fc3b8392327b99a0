use super::*;
use crate::manifold::{complexify, lewy_system, DefiningExpr, ManifoldSpec};
use crate::series::Monomial;
use alloc::vec;

fn spec(n: usize, d: usize, exprs: Vec<DefiningExpr>) -> DefiningSystem {
    complexify(&ManifoldSpec::new(n, d, exprs, None, None).unwrap()).unwrap()
}

fn plane() -> DefiningSystem {
    spec(2, 1, vec![DefiningExpr::im(DefiningExpr::z(1))])
}

fn z4() -> DefiningSystem {
    let z = DefiningExpr::abs2(DefiningExpr::z(0));
    spec(2, 1, vec![DefiningExpr::im(DefiningExpr::z(1)) - z.clone() * z])
}

fn product() -> DefiningSystem {
    spec(3, 1, vec![DefiningExpr::im(DefiningExpr::z(1)) - DefiningExpr::abs2(DefiningExpr::z(0))])
}

fn real_line() -> DefiningSystem {
    spec(1, 1, vec![DefiningExpr::im(DefiningExpr::z(0))])
}

#[test]
fn lewy_field_is_tangent() {
    let sys = lewy_system(8);
    let basis = cr_field_basis(&sys).unwrap();
    assert_eq!(basis.unsolved(), &[0]);
    // ρ = w − τ − 2izχ: L = ∂/∂χ − 2iz ∂/∂τ
    let c = basis.coeff(0, 0);
    assert_eq!(c.nterms(), 1);
    assert_eq!(c.coeff(&Monomial::var(4, 0)), GaussianRational::from_ints(0, -2));
    assert!(tangency_residuals(&sys, &basis).unwrap().iter().all(|r| r.is_zero()));
}

#[test]
fn plane_field_is_coordinate() {
    let basis = cr_field_basis(&plane()).unwrap();
    assert!(basis.coeff(0, 0).is_zero());
}

#[test]
fn real_line_has_empty_basis() {
    let sys = real_line();
    assert!(cr_field_basis(&sys).unwrap().is_empty());
    assert_eq!(k_nondegeneracy(&sys, 3).unwrap().verdict, KVerdict::KNondegenerate(0));
    let lie = finite_type_lie(&sys, 4).unwrap();
    assert!(!lie.is_finite_type());
    assert!(lie.note.is_some());
}

#[test]
fn lewy_levi_nondegenerate() {
    let sys = lewy_system(8);
    let k = k_nondegeneracy(&sys, 4).unwrap();
    assert_eq!(k.verdict, KVerdict::KNondegenerate(1));
    assert!(k.levi_nondegenerate);
    assert_eq!(k.span_ranks, vec![1, 2]);
    let h = holomorphic_nondegeneracy(&sys, 4).unwrap();
    assert!(matches!(h.verdict, HolomorphicVerdict::Nondegenerate { k: 1, .. }));
    let lie = finite_type_lie(&sys, 6).unwrap();
    assert_eq!(lie.verdict, LieVerdict::FiniteType { depth: 2 });
}

#[test]
fn plane_is_degenerate() {
    let sys = plane();
    assert!(matches!(k_nondegeneracy(&sys, 4).unwrap().verdict, KVerdict::Inconclusive { .. }));
    assert!(!finite_type_lie(&sys, 6).unwrap().is_finite_type());
}

#[test]
fn z4_degenerate_at_zero_only() {
    let sys = z4();
    let k = k_nondegeneracy(&sys, default_kmax(2)).unwrap();
    assert!(matches!(k.verdict, KVerdict::Inconclusive { .. }));
    assert!(!k.levi_nondegenerate);
    let h = holomorphic_nondegeneracy(&sys, default_kmax(2)).unwrap();
    assert!(matches!(h.verdict, HolomorphicVerdict::Nondegenerate { k: 1, .. }), "{:?}", h);
    let lie = finite_type_lie(&sys, default_depth_max(2)).unwrap();
    assert_eq!(lie.verdict, LieVerdict::FiniteType { depth: 4 });
}

#[test]
fn product_holomorphically_degenerate() {
    let sys = product();
    let h = holomorphic_nondegeneracy(&sys, default_kmax(3)).unwrap();
    assert!(matches!(h.verdict, HolomorphicVerdict::DegenerateToOrder { .. }));
    assert!(h.generic_ranks.iter().all(|&r| r <= 2));
}

fn random_field(seed: u64, ctx: &Context, order: u32) -> VectorField {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let nv = ctx.nvars();
    let coeffs = (0..nv)
        .map(|_| {
            let terms: Vec<(Vec<u32>, GaussianRational)> = (0..4)
                .map(|_| {
                    let exps: Vec<u32> = (0..nv).map(|_| rng.gen_range(0..2)).collect();
                    (exps, GaussianRational::from_ints(rng.gen_range(-3..4), rng.gen_range(-3..4)))
                })
                .collect();
            let mut acc = TruncatedSeries::zero(ctx, order);
            for (e, c) in terms {
                acc = acc.add(&TruncatedSeries::from_terms(ctx, order, [(e, c)]).unwrap()).unwrap();
            }
            acc
        })
        .collect();
    VectorField::new(coeffs)
}

#[test]
fn bracket_is_antisymmetric_and_satisfies_jacobi() {
    let ctx = crate::manifold::z_zeta_context(1);
    for seed in 0..10 {
        let x = random_field(3 * seed, &ctx, 6);
        let y = random_field(3 * seed + 1, &ctx, 6);
        let z = random_field(3 * seed + 2, &ctx, 6);
        let xy = x.bracket(&y).unwrap();
        let yx = y.bracket(&x).unwrap();
        assert!(xy.add(&yx).unwrap().is_zero());
        let j = x
            .bracket(&y.bracket(&z).unwrap())
            .unwrap()
            .add(&y.bracket(&z.bracket(&x).unwrap()).unwrap())
            .unwrap()
            .add(&z.bracket(&x.bracket(&y).unwrap()).unwrap())
            .unwrap();
        assert!(j.is_zero());
    }
}

#[test]
fn span_ranks_monotone() {
    for sys in [lewy_system(8), plane(), z4(), product()] {
        let k = k_nondegeneracy(&sys, 3).unwrap();
        assert!(k.span_ranks.windows(2).all(|w| w[0] <= w[1]));
        let _ = vec![0];
    }
}
