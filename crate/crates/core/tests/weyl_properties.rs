use nchw_core::darboux::Branch;
use nchw_core::weyl::family_commutators;
use nchw_core::{
    closed_form_phase, nondegenerate, solve, weyl_group_law_check, weyl_phase, AlgebraParams,
    WeylPhaseForm, DEFAULT_CRITICAL_BAND,
};
use proptest::prelude::*;

fn vec2() -> impl Strategy<Value = [f64; 2]> {
    prop::array::uniform2(-2.0..2.0f64)
}

fn off_critical() -> impl Strategy<Value = AlgebraParams> {
    (0.05..4.0f64, -4.0..4.0f64, 0.05..4.0f64)
        .prop_map(|(t, g, h)| AlgebraParams::new(t, g, h).unwrap())
        .prop_filter("near critical", |p| {
            p.delta().abs() >= 1e-3 * p.hbar() * p.hbar()
        })
        .prop_filter("plus branch ill-conditioned", |p| {
            p.gamma().abs() * p.theta() >= 1e-6
        })
}

fn branch() -> impl Strategy<Value = Branch> {
    prop_oneof![Just(Branch::Plus), Just(Branch::Minus)]
}

proptest! {
    #[test]
    fn phase_matches_closed_form(p in off_critical(), b in branch(), alpha in vec2(), beta in vec2()) {
        let map = solve(&p, b).unwrap();
        let w = weyl_phase(&map, &alpha, &beta);
        let closed = closed_form_phase(&map, &alpha, &beta).unwrap();
        prop_assert!((w - closed).abs() <= 1e-10 * w.abs().max(1e-300) + 1e-15);
    }

    #[test]
    fn phase_is_bilinear(p in off_critical(), alpha in vec2(), beta in vec2(), s in -3.0..3.0f64) {
        let map = solve(&p, Branch::Minus).unwrap();
        let base = weyl_phase(&map, &alpha, &beta);
        let scaled = weyl_phase(&map, &[s * alpha[0], s * alpha[1]], &beta);
        prop_assert!((scaled - s * base).abs() <= 1e-12 * (1.0 + base.abs()));
        let scaled = weyl_phase(&map, &alpha, &[s * beta[0], s * beta[1]]);
        prop_assert!((scaled - s * base).abs() <= 1e-12 * (1.0 + base.abs()));
    }

    #[test]
    fn phase_is_symmetric_under_swap(p in off_critical(), alpha in vec2(), beta in vec2()) {
        // omega depends on alpha . beta only, so exchanging the roles of alpha and beta
        // leaves it unchanged; the antisymmetry sits in V U = e^{-i omega} U V.
        let map = solve(&p, Branch::Minus).unwrap();
        prop_assert_eq!(weyl_phase(&map, &alpha, &beta), weyl_phase(&map, &beta, &alpha));
    }

    #[test]
    fn families_commute_and_compose(p in off_critical(), b in branch(), alpha in vec2(), alpha2 in vec2()) {
        let map = solve(&p, b).unwrap();
        let (yy, qq) = family_commutators(&map);
        let scale = map.matrix.norm().powi(2) * p.hbar().max(p.theta()).max(p.gamma().abs());
        prop_assert!(yy.abs() <= 1e-12 * scale && qq.abs() <= 1e-12 * scale);
        prop_assert!(weyl_group_law_check(&alpha, &alpha2) <= 1e-15);
    }
}

#[test]
fn nondegeneracy_tracks_sigma() {
    let map = solve(&AlgebraParams::new(1.0, 2.0, 1.0).unwrap(), Branch::Minus).unwrap();
    assert!(nondegenerate(&map, DEFAULT_CRITICAL_BAND));
    assert!(!WeylPhaseForm::new(0.0).is_nondegenerate(0.0));
    assert!(WeylPhaseForm::new(-1e-3).is_nondegenerate(1e-4));
}
