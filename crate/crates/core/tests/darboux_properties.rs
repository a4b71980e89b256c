use nalgebra::Matrix4;
use nchw_core::darboux::{positive_family_matrix, Branch, DarbouxCase};
use nchw_core::{
    classify, commutator, invert, is_canonical, normalize, solve, solve_gamma_zero,
    structure_matrix, transform_structure, AlgebraParams, Error, LinComb, Phase, StructureMatrix,
};
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = f64> {
    -5.0..5.0f64
}

fn lin_comb() -> impl Strategy<Value = LinComb> {
    prop::array::uniform4(coeff()).prop_map(|c| LinComb::new(c).unwrap())
}

fn params() -> impl Strategy<Value = AlgebraParams> {
    (0.05..4.0f64, -4.0..4.0f64, 0.05..4.0f64)
        .prop_map(|(t, g, h)| AlgebraParams::new(t, g, h).unwrap())
}

/// Off-critical parameters with `|Delta| >= 1e-3 hbar^2`, both signs.
fn off_critical() -> impl Strategy<Value = AlgebraParams> {
    params().prop_filter("too close to the critical line", |p| {
        p.delta().abs() >= 1e-3 * p.hbar() * p.hbar()
    })
}

fn branch() -> impl Strategy<Value = Branch> {
    prop_oneof![Just(Branch::Plus), Just(Branch::Minus)]
}

fn max_abs(m: &Matrix4<f64>) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.abs()))
}

proptest! {
    #[test]
    fn commutator_is_antisymmetric(u in lin_comb(), v in lin_comb(), p in params()) {
        let om = structure_matrix(&p);
        prop_assert_eq!(commutator(&u, &v, &om), -commutator(&v, &u, &om));
        prop_assert_eq!(commutator(&u, &u, &om), 0.0);
    }

    #[test]
    fn commutator_is_bilinear(u in lin_comb(), v in lin_comb(), w in lin_comb(), s in coeff(), p in params()) {
        let om = structure_matrix(&p);
        let lhs = commutator(&(s * u + w), &v, &om);
        let rhs = s * commutator(&u, &v, &om) + commutator(&w, &v, &om);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
    }

    #[test]
    fn transformed_structure_is_antisymmetric(
        entries in prop::array::uniform16(coeff()),
        p in params(),
    ) {
        let m = Matrix4::from_row_slice(&entries);
        let t = transform_structure(&m, &structure_matrix(&p));
        prop_assert_eq!(t, -t.transpose());
    }

    #[test]
    fn transform_matches_matrix_product(entries in prop::array::uniform16(coeff()), p in params()) {
        let m = Matrix4::from_row_slice(&entries);
        let om = structure_matrix(&p);
        let direct = m * om.matrix() * m.transpose();
        let t = transform_structure(&m, &om);
        prop_assert!(max_abs(&(t - direct)) <= 1e-11 * (1.0 + max_abs(&direct)));
    }

    #[test]
    fn classification_is_scale_invariant(p in params(), s in 0.01..100.0f64) {
        // Delta scales as s^2 under (theta, gamma, hbar) -> s (theta, gamma, hbar).
        let scaled = AlgebraParams::new(s * p.theta(), s * p.gamma(), s * p.hbar()).unwrap();
        let band = 1e-12;
        if p.delta().abs() > 1e-9 * p.hbar() * p.hbar() {
            prop_assert_eq!(classify(&p, band), classify(&scaled, band));
        }
    }

    #[test]
    fn solved_maps_are_canonical(p in off_critical(), b in branch()) {
        let map = match solve(&p, b) {
            Ok(map) => map,
            Err(Error::IllConditioned(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let t = transform_structure(&map.matrix, &structure_matrix(&p));
        let sigma = is_canonical(&t, 1e-9);
        prop_assert!(sigma.is_some(), "{t}");
        let sigma = sigma.unwrap();
        prop_assert!((sigma - map.sigma).abs() <= 1e-9 * map.sigma.abs().max(p.hbar()));
    }

    #[test]
    fn inverse_round_trip(p in off_critical(), b in branch()) {
        let Ok(map) = solve(&p, b) else { return Ok(()) };
        let inv = invert(&map).unwrap();
        let back = transform_structure(&inv, &StructureMatrix::canonical(map.sigma));
        let om = structure_matrix(&p);
        let cond = map.matrix.norm() * inv.norm();
        prop_assert!(max_abs(&(back - om.matrix())) <= 1e-13 * cond * cond * (1.0 + p.hbar()));
    }

    #[test]
    fn random_symplectic_round_trip(entries in prop::array::uniform16(coeff()), sigma in 0.1..3.0f64) {
        // Conjugating a canonical structure by an invertible M and back by M^-1 is the identity.
        let m = Matrix4::from_row_slice(&entries);
        let Some(inv) = m.try_inverse() else { return Ok(()) };
        let cond = m.norm() * inv.norm();
        prop_assume!(cond < 1e4);
        let can = StructureMatrix::canonical(sigma);
        let there = StructureMatrix::from_antisymmetric(&transform_structure(&m, &can));
        let back = transform_structure(&inv, &there);
        prop_assert!(max_abs(&(back - can.matrix())) <= 1e-14 * cond * cond * cond);
    }

    #[test]
    fn normalize_preserves_canonical_form(p in off_critical(), b in branch(), target in 0.1..5.0f64) {
        let Ok(map) = solve(&p, b) else { return Ok(()) };
        prop_assume!(map.sigma.abs() > 1e-6);
        let n = normalize(&map, target);
        let t = transform_structure(&n.matrix, &structure_matrix(&p));
        let sigma = is_canonical(&t, 1e-9).unwrap();
        prop_assert!((sigma - target).abs() <= 1e-9 * target);
        prop_assert_eq!(n.y_rows(), map.y_rows());
    }
}

/// On the Minus branch the map is smooth in gamma, so `gamma = 10^-k hbar^2 / theta`
/// lands within `O(10^-k)` of the gamma = 0 map.
#[test]
fn minus_branch_approaches_gamma_zero_map() {
    for k in 4..=12 {
        let scale = 10f64.powi(-k);
        for &(theta, hbar) in &[(1.0, 1.0), (0.3, 2.0), (3.5, 0.4)] {
            let gamma = scale * hbar * hbar / theta;
            let near = solve(
                &AlgebraParams::new(theta, gamma, hbar).unwrap(),
                Branch::Minus,
            )
            .unwrap();
            let limit = solve_gamma_zero(&AlgebraParams::new(theta, 0.0, hbar).unwrap()).unwrap();
            // The entries deviate at first order in gamma theta / hbar^2.
            let dev = max_abs(&(near.matrix - limit.matrix));
            assert!(dev <= 4.0 * scale * (1.0 + theta / hbar), "k={k}: {dev}");
            assert!((near.sigma - limit.sigma).abs() <= 4.0 * scale * hbar);
        }
    }
}

#[test]
fn critical_line_classification() {
    let p = AlgebraParams::new(2.0, 0.5, 1.0).unwrap();
    assert_eq!(p.phase(), Phase::Critical);
    assert!(matches!(
        solve(&p, Branch::Minus),
        Err(Error::CriticalLine { .. })
    ));
    // Widening the band captures nearby points too.
    let q = AlgebraParams::new(2.0, 0.5 + 1e-7, 1.0).unwrap();
    assert_eq!(q.phase(), Phase::NegativeDelta);
    assert_eq!(classify(&q, 1e-6), Phase::Critical);
}

#[test]
fn family_matrix_has_fixed_pattern() {
    let m = positive_family_matrix(2.0, 3.0);
    assert_eq!(
        m.row(0).iter().copied().collect::<Vec<_>>(),
        [1.0, 0.0, 0.0, 2.0]
    );
    assert_eq!(
        m.row(3).iter().copied().collect::<Vec<_>>(),
        [3.0, 0.0, 0.0, 1.0]
    );
    let map = solve(&AlgebraParams::new(1.0, 0.0, 1.0).unwrap(), Branch::Plus).unwrap();
    assert_eq!(map.case, DarbouxCase::GammaZeroLimit);
}
