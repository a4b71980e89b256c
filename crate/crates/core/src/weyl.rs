//! Phase forms of the Weyl systems `U(alpha) = exp(i alpha.y)`, `V(beta) = exp(i beta.q)`.
//!
//! With `[y_i, q_j] = i sigma delta_ij` central, `U(alpha) V(beta) = exp(i omega) V(beta) U(alpha)`
//! holds exactly with `omega(alpha, beta) = -sigma (alpha . beta)`. Nothing is
//! exponentiated here; the truncated matrix versions live in [`crate::fock`].

use crate::algebra::{commutator, structure_matrix, LinComb};
use crate::darboux::{Branch, DarbouxCase, DarbouxMap};

pub type Vec2 = [f64; 2];

fn dot(alpha: &Vec2, beta: &Vec2) -> f64 {
    alpha[0] * beta[0] + alpha[1] * beta[1]
}

/// `omega(alpha, beta) = -sigma_eff (alpha1 beta1 + alpha2 beta2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylPhaseForm {
    pub sigma_eff: f64,
}

impl WeylPhaseForm {
    pub fn new(sigma_eff: f64) -> Self {
        Self { sigma_eff }
    }

    pub fn eval(&self, alpha: &Vec2, beta: &Vec2) -> f64 {
        -self.sigma_eff * dot(alpha, beta)
    }

    pub fn is_nondegenerate(&self, threshold: f64) -> bool {
        self.sigma_eff.abs() > threshold
    }
}

impl From<&DarbouxMap> for WeylPhaseForm {
    fn from(map: &DarbouxMap) -> Self {
        Self::new(map.sigma)
    }
}

pub fn weyl_phase(map: &DarbouxMap, alpha: &Vec2, beta: &Vec2) -> f64 {
    WeylPhaseForm::from(map).eval(alpha, beta)
}

/// Phase written directly in terms of `(theta, gamma, hbar)`:
///
/// * `Delta > 0`: `-2 (Delta / gamma theta)(hbar +/- sqrt(Delta)) (alpha . beta)`
/// * `Delta < 0`: `2 Delta (gamma theta / hbar) (alpha . beta)`, the same for both branches.
///
/// Returns `None` for the limit and identity cases, where the closed forms are
/// `0/0` and only the limiting value `-hbar (alpha . beta)` exists.
pub fn closed_form_phase(map: &DarbouxMap, alpha: &Vec2, beta: &Vec2) -> Option<f64> {
    let p = &map.params;
    let (theta, gamma, hbar, delta) = (p.theta(), p.gamma(), p.hbar(), p.delta());
    let ab = dot(alpha, beta);
    match map.case {
        DarbouxCase::PositiveDelta => {
            let sign = match map.branch {
                Branch::Plus => 1.0,
                Branch::Minus => -1.0,
            };
            Some(-2.0 * (delta / (gamma * theta)) * (hbar + sign * delta.sqrt()) * ab)
        }
        DarbouxCase::NegativeDelta => Some(2.0 * delta * (gamma * theta / hbar) * ab),
        _ => None,
    }
}

/// Sum of the magnitudes of the terms whose signed sum is `[y1, q1] = i sigma`.
///
/// Sigma carries different units on the two sides of the critical line (`hbar`
/// for `Delta > 0`, `hbar^3` for `Delta < 0`, where the rows mix in `gamma` and
/// `theta`), while this scale always carries the units of sigma.
pub fn pairing_scale(map: &DarbouxMap) -> f64 {
    let om = structure_matrix(&map.params);
    let (y, q) = (map.matrix.row(0), map.matrix.row(2));
    let mut acc = 0.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            acc += (om.entry(i, j) * (y[i] * q[j] - y[j] * q[i])).abs();
        }
    }
    acc
}

/// `|sigma| > band * pairing_scale(map)`: sigma is not lost to cancellation.
pub fn nondegenerate(map: &DarbouxMap, band: f64) -> bool {
    WeylPhaseForm::from(map).is_nondegenerate(band * pairing_scale(map))
}

/// Exponent composition for one abelian family: the `y` (or `q`) generators
/// commute among themselves, so `U(alpha) U(alpha')` has exponent `alpha + alpha'`
/// with no phase. Returns the Euclidean distance between that composed exponent
/// and `alpha + alpha'`.
///
/// Whether the generators actually commute is checked separately by
/// [`family_commutators`].
pub fn weyl_group_law_check(alpha: &Vec2, alpha_prime: &Vec2) -> f64 {
    let sum = [alpha[0] + alpha_prime[0], alpha[1] + alpha_prime[1]];
    let composed = compose_abelian(alpha, alpha_prime);
    ((sum[0] - composed[0]).powi(2) + (sum[1] - composed[1]).powi(2)).sqrt()
}

fn compose_abelian(alpha: &Vec2, alpha_prime: &Vec2) -> Vec2 {
    let mut out = *alpha;
    for (o, a) in out.iter_mut().zip(alpha_prime) {
        *o += a;
    }
    out
}

/// `([y1, y2], [q1, q2])` evaluated on the map's rows against the original
/// structure matrix. Both vanish for a valid map.
pub fn family_commutators(map: &DarbouxMap) -> (f64, f64) {
    let om = structure_matrix(&map.params);
    let row = |r: usize| {
        LinComb::new(std::array::from_fn(|c| map.matrix[(r, c)])).expect("finite map entries")
    };
    (
        commutator(&row(0), &row(1), &om),
        commutator(&row(2), &row(3), &om),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraParams;
    use crate::darboux::solve;

    #[test]
    fn negative_delta_phase() {
        let p = AlgebraParams::new(1.0, 2.0, 1.0).unwrap();
        let map = solve(&p, Branch::Plus).unwrap();
        assert_eq!(weyl_phase(&map, &[1.0, 0.0], &[1.0, 0.0]), -4.0);
        assert_eq!(
            closed_form_phase(&map, &[1.0, 0.0], &[1.0, 0.0]),
            Some(-4.0)
        );
        assert_eq!(weyl_phase(&map, &[0.0, 0.0], &[0.3, -7.0]), 0.0);
        assert_eq!(weyl_phase(&map, &[1.0, 0.0], &[0.0, 1.0]), 0.0);
    }

    #[test]
    fn nondegeneracy_threshold() {
        let p = AlgebraParams::new(1.0, 0.5, 1.0).unwrap();
        let mut map = solve(&p, Branch::Minus).unwrap();
        assert!(nondegenerate(&map, 1e-12));
        map.sigma = 0.0;
        assert!(!nondegenerate(&map, 1e-12));
        map.sigma = 1e-15;
        assert!(!nondegenerate(&map, 1e-12));

        // Just off the line with hbar = 4: sigma ~ 2 hbar^3 |Delta| / hbar^2 is far
        // above 1e-12 hbar, yet it is a 1e-13 remnant of terms of size ~hbar^3.
        let p = AlgebraParams::new(2.0, 8.0 * (1.0 + 5e-14), 4.0).unwrap();
        let p = p.with_critical_band(1e-14).unwrap();
        let map = solve(&p, Branch::Minus).unwrap();
        assert!(map.sigma.abs() > 1e-12 * p.hbar());
        assert!(!nondegenerate(&map, 1e-12));
        assert!(nondegenerate(&map, 1e-14));
    }

    #[test]
    fn pairing_scale_of_limit_map_is_hbar() {
        let p = AlgebraParams::new(1.5, 0.0, 0.7).unwrap();
        let map = solve(&p, Branch::Minus).unwrap();
        assert!((pairing_scale(&map) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn group_law() {
        assert_eq!(weyl_group_law_check(&[1.0, 2.0], &[3.0, 4.0]), 0.0);
        assert_eq!(weyl_group_law_check(&[0.0, 0.0], &[-2.5, 1e9]), 0.0);
    }

    #[test]
    fn corrupted_map_is_caught_by_family_commutators() {
        let p = AlgebraParams::new(1.0, 0.5, 1.0).unwrap();
        let mut map = solve(&p, Branch::Minus).unwrap();
        let (yy, qq) = family_commutators(&map);
        assert!(yy.abs() < 1e-14 && qq.abs() < 1e-14);
        map.matrix[(0, 3)] *= 1.01;
        let (yy, _) = family_commutators(&map);
        assert!(yy.abs() > 1e-4);
        // The exponent law itself is blind to the corruption.
        assert_eq!(weyl_group_law_check(&[0.2, 0.1], &[0.4, -0.3]), 0.0);
    }
}
