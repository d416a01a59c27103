mod common;

use nlstring::fock::{apply_string, FockBasis, FockState, Ladder};
use nlstring::perturb::{
    evolve_first_order, records_to_vector, transition_rate_longtime, transition_rate_report,
};
use nlstring::StringParams;
use proptest::prelude::*;

fn log_slope(gammas: &[f64], values: &[f64]) -> f64 {
    let xs: Vec<f64> = gammas.iter().map(|g| g.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    common::fit_slope(&xs, &ys)
}

#[test]
fn depletion_is_second_order_in_gamma() {
    let basis = FockBasis::new(3, 4, Some(0)).unwrap();
    let vacuum = FockState::vacuum();
    let gammas = [1e-4, 2e-4, 4e-4, 8e-4, 1.6e-3];
    let leaked: Vec<f64> = gammas
        .iter()
        .map(|&g| {
            let p = StringParams::default().with_gamma(g);
            evolve_first_order(&vacuum, 1.0, &basis, &p)
                .unwrap()
                .iter()
                .filter(|r| r.final_state != vacuum)
                .map(|r| r.probability())
                .sum()
        })
        .collect();
    let slope = log_slope(&gammas, &leaked);
    assert!((slope - 2.0).abs() < 0.1, "exponent {slope}");
}

#[test]
fn first_order_error_is_second_order_in_gamma() {
    let basis = FockBasis::new(2, 4, Some(0)).unwrap();
    let initial = FockState::from_modes(&[1, -1]).unwrap();
    let gammas = [2e-3, 4e-3, 8e-3, 1.6e-2];
    let errors: Vec<f64> = gammas
        .iter()
        .map(|&g| {
            let p = StringParams::default().with_gamma(g);
            let first = records_to_vector(&evolve_first_order(&initial, 0.7, &basis, &p).unwrap(), &basis).unwrap();
            let exact = common::exact_interaction_picture(&basis, &p, &initial, 0.7);
            first.iter().zip(&exact).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
        })
        .collect();
    let slope = log_slope(&gammas, &errors);
    assert!((slope - 2.0).abs() < 0.1, "exponent {slope}");
}

#[test]
fn rate_matrix_element_from_ladder_algebra() {
    // Only the B^+ B^+ B^+ B term connects |j> to |p,q,r>; the index sum
    // visits each distinct ordering of (p, q, r) once.
    let p = StringParams::new(1.7, 0.8, 0.3, 0.0).unwrap();
    for (j, (a, b, c)) in [(3, (1, 1, 1)), (4, (1, 1, 2)), (6, (1, 2, 3))] {
        let initial = FockState::from_modes(&[j]).unwrap();
        let target = FockState::from_modes(&[a, b, c]).unwrap();
        let mut v = 0.0;
        let mut orderings = vec![(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)];
        orderings.sort_unstable();
        orderings.dedup();
        for (x, y, z) in orderings {
            let m = 2.0 * std::f64::consts::PI.powi(4) * p.gamma / (3.0 * p.length.powi(3))
                * f64::from(x * y * z)
                * f64::from(x + y + z);
            let ops = [Ladder::raise(x), Ladder::raise(y), Ladder::raise(z), Ladder::lower(j)];
            let (out, amp) = apply_string(&initial, &ops, &p).unwrap();
            assert_eq!(out, target);
            v += -4.0 * m * amp;
        }
        let report = transition_rate_report(j, (a, b, c), &p).unwrap();
        assert!((report.matrix_element - v).abs() < 1e-12 * v.abs());
        let rate = 2.0 * std::f64::consts::PI * v * v;
        assert!((report.rate - rate).abs() < 1e-12 * rate);
    }
}

#[test]
fn closed_form_differs_by_multiplicity_and_length() {
    for length in [1.0, 2.5, 6.0] {
        let p = StringParams::new(length, 1.3, 0.2, 0.0).unwrap();
        for (j, t, distinct) in [(3, (1, 1, 1), 1.0), (4, (1, 2, 1), 3.0), (6, (3, 1, 2), 6.0), (7, (2, 2, 3), 3.0)] {
            let r = transition_rate_report(j, t, &p).unwrap();
            let expect = distinct / (6.0 * length.powi(4));
            assert!((r.ratio - expect).abs() < 1e-12 * expect, "{j} {t:?}: {}", r.ratio);
        }
    }
}

#[test]
fn forbidden_rates_vanish() {
    let p = StringParams::default().with_gamma(0.4);
    for (j, t) in [(3, (-1, 2, 2)), (3, (1, 1, 2)), (2, (1, 1, 1)), (-3, (1, 1, 1)), (-3, (-1, -1, -1))] {
        let expect_allowed = j == -3 && t == (-1, -1, -1);
        let rate = transition_rate_longtime(j, t, &p).unwrap();
        assert_eq!(rate > 0.0, expect_allowed, "{j} {t:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rate_is_symmetric_in_final_modes(a in -6i32..6, b in -6i32..6, c in -6i32..6, gamma in -2.0f64..2.0) {
        prop_assume!(a != 0 && b != 0 && c != 0);
        let j = a + b + c;
        prop_assume!(j != 0);
        let p = StringParams::default().with_gamma(gamma);
        let reference = transition_rate_longtime(j, (a, b, c), &p).unwrap();
        for t in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
            let r = transition_rate_longtime(j, t, &p).unwrap();
            prop_assert!((r - reference).abs() <= 1e-12 * reference.abs());
        }
    }

    #[test]
    fn mixed_signs_never_decay(a in 1i32..6, b in 1i32..6, c in 1i32..6, flip in 1usize..7) {
        let signs = [flip & 1 != 0, flip & 2 != 0, flip & 4 != 0];
        prop_assume!(!(signs[0] && signs[1] && signs[2]));
        let modes: Vec<i32> = [a, b, c].iter().zip(signs).map(|(&m, s)| if s { m } else { -m }).collect();
        let j = modes.iter().sum::<i32>();
        prop_assume!(j != 0);
        let p = StringParams::default().with_gamma(0.9);
        prop_assert_eq!(transition_rate_longtime(j, (modes[0], modes[1], modes[2]), &p).unwrap(), 0.0);
    }
}
