use std::f64::consts::PI;

use qfrft_core::bounds::{BoundsEvaluator, TheoremId};
use qfrft_core::signals::random_field;
use qfrft_core::{Axis, Grid, Order, Report};

const SEEDS: u64 = 20;

fn grid() -> Grid {
    Grid::symmetric(257, 257, 8.0).unwrap()
}

fn assert_holds(r: &Report, seed: u64) {
    assert!(r.slack.is_finite());
    assert_eq!(r.resum(), r.rhs);
    assert!(r.passes(r.tol_slack()), "seed {seed}: {r:#?}");
}

#[test]
fn directional_bounds_hold_on_random_fields() {
    let g = grid();
    let orders = [
        Order::new(PI / 6.0, 2.0 * PI / 3.0).unwrap(),
        Order::new(PI / 2.0, PI / 4.0).unwrap(),
    ];
    for seed in 0..SEEDS {
        let f = random_field(&g, seed).unwrap();
        let mut ev = BoundsEvaluator::new(&f).unwrap();
        let order = &orders[seed as usize % 2];
        for k in Axis::BOTH {
            let t = ev.thm47(order, k).unwrap();
            let c = ev.cor49(order, k).unwrap();
            assert_holds(&t, seed);
            assert_holds(&c, seed);
            assert_eq!(t.lhs, c.lhs);
            assert!(c.rhs <= t.rhs + 1e-12);
            assert_eq!(t.axis, Some(k));
        }
    }
}

#[test]
fn spatial_bounds_hold_on_random_fields() {
    let g = grid();
    let angles = [PI / 3.0, PI / 2.0];
    for seed in 0..SEEDS {
        let f = random_field(&g, seed).unwrap();
        let order = Order::new(
            angles[(seed % 2) as usize],
            angles[((seed / 2) % 2) as usize],
        )
        .unwrap();
        let mut ev = BoundsEvaluator::new(&f).unwrap();
        let t = ev.thm11(&order).unwrap();
        let c = ev.cor410(&order).unwrap();
        assert_holds(&t, seed);
        assert_holds(&c, seed);
        assert!(c.rhs <= t.rhs + 1e-12);
        for label in [
            "quarter_sin_sum2",
            "moment_cos2_moment",
            "moment_sin_cos_sc",
        ] {
            assert_eq!(t.term(label).unwrap().value, c.term(label).unwrap().value);
        }
    }
}

#[test]
fn mixed_order_bound_holds_on_random_fields() {
    let g = grid();
    let a = Order::new(PI / 3.0, PI / 2.0).unwrap();
    let b = Order::new(PI / 4.0, 2.0 * PI / 3.0).unwrap();
    for seed in 0..SEEDS {
        let f = random_field(&g, seed).unwrap();
        let mut ev = BoundsEvaluator::new(&f).unwrap();
        let r = ev
            .evaluate(TheoremId::Thm12, &a, Some(&b), Axis::X1)
            .unwrap();
        assert_holds(&r, seed);
        assert_eq!(r.orders, vec![a, b]);
        assert_eq!(r.rhs_terms.len(), 16);
        assert!(r
            .rhs_terms
            .iter()
            .take(9)
            .all(|t| t.sign > 0 && t.value >= 0.0));
        assert!(r.rhs_terms.iter().skip(9).all(|t| t.sign < 0));
    }
}
