use std::f64::consts::TAU;

use proptest::prelude::*;

use circle_ideals::verify::brute_force_matchings;
use circle_ideals::{
    class_mul, enumerate_factorizations, is_half_factorial, parse_trigpoly, CirclePoint, Divisor, IdealClass, IdealR,
    TrigPoly,
};

fn trigpoly(max_degree: usize) -> impl Strategy<Value = TrigPoly> {
    (0..=max_degree).prop_flat_map(|n| {
        (
            prop::collection::vec(-1.0..1.0f64, n + 1),
            prop::collection::vec(-1.0..1.0f64, n),
        )
            .prop_map(|(c, s)| TrigPoly::new(c, s).unwrap())
    })
}

/// Divisors whose distinct points are at least 1e-3 apart.
fn divisor(max_points: usize, max_mult: u32) -> impl Strategy<Value = Divisor> {
    prop::collection::vec((0.0..TAU, 1..=max_mult), 0..=max_points).prop_map(|raw| {
        let mut kept: Vec<(f64, u32)> = Vec::new();
        for (t, m) in raw {
            if kept.iter().all(|&(s, _)| CirclePoint::new(s).dist(CirclePoint::new(t)) >= 1e-3) {
                kept.push((t, m));
            }
        }
        Divisor::from_angles(kept)
    })
}

fn gap(a: &TrigPoly, b: &TrigPoly) -> f64 {
    a.sub(b).max_abs_coeff()
}

proptest! {
    #[test]
    fn multiplication_is_a_commutative_ring_law(a in trigpoly(8), b in trigpoly(8), c in trigpoly(8)) {
        let tol = 1e-12 * (a.coeff_norm() * b.coeff_norm() * c.coeff_norm()).max(1.0);
        prop_assert!(gap(&a.multiply(&b), &b.multiply(&a)) <= tol);
        prop_assert!(gap(&a.multiply(&b).multiply(&c), &a.multiply(&b.multiply(&c))) <= tol);
        prop_assert!(gap(&a.multiply(&b.add(&c)), &a.multiply(&b).add(&a.multiply(&c))) <= tol);
    }

    #[test]
    fn degrees_add_under_multiplication(a in trigpoly(8), b in trigpoly(8)) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        prop_assert_eq!(a.multiply(&b).degree(), a.degree() + b.degree());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in trigpoly(16), b in trigpoly(16), x in 0.0..TAU) {
        let lhs = a.multiply(&b).evaluate(x);
        let rhs = a.evaluate(x) * b.evaluate(x);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (a.coeff_norm() * b.coeff_norm()).max(1.0));
        prop_assert!((a.add(&b).evaluate(x) - a.evaluate(x) - b.evaluate(x)).abs() <= 1e-12 * (a.coeff_norm() + b.coeff_norm()).max(1.0));
    }

    #[test]
    fn laurent_lift_agrees_on_the_circle(t in trigpoly(12), x in 0.0..TAU) {
        let lp = t.to_laurent();
        prop_assert!(lp.is_conjugate_symmetric(1e-15));
        let v = lp.evaluate_on_circle(x);
        prop_assert!((v.re - t.evaluate(x)).abs() <= 1e-12 * t.coeff_norm().max(1.0));
        prop_assert!(v.im.abs() <= 1e-12 * t.coeff_norm().max(1.0));
    }

    #[test]
    fn printed_polynomials_parse_back(t in trigpoly(8)) {
        let back = parse_trigpoly(&t.to_string()).unwrap();
        prop_assert!(gap(&back, &t) <= 1e-12 * t.max_abs_coeff().max(1.0));
    }

    #[test]
    fn divisor_addition_is_a_commutative_monoid(a in divisor(5, 3), b in divisor(5, 3), c in divisor(5, 3)) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.add(&Divisor::empty()), a.clone());
        prop_assert_eq!(a.add(&b).degree(), a.degree() + b.degree());
        prop_assert!(a.leq(&a.add(&b)));
        prop_assert_eq!(Divisor::new(a.entries().iter().map(|e| (e.point, e.multiplicity))), a);
    }

    #[test]
    fn class_is_a_homomorphism_onto_z2(a in divisor(6, 3), b in divisor(6, 3)) {
        let (ia, ib) = (IdealR::new(a.clone()), IdealR::new(b));
        prop_assert_eq!(ia.product(&ib).class(), class_mul(ia.class(), ib.class()));
        prop_assert_eq!(ia.product(&ia).class(), IdealClass::Principal);
        prop_assert_eq!(ia.is_principal(), a.degree() % 2 == 0);
    }

    #[test]
    fn factorizations_match_brute_force(d in divisor(6, 3)) {
        prop_assume!(d.degree() % 2 == 0 && (2..=12).contains(&d.degree()));
        let labels: Vec<usize> = d
            .entries()
            .iter()
            .enumerate()
            .flat_map(|(i, e)| std::iter::repeat_n(i, e.multiplicity as usize))
            .collect();
        let reference = brute_force_matchings(&labels);
        let all = enumerate_factorizations(&d).unwrap();
        prop_assert_eq!(all.len(), reference.len());
        prop_assert!(all.iter().all(|f| f.len() as u64 == d.degree() / 2));
        let report = is_half_factorial(&d).unwrap();
        prop_assert!(report.half_factorial);
        prop_assert_eq!(report.count, reference.len());
    }
}

#[test]
fn distinct_points_give_odd_double_factorials() {
    let mut expected = 1;
    for m in 1..=6u64 {
        expected *= 2 * m - 1;
        let d = Divisor::from_angles((0..2 * m).map(|k| (0.37 * k as f64, 1)));
        assert_eq!(is_half_factorial(&d).unwrap().count as u64, expected, "{m} pairs");
    }
}
