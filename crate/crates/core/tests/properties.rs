use num_bigint::BigInt;
use proptest::prelude::*;

use cuboid_core::factor::squarefree_kernel;
use cuboid_core::rational::primitive_integer_scaling;
use cuboid_core::{build_npc, Curve, CurvePoint, FactorBudget, Parametrization, Rational, SolutionPair};

fn seed(i: usize) -> CurvePoint {
    let (n, x, y) = [(5, "-4", "6"), (6, "-3", "9"), (7, "25", "120"), (34, "-2", "48")][i];
    CurvePoint::new(Curve::new(n).unwrap(), x.parse().unwrap(), y.parse().unwrap()).unwrap()
}

fn rational() -> impl Strategy<Value = Rational> {
    (-100_000i64..100_000, 1i64..100_000).prop_map(|(p, q)| Rational::new(p, q).unwrap())
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

/// Trial-division squarefree test, independent of the library's factoring.
fn is_squarefree(mut n: u64) -> bool {
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        if n.is_multiple_of(p) {
            n /= p;
        }
        p += 1;
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_text_round_trip(r in rational()) {
        let back: Rational = r.to_string().parse().unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn rational_field_laws(a in rational(), b in rational(), c in nonzero_rational()) {
        prop_assert_eq!(&(&a + &b) * &c, &a * &c + &b * &c);
        prop_assert_eq!(&(&a * &c) / &c, a.clone());
        prop_assert_eq!(&(&a - &b) + &b, a);
    }

    #[test]
    fn squares_are_detected(a in nonzero_rational(), b in nonzero_rational()) {
        let prod = a.square() * b.square();
        prop_assert!(prod.is_square());
        prop_assert_eq!(prod.sqrt_exact().unwrap(), (&a * &b).abs());
        prop_assert!(!(-a.square()).is_square());
    }

    #[test]
    fn kernel_times_value_is_square(r in nonzero_rational()) {
        let k = squarefree_kernel(&r, &FactorBudget::default()).unwrap();
        let k64: u64 = k.try_into().unwrap();
        prop_assert!(is_squarefree(k64));
        prop_assert!((Rational::from(k64) * r.abs()).is_square());
    }

    #[test]
    fn primitive_scaling_ignores_common_factors(
        v in prop::collection::vec(1i64..10_000, 1..6),
        p in 1i64..1000,
        q in 1i64..1000,
    ) {
        let lambda = Rational::new(p, q).unwrap();
        let base: Vec<Rational> = v.iter().map(|&x| Rational::from(x)).collect();
        let scaled: Vec<Rational> = base.iter().map(|x| x * &lambda).collect();
        let a = primitive_integer_scaling(&base).unwrap();
        let b = primitive_integer_scaling(&scaled).unwrap();
        prop_assert_eq!(&a, &b);
        let g = a.iter().fold(num_bigint::BigUint::from(0u32), |g, x| num_integer::Integer::gcd(&g, x));
        prop_assert_eq!(g, num_bigint::BigUint::from(1u32));
    }

    #[test]
    fn group_law(i in 0usize..4, a in -6i64..7, b in -6i64..7, c in -6i64..7) {
        let p = seed(i);
        let (pa, pb, pc) = (p.mul(a), p.mul(b), p.mul(c));
        let lhs = pa.add(&pb).unwrap().add(&pc).unwrap();
        let rhs = pa.add(&pb.add(&pc).unwrap()).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(pa.add(&pb).unwrap(), pb.add(&pa).unwrap());
        prop_assert_eq!(pa.add(&pb).unwrap(), p.mul(a + b));
        prop_assert!(lhs.on_curve());
    }

    #[test]
    fn torsion_points_have_order_two(i in 0usize..4, k in 1i64..6, t in 0usize..3) {
        let p = seed(i).mul(k);
        let tp = CurvePoint::torsion_points(p.curve())[t].clone();
        prop_assert!(tp.double().is_infinity());
        prop_assert_eq!(p.add(&tp).unwrap().add(&tp).unwrap(), p);
    }

    #[test]
    fn reflections_stay_on_curve(i in 0usize..4, k in 1i64..7) {
        let p = seed(i).mul(k);
        prop_assume!(p.is_nontrivial());
        for r in [p.reflect_first(), p.reflect_second(), p.reflect_third()] {
            let r = r.unwrap();
            prop_assert!(r.on_curve());
        }
        prop_assert_eq!(p.reflect_first().unwrap().reflect_first().unwrap(), p.clone());
        let twice_second = p.reflect_second().unwrap().reflect_second().unwrap();
        let twice_third = p.reflect_third().unwrap().reflect_third().unwrap();
        prop_assert_eq!(twice_second.x(), p.x());
        prop_assert_eq!(twice_third.x(), p.x());
    }

    #[test]
    fn every_parametrization_verifies(i in 0usize..4, k in 1i64..5, d in 1i64..3) {
        let pair = SolutionPair::same_parity(&seed(i), k, k + 2 * d).unwrap();
        for param in Parametrization::ALL {
            let c = build_npc(&pair, param).unwrap();
            prop_assert!(c.verify().is_empty(), "{} fails", param);
            prop_assert!(!c.pc_condition());
            prop_assert!(c.entries().iter().all(|v| v.is_integer() && v.is_positive()));
            let g = c.entries().iter().fold(BigInt::from(0), |g, v| num_integer::Integer::gcd(&g, v.numer()));
            prop_assert_eq!(g, BigInt::from(1));
        }
    }
}
