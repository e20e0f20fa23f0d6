use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use twistlab::calderon::{extremal_selector, numeric_derivative, selector_derivative, StripPoint};
use twistlab::diagrams::{block_operator_r, block_operator_s, projection_onto_ru, BlockBasis};
use twistlab::orlicz::{conjugate_eval, dual_norm, luxemburg_norm, OrliczFunction};
use twistlab::seq::{lp_norm, safe_xlog, weighted_l2_norm, SeqVector, WeightSeq};
use twistlab::twisted::{
    omega10, omega21_0, u3_pairing, z2_quasinorm, z3_quasinorm, Twisted2, Twisted3,
};
use twistlab::weighted::{
    membership, weighted_omega, WeightedCouple, WeightedLevel, WeightedSpace, WeightedValue,
};

fn vector(max_dim: usize) -> impl Strategy<Value = SeqVector> {
    prop::collection::vec(-10.0f64..10.0, 1..=max_dim)
        .prop_filter("nonzero", |v| v.iter().any(|c| c.abs() > 1e-6))
        .prop_map(|v| SeqVector::new(v).unwrap())
}

fn vectors(max_dim: usize, count: usize) -> impl Strategy<Value = Vec<SeqVector>> {
    (1..=max_dim).prop_flat_map(move |d| {
        prop::collection::vec(
            prop::collection::vec(-10.0f64..10.0, d)
                .prop_filter("nonzero", |v| v.iter().any(|c| c.abs() > 1e-6))
                .prop_map(|v| SeqVector::new(v).unwrap()),
            count,
        )
    })
}

fn pair2(v: &[SeqVector]) -> Twisted2 {
    Twisted2::new(v[0].clone(), v[1].clone()).unwrap()
}

fn triple3(v: &[SeqVector]) -> Twisted3 {
    Twisted3::new(v[0].clone(), v[1].clone(), v[2].clone()).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn p_exponent() -> impl Strategy<Value = f64> {
    prop_oneof![1.0f64..8.0, Just(f64::INFINITY)]
}

fn orlicz() -> impl Strategy<Value = OrliczFunction> {
    prop_oneof![
        Just(OrliczFunction::f()),
        Just(OrliczFunction::g()),
        Just(OrliczFunction::square())
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn lp_norm_is_a_norm(v in vectors(64, 2), p in p_exponent(), lambda in -5.0f64..5.0) {
        let (x, y) = (&v[0], &v[1]);
        let nx = lp_norm(x, p).unwrap();
        prop_assert!(rel(lp_norm(&x.scale(lambda), p).unwrap(), lambda.abs() * nx) < 1e-12
            || lambda == 0.0);
        let sum = lp_norm(&x.add(y).unwrap(), p).unwrap();
        prop_assert!(sum <= (nx + lp_norm(y, p).unwrap()) * (1.0 + 1e-12));
    }

    #[test]
    fn twisted_quasinorms_quasi_triangle(v in vectors(64, 6), lambda in -5.0f64..5.0) {
        let (a, b) = (pair2(&v[0..2]), pair2(&v[2..4]));
        prop_assert!(z2_quasinorm(&a.add(&b).unwrap()) <= 4.0 * (z2_quasinorm(&a) + z2_quasinorm(&b)));
        if lambda != 0.0 {
            prop_assert!(rel(z2_quasinorm(&a.scale(lambda)), lambda.abs() * z2_quasinorm(&a)) < 1e-10);
        }
        let (c, d) = (triple3(&v[0..3]), triple3(&v[3..6]));
        prop_assert!(z3_quasinorm(&c.add(&d).unwrap()) <= 4.0 * (z3_quasinorm(&c) + z3_quasinorm(&d)));
        if lambda != 0.0 {
            prop_assert!(rel(z3_quasinorm(&c.scale(lambda)), lambda.abs() * z3_quasinorm(&c)) < 1e-10);
        }
    }

    #[test]
    fn fenchel_young(m in orlicz(), t in 0.0f64..20.0, s in 0.0f64..20.0) {
        prop_assert!(s * t <= m.eval(t) + conjugate_eval(&m, s) + 1e-10 * (1.0 + s * t));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn safe_xlog_scales(x in vector(64), lambda in 1e-3f64..1e3, k in 1u32..=4, scale in 0.1f64..10.0) {
        let lhs = safe_xlog(&x.scale(lambda), k, lambda * scale).unwrap();
        let rhs = safe_xlog(&x, k, scale).unwrap().scale(lambda);
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12 * rhs.norm_inf().max(lambda * x.norm_inf()));
    }

    #[test]
    fn weighted_l2_with_unit_weight_is_l2(x in vector(64)) {
        let ones = vec![1.0; x.dim()];
        prop_assert_eq!(weighted_l2_norm(&x, &ones).unwrap(), lp_norm(&x, 2.0).unwrap());
    }

    #[test]
    fn luxemburg_is_a_normalized_norm(m in orlicz(), v in vectors(32, 2), lambda in 0.01f64..100.0) {
        let (x, y) = (&v[0], &v[1]);
        let nx = luxemburg_norm(&m, x);
        prop_assert!(rel(luxemburg_norm(&m, &x.scale(lambda)), lambda * nx) < 1e-9);
        prop_assert!(luxemburg_norm(&m, &x.add(y).unwrap()) <= (nx + luxemburg_norm(&m, y)) * (1.0 + 1e-9));
        let modular: f64 = x.as_slice().iter().map(|c| m.eval(c.abs() / nx)).sum();
        prop_assert!(modular <= 1.0 + 1e-12 && modular >= 1.0 - 1e-8, "modular {}", modular);
    }

    #[test]
    fn duality_gap_within_two(m in orlicz(), v in vectors(32, 2)) {
        let (x, y) = (&v[0], &v[1]);
        let pairing = x.dot(y).unwrap().abs();
        prop_assert!(pairing <= 2.0 * luxemburg_norm(&m, x) * dual_norm(&m, y));
    }

    #[test]
    fn boundary_optimality(x in vector(64), t in -5.0f64..5.0) {
        let norm = x.norm2();
        let left = extremal_selector(&x, StripPoint::left(t)).unwrap().moduli().norm_inf();
        let right = lp_norm(&extremal_selector(&x, StripPoint::right(t)).unwrap().moduli(), 1.0).unwrap();
        prop_assert!(rel(left.max(right), norm) < 1e-9);
    }

    #[test]
    fn derivatives_match_finite_differences(x in vector(64)) {
        let scale = x.norm_inf();
        let d1 = selector_derivative(&x, 1).unwrap();
        let n1 = numeric_derivative(&x, 1, 1e-3).unwrap();
        prop_assert!(n1.max_abs_diff(&d1).unwrap() <= 1e-6 * d1.norm_inf().max(scale));
        let d2 = selector_derivative(&x, 2).unwrap();
        let n2 = numeric_derivative(&x, 2, 1e-3).unwrap().scale(0.5);
        prop_assert!(n2.max_abs_diff(&d2).unwrap() <= 1e-4 * d2.norm_inf().max(scale));
    }

    #[test]
    fn differentials_are_homogeneous(x in vector(64), lambda in prop_oneof![-100.0f64..-0.01, 0.01f64..100.0]) {
        for k in 1..=2 {
            let lhs = selector_derivative(&x.scale(lambda), k).unwrap();
            let rhs = selector_derivative(&x, k).unwrap().scale(lambda);
            prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12 * lambda.abs() * x.norm_inf() * 50.0);
        }
    }

    #[test]
    fn quasi_linearity_defects_bounded(v in vectors(64, 2)) {
        let (a, b) = (&v[0], &v[1]);
        let scale = a.norm2() + b.norm2();
        let d = omega10(&a.add(b).unwrap()).sub(&omega10(a).add(&omega10(b)).unwrap()).unwrap();
        prop_assert!(d.norm2() <= 2.0 * scale);
        let d = omega21_0(&a.add(b).unwrap()).sub(&omega21_0(a).add(&omega21_0(b)).unwrap()).unwrap();
        prop_assert!(z2_quasinorm(&d) <= 6.0 * scale);
    }

    #[test]
    fn omega10_bounded_into_range(x in vector(64)) {
        prop_assert!(dual_norm(&OrliczFunction::f(), &omega10(&x)) <= 2.0 * x.norm2());
    }

    #[test]
    fn u3_pairing_bounded(v in vectors(32, 6)) {
        let (a, b) = (triple3(&v[0..3]), triple3(&v[3..6]));
        prop_assert!(u3_pairing(&a, &b).unwrap().abs() <= 3.0 * z3_quasinorm(&a) * z3_quasinorm(&b));
    }

    #[test]
    fn block_operators_preserve_quasinorms(seed in any::<u64>(), v in vectors(12, 3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = BlockBasis::random(v[0].dim() + 2, 3, false, &mut rng);
        let p = pair2(&v[0..2]);
        prop_assert!(rel(z2_quasinorm(&block_operator_s(&u, &p).unwrap()), z2_quasinorm(&p)) < 1e-8);
        let t = triple3(&v);
        prop_assert!(rel(z3_quasinorm(&block_operator_r(&u, &t).unwrap()), z3_quasinorm(&t)) < 1e-8);
    }

    #[test]
    fn projection_is_idempotent_and_fixes_range(seed in any::<u64>(), v in vectors(8, 6)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = BlockBasis::random(4, 2, false, &mut rng);
        let n = u.ambient_dim() + 3;
        let flat: Vec<f64> = v.iter().take(3).flat_map(|s| s.resized(n).into_vec()).collect();
        let w = Twisted3::from_flat(&flat).unwrap();
        let pw = projection_onto_ru(&u, &w, n).unwrap();
        let ppw = projection_onto_ru(&u, &pw, n).unwrap();
        prop_assert!(ppw.max_abs_diff(&pw).unwrap() <= 1e-8 * (1.0 + pw.to_flat().iter().fold(0.0f64, |m, c| m.max(c.abs()))));
        let coeffs = Twisted3::new(v[3].resized(4), v[4].resized(4), v[5].resized(4)).unwrap();
        let rw = block_operator_r(&u, &coeffs).unwrap().resized(n);
        let prw = projection_onto_ru(&u, &rw, n).unwrap();
        prop_assert!(prw.max_abs_diff(&rw).unwrap() <= 1e-8 * (1.0 + rw.to_flat().iter().fold(0.0f64, |m, c| m.max(c.abs()))));
    }

    #[test]
    fn weighted_differentials_are_linear(v in vectors(32, 4), lambda in -10.0f64..10.0) {
        let dim = v[0].dim();
        let c = WeightedCouple::new(WeightSeq::from_fn(dim, |n| 1.0 / ((n + 2) as f64).ln()).unwrap());
        let apply = |level, arg: WeightedValue| weighted_omega(&c, level, &arg).unwrap();
        for level in [WeightedLevel::Om10, WeightedLevel::Om10Inverse] {
            let sum = apply(level, WeightedValue::Vector(v[0].add(&v[1]).unwrap()));
            let a = apply(level, WeightedValue::Vector(v[0].clone()));
            let b = apply(level, WeightedValue::Vector(v[1].clone()));
            let (sum, a, b) = (sum.vector().unwrap(), a.vector().unwrap(), b.vector().unwrap());
            let tol = 1e-14 * (a.norm_inf() + b.norm_inf());
            prop_assert!(sum.max_abs_diff(&a.add(b).unwrap()).unwrap() <= tol);
            let scaled = apply(level, WeightedValue::Vector(v[0].scale(lambda)));
            prop_assert!(scaled.vector().unwrap().max_abs_diff(&a.scale(lambda)).unwrap() <= 1e-14 * lambda.abs() * a.norm_inf());
        }
        let p = WeightedValue::Pair(pair2(&v[0..2]));
        let q = WeightedValue::Pair(pair2(&v[2..4]));
        let pq = WeightedValue::Pair(pair2(&v[0..2]).add(&pair2(&v[2..4])).unwrap());
        let (a, b, s) = (apply(WeightedLevel::Om2_10, p), apply(WeightedLevel::Om2_10, q), apply(WeightedLevel::Om2_10, pq));
        let (a, b, s) = (a.vector().unwrap(), b.vector().unwrap(), s.vector().unwrap());
        prop_assert!(s.max_abs_diff(&a.add(b).unwrap()).unwrap() <= 1e-14 * (a.norm_inf() + b.norm_inf()));
    }

    #[test]
    fn weighted_graphs_cancel(x in vector(32)) {
        let c = WeightedCouple::new(WeightSeq::from_fn(x.dim(), |n| ((n + 1) as f64).powf(-0.25)).unwrap());
        let graph = |k: f64| {
            let y: Vec<f64> = x.as_slice().iter().zip(c.log_weights()).map(|(x, l)| k * l * x).collect();
            WeightedValue::Pair(Twisted2::new(SeqVector::new(y).unwrap(), x.clone()).unwrap())
        };
        let z = membership(&c, WeightedSpace::Z2w, &graph(2.0), f64::INFINITY).unwrap();
        prop_assert!(rel(z.norm, x.norm2()) < 1e-12);
        let o = membership(&c, WeightedSpace::CircleW, &graph(1.0), f64::INFINITY).unwrap();
        prop_assert!(rel(o.norm, x.norm2()) < 1e-12);
    }
}
