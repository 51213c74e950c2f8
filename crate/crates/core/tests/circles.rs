mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use rounding_core::circles::{
    circle_fit, circle_rank_exact, restrict_to_line, verify_rounding_numeric, FitKind, PolyFraction,
    RationalCurve,
};
use rounding_core::jets::{canonical_rounding, validate_jet};
use rounding_core::polycore::{frac, int};
use rounding_core::samples::{self, random_line, random_valid_jet, JetShape};
use rounding_core::{Error, Poly, Rational};

fn t() -> Poly {
    Poly::var(1, 0)
}

fn random_curve(r: &mut rand_chacha::ChaCha8Rng) -> RationalCurve {
    let n = r.random_range(1..4);
    let nums = (0..n).map(|_| random_poly(r, 1, 4, 4)).collect();
    let den = loop {
        let d = random_poly(r, 1, 2, 3);
        if !d.is_zero() {
            break d;
        }
    };
    RationalCurve::new(nums, den).unwrap()
}

fn float_points(curve: &RationalCurve, count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|k| {
            let x = -1.0 + 2.0 * (k as f64 + 0.5) / count as f64;
            let q = curve.denominator().eval_f64(&[x]);
            curve.numerators().iter().map(|p| p.eval_f64(&[x]) / q).collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rank_invariant_under_scaling_and_reparametrization(seed in any::<u64>()) {
        let mut r = rng(seed);
        let curve = random_curve(&mut r);
        let base = circle_rank_exact(&curve);
        let c = loop {
            let c = small(&mut r);
            if c != int(0) {
                break c;
            }
        };
        let scaled = RationalCurve::new(
            curve.numerators().iter().map(|p| p.scale(&c)).collect(),
            curve.denominator().scale(&c),
        ).unwrap();
        prop_assert_eq!(circle_rank_exact(&scaled), base);

        let a = loop {
            let a = small(&mut r);
            if a != int(0) {
                break a;
            }
        };
        let b = small(&mut r);
        let sub = [&Poly::constant(1, b) + &t().scale(&a)];
        let reparam = RationalCurve::new(
            curve.numerators().iter().map(|p| p.substitute(&sub)).collect(),
            curve.denominator().substitute(&sub),
        ).unwrap();
        prop_assert_eq!(circle_rank_exact(&reparam), base);
    }

    #[test]
    fn canonical_roundings_map_lines_to_circles(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rj = validate_jet(&random_valid_jet(&mut r, JetShape::default())).unwrap();
        let phi = canonical_rounding(&rj);
        for i in 0..4 {
            let line = random_line(&mut r, phi.source_dim(), i % 2 == 0);
            match restrict_to_line(&phi, &line) {
                Ok(curve) => prop_assert!(circle_rank_exact(&curve).in_circle),
                Err(Error::DenominatorVanishesIdentically) => {}
                Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
            }
        }
    }

    #[test]
    fn exact_verdict_agrees_with_fit(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rj = validate_jet(&random_valid_jet(&mut r, JetShape::default())).unwrap();
        let phi = canonical_rounding(&rj);
        let line = random_line(&mut r, phi.source_dim(), seed % 2 == 0);
        let curve = restrict_to_line(&phi, &line).unwrap();
        prop_assert!(circle_rank_exact(&curve).in_circle);
        let pts = float_points(&curve, 16);
        prop_assume!(pts.iter().flatten().all(|x| x.is_finite() && x.abs() < 1e3));
        let fit = circle_fit(&pts).unwrap();
        prop_assert!(fit.residual < 1e-7 * fit.spread.max(1.0), "{:?}", fit);
    }

    #[test]
    fn fit_recovers_radius(seed in any::<u64>(), dim in 2usize..6) {
        let mut r = rng(seed);
        let radius: f64 = r.random_range(0.01..100.0);
        let center: Vec<f64> = (0..dim).map(|_| r.random_range(-10.0..10.0)).collect();
        // orthonormal pair by Gram-Schmidt
        let u: Vec<f64> = (0..dim).map(|_| r.random_range(-1.0..1.0)).collect();
        let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assume!(nu > 0.1);
        let u: Vec<f64> = u.iter().map(|x| x / nu).collect();
        let v: Vec<f64> = (0..dim).map(|_| r.random_range(-1.0..1.0)).collect();
        let d: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
        let v: Vec<f64> = v.iter().zip(&u).map(|(a, b)| a - d * b).collect();
        let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assume!(nv > 0.1);
        let v: Vec<f64> = v.iter().map(|x| x / nv).collect();
        let pts: Vec<Vec<f64>> = (0..12)
            .map(|k| {
                let a = r.random_range(0.0..std::f64::consts::TAU) + k as f64;
                (0..dim).map(|i| center[i] + radius * (a.cos() * u[i] + a.sin() * v[i])).collect()
            })
            .collect();
        let fit = circle_fit(&pts).unwrap();
        prop_assert_eq!(fit.kind, FitKind::Circle);
        prop_assert!(((fit.radius - radius) / radius).abs() < 1e-9);
        let b = &fit.plane_basis;
        let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, c)| a * c).sum::<f64>();
        prop_assert!((dot(&b[0], &b[0]) - 1.0).abs() < 1e-12);
        prop_assert!((dot(&b[1], &b[1]) - 1.0).abs() < 1e-12);
        prop_assert!(dot(&b[0], &b[1]).abs() < 1e-12);
    }
}

#[test]
fn non_circle_curve_detected_by_both() {
    let curve = RationalCurve::new(vec![t(), t().pow(3)], Poly::one(1)).unwrap();
    let rank = circle_rank_exact(&curve);
    assert_eq!(rank.rank, 4);
    assert!(!rank.in_circle);
    let fit = circle_fit(&float_points(&curve, 16)).unwrap();
    assert!(fit.residual > 1e-3);
}

#[test]
fn mobius_vertical_line_circle() {
    let phi = canonical_rounding(&validate_jet(&samples::complex_square_jet()).unwrap());
    let line = rounding_core::circles::Line::through_origin(vec![int(0), int(1)]).unwrap();
    let curve = restrict_to_line(&phi, &line).unwrap();
    // y1^2 + y2^2 + y1 = 0 along the curve
    let mut r = rng(5);
    for _ in 0..20 {
        let x: Rational = small(&mut r);
        let q = curve.denominator().eval(&[x.clone()]);
        let y: Vec<Rational> = curve.numerators().iter().map(|p| p.eval(&[x.clone()]) / &q).collect();
        assert_eq!(sum_sq(&y) + &y[0], int(0));
    }
    let pts: Vec<Vec<f64>> = (0..32)
        .map(|k| {
            let s = -4.0 + 8.0 * k as f64 / 31.0;
            phi.eval_f64(&[0.0, s]).unwrap()
        })
        .collect();
    let fit = circle_fit(&pts).unwrap();
    assert_eq!(fit.kind, FitKind::Circle);
    assert!((fit.center[0] + 0.5).abs() < 1e-9 && fit.center[1].abs() < 1e-9);
    assert!((fit.radius - 0.5).abs() < 1e-9);
}

#[test]
fn numeric_oracle_examples() {
    let mobius = canonical_rounding(&validate_jet(&samples::complex_square_jet()).unwrap());
    let report = verify_rounding_numeric(&mobius, 100, 0, 1e-7);
    assert!(report.passed(), "{report:?}");

    let quat = canonical_rounding(&validate_jet(&samples::quaternion_jet()).unwrap());
    assert_eq!((quat.source_dim(), quat.target_dim()), (7, 4));
    assert!(verify_rounding_numeric(&quat, 100, 0, 1e-7).passed());

    let mut nums = PolyFraction::from(&mobius).numerators().to_vec();
    nums[0] = &nums[0] + &Poly::var(2, 0).pow(3).scale(&frac(1, 100));
    let perturbed = PolyFraction::new(nums, mobius.denominator().clone()).unwrap();
    assert!(!verify_rounding_numeric(&perturbed, 100, 0, 1e-7).violations.is_empty());
}
