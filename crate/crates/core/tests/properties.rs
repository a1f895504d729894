use proptest::prelude::*;
use ratnorm_core::kernel::{i_series, phi};
use ratnorm_core::norms::{bergman2_norm_series, hardy2_norm_series, hardy_norm};
use ratnorm_core::quadrature::QuadratureSpec;
use ratnorm_core::rational::RationalFunction;
use ratnorm_core::weights::RadialWeight;
use ratnorm_core::C64;

fn complex() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| C64::new(re, im))
}

/// Poles with modulus in [1.3, 4], at least 0.1 apart in argument.
fn rational() -> impl Strategy<Value = RationalFunction> {
    (
        complex(),
        prop::collection::vec((1.3..4.0f64, 1usize..4, prop::collection::vec(complex(), 3)), 1..4),
    )
        .prop_map(|(constant, poles)| {
            let count = poles.len();
            let mut numerator = vec![constant];
            let mut list = Vec::new();
            for (j, (modulus, mult, coeffs)) in poles.into_iter().enumerate() {
                let angle = 2.0 * std::f64::consts::PI * j as f64 / count as f64 + 0.05;
                list.push((C64::from_polar(modulus, angle), mult));
                numerator.extend(coeffs.into_iter().take(mult));
            }
            let degree: usize = list.iter().map(|p| p.1).sum();
            numerator.truncate(degree + 1);
            RationalFunction::from_numerator_and_poles(&numerator, &list).unwrap()
        })
}

fn close(a: C64, b: C64, scale: f64) -> bool {
    (a - b).norm() <= 1e-10 * scale.max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn derivative_is_linear(f in rational(), g in rational(), a in complex()) {
        let lhs = f.scale(a).add(&g).unwrap().derivative();
        let df = f.derivative();
        let dg = g.derivative();
        for k in 0..12 {
            let z = C64::from_polar(0.9, k as f64);
            let expected = a * df.eval(z).unwrap() + dg.eval(z).unwrap();
            prop_assert!(close(lhs.eval(z).unwrap(), expected, expected.norm()));
        }
    }

    #[test]
    fn taylor_coefficients_of_derivative(f in rational()) {
        let c = f.taylor_coeffs(40);
        let d = f.derivative().taylor_coeffs(39);
        for k in 0..40 {
            let expected = c[k + 1] * (k + 1) as f64;
            prop_assert!(close(d[k], expected, expected.norm()));
        }
    }

    #[test]
    fn dilations_compose(f in rational(), a in 0.2..1.0f64, b in 0.2..1.0f64) {
        let twice = f.dilate(a).unwrap().dilate(b).unwrap();
        let once = f.dilate(a * b).unwrap();
        for k in 0..8 {
            let z = C64::from_polar(0.95, 0.7 * k as f64);
            let v = once.eval(z).unwrap();
            prop_assert!(close(twice.eval(z).unwrap(), v, v.norm()));
        }
    }

    #[test]
    fn norms_scale_and_rotate(f in rational(), a in complex(), theta in 0.0..6.3f64) {
        prop_assume!(a.norm() > 1e-3);
        let h = hardy2_norm_series(&f, 1e-14).unwrap().value;
        let scaled = hardy2_norm_series(&f.scale(a), 1e-14).unwrap().value;
        prop_assert!((scaled - a.norm() * h).abs() <= 1e-10 * scaled.max(1e-300));
        let rotated = hardy2_norm_series(&f.rotate(theta), 1e-14).unwrap().value;
        prop_assert!((rotated - h).abs() <= 1e-10 * h);
        let w = RadialWeight::power(0.5).unwrap();
        let b = bergman2_norm_series(&f, &w, 1e-14).unwrap().value;
        let b_rot = bergman2_norm_series(&f.rotate(theta), &w, 1e-14).unwrap().value;
        prop_assert!((b - b_rot).abs() <= 1e-10 * b);
    }

    #[test]
    fn hardy_two_paths_agree(f in rational()) {
        let series = hardy2_norm_series(&f, 1e-14).unwrap().value;
        let quad = hardy_norm(&f, 2.0, &QuadratureSpec::default()).unwrap().value;
        prop_assert!((series - quad).abs() <= 1e-9 * series);
    }

    #[test]
    fn kernels_increase(t in 0.0..30.0f64, r in 0.0..0.9f64, dt in 0.01..5.0f64, dr in 0.001..0.09f64) {
        let i0 = i_series(t, r, 1e-15).unwrap().value;
        let i1 = i_series(t, r + dr, 1e-15).unwrap().value;
        prop_assert!(i1 >= i0 * (1.0 - 1e-12));
        let p0 = phi(r, t).unwrap().value;
        prop_assert!(phi(r, t + dt).unwrap().value >= p0 * (1.0 - 1e-12));
        prop_assert!(phi(r + dr, t).unwrap().value >= p0 * (1.0 - 1e-12));
    }
}
