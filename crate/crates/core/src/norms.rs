//! Hardy and weighted Bergman norms of rational functions.
//!
//! Functions here are analytic across the unit circle, so the Hardy norm is
//! the boundary `L^p` mean. For `p = 2` both spaces also have exact series
//! paths through the Taylor coefficients.

use alloc::format;
use alloc::string::String;


use num_complex::Complex64 as C64;

use crate::error::{domain, invalid, Error, Result};
use crate::quadrature::{integrate_annulus, integrate_circle_adaptive, roots_of_unity, QuadratureSpec};
use crate::rational::{weighted_square_sum, RationalFunction};
use crate::weights::RadialWeight;

/// Default bound on squared-norm series tails (absolute and relative).
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Function space in which norms and Bernstein ratios are taken.
#[derive(Debug, Clone)]
pub enum SpaceDescriptor {
    /// `H^p`, `1 ≤ p ≤ ∞` (`p = f64::INFINITY` for `H^∞`).
    Hardy { p: f64 },
    /// `L^p_a(w)`, `1 ≤ p < ∞`.
    Bergman { p: f64, weight: RadialWeight },
}

impl SpaceDescriptor {
    pub fn hardy(p: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(invalid!("Hardy exponent must satisfy p ≥ 1, got {p}"));
        }
        Ok(SpaceDescriptor::Hardy { p })
    }

    pub fn bergman(p: f64, weight: RadialWeight) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(invalid!("Bergman exponent must satisfy 1 ≤ p < ∞, got {p}"));
        }
        Ok(SpaceDescriptor::Bergman { p, weight })
    }

    pub fn p(&self) -> f64 {
        match self {
            SpaceDescriptor::Hardy { p } | SpaceDescriptor::Bergman { p, .. } => *p,
        }
    }

    /// `hardy:<p>` or `bergman:<p>:<weight label>`.
    pub fn label(&self) -> String {
        match self {
            SpaceDescriptor::Hardy { p } if p.is_infinite() => String::from("hardy:inf"),
            SpaceDescriptor::Hardy { p } => format!("hardy:{p}"),
            SpaceDescriptor::Bergman { p, weight } => format!("bergman:{p}:{}", weight.label()),
        }
    }
}

/// How a norm was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMethod {
    Quadrature,
    Series,
}

/// A computed norm with its error budget.
#[derive(Debug, Clone, PartialEq)]
pub struct NormResult {
    pub value: f64,
    pub method: NormMethod,
    /// Absolute error estimate on `value`; a rigorous tail bound for series.
    pub error_estimate: f64,
    /// Grid actually used (angular count after doubling), for quadrature.
    pub grid: Option<QuadratureSpec>,
    /// Series terms summed, for the series method.
    pub terms: usize,
}

fn check_analytic(f: &RationalFunction) -> Result<()> {
    match f.min_pole_modulus() {
        Some(m) if !(m > 1.0) => Err(domain!("pole of modulus {m} on or inside the closed disc")),
        _ => Ok(()),
    }
}

/// `|v|^p`, avoiding the square root for even `p`.
fn abs_pow(v: C64, p: f64) -> f64 {
    if p == 2.0 {
        v.norm_sqr()
    } else if p == 1.0 {
        v.norm()
    } else {
        v.norm_sqr().powf(0.5 * p)
    }
}

/// Error of `S^{1/p}` given an absolute error `δ` on `S`.
fn root_error(integral: f64, delta: f64, p: f64) -> f64 {
    if integral <= 0.0 {
        return delta.powf(1.0 / p);
    }
    integral.powf(1.0 / p) * delta / (p * integral)
}

/// `‖f‖_{H^p}` as the boundary mean `(∫_𝕋 |f|^p dm)^{1/p}`; for `p = ∞` the
/// maximum over a doubled angular grid, with an error pad from `|f′|`.
pub fn hardy_norm(f: &RationalFunction, p: f64, spec: &QuadratureSpec) -> Result<NormResult> {
    spec.validate()?;
    check_analytic(f)?;
    if !(p >= 1.0) {
        return Err(invalid!("Hardy exponent must satisfy p ≥ 1, got {p}"));
    }
    if p.is_infinite() {
        return hardy_sup_norm(f, spec);
    }
    let est = integrate_circle_adaptive(
        |z| abs_pow(f.eval_unchecked(z), p),
        spec.angular_points,
        spec.tolerance,
        0.0,
    )?;
    Ok(NormResult {
        value: est.value.powf(1.0 / p),
        method: NormMethod::Quadrature,
        error_estimate: root_error(est.value, est.error, p),
        grid: Some(QuadratureSpec {
            angular_points: est.angular_points,
            ..*spec
        }),
        terms: 0,
    })
}

fn hardy_sup_norm(f: &RationalFunction, spec: &QuadratureSpec) -> Result<NormResult> {
    let n = spec.angular_points;
    let fine = 2 * n;
    let max = roots_of_unity(fine)
        .into_iter()
        .map(|z| f.eval_unchecked(z).norm())
        .fold(0.0, f64::max);
    // Every point of the circle lies within π/(2n) of a node of the fine grid.
    let df = f.derivative();
    let slope = roots_of_unity(n)
        .into_iter()
        .map(|z| df.eval_unchecked(z).norm())
        .fold(0.0, f64::max);
    Ok(NormResult {
        value: max,
        method: NormMethod::Quadrature,
        error_estimate: slope * core::f64::consts::PI / fine as f64,
        grid: Some(QuadratureSpec {
            angular_points: fine,
            ..*spec
        }),
        terms: 0,
    })
}

/// `‖f‖_{H²} = (Σ |f̂(k)|²)^{1/2}` with a geometric tail bound.
pub fn hardy2_norm_series(f: &RationalFunction, tail_tol: f64) -> Result<NormResult> {
    check_analytic(f)?;
    let (sum, tail, terms) = weighted_square_sum(f, |_| 1.0, tail_tol)?;
    Ok(NormResult {
        value: sum.sqrt(),
        method: NormMethod::Series,
        error_estimate: (sum + tail).sqrt() - sum.sqrt(),
        grid: None,
        terms,
    })
}

/// `‖f‖_{L^p_a(w)} = (∫₀¹ w(ρ) ∫_𝕋 |f(ρζ)|^p dm dρ)^{1/p}` by quadrature.
pub fn bergman_norm(
    f: &RationalFunction,
    p: f64,
    w: &RadialWeight,
    spec: &QuadratureSpec,
) -> Result<NormResult> {
    let full = QuadratureSpec {
        annulus_alpha: 0.0,
        ..*spec
    };
    let est = bergman_power_integral(f, p, w, &full)?;
    Ok(NormResult {
        value: est.value.powf(1.0 / p),
        method: NormMethod::Quadrature,
        error_estimate: root_error(est.value, est.error, p),
        grid: Some(QuadratureSpec {
            angular_points: est.angular_points,
            ..full
        }),
        terms: 0,
    })
}

/// `∫_α^1 w(ρ) ∫_𝕋 |f(ρζ)|^p dm dρ` with `α = spec.annulus_alpha`.
pub fn bergman_power_integral(
    f: &RationalFunction,
    p: f64,
    w: &RadialWeight,
    spec: &QuadratureSpec,
) -> Result<crate::quadrature::Estimate> {
    check_analytic(f)?;
    if !(p >= 1.0 && p.is_finite()) {
        return Err(invalid!("Bergman exponent must satisfy 1 ≤ p < ∞, got {p}"));
    }
    integrate_annulus(|z| abs_pow(f.eval_unchecked(z), p), w, spec)
}

/// `‖f‖_{L²_a(w)} = (Σ |f̂(k)|² ∫₀¹ w ρ^{2k} dρ)^{1/2}` with a tail bound.
pub fn bergman2_norm_series(f: &RationalFunction, w: &RadialWeight, tail_tol: f64) -> Result<NormResult> {
    check_analytic(f)?;
    let mut moments = w.even_moments();
    let mut failure: Option<Error> = None;
    let (sum, tail, terms) = weighted_square_sum(
        f,
        |k| match moments.get(k) {
            Ok(m) => m,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        tail_tol,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(NormResult {
        value: sum.sqrt(),
        method: NormMethod::Series,
        error_estimate: (sum + tail).sqrt() - sum.sqrt(),
        grid: None,
        terms,
    })
}

/// Norm in `space`: series for `p = 2` when `prefer_series`, quadrature
/// otherwise.
pub fn norm(
    f: &RationalFunction,
    space: &SpaceDescriptor,
    spec: &QuadratureSpec,
    prefer_series: bool,
) -> Result<NormResult> {
    match space {
        SpaceDescriptor::Hardy { p } if *p == 2.0 && prefer_series => {
            hardy2_norm_series(f, DEFAULT_TAIL_TOL)
        }
        SpaceDescriptor::Hardy { p } => hardy_norm(f, *p, spec),
        SpaceDescriptor::Bergman { p, weight } if *p == 2.0 && prefer_series => {
            bergman2_norm_series(f, weight, DEFAULT_TAIL_TOL)
        }
        SpaceDescriptor::Bergman { p, weight } => bergman_norm(f, *p, weight, spec),
    }
}

/// Rotation `f(e^{iθ}z)` helper used by invariance checks.
pub fn rotated(f: &RationalFunction, theta: f64) -> RationalFunction {
    f.rotate(theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{blaschke_power, PoleTerm};
    use alloc::vec;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn hardy_examples() {
        let spec = QuadratureSpec::default();
        let r = 0.6;
        let f = RationalFunction::cauchy_power(r, 1).unwrap();
        let exact = 1.0 / (1.0 - r * r).sqrt();
        assert_relative_eq!(hardy_norm(&f, 2.0, &spec).unwrap().value, exact, max_relative = 1e-12);
        assert_relative_eq!(hardy2_norm_series(&f, 1e-14).unwrap().value, exact, max_relative = 1e-12);
        let k = RationalFunction::constant(c(3.0, 4.0));
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            assert_relative_eq!(hardy_norm(&k, p, &spec).unwrap().value, 5.0, max_relative = 1e-13);
        }
        let b = blaschke_power(0.7, 6).unwrap();
        assert_relative_eq!(hardy_norm(&b, 2.0, &spec).unwrap().value, 1.0, max_relative = 1e-9);
        assert_relative_eq!(hardy2_norm_series(&b, 1e-14).unwrap().value, 1.0, max_relative = 1e-9);
        let z3 = RationalFunction::polynomial(vec![C64::default(), C64::default(), C64::default(), c(1.0, 0.0)]);
        assert_relative_eq!(hardy2_norm_series(&z3, 1e-14).unwrap().value, 1.0);
    }

    #[test]
    fn hardy_sup_norm_bounds() {
        let r = 0.5;
        let f = RationalFunction::cauchy_power(r, 3).unwrap();
        let res = hardy_norm(&f, f64::INFINITY, &QuadratureSpec::default()).unwrap();
        let exact = (1.0 - r).powi(-3);
        assert!(res.value <= exact * (1.0 + 1e-15));
        assert!(res.value + res.error_estimate >= exact);
    }

    #[test]
    fn hardy_rejects_poles_in_disc() {
        // Build a pole term legally then dilate beyond the boundary is not
        // possible; a pole on the circle is rejected at construction.
        assert!(PoleTerm::new(c(1.0, 0.0), vec![c(1.0, 0.0)]).is_err());
        assert!(hardy_norm(&RationalFunction::zero(), 0.5, &QuadratureSpec::default()).is_err());
    }

    #[test]
    fn bergman_examples() {
        let spec = QuadratureSpec::default();
        let w0 = RadialWeight::power(0.0).unwrap();
        let one = RationalFunction::constant(c(1.0, 0.0));
        assert_relative_eq!(
            bergman_norm(&one, 2.0, &w0, &spec).unwrap().value,
            0.5f64.sqrt(),
            max_relative = 1e-12
        );
        let z = RationalFunction::polynomial(vec![C64::default(), c(1.0, 0.0)]);
        assert_relative_eq!(bergman_norm(&z, 2.0, &w0, &spec).unwrap().value, 0.5, max_relative = 1e-12);
        assert_relative_eq!(
            bergman2_norm_series(&one, &w0, 1e-14).unwrap().value,
            0.5f64.sqrt(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn bergman_series_matches_moment_sum() {
        let r = 0.7;
        let f = RationalFunction::cauchy_power(r, 1).unwrap();
        let w0 = RadialWeight::power(0.0).unwrap();
        let oracle: f64 = (0..4000).map(|k| r.powi(2 * k) / (2.0 * k as f64 + 2.0)).sum();
        let series = bergman2_norm_series(&f, &w0, 1e-14).unwrap();
        assert_relative_eq!(series.value, oracle.sqrt(), max_relative = 1e-13);
        let quad = bergman_norm(&f, 2.0, &w0, &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(quad.value, oracle.sqrt(), max_relative = 1e-10);
    }

    #[test]
    fn bergman_rotation_invariance() {
        let f = RationalFunction::from_numerator_and_poles(
            &[c(1.0, 0.2), c(0.0, -0.7)],
            &[(c(1.4, 0.3), 1), (c(-0.5, 1.6), 2)],
        )
        .unwrap();
        let w = RadialWeight::power(0.5).unwrap();
        let spec = QuadratureSpec::default();
        let base = bergman_norm(&f, 3.0, &w, &spec).unwrap().value;
        for j in 0..10 {
            let g = rotated(&f, 0.37 * j as f64 + 0.1);
            let v = bergman_norm(&g, 3.0, &w, &spec).unwrap().value;
            assert_relative_eq!(v, base, max_relative = 1e-10);
        }
    }

    #[test]
    fn norms_are_homogeneous() {
        let f = RationalFunction::cauchy_power(0.5, 2).unwrap();
        let g = f.scale(c(-3.0, 4.0));
        let spec = QuadratureSpec::default();
        let w = RadialWeight::power(1.0).unwrap();
        let spaces = [
            SpaceDescriptor::hardy(1.0).unwrap(),
            SpaceDescriptor::hardy(2.0).unwrap(),
            SpaceDescriptor::bergman(2.0, w.clone()).unwrap(),
            SpaceDescriptor::bergman(1.5, w).unwrap(),
        ];
        for space in &spaces {
            for series in [true, false] {
                let a = norm(&f, space, &spec, series).unwrap().value;
                let b = norm(&g, space, &spec, series).unwrap().value;
                assert_relative_eq!(b, 5.0 * a, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn hardy_norms_increase_with_p() {
        let f = RationalFunction::from_numerator_and_poles(&[c(0.3, 0.1), c(1.0, 0.0)], &[(c(1.8, -0.4), 2)])
            .unwrap();
        let spec = QuadratureSpec::default();
        let n1 = hardy_norm(&f, 1.0, &spec).unwrap().value;
        let n2 = hardy_norm(&f, 2.0, &spec).unwrap().value;
        let ninf = hardy_norm(&f, f64::INFINITY, &spec).unwrap();
        assert!(n1 <= n2 && n2 <= ninf.value + ninf.error_estimate);
    }

    #[test]
    fn annulus_integral_is_dominated_by_full_integral() {
        let f = RationalFunction::cauchy_power(0.8, 3).unwrap();
        let w = RadialWeight::power(1.0).unwrap();
        let full = bergman_power_integral(&f, 2.0, &w, &QuadratureSpec::default()).unwrap();
        let half = QuadratureSpec {
            annulus_alpha: 0.5,
            ..QuadratureSpec::default()
        };
        let ann = bergman_power_integral(&f, 2.0, &w, &half).unwrap();
        assert!(ann.value <= full.value);
        assert!(full.value / ann.value < 2.0);
    }
}
