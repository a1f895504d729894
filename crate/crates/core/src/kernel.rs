//! Kernel integrals on the unit circle.
//!
//! * `I(t, r) = ∫_𝕋 |1 − rζ|^{−t} dm(ζ)`
//! * `φ_r(t) = ∫_𝕋 |1 + rζ|^t dm(ζ)`
//! * `ψ(r) = ∫₀^π ln(1 + r² − 2r cos s) ds`
//!
//! `m` is normalized arc length throughout, so that
//! `I(t, r) = (1 − r²)^{1−t} φ_r(t − 2)` holds exactly for `t ≥ 2`.

use core::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{domain, invalid, Error, Result};
use crate::quadrature::{integrate_circle_adaptive, integrate_radial_factored, Estimate};
use crate::weights::{RadialWeight, GROWTH_GRID};

/// Relative tolerance of the angular doubling for `I` and `φ`.
pub const KERNEL_REL_TOL: f64 = 1e-14;
/// Default relative tail bound for the `I` series.
pub const SERIES_TAIL_TOL: f64 = 1e-15;
/// Relative tolerance of the radial integrals in the tail comparisons.
pub const RADIAL_TOL: f64 = 1e-12;

const START_POINTS: usize = 16;
const RESCALE: f64 = 1e200;
const MAX_TERMS: usize = 50_000_000;

/// Which code path produced a kernel value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelMethod {
    Series,
    Quadrature,
    Identity,
}

/// A kernel value together with its arguments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEval {
    pub t: f64,
    pub r: f64,
    pub value: f64,
    pub method: KernelMethod,
    /// Absolute error estimate.
    pub error_estimate: f64,
}

fn check_args(t: f64, r: f64) -> Result<()> {
    if !(0.0..1.0).contains(&r) {
        return Err(domain!("r must lie in [0, 1), got {r}"));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(invalid!("t must be finite and nonnegative, got {t}"));
    }
    Ok(())
}

/// `I(t, r)` by adaptive trapezoid sums on the circle.
pub fn i_quadrature(t: f64, r: f64) -> Result<KernelEval> {
    check_args(t, r)?;
    let est = integrate_circle_adaptive(
        |z| (C64::new(1.0, 0.0) - z * r).norm().powf(-t),
        START_POINTS,
        KERNEL_REL_TOL,
        0.0,
    )?;
    Ok(KernelEval {
        t,
        r,
        value: est.value,
        method: KernelMethod::Quadrature,
        error_estimate: est.error,
    })
}

/// `ln I(t, r)` from `Σ a_k(t)² r^{2k}`, where `a_k(t)` are the Taylor
/// coefficients of `(1 − z)^{−t/2}`. Also returns a relative tail bound and
/// the number of terms summed.
///
/// The running sum is rescaled whenever a term exceeds `1e200`, so large `t`
/// cannot overflow.
pub fn ln_i_series(t: f64, r: f64, tail_tol: f64) -> Result<(f64, f64, usize)> {
    check_args(t, r)?;
    if !(tail_tol > 0.0) {
        return Err(invalid!("tail tolerance must be positive, got {tail_tol}"));
    }
    if r == 0.0 || t == 0.0 {
        return Ok((0.0, 0.0, 1));
    }
    let r2 = r * r;
    let half = 0.5 * t;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut log_scale = 0.0f64;
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        let step = (kf + half) / (kf + 1.0);
        // For t ≥ 2 the ratios a_{k+1}²r²/a_k² decrease to r²; for t < 2 they
        // increase to r².
        let q = if t >= 2.0 { step * step * r2 } else { r2 };
        if q < 1.0 {
            let tail = term * q / (1.0 - q);
            if tail <= tail_tol * sum {
                return Ok((sum.ln() + log_scale, tail / sum, k + 1));
            }
        }
        term *= step * step * r2;
        sum += term;
        if term > RESCALE {
            term /= RESCALE;
            sum /= RESCALE;
            log_scale += RESCALE.ln();
        }
        k += 1;
        if k > MAX_TERMS {
            return Err(Error::NonConvergence {
                what: "kernel series",
                achieved: f64::NAN,
                requested: tail_tol,
            });
        }
    }
}

/// `I(t, r)` by the coefficient series.
pub fn i_series(t: f64, r: f64, tail_tol: f64) -> Result<KernelEval> {
    let (ln_value, rel_tail, _) = ln_i_series(t, r, tail_tol)?;
    let value = ln_value.exp();
    if !value.is_finite() {
        return Err(Error::NonFinite("I(t, r) overflows; use ln_i_series"));
    }
    Ok(KernelEval {
        t,
        r,
        value,
        method: KernelMethod::Series,
        error_estimate: value * rel_tail,
    })
}

/// `φ_r(t)` by adaptive trapezoid sums on the circle.
pub fn phi(r: f64, t: f64) -> Result<KernelEval> {
    check_args(t, r)?;
    let est = integrate_circle_adaptive(
        |z| (C64::new(1.0, 0.0) + z * r).norm().powf(t),
        START_POINTS,
        KERNEL_REL_TOL,
        0.0,
    )?;
    Ok(KernelEval {
        t,
        r,
        value: est.value,
        method: KernelMethod::Quadrature,
        error_estimate: est.error,
    })
}

/// `ψ(r)`, computed as `π` times the circle mean of `ln|1 − rζ|²`.
pub fn psi(r: f64) -> Result<f64> {
    check_args(0.0, r)?;
    if r == 0.0 {
        return Ok(0.0);
    }
    let est = integrate_circle_adaptive(
        |z| (C64::new(1.0, 0.0) - z * r).norm_sqr().ln(),
        START_POINTS,
        0.0,
        1e-16,
    )?;
    Ok(PI * est.value)
}

/// `(1 − r²)^{1−t} φ_r(t − 2)`, valid for `t ≥ 2`.
pub fn i_identity(t: f64, r: f64) -> Result<KernelEval> {
    if !(t >= 2.0) {
        return Err(domain!("the φ identity for I(t, r) needs t ≥ 2, got {t}"));
    }
    let p = phi(r, t - 2.0)?;
    let factor = (1.0 - r * r).powf(1.0 - t);
    Ok(KernelEval {
        t,
        r,
        value: factor * p.value,
        method: KernelMethod::Identity,
        error_estimate: factor * p.error_estimate,
    })
}

/// `J(t, u) = (1 − u²)^{t−1} I(t, u) = φ_u(t − 2)`, `t ≥ 2`.
pub fn j_kernel(t: f64, u: f64) -> Result<f64> {
    if !(t >= 2.0) {
        return Err(domain!("J(t, u) needs t ≥ 2, got {t}"));
    }
    Ok(phi(u, t - 2.0)?.value)
}

/// `∫_a^1 ρ w(ρ) I(t, rρ) dρ` with `I` from the series path.
pub fn lemma2_tail(w: &RadialWeight, t: f64, a: f64, r: f64) -> Result<Estimate> {
    check_args(t, r)?;
    if !(0.0..1.0).contains(&a) {
        return Err(invalid!("lower limit must lie in [0, 1), got {a}"));
    }
    let (exponent, smooth) = w.endpoint_split();
    let mut failure: Option<Error> = None;
    let est = integrate_radial_factored(
        |rho| match ln_i_series(t, r * rho, SERIES_TAIL_TOL) {
            Ok((ln_i, _, _)) => rho * smooth(rho) * ln_i.exp(),
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        exponent,
        a,
        8,
        32,
        RADIAL_TOL,
    );
    match failure {
        Some(e) => Err(e),
        None => est,
    }
}

/// `lemma2_tail(w, t, r₀, r) / lemma2_tail(w, t, r, r)` for `r ≥ r₀`, under
/// the hypotheses `t − γ > 2` and `(1 − ρ)^{−γ} w(ρ)` nondecreasing on
/// `[r₀, 1)`.
pub fn lemma2_ratio(w: &RadialWeight, gamma: f64, r0: f64, t: f64, r: f64) -> Result<f64> {
    if !(t - gamma > 2.0) {
        return Err(Error::Precondition(alloc::format!(
            "t − γ > 2 fails: t = {t}, γ = {gamma}"
        )));
    }
    if !(r >= r0) {
        return Err(Error::Precondition(alloc::format!("r ≥ r₀ fails: r = {r}, r₀ = {r0}")));
    }
    let check = w.validate_growth(gamma, r0, GROWTH_GRID)?;
    if !check.ok {
        return Err(Error::Precondition(alloc::format!(
            "(1 − ρ)^(−{gamma}) w(ρ) decreases near ρ = {}",
            check.violation.unwrap_or(f64::NAN)
        )));
    }
    if r == r0 {
        return Ok(1.0);
    }
    // tail(r₀) = head + tail(r) with head = ∫_{r₀}^r ≥ 0, so the ratio is
    // formed as 1 + head/tail(r) rather than by dividing two close numbers.
    let head = lemma2_head(w, t, r0, r)?;
    let tail = lemma2_tail(w, t, r, r)?;
    Ok(1.0 + head.value / tail.value)
}

/// `∫_{r₀}^{r} ρ w(ρ) I(t, rρ) dρ`, `r₀ ≤ r < 1`.
fn lemma2_head(w: &RadialWeight, t: f64, r0: f64, r: f64) -> Result<Estimate> {
    let width = r - r0;
    let mut failure: Option<Error> = None;
    let est = integrate_radial_factored(
        |s| {
            let rho = r0 + width * s;
            let value = w.eval(rho).and_then(|wv| Ok(rho * wv * ln_i_series(t, r * rho, SERIES_TAIL_TOL)?.0.exp()));
            value.unwrap_or_else(|e| {
                failure.get_or_insert(e);
                f64::NAN
            })
        },
        0.0,
        0.0,
        1,
        32,
        RADIAL_TOL,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let mut est = est?;
    est.value *= width;
    est.error *= width;
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// `Σ binom(t/2, k)² r^{2k}`: the squared H² norm of `(1 + rz)^{t/2}`.
    fn phi_oracle(r: f64, t: f64) -> f64 {
        let mut c = 1.0f64;
        let mut sum = 1.0;
        for k in 0..20_000 {
            let kf = k as f64;
            c *= (0.5 * t - kf) / (kf + 1.0);
            sum += c * c * r.powi(2 * (k as i32 + 1));
        }
        sum
    }

    #[test]
    fn i_examples() {
        for r in [0.0f64, 0.1, 0.5, 0.9] {
            let i2 = 1.0 / (1.0 - r * r);
            let i4 = (1.0 + r * r) / (1.0 - r * r).powi(3);
            assert_relative_eq!(i_quadrature(2.0, r).unwrap().value, i2, max_relative = 1e-13);
            assert_relative_eq!(i_series(2.0, r, 1e-15).unwrap().value, i2, max_relative = 1e-13);
            assert_relative_eq!(i_quadrature(4.0, r).unwrap().value, i4, max_relative = 1e-13);
            assert_relative_eq!(i_series(4.0, r, 1e-15).unwrap().value, i4, max_relative = 1e-13);
            assert_eq!(i_quadrature(3.3, 0.0).unwrap().value, 1.0);
        }
        assert_eq!(i_series(0.0, 0.7, 1e-15).unwrap().value, 1.0);
        let brute: f64 = (0..5000).map(|k| ((k + 1) as f64).powi(2) * 0.81f64.powi(k)).sum();
        assert_relative_eq!(i_series(4.0, 0.9, 1e-15).unwrap().value, brute, max_relative = 1e-12);
    }

    #[test]
    fn series_matches_quadrature() {
        for t in [1.0, 2.5, 7.0, 20.0] {
            for r in [0.1, 0.5, 0.9] {
                let a = i_series(t, r, 1e-15).unwrap().value;
                let b = i_quadrature(t, r).unwrap().value;
                assert_relative_eq!(a, b, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn large_t_stays_finite_in_log_domain() {
        let (ln_i, _, _) = ln_i_series(900.0, 0.99, 1e-15).unwrap();
        let (ln_i_small, _, _) = ln_i_series(100.0, 0.5, 1e-15).unwrap();
        // φ_r(t − 2) ≥ 1 gives ln I ≥ (t − 1)·(−ln(1 − r²)).
        assert!(ln_i > 899.0 * -(1.0 - 0.99f64 * 0.99).ln());
        let direct = i_quadrature(100.0, 0.5).unwrap().value.ln();
        assert_relative_eq!(ln_i_small, direct, max_relative = 1e-13);
    }

    #[test]
    fn phi_examples() {
        for r in [0.0, 0.3, 0.8] {
            assert_relative_eq!(phi(r, 0.0).unwrap().value, 1.0, max_relative = 1e-15);
            assert_relative_eq!(phi(r, 2.0).unwrap().value, 1.0 + r * r, max_relative = 1e-14);
            for t in [0.7, 3.0, 11.5] {
                assert_relative_eq!(phi(r, t).unwrap().value, phi_oracle(r, t), max_relative = 1e-12);
            }
        }
        assert_eq!(phi(0.0, 17.0).unwrap().value, 1.0);
    }

    #[test]
    fn psi_vanishes() {
        for r in [0.0, 0.25, 0.5, 0.75, 0.9, 0.99] {
            assert!(psi(r).unwrap().abs() < 1e-12, "ψ({r}) = {}", psi(r).unwrap());
        }
        for r in [0.3, 0.7, 0.9] {
            let residual = 2.0 * psi(r).unwrap() - psi(r * r).unwrap();
            assert!(residual.abs() < 1e-12);
        }
    }

    #[test]
    fn identity_matches_direct_paths() {
        for t in [2.0, 3.0, 4.5, 10.0, 40.0] {
            for r in [0.0, 0.3, 0.7, 0.95] {
                let id = i_identity(t, r).unwrap().value;
                let q = i_quadrature(t, r).unwrap().value;
                assert_relative_eq!(id, q, max_relative = 1e-11);
            }
        }
        assert!(matches!(i_identity(1.5, 0.3), Err(Error::Domain(_))));
        assert!(matches!(i_quadrature(2.0, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn j_kernel_relation() {
        let (t, u) = (6.5, 0.6);
        let j = j_kernel(t, u).unwrap();
        let i = i_series(t, u, 1e-15).unwrap().value;
        assert_relative_eq!(j, (1.0 - u * u).powf(t - 1.0) * i, max_relative = 1e-12);
    }

    #[test]
    fn lemma2_tail_examples() {
        let w0 = RadialWeight::power(0.0).unwrap();
        assert_relative_eq!(lemma2_tail(&w0, 0.0, 0.0, 0.5).unwrap().value, 1.0 / 3.0, max_relative = 1e-13);
        let w1 = RadialWeight::power(1.0).unwrap();
        let mut prev = f64::INFINITY;
        for a in [0.0, 0.2, 0.5, 0.8, 0.95] {
            let v = lemma2_tail(&w1, 10.0, a, 0.8).unwrap().value;
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn lemma2_ratio_examples() {
        let w1 = RadialWeight::power(1.0).unwrap();
        assert_eq!(lemma2_ratio(&w1, 2.0, 0.5, 10.0, 0.5).unwrap(), 1.0);
        let ratios: alloc::vec::Vec<f64> = [5.0, 10.0, 20.0, 40.0, 80.0]
            .iter()
            .map(|&t| lemma2_ratio(&w1, 2.0, 0.5, t, 0.8).unwrap())
            .collect();
        let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
        let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
        assert!(min >= 1.0 && max / min < 2.0, "{ratios:?}");
        let direct = lemma2_tail(&w1, 10.0, 0.5, 0.8).unwrap().value / lemma2_tail(&w1, 10.0, 0.8, 0.8).unwrap().value;
        assert_relative_eq!(lemma2_ratio(&w1, 2.0, 0.5, 10.0, 0.8).unwrap(), direct, max_relative = 1e-11);
        assert!(matches!(lemma2_ratio(&w1, 2.0, 0.5, 4.0, 0.8), Err(Error::Precondition(_))));
        assert!(matches!(lemma2_ratio(&w1, 2.0, 0.5, 10.0, 0.4), Err(Error::Precondition(_))));
        // (1 − ρ)^{1/2}(1 + ρ)ρ decreases near 1.
        assert!(matches!(lemma2_ratio(&w1, 0.5, 0.5, 10.0, 0.8), Err(Error::Precondition(_))));
    }
}
