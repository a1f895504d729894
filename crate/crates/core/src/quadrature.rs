//! Integration engines: the uniform rule on the circle, Gauss–Legendre and
//! Gauss–Jacobi radial rules, and composite annulus integration.
//!
//! Circle integrals use the normalized measure `dm = dθ/2π`. Radial integrals
//! on `(a, 1)` are globally adaptive: the interval starts as dyadic panels
//! accumulating at `ρ = 1`, each panel is compared against its two halves, and
//! the worst panel is bisected until the summed discrepancy meets the relative
//! tolerance. The panel touching `ρ = 1` may carry an endpoint factor
//! `(1 − ρ)^e`, integrated exactly by a Gauss–Jacobi rule.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::linalg::tridiagonal_eigen;
use crate::sum::Compensated;
use crate::weights::RadialWeight;

pub const DEFAULT_ANGULAR_POINTS: usize = 1024;
pub const DEFAULT_RADIAL_PANELS: usize = 8;
pub const DEFAULT_POINTS_PER_PANEL: usize = 32;
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// Largest angular grid reached by doubling.
pub const MAX_ANGULAR_POINTS: usize = 1 << 22;
const MAX_PANELS: usize = 4096;

/// Radial integration rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialRule {
    /// Gauss–Legendre on dyadic panels refined toward `ρ = 1`.
    GaussLegendre { panels: usize, points: usize },
    /// Gauss–Jacobi for an endpoint factor `(1 − ρ)^exponent`.
    GaussJacobi { exponent: f64, points: usize },
}

impl Default for RadialRule {
    fn default() -> Self {
        RadialRule::GaussLegendre {
            panels: DEFAULT_RADIAL_PANELS,
            points: DEFAULT_POINTS_PER_PANEL,
        }
    }
}

/// Grid and tolerance settings shared by the quadrature-based norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Initial angular point count (a power of two, at least 8).
    pub angular_points: usize,
    pub radial_rule: RadialRule,
    /// Inner radius `α` of the annulus `α < |z| < 1`.
    pub annulus_alpha: f64,
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            angular_points: DEFAULT_ANGULAR_POINTS,
            radial_rule: RadialRule::default(),
            annulus_alpha: 0.0,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.angular_points < 8 || !self.angular_points.is_power_of_two() {
            return Err(invalid!(
                "angular point count must be a power of two ≥ 8, got {}",
                self.angular_points
            ));
        }
        if !(self.tolerance > 0.0) {
            return Err(invalid!("tolerance must be positive, got {}", self.tolerance));
        }
        if !(0.0..1.0).contains(&self.annulus_alpha) {
            return Err(invalid!("annulus α must lie in [0, 1), got {}", self.annulus_alpha));
        }
        match self.radial_rule {
            RadialRule::GaussLegendre { panels, points } if panels == 0 || points == 0 => {
                Err(invalid!("radial panels and points must be positive"))
            }
            RadialRule::GaussJacobi { exponent, points } if !(exponent > -1.0) || points == 0 => {
                Err(invalid!("Gauss–Jacobi needs exponent > −1 and points > 0"))
            }
            _ => Ok(()),
        }
    }
}

/// A quadrature value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    /// Angular points used (0 when not applicable).
    pub angular_points: usize,
    /// Radial panels used (0 when not applicable).
    pub panels: usize,
}

/// Gauss rule on `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss–Legendre rule with `n` points (Golub–Welsch).
pub fn gauss_legendre(n: usize) -> Result<GaussRule> {
    gauss_jacobi(n, 0.0, 0.0)
}

/// Gauss rule for the weight `(1 − x)^alpha (1 + x)^beta` on `[−1, 1]`.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<GaussRule> {
    if n == 0 {
        return Err(invalid!("a Gauss rule needs at least one point"));
    }
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(invalid!("Jacobi exponents must exceed −1, got {alpha}, {beta}"));
    }
    let ab = alpha + beta;
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n {
        let kf = k as f64;
        let a_k = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        diag.push(a_k);
        if k + 1 < n {
            let j = (k + 1) as f64;
            let b_j = if k == 0 {
                4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * j * (j + alpha) * (j + beta) * (j + ab)
                    / ((2.0 * j + ab).powi(2) * (2.0 * j + ab + 1.0) * (2.0 * j + ab - 1.0))
            };
            off.push(b_j.sqrt());
        }
    }
    let mu0 = ((ab + 1.0) * core::f64::consts::LN_2 + libm::lgamma(alpha + 1.0)
        + libm::lgamma(beta + 1.0)
        - libm::lgamma(ab + 2.0))
    .exp();
    let (nodes, first) = tridiagonal_eigen(&diag, &off)?;
    let weights = first.iter().map(|v| mu0 * v * v).collect();
    Ok(GaussRule { nodes, weights })
}

/// `e^{2πij/N}` for `j < N`.
pub fn roots_of_unity(n: usize) -> Vec<C64> {
    (0..n)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / n as f64;
            C64::new(theta.cos(), theta.sin())
        })
        .collect()
}

/// `(1/N) Σ_j g(e^{2πij/N})`: exact for trigonometric polynomials of degree
/// below `N`, and `g ≡ 1` integrates to 1.
pub fn integrate_circle(mut g: impl FnMut(C64) -> f64, n: usize) -> f64 {
    let acc: Compensated = roots_of_unity(n).into_iter().map(&mut g).collect();
    acc.value() / n as f64
}

/// Circle mean by repeated doubling from `n0` points until two successive
/// values differ by at most `rel_tol·|value| + abs_tol`. Previous nodes are
/// reused, so each doubling evaluates only the new (odd) nodes.
pub fn integrate_circle_adaptive(
    mut g: impl FnMut(C64) -> f64,
    n0: usize,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Estimate> {
    let mut n = n0.max(8).next_power_of_two();
    let mut sum: Compensated = roots_of_unity(n).into_iter().map(&mut g).collect();
    let mut value = sum.value() / n as f64;
    loop {
        let next = 2 * n;
        if next > MAX_ANGULAR_POINTS {
            return Err(Error::NonConvergence {
                what: "angular rule",
                achieved: f64::NAN,
                requested: rel_tol,
            });
        }
        for j in (1..next).step_by(2) {
            let theta = 2.0 * PI * j as f64 / next as f64;
            sum.add(g(C64::new(theta.cos(), theta.sin())));
        }
        let refined = sum.value() / next as f64;
        let error = (refined - value).abs();
        n = next;
        value = refined;
        if !value.is_finite() {
            return Err(Error::NonFinite("circle integral"));
        }
        if error <= rel_tol * value.abs() + abs_tol {
            return Ok(Estimate {
                value,
                error,
                angular_points: n,
                panels: 0,
            });
        }
    }
}

/// `∫_a^1 g(ρ) dρ` with the given rule.
///
/// For [`RadialRule::GaussJacobi`] the integrand is `(1 − ρ)^exponent·g(ρ)`;
/// `g` is the smooth factor only.
pub fn integrate_radial(
    g: impl FnMut(f64) -> f64,
    rule: RadialRule,
    a: f64,
    tol: f64,
) -> Result<Estimate> {
    match rule {
        RadialRule::GaussLegendre { panels, points } => {
            integrate_radial_factored(g, 0.0, a, panels, points, tol)
        }
        RadialRule::GaussJacobi { exponent, points } => {
            integrate_radial_factored(g, exponent, a, 1, points, tol)
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    /// Rule value on the whole panel.
    coarse: f64,
    left: f64,
    right: f64,
}

impl Panel {
    fn fine(&self) -> f64 {
        self.left + self.right
    }

    fn error(&self) -> f64 {
        (self.coarse - self.fine()).abs()
    }
}

struct PanelRules {
    legendre: GaussRule,
    jacobi: GaussRule,
    exponent: f64,
}

impl PanelRules {
    fn apply(&self, g: &mut impl FnMut(f64) -> f64, lo: f64, hi: f64) -> f64 {
        let half = 0.5 * (hi - lo);
        if hi >= 1.0 {
            // (1 − ρ)^e = (half·(1 − x))^e on the panel.
            let scale = half.powf(self.exponent + 1.0);
            let acc: Compensated = self
                .jacobi
                .nodes
                .iter()
                .zip(&self.jacobi.weights)
                .map(|(x, w)| w * g(lo + half * (1.0 + x)))
                .collect();
            scale * acc.value()
        } else {
            let e = self.exponent;
            let acc: Compensated = self
                .legendre
                .nodes
                .iter()
                .zip(&self.legendre.weights)
                .map(|(x, w)| {
                    let rho = lo + half * (1.0 + x);
                    let factor = if e == 0.0 { 1.0 } else { (1.0 - rho).powf(e) };
                    w * factor * g(rho)
                })
                .collect();
            half * acc.value()
        }
    }

    fn panel(&self, g: &mut impl FnMut(f64) -> f64, lo: f64, hi: f64, coarse: Option<f64>) -> Panel {
        let mid = 0.5 * (lo + hi);
        let coarse = coarse.unwrap_or_else(|| self.apply(g, lo, hi));
        Panel {
            lo,
            hi,
            coarse,
            left: self.apply(g, lo, mid),
            right: self.apply(g, mid, hi),
        }
    }
}

/// Adaptive `∫_a^1 (1 − ρ)^exponent g(ρ) dρ` starting from `initial_panels`
/// dyadic panels with `points`-point rules.
pub fn integrate_radial_factored(
    mut g: impl FnMut(f64) -> f64,
    exponent: f64,
    a: f64,
    initial_panels: usize,
    points: usize,
    tol: f64,
) -> Result<Estimate> {
    if !(0.0..1.0).contains(&a) {
        return Err(invalid!("radial lower limit must lie in [0, 1), got {a}"));
    }
    if !(exponent > -1.0) {
        return Err(invalid!("endpoint exponent must exceed −1, got {exponent}"));
    }
    let legendre = gauss_legendre(points)?;
    let jacobi = if exponent == 0.0 {
        legendre.clone()
    } else {
        gauss_jacobi(points, exponent, 0.0)?
    };
    let rules = PanelRules {
        legendre,
        jacobi,
        exponent,
    };

    let mut breaks = vec![a];
    for i in 1..initial_panels.max(1) {
        breaks.push(a + (1.0 - a) * (1.0 - (-(i as f64)).exp2()));
    }
    breaks.push(1.0);
    let mut panels: Vec<Panel> = breaks
        .windows(2)
        .map(|w| rules.panel(&mut g, w[0], w[1], None))
        .collect();

    loop {
        let value: Compensated = panels.iter().map(Panel::fine).collect();
        let value = value.value();
        let error: f64 = panels.iter().map(Panel::error).sum();
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::NonFinite("radial integral"));
        }
        if error <= tol * value.abs() || error == 0.0 {
            return Ok(Estimate {
                value,
                error,
                angular_points: 0,
                panels: panels.len(),
            });
        }
        if panels.len() >= MAX_PANELS {
            return Err(Error::NonConvergence {
                what: "radial rule",
                achieved: error / value.abs(),
                requested: tol,
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error().total_cmp(&b.1.error()))
            .expect("at least one panel");
        let p = panels[worst];
        let mid = 0.5 * (p.lo + p.hi);
        if !(mid > p.lo && mid < p.hi) {
            return Err(Error::NonConvergence {
                what: "radial rule (panel underflow)",
                achieved: error / value.abs(),
                requested: tol,
            });
        }
        let left = rules.panel(&mut g, p.lo, mid, Some(p.left));
        let right = rules.panel(&mut g, mid, p.hi, Some(p.right));
        panels[worst] = left;
        panels.insert(worst + 1, right);
    }
}

/// Chooses the angular grid for integrands on circles `|z| = ρ ≤ 1` by
/// doubling on the unit circle, where they are least smooth.
pub fn boundary_angular_points(
    mut g: impl FnMut(C64) -> f64,
    spec: &QuadratureSpec,
) -> Result<usize> {
    let est = integrate_circle_adaptive(&mut g, spec.angular_points, spec.tolerance * 1e-2, 0.0)?;
    Ok(est.angular_points)
}

/// `∫_α^1 w(ρ) [∫_𝕋 F(ρζ) dm(ζ)] dρ`.
///
/// The angular grid is fixed once on the unit circle. For power weights with
/// `β < 0` the factor `(1 − ρ)^β` is integrated by Gauss–Jacobi.
pub fn integrate_annulus(
    mut integrand: impl FnMut(C64) -> f64,
    w: &RadialWeight,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    spec.validate()?;
    let n = boundary_angular_points(&mut integrand, spec)?;
    let nodes = roots_of_unity(n);
    let mut circle_mean = |rho: f64| {
        let acc: Compensated = nodes.iter().map(|z| integrand(z * rho)).collect();
        acc.value() / n as f64
    };
    let (exponent, smooth) = w.endpoint_split();
    let (exponent, panels, points) = match spec.radial_rule {
        RadialRule::GaussLegendre { panels, points } => (exponent, panels, points),
        RadialRule::GaussJacobi { exponent: e, points } => {
            if let Some(beta) = w.beta() {
                if (beta - e).abs() > 1e-14 {
                    return Err(invalid!(
                        "Gauss–Jacobi exponent {e} does not match the weight exponent {beta}"
                    ));
                }
            }
            (exponent, 1, points)
        }
    };
    let mut est = integrate_radial_factored(
        |rho| smooth(rho) * circle_mean(rho),
        exponent,
        spec.annulus_alpha,
        panels,
        points,
        spec.tolerance,
    )?;
    est.angular_points = n;
    Ok(est)
}
