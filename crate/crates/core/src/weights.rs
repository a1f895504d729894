//! Radial weights `w(ρ)` on `(0, 1)`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;


use crate::error::{invalid, Error, Result};
use crate::quadrature::{integrate_radial_factored, Estimate};

/// Largest admissible `β` for the power family.
pub const MAX_BETA: f64 = 50.0;

/// Points on the growth validation grid.
pub const GROWTH_GRID: usize = 256;

type WeightFn = dyn Fn(f64) -> f64 + Send + Sync;

/// A radial weight.
#[derive(Clone)]
pub enum RadialWeight {
    /// `w_β(ρ) = (1 − ρ²)^β ρ`.
    Power {
        beta: f64,
        growth: Option<GrowthWitness>,
    },
    /// A user-supplied weight.
    Custom(CustomWeight),
}

/// A weight given by an evaluator, with an optional declared growth witness.
#[derive(Clone)]
pub struct CustomWeight {
    label: String,
    eval: Arc<WeightFn>,
    growth: Option<GrowthWitness>,
}

/// `(γ, r₀)` such that `ρ ↦ (1 − ρ)^{−γ} w(ρ)` is nondecreasing on `[r₀, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthWitness {
    pub gamma: f64,
    pub r0: f64,
}

/// Outcome of [`RadialWeight::validate_growth`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthCheck {
    pub ok: bool,
    /// First grid point where the sampled function decreased.
    pub violation: Option<f64>,
}

impl fmt::Debug for RadialWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadialWeight::Power { beta, growth } => f
                .debug_struct("Power")
                .field("beta", beta)
                .field("growth", growth)
                .finish(),
            RadialWeight::Custom(c) => f
                .debug_struct("Custom")
                .field("label", &c.label)
                .field("growth", &c.growth)
                .finish(),
        }
    }
}

impl RadialWeight {
    /// The power weight `w_β`, `β ∈ (−1, 50]`.
    pub fn power(beta: f64) -> Result<Self> {
        if !(beta > -1.0 && beta <= MAX_BETA) {
            return Err(invalid!("β must lie in (−1, {MAX_BETA}], got {beta}"));
        }
        Ok(RadialWeight::Power { beta, growth: None })
    }

    /// A custom weight. The evaluator is sampled on a validation grid: it must
    /// be nonnegative and have a finite integral. A declared growth witness is
    /// checked with [`RadialWeight::validate_growth`].
    pub fn custom(
        label: impl Into<String>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        growth: Option<GrowthWitness>,
    ) -> Result<Self> {
        let w = RadialWeight::Custom(CustomWeight {
            label: label.into(),
            eval: Arc::new(eval),
            growth,
        });
        for i in 1..GROWTH_GRID {
            let rho = i as f64 / GROWTH_GRID as f64;
            w.eval(rho)?;
        }
        for rho in growth_grid(0.0, GROWTH_GRID) {
            w.eval(rho)?;
        }
        let mass = w.moment(0.0)?;
        if !mass.is_finite() {
            return Err(invalid!("weight is not integrable on (0, 1)"));
        }
        if let Some(g) = growth {
            let check = w.validate_growth(g.gamma, g.r0, GROWTH_GRID)?;
            if let Some(rho) = check.violation {
                return Err(Error::Precondition(format!(
                    "declared growth witness γ = {}, r₀ = {} fails at ρ = {rho}",
                    g.gamma, g.r0
                )));
            }
        }
        Ok(w)
    }

    /// Piecewise-linear weight through `(ρ, w)` samples, constant beyond the
    /// first and last abscissae.
    pub fn tabulated(label: impl Into<String>, mut table: Vec<(f64, f64)>) -> Result<Self> {
        if table.len() < 2 {
            return Err(invalid!("weight table needs at least two rows"));
        }
        table.sort_by(|a, b| a.0.total_cmp(&b.0));
        if table
            .iter()
            .any(|&(rho, v)| !(0.0..=1.0).contains(&rho) || !v.is_finite() || v < 0.0)
        {
            return Err(invalid!("weight table rows must satisfy 0 ≤ ρ ≤ 1 and w ≥ 0"));
        }
        let table: Arc<[(f64, f64)]> = table.into();
        Self::custom(label, move |rho| interpolate(&table, rho), None)
    }

    /// Attaches a growth witness, verifying it on the grid.
    pub fn with_growth(self, witness: GrowthWitness) -> Result<Self> {
        let check = self.validate_growth(witness.gamma, witness.r0, GROWTH_GRID)?;
        if let Some(rho) = check.violation {
            return Err(Error::Precondition(format!(
                "growth witness γ = {}, r₀ = {} fails at ρ = {rho}",
                witness.gamma, witness.r0
            )));
        }
        match self {
            RadialWeight::Power { beta, .. } => Ok(RadialWeight::Power {
                beta,
                growth: Some(witness),
            }),
            RadialWeight::Custom(mut c) => {
                c.growth = Some(witness);
                Ok(RadialWeight::Custom(c))
            }
        }
    }

    /// Explicitly declared growth witness, if any.
    pub fn declared_growth(&self) -> Option<GrowthWitness> {
        match self {
            RadialWeight::Power { growth, .. } => *growth,
            RadialWeight::Custom(c) => c.growth,
        }
    }

    /// Declared witness, or `(β + 1, 0)` for the power family.
    pub fn growth_witness(&self) -> Option<GrowthWitness> {
        match self {
            RadialWeight::Power { beta, growth } => growth.or(Some(GrowthWitness {
                gamma: beta + 1.0,
                r0: 0.0,
            })),
            RadialWeight::Custom(c) => c.growth,
        }
    }

    /// Short descriptor, e.g. `beta:0.5`.
    pub fn label(&self) -> String {
        match self {
            RadialWeight::Power { beta, .. } => format!("beta:{beta}"),
            RadialWeight::Custom(c) => c.label.clone(),
        }
    }

    pub fn beta(&self) -> Option<f64> {
        match self {
            RadialWeight::Power { beta, .. } => Some(*beta),
            RadialWeight::Custom(_) => None,
        }
    }

    /// `w(ρ)` for `ρ ∈ (0, 1)`.
    pub fn eval(&self, rho: f64) -> Result<f64> {
        match self {
            RadialWeight::Power { beta, .. } => Ok((1.0 - rho * rho).powf(*beta) * rho),
            RadialWeight::Custom(c) => {
                let value = (c.eval)(rho);
                if value.is_nan() || value < 0.0 {
                    Err(Error::NegativeWeight { rho, value })
                } else {
                    Ok(value)
                }
            }
        }
    }

    /// Exponent `e` of an endpoint factor `(1 − ρ)^e` split off for
    /// Gauss–Jacobi integration, and the remaining smooth factor.
    pub(crate) fn endpoint_split(&self) -> (f64, impl Fn(f64) -> f64 + '_) {
        let exponent = match self {
            RadialWeight::Power { beta, .. } if *beta < 0.0 => *beta,
            _ => 0.0,
        };
        let smooth = move |rho: f64| match self {
            RadialWeight::Power { beta, .. } if *beta < 0.0 => (1.0 + rho).powf(*beta) * rho,
            RadialWeight::Power { beta, .. } => (1.0 - rho * rho).powf(*beta) * rho,
            RadialWeight::Custom(c) => (c.eval)(rho),
        };
        (exponent, smooth)
    }

    /// `∫₀¹ w(ρ) ρ^s dρ`.
    ///
    /// Closed form `½·B(s/2 + 1, β + 1)` for the power family, adaptive
    /// quadrature otherwise.
    pub fn moment(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(invalid!("moment order must be nonnegative, got {s}"));
        }
        match self {
            RadialWeight::Power { beta, .. } => Ok(0.5 * beta_function(0.5 * s + 1.0, beta + 1.0)),
            RadialWeight::Custom(_) => Ok(self.moment_quadrature(s, MOMENT_TOL)?.value),
        }
    }

    /// `∫₀¹ w(ρ) ρ^s dρ` by quadrature, whatever the weight kind.
    pub fn moment_quadrature(&self, s: f64, tol: f64) -> Result<Estimate> {
        let (exponent, smooth) = self.endpoint_split();
        integrate_radial_factored(|rho| smooth(rho) * rho.powf(s), exponent, 0.0, 8, 32, tol)
    }

    /// Moments `∫ w ρ^{2k}`, `k = 0, 1, …`, computed once and reused.
    pub fn even_moments(&self) -> EvenMoments<'_> {
        EvenMoments {
            weight: self,
            cache: Vec::new(),
        }
    }

    /// Checks that `(1 − ρ)^{−γ} w(ρ)` is nondecreasing on the geometric grid
    /// `ρ_i = 1 − (1 − r₀)·2^{−i/16}`, `i < gridsize`.
    pub fn validate_growth(&self, gamma: f64, r0: f64, gridsize: usize) -> Result<GrowthCheck> {
        if !(0.0..1.0).contains(&r0) {
            return Err(invalid!("r₀ must lie in [0, 1), got {r0}"));
        }
        if gridsize < 2 {
            return Err(invalid!("growth grid needs at least two points"));
        }
        let mut previous: Option<f64> = None;
        for rho in growth_grid(r0, gridsize) {
            let w = if rho == 0.0 { 0.0 } else { self.eval(rho)? };
            let value = (1.0 - rho).powf(-gamma) * w;
            if let Some(prev) = previous {
                if value < prev * (1.0 - 1e-12) {
                    return Ok(GrowthCheck {
                        ok: false,
                        violation: Some(rho),
                    });
                }
            }
            previous = Some(value);
        }
        Ok(GrowthCheck {
            ok: true,
            violation: None,
        })
    }
}

const MOMENT_TOL: f64 = 1e-13;

/// Lazily extended table of even moments.
pub struct EvenMoments<'a> {
    weight: &'a RadialWeight,
    cache: Vec<f64>,
}

impl EvenMoments<'_> {
    /// `∫ w ρ^{2k}`.
    pub fn get(&mut self, k: usize) -> Result<f64> {
        while self.cache.len() <= k {
            let j = self.cache.len();
            let next = match (self.weight, self.cache.last()) {
                // B(a + 1, b) = B(a, b)·a/(a + b) with a = j, b = β + 1.
                (RadialWeight::Power { beta, .. }, Some(&prev)) => {
                    prev * j as f64 / (j as f64 + beta + 1.0)
                }
                _ => self.weight.moment(2.0 * j as f64)?,
            };
            self.cache.push(next);
        }
        Ok(self.cache[k])
    }
}

fn growth_grid(r0: f64, gridsize: usize) -> impl Iterator<Item = f64> {
    (0..gridsize).map(move |i| 1.0 - (1.0 - r0) * (-(i as f64) / 16.0).exp2())
}

fn interpolate(table: &[(f64, f64)], rho: f64) -> f64 {
    let idx = table.partition_point(|&(x, _)| x < rho);
    if idx == 0 {
        return table[0].1;
    }
    if idx == table.len() {
        return table[table.len() - 1].1;
    }
    let (x0, y0) = table[idx - 1];
    let (x1, y1) = table[idx];
    if x1 == x0 {
        return y1;
    }
    y0 + (y1 - y0) * (rho - x0) / (x1 - x0)
}

/// Euler beta function via log-gamma.
pub fn beta_function(a: f64, b: f64) -> f64 {
    (libm::lgamma(a) + libm::lgamma(b) - libm::lgamma(a + b)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn power_weight_values() {
        let w0 = RadialWeight::power(0.0).unwrap();
        let w1 = RadialWeight::power(1.0).unwrap();
        assert_relative_eq!(w0.eval(0.5).unwrap(), 0.5);
        assert_relative_eq!(w1.eval(0.5).unwrap(), 0.375);
        let w2 = RadialWeight::power(2.0).unwrap();
        assert!(w2.eval(1.0 - 1e-8).unwrap() < 1e-15);
        assert!(RadialWeight::power(-1.0).is_err());
        assert!(RadialWeight::power(50.5).is_err());
    }

    #[test]
    fn moments_closed_forms() {
        let w0 = RadialWeight::power(0.0).unwrap();
        for k in 0..6 {
            assert_relative_eq!(
                w0.moment(2.0 * k as f64).unwrap(),
                1.0 / (2.0 * k as f64 + 2.0),
                max_relative = 1e-13
            );
        }
        let w1 = RadialWeight::power(1.0).unwrap();
        assert_relative_eq!(w1.moment(0.0).unwrap(), 0.25, max_relative = 1e-13);
        assert!(w1.moment(-1.0).is_err());
    }

    #[test]
    fn moments_decrease_and_are_log_convex() {
        for beta in [-0.5, 0.0, 1.0, 3.5] {
            let w = RadialWeight::power(beta).unwrap();
            let grid: Vec<f64> = (0..40).map(|i| 0.5 * i as f64).collect();
            let m: Vec<f64> = grid.iter().map(|&s| w.moment(s).unwrap()).collect();
            for i in 1..m.len() {
                assert!(m[i] < m[i - 1]);
            }
            for i in 1..m.len() - 1 {
                assert!(m[i] * m[i] <= m[i - 1] * m[i + 1] * (1.0 + 1e-10));
            }
        }
    }

    #[test]
    fn power_moments_match_quadrature_path() {
        for beta in [-0.5, 0.0, 1.0, 2.5] {
            let w = RadialWeight::power(beta).unwrap();
            // The custom copy cannot carry the endpoint singularity for β < 0.
            let custom = (beta >= 0.0).then(|| {
                RadialWeight::custom("power-copy", move |rho| (1.0 - rho * rho).powf(beta) * rho, None)
                    .unwrap()
            });
            for s in [0.0, 1.0, 4.0, 10.0, 33.0] {
                let exact = w.moment(s).unwrap();
                let quad = w.moment_quadrature(s, 1e-13).unwrap().value;
                assert_relative_eq!(exact, quad, max_relative = 1e-10);
                if let Some(custom) = &custom {
                    assert_relative_eq!(exact, custom.moment(s).unwrap(), max_relative = 1e-10);
                }
            }
        }
    }

    #[test]
    fn even_moment_recurrence_matches_closed_form() {
        let w = RadialWeight::power(1.7).unwrap();
        let mut table = w.even_moments();
        for k in [0, 1, 5, 40, 200] {
            assert_relative_eq!(
                table.get(k).unwrap(),
                w.moment(2.0 * k as f64).unwrap(),
                max_relative = 1e-11
            );
        }
    }

    #[test]
    fn growth_validation_examples() {
        for beta in [-0.5, 0.0, 1.0, 4.0] {
            let w = RadialWeight::power(beta).unwrap();
            let check = w.validate_growth(beta + 1.0, 0.0, GROWTH_GRID).unwrap();
            assert!(check.ok, "β = {beta}");
        }
        let one = RadialWeight::custom("one", |_| 1.0, None).unwrap();
        assert!(one.validate_growth(0.5, 0.0, GROWTH_GRID).unwrap().ok);
        let fast = RadialWeight::custom("fast", |rho| (-1.0 / (1.0 - rho)).exp(), None).unwrap();
        let check = fast.validate_growth(1.0, 0.0, GROWTH_GRID).unwrap();
        assert!(!check.ok);
        assert!(check.violation.is_some());
        assert!(one.validate_growth(1.0, 1.0, GROWTH_GRID).is_err());
    }

    #[test]
    fn custom_weight_validation() {
        assert!(matches!(
            RadialWeight::custom("neg", |rho| rho - 0.5, None),
            Err(Error::NegativeWeight { .. })
        ));
        let bad = RadialWeight::custom(
            "decaying",
            |rho| (-1.0 / (1.0 - rho)).exp(),
            Some(GrowthWitness { gamma: 1.0, r0: 0.0 }),
        );
        assert!(matches!(bad, Err(Error::Precondition(_))));
    }

    #[test]
    fn tabulated_weight_interpolates() {
        let w = RadialWeight::tabulated("t", alloc::vec![(0.0, 0.0), (1.0, 1.0)]).unwrap();
        assert_relative_eq!(w.eval(0.25).unwrap(), 0.25);
        assert_relative_eq!(w.moment(0.0).unwrap(), 0.5, max_relative = 1e-12);
        assert_relative_eq!(w.moment(2.0).unwrap(), 0.25, max_relative = 1e-12);
        assert!(RadialWeight::tabulated("t", alloc::vec![(0.0, 1.0)]).is_err());
        assert!(RadialWeight::tabulated("t", alloc::vec![(0.0, -1.0), (1.0, 1.0)]).is_err());
    }
}
