//! Rational functions analytic on the closed unit disc.
//!
//! A [`RationalFunction`] is stored in partial-fraction form
//!
//! ```text
//! f(z) = Σ_k c_k z^k + Σ_j Σ_{m=1}^{m_j} a_{j,m} (1 − z/ζ_j)^{−m}
//! ```
//!
//! with every pole `|ζ_j| > 1`. The polynomial part is usually just the
//! constant `c_0`; higher monomials represent the `r = 0` class (polynomials)
//! behind the same operations. Derivatives, Taylor coefficients and dilations
//! are exact term-wise.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;
use num_traits::Zero;

use crate::error::{invalid, Error, Result};

/// Distinct poles closer than this are rejected.
pub const MIN_POLE_SEPARATION: f64 = 1e-9;

/// Relative pole-proximity guard used by [`RationalFunction::eval`].
pub const POLE_GUARD: f64 = 1e-12;

/// One pole `ζ` together with the coefficients of `(1 − z/ζ)^{−k}`, `k = 1..=m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleTerm {
    pole: C64,
    coeffs: Vec<C64>,
}

impl PoleTerm {
    pub fn new(pole: C64, coeffs: Vec<C64>) -> Result<Self> {
        let modulus = pole.norm();
        if !(modulus > 1.0) || !modulus.is_finite() {
            return Err(Error::PoleInsideDisc {
                pole_re: pole.re,
                pole_im: pole.im,
                modulus,
            });
        }
        if coeffs.is_empty() {
            return Err(invalid!("pole term needs at least one coefficient"));
        }
        Ok(PoleTerm { pole, coeffs })
    }

    pub fn pole(&self) -> C64 {
        self.pole
    }

    pub fn multiplicity(&self) -> usize {
        self.coeffs.len()
    }

    /// `a_k` for `k = 1..=m` (index 0 holds `a_1`).
    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    fn eval_unchecked(&self, z: C64) -> C64 {
        let inv = (C64::new(1.0, 0.0) - z / self.pole).inv();
        let mut acc = C64::zero();
        for a in self.coeffs.iter().rev() {
            acc = (acc + a) * inv;
        }
        acc
    }
}

/// A rational function with all poles strictly outside the closed unit disc.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RationalFunction {
    /// Monomial coefficients; index 0 is the constant term.
    poly: Vec<C64>,
    terms: Vec<PoleTerm>,
}

impl RationalFunction {
    /// Builds `c₀ + Σ terms`, rejecting (near-)coincident poles.
    pub fn new(constant: C64, terms: Vec<PoleTerm>) -> Result<Self> {
        Self::with_polynomial(vec![constant], terms)
    }

    /// Builds `Σ poly[k] z^k + Σ terms`.
    pub fn with_polynomial(poly: Vec<C64>, terms: Vec<PoleTerm>) -> Result<Self> {
        for (i, a) in terms.iter().enumerate() {
            for b in &terms[i + 1..] {
                let distance = (a.pole - b.pole).norm();
                if distance < MIN_POLE_SEPARATION {
                    return Err(Error::ConfluentPoles {
                        distance,
                        min_separation: MIN_POLE_SEPARATION,
                    });
                }
            }
        }
        let mut f = RationalFunction { poly, terms };
        f.trim();
        Ok(f)
    }

    pub fn zero() -> Self {
        RationalFunction::default()
    }

    pub fn constant(c: C64) -> Self {
        let mut f = RationalFunction {
            poly: vec![c],
            terms: Vec::new(),
        };
        f.trim();
        f
    }

    /// The polynomial `Σ coeffs[k] z^k`.
    pub fn polynomial(coeffs: Vec<C64>) -> Self {
        let mut f = RationalFunction {
            poly: coeffs,
            terms: Vec::new(),
        };
        f.trim();
        f
    }

    /// `1/(1 − rz)^n`; for `r = 0` this is the constant 1.
    pub fn cauchy_power(r: f64, n: usize) -> Result<Self> {
        if !(0.0..1.0).contains(&r) {
            return Err(invalid!("r must lie in [0, 1), got {r}"));
        }
        if r == 0.0 || n == 0 {
            return Ok(Self::constant(C64::new(1.0, 0.0)));
        }
        let mut coeffs = vec![C64::zero(); n];
        coeffs[n - 1] = C64::new(1.0, 0.0);
        Self::new(
            C64::zero(),
            vec![PoleTerm::new(C64::new(1.0 / r, 0.0), coeffs)?],
        )
    }

    /// Partial fractions of `p(z) / Π_j (1 − z/ζ_j)^{m_j}` for caller-supplied
    /// poles. `numerator` holds the coefficients of `p` in increasing degree.
    pub fn from_numerator_and_poles(numerator: &[C64], poles: &[(C64, usize)]) -> Result<Self> {
        if poles.iter().any(|&(_, m)| m == 0) {
            return Err(invalid!("pole multiplicities must be positive"));
        }
        let mut terms = Vec::with_capacity(poles.len());
        for (j, &(zeta, m)) in poles.iter().enumerate() {
            // z = ζ(1 − u) puts the pole at u = 0; f = u^{−m} P(u)/D(u).
            let shift = [zeta, -zeta];
            let mut numer = vec![C64::zero(); m];
            for &c in numerator.iter().rev() {
                numer = series_mul(&numer, &shift, m);
                numer[0] += c;
            }
            let mut denom = vec![C64::zero(); m];
            denom[0] = C64::new(1.0, 0.0);
            for (i, &(other, mult)) in poles.iter().enumerate() {
                if i == j {
                    continue;
                }
                let q = zeta / other;
                let factor = [C64::new(1.0, 0.0) - q, q];
                for _ in 0..mult {
                    denom = series_mul(&denom, &factor, m);
                }
            }
            let g = series_div(&numer, &denom, m)?;
            let coeffs = (1..=m).map(|k| g[m - k]).collect();
            terms.push(PoleTerm::new(zeta, coeffs)?);
        }

        // Polynomial part: quotient of p by q(z) = Π (1 − z/ζ)^m.
        let mut q = vec![C64::new(1.0, 0.0)];
        for &(zeta, m) in poles {
            let factor = [C64::new(1.0, 0.0), -zeta.inv()];
            for _ in 0..m {
                q = series_mul(&q, &factor, q.len() + 1);
            }
        }
        let poly = poly_quotient(numerator, &q);
        Self::with_polynomial(poly, terms)
    }

    fn trim(&mut self) {
        while self.poly.len() > 1 && self.poly.last().is_some_and(|c| c.is_zero()) {
            self.poly.pop();
        }
        if self.poly.len() == 1 && self.poly[0].is_zero() {
            self.poly.clear();
        }
    }

    pub fn terms(&self) -> &[PoleTerm] {
        &self.terms
    }

    pub fn constant_term(&self) -> C64 {
        self.poly.first().copied().unwrap_or_default()
    }

    /// Coefficients of `z, z², …` of the polynomial part.
    pub fn monomials(&self) -> &[C64] {
        if self.poly.len() > 1 {
            &self.poly[1..]
        } else {
            &[]
        }
    }

    /// Full polynomial part, constant first (empty for the zero polynomial).
    pub fn polynomial_part(&self) -> &[C64] {
        &self.poly
    }

    /// Degree of the polynomial part, `None` when it vanishes.
    pub fn polynomial_degree(&self) -> Option<usize> {
        self.poly.len().checked_sub(1)
    }

    /// Total pole multiplicity `Σ m_j`.
    pub fn pole_degree(&self) -> usize {
        self.terms.iter().map(PoleTerm::multiplicity).sum()
    }

    /// `n` in `R_{n,r}`: pole multiplicity, or `deg + 1` for polynomials.
    pub fn degree(&self) -> usize {
        if self.terms.is_empty() {
            self.polynomial_degree().map_or(0, |d| d + 1)
        } else {
            self.pole_degree() + self.polynomial_degree().unwrap_or(0)
        }
    }

    pub fn min_pole_modulus(&self) -> Option<f64> {
        self.terms
            .iter()
            .map(|t| t.pole.norm())
            .fold(None, |acc, m| Some(acc.map_or(m, |a: f64| a.min(m))))
    }

    /// Smallest `r` such that every pole satisfies `|ζ| ≥ 1/r` (0 without poles).
    pub fn admissible_r(&self) -> f64 {
        self.min_pole_modulus().map_or(0.0, |m| 1.0 / m)
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_empty() && self.terms.iter().all(|t| t.coeffs.iter().all(|c| c.is_zero()))
    }

    /// Evaluates `f(z)`, refusing points within `POLE_GUARD·|ζ|` of a pole.
    pub fn eval(&self, z: C64) -> Result<C64> {
        for t in &self.terms {
            let distance = (z - t.pole).norm();
            if distance < POLE_GUARD * t.pole.norm() {
                return Err(Error::PoleProximity { distance });
            }
        }
        Ok(self.eval_unchecked(z))
    }

    /// Evaluation without the pole guard; meant for points of the closed disc.
    pub fn eval_unchecked(&self, z: C64) -> C64 {
        let mut acc = C64::zero();
        for c in self.poly.iter().rev() {
            acc = acc * z + c;
        }
        for t in &self.terms {
            acc += t.eval_unchecked(z);
        }
        acc
    }

    pub fn derivative(&self) -> RationalFunction {
        let poly = self
            .poly
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * k as f64)
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let inv = t.pole.inv();
                let mut coeffs = Vec::with_capacity(t.coeffs.len() + 1);
                coeffs.push(C64::zero());
                for (k, a) in t.coeffs.iter().enumerate() {
                    coeffs.push(a * inv * (k + 1) as f64);
                }
                PoleTerm {
                    pole: t.pole,
                    coeffs,
                }
            })
            .collect();
        let mut f = RationalFunction { poly, terms };
        f.trim();
        f
    }

    /// `f̂(0), …, f̂(K)`.
    pub fn taylor_coeffs(&self, max_index: usize) -> Vec<C64> {
        self.taylor().take(max_index + 1).collect()
    }

    /// Lazy Taylor expansion with magnitude envelopes for tail bounds.
    pub fn taylor(&self) -> TaylorSeries<'_> {
        TaylorSeries::new(self)
    }

    /// `z ↦ f(ρz)`; poles move to `ζ/ρ`, pole coefficients are unchanged.
    pub fn dilate(&self, rho: f64) -> Result<RationalFunction> {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(invalid!("dilation factor must lie in (0, 1], got {rho}"));
        }
        let mut scale = 1.0;
        let poly = self
            .poly
            .iter()
            .map(|c| {
                let v = c * scale;
                scale *= rho;
                v
            })
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|t| PoleTerm {
                pole: t.pole / rho,
                coeffs: t.coeffs.clone(),
            })
            .collect();
        Ok(RationalFunction { poly, terms })
    }

    /// `z ↦ f(e^{iθ} z)`.
    pub fn rotate(&self, theta: f64) -> RationalFunction {
        let w = C64::from_polar(1.0, theta);
        let mut scale = C64::new(1.0, 0.0);
        let poly = self
            .poly
            .iter()
            .map(|c| {
                let v = c * scale;
                scale *= w;
                v
            })
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|t| PoleTerm {
                pole: t.pole / w,
                coeffs: t.coeffs.clone(),
            })
            .collect();
        RationalFunction { poly, terms }
    }

    pub fn scale(&self, c: C64) -> RationalFunction {
        let mut f = RationalFunction {
            poly: self.poly.iter().map(|a| a * c).collect(),
            terms: self
                .terms
                .iter()
                .map(|t| PoleTerm {
                    pole: t.pole,
                    coeffs: t.coeffs.iter().map(|a| a * c).collect(),
                })
                .collect(),
        };
        f.trim();
        f
    }

    /// Sum of two functions; equal poles are merged.
    pub fn add(&self, other: &RationalFunction) -> Result<RationalFunction> {
        let len = self.poly.len().max(other.poly.len());
        let poly = (0..len)
            .map(|k| {
                self.poly.get(k).copied().unwrap_or_default()
                    + other.poly.get(k).copied().unwrap_or_default()
            })
            .collect();
        let mut terms = self.terms.clone();
        for t in &other.terms {
            if let Some(existing) = terms.iter_mut().find(|e| e.pole == t.pole) {
                if existing.coeffs.len() < t.coeffs.len() {
                    existing.coeffs.resize(t.coeffs.len(), C64::zero());
                }
                for (a, b) in existing.coeffs.iter_mut().zip(&t.coeffs) {
                    *a += b;
                }
            } else {
                terms.push(t.clone());
            }
        }
        Self::with_polynomial(poly, terms)
    }

    /// Strict membership in `R_{n,r}`: proper fraction of degree `≤ n` with
    /// poles of modulus `≥ 1/r`. For `r = 0` the class is `P_{n−1}`.
    pub fn membership(&self, n: usize, r: f64) -> bool {
        if r == 0.0 {
            return self.terms.is_empty() && self.polynomial_degree().is_none_or(|d| d < n);
        }
        self.poly.is_empty() && self.membership_extended(n, r)
    }

    /// Membership allowing a nonzero constant term (the class containing
    /// finite Blaschke products `b_r^n`).
    pub fn membership_extended(&self, n: usize, r: f64) -> bool {
        if r == 0.0 {
            return self.membership(n, r);
        }
        if self.polynomial_degree().is_some_and(|d| d > 0) {
            return false;
        }
        let bound = 1.0 / r;
        self.pole_degree() <= n && self.terms.iter().all(|t| t.pole.norm() >= bound * (1.0 - 1e-15))
    }
}

/// Iterator over Taylor coefficients `f̂(k)`.
///
/// Each pole term contributes `a·binom(k+m−1, m−1)·ζ^{−k}`, updated by the
/// ratio `(k+m)/(k+1)·ζ^{−1}`. Besides the coefficient, the iterator tracks
/// the envelope `e(k) = Σ |contributions|`, which dominates `|f̂(k)|` beyond
/// the polynomial part and decays at least geometrically with ratio
/// [`TaylorSeries::decay_ratio`].
#[derive(Debug, Clone)]
pub struct TaylorSeries<'a> {
    f: &'a RationalFunction,
    /// (inverse pole, multiplicity index m ≥ 1, current contribution)
    states: Vec<(C64, usize, C64)>,
    index: usize,
    envelope: f64,
    max_inv_modulus: f64,
    max_multiplicity: usize,
}

impl<'a> TaylorSeries<'a> {
    fn new(f: &'a RationalFunction) -> Self {
        let mut states = Vec::new();
        let mut max_inv_modulus = 0.0f64;
        let mut max_multiplicity = 0;
        for t in &f.terms {
            let inv = t.pole.inv();
            max_inv_modulus = max_inv_modulus.max(inv.norm());
            max_multiplicity = max_multiplicity.max(t.multiplicity());
            for (k, a) in t.coeffs.iter().enumerate() {
                if !a.is_zero() {
                    states.push((inv, k + 1, *a));
                }
            }
        }
        TaylorSeries {
            f,
            states,
            index: 0,
            envelope: 0.0,
            max_inv_modulus,
            max_multiplicity,
        }
    }

    /// Envelope `e(k)` of the most recently returned coefficient.
    pub fn envelope(&self) -> f64 {
        self.envelope
    }

    /// Upper bound on `e(k+1)/e(k)` valid for all later indices, given that
    /// the last returned index is `k`.
    pub fn decay_ratio(&self) -> f64 {
        let k = self.index.saturating_sub(1) as f64;
        let m = self.max_multiplicity.max(1) as f64;
        self.max_inv_modulus * (k + m) / (k + 1.0)
    }

    /// Whether the polynomial part has been passed, so that the envelope
    /// bounds every remaining coefficient.
    pub fn past_polynomial(&self) -> bool {
        self.index >= self.f.poly.len()
    }
}

impl Iterator for TaylorSeries<'_> {
    type Item = C64;

    fn next(&mut self) -> Option<C64> {
        let k = self.index;
        let mut value = self.f.poly.get(k).copied().unwrap_or_default();
        let mut envelope = 0.0;
        for (inv, m, c) in &mut self.states {
            if k > 0 {
                *c *= *inv * ((k - 1 + *m) as f64 / k as f64);
            }
            value += *c;
            envelope += c.norm();
        }
        self.envelope = envelope;
        self.index += 1;
        Some(value)
    }
}

/// Sum `Σ_k |f̂(k)|²·weight(k)` with a rigorous tail bound.
///
/// `weight` must be positive and nonincreasing in `k`. Summation stops when
/// the bound on the remaining tail is below `tail_tol·min(1, partial sum)`.
/// Returns `(partial sum, tail bound, number of terms)`.
pub fn weighted_square_sum(
    f: &RationalFunction,
    mut weight: impl FnMut(usize) -> f64,
    tail_tol: f64,
) -> Result<(f64, f64, usize)> {
    const MAX_TERMS: usize = 50_000_000;
    let mut series = f.taylor();
    let mut acc = crate::sum::Compensated::default();
    let mut k = 0;
    loop {
        let c = series.next().unwrap_or_default();
        let wk = weight(k);
        acc.add(c.norm_sqr() * wk);
        k += 1;
        if !acc.value().is_finite() {
            return Err(Error::NonFinite("Taylor coefficient sum"));
        }
        if series.past_polynomial() {
            let q = series.decay_ratio();
            if q < 1.0 {
                let e = series.envelope();
                let tail = e * e * weight(k) * q * q / (1.0 - q * q);
                let sum = acc.value();
                if tail <= tail_tol * sum.min(1.0) || e == 0.0 {
                    return Ok((sum, tail, k));
                }
            }
        }
        if k >= MAX_TERMS {
            return Err(Error::NonConvergence {
                what: "Taylor series",
                achieved: f64::NAN,
                requested: tail_tol,
            });
        }
    }
}

/// A finite Blaschke product `Π (λ − z)/(1 − λ̄z)` with multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeProduct {
    zeros: Vec<(C64, usize)>,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<(C64, usize)>) -> Result<Self> {
        for &(lambda, _) in &zeros {
            let modulus = lambda.norm();
            if !(modulus < 1.0) {
                return Err(Error::ZeroOutsideDisc { modulus });
            }
        }
        Ok(BlaschkeProduct {
            zeros: zeros.into_iter().filter(|&(_, m)| m > 0).collect(),
        })
    }

    pub fn zeros(&self) -> &[(C64, usize)] {
        &self.zeros
    }

    pub fn order(&self) -> usize {
        self.zeros.iter().map(|&(_, m)| m).sum()
    }

    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = C64::new(1.0, 0.0);
        for &(lambda, m) in &self.zeros {
            let b = (lambda - z) / (C64::new(1.0, 0.0) - lambda.conj() * z);
            acc *= b.powu(m as u32);
        }
        acc
    }

    /// Expansion into partial fractions (poles at `1/λ̄`).
    pub fn to_rational(&self) -> Result<RationalFunction> {
        let mut numerator = vec![C64::new(1.0, 0.0)];
        let mut poles = Vec::new();
        for &(lambda, m) in &self.zeros {
            let factor = [lambda, C64::new(-1.0, 0.0)];
            for _ in 0..m {
                numerator = series_mul(&numerator, &factor, numerator.len() + 1);
            }
            if !lambda.is_zero() {
                poles.push((lambda.conj().inv(), m));
            }
        }
        RationalFunction::from_numerator_and_poles(&numerator, &poles)
    }
}

/// `b_r^n = ((r − z)/(1 − rz))^n` in partial fractions.
///
/// With `u = 1 − rz`, `b_r = (1 − (1 − r²)/u)/r`, so
/// `b_r^n = r^{−n} Σ_k binom(n,k) (−(1 − r²))^k u^{−k}`. For `r = 0` the
/// result is the monomial `(−z)^n`. The constant term `r^{−n}` cancels
/// against the pole part on the circle, so accuracy degrades like `r^{−n}·ε`
/// for small `r`.
pub fn blaschke_power(r: f64, n: usize) -> Result<RationalFunction> {
    if !(0.0..1.0).contains(&r) {
        return Err(invalid!("r must lie in [0, 1), got {r}"));
    }
    if n == 0 {
        return Ok(RationalFunction::constant(C64::new(1.0, 0.0)));
    }
    if r == 0.0 {
        let mut coeffs = vec![C64::zero(); n + 1];
        coeffs[n] = C64::new(if n % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
        return Ok(RationalFunction::polynomial(coeffs));
    }
    let lead = r.powi(-(n as i32));
    let step = -(1.0 - r * r);
    let mut binom = 1.0;
    let mut power = 1.0;
    let mut coeffs = Vec::with_capacity(n);
    for k in 1..=n {
        binom *= (n + 1 - k) as f64 / k as f64;
        power *= step;
        coeffs.push(C64::new(lead * binom * power, 0.0));
    }
    RationalFunction::new(
        C64::new(lead, 0.0),
        vec![PoleTerm::new(C64::new(1.0 / r, 0.0), coeffs)?],
    )
}

/// Truncated product of two power series.
fn series_mul(a: &[C64], b: &[C64], len: usize) -> Vec<C64> {
    let mut out = vec![C64::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Truncated quotient of two power series, `b[0] ≠ 0`.
fn series_div(a: &[C64], b: &[C64], len: usize) -> Result<Vec<C64>> {
    if b.first().is_none_or(|b0| b0.norm() == 0.0) {
        return Err(invalid!("series division by a series vanishing at the origin"));
    }
    let inv0 = b[0].inv();
    let mut out = vec![C64::zero(); len];
    for k in 0..len {
        let mut s = a.get(k).copied().unwrap_or_default();
        for j in 1..=k.min(b.len() - 1) {
            s -= b[j] * out[k - j];
        }
        out[k] = s * inv0;
    }
    Ok(out)
}

/// Quotient of polynomial long division `p / q` (coefficients ascending).
fn poly_quotient(p: &[C64], q: &[C64]) -> Vec<C64> {
    let mut q_deg = q.len() - 1;
    while q_deg > 0 && q[q_deg].is_zero() {
        q_deg -= 1;
    }
    let mut p_deg = match p.iter().rposition(|c| !c.is_zero()) {
        Some(d) => d,
        None => return Vec::new(),
    };
    if p_deg < q_deg {
        return Vec::new();
    }
    let mut rem = p[..=p_deg].to_vec();
    let mut quot = vec![C64::zero(); p_deg - q_deg + 1];
    let lead = q[q_deg].inv();
    while p_deg >= q_deg {
        let c = rem[p_deg] * lead;
        let shift = p_deg - q_deg;
        quot[shift] = c;
        for (i, qc) in q[..=q_deg].iter().enumerate() {
            rem[shift + i] -= c * qc;
        }
        if p_deg == 0 {
            break;
        }
        p_deg -= 1;
    }
    quot
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use core::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sample_points() -> Vec<C64> {
        (0..10)
            .map(|j| C64::from_polar(0.05 + 0.09 * j as f64, 0.7 * j as f64 + 0.3))
            .collect()
    }

    #[test]
    fn cauchy_kernel_values() {
        let f = RationalFunction::cauchy_power(0.5, 1).unwrap();
        assert_relative_eq!(f.eval(c(0.0, 0.0)).unwrap().re, 1.0);
        assert_relative_eq!(f.eval(c(1.0, 0.0)).unwrap().re, 2.0);
        let k = RationalFunction::constant(c(3.0, 0.0));
        assert_eq!(k.eval(c(0.3, -0.2)).unwrap(), c(3.0, 0.0));
    }

    #[test]
    fn eval_guards_poles() {
        let f = RationalFunction::cauchy_power(0.5, 2).unwrap();
        assert!(matches!(
            f.eval(c(2.0, 0.0)),
            Err(Error::PoleProximity { .. })
        ));
        assert!(f.eval(c(1.999, 0.0)).is_ok());
    }

    #[test]
    fn construction_rejects_bad_poles() {
        assert!(PoleTerm::new(c(0.5, 0.0), vec![c(1.0, 0.0)]).is_err());
        assert!(PoleTerm::new(c(1.0, 0.0), vec![c(1.0, 0.0)]).is_err());
        assert!(PoleTerm::new(c(2.0, 0.0), vec![]).is_err());
        let a = PoleTerm::new(c(2.0, 0.0), vec![c(1.0, 0.0)]).unwrap();
        let b = PoleTerm::new(c(2.0 + 1e-10, 0.0), vec![c(1.0, 0.0)]).unwrap();
        assert!(matches!(
            RationalFunction::new(C64::zero(), vec![a, b]),
            Err(Error::ConfluentPoles { .. })
        ));
    }

    #[test]
    fn derivative_examples() {
        let r = 0.6;
        let d = RationalFunction::cauchy_power(r, 1).unwrap().derivative();
        for z in sample_points() {
            let expected = r / ((c(1.0, 0.0) - z * r) * (c(1.0, 0.0) - z * r));
            assert_relative_eq!((d.eval(z).unwrap() - expected).norm(), 0.0, epsilon = 1e-13);
        }
        assert!(RationalFunction::constant(c(4.0, 1.0)).derivative().is_zero());

        let n = 5;
        let d = RationalFunction::cauchy_power(r, n).unwrap().derivative();
        for z in sample_points() {
            let expected = (c(1.0, 0.0) - z * r).powi(-(n as i32) - 1) * (n as f64 * r);
            assert!((d.eval(z).unwrap() - expected).norm() < 1e-12 * expected.norm());
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let f = RationalFunction::from_numerator_and_poles(
            &[c(1.0, 0.5), c(-0.3, 0.0)],
            &[(c(1.5, 0.4), 2), (c(-0.2, -1.8), 1)],
        )
        .unwrap();
        let d = f.derivative();
        let h = 1e-5;
        for z in sample_points() {
            let fd = (f.eval(z + h).unwrap() - f.eval(z - h).unwrap()) / (2.0 * h);
            assert!((fd - d.eval(z).unwrap()).norm() < 1e-6 * (1.0 + fd.norm()));
        }
    }

    #[test]
    fn taylor_examples() {
        let r = 0.7;
        let t = RationalFunction::cauchy_power(r, 1).unwrap().taylor_coeffs(20);
        for (k, v) in t.iter().enumerate() {
            assert_relative_eq!(v.re, r.powi(k as i32), max_relative = 1e-14);
        }
        let t = RationalFunction::cauchy_power(r, 2).unwrap().taylor_coeffs(20);
        for (k, v) in t.iter().enumerate() {
            assert_relative_eq!(v.re, (k + 1) as f64 * r.powi(k as i32), max_relative = 1e-13);
        }
        let t = RationalFunction::constant(c(5.0, 0.0)).taylor_coeffs(3);
        assert_eq!(t, vec![c(5.0, 0.0), C64::zero(), C64::zero(), C64::zero()]);
    }

    #[test]
    fn taylor_second_order_against_finite_differences() {
        // f̂(2) = f''(0)/2 via a centred difference on a small circle.
        let f = RationalFunction::cauchy_power(0.4, 2).unwrap();
        let coeffs = f.taylor_coeffs(4);
        let m = 64;
        let rad = 0.3;
        for (k, ck) in coeffs.iter().enumerate() {
            let mut acc = C64::zero();
            for j in 0..m {
                let w = C64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64);
                acc += f.eval(w * rad).unwrap() * w.powi(-(k as i32));
            }
            let est = acc / (m as f64 * rad.powi(k as i32));
            assert!((est - ck).norm() < 1e-12);
        }
    }

    #[test]
    fn dilation_examples() {
        let r = 0.8;
        let rho = 0.6;
        let f = RationalFunction::cauchy_power(r, 1).unwrap();
        let g = f.dilate(rho).unwrap();
        let expected = RationalFunction::cauchy_power(r * rho, 1).unwrap();
        for z in sample_points() {
            assert!((g.eval(z).unwrap() - expected.eval(z).unwrap()).norm() < 1e-14);
            assert!((g.eval(z).unwrap() - f.eval(z * rho).unwrap()).norm() < 1e-14);
        }
        assert_eq!(f.dilate(1.0).unwrap(), f);
        assert!(f.dilate(0.0).is_err());
        assert!(f.membership(1, r) && g.membership(1, r * rho));
    }

    #[test]
    fn membership_examples() {
        let f = RationalFunction::cauchy_power(0.5, 1).unwrap();
        assert!(f.membership(1, 0.5));
        let pure = RationalFunction::new(
            C64::zero(),
            vec![PoleTerm::new(c(2.0, 0.0), vec![c(1.0, 0.0)]).unwrap()],
        )
        .unwrap();
        assert!(pure.membership(1, 0.5));
        assert!(!pure.membership(1, 0.4));
        let b = blaschke_power(0.6, 3).unwrap();
        assert!(!b.membership(3, 0.6));
        assert!(b.membership_extended(3, 0.6));
        let p = RationalFunction::polynomial(vec![c(1.0, 0.0), c(2.0, 0.0)]);
        assert!(p.membership(2, 0.0));
        assert!(!p.membership(1, 0.0));
        assert!(!p.membership(2, 0.5));
    }

    #[test]
    fn blaschke_power_examples() {
        let r = 0.55;
        let b1 = blaschke_power(r, 1).unwrap();
        for z in sample_points() {
            let expected = (c(r, 0.0) - z) / (c(1.0, 0.0) - z * r);
            assert!((b1.eval(z).unwrap() - expected).norm() < 1e-13);
        }
        assert!(b1.eval(c(r, 0.0)).unwrap().norm() < 1e-14);

        let b = blaschke_power(0.7, 5).unwrap();
        for j in 0..64 {
            let z = C64::from_polar(1.0, 2.0 * PI * j as f64 / 64.0);
            assert!((b.eval(z).unwrap().norm() - 1.0).abs() < 1e-10);
        }

        let b0 = blaschke_power(0.0, 3).unwrap();
        assert_eq!(b0.eval(c(0.5, 0.0)).unwrap(), c(-0.125, 0.0));
    }

    #[test]
    fn blaschke_expansions_agree() {
        let bp = BlaschkeProduct::new(vec![(c(0.7, 0.0), 4)]).unwrap();
        let general = bp.to_rational().unwrap();
        let closed = blaschke_power(0.7, 4).unwrap();
        for z in sample_points() {
            assert!((general.eval(z).unwrap() - closed.eval(z).unwrap()).norm() < 1e-10);
            assert!((general.eval(z).unwrap() - bp.eval(z)).norm() < 1e-10);
        }

        let mixed = BlaschkeProduct::new(vec![
            (c(0.3, 0.4), 2),
            (c(-0.5, 0.1), 1),
            (C64::zero(), 1),
        ])
        .unwrap();
        let f = mixed.to_rational().unwrap();
        for j in 0..32 {
            let z = C64::from_polar(1.0, 2.0 * PI * j as f64 / 32.0);
            assert!((f.eval(z).unwrap().norm() - 1.0).abs() < 1e-12);
            assert!((f.eval(z).unwrap() - mixed.eval(z)).norm() < 1e-12);
        }
        assert!(BlaschkeProduct::new(vec![(c(1.0, 0.0), 1)]).is_err());
    }

    #[test]
    fn partial_fractions_from_quotient() {
        // (1 + 2z + 3z² + z³) / ((1 − z/2)(1 − z/(3i))²) has a linear polynomial part.
        let numer = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(1.0, 0.0)];
        let poles = [(c(2.0, 0.0), 1), (c(0.0, 3.0), 2)];
        let f = RationalFunction::from_numerator_and_poles(&numer, &poles).unwrap();
        assert_eq!(f.polynomial_degree(), Some(0));
        for z in sample_points().into_iter().chain([c(0.9, -0.9), c(-1.2, 0.3)]) {
            let p = numer.iter().rev().fold(C64::zero(), |acc, a| acc * z + a);
            let q = (c(1.0, 0.0) - z / poles[0].0) * (c(1.0, 0.0) - z / poles[1].0).powi(2);
            assert!((f.eval(z).unwrap() - p / q).norm() < 1e-12 * (p / q).norm().max(1.0));
        }
    }
}
