//! Bernstein ratios `‖f′‖/‖f‖` and estimates of the best constant
//! `C_{n,r}(X) = sup { ‖f′‖_X / ‖f‖_X : f ∈ R_{n,r} }`.
//!
//! Normalized values are `value·(1 − r)/n`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};
use crate::kernel::{ln_i_series, SERIES_TAIL_TOL};
use crate::linalg::{power_iteration, Cholesky, SymMatrix, POWER_MAX_ITER, POWER_TOL};
use crate::norms::{norm, NormResult, SpaceDescriptor};
use crate::quadrature::{integrate_radial_factored, QuadratureSpec};
use crate::rational::{PoleTerm, RationalFunction};
use crate::weights::RadialWeight;

/// Default tail tolerance for the confluent Gram matrices, relative to
/// `trace(G) = n`.
pub const H2_TAIL_TOL: f64 = 1e-14;
/// Largest condition estimate accepted for the Gram matrix.
pub const MAX_CONDITION: f64 = 1e14;
/// Largest `n` accepted by [`limit_check`].
pub const MAX_LIMIT_N: usize = 256;

const EXTREMAL_RADIAL_TOL: f64 = 1e-12;

/// What a [`BernsteinEstimate`] measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateKind {
    SingleFunction,
    ExactConfluentH2,
    SampledUpper,
    ExtremalLower,
}

impl EstimateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimateKind::SingleFunction => "single-function",
            EstimateKind::ExactConfluentH2 => "exact-confluent-H2",
            EstimateKind::SampledUpper => "sampled-upper",
            EstimateKind::ExtremalLower => "extremal-lower",
        }
    }
}

#[derive(Debug, Clone)]
pub struct BernsteinEstimate {
    pub n: usize,
    pub r: f64,
    pub space: SpaceDescriptor,
    pub value: f64,
    pub normalized: f64,
    pub error_estimate: f64,
    pub kind: EstimateKind,
}

impl BernsteinEstimate {
    fn new(n: usize, r: f64, space: SpaceDescriptor, value: f64, error: f64, kind: EstimateKind) -> Self {
        BernsteinEstimate {
            n,
            r,
            space,
            value,
            normalized: normalized(value, n, r),
            error_estimate: error,
            kind,
        }
    }
}

/// `value·(1 − r)/n`.
pub fn normalized(value: f64, n: usize, r: f64) -> f64 {
    value * (1.0 - r) / n.max(1) as f64
}

fn check_nr(n: usize, r: f64) -> Result<()> {
    if n == 0 {
        return Err(invalid!("n must be at least 1"));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(invalid!("r must lie in [0, 1), got {r}"));
    }
    Ok(())
}

fn quotient(num: &NormResult, den: &NormResult) -> Result<(f64, f64)> {
    if !(den.value > 0.0) {
        return Err(Error::ZeroNorm);
    }
    let value = num.value / den.value;
    let error = num.error_estimate / den.value + value * den.error_estimate / den.value;
    Ok((value, error))
}

/// `‖f′‖/‖f‖` in `space`; `p = 2` norms use the series path.
pub fn ratio(f: &RationalFunction, space: &SpaceDescriptor, spec: &QuadratureSpec) -> Result<BernsteinEstimate> {
    ratio_with(f, space, spec, true)
}

/// [`ratio`] with an explicit choice between series and quadrature at `p = 2`.
pub fn ratio_with(
    f: &RationalFunction,
    space: &SpaceDescriptor,
    spec: &QuadratureSpec,
    prefer_series: bool,
) -> Result<BernsteinEstimate> {
    let den = norm(f, space, spec, prefer_series)?;
    if !(den.value > 0.0) {
        return Err(Error::ZeroNorm);
    }
    let num = norm(&f.derivative(), space, spec, prefer_series)?;
    let (value, error) = quotient(&num, &den)?;
    Ok(BernsteinEstimate::new(
        f.degree().max(1),
        f.admissible_r(),
        space.clone(),
        value,
        error,
        EstimateKind::SingleFunction,
    ))
}

/// Ratio of the extremal function `1/(1 − rz)^n`, a lower bound for
/// `C_{n,r}(space)`.
///
/// Integer powers of `|1 − rz|` are integrated through the kernel series:
/// `‖(1 − rz)^{−n}‖_{H^p}^p = I(pn, r)`, and the Bergman norm is a radial
/// integral of `I(pn, rρ)`. When the weight carries a declared growth witness
/// `(γ, r₀)` the hypotheses `n > ⌊(γ + 2)/p⌋ + 1` and `r ≥ r₀` are enforced.
pub fn lower_bound_extremal(
    n: usize,
    r: f64,
    space: &SpaceDescriptor,
    _spec: &QuadratureSpec,
) -> Result<BernsteinEstimate> {
    check_nr(n, r)?;
    if r == 0.0 {
        return Err(invalid!("the extremal function needs r ∈ (0, 1)"));
    }
    let nf = n as f64;
    let (value, rel_error) = match space {
        SpaceDescriptor::Hardy { p } if p.is_infinite() => (nf * r / (1.0 - r), 0.0),
        SpaceDescriptor::Hardy { p } => {
            let (ln_num, tail_num, _) = ln_i_series(p * nf + p, r, SERIES_TAIL_TOL)?;
            let (ln_den, tail_den, _) = ln_i_series(p * nf, r, SERIES_TAIL_TOL)?;
            (nf * r * ((ln_num - ln_den) / p).exp(), (tail_num + tail_den) / p)
        }
        SpaceDescriptor::Bergman { p, weight } => {
            if let Some(g) = weight.declared_growth() {
                let threshold = ((g.gamma + 2.0) / p).floor() + 1.0;
                if !(nf > threshold) {
                    return Err(Error::Precondition(format!(
                        "n > ⌊(γ + 2)/p⌋ + 1 fails: n = {n}, γ = {}, p = {p}",
                        g.gamma
                    )));
                }
                if !(r >= g.r0) {
                    return Err(Error::Precondition(format!("r ≥ r₀ fails: r = {r}, r₀ = {}", g.r0)));
                }
            }
            let (ln_num, err_num) = ln_bergman_kernel_integral(weight, p * nf + p, r)?;
            let (ln_den, err_den) = ln_bergman_kernel_integral(weight, p * nf, r)?;
            (nf * r * ((ln_num - ln_den) / p).exp(), (err_num + err_den) / p)
        }
    };
    Ok(BernsteinEstimate::new(
        n,
        r,
        space.clone(),
        value,
        value * rel_error,
        EstimateKind::ExtremalLower,
    ))
}

/// `ln ∫₀¹ w(ρ) I(t, rρ) dρ` and its relative error estimate.
fn ln_bergman_kernel_integral(w: &RadialWeight, t: f64, r: f64) -> Result<(f64, f64)> {
    let (ln_peak, _, _) = ln_i_series(t, r, SERIES_TAIL_TOL)?;
    let (exponent, smooth) = w.endpoint_split();
    let mut failure: Option<Error> = None;
    let est = integrate_radial_factored(
        |rho| match ln_i_series(t, r * rho, SERIES_TAIL_TOL) {
            Ok((ln_i, _, _)) => smooth(rho) * (ln_i - ln_peak).exp(),
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        exponent,
        0.0,
        8,
        32,
        EXTREMAL_RADIAL_TOL,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let est = est?;
    if !(est.value > 0.0) {
        return Err(Error::ZeroNorm);
    }
    Ok((est.value.ln() + ln_peak, est.error / est.value + SERIES_TAIL_TOL))
}

/// Gram matrices of an orthonormal basis of
/// `K = { p(z)/(1 − rz)^n : deg p < n }` and of its derivatives in `H²`.
#[derive(Debug, Clone)]
pub struct ConfluentPencil {
    /// `G_{ij} = ⟨e_i, e_j⟩` from the truncated coefficient sums.
    pub gram: SymMatrix,
    /// `H_{ij} = ⟨e_i′, e_j′⟩`.
    pub derivative_gram: SymMatrix,
    /// Number of Taylor coefficients summed.
    pub terms: usize,
    /// Bound on every omitted entry of `H` (and hence of `G`).
    pub tail_bound: f64,
}

/// Builds the pencil `(H, G)` on the Takenaka–Malmquist basis
/// `e_k = √(1 − r²)(z − r)^k/(1 − rz)^{k+1}`, `k < n`, of `K`. For `r = 0`
/// this is the monomial basis.
///
/// Coefficients are cut off once `Σ_{m>M} m² e_k(m)² ≤ tail_tol·n` for every
/// `k`, using the envelope
/// `|e_k(m)| ≤ √(1 − r²)(1 + r)^k binom(m + k, k) r^m`.
pub fn h2_confluent_pencil(n: usize, r: f64, tail_tol: f64) -> Result<ConfluentPencil> {
    check_nr(n, r)?;
    if !(tail_tol > 0.0) {
        return Err(invalid!("tail tolerance must be positive, got {tail_tol}"));
    }
    let (terms, tail_bound) = if r == 0.0 { (n, 0.0) } else { confluent_cutoff(n, r, tail_tol * n as f64)? };

    // coeffs[k][m] = e_k(m).
    let mut coeffs: Vec<Vec<f64>> = Vec::with_capacity(n);
    let norm0 = (1.0 - r * r).sqrt();
    let mut row: Vec<f64> = (0..terms).map(|m| norm0 * r.powi(m as i32)).collect();
    for _ in 0..n {
        let mut next = vec![0.0; terms];
        let mut prev_v = 0.0;
        let mut prev_x = 0.0;
        for (m, x) in row.iter().enumerate() {
            // Multiply by (z − r), then divide by (1 − rz).
            let y = prev_x - r * x;
            let v = y + r * prev_v;
            next[m] = v;
            prev_v = v;
            prev_x = *x;
        }
        coeffs.push(core::mem::replace(&mut row, next));
    }

    let mut gram = SymMatrix::zeros(n);
    let mut derivative_gram = SymMatrix::zeros(n);
    let mut column = vec![0.0; n];
    for m in 0..terms {
        for (k, c) in coeffs.iter().enumerate() {
            column[k] = c[m];
        }
        gram.rank_one_update(&column, 1.0);
        if m > 0 {
            derivative_gram.rank_one_update(&column, (m * m) as f64);
        }
    }
    gram.symmetrize_from_upper();
    derivative_gram.symmetrize_from_upper();
    Ok(ConfluentPencil {
        gram,
        derivative_gram,
        terms,
        tail_bound,
    })
}

/// Smallest `M` with the envelope tail of `Σ_{m ≥ M} m² e_{n−1}(m)²` below
/// `budget`; the envelope grows with `k`, so `k = n − 1` dominates.
fn confluent_cutoff(n: usize, r: f64, budget: f64) -> Result<(usize, f64)> {
    let k = (n - 1) as f64;
    let ln_scale = (1.0 - r * r).ln() + 2.0 * k * (1.0 + r).ln();
    let ln_r2 = 2.0 * r.ln();
    let mut m = n.max(1);
    loop {
        let mf = m as f64;
        let q = r * r * ((mf + k + 1.0) / mf).powi(2);
        if q < 1.0 {
            let ln_binom = libm::lgamma(mf + k + 1.0) - libm::lgamma(k + 1.0) - libm::lgamma(mf + 1.0);
            // ln T(m) with T(m) = m² E(m)².
            let ln_term = 2.0 * mf.ln() + ln_scale + 2.0 * ln_binom + mf * ln_r2;
            let tail = (ln_term + (q / (1.0 - q)).ln()).exp();
            if tail <= budget {
                // Terms with index < m + 1 are summed.
                return Ok((m + 1, tail));
            }
        }
        m += 1;
        if m > 100_000_000 {
            return Err(Error::NonConvergence {
                what: "confluent Gram cutoff",
                achieved: f64::NAN,
                requested: budget,
            });
        }
    }
}

/// `sup ‖f′‖_{H²}/‖f‖_{H²}` over `f = p(z)/(1 − rz)^n`, `deg p < n`: the
/// square root of the top generalized eigenvalue of `Hx = λGx`, by Cholesky
/// whitening and power iteration. A lower bound for `C_{n,r}(H²)`.
pub fn h2_confluent_operator_norm(n: usize, r: f64, tail_tol: f64) -> Result<BernsteinEstimate> {
    let pencil = h2_confluent_pencil(n, r, tail_tol)?;
    let lambda = pencil_top_eigenvalue(&pencil)?;
    let value = lambda.sqrt();
    let rel = POWER_TOL + pencil.tail_bound / lambda.max(f64::MIN_POSITIVE);
    Ok(BernsteinEstimate::new(
        n,
        r,
        SpaceDescriptor::Hardy { p: 2.0 },
        value,
        0.5 * value * rel,
        EstimateKind::ExactConfluentH2,
    ))
}

/// Largest eigenvalue of `L⁻¹HL⁻ᵀ`, `G = LLᵀ`, by power iteration started
/// from the whitened all-ones vector.
pub fn pencil_top_eigenvalue(pencil: &ConfluentPencil) -> Result<f64> {
    let chol = Cholesky::new(&pencil.gram)?;
    let condition = chol.condition_estimate();
    if condition > MAX_CONDITION {
        return Err(Error::Conditioning { condition });
    }
    let whitened = chol.whiten(&pencil.derivative_gram);
    let start = chol.mul_upper(&vec![1.0; pencil.gram.dim()]);
    Ok(power_iteration(&whitened, &start, POWER_TOL, POWER_MAX_ITER)?.eigenvalue)
}

/// A random member of `R_{n,r}`: `n` simple poles with modulus uniform on
/// `[1/r, 2/r]` and uniform argument, complex Gaussian coefficients. For
/// `r = 0`, a polynomial of degree `< n` with Gaussian coefficients.
pub fn random_member(n: usize, r: f64, rng: &mut impl Rng) -> Result<RationalFunction> {
    check_nr(n, r)?;
    let gaussian = |rng: &mut _| {
        let re: f64 = Rng::sample(rng, StandardNormal);
        let im: f64 = Rng::sample(rng, StandardNormal);
        C64::new(re, im)
    };
    if r == 0.0 {
        let coeffs = (0..n).map(|_| gaussian(&mut *rng)).collect();
        return Ok(RationalFunction::polynomial(coeffs));
    }
    let mut terms = Vec::with_capacity(n);
    for _ in 0..n {
        let modulus = rng.random_range(1.0 / r..=2.0 / r);
        let angle = rng.random_range(0.0..2.0 * PI);
        let coeff = gaussian(&mut *rng);
        terms.push(PoleTerm::new(C64::from_polar(modulus, angle), vec![coeff])?);
    }
    RationalFunction::new(C64::new(0.0, 0.0), terms)
}

/// Generator for sample `index`; sample sets for growing counts are nested.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Maximum ratio over `samples` random members of `R_{n,r}`.
pub fn sampled_upper(
    n: usize,
    r: f64,
    space: &SpaceDescriptor,
    samples: usize,
    seed: u64,
    spec: &QuadratureSpec,
) -> Result<BernsteinEstimate> {
    check_nr(n, r)?;
    if samples == 0 {
        return Err(invalid!("samples must be at least 1"));
    }
    let mut best: Option<(f64, f64)> = None;
    for i in 0..samples {
        let f = random_member(n, r, &mut sample_rng(seed, i as u64))?;
        let est = ratio(&f, space, spec)?;
        if best.is_none_or(|(v, _)| est.value > v) {
            best = Some((est.value, est.error_estimate));
        }
    }
    let (value, error) = best.expect("at least one sample");
    Ok(BernsteinEstimate::new(n, r, space.clone(), value, error, EstimateKind::SampledUpper))
}

/// What each sweep cell computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    Lower,
    Sampled { samples: usize, seed: u64 },
    ExactH2,
}

/// One `(n, r)` cell; `index` is its position in `(r, n)` order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCell {
    pub index: usize,
    pub n: usize,
    pub r: f64,
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub n: usize,
    pub r: f64,
    pub outcome: core::result::Result<BernsteinEstimate, Error>,
}

/// Cartesian product of the lists, sorted by `(r, n)`.
pub fn sweep_cells(n_list: &[usize], r_list: &[f64]) -> Result<Vec<SweepCell>> {
    if n_list.is_empty() || r_list.is_empty() {
        return Err(invalid!("sweep lists must be nonempty"));
    }
    let mut pairs: Vec<(f64, usize)> = r_list
        .iter()
        .flat_map(|&r| n_list.iter().map(move |&n| (r, n)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(pairs
        .into_iter()
        .enumerate()
        .map(|(index, (r, n))| SweepCell { index, n, r })
        .collect())
}

/// Evaluates one cell. Sampled cells use seed `seed ⊕ index`.
pub fn sweep_cell(
    cell: SweepCell,
    space: &SpaceDescriptor,
    mode: SweepMode,
    spec: &QuadratureSpec,
) -> SweepRow {
    let outcome = match mode {
        SweepMode::Lower => lower_bound_extremal(cell.n, cell.r, space, spec),
        SweepMode::Sampled { samples, seed } => {
            sampled_upper(cell.n, cell.r, space, samples, seed ^ cell.index as u64, spec)
        }
        SweepMode::ExactH2 => h2_confluent_operator_norm(cell.n, cell.r, H2_TAIL_TOL),
    };
    SweepRow {
        n: cell.n,
        r: cell.r,
        outcome,
    }
}

/// Serial sweep; per-cell errors are kept in their rows.
pub fn sweep(
    n_list: &[usize],
    r_list: &[f64],
    space: &SpaceDescriptor,
    mode: SweepMode,
    spec: &QuadratureSpec,
) -> Result<Vec<SweepRow>> {
    Ok(sweep_cells(n_list, r_list)?
        .into_iter()
        .map(|cell| sweep_cell(cell, space, mode, spec))
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitRow {
    pub n: usize,
    pub value: f64,
    /// `value/n`.
    pub per_n: f64,
    /// `|value/n − (1 + r)/(1 − r)|`.
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitReport {
    pub r: f64,
    /// `(1 + r)/(1 − r)`.
    pub target: f64,
    pub tol: f64,
    pub rows: Vec<LimitRow>,
    pub per_n_nondecreasing: bool,
    pub error_nonincreasing: bool,
    pub final_relative_error: f64,
    /// Whether some `value/n` exceeds the target by more than `1e−6`
    /// (recorded, not part of `passed`).
    pub exceeds_target: bool,
    pub passed: bool,
}

/// Tracks `h2_confluent_operator_norm(n, r)/n` against `(1 + r)/(1 − r)`.
pub fn limit_check(r: f64, n_list: &[usize], tol: f64) -> Result<LimitReport> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid!("n list must be nonempty and strictly increasing"));
    }
    if n_list[n_list.len() - 1] > MAX_LIMIT_N {
        return Err(invalid!("n must not exceed {MAX_LIMIT_N}"));
    }
    let target = (1.0 + r) / (1.0 - r);
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let est = h2_confluent_operator_norm(n, r, H2_TAIL_TOL)?;
        let per_n = est.value / n as f64;
        rows.push(LimitRow {
            n,
            value: est.value,
            per_n,
            error: (per_n - target).abs(),
        });
    }
    let per_n_nondecreasing = rows.windows(2).all(|w| w[1].per_n >= w[0].per_n);
    let error_nonincreasing = rows.windows(2).all(|w| w[1].error <= w[0].error);
    let final_relative_error = rows[rows.len() - 1].error / target;
    let exceeds_target = rows.iter().any(|row| row.per_n > target * (1.0 + 1e-6));
    Ok(LimitReport {
        r,
        target,
        tol,
        passed: per_n_nondecreasing && error_nonincreasing && final_relative_error < tol,
        rows,
        per_n_nondecreasing,
        error_nonincreasing,
        final_relative_error,
        exceeds_target,
    })
}
