//! The acceptance checks, shared by `ratnorm verify` and the test suite.
//!
//! Every check returns a [`CheckRecord`] with its measured values. A
//! tolerance override replaces the numerical tolerances (relative errors and
//! monotonicity slack), not the structural thresholds of checks 6, 7 and 9.

use std::time::Instant;

use nalgebra::DMatrix;
use serde_json::{json, Value};

use ratnorm_core::bernstein::{
    h2_confluent_pencil, limit_check, lower_bound_extremal, pencil_top_eigenvalue, random_member, sample_rng,
    SweepMode, H2_TAIL_TOL,
};
use ratnorm_core::kernel::{i_identity, i_quadrature, i_series, phi, psi, lemma2_ratio, SERIES_TAIL_TOL};
use ratnorm_core::norms::{bergman2_norm_series, bergman_norm, hardy2_norm_series, hardy_norm, SpaceDescriptor};
use ratnorm_core::quadrature::QuadratureSpec;
use ratnorm_core::weights::RadialWeight;

use crate::report::CheckRecord;
use crate::sweep::par_sweep;

/// Seed of the random functions in checks 5 and 7.
pub const ACCEPTANCE_SEED: u64 = 20_240_901;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Profile {
    pub tol: Option<f64>,
}

impl Profile {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

type Outcome = (bool, Value);

fn run(id: &str, name: &str, body: impl FnOnce() -> ratnorm_core::Result<Outcome>) -> CheckRecord {
    let start = Instant::now();
    let (passed, detail) = match body() {
        Ok(outcome) => outcome,
        Err(e) => (false, json!({ "error": e.to_string() })),
    };
    CheckRecord {
        id: id.to_owned(),
        name: name.to_owned(),
        passed,
        wall_time_seconds: start.elapsed().as_secs_f64(),
        detail,
    }
}

fn within_time(mut record: CheckRecord, limit: f64) -> CheckRecord {
    if record.wall_time_seconds >= limit {
        record.passed = false;
    }
    if let Value::Object(map) = &mut record.detail {
        map.insert("time_limit_seconds".into(), json!(limit));
    }
    record
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

const LEMMA1_T: [f64; 5] = [2.0, 3.0, 4.5, 10.0, 40.0];
const LEMMA1_R: [f64; 4] = [0.0, 0.3, 0.7, 0.95];

/// 1. `I` by quadrature, by series and through `φ` agree on the grid.
pub fn lemma1_identity(profile: &Profile) -> CheckRecord {
    let tol = profile.tol(1e-8);
    let record = run("1", "kernel identity I(t,r) = (1-r^2)^(1-t) phi_r(t-2)", || {
        let mut worst_identity: f64 = 0.0;
        let mut worst_series: f64 = 0.0;
        for t in LEMMA1_T {
            for r in LEMMA1_R {
                let q = i_quadrature(t, r)?.value;
                worst_identity = worst_identity.max(rel(i_identity(t, r)?.value, q));
                worst_series = worst_series.max(rel(i_series(t, r, SERIES_TAIL_TOL)?.value, q));
            }
        }
        Ok((
            worst_identity < tol && worst_series < tol,
            json!({ "tol": tol, "max_rel_identity_vs_quadrature": worst_identity,
                    "max_rel_series_vs_quadrature": worst_series }),
        ))
    });
    within_time(record, 5.0)
}

const PSI_R: [f64; 6] = [0.0, 0.25, 0.5, 0.75, 0.9, 0.99];
const PSI_FUNCTIONAL_R: [f64; 3] = [0.3, 0.7, 0.9];

/// 2. `ψ` vanishes and satisfies `2ψ(r) = ψ(r²)`.
pub fn psi_vanishes(profile: &Profile) -> CheckRecord {
    psi_at(profile, &PSI_R, &PSI_FUNCTIONAL_R)
}

/// Check 2 restricted to the given radii.
pub fn psi_at(profile: &Profile, radii: &[f64], functional_radii: &[f64]) -> CheckRecord {
    let tol = profile.tol(1e-9);
    run("2", "psi(r) = 0 and 2 psi(r) = psi(r^2)", || {
        let mut values = Vec::new();
        let mut worst: f64 = 0.0;
        for &r in radii {
            let v = psi(r)?;
            worst = worst.max(v.abs());
            values.push(json!({ "r": r, "psi": v }));
        }
        let mut worst_functional: f64 = 0.0;
        for &r in functional_radii {
            worst_functional = worst_functional.max((2.0 * psi(r)? - psi(r * r)?).abs());
        }
        Ok((
            worst < tol && worst_functional < tol,
            json!({ "tol": tol, "values": values, "max_abs_psi": worst,
                    "max_functional_residual": worst_functional }),
        ))
    })
}

/// 3. `φ_r` nondecreasing and convex in `t`; `I(t, ·)` and `φ_·(t)`
/// nondecreasing in `r`. Slack is relative to the values compared.
pub fn monotonicity(profile: &Profile) -> CheckRecord {
    let slack = profile.tol(1e-10);
    run("3", "monotonicity and convexity of phi, monotonicity of I", || {
        let t_grid: Vec<f64> = (0..=120).map(|i| 0.5 * i as f64).collect();
        let r_grid: Vec<f64> = (0..20).map(|i| 0.05 * i as f64).collect();
        let mut violations = Vec::new();
        for r in [0.0, 0.25, 0.5, 0.75, 0.9, 0.99] {
            let values = t_grid.iter().map(|&t| Ok(phi(r, t)?.value)).collect::<ratnorm_core::Result<Vec<f64>>>()?;
            for i in 1..values.len() {
                if values[i] < values[i - 1] * (1.0 - slack) {
                    violations.push(json!({ "kind": "phi increasing in t", "r": r, "t": t_grid[i] }));
                }
                if i + 1 < values.len() && values[i + 1] - 2.0 * values[i] + values[i - 1] < -slack * values[i] {
                    violations.push(json!({ "kind": "phi convex in t", "r": r, "t": t_grid[i] }));
                }
            }
        }
        for t in [0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0, 60.0] {
            let mut prev_i = 0.0;
            let mut prev_phi = 0.0;
            for &r in &r_grid {
                let i = i_series(t, r, SERIES_TAIL_TOL)?.value;
                let p = phi(r, t)?.value;
                if i < prev_i * (1.0 - slack) {
                    violations.push(json!({ "kind": "I increasing in r", "t": t, "r": r }));
                }
                if p < prev_phi * (1.0 - slack) {
                    violations.push(json!({ "kind": "phi increasing in r", "t": t, "r": r }));
                }
                prev_i = i;
                prev_phi = p;
            }
        }
        Ok((
            violations.is_empty(),
            json!({ "slack": slack, "t_grid": [0.0, 60.0, 0.5], "violations": violations }),
        ))
    })
}

/// 4. `I(2, r) = 1/(1 − r²)` and `I(4, r) = (1 + r²)/(1 − r²)³`.
pub fn closed_forms(profile: &Profile) -> CheckRecord {
    let tol = profile.tol(1e-10);
    run("4", "closed forms of I(2,r) and I(4,r)", || {
        let mut worst: f64 = 0.0;
        for r in [0.1f64, 0.5, 0.9] {
            let s = 1.0 - r * r;
            for (t, exact) in [(2.0, 1.0 / s), (4.0, (1.0 + r * r) / s.powi(3))] {
                worst = worst.max(rel(i_series(t, r, SERIES_TAIL_TOL)?.value, exact));
                worst = worst.max(rel(i_quadrature(t, r)?.value, exact));
            }
        }
        Ok((worst < tol, json!({ "tol": tol, "max_rel_error": worst })))
    })
}

/// 5. Series and quadrature norms agree for `p = 2` on random members of
/// `R_{8, 0.8}`.
pub fn parseval(profile: &Profile) -> CheckRecord {
    let tol = profile.tol(1e-7);
    let record = run("5", "Parseval: series vs quadrature norms, p = 2", || {
        let spec = QuadratureSpec::default();
        let weights = [-0.5, 0.0, 1.0].map(|b| RadialWeight::power(b).expect("valid β"));
        let mut worst_hardy: f64 = 0.0;
        let mut worst_bergman = [0.0f64; 3];
        for i in 0..50 {
            let f = random_member(8, 0.8, &mut sample_rng(ACCEPTANCE_SEED, i))?;
            let series = hardy2_norm_series(&f, 1e-14)?.value;
            worst_hardy = worst_hardy.max(rel(hardy_norm(&f, 2.0, &spec)?.value, series));
            for (w, worst) in weights.iter().zip(worst_bergman.iter_mut()) {
                let series = bergman2_norm_series(&f, w, 1e-14)?.value;
                *worst = worst.max(rel(bergman_norm(&f, 2.0, w, &spec)?.value, series));
            }
        }
        let passed = worst_hardy < tol && worst_bergman.iter().all(|w| *w < tol);
        Ok((
            passed,
            json!({ "tol": tol, "functions": 50, "max_rel_hardy": worst_hardy,
                    "max_rel_bergman": { "beta=-0.5": worst_bergman[0], "beta=0": worst_bergman[1],
                                         "beta=1": worst_bergman[2] } }),
        ))
    });
    within_time(record, 30.0)
}

pub const GRID_N: [usize; 5] = [4, 8, 16, 32, 64];
pub const GRID_R: [f64; 3] = [0.5, 0.8, 0.9];

/// 6. Normalized extremal ratios in `L^p_a(w_β)` stay above `0.1`.
pub fn extremal_lower(_profile: &Profile) -> CheckRecord {
    run("6", "extremal lower bound: normalized ratio >= 0.1", || {
        let spec = QuadratureSpec::default();
        let mut cells = Vec::new();
        let mut min = f64::INFINITY;
        for beta in [0.0, 1.0] {
            for p in [1.0, 2.0, 3.0] {
                let space = SpaceDescriptor::bergman(p, RadialWeight::power(beta)?)?;
                for r in GRID_R {
                    for n in GRID_N {
                        let e = lower_bound_extremal(n, r, &space, &spec)?;
                        min = min.min(e.normalized);
                        cells.push(json!({ "beta": beta, "p": p, "r": r, "n": n, "normalized": e.normalized }));
                    }
                }
            }
        }
        Ok((min >= 0.1, json!({ "threshold": 0.1, "min_normalized": min, "cells": cells })))
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// 7. Sampled maxima in `L²_a(w₀)`: normalized values within a factor 10
/// across cells, and value ∝ n at `r = 0.8` (log-log slope `1 ± 0.1`).
pub fn sampled_upper_scaling(_profile: &Profile) -> CheckRecord {
    run("7", "sampled upper probe: spread < 10, slope 1 +/- 0.1 at r = 0.8", || {
        let spec = QuadratureSpec::default();
        let space = SpaceDescriptor::bergman(2.0, RadialWeight::power(0.0)?)?;
        let mode = SweepMode::Sampled {
            samples: 100,
            seed: ACCEPTANCE_SEED,
        };
        let rows = par_sweep(&GRID_N, &GRID_R, &space, mode, &spec)?;
        let mut cells = Vec::new();
        let (mut max, mut min) = (f64::MIN, f64::MAX);
        let (mut ns, mut values) = (Vec::new(), Vec::new());
        for row in rows {
            let e = row.outcome?;
            max = max.max(e.normalized);
            min = min.min(e.normalized);
            if e.r == 0.8 {
                ns.push(e.n as f64);
                values.push(e.value);
            }
            cells.push(json!({ "r": e.r, "n": e.n, "value": e.value, "normalized": e.normalized }));
        }
        let spread = max / min;
        let slope = log_log_slope(&ns, &values);
        Ok((
            spread < 10.0 && (slope - 1.0).abs() <= 0.1,
            json!({ "samples": 100, "seed": ACCEPTANCE_SEED, "spread": spread, "slope_at_r_0.8": slope,
                    "cells": cells }),
        ))
    })
}

/// 8. `C/n → (1 + r)/(1 − r)` for the confluent `H²` operator norm.
pub fn limit(profile: &Profile) -> CheckRecord {
    limit_for(profile, &[0.0, 0.3, 0.5], &[8, 16, 32, 64])
}

/// Check 8 for the given radii; `r = 0` is compared with `(n − 1)/n`.
pub fn limit_for(profile: &Profile, radii: &[f64], n_list: &[usize]) -> CheckRecord {
    let final_tol = profile.tol(0.15);
    let exact_tol = profile.tol(1e-12);
    let record = run("8", "limit of C_{n,r}(H^2)/n", || {
        let mut passed = true;
        let mut reports = Vec::new();
        for &r in radii {
            let report = limit_check(r, n_list, final_tol)?;
            let mut ok = report.passed;
            if r == 0.0 {
                let worst = report
                    .rows
                    .iter()
                    .map(|row| (row.error - 1.0 / row.n as f64).abs())
                    .fold(0.0, f64::max);
                ok = worst <= exact_tol;
            }
            passed &= ok;
            reports.push(json!({
                "r": r, "target": report.target, "passed": ok,
                "per_n_nondecreasing": report.per_n_nondecreasing,
                "error_nonincreasing": report.error_nonincreasing,
                "final_relative_error": report.final_relative_error,
                "exceeds_target": report.exceeds_target,
                "rows": crate::report::limit_rows(&report),
            }));
        }
        Ok((passed, json!({ "tol": final_tol, "r0_tol": exact_tol, "reports": reports })))
    });
    within_time(record, 60.0)
}

/// 9. Tail-integral ratios for `w₁`, `γ = 2`, `r₀ = 0.5` stay in `[1, 2)`
/// uniformly in `t`.
pub fn lemma2(_profile: &Profile) -> CheckRecord {
    run("9", "tail-integral comparability uniform in t", || {
        let w = RadialWeight::power(1.0)?;
        let mut passed = true;
        let mut rows = Vec::new();
        for r in [0.6, 0.8, 0.9] {
            let ratios = [5.0, 10.0, 20.0, 40.0, 80.0]
                .iter()
                .map(|&t| lemma2_ratio(&w, 2.0, 0.5, t, r))
                .collect::<ratnorm_core::Result<Vec<f64>>>()?;
            let max = ratios.iter().copied().fold(f64::MIN, f64::max);
            let min = ratios.iter().copied().fold(f64::MAX, f64::min);
            passed &= min >= 1.0 && max / min < 2.0;
            rows.push(json!({ "r": r, "ratios": ratios, "spread": max / min }));
        }
        Ok((passed, json!({ "gamma": 2.0, "r0": 0.5, "t": [5, 10, 20, 40, 80], "rows": rows })))
    })
}

/// Top generalized eigenvalue of `(H, G)` by a dense symmetric eigensolver.
pub fn dense_top_eigenvalue(n: usize, r: f64) -> ratnorm_core::Result<f64> {
    let pencil = h2_confluent_pencil(n, r, H2_TAIL_TOL)?;
    let g = DMatrix::from_fn(n, n, |i, j| pencil.gram.get(i, j));
    let h = DMatrix::from_fn(n, n, |i, j| pencil.derivative_gram.get(i, j));
    let l = g
        .cholesky()
        .ok_or(ratnorm_core::Error::Conditioning { condition: f64::INFINITY })?
        .l();
    let x = l.solve_lower_triangular(&h).expect("nonsingular factor");
    let a = l.solve_lower_triangular(&x.transpose()).expect("nonsingular factor");
    let a = (&a + a.transpose()) * 0.5;
    Ok(a.symmetric_eigen().eigenvalues.max())
}

/// 10. Power iteration matches a dense eigensolver for `n ≤ 6`.
pub fn eigen_oracle(profile: &Profile) -> CheckRecord {
    let tol = profile.tol(1e-10);
    run("10", "power iteration vs dense eigensolver", || {
        let mut worst: f64 = 0.0;
        let mut rows = Vec::new();
        for r in [0.0, 0.5, 0.9] {
            for n in 1..=6 {
                let power = pencil_top_eigenvalue(&h2_confluent_pencil(n, r, H2_TAIL_TOL)?)?;
                let dense = dense_top_eigenvalue(n, r)?;
                let err = if dense == 0.0 { power.abs() } else { rel(power, dense) };
                worst = worst.max(err);
                rows.push(json!({ "n": n, "r": r, "power": power, "dense": dense }));
            }
        }
        Ok((worst <= tol, json!({ "tol": tol, "max_rel_error": worst, "rows": rows })))
    })
}

/// All checks in order.
pub fn all(profile: &Profile) -> Vec<CheckRecord> {
    vec![
        lemma1_identity(profile),
        psi_vanishes(profile),
        monotonicity(profile),
        closed_forms(profile),
        parseval(profile),
        extremal_lower(profile),
        sampled_upper_scaling(profile),
        limit(profile),
        lemma2(profile),
        eigen_oracle(profile),
    ]
}
