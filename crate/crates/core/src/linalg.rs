//! Small dense linear algebra: symmetric tridiagonal eigenproblems (for
//! Gauss rules), Cholesky whitening and power iteration.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Dense symmetric matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// `self += scale · v vᵀ`.
    pub fn rank_one_update(&mut self, v: &[f64], scale: f64) {
        let n = self.n;
        for i in 0..n {
            let vi = v[i] * scale;
            if vi == 0.0 {
                continue;
            }
            let row = &mut self.data[i * n..(i + 1) * n];
            for j in i..n {
                row[j] += vi * v[j];
            }
        }
    }

    /// Copies the upper triangle onto the lower one.
    pub fn symmetrize_from_upper(&mut self) {
        let n = self.n;
        for i in 0..n {
            for j in 0..i {
                self.data[i * n + j] = self.data[j * n + i];
            }
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn mul_vec(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.data[i * self.n..(i + 1) * self.n]
                .iter()
                .zip(x)
                .map(|(a, b)| a * b)
                .sum();
        }
    }
}

/// Lower-triangular Cholesky factor `L` with `G = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    l: Vec<f64>,
}

impl Cholesky {
    pub fn new(g: &SymMatrix) -> Result<Self> {
        let n = g.dim();
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut d = g.get(j, j);
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if !(d > 0.0) {
                return Err(Error::Conditioning {
                    condition: f64::INFINITY,
                });
            }
            let djj = d.sqrt();
            l[j * n + j] = djj;
            for i in j + 1..n {
                let mut s = g.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / djj;
            }
        }
        Ok(Cholesky { n, l })
    }

    /// Cheap condition estimate `(max Lᵢᵢ / min Lᵢᵢ)²`.
    pub fn condition_estimate(&self) -> f64 {
        let diag = (0..self.n).map(|i| self.l[i * self.n + i]);
        let (lo, hi) = diag.fold((f64::INFINITY, 0.0f64), |(lo, hi), d| (lo.min(d), hi.max(d)));
        (hi / lo).powi(2)
    }

    /// Solves `L y = b` in place.
    pub fn solve_lower(&self, b: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= self.l[i * n + k] * b[k];
            }
            b[i] = s / self.l[i * n + i];
        }
    }

    /// `Lᵀ x`.
    pub fn mul_upper(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|i| (i..n).map(|k| self.l[k * n + i] * x[k]).sum())
            .collect()
    }

    /// `L⁻¹ H L⁻ᵀ`.
    pub fn whiten(&self, h: &SymMatrix) -> SymMatrix {
        let n = self.n;
        // Columns of L⁻¹ H, then apply L⁻¹ to the rows.
        let mut tmp = vec![0.0; n * n];
        let mut col = vec![0.0; n];
        for j in 0..n {
            for i in 0..n {
                col[i] = h.get(i, j);
            }
            self.solve_lower(&mut col);
            for i in 0..n {
                tmp[i * n + j] = col[i];
            }
        }
        let mut out = SymMatrix::zeros(n);
        for i in 0..n {
            col.copy_from_slice(&tmp[i * n..(i + 1) * n]);
            self.solve_lower(&mut col);
            out.data[i * n..(i + 1) * n].copy_from_slice(&col);
        }
        // Average away rounding asymmetry.
        for i in 0..n {
            for j in 0..i {
                let v = 0.5 * (out.get(i, j) + out.get(j, i));
                out.set(i, j, v);
            }
        }
        out
    }
}

/// Result of [`power_iteration`].
#[derive(Debug, Clone, PartialEq)]
pub struct PowerIteration {
    pub eigenvalue: f64,
    pub eigenvector: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
    pub restarts: usize,
}

pub const POWER_TOL: f64 = 1e-12;
pub const POWER_MAX_ITER: usize = 10_000;

/// Largest eigenvalue of a symmetric positive semidefinite matrix.
///
/// The Rayleigh quotient never exceeds `λ_max`, and some eigenvalue lies
/// within the residual `‖Ax − λx‖` of it. Iteration stops once the residual
/// is below `tol·λ`. A start vector in the kernel, or half the budget spent
/// with the residual still above `√tol·λ`, triggers one restart from a seeded
/// random vector. When the budget runs out, a residual below `√tol·λ` is
/// accepted (the eigenvalue error is then of order `tol·λ²/gap`); the best
/// Rayleigh quotient seen is returned.
pub fn power_iteration(a: &SymMatrix, start: &[f64], tol: f64, max_iter: usize) -> Result<PowerIteration> {
    let n = a.dim();
    if n == 0 {
        return Ok(PowerIteration {
            eigenvalue: 0.0,
            eigenvector: Vec::new(),
            iterations: 0,
            residual: 0.0,
            restarts: 0,
        });
    }
    let mut x = start.to_vec();
    if normalize(&mut x) == 0.0 {
        x = vec![1.0; n];
        normalize(&mut x);
    }
    let mut y = vec![0.0; n];
    let mut best = PowerIteration {
        eigenvalue: 0.0,
        eigenvector: x.clone(),
        iterations: 0,
        residual: f64::INFINITY,
        restarts: 0,
    };
    let mut since_restart = 0;
    for it in 1..=max_iter {
        a.mul_vec(&x, &mut y);
        let lambda: f64 = x.iter().zip(&y).map(|(p, q)| p * q).sum();
        let residual = y
            .iter()
            .zip(&x)
            .map(|(q, p)| (q - lambda * p).powi(2))
            .sum::<f64>()
            .sqrt();
        if lambda >= best.eigenvalue {
            best.eigenvalue = lambda;
            best.eigenvector.copy_from_slice(&x);
            best.residual = residual;
        }
        best.iterations = it;
        let stalled = y.iter().all(|v| *v == 0.0);
        if residual <= tol * lambda.abs() && !stalled {
            return Ok(best);
        }
        since_restart += 1;
        if stalled && best.restarts > 0 {
            return Ok(best);
        }
        let slow = since_restart >= max_iter / 2 && residual > tol.sqrt() * lambda.abs();
        if best.restarts == 0 && (stalled || slow) {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for v in x.iter_mut() {
                *v = rng.random::<f64>() - 0.5;
            }
            normalize(&mut x);
            best.restarts += 1;
            since_restart = 0;
            continue;
        }
        x.copy_from_slice(&y);
        normalize(&mut x);
    }
    if best.residual <= tol.sqrt() * best.eigenvalue.abs() {
        return Ok(best);
    }
    Err(Error::NonConvergence {
        what: "power iteration",
        achieved: best.residual / best.eigenvalue.abs().max(f64::MIN_POSITIVE),
        requested: tol,
    })
}

fn normalize(x: &mut [f64]) -> f64 {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    norm
}

/// Eigenvalues of a symmetric tridiagonal matrix and the first components of
/// the normalized eigenvectors (implicit QL with Wilkinson shifts).
///
/// `diag` has length `n`, `off` holds the `n − 1` off-diagonal entries.
pub fn tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(&off[..n.saturating_sub(1)]);
    let mut z = vec![0.0; n];
    if n > 0 {
        z[0] = 1.0;
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NonConvergence {
                    what: "tridiagonal QL",
                    achieved: e[l].abs(),
                    requested: f64::EPSILON,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    Ok((
        order.iter().map(|&i| d[i]).collect(),
        order.iter().map(|&i| z[i]).collect(),
    ))
}
