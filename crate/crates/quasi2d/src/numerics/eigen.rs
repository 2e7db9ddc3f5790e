//! Symmetric tridiagonal Sturm-Liouville eigensolver.
//!
//! The operator `−d²/dz² + V(z)` is discretized with second-order central
//! differences on a uniform grid with Dirichlet ends, giving a symmetric
//! tridiagonal matrix with diagonal `2/Δ² + V(zᵢ)` and off-diagonal `−1/Δ²`.
//! Eigenvalues are located by bisection on the Sturm (negative-pivot) count
//! and polished with inverse iteration plus a Rayleigh quotient evaluation;
//! all of it deterministic and free of external dependencies.

use crate::numerics::{Grid1D, GridKind};
use crate::{Error, Result};

/// One eigenpair of the discretized operator.
#[derive(Debug, Clone)]
pub struct EigenResult {
    /// Eigenvalue in units 1/length².
    pub eigenvalue: f64,
    /// Eigenvector sampled on the full grid (boundary zeros included),
    /// normalized to 1 in the grid's trapezoid quadrature.
    pub eigenvector: Vec<f64>,
    /// Spectral index: 0 is the ground state.
    pub index: usize,
}

/// First `k` eigenpairs of `−d²/dz² + V(z)` with Dirichlet boundary
/// conditions on a uniform grid, eigenvalues nondecreasing in index.
pub fn eigs_sturm_liouville(
    potential: impl Fn(f64) -> f64,
    grid: &Grid1D,
    k: usize,
) -> Result<Vec<EigenResult>> {
    if grid.kind() != GridKind::Uniform {
        return Err(Error::EigNonUniformGrid {
            kind: grid.kind().name(),
        });
    }
    let n = grid.len();
    let m = n - 2; // interior points
    if k == 0 || k > m {
        return Err(Error::EigTooManyStates {
            requested: k,
            interior: m,
        });
    }
    let dz = grid.uniform_spacing().expect("uniform grid");
    let inv_dz2 = 1.0 / (dz * dz);
    let diag: Vec<f64> = grid.points()[1..n - 1]
        .iter()
        .map(|&z| 2.0 * inv_dz2 + potential(z))
        .collect();
    let off = -inv_dz2;

    // Gershgorin bounds on the whole spectrum.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &d in &diag {
        lo = lo.min(d - 2.0 * off.abs());
        hi = hi.max(d + 2.0 * off.abs());
    }
    let scale = lo.abs().max(hi.abs()).max(1.0);

    let mut results = Vec::with_capacity(k);
    let mut previous: Vec<Vec<f64>> = Vec::new();
    for index in 0..k {
        let eigenvalue_interval = bisect_eigenvalue(&diag, off, index, lo, hi, scale);
        let (eigenvalue, vector) =
            inverse_iteration(&diag, off, eigenvalue_interval, index, scale, &previous)?;
        previous.push(vector.clone());

        // Embed into the full grid with Dirichlet zeros and normalize in the
        // grid quadrature (trapezoid weights reduce to Δz for interior points).
        let mut full = vec![0.0; n];
        full[1..n - 1].copy_from_slice(&vector);
        let norm_sq: f64 = full.iter().map(|v| v * v).sum::<f64>() * dz;
        let inv_norm = 1.0 / norm_sq.sqrt();
        for v in &mut full {
            *v *= inv_norm;
        }
        // Deterministic sign: first component of significant magnitude is positive.
        let peak = full.iter().cloned().fold(0.0f64, |m, v| m.max(v.abs()));
        if let Some(first) = full.iter().find(|v| v.abs() > 0.1 * peak) {
            if *first < 0.0 {
                for v in &mut full {
                    *v = -*v;
                }
            }
        }
        results.push(EigenResult {
            eigenvalue,
            eigenvector: full,
            index,
        });
    }
    Ok(results)
}

/// Number of eigenvalues strictly below `lambda` (negative pivots of the
/// shifted LDLᵀ factorization).
fn count_below(diag: &[f64], off: f64, lambda: f64) -> usize {
    let e2 = off * off;
    let mut count = 0;
    let mut q = 1.0f64;
    for (i, &d) in diag.iter().enumerate() {
        let denom = if q.abs() < 1e-300 {
            if q >= 0.0 {
                1e-300
            } else {
                -1e-300
            }
        } else {
            q
        };
        q = d - lambda - if i > 0 { e2 / denom } else { 0.0 };
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Bisect until the interval containing eigenvalue `index` is tight.
fn bisect_eigenvalue(
    diag: &[f64],
    off: f64,
    index: usize,
    mut lo: f64,
    mut hi: f64,
    scale: f64,
) -> (f64, f64) {
    let tol = 1e-14 * scale;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // interval at floating-point resolution
        }
        if count_below(diag, off, mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// Inverse iteration at the bisected shift; returns the Rayleigh quotient
/// and the (unnormalized-in-quadrature, unit ℓ²) eigenvector.
fn inverse_iteration(
    diag: &[f64],
    off: f64,
    interval: (f64, f64),
    index: usize,
    scale: f64,
    previous: &[Vec<f64>],
) -> Result<(f64, Vec<f64>)> {
    let m = diag.len();
    let shift = 0.5 * (interval.0 + interval.1);
    // Deterministic pseudo-random start vector: generic overlap with any
    // eigenvector, including odd-parity ones a constant vector would miss.
    let mut v: Vec<f64> = (0..m)
        .map(|i| {
            let x = ((i as u64).wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407)
                >> 33) as f64;
            x / (1u64 << 31) as f64 - 1.0
        })
        .collect();
    normalize_l2(&mut v);

    // Orthogonalize against earlier eigenvectors when the spectrum is
    // clustered, so the iteration cannot fall back onto a converged state.
    let cluster = interval.1 - interval.0 < 1e-6 * scale;
    let needs_ortho = |j: usize| cluster || j > 0;

    let max_iterations = 16;
    let mut rayleigh = shift;
    for iteration in 1..=max_iterations {
        let mut w = v.clone();
        solve_shifted_tridiag(diag, off, shift, &mut w);
        if needs_ortho(index) {
            for p in previous {
                let dot: f64 = w.iter().zip(p).map(|(a, b)| a * b).sum();
                for (wi, pi) in w.iter_mut().zip(p) {
                    *wi -= dot * pi;
                }
            }
        }
        normalize_l2(&mut w);
        v = w;
        rayleigh = rayleigh_quotient(diag, off, &v);
        let residual = residual_norm(diag, off, rayleigh, &v);
        if residual <= 1e-10 * scale {
            return Ok((rayleigh, v));
        }
        if iteration == max_iterations {
            return Err(Error::EigNoConvergence {
                index,
                iterations: iteration,
                residual: residual / scale,
            });
        }
    }
    Ok((rayleigh, v))
}

fn normalize_l2(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

fn apply(diag: &[f64], off: f64, v: &[f64], out: &mut [f64]) {
    let m = diag.len();
    for i in 0..m {
        let mut acc = diag[i] * v[i];
        if i > 0 {
            acc += off * v[i - 1];
        }
        if i + 1 < m {
            acc += off * v[i + 1];
        }
        out[i] = acc;
    }
}

fn rayleigh_quotient(diag: &[f64], off: f64, v: &[f64]) -> f64 {
    let mut tv = vec![0.0; v.len()];
    apply(diag, off, v, &mut tv);
    v.iter().zip(&tv).map(|(a, b)| a * b).sum()
}

fn residual_norm(diag: &[f64], off: f64, theta: f64, v: &[f64]) -> f64 {
    let mut tv = vec![0.0; v.len()];
    apply(diag, off, v, &mut tv);
    tv.iter()
        .zip(v)
        .map(|(t, x)| {
            let r = t - theta * x;
            r * r
        })
        .sum::<f64>()
        .sqrt()
}

/// Solve `(T − shift·I) x = rhs` in place for symmetric tridiagonal `T` with
/// constant off-diagonal, using LU with partial pivoting (the system is
/// intentionally near-singular during inverse iteration, so plain Thomas
/// elimination would be unstable).
fn solve_shifted_tridiag(diag: &[f64], off: f64, shift: f64, rhs: &mut [f64]) {
    let n = diag.len();
    let mut d: Vec<f64> = diag.iter().map(|&x| x - shift).collect();
    let mut u1 = vec![off; n]; // first superdiagonal (row i, col i+1); u1[n-1] unused
    let mut u2 = vec![0.0; n]; // second superdiagonal fill-in from pivoting
    u1[n - 1] = 0.0;

    for i in 0..n - 1 {
        let s = off; // subdiagonal element A[i+1][i], untouched until step i
        if d[i].abs() >= s.abs() {
            let pivot = if d[i] == 0.0 { 1e-300 } else { d[i] };
            let m = s / pivot;
            d[i] = pivot;
            d[i + 1] -= m * u1[i];
            if i + 2 < n {
                u1[i + 1] -= m * u2[i];
            }
            rhs[i + 1] -= m * rhs[i];
        } else {
            // Swap rows i and i+1, then eliminate.
            let m = d[i] / s;
            let nu1 = d[i + 1];
            let nu2 = if i + 2 < n { u1[i + 1] } else { 0.0 };
            let e1 = u1[i] - m * nu1;
            let e2 = u2[i] - m * nu2;
            d[i] = s;
            u1[i] = nu1;
            u2[i] = nu2;
            d[i + 1] = e1;
            if i + 2 < n {
                u1[i + 1] = e2;
            }
            rhs.swap(i, i + 1);
            rhs[i + 1] -= m * rhs[i];
        }
    }
    // Back substitution.
    let last = n - 1;
    let pivot = if d[last] == 0.0 { 1e-300 } else { d[last] };
    rhs[last] /= pivot;
    if n >= 2 {
        let i = n - 2;
        rhs[i] = (rhs[i] - u1[i] * rhs[i + 1]) / safe(d[i]);
    }
    for i in (0..n.saturating_sub(2)).rev() {
        rhs[i] = (rhs[i] - u1[i] * rhs[i + 1] - u2[i] * rhs[i + 2]) / safe(d[i]);
    }
}

fn safe(x: f64) -> f64 {
    if x == 0.0 {
        1e-300
    } else {
        x
    }
}
