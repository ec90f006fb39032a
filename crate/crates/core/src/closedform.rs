//! Closed-form spectrum of the homogeneous platoon (unit gains, identical
//! asymmetry `0 < ε < 1`).
//!
//! With `m = N − 1` followers the reduced Laplacian eigenvalues are
//! `1 + ε − 2√ε cos θ`, where θ runs over the `m` roots in `(0, π)` of
//! `sin(mθ) − ε^{-1/2} sin((m+1)θ)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const GRID_PER_VEHICLE: usize = 64;
const BISECTION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaRoots {
    pub thetas: Vec<f64>,
    pub epsilon: f64,
}

/// `sin(mθ) − sin((m+1)θ)/√ε` for `m = n − 1` followers.
pub fn theta_residual(n: usize, eps: f64, theta: f64) -> f64 {
    let m = (n - 1) as f64;
    (m * theta).sin() - ((m + 1.0) * theta).sin() / eps.sqrt()
}

pub fn solve_thetas(n: usize, eps: f64) -> Result<ThetaRoots> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("need 0 < eps < 1, got {eps}")));
    }
    let expected = n - 1;
    let mut thetas = bracket_roots(n, eps, GRID_PER_VEHICLE * n);
    if thetas.len() != expected {
        thetas = bracket_roots(n, eps, 4 * GRID_PER_VEHICLE * n);
    }
    if thetas.len() != expected {
        return Err(Error::RootBracketing {
            found: thetas.len(),
            expected,
        });
    }
    Ok(ThetaRoots {
        thetas,
        epsilon: eps,
    })
}

fn bracket_roots(n: usize, eps: f64, points: usize) -> Vec<f64> {
    let f = |t: f64| theta_residual(n, eps, t);
    // Open interval: grid excludes the trivial roots at 0 and π.
    let grid: Vec<f64> = (1..=points).map(|k| PI * k as f64 / (points + 1) as f64).collect();
    let mut roots = Vec::new();
    for w in grid.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (f(a), f(b));
        if fa == 0.0 {
            roots.push(a);
        } else if fa * fb < 0.0 {
            roots.push(bisect(&f, a, b, fa));
        }
    }
    if let Some(&last) = grid.last() {
        if f(last) == 0.0 {
            roots.push(last);
        }
    }
    roots
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    loop {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm.abs() <= BISECTION_TOL || mid <= a || mid >= b {
            return mid;
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
}

/// `1 + ε − 2√ε cos θ_i`, ascending.
pub fn closedform_eigenvalues(n: usize, eps: f64) -> Result<Vec<f64>> {
    let roots = solve_thetas(n, eps)?;
    let s = eps.sqrt();
    // θ ascending ⇒ −cos θ ascending.
    Ok(roots
        .thetas
        .iter()
        .map(|t| 1.0 + eps - 2.0 * s * t.cos())
        .collect())
}

/// `[(1−√ε)², (1+√ε)²]`.
pub fn homogeneous_bounds(eps: f64) -> (f64, f64) {
    let s = eps.sqrt();
    ((1.0 - s).powi(2), (1.0 + s).powi(2))
}
