//! Platoon Laplacian, its reduced (leaderless) block, and spectral bounds.
//!
//! Vehicle `i` (2-based, the leader is vehicle 1) weights the spacing error to
//! its predecessor by `μ_i` and to its follower by `μ_i ε_i`. The Laplacian is
//! tridiagonal with an all-zero leader row; dropping the leader row and column
//! leaves the reduced Laplacian, whose spectrum is the nonzero spectrum of the
//! full one.

use log::warn;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::RationalTF;

#[derive(Debug, Clone, PartialEq)]
pub struct PlatoonConfig {
    n: usize,
    gains: Vec<f64>,
    asymmetries: Vec<f64>,
    vehicle: RationalTF,
    controller: RationalTF,
    ref_distance: f64,
}

impl PlatoonConfig {
    /// Validates and builds a configuration. `gains` and `asymmetries` hold
    /// the per-follower values for vehicles `2..=n`. The last asymmetry is
    /// forced to zero since the trailing vehicle has no follower.
    pub fn new(
        n: usize,
        gains: Vec<f64>,
        mut asymmetries: Vec<f64>,
        vehicle: RationalTF,
        controller: RationalTF,
        ref_distance: f64,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::config("n", format!("need at least 2 vehicles, got {n}")));
        }
        if gains.len() != n - 1 {
            return Err(Error::config(
                "gains",
                format!("expected {} entries, got {}", n - 1, gains.len()),
            ));
        }
        if asymmetries.len() != n - 1 {
            return Err(Error::config(
                "asymmetries",
                format!("expected {} entries, got {}", n - 1, asymmetries.len()),
            ));
        }
        if let Some((i, g)) = gains.iter().enumerate().find(|(_, g)| !(g.is_finite() && **g > 0.0)) {
            return Err(Error::config(
                "gains",
                format!("gain of vehicle {} must be positive and finite, got {g}", i + 2),
            ));
        }
        if let Some((i, e)) = asymmetries
            .iter()
            .enumerate()
            .find(|(_, e)| !(e.is_finite() && **e >= 0.0))
        {
            return Err(Error::config(
                "asymmetries",
                format!("asymmetry of vehicle {} must be nonnegative and finite, got {e}", i + 2),
            ));
        }
        for (name, tf) in [("vehicle", &vehicle), ("controller", &controller)] {
            if !tf.num().is_finite() || !tf.den().is_finite() {
                return Err(Error::config(name, "coefficients must be finite"));
            }
        }
        if !ref_distance.is_finite() {
            return Err(Error::config("ref_distance", "must be finite"));
        }
        let last = asymmetries.last_mut().unwrap();
        if *last != 0.0 {
            warn!("asymmetry of the last vehicle forced from {last} to 0 (it has no follower)");
            *last = 0.0;
        }
        Ok(PlatoonConfig {
            n,
            gains,
            asymmetries,
            vehicle,
            controller,
            ref_distance,
        })
    }

    /// Identical gain and asymmetry for every follower.
    pub fn homogeneous(
        n: usize,
        gain: f64,
        asymmetry: f64,
        vehicle: RationalTF,
        controller: RationalTF,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::config("n", format!("need at least 2 vehicles, got {n}")));
        }
        let mut asym = vec![asymmetry; n - 1];
        *asym.last_mut().unwrap() = 0.0;
        PlatoonConfig::new(n, vec![gain; n - 1], asym, vehicle, controller, 1.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// μ_2..μ_N.
    pub fn gains(&self) -> &[f64] {
        &self.gains
    }

    /// ε_2..ε_N (ε_N = 0).
    pub fn asymmetries(&self) -> &[f64] {
        &self.asymmetries
    }

    pub fn vehicle(&self) -> &RationalTF {
        &self.vehicle
    }

    pub fn controller(&self) -> &RationalTF {
        &self.controller
    }

    pub fn ref_distance(&self) -> f64 {
        self.ref_distance
    }

    /// Gain of the first follower, the one coupled to the leader.
    pub fn leader_gain(&self) -> f64 {
        self.gains[0]
    }

    pub fn max_asymmetry(&self) -> f64 {
        self.asymmetries.iter().fold(0.0, |m: f64, e| m.max(*e))
    }

    pub fn min_gain(&self) -> f64 {
        self.gains.iter().fold(f64::INFINITY, |m: f64, g| m.min(*g))
    }

    pub fn with_models(&self, vehicle: RationalTF, controller: RationalTF) -> Self {
        PlatoonConfig {
            vehicle,
            controller,
            ..self.clone()
        }
    }
}

/// Full N×N platoon Laplacian.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix(DMatrix<f64>);

impl LaplacianMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn max_diagonal(&self) -> f64 {
        self.0.diagonal().iter().fold(0.0, |m: f64, d| m.max(*d))
    }

    /// Drops the leader row and column.
    pub fn reduce(&self) -> ReducedLaplacian {
        let n = self.0.nrows();
        ReducedLaplacian(self.0.view((1, 1), (n - 1, n - 1)).into_owned())
    }
}

/// Leaderless (N−1)×(N−1) tridiagonal block of the Laplacian.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedLaplacian(DMatrix<f64>);

impl ReducedLaplacian {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    /// Real spectrum in ascending order.
    ///
    /// The matrix is split into irreducible blocks wherever a superdiagonal
    /// entry is exactly zero. Inside a block every sub/super product is
    /// positive, so a diagonal similarity turns it into a symmetric
    /// tridiagonal matrix with off-diagonal `-sqrt(sub * super)`, which is
    /// then diagonalized by implicit-shift QL.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let m = self.dim();
        for i in 0..m {
            for j in 0..m {
                if !self.0[(i, j)].is_finite() {
                    return Err(Error::NonFiniteMatrix { row: i, col: j });
                }
            }
        }
        let mut out = Vec::with_capacity(m);
        let mut start = 0;
        for k in 0..m {
            let coupled = k + 1 < m && self.0[(k, k + 1)] * self.0[(k + 1, k)] > 0.0;
            if coupled {
                continue;
            }
            let mut diag: Vec<f64> = (start..=k).map(|i| self.0[(i, i)]).collect();
            let mut off: Vec<f64> = (start..k)
                .map(|i| -(self.0[(i, i + 1)] * self.0[(i + 1, i)]).sqrt())
                .collect();
            off.push(0.0);
            symmetric_tridiagonal_ql(&mut diag, &mut off)?;
            out.extend(diag);
            start = k + 1;
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(out)
    }
}

/// Eigenvalues of a symmetric tridiagonal matrix, in place.
///
/// `diag` holds the diagonal; `off[i]` couples rows `i` and `i + 1` (the last
/// entry is ignored). On return `diag` holds the unsorted eigenvalues.
pub fn symmetric_tridiagonal_ql(diag: &mut [f64], off: &mut [f64]) -> Result<()> {
    let n = diag.len();
    assert_eq!(off.len(), n);
    if n == 0 {
        return Ok(());
    }
    off[n - 1] = 0.0;
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 60 {
                return Err(Error::InvalidArgument(
                    "tridiagonal QL iteration did not converge".into(),
                ));
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

pub fn build_laplacian(cfg: &PlatoonConfig) -> LaplacianMatrix {
    let n = cfg.n();
    let mut l = DMatrix::zeros(n, n);
    for i in 1..n {
        let mu = cfg.gains[i - 1];
        let eps = cfg.asymmetries[i - 1];
        l[(i, i - 1)] = -mu;
        if i + 1 < n {
            let diag = mu + mu * eps;
            l[(i, i)] = diag;
            // Rounded so that the row sums to exactly zero.
            l[(i, i + 1)] = -(diag - mu);
        } else {
            l[(i, i)] = mu;
        }
    }
    LaplacianMatrix(l)
}

pub fn reduce(l: &LaplacianMatrix) -> ReducedLaplacian {
    l.reduce()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    /// λ_2..λ_N ascending.
    pub eigenvalues: Vec<f64>,
    pub fiedler: f64,
    /// 2 max(L_ii).
    pub gershgorin_upper: f64,
    /// Size-independent lower bound `(1-ε_max)^2 / (2+2ε_max)`, absent when
    /// ε_max >= 1.
    #[serde(rename = "theorem1_lower")]
    pub uniform_lower: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notices: Vec<String>,
}

pub fn spectrum(cfg: &PlatoonConfig) -> Result<SpectrumReport> {
    let l = build_laplacian(cfg);
    let eigenvalues = l.reduce().eigenvalues()?;
    let uniform_lower = uniform_lower_bound(cfg);
    let mut notices = Vec::new();
    match uniform_lower {
        None => notices.push(format!(
            "uniform lower bound unavailable: max asymmetry {} is not below 1",
            cfg.max_asymmetry()
        )),
        Some(_) if cfg.min_gain() < 1.0 => notices.push(format!(
            "min gain {} < 1: the certified uniform bound scales by the min gain",
            cfg.min_gain()
        )),
        Some(_) => {}
    }
    Ok(SpectrumReport {
        fiedler: eigenvalues[0],
        eigenvalues,
        gershgorin_upper: 2.0 * l.max_diagonal(),
        uniform_lower,
        notices,
    })
}

/// `(1-ε)^2 / (2+2ε)`.
pub fn uniform_bound_at(eps_max: f64) -> Option<f64> {
    if eps_max >= 1.0 {
        return None;
    }
    Some((1.0 - eps_max).powi(2) / (2.0 + 2.0 * eps_max))
}

/// Size-independent lower bound on the Fiedler value, evaluated at the
/// largest asymmetry of the platoon; `None` when the asymmetry reaches 1.
pub fn uniform_lower_bound(cfg: &PlatoonConfig) -> Option<f64> {
    uniform_bound_at(cfg.max_asymmetry())
}

/// Geršgorin certificate for the scaled reduced Laplacian `P⁻¹RP` with
/// `P = diag(1, p, p², …)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceCertificate {
    /// Scaling base `(1 + 1/ε_max) / 2`; infinite for predecessor following
    /// (serialized as null).
    pub p: f64,
    /// Distance of each Geršgorin disk from zero, vehicles 2..N.
    pub row_margins: Vec<f64>,
    pub lower_bound: f64,
    /// Largest deviation of a scaled row from its closed-form entries.
    pub max_row_residual: f64,
}

pub fn dominance_certificate(cfg: &PlatoonConfig) -> Result<DominanceCertificate> {
    let eps_max = cfg.max_asymmetry();
    if eps_max >= 1.0 {
        return Err(Error::CertificateHypothesis(eps_max));
    }
    let r = build_laplacian(cfg).reduce();
    let m = r.dim();
    let mat = r.matrix();

    if eps_max == 0.0 {
        // p -> ∞: the superdiagonal is already zero and the subdiagonal
        // contribution μ_i / p vanishes, leaving the diagonal itself.
        let row_margins: Vec<f64> = (0..m).map(|k| mat[(k, k)]).collect();
        let lower_bound = row_margins.iter().fold(f64::INFINITY, |a: f64, b| a.min(*b));
        return Ok(DominanceCertificate {
            p: f64::INFINITY,
            row_margins,
            lower_bound,
            max_row_residual: 0.0,
        });
    }

    let p = 0.5 * (1.0 + 1.0 / eps_max);
    // B_kj = R_kj p_j / p_k = R_kj p^(j-k).
    let scaled = DMatrix::from_fn(m, m, |k, j| mat[(k, j)] * p.powi(j as i32 - k as i32));

    let mut max_row_residual: f64 = 0.0;
    let mut row_margins = Vec::with_capacity(m);
    for k in 0..m {
        let mu = cfg.gains[k];
        let eps = cfg.asymmetries[k];
        let mut expected = vec![(k, mu * (1.0 + eps))];
        if k > 0 {
            expected.push((k - 1, -mu / p));
        }
        if k + 1 < m {
            expected.push((k + 1, -p * mu * eps));
        }
        for (j, want) in expected {
            let dev = (scaled[(k, j)] - want).abs() / want.abs().max(1.0);
            max_row_residual = max_row_residual.max(dev);
        }
        let off: f64 = (0..m).filter(|&j| j != k).map(|j| scaled[(k, j)].abs()).sum();
        row_margins.push(scaled[(k, k)] - off);
    }
    if max_row_residual > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "scaled row deviates from closed form by {max_row_residual:e}"
        )));
    }
    let lower_bound = row_margins.iter().fold(f64::INFINITY, |a: f64, b| a.min(*b));
    Ok(DominanceCertificate {
        p,
        row_margins,
        lower_bound,
        max_row_residual,
    })
}
