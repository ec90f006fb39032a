//! Frequency-domain analysis of the platoon.
//!
//! The transfer function from the input of the first follower to the
//! position of the last vehicle factors into a series connection of
//! closed-loop blocks, one per reduced-Laplacian eigenvalue:
//!
//! ```text
//! T_N(s) = (1/μ₂) ∏ λᵢ·M(s) / (1 + λᵢ·M(s)),   M = C·G
//! ```
//!
//! [`product_response`] evaluates this factorization; [`direct_response`]
//! solves the full interconnected state-space model and serves as the
//! independent check. The harmonic-instability test looks at the single
//! block built from the smallest eigenvalue: when its peak gain exceeds one
//! and the eigenvalues admit a size-independent lower bound, every block
//! amplifies at that peak frequency and the platoon gain grows
//! geometrically with its length.

use std::f64::consts::PI;

use log::warn;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ComplexValue, RationalTF};
use crate::platoon::{self, PlatoonConfig, SpectrumReport};
use crate::statespace::{controllable_canonical, interconnect};

/// Real part below which a pole counts as stable.
pub const STABILITY_MARGIN: f64 = 1e-9;

/// `M(s) = C(s)·G(s)`, numerator `Q·B`, denominator `P·A`, no cancellation.
pub fn open_loop(cfg: &PlatoonConfig) -> RationalTF {
    cfg.controller().series(cfg.vehicle())
}

/// Closed loop of `λ·M` under unit negative feedback.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub lambda: f64,
    pub tf: RationalTF,
}

/// `λ·num(M) / (den(M) + λ·num(M))`.
pub fn make_block(lambda: f64, m: &RationalTF) -> Result<Block> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "block gain must be positive, got {lambda}"
        )));
    }
    let num = m.num().scale(lambda);
    let den = m.den().add_scaled(m.num(), lambda);
    Ok(Block {
        lambda,
        tf: RationalTF::new(num, den)?,
    })
}

impl Block {
    pub fn eval(&self, omega: f64) -> Result<ComplexValue> {
        self.tf.eval(Complex64::new(0.0, omega))
    }

    pub fn is_stable(&self) -> Result<bool> {
        block_stable(self)
    }
}

/// Every closed-loop pole strictly in the left half plane.
pub fn block_stable(b: &Block) -> Result<bool> {
    if b.tf.den().degree() == 0 {
        return Ok(true);
    }
    Ok(b.tf.poles()?.iter().all(|p| p.re < -STABILITY_MARGIN))
}

/// Product-form platoon response with the blocks precomputed.
#[derive(Debug, Clone)]
pub struct ProductForm {
    pub leader_gain: f64,
    pub blocks: Vec<Block>,
}

impl ProductForm {
    pub fn new(cfg: &PlatoonConfig) -> Result<Self> {
        let spec = platoon::spectrum(cfg)?;
        Self::from_spectrum(cfg, &spec)
    }

    pub fn from_spectrum(cfg: &PlatoonConfig, spec: &SpectrumReport) -> Result<Self> {
        let m = open_loop(cfg);
        let blocks = spec
            .eigenvalues
            .iter()
            .map(|&l| make_block(l, &m))
            .collect::<Result<Vec<_>>>()?;
        Ok(ProductForm {
            leader_gain: cfg.leader_gain(),
            blocks,
        })
    }

    pub fn all_stable(&self) -> Result<bool> {
        for b in &self.blocks {
            if !block_stable(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `(ln|T_N(jω)|, arg T_N(jω))`, accumulated block by block.
    pub fn log_response(&self, omega: f64) -> Result<(f64, f64)> {
        let mut log_mag = -self.leader_gain.ln();
        let mut phase = 0.0;
        for b in &self.blocks {
            let v = b.eval(omega)?;
            log_mag += v.norm().ln();
            phase += v.arg();
        }
        if !log_mag.is_finite() && log_mag != f64::NEG_INFINITY {
            return Err(Error::NonFiniteResponse(omega));
        }
        Ok((log_mag, wrap_phase(phase)))
    }

    pub fn eval(&self, omega: f64) -> Result<ComplexValue> {
        let (lm, ph) = self.log_response(omega)?;
        Ok(Complex64::from_polar(lm.exp(), ph))
    }

    pub fn magnitude(&self, omega: f64) -> Result<f64> {
        Ok(self.log_response(omega)?.0.exp())
    }

    pub fn magnitude_db(&self, omega: f64) -> Result<f64> {
        Ok(self.log_response(omega)?.0 * 20.0 / std::f64::consts::LN_10)
    }
}

fn wrap_phase(p: f64) -> f64 {
    let w = (p + PI).rem_euclid(2.0 * PI) - PI;
    if w == -PI {
        PI
    } else {
        w
    }
}

/// `T_N(jω) = (1/μ₂) ∏ Γ̄ᵢ(jω)`.
pub fn product_response(cfg: &PlatoonConfig, omega: f64) -> Result<ComplexValue> {
    let pf = ProductForm::new(cfg)?;
    if !pf.all_stable()? {
        warn!("evaluating the product form with unstable closed-loop blocks");
    }
    pf.eval(omega)
}

/// `T_N(jω)` from the full N-vehicle state-space model (leader included),
/// input at the first follower, output the last vehicle's position.
///
/// At ω = 0 the leader's integrators make the solve singular, so the DC
/// value falls back to the product form there.
pub fn direct_response(cfg: &PlatoonConfig, omega: f64) -> Result<ComplexValue> {
    let m = open_loop(cfg);
    if omega == 0.0 && m.integrators() > 0 {
        return product_response(cfg, 0.0);
    }
    let agent = controllable_canonical(&m)?;
    let lap = platoon::build_laplacian(cfg);
    let ss = interconnect(&agent, lap.matrix())?;
    ss.transfer(omega, cfg.n() - 1, 1)
}

/// Frequency band scanned by the H∞ search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Default for Band {
    fn default() -> Self {
        Band {
            lo: 1e-3,
            hi: 1e3,
            points: 2000,
        }
    }
}

impl Band {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "frequency band must satisfy 0 < lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Band {
            lo,
            hi,
            ..Band::default()
        })
    }

    /// `points` log-spaced frequencies from `lo` to `hi` inclusive.
    pub fn grid(&self) -> Vec<f64> {
        log_space(self.lo, self.hi, self.points)
    }
}

pub fn log_space(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|k| {
            if k == 0 {
                lo
            } else if k == points - 1 {
                hi
            } else {
                (a + (b - a) * k as f64 / (points - 1) as f64).exp()
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HinfResult {
    pub gamma: f64,
    pub omega0: f64,
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Peak of `magnitude` over the band plus the DC value.
///
/// Scans the log-spaced grid, then refines the best bracket by golden
/// section in `ln ω` down to a relative width of 1e-8. Equal peaks (within
/// 1e-9 relative) resolve to the smallest frequency; DC wins ties.
pub fn hinf_norm<F>(magnitude: F, band: &Band) -> Result<HinfResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let checked = |w: f64| -> Result<f64> {
        let v = magnitude(w).map_err(|e| match e {
            Error::PoleAtEvaluation => Error::NonFiniteResponse(w),
            other => other,
        })?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteResponse(w))
        }
    };
    let grid = band.grid();
    let values = grid
        .par_iter()
        .map(|&w| checked(w))
        .collect::<Result<Vec<f64>>>()?;
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let best = values
        .iter()
        .position(|&v| v >= max * (1.0 - 1e-9))
        .unwrap();

    let mut gamma = values[best];
    let mut omega0 = grid[best];
    let lo = grid[best.saturating_sub(1)].ln();
    let hi = grid[(best + 1).min(grid.len() - 1)].ln();
    if hi > lo {
        let (w, v) = golden_max(|x| checked(x.exp()), lo, hi, 1e-8)?;
        if v > gamma {
            gamma = v;
            omega0 = w.exp();
        }
    }
    let dc = checked(0.0)?;
    if dc >= gamma * (1.0 - 1e-9) {
        return Ok(HinfResult {
            gamma: dc.max(gamma),
            omega0: 0.0,
        });
    }
    Ok(HinfResult { gamma, omega0 })
}

/// Golden-section maximization on `[a, b]` until `b − a ≤ tol`.
fn golden_max<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}

/// Golden-section minimization on `[a, b]` until `b − a ≤ tol`.
fn golden_min<F>(f: F, a: f64, b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let (x, v) = golden_max(|x| f(x).map(|v| -v), a, b, tol)?;
    Ok((x, -v))
}

/// Squared modulus of `κ(α+jβ) / (1 + κ(α+jβ))`, written as
/// `1 − (2κα+1) / ((κα+1)² + κ²β²)`.
pub fn kappa_modulus_sq(kappa: f64, alpha: f64, beta: f64) -> Result<f64> {
    let den = (kappa * alpha + 1.0).powi(2) + (kappa * beta).powi(2);
    if den == 0.0 {
        return Err(Error::ClosedLoopPoleAtPeak);
    }
    Ok(1.0 - (2.0 * kappa * alpha + 1.0) / den)
}

/// Smallest modulus at the peak frequency over `κ ∈ [1, kappa_max]`, given
/// the scaled open loop `λ_min·M(jω₀) = α + jβ`.
pub fn zeta_min_from(alpha: f64, beta: f64, kappa_max: f64) -> Result<f64> {
    let kappa_max = kappa_max.max(1.0);
    let f = |k: f64| kappa_modulus_sq(k, alpha, beta);
    if kappa_max == 1.0 {
        return Ok(f(1.0)?.sqrt());
    }
    // Coarse scan seeds the golden section; endpoints always compete.
    let samples = 64;
    let ks: Vec<f64> = (0..=samples)
        .map(|i| 1.0 + (kappa_max - 1.0) * i as f64 / samples as f64)
        .collect();
    let vals = ks.iter().map(|&k| f(k)).collect::<Result<Vec<_>>>()?;
    let (i_best, mut best) = vals
        .iter()
        .cloned()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
    let a = ks[i_best.saturating_sub(1)];
    let b = ks[(i_best + 1).min(samples)];
    let (_, refined) = golden_min(f, a, b, 1e-10)?;
    best = best.min(refined);
    Ok(best.sqrt())
}

/// Outcome of the single-block test at one choice of the smallest eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimalBlockTest {
    pub lambda_min_used: f64,
    /// Upper end of the κ = λ/λ_min interval.
    pub kappa_max: f64,
    pub hinf_gamma_min: f64,
    pub omega0: f64,
    /// `Re(λ_min·M(jω₀))`; absent when the peak sits at DC.
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    /// Defined only when the peak exceeds 1.
    pub zeta_min: Option<f64>,
}

/// Runs the minimal-block test with `lambda_min` and eigenvalues known to
/// lie in `[lambda_min, lambda_max]`.
pub fn minimal_block_test(
    m: &RationalTF,
    lambda_min: f64,
    lambda_max: f64,
    band: &Band,
) -> Result<MinimalBlockTest> {
    let block = make_block(lambda_min, m)?;
    let h = hinf_norm(|w| Ok(block.eval(w)?.norm()), band)?;
    let kappa_max = (lambda_max / lambda_min).max(1.0);
    let (alpha, beta) = if h.omega0 > 0.0 {
        let v = m.eval(Complex64::new(0.0, h.omega0))? * lambda_min;
        (Some(v.re), Some(v.im))
    } else {
        (None, None)
    };
    let zeta_min = match (alpha, beta) {
        (Some(a), Some(b)) if h.gamma > 1.0 => Some(zeta_min_from(a, b, kappa_max)?),
        _ => None,
    };
    Ok(MinimalBlockTest {
        lambda_min_used: lambda_min,
        kappa_max,
        hinf_gamma_min: h.gamma,
        omega0: h.omega0,
        alpha,
        beta,
        zeta_min,
    })
}

/// ζ_min for the instantiated platoon: smallest block modulus at the peak
/// frequency of the Fiedler block, over κ ∈ [1, λ_max/λ_min].
pub fn zeta_min(cfg: &PlatoonConfig) -> Result<f64> {
    zeta_min_with_band(cfg, &Band::default())
}

pub fn zeta_min_with_band(cfg: &PlatoonConfig, band: &Band) -> Result<f64> {
    let spec = platoon::spectrum(cfg)?;
    let lmax = *spec.eigenvalues.last().unwrap();
    let t = minimal_block_test(&open_loop(cfg), spec.fiedler, lmax, band)?;
    t.zeta_min.ok_or(Error::ZetaUndefined(t.hinf_gamma_min))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    HarmonicallyUnstable,
    TestInconclusive,
    UnstableBlocks,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicVerdict {
    /// `[lo, hi]` rad/s scanned for every peak.
    pub band: [f64; 2],
    pub all_blocks_stable: bool,
    /// Test with the actual Fiedler value of this platoon.
    pub fiedler: Option<MinimalBlockTest>,
    /// Test with the size-independent lower bound (scaled by the smallest
    /// gain when that is below 1); absent when no such bound exists.
    pub uniform_bound: Option<MinimalBlockTest>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notices: Vec<String>,
}

pub fn harmonic_test(cfg: &PlatoonConfig) -> Result<HarmonicVerdict> {
    harmonic_test_with_band(cfg, &Band::default())
}

/// Sufficient test for harmonic instability.
///
/// The verdict fires only through the uniform-bound route: the eigenvalues
/// must have a size-independent lower bound and the block at that bound must
/// peak above 1. The Fiedler route is always reported alongside.
pub fn harmonic_test_with_band(cfg: &PlatoonConfig, band: &Band) -> Result<HarmonicVerdict> {
    let spec = platoon::spectrum(cfg)?;
    let m = open_loop(cfg);
    let pf = ProductForm::from_spectrum(cfg, &spec)?;
    let mut notices = spec.notices.clone();
    let band_arr = [band.lo, band.hi];

    if !pf.all_stable()? {
        return Ok(HarmonicVerdict {
            band: band_arr,
            all_blocks_stable: false,
            fiedler: None,
            uniform_bound: None,
            verdict: Verdict::UnstableBlocks,
            notices,
        });
    }

    let lmax = *spec.eigenvalues.last().unwrap();
    let fiedler = minimal_block_test(&m, spec.fiedler, lmax, band)?;

    let uniform_bound = match spec.uniform_lower {
        Some(bound) => {
            let certified = bound * cfg.min_gain().min(1.0);
            if block_stable(&make_block(certified, &m)?)? {
                Some(minimal_block_test(&m, certified, spec.gershgorin_upper, band)?)
            } else {
                notices.push(format!(
                    "closed loop at the uniform bound {certified} is unstable; bound route skipped"
                ));
                None
            }
        }
        None => None,
    };

    let verdict = match &uniform_bound {
        Some(t) if t.hinf_gamma_min > 1.0 => Verdict::HarmonicallyUnstable,
        _ => Verdict::TestInconclusive,
    };
    Ok(HarmonicVerdict {
        band: band_arr,
        all_blocks_stable: true,
        fiedler: Some(fiedler),
        uniform_bound,
        verdict,
        notices,
    })
}

/// Per-index gain and asymmetry rules for a family of platoons of varying
/// length. Patterns repeat along the platoon; a single entry is constant.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyTemplate {
    pub gains: Vec<f64>,
    pub asymmetries: Vec<f64>,
    pub vehicle: RationalTF,
    pub controller: RationalTF,
    pub ref_distance: f64,
}

impl FamilyTemplate {
    pub fn homogeneous(gain: f64, asymmetry: f64, vehicle: RationalTF, controller: RationalTF) -> Self {
        FamilyTemplate {
            gains: vec![gain],
            asymmetries: vec![asymmetry],
            vehicle,
            controller,
            ref_distance: 1.0,
        }
    }

    pub fn instantiate(&self, n: usize) -> Result<PlatoonConfig> {
        if self.gains.is_empty() || self.asymmetries.is_empty() {
            return Err(Error::InvalidArgument("empty family pattern".into()));
        }
        if n < 2 {
            return Err(Error::config("n", format!("need at least 2 vehicles, got {n}")));
        }
        let gains = (0..n - 1).map(|i| self.gains[i % self.gains.len()]).collect();
        let mut asym: Vec<f64> = (0..n - 1)
            .map(|i| self.asymmetries[i % self.asymmetries.len()])
            .collect();
        *asym.last_mut().unwrap() = 0.0;
        PlatoonConfig::new(
            n,
            gains,
            asym,
            self.vehicle.clone(),
            self.controller.clone(),
            self.ref_distance,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaRow {
    pub n: usize,
    /// `sup_ω |T_N(jω)|`.
    pub gamma: f64,
    pub gamma_root_n: f64,
    /// `ζ_min^{N−1} / μ₂`, a lower bound on γ_N when the Fiedler block peaks
    /// above 1.
    pub zeta_min_lower: Option<f64>,
}

pub fn gamma_sequence(template: &FamilyTemplate, n_list: &[usize], band: &Band) -> Result<Vec<GammaRow>> {
    n_list
        .par_iter()
        .map(|&n| gamma_row(template, n, band))
        .collect()
}

fn gamma_row(template: &FamilyTemplate, n: usize, band: &Band) -> Result<GammaRow> {
    let cfg = template.instantiate(n)?;
    let spec = platoon::spectrum(&cfg)?;
    let pf = ProductForm::from_spectrum(&cfg, &spec)?;
    if !pf.all_stable()? {
        warn!("N = {n}: closed-loop blocks unstable, γ_N is not an H∞ norm");
    }
    let h = hinf_norm(|w| pf.magnitude(w), band)?;
    let lmax = *spec.eigenvalues.last().unwrap();
    let test = minimal_block_test(&open_loop(&cfg), spec.fiedler, lmax, band)?;
    let zeta_min_lower = test
        .zeta_min
        .map(|z| z.powi(n as i32 - 1) / cfg.leader_gain());
    Ok(GammaRow {
        n,
        gamma: h.gamma,
        gamma_root_n: h.gamma.powf(1.0 / n as f64),
        zeta_min_lower,
    })
}

/// Sampled frequency response.
#[derive(Debug, Clone, PartialEq)]
pub struct FreqSeries {
    pub omegas: Vec<f64>,
    pub values: Vec<ComplexValue>,
}

impl FreqSeries {
    pub fn magnitudes_db(&self) -> Vec<f64> {
        self.values.iter().map(|v| 20.0 * v.norm().log10()).collect()
    }
}

/// `μ₂·T_N(jω)` (the leader-position to last-vehicle map) on a log grid.
pub fn leader_to_last_response(cfg: &PlatoonConfig, band: &Band, points: usize) -> Result<FreqSeries> {
    let pf = ProductForm::new(cfg)?;
    let omegas = log_space(band.lo, band.hi, points);
    let values = omegas
        .par_iter()
        .map(|&w| pf.eval(w).map(|v| v * pf.leader_gain))
        .collect::<Result<Vec<_>>>()?;
    Ok(FreqSeries { omegas, values })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResiduals {
    /// `|Σ hᵢ λᵢ^m|` for `m = 0..=N−3`.
    pub power_sums: Vec<f64>,
    /// `|Σ hᵢ/λᵢ − 1/μ₂|`.
    pub inverse_sum: f64,
    /// `Σ hᵢ/λᵢ` itself.
    pub inverse_sum_value: f64,
}

impl IdentityResiduals {
    pub fn max_residual(&self) -> f64 {
        self.power_sums
            .iter()
            .cloned()
            .fold(self.inverse_sum, f64::max)
    }
}

/// Minimum gap between consecutive eigenvalues for the identities.
pub const SIMPLE_SPECTRUM_GAP: f64 = 1e-8;

/// Checks the eigenvector identities behind the product form, with
/// `hᵢ = gᵢ·v_{N,i}` and `g = V⁻¹e₂` from a numerical eigendecomposition
/// of the full Laplacian.
pub fn verify_eigen_identities(cfg: &PlatoonConfig) -> Result<IdentityResiduals> {
    let spec = platoon::spectrum(cfg)?;
    let gap = spec
        .eigenvalues
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    if gap <= SIMPLE_SPECTRUM_GAP {
        return Err(Error::DefectiveSpectrum(gap));
    }
    let n = cfg.n();
    let lap = platoon::build_laplacian(cfg);
    let l = lap.matrix();
    let mut lambdas = vec![0.0];
    lambdas.extend_from_slice(&spec.eigenvalues);

    let mut v = DMatrix::<f64>::zeros(n, n);
    for (col, &lam) in lambdas.iter().enumerate() {
        let shifted = l - DMatrix::<f64>::identity(n, n) * lam;
        let svd = shifted.svd(false, true);
        let v_t = svd.v_t.expect("requested right singular vectors");
        let k = svd
            .singular_values
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc })
            .0;
        for row in 0..n {
            v[(row, col)] = v_t[(k, row)];
        }
    }
    let mut e2 = nalgebra::DVector::<f64>::zeros(n);
    e2[1] = 1.0;
    let g = v
        .clone()
        .lu()
        .solve(&e2)
        .ok_or(Error::DefectiveSpectrum(gap))?;
    let h: Vec<f64> = (1..n).map(|i| g[i] * v[(n - 1, i)]).collect();
    let lam = &spec.eigenvalues;

    let power_sums = (0..n.saturating_sub(2))
        .map(|m| {
            h.iter()
                .zip(lam)
                .map(|(hi, li)| hi * li.powi(m as i32))
                .sum::<f64>()
                .abs()
        })
        .collect();
    let inverse_sum_value: f64 = h.iter().zip(lam).map(|(hi, li)| hi / li).sum();
    Ok(IdentityResiduals {
        power_sums,
        inverse_sum: (inverse_sum_value - 1.0 / cfg.leader_gain()).abs(),
        inverse_sum_value,
    })
}
