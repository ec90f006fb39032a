//! Vehicle and controller models used by the reference experiments.

use crate::numerics::RationalTF;

/// `G(s) = 1/s²`.
pub fn double_integrator() -> RationalTF {
    RationalTF::from_coeffs(vec![1.0], vec![0.0, 0.0, 1.0]).unwrap()
}

/// `C(s) = (110s² + 43s + 3) / (s² + 2.9s + 1)`, stabilizing for every
/// positive loop gain over a double integrator.
pub fn benchmark_controller() -> RationalTF {
    RationalTF::from_coeffs(vec![3.0, 43.0, 110.0], vec![1.0, 2.9, 1.0]).unwrap()
}

/// Static gain `k`.
pub fn proportional(k: f64) -> RationalTF {
    RationalTF::from_coeffs(vec![k], vec![1.0]).unwrap()
}

/// `C(s) = (kd s + kp) / (tau s + 1)`.
pub fn filtered_pd(kp: f64, kd: f64, tau: f64) -> RationalTF {
    RationalTF::from_coeffs(vec![kp, kd], vec![1.0, tau]).unwrap()
}
