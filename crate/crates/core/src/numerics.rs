//! Real-coefficient polynomials and rational transfer functions.
//!
//! Coefficients are stored in ascending order: `coeffs[k]` multiplies `s^k`.
//! Nothing in this module cancels common factors between a numerator and a
//! denominator, so hidden modes always survive into stability checks.

use std::fmt;
use std::ops::Mul;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex frequency-domain value.
pub type ComplexValue = Complex64;

/// Relative threshold below which trailing coefficients are dropped.
const TRIM_REL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<f64>", into = "Vec<f64>")]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Builds a polynomial from ascending coefficients and normalizes it.
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Polynomial { coeffs };
        p.normalize();
        p
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![0.0] }
    }

    pub fn constant(c: f64) -> Self {
        Polynomial::new(vec![c])
    }

    /// `s^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        Polynomial { coeffs }
    }

    /// Monic polynomial with the given real roots.
    pub fn from_real_roots(roots: &[f64]) -> Self {
        roots.iter().fold(Polynomial::constant(1.0), |acc, &r| {
            &acc * &Polynomial::new(vec![-r, 1.0])
        })
    }

    fn normalize(&mut self) {
        let max = self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        if max == 0.0 {
            self.coeffs = vec![0.0];
            return;
        }
        let cutoff = TRIM_REL * max;
        while self.coeffs.len() > 1 && self.coeffs.last().unwrap().abs() <= cutoff {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    /// Number of roots at the origin (lowest nonzero power).
    pub fn zero_multiplicity(&self) -> usize {
        if self.is_zero() {
            return 0;
        }
        self.coeffs.iter().take_while(|c| **c == 0.0).count()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Horner evaluation at a complex point.
    pub fn eval(&self, s: ComplexValue) -> ComplexValue {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() == 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| k as f64 * c)
                .collect(),
        )
    }

    pub fn scale(&self, c: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// `self + c * other`, zero-padded to the longer length.
    pub fn add_scaled(&self, other: &Polynomial, c: f64) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| {
                let a = self.coeffs.get(k).copied().unwrap_or(0.0);
                let b = other.coeffs.get(k).copied().unwrap_or(0.0);
                a + c * b
            })
            .collect();
        Polynomial::new(coeffs)
    }

    /// All complex roots, as eigenvalues of the companion matrix of the
    /// monic normalization, polished with a few guarded Newton steps.
    pub fn roots(&self) -> Result<Vec<ComplexValue>> {
        let n = self.degree();
        if n == 0 {
            return Err(Error::NoRoots);
        }
        let lead = self.leading();
        if n == 1 {
            return Ok(vec![Complex64::new(-self.coeffs[0] / lead, 0.0)]);
        }
        let mut companion = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            companion[(i, i - 1)] = 1.0;
        }
        for i in 0..n {
            companion[(i, n - 1)] = -self.coeffs[i] / lead;
        }
        let dp = self.derivative();
        let roots = companion
            .complex_eigenvalues()
            .iter()
            .map(|&r| self.polish(&dp, r))
            .collect();
        Ok(roots)
    }

    fn polish(&self, dp: &Polynomial, mut r: ComplexValue) -> ComplexValue {
        let mut res = self.eval(r).norm();
        for _ in 0..4 {
            let d = dp.eval(r);
            if d.norm() == 0.0 || res == 0.0 {
                break;
            }
            let cand = r - self.eval(r) / d;
            let cand_res = self.eval(cand).norm();
            if cand_res.is_nan() || cand_res >= res {
                break;
            }
            r = cand;
            res = cand_res;
        }
        r
    }
}

impl From<Vec<f64>> for Polynomial {
    fn from(coeffs: Vec<f64>) -> Self {
        Polynomial::new(coeffs)
    }
}

impl From<Polynomial> for Vec<f64> {
    fn from(p: Polynomial) -> Self {
        p.coeffs
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0.0 && self.coeffs.len() > 1 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}s")?,
                _ => write!(f, "{c}s^{k}")?,
            }
        }
        Ok(())
    }
}

/// Ratio of two real polynomials in the Laplace variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalTF {
    num: Polynomial,
    den: Polynomial,
}

impl RationalTF {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(RationalTF { num, den })
    }

    pub fn from_coeffs(num: Vec<f64>, den: Vec<f64>) -> Result<Self> {
        RationalTF::new(Polynomial::new(num), Polynomial::new(den))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    /// deg(num) <= deg(den).
    pub fn is_proper(&self) -> bool {
        self.num.degree() <= self.den.degree() || self.num.is_zero()
    }

    /// Number of integrators (poles at the origin not matched by zeros there).
    pub fn integrators(&self) -> usize {
        self.den
            .zero_multiplicity()
            .saturating_sub(self.num.zero_multiplicity())
    }

    pub fn eval(&self, s: ComplexValue) -> Result<ComplexValue> {
        let d = self.den.eval(s);
        if d.norm() == 0.0 {
            return Err(Error::PoleAtEvaluation);
        }
        Ok(self.num.eval(s) / d)
    }

    /// Series connection, no cancellation.
    pub fn series(&self, other: &RationalTF) -> RationalTF {
        RationalTF {
            num: &self.num * &other.num,
            den: &self.den * &other.den,
        }
    }

    pub fn poles(&self) -> Result<Vec<ComplexValue>> {
        self.den.roots()
    }
}

impl fmt::Display for RationalTF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}
