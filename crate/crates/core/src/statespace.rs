//! State-space realizations and Laplacian-coupled interconnections.

use nalgebra::{DMatrix, DVector, RowDVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::RationalTF;

/// Single-input single-output realization `(A, b, c, d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: RowDVector<f64>,
    pub d: f64,
}

impl Realization {
    pub fn order(&self) -> usize {
        self.a.nrows()
    }
}

/// Controllable canonical form of a proper transfer function.
pub fn controllable_canonical(tf: &RationalTF) -> Result<Realization> {
    if !tf.is_proper() {
        return Err(Error::ImproperOpenLoop);
    }
    let den = tf.den();
    let n = den.degree();
    if n == 0 {
        return Err(Error::InvalidArgument(
            "open loop has no dynamics (constant denominator)".into(),
        ));
    }
    let lead = den.leading();
    let a_coef: Vec<f64> = den.coeffs().iter().map(|c| c / lead).collect();
    let num: Vec<f64> = tf.num().coeffs().iter().map(|c| c / lead).collect();
    let d = if num.len() == n + 1 { num[n] } else { 0.0 };

    let mut a = DMatrix::zeros(n, n);
    for i in 0..n - 1 {
        a[(i, i + 1)] = 1.0;
    }
    for j in 0..n {
        a[(n - 1, j)] = -a_coef[j];
    }
    let mut b = DVector::zeros(n);
    b[n - 1] = 1.0;
    let c = RowDVector::from_fn(n, |_, j| num.get(j).copied().unwrap_or(0.0) - d * a_coef[j]);
    Ok(Realization { a, b, c, d })
}

/// Multi-input multi-output state space `ẋ = Ax + Bu`, `y = Cx + Du`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub d: DMatrix<f64>,
}

impl StateSpace {
    pub fn states(&self) -> usize {
        self.a.nrows()
    }

    /// Entry `(output, input)` of `C(jωI − A)⁻¹B + D`, by one dense complex
    /// solve.
    pub fn transfer(&self, omega: f64, output: usize, input: usize) -> Result<Complex64> {
        let n = self.states();
        let s = Complex64::new(0.0, omega);
        let lhs = DMatrix::from_fn(n, n, |i, j| {
            let diag = if i == j { s } else { Complex64::new(0.0, 0.0) };
            diag - self.a[(i, j)]
        });
        let rhs = DVector::from_fn(n, |i, _| Complex64::new(self.b[(i, input)], 0.0));
        let x = lhs
            .lu()
            .solve(&rhs)
            .ok_or(Error::ResponseUndefined(omega))?;
        let y: Complex64 = (0..n).map(|i| x[i] * self.c[(output, i)]).sum();
        let out = y + self.d[(output, input)];
        if !(out.re.is_finite() && out.im.is_finite()) {
            return Err(Error::ResponseUndefined(omega));
        }
        Ok(out)
    }
}

/// Couples identical agents through `coupling`: agent `i` receives
/// `u_i = −Σ_j coupling[i][j] y_j + w_i`, with `w` the exogenous inputs of
/// the returned system (one per agent) and `y` its outputs (one per agent).
pub fn interconnect(agent: &Realization, coupling: &DMatrix<f64>) -> Result<StateSpace> {
    let m = coupling.nrows();
    let eye = DMatrix::<f64>::identity(m, m);
    let a_blk = eye.kronecker(&agent.a);
    let b_blk = eye.kronecker(&DMatrix::from_column_slice(agent.order(), 1, agent.b.as_slice()));
    let c_blk = eye.kronecker(&DMatrix::from_row_slice(1, agent.order(), agent.c.as_slice()));

    // Direct feedthrough closes an algebraic loop: (I + dL) u = −L C x + w.
    let k = if agent.d == 0.0 {
        eye
    } else {
        (&eye + coupling * agent.d)
            .try_inverse()
            .ok_or_else(|| Error::InvalidArgument("algebraic loop is singular".into()))?
    };
    let klc = &k * coupling * &c_blk;
    let a = &a_blk - &b_blk * &klc;
    let b = &b_blk * &k;
    let c = &c_blk - &klc * agent.d;
    let d = &k * agent.d;
    Ok(StateSpace { a, b, c, d })
}
