//! Fixed-step time simulation of the leaderless platoon.
//!
//! The leader is an exogenous position signal entering the first follower
//! through its gain μ₂. States are deviations from the steady spacing, so the
//! reference distance never enters the dynamics.

use log::warn;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::analysis::{make_block, open_loop};
use crate::error::{Error, Result};
use crate::platoon::{self, PlatoonConfig};
use crate::statespace::{controllable_canonical, interconnect};

/// dt must resolve the fastest closed-loop oscillation with this many steps.
pub const STEPS_PER_PERIOD: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LeaderSignal {
    Step { amplitude: f64 },
    Sine { amplitude: f64, omega: f64 },
}

impl LeaderSignal {
    pub fn at(&self, t: f64) -> f64 {
        match *self {
            LeaderSignal::Step { amplitude } => amplitude,
            LeaderSignal::Sine { amplitude, omega } => amplitude * (omega * t).sin(),
        }
    }

    fn scaled(&self, k: f64) -> LeaderSignal {
        match *self {
            LeaderSignal::Step { amplitude } => LeaderSignal::Step {
                amplitude: k * amplitude,
            },
            LeaderSignal::Sine { amplitude, omega } => LeaderSignal::Sine {
                amplitude: k * amplitude,
                omega,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimScenario {
    pub cfg: PlatoonConfig,
    pub leader_signal: LeaderSignal,
    pub t_end: f64,
    pub dt: f64,
}

impl SimScenario {
    pub fn unit_step(cfg: PlatoonConfig, t_end: f64, dt: f64) -> Self {
        SimScenario {
            cfg,
            leader_signal: LeaderSignal::Step { amplitude: 1.0 },
            t_end,
            dt,
        }
    }

    pub fn with_amplitude_scaled(&self, k: f64) -> Self {
        SimScenario {
            leader_signal: self.leader_signal.scaled(k),
            ..self.clone()
        }
    }
}

/// Follower positions over time, relative to the steady formation.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    /// `deviations[k][i]`: vehicle `i + 2` at `times[k]`.
    pub deviations: Vec<Vec<f64>>,
}

impl TimeSeries {
    pub fn vehicles(&self) -> usize {
        self.deviations.first().map_or(0, |r| r.len())
    }

    /// Trajectory of follower `i` (0-based, so vehicle `i + 2`).
    pub fn vehicle(&self, i: usize) -> Vec<f64> {
        self.deviations.iter().map(|r| r[i]).collect()
    }

    pub fn last_vehicle(&self) -> Vec<f64> {
        self.vehicle(self.vehicles() - 1)
    }

    /// Absolute positions with the leader starting at 0 and vehicle `i`
    /// trailing by `(i − 1)·δ`.
    pub fn absolute_positions(&self, ref_distance: f64) -> Vec<Vec<f64>> {
        self.deviations
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(i, x)| x - (i + 1) as f64 * ref_distance)
                    .collect()
            })
            .collect()
    }
}

/// Leader-driven reduced platoon: `ẋ = Ax + b·x₁(t)`, `y = Cx + d·x₁(t)`
/// with one output per follower.
#[derive(Debug, Clone, PartialEq)]
pub struct PlatoonStateSpace {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: DMatrix<f64>,
    pub d: DVector<f64>,
}

impl PlatoonStateSpace {
    pub fn states(&self) -> usize {
        self.a.nrows()
    }

    /// Leader position to follower `output` at `jω`.
    pub fn transfer(&self, omega: f64, output: usize) -> Result<num_complex::Complex64> {
        let ss = crate::statespace::StateSpace {
            a: self.a.clone(),
            b: DMatrix::from_column_slice(self.b.len(), 1, self.b.as_slice()),
            c: self.c.clone(),
            d: DMatrix::from_column_slice(self.d.len(), 1, self.d.as_slice()),
        };
        ss.transfer(omega, output, 0)
    }
}

pub fn build_state_space(cfg: &PlatoonConfig) -> Result<PlatoonStateSpace> {
    let m = open_loop(cfg);
    let agent = controllable_canonical(&m)?;
    let reduced = platoon::build_laplacian(cfg).reduce();
    let ss = interconnect(&agent, reduced.matrix())?;
    let mu2 = cfg.leader_gain();
    Ok(PlatoonStateSpace {
        b: ss.b.column(0) * mu2,
        d: ss.d.column(0) * mu2,
        a: ss.a,
        c: ss.c,
    })
}

/// Largest allowed step and the largest closed-loop pole real part.
fn step_limits(cfg: &PlatoonConfig) -> Result<(f64, f64)> {
    let spec = platoon::spectrum(cfg)?;
    let m = open_loop(cfg);
    let mut fastest: f64 = 0.0;
    let mut max_re = f64::NEG_INFINITY;
    for &l in &spec.eigenvalues {
        let block = make_block(l, &m)?;
        if block.tf.den().degree() == 0 {
            continue;
        }
        for p in block.tf.poles()? {
            fastest = fastest.max(p.im.abs());
            max_re = max_re.max(p.re);
        }
    }
    let dt_max = if fastest > 0.0 {
        2.0 * std::f64::consts::PI / fastest / STEPS_PER_PERIOD
    } else {
        f64::INFINITY
    };
    Ok((dt_max, max_re))
}

/// Classic RK4 from the zero deviation state.
pub fn simulate(sc: &SimScenario) -> Result<TimeSeries> {
    if !(sc.dt > 0.0 && sc.dt.is_finite()) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {}", sc.dt)));
    }
    if sc.t_end.is_nan() || sc.t_end < sc.dt {
        return Err(Error::InvalidArgument(format!(
            "t_end = {} must be at least dt = {}",
            sc.t_end, sc.dt
        )));
    }
    let (dt_max, max_re) = step_limits(&sc.cfg)?;
    if sc.dt > dt_max {
        return Err(Error::StepTooLarge {
            dt: sc.dt,
            required: dt_max,
        });
    }
    let mut t_end = sc.t_end;
    if max_re >= 0.0 {
        let cap = if max_re > 0.0 { 10.0 / max_re } else { t_end };
        warn!("closed-loop blocks are not stable; capping t_end at {}", cap.min(t_end));
        t_end = t_end.min(cap);
    }

    let ss = build_state_space(&sc.cfg)?;
    let steps = (t_end / sc.dt).round() as usize;
    let dt = sc.dt;
    let input = |t: f64| sc.leader_signal.at(t);
    let deriv = |x: &DVector<f64>, u: f64| -> DVector<f64> { &ss.a * x + &ss.b * u };
    let output = |x: &DVector<f64>, u: f64| -> Vec<f64> { (&ss.c * x + &ss.d * u).iter().copied().collect() };

    let mut x = DVector::zeros(ss.states());
    let mut times = Vec::with_capacity(steps + 1);
    let mut deviations = Vec::with_capacity(steps + 1);
    times.push(0.0);
    deviations.push(output(&x, input(0.0)));
    for k in 0..steps {
        let t = k as f64 * dt;
        let k1 = deriv(&x, input(t));
        let k2 = deriv(&(&x + &k1 * (dt / 2.0)), input(t + dt / 2.0));
        let k3 = deriv(&(&x + &k2 * (dt / 2.0)), input(t + dt / 2.0));
        let k4 = deriv(&(&x + &k3 * dt), input(t + dt));
        x += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
        let t_next = (k + 1) as f64 * dt;
        times.push(t_next);
        deviations.push(output(&x, input(t_next)));
    }
    Ok(TimeSeries { times, deviations })
}
