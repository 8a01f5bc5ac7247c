//! Fixed-step propagation of the time-dependent Schrödinger equation
//! `dC/dt = -i H(t) C` with classical fourth-order Runge-Kutta.
//!
//! The step never renormalizes: norm drift stays visible as an accuracy
//! diagnostic, and the stepper aborts if it exceeds 1e-6.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::model::SystemConfig;

/// Largest tolerated deviation of the squared norm from 1 during stepping.
pub const NORM_DRIFT_LIMIT: f64 = 1e-6;

/// Canonical width (in T0) of the trailing readout window for settled
/// observables; see [`Trajectory::trailing_mean_populations`].
pub const TRAILING_WINDOW: f64 = 5.0;

/// Complex probability amplitudes over the N levels.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Unit vector on a single 1-based level.
    pub fn basis(n_levels: usize, level: usize) -> Self {
        assert!(level >= 1 && level <= n_levels);
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); n_levels];
        amplitudes[level - 1] = Complex64::new(1.0, 0.0);
        StateVector { amplitudes }
    }

    /// The default initial condition: everything in level 1.
    pub fn ground(n_levels: usize) -> Self {
        Self::basis(n_levels, 1)
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }
}

/// Uniform time grid. The span must divide into at least ten whole steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub dt: f64,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, dt: f64) -> Result<Self> {
        let grid = TimeGrid { t_start, t_end, dt };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.t_start.is_finite() || !self.t_end.is_finite() || self.t_start >= self.t_end {
            return Err(Error::InvalidConfig {
                field: "grid.t_end",
                message: format!("need t_start < t_end, got [{}, {}]", self.t_start, self.t_end),
            });
        }
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(Error::InvalidConfig {
                field: "grid.dt",
                message: format!("step must be positive, got {}", self.dt),
            });
        }
        let ratio = (self.t_end - self.t_start) / self.dt;
        let steps = ratio.round();
        if (ratio - steps).abs() > 1e-6 * steps.max(1.0) {
            return Err(Error::InvalidConfig {
                field: "grid.dt",
                message: format!("span/dt = {ratio} is not a whole number of steps"),
            });
        }
        if steps < 10.0 {
            return Err(Error::InvalidConfig {
                field: "grid.dt",
                message: format!("grid needs at least 10 steps, got {steps}"),
            });
        }
        Ok(())
    }

    /// Number of integration steps (grid points minus one).
    pub fn steps(&self) -> usize {
        ((self.t_end - self.t_start) / self.dt).round() as usize
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.steps())
            .map(|k| self.t_start + k as f64 * self.dt)
            .collect()
    }
}

/// Time grid plus one state per grid point.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub grid: TimeGrid,
    pub states: Vec<StateVector>,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.grid.times()
    }

    pub fn initial(&self) -> &StateVector {
        self.states.first().expect("trajectory is never empty")
    }

    pub fn final_state(&self) -> &StateVector {
        self.states.last().expect("trajectory is never empty")
    }

    /// Per-grid-point populations `|C_i|^2`.
    pub fn populations(&self) -> Vec<Vec<f64>> {
        self.states.iter().map(StateVector::populations).collect()
    }

    /// Largest deviation of the squared norm from 1 over the whole grid.
    pub fn norm_drift(&self) -> f64 {
        self.states
            .iter()
            .map(|s| (s.norm_sq() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Populations averaged over the trailing `window` time units of the
    /// grid (clamped to its second half).
    ///
    /// After the pulses die out, amplitudes stranded on split eigenstates
    /// make the instantaneous populations beat at the eigenvalue gaps; the
    /// trailing mean reads out the settled values instead of an arbitrary
    /// beat phase.
    pub fn trailing_mean_populations(&self, window: f64) -> Vec<f64> {
        let t_from = (self.grid.t_end - window).max(0.5 * (self.grid.t_start + self.grid.t_end));
        let n = self.initial().len();
        let mut sums = vec![0.0; n];
        let mut count = 0usize;
        for (t, state) in self.times().iter().zip(&self.states) {
            if *t >= t_from {
                for (acc, p) in sums.iter_mut().zip(state.populations()) {
                    *acc += p;
                }
                count += 1;
            }
        }
        sums.iter().map(|s| s / count as f64).collect()
    }
}

/// Magnitudes and phases of the final manifold amplitudes, phases relative
/// to level 3 and mapped to `(-pi, pi]`.
#[derive(Debug, Clone)]
pub struct FinalSuperposition {
    pub magnitudes: Vec<f64>,
    pub relative_phases: Vec<f64>,
}

#[inline]
fn rhs(h: &SymMatrix, c: &[Complex64]) -> Vec<Complex64> {
    let hv = h.mul_complex_vec(c);
    hv.into_iter().map(|x| x * Complex64::new(0.0, -1.0)).collect()
}

/// One RK4 step from `(t, c)` with step `dt` (which may be negative).
fn rk4_step<H>(h_of: &H, t: f64, dt: f64, c: &[Complex64]) -> Result<Vec<Complex64>>
where
    H: Fn(f64) -> Result<SymMatrix>,
{
    let half = 0.5 * dt;
    let h0 = h_of(t)?;
    let h1 = h_of(t + half)?;
    let h2 = h_of(t + dt)?;

    let k1 = rhs(&h0, c);
    let c1: Vec<Complex64> = c.iter().zip(&k1).map(|(a, k)| a + half * k).collect();
    let k2 = rhs(&h1, &c1);
    let c2: Vec<Complex64> = c.iter().zip(&k2).map(|(a, k)| a + half * k).collect();
    let k3 = rhs(&h1, &c2);
    let c3: Vec<Complex64> = c.iter().zip(&k3).map(|(a, k)| a + dt * k).collect();
    let k4 = rhs(&h2, &c3);

    let sixth = dt / 6.0;
    Ok(c
        .iter()
        .enumerate()
        .map(|(i, a)| a + sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

/// Low-level fixed-step evolution under an arbitrary Hamiltonian provider.
///
/// Steps may run backward (`dt < 0`). Returns one state per grid point,
/// including the initial one, and fails on norm drift beyond 1e-6.
pub fn rk4_evolve<H>(
    h_of: H,
    t_start: f64,
    dt: f64,
    steps: usize,
    initial: &StateVector,
) -> Result<Vec<StateVector>>
where
    H: Fn(f64) -> Result<SymMatrix>,
{
    let mut states = Vec::with_capacity(steps + 1);
    states.push(initial.clone());
    let mut c = initial.amplitudes.clone();
    for k in 0..steps {
        let t = t_start + k as f64 * dt;
        c = rk4_step(&h_of, t, dt, &c)?;
        let drift = (c.iter().map(|x| x.norm_sqr()).sum::<f64>() - 1.0).abs();
        if drift > NORM_DRIFT_LIMIT {
            return Err(Error::NormDrift { t: t + dt, drift });
        }
        states.push(StateVector { amplitudes: c.clone() });
    }
    Ok(states)
}

/// Integrate the configured system over `grid` from `initial`.
pub fn propagate(cfg: &SystemConfig, grid: &TimeGrid, initial: &StateVector) -> Result<Trajectory> {
    grid.validate()?;
    if initial.len() != cfg.n_levels {
        return Err(Error::InvalidConfig {
            field: "n_levels",
            message: format!(
                "initial state has {} amplitudes for a {}-level system",
                initial.len(),
                cfg.n_levels
            ),
        });
    }
    let norm = initial.norm_sq();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidConfig {
            field: "initial",
            message: format!("initial state norm^2 = {norm}, expected 1"),
        });
    }
    let states = rk4_evolve(
        |t| cfg.hamiltonian(t),
        grid.t_start,
        grid.dt,
        grid.steps(),
        initial,
    )?;
    Ok(Trajectory { grid: *grid, states })
}

/// Per-grid-point populations of a trajectory.
pub fn populations(traj: &Trajectory) -> Vec<Vec<f64>> {
    traj.populations()
}

/// Final manifold amplitudes, provided the transfer actually happened
/// (residual population on levels 1-2 below 0.05).
pub fn final_superposition(traj: &Trajectory) -> Result<FinalSuperposition> {
    let last = traj.final_state();
    let pops = last.populations();
    let residual = pops[0] + pops[1];
    if residual >= 0.05 {
        return Err(Error::TransferIncomplete { residual });
    }
    let c3 = last.amplitudes[2];
    let manifold = &last.amplitudes[2..];
    let magnitudes: Vec<f64> = manifold.iter().map(|c| c.norm()).collect();
    let relative_phases: Vec<f64> = manifold.iter().map(|c| (c / c3).arg()).collect();
    Ok(FinalSuperposition { magnitudes, relative_phases })
}
