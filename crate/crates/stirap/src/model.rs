//! Scenario configuration, pulse envelopes, and the instantaneous
//! rotating-wave Hamiltonian for the 4- and 5-level chains.
//!
//! Units: hbar = 1, all frequencies in 1/T0 and times in T0. Couplings enter
//! the matrix exactly as the Rabi symbols, with no implicit factor 1/2. The
//! bare level energies and carrier frequencies never appear; only detunings
//! are stored, and they are time-independent scalars.

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::propagator::TimeGrid;

/// Default integration step, in units of T0.
pub const DEFAULT_DT: f64 = 1e-3;

/// All Rabi peaks, pulse timing, and detunings defining one scenario.
///
/// Level layout is a nearest-neighbor chain 1-2-3-4(-5): the pump couples
/// 1-2, the Stokes pulse 2-3, the constant control fields 3-4 and (for five
/// levels) 4-5. `delta` denotes the two-photon detuning `delta_1 - delta_2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub n_levels: usize,
    /// Peak pump Rabi frequency.
    pub omega_p_peak: f64,
    /// Peak Stokes Rabi frequency.
    pub omega_s_peak: f64,
    /// Constant control field coupling levels 3-4.
    pub omega_c: f64,
    /// Constant control field coupling levels 4-5 (five-level systems only).
    pub omega_d: f64,
    /// Gaussian width T of both pulses.
    pub pulse_width: f64,
    /// Half the pump-Stokes delay: pump peaks at +tau, Stokes at -tau.
    pub half_delay: f64,
    pub delta_1: f64,
    pub delta_2: f64,
    pub delta_3: f64,
    /// Detuning of the second control field; zero for resonant operation.
    pub delta_4: f64,
}

impl SystemConfig {
    /// Two-photon detuning `delta_1 - delta_2`.
    pub fn two_photon_detuning(&self) -> f64 {
        self.delta_1 - self.delta_2
    }

    /// Check the structural invariants enforced on configs coming from
    /// files or the CLI. Direct struct construction stays unchecked so
    /// degenerate cases (zero couplings) remain expressible in tests and
    /// oracles.
    pub fn validate(&self) -> Result<()> {
        if self.n_levels != 4 && self.n_levels != 5 {
            return Err(Error::InvalidConfig {
                field: "n_levels",
                message: format!("must be 4 or 5, got {}", self.n_levels),
            });
        }
        let fields: [(&'static str, f64); 10] = [
            ("omega_p_peak", self.omega_p_peak),
            ("omega_s_peak", self.omega_s_peak),
            ("omega_c", self.omega_c),
            ("omega_d", self.omega_d),
            ("pulse_width", self.pulse_width),
            ("half_delay", self.half_delay),
            ("delta_1", self.delta_1),
            ("delta_2", self.delta_2),
            ("delta_3", self.delta_3),
            ("delta_4", self.delta_4),
        ];
        for (field, value) in fields {
            if !value.is_finite() {
                return Err(Error::InvalidConfig {
                    field,
                    message: format!("must be finite, got {value}"),
                });
            }
        }
        for (field, value) in [
            ("omega_p_peak", self.omega_p_peak),
            ("omega_s_peak", self.omega_s_peak),
            ("pulse_width", self.pulse_width),
        ] {
            if value <= 0.0 {
                return Err(Error::InvalidConfig {
                    field,
                    message: format!("must be positive, got {value}"),
                });
            }
        }
        if self.half_delay < 0.0 {
            return Err(Error::InvalidConfig {
                field: "half_delay",
                message: format!(
                    "must be nonnegative (Stokes precedes pump), got {}",
                    self.half_delay
                ),
            });
        }
        Ok(())
    }

    /// Pump envelope: Gaussian peaking at `+half_delay`.
    pub fn pump_envelope(&self) -> PulseEnvelope {
        PulseEnvelope::gaussian(self.omega_p_peak, self.half_delay, self.pulse_width)
    }

    /// Stokes envelope: Gaussian peaking at `-half_delay`.
    pub fn stokes_envelope(&self) -> PulseEnvelope {
        PulseEnvelope::gaussian(self.omega_s_peak, -self.half_delay, self.pulse_width)
    }

    /// Instantaneous Hamiltonian for the configured level count.
    pub fn hamiltonian(&self, t: f64) -> Result<SymMatrix> {
        match self.n_levels {
            4 => build_hamiltonian_4(self, t),
            5 => build_hamiltonian_5(self, t),
            other => Err(Error::WrongLevelCount { expected: 4, got: other }),
        }
    }

    /// Default grid spanning [-5T, +5T] at the default step; the Gaussian
    /// tails there are below exp(-25) of peak.
    pub fn default_grid(&self) -> TimeGrid {
        TimeGrid {
            t_start: -5.0 * self.pulse_width,
            t_end: 5.0 * self.pulse_width,
            dt: DEFAULT_DT,
        }
    }
}

/// A time-dependent Rabi frequency, evaluable at any time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseEnvelope {
    Gaussian { peak: f64, center: f64, width: f64 },
    Constant { peak: f64 },
}

impl PulseEnvelope {
    pub fn gaussian(peak: f64, center: f64, width: f64) -> Self {
        PulseEnvelope::Gaussian { peak, center, width }
    }

    pub fn constant(peak: f64) -> Self {
        PulseEnvelope::Constant { peak }
    }

    pub fn peak(&self) -> f64 {
        match *self {
            PulseEnvelope::Gaussian { peak, .. } => peak,
            PulseEnvelope::Constant { peak } => peak,
        }
    }

    /// Envelope value at time `t`; total over finite `t`.
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            PulseEnvelope::Gaussian { peak, center, width } => {
                let u = (t - center) / width;
                peak * (-u * u).exp()
            }
            PulseEnvelope::Constant { peak } => peak,
        }
    }

    /// Closed-form time derivative of the envelope.
    pub fn derivative(&self, t: f64) -> f64 {
        match *self {
            PulseEnvelope::Gaussian { center, width, .. } => {
                -2.0 * (t - center) / (width * width) * self.value(t)
            }
            PulseEnvelope::Constant { .. } => 0.0,
        }
    }
}

/// 4-level chain Hamiltonian at time `t` (units of 1/T0, hbar = 1).
///
/// Off-diagonals: pump on 1-2, Stokes on 2-3, control on 3-4. Diagonal:
/// `(0, -delta_1, -delta, -(delta - delta_3))` with `delta = delta_1 - delta_2`.
pub fn build_hamiltonian_4(cfg: &SystemConfig, t: f64) -> Result<SymMatrix> {
    if cfg.n_levels != 4 {
        return Err(Error::WrongLevelCount { expected: 4, got: cfg.n_levels });
    }
    let delta = cfg.two_photon_detuning();
    let mut h = SymMatrix::zeros(4);
    h.set_sym(0, 1, cfg.pump_envelope().value(t));
    h.set_sym(1, 2, cfg.stokes_envelope().value(t));
    h.set_sym(2, 3, cfg.omega_c);
    h.set_sym(1, 1, -cfg.delta_1);
    h.set_sym(2, 2, -delta);
    h.set_sym(3, 3, -(delta - cfg.delta_3));
    Ok(h)
}

/// 5-level chain extension: a second control field couples 4-5 and the
/// diagonal gains `-(delta - delta_3 - delta_4)` on level 5.
pub fn build_hamiltonian_5(cfg: &SystemConfig, t: f64) -> Result<SymMatrix> {
    if cfg.n_levels != 5 {
        return Err(Error::WrongLevelCount { expected: 5, got: cfg.n_levels });
    }
    let delta = cfg.two_photon_detuning();
    let mut h = SymMatrix::zeros(5);
    h.set_sym(0, 1, cfg.pump_envelope().value(t));
    h.set_sym(1, 2, cfg.stokes_envelope().value(t));
    h.set_sym(2, 3, cfg.omega_c);
    h.set_sym(3, 4, cfg.omega_d);
    h.set_sym(1, 1, -cfg.delta_1);
    h.set_sym(2, 2, -delta);
    h.set_sym(3, 3, -(delta - cfg.delta_3));
    h.set_sym(4, 4, -(delta - cfg.delta_3 - cfg.delta_4));
    Ok(h)
}
