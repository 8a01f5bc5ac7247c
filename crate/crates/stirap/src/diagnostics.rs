//! Adiabaticity diagnostics: instantaneous eigenvalue spectra, the
//! mixing-angle rate, gap-versus-rate reports, and dark-state fidelity
//! along a trajectory.

use crate::analytics::{self, Branch};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::linalg;
use crate::model::SystemConfig;
use crate::propagator::{TimeGrid, Trajectory};

/// Relative scale (against the Frobenius norm of H) below which an
/// eigenvalue counts as the persistent zero.
pub const ZERO_EIGENVALUE_REL_TOL: f64 = 1e-10;

/// Instantaneous eigenvalues and mixing-angle rate along a grid.
///
/// `eigenvalues[k]` holds the sorted spectrum at `times[k]`; `h_norms[k]`
/// the Frobenius norm used to classify zeros.
#[derive(Debug, Clone)]
pub struct SpectrumSeries {
    pub times: Vec<f64>,
    pub eigenvalues: Vec<Vec<f64>>,
    pub theta_dot: Vec<f64>,
    pub h_norms: Vec<f64>,
}

impl SpectrumSeries {
    pub fn n_levels(&self) -> usize {
        self.eigenvalues.first().map_or(0, Vec::len)
    }

    /// Count of eigenvalues classified as zero at grid index `k`.
    pub fn zero_count_at(&self, k: usize) -> usize {
        let cutoff = ZERO_EIGENVALUE_REL_TOL * self.h_norms[k];
        self.eigenvalues[k]
            .iter()
            .filter(|l| l.abs() <= cutoff)
            .count()
    }
}

/// Gap-versus-rate summary. `margin` much greater than one indicates that
/// nonadiabatic coupling out of the dark state is negligible.
#[derive(Debug, Clone, Copy)]
pub struct AdiabaticityReport {
    /// Smallest magnitude of any nonzero eigenvalue over the grid.
    pub min_nonzero_gap: f64,
    /// Largest magnitude of the mixing-angle rate over the grid.
    pub max_theta_dot: f64,
    /// `min_nonzero_gap / max_theta_dot`; infinite when the angle never moves.
    pub margin: f64,
}

/// Diagonalize `H(t)` on every grid point with the configured execution
/// strategy.
///
/// The rate column is made total: it is 0 where both envelopes vanish (the
/// angle cannot move when nothing couples) and NaN where the detuning
/// correction factor is undefined, while the standalone [`theta_dot`] stays
/// strict about its preconditions.
pub fn eigen_spectrum(cfg: &SystemConfig, grid: &TimeGrid) -> Result<SpectrumSeries> {
    eigen_spectrum_with(cfg, grid, Execution::default())
}

pub fn eigen_spectrum_with(
    cfg: &SystemConfig,
    grid: &TimeGrid,
    exec: Execution,
) -> Result<SpectrumSeries> {
    grid.validate()?;
    let times = grid.times();
    let rows = exec::try_map(exec, &times, |&t| {
        let h = cfg.hamiltonian(t)?;
        let eig = linalg::jacobi_eigen(&h)?;
        let rate = match theta_dot(cfg, t) {
            Ok(r) => r,
            Err(Error::UndefinedAngle { .. }) => 0.0,
            Err(Error::NegativeRadicand { .. }) => f64::NAN,
            Err(e) => return Err(e),
        };
        Ok((eig.values, rate, h.frobenius_norm()))
    })?;

    let mut eigenvalues = Vec::with_capacity(rows.len());
    let mut theta_dots = Vec::with_capacity(rows.len());
    let mut h_norms = Vec::with_capacity(rows.len());
    for (values, rate, norm) in rows {
        eigenvalues.push(values);
        theta_dots.push(rate);
        h_norms.push(norm);
    }
    Ok(SpectrumSeries { times, eigenvalues, theta_dot: theta_dots, h_norms })
}

/// Analytic rate of change of the mixing angle at time `t`:
/// `alpha (dOmega_p Omega_s - Omega_p dOmega_s) / (Omega_s^2 + alpha^2 Omega_p^2)`,
/// with the Gaussian envelope derivatives in closed form.
pub fn theta_dot(cfg: &SystemConfig, t: f64) -> Result<f64> {
    let pump = cfg.pump_envelope();
    let stokes = cfg.stokes_envelope();
    let op = pump.value(t);
    let os = stokes.value(t);
    if op == 0.0 && os == 0.0 {
        return Err(Error::UndefinedAngle { t });
    }
    let delta = cfg.two_photon_detuning();
    let ratio = if delta == 0.0 { 0.0 } else { delta / (delta - cfg.delta_3) };
    let radicand = 1.0 + ratio;
    if radicand < 0.0 {
        return Err(Error::NegativeRadicand { radicand });
    }
    let alpha = radicand.sqrt();
    if alpha.is_infinite() {
        // theta pinned at pi/2: the angle cannot move
        return Ok(0.0);
    }
    let dop = pump.derivative(t);
    let dos = stokes.derivative(t);
    Ok(alpha * (dop * os - op * dos) / (os * os + alpha * alpha * op * op))
}

/// Reduce a spectrum series to its gap-versus-rate summary.
pub fn adiabaticity_report(series: &SpectrumSeries) -> AdiabaticityReport {
    let mut min_gap = f64::INFINITY;
    for (k, row) in series.eigenvalues.iter().enumerate() {
        let cutoff = ZERO_EIGENVALUE_REL_TOL * series.h_norms[k];
        for l in row {
            if l.abs() > cutoff {
                min_gap = min_gap.min(l.abs());
            }
        }
    }
    let max_rate = series
        .theta_dot
        .iter()
        .filter(|r| r.is_finite())
        .map(|r| r.abs())
        .fold(0.0, f64::max);
    let margin = if max_rate == 0.0 { f64::INFINITY } else { min_gap / max_rate };
    AdiabaticityReport { min_nonzero_gap: min_gap, max_theta_dot: max_rate, margin }
}

/// Overlap `|<psi_0(t)|C(t)>|^2` with the analytic dark state, per grid
/// point. The branch follows the sign of the configured two-photon
/// detuning; the null-eigenvalue condition must hold for the config.
pub fn darkstate_fidelity(traj: &Trajectory, cfg: &SystemConfig) -> Result<Vec<f64>> {
    let dark_at = dark_state_provider(cfg)?;
    traj.times()
        .iter()
        .zip(&traj.states)
        .map(|(&t, state)| {
            let dark = dark_at(t)?;
            let overlap: num_complex::Complex64 = dark
                .iter()
                .zip(&state.amplitudes)
                .map(|(d, c)| d * c)
                .sum();
            Ok(overlap.norm_sqr())
        })
        .collect()
}

type DarkStateFn<'a> = Box<dyn Fn(f64) -> Result<Vec<f64>> + 'a>;

/// Analytic dark-state amplitudes as a function of time for a config that
/// satisfies the relevant null-eigenvalue condition.
fn dark_state_provider(cfg: &SystemConfig) -> Result<DarkStateFn<'_>> {
    let delta = cfg.two_photon_detuning();
    match cfg.n_levels {
        4 => {
            let branch = analytics::branch_for(delta, cfg.delta_3, cfg.omega_c)?;
            Ok(Box::new(move |t: f64| {
                let angles = analytics::mixing_angles(
                    cfg.pump_envelope().value(t),
                    cfg.stokes_envelope().value(t),
                    delta,
                    cfg.delta_3,
                    cfg.omega_c,
                )?;
                Ok(analytics::dark_state_4(angles, branch).amplitudes)
            }))
        }
        5 => {
            let residual = delta * delta - cfg.omega_c * cfg.omega_c - cfg.omega_d * cfg.omega_d;
            let scale = (delta * delta).max(cfg.omega_c * cfg.omega_c + cfg.omega_d * cfg.omega_d);
            if residual.abs() > analytics::CONDITION_REL_TOL * scale
                || cfg.delta_3 != 0.0
                || cfg.delta_4 != 0.0
            {
                return Err(Error::ConditionViolated { residual });
            }
            let branch = if delta >= 0.0 { Branch::Plus } else { Branch::Minus };
            Ok(Box::new(move |t: f64| {
                let dark = analytics::dark_state_5(
                    cfg.pump_envelope().value(t),
                    cfg.stokes_envelope().value(t),
                    cfg.omega_c,
                    cfg.omega_d,
                    delta,
                    branch,
                )?;
                Ok(dark.amplitudes)
            }))
        }
        other => Err(Error::WrongLevelCount { expected: 4, got: other }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagator::{propagate, StateVector};

    fn fig2_config(delta_2: f64) -> SystemConfig {
        SystemConfig {
            n_levels: 4,
            omega_p_peak: 4.0,
            omega_s_peak: 4.0,
            omega_c: 2.5,
            omega_d: 0.0,
            pulse_width: 5.0,
            half_delay: 2.5,
            delta_1: 3.5,
            delta_2,
            delta_3: 0.0,
            delta_4: 0.0,
        }
    }

    fn fig4_config() -> SystemConfig {
        fig2_config(6.0)
    }

    // The diagnostic window: where the pulses overlap and the spectrum is
    // resolved. Outside it one eigenvalue branch collapses onto the
    // persistent zero (the asymptotic degeneracy that makes the scheme work).
    fn fig4_grid() -> TimeGrid {
        TimeGrid::new(-4.0, 4.0, 0.01).unwrap()
    }

    #[test]
    fn diagonal_config_has_constant_spectrum() {
        let cfg = SystemConfig {
            n_levels: 4,
            omega_p_peak: 0.0,
            omega_s_peak: 0.0,
            omega_c: 0.0,
            omega_d: 0.0,
            pulse_width: 1.0,
            half_delay: 0.0,
            delta_1: 2.0,
            delta_2: 0.5,
            delta_3: -0.25,
            delta_4: 0.0,
        };
        let grid = TimeGrid::new(-5.0, 5.0, 0.5).unwrap();
        let series = eigen_spectrum(&cfg, &grid).unwrap();
        let mut expected = vec![
            0.0,
            -cfg.delta_1,
            -cfg.two_photon_detuning(),
            -(cfg.two_photon_detuning() - cfg.delta_3),
        ];
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for row in &series.eigenvalues {
            for (l, e) in row.iter().zip(&expected) {
                assert!((l - e).abs() < 1e-12);
            }
        }
        // nothing couples, so the rate column is zero throughout
        assert!(series.theta_dot.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn pulses_off_spectrum_collapses_to_asymptotic_values() {
        // with vanishing pulses the zero eigenvalue is doubly degenerate:
        // bare level 1 plus the singular manifold block {0, -2 omega_c}
        let mut cfg = fig2_config(1.0);
        cfg.omega_p_peak = 1e-30;
        cfg.omega_s_peak = 1e-30;
        let grid = TimeGrid::new(-1.0, 1.0, 0.1).unwrap();
        let series = eigen_spectrum(&cfg, &grid).unwrap();
        for k in 0..series.times.len() {
            assert_eq!(series.zero_count_at(k), 2);
        }
        let row = &series.eigenvalues[0];
        assert!(row.iter().any(|l| (l + 5.0).abs() < 1e-9));
        assert!(row.iter().any(|l| (l + 3.5).abs() < 1e-9));
    }

    #[test]
    fn persistent_zero_across_pulse_window() {
        let series = eigen_spectrum(&fig4_config(), &fig4_grid()).unwrap();
        for k in 0..series.times.len() {
            assert_eq!(series.zero_count_at(k), 1, "at t = {}", series.times[k]);
            let min_abs = series.eigenvalues[k]
                .iter()
                .map(|l| l.abs())
                .fold(f64::INFINITY, f64::min);
            assert!(min_abs < 1e-10);
        }
        // near the pulse crossing the other three stay clear of zero
        let mid = series.times.len() / 2;
        let nonzero: Vec<f64> = series.eigenvalues[mid]
            .iter()
            .filter(|l| l.abs() > 1e-8)
            .map(|l| l.abs())
            .collect();
        assert_eq!(nonzero.len(), 3);
        assert!(nonzero.iter().all(|&g| g > 1.0));
    }

    #[test]
    fn theta_dot_matches_finite_differences() {
        let cfg = fig4_config();
        let delta = cfg.two_photon_detuning();
        let h = 1e-5;
        for k in 0..=200 {
            let t = -4.0 + 8.0 * k as f64 / 200.0;
            let analytic = theta_dot(&cfg, t).unwrap();
            let theta_at = |tt: f64| {
                analytics::mixing_angles(
                    cfg.pump_envelope().value(tt),
                    cfg.stokes_envelope().value(tt),
                    delta,
                    cfg.delta_3,
                    cfg.omega_c,
                )
                .unwrap()
                .theta
            };
            let fd = (theta_at(t + h) - theta_at(t - h)) / (2.0 * h);
            assert!(
                (analytic - fd).abs() < 1e-6,
                "t = {t}: analytic {analytic} vs fd {fd}"
            );
        }
    }

    #[test]
    fn theta_dot_peak_value_for_equal_pulses() {
        // equal peaks and widths: rate = (2 tau / T^2) sin(2 theta), peaking
        // at 2 tau / T^2 = 0.2 for T = 5, tau = 2.5
        let cfg = fig4_config();
        let series = eigen_spectrum(&cfg, &fig4_grid()).unwrap();
        let max_rate = series
            .theta_dot
            .iter()
            .map(|r| r.abs())
            .fold(0.0, f64::max);
        assert!((max_rate - 0.2).abs() < 1e-4, "max rate {max_rate}");
    }

    #[test]
    fn theta_dot_zero_without_pump() {
        let mut cfg = fig2_config(1.0);
        cfg.omega_p_peak = 0.0;
        let rate = theta_dot(&cfg, 0.0).unwrap();
        assert_eq!(rate, 0.0);
    }

    #[test]
    fn theta_dot_zero_delay_is_static() {
        let mut cfg = fig2_config(1.0);
        cfg.half_delay = 0.0;
        for t in [-7.0, -1.0, 0.0, 2.0, 9.0] {
            let rate = theta_dot(&cfg, t).unwrap();
            assert!(rate.abs() < 1e-16);
        }
    }

    #[test]
    fn theta_dot_undefined_when_everything_is_off() {
        let mut cfg = fig2_config(1.0);
        cfg.omega_p_peak = 0.0;
        cfg.omega_s_peak = 0.0;
        assert!(matches!(
            theta_dot(&cfg, 0.0),
            Err(Error::UndefinedAngle { .. })
        ));
    }

    #[test]
    fn fig4_margin_exceeds_five() {
        let series = eigen_spectrum(&fig4_config(), &fig4_grid()).unwrap();
        let report = adiabaticity_report(&series);
        assert!(report.margin > 5.0, "margin {}", report.margin);
        assert!(report.max_theta_dot > 0.19 && report.max_theta_dot <= 0.2 + 1e-9);
    }

    #[test]
    fn margin_scales_linearly_with_field_strengths() {
        // scaling every frequency by s scales H and the gaps by s while the
        // pump/Stokes ratio (hence the rate) is unchanged
        let base = fig4_config();
        let mut scaled = base.clone();
        let s = 0.1;
        scaled.omega_p_peak *= s;
        scaled.omega_s_peak *= s;
        scaled.omega_c *= s;
        scaled.delta_1 *= s;
        scaled.delta_2 *= s;
        scaled.delta_3 *= s;
        let grid = fig4_grid();
        let m_base = adiabaticity_report(&eigen_spectrum(&base, &grid).unwrap()).margin;
        let m_scaled = adiabaticity_report(&eigen_spectrum(&scaled, &grid).unwrap()).margin;
        let ratio = m_scaled / m_base;
        assert!((ratio - s).abs() < 1e-6 * s, "ratio {ratio}");
    }

    #[test]
    fn zero_delay_margin_is_infinite() {
        let mut cfg = fig2_config(1.0);
        cfg.half_delay = 0.0;
        let grid = TimeGrid::new(-5.0, 5.0, 0.1).unwrap();
        let series = eigen_spectrum(&cfg, &grid).unwrap();
        let report = adiabaticity_report(&series);
        assert!(report.max_theta_dot < 1e-15);
        assert!(report.margin.is_infinite());
    }

    #[test]
    fn fidelity_tracks_dark_state_through_transfer() {
        for delta_2 in [1.0, 6.0] {
            let cfg = fig2_config(delta_2);
            let grid = TimeGrid::new(-25.0, 25.0, 1e-3).unwrap();
            let traj = propagate(&cfg, &grid, &StateVector::ground(4)).unwrap();
            let fid = darkstate_fidelity(&traj, &cfg).unwrap();
            // at t_start the dark state is level 1 up to the Gaussian tails
            assert!((fid[0] - 1.0).abs() < 1e-6, "starts aligned with level 1");
            let min = fid.iter().copied().fold(f64::INFINITY, f64::min);
            assert!(min > 0.95, "min fidelity {min}");
            for f in &fid {
                assert!((-1e-12..=1.0 + 1e-12).contains(f));
            }
        }
    }

    #[test]
    fn final_fidelity_equals_manifold_overlap() {
        // the grid runs long enough that theta has pinched onto the manifold
        let cfg = fig2_config(1.0);
        let grid = TimeGrid::new(-30.0, 30.0, 1e-3).unwrap();
        let traj = propagate(&cfg, &grid, &StateVector::ground(4)).unwrap();
        let fid = darkstate_fidelity(&traj, &cfg).unwrap();
        let branch = analytics::branch_for(
            cfg.two_photon_detuning(),
            cfg.delta_3,
            cfg.omega_c,
        )
        .unwrap();
        let angles = analytics::mixing_angles(
            cfg.pump_envelope().value(grid.t_end),
            cfg.stokes_envelope().value(grid.t_end),
            cfg.two_photon_detuning(),
            cfg.delta_3,
            cfg.omega_c,
        )
        .unwrap();
        let target = analytics::target_superposition(angles.phi, branch);
        let last = traj.final_state();
        let overlap = target[0] * last.amplitudes[2] + target[1] * last.amplitudes[3];
        let manifold = overlap.norm_sqr();
        assert!((fid.last().unwrap() - manifold).abs() < 1e-6);
    }

    #[test]
    fn fidelity_requires_the_condition() {
        let cfg = fig2_config(2.0); // delta = 1.5 violates the condition
        let grid = TimeGrid::new(-5.0, 5.0, 1e-3).unwrap();
        let traj = propagate(&cfg, &grid, &StateVector::ground(4)).unwrap();
        assert!(matches!(
            darkstate_fidelity(&traj, &cfg),
            Err(Error::ConditionViolated { .. })
        ));
    }
}
