//! Closed-form dark-state theory: null-eigenvalue detunings, mixing angles,
//! analytic dark states for the twofold and threefold manifolds, target
//! superpositions, the population ratio, and inverse design of detunings for
//! a requested superposition.
//!
//! A two-photon detuning `delta` solves the null-eigenvalue condition
//! `delta^2 - delta*delta_3 - omega_c^2 = 0` exactly when the instantaneous
//! Hamiltonian has a zero eigenvalue at every time. The corresponding
//! eigenvector carries no excited-state component, so it is a dark state.
//! The positive root pairs with the `plus` branch, the negative root with
//! `minus`.

use crate::error::{Error, Result};
use crate::linalg::{self, SymMatrix};

/// Relative tolerance for the null-eigenvalue precondition checks: well
/// above double-rounding noise, far below any physical parameter
/// granularity.
pub const CONDITION_REL_TOL: f64 = 1e-9;

/// Which of the two dark states (detuning roots) is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn parse(s: &str) -> Option<Branch> {
        match s {
            "plus" => Some(Branch::Plus),
            "minus" => Some(Branch::Minus),
            _ => None,
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Branch::Plus => write!(f, "plus"),
            Branch::Minus => write!(f, "minus"),
        }
    }
}

/// Mixing angles of the analytic dark state.
///
/// `theta` rotates the state from level 1 into the manifold as the pulses
/// progress; `phi` fixes the split across the manifold levels; `alpha` is the
/// detuning correction factor `sqrt(1 + delta/(delta - delta_3))` multiplying
/// the pump/Stokes ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingAngles {
    pub theta: f64,
    pub phi: f64,
    pub alpha: f64,
}

/// Analytic zero-eigenvalue eigenvector with its angles and branch sign.
#[derive(Debug, Clone, PartialEq)]
pub struct DarkState {
    /// Real amplitudes over the N levels; unit norm, exactly zero on level 2.
    pub amplitudes: Vec<f64>,
    pub branch: Branch,
    pub angles: MixingAngles,
}

/// Residual of the null-eigenvalue condition for a candidate two-photon
/// detuning.
pub fn condition_residual(delta: f64, delta_3: f64, omega_c: f64) -> f64 {
    delta * delta - delta * delta_3 - omega_c * omega_c
}

/// Whether `delta` solves the null-eigenvalue condition, relative to
/// `max(delta^2, omega_c^2)`.
pub fn condition_holds(delta: f64, delta_3: f64, omega_c: f64) -> bool {
    let scale = (delta * delta).max(omega_c * omega_c);
    condition_residual(delta, delta_3, omega_c).abs() <= CONDITION_REL_TOL * scale
}

/// The two two-photon detunings for which the Hamiltonian acquires a zero
/// eigenvalue: `(delta_3 +- sqrt(delta_3^2 + 4 omega_c^2)) / 2`, returned as
/// `(plus_root, minus_root)` with `plus_root >= minus_root`.
pub fn null_detuning_pair(delta_3: f64, omega_c: f64) -> (f64, f64) {
    let disc = (delta_3 * delta_3 + 4.0 * omega_c * omega_c).sqrt();
    ((delta_3 + disc) / 2.0, (delta_3 - disc) / 2.0)
}

/// Invert the null-eigenvalue condition: the control detuning that makes
/// `delta` one of the two roots. Fails for `delta = 0`, which solves the
/// condition only when the control field vanishes.
pub fn control_detuning_for(delta: f64, omega_c: f64) -> Result<f64> {
    if delta == 0.0 {
        return Err(Error::SingularInversion);
    }
    Ok((delta * delta - omega_c * omega_c) / delta)
}

/// Mixing angles from instantaneous envelope values and detunings.
///
/// Both angles are computed with the two-argument arctangent, so the
/// `delta = delta_3` singularity resolves to `phi = pi/2` (all transferred
/// population on level 4) and a vanishing Stokes field to `theta = pi/2`.
pub fn mixing_angles(
    omega_p: f64,
    omega_s: f64,
    delta: f64,
    delta_3: f64,
    omega_c: f64,
) -> Result<MixingAngles> {
    if omega_p == 0.0 && omega_s == 0.0 {
        return Err(Error::ZeroEnvelopes);
    }
    let ratio = if delta == 0.0 { 0.0 } else { delta / (delta - delta_3) };
    let radicand = 1.0 + ratio;
    if radicand < 0.0 {
        return Err(Error::NegativeRadicand { radicand });
    }
    let alpha = radicand.sqrt();
    let theta = if omega_p == 0.0 {
        0.0
    } else {
        (alpha * omega_p).atan2(omega_s)
    };
    let phi = omega_c.atan2((delta - delta_3).abs());
    Ok(MixingAngles { theta, phi, alpha })
}

/// The 4-level dark state `(cos theta, 0, -sin theta cos phi, -+ sin theta sin phi)`,
/// upper sign for the `plus` branch.
pub fn dark_state_4(angles: MixingAngles, branch: Branch) -> DarkState {
    let MixingAngles { theta, phi, .. } = angles;
    let amplitudes = vec![
        theta.cos(),
        0.0,
        -theta.sin() * phi.cos(),
        -branch.sign() * theta.sin() * phi.sin(),
    ];
    DarkState { amplitudes, branch, angles }
}

/// Asymptotic target superposition on the manifold levels:
/// `(cos phi, +- sin phi)` on levels 3 and 4.
pub fn target_superposition(phi: f64, branch: Branch) -> [f64; 2] {
    [phi.cos(), branch.sign() * phi.sin()]
}

/// Final population ratio of level 3 to level 4, `(cos phi / sin phi)^2`.
/// Under the null-eigenvalue condition this equals `omega_c^2 / delta^2`.
pub fn population_ratio(phi: f64) -> Result<f64> {
    let s = phi.sin();
    if s == 0.0 {
        return Err(Error::InfiniteRatio);
    }
    Ok((phi.cos() / s).powi(2))
}

/// Threefold-manifold dark state for resonant control fields.
///
/// Requires `delta^2 = omega_c^2 + omega_d^2` (relative tolerance 1e-9) and a
/// nonvanishing pump. The manifold components are proportional to
/// `(omega_c, +-|delta|, omega_d)`, the level-1 amplitude to `sin phi'` with
/// `phi' = atan2(omega_s * omega_c, sqrt(2) * |delta| * omega_p)`. The
/// magnitude of `delta` enters the arctangent: the signed form is not a null
/// eigenvector for the negative root, as the numeric oracle confirms.
pub fn dark_state_5(
    omega_p: f64,
    omega_s: f64,
    omega_c: f64,
    omega_d: f64,
    delta: f64,
    branch: Branch,
) -> Result<DarkState> {
    let residual = delta * delta - omega_c * omega_c - omega_d * omega_d;
    let scale = (delta * delta).max(omega_c * omega_c + omega_d * omega_d);
    if residual.abs() > CONDITION_REL_TOL * scale {
        return Err(Error::ManifoldCondition { residual });
    }
    if omega_p.is_nan() || omega_p <= 0.0 {
        return Err(Error::InvalidConfig {
            field: "omega_p",
            message: format!("manifold dark state needs a positive pump value, got {omega_p}"),
        });
    }
    let abs_delta = delta.abs();
    let phi_prime = (omega_s * omega_c).atan2(std::f64::consts::SQRT_2 * abs_delta * omega_p);
    let norm = (delta * delta + omega_c * omega_c + omega_d * omega_d).sqrt();
    let (sp, cp) = (phi_prime.sin(), phi_prime.cos());
    let amplitudes = vec![
        sp,
        0.0,
        -cp * omega_c / norm,
        -cp * branch.sign() * abs_delta / norm,
        -cp * omega_d / norm,
    ];
    // The resonant threefold state always puts half its manifold weight on
    // the middle level, hence the fixed pi/4; alpha takes its resonant value.
    let angles = MixingAngles {
        theta: std::f64::consts::FRAC_PI_2 - phi_prime,
        phi: std::f64::consts::FRAC_PI_4,
        alpha: std::f64::consts::SQRT_2,
    };
    Ok(DarkState { amplitudes, branch, angles })
}

/// Numerically extract a unit null eigenvector, if one exists.
///
/// Returns the eigenvector whose eigenvalue magnitude is below
/// `tol * ||H||_F`, sign-fixed so the first nonzero component is positive;
/// `None` when no eigenvalue qualifies. Symmetry of the input is guaranteed
/// by the matrix type.
pub fn numeric_null_eigenvector(h: &SymMatrix, tol: f64) -> Result<Option<Vec<f64>>> {
    let eig = linalg::jacobi_eigen(h)?;
    let hnorm = h.frobenius_norm();
    let (k, lambda) = eig
        .values
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.abs().partial_cmp(&b.abs()).expect("finite"))
        .expect("nonempty spectrum");
    if lambda.abs() <= tol * hnorm {
        Ok(Some(eig.vectors[k].clone()))
    } else {
        Ok(None)
    }
}

/// Choose detunings realizing a requested final population ratio.
///
/// Returns `(delta, delta_3)` such that `delta` is the plus/minus root of
/// the null-eigenvalue condition and the resulting mixing angle reproduces
/// `target_ratio = omega_c^2 / delta^2`.
pub fn inverse_design(target_ratio: f64, branch: Branch, omega_c: f64) -> Result<(f64, f64)> {
    if target_ratio.is_nan() || target_ratio <= 0.0 {
        return Err(Error::NonPositiveRatio { got: target_ratio });
    }
    if omega_c.is_nan() || omega_c <= 0.0 {
        return Err(Error::InvalidConfig {
            field: "omega_c",
            message: format!("inverse design needs a positive control field, got {omega_c}"),
        });
    }
    let delta = branch.sign() * omega_c / target_ratio.sqrt();
    let delta_3 = control_detuning_for(delta, omega_c)?;
    Ok((delta, delta_3))
}

/// Branch matching the sign of a configured two-photon detuning, provided it
/// solves the null-eigenvalue condition.
pub fn branch_for(delta: f64, delta_3: f64, omega_c: f64) -> Result<Branch> {
    if !condition_holds(delta, delta_3, omega_c) {
        return Err(Error::ConditionViolated {
            residual: condition_residual(delta, delta_3, omega_c),
        });
    }
    let (plus, minus) = null_detuning_pair(delta_3, omega_c);
    if (delta - plus).abs() <= (delta - minus).abs() {
        Ok(Branch::Plus)
    } else {
        Ok(Branch::Minus)
    }
}
