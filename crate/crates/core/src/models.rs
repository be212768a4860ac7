//! Model families, physical constants and frequency profiles.
//!
//! A [`Model`] bundles the family (which fixes the form of the Riccati,
//! Ermakov and trajectory equations), the constants `m` and `ħ`, the
//! friction coefficient `γ` and a frequency profile `ω(t)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mass and reduced Planck constant. Both strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    mass: f64,
    hbar: f64,
}

impl PhysicalConstants {
    pub fn new(mass: f64, hbar: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidConstants(format!("mass must be positive, got {mass}")));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidConstants(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self { mass, hbar })
    }

    /// `m = ħ = 1`.
    pub fn natural() -> Self {
        Self { mass: 1.0, hbar: 1.0 }
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::natural()
    }
}

/// Time-dependent frequency `ω(t)`.
#[derive(Debug, Clone, PartialEq)]
pub enum FrequencyProfile {
    Constant(f64),
    /// `values[k]` holds on `[breakpoints[k-1], breakpoints[k])`, with the
    /// first and last segments extending to ∓∞.
    Piecewise {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    },
    /// Linear interpolation between samples; undefined outside the grid.
    Sampled { times: Vec<f64>, values: Vec<f64> },
}

fn strictly_increasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[0] < w[1])
}

impl FrequencyProfile {
    pub fn constant(omega: f64) -> Result<Self> {
        let p = Self::Constant(omega);
        p.validate()?;
        Ok(p)
    }

    pub fn piecewise(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let p = Self::Piecewise { breakpoints, values };
        p.validate()?;
        Ok(p)
    }

    pub fn sampled(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let p = Self::Sampled { times, values };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Constant(w) => {
                if !w.is_finite() {
                    return Err(Error::InvalidProfile(format!("non-finite frequency {w}")));
                }
            }
            Self::Piecewise { breakpoints, values } => {
                if values.len() != breakpoints.len() + 1 {
                    return Err(Error::InvalidProfile(format!(
                        "piecewise profile needs {} values for {} breakpoints, got {}",
                        breakpoints.len() + 1,
                        breakpoints.len(),
                        values.len()
                    )));
                }
                if !strictly_increasing(breakpoints) {
                    return Err(Error::InvalidProfile(
                        "piecewise breakpoints must be strictly increasing".into(),
                    ));
                }
                if breakpoints.iter().chain(values).any(|v| !v.is_finite()) {
                    return Err(Error::InvalidProfile("non-finite piecewise entry".into()));
                }
            }
            Self::Sampled { times, values } => {
                if times.len() < 2 || times.len() != values.len() {
                    return Err(Error::InvalidProfile(format!(
                        "sampled profile needs at least two (time, value) pairs of equal length, got {} times and {} values",
                        times.len(),
                        values.len()
                    )));
                }
                if !strictly_increasing(times) {
                    return Err(Error::InvalidProfile(
                        "sampled times must be strictly increasing".into(),
                    ));
                }
                if times.iter().chain(values).any(|v| !v.is_finite()) {
                    return Err(Error::InvalidProfile("non-finite sampled entry".into()));
                }
            }
        }
        Ok(())
    }

    /// `ω(t)`; piecewise profiles are right-continuous at breakpoints.
    pub fn value_at(&self, t: f64) -> Result<f64> {
        self.value_with_segment(t, t)
    }

    /// Evaluates `ω(t)`, picking the piecewise segment that contains
    /// `segment_time` rather than `t`. The integrator passes the midpoint of
    /// the current step so that a breakpoint on a step boundary is seen as a
    /// one-sided limit by every stage of that step.
    pub(crate) fn value_with_segment(&self, t: f64, segment_time: f64) -> Result<f64> {
        match self {
            Self::Constant(w) => Ok(*w),
            Self::Piecewise { breakpoints, values } => {
                let k = breakpoints.partition_point(|&b| b <= segment_time);
                Ok(values[k])
            }
            Self::Sampled { times, values } => {
                let (first, last) = (times[0], times[times.len() - 1]);
                let slack = 1e-12 * (1.0 + first.abs().max(last.abs()));
                if !(t >= first - slack && t <= last + slack) {
                    return Err(Error::ProfileDomain { t });
                }
                let t = t.clamp(first, last);
                let k = times.partition_point(|&s| s <= t).clamp(1, times.len() - 1);
                let (t0, t1) = (times[k - 1], times[k]);
                let (w0, w1) = (values[k - 1], values[k]);
                Ok(w0 + (w1 - w0) * (t - t0) / (t1 - t0))
            }
        }
    }

    pub fn constant_value(&self) -> Option<f64> {
        match self {
            Self::Constant(w) => Some(*w),
            _ => None,
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        match self {
            Self::Piecewise { breakpoints, .. } => breakpoints,
            _ => &[],
        }
    }

    pub fn check_domain(&self, t_start: f64, t_end: f64) -> Result<()> {
        self.value_at(t_start)?;
        self.value_at(t_end)?;
        Ok(())
    }
}

/// The four model families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Harmonic oscillator with constant or time-dependent frequency.
    Conservative,
    /// Explicitly time-dependent canonical Hamiltonian with `e^{±γt}`
    /// weights; evolved in the canonical Riccati variable `ĉ`.
    CaldirolaKanai,
    /// Canonical description in `Q = e^{γt/2} x` with `Ω² = ω² − γ²/4`.
    Expanding,
    /// Physical-level nonlinear Schrödinger equation with a complex
    /// logarithmic friction term.
    LogNlse,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Conservative,
        Family::CaldirolaKanai,
        Family::Expanding,
        Family::LogNlse,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Conservative => "conservative",
            Family::CaldirolaKanai => "caldirola_kanai",
            Family::Expanding => "expanding",
            Family::LogNlse => "log_nlse",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    family: Family,
    constants: PhysicalConstants,
    gamma: f64,
    omega: FrequencyProfile,
}

impl Model {
    pub fn new(
        family: Family,
        constants: PhysicalConstants,
        gamma: f64,
        omega: FrequencyProfile,
    ) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::InvalidModel(format!(
                "gamma must be finite and nonnegative, got {gamma}"
            )));
        }
        if family == Family::Conservative && gamma != 0.0 {
            return Err(Error::InvalidModel(format!(
                "the conservative family requires gamma = 0, got {gamma}"
            )));
        }
        omega.validate()?;
        Ok(Self { family, constants, gamma, omega })
    }

    pub fn conservative(constants: PhysicalConstants, omega: FrequencyProfile) -> Result<Self> {
        Self::new(Family::Conservative, constants, 0.0, omega)
    }

    pub fn caldirola_kanai(constants: PhysicalConstants, gamma: f64, omega: FrequencyProfile) -> Result<Self> {
        Self::new(Family::CaldirolaKanai, constants, gamma, omega)
    }

    pub fn expanding(constants: PhysicalConstants, gamma: f64, omega: FrequencyProfile) -> Result<Self> {
        Self::new(Family::Expanding, constants, gamma, omega)
    }

    pub fn log_nlse(constants: PhysicalConstants, gamma: f64, omega: FrequencyProfile) -> Result<Self> {
        Self::new(Family::LogNlse, constants, gamma, omega)
    }

    /// Same constants and profile under a different family.
    pub fn with_family(&self, family: Family) -> Result<Self> {
        Self::new(family, self.constants, self.gamma, self.omega.clone())
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn constants(&self) -> PhysicalConstants {
        self.constants
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn omega(&self) -> &FrequencyProfile {
        &self.omega
    }

    pub fn omega_at(&self, t: f64) -> Result<f64> {
        self.omega.value_at(t)
    }

    /// The squared frequency entering this family's equations: `Ω²` for the
    /// expanding family, `ω²` otherwise.
    pub fn effective_omega_sq(&self, omega: f64) -> f64 {
        match self.family {
            Family::Expanding => omega * omega - 0.25 * self.gamma * self.gamma,
            _ => omega * omega,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_must_be_positive() {
        assert!(PhysicalConstants::new(0.0, 1.0).is_err());
        assert!(PhysicalConstants::new(1.0, -1.0).is_err());
        assert!(PhysicalConstants::new(f64::NAN, 1.0).is_err());
        assert!(PhysicalConstants::new(2.0, 0.5).is_ok());
    }

    #[test]
    fn conservative_rejects_friction() {
        let p = FrequencyProfile::Constant(1.0);
        assert!(Model::new(Family::Conservative, PhysicalConstants::natural(), 0.1, p.clone()).is_err());
        assert!(Model::log_nlse(PhysicalConstants::natural(), -0.1, p).is_err());
    }

    #[test]
    fn piecewise_is_right_continuous() {
        let p = FrequencyProfile::piecewise(vec![5.0], vec![1.0, 2.0]).unwrap();
        assert_eq!(p.value_at(4.999).unwrap(), 1.0);
        assert_eq!(p.value_at(5.0).unwrap(), 2.0);
        assert_eq!(p.value_at(-100.0).unwrap(), 1.0);
        // left limit when the segment hint lies before the breakpoint
        assert_eq!(p.value_with_segment(5.0, 4.9995).unwrap(), 1.0);
    }

    #[test]
    fn piecewise_validation() {
        assert!(FrequencyProfile::piecewise(vec![1.0, 1.0], vec![1.0, 2.0, 3.0]).is_err());
        assert!(FrequencyProfile::piecewise(vec![1.0], vec![1.0]).is_err());
    }

    #[test]
    fn sampled_interpolates_linearly() {
        let p = FrequencyProfile::sampled(vec![0.0, 1.0, 3.0], vec![1.0, 3.0, 2.0]).unwrap();
        assert!((p.value_at(0.5).unwrap() - 2.0).abs() < 1e-15);
        assert!((p.value_at(2.0).unwrap() - 2.5).abs() < 1e-15);
        assert_eq!(p.value_at(3.0).unwrap(), 2.0);
        assert_eq!(p.value_at(3.5), Err(Error::ProfileDomain { t: 3.5 }));
        assert!(FrequencyProfile::sampled(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(FrequencyProfile::sampled(vec![0.0], vec![1.0]).is_err());
    }

    #[test]
    fn expanding_uses_shifted_frequency() {
        let m = Model::expanding(PhysicalConstants::natural(), 2.0, FrequencyProfile::Constant(1.0)).unwrap();
        assert_eq!(m.effective_omega_sq(1.0), 0.0);
    }
}
