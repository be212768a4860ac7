//! Ermakov invariants, quantum uncertainties and energy contributions.
//!
//! Uncertainties are written in terms of the Riccati variable only, so one
//! formula set serves every family:
//!
//! ```text
//! ⟨x̃²⟩ = (ħ/2m) / imag(c)
//! ⟨p̃²⟩ = (ħm/2) |c|² / imag(c)
//! ⟨[x̃,p̃]₊⟩/2 = (ħ/2) real(c) / imag(c)
//! ```
//!
//! and `⟨x̃²⟩⟨p̃²⟩ − (⟨[x̃,p̃]₊⟩/2)² = ħ²/4` identically.

use serde::Serialize;

use crate::dynamics::{ermakov_from_riccati, ClassicalState, ErmakovState, RiccatiVar, TimeSeries};
use crate::error::{Error, Result};
use crate::models::{Family, Model, PhysicalConstants};

/// Floor used when normalizing invariant drift, since `I = 0` exactly for
/// a packet at rest at the origin.
pub const INVARIANT_DRIFT_FLOOR: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UncertaintyRecord {
    pub var_x: f64,
    pub var_p: f64,
    pub corr: f64,
    /// `var_x·var_p − corr²`
    pub sr_lhs: f64,
    /// `var_x·var_p`
    pub u_product: f64,
}

impl UncertaintyRecord {
    /// Relative deviation of the Schrödinger–Robertson combination from
    /// `ħ²/4`.
    pub fn sr_residual(&self, hbar: f64) -> f64 {
        let target = 0.25 * hbar * hbar;
        (self.sr_lhs - target).abs() / target
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvariantValue {
    pub value: f64,
    pub family: Family,
}

/// Ermakov invariant of the family.
///
/// * conservative: `½[(η̇α − α̇η)² + (η/α)²]`
/// * Caldirola–Kanai: `½[e^{2γt}(η̇α − α̇η)² + (η/α)²]` with `α = α_CK`
/// * expanding: `½α²[(Q̇ − (α̇/α)Q)² + (Q/α²)²]`, the classical state being
///   the canonical `(Q, Q̇)`
/// * log-NLSE: `½e^{γt}α²[(η̇ − (α̇/α − γ/2)η)² + (η/α²)²]`
pub fn ermakov_invariant(model: &Model, t: f64, cls: ClassicalState, e: ErmakovState) -> Result<InvariantValue> {
    let e = ErmakovState::new(e.alpha, e.alpha_dot)?;
    let (a, ad) = (e.alpha, e.alpha_dot);
    let (x, v) = (cls.eta, cls.eta_dot);
    let g = model.gamma();
    let value = match model.family() {
        Family::Conservative => 0.5 * ((v * a - ad * x).powi(2) + (x / a).powi(2)),
        Family::CaldirolaKanai => 0.5 * ((2.0 * g * t).exp() * (v * a - ad * x).powi(2) + (x / a).powi(2)),
        Family::Expanding => 0.5 * a * a * ((v - ad / a * x).powi(2) + (x / (a * a)).powi(2)),
        Family::LogNlse => {
            0.5 * (g * t).exp() * a * a * ((v - (ad / a - 0.5 * g) * x).powi(2) + (x / (a * a)).powi(2))
        }
    };
    Ok(InvariantValue { value, family: model.family() })
}

/// [`ermakov_invariant`] evaluated from the Riccati variable.
pub fn invariant_from_riccati(model: &Model, t: f64, cls: ClassicalState, c: RiccatiVar) -> Result<InvariantValue> {
    let e = ermakov_from_riccati(model, t, c)?;
    ermakov_invariant(model, t, cls, e)
}

/// Position/momentum uncertainties from `c`. For Caldirola–Kanai `c = ĉ`
/// and the momentum entries refer to the canonical momentum.
pub fn uncertainties(constants: PhysicalConstants, c: RiccatiVar) -> Result<UncertaintyRecord> {
    c.ensure_physical()?;
    let (m, hbar) = (constants.mass(), constants.hbar());
    let (re, im) = (c.re(), c.im());
    let inv_im = 1.0 / im;
    let var_x = 0.5 * hbar / m * inv_im;
    let var_p = 0.5 * hbar * m * inv_im * (re * re + im * im);
    let corr = 0.5 * hbar * inv_im * re;
    // var_p splits into corr²/var_x plus the conditional spread
    // (ħm/2)·imag(c); the SR combination is var_x times the latter, which
    // avoids cancelling two large terms when |real(c)| ≫ imag(c).
    let conditional_var_p = 0.5 * hbar * m * im;
    let sr_lhs = var_x * conditional_var_p;
    let ratio = re * inv_im;
    let u_product = 0.25 * hbar * hbar * (1.0 + ratio * ratio);
    Ok(UncertaintyRecord { var_x, var_p, corr, sr_lhs, u_product })
}

/// Width contribution to the energy, `(ħ/4)(real(c)² + imag(c)² + ω²)/imag(c)`.
pub fn energy_contribution(constants: PhysicalConstants, c: RiccatiVar, omega: f64) -> Result<f64> {
    c.ensure_physical()?;
    let (re, im) = (c.re(), c.im());
    Ok(0.25 * constants.hbar() / im * (re * re + im * im + omega * omega))
}

/// `U_CK(t) = ⟨x̃²⟩⟨p̂̃²⟩ e^{−2γt}` along a Caldirola–Kanai run: the
/// uncertainty product formed from canonical quantities. It decays below
/// `ħ²/4`, which reflects mixing canonical and physical levels rather than
/// a violation of the uncertainty principle.
pub fn ck_uncertainty_product(run: &TimeSeries) -> Result<Vec<f64>> {
    let model = run.model();
    if model.family() != Family::CaldirolaKanai {
        return Err(Error::UnsupportedFamily { operation: "ck_uncertainty_product", family: model.family() });
    }
    let g = model.gamma();
    run.states()
        .iter()
        .map(|s| {
            let u = uncertainties(model.constants(), s.riccati)?;
            Ok(u.var_x * u.var_p * (-2.0 * g * s.t).exp())
        })
        .collect()
}

/// Invariant along every stored state of a run.
pub fn invariant_series(run: &TimeSeries) -> Result<Vec<f64>> {
    let model = run.model();
    run.states()
        .iter()
        .map(|s| Ok(invariant_from_riccati(model, s.t, s.classical, s.riccati)?.value))
        .collect()
}

/// `max_t |I(t) − I(0)| / max(I(0), 1e-30)`.
pub fn invariant_drift(values: &[f64]) -> f64 {
    let Some(&first) = values.first() else { return 0.0 };
    let norm = first.abs().max(INVARIANT_DRIFT_FLOOR);
    values.iter().map(|v| (v - first).abs() / norm).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::FrequencyProfile;

    fn model(family: Family, gamma: f64, omega: f64) -> Model {
        Model::new(family, PhysicalConstants::natural(), gamma, FrequencyProfile::Constant(omega)).unwrap()
    }

    #[test]
    fn ground_state_uncertainties() {
        let u = uncertainties(PhysicalConstants::natural(), RiccatiVar::new(0.0, 1.0)).unwrap();
        assert_eq!((u.var_x, u.var_p, u.corr, u.sr_lhs), (0.5, 0.5, 0.0, 0.25));
    }

    #[test]
    fn correlated_state_uncertainties() {
        let u = uncertainties(PhysicalConstants::natural(), RiccatiVar::new(1.0, 1.0)).unwrap();
        assert!((u.var_x - 0.5).abs() < 1e-15);
        assert!((u.var_p - 1.0).abs() < 1e-15);
        assert!((u.corr - 0.5).abs() < 1e-15);
        assert!((u.u_product - 0.5).abs() < 1e-15);
        assert!(u.sr_residual(1.0) < 1e-15);
    }

    #[test]
    fn product_matches_direct_formula() {
        let k = PhysicalConstants::new(2.5, 0.3).unwrap();
        for c in [RiccatiVar::new(0.7, 3.0), RiccatiVar::new(-4.0, 0.01), RiccatiVar::new(1e3, 1e-3)] {
            let u = uncertainties(k, c).unwrap();
            let direct = u.var_x * u.var_p;
            assert!((u.u_product - direct).abs() <= 1e-12 * direct);
            let sr_direct = direct - u.corr * u.corr;
            assert!((u.sr_lhs - sr_direct).abs() <= 1e-9 * direct);
        }
    }

    #[test]
    fn unphysical_width_rejected() {
        assert!(uncertainties(PhysicalConstants::natural(), RiccatiVar::new(1.0, 0.0)).is_err());
        assert!(energy_contribution(PhysicalConstants::natural(), RiccatiVar::new(1.0, -1.0), 1.0).is_err());
    }

    #[test]
    fn energy_values() {
        let k = PhysicalConstants::natural();
        assert!((energy_contribution(k, RiccatiVar::new(0.0, 1.0), 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((energy_contribution(k, RiccatiVar::new(0.0, 1.0), 0.0).unwrap() - 0.25).abs() < 1e-15);
        let (re, im, w) = (0.4, 1.7, 0.9);
        let e1 = energy_contribution(k, RiccatiVar::new(re, im), w).unwrap();
        let e2 = energy_contribution(k, RiccatiVar::new(2.0 * re, im), w).unwrap();
        assert!((e2 - e1 - 0.25 / im * 3.0 * re * re).abs() < 1e-14);
    }

    #[test]
    fn energy_matches_uncertainty_form() {
        // Ẽ = ⟨p̃²⟩/2m + (m/2)ω²⟨x̃²⟩
        let k = PhysicalConstants::new(1.7, 0.6).unwrap();
        let c = RiccatiVar::new(-0.3, 2.2);
        let w = 1.4;
        let u = uncertainties(k, c).unwrap();
        let direct = u.var_p / (2.0 * k.mass()) + 0.5 * k.mass() * w * w * u.var_x;
        assert!((energy_contribution(k, c, w).unwrap() - direct).abs() < 1e-14);
    }

    #[test]
    fn log_nlse_alpha_forms_agree() {
        // α-based left-hand forms of the dissipative uncertainties
        let g = 0.6;
        let m = model(Family::LogNlse, g, 1.3);
        let c = RiccatiVar::new(0.25, 1.6);
        let e = ermakov_from_riccati(&m, 0.0, c).unwrap();
        let (a, ad) = (e.alpha, e.alpha_dot);
        let u = uncertainties(PhysicalConstants::natural(), c).unwrap();
        assert!((u.var_x - 0.5 * a * a).abs() < 1e-14);
        assert!((u.var_p - 0.5 * ((ad - 0.5 * g * a).powi(2) + 1.0 / (a * a))).abs() < 1e-14);
        assert!((2.0 * u.corr - (ad * a - 0.5 * g * a * a)).abs() < 1e-14);
        let energy = 0.25 * ((ad - 0.5 * g * a).powi(2) + 1.0 / (a * a) + 1.3f64.powi(2) * a * a);
        assert!((energy_contribution(PhysicalConstants::natural(), c, 1.3).unwrap() - energy).abs() < 1e-14);
    }

    #[test]
    fn invariant_at_rest_is_zero() {
        let e = ErmakovState::new(0.7, 0.2).unwrap();
        for fam in Family::ALL {
            let g = if fam == Family::Conservative { 0.0 } else { 0.3 };
            let v = ermakov_invariant(&model(fam, g, 1.0), 2.0, ClassicalState::default(), e).unwrap();
            assert_eq!(v.value, 0.0);
        }
    }

    #[test]
    fn invariant_on_closed_orbit() {
        let m = model(Family::Conservative, 0.0, 1.0);
        let e = ErmakovState::new(1.0, 0.0).unwrap();
        for t in [0.0, 0.4, 2.0, 5.5] {
            let cls = ClassicalState::new(f64::cos(t), -f64::sin(t));
            let v = ermakov_invariant(&m, t, cls, e).unwrap();
            assert!((v.value - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn invariant_rejects_degenerate_width() {
        let m = model(Family::Conservative, 0.0, 1.0);
        let e = ErmakovState { alpha: 0.0, alpha_dot: 1.0 };
        assert!(ermakov_invariant(&m, 0.0, ClassicalState::new(1.0, 0.0), e).is_err());
    }

    #[test]
    fn drift_normalization() {
        assert_eq!(invariant_drift(&[0.0, 0.0]), 0.0);
        assert!((invariant_drift(&[2.0, 2.1, 1.8]) - 0.1).abs() < 1e-15);
    }
}
