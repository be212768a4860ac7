//! Parameter-level maps between the physical log-NLSE description, the
//! canonical Caldirola–Kanai description and the expanding coordinate.
//!
//! ```text
//! ĉ_CK  = e^{γt} c_NL
//! α_CK  = e^{−γt/2} α_NL
//! Q     = e^{γt/2} η,   Q̇ = e^{γt/2}(η̇ + γη/2)
//! c_exp = c_NL + γ/2
//! p̂     = e^{γt} p
//! ```
//!
//! Mapped values carry a [`RepresentationTag`] so canonical and physical
//! quantities are not mixed by accident.

use std::fmt;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::dynamics::{ClassicalState, ErmakovState, RiccatiVar};
use crate::error::{Error, Result};
use crate::ladder::PolyGaussianState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RepresentationTag {
    PhysicalNl,
    CanonicalCk,
    CanonicalExpanding,
}

impl RepresentationTag {
    pub fn name(&self) -> &'static str {
        match self {
            RepresentationTag::PhysicalNl => "physical_nl",
            RepresentationTag::CanonicalCk => "canonical_ck",
            RepresentationTag::CanonicalExpanding => "canonical_expanding",
        }
    }
}

impl fmt::Display for RepresentationTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A value together with the representation it belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tagged<T> {
    value: T,
    tag: RepresentationTag,
}

impl<T> Tagged<T> {
    pub fn new(value: T, tag: RepresentationTag) -> Self {
        Self { value, tag }
    }

    pub fn tag(&self) -> RepresentationTag {
        self.tag
    }

    pub fn value(&self) -> &T {
        &self.value
    }

    pub fn into_value(self) -> T {
        self.value
    }

    /// The value, provided it carries `expected`.
    pub fn expect(self, expected: RepresentationTag) -> Result<T> {
        if self.tag == expected {
            Ok(self.value)
        } else {
            Err(Error::RepresentationMismatch { expected, found: self.tag })
        }
    }

    /// Combines two values of the same representation.
    pub fn zip_with<U, R>(self, other: Tagged<U>, f: impl FnOnce(T, U) -> R) -> Result<Tagged<R>> {
        if self.tag != other.tag {
            return Err(Error::RepresentationMismatch { expected: self.tag, found: other.tag });
        }
        Ok(Tagged::new(f(self.value, other.value), self.tag))
    }
}

pub fn nl_to_ck_riccati(c_nl: RiccatiVar, t: f64, gamma: f64) -> Result<Tagged<RiccatiVar>> {
    c_nl.ensure_physical()?;
    Ok(Tagged::new(RiccatiVar(c_nl.0 * (gamma * t).exp()), RepresentationTag::CanonicalCk))
}

pub fn ck_to_nl_riccati(c_ck: Tagged<RiccatiVar>, t: f64, gamma: f64) -> Result<RiccatiVar> {
    let c = c_ck.expect(RepresentationTag::CanonicalCk)?;
    c.ensure_physical()?;
    Ok(RiccatiVar(c.0 * (-gamma * t).exp()))
}

pub fn nl_to_ck_alpha(e_nl: ErmakovState, t: f64, gamma: f64) -> Result<Tagged<ErmakovState>> {
    let e = ErmakovState::new(e_nl.alpha, e_nl.alpha_dot)?;
    let k = (-0.5 * gamma * t).exp();
    let mapped = ErmakovState::new(k * e.alpha, k * (e.alpha_dot - 0.5 * gamma * e.alpha))?;
    Ok(Tagged::new(mapped, RepresentationTag::CanonicalCk))
}

pub fn ck_to_nl_alpha(e_ck: Tagged<ErmakovState>, t: f64, gamma: f64) -> Result<ErmakovState> {
    let e = e_ck.expect(RepresentationTag::CanonicalCk)?;
    let k = (0.5 * gamma * t).exp();
    ErmakovState::new(k * e.alpha, k * (e.alpha_dot + 0.5 * gamma * e.alpha))
}

pub fn physical_to_expanding(cls: ClassicalState, t: f64, gamma: f64) -> Tagged<ClassicalState> {
    let k = (0.5 * gamma * t).exp();
    let q = ClassicalState::new(k * cls.eta, k * (cls.eta_dot + 0.5 * gamma * cls.eta));
    Tagged::new(q, RepresentationTag::CanonicalExpanding)
}

pub fn expanding_to_physical(q: Tagged<ClassicalState>, t: f64, gamma: f64) -> Result<ClassicalState> {
    let q = q.expect(RepresentationTag::CanonicalExpanding)?;
    let k = (-0.5 * gamma * t).exp();
    let eta = k * q.eta;
    Ok(ClassicalState::new(eta, k * q.eta_dot - 0.5 * gamma * eta))
}

/// Width variable of the expanding description; `imag(c)` is unchanged.
pub fn nl_to_expanding_riccati(c_nl: RiccatiVar, gamma: f64) -> Result<Tagged<RiccatiVar>> {
    c_nl.ensure_physical()?;
    Ok(Tagged::new(RiccatiVar(c_nl.0 + 0.5 * gamma), RepresentationTag::CanonicalExpanding))
}

pub fn expanding_to_nl_riccati(c_exp: Tagged<RiccatiVar>, gamma: f64) -> Result<RiccatiVar> {
    let c = c_exp.expect(RepresentationTag::CanonicalExpanding)?;
    c.ensure_physical()?;
    Ok(RiccatiVar(c.0 - 0.5 * gamma))
}

/// `p̂ = p e^{γt}`
pub fn canonical_momentum(p_phys: f64, t: f64, gamma: f64) -> Tagged<f64> {
    Tagged::new(p_phys * (gamma * t).exp(), RepresentationTag::CanonicalCk)
}

pub fn physical_momentum(p_hat: Tagged<f64>, t: f64, gamma: f64) -> Result<f64> {
    Ok(p_hat.expect(RepresentationTag::CanonicalCk)? * (-gamma * t).exp())
}

/// Checks that scaling the exponent of a physical Gaussian by `e^{γt}`
/// yields the Caldirola–Kanai parameters `ĉ` and `p̂`.
///
/// Compares the quadratic coefficient `i m c/(2ħ)` and the linear
/// coefficient `i p/ħ` after scaling against the ones built from
/// [`nl_to_ck_riccati`] and [`canonical_momentum`], and returns the larger
/// relative difference. The constant term is not compared; it only moves
/// normalization and phase.
pub fn exponent_map_check(wp_nl: &PolyGaussianState, t: f64, gamma: f64) -> Result<f64> {
    if wp_nl.degree() > 0 {
        return Err(Error::NonGaussianState { degree: wp_nl.degree() });
    }
    let consts = wp_nl.constants();
    let (m, hbar) = (consts.mass(), consts.hbar());
    let i = C64::new(0.0, 1.0);
    let scale = (gamma * t).exp();

    let quad_nl = i * m * wp_nl.width().0 / (2.0 * hbar) * scale;
    let lin_nl = i * wp_nl.p_center() / hbar * scale;

    let c_ck = nl_to_ck_riccati(wp_nl.width(), t, gamma)?.into_value();
    let p_ck = canonical_momentum(wp_nl.p_center(), t, gamma).into_value();
    let quad_ck = i * m * c_ck.0 / (2.0 * hbar);
    let lin_ck = i * p_ck / hbar;

    let rel = |a: C64, b: C64| (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE);
    Ok(rel(quad_nl, quad_ck).max(if lin_nl.norm() == 0.0 && lin_ck.norm() == 0.0 { 0.0 } else { rel(lin_nl, lin_ck) }))
}
