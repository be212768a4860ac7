//! Analytic solutions of the constant-coefficient Riccati equations.
//!
//! With a stationary root `c̃` known, `c = c̃ + 1/w` turns the Riccati
//! equation into the linear `ẇ − A w = 1`, whose constant-`A` solution is
//! `w(t) = (e^{At} − 1)/A + w₀ e^{At}`. Every physical solution is then a
//! member of the one-parameter family labelled by `w₀`.

use std::fmt;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::dynamics::RiccatiVar;
use crate::error::{Error, Result};
use crate::models::{Family, Model};
use crate::observables::energy_contribution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchLabel {
    Plus,
    Minus,
}

impl fmt::Display for BranchLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BranchLabel::Plus => "plus",
            BranchLabel::Minus => "minus",
        })
    }
}

/// Linear coefficient `A` of the Bernoulli/linearized equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchParameter(pub C64);

/// Stationary root `c̃` of a constant-coefficient Riccati equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticularSolution {
    pub c_tilde: C64,
    pub branch: BranchLabel,
    /// `imag(c̃) > 0`: the root is itself a normalizable packet.
    pub physical: bool,
    /// `A` for this root.
    pub a: BranchParameter,
}

/// Initial value `w₀` of `w = 1/(c − c̃)`; `Infinite` encodes `c ≡ c̃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyParameter {
    Finite(C64),
    Infinite,
}

impl FamilyParameter {
    /// `w₀ = 1/(c₀ − c̃)`.
    pub fn from_initial(c0: RiccatiVar, p: &ParticularSolution) -> Self {
        let d = c0.0 - p.c_tilde;
        if d == C64::new(0.0, 0.0) {
            FamilyParameter::Infinite
        } else {
            FamilyParameter::Finite(d.inv())
        }
    }
}

fn constant_coefficients(model: &Model) -> Result<f64> {
    if model.family() == Family::CaldirolaKanai {
        return Err(Error::UnsupportedFamily { operation: "particular_solutions", family: model.family() });
    }
    model.omega().constant_value().ok_or_else(|| {
        Error::InvalidArgument("closed-form solutions need a constant frequency profile".into())
    })
}

/// Linear damping of the family's Riccati equation (`γ` for log-NLSE).
fn linear_damping(model: &Model) -> f64 {
    match model.family() {
        Family::LogNlse => model.gamma(),
        _ => 0.0,
    }
}

/// The two roots of `0 = −δc − c² − ω²` (`δ = γ` for log-NLSE, zero
/// otherwise; `Ω²` replaces `ω²` for the expanding family), as
/// `c̃± = −δ/2 ± (δ²/4 − ω²)^{1/2}` with the principal square root.
pub fn particular_solutions(model: &Model) -> Result<[ParticularSolution; 2]> {
    let omega = constant_coefficients(model)?;
    let delta = linear_damping(model);
    let w2 = model.effective_omega_sq(omega);
    let disc = C64::new(0.25 * delta * delta - w2, 0.0).sqrt();
    let make = |branch: BranchLabel, sign: f64| {
        let c_tilde = C64::new(-0.5 * delta, 0.0) + sign * disc;
        ParticularSolution {
            c_tilde,
            branch,
            physical: c_tilde.im > 0.0,
            a: BranchParameter(delta + 2.0 * c_tilde),
        }
    };
    Ok([make(BranchLabel::Plus, 1.0), make(BranchLabel::Minus, -1.0)])
}

/// `A = δ + 2c̃`, i.e. `2c̃` for the conservative and expanding families and
/// `γ + 2c̃ = ±2(γ²/4 − ω²)^{1/2}` for log-NLSE.
pub fn branch_parameter(model: &Model, p: &ParticularSolution) -> Result<BranchParameter> {
    constant_coefficients(model)?;
    Ok(BranchParameter(linear_damping(model) + 2.0 * p.c_tilde))
}

/// `(e^z − 1)/z`, continuous through `z = 0`.
fn exprel(z: C64) -> C64 {
    if z.norm() < 1e-3 {
        let mut term = C64::new(1.0, 0.0);
        let mut sum = term;
        for k in 2..10 {
            term = term * z / k as f64;
            sum += term;
        }
        sum
    } else {
        (z.exp() - 1.0) / z
    }
}

/// `w(t) = (e^{At} − 1)/A + w₀ e^{At}` with `t` measured from the time at
/// which `w = w₀`. Returns `None` for `w₀ = ∞`.
pub fn bernoulli_w(a: BranchParameter, w0: FamilyParameter, t: f64) -> Option<C64> {
    match w0 {
        FamilyParameter::Infinite => None,
        FamilyParameter::Finite(w0) => {
            let at = a.0 * t;
            Some(t * exprel(at) + w0 * at.exp())
        }
    }
}

/// Member `c(t) = c̃ + 1/w(t)` of the one-parameter family.
pub fn general_solution(p: &ParticularSolution, w0: FamilyParameter, t: f64) -> Result<RiccatiVar> {
    match bernoulli_w(p.a, w0, t) {
        None => Ok(RiccatiVar(p.c_tilde)),
        Some(w) => {
            if w == C64::new(0.0, 0.0) || !w.is_finite() {
                Err(Error::FamilyPole { t })
            } else {
                Ok(RiccatiVar(p.c_tilde + w.inv()))
            }
        }
    }
}

/// `w` on a time grid for a time-dependent `A(t)`, using the trapezoid rule
/// for `Λ(t) = ∫A` and `∫ e^{−Λ}` with both lower limits at `times[0]`.
pub fn bernoulli_w_quadrature(times: &[f64], a: &[C64], w0: C64) -> Result<Vec<C64>> {
    if times.len() != a.len() || times.is_empty() {
        return Err(Error::InvalidArgument("time grid and A samples must have equal, nonzero length".into()));
    }
    if times.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("time grid must be strictly increasing".into()));
    }
    let mut out = Vec::with_capacity(times.len());
    let mut lambda = C64::new(0.0, 0.0);
    let mut inner = C64::new(0.0, 0.0);
    let mut prev_weight = C64::new(1.0, 0.0);
    out.push(w0);
    for k in 1..times.len() {
        let h = times[k] - times[k - 1];
        lambda += 0.5 * h * (a[k - 1] + a[k]);
        let weight = (-lambda).exp();
        inner += 0.5 * h * (prev_weight + weight);
        prev_weight = weight;
        out.push((w0 + inner) * lambda.exp());
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchClass {
    /// `ω² > γ²/4`, `γ > 0`: imaginary pair of `A`, width oscillates about
    /// `α_eq = Ω^{-1/2}`.
    UnderdampedWidth,
    /// `0 < ω² < γ²/4`: two real `A`, two distinct asymptotic behaviours.
    OverdampedWidth,
    /// `ω = 0`, `γ > 0`: `A = ±γ`.
    FreeDamped,
    /// `ω² = γ²/4` (includes free motion without friction, `A = ±0`).
    Degenerate,
    /// `γ = 0`, `ω > 0`: `A = ±2iω`, only the `+` root is physical.
    ConservativeSingle,
}

impl BranchClass {
    pub fn name(&self) -> &'static str {
        match self {
            BranchClass::UnderdampedWidth => "underdamped-width",
            BranchClass::OverdampedWidth => "overdamped-width",
            BranchClass::FreeDamped => "free-damped",
            BranchClass::Degenerate => "degenerate",
            BranchClass::ConservativeSingle => "conservative-single",
        }
    }
}

impl fmt::Display for BranchClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchReport {
    pub class: BranchClass,
    pub solutions: [ParticularSolution; 2],
    /// Equilibrium width about which `α` oscillates, when one exists.
    pub equilibrium_alpha: Option<f64>,
}

impl BranchReport {
    pub fn a_values(&self) -> [C64; 2] {
        [self.solutions[0].a.0, self.solutions[1].a.0]
    }

    /// Number of roots with `imag(c̃) > 0`.
    pub fn physical_count(&self) -> usize {
        self.solutions.iter().filter(|p| p.physical).count()
    }

    /// Energy contribution `(ħ/4)(|c|² + ω²)/imag(c)` of
    /// each branch's family member `c̃ + 1/w(t)` at time `t`; `None` when
    /// that member is unphysical (`imag(c) ≤ 0`) or hits a pole.
    pub fn branch_energies(&self, model: &Model, w0: FamilyParameter, t: f64) -> [Option<f64>; 2] {
        let omega = model.omega().constant_value().unwrap_or(0.0);
        self.solutions.map(|p| {
            general_solution(&p, w0, t)
                .ok()
                .and_then(|c| energy_contribution(model.constants(), c, omega).ok())
        })
    }
}

/// Classifies the width dynamics of a log-NLSE (or conservative, `γ = 0`)
/// model by the two roots of its Riccati equation.
pub fn classify_branch(model: &Model) -> Result<BranchReport> {
    let omega = constant_coefficients(model)?;
    let solutions = particular_solutions(model)?;
    let gamma = linear_damping(model);
    let w2 = model.effective_omega_sq(omega);
    let quarter_g2 = 0.25 * gamma * gamma;
    let scale = w2.abs().max(quarter_g2);
    let class = if (w2 - quarter_g2).abs() <= 1e-12 * scale || scale == 0.0 {
        BranchClass::Degenerate
    } else if gamma == 0.0 {
        BranchClass::ConservativeSingle
    } else if w2 == 0.0 {
        BranchClass::FreeDamped
    } else if w2 > quarter_g2 {
        BranchClass::UnderdampedWidth
    } else {
        BranchClass::OverdampedWidth
    };
    let equilibrium_alpha = match class {
        BranchClass::UnderdampedWidth | BranchClass::ConservativeSingle => {
            Some((w2 - quarter_g2).sqrt().powf(-0.5))
        }
        _ => None,
    };
    Ok(BranchReport { class, solutions, equilibrium_alpha })
}
