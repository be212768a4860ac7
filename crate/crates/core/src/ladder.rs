//! Ladder operators and coherent states on polynomial-times-Gaussian states.
//!
//! A [`PolyGaussianState`] is
//!
//! ```text
//! ψ(x) = e^{L} P(x̃) exp(i m c x̃²/(2ħ) + i p x̃/ħ),   x̃ = x − X
//! ```
//!
//! with `P` a complex polynomial. Position and momentum act exactly on this
//! form, and the ladder operators are built from them:
//!
//! ```text
//! a  =  i √(m/2ħ) α (p/m − c x)
//! a⁺ = −i √(m/2ħ) α (p/m − c* x)
//! ```

use num_complex::Complex64 as C64;

use crate::dynamics::{ClassicalState, RiccatiVar, TimeSeries};
use crate::error::{Error, Result};
use crate::models::{Family, Model, PhysicalConstants};
use crate::poly;

/// Relative tolerance on `c` when an operator meets a state.
pub const WIDTH_MATCH_TOL: f64 = 1e-10;
/// Largest probability mass a sampling grid may leave out.
pub const GRID_MASS_LIMIT: f64 = 1e-10;

const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct PolyGaussianState {
    constants: PhysicalConstants,
    coeffs: Vec<C64>,
    x_center: f64,
    p_center: f64,
    width: RiccatiVar,
    log_norm: C64,
}

impl PolyGaussianState {
    pub fn new(
        constants: PhysicalConstants,
        coeffs: Vec<C64>,
        x_center: f64,
        p_center: f64,
        width: RiccatiVar,
        log_norm: C64,
    ) -> Result<Self> {
        width.ensure_physical()?;
        if coeffs.iter().any(|c| !c.is_finite()) || !log_norm.is_finite() {
            return Err(Error::InvalidArgument("state coefficients must be finite".into()));
        }
        if !x_center.is_finite() || !p_center.is_finite() {
            return Err(Error::InvalidArgument("state centers must be finite".into()));
        }
        Ok(Self { constants, coeffs: poly::trim(coeffs), x_center, p_center, width, log_norm })
    }

    pub fn constants(&self) -> PhysicalConstants {
        self.constants
    }

    /// Coefficients of `P` in ascending powers of `x̃`.
    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn x_center(&self) -> f64 {
        self.x_center
    }

    pub fn p_center(&self) -> f64 {
        self.p_center
    }

    pub fn width(&self) -> RiccatiVar {
        self.width
    }

    pub fn log_norm(&self) -> C64 {
        self.log_norm
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients with the prefactor `e^{L}` folded in.
    pub fn scaled_coeffs(&self) -> Vec<C64> {
        let f = self.log_norm.exp();
        self.coeffs.iter().map(|c| c * f).collect()
    }

    /// Largest modulus among [`scaled_coeffs`](Self::scaled_coeffs).
    pub fn coefficient_norm(&self) -> f64 {
        self.scaled_coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn evaluate(&self, x: f64) -> C64 {
        let (m, hbar) = (self.constants.mass(), self.constants.hbar());
        let xt = x - self.x_center;
        let exponent = self.log_norm + I * (m * self.width.0 * xt * xt / (2.0 * hbar) + self.p_center * xt / hbar);
        poly::eval(&self.coeffs, C64::new(xt, 0.0)) * exponent.exp()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { coeffs: poly::trim(poly::scale(&self.coeffs, s)), ..self.clone() }
    }

    fn same_envelope(&self, other: &Self) -> bool {
        let tol = 1e-12 * (1.0 + self.width.0.norm());
        self.constants == other.constants
            && self.x_center == other.x_center
            && self.p_center == other.p_center
            && (self.width.0 - other.width.0).norm() <= tol
    }

    /// `self + other`; both must share centers and width.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(C64::new(1.0, 0.0), other)
    }

    /// `self − other`; both must share centers and width.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(C64::new(-1.0, 0.0), other)
    }

    fn combine(&self, sign: C64, other: &Self) -> Result<Self> {
        if !self.same_envelope(other) {
            return Err(Error::IncompatibleStates);
        }
        let rel = sign * (other.log_norm - self.log_norm).exp();
        let coeffs = poly::combine(C64::new(1.0, 0.0), &self.coeffs, rel, &other.coeffs);
        Ok(Self { coeffs: poly::trim(coeffs), ..self.clone() })
    }

    /// Largest coefficient modulus of `self − other`, measured with the
    /// prefactors folded in.
    pub fn coefficient_distance(&self, other: &Self) -> Result<f64> {
        if !self.same_envelope(other) {
            return Err(Error::IncompatibleStates);
        }
        let (a, b) = (self.scaled_coeffs(), other.scaled_coeffs());
        let n = a.len().max(b.len());
        let zero = C64::new(0.0, 0.0);
        Ok((0..n)
            .map(|k| (a.get(k).copied().unwrap_or(zero) - b.get(k).copied().unwrap_or(zero)).norm())
            .fold(0.0, f64::max))
    }

    /// `x ψ`
    pub fn apply_position(&self) -> Self {
        let coeffs = poly::combine(
            C64::new(1.0, 0.0),
            &poly::mul_x(&self.coeffs),
            C64::new(self.x_center, 0.0),
            &self.coeffs,
        );
        Self { coeffs: poly::trim(coeffs), ..self.clone() }
    }

    /// `−iħ ∂ψ/∂x`
    pub fn apply_momentum(&self) -> Self {
        let (m, hbar) = (self.constants.mass(), self.constants.hbar());
        let d = poly::derivative(&self.coeffs);
        let xp = poly::mul_x(&self.coeffs);
        let coeffs = poly::combine(-I * hbar, &d, m * self.width.0, &xp);
        let coeffs = poly::combine(C64::new(1.0, 0.0), &coeffs, C64::new(self.p_center, 0.0), &self.coeffs);
        Self { coeffs: poly::trim(coeffs), ..self.clone() }
    }

    /// `∫|ψ|² dx`
    pub fn norm_sqr(&self) -> Result<f64> {
        Ok(inner_product(self, self)?.re)
    }
}

/// `∫ s1(x)* s2(x) dx`, evaluated exactly from Gaussian moments.
pub fn inner_product(s1: &PolyGaussianState, s2: &PolyGaussianState) -> Result<C64> {
    if s1.constants != s2.constants {
        return Err(Error::IncompatibleStates);
    }
    let (m, hbar) = (s1.constants.mass(), s1.constants.hbar());
    let (c1, c2) = (s1.width.0, s2.width.0);
    let (x1, x2) = (s1.x_center, s2.x_center);
    let (p1, p2) = (s1.p_center, s2.p_center);

    // conj(ψ1)ψ2 ∝ exp(−q x² + b x + d)
    let q = -I * m / (2.0 * hbar) * (c2 - c1.conj());
    if q.re <= 0.0 {
        return Err(Error::DivergentIntegral { re_q: q.re });
    }
    let b = I / hbar * (m * c1.conj() * x1 - m * c2 * x2 + p2 - p1);
    let d = I / hbar * (-0.5 * m * c1.conj() * x1 * x1 + p1 * x1 + 0.5 * m * c2 * x2 * x2 - p2 * x2);
    let x0 = b / (2.0 * q);

    let conj_p1: Vec<C64> = s1.coeffs.iter().map(|c| c.conj()).collect();
    let r = poly::mul(&poly::shift(&conj_p1, x0 - x1), &poly::shift(&s2.coeffs, x0 - x2));

    // ∫u^{2k} e^{−q u²} du = Γ(k+½) q^{−(k+½)}
    let mut moment = (C64::new(std::f64::consts::PI, 0.0) / q).sqrt();
    let mut sum = C64::new(0.0, 0.0);
    for (k, coeff) in r.iter().enumerate().step_by(2) {
        if k > 0 {
            moment *= (k as f64 - 1.0) / (2.0 * q);
        }
        sum += coeff * moment;
    }
    let prefactor = (s1.log_norm.conj() + s2.log_norm + q * x0 * x0 + d).exp();
    Ok(prefactor * sum)
}

/// Coherent-state eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenvalue {
    pub z: C64,
}

impl Eigenvalue {
    pub fn new(z: C64) -> Self {
        Self { z }
    }

    pub fn re(&self) -> f64 {
        self.z.re
    }

    pub fn im(&self) -> f64 {
        self.z.im
    }

    pub fn norm_sqr(&self) -> f64 {
        self.z.norm_sqr()
    }
}

/// Which eigenvalue to report for dissipative families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZLevel {
    /// Eigenvalue of the operators acting on the wave packet itself.
    Physical,
    /// Eigenvalue whose modulus squared is `(m/ħ)` times the family
    /// invariant. Differs from `Physical` only for log-NLSE, by `e^{γt/2}`.
    Invariant,
}

/// `z = √(m/2ħ) α [imag(c) η + i(v − real(c) η)]`.
///
/// `v` is `η̇`, except for Caldirola–Kanai where it is the canonical velocity
/// `e^{γt} η̇` paired with `ĉ`.
pub fn z_eigenvalue(model: &Model, cls: ClassicalState, c: RiccatiVar, t: f64, level: ZLevel) -> Result<Eigenvalue> {
    let alpha = c.alpha()?;
    let consts = model.constants();
    let g = model.gamma();
    let v = match model.family() {
        Family::CaldirolaKanai => (g * t).exp() * cls.eta_dot,
        _ => cls.eta_dot,
    };
    let k = (consts.mass() / (2.0 * consts.hbar())).sqrt() * alpha;
    let mut z = k * C64::new(c.im() * cls.eta, v - c.re() * cls.eta);
    if level == ZLevel::Invariant && model.family() == Family::LogNlse {
        z *= (0.5 * g * t).exp();
    }
    Ok(Eigenvalue::new(z))
}

/// Annihilation and creation operators for a given width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderOperators {
    constants: PhysicalConstants,
    c: RiccatiVar,
    prefactor: f64,
}

impl LadderOperators {
    pub fn new(constants: PhysicalConstants, c: RiccatiVar) -> Result<Self> {
        let alpha = c.alpha()?;
        let prefactor = (constants.mass() / (2.0 * constants.hbar())).sqrt() * alpha;
        Ok(Self { constants, c, prefactor })
    }

    pub fn width(&self) -> RiccatiVar {
        self.c
    }

    fn check(&self, s: &PolyGaussianState) -> Result<()> {
        let tol = WIDTH_MATCH_TOL * self.c.0.norm().max(1.0);
        if s.constants != self.constants || (s.width.0 - self.c.0).norm() > tol {
            return Err(Error::WidthMismatch {
                operator: format!("{}", self.c.0),
                state: format!("{}", s.width.0),
            });
        }
        Ok(())
    }

    /// `pref·(p/m − k x)ψ`
    fn apply(&self, s: &PolyGaussianState, pref: C64, k: C64) -> Result<PolyGaussianState> {
        self.check(s)?;
        let p = s.apply_momentum();
        let x = s.apply_position();
        let coeffs = poly::combine(pref / self.constants.mass(), &p.coeffs, -pref * k, &x.coeffs);
        Ok(PolyGaussianState { coeffs: poly::trim(coeffs), ..s.clone() })
    }

    pub fn annihilate(&self, s: &PolyGaussianState) -> Result<PolyGaussianState> {
        self.apply(s, I * self.prefactor, self.c.0)
    }

    pub fn create(&self, s: &PolyGaussianState) -> Result<PolyGaussianState> {
        self.apply(s, -I * self.prefactor, self.c.0.conj())
    }

    /// `(ħ/m)(a⁺a + ½)ψ`
    pub fn invariant_operator(&self, s: &PolyGaussianState) -> Result<PolyGaussianState> {
        let n = self.create(&self.annihilate(s)?)?;
        let scale = self.constants.hbar() / self.constants.mass();
        Ok(n.add(&s.scale(C64::new(0.5, 0.0)))?.scale(C64::new(scale, 0.0)))
    }
}

pub fn apply_annihilation(s: &PolyGaussianState, c: RiccatiVar) -> Result<PolyGaussianState> {
    LadderOperators::new(s.constants, c)?.annihilate(s)
}

pub fn apply_creation(s: &PolyGaussianState, c: RiccatiVar) -> Result<PolyGaussianState> {
    LadderOperators::new(s.constants, c)?.create(s)
}

fn gaussian_log_norm(constants: PhysicalConstants, alpha: f64, phase: f64) -> C64 {
    let modulus = 0.25 * (constants.mass() / (std::f64::consts::PI * constants.hbar() * alpha * alpha)).ln();
    C64::new(modulus, -0.5 * phase)
}

/// Normalized ground state `φ₀` centred at the origin; `phase` is the
/// accumulated `φ = ∫dt/α²`.
pub fn vacuum_state(constants: PhysicalConstants, c: RiccatiVar, phase: f64) -> Result<PolyGaussianState> {
    let alpha = c.alpha()?;
    PolyGaussianState::new(
        constants,
        vec![C64::new(1.0, 0.0)],
        0.0,
        0.0,
        c,
        gaussian_log_norm(constants, alpha, phase),
    )
}

/// Centre `(η, p)` of the coherent state with eigenvalue `z`.
fn coherent_center(constants: PhysicalConstants, z: Eigenvalue, c: RiccatiVar) -> Result<(f64, f64)> {
    let alpha = c.alpha()?;
    let (m, hbar) = (constants.mass(), constants.hbar());
    let k = (2.0 * hbar / m).sqrt();
    let eta = z.re() * alpha * k;
    let v = z.im() * k / alpha + c.re() * eta;
    Ok((eta, m * v))
}

/// The normalized Gaussian with eigenvalue `z`: centre and momentum follow
/// from `z`, the constant phase is `pη/(2ħ) − φ/2`.
pub fn coherent_state(constants: PhysicalConstants, z: Eigenvalue, c: RiccatiVar, phase: f64) -> Result<PolyGaussianState> {
    let alpha = c.alpha()?;
    let (eta, p) = coherent_center(constants, z, c)?;
    let log_norm = gaussian_log_norm(constants, alpha, phase) + I * (p * eta / (2.0 * constants.hbar()));
    PolyGaussianState::new(constants, vec![C64::new(1.0, 0.0)], eta, p, c, log_norm)
}

/// Samples of [`coherent_state`] on `grid`, which must be ascending and hold
/// all but [`GRID_MASS_LIMIT`] of the probability.
pub fn coherent_closed_form(
    constants: PhysicalConstants,
    z: Eigenvalue,
    c: RiccatiVar,
    phase: f64,
    grid: &[f64],
) -> Result<Vec<C64>> {
    if grid.len() < 2 || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("grid must hold at least two ascending points".into()));
    }
    let state = coherent_state(constants, z, c, phase)?;
    let sigma = (0.5 * constants.hbar() / (constants.mass() * c.im())).sqrt();
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    let eta = state.x_center;
    let s2 = std::f64::consts::SQRT_2 * sigma;
    let outside = 0.5 * libm::erfc((eta - lo) / s2) + 0.5 * libm::erfc((hi - eta) / s2);
    if outside > GRID_MASS_LIMIT {
        return Err(Error::GridCoverage { outside_mass: outside });
    }
    Ok(grid.iter().map(|&x| state.evaluate(x)).collect())
}

/// Truncated displacement series with its tail bound.
#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementSeries {
    pub state: PolyGaussianState,
    /// `|z|^{n+1}/√((n+1)!)`
    pub tail_bound: f64,
}

/// `e^{−|z|²/2} Σ_{n ≤ n_max} zⁿ (a⁺)ⁿ/n! φ₀`.
pub fn displacement_series(
    constants: PhysicalConstants,
    z: Eigenvalue,
    c: RiccatiVar,
    phase: f64,
    n_max: usize,
) -> Result<DisplacementSeries> {
    let ops = LadderOperators::new(constants, c)?;
    let vacuum = vacuum_state(constants, c, phase)?;
    let mut term = vacuum.clone();
    let mut sum = vacuum.clone();
    for n in 1..=n_max {
        term = ops.create(&term)?.scale(z.z / n as f64);
        sum = sum.add(&term)?;
    }
    let state = PolyGaussianState { log_norm: sum.log_norm - 0.5 * z.norm_sqr(), ..sum };
    let n1 = (n_max + 1) as f64;
    let r = z.z.norm();
    let tail_bound = if r == 0.0 { 0.0 } else { (n1 * r.ln() - 0.5 * libm::lgamma(n1 + 1.0)).exp() };
    Ok(DisplacementSeries { state, tail_bound })
}

/// Phase-adjusted eigenvalue `ž(t) = z(t) e^{iφ(t)}` along a run.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstancyReport {
    pub z_tilde: Vec<C64>,
    /// `max_t |ž(t) − ž(0)|`
    pub max_drift: f64,
}

/// `ž` is a constant of motion for conservative dynamics with any `ω(t)`.
pub fn phase_adjusted_constancy(run: &TimeSeries) -> Result<ConstancyReport> {
    let model = run.model();
    if model.family() != Family::Conservative {
        return Err(Error::UnsupportedFamily { operation: "phase_adjusted_constancy", family: model.family() });
    }
    let z_tilde = run
        .states()
        .iter()
        .map(|s| {
            let z = z_eigenvalue(model, s.classical, s.riccati, s.t, ZLevel::Physical)?;
            Ok(z.z * C64::from_polar(1.0, s.phase))
        })
        .collect::<Result<Vec<_>>>()?;
    let first = z_tilde.first().copied().unwrap_or_default();
    let max_drift = z_tilde.iter().map(|z| (z - first).norm()).fold(0.0, f64::max);
    Ok(ConstancyReport { z_tilde, max_drift })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{integrate_with, IntegratorOptions, SystemState};
    use crate::models::FrequencyProfile;
    use crate::observables::invariant_from_riccati;

    fn nat() -> PhysicalConstants {
        PhysicalConstants::natural()
    }

    fn ci() -> RiccatiVar {
        RiccatiVar::new(0.0, 1.0)
    }

    #[test]
    fn vacuum_is_normalized_and_annihilated() {
        let c = RiccatiVar::new(0.3, 0.7);
        let v = vacuum_state(nat(), c, 0.4).unwrap();
        assert!((v.norm_sqr().unwrap() - 1.0).abs() < 1e-14);
        let a = apply_annihilation(&v, c).unwrap();
        assert!(a.coefficient_norm() < 1e-12);
        let up = apply_creation(&v, c).unwrap();
        assert_eq!(up.degree(), 1);
        assert!((up.norm_sqr().unwrap() - 1.0).abs() < 1e-13);
        assert!(inner_product(&v, &up).unwrap().norm() < 1e-14);
    }

    #[test]
    fn vacuum_phase_follows_ground_energy() {
        let t = 1.3;
        let v = vacuum_state(nat(), ci(), t).unwrap();
        let ratio = v.evaluate(0.2) / vacuum_state(nat(), ci(), 0.0).unwrap().evaluate(0.2);
        assert!((ratio - C64::from_polar(1.0, -0.5 * t)).norm() < 1e-14);
    }

    #[test]
    fn creation_raises_degree() {
        let c = RiccatiVar::new(-0.2, 1.4);
        let mut s = vacuum_state(nat(), c, 0.0).unwrap();
        for n in 1..=6 {
            s = apply_creation(&s, c).unwrap();
            assert_eq!(s.degree(), n);
        }
    }

    #[test]
    fn commutator_on_random_polynomial() {
        let consts = PhysicalConstants::new(1.7, 0.6).unwrap();
        let c = RiccatiVar::new(0.4, 2.3);
        let coeffs = (0..6).map(|k| C64::new(0.3 * k as f64 - 0.5, 1.0 / (k as f64 + 1.0))).collect();
        let s = PolyGaussianState::new(consts, coeffs, 0.7, -1.1, c, C64::new(0.1, 0.3)).unwrap();
        let ops = LadderOperators::new(consts, c).unwrap();
        let aad = ops.annihilate(&ops.create(&s).unwrap()).unwrap();
        let ada = ops.create(&ops.annihilate(&s).unwrap()).unwrap();
        let comm = aad.sub(&ada).unwrap();
        assert!(comm.coefficient_distance(&s).unwrap() < 1e-12);
    }

    #[test]
    fn width_mismatch_is_rejected() {
        let v = vacuum_state(nat(), ci(), 0.0).unwrap();
        let err = apply_annihilation(&v, RiccatiVar::new(0.0, 1.001)).unwrap_err();
        assert!(matches!(err, Error::WidthMismatch { .. }));
    }

    #[test]
    fn coherent_state_is_eigenstate() {
        let consts = PhysicalConstants::new(2.0, 0.5).unwrap();
        let c = RiccatiVar::new(0.8, 1.9);
        let z = Eigenvalue::new(C64::new(0.6, -1.3));
        let s = coherent_state(consts, z, c, 0.2).unwrap();
        let a = apply_annihilation(&s, c).unwrap();
        assert!(a.coefficient_distance(&s.scale(z.z)).unwrap() < 1e-12);
        assert!((s.norm_sqr().unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn z_of_unit_displacement() {
        let m = Model::conservative(nat(), FrequencyProfile::constant(1.0).unwrap()).unwrap();
        let z = z_eigenvalue(&m, ClassicalState::new(1.0, 0.0), ci(), 0.0, ZLevel::Physical).unwrap();
        assert!((z.z - C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        let z0 = z_eigenvalue(&m, ClassicalState::default(), ci(), 0.0, ZLevel::Physical).unwrap();
        assert_eq!(z0.z, C64::new(0.0, 0.0));
    }

    #[test]
    fn z_modulus_matches_invariant_for_every_family() {
        let consts = PhysicalConstants::new(1.3, 0.8).unwrap();
        let omega = FrequencyProfile::constant(1.2).unwrap();
        let cls = ClassicalState::new(0.4, -0.9);
        let c = RiccatiVar::new(0.35, 1.6);
        let t = 0.9;
        for fam in Family::ALL {
            let g = if fam == Family::Conservative { 0.0 } else { 0.4 };
            let m = Model::new(fam, consts, g, omega.clone()).unwrap();
            let z = z_eigenvalue(&m, cls, c, t, ZLevel::Invariant).unwrap();
            let inv = invariant_from_riccati(&m, t, cls, c).unwrap().value;
            let target = consts.mass() / consts.hbar() * inv;
            assert!((z.norm_sqr() - target).abs() < 1e-12 * target, "{fam}");
        }
    }

    #[test]
    fn series_matches_closed_form() {
        let c = RiccatiVar::new(0.5, 1.2);
        let z = Eigenvalue::new(C64::new(0.7, 0.4));
        let series = displacement_series(nat(), z, c, 0.3, 40).unwrap();
        let closed = coherent_state(nat(), z, c, 0.3).unwrap();
        for k in -20..=20 {
            let x = 0.3 * k as f64;
            assert!((series.state.evaluate(x) - closed.evaluate(x)).norm() < 1e-12);
        }
        assert!(series.tail_bound < 1e-20);
        let zero = displacement_series(nat(), Eigenvalue::new(C64::new(0.0, 0.0)), c, 0.3, 0).unwrap();
        assert_eq!(zero.state, vacuum_state(nat(), c, 0.3).unwrap());
    }

    #[test]
    fn narrow_grid_is_rejected() {
        let z = Eigenvalue::new(C64::new(0.0, 0.0));
        let grid: Vec<f64> = (0..=40).map(|k| -2.0 + 0.1 * k as f64).collect();
        let err = coherent_closed_form(nat(), z, ci(), 0.0, &grid).unwrap_err();
        assert!(matches!(err, Error::GridCoverage { .. }));
        let wide: Vec<f64> = (0..=200).map(|k| -10.0 + 0.1 * k as f64).collect();
        assert!(coherent_closed_form(nat(), z, ci(), 0.0, &wide).is_ok());
    }

    #[test]
    fn divergent_overlap_is_reported() {
        let a = vacuum_state(nat(), RiccatiVar::new(0.0, 1.0), 0.0).unwrap();
        let b = PolyGaussianState { width: RiccatiVar(C64::new(0.0, -2.0)), ..a.clone() };
        assert!(matches!(inner_product(&a, &b), Err(Error::DivergentIntegral { .. })));
    }

    #[test]
    fn constancy_for_a_swinging_packet() {
        let m = Model::conservative(nat(), FrequencyProfile::constant(1.0).unwrap()).unwrap();
        let init = SystemState::new(0.0, ClassicalState::new(1.0, 0.0), ci(), 0.0);
        let run = integrate_with(&m, init, 10.0, 1e-3, &IntegratorOptions::default()).unwrap();
        assert!(phase_adjusted_constancy(&run).unwrap().max_drift < 1e-8);

        let rest = SystemState::new(0.0, ClassicalState::default(), ci(), 0.0);
        let run = integrate_with(&m, rest, 2.0, 1e-2, &IntegratorOptions::default()).unwrap();
        assert_eq!(phase_adjusted_constancy(&run).unwrap().max_drift, 0.0);
    }
}
