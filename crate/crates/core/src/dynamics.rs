//! Right-hand sides of the trajectory, Riccati and Ermakov equations for each
//! family, conversions between the Riccati and Ermakov pictures, and the
//! fixed-step RK4 integrators.
//!
//! Conventions: `c = (2ħ/m) y` is the complex Riccati variable, with
//! `imag(c) = 1/α²`. For the expanding family the classical state and `c`
//! are canonical (`Q`, `Q̇`, `c_exp`); for Caldirola–Kanai `c` is the
//! canonical `ĉ` while the classical state stays physical.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::models::{Family, Model};

/// Default guard on `imag(c)` during integration.
pub const DEFAULT_WIDTH_FLOOR: f64 = 1e-12;
/// Default per-step bound on the step-doubling error estimate.
pub const DEFAULT_ACCURACY_TOL: f64 = 1e-6;

/// Complex Riccati variable `c = (2ħ/m) y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiccatiVar(pub C64);

impl RiccatiVar {
    pub fn new(re: f64, im: f64) -> Self {
        Self(C64::new(re, im))
    }

    pub fn value(&self) -> C64 {
        self.0
    }

    pub fn re(&self) -> f64 {
        self.0.re
    }

    pub fn im(&self) -> f64 {
        self.0.im
    }

    /// Fails unless `imag(c) > 0`.
    pub fn ensure_physical(&self) -> Result<()> {
        if self.0.im > 0.0 && self.0.im.is_finite() && self.0.re.is_finite() {
            Ok(())
        } else {
            Err(Error::UnphysicalWidth { im_c: self.0.im })
        }
    }

    /// `α = imag(c)^{-1/2}`.
    pub fn alpha(&self) -> Result<f64> {
        self.ensure_physical()?;
        Ok(self.0.im.sqrt().recip())
    }
}

impl From<C64> for RiccatiVar {
    fn from(c: C64) -> Self {
        Self(c)
    }
}

/// Ermakov width variable `α > 0` and its rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErmakovState {
    pub alpha: f64,
    pub alpha_dot: f64,
}

impl ErmakovState {
    pub fn new(alpha: f64, alpha_dot: f64) -> Result<Self> {
        let e = Self { alpha, alpha_dot };
        e.ensure_positive()?;
        Ok(e)
    }

    fn ensure_positive(&self) -> Result<()> {
        if self.alpha > 0.0 && self.alpha.is_finite() {
            Ok(())
        } else {
            Err(Error::DegenerateWidth { alpha: self.alpha })
        }
    }
}

/// Position and velocity of the packet maximum.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassicalState {
    pub eta: f64,
    pub eta_dot: f64,
}

impl ClassicalState {
    pub fn new(eta: f64, eta_dot: f64) -> Self {
        Self { eta, eta_dot }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemState {
    pub t: f64,
    pub classical: ClassicalState,
    pub riccati: RiccatiVar,
    /// Accumulated `φ = ∫ dt'/α²`.
    pub phase: f64,
}

impl SystemState {
    pub fn new(t: f64, classical: ClassicalState, riccati: RiccatiVar, phase: f64) -> Self {
        Self { t, classical, riccati, phase }
    }

    pub fn alpha(&self) -> Result<f64> {
        self.riccati.alpha()
    }
}

/// Sampled output of [`integrate`].
#[derive(Debug, Clone)]
pub struct TimeSeries {
    model: Model,
    states: Vec<SystemState>,
    error_bounds: Vec<f64>,
}

impl TimeSeries {
    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn states(&self) -> &[SystemState] {
        &self.states
    }

    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.t).collect()
    }

    /// Accumulated step-doubling error estimate up to each stored state.
    pub fn error_bounds(&self) -> &[f64] {
        &self.error_bounds
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn first(&self) -> &SystemState {
        &self.states[0]
    }

    pub fn last(&self) -> &SystemState {
        &self.states[self.states.len() - 1]
    }
}

// ----------------------------------------------------------------------------
// right-hand sides

fn riccati_rate(model: &Model, t: f64, omega: f64, c: C64) -> C64 {
    let w2 = omega * omega;
    let g = model.gamma();
    match model.family() {
        Family::Conservative => -c * c - w2,
        Family::LogNlse => -g * c - c * c - w2,
        Family::Expanding => -c * c - model.effective_omega_sq(omega),
        Family::CaldirolaKanai => -(-g * t).exp() * c * c - w2 * (g * t).exp(),
    }
}

fn classical_rate(model: &Model, omega: f64, s: ClassicalState) -> (f64, f64) {
    let w2 = omega * omega;
    let g = model.gamma();
    let acc = match model.family() {
        Family::Conservative => -w2 * s.eta,
        Family::CaldirolaKanai | Family::LogNlse => -g * s.eta_dot - w2 * s.eta,
        Family::Expanding => -model.effective_omega_sq(omega) * s.eta,
    };
    (s.eta_dot, acc)
}

fn ermakov_rate(model: &Model, t: f64, omega: f64, e: ErmakovState) -> (f64, f64) {
    let (a, ad) = (e.alpha, e.alpha_dot);
    let w2 = omega * omega;
    let g = model.gamma();
    let inv_a3 = 1.0 / (a * a * a);
    let acc = match model.family() {
        Family::Conservative => -w2 * a + inv_a3,
        Family::CaldirolaKanai => -g * ad - w2 * a + (-2.0 * g * t).exp() * inv_a3,
        Family::Expanding | Family::LogNlse => -(w2 - 0.25 * g * g) * a + inv_a3,
    };
    (ad, acc)
}

/// Rate `ċ` of the family's complex Riccati equation.
pub fn riccati_rhs(model: &Model, t: f64, c: RiccatiVar) -> Result<C64> {
    let omega = model.omega_at(t)?;
    Ok(riccati_rate(model, t, omega, c.0))
}

/// `(η̇, η̈)` for the packet maximum. For the expanding family the state is
/// the canonical pair `(Q, Q̇)`.
pub fn classical_rhs(model: &Model, t: f64, s: ClassicalState) -> Result<(f64, f64)> {
    let omega = model.omega_at(t)?;
    Ok(classical_rate(model, omega, s))
}

/// `(α̇, α̈)` from the family's Ermakov equation.
pub fn ermakov_rhs(model: &Model, t: f64, e: ErmakovState) -> Result<(f64, f64)> {
    e.ensure_positive()?;
    let omega = model.omega_at(t)?;
    Ok(ermakov_rate(model, t, omega, e))
}

/// Builds `c` from `(α, α̇)`: `imag(c) = 1/α²` and
/// `real(c) = α̇/α` (conservative, expanding), `α̇/α − γ/2` (log-NLSE) or
/// `e^{γt} α̇/α` (Caldirola–Kanai canonical variable).
pub fn riccati_from_ermakov(model: &Model, t: f64, e: ErmakovState) -> Result<RiccatiVar> {
    e.ensure_positive()?;
    let log_rate = e.alpha_dot / e.alpha;
    let g = model.gamma();
    let re = match model.family() {
        Family::Conservative | Family::Expanding => log_rate,
        Family::LogNlse => log_rate - 0.5 * g,
        Family::CaldirolaKanai => (g * t).exp() * log_rate,
    };
    Ok(RiccatiVar::new(re, 1.0 / (e.alpha * e.alpha)))
}

/// Inverse of [`riccati_from_ermakov`].
pub fn ermakov_from_riccati(model: &Model, t: f64, c: RiccatiVar) -> Result<ErmakovState> {
    let alpha = c.alpha()?;
    let g = model.gamma();
    let log_rate = match model.family() {
        Family::Conservative | Family::Expanding => c.re(),
        Family::LogNlse => c.re() + 0.5 * g,
        Family::CaldirolaKanai => (-g * t).exp() * c.re(),
    };
    Ok(ErmakovState { alpha, alpha_dot: alpha * log_rate })
}

// ----------------------------------------------------------------------------
// fixed-step RK4 with step doubling

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    /// Integration fails once `imag(c)` drops to this value.
    pub width_floor: f64,
    /// Per-step bound on the mixed absolute/relative step-doubling estimate.
    pub accuracy_tol: f64,
    /// Store every `stride`-th step (the final state is always stored).
    pub stride: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            width_floor: DEFAULT_WIDTH_FLOOR,
            accuracy_tol: DEFAULT_ACCURACY_TOL,
            stride: 1,
        }
    }
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, k: &[f64; N]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        out[i] += h * k[i];
    }
    out
}

fn rk4_step<const N: usize, F>(f: &F, t: f64, y: &[f64; N], h: f64) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let k1 = f(t, y)?;
    let k2 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &k1))?;
    let k3 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &k2))?;
    let k4 = f(t + h, &axpy(y, h, &k3))?;
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Ok(out)
}

/// One RK4 step of size `h` plus the step-doubling estimate of its local
/// error, `16/15 · max_i |y_h − y_{h/2,h/2}|`, and the same quantity scaled by
/// `1 + |y_i|`.
fn doubled_step<const N: usize, F>(f: &F, t: f64, y: &[f64; N], h: f64) -> Result<([f64; N], f64, f64)>
where
    F: Fn(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let full = rk4_step(f, t, y, h)?;
    let half = rk4_step(f, t, y, 0.5 * h)?;
    let half = rk4_step(f, t + 0.5 * h, &half, 0.5 * h)?;
    let mut abs_err = 0.0_f64;
    let mut mixed_err = 0.0_f64;
    for i in 0..N {
        let d = (full[i] - half[i]).abs() * 16.0 / 15.0;
        abs_err = abs_err.max(d);
        mixed_err = mixed_err.max(d / (1.0 + full[i].abs()));
    }
    Ok((full, abs_err, mixed_err))
}

/// Step schedule from `t0` to `t_end`: uniform steps of `dt`, the last one
/// truncated to land on `t_end`.
fn step_times(t0: f64, t_end: f64, dt: f64) -> Vec<f64> {
    let span = t_end - t0;
    let n_full = (span / dt * (1.0 + 1e-12)).floor() as usize;
    let mut ts: Vec<f64> = (0..=n_full).map(|k| t0 + k as f64 * dt).collect();
    let last = *ts.last().unwrap();
    if t_end - last > 1e-9 * dt {
        ts.push(t_end);
    } else {
        *ts.last_mut().unwrap() = t_end;
    }
    ts
}

fn check_run_controls(model: &Model, t0: f64, t_end: f64, dt: f64) -> Result<()> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    if !(t_end.is_finite() && t_end > t0) {
        return Err(Error::InvalidArgument(format!(
            "t_end = {t_end} must exceed the initial time {t0}"
        )));
    }
    model.omega().check_domain(t0, t_end)?;
    for &b in model.omega().breakpoints() {
        if b > t0 && b < t_end {
            let k = (b - t0) / dt;
            if (k - k.round()).abs() > 1e-6 {
                return Err(Error::InvalidArgument(format!(
                    "frequency breakpoint {b} is not aligned to a step boundary of dt = {dt}"
                )));
            }
        }
    }
    Ok(())
}

/// Checks `dt`, `t_end`, the profile domain and breakpoint alignment exactly
/// as the integrators do before stepping.
pub fn validate_run(model: &Model, t0: f64, t_end: f64, dt: f64) -> Result<()> {
    check_run_controls(model, t0, t_end, dt)
}

fn run_fixed_step<const N: usize, F, G>(
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    dt: f64,
    opts: &IntegratorOptions,
    rhs: F,
    mut accept: G,
) -> Result<()>
where
    F: Fn(f64, f64, &[f64; N]) -> Result<[f64; N]>,
    G: FnMut(f64, &[f64; N], f64, bool) -> Result<()>,
{
    let ts = step_times(t0, t_end, dt);
    let stride = opts.stride.max(1);
    let mut y = y0;
    let mut bound = 0.0;
    accept(t0, &y, bound, true)?;
    for (k, w) in ts.windows(2).enumerate() {
        let (t, t_next) = (w[0], w[1]);
        let h = t_next - t;
        let mid = t + 0.5 * h;
        let f = |s: f64, y: &[f64; N]| rhs(s, mid, y);
        let (next, abs_err, mixed_err) = doubled_step(&f, t, &y, h)?;
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::AccuracyExceeded { t: t_next, estimate: f64::INFINITY, tolerance: opts.accuracy_tol });
        }
        if mixed_err > opts.accuracy_tol {
            return Err(Error::AccuracyExceeded { t: t_next, estimate: mixed_err, tolerance: opts.accuracy_tol });
        }
        bound += abs_err;
        y = next;
        let store = (k + 1) % stride == 0 || k + 2 == ts.len();
        accept(t_next, &y, bound, store)?;
    }
    Ok(())
}

/// Integrates the joint `(η, η̇, c, φ)` system with default options.
pub fn integrate(model: &Model, init: SystemState, t_end: f64, dt: f64) -> Result<TimeSeries> {
    integrate_with(model, init, t_end, dt, &IntegratorOptions::default())
}

/// Integrates the joint `(η, η̇, c, φ)` system with classical RK4 at fixed
/// step `dt`, estimating each step's error by step doubling. `φ̇ = imag(c)`.
pub fn integrate_with(
    model: &Model,
    init: SystemState,
    t_end: f64,
    dt: f64,
    opts: &IntegratorOptions,
) -> Result<TimeSeries> {
    check_run_controls(model, init.t, t_end, dt)?;
    if !(init.riccati.im() > opts.width_floor) {
        return Err(Error::UnphysicalWidth { im_c: init.riccati.im() });
    }
    let y0 = [
        init.classical.eta,
        init.classical.eta_dot,
        init.riccati.re(),
        init.riccati.im(),
        init.phase,
    ];
    let rhs = |t: f64, mid: f64, y: &[f64; 5]| -> Result<[f64; 5]> {
        let omega = model.omega().value_with_segment(t, mid)?;
        let (de, dd) = classical_rate(model, omega, ClassicalState::new(y[0], y[1]));
        let dc = riccati_rate(model, t, omega, C64::new(y[2], y[3]));
        Ok([de, dd, dc.re, dc.im, y[3]])
    };
    let mut states = Vec::new();
    let mut error_bounds = Vec::new();
    run_fixed_step(init.t, y0, t_end, dt, opts, rhs, |t, y, bound, store| {
        if !(y[3] > opts.width_floor) || !y[3].is_finite() {
            return Err(Error::WidthCollapse { t, im_c: y[3] });
        }
        if store {
            states.push(SystemState::new(
                t,
                ClassicalState::new(y[0], y[1]),
                RiccatiVar::new(y[2], y[3]),
                y[4],
            ));
            error_bounds.push(bound);
        }
        Ok(())
    })?;
    Ok(TimeSeries { model: model.clone(), states, error_bounds })
}

/// Joint trajectory/Ermakov integration, the real-variable counterpart of
/// [`integrate`].
#[derive(Debug, Clone)]
pub struct ErmakovSeries {
    pub times: Vec<f64>,
    pub classical: Vec<ClassicalState>,
    pub ermakov: Vec<ErmakovState>,
    /// Accumulated step-doubling error estimate.
    pub error_bounds: Vec<f64>,
}

pub fn integrate_ermakov(
    model: &Model,
    t0: f64,
    classical: ClassicalState,
    ermakov: ErmakovState,
    t_end: f64,
    dt: f64,
    opts: &IntegratorOptions,
) -> Result<ErmakovSeries> {
    check_run_controls(model, t0, t_end, dt)?;
    ermakov.ensure_positive()?;
    let y0 = [classical.eta, classical.eta_dot, ermakov.alpha, ermakov.alpha_dot];
    let rhs = |t: f64, mid: f64, y: &[f64; 4]| -> Result<[f64; 4]> {
        let omega = model.omega().value_with_segment(t, mid)?;
        let e = ErmakovState { alpha: y[2], alpha_dot: y[3] };
        e.ensure_positive()?;
        let (de, dd) = classical_rate(model, omega, ClassicalState::new(y[0], y[1]));
        let (da, dad) = ermakov_rate(model, t, omega, e);
        Ok([de, dd, da, dad])
    };
    let mut out = ErmakovSeries { times: vec![], classical: vec![], ermakov: vec![], error_bounds: vec![] };
    run_fixed_step(t0, y0, t_end, dt, opts, rhs, |t, y, bound, store| {
        let e = ErmakovState { alpha: y[2], alpha_dot: y[3] };
        e.ensure_positive()?;
        if store {
            out.times.push(t);
            out.classical.push(ClassicalState::new(y[0], y[1]));
            out.ermakov.push(e);
            out.error_bounds.push(bound);
        }
        Ok(())
    })?;
    Ok(out)
}

// ----------------------------------------------------------------------------
// linearization via λ̇/λ = c

/// Samples of the linearizing variable `λ = α e^{iφ}` with `λ̈ = −ω² λ`.
#[derive(Debug, Clone)]
pub struct LambdaSeries {
    pub times: Vec<f64>,
    pub lambda: Vec<C64>,
    pub lambda_dot: Vec<C64>,
}

impl LambdaSeries {
    /// `λ̇/λ`, which reproduces the Riccati variable.
    pub fn riccati(&self) -> Vec<RiccatiVar> {
        self.lambda
            .iter()
            .zip(&self.lambda_dot)
            .map(|(l, ld)| RiccatiVar(ld / l))
            .collect()
    }

    /// `|λ|`, equal to `α` when the Wronskian `imag(λ* λ̇)` is one.
    pub fn modulus(&self) -> Vec<f64> {
        self.lambda.iter().map(|l| l.norm()).collect()
    }

    /// `arg λ`, unwrapped to a continuous function of time.
    pub fn unwrapped_phase(&self) -> Vec<f64> {
        use std::f64::consts::TAU;
        let mut out = Vec::with_capacity(self.lambda.len());
        let mut offset = 0.0;
        let mut prev: Option<f64> = None;
        for l in &self.lambda {
            let a = l.arg();
            if let Some(p) = prev {
                let d = a - p;
                if d > std::f64::consts::PI {
                    offset -= TAU;
                } else if d < -std::f64::consts::PI {
                    offset += TAU;
                }
            }
            prev = Some(a);
            out.push(a + offset);
        }
        out
    }
}

/// `λ₀ = α₀ e^{iφ₀}`, `λ̇₀ = c₀ λ₀`: initial data consistent with a Riccati run
/// (unit Wronskian, so `|λ| = α` throughout).
pub fn lambda_initial(c0: RiccatiVar, phase0: f64) -> Result<(C64, C64)> {
    let alpha = c0.alpha()?;
    let lambda = C64::from_polar(alpha, phase0);
    Ok((lambda, c0.0 * lambda))
}

/// Integrates `λ̈ = −ω²(t) λ` (conservative family only).
pub fn lambda_evolve(
    model: &Model,
    t0: f64,
    lambda0: C64,
    lambda_dot0: C64,
    t_end: f64,
    dt: f64,
) -> Result<LambdaSeries> {
    if model.family() != Family::Conservative {
        return Err(Error::UnsupportedFamily { operation: "lambda_evolve", family: model.family() });
    }
    if lambda0 == C64::new(0.0, 0.0) {
        return Err(Error::LinearizationSingularity { t: t0 });
    }
    check_run_controls(model, t0, t_end, dt)?;
    let scale = lambda0.norm();
    let y0 = [lambda0.re, lambda0.im, lambda_dot0.re, lambda_dot0.im];
    let rhs = |t: f64, mid: f64, y: &[f64; 4]| -> Result<[f64; 4]> {
        let w = model.omega().value_with_segment(t, mid)?;
        let w2 = w * w;
        Ok([y[2], y[3], -w2 * y[0], -w2 * y[1]])
    };
    let opts = IntegratorOptions { accuracy_tol: f64::INFINITY, ..Default::default() };
    let mut out = LambdaSeries { times: vec![], lambda: vec![], lambda_dot: vec![] };
    let mut prev = lambda0;
    run_fixed_step(t0, y0, t_end, dt, &opts, rhs, |t, y, _, _| {
        let l = C64::new(y[0], y[1]);
        // distance from the origin to the chord between successive samples
        let d = l - prev;
        let s = if d.norm_sqr() > 0.0 { (-(prev.conj() * d).re / d.norm_sqr()).clamp(0.0, 1.0) } else { 0.0 };
        prev = l;
        if (prev - d + s * d).norm() <= 1e-12 * scale {
            return Err(Error::LinearizationSingularity { t });
        }
        out.times.push(t);
        out.lambda.push(l);
        out.lambda_dot.push(C64::new(y[2], y[3]));
        Ok(())
    })?;
    Ok(out)
}
