//! Quadrature rules used to cross-check the exact Gaussian-moment results.

use std::num::NonZeroUsize;

use gauss_quad::GaussHermite;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::ladder::PolyGaussianState;

/// Composite trapezoid rule on a possibly non-uniform grid.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidArgument("trapezoid needs matching grids of at least two points".into()));
    }
    Ok(xs.windows(2).zip(ys.windows(2)).map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1])).sum())
}

/// Complex-valued [`trapezoid`].
pub fn trapezoid_complex(xs: &[f64], ys: &[C64]) -> Result<C64> {
    let re: Vec<f64> = ys.iter().map(|y| y.re).collect();
    let im: Vec<f64> = ys.iter().map(|y| y.im).collect();
    Ok(C64::new(trapezoid(xs, &re)?, trapezoid(xs, &im)?))
}

/// Evenly spaced grid `center ± half_width` with `n` points.
pub fn uniform_grid(center: f64, half_width: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    let h = 2.0 * half_width / (n - 1) as f64;
    (0..n).map(|k| center - half_width + h * k as f64).collect()
}

/// `∫ f(x) dx` by an `n`-point Gauss–Hermite rule adapted to a Gaussian of
/// centre `mu` and standard deviation `sigma`: exact when `f` is a
/// polynomial of degree below `2n` times `exp(−(x−mu)²/(2σ²))`.
pub fn gauss_hermite(n: usize, mu: f64, sigma: f64, mut f: impl FnMut(f64) -> f64) -> Result<f64> {
    let deg = NonZeroUsize::new(n).ok_or_else(|| Error::InvalidArgument("quadrature order must be positive".into()))?;
    if !(sigma > 0.0) {
        return Err(Error::InvalidArgument("quadrature scale must be positive".into()));
    }
    let s = std::f64::consts::SQRT_2 * sigma;
    let rule = GaussHermite::new(deg);
    Ok(s * rule.integrate(|u| f(mu + s * u) * (u * u).exp()))
}

/// `∫|ψ|² dx` by Gauss–Hermite quadrature around the state's envelope.
pub fn state_norm_quadrature(state: &PolyGaussianState, n: usize) -> Result<f64> {
    let consts = state.constants();
    let sigma = (0.5 * consts.hbar() / (consts.mass() * state.width().im())).sqrt();
    gauss_hermite(n, state.x_center(), sigma, |x| state.evaluate(x).norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_moments() {
        let pi = std::f64::consts::PI;
        let v = gauss_hermite(16, 0.5, 0.7, |x| (-(x - 0.5f64).powi(2) / 0.98).exp()).unwrap();
        assert!((v - (0.98 * pi).sqrt()).abs() < 1e-13);
        let m2 = gauss_hermite(16, 0.0, 1.0, |x| x * x * (-0.5 * x * x).exp()).unwrap();
        assert!((m2 - (2.0 * pi).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn trapezoid_is_exact_for_lines() {
        let xs = [0.0, 0.5, 2.0];
        assert!((trapezoid(&xs, &[1.0, 2.0, 5.0]).unwrap() - 6.0).abs() < 1e-15);
        assert!(trapezoid(&xs, &[1.0]).is_err());
    }
}
