//! Dense complex polynomials in ascending-power order.

use num_complex::Complex64 as C64;

const ZERO: C64 = C64::new(0.0, 0.0);

pub(crate) fn trim(mut p: Vec<C64>) -> Vec<C64> {
    while p.len() > 1 && p[p.len() - 1] == ZERO {
        p.pop();
    }
    if p.is_empty() {
        p.push(ZERO);
    }
    p
}

pub(crate) fn derivative(p: &[C64]) -> Vec<C64> {
    if p.len() <= 1 {
        return vec![ZERO];
    }
    p.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect()
}

/// `x · p(x)`
pub(crate) fn mul_x(p: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(p.len() + 1);
    out.push(ZERO);
    out.extend_from_slice(p);
    out
}

pub(crate) fn scale(p: &[C64], s: C64) -> Vec<C64> {
    p.iter().map(|c| c * s).collect()
}

/// `a·p + b·q`
pub(crate) fn combine(a: C64, p: &[C64], b: C64, q: &[C64]) -> Vec<C64> {
    let n = p.len().max(q.len());
    (0..n)
        .map(|k| a * p.get(k).copied().unwrap_or(ZERO) + b * q.get(k).copied().unwrap_or(ZERO))
        .collect()
}

pub(crate) fn mul(p: &[C64], q: &[C64]) -> Vec<C64> {
    let mut out = vec![ZERO; p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// Coefficients of `p(u + s)` as a polynomial in `u`.
pub(crate) fn shift(p: &[C64], s: C64) -> Vec<C64> {
    let mut out = p.to_vec();
    if s == ZERO {
        return out;
    }
    let n = out.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let next = out[j + 1];
            out[j] += s * next;
        }
    }
    out
}

pub(crate) fn eval(p: &[C64], x: C64) -> C64 {
    p.iter().rev().fold(ZERO, |acc, c| acc * x + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn shift_matches_evaluation() {
        let p = vec![c(1.0, 0.5), c(-2.0, 0.0), c(0.0, 3.0), c(0.7, -0.1)];
        let s = c(0.3, -1.2);
        let q = shift(&p, s);
        for u in [c(0.0, 0.0), c(1.5, 0.2), c(-0.4, 2.0)] {
            assert!((eval(&q, u) - eval(&p, u + s)).norm() < 1e-12);
        }
    }

    #[test]
    fn product_and_derivative() {
        let p = vec![c(1.0, 0.0), c(1.0, 0.0)];
        let q = vec![c(-1.0, 0.0), c(1.0, 0.0)];
        assert_eq!(mul(&p, &q), vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(derivative(&[c(5.0, 0.0)]), vec![c(0.0, 0.0)]);
        assert_eq!(derivative(&[c(5.0, 0.0), c(2.0, 1.0), c(1.0, 0.0)]), vec![c(2.0, 1.0), c(2.0, 0.0)]);
        assert_eq!(trim(vec![c(1.0, 0.0), c(0.0, 0.0)]), vec![c(1.0, 0.0)]);
        assert_eq!(trim(vec![]), vec![c(0.0, 0.0)]);
    }
}
