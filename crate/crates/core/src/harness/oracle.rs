//! Deterministic reference values: arc length by Gauss–Legendre quadrature.

use std::f64::consts::PI;

use serde::Serialize;

use super::HarnessError;
use crate::sets::ParametricCurve;

pub const MIN_QUADRATURE_ORDER: usize = 16;
/// Relative change allowed between order `n` and `2n`.
pub const QUADRATURE_TOL: f64 = 1e-10;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Newton from the Chebyshev-like initial guess
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            let step = p / d;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        let w = 2.0 / ((1.0 - x * x) * d * d);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `∫_a^b f` with the `n`-point rule.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    half * nodes
        .iter()
        .zip(&weights)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadratureResult {
    /// Value at the doubled order.
    pub value: f64,
    pub order: usize,
    /// `|I(2n) - I(n)| / |I(2n)|`.
    pub relative_change: f64,
    /// Raised when `relative_change` exceeds the tolerance.
    pub accuracy_flag: bool,
}

/// `∫_a^b f` at orders `n` and `2n`, flagged when they disagree.
pub fn integrate_checked(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    order: usize,
) -> Result<QuadratureResult, HarnessError> {
    if order < MIN_QUADRATURE_ORDER {
        return Err(HarnessError::Input(format!(
            "quadrature order must be at least {MIN_QUADRATURE_ORDER}, got {order}"
        )));
    }
    let coarse = integrate(&f, a, b, order);
    let fine = integrate(&f, a, b, 2 * order);
    let relative_change = (fine - coarse).abs() / fine.abs().max(f64::MIN_POSITIVE);
    Ok(QuadratureResult {
        value: fine,
        order,
        relative_change,
        accuracy_flag: !(relative_change < QUADRATURE_TOL),
    })
}

/// Arc length `∫_0^1 |γ'(t)| dt`.
pub fn exact_curve_length_oracle(
    c: &ParametricCurve,
    quadrature_order: usize,
) -> Result<QuadratureResult, HarnessError> {
    let velocity = c.velocity();
    let speed = |t: f64| velocity.iter().map(|v| v.eval(&t).powi(2)).sum::<f64>().sqrt();
    integrate_checked(speed, 0.0, 1.0, quadrature_order)
}

/// Length of `{x, y > 0 : x³ + y³ = 1}` from its polar form
/// `ρ(θ) = (cos³θ + sin³θ)^{-1/3}` on `(0, π/2)`.
pub fn fermat_cubic_arc_length(quadrature_order: usize) -> Result<QuadratureResult, HarnessError> {
    let speed = |th: f64| {
        let (s, c) = th.sin_cos();
        let g = c.powi(3) + s.powi(3);
        let rho = g.powf(-1.0 / 3.0);
        let drho = (c * c * s - s * s * c) * g.powf(-4.0 / 3.0);
        (rho * rho + drho * drho).sqrt()
    };
    integrate_checked(speed, 0.0, PI / 2.0, quadrature_order)
}
