//! Independent reference values shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

/// ∫₀^∞ f(t) dt by the exp-sinh rule t = exp(π/2·sinh τ), trapezoid in τ.
pub fn exp_sinh(f: impl Fn(f64) -> f64) -> f64 {
    let h = 1.0 / 128.0;
    let n = (5.5 / h) as i64;
    let mut sum = 0.0;
    for i in -n..=n {
        let tau = i as f64 * h;
        let t = (FRAC_PI_2 * tau.sinh()).exp();
        let w = t * FRAC_PI_2 * tau.cosh();
        let v = f(t) * w;
        if v.is_finite() {
            sum += v;
        }
    }
    sum * h
}

/// Γ_k(x) from its integral definition ∫₀^∞ t^{x−1} e^{−t^k/k} dt.
pub fn k_gamma_integral(x: f64, k: f64) -> f64 {
    exp_sinh(|t| (((x - 1.0) * t.ln()) - t.powf(k) / k).exp())
}

pub fn gamma_integral(x: f64) -> f64 {
    k_gamma_integral(x, 1.0)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Sampled classical convexity of a polynomial: p'' ≥ 0 on a fine grid.
/// Returns min p'' over the grid.
pub fn min_second_derivative(coeffs: &[f64], a: f64, b: f64) -> f64 {
    let second: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .skip(2)
        .map(|(i, c)| (i * (i - 1)) as f64 * c)
        .collect();
    (0..=2000)
        .map(|j| {
            let x = a + (b - a) * j as f64 / 2000.0;
            second.iter().rev().fold(0.0, |acc, c| acc * x + c)
        })
        .fold(f64::INFINITY, f64::min)
}
