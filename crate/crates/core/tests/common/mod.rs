//! Independent reference values shared by the integration tests. Nothing
//! here calls into the library's own formulas.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Two equal deltas at distance a, β = k/(mα): R as a rational function of
/// cos and sin of ka.
pub fn two_delta_reflectivity(beta: f64, ka: f64) -> f64 {
    let (s, c) = ka.sin_cos();
    let (s2, c2) = (2.0 * ka).sin_cos();
    let b2 = beta * beta;
    let num = 4.0 * (beta * c + s).powi(2);
    let den = 2.0 + 2.0 * b2 + b2 * b2 + 2.0 * (b2 - 1.0) * c2 + 4.0 * beta * s2;
    num / den
}

/// P(Θ ≥ θ) for the Rutherford shape cut at θ_min, via cot²(θ/2).
pub fn rutherford_survival(theta: f64, theta_min: f64) -> f64 {
    let cot2 = |x: f64| (0.5 * x).cos().powi(2) / (0.5 * x).sin().powi(2);
    cot2(theta) / cot2(theta_min)
}

/// Fraction of Rutherford mass in cos θ ∈ [c0, c1] given the cut at θ_min.
pub fn rutherford_bin_mass(c0: f64, c1: f64, theta_min: f64) -> f64 {
    rutherford_survival(c1.acos(), theta_min) - rutherford_survival(c0.acos(), theta_min)
}

/// sup |F_n − F| for sorted samples against a continuous CDF.
pub fn ks_one_sample(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// sup |F_a − F_b| for two sorted samples.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

pub fn ks_critical_one(n: usize) -> f64 {
    1.63 / (n as f64).sqrt()
}

pub fn ks_critical_two(n: usize, m: usize) -> f64 {
    1.628 * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

pub fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

/// E|Σ g_j e^{iq·r_j}|² for independent uniform positions in a cube of side s.
pub fn cube_averaged_kernel(charges: &[f64], side: f64, q: [f64; 3]) -> f64 {
    let sinc = |x: f64| if x == 0.0 { 1.0 } else { x.sin() / x };
    let g: f64 = charges.iter().sum();
    let g2: f64 = charges.iter().map(|c| c * c).sum();
    let phase: f64 = q.iter().map(|qa| sinc(0.5 * qa * side).powi(2)).product();
    g2 + (g * g - g2) * phase
}

/// π/(8 E² sin⁴(θ/2)) per unit (Z g)².
pub fn rutherford_shape(e: f64, theta: f64) -> f64 {
    PI / (8.0 * e * e * (0.5 * theta).sin().powi(4))
}
