//! Stationary scattering of a particle on arrays of 1D Dirac-delta potentials.
//!
//! The Hamiltonian is p²/2m + Σⱼ αⱼ δ(x − xⱼ) with ħ = 1. Two independent
//! solvers are provided: a product of per-site transfer matrices, and a
//! direct solve of the matching conditions (continuity plus the derivative
//! jump ψ′(xⱼ⁺) − ψ′(xⱼ⁻) = 2mαⱼ ψ(xⱼ)) as one linear system. The closed-form
//! two-delta and single-delta reflectivities are kept alongside as oracles.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One delta potential α δ(x − position).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaSite {
    pub position: f64,
    pub strength: f64,
}

/// Ordered delta sites plus the mass of the scattered particle.
///
/// Positions are non-decreasing; coincident sites are allowed and act as a
/// single site carrying the summed strength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaArray {
    sites: Vec<DeltaSite>,
    mass: f64,
}

impl DeltaArray {
    pub fn new(sites: Vec<DeltaSite>, mass: f64) -> Result<Self> {
        const OP: &str = "delta1d::DeltaArray::new";
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::domain(
                OP,
                format!("mass must be positive, got {mass}"),
            ));
        }
        for s in &sites {
            if !s.position.is_finite() || !s.strength.is_finite() {
                return Err(Error::domain(
                    OP,
                    "site positions and strengths must be finite",
                ));
            }
        }
        if let Some(w) = sites.windows(2).find(|w| w[1].position < w[0].position) {
            return Err(Error::domain(
                OP,
                format!(
                    "positions must be ordered, {} follows {}",
                    w[1].position, w[0].position
                ),
            ));
        }
        Ok(DeltaArray { sites, mass })
    }

    /// `n` sites of equal strength, `spacing` apart, starting at the origin.
    pub fn uniform(n: usize, spacing: f64, strength: f64, mass: f64) -> Result<Self> {
        if !(spacing >= 0.0) {
            return Err(Error::domain(
                "delta1d::DeltaArray::uniform",
                format!("spacing must be non-negative, got {spacing}"),
            ));
        }
        let sites = (0..n)
            .map(|j| DeltaSite {
                position: j as f64 * spacing,
                strength,
            })
            .collect();
        Self::new(sites, mass)
    }

    /// Two equal deltas at 0 and a, parametrised as in the closed form:
    /// unit mass and wave number, α = 1/β, a = ka.
    pub fn two_equal(beta: f64, ka: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::domain(
                "delta1d::DeltaArray::two_equal",
                format!("beta must be positive and finite, got {beta}"),
            ));
        }
        Self::uniform(2, ka, 1.0 / beta, 1.0)
    }

    pub fn sites(&self) -> &[DeltaSite] {
        &self.sites
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Rigidly shift every site by `dx`.
    pub fn translated(&self, dx: f64) -> Self {
        let sites = self
            .sites
            .iter()
            .map(|s| DeltaSite {
                position: s.position + dx,
                strength: s.strength,
            })
            .collect();
        DeltaArray {
            sites,
            mass: self.mass,
        }
    }

    /// Mirror image x → −x, i.e. the same scatterer seen from the other side.
    pub fn mirrored(&self) -> Self {
        let sites = self
            .sites
            .iter()
            .rev()
            .map(|s| DeltaSite {
                position: -s.position,
                strength: s.strength,
            })
            .collect();
        DeltaArray {
            sites,
            mass: self.mass,
        }
    }
}

/// β = kħ²/(mα).
pub fn beta_parameter(k: f64, mass: f64, strength: f64) -> f64 {
    k / (mass * strength)
}

/// Strength α that realises a given β at wave number k.
pub fn strength_for_beta(beta: f64, k: f64, mass: f64) -> f64 {
    k / (mass * beta)
}

/// Reflection/transmission amplitudes for a wave incident from the left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitudes1D {
    pub r: Complex64,
    pub t: Complex64,
    pub reflectivity: f64,
    pub transmissivity: f64,
    pub k: f64,
}

impl Amplitudes1D {
    fn from_amplitudes(r: Complex64, t: Complex64, k: f64) -> Self {
        Amplitudes1D {
            r,
            t,
            reflectivity: r.norm_sqr(),
            transmissivity: t.norm_sqr(),
            k,
        }
    }
}

fn check_wave_number(op: &'static str, k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(
            op,
            format!("wave number must be positive and finite, got {k}"),
        ))
    }
}

/// Two equal repulsive deltas at distance a:
/// R = 4[β cos ka + sin ka]² / (2 + 2β² + β⁴ + 2(β² − 1) cos 2ka + 4β sin 2ka).
pub fn reflectivity_two_delta_closed_form(beta: f64, ka: f64) -> Result<f64> {
    const OP: &str = "delta1d::reflectivity_two_delta_closed_form";
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::domain(
            OP,
            format!("beta must be positive and finite, got {beta}"),
        ));
    }
    if !(ka >= 0.0) || !ka.is_finite() {
        return Err(Error::domain(
            OP,
            format!("ka must be non-negative, got {ka}"),
        ));
    }
    let b2 = beta * beta;
    let num = 4.0 * (beta * ka.cos() + ka.sin()).powi(2);
    let den = 2.0
        + 2.0 * b2
        + b2 * b2
        + 2.0 * (b2 - 1.0) * (2.0 * ka).cos()
        + 4.0 * beta * (2.0 * ka).sin();
    Ok(num / den)
}

/// A single repulsive delta: R = 1/(1 + β²).
pub fn reflectivity_single_delta(beta: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::domain(
            "delta1d::reflectivity_single_delta",
            format!("beta must be positive, got {beta}"),
        ));
    }
    Ok(1.0 / (1.0 + beta * beta))
}

type Mat2 = [[Complex64; 2]; 2];

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

/// Maps (c, d) on the left of a site to (c, d) on its right, where the
/// wave is c e^{ikx} + d e^{−ikx}.
fn site_matrix(site: &DeltaSite, mass: f64, k: f64) -> Mat2 {
    // γ = 2mα / (2ik)
    let gamma = Complex64::new(0.0, -mass * site.strength / k);
    let u2 = Complex64::from_polar(1.0, 2.0 * k * site.position);
    let one = Complex64::new(1.0, 0.0);
    [[one + gamma, gamma / u2], [-gamma * u2, one - gamma]]
}

/// Compose per-site transfer matrices and read off r and t.
pub fn transfer_matrix_solve(arr: &DeltaArray, k: f64) -> Result<Amplitudes1D> {
    const OP: &str = "delta1d::transfer_matrix_solve";
    check_wave_number(OP, k)?;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let total = arr.sites.iter().fold([[one, zero], [zero, one]], |acc, s| {
        mat_mul(&site_matrix(s, arr.mass, k), &acc)
    });

    // (t, 0)ᵀ = M (1, r)ᵀ. Every site matrix has unit determinant, so
    // t = 1/M22; forming det M numerically cancels catastrophically when
    // the sites are strong.
    let m22 = total[1][1];
    if m22.norm() == 0.0 || !m22.is_finite() {
        return Err(Error::Singular {
            op: OP,
            message: format!("transfer matrix element M22 = {m22} at k = {k}"),
        });
    }
    let r = -total[1][0] / m22;
    let t = one / m22;
    Ok(Amplitudes1D::from_amplitudes(r, t, k))
}

/// Dense complex Gaussian elimination with partial pivoting.
fn solve_dense(
    mut a: Vec<Vec<Complex64>>,
    mut b: Vec<Complex64>,
    op: &'static str,
) -> Result<Vec<Complex64>> {
    let n = b.len();
    let scale = a
        .iter()
        .flat_map(|row| row.iter().map(|z| z.norm()))
        .fold(0.0_f64, f64::max);
    let threshold = scale * n as f64 * f64::EPSILON;

    for col in 0..n {
        let (pivot_row, pivot_abs) = (col..n)
            .map(|r| (r, a[r][col].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("non-empty range");
        if !(pivot_abs > threshold) {
            return Err(Error::Singular {
                op,
                message: format!("pivot {pivot_abs:e} in column {col} is below {threshold:e}"),
            });
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        let pivot = a[col][col];
        for row in col + 1..n {
            let factor = a[row][col] / pivot;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            let (upper, lower) = a.split_at_mut(row);
            for (dst, &src) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *dst -= factor * src;
            }
            let v = b[col];
            b[row] -= factor * v;
        }
    }

    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let tail: Complex64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Ok(x)
}

/// Solve the matching conditions at every site as one linear system, with
/// c₁ = 1 (incident) and no wave entering from the right.
///
/// Unknowns, in order: d₁ = r, then (cⱼ, dⱼ) for each inner region, then
/// the outgoing c = t. Each site contributes a continuity row and a
/// derivative-jump row.
pub fn boundary_condition_solve(arr: &DeltaArray, k: f64) -> Result<Amplitudes1D> {
    const OP: &str = "delta1d::boundary_condition_solve";
    check_wave_number(OP, k)?;
    let n_sites = arr.len();
    if n_sites == 0 {
        return Ok(Amplitudes1D::from_amplitudes(
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            k,
        ));
    }

    let n = 2 * n_sites;
    let zero = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let mut a = vec![vec![zero; n]; n];
    let mut b = vec![zero; n];

    // Column of the coefficient multiplying e^{±ikx} in `region`; regions run
    // 0..=n_sites. None marks the fixed c₀ = 1 and d_last = 0.
    let c_col = |region: usize| -> Option<usize> {
        match region {
            0 => None,
            r if r == n_sites => Some(n - 1),
            r => Some(2 * r - 1),
        }
    };
    let d_col = |region: usize| -> Option<usize> {
        match region {
            r if r == n_sites => None,
            r => Some(2 * r),
        }
    };

    for (j, site) in arr.sites.iter().enumerate() {
        let u = Complex64::from_polar(1.0, k * site.position);
        let u_inv = u.conj();
        let kappa = 2.0 * arr.mass * site.strength / k;
        let (cont, jump) = (2 * j, 2 * j + 1);

        // continuity: ψ_right(x) − ψ_left(x) = 0
        // jump: i(c_R u − d_R/u) − i(c_L u − d_L/u) − κ/k (c_L u + d_L/u) = 0
        let (left, right) = (j, j + 1);

        // right region
        if let Some(c) = c_col(right) {
            a[cont][c] += u;
            a[jump][c] += i * u;
        }
        if let Some(c) = d_col(right) {
            a[cont][c] += u_inv;
            a[jump][c] += -i * u_inv;
        }
        // left region
        match c_col(left) {
            Some(c) => {
                a[cont][c] -= u;
                a[jump][c] += -i * u - kappa * u;
            }
            None => {
                // c₀ = 1 moves to the right-hand side
                b[cont] += u;
                b[jump] -= -i * u - kappa * u;
            }
        }
        if let Some(c) = d_col(left) {
            a[cont][c] -= u_inv;
            a[jump][c] += i * u_inv - kappa * u_inv;
        }
    }

    let x = solve_dense(a, b, OP)?;
    Ok(Amplitudes1D::from_amplitudes(x[0], x[n - 1], k))
}

/// R(array)/R(single site) for an array of equal strengths.
pub fn coherent_gain(arr: &DeltaArray, k: f64) -> Result<f64> {
    const OP: &str = "delta1d::coherent_gain";
    let first = arr
        .sites
        .first()
        .ok_or_else(|| Error::domain(OP, "array has no sites"))?;
    if arr.sites.iter().any(|s| s.strength != first.strength) {
        return Err(Error::domain(OP, "all sites must carry the same strength"));
    }
    let single = DeltaArray::new(vec![*first], arr.mass)?;
    let r_single = transfer_matrix_solve(&single, k)?.reflectivity;
    if r_single == 0.0 {
        return Err(Error::domain(OP, "single-site reflectivity vanishes"));
    }
    Ok(transfer_matrix_solve(arr, k)?.reflectivity / r_single)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn closed_form_values() {
        // numerator 4·[0 + 1]², denominator 2 + 2 + 1 + 0 + 4·sin π
        assert!((reflectivity_two_delta_closed_form(1.0, PI / 2.0).unwrap() - 0.8).abs() < 1e-15);
        assert!((reflectivity_two_delta_closed_form(2.0, 1e-6).unwrap() - 0.5).abs() < 1e-6);
        assert!(reflectivity_two_delta_closed_form(1e9, 0.7).unwrap() < 1e-17);
        assert!(reflectivity_two_delta_closed_form(0.0, 1.0).is_err());
        assert!(reflectivity_two_delta_closed_form(1.0, -1.0).is_err());
    }

    #[test]
    fn single_delta_values() {
        assert_eq!(reflectivity_single_delta(1.0).unwrap(), 0.5);
        assert!((reflectivity_single_delta(2.0).unwrap() - 0.2).abs() < 1e-16);
        assert!(reflectivity_single_delta(1e12).unwrap() < 1e-23);
        assert!(reflectivity_single_delta(0.0).is_err());
    }

    #[test]
    fn one_site_matches_single_delta() {
        let k = 1.3;
        for beta in [1.0, 2.0, 0.3] {
            let arr = DeltaArray::new(
                vec![DeltaSite {
                    position: 0.4,
                    strength: strength_for_beta(beta, k, 2.0),
                }],
                2.0,
            )
            .unwrap();
            let expected = reflectivity_single_delta(beta).unwrap();
            let tm = transfer_matrix_solve(&arr, k).unwrap();
            let bc = boundary_condition_solve(&arr, k).unwrap();
            assert!((tm.reflectivity - expected).abs() < 1e-14);
            assert!((bc.reflectivity - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn two_sites_match_closed_form() {
        let arr = DeltaArray::two_equal(1.0, PI / 2.0).unwrap();
        let tm = transfer_matrix_solve(&arr, 1.0).unwrap();
        let bc = boundary_condition_solve(&arr, 1.0).unwrap();
        assert!((tm.reflectivity - 0.8).abs() < 1e-14);
        assert!((bc.reflectivity - 0.8).abs() < 1e-14);
        assert!((tm.reflectivity + tm.transmissivity - 1.0).abs() < 1e-14);
    }

    #[test]
    fn coincident_sites_add_strengths() {
        let (k, m, alpha) = (0.9, 1.5, 0.37);
        for n in 1..=5 {
            let stacked = DeltaArray::uniform(n, 0.0, alpha, m).unwrap();
            let merged = DeltaArray::new(
                vec![DeltaSite {
                    position: 0.0,
                    strength: n as f64 * alpha,
                }],
                m,
            )
            .unwrap();
            let a = transfer_matrix_solve(&stacked, k).unwrap().reflectivity;
            let b = transfer_matrix_solve(&merged, k).unwrap().reflectivity;
            let c = boundary_condition_solve(&stacked, k).unwrap().reflectivity;
            assert!((a - b).abs() < 1e-14, "n={n}");
            assert!((c - b).abs() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn zero_strength_is_transparent() {
        let arr = DeltaArray::uniform(4, 0.3, 0.0, 1.0).unwrap();
        for amp in [
            transfer_matrix_solve(&arr, 2.0).unwrap(),
            boundary_condition_solve(&arr, 2.0).unwrap(),
        ] {
            assert!(amp.reflectivity < 1e-30);
            assert!((amp.transmissivity - 1.0).abs() < 1e-15);
        }
        let empty = DeltaArray::new(vec![], 1.0).unwrap();
        assert_eq!(
            boundary_condition_solve(&empty, 1.0)
                .unwrap()
                .transmissivity,
            1.0
        );
        assert_eq!(
            transfer_matrix_solve(&empty, 1.0).unwrap().transmissivity,
            1.0
        );
    }

    #[test]
    fn rejects_bad_wave_numbers_and_arrays() {
        let arr = DeltaArray::uniform(2, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(
            transfer_matrix_solve(&arr, 0.0).unwrap_err().code(),
            "domain_error"
        );
        assert!(boundary_condition_solve(&arr, -1.0).is_err());
        assert!(DeltaArray::new(
            vec![
                DeltaSite {
                    position: 1.0,
                    strength: 1.0
                },
                DeltaSite {
                    position: 0.0,
                    strength: 1.0
                }
            ],
            1.0
        )
        .is_err());
        assert!(DeltaArray::uniform(2, 1.0, 1.0, 0.0).is_err());
        assert!(DeltaArray::uniform(2, 1.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn singular_system_is_reported() {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let err = solve_dense(
            vec![vec![one, one], vec![one, one]],
            vec![one, zero],
            "test",
        )
        .unwrap_err();
        assert_eq!(err.code(), "singular_system");
    }

    #[test]
    fn gain_approaches_n_squared() {
        let (beta, ka) = (100.0, 1e-4);
        let k = 1.0;
        let alpha = strength_for_beta(beta, k, 1.0);
        for (n, lo, hi) in [
            (1, 1.0 - 1e-12, 1.0 + 1e-12),
            (2, 3.96, 4.04),
            (3, 8.91, 9.09),
        ] {
            let arr = DeltaArray::uniform(n, ka / k, alpha, 1.0).unwrap();
            let g = coherent_gain(&arr, k).unwrap();
            assert!(g >= lo && g <= hi, "n={n}: gain {g}");
        }
        let mixed = DeltaArray::new(
            vec![
                DeltaSite {
                    position: 0.0,
                    strength: 1.0,
                },
                DeltaSite {
                    position: 1.0,
                    strength: 2.0,
                },
            ],
            1.0,
        )
        .unwrap();
        assert!(coherent_gain(&mixed, 1.0).is_err());
        let transparent = DeltaArray::uniform(2, 1.0, 0.0, 1.0).unwrap();
        assert!(coherent_gain(&transparent, 1.0).is_err());
    }

    #[test]
    fn beta_parametrisation_round_trips() {
        let alpha = strength_for_beta(3.0, 2.0, 0.5);
        assert!((beta_parameter(2.0, 0.5, alpha) - 3.0).abs() < 1e-15);
    }
}
