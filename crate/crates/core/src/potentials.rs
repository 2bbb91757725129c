//! Central potentials and their 3D Fourier transforms
//! Ṽ(q) = ∫ d³x e^{iq·x} V(|x|) = 4π ∫₀^∞ r² V(r) sin(qr)/(qr) dr   (ħ = 1).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, Tolerance};
use crate::units::Vec3;

/// A radially symmetric interaction potential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Potential {
    /// V(r) = g / r.
    Coulomb { coupling: f64 },
    /// V(r) = g e^{−r/λ} / r.
    Yukawa {
        coupling: f64,
        screening_length: f64,
    },
    /// V(r) = V₀ e^{−r²/(2w²)}.
    Gaussian { strength: f64, width: f64 },
    /// Natural cubic spline through radial samples; undefined outside them.
    Tabulated(TabulatedPotential),
}

impl Potential {
    pub fn coulomb(coupling: f64) -> Self {
        Potential::Coulomb { coupling }
    }

    pub fn yukawa(coupling: f64, screening_length: f64) -> Result<Self> {
        if !(screening_length > 0.0) {
            return Err(Error::domain(
                "potentials::Potential::yukawa",
                format!("screening length must be positive, got {screening_length}"),
            ));
        }
        Ok(Potential::Yukawa {
            coupling,
            screening_length,
        })
    }

    pub fn gaussian(strength: f64, width: f64) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::domain(
                "potentials::Potential::gaussian",
                format!("width must be positive, got {width}"),
            ));
        }
        Ok(Potential::Gaussian { strength, width })
    }

    /// Re-check parameter constraints, e.g. after deserialisation.
    pub fn validate(&self) -> Result<()> {
        const OP: &str = "potentials::Potential::validate";
        let finite = |x: f64, what: &str| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::domain(OP, format!("{what} must be finite")))
            }
        };
        match *self {
            Potential::Coulomb { coupling } => finite(coupling, "coupling"),
            Potential::Yukawa {
                coupling,
                screening_length,
            } => {
                finite(coupling, "coupling")?;
                Self::yukawa(coupling, screening_length).map(|_| ())
            }
            Potential::Gaussian { strength, width } => {
                finite(strength, "strength")?;
                finite(width, "width")?;
                Self::gaussian(strength, width).map(|_| ())
            }
            Potential::Tabulated(_) => Ok(()),
        }
    }

    pub fn is_coulomb(&self) -> bool {
        matches!(self, Potential::Coulomb { .. })
    }

    /// Short human-readable description, used as table metadata.
    pub fn descriptor(&self) -> String {
        match self {
            Potential::Coulomb { coupling } => format!("coulomb(coupling={coupling})"),
            Potential::Yukawa {
                coupling,
                screening_length,
            } => format!("yukawa(coupling={coupling}, screening_length={screening_length})"),
            Potential::Gaussian { strength, width } => {
                format!("gaussian(strength={strength}, width={width})")
            }
            Potential::Tabulated(t) => format!(
                "tabulated({} samples on [{}, {}])",
                t.r.len(),
                t.r[0],
                t.r[t.r.len() - 1]
            ),
        }
    }

    /// V(r).
    pub fn value(&self, r: f64) -> Result<f64> {
        const OP: &str = "potentials::Potential::value";
        match *self {
            Potential::Coulomb { coupling } => {
                if r > 0.0 {
                    Ok(coupling / r)
                } else {
                    Err(Error::domain(OP, "Coulomb potential diverges at r = 0"))
                }
            }
            Potential::Yukawa {
                coupling,
                screening_length,
            } => {
                if r > 0.0 {
                    Ok(coupling * (-r / screening_length).exp() / r)
                } else {
                    Err(Error::domain(OP, "Yukawa potential diverges at r = 0"))
                }
            }
            Potential::Gaussian { strength, width } => {
                Ok(strength * (-(r * r) / (2.0 * width * width)).exp())
            }
            Potential::Tabulated(ref t) => t.value(r),
        }
    }

    /// Ṽ(q) for q = |q|, analytic where a closed form exists.
    pub fn fourier(&self, q: f64) -> Result<f64> {
        match *self {
            Potential::Coulomb { coupling } => fourier_coulomb(q, coupling),
            Potential::Yukawa {
                coupling,
                screening_length,
            } => fourier_yukawa(q, coupling, screening_length),
            Potential::Gaussian { strength, width } => fourier_gaussian(q, strength, width),
            Potential::Tabulated(_) => fourier_numeric(self, q),
        }
    }

    /// Ṽ evaluated at a momentum-transfer vector; only |q| matters.
    pub fn fourier_vec(&self, q: Vec3) -> Result<f64> {
        self.fourier(q.norm())
    }

    fn support(&self) -> (f64, f64) {
        match self {
            Potential::Tabulated(t) => (t.r[0], t.r[t.r.len() - 1]),
            _ => (0.0, f64::INFINITY),
        }
    }

    fn length_scale(&self) -> f64 {
        match *self {
            Potential::Coulomb { .. } => 1.0,
            Potential::Yukawa {
                screening_length, ..
            } => screening_length,
            Potential::Gaussian { width, .. } => width,
            Potential::Tabulated(ref t) => (t.r[t.r.len() - 1] - t.r[0]) / 16.0,
        }
    }
}

fn check_momentum(op: &'static str, q: f64) -> Result<()> {
    if q >= 0.0 && q.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(
            op,
            format!("momentum transfer must be non-negative and finite, got {q}"),
        ))
    }
}

/// g·4π/q². Diverges in the forward direction.
pub fn fourier_coulomb(q: f64, coupling: f64) -> Result<f64> {
    const OP: &str = "potentials::fourier_coulomb";
    check_momentum(OP, q)?;
    if q == 0.0 {
        return Err(Error::domain(
            OP,
            "Coulomb transform diverges at q = 0 (forward scattering); use a screened potential or exclude theta = 0",
        ));
    }
    Ok(coupling * 4.0 * PI / (q * q))
}

/// g·4π/(q² + λ⁻²).
pub fn fourier_yukawa(q: f64, coupling: f64, screening_length: f64) -> Result<f64> {
    const OP: &str = "potentials::fourier_yukawa";
    check_momentum(OP, q)?;
    if !(screening_length > 0.0) {
        return Err(Error::domain(OP, "screening length must be positive"));
    }
    let mu = 1.0 / screening_length;
    Ok(coupling * 4.0 * PI / (q * q + mu * mu))
}

/// V₀ (2π)^{3/2} w³ e^{−q²w²/2}.
pub fn fourier_gaussian(q: f64, strength: f64, width: f64) -> Result<f64> {
    const OP: &str = "potentials::fourier_gaussian";
    check_momentum(OP, q)?;
    if !(width > 0.0) {
        return Err(Error::domain(OP, "width must be positive"));
    }
    Ok(strength * (2.0 * PI).powf(1.5) * width.powi(3) * (-(q * q * width * width) / 2.0).exp())
}

const NUMERIC_REL_TOL: f64 = 1e-8;
const MAX_PANELS: usize = 100_000;
const QUIET_PANELS: usize = 5;

/// Radial quadrature of 4π∫ r² V(r) sinc(qr) dr.
///
/// The half-line is cut into panels that end on zeros of sin(qr) (or on the
/// potential's own length scale when that is shorter), each panel is
/// integrated adaptively, and the panel series is summed until the tail is
/// negligible. An integral whose panels never die out (bare Coulomb, or
/// anything at q = 0 that is not absolutely integrable) is reported as a
/// quadrature failure.
pub fn fourier_numeric(pot: &Potential, q: f64) -> Result<f64> {
    const OP: &str = "potentials::fourier_numeric";
    check_momentum(OP, q)?;
    let (r_lo, r_hi) = pot.support();
    let scale = pot.length_scale();
    let width = if q > 0.0 { (PI / q).min(scale) } else { scale };
    let aligned = q > 0.0 && PI / q <= scale;

    let integrand = |r: f64| -> Result<f64> {
        let qr = q * r;
        let sinc = if qr.abs() < 1e-4 {
            1.0 - qr * qr / 6.0
        } else {
            qr.sin() / qr
        };
        Ok(4.0 * PI * r * r * pot.value(r)? * sinc)
    };

    // first panel edge past r_lo
    let mut edge = if aligned {
        ((r_lo / width).floor() + 1.0) * width
    } else {
        r_lo + width
    };
    let mut start = r_lo;
    let mut total = 0.0_f64;
    let mut quiet = 0;
    for panel in 0..MAX_PANELS {
        let end = edge.min(r_hi);
        let tol = Tolerance {
            abs: 1e-3 * NUMERIC_REL_TOL * total.abs(),
            rel: 1e-3 * NUMERIC_REL_TOL,
            max_intervals: 4000,
        };
        let piece = integrate(integrand, start, end, tol, OP)?.value;
        total += piece;
        if end >= r_hi {
            return Ok(total);
        }
        if panel > 0 && piece.abs() <= 1e-4 * NUMERIC_REL_TOL * total.abs() {
            quiet += 1;
            if quiet >= QUIET_PANELS {
                return Ok(total);
            }
        } else if total == 0.0 && piece == 0.0 && panel + 1 >= QUIET_PANELS {
            return Ok(0.0);
        } else {
            quiet = 0;
        }
        start = end;
        edge += width;
    }
    Err(Error::quadrature(
        OP,
        format!("radial integral does not converge within {MAX_PANELS} panels at q = {q}"),
    ))
}

/// Radial samples with a natural cubic spline through them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TabulatedSamples", into = "TabulatedSamples")]
pub struct TabulatedPotential {
    r: Vec<f64>,
    v: Vec<f64>,
    // second derivatives at the knots
    m: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TabulatedSamples {
    pub r: Vec<f64>,
    pub v: Vec<f64>,
}

impl TryFrom<TabulatedSamples> for TabulatedPotential {
    type Error = Error;
    fn try_from(s: TabulatedSamples) -> Result<Self> {
        TabulatedPotential::new(s.r, s.v)
    }
}

impl From<TabulatedPotential> for TabulatedSamples {
    fn from(t: TabulatedPotential) -> Self {
        TabulatedSamples { r: t.r, v: t.v }
    }
}

impl TabulatedPotential {
    pub fn new(r: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        const OP: &str = "potentials::TabulatedPotential::new";
        if r.len() != v.len() {
            return Err(Error::input(
                OP,
                format!("{} radii but {} values", r.len(), v.len()),
            ));
        }
        if r.len() < 2 {
            return Err(Error::input(OP, "need at least two samples"));
        }
        if r.iter().chain(v.iter()).any(|x| !x.is_finite()) {
            return Err(Error::input(OP, "samples must be finite"));
        }
        if r[0] < 0.0 {
            return Err(Error::input(OP, "radii must be non-negative"));
        }
        if r.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::input(OP, "radii must be strictly increasing"));
        }
        let m = natural_spline_second_derivatives(&r, &v);
        Ok(TabulatedPotential { r, v, m })
    }

    pub fn radii(&self) -> &[f64] {
        &self.r
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        let (lo, hi) = (self.r[0], self.r[self.r.len() - 1]);
        if !(x >= lo && x <= hi) {
            return Err(Error::domain(
                "potentials::TabulatedPotential::value",
                format!("r = {x} lies outside the tabulated range [{lo}, {hi}]"),
            ));
        }
        let i = match self.r.partition_point(|&ri| ri <= x) {
            0 => 0,
            p => (p - 1).min(self.r.len() - 2),
        };
        let h = self.r[i + 1] - self.r[i];
        let a = (self.r[i + 1] - x) / h;
        let b = (x - self.r[i]) / h;
        Ok(a * self.v[i]
            + b * self.v[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0)
    }
}

/// Thomas algorithm for the natural-spline moment equations.
fn natural_spline_second_derivatives(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    let mut diag = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    let mut upper = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = x[i] - x[i - 1];
        let h1 = x[i + 1] - x[i];
        let lower = h0 / 6.0;
        diag[i] = (h0 + h1) / 3.0;
        upper[i] = h1 / 6.0;
        rhs[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
        if i > 1 {
            let w = lower / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
    }
    for i in (1..n - 1).rev() {
        m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn coulomb_values() {
        assert!(rel(fourier_coulomb(2.0, 1.0).unwrap(), PI) < 1e-15);
        assert_eq!(fourier_coulomb(3.7, 0.0).unwrap(), 0.0);
        let err = fourier_coulomb(0.0, 1.0).unwrap_err();
        assert_eq!(err.code(), "domain_error");
        assert_eq!(err.op(), "potentials::fourier_coulomb");
    }

    #[test]
    fn coulomb_at_fixed_relative_momentum() {
        // |p_r| = |p'_r|, angle θ:  Ṽ = π/(m_r E_r) · 1/(1 − cos θ)
        let (m_r, e_r, theta) = (1.7_f64, 0.9_f64, 1.1_f64);
        let p = (2.0 * m_r * e_r).sqrt();
        let q = p * (2.0 * (1.0 - theta.cos())).sqrt();
        let expected = PI / (m_r * e_r) / (1.0 - theta.cos());
        assert!(rel(fourier_coulomb(q, 1.0).unwrap(), expected) < 1e-14);
    }

    #[test]
    fn yukawa_tends_to_coulomb() {
        let q = 2.0;
        let coulomb = fourier_coulomb(q, 1.0).unwrap();
        let mut last = f64::INFINITY;
        for lambda in [1.0, 10.0, 100.0, 1e3, 1e4] {
            let err = rel(fourier_yukawa(q, 1.0, lambda).unwrap(), coulomb);
            assert!(err < last);
            last = err;
        }
        assert!(last < 1e-8);
    }

    #[test]
    fn gaussian_at_zero_is_volume_integral() {
        let v = fourier_gaussian(0.0, 2.5, 0.3).unwrap();
        assert!(rel(v, 2.5 * (2.0 * PI).powf(1.5) * 0.027) < 1e-14);
        let n = fourier_numeric(&Potential::gaussian(2.5, 0.3).unwrap(), 0.0).unwrap();
        assert!(rel(n, v) < 1e-9);
    }

    #[test]
    fn numeric_matches_yukawa() {
        let pot = Potential::yukawa(1.0, 1.0).unwrap();
        for q in [1e-3, 0.5, 1.0, 7.0, 60.0] {
            let a = pot.fourier(q).unwrap();
            let n = fourier_numeric(&pot, q).unwrap();
            assert!(rel(n, a) < 1e-7, "q={q}: {n} vs {a}");
        }
    }

    #[test]
    fn bare_coulomb_quadrature_fails() {
        let pot = Potential::coulomb(1.0);
        let err = fourier_numeric(&pot, 0.0).unwrap_err();
        assert_eq!(err.code(), "quadrature_error");
        assert!(fourier_numeric(&pot, 1.0).is_err());
    }

    #[test]
    fn zero_potential_transforms_to_zero() {
        let pot = Potential::gaussian(0.0, 1.0).unwrap();
        assert_eq!(fourier_numeric(&pot, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn spline_reproduces_knots_and_rejects_extrapolation() {
        let r: Vec<f64> = (0..=20).map(|i| i as f64 * 0.25).collect();
        let v: Vec<f64> = r.iter().map(|x| (-x).exp()).collect();
        let t = TabulatedPotential::new(r.clone(), v.clone()).unwrap();
        for (x, y) in r.iter().zip(&v) {
            assert!((t.value(*x).unwrap() - y).abs() < 1e-15);
        }
        assert!((t.value(1.1).unwrap() - (-1.1f64).exp()).abs() < 1e-3);
        assert_eq!(t.value(5.01).unwrap_err().code(), "domain_error");
        assert!(t.value(-0.1).is_err());
    }

    #[test]
    fn tabulated_rejects_bad_input() {
        assert!(TabulatedPotential::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(TabulatedPotential::new(vec![0.0, 0.0, 1.0], vec![1.0, 1.0, 1.0]).is_err());
        assert!(TabulatedPotential::new(vec![1.0], vec![1.0]).is_err());
    }

    #[test]
    fn tabulated_gaussian_transform() {
        // dense table of a narrow Gaussian, truncated where it is ~1e-22
        let w = 0.5;
        let r: Vec<f64> = (0..=2000).map(|i| i as f64 * 0.0025).collect();
        let v: Vec<f64> = r.iter().map(|x| (-(x * x) / (2.0 * w * w)).exp()).collect();
        let pot = Potential::Tabulated(TabulatedPotential::new(r, v).unwrap());
        for q in [0.0, 1.0, 4.0] {
            let n = pot.fourier(q).unwrap();
            let a = fourier_gaussian(q, 1.0, w).unwrap();
            assert!(rel(n, a) < 1e-6, "q={q}: {n} vs {a}");
        }
    }

    #[test]
    fn serde_round_trip_and_validation() {
        let p: Potential =
            serde_json::from_str(r#"{"kind":"yukawa","coupling":2.0,"screening_length":3.0}"#)
                .unwrap();
        assert_eq!(p, Potential::yukawa(2.0, 3.0).unwrap());
        let t: Potential =
            serde_json::from_str(r#"{"kind":"tabulated","r":[0,1,2],"v":[3,2,1]}"#).unwrap();
        assert_eq!(t.value(1.5).unwrap(), 1.5);
        assert!(
            serde_json::from_str::<Potential>(r#"{"kind":"tabulated","r":[0,0],"v":[3,2]}"#)
                .is_err()
        );
        let bad = Potential::Yukawa {
            coupling: 1.0,
            screening_length: -1.0,
        };
        assert!(bad.validate().is_err());
    }
}
