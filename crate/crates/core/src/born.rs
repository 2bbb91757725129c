//! First-order Born cross sections for scattering off a composite target.
//!
//! With product-Gaussian internal states the elastic form-factor sum
//! |Σᵢ gᵢ Fᵢ(q)|² has a closed form, so the general cross section and its
//! coherent limit (kernel → G²) can be compared directly.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coherence::{born_validity, BornValidity};
use crate::error::{Error, Result};
use crate::potentials::Potential;
use crate::quadrature::{integrate, Tolerance};
use crate::units::{Kinematics, Vec3};

/// One bound constituent: charge gᵢ, mean position r̄ᵢ relative to the
/// centre of mass, and the width σᵢ of its Gaussian position density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constituent {
    pub charge: f64,
    pub position: Vec3,
    #[serde(default)]
    pub spread: f64,
}

impl Constituent {
    /// Fourier transform of the normalised single-particle density,
    /// e^{i q·r̄} e^{−q²σ²/2}. Equals 1 at q = 0.
    pub fn form_factor(&self, q: Vec3) -> Complex64 {
        let damping = (-0.5 * q.norm_sqr() * self.spread * self.spread).exp();
        Complex64::from_polar(damping, q.dot(&self.position))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TargetSpec", into = "TargetSpec")]
pub struct GaussianTarget {
    constituents: Vec<Constituent>,
    total_charge: f64,
    size: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TargetSpec {
    pub constituents: Vec<Constituent>,
}

impl TryFrom<TargetSpec> for GaussianTarget {
    type Error = Error;
    fn try_from(spec: TargetSpec) -> Result<Self> {
        GaussianTarget::new(spec.constituents)
    }
}

impl From<GaussianTarget> for TargetSpec {
    fn from(t: GaussianTarget) -> Self {
        TargetSpec {
            constituents: t.constituents,
        }
    }
}

impl GaussianTarget {
    pub fn new(constituents: Vec<Constituent>) -> Result<Self> {
        const OP: &str = "born::GaussianTarget::new";
        if constituents.is_empty() {
            return Err(Error::input(OP, "target needs at least one constituent"));
        }
        for c in &constituents {
            if !c.charge.is_finite() || !c.position.is_finite() {
                return Err(Error::input(OP, "charges and positions must be finite"));
            }
            if !(c.spread >= 0.0 && c.spread.is_finite()) {
                return Err(Error::input(
                    OP,
                    format!("spread must be non-negative, got {}", c.spread),
                ));
            }
        }
        let total_charge = constituents.iter().map(|c| c.charge).sum();
        let mut diameter = 0.0_f64;
        for (i, a) in constituents.iter().enumerate() {
            for b in &constituents[i + 1..] {
                diameter = diameter.max((a.position - b.position).norm());
            }
        }
        let max_spread = constituents.iter().map(|c| c.spread).fold(0.0, f64::max);
        Ok(GaussianTarget {
            constituents,
            total_charge,
            size: diameter + 2.0 * max_spread,
        })
    }

    /// Point-like constituents all sitting at the origin.
    pub fn point(charges: &[f64]) -> Result<Self> {
        Self::new(
            charges
                .iter()
                .map(|&charge| Constituent {
                    charge,
                    position: Vec3::ZERO,
                    spread: 0.0,
                })
                .collect(),
        )
    }

    pub fn constituents(&self) -> &[Constituent] {
        &self.constituents
    }

    /// G = Σ gᵢ.
    pub fn total_charge(&self) -> f64 {
        self.total_charge
    }

    /// L = max |r̄ᵢ − r̄ⱼ| + 2 max σᵢ.
    pub fn size(&self) -> f64 {
        self.size
    }
}

/// Elastic form-factor sum |Σᵢ gᵢ Fᵢ(q)|², the factor that multiplies |Ṽ|²
/// in place of G².
pub fn transition_kernel(target: &GaussianTarget, q: Vec3) -> f64 {
    target
        .constituents
        .iter()
        .map(|c| c.form_factor(q) * c.charge)
        .sum::<Complex64>()
        .norm_sqr()
}

/// Monte Carlo average of the kernel over point charges placed uniformly
/// at random in a cube of side `box_side` centred on the origin. At large
/// |q|·box_side the cross terms dephase and the average tends to Σ gᵢ².
pub fn position_averaged_kernel(
    charges: &[f64],
    box_side: f64,
    q: Vec3,
    placements: usize,
    seed: u64,
) -> Result<f64> {
    const OP: &str = "born::position_averaged_kernel";
    if charges.is_empty() || placements == 0 {
        return Err(Error::domain(
            OP,
            "need at least one charge and one placement",
        ));
    }
    if !(box_side >= 0.0 && box_side.is_finite()) {
        return Err(Error::domain(
            OP,
            format!("box side must be non-negative, got {box_side}"),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = 0.0;
    for _ in 0..placements {
        let mut sum = Complex64::new(0.0, 0.0);
        for &g in charges {
            let r = Vec3::new(
                (rng.random::<f64>() - 0.5) * box_side,
                (rng.random::<f64>() - 0.5) * box_side,
                (rng.random::<f64>() - 0.5) * box_side,
            );
            sum += Complex64::from_polar(g, q.dot(&r));
        }
        acc += sum.norm_sqr();
    }
    Ok(acc / placements as f64)
}

fn check_angle(op: &'static str, theta: f64) -> Result<()> {
    if (0.0..=PI).contains(&theta) {
        Ok(())
    } else {
        Err(Error::domain(
            op,
            format!("scattering angle must lie in [0, pi], got {theta}"),
        ))
    }
}

fn check_energy(op: &'static str, kin: &Kinematics) -> Result<()> {
    if kin.e_r > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(
            op,
            "relative kinetic energy must be positive",
        ))
    }
}

/// |q| = √(8 m_r E_r) sin(θ/2) for elastic scattering through angle θ.
pub fn momentum_transfer(kin: &Kinematics, theta: f64) -> f64 {
    (8.0 * kin.m_r * kin.e_r).sqrt() * (theta / 2.0).sin()
}

/// Momentum transfer vector p_r − p′_r for final direction (θ, φ) measured
/// from p_r. The azimuth origin is a fixed vector orthogonal to p_r.
pub fn momentum_transfer_vector(kin: &Kinematics, theta: f64, phi: f64) -> Result<Vec3> {
    let n = kin.p_r.normalized().ok_or_else(|| {
        Error::domain(
            "born::momentum_transfer_vector",
            "relative momentum vanishes",
        )
    })?;
    let e1 = n.any_orthogonal();
    let e2 = n.cross(&e1);
    let n_final = n * theta.cos() + (e1 * phi.cos() + e2 * phi.sin()) * theta.sin();
    Ok((n - n_final) * kin.p_r.norm())
}

/// dσ/d(cos θ) = G² m_r²/(2π) |Ṽ(√(8 m_r E_r) sin(θ/2))|² for a target
/// that scatters as a point of total charge G.
pub fn coherent_differential_cross_section(
    pot: &Potential,
    kin: &Kinematics,
    total_charge: f64,
    theta: f64,
) -> Result<f64> {
    const OP: &str = "born::coherent_differential_cross_section";
    check_angle(OP, theta)?;
    check_energy(OP, kin)?;
    let v = pot.fourier(momentum_transfer(kin, theta))?;
    Ok(total_charge * total_charge * kin.m_r * kin.m_r / (2.0 * PI) * v * v)
}

/// σ = ∫ d(cos θ) dσ/d(cos θ) over cos θ ∈ [−1, cos θ_min]; the azimuthal
/// integral is already inside the differential cross section.
pub fn coherent_total_cross_section(
    pot: &Potential,
    kin: &Kinematics,
    total_charge: f64,
    theta_min: f64,
) -> Result<f64> {
    const OP: &str = "born::coherent_total_cross_section";
    if !(0.0..PI).contains(&theta_min) {
        return Err(Error::domain(
            OP,
            format!("theta_min must lie in [0, pi), got {theta_min}"),
        ));
    }
    // quadrature nodes never touch the endpoints, so probe the forward edge
    // explicitly to surface divergences there
    coherent_differential_cross_section(pot, kin, total_charge, theta_min)?;
    let tol = Tolerance {
        abs: 0.0,
        rel: 1e-12,
        max_intervals: 4000,
    };
    let integral = integrate(
        |c: f64| {
            coherent_differential_cross_section(pot, kin, total_charge, c.clamp(-1.0, 1.0).acos())
        },
        -1.0,
        theta_min.cos(),
        tol,
        OP,
    )?;
    Ok(integral.value)
}

/// Azimuthal mean of the form-factor kernel at polar angle θ.
///
/// The kernel is a smooth periodic function of φ, so the trapezoid rule
/// converges geometrically once the node count exceeds its bandwidth
/// |p_r| L sin θ.
pub fn azimuthal_kernel(kin: &Kinematics, target: &GaussianTarget, theta: f64) -> Result<f64> {
    let bandwidth = kin.p_r.norm() * target.size() * theta.sin();
    let nodes = 32 + 2 * bandwidth.ceil() as usize;
    let mut acc = 0.0;
    for j in 0..nodes {
        let phi = 2.0 * PI * j as f64 / nodes as f64;
        acc += transition_kernel(target, momentum_transfer_vector(kin, theta, phi)?);
    }
    Ok(acc / nodes as f64)
}

/// Born dσ/d(cos θ) for the structured target: the coherent formula with
/// G² replaced by the azimuthally averaged form-factor kernel.
pub fn transition_probability_density(
    pot: &Potential,
    kin: &Kinematics,
    target: &GaussianTarget,
    theta: f64,
) -> Result<f64> {
    const OP: &str = "born::transition_probability_density";
    check_angle(OP, theta)?;
    check_energy(OP, kin)?;
    let v = pot.fourier(momentum_transfer(kin, theta))?;
    let kernel = azimuthal_kernel(kin, target, theta)?;
    Ok(kernel * kin.m_r * kin.m_r / (2.0 * PI) * v * v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableMetadata {
    pub m_r: f64,
    pub e_r: f64,
    pub total_charge: f64,
    pub target_size: f64,
    pub potential: String,
    pub born_validity: Option<BornValidity>,
}

/// dσ/d(cos θ) sampled on an increasing grid of angles in (0, π].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossSectionTable {
    pub theta: Vec<f64>,
    pub dsigma_dcostheta: Vec<f64>,
    /// kernel / G² at each angle; 1 in the coherent limit.
    pub kernel_ratio: Vec<f64>,
    pub metadata: TableMetadata,
}

impl CrossSectionTable {
    /// Build a table from raw samples, checking the grid and sign invariants.
    pub fn from_samples(
        theta: Vec<f64>,
        dsigma_dcostheta: Vec<f64>,
        kernel_ratio: Vec<f64>,
        metadata: TableMetadata,
    ) -> Result<Self> {
        const OP: &str = "born::CrossSectionTable::from_samples";
        if theta.is_empty()
            || theta.len() != dsigma_dcostheta.len()
            || theta.len() != kernel_ratio.len()
        {
            return Err(Error::input(
                OP,
                "theta, values and kernel ratios must be non-empty and of equal length",
            ));
        }
        if theta.iter().any(|t| !(*t > 0.0 && *t <= PI)) {
            return Err(Error::input(OP, "angles must lie in (0, pi]"));
        }
        if theta.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::input(OP, "angle grid must be strictly increasing"));
        }
        if dsigma_dcostheta
            .iter()
            .any(|v| !(*v >= 0.0 && v.is_finite()))
        {
            return Err(Error::input(
                OP,
                "cross-section values must be finite and non-negative",
            ));
        }
        Ok(CrossSectionTable {
            theta,
            dsigma_dcostheta,
            kernel_ratio,
            metadata,
        })
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }
}

/// Tabulate the structured-target cross section over `thetas`.
///
/// When `born_extent` is given the Born-validity estimate is attached to
/// the metadata as an advisory; it never blocks the computation.
pub fn cross_section_table(
    pot: &Potential,
    kin: &Kinematics,
    target: &GaussianTarget,
    thetas: &[f64],
    born_extent: Option<f64>,
) -> Result<CrossSectionTable> {
    let g2 = target.total_charge().powi(2);
    let mut values = Vec::with_capacity(thetas.len());
    let mut ratios = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        values.push(transition_probability_density(pot, kin, target, theta)?);
        let kernel = azimuthal_kernel(kin, target, theta)?;
        ratios.push(if g2 > 0.0 { kernel / g2 } else { 0.0 });
    }
    let born_validity = born_extent
        .map(|r| born_validity(pot, kin, r))
        .transpose()?;
    let metadata = TableMetadata {
        m_r: kin.m_r,
        e_r: kin.e_r,
        total_charge: target.total_charge(),
        target_size: target.size(),
        potential: pot.descriptor(),
        born_validity,
    };
    CrossSectionTable::from_samples(thetas.to_vec(), values, ratios, metadata)
}
