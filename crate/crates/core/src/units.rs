//! Unit convention and two-body kinematics.
//!
//! Everything inside the crate works in units where ħ = 1. A [`UnitSystem`]
//! fixes the SI size of one internal length and one internal mass; the
//! internal energy unit then follows from ħ²/(m·l²).

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s (exact in the 2019 SI).
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// Elementary charge, C (exact).
pub const ELEMENTARY_CHARGE_SI: f64 = 1.602_176_634e-19;
/// Vacuum permittivity, F/m (CODATA 2018).
pub const VACUUM_PERMITTIVITY_SI: f64 = 8.854_187_812_8e-12;
/// Electron mass, kg (CODATA 2018).
pub const ELECTRON_MASS_SI: f64 = 9.109_383_701_5e-31;
/// Bohr radius, m (CODATA 2018).
pub const BOHR_RADIUS_SI: f64 = 5.291_772_109_03e-11;
/// Atomic mass constant, kg (CODATA 2018).
pub const ATOMIC_MASS_UNIT_SI: f64 = 1.660_539_066_60e-27;
/// One electronvolt in joules (exact).
pub const ELECTRONVOLT_SI: f64 = 1.602_176_634e-19;
/// One femtometre in metres.
pub const FEMTOMETRE_SI: f64 = 1e-15;
/// One barn in square metres.
pub const BARN_SI: f64 = 1e-28;

/// Conversion between internal (ħ = 1) units and SI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    length_scale: f64,
    mass_scale: f64,
    energy_scale: f64,
}

impl UnitSystem {
    /// Build a system whose internal length unit is `length_m` metres and
    /// internal mass unit is `mass_kg` kilograms.
    pub fn new(length_m: f64, mass_kg: f64) -> Result<Self> {
        const OP: &str = "units::UnitSystem::new";
        if !(length_m.is_finite() && length_m > 0.0) {
            return Err(Error::domain(
                OP,
                format!("length scale must be positive, got {length_m}"),
            ));
        }
        if !(mass_kg.is_finite() && mass_kg > 0.0) {
            return Err(Error::domain(
                OP,
                format!("mass scale must be positive, got {mass_kg}"),
            ));
        }
        let energy_scale = HBAR_SI * HBAR_SI / (mass_kg * length_m * length_m);
        Ok(UnitSystem {
            length_scale: length_m,
            mass_scale: mass_kg,
            energy_scale,
        })
    }

    /// Hartree atomic units: Bohr radius and electron mass.
    pub fn atomic() -> Self {
        Self::new(BOHR_RADIUS_SI, ELECTRON_MASS_SI).expect("positive constants")
    }

    /// Femtometre and atomic mass unit; the energy unit is about 41.8 MeV.
    pub fn nuclear() -> Self {
        Self::new(FEMTOMETRE_SI, ATOMIC_MASS_UNIT_SI).expect("positive constants")
    }

    /// ħ in internal units.
    pub fn hbar(&self) -> f64 {
        1.0
    }

    pub fn length_scale(&self) -> f64 {
        self.length_scale
    }

    pub fn mass_scale(&self) -> f64 {
        self.mass_scale
    }

    pub fn energy_scale(&self) -> f64 {
        self.energy_scale
    }

    pub fn momentum_scale(&self) -> f64 {
        HBAR_SI / self.length_scale
    }

    pub fn length_to_internal(&self, metres: f64) -> f64 {
        metres / self.length_scale
    }

    pub fn length_to_si(&self, x: f64) -> f64 {
        x * self.length_scale
    }

    pub fn mass_to_internal(&self, kg: f64) -> f64 {
        kg / self.mass_scale
    }

    pub fn mass_to_si(&self, m: f64) -> f64 {
        m * self.mass_scale
    }

    pub fn energy_to_internal(&self, joules: f64) -> f64 {
        joules / self.energy_scale
    }

    pub fn energy_to_si(&self, e: f64) -> f64 {
        e * self.energy_scale
    }

    pub fn momentum_to_internal(&self, kg_m_per_s: f64) -> f64 {
        kg_m_per_s / self.momentum_scale()
    }

    pub fn momentum_to_si(&self, p: f64) -> f64 {
        p * self.momentum_scale()
    }

    pub fn area_to_internal(&self, square_metres: f64) -> f64 {
        square_metres / (self.length_scale * self.length_scale)
    }

    pub fn area_to_si(&self, area: f64) -> f64 {
        area * self.length_scale * self.length_scale
    }

    /// Couplings of a 1/r potential carry dimension energy·length.
    pub fn coupling_to_internal(&self, joule_metres: f64) -> f64 {
        joule_metres / (self.energy_scale * self.length_scale)
    }

    pub fn coupling_to_si(&self, g: f64) -> f64 {
        g * self.energy_scale * self.length_scale
    }

    /// Coulomb coupling q₁q₂/(4πε₀) between an α particle (2e) and a
    /// proton (e), i.e. e²/(2πε₀), in internal units.
    pub fn alpha_proton_coupling(&self) -> f64 {
        let e2 = ELEMENTARY_CHARGE_SI * ELEMENTARY_CHARGE_SI;
        self.coupling_to_internal(e2 / (2.0 * PI * VACUUM_PERMITTIVITY_SI))
    }
}

/// Cartesian 3-vector used for momenta and positions.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3([x, y, z])
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }

    pub fn y(&self) -> f64 {
        self.0[1]
    }

    pub fn z(&self) -> f64 {
        self.0[2]
    }

    pub fn dot(&self, other: &Vec3) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(&self, other: &Vec3) -> Vec3 {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = other.0;
        Vec3([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Unit vector along `self`, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0).then(|| *self * (1.0 / n))
    }

    /// Some unit vector orthogonal to `self` (which must be non-zero).
    /// Deterministic: crosses with the coordinate axis least aligned to `self`.
    pub fn any_orthogonal(&self) -> Vec3 {
        let [x, y, z] = self.0.map(f64::abs);
        let axis = if x <= y && x <= z {
            Vec3::new(1.0, 0.0, 0.0)
        } else if y <= z {
            Vec3::new(0.0, 1.0, 0.0)
        } else {
            Vec3::new(0.0, 0.0, 1.0)
        };
        self.cross(&axis).normalized().unwrap_or(axis)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
        ])
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3([
            self.0[0] - rhs.0[0],
            self.0[1] - rhs.0[1],
            self.0[2] - rhs.0[2],
        ])
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3(self.0.map(|c| -c))
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3(self.0.map(|c| c * s))
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(v: [f64; 3]) -> Self {
        Vec3(v)
    }
}

/// Incident particle + target, split into total and relative motion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kinematics {
    /// Mass of the incident particle.
    pub m_d: f64,
    /// Total mass of the target.
    pub m_target: f64,
    /// Reduced mass (1/M + 1/m_d)⁻¹.
    pub m_r: f64,
    /// Total mass M + m_d.
    pub m_s: f64,
    pub p_d: Vec3,
    /// Momentum of the target's centre of mass.
    pub p_target: Vec3,
    /// Relative momentum (p_d·M − P·m_d)/(m_d + M).
    pub p_r: Vec3,
    /// Total momentum P + p_d.
    pub p_s: Vec3,
    /// Relative kinetic energy |p_r|²/(2 m_r).
    pub e_r: f64,
}

impl Kinematics {
    pub fn new(m_d: f64, m_target: f64, p_d: Vec3, p_target: Vec3) -> Result<Self> {
        const OP: &str = "units::make_kinematics";
        if !(m_d.is_finite() && m_d > 0.0) {
            return Err(Error::domain(
                OP,
                format!("incident mass must be positive, got {m_d}"),
            ));
        }
        if !(m_target.is_finite() && m_target > 0.0) {
            return Err(Error::domain(
                OP,
                format!("target mass must be positive, got {m_target}"),
            ));
        }
        if !(p_d.is_finite() && p_target.is_finite()) {
            return Err(Error::domain(OP, "momenta must be finite"));
        }
        let m_s = m_target + m_d;
        let m_r = 1.0 / (1.0 / m_target + 1.0 / m_d);
        let p_r = (p_d * m_target - p_target * m_d) * (1.0 / m_s);
        let p_s = p_target + p_d;
        let e_r = p_r.norm_sqr() / (2.0 * m_r);
        Ok(Kinematics {
            m_d,
            m_target,
            m_r,
            m_s,
            p_d,
            p_target,
            p_r,
            p_s,
            e_r,
        })
    }

    /// Lab-frame final momenta (p′_d, P′) for a final relative momentum,
    /// with the total momentum conserved.
    pub fn final_lab_momenta(&self, p_r_final: Vec3) -> (Vec3, Vec3) {
        let p_d = p_r_final + self.p_s * (self.m_d / self.m_s);
        let p_target = -p_r_final + self.p_s * (self.m_target / self.m_s);
        (p_d, p_target)
    }
}

/// λ = 2πħ/p.
pub fn de_broglie_wavelength(p: f64) -> Result<f64> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::domain(
            "units::de_broglie_wavelength",
            format!("momentum must be positive and finite (p = {p} gives an unbounded wavelength)"),
        ));
    }
    Ok(2.0 * PI / p)
}

/// Largest elastic momentum transfer |p_d − p′_d|, which is 2|p_r|.
pub fn max_momentum_transfer(kin: &Kinematics) -> f64 {
    2.0 * kin.p_r.norm()
}
