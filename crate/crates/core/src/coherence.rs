//! Admissibility checks for coherent scattering.
//!
//! "Much smaller than" is read as `ratio ≤ ε` (boundary inclusive), with
//! ε = 0.1 unless the caller says otherwise. Uncertainty relations use
//! Δx·Δp ≥ ħ/2.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potentials::Potential;
use crate::quadrature::{integrate, Tolerance};
use crate::units::Kinematics;

pub const DEFAULT_EPSILON: f64 = 0.1;

fn check_epsilon(op: &'static str, epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(
            op,
            format!("epsilon must lie in (0, 1), got {epsilon}"),
        ))
    }
}

fn check_non_negative(op: &'static str, what: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(
            op,
            format!("{what} must be non-negative and finite, got {x}"),
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub coherent: bool,
    pub ratio: f64,
}

/// Plane wave of relative momentum `p_r` on a target of size `length`:
/// coherent when 2|p_r|L/ħ ≤ ε, i.e. when the largest momentum transfer
/// cannot resolve the target.
pub fn plane_wave_coherent(p_r: f64, length: f64, epsilon: f64) -> Result<Verdict> {
    const OP: &str = "coherence::plane_wave_coherent";
    check_non_negative(OP, "momentum", p_r)?;
    check_non_negative(OP, "length", length)?;
    check_epsilon(OP, epsilon)?;
    let ratio = 2.0 * p_r * length;
    Ok(Verdict {
        coherent: ratio <= epsilon,
        ratio,
    })
}

/// Mean momentum magnitude and momentum spread of a single-particle packet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WavePacket {
    pub mean_momentum: f64,
    pub momentum_spread: f64,
}

impl WavePacket {
    pub fn new(mean_momentum: f64, momentum_spread: f64) -> Result<Self> {
        const OP: &str = "coherence::WavePacket::new";
        check_non_negative(OP, "mean momentum", mean_momentum)?;
        check_non_negative(OP, "momentum spread", momentum_spread)?;
        Ok(WavePacket {
            mean_momentum,
            momentum_spread,
        })
    }

    /// ⟨p̂²⟩ = Δp² + ⟨p⟩².
    pub fn second_moment(&self) -> f64 {
        self.momentum_spread.powi(2) + self.mean_momentum.powi(2)
    }

    /// Position spread of a minimal-uncertainty packet, ħ/(2Δp); `None`
    /// when Δp = 0 (unbounded).
    pub fn minimal_position_spread(&self) -> Option<f64> {
        (self.momentum_spread > 0.0).then(|| 0.5 / self.momentum_spread)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketVerdict {
    pub coherent: bool,
    /// (|⟨p⟩| + Δp)·L/ħ
    pub ratio: f64,
    /// ħ/(2Δp), or `None` when unbounded.
    pub position_spread: Option<f64>,
    /// Whether Δx ≥ L/(2ε), the position-space reading of the same bound.
    pub position_coherent: bool,
}

/// Packet version of the plane-wave condition: the largest significant
/// momentum |⟨p⟩| + Δp must satisfy (|⟨p⟩| + Δp)L/ħ ≤ ε.
pub fn packet_coherent(wp: &WavePacket, length: f64, epsilon: f64) -> Result<PacketVerdict> {
    const OP: &str = "coherence::packet_coherent";
    check_non_negative(OP, "mean momentum", wp.mean_momentum)?;
    check_non_negative(OP, "momentum spread", wp.momentum_spread)?;
    check_non_negative(OP, "length", length)?;
    check_epsilon(OP, epsilon)?;
    let ratio = (wp.mean_momentum + wp.momentum_spread) * length;
    let position_spread = wp.minimal_position_spread();
    let position_coherent = position_spread.is_none_or(|dx| 2.0 * epsilon * dx >= length);
    Ok(PacketVerdict {
        coherent: ratio <= epsilon,
        ratio,
        position_spread,
        position_coherent,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleMember {
    pub weight: f64,
    pub packet: WavePacket,
    /// Δx of the member, needed only for the decomposition check.
    #[serde(default)]
    pub position_spread: Option<f64>,
}

/// Statistical mixture Σ λᵢ |ψᵢ⟩⟨ψᵢ| of wave packets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EnsembleSpec", into = "EnsembleSpec")]
pub struct PacketEnsemble {
    members: Vec<EnsembleMember>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub members: Vec<EnsembleMember>,
}

impl TryFrom<EnsembleSpec> for PacketEnsemble {
    type Error = Error;
    fn try_from(spec: EnsembleSpec) -> Result<Self> {
        PacketEnsemble::new(spec.members)
    }
}

impl From<PacketEnsemble> for EnsembleSpec {
    fn from(e: PacketEnsemble) -> Self {
        EnsembleSpec { members: e.members }
    }
}

pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

impl PacketEnsemble {
    pub fn new(members: Vec<EnsembleMember>) -> Result<Self> {
        const OP: &str = "coherence::PacketEnsemble::new";
        if members.is_empty() {
            return Err(Error::input(OP, "ensemble must have at least one member"));
        }
        for m in &members {
            if !(m.weight > 0.0 && m.weight.is_finite()) {
                return Err(Error::input(
                    OP,
                    format!("weights must be positive, got {}", m.weight),
                ));
            }
            check_non_negative(OP, "mean momentum", m.packet.mean_momentum)?;
            check_non_negative(OP, "momentum spread", m.packet.momentum_spread)?;
            if let Some(dx) = m.position_spread {
                if !(dx > 0.0 && dx.is_finite()) {
                    return Err(Error::input(
                        OP,
                        format!("position spreads must be positive, got {dx}"),
                    ));
                }
            }
        }
        let total: f64 = members.iter().map(|m| m.weight).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::input(
                OP,
                format!("weights sum to {total}, expected 1"),
            ));
        }
        Ok(PacketEnsemble { members })
    }

    pub fn members(&self) -> &[EnsembleMember] {
        &self.members
    }

    /// Tr[p̂² ρ̂] = Σ λᵢ (Δpᵢ² + ⟨p⟩ᵢ²).
    pub fn second_moment(&self) -> f64 {
        self.members
            .iter()
            .map(|m| m.weight * m.packet.second_moment())
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleVerdict {
    pub coherent: bool,
    pub second_moment: f64,
    /// ⟨p̂²⟩_ρ L²/ħ², compared against ε².
    pub ratio: f64,
}

/// A mixture scatters coherently when ⟨p̂²⟩_ρ L²/ħ² ≤ ε².
pub fn ensemble_coherent(
    ens: &PacketEnsemble,
    length: f64,
    epsilon: f64,
) -> Result<EnsembleVerdict> {
    const OP: &str = "coherence::ensemble_coherent";
    check_non_negative(OP, "length", length)?;
    check_epsilon(OP, epsilon)?;
    let second_moment = ens.second_moment();
    let ratio = second_moment * length * length;
    Ok(EnsembleVerdict {
        coherent: ratio <= epsilon * epsilon,
        second_moment,
        ratio,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecompositionCheck {
    /// True when every member is smaller than the target (Δxᵢ < L).
    pub applicable: bool,
    /// Whether ⟨p̂²⟩_ρ > ħ²/(4L²); vacuously true when not applicable.
    pub holds: bool,
    pub second_moment: f64,
    /// ħ²/(4L²)
    pub bound: f64,
}

/// A mixture of packets each narrower than the target must carry
/// ⟨p̂²⟩_ρ > ħ²/(4L²), since Δpᵢ ≥ ħ/(2Δxᵢ) > ħ/(2L) for every member. Such
/// a mixture can therefore never meet the coherent-ensemble condition.
pub fn small_packet_decomposition_violates(
    ens: &PacketEnsemble,
    length: f64,
) -> Result<DecompositionCheck> {
    const OP: &str = "coherence::small_packet_decomposition_violates";
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::domain(
            OP,
            format!("length must be positive, got {length}"),
        ));
    }
    let spreads = ens
        .members
        .iter()
        .map(|m| m.position_spread)
        .collect::<Option<Vec<f64>>>()
        .ok_or_else(|| Error::input(OP, "every member needs a position spread"))?;
    let applicable = spreads.iter().all(|&dx| dx < length);
    let second_moment = ens.second_moment();
    let bound = 0.25 / (length * length);
    Ok(DecompositionCheck {
        applicable,
        holds: !applicable || second_moment > bound,
        second_moment,
        bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Validity {
    Valid,
    Marginal,
    Invalid,
}

impl Validity {
    fn from_ratio(ratio: f64) -> Self {
        if ratio <= 0.1 {
            Validity::Valid
        } else if ratio <= 1.0 {
            Validity::Marginal
        } else {
            Validity::Invalid
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BornValidity {
    pub verdict: Validity,
    pub ratio: f64,
    pub mean_potential: f64,
}

/// Perturbative estimate V̄R/ħ ≪ ħ/(λ_r m_r), with V̄ the volume average of
/// V over a sphere of radius `extent`. The returned ratio is
/// |V̄|·R·λ_r·m_r/ħ²; ≤ 0.1 is valid, ≤ 1 marginal, otherwise invalid.
pub fn born_validity(pot: &Potential, kin: &Kinematics, extent: f64) -> Result<BornValidity> {
    const OP: &str = "coherence::born_validity";
    if !(extent > 0.0 && extent.is_finite()) {
        return Err(Error::domain(
            OP,
            format!("extent must be positive, got {extent}"),
        ));
    }
    let volume_integral = integrate(
        |r| Ok(r * r * pot.value(r)?),
        0.0,
        extent,
        Tolerance {
            abs: 0.0,
            rel: 1e-10,
            max_intervals: 2000,
        },
        OP,
    )?
    .value;
    let mean_potential = 3.0 * volume_integral / extent.powi(3);
    let p = kin.p_r.norm();
    let ratio = if mean_potential == 0.0 {
        0.0
    } else if p == 0.0 {
        f64::INFINITY
    } else {
        mean_potential.abs() * extent * (2.0 * PI / p) * kin.m_r
    };
    Ok(BornValidity {
        verdict: Validity::from_ratio(ratio),
        ratio,
        mean_potential,
    })
}

/// 1D analogue for a delta array: perturbative when β = kħ²/(mα) ≫ 1,
/// i.e. ratio 1/β.
pub fn delta_born_validity(beta: f64) -> Result<BornValidity> {
    if !(beta > 0.0) {
        return Err(Error::domain(
            "coherence::delta_born_validity",
            format!("beta must be positive, got {beta}"),
        ));
    }
    let ratio = 1.0 / beta;
    Ok(BornValidity {
        verdict: Validity::from_ratio(ratio),
        ratio,
        mean_potential: f64::NAN,
    })
}
