//! Rutherford scattering as the Coulomb case of the coherent Born formula,
//! plus the scintillation-count comparison across foil materials.

use std::f64::consts::PI;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::UnitSystem;

/// Scintillation counts for α scattering off foils of different materials.
pub const TABLE1_CSV: &str = include_str!("../data/table1.csv");

/// dσ/d(cos θ) = (Z g)² π / (8 E² sin⁴(θ/2)) with g = e²/(2πε₀), in the
/// fixed-target approximation E_r ≈ E_α, θ ≈ θ_α. Energy in, area out,
/// both in the internal units of `units`.
pub fn rutherford_differential(
    z: u32,
    e_alpha: f64,
    theta: f64,
    units: &UnitSystem,
) -> Result<f64> {
    const OP: &str = "rutherford::rutherford_differential";
    if !(e_alpha > 0.0 && e_alpha.is_finite()) {
        return Err(Error::domain(
            OP,
            format!("energy must be positive, got {e_alpha}"),
        ));
    }
    if !(theta > 0.0 && theta <= PI) {
        return Err(Error::domain(
            OP,
            format!("angle must lie in (0, pi], got {theta}; the cross section diverges at 0"),
        ));
    }
    let g = units.alpha_proton_coupling();
    // Z² is an exact integer, kept as the last factor so charge scaling
    // costs a single rounding
    let z2 = f64::from(z) * f64::from(z);
    let s2 = (theta / 2.0).sin().powi(2);
    Ok(z2 * (g * g * PI / (8.0 * e_alpha * e_alpha * s2 * s2)))
}

/// 1/√A: the thickness an α particle crosses before absorption scales this way.
pub fn absorption_correction(mass_number: u32) -> Result<f64> {
    if mass_number == 0 {
        return Err(Error::domain(
            "rutherford::absorption_correction",
            "mass number must be at least 1",
        ));
    }
    Ok(1.0 / f64::from(mass_number).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RutherfordRecord {
    pub material: String,
    #[serde(rename = "A")]
    pub mass_number: u32,
    #[serde(rename = "Z")]
    pub atomic_number: u32,
    /// Scintillations per minute.
    #[serde(rename = "N")]
    pub scintillations: f64,
}

impl RutherfordRecord {
    pub fn validate(&self) -> Result<()> {
        const OP: &str = "rutherford::RutherfordRecord::validate";
        if self.atomic_number < 1 || self.mass_number < self.atomic_number {
            return Err(Error::input(
                OP,
                format!(
                    "{}: need A >= Z >= 1, got A = {}, Z = {}",
                    self.material, self.mass_number, self.atomic_number
                ),
            ));
        }
        if !(self.scintillations > 0.0 && self.scintillations.is_finite()) {
            return Err(Error::input(
                OP,
                format!("{}: scintillation count must be positive", self.material),
            ));
        }
        Ok(())
    }

    /// N·√A/Z².
    pub fn statistic(&self) -> f64 {
        let z = f64::from(self.atomic_number);
        self.scintillations
            / absorption_correction(self.mass_number).expect("validated A >= 1")
            / (z * z)
    }
}

/// Parse records from CSV with header `material,A,Z,N`.
pub fn read_records<R: Read>(reader: R) -> Result<Vec<RutherfordRecord>> {
    const OP: &str = "rutherford::read_records";
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    for row in rdr.deserialize() {
        let rec: RutherfordRecord = row.map_err(|e| Error::input(OP, e.to_string()))?;
        rec.validate()?;
        out.push(rec);
    }
    Ok(out)
}

/// The built-in scintillation table, in its published row order.
pub fn table1_records() -> Vec<RutherfordRecord> {
    read_records(TABLE1_CSV.as_bytes()).expect("embedded table is well formed")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub material: String,
    pub statistic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Analysis {
    pub rows: Vec<Table1Row>,
    pub mean: f64,
    /// max |statistic − mean|
    pub max_deviation: f64,
}

/// N√A/Z² per record, which should be material independent if the counts
/// scale as Z² after the absorption correction.
pub fn table1_analysis(records: &[RutherfordRecord]) -> Result<Table1Analysis> {
    if records.is_empty() {
        return Err(Error::input("rutherford::table1_analysis", "no records"));
    }
    let mut rows = Vec::with_capacity(records.len());
    for r in records {
        r.validate()?;
        rows.push(Table1Row {
            material: r.material.clone(),
            statistic: r.statistic(),
        });
    }
    let mean = rows.iter().map(|r| r.statistic).sum::<f64>() / rows.len() as f64;
    let max_deviation = rows
        .iter()
        .map(|r| (r.statistic - mean).abs())
        .fold(0.0, f64::max);
    Ok(Table1Analysis {
        rows,
        mean,
        max_deviation,
    })
}
