//! One runner per subcommand. Each returns the bytes to emit.

use std::f64::consts::PI;
use std::fs::File;
use std::path::{Path, PathBuf};

use cohscat::born::{cross_section_table, CrossSectionTable, GaussianTarget, TableMetadata};
use cohscat::coherence::{
    ensemble_coherent, packet_coherent, plane_wave_coherent, small_packet_decomposition_violates,
    PacketEnsemble, Validity, WavePacket, DEFAULT_EPSILON,
};
use cohscat::delta1d::{boundary_condition_solve, transfer_matrix_solve, DeltaArray};
use cohscat::potentials::Potential;
use cohscat::rutherford::{read_records, rutherford_differential, table1_analysis, table1_records};
use cohscat::sampler::{
    cos_histogram, sample_general, sample_rutherford, sample_rutherford_parallel, AngularSampleSpec,
};
use cohscat::units::{Kinematics, UnitSystem, Vec3, BARN_SI, ELECTRONVOLT_SI, FEMTOMETRE_SI};
use serde::{Deserialize, Serialize};

use crate::args::{
    AngleGrid, AngleUnit, AreaUnit, BornArgs, CoherenceArgs, Delta1dArgs, Format, GlobalArgs,
    PotentialKind, RutherfordArgs, SampleArgs, Solver, Table1Args,
};
use crate::failure::CliError;
use crate::output::{json_bytes, write_atomic, Cell, Table};

/// Bytes for the main output plus an optional metadata sidecar.
pub struct Rendered {
    pub body: Vec<u8>,
    pub sidecar: Option<Vec<u8>>,
}

impl From<Vec<u8>> for Rendered {
    fn from(body: Vec<u8>) -> Self {
        Rendered {
            body,
            sidecar: None,
        }
    }
}

struct Ctx {
    format: Format,
    angle: AngleUnit,
    epsilon: f64,
}

impl Ctx {
    fn from(global: &GlobalArgs) -> Self {
        Ctx {
            format: global.format.unwrap_or(Format::Csv),
            angle: global.angle_unit.unwrap_or(AngleUnit::Rad),
            epsilon: global.epsilon.unwrap_or(DEFAULT_EPSILON),
        }
    }

    fn to_rad(&self, x: f64) -> f64 {
        match self.angle {
            AngleUnit::Rad => x,
            AngleUnit::Deg => x.to_radians(),
        }
    }

    fn in_unit(&self, x: f64) -> f64 {
        match self.angle {
            AngleUnit::Rad => x,
            AngleUnit::Deg => x.to_degrees(),
        }
    }
}

fn required<T: Copy>(value: Option<T>, op: &str, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::input(op, format!("--{flag} is required")))
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Angles from an explicit list or a range, as (value in the selected
/// unit, radians) pairs; `default` is (min, max, points) in radians. The
/// first element is echoed to the output untouched so that requested
/// angles print exactly as given.
fn angle_grid(ctx: &Ctx, grid: &AngleGrid, default: (f64, f64, usize)) -> Vec<(f64, f64)> {
    let shown = match &grid.theta {
        Some(list) => list.clone(),
        None => {
            let lo = grid.theta_min.unwrap_or_else(|| ctx.in_unit(default.0));
            let hi = grid.theta_max.unwrap_or_else(|| ctx.in_unit(default.1));
            linspace(lo, hi, grid.theta_points.unwrap_or(default.2))
        }
    };
    shown.into_iter().map(|t| (t, ctx.to_rad(t))).collect()
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path, op: &str) -> Result<T, CliError> {
    let file =
        File::open(path).map_err(|e| CliError::input(op, format!("{}: {e}", path.display())))?;
    serde_json::from_reader(file)
        .map_err(|e| CliError::input(op, format!("{}: {e}", path.display())))
}

pub fn delta1d(global: &GlobalArgs, a: &Delta1dArgs) -> Result<Rendered, CliError> {
    const OP: &str = "cli::delta1d";
    let ctx = Ctx::from(global);
    let n = a.n.unwrap_or(2);
    let arr = match a.beta {
        Some(beta) => {
            if a.strength.is_some() || a.spacing.is_some() || a.mass.is_some() {
                return Err(CliError::input(
                    OP,
                    "--beta/--ka cannot be combined with --strength, --spacing or --mass",
                ));
            }
            if !(beta > 0.0 && beta.is_finite()) {
                return Err(CliError::input(
                    OP,
                    format!("--beta must be positive, got {beta}"),
                ));
            }
            DeltaArray::uniform(n, required(a.ka, OP, "ka")?, 1.0 / beta, 1.0)?
        }
        None => {
            if a.ka.is_some() {
                return Err(CliError::input(OP, "--ka needs --beta"));
            }
            let strength = required(a.strength, OP, "strength (or --beta)")?;
            DeltaArray::uniform(n, a.spacing.unwrap_or(1.0), strength, a.mass.unwrap_or(1.0))?
        }
    };
    let ks = match (&a.k, a.k_min, a.k_max) {
        (Some(list), _, _) => list.clone(),
        (None, Some(lo), Some(hi)) => linspace(lo, hi, a.k_points.unwrap_or(100)),
        (None, None, None) => vec![1.0],
        _ => return Err(CliError::input(OP, "--k-min and --k-max go together")),
    };
    let solver = a.solver.unwrap_or(Solver::Transfer);
    log::info!(
        "delta1d: {} sites, {} wave numbers, {solver:?} solver",
        arr.len(),
        ks.len()
    );

    let mut table = Table::new(vec!["k", "R", "T"]);
    for k in ks {
        let amp = match solver {
            Solver::Transfer => transfer_matrix_solve(&arr, k)?,
            Solver::Boundary => boundary_condition_solve(&arr, k)?,
        };
        table.push(vec![
            k.into(),
            amp.reflectivity.into(),
            amp.transmissivity.into(),
        ]);
    }
    Ok(table.render(ctx.format)?.into())
}

fn build_potential(a: &BornArgs) -> Result<Potential, CliError> {
    if let Some(path) = &a.potential_file {
        let pot: Potential = read_json(path, "cli::born")?;
        pot.validate()?;
        return Ok(pot);
    }
    let g = a.coupling.unwrap_or(1.0);
    Ok(match a.potential.unwrap_or(PotentialKind::Coulomb) {
        PotentialKind::Coulomb => Potential::coulomb(g),
        PotentialKind::Yukawa => Potential::yukawa(g, a.screening_length.unwrap_or(1.0))?,
        PotentialKind::Gaussian => Potential::gaussian(g, a.width.unwrap_or(1.0))?,
    })
}

/// Born table as written in JSON, with angles in the declared unit.
#[derive(Debug, Serialize, Deserialize)]
pub struct BornJson {
    pub angle_unit: AngleUnit,
    pub theta: Vec<f64>,
    pub dsigma_dcostheta: Vec<f64>,
    pub kernel_ratio: Vec<f64>,
    pub metadata: TableMetadata,
}

pub fn born(global: &GlobalArgs, a: &BornArgs) -> Result<Rendered, CliError> {
    let ctx = Ctx::from(global);
    let pot = build_potential(a)?;
    let target = match (&a.target, &a.charges) {
        (Some(path), _) => read_json::<GaussianTarget>(path, "cli::born")?,
        (None, Some(q)) => GaussianTarget::point(q)?,
        (None, None) => GaussianTarget::point(&[1.0])?,
    };
    let (m_d, m_t, e_r) = (
        a.m_d.unwrap_or(1.0),
        a.m_target.unwrap_or(1.0),
        a.energy.unwrap_or(1.0),
    );
    if !(m_d > 0.0 && m_t > 0.0 && e_r > 0.0) {
        return Err(CliError::input(
            "cli::born",
            "masses and energy must be positive",
        ));
    }
    // target at rest: p_r = p_d M/(m + M)
    let m_r = m_d * m_t / (m_d + m_t);
    let p_d = (2.0 * m_r * e_r).sqrt() * (m_d + m_t) / m_t;
    let kin = Kinematics::new(m_d, m_t, Vec3::new(0.0, 0.0, p_d), Vec3::ZERO)?;
    let grid = angle_grid(&ctx, &a.angles, (PI / 180.0, PI, 180));
    let (shown, thetas): (Vec<f64>, Vec<f64>) = grid.into_iter().unzip();
    log::info!(
        "born: {} on {} angles, E_r = {}",
        pot.descriptor(),
        thetas.len(),
        kin.e_r
    );

    let table = cross_section_table(&pot, &kin, &target, &thetas, a.born_extent)?;
    if let Some(v) = &table.metadata.born_validity {
        if v.verdict != Validity::Valid {
            log::warn!(
                "Born approximation is {:?} here (ratio {:.3e}); results are indicative only",
                v.verdict,
                v.ratio
            );
        }
    }
    match ctx.format {
        Format::Json => Ok(json_bytes(&BornJson {
            angle_unit: ctx.angle,
            theta: shown,
            dsigma_dcostheta: table.dsigma_dcostheta.clone(),
            kernel_ratio: table.kernel_ratio.clone(),
            metadata: table.metadata.clone(),
        })?
        .into()),
        Format::Csv => {
            let mut out = Table::new(vec!["theta", "dsigma_dcostheta", "kernel_ratio"]);
            for ((&t, &v), &k) in shown
                .iter()
                .zip(&table.dsigma_dcostheta)
                .zip(&table.kernel_ratio)
            {
                out.push(vec![t.into(), v.into(), k.into()]);
            }
            Ok(Rendered {
                body: out.to_csv()?,
                sidecar: Some(json_bytes(&table.metadata)?),
            })
        }
    }
}

pub fn coherence(global: &GlobalArgs, a: &CoherenceArgs) -> Result<Rendered, CliError> {
    const OP: &str = "cli::coherence";
    let ctx = Ctx::from(global);
    let length = required(a.length, OP, "length")?;
    let eps = ctx.epsilon;
    let table = if let Some(path) = &a.ensemble {
        let ens: PacketEnsemble = read_json(path, OP)?;
        let v = ensemble_coherent(&ens, length, eps)?;
        let mut t = Table::new(vec![
            "mode",
            "coherent",
            "ratio",
            "epsilon",
            "second_moment",
            "decomposition_applicable",
            "decomposition_holds",
        ]);
        let (applicable, holds) = if ens.members().iter().all(|m| m.position_spread.is_some()) {
            let d = small_packet_decomposition_violates(&ens, length)?;
            (Cell::Bool(d.applicable), Cell::Bool(d.holds))
        } else {
            (Cell::Text("n/a".into()), Cell::Text("n/a".into()))
        };
        t.push(vec![
            Cell::Text("ensemble".into()),
            v.coherent.into(),
            v.ratio.into(),
            (eps * eps).into(),
            v.second_moment.into(),
            applicable,
            holds,
        ]);
        t
    } else {
        let p = required(a.p_r, OP, "p-r")?;
        if let Some(dp) = a.momentum_spread {
            let v = packet_coherent(&WavePacket::new(p, dp)?, length, eps)?;
            let mut t = Table::new(vec![
                "mode",
                "coherent",
                "ratio",
                "epsilon",
                "position_spread",
                "position_coherent",
            ]);
            t.push(vec![
                Cell::Text("packet".into()),
                v.coherent.into(),
                v.ratio.into(),
                eps.into(),
                v.position_spread.unwrap_or(f64::INFINITY).into(),
                v.position_coherent.into(),
            ]);
            t
        } else {
            let v = plane_wave_coherent(p, length, eps)?;
            let mut t = Table::new(vec!["mode", "coherent", "ratio", "epsilon"]);
            t.push(vec![
                Cell::Text("plane_wave".into()),
                v.coherent.into(),
                v.ratio.into(),
                eps.into(),
            ]);
            t
        }
    };
    Ok(table.render(ctx.format)?.into())
}

pub fn rutherford(global: &GlobalArgs, a: &RutherfordArgs) -> Result<Rendered, CliError> {
    const OP: &str = "cli::rutherford";
    if a.table1 {
        return table1(
            global,
            &Table1Args {
                table1_path: a.table1_path.clone(),
            },
        );
    }
    let ctx = Ctx::from(global);
    let z = required(a.z, OP, "z")?;
    let mev = required(a.energy, OP, "energy")?;
    let units = UnitSystem::nuclear();
    let e = units.energy_to_internal(mev * 1e6 * ELECTRONVOLT_SI);
    let per_area = match a.area_unit.unwrap_or(AreaUnit::Barn) {
        AreaUnit::Barn => BARN_SI,
        AreaUnit::Fm2 => FEMTOMETRE_SI * FEMTOMETRE_SI,
        AreaUnit::M2 => 1.0,
    };
    let mut table = Table::new(vec!["theta", "dsigma_dcostheta"]);
    for (shown, theta) in angle_grid(&ctx, &a.angles, (PI / 36.0, PI, 36)) {
        let sigma = rutherford_differential(z, e, theta, &units)?;
        table.push(vec![
            shown.into(),
            (units.area_to_si(sigma) / per_area).into(),
        ]);
    }
    Ok(table.render(ctx.format)?.into())
}

#[derive(Serialize)]
struct Table1Json {
    rows: serde_json::Value,
    mean: f64,
    max_deviation: f64,
}

pub fn table1(global: &GlobalArgs, a: &Table1Args) -> Result<Rendered, CliError> {
    let ctx = Ctx::from(global);
    let records = match &a.table1_path {
        Some(path) => {
            let file = File::open(path)
                .map_err(|e| CliError::input("cli::table1", format!("{}: {e}", path.display())))?;
            read_records(file)?
        }
        None => table1_records(),
    };
    let analysis = table1_analysis(&records)?;
    let mut table = Table::new(vec!["material", "A", "Z", "N", "n_sqrt_a_over_z2"]);
    for (rec, row) in records.iter().zip(&analysis.rows) {
        table.push(vec![
            Cell::Text(rec.material.clone()),
            Cell::Int(rec.mass_number.into()),
            Cell::Int(rec.atomic_number.into()),
            rec.scintillations.into(),
            row.statistic.into(),
        ]);
    }
    match ctx.format {
        Format::Csv => Ok(table.to_csv()?.into()),
        Format::Json => Ok(json_bytes(&Table1Json {
            rows: table.to_json_value(),
            mean: analysis.mean,
            max_deviation: analysis.max_deviation,
        })?
        .into()),
    }
}

fn load_table(path: &Path) -> Result<CrossSectionTable, CliError> {
    let raw: BornJson = read_json(path, "cli::sample")?;
    let theta = raw
        .theta
        .iter()
        .map(|&t| match raw.angle_unit {
            AngleUnit::Rad => t,
            AngleUnit::Deg => t.to_radians(),
        })
        .collect();
    Ok(CrossSectionTable::from_samples(
        theta,
        raw.dsigma_dcostheta,
        raw.kernel_ratio,
        raw.metadata,
    )?)
}

pub fn sample(global: &GlobalArgs, a: &SampleArgs) -> Result<Rendered, CliError> {
    const OP: &str = "cli::sample";
    let ctx = Ctx::from(global);
    let count = a.count.unwrap_or(100_000);
    let seed = a.seed.unwrap_or(0);
    let (angles, cos_range) = match &a.table {
        Some(path) => {
            let table = load_table(path)?;
            let cos: Vec<f64> = table.theta.iter().map(|t| t.cos()).collect();
            let lo = cos.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = cos.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            (sample_general(&table, count, seed)?, (lo, hi))
        }
        None => {
            let theta_min = ctx.to_rad(required(a.theta_min, OP, "theta-min")?);
            let spec = AngularSampleSpec::new(theta_min, count, seed)?;
            let angles = match a.workers.unwrap_or(1) {
                1 => sample_rutherford(&spec)?,
                w => sample_rutherford_parallel(&spec, w)?,
            };
            (angles, (-1.0, theta_min.cos()))
        }
    };
    log::info!("sample: {} angles, seed {seed}", angles.len());
    let table = match a.bins {
        Some(bins) => {
            let counts = cos_histogram(&angles, cos_range.0, cos_range.1, bins)?;
            let width = (cos_range.1 - cos_range.0) / bins as f64;
            let mut t = Table::new(vec!["cos_lo", "cos_hi", "count"]);
            for (i, c) in counts.into_iter().enumerate() {
                let lo = cos_range.0 + width * i as f64;
                t.push(vec![lo.into(), (lo + width).into(), Cell::Int(c as i64)]);
            }
            t
        }
        None => {
            let mut t = Table::new(vec!["theta"]);
            for theta in angles {
                t.push(vec![ctx.in_unit(theta).into()]);
            }
            t
        }
    };
    Ok(table.render(ctx.format)?.into())
}

/// `<output>.meta.json` next to the main output.
pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

pub fn write_sidecar(output: &Path, bytes: &[u8]) -> Result<(), CliError> {
    write_atomic(&sidecar_path(output), bytes)
}
