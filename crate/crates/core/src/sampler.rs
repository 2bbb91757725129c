//! Inverse-transform sampling of scattering angles.
//!
//! Sampling happens in c = cos θ, where the Rutherford density 1/(1 − c)²
//! has the closed-form antiderivative 1/(1 − c).

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::born::CrossSectionTable;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularSampleSpec {
    pub theta_min: f64,
    pub count: usize,
    pub seed: u64,
}

impl AngularSampleSpec {
    pub fn new(theta_min: f64, count: usize, seed: u64) -> Result<Self> {
        let spec = Self {
            theta_min,
            count,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        const OP: &str = "sampler::AngularSampleSpec";
        if !(self.theta_min > 0.0 && self.theta_min < PI) {
            return Err(Error::domain(
                OP,
                format!("theta_min must lie in (0, pi), got {}", self.theta_min),
            ));
        }
        if self.count == 0 {
            return Err(Error::input(OP, "count must be positive"));
        }
        Ok(())
    }
}

fn generator(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Maps u ∈ [0, 1) to an angle in [θ_min, π].
struct RutherfordInverse {
    cos_min: f64,
    w_minus_half: f64,
    theta_min: f64,
}

impl RutherfordInverse {
    fn new(theta_min: f64) -> Self {
        let cos_min = theta_min.cos();
        Self {
            cos_min,
            w_minus_half: 1.0 / (1.0 - cos_min) - 0.5,
            theta_min,
        }
    }

    fn angle(&self, u: f64) -> f64 {
        let c = 1.0 - 1.0 / (0.5 + u * self.w_minus_half);
        c.clamp(-1.0, self.cos_min).acos().clamp(self.theta_min, PI)
    }
}

fn draw_rutherford(inv: &RutherfordInverse, rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| inv.angle(rng.random::<f64>())).collect()
}

/// Draws from dσ/dcosθ ∝ 1/(1 − cos θ)² on [θ_min, π]. The CDF measured
/// from the back angle is F(c) = (1/(1 − c) − ½)/(1/(1 − cos θ_min) − ½).
pub fn sample_rutherford(spec: &AngularSampleSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let inv = RutherfordInverse::new(spec.theta_min);
    Ok(draw_rutherford(
        &inv,
        &mut generator(spec.seed, 0),
        spec.count,
    ))
}

/// Same distribution split over `workers` threads. Worker w draws from
/// stream w + 1 of the seed; the first `count % workers` workers take one
/// extra sample. Output is concatenated in worker order, so it depends on
/// the seed and the worker count but never on scheduling.
pub fn sample_rutherford_parallel(spec: &AngularSampleSpec, workers: usize) -> Result<Vec<f64>> {
    spec.validate()?;
    if workers == 0 {
        return Err(Error::input(
            "sampler::sample_rutherford_parallel",
            "need at least one worker",
        ));
    }
    let inv = RutherfordInverse::new(spec.theta_min);
    let base = spec.count / workers;
    let extra = spec.count % workers;
    let parts: Vec<Vec<f64>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let n = base + usize::from(w < extra);
                let inv = &inv;
                s.spawn(move || draw_rutherford(inv, &mut generator(spec.seed, w as u64 + 1), n))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sampler worker panicked"))
            .collect()
    });
    Ok(parts.concat())
}

/// Inverse-samples a tabulated distribution. The table is read as a density
/// in cos θ, integrated by the trapezoid rule between nodes, and the
/// resulting piecewise-linear CDF is inverted.
pub fn sample_general(table: &CrossSectionTable, count: usize, seed: u64) -> Result<Vec<f64>> {
    const OP: &str = "sampler::sample_general";
    if table.len() < 2 {
        return Err(Error::input(OP, "table needs at least two angles"));
    }
    if count == 0 {
        return Err(Error::input(OP, "count must be positive"));
    }
    let mut nodes: Vec<(f64, f64)> = Vec::with_capacity(table.len());
    for (&theta, &v) in table.theta.iter().zip(&table.dsigma_dcostheta) {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::input(
                OP,
                format!("table value at theta = {theta} is {v}"),
            ));
        }
        nodes.push((theta.cos(), v));
    }
    nodes.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut cdf = Vec::with_capacity(nodes.len());
    cdf.push(0.0);
    let mut acc = 0.0;
    for pair in nodes.windows(2) {
        acc += 0.5 * (pair[0].1 + pair[1].1) * (pair[1].0 - pair[0].0);
        cdf.push(acc);
    }
    if !(acc > 0.0 && acc.is_finite()) {
        return Err(Error::input(OP, "table integrates to zero"));
    }

    let mut rng = generator(seed, 0);
    let out = (0..count)
        .map(|_| {
            let target = rng.random::<f64>() * acc;
            // first node with cdf > target; segment [i-1, i] has positive mass
            let i = cdf
                .partition_point(|&f| f <= target)
                .clamp(1, cdf.len() - 1);
            let (c0, c1) = (nodes[i - 1].0, nodes[i].0);
            let frac = (target - cdf[i - 1]) / (cdf[i] - cdf[i - 1]);
            (c0 + frac.clamp(0.0, 1.0) * (c1 - c0))
                .clamp(-1.0, 1.0)
                .acos()
        })
        .collect();
    Ok(out)
}

/// Counts of cos θ over `bins` equal-width bins spanning [lo, hi].
/// Values outside the range are dropped; hi itself falls in the last bin.
pub fn cos_histogram(angles: &[f64], lo: f64, hi: f64, bins: usize) -> Result<Vec<u64>> {
    if bins == 0 || !(hi > lo) {
        return Err(Error::input(
            "sampler::cos_histogram",
            "need bins > 0 and hi > lo",
        ));
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    for &theta in angles {
        let c = theta.cos();
        if c < lo || c > hi {
            continue;
        }
        let b = (((c - lo) / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::born::TableMetadata;

    fn table(theta: Vec<f64>, values: Vec<f64>) -> CrossSectionTable {
        let n = theta.len();
        CrossSectionTable {
            theta,
            dsigma_dcostheta: values,
            kernel_ratio: vec![1.0; n],
            metadata: TableMetadata {
                m_r: 1.0,
                e_r: 1.0,
                total_charge: 1.0,
                target_size: 0.0,
                potential: "test".into(),
                born_validity: None,
            },
        }
    }

    #[test]
    fn support_and_determinism() {
        let spec = AngularSampleSpec::new(0.3, 10_000, 7).unwrap();
        let a = sample_rutherford(&spec).unwrap();
        assert_eq!(a, sample_rutherford(&spec).unwrap());
        assert!(a.iter().all(|&t| (0.3..=PI).contains(&t)));
    }

    #[test]
    fn inverse_endpoints() {
        let inv = RutherfordInverse::new(0.5);
        assert!((inv.angle(0.0) - PI).abs() < 1e-7);
        assert!((inv.angle(1.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn degenerate_support() {
        let spec = AngularSampleSpec::new(PI - 1e-6, 1000, 1).unwrap();
        assert!(sample_rutherford(&spec)
            .unwrap()
            .iter()
            .all(|&t| t >= spec.theta_min && t <= PI && PI - t < 1.1e-6));
    }

    #[test]
    fn bad_specs() {
        assert!(AngularSampleSpec::new(0.0, 10, 0).is_err());
        assert!(AngularSampleSpec::new(PI, 10, 0).is_err());
        assert!(AngularSampleSpec::new(0.1, 0, 0).is_err());
        let spec = AngularSampleSpec::new(0.1, 10, 0).unwrap();
        assert!(sample_rutherford_parallel(&spec, 0).is_err());
    }

    #[test]
    fn parallel_is_reproducible_and_sized() {
        let spec = AngularSampleSpec::new(0.4, 10_001, 99).unwrap();
        let a = sample_rutherford_parallel(&spec, 4).unwrap();
        assert_eq!(a.len(), 10_001);
        assert_eq!(a, sample_rutherford_parallel(&spec, 4).unwrap());
        assert_ne!(a[..100], sample_rutherford(&spec).unwrap()[..100]);
    }

    #[test]
    fn general_rejects_zero_table() {
        let t = table(vec![0.1, 1.0, 2.0], vec![0.0; 3]);
        assert_eq!(
            sample_general(&t, 10, 0).unwrap_err().code(),
            "invalid_input"
        );
        let t = table(vec![0.1, 1.0], vec![1.0, -1.0]);
        assert!(sample_general(&t, 10, 0).is_err());
    }

    #[test]
    fn general_spike_stays_next_to_its_node() {
        let theta = vec![0.5, 1.0, 1.5, 2.0, 2.5];
        let t = table(theta, vec![0.0, 0.0, 3.0, 0.0, 0.0]);
        let s = sample_general(&t, 5000, 3).unwrap();
        assert!(s.iter().all(|&x| (1.0..=2.0).contains(&x)));
    }

    #[test]
    fn histogram_edges() {
        let angles = [0.0, PI, PI / 2.0];
        assert_eq!(cos_histogram(&angles, -1.0, 1.0, 2).unwrap(), vec![1, 2]);
        assert!(cos_histogram(&angles, 1.0, -1.0, 2).is_err());
    }
}
