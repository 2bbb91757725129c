mod common;

use std::f64::consts::PI;

use cohscat::born::{CrossSectionTable, TableMetadata};
use cohscat::sampler::{
    cos_histogram, sample_general, sample_rutherford, sample_rutherford_parallel, AngularSampleSpec,
};
use proptest::prelude::*;

fn table(theta: Vec<f64>, values: Vec<f64>) -> CrossSectionTable {
    let n = theta.len();
    CrossSectionTable::from_samples(
        theta,
        values,
        vec![1.0; n],
        TableMetadata {
            m_r: 1.0,
            e_r: 1.0,
            total_charge: 1.0,
            target_size: 0.0,
            potential: "test".into(),
            born_validity: None,
        },
    )
    .unwrap()
}

#[test]
fn histogram_follows_analytic_bin_masses() {
    let theta_min = PI / 6.0;
    let n = 1_000_000;
    let samples = sample_rutherford(&AngularSampleSpec::new(theta_min, n, 5).unwrap()).unwrap();
    let hi = theta_min.cos();
    let counts = cos_histogram(&samples, -1.0, hi, 30).unwrap();
    let width = (hi + 1.0) / 30.0;
    let good = counts
        .iter()
        .enumerate()
        .filter(|&(i, &c)| {
            let c0 = -1.0 + i as f64 * width;
            let expected = n as f64 * common::rutherford_bin_mass(c0, c0 + width, theta_min);
            (c as f64 - expected).abs() < 4.0 * expected.sqrt()
        })
        .count();
    assert!(good >= 29, "{good} of 30 bins within 4σ");
}

#[test]
fn distinct_seeds_look_alike() {
    let a = sample_rutherford(&AngularSampleSpec::new(0.4, 100_000, 1).unwrap()).unwrap();
    let b = sample_rutherford(&AngularSampleSpec::new(0.4, 100_000, 2).unwrap()).unwrap();
    assert_ne!(a, b);
    let d = common::ks_two_sample(&common::sorted(a), &common::sorted(b));
    assert!(d < common::ks_critical_two(100_000, 100_000), "D = {d}");
}

#[test]
fn parallel_workers_follow_the_same_law() {
    let spec = AngularSampleSpec::new(0.4, 200_000, 3).unwrap();
    let par = common::sorted(sample_rutherford_parallel(&spec, 7).unwrap());
    let d = common::ks_one_sample(&par, |t| {
        common::rutherford_survival(t, 0.4).mul_add(-1.0, 1.0)
    });
    assert!(d < common::ks_critical_one(par.len()), "D = {d}");
}

#[test]
fn constant_table_is_isotropic() {
    let theta: Vec<f64> = (1..=50).map(|i| PI * i as f64 / 50.0).collect();
    let lo = theta[0].cos();
    let s = sample_general(&table(theta, vec![2.0; 50]), 200_000, 9).unwrap();
    let mean = s.iter().map(|t| t.cos()).sum::<f64>() / s.len() as f64;
    let mid = 0.5 * (lo - 1.0);
    // uniform on [−1, lo]: σ = (lo + 1)/√12
    let sigma = (lo + 1.0) / 12f64.sqrt();
    assert!(
        (mean - mid).abs() <= 3.0 * sigma / (s.len() as f64).sqrt(),
        "mean {mean} vs {mid}"
    );
}

#[test]
fn tabulated_rutherford_matches_direct_sampler() {
    let theta_min = PI / 6.0;
    let (c_hi, n_nodes) = (theta_min.cos(), 4000);
    // nodes uniform in cos θ so the piecewise-linear density tracks 1/(1 − c)²
    let thetas: Vec<f64> = (0..n_nodes)
        .map(|i| (c_hi - (c_hi + 1.0) * i as f64 / (n_nodes - 1) as f64).acos())
        .collect();
    let values: Vec<f64> = thetas.iter().map(|t| (1.0 - t.cos()).powi(-2)).collect();
    let n = 100_000;
    let a = sample_general(&table(thetas, values), n, 21).unwrap();
    let b = sample_rutherford(&AngularSampleSpec::new(theta_min, n, 22).unwrap()).unwrap();
    let d = common::ks_two_sample(&common::sorted(a), &common::sorted(b));
    assert!(d < common::ks_critical_two(n, n), "D = {d}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn replay_is_exact(theta_min in 1e-3f64..3.0, count in 1usize..5000, seed in any::<u64>()) {
        let spec = AngularSampleSpec::new(theta_min, count, seed).unwrap();
        let a = sample_rutherford(&spec).unwrap();
        prop_assert_eq!(a.len(), count);
        prop_assert!(a.iter().all(|&t| t >= theta_min && t <= PI));
        let b = sample_rutherford(&spec).unwrap();
        prop_assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
    }
}
