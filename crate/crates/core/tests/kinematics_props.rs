use cohscat::units::{de_broglie_wavelength, max_momentum_transfer, Kinematics, UnitSystem, Vec3};
use proptest::prelude::*;

fn vec3(range: f64) -> impl Strategy<Value = Vec3> {
    prop::array::uniform3(-range..range).prop_map(Vec3)
}

fn unit_vector() -> impl Strategy<Value = Vec3> {
    (0.0f64..1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(u, phi)| {
        let c = 2.0 * u - 1.0;
        let s = (1.0 - c * c).sqrt();
        Vec3::new(s * phi.cos(), s * phi.sin(), c)
    })
}

fn kinematics() -> impl Strategy<Value = Kinematics> {
    (0.01f64..100.0, 0.01f64..1e4, vec3(50.0), vec3(50.0))
        .prop_map(|(m, big_m, p, big_p)| Kinematics::new(m, big_m, p, big_p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn elastic_transfer_equals_relative_change(kin in kinematics(), dir in unit_vector()) {
        let p_final = dir * kin.p_r.norm();
        let (pd_final, pt_final) = kin.final_lab_momenta(p_final);
        let lab = (kin.p_d - pd_final).norm();
        let rel = (kin.p_r - p_final).norm();
        let scale = kin.p_r.norm() + kin.p_s.norm() + 1e-300;
        prop_assert!((lab - rel).abs() <= 1e-12 * scale);
        // total momentum is conserved
        prop_assert!(((pd_final + pt_final) - kin.p_s).norm() <= 1e-12 * scale);
    }

    #[test]
    fn transfer_is_bounded(kin in kinematics(), dir in unit_vector()) {
        let p_final = dir * kin.p_r.norm();
        let (pd_final, _) = kin.final_lab_momenta(p_final);
        let bound = max_momentum_transfer(&kin);
        prop_assert!((kin.p_d - pd_final).norm() <= bound * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn galilean_boost_keeps_relative_momentum(kin in kinematics(), v in vec3(10.0)) {
        let boosted = Kinematics::new(
            kin.m_d,
            kin.m_target,
            kin.p_d + v * kin.m_d,
            kin.p_target + v * kin.m_target,
        )
        .unwrap();
        let scale = kin.p_d.norm() + kin.p_target.norm() + v.norm() * (kin.m_d + kin.m_target);
        prop_assert!((boosted.p_r - kin.p_r).norm() <= 1e-12 * scale);
        prop_assert!((boosted.e_r - kin.e_r).abs() <= 1e-10 * (kin.e_r + scale * scale / kin.m_r));
    }

    #[test]
    fn unit_conversions_round_trip(x in 1e-30f64..1e30, len in 1e-16f64..1e-8, mass in 1e-31f64..1e-24) {
        let u = UnitSystem::new(len, mass).unwrap();
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs();
        prop_assert!(close(u.length_to_si(u.length_to_internal(x)), x));
        prop_assert!(close(u.mass_to_si(u.mass_to_internal(x)), x));
        prop_assert!(close(u.energy_to_si(u.energy_to_internal(x)), x));
        prop_assert!(close(u.momentum_to_si(u.momentum_to_internal(x)), x));
        prop_assert!(close(u.area_to_si(u.area_to_internal(x)), x));
        prop_assert!(close(u.coupling_to_si(u.coupling_to_internal(x)), x));
    }
}

#[test]
fn head_on_equal_masses() {
    let kin = Kinematics::new(
        1.0,
        1.0,
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(-1.0, 0.0, 0.0),
    )
    .unwrap();
    assert_eq!(max_momentum_transfer(&kin), 2.0);
    assert_eq!(kin.p_s, Vec3::ZERO);
}

#[test]
fn wavelength_needs_momentum() {
    assert!((de_broglie_wavelength(1.0).unwrap() - std::f64::consts::TAU).abs() < 1e-15);
    assert_eq!(
        de_broglie_wavelength(0.0).unwrap_err().code(),
        "domain_error"
    );
}
