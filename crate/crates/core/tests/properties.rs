use mjd_core::analytic::{dof_exact, degrees_of_freedom};
use mjd_core::channel::{build_profile_ia, build_profile_mjd, build_profile_rdma, RdmaPart};
use mjd_core::linalg::{gaussian_block, log_det_identity_plus_gram};
use mjd_core::rng::{StreamDomain, StreamKey};
use mjd_core::{SchemeKind, SystemParams};
use num_rational::Ratio;
use proptest::prelude::*;

#[test]
fn pre_log_ordering_over_the_whole_table() {
    for m in 3..=10u64 {
        for k in 1..=10u64 {
            let n = k + 1;
            let [mjd, ia, rd, ci] = SchemeKind::ALL.map(|s| dof_exact(s, m, n));
            assert!(mjd >= ia && ia >= rd && rd > ci, "M={m} K={k}");
            if k == 1 {
                assert_eq!(ia, rd, "M={m}");
            }
        }
    }
}

#[test]
fn pre_log_is_exact_at_small_clusters() {
    assert_eq!(dof_exact(SchemeKind::GlobalMJD, 3, 2), Ratio::from_integer(1));
    assert_eq!(dof_exact(SchemeKind::CI, 3, 2), Ratio::new(2, 3));
    assert_eq!(dof_exact(SchemeKind::RDMA, 3, 2), Ratio::new(5, 6));
    assert_eq!(dof_exact(SchemeKind::IA, 3, 2), Ratio::new(5, 6));
}

#[test]
fn pre_log_increases_with_cluster_size() {
    for scheme in [SchemeKind::IA, SchemeKind::RDMA, SchemeKind::CI] {
        for k in 1..=10u64 {
            let v: Vec<_> = (3..=10).map(|m| dof_exact(scheme, m, k + 1)).collect();
            assert!(v.windows(2).all(|w| w[1] > w[0]), "{scheme} K={k}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn profile_power_is_the_mean_squared_entry(m in 3usize..8, k in 1usize..6, alpha in 0.0f64..1.0) {
        let p = SystemParams::with_users(m, k, alpha, 100.0).unwrap();
        let mut profiles = vec![build_profile_mjd(&p), build_profile_ia(&p).unwrap()];
        profiles.push(build_profile_rdma(&p, RdmaPart::Active).unwrap());
        profiles.push(build_profile_rdma(&p, RdmaPart::Inactive).unwrap());
        for prof in profiles {
            let e = prof.entries();
            let direct = e.iter().map(|v| v * v).sum::<f64>() / (e.nrows() * e.ncols()) as f64;
            prop_assert!((prof.q_norm() - direct).abs() <= 1e-12 * direct.max(1.0));
        }
    }

    #[test]
    fn degrees_of_freedom_never_exceed_one(m in 3usize..12, k in 1usize..12, alpha in 0.0f64..1.0) {
        let p = SystemParams::with_users(m, k, alpha, 100.0).unwrap();
        for s in SchemeKind::ALL {
            let d = degrees_of_freedom(s, &p);
            prop_assert!(d <= Ratio::from_integer(1) && d > Ratio::from_integer(0));
        }
    }

    #[test]
    fn log_det_is_monotone_in_power(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..8, g in 0.01f64..100.0) {
        let mut rng = StreamKey::new(seed, StreamDomain::Custom(7)).stream(0);
        let h = gaussian_block(&mut rng, rows, cols, 1.0);
        let lo = log_det_identity_plus_gram(&h, g).unwrap();
        let hi = log_det_identity_plus_gram(&h, 2.0 * g).unwrap();
        prop_assert!(lo >= 0.0);
        prop_assert!(hi >= lo);
    }
}
