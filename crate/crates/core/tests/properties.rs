use std::f64::consts::PI;

use halfdisk::elliptic::{incomplete_f, jacobi, jacobi_epsilon};
use halfdisk::expmap::{exp_map_from, sample_trajectory};
use halfdisk::planner::CylinderPoint;
use halfdisk::pmp::{casimir, hamiltonian};
use halfdisk::se2::normalize_angle;
use halfdisk::{exp_map, feasible_plan, Covector, Pose};
use proptest::prelude::*;

fn pose() -> impl Strategy<Value = Pose> {
    (-5.0..5.0f64, -5.0..5.0f64, -PI..PI).prop_map(|(x, y, t)| Pose::new(x, y, t))
}

fn covector() -> impl Strategy<Value = Covector> {
    (-PI - 1.5..PI + 1.5f64, -3.0..3.0f64).prop_map(|(psi, h3)| CylinderPoint { psi, h3 }.decode())
}

fn close(a: &Pose, b: &Pose, tol: f64) -> bool {
    a.distance(b) <= tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn composition_is_associative(a in pose(), b in pose(), c in pose()) {
        prop_assert!(close(&a.compose(&b).compose(&c), &a.compose(&b.compose(&c)), 1e-12));
    }

    #[test]
    fn inverse_cancels(a in pose()) {
        prop_assert!(close(&a.compose(&a.inverse()), &Pose::identity(), 1e-13));
        prop_assert!(close(&a.inverse().compose(&a), &Pose::identity(), 1e-13));
    }

    #[test]
    fn normalize_is_idempotent(a in -100.0..100.0f64) {
        let once = normalize_angle(a).unwrap();
        prop_assert_eq!(normalize_angle(once).unwrap(), once);
        prop_assert!(once > -PI && once <= PI);
    }

    #[test]
    fn jacobi_identities(u in -30.0..30.0f64, k in 0.0..0.9999f64) {
        let j = jacobi(u, k).unwrap();
        prop_assert!((j.sn * j.sn + j.cn * j.cn - 1.0).abs() < 1e-12);
        prop_assert!((j.dn * j.dn + k * k * j.sn * j.sn - 1.0).abs() < 1e-12);
        prop_assert!((j.sn - j.am.sin()).abs() < 1e-12);
    }

    #[test]
    fn amplitude_inverts_f(phi in -1.5..1.5f64, k in 0.0..0.99f64) {
        let u = incomplete_f(phi, k).unwrap();
        prop_assert!((jacobi(u, k).unwrap().am - phi).abs() < 1e-11);
    }

    #[test]
    fn epsilon_is_odd(u in 0.0..10.0f64, k in 0.0..0.99f64) {
        prop_assert!((jacobi_epsilon(-u, k).unwrap() + jacobi_epsilon(u, k).unwrap()).abs() < 1e-13);
    }

    #[test]
    fn first_integrals_along_extremals(h0 in covector(), t in 0.1..8.0f64) {
        let traj = exp_map(&h0, t).unwrap();
        let e0 = casimir(&h0);
        for s in sample_trajectory(&traj, 50).unwrap() {
            prop_assert!((hamiltonian(&s.covector) - 1.0).abs() < 1e-9);
            prop_assert!((casimir(&s.covector) - e0).abs() < 1e-9);
        }
    }

    #[test]
    fn flow_is_a_semigroup(h0 in covector(), t in 0.1..4.0f64, s in 0.1..4.0f64) {
        let whole = exp_map(&h0, t + s).unwrap();
        let first = exp_map(&h0, t).unwrap();
        let rest = exp_map_from(&first.end_covector, s, first.end_pose).unwrap();
        prop_assert!(close(&whole.end_pose, &rest.end_pose, 1e-8));
    }

    #[test]
    fn exp_map_is_left_invariant(h0 in covector(), t in 0.1..6.0f64, g in pose()) {
        let base = exp_map(&h0, t).unwrap();
        let moved = exp_map_from(&h0, t, g).unwrap();
        prop_assert!(close(&g.compose(&base.end_pose), &moved.end_pose, 1e-10));
    }

    #[test]
    fn reflection_maps_extremals(h0 in covector(), t in 0.1..6.0f64) {
        let mirrored = Covector::new(h0.h1, -h0.h2, -h0.h3);
        let a = exp_map(&h0, t).unwrap().end_pose;
        let b = exp_map(&mirrored, t).unwrap().end_pose;
        prop_assert!(close(&Pose::new(a.x, -a.y, -a.theta), &b, 1e-10));
    }

    #[test]
    fn feasible_plan_is_left_invariant(q0 in pose(), q1 in pose(), g in pose()) {
        let a = feasible_plan(&q0, &q1);
        let b = feasible_plan(&g.compose(&q0), &g.compose(&q1));
        prop_assert!((a.total_time - b.total_time).abs() < 1e-10);
    }
}
