mod common;

use cy3check::bmtchain::{delta_from_epsilon, epsilon_from_delta, f_epsilon, q_form, gamma_cycle};
use cy3check::bnbounds::{omega_k3, psi_dp};
use cy3check::exact::{parse_surd, q, qr, Surd, Q};
use cy3check::invariants::{delta_h, euler_char, twist, twist_surface, ChernSurface, ChernThreefold, SurfaceGeometry, SurfaceKind, ThreefoldGeometry};
use cy3check::tiltplane::{projection, wall_through, WallLine};
use proptest::prelude::*;
use std::cmp::Ordering;

fn rat(max: i64, den: i64) -> impl Strategy<Value = Q> {
    (-max * den..=max * den).prop_map(move |n| qr(n, den))
}

fn surface_class() -> impl Strategy<Value = ChernSurface> {
    (-4i64..=4, -8i64..=8, -12i64..=12).prop_map(|(r, c, e)| ChernSurface::new(r, q(c), qr(e, 2)))
}

fn threefold_class() -> impl Strategy<Value = ChernThreefold> {
    (-3i64..=3, -10i64..=10, -20i64..=20, -30i64..=30).prop_map(|(r, c, e, f)| ChernThreefold::new(r, q(c), qr(e, 2), qr(f, 6)))
}

fn quintic() -> ThreefoldGeometry {
    ThreefoldGeometry::new("X_5", q(5), q(50)).unwrap()
}

fn del_pezzo(m: i64) -> SurfaceGeometry {
    SurfaceGeometry::new(SurfaceKind::DelPezzo, q(m), false).unwrap()
}

proptest! {
    #[test]
    fn psi_is_homogeneous(x in -40i64..=40, y in 1i64..=40, k in 1i64..=6, m in 1i64..=6) {
        let (xq, yq, mq) = (qr(x, 2), q(y), q(m));
        let base = psi_dp(&xq, &yq, &mq).unwrap();
        let scaled = psi_dp(&(&xq * q(k)), &(&yq * q(k)), &mq).unwrap();
        prop_assert_eq!(scaled, base * q(k));
    }

    #[test]
    fn psi_matches_independent_transcription(x in -80i64..=80, y in 1i64..=40, m in 1i64..=6) {
        let got = psi_dp(&qr(x, 4), &q(y), &q(m)).unwrap();
        let want = common::psi(common::r(x as i128, 4), common::r(y as i128, 1), m as i128);
        prop_assert_eq!(common::small(&got), want);
    }

    #[test]
    fn omega_is_subadditive(x1 in -20i64..=20, y1 in 0i64..=20, x2 in -20i64..=20, y2 in 0i64..=20, m in 1i64..=8) {
        let mq = q(m);
        let (a, b) = (omega_k3(&q(x1), &q(y1), &mq), omega_k3(&q(x2), &q(y2), &mq));
        let sum = omega_k3(&q(x1 + x2), &q(y1 + y2), &mq);
        prop_assert_ne!((&(&a + &b) - &sum).signum(), Ordering::Less);
    }

    #[test]
    fn discriminant_is_twist_invariant(v in surface_class(), b in rat(5, 6), m in 1i64..=6) {
        let geom = del_pezzo(m);
        prop_assert_eq!(delta_h(&twist_surface(&v, &b, &geom), &geom), delta_h(&v, &geom));
    }

    #[test]
    fn discriminant_scales_quadratically(v in surface_class(), k in -5i64..=5) {
        let geom = del_pezzo(3);
        prop_assert_eq!(delta_h(&v.scale(k), &geom), delta_h(&v, &geom) * q(k * k));
    }

    #[test]
    fn euler_char_is_additive(u in threefold_class(), v in threefold_class()) {
        let geom = quintic();
        let sum = euler_char(&(&u + &v), &geom).unwrap();
        prop_assert_eq!(sum, euler_char(&u, &geom).unwrap() + euler_char(&v, &geom).unwrap());
    }

    #[test]
    fn threefold_twists_compose(v in threefold_class(), b1 in rat(3, 4), b2 in rat(3, 4)) {
        let geom = quintic();
        let once = twist(&v, &(&b1 + &b2), &geom);
        let twice = twist(&twist(&v, &b1, &geom), &b2, &geom);
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn walls_pass_through_the_projection(v in surface_class(), u in surface_class(), m in 1i64..=6) {
        prop_assume!(v.r != 0);
        let geom = del_pezzo(m);
        if let Ok(line @ WallLine::Sloped { .. }) = wall_through(&v, &u, &geom) {
            let p = projection(&v, &geom).unwrap();
            prop_assert!(line.contains(&p));
        }
    }

    #[test]
    fn q_form_is_quadratic(v in threefold_class(), k in -4i64..=4, b in rat(2, 4), w in 1i64..=40) {
        let geom = quintic();
        let (wq, gh) = (&b * &b / q(2) + qr(w, 8), qr(7, 3));
        let base = q_form(&v, &b, &wq, &gh, &geom).unwrap();
        let scaled = q_form(&v.scale(k), &b, &wq, &gh, &geom).unwrap();
        prop_assert_eq!(scaled, base * q(k * k));
    }

    #[test]
    fn f_epsilon_is_even(x in rat(3, 97), n in 1i64..=332) {
        let eps = qr(n, 1000);
        prop_assert_eq!(f_epsilon(&x, &eps).unwrap(), f_epsilon(&(-&x), &eps).unwrap());
    }

    #[test]
    fn epsilon_round_trip(n in 1i64..=100_000, d in 1i64..=1000) {
        let delta = qr(n, d);
        let eps = epsilon_from_delta(&delta).unwrap();
        prop_assert!(eps > q(0) && eps < qr(1, 3));
        prop_assert_eq!(delta_from_epsilon(&eps).unwrap(), delta);
    }

    #[test]
    fn gamma_threshold_is_nonnegative_on_h(n in 1i64..=332) {
        let cert = gamma_cycle(&qr(n, 1000), &quintic()).unwrap();
        prop_assert!(cert.gamma_h >= q(0));
    }

    #[test]
    fn surd_text_round_trip(a in rat(20, 7), c in rat(5, 3), x in 0i64..=200) {
        let s = &Surd::from_q(a) + &Surd::sqrt(&q(x)).scale(&c);
        prop_assert_eq!(parse_surd(&s.exact()).unwrap(), s);
    }
}
