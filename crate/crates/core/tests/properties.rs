use proptest::prelude::*;

use quatcurve::involute::{involute_curve, InvoluteParams};
use quatcurve::spatial::spatial_frame;
use quatcurve::{build_curve, conjugate, cross4, frenet_apparatus, hform, qmul, CurveSpec, Quaternion};

fn quaternion() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-1.0f64..1.0).prop_map(Quaternion::from_coords)
}

fn spatial() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform3(-1.0f64..1.0).prop_map(|[x, y, z]| Quaternion::from_coords([x, y, z, 0.0]))
}

fn helix() -> impl Strategy<Value = CurveSpec> {
    (0.5f64..2.0, 0.3f64..1.5, 0.2f64..1.5, 1.6f64..3.0)
        .prop_map(|(a, p, b, q)| CurveSpec::double_helix_unit(a, p, b, q))
}

fn circular() -> impl Strategy<Value = CurveSpec> {
    // A omega < 1 leaves room for the drift that makes the curve unit-speed
    (0.5f64..2.0, 0.1f64..0.9, 0.1f64..0.9).prop_map(|(a, f, r)| CurveSpec::circular4_unit(a, f / a, r))
}

proptest! {
    #[test]
    fn product_is_associative(p in quaternion(), q in quaternion(), r in quaternion()) {
        prop_assert!((qmul(qmul(p, q), r) - qmul(p, qmul(q, r))).max_abs() < 1e-12);
    }

    #[test]
    fn norm_is_multiplicative(p in quaternion(), q in quaternion()) {
        let expected = p.norm() * q.norm();
        prop_assume!(expected > 1e-6);
        prop_assert!((qmul(p, q).norm() - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn conjugation_reverses_products(p in quaternion(), q in quaternion()) {
        prop_assert!((conjugate(qmul(p, q)) - qmul(conjugate(q), conjugate(p))).max_abs() < 1e-15);
    }

    #[test]
    fn hform_is_symmetric_dot(p in quaternion(), q in quaternion()) {
        let dot: f64 = p.coords().iter().zip(q.coords()).map(|(a, b)| a * b).sum();
        prop_assert!((hform(p, q) - dot).abs() < 1e-15);
        prop_assert_eq!(hform(p, q), hform(q, p));
    }

    #[test]
    fn spatial_product_splits(p in spatial(), q in spatial()) {
        let prod = qmul(p, q);
        let (u, v) = (p.vector(), q.vector());
        prop_assert!((prod.scalar() + u.dot(v)).abs() < 1e-15);
        prop_assert!((prod.vector() - u.cross(v)).norm() < 1e-15);
    }

    #[test]
    fn wedge_is_orthogonal_and_alternating(a in quaternion(), b in quaternion(), c in quaternion()) {
        let w = cross4(a, b, c);
        for v in [a, b, c] {
            prop_assert!(hform(w, v).abs() < 1e-14);
        }
        prop_assert!((cross4(b, a, c) + w).max_abs() < 1e-14);
        prop_assert!((cross4(a, c, b) + w).max_abs() < 1e-14);
    }

    #[test]
    fn helix_frames_are_right_handed(spec in helix(), s in 0.0f64..12.0) {
        let f = frenet_apparatus(&build_curve(&spec).unwrap(), s).unwrap();
        prop_assert!(f.orthonormality_error() < 1e-9);
        prop_assert!((f.det() - 1.0).abs() < 1e-9);
        prop_assert!(f.kappa > 0.0);
    }

    #[test]
    fn w_curve_curvatures_are_constant(spec in circular(), s in 0.0f64..12.0, t in 0.0f64..12.0) {
        let curve = build_curve(&spec).unwrap();
        let (a, b) = (frenet_apparatus(&curve, s).unwrap(), frenet_apparatus(&curve, t).unwrap());
        prop_assert!((a.kappa - b.kappa).abs() < 1e-8);
        prop_assert!((a.k - b.k).abs() < 1e-8);
        prop_assert!((a.bitorsion - b.bitorsion).abs() < 1e-8);
    }

    #[test]
    fn involute_distance_law(spec in helix(), c in 0.0f64..12.0, s in 0.0f64..12.0) {
        prop_assume!((c - s).abs() > 1e-2);
        let xi = build_curve(&spec).unwrap();
        let phi = involute_curve(&xi, InvoluteParams::new(c, 1e-3).unwrap()).unwrap();
        let gap = (phi.position(s).unwrap() - xi.position(s).unwrap()).norm();
        prop_assert!((gap - (c - s).abs()).abs() < 1e-9);
        let tangency = hform(phi.eval(s, 1).unwrap().normalized(), xi.eval(s, 1).unwrap());
        prop_assert!(tangency.abs() < 1e-6);
    }

    #[test]
    fn spatial_frame_rebuilds_the_frame(spec in helix(), s in 0.0f64..12.0) {
        let f = frenet_apparatus(&build_curve(&spec).unwrap(), s).unwrap();
        let sf = spatial_frame(&f).unwrap();
        for v in sf.vectors() {
            prop_assert!(v.scalar().abs() < 1e-9);
            prop_assert!((v.norm() - 1.0).abs() < 1e-9);
        }
        prop_assert!((qmul(sf.t, f.t) - f.n).max_abs() < 1e-9);
        prop_assert!((qmul(sf.n, f.t) - f.b).max_abs() < 1e-9);
        prop_assert!((qmul(sf.b, f.t) - f.e).max_abs() < 1e-9);
    }
}
