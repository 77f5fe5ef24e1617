use hecke::bttree::{bt_distance, bt_neighbors, flow_h_p, BTVertex, Frame};
use hecke::hecke::{neighbors_reduced, sphere_coset, sphere_tree};
use hecke::modsurface::{moebius_apply, reduce, reduce_point, HPoint, IntMatrix2};
use hecke::padic::{abs_at_place, product_formula_check, PAdicValue, Place};
use hecke::rational::{int, ratio};
use hecke::solenoid::SolenoidPoint;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn rational(bound: i64) -> impl Strategy<Value = BigRational> {
    (-bound..=bound, 1..=bound).prop_map(|(n, d)| ratio(n, d))
}

fn nonzero_rational(bound: i64) -> impl Strategy<Value = BigRational> {
    rational(bound).prop_filter("nonzero", |r| r != &int(0))
}

fn point() -> impl Strategy<Value = HPoint> {
    (rational(50), 1..=50i64, 1..=50i64)
        .prop_map(|(x, yn, yd)| HPoint::new(x, ratio(yn, yd)).unwrap())
}

/// Products of S and powers of T, i.e. arbitrary elements of SL(2, Z).
fn modular_word() -> impl Strategy<Value = IntMatrix2> {
    prop::collection::vec(-4i64..=4, 0..6).prop_map(|powers| {
        powers.into_iter().fold(IntMatrix2::identity(), |g, k| {
            g.mul(&IntMatrix2::t_pow(BigInt::from(k)))
                .mul(&IntMatrix2::s())
        })
    })
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn reduction_is_constant_on_orbits(z in point(), g in modular_word()) {
        let moved = moebius_apply(&g, &z).unwrap();
        prop_assert_eq!(reduce_point(&moved), reduce_point(&z));
    }

    #[test]
    fn reducing_matrix_maps_to_reduced_point(z in point()) {
        let (w, g) = reduce(&z);
        prop_assert!(w.is_reduced());
        prop_assert_eq!(g.det(), BigInt::from(1));
        prop_assert_eq!(moebius_apply(&g, &z).unwrap(), w.clone());
        prop_assert_eq!(reduce_point(&w), w);
    }

    #[test]
    fn neighbors_have_total_p_plus_one(z in point(), p in prime()) {
        let m = neighbors_reduced(&z, p).unwrap();
        prop_assert_eq!(m.values().sum::<u64>(), p + 1);
    }

    #[test]
    fn tree_and_coset_spheres_agree(z in point(), n in 1u64..40) {
        prop_assert_eq!(sphere_tree(&z, n).unwrap().points, sphere_coset(&z, n).unwrap().points);
    }

    #[test]
    fn ultrametric_inequality(a in nonzero_rational(10_000), b in nonzero_rational(10_000), p in prime()) {
        let at = Place::Finite(p);
        let sum = abs_at_place(&(&a + &b), at);
        let max = abs_at_place(&a, at).max(abs_at_place(&b, at));
        prop_assert!(sum <= max);
    }

    #[test]
    fn absolute_value_is_multiplicative(a in nonzero_rational(10_000), b in nonzero_rational(10_000), p in prime()) {
        let x = PAdicValue::from_rational(&a, p, 20).unwrap();
        let y = PAdicValue::from_rational(&b, p, 20).unwrap();
        prop_assert_eq!(x.mul(&y).unwrap().abs(), x.abs() * y.abs());
        prop_assert_eq!(abs_at_place(&(&a * &b), Place::Infinity), abs_at_place(&a, Place::Infinity) * abs_at_place(&b, Place::Infinity));
    }

    #[test]
    fn product_formula_holds(a in nonzero_rational(1_000_000)) {
        prop_assert_eq!(product_formula_check(&a).unwrap(), int(1));
    }

    #[test]
    fn rational_round_trip(a in rational(1_000_000), p in prime()) {
        let x = PAdicValue::from_rational(&a, p, 24).unwrap();
        prop_assert!(x.congruent(&PAdicValue::from_rational(&x.to_rational(), p, 24).unwrap()).unwrap());
    }

    #[test]
    fn tree_distance_is_a_metric(
        p in prime(),
        steps in prop::collection::vec((0usize..8, 0usize..8, 0usize..8), 1..6),
    ) {
        let walk = |pick: &dyn Fn(&(usize, usize, usize)) -> usize| {
            steps.iter().fold(BTVertex::root(p).unwrap(), |v, s| {
                let ns = bt_neighbors(&v);
                ns[pick(s) % ns.len()].clone()
            })
        };
        let (u, v, w) = (walk(&|s| s.0), walk(&|s| s.1), walk(&|s| s.2));
        let d = |a: &BTVertex, b: &BTVertex| bt_distance(a, b).unwrap();
        prop_assert_eq!(d(&u, &v), d(&v, &u));
        prop_assert_eq!(d(&u, &u), 0);
        prop_assert!(d(&u, &w) <= d(&u, &v) + d(&v, &w));
        for n in bt_neighbors(&u) {
            prop_assert_eq!(d(&u, &n), 1);
        }
    }

    #[test]
    fn frame_flow_is_a_group_action(p in prime(), m in -4i64..4, u in -40i64..40, a in -5i64..5, b in -5i64..5) {
        let shift = int(u) * hecke::rational::prime_power(p, -3);
        let v = BTVertex::new(p, m, shift).unwrap();
        let f = Frame::of(&v);
        prop_assert_eq!(f.flow(a).flow(b), f.flow(a + b));
        prop_assert_eq!(flow_h_p(&v, 0), v.clone());
        prop_assert_eq!(bt_distance(&v, &flow_h_p(&v, a)).unwrap(), a.unsigned_abs());
    }

    #[test]
    fn solenoid_canonical_form_is_invariant(
        p in prime(),
        xi in rational(500),
        xp in rational(500),
        k in -50i64..50,
        e in 0i64..4,
    ) {
        let z = ratio(k, 1) * hecke::rational::prime_power(p, -e);
        let a = SolenoidPoint::canonicalize(&xi, &xp, p, 12).unwrap();
        let b = SolenoidPoint::canonicalize(&(&xi + &z), &(&xp + &z), p, 12).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn solenoid_flow_law(p in prime(), xi in rational(500), xp in rational(500), s in rational(500), t in rational(500)) {
        let pt = SolenoidPoint::canonicalize(&xi, &xp, p, 12).unwrap();
        prop_assert_eq!(pt.flow(&s).flow(&t), pt.flow(&(&s + &t)));
    }
}
