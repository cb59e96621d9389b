//! Randomized invariants over small integer data.

use padic_mobius::parse::{map_from_json, map_to_json, parse_berk, parse_elem, parse_map};
use padic_mobius::padic::rat;
use padic_mobius::{BerkPoint, FieldElem, Magnitude, MobiusMap, PadicContext, ProjPoint};
use proptest::prelude::*;

const PRIMES: [u64; 4] = [2, 3, 5, 7];

fn elem() -> impl Strategy<Value = FieldElem> {
    (-400i64..400, 1i64..200).prop_map(|(n, d)| FieldElem::from_ratio(n, d))
}

fn nonzero() -> impl Strategy<Value = FieldElem> {
    elem().prop_filter("nonzero", |x| !x.is_zero())
}

fn map() -> impl Strategy<Value = MobiusMap> {
    (elem(), elem(), elem(), elem()).prop_filter_map("invertible", |(a, b, c, d)| MobiusMap::new(a, b, c, d).ok())
}

fn point() -> impl Strategy<Value = ProjPoint> {
    prop_oneof![1 => Just(ProjPoint::Infinity), 6 => elem().prop_map(ProjPoint::Finite)]
}

fn disk() -> impl Strategy<Value = BerkPoint> {
    (elem(), -6i64..6).prop_map(|(c, s)| BerkPoint::disk(c, padic_mobius::padic::Exponent::new(s, 2)))
}

fn ctx() -> impl Strategy<Value = PadicContext> {
    prop::sample::select(PRIMES.to_vec()).prop_map(|p| PadicContext::new(p, None).unwrap())
}

proptest! {
    #[test]
    fn strong_triangle(c in ctx(), x in elem(), y in elem()) {
        let s = c.abs(&(&x + &y)).unwrap();
        prop_assert!(s <= c.abs(&x).unwrap().max(c.abs(&y).unwrap()));
    }

    #[test]
    fn multiplicative(c in ctx(), x in elem(), y in elem()) {
        prop_assert_eq!(c.abs(&(&x * &y)).unwrap(), &c.abs(&x).unwrap() * &c.abs(&y).unwrap());
    }

    #[test]
    fn nonsplit_conjugates(x in -50i64..50, y in 1i64..50) {
        let c = PadicContext::new(3, Some(-1)).unwrap();
        let z = FieldElem::new(rat(x, 1), rat(y, 7), Some(-1));
        prop_assert_eq!(c.abs(&z).unwrap(), c.abs(&z.conj()).unwrap());
    }

    #[test]
    fn chordal_bounded_ultrametric(c in ctx(), x in point(), y in point(), z in point()) {
        let xz = c.chordal(&x, &z).unwrap();
        prop_assert!(xz <= Magnitude::one(c.p()));
        prop_assert!(xz <= c.chordal(&x, &y).unwrap().max(c.chordal(&y, &z).unwrap()));
    }

    #[test]
    fn classification_is_conjugation_invariant(c in ctx(), g in map(), h in map()) {
        prop_assert_eq!(c.classify(&g).unwrap(), c.classify(&g.conjugate_by(&h)).unwrap());
    }

    #[test]
    fn norm_of_inverse(c in ctx(), g in map()) {
        prop_assert_eq!(c.norm(&g).unwrap(), c.norm(&g.inverse()).unwrap());
    }

    #[test]
    fn lipschitz_bound(c in ctx(), g in map(), z in point(), w in point()) {
        let l = c.lipschitz(&g).unwrap();
        prop_assert!(c.chordal(&g.apply(&z), &g.apply(&w)).unwrap() <= &l * &c.chordal(&z, &w).unwrap());
    }

    #[test]
    fn tree_isometry(c in ctx(), g in map(), x in disk(), y in disk()) {
        let d = c.hyp_dist(&x, &y).unwrap();
        prop_assert_eq!(d, c.hyp_dist(&c.act(&g, &x).unwrap(), &c.act(&g, &y).unwrap()).unwrap());
    }

    #[test]
    fn join_bounds_both(c in ctx(), x in disk(), y in disk()) {
        let j = c.join(&x, &y).unwrap();
        prop_assert!(c.tree_le(&x, &j).unwrap() && c.tree_le(&y, &j).unwrap());
        prop_assert!(c.berk_eq(&j, &c.join(&y, &x).unwrap()).unwrap());
    }

    #[test]
    fn gauss_displacement(c in ctx(), g in map()) {
        let gauss = BerkPoint::gauss();
        let d = c.hyp_dist(&c.act(&g, &gauss).unwrap(), &gauss).unwrap();
        prop_assert_eq!(d, c.norm(&g).unwrap().exponent().unwrap() * 2);
    }

    #[test]
    fn map_text_and_json_round_trip(c in ctx(), g in map()) {
        prop_assert_eq!(&parse_map(&c, &g.to_string()).unwrap(), &g);
        prop_assert_eq!(&map_from_json(&c, &map_to_json(&g)).unwrap(), &g);
    }

    #[test]
    fn point_text_round_trip(c in ctx(), x in disk()) {
        let back = parse_berk(&c, &c.point_string(&x)).unwrap();
        prop_assert!(c.berk_eq(&back, &x).unwrap());
    }

    #[test]
    fn elem_text_round_trip(a in -99i64..99, b in -99i64..99, d in 1i64..40) {
        let x = FieldElem::new(rat(a, d), rat(b, d), Some(-7));
        prop_assert_eq!(parse_elem(&x.to_string(), Some(-7)).unwrap(), x);
    }

    #[test]
    fn three_points_determine_maps(c in ctx(), g in map(), shift in nonzero()) {
        let z = [ProjPoint::zero(), ProjPoint::one(), ProjPoint::Finite(shift)];
        prop_assume!(z[2] != z[0] && z[2] != z[1]);
        let w: Vec<ProjPoint> = z.iter().map(|x| g.apply(x)).collect();
        prop_assert_eq!(c.mobius_through_three_points([&z[0], &z[1], &z[2]], [&w[0], &w[1], &w[2]]).unwrap(), g);
    }
}
