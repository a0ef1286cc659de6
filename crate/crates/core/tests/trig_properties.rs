use std::sync::Arc;

use adventitious::cyclotomic::{make_context, totient, CycloContext};
use adventitious::trig::{cos_of, sin_of, tan_half_via_identity, tan_of};
use proptest::prelude::*;

fn ctx(n: usize) -> Arc<CycloContext> {
    make_context(n).unwrap()
}

#[test]
fn tangent_of_pi_over_n_has_half_totient_degree() {
    for n in [4usize, 8, 12, 16, 20, 24] {
        // tan(π/n) is index 1 of conductor 2n, with 4 | 2n for even n.
        let t = tan_of(&ctx(2 * n), 1).unwrap();
        assert_eq!(t.minimal_polynomial().degree(), totient(n) / 2, "n = {n}");
    }
}

#[test]
fn tangent_membership_in_base_24() {
    for m in 1..=6usize {
        let t = tan_of(&ctx(24 * m), 1).unwrap();
        assert_eq!(t.is_in_subfield(24).unwrap(), 2 % m == 0, "m = {m}");
    }
}

#[test]
fn pythagorean_identity_in_small_fields() {
    for n in [4usize, 8, 12, 20, 24, 60, 240] {
        let c = ctx(n);
        for j in 0..n as i64 {
            let s = sin_of(&c, j).unwrap();
            let co = cos_of(&c, j);
            assert!((&s * &s + &co * &co).is_one(), "n = {n}, j = {j}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn parity(j in -720i64..720) {
        let c = ctx(720);
        prop_assert_eq!(cos_of(&c, -j), cos_of(&c, j));
        prop_assert_eq!(sin_of(&c, -j).unwrap(), -&sin_of(&c, j).unwrap());
    }

    #[test]
    fn angle_addition(x in 0i64..720, y in 0i64..720) {
        let c = ctx(720);
        let (sx, cx) = (sin_of(&c, x).unwrap(), cos_of(&c, x));
        let (sy, cy) = (sin_of(&c, y).unwrap(), cos_of(&c, y));
        prop_assert_eq!(sin_of(&c, x + y).unwrap(), &(&sx * &cy) + &(&cx * &sy));
        prop_assert_eq!(cos_of(&c, x + y), &(&cx * &cy) - &(&sx * &sy));
    }

    #[test]
    fn half_angle_matches_doubled_field(n in prop::sample::select(vec![8usize, 12, 24, 60, 120]), j in 1i64..240) {
        let j = j % n as i64;
        prop_assume!(j != 0 && 2 * j != n as i64);
        let half = tan_half_via_identity(&ctx(n), j).unwrap();
        let direct = tan_of(&ctx(2 * n), j).unwrap();
        prop_assert_eq!(half.lift_to(2 * n).unwrap(), direct);
    }
}
