//! Membership and translation in genus two over a field with `9 | e`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use siegel_core::sample::{sigma_point_n2, sp_integral};
use siegel_core::siegel::{enumerate_reps, in_sigma_m, make_diagonal_point, translation_lemma_check};
use siegel_core::FieldParams;

#[test]
fn diagonal_point_lies_in_first_piece() {
    let k = FieldParams::new(2, 9, 72).unwrap();
    let z = make_diagonal_point(k, &[1, 2]).unwrap();
    let reps = enumerate_reps(2, 2, 1).unwrap();
    assert!(in_sigma_m(&z, 1, &reps).unwrap().member);
}

#[test]
fn integral_translates_reach_next_piece() {
    let k = FieldParams::new(2, 9, 72).unwrap();
    let r1 = enumerate_reps(2, 2, 1).unwrap();
    let r2 = enumerate_reps(2, 2, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..3 {
        let z = sigma_point_n2(&mut rng, k).unwrap();
        let g = sp_integral(&mut rng, k, 2, 4);
        let out = translation_lemma_check(&g, &z, 1, &r1, &r2).unwrap();
        assert!(out.premise.member);
        assert!(out.holds());
    }
}
