mod common;

use common::*;
use stacktsp::generators::Profile;
use stacktsp::{frac, Goal};

#[test]
fn plan_tour_dp_matches_brute_force() {
    let t = pc_tsp_against_brute_force(&[1, 2, 3, 4, 5, 6], 25);
    assert!(t.ok(), "{t}");
}

#[test]
fn matching_matches_enumeration() {
    let t = matching_against_enumeration(10, 15);
    assert!(t.ok(), "{t}");
}

#[test]
fn feasibility_matches_brute_force() {
    let t = feasibility_against_brute_force(&[1, 2, 3, 4, 5, 6, 7], 60);
    assert!(t.ok(), "{t}");
}

#[test]
fn extremes_bracket_the_combined_tour() {
    let mut t = Tallies::new();
    for n in 3..=5 {
        for seed in 0..10 {
            extreme_bounds(&random_symmetric_instance(n, n.div_ceil(2) + seed as usize % 2, seed), &mut t);
        }
    }
    assert!(all_ok(&t), "{t:#?}");
}

#[test]
fn square_identity_on_random_tours() {
    let mut r = rng(5);
    for n in [2, 4, 6, 8] {
        let inst = stacktsp::generators::gen_random(Profile::General, n, 2, n, Goal::Max, n as u64).unwrap();
        for _ in 0..10 {
            assert!(square_identity(&inst, &random_tour(n + 1, &mut r)));
        }
    }
}

#[test]
fn apx2_standard_bound_small() {
    let t = standard_ratio(Profile::Symmetric, Goal::Max, &[4, 5], 15, |v| frac(1, 2) - frac(1, 2 * v as i128));
    assert!(t.ok(), "{t}");
}

#[test]
fn differential_bounds_small() {
    let even = differential_ratio(&[3, 5], 15, |_| frac(1, 2));
    assert!(even.ok(), "{even}");
    let odd = differential_ratio(&[4], 15, |v| frac(1, 2) - frac(2, v as i128));
    assert!(odd.ok(), "{odd}");
}
