mod common;

use critset::extremal::{canonical_form, class_report_reduced, enumerate_class, enumerate_reduced, random_member};
use critset::matrix::ClassSpec;
use critset::walks::{critical_sets_of, largest_certificate, lcs_of, scs_of};

use common::*;

#[test]
fn critical_sets_match_the_agreement_mask_oracle() {
    let members = brute_members(4, 2);
    for &g in &members {
        let m = grid_to_matrix(g, 4, 2);
        let ours: Vec<u64> = critical_sets_of(&m).unwrap().into_iter().map(cellset_to_grid).collect();
        let oracle = subset_critical_sets(g, &members, 16);
        assert_eq!(ours, oracle, "critical sets differ for\n{m}");
        let largest = oracle.iter().map(|d| d.count_ones() as usize).max().unwrap();
        let smallest = oracle.iter().map(|d| d.count_ones() as usize).min().unwrap();
        assert_eq!(lcs_of(&m).unwrap(), largest);
        assert_eq!(scs_of(&m).unwrap(), smallest);
    }
}

#[test]
fn critical_sets_on_other_small_classes() {
    for (n, x) in [(3, 1), (4, 1), (4, 3)] {
        let members = brute_members(n, x);
        for &g in &members {
            let m = grid_to_matrix(g, n, x);
            let ours: Vec<u64> = critical_sets_of(&m).unwrap().into_iter().map(cellset_to_grid).collect();
            assert_eq!(ours, subset_critical_sets(g, &members, n * n), "n={n} x={x}\n{m}");
        }
    }
}

#[test]
fn largest_certificate_induces_a_largest_set() {
    let members = brute_members(4, 2);
    for &g in &members {
        let m = grid_to_matrix(g, 4, 2);
        let (size, cert) = largest_certificate(&m).unwrap();
        let set = cert.induced_set(&m).unwrap();
        assert_eq!(set.size(), size);
        assert!(cert.verify_handier(&m).unwrap());
        let cells = set.filled_set().unwrap();
        assert!(subset_critical_sets(g, &members, 16).contains(&cellset_to_grid(cells)));
    }
}

#[test]
fn class_counts_match_the_dp() {
    for (n, x) in [(3, 1), (4, 2), (5, 2), (6, 2)] {
        let spec = ClassSpec::uniform(n, x).unwrap();
        assert_eq!(enumerate_class(&spec).unwrap().len() as u64, dp_count(n, x), "n={n} x={x}");
    }
}

#[test]
fn random_members_land_in_the_reduced_orbits() {
    let reps = enumerate_reduced(&ClassSpec::uniform(6, 3).unwrap()).unwrap();
    for seed in 0..200 {
        let m = random_member(6, 3, seed).unwrap();
        assert!(reps.contains(&canonical_form(&m).unwrap()), "seed {seed}");
    }
}

#[test]
fn two_regular_classes_have_one_orbit_per_cycle_type() {
    // members of Λ_n^2 are unions of even cycles in K_{n,n}: partitions of n into parts ≥ 2
    assert_eq!(enumerate_reduced(&ClassSpec::uniform(5, 2).unwrap()).unwrap().len(), 2);
    assert_eq!(enumerate_reduced(&ClassSpec::uniform(6, 2).unwrap()).unwrap().len(), 4);
}

#[test]
fn lambda_6_3_statistics() {
    let r = class_report_reduced(&ClassSpec::uniform(6, 3).unwrap()).unwrap();
    assert_eq!(r.class_size, 297200);
    assert_eq!(r.scs, 9);
    // 3m²-4m+2 and ⌈(3m²-2m+1)/2⌉ at m = 3
    assert_eq!(r.lcs, Some(17));
    assert!(r.sup.unwrap() >= 11);
    assert!(r.verify().unwrap());
}
