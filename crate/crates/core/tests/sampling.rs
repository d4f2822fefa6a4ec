//! Random symplectic elements against the class list.

use std::collections::BTreeSet;

use spconj::classify::{enumerate_classes, invariant, CanonicalLabel};
use spconj::symform::random_symplectic;
use spconj::Field;

fn labels(n: usize, p: u64) -> BTreeSet<CanonicalLabel> {
    enumerate_classes(n, &Field::prime(p).unwrap())
        .unwrap()
        .iter()
        .map(|d| d.label())
        .collect()
}

/// Every sampled label belongs to the enumerated list.
#[test]
fn samples_land_in_enumerated_classes() {
    let field = Field::prime(5).unwrap();
    let all = labels(4, 5);
    let mut seen = BTreeSet::new();
    for seed in 0..2_000 {
        let u = random_symplectic(4, &field, seed).unwrap();
        let label = invariant(&u).unwrap().label();
        assert!(all.contains(&label), "unlisted label {label}");
        seen.insert(label);
    }
    // the generic classes (regular semisimple and friends) show up quickly
    assert!(seen.len() > all.len() / 3, "{} of {} classes seen", seen.len(), all.len());
}

/// Small groups are covered completely by modest samples.
#[test]
fn samples_cover_sp2_f3() {
    let field = Field::prime(3).unwrap();
    let all = labels(2, 3);
    let seen: BTreeSet<CanonicalLabel> = (0..2_000)
        .map(|seed| invariant(&random_symplectic(2, &field, seed).unwrap()).unwrap().label())
        .collect();
    assert_eq!(seen, all);
}

/// Full coverage of Sp_4(F_5) by 10⁴ samples. Classes such as ±I have
/// probability 1/|Sp_4(F_5)| ≈ 1.1·10⁻⁷ per draw, so this cannot succeed
/// at this sample size; kept for reference and run with `--ignored`.
#[test]
#[ignore]
fn samples_cover_sp4_f5() {
    let field = Field::prime(5).unwrap();
    let all = labels(4, 5);
    let seen: BTreeSet<CanonicalLabel> = (0..10_000)
        .map(|seed| invariant(&random_symplectic(4, &field, seed).unwrap()).unwrap().label())
        .collect();
    assert_eq!(seen.len(), all.len());
}
