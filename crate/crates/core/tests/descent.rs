mod common;

use std::collections::BTreeSet;

use common::*;
use congruent_core::arith::int;
use congruent_core::descent::w_map_bounded;
use congruent_core::{
    coset_candidates, double_param, generators, iterate_double, membership, reduce, search_params,
    w_map, CongruentParam, Error, FactorBound, ParamOrIdentity, RepresentativeSet, WImage,
};
use num_traits::ToPrimitive;

fn pairs(found: &[CongruentParam]) -> Vec<(u64, u64)> {
    found
        .iter()
        .map(|p| {
            (
                p.param().numer().to_u64().unwrap(),
                p.param().denom().to_u64().unwrap(),
            )
        })
        .collect()
}

fn images(found: &[CongruentParam]) -> BTreeSet<WImage> {
    found
        .iter()
        .map(|p| w_map(&p.param().clone().into()).unwrap())
        .collect()
}

#[test]
fn search_matches_brute_force() {
    for area in [1, 2, 3, 5, 6, 7, 13, 14, 15, 21, 30, 34, 41] {
        let found = search_params(&int(area as i64), 150);
        assert_eq!(pairs(&found), oracle_search(area, 150), "area {area}");
    }
}

#[test]
fn search_handles_rational_areas() {
    // 6/4 is 6 up to a square factor
    let found = search_params(&(int(6) / int(4)), 60);
    assert_eq!(pairs(&found), vec![(1, 2), (24, 25)]);
    for p in &found {
        assert_eq!(p.area(), &(int(6) / int(4)));
    }
}

#[test]
fn realized_images_are_candidates_and_form_a_group() {
    for area in [5u64, 6, 7, 14, 15, 21, 34, 41] {
        let found = search_params(&int(area as i64), 200);
        let mut realized = images(&found);
        realized.insert(WImage::identity());
        let candidates = coset_candidates(area);
        assert!(realized.is_subset(&candidates), "area {area}");
        // closed under products, hence a power of two in size
        for a in &realized {
            for b in &realized {
                assert!(realized.contains(&a.mul(b)), "area {area}: {a}·{b}");
            }
        }
        assert!(
            realized.len().is_power_of_two(),
            "area {area}: {}",
            realized.len()
        );
    }
}

#[test]
fn candidate_counts() {
    // pairwise coprime b, c, d with bcd | A
    assert_eq!(coset_candidates(1).len(), 1);
    assert_eq!(coset_candidates(5).len(), 4);
    assert_eq!(coset_candidates(6).len(), 16);
    assert_eq!(coset_candidates(34).len(), 16);
    assert_eq!(coset_candidates(30).len(), 64);
}

#[test]
fn reduction_of_doubles_and_sums_replays() {
    let reps: Vec<ParamOrIdentity> = ["0", "8/17", "8/9", "32/49"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let r = RepresentativeSet::new(&int(34), &reps).unwrap();
    for s in ["8/9", "8/17", "32/49"] {
        let t = membership(&s.parse().unwrap(), &int(34)).unwrap();
        for d in iterate_double(&t, 3).into_iter().skip(1) {
            let dec = reduce(&d, &r).unwrap();
            dec.verify().unwrap();
            assert!(dec.last.param().denom() < &(r.max_denominator() * 2u32));
            let (terms, top) = dec.relation();
            assert_eq!(terms.len(), dec.steps.len());
            assert_eq!(top, num_bigint::BigUint::from(1u32) << dec.steps.len());
        }
    }
}

#[test]
fn reduction_needs_every_coset() {
    let reps: Vec<ParamOrIdentity> = ["0", "8/17"].iter().map(|s| s.parse().unwrap()).collect();
    let r = RepresentativeSet::new(&int(34), &reps).unwrap();
    let t = membership(&"8/9".parse().unwrap(), &int(34)).unwrap();
    let big = double_param(&double_param(&t));
    let t2 = congruent_core::add_params(&big.clone().into(), &t.into()).unwrap();
    let t2 = t2.param().unwrap().clone();
    assert!(matches!(reduce(&t2, &r), Err(Error::MissingCoset(_))));
}

#[test]
fn generators_reproduce_the_known_tables() {
    let r6 =
        RepresentativeSet::new(&int(6), &["0".parse().unwrap(), "1/2".parse().unwrap()]).unwrap();
    let g: Vec<String> = generators(&r6, None)
        .unwrap()
        .iter()
        .map(|p| p.to_string())
        .collect();
    assert_eq!(g, vec!["1/2"]);

    let r5 =
        RepresentativeSet::new(&int(5), &["0".parse().unwrap(), "4/5".parse().unwrap()]).unwrap();
    let g: Vec<String> = generators(&r5, None)
        .unwrap()
        .iter()
        .map(|p| p.to_string())
        .collect();
    assert_eq!(g, vec!["4/5"]);
}

#[test]
fn representative_set_from_search_keeps_smallest() {
    let found = search_params(&int(34), 400);
    let r = RepresentativeSet::from_search(&int(34), &found, FactorBound::DEFAULT).unwrap();
    let shown: Vec<String> = r.reps().iter().map(|m| m.to_string()).collect();
    assert_eq!(shown, vec!["0", "8/9", "8/17", "32/49"]);
    assert_eq!(r.max_denominator(), num_bigint::BigUint::from(49u32));
}

#[test]
fn small_factor_bound_is_reported() {
    // 1 + 2/1571 = 11²·13/1571, out of reach of trial division to 10
    let t: ParamOrIdentity = "2/1571".parse().unwrap();
    assert!(matches!(
        w_map_bounded(&t, FactorBound(10)),
        Err(Error::IncompleteFactorization { .. })
    ));
    assert_eq!(w_map(&t).unwrap(), WImage::new(3 * 523 * 1571, 13 * 1571));
}
