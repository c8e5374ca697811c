mod common;

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use topohelly::complex::{Ambient, SetFamily, SimplicialComplex};
use topohelly::config::Caps;
use topohelly::generators::{generate, DiscretePattern, GeneratorKind, GeneratorSpec};
use topohelly::helly::{
    alpha_fraction, beta_n_floor, fractional_helly_check, intersection_depth, pq_condition,
    transversal_number,
};

use common::{boxes, cells, simplicial};

/// Members given as lists of points 0..universe.
fn points(universe: usize, members: &[Vec<usize>]) -> SetFamily {
    let k = SimplicialComplex::from_facets((0..universe as i64).map(|v| vec![v])).unwrap();
    let ambient = Arc::new(Ambient::Simplicial(k));
    let ms = members
        .iter()
        .enumerate()
        .map(|(i, pts)| {
            let idx: Vec<usize> = pts.iter().map(|&p| ambient.simplex_cells(&[p as i64]).unwrap()[0]).collect();
            (format!("F{i}"), cells(&idx))
        })
        .collect();
    SetFamily::new(ambient, ms).unwrap()
}

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn hollow_triangle() -> SetFamily {
    simplicial(&[&[0, 1], &[1, 2], &[0, 2]], &[&[&[0, 1]], &[&[1, 2]], &[&[0, 2]]])
}

/// Four members over the points x123, x124, x134: exactly three of the
/// four triples meet.
fn three_of_four_triples() -> SetFamily {
    points(3, &[vec![0, 1, 2], vec![0, 1], vec![0, 2], vec![1, 2]])
}

#[test]
fn depth_examples() {
    let shared = boxes(2, 6, &[&[(0, 3), (0, 3)], &[(2, 5), (1, 4)], &[(1, 6), (2, 6)]]);
    let d = intersection_depth(&shared).unwrap();
    assert_eq!(d.depth, 3);
    let c = d.cell.unwrap();
    assert!(shared.members().iter().all(|m| m.contains(c)));

    let disjoint = points(4, &[vec![0], vec![1], vec![2], vec![3]]);
    assert_eq!(intersection_depth(&disjoint).unwrap().depth, 1);

    let tri = hollow_triangle();
    assert_eq!(intersection_depth(&tri).unwrap().depth, 2);

    let empty = points(2, &[]);
    assert_eq!(intersection_depth(&empty).unwrap().depth, 0);
}

#[test]
fn alpha_examples() {
    let caps = Caps::default();
    let shared = boxes(1, 4, &[&[(0, 2)], &[(1, 3)], &[(2, 4)]]);
    assert_eq!(alpha_fraction(&shared, 2, &caps).unwrap().0, ratio(1, 1));
    let disjoint = points(3, &[vec![0], vec![1], vec![2]]);
    assert_eq!(alpha_fraction(&disjoint, 1, &caps).unwrap().0, ratio(0, 1));
    assert_eq!(alpha_fraction(&three_of_four_triples(), 2, &caps).unwrap().0, ratio(3, 4));
    assert_eq!(alpha_fraction(&hollow_triangle(), 1, &caps).unwrap().0, ratio(1, 1));
    assert_eq!(alpha_fraction(&hollow_triangle(), 2, &caps).unwrap().0, ratio(0, 1));
    assert!(alpha_fraction(&hollow_triangle(), 3, &caps).is_err());
}

#[test]
fn fractional_helly_extremes() {
    let caps = Caps::default();
    let shared = boxes(2, 5, &[&[(0, 3), (0, 3)], &[(1, 4), (1, 5)], &[(2, 5), (0, 4)], &[(2, 3), (2, 3)]]);
    let r = fractional_helly_check(&shared, 2, None, &caps).unwrap();
    assert_eq!(r.alpha.0, ratio(1, 1));
    assert_eq!(r.beta_n_floor, 4);
    assert_eq!(r.depth.depth, 4);
    assert!(r.verdict);

    let disjoint = points(4, &[vec![0], vec![1], vec![2], vec![3]]);
    let r = fractional_helly_check(&disjoint, 1, None, &caps).unwrap();
    assert_eq!(r.alpha.0, ratio(0, 1));
    assert_eq!(r.beta_n_floor, 0);
    assert!(r.verdict);

    // β = 1 - (1/4)^{1/3} ≈ 0.370, βn ≈ 1.48
    let r = fractional_helly_check(&three_of_four_triples(), 2, None, &caps).unwrap();
    assert_eq!(r.beta_n_floor, 1);
    assert_eq!(r.depth.depth, 3);
    assert_eq!(r.intersecting_subsets, 3);
    assert_eq!(r.total_subsets, 4);
    assert!((r.beta_n_decimal - 1.4801).abs() < 1e-3);
}

#[test]
fn fraction_serializes_as_num_den() {
    let r = fractional_helly_check(&three_of_four_triples(), 2, None, &Caps::default()).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["alpha"], serde_json::json!({"num": 3, "den": 4}));
    assert_eq!(v["beta_n_floor"], 1);
}

#[test]
fn pq_examples() {
    let caps = Caps::default();
    let shared = boxes(1, 4, &[&[(0, 2)], &[(1, 3)], &[(2, 4)], &[(1, 2)]]);
    for (p, q) in [(1, 1), (2, 2), (3, 2), (4, 4)] {
        assert!(pq_condition(&shared, p, q, &caps).unwrap().holds);
    }

    let disjoint = points(3, &[vec![0], vec![1], vec![2]]);
    let r = pq_condition(&disjoint, 2, 2, &caps).unwrap();
    assert!(!r.holds);
    assert_eq!(r.witness, Some(vec![0, 1]));

    let tri = hollow_triangle();
    assert!(pq_condition(&tri, 3, 2, &caps).unwrap().holds);
    let r = pq_condition(&tri, 3, 3, &caps).unwrap();
    assert!(!r.holds);
    assert_eq!(r.witness, Some(vec![0, 1, 2]));

    let r = pq_condition(&tri, 5, 2, &caps).unwrap();
    assert!(r.holds && r.vacuous);
    assert!(pq_condition(&tri, 2, 3, &caps).is_err());
    assert!(pq_condition(&tri, 2, 0, &caps).is_err());
}

#[test]
fn transversal_examples() {
    let caps = Caps::default();
    let shared = boxes(2, 4, &[&[(0, 2), (0, 2)], &[(1, 3), (1, 4)], &[(2, 2), (0, 4)]]);
    assert_eq!(transversal_number(&shared, &caps).unwrap().tau, 1);

    for n in 2..=8 {
        let mut spec = GeneratorSpec::new(GeneratorKind::DiscreteSets, 0, 0, n, 0);
        spec.pattern = Some(DiscretePattern::ComplementSingletons);
        let f = generate(&spec, &caps).unwrap();
        let t = transversal_number(&f, &caps).unwrap();
        assert_eq!(t.tau, 2, "n = {n}");
        assert!(f.members().iter().all(|m| t.cells.iter().any(|&c| m.contains(c))));

        spec.pattern = Some(DiscretePattern::Disjoint);
        let f = generate(&spec, &caps).unwrap();
        assert_eq!(transversal_number(&f, &caps).unwrap().tau, n, "n = {n}");
    }

    let with_empty = points(2, &[vec![0], vec![]]);
    assert!(transversal_number(&with_empty, &caps).is_err());
}

#[test]
fn transversal_search_budget() {
    // every pair of 8 points: a vertex cover of K_8, τ = 7
    let pairs = subsets_of(8, 2);
    let f = points(8, &pairs);
    assert_eq!(transversal_number(&f, &Caps::default()).unwrap().tau, 7);
    let caps = Caps { max_search_nodes: 5, ..Caps::default() };
    assert!(matches!(transversal_number(&f, &caps), Err(topohelly::Error::ResourceLimit { .. })));
}

/// Smallest number of points covering every member, by trying every
/// subset of the universe in order of size.
fn brute_tau(universe: usize, members: &[Vec<usize>]) -> usize {
    let masks: Vec<u32> = members.iter().map(|m| m.iter().fold(0, |a, &p| a | 1 << p)).collect();
    (0u32..1 << universe)
        .filter(|s| masks.iter().all(|m| m & s != 0))
        .map(|s| s.count_ones() as usize)
        .min()
        .unwrap()
}

fn brute_depth(universe: usize, members: &[Vec<usize>]) -> usize {
    (0..universe).map(|p| members.iter().filter(|m| m.contains(&p)).count()).max().unwrap_or(0)
}

fn subsets_of(n: usize, size: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == size)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

fn brute_pq(members: &[Vec<usize>], p: usize, q: usize) -> bool {
    let meets = |g: &[usize]| members[g[0]].iter().any(|x| g.iter().all(|&i| members[i].contains(x)));
    subsets_of(members.len(), p).iter().all(|ps| {
        subsets_of(p, q).iter().any(|qs| {
            let g: Vec<usize> = qs.iter().map(|&i| ps[i]).collect();
            meets(&g)
        })
    })
}

fn point_family() -> impl Strategy<Value = (usize, Vec<Vec<usize>>)> {
    (2usize..9).prop_flat_map(|u| {
        let member = proptest::collection::btree_set(0..u, 1..=u).prop_map(|s| s.into_iter().collect());
        (Just(u), proptest::collection::vec(member, 1..9))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transversal_matches_brute_force((u, ms) in point_family()) {
        let f = points(u, &ms);
        let t = transversal_number(&f, &Caps::default()).unwrap();
        prop_assert_eq!(t.tau, brute_tau(u, &ms));
        prop_assert!(f.members().iter().all(|m| t.cells.iter().any(|&c| m.contains(c))));
        let depth = intersection_depth(&f).unwrap().depth;
        prop_assert_eq!(depth, brute_depth(u, &ms));
        prop_assert!(t.tau * depth >= ms.len());
        // a tiny budget skips the exhaustive phase
        let tight = Caps { max_search_nodes: 3, ..Caps::default() };
        match transversal_number(&f, &tight) {
            Ok(t) => prop_assert_eq!(t.tau, brute_tau(u, &ms)),
            Err(e) => {
                let capped = matches!(e, topohelly::Error::ResourceLimit { .. });
                prop_assert!(capped, "unexpected error {}", e);
            }
        }
    }

    #[test]
    fn pq_matches_brute_force((u, ms) in point_family(), p in 1usize..5, dq in 0usize..4) {
        let q = p.saturating_sub(dq).max(1);
        let f = points(u, &ms);
        let r = pq_condition(&f, p, q, &Caps::default()).unwrap();
        if ms.len() >= p {
            prop_assert_eq!(r.holds, brute_pq(&ms, p, q));
        } else {
            prop_assert!(r.holds && r.vacuous);
        }
        if r.holds {
            for q2 in 1..q {
                prop_assert!(pq_condition(&f, p, q2, &Caps::default()).unwrap().holds);
            }
        }
    }

    #[test]
    fn alpha_ignores_member_order((u, ms) in point_family(), k in 0usize..3, rot in 0usize..8) {
        prop_assume!(k < ms.len());
        let mut moved = ms.clone();
        moved.rotate_left(rot % ms.len());
        moved.reverse();
        let caps = Caps::default();
        let a = alpha_fraction(&points(u, &ms), k, &caps).unwrap();
        let b = alpha_fraction(&points(u, &moved), k, &caps).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn exact_floor_agrees_with_float(num in 0i64..=97, den in 1i64..=97, k in 0usize..4, n in 1usize..40) {
        prop_assume!(num <= den);
        let a = ratio(num, den);
        let exact = beta_n_floor(&a, k, n);
        let x = (1.0 - (1.0 - num as f64 / den as f64).powf(1.0 / (k + 1) as f64)) * n as f64;
        if (x - x.round()).abs() > 1e-9 {
            prop_assert_eq!(exact, x.floor() as usize);
        } else {
            prop_assert!(exact == x.round() as usize || exact + 1 == x.round() as usize);
        }
    }

    #[test]
    fn random_boxes_satisfy_the_bound(seed in 0u64..1000, n in 3usize..12, k in 1usize..3) {
        let caps = Caps::default();
        let f = generate(&GeneratorSpec::new(GeneratorKind::Boxes, 2, 12, n, seed), &caps).unwrap();
        let r = fractional_helly_check(&f, k, Some(true), &caps).unwrap();
        prop_assert!(r.verdict, "{:?}", r);
        let t = transversal_number(&f, &caps).unwrap();
        prop_assert!(t.tau * r.depth.depth >= n);
    }
}

#[test]
fn exact_floor_on_boundaries() {
    // 1 - 7/8 = (1/2)^3, so β = 1/2 exactly
    assert_eq!(beta_n_floor(&ratio(7, 8), 2, 10), 5);
    assert_eq!(beta_n_floor(&ratio(3, 4), 1, 6), 3);
    assert_eq!(beta_n_floor(&ratio(1, 1), 3, 9), 9);
    assert_eq!(beta_n_floor(&ratio(0, 1), 3, 9), 0);
}
