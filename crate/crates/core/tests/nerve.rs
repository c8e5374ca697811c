mod common;

use proptest::prelude::*;
use topohelly::complex::{SetFamily, SimplicialComplex};
use topohelly::config::Caps;
use topohelly::generators::{generate, AnnulusLayout, GeneratorKind, GeneratorSpec};
use topohelly::nerve::{
    homological_connectivity, is_good_cover_homological, is_k_acyclic_family, leray_number, nerve,
    Connectivity, IntersectionTable,
};

use common::{box_unions, boxes, simplicial, square_ring};

fn two_rings() -> SetFamily {
    let a = square_ring((3, 3), 2, 3);
    let b = square_ring((6, 3), 2, 3);
    let a: Vec<&[(i64, i64)]> = a.iter().map(|v| v.as_slice()).collect();
    let b: Vec<&[(i64, i64)]> = b.iter().map(|v| v.as_slice()).collect();
    box_unions(2, 9, &[&a, &b])
}

fn one_ring() -> SetFamily {
    let a = square_ring((3, 3), 1, 3);
    let a: Vec<&[(i64, i64)]> = a.iter().map(|v| v.as_slice()).collect();
    box_unions(2, 6, &[&a])
}

fn sphere_boundary(d: usize) -> SimplicialComplex {
    let v: Vec<i64> = (0..=d as i64 + 1).collect();
    SimplicialComplex::from_facets((0..v.len()).map(|skip| v.iter().copied().filter(|&x| x != skip as i64).collect::<Vec<_>>())).unwrap()
}

#[test]
fn nerve_examples() {
    let caps = Caps::default();
    let shared = boxes(2, 4, &[&[(0, 2), (0, 2)], &[(1, 3), (1, 3)], &[(2, 4), (0, 4)], &[(2, 2), (2, 2)]]);
    let n = nerve(&shared, &caps).unwrap();
    assert_eq!(n.complex().facets(), vec![vec![0, 1, 2, 3]]);
    n.verify(&shared).unwrap();

    let tri = simplicial(&[&[0, 1], &[1, 2], &[0, 2]], &[&[&[0, 1]], &[&[1, 2]], &[&[0, 2]]]);
    let n = nerve(&tri, &caps).unwrap();
    assert_eq!(n.complex().facets(), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    let w = n.witness(&tri, &[0, 1]).unwrap();
    assert_eq!(w.len(), 1);

    // three sets with every pairwise and the triple intersection non-empty
    let fig = box_unions(2, 6, &[
        &[&[(0, 4), (0, 1)], &[(0, 1), (0, 4)]],
        &[&[(0, 4), (0, 1)], &[(3, 4), (0, 4)]],
        &[&[(0, 1), (0, 4)], &[(3, 4), (0, 4)], &[(0, 4), (0, 1)]],
    ]);
    let n = nerve(&fig, &caps).unwrap();
    assert_eq!(n.complex().facets(), vec![vec![0, 1, 2]]);
    assert_eq!(n.complex().dim(), 2);
}

#[test]
fn acyclicity_examples() {
    let caps = Caps::default();
    let good = boxes(2, 6, &[&[(0, 3), (0, 3)], &[(2, 5), (1, 4)], &[(4, 6), (0, 6)]]);
    for k in 0..5 {
        assert!(is_k_acyclic_family(&good, k, &caps).unwrap().verdict);
    }

    let rings = two_rings();
    assert!(is_k_acyclic_family(&rings, 3, &caps).unwrap().verdict);
    let r = is_k_acyclic_family(&rings, 2, &caps).unwrap();
    assert!(!r.verdict);
    assert!(r.violations.iter().all(|v| v.dim + v.subfamily.len() >= 2));

    let r = is_k_acyclic_family(&one_ring(), 1, &caps).unwrap();
    assert!(!r.verdict);
    assert_eq!(r.violations.len(), 1);
    assert_eq!((r.violations[0].subfamily.clone(), r.violations[0].dim), (vec![0], 1));
    assert_eq!(r.violations[0].group.to_string(), "Z");

    let too_many = boxes(1, 20, &vec![&[(0, 1)][..]; 13]);
    assert!(matches!(is_k_acyclic_family(&too_many, 1, &caps), Err(topohelly::Error::ResourceLimit { .. })));
}

#[test]
fn good_cover_examples() {
    let caps = Caps::default();
    let good = boxes(2, 6, &[&[(0, 3), (0, 3)], &[(2, 5), (1, 4)]]);
    assert!(is_good_cover_homological(&good, &caps).unwrap().verdict);
    let r = is_good_cover_homological(&one_ring(), &caps).unwrap();
    assert!(!r.verdict);
    let w = r.witness.unwrap();
    assert_eq!((w.subfamily, w.dim), (vec![0], 1));
    let empty = boxes(2, 2, &[]);
    assert!(is_good_cover_homological(&empty, &caps).unwrap().verdict);
}

#[test]
fn leray_examples() {
    let caps = Caps::default();
    let simplex = SimplicialComplex::from_facets([[0, 1, 2, 3, 4]]).unwrap();
    assert_eq!(leray_number(&simplex, &caps).unwrap().leray, 0);
    assert_eq!(leray_number(&sphere_boundary(1), &caps).unwrap().leray, 2);
    for d in 1..=4 {
        let r = leray_number(&sphere_boundary(d), &caps).unwrap();
        assert_eq!(r.leray, d + 1, "d = {d}");
        assert_eq!(r.witness.unwrap().dim, d);
    }
    let big = SimplicialComplex::from_facets((0..15).map(|v| vec![v])).unwrap();
    assert!(matches!(leray_number(&big, &caps), Err(topohelly::Error::ResourceLimit { .. })));
}

#[test]
fn connectivity_examples() {
    let pts = simplicial(&[&[0], &[1]], &[&[&[0]], &[&[0], &[1]]]);
    assert_eq!(homological_connectivity(&pts, pts.member(0)).unwrap(), Connectivity::Acyclic);
    assert_eq!(homological_connectivity(&pts, pts.member(1)).unwrap(), Connectivity::Level(-1));

    let s = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
    let facets: Vec<&[i64]> = s.iter().map(|f| f.as_slice()).collect();
    let sphere = simplicial(&facets, &[&facets]);
    assert_eq!(homological_connectivity(&sphere, sphere.member(0)).unwrap(), Connectivity::Level(1));

    let empty = simplicial(&[&[0]], &[&[]]);
    assert!(matches!(homological_connectivity(&empty, empty.member(0)), Err(topohelly::Error::EmptySpace)));
}

fn generated(kind: GeneratorKind, n: usize, seed: u64) -> SetFamily {
    let mut spec = GeneratorSpec::new(kind, 2, 10, n, seed);
    if kind == GeneratorKind::Annuli {
        spec.layout = Some(AnnulusLayout::Scattered);
    }
    generate(&spec, &Caps::default()).unwrap()
}

fn kinds() -> impl Strategy<Value = GeneratorKind> {
    prop_oneof![
        Just(GeneratorKind::Boxes),
        Just(GeneratorKind::Annuli),
        Just(GeneratorKind::Mixed),
        Just(GeneratorKind::Adversarial),
        Just(GeneratorKind::PuncturedRegions),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn nerve_of_subfamily_is_induced(kind in kinds(), n in 2usize..7, seed in 0u64..10_000, pick in 1u64..128) {
        let f = generated(kind, n, seed);
        let caps = Caps::default();
        let full = nerve(&f, &caps).unwrap();
        let g: Vec<usize> = (0..n).filter(|i| pick >> i & 1 == 1).collect();
        prop_assume!(!g.is_empty());
        let sub = nerve(&f.subfamily(&g).unwrap(), &caps).unwrap();
        let relabelled: Vec<Vec<usize>> = sub.faces().map(|s| s.iter().map(|&i| g[i]).collect()).collect();
        let gv: Vec<i64> = g.iter().map(|&i| i as i64).collect();
        let present: Vec<i64> = gv.iter().copied().filter(|v| full.complex().vertices().contains(v)).collect();
        let induced: Vec<Vec<usize>> = full.complex().induced(&present).unwrap().faces().iter()
            .map(|s| s.iter().map(|&v| v as usize).collect()).collect();
        prop_assert_eq!(relabelled, induced);
    }

    #[test]
    fn acyclicity_is_monotone_and_bounds_leray(kind in kinds(), n in 2usize..7, seed in 0u64..10_000) {
        let f = generated(kind, n, seed);
        let caps = Caps::default();
        let table = IntersectionTable::compute(&f, &caps).unwrap();
        let tight = table.tightest_acyclic_k();
        let good = topohelly::nerve::good_cover_from_table(&table).verdict;
        prop_assert_eq!(good, tight == 0);
        let mut seen = false;
        for k in 0..=tight + 2 {
            let v = topohelly::nerve::AcyclicityReport::from_table(&table, k).verdict;
            prop_assert!(!seen || v, "k = {} lost acyclicity", k);
            prop_assert_eq!(v, k >= tight);
            seen |= v;
        }
        let leray = leray_number(nerve(&f, &caps).unwrap().complex(), &caps).unwrap().leray;
        prop_assert!(leray <= tight.max(2), "leray {} tight {}", leray, tight);
    }
}
