#![allow(dead_code)]

use std::sync::Arc;

use topohelly::complex::{Ambient, CellSet, CubicalComplex, SetFamily, SimplicialComplex};

/// Family of closed boxes inside the grid [0, extent]^dim.
pub fn boxes(dim: usize, extent: i64, bs: &[&[(i64, i64)]]) -> SetFamily {
    let ambient = Arc::new(Ambient::Cubical(CubicalComplex::grid(dim, extent).unwrap()));
    let members = bs
        .iter()
        .enumerate()
        .map(|(i, b)| (format!("F{i}"), cells(&ambient.box_cells(b).unwrap())))
        .collect();
    SetFamily::new(ambient, members).unwrap()
}

/// Family whose members are unions of boxes.
pub fn box_unions(dim: usize, extent: i64, members: &[&[&[(i64, i64)]]]) -> SetFamily {
    let ambient = Arc::new(Ambient::Cubical(CubicalComplex::grid(dim, extent).unwrap()));
    let ms = members
        .iter()
        .enumerate()
        .map(|(i, parts)| {
            let all: Vec<usize> = parts.iter().flat_map(|b| ambient.box_cells(b).unwrap()).collect();
            (format!("F{i}"), cells(&all))
        })
        .collect();
    SetFamily::new(ambient, ms).unwrap()
}

/// Family of subcomplexes of a simplicial ambient, each the closure of the
/// listed simplices.
pub fn simplicial(facets: &[&[i64]], members: &[&[&[i64]]]) -> SetFamily {
    let k = SimplicialComplex::from_facets(facets.iter().map(|f| f.to_vec())).unwrap();
    let ambient = Arc::new(Ambient::Simplicial(k));
    let ms = members
        .iter()
        .enumerate()
        .map(|(i, parts)| {
            let all: Vec<usize> = parts.iter().flat_map(|s| ambient.simplex_cells(s).unwrap()).collect();
            (format!("F{i}"), cells(&all))
        })
        .collect();
    SetFamily::new(ambient, ms).unwrap()
}

pub fn cells(idx: &[usize]) -> CellSet {
    CellSet::from_unsorted(idx.iter().map(|&c| c as u32).collect())
}

/// The square ring [c-r_out, c+r_out]^2 minus the open box (c-r_in, c+r_in)^2.
pub fn square_ring(center: (i64, i64), r_in: i64, r_out: i64) -> Vec<Vec<(i64, i64)>> {
    let (x, y) = center;
    vec![
        vec![(x - r_out, x + r_out), (y - r_out, y - r_in)],
        vec![(x - r_out, x + r_out), (y + r_in, y + r_out)],
        vec![(x - r_out, x - r_in), (y - r_out, y + r_out)],
        vec![(x + r_in, x + r_out), (y - r_out, y + r_out)],
    ]
}
