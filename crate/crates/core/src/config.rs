use serde::{Deserialize, Serialize};

/// Enumeration and size limits. These are configuration, not constants:
/// the defaults keep every exhaustive search in the few-seconds range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    /// Members of a family for anything that walks the subfamily lattice.
    pub max_members: usize,
    /// Vertices of a complex whose induced subcomplexes are enumerated.
    pub max_vertices: usize,
    /// Non-empty subfamily intersections visited in a single enumeration.
    pub max_intersections: usize,
    /// Cells of a single complex handed to the homology engine.
    pub max_cells: usize,
    /// Total rank of a Mayer-Vietoris double complex.
    pub max_total_rank: usize,
    /// Grid cells per axis accepted by the generators.
    pub max_extent: usize,
    /// Search nodes visited by the transversal solver.
    pub max_search_nodes: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_members: 12,
            max_vertices: 14,
            max_intersections: 200_000,
            max_cells: 250_000,
            max_total_rank: 60_000,
            max_extent: 64,
            max_search_nodes: 5_000_000,
        }
    }
}

impl Caps {
    pub fn validate(&self) -> crate::Result<()> {
        let all = [
            self.max_members,
            self.max_vertices,
            self.max_intersections,
            self.max_cells,
            self.max_total_rank,
            self.max_extent,
            self.max_search_nodes,
        ];
        if all.contains(&0) {
            return Err(crate::error::malformed("caps must be positive"));
        }
        if self.max_members > 64 {
            return Err(crate::error::malformed(
                "max_members above 64 is not supported (subsets are bitmasks)",
            ));
        }
        Ok(())
    }
}
