mod chain;
mod cubical;
mod family;
mod simplicial;

pub use chain::ChainComplex;
pub use cubical::{Cube, CubicalComplex};
pub use family::{Ambient, CellLabel, CellSet, SetFamily};
pub use simplicial::{SimplicialComplex, Vertex, MAX_FACET_SIZE};
