mod checks;
mod double;
mod sequence;
mod total;

pub use checks::{
    connectivity_level, convergence_check, lemma_check, nerve_theorem_check, nerve_theorem_report,
    spectral_report, ConvergenceRow, FamilyContext, HypothesisFailure, LemmaReport, NerveTheoremReport,
    SpectralReport,
};
pub use double::{mayer_vietoris_double_complex, BasisLabel, DoubleComplex};
pub use sequence::{spectral_page, Coefficients, DifferentialBlock, SpectralPage, SpectralSequence};
pub use total::{total_complex, Filtration, TotalComplex};
