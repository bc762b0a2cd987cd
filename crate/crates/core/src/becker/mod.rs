//! Normalizing equations towards `a_0 = 1` and certifying regularity.

mod certify;
mod normalize;
mod search;
mod structure;

pub use certify::{certify_irregular, certify_regular, Certificate, Criterion, Minimality, Verdict};
pub use normalize::{
    g_series, normalization_violations, normalize, orbit_factor, stabilization_index, verify_normalization,
    BeckerNormalization,
};
pub use search::{becker_form_search, BeckerSearch, SearchBounds};
pub use structure::{
    product_reciprocal_rep, reciprocal_rep, recompose, structure_decompose, witness_display, witness_equation,
    StructureDecomposition,
};
