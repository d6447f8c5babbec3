//! Exact arithmetic with cyclotomic integers and π-adic valuations.

mod matrices;
mod ring;
mod verify;

pub use matrices::{
    correlation_matrix, gauss_sum, ultrametric_matrix, CycloMatrix, Padic, DEFAULT_GAUSS_CAP,
    DEFAULT_MATRIX_CAP,
};
pub use ring::{cyclotomic_poly, CycloElem, CycloRing, ScaledCyclo, Valuation};
pub use verify::{
    base_conversion_report, min_correlation_valuation, planar_via_valuation, reduction_report,
    verify_base_conversion, verify_base_conversion_bound, verify_degree_consequence, verify_reduction,
    verify_stickelberger, CheckReport, Deviation,
};
