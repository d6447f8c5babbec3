//! Degree-bound witnesses, the exceptional families, the exhaustive scan,
//! and the explicit constructions used to classify planar monomials.

mod classify;
mod constructions;
mod exceptions;
mod scan;
mod witness;

pub use classify::{classify_planar_monomials, Classification, DEFAULT_CLASSIFY_CAP};
pub use constructions::{
    lemma8_witness, power2_case3_witness, prime_field_witness, technical_lemma_check, triage_check,
    verify_theorem1, DegreeBoundReport, Power2Variant, TechnicalReport, TriageReport, TupleFailure,
};
pub use exceptions::{exceptions_for, ExceptionLabel};
pub use scan::{
    conjecture_scan, BaseFilter, CellReport, Failure, ScanCheckpoint, ScanConfig, ScanOptions, ScanReport,
    CHECKPOINT_VERSION, DEFAULT_BLOCK, DEFAULT_SCAN_CAP,
};
pub use witness::{
    all_witness_exponents, family_candidates, margin, witness_search, Bound, SearchStrategy, Strategy, Witness,
    DEFAULT_BUDGET, MAX_SEARCH_Q,
};
