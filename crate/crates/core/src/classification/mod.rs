//! Farran–Robertson sections, the symmetric space table data, and the
//! end-to-end verification drivers.

pub mod formula;
mod fr;
mod tables;
mod theorem;
mod witness;

pub use fr::{
    diagonal_frame, fr_polytope, fr_polytope_symmetry, fr_section_on_frame, FrOptions, FrSection, FrSymmetry, SectionSampling,
    FR_COORD_TOL, FR_SAMPLES, FR_VERTEX_TOL,
};
pub use tables::{
    mr_table_all, mr_table_lookup, table_consistency_check, Bindings, CheckStatus, Coincidence, ConsistencyEntry, ConsistencyReport,
    EjaAnnotation, EjaTableRow, EvaluatedAnnotation, EvaluatedEja, EvaluatedRow, MrTableRow, Param, RootSpaceCase, Series, Tables,
    BUILTIN_TABLES, SWEEP, TABLES_ENV,
};
pub use theorem::{
    builtin_catalog, verify_converse_on_polytopes, verify_main_theorem_if_direction, Check, ConverseEntry, ConverseOptions,
    ConverseReport, Status, TheoremReport, TheoremTarget, BARYCENTER_TOL, DRIVER_FR_SAMPLES, FRAME_TOL, SPECTRAL_TOL,
};
pub use witness::{recheck, Recheck, Witness};
