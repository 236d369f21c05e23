//! Finite-field subspace families with prescribed intersection dimensions.

pub mod bounds;
pub mod classify;
pub mod constructions;
pub mod error;
pub mod family_file;
pub mod gf;
pub mod oracle;
pub mod spid;
pub mod subspace;
pub mod sweep;

pub use bounds::{check_theorem_2_1, extremal_dim, junta_bound, refined_bound, BoundReport};
pub use classify::{classify_extremal, ClassificationResult, Verdict, Witness};
pub use constructions::{
    build_class_i, build_class_ii, build_class_iii, build_class_iv, build_remark_example,
    ClassIIIParams, ClassIIParams, ClassIParams, ClassIVParams, ConstructionParams,
    RemarkExampleParams,
};
pub use error::{Result, SpidError};
pub use family_file::{FamilyFile, FamilyFileError};
pub use gf::{FVector, FieldPrime};
pub use spid::{
    common_intersection, delta_array, find_max_sunflower, is_junta, is_sunflower_max_dim,
    sort_nonincreasing, verify_spid, DeltaArray, IntersectionProfile, PairDim, SpidFamily,
    SpidViolation, Sunflower,
};
pub use subspace::Subspace;
