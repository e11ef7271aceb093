//! Ulrich bundles on Hirzebruch surfaces and on the rational normal
//! scrolls they define.

pub mod cohomology;
pub mod cox;
pub mod error;
pub mod field;
pub mod lattice;
pub mod moduli;
pub mod presentation;
pub mod rng;
pub mod scroll;
pub mod verifier;
pub mod xla;

pub use cohomology::{h0, is_ulrich_line_bundle, line_bundle_cohomology, CohTable};
pub use error::{Error, Result};
pub use field::FieldSpec;
pub use lattice::{canonical_class, euler_char, intersect, DivisorClass, SurfaceParams};
pub use moduli::{compare, hom_counts, paper_dimension, DimensionReport};
pub use presentation::{build_presentation, c1_target, validate_config, Presentation, ScrollConfig};
pub use scroll::{scroll_line_cohomology, slope, triple_product, ScrollClass, ScrollCohomology};
pub use verifier::{verify_config, verify_ulrich, FormMatrix, VerificationReport, VerifyOptions};
pub use xla::ExactMatrix;
