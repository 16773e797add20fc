//! Orientation-preserving involutions of 3-dimensional handlebodies,
//! encoded as graphs with an involution (spines), with their invariants,
//! classification, equivariant moves and an exhaustive census.
//!
//! ```
//! use handlebody::{classify, parse_model};
//!
//! let m = parse_model("involution-graph v1\nvertex v\nedge e v v\nemap e e inverted\n").unwrap();
//! assert_eq!(classify(&m).unwrap().display(), "L_1^{2,0}");
//! ```

pub mod canonical;
pub mod census;
pub mod classify;
pub mod invariants;
pub mod model;
pub mod moves;

pub use canonical::{
    boundary_collisions, build_free, build_nonfree, count_classes, enumerate_classes, CanonicalForm,
};
pub use census::{enumerate_models, verify_theorem, CensusConfig, CensusReport};
pub use classify::{classify, same_class, ClassifyError};
pub use invariants::{boundary_data, fixed_set, genus, is_free, quotient, summarize};
pub use model::{
    equivariant_isomorphic, parse_model, serialize_model, validate, Model, ParseError, RawModel,
};
pub use moves::{contract, normalize, split};
