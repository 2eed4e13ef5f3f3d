//! Classification of self-dual codes over small finite fields by the
//! neighbor method, with exact spectral analysis of the resulting neighbor
//! operators on the space of equivalence classes.
//!
//! The pipeline: pick a code family (one of six classical types behind the
//! [`types::TypeFamily`] trait), enumerate the whole family by closing the
//! 1-neighbor relation from a seed code ([`neighbor::classify`]), then build
//! the neighbor-count operator on the class basis ([`hecke`]) and verify by
//! exact rational arithmetic that its eigenspace decomposition matches the
//! closed-form eigenvalues of the family, cross-checked against the genus-m
//! weight enumerator filtration ([`wenum`]).
//!
//! ```
//! use selfdual::neighbor::{classify, ClassifyOptions};
//! use selfdual::{hecke, types};
//!
//! // the two classes of binary self-dual codes of length 8
//! let family = types::lookup("2eI")?;
//! let db = classify(family.as_ref(), 8, None, &ClassifyOptions::default())?;
//! assert_eq!(db.class_count(), 2);
//!
//! // the neighbor operator is self-adjoint for the |Aut|-weighted product
//! // and its predicted eigenspaces fill the whole class space
//! let t = hecke::hecke_matrix(&db, 1, 1 << 20)?;
//! assert!(hecke::check_self_adjoint(&t, &db).ok);
//! let spectrum = hecke::spectrum(&t, family.as_ref(), &db)?;
//! assert_eq!(spectrum.y_dims_trimmed()?, vec![1, 1]);
//! # Ok::<(), selfdual::Error>(())
//! ```

pub mod canon;
pub mod code;
pub mod db;
pub mod enumerate;
pub mod error;
pub mod field;
pub mod hecke;
pub mod neighbor;
pub mod perm;
pub mod ratmat;
pub mod rng;
pub mod types;
pub mod vecpack;
pub mod verify;
pub mod wenum;

pub use canon::{are_equivalent, canonical_form, CanonicalCode, Fingerprint};
pub use code::{Code, CodeRepr};
pub use db::{ClassDatabase, CodeClass, NeighborRecord};
pub use error::{Error, Result};
pub use field::{Field, FieldSpec, FormKind};
pub use types::{registry, TypeFamily};
pub use vecpack::PackedVec;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
