//! Finite models for group actions and orbifold groupoids.
//!
//! Spaces are finite topological spaces encoded as finite posets (open sets
//! are the down-sets, continuous maps are the order-preserving maps), groups
//! are finite groups given by Cayley tables, and actions are by order
//! automorphisms. On top of this base the crate computes:
//!
//! * equivariant invariants: orbits, isotropy, fixed-point subspaces,
//!   orbit spaces, G-connectedness ([`gspace`], [`paths`]);
//! * translation groupoids, equivariant maps, essential equivalences and
//!   Morita equivalence, including the quotient/induction factorization of
//!   essential equivalences ([`groupoid`]);
//! * the Hilsum-Skandalis calculus: principal bibundles, their composition,
//!   global sections, natural conjugacy of homomorphisms, and
//!   strictification of generalized maps to G-maps ([`bibundle`]);
//! * generalized paths and groupoid connectedness ([`paths`]);
//! * equivariant, groupoid and orbifold Lusternik-Schnirelmann category
//!   ([`category`]).
//!
//! Everything is exact and deterministic: all searches are exhaustive at
//! desk scale, returned collections are sorted, and reported witnesses are
//! independent of evaluation order.

pub mod bibundle;
pub mod category;
pub mod corpus;
pub mod error;
pub mod group;
pub mod groupoid;
pub mod gspace;
pub mod models;
pub mod paths;
pub mod poset;

pub use bibundle::{Bibundle, GMapResult, PrincipalityCertificate};
pub use category::{CategoryResult, CategoryValue, CompressionWitness, InvariantOpen};
pub use error::{
    BibundleError, CategoryError, GroupError, GroupoidError, PathError, SpaceError,
};
pub use group::{FiniteGroup, Homomorphism, Subgroup};
pub use groupoid::{
    EquivariantMap, EssentialEquivalence, GeneralizedMap, MoritaSpan, NaturalTransformation,
    TranslationGroupoid,
};
pub use gspace::{GSpace, OrbitSpace, SubPoset};
pub use paths::{Fence, GConnectedness, GeneralizedPath, PathEquivalenceWitness};
pub use poset::Poset;
