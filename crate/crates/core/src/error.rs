//! Error types shared across the crate.

use thiserror::Error;

/// Violations of the group axioms found while validating a Cayley table.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("table entry at ({row}, {col}) is {value}, out of range for order {order}")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("table is not square: row {row} has length {len}, expected {order}")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("associativity fails on ({a}, {b}, {c})")]
    NonAssociative { a: usize, b: usize, c: usize },
    #[error("element {element} has no two-sided inverse")]
    NoInverse { element: usize },
    #[error("subgroup is not closed or misses identity/inverses (witness element {witness})")]
    NotSubgroup { witness: usize },
    #[error("map is not a homomorphism: fails on ({a}, {b})")]
    NotHomomorphism { a: usize, b: usize },
    #[error("homomorphism is not injective: {a} and {b} share an image")]
    NotInjective { a: usize, b: usize },
}

/// Violations found while validating posets, actions and orbit spaces.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("relation index {index} out of range for {points} points")]
    PointOutOfRange { index: usize, points: usize },
    #[error("relation is not reflexive at {point}")]
    NotReflexive { point: usize },
    #[error("antisymmetry fails on ({a}, {b})")]
    AntisymmetryViolation { a: usize, b: usize },
    #[error("transitivity fails on ({a}, {b}, {c})")]
    NotTransitive { a: usize, b: usize, c: usize },
    #[error("action of element {g} is not defined or out of range at point {point}")]
    ActionOutOfRange { g: usize, point: usize },
    #[error("identity does not act trivially at point {point}")]
    IdentityActs { point: usize },
    #[error("action is not multiplicative: ({g}, {h}) disagree at point {point}")]
    NotAnAction { g: usize, h: usize, point: usize },
    #[error("element {g} does not act by an order automorphism (witness pair ({a}, {b}))")]
    NotOrderAutomorphism { g: usize, a: usize, b: usize },
}

/// Violations found while validating maps of groupoids and Morita data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("group data violated: {0}")]
    Group(#[from] GroupError),
    #[error("space data violated: {0}")]
    Space(#[from] SpaceError),
    #[error("space map is not order-preserving on ({a}, {b})")]
    NotOrderPreserving { a: usize, b: usize },
    #[error("map is not equivariant at group element {k}, point {z}")]
    NotEquivariant { k: usize, z: usize },
    #[error("transformation is not an arrow from source to target at point {z}")]
    ArrowMismatch { z: usize },
    #[error("naturality fails at group element {k}, point {z}")]
    NaturalityFailure { k: usize, z: usize },
    #[error("transformation is not locally constant: differs on comparable pair ({a}, {b})")]
    NotLocallyConstant { a: usize, b: usize },
    #[error("not essentially surjective: no witness reaches the orbit of point {y}")]
    NotEssentiallySurjective { y: usize },
    #[error(
        "not fully faithful at pair ({z}, {z2}): {arrows_source} source arrows vs {arrows_target} target arrows"
    )]
    NotFullyFaithful {
        z: usize,
        z2: usize,
        arrows_source: usize,
        arrows_target: usize,
    },
    #[error("image of the minimal open set of {z} is not open: point {y} below the image has no preimage below {z}")]
    NotOpen { z: usize, y: usize },
    #[error("subgroup is not normal (witness conjugation of {l} by {g})")]
    NotNormal { l: usize, g: usize },
    #[error("subgroup does not act freely: element {l} fixes point {z}")]
    NotFree { l: usize, z: usize },
    #[error("kernel of the homomorphism does not act freely; input was not an essential equivalence")]
    KernelNotFree,
    #[error("no equivariant order-isomorphism onto the declared target")]
    NoIsomorphismFound,
    #[error("left leg of the span is not an essential equivalence: {0}")]
    LeftLegFails(Box<GroupoidError>),
    #[error("right leg of the span fails validation: {0}")]
    RightLegFails(Box<GroupoidError>),
    #[error("Morita search exceeded its budget of {budget}")]
    BudgetExceeded { budget: usize },
    #[error("source and target data do not line up: {0}")]
    Mismatch(String),
}

/// Violations found while validating or composing bibundles.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BibundleError {
    #[error("groupoid data violated: {0}")]
    Groupoid(#[from] GroupoidError),
    #[error("space data violated: {0}")]
    Space(#[from] SpaceError),
    #[error("anchor {anchor} is not order-preserving on ({a}, {b})")]
    AnchorNotOrderPreserving { anchor: char, a: usize, b: usize },
    #[error("anchor {anchor} is incompatible with the action at element {g}, point {e}")]
    AnchorActionMismatch { anchor: char, g: usize, e: usize },
    #[error("left and right actions do not commute at ({g}, {e}, {h})")]
    ActionsDoNotCommute { g: usize, e: usize, h: usize },
    #[error("middle groupoids of the composition do not match")]
    MiddleMismatch,
    #[error("right anchor is not a principal bundle: {reason}")]
    NotPrincipal { reason: String },
    #[error("composition lost principality: {reason}")]
    PrincipalityLost { reason: String },
    #[error("input map is not an essential equivalence: {0}")]
    NotEssentialEquivalence(Box<GroupoidError>),
    #[error("strictification made inconsistent choices at point {y}; this is a bug")]
    InconsistentChoices { y: usize },
}

/// Violations found while validating generalized paths.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("segment {segment} is empty")]
    EmptySegment { segment: usize },
    #[error("point {point} of segment {segment} is out of range")]
    PointOutOfRange { segment: usize, point: usize },
    #[error("fence broken in segment {segment} between positions {at} and {next}")]
    BrokenFence {
        segment: usize,
        at: usize,
        next: usize,
    },
    #[error("jump {jump} does not carry the end of its segment to the start of the next")]
    BrokenJump { jump: usize },
    #[error("paths have different shapes and cannot be compared without padding")]
    ShapeMismatch,
    #[error("endpoint of the first path differs from the start of the second")]
    EndpointMismatch,
}

/// Failures of the category computations (budgets only; absence of a cover
/// is a value, not an error).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("enumerating invariant opens would exceed the budget of {budget} sets")]
    BudgetExceeded { budget: usize },
}
