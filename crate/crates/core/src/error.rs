use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("classes live on different spaces")]
    SpaceMismatch,
    #[error("cup product degree {degree} exceeds the space dimension {total}")]
    DegreeOverflow { degree: usize, total: usize },
    #[error("mass pairing requires a degree-1 class with strictly positive coefficients")]
    BadKahlerClass,
    #[error("alpha coefficients are defined only on two-factor spaces (got {factors})")]
    NotTwoFactor { factors: usize },
    #[error("dimension {dim} exceeds the cap {cap} for this operation")]
    DimensionCap { dim: usize, cap: usize },
    #[error("ambient dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("cannot build a hull from an empty point set")]
    EmptyPointSet,
    #[error("mixed volume needs exactly {dim} bodies in dimension {dim}, got {got}")]
    BodyCountMismatch { dim: usize, got: usize },
    #[error("matrix is singular: the map is not dominant")]
    SingularMatrix,
    #[error("matrix does not preserve the coordinate fibration: top-right block is nonzero")]
    NotBlockTriangular,
    #[error("root isolation failed: {0}")]
    RootIsolation(String),
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("component {component} is not homogeneous")]
    Inhomogeneous { component: usize },
    #[error("components have mixed degrees: {degrees:?}")]
    MixedDegrees { degrees: Vec<usize> },
    #[error("all components vanish: not a projective map")]
    ZeroMap,
    #[error("composition is identically zero: the inner map is not dominant")]
    ZeroComposition,
    #[error("map is not dominant")]
    NotDominant,
    #[error(
        "orbit hit a degeneracy at step {step} for every sampled base point ({attempts} attempts)"
    )]
    DegenerateOrbit { step: usize, attempts: usize },
    #[error("profile lengths are inconsistent: total {total}, base {base}, relative {relative}")]
    ProfileLengthMismatch {
        total: usize,
        base: usize,
        relative: usize,
    },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
