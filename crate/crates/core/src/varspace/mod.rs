//! Products of affine and projective spaces, points in them, and polynomial
//! maps between them.

mod json;
mod map;
mod space;

pub use json::{MapJson, PointJson};
pub use map::{compose, evaluate_map, product_map, PolyMap};
pub use space::{Factor, FactorKind, Slot, Space, SpacePoint, COMPLEX_POINT_TOL};

use thiserror::Error;

use crate::exactpoly::PolyError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("map is not multihomogeneous: {0}")]
    NotMultihomogeneous(String),
    #[error("base point hit in target block {block} at {witness}")]
    BasePointHit { block: usize, witness: SpacePoint },
    #[error(transparent)]
    Poly(#[from] PolyError),
}
