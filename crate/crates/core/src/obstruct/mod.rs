//! Obstructions to finite surjective charts A² → S for affine surfaces
//! S = S̄ ∖ (D₁ ∪ … ∪ D_s).
//!
//! A surface with such a chart has a boundary made of rational curves, at
//! least ρ(S̄) of them, whose classes span Pic(S̄) ⊗ Q. Each violated
//! condition is an obstruction. Passing every test proves nothing about
//! existence: an INCONCLUSIVE verdict is never a certificate.

mod curve;
mod rank;
mod surface;

pub use curve::{corollary_verdict, curve_smoothness, plane_curve_genus, PlaneCurve, Prefilter, SingularWitness, Smoothness};
pub use curve::PREFILTER_PRIMES;
pub use rank::{rank_mod_p, rank_over_q};
pub use surface::{catalog, theorem_verdict, BoundaryComponent, SurfaceModel};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactpoly::PolyError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObstructError {
    #[error("elimination budget exceeded: {0}")]
    Budget(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("curve is singular: {0}")]
    Singular(SingularWitness),
    #[error(transparent)]
    Poly(PolyError),
}

impl From<PolyError> for ObstructError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::Budget(m) => ObstructError::Budget(m),
            other => ObstructError::Poly(other),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Obstructed,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Reason {
    NonRationalBoundary,
    TooFewComponents,
    ClassesDoNotGenerate,
    PositiveGenusAmpleCurve,
}

impl Reason {
    /// The criterion the reason violates.
    pub fn citation(self) -> &'static str {
        match self {
            Reason::NonRationalBoundary => {
                "the boundary of a surface with a finite surjective chart from A^2 is a union of rational curves"
            }
            Reason::TooFewComponents => {
                "the boundary of a surface with a finite surjective chart from A^2 has at least rho(S-bar) components"
            }
            Reason::ClassesDoNotGenerate => {
                "the boundary components of a surface with a finite surjective chart from A^2 generate Pic(S-bar) (x) Q"
            }
            Reason::PositiveGenusAmpleCurve => {
                "a smooth projective surface minus an ample curve of positive genus admits no finite surjective morphism from A^2"
            }
        }
    }
}

/// Free-form annotations on a verdict.
pub const NOTE_NOT_A_CERTIFICATE: &str = "NO_OBSTRUCTION_FOUND: this does not show that a finite surjective chart exists";
pub const NOTE_SINGULAR: &str = "SINGULAR_HYPOTHESIS_UNMET";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<Reason>,
    /// Data exhibiting the violated condition.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub citation: String,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn obstructed(reason: Reason, witness: String) -> Self {
        Verdict {
            outcome: Outcome::Obstructed,
            reason: Some(reason),
            witness: Some(witness),
            citation: reason.citation().into(),
            notes: vec![],
        }
    }

    pub fn inconclusive(notes: Vec<String>) -> Self {
        let mut notes = notes;
        notes.push(NOTE_NOT_A_CERTIFICATE.into());
        Verdict {
            outcome: Outcome::Inconclusive,
            reason: None,
            witness: None,
            citation: "none of the obstructions applies".into(),
            notes,
        }
    }

    pub fn is_obstructed(&self) -> bool {
        self.outcome == Outcome::Obstructed
    }
}
