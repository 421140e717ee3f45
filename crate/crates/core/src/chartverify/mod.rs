//! Evidence about charts: base-point certificates, fibers over the
//! algebraic closure, generic degrees, surjectivity and finite-fiber scans.
//!
//! Fibers come from two independent routes. The structured backends walk
//! the construction tree (exactly over finite-field extensions, or
//! numerically over C for rational targets); the brute backend evaluates
//! the map on every point of a small finite field.

mod atlas;
mod basepoints;
mod brute;
mod degree;
mod sampling;
mod solve;
mod surject;

pub use atlas::{atlas_coverage, sample_bundle_points, AtlasReport};
pub use basepoints::{certify_chart, check_no_base_points, BasePointOutcome};
pub use brute::{BruteTable, BRUTE_CAP};
pub use degree::{
    degree_multiplicativity_check, finite_fiber_scan, generic_degree, generic_degree_with, measure_construction,
    DegreeFlag, DegreeReport, FiniteFiberReport, MultiplicativityReport,
};
pub use sampling::{random_point, sample_targets};
pub use surject::{all_points, default_strata, surjectivity_scan, Evidence, SurjectivityCertificate, SurjectivityVerdict};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atlasbuild::{AtlasError, PseudoChart};
use crate::exactpoly::{Field, PolyError};
use crate::varspace::{MapError, SpacePoint};
use solve::{Mode, Solver};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error(transparent)]
    Map(MapError),
    #[error(transparent)]
    Atlas(AtlasError),
    #[error(transparent)]
    Poly(PolyError),
}

impl From<PolyError> for VerifyError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::Budget(s) => VerifyError::Budget(s),
            PolyError::NonConvergence(s) => VerifyError::Numeric(s),
            e => VerifyError::Poly(e),
        }
    }
}

impl From<MapError> for VerifyError {
    fn from(e: MapError) -> Self {
        match e {
            MapError::Poly(p) => p.into(),
            e => VerifyError::Map(e),
        }
    }
}

impl From<AtlasError> for VerifyError {
    fn from(e: AtlasError) -> Self {
        match e {
            AtlasError::Poly(p) => p.into(),
            AtlasError::Map(m) => m.into(),
            e => VerifyError::Atlas(e),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Backend {
    StructuredExact,
    StructuredNumeric,
    BruteFiniteField { p: u64, k: usize },
}

impl Backend {
    /// The field random targets are drawn from.
    pub fn sample_field(&self, p: u64, k: usize) -> Result<Field, VerifyError> {
        match self {
            Backend::StructuredNumeric => Ok(Field::Rational),
            Backend::StructuredExact => Ok(Field::finite(p, k)?),
            Backend::BruteFiniteField { p, k } => Ok(Field::finite(*p, *k)?),
        }
    }
}

/// One fiber. `closure_cardinality` is `None` exactly when the fiber is
/// positive dimensional; for the brute backend it counts points over the
/// enumerated field only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberReport {
    pub target: SpacePoint,
    pub backend: Backend,
    pub solutions: Vec<SpacePoint>,
    pub closure_cardinality: Option<usize>,
    pub positive_dimensional: bool,
    /// Sum of root multiplicities, when every stage is univariate.
    pub weighted_cardinality: Option<usize>,
    pub notes: Vec<String>,
}

impl FiberReport {
    fn from_fiber(target: SpacePoint, backend: Backend, f: solve::Fiber) -> Self {
        let weighted = f.points.iter().map(|(_, m)| *m).sum::<Option<usize>>();
        let n = f.points.len();
        let mut notes = Vec::new();
        if let Some(w) = weighted {
            if w != n {
                notes.push(format!("ramified: {n} points of total multiplicity {w}"));
            }
        }
        FiberReport {
            target,
            backend,
            solutions: f.points.into_iter().map(|(p, _)| p).collect(),
            closure_cardinality: (!f.positive_dimensional).then_some(n),
            positive_dimensional: f.positive_dimensional,
            weighted_cardinality: if f.positive_dimensional { None } else { weighted },
            notes,
        }
    }
}

pub(crate) fn fiber_with(
    solver: &Solver,
    y: &SpacePoint,
    backend: &Backend,
    table: Option<&BruteTable>,
) -> Result<FiberReport, VerifyError> {
    match backend {
        Backend::StructuredExact => Ok(FiberReport::from_fiber(y.clone(), backend.clone(), solver.fiber(y, Mode::Exact)?)),
        Backend::StructuredNumeric => {
            Ok(FiberReport::from_fiber(y.clone(), backend.clone(), solver.fiber(y, Mode::Numeric)?))
        }
        Backend::BruteFiniteField { p, k } => {
            let owned;
            let table = match table {
                Some(t) => t,
                None => {
                    owned = BruteTable::build(solver.map(), *p, *k)?;
                    &owned
                }
            };
            let solutions = table.fiber(y)?;
            Ok(FiberReport {
                target: y.clone(),
                backend: backend.clone(),
                closure_cardinality: Some(solutions.len()),
                solutions,
                positive_dimensional: false,
                weighted_cardinality: None,
                notes: vec![format!("points over {} only", table.field())],
            })
        }
    }
}

/// Fiber of `c` over `y`.
pub fn fiber(c: &PseudoChart, y: &SpacePoint, backend: &Backend) -> Result<FiberReport, VerifyError> {
    fiber_with(&Solver::for_chart(c), y, backend, None)
}

/// Fiber of a single construction stage over `y` (any source space).
pub fn construction_fiber(
    c: &crate::atlasbuild::Construction,
    y: &SpacePoint,
    backend: &Backend,
) -> Result<FiberReport, VerifyError> {
    fiber_with(&Solver::for_construction(c)?, y, backend, None)
}
