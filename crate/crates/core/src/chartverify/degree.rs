use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::brute::BruteTable;
use super::sampling::sample_targets;
use super::solve::Solver;
use super::{fiber_with, Backend, FiberReport, VerifyError};
use crate::atlasbuild::{Construction, PseudoChart};
use crate::exactpoly::Field;
use crate::varspace::SpacePoint;

/// Smallest sample count accepted by [`generic_degree`].
pub const MIN_SAMPLES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DegreeFlag {
    /// Fewer than 80% of the samples attain the inferred degree.
    NonGenericSampling,
    /// Some sampled fiber is positive dimensional.
    PositiveDimensionalSample,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub samples: usize,
    pub seed: u64,
    pub backend: Backend,
    pub targets: Vec<SpacePoint>,
    /// Closure cardinality per target; `None` for a positive-dimensional fiber.
    pub cardinalities: Vec<Option<usize>>,
    pub weighted: Vec<Option<usize>>,
    pub inferred_degree: usize,
    pub attaining: usize,
    pub flags: Vec<DegreeFlag>,
}

impl DegreeReport {
    fn assemble(samples: usize, seed: u64, backend: Backend, reports: Vec<FiberReport>) -> Self {
        let cardinalities: Vec<Option<usize>> = reports.iter().map(|r| r.closure_cardinality).collect();
        let inferred_degree = cardinalities.iter().flatten().copied().max().unwrap_or(0);
        let attaining = cardinalities.iter().filter(|&&c| c == Some(inferred_degree)).count();
        let mut flags = Vec::new();
        if attaining * 5 < samples * 4 {
            flags.push(DegreeFlag::NonGenericSampling);
        }
        if cardinalities.iter().any(|c| c.is_none()) {
            flags.push(DegreeFlag::PositiveDimensionalSample);
        }
        DegreeReport {
            samples,
            seed,
            backend,
            weighted: reports.iter().map(|r| r.weighted_cardinality).collect(),
            targets: reports.into_iter().map(|r| r.target).collect(),
            cardinalities,
            inferred_degree,
            attaining,
            flags,
        }
    }

    pub fn is_generic(&self) -> bool {
        self.flags.is_empty()
    }
}

fn measure(solver: &Solver, samples: usize, seed: u64, backend: &Backend, field: &Field) -> Result<DegreeReport, VerifyError> {
    if samples < MIN_SAMPLES {
        return Err(VerifyError::Input(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    let targets = sample_targets(solver.map(), samples, seed, field)?;
    let table = match backend {
        Backend::BruteFiniteField { p, k } => Some(BruteTable::build(solver.map(), *p, *k)?),
        _ => None,
    };
    let reports = targets
        .par_iter()
        .map(|y| fiber_with(solver, y, backend, table.as_ref()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DegreeReport::assemble(samples, seed, backend.clone(), reports))
}

/// Generic degree from numeric fibers over rational targets: half images of
/// random sources, half independent random targets.
pub fn generic_degree(c: &PseudoChart, samples: usize, seed: u64) -> Result<DegreeReport, VerifyError> {
    generic_degree_with(c, samples, seed, &Backend::StructuredNumeric, &Field::Rational)
}

/// Generic degree with targets drawn over `field`.
pub fn generic_degree_with(
    c: &PseudoChart,
    samples: usize,
    seed: u64,
    backend: &Backend,
    field: &Field,
) -> Result<DegreeReport, VerifyError> {
    measure(&Solver::for_chart(c), samples, seed, backend, field)
}

/// Generic degree of a single construction stage (any source), numerically.
pub fn measure_construction(c: &Construction, samples: usize, seed: u64) -> Result<DegreeReport, VerifyError> {
    measure(&Solver::for_construction(c)?, samples, seed, &Backend::StructuredNumeric, &Field::Rational)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteFiberReport {
    pub samples: usize,
    pub seed: u64,
    pub max_cardinality: usize,
    /// A target whose fiber is positive dimensional.
    pub witness: Option<SpacePoint>,
    pub pass: bool,
}

/// Checks that no sampled fiber is positive dimensional.
pub fn finite_fiber_scan(c: &PseudoChart, samples: usize, seed: u64) -> Result<FiniteFiberReport, VerifyError> {
    let solver = Solver::for_chart(c);
    let targets = sample_targets(solver.map(), samples, seed, &Field::Rational)?;
    let reports = targets
        .par_iter()
        .map(|y| fiber_with(&solver, y, &Backend::StructuredNumeric, None))
        .collect::<Result<Vec<_>, _>>()?;
    let witness = reports.iter().find(|r| r.positive_dimensional).map(|r| r.target.clone());
    Ok(FiniteFiberReport {
        samples,
        seed,
        max_cardinality: reports.iter().filter_map(|r| r.closure_cardinality).max().unwrap_or(0),
        pass: witness.is_none(),
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplicativityReport {
    pub first: usize,
    pub second: usize,
    pub composite: usize,
    pub consistent: bool,
}

/// Measures deg f, deg g and deg (g ∘ f) separately and compares.
pub fn degree_multiplicativity_check(
    f: &PseudoChart,
    g: &Construction,
    samples: usize,
    seed: u64,
) -> Result<MultiplicativityReport, VerifyError> {
    let first = generic_degree(f, samples, seed)?.inferred_degree;
    let second = measure_construction(g, samples, seed)?.inferred_degree;
    let inner = if f.matches_construction() {
        f.construction.clone()
    } else {
        Construction::Explicit { map: f.map.clone(), degree: f.claimed_degree }
    };
    let composite_c = Construction::Compose { stages: vec![inner, g.clone()] };
    let composite = measure_construction(&composite_c, samples, seed)?.inferred_degree;
    Ok(MultiplicativityReport { first, second, composite, consistent: composite == first * second })
}
