use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::sampling::{random_point, random_scalar};
use super::solve::{chart_system, fiber_equations, Mode, Solver};
use super::VerifyError;
use crate::atlasbuild::{Construction, PseudoChart};
use crate::exactpoly::{has_common_zero, ElimBudget, Field, Scalar};
use crate::varspace::{Space, SpacePoint};

/// Largest number of points [`all_points`] enumerates.
const ENUMERATION_CAP: u64 = 1_000_000;

/// Why a fiber is (or is not) nonempty over the algebraic closure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// The outer stage's fiber equation is not a nonzero constant and the
    /// inner stages are surjective.
    Symbolic { detail: String },
    Explicit { count: usize, point: String },
    /// Proof of emptiness: elimination reached a nonzero constant.
    Empty { detail: String },
    Undecided { detail: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetEvidence {
    pub target: SpacePoint,
    pub evidence: Evidence,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SurjectivityVerdict {
    SurjectiveOnTested,
    NotSurjective { witness: SpacePoint, detail: String },
    Inconclusive { detail: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurjectivityCertificate {
    /// Surjectivity facts about the inner stages the symbolic evidence uses.
    pub lemmas: Vec<String>,
    pub targets: Vec<TargetEvidence>,
    pub verdict: SurjectivityVerdict,
}

enum Group<'a> {
    Single(&'a Construction),
    Fused,
}

fn groups(stages: &[Construction]) -> Vec<Group<'_>> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < stages.len() {
        if matches!((&stages[i], stages.get(i + 1)), (Construction::Segre { .. }, Some(Construction::LinearProjection { .. }))) {
            out.push(Group::Fused);
            i += 2;
        } else {
            out.push(Group::Single(&stages[i]));
            i += 1;
        }
    }
    out
}

/// Surjectivity of a stage over the closure by a general argument, if one applies.
fn lemma(c: &Construction, out: &mut Vec<String>) -> bool {
    match c {
        Construction::DoubleCover => {
            out.push("double cover: b t^2 - a t + b is never a nonzero constant".into());
            true
        }
        Construction::Identity { .. } => true,
        Construction::Sym2 => {
            out.push("sym2: every binary quadratic form splits into linear factors".into());
            true
        }
        Construction::Extend { cover, .. } => lemma(cover, out),
        Construction::Product { factors } => factors.iter().all(|f| lemma(f, out)),
        Construction::Compose { stages } => groups(stages).iter().all(|g| match g {
            Group::Single(s) => lemma(s, out),
            Group::Fused => {
                out.push("projected Segre variety: a finite morphism onto P^n is surjective".into());
                true
            }
        }),
        Construction::Segre { .. } | Construction::LinearProjection { .. } | Construction::Explicit { .. } => false,
    }
}

/// The outermost stage's criterion at `y`, assuming the inner stages are
/// surjective.
fn symbolic(c: &Construction, y: &SpacePoint) -> Option<Evidence> {
    match c {
        Construction::DoubleCover => {
            let (a, b) = (&y.blocks()[0][0], &y.blocks()[0][1]);
            let detail = format!("fiber polynomial ({b})*t^2 + ({})*t + ({b})", -a);
            if b.is_zero() && a.is_zero() {
                None
            } else if b.is_zero() {
                Some(Evidence::Symbolic { detail: format!("{detail} has degree 1") })
            } else {
                Some(Evidence::Symbolic { detail: format!("{detail} has degree 2") })
            }
        }
        Construction::Identity { .. } => Some(Evidence::Symbolic { detail: "identity".into() }),
        Construction::Sym2 => {
            let c = &y.blocks()[0];
            Some(Evidence::Symbolic {
                detail: format!("binary form ({})*u^2 + ({})*u*w + ({})*w^2 splits", c[2], c[1], c[0]),
            })
        }
        Construction::Extend { cover, before, .. } => {
            let nb = before.factors().len();
            let nc = cover.target().factors().len();
            symbolic(cover, &SpacePoint::raw(y.blocks()[nb..nb + nc].to_vec()))
        }
        Construction::Product { factors } => {
            let mut at = 0;
            let mut details = Vec::new();
            for f in factors {
                let k = f.target().factors().len();
                match symbolic(f, &SpacePoint::raw(y.blocks()[at..at + k].to_vec()))? {
                    Evidence::Symbolic { detail } => details.push(detail),
                    other => return Some(other),
                }
                at += k;
            }
            Some(Evidence::Symbolic { detail: details.join("; ") })
        }
        Construction::Compose { stages } => {
            let gs = groups(stages);
            let mut lemmas = Vec::new();
            if !gs[..gs.len() - 1].iter().all(|g| match g {
                Group::Single(s) => lemma(s, &mut lemmas),
                Group::Fused => true,
            }) {
                return None;
            }
            match gs.last()? {
                Group::Single(s) => symbolic(s, y),
                Group::Fused => Some(Evidence::Symbolic {
                    detail: "finite morphism from the projected Segre variety".into(),
                }),
            }
        }
        Construction::Segre { .. } | Construction::LinearProjection { .. } | Construction::Explicit { .. } => None,
    }
}

fn explicit(solver: &Solver, y: &SpacePoint) -> Result<Evidence, VerifyError> {
    let mode = if y.field().is_some_and(|f| f.is_finite()) { Mode::Exact } else { Mode::Numeric };
    let f = solver.fiber(y, mode)?;
    if let Some((p, _)) = f.points.first() {
        return Ok(Evidence::Explicit { count: f.points.len(), point: p.to_string() });
    }
    if f.positive_dimensional {
        return Ok(Evidence::Undecided { detail: "fiber equations are underdetermined".into() });
    }
    // no point found: try to prove emptiness on every chart of the source
    let map = solver.map();
    let (eqs, _) = fiber_equations(map, y)?;
    let field = y.field().unwrap_or(Field::Rational);
    for chart in map.source().standard_charts() {
        let (sys, _) = chart_system(&eqs, &chart, &field)?;
        if has_common_zero(&sys, &ElimBudget::default(), 7)? != Some(false) {
            return Ok(Evidence::Undecided { detail: "no fiber point found, emptiness not proven".into() });
        }
    }
    Ok(Evidence::Empty { detail: "the fiber equations eliminate to a nonzero constant on every source chart".into() })
}

/// Nonemptiness of the fiber over each target in `strata`.
pub fn surjectivity_scan(c: &PseudoChart, strata: &[SpacePoint]) -> Result<SurjectivityCertificate, VerifyError> {
    use rayon::prelude::*;
    let solver = Solver::for_chart(c);
    let mut lemmas = Vec::new();
    if solver.is_structured() {
        lemma(solver.construction(), &mut lemmas);
    }
    let targets = strata
        .par_iter()
        .map(|y| {
            y.check(c.map.target())?;
            let y = y.canonical(c.map.target())?;
            let sym = if solver.is_structured() { symbolic(solver.construction(), &y) } else { None };
            let evidence = match sym {
                Some(e) => e,
                None => explicit(&solver, &y)?,
            };
            Ok(TargetEvidence { target: y, evidence })
        })
        .collect::<Result<Vec<_>, VerifyError>>()?;
    let verdict = if let Some(t) = targets.iter().find(|t| matches!(t.evidence, Evidence::Empty { .. })) {
        let Evidence::Empty { detail } = &t.evidence else { unreachable!() };
        SurjectivityVerdict::NotSurjective { witness: t.target.clone(), detail: detail.clone() }
    } else if let Some(t) = targets.iter().find(|t| matches!(t.evidence, Evidence::Undecided { .. })) {
        SurjectivityVerdict::Inconclusive { detail: format!("fiber over {} undecided", t.target) }
    } else {
        SurjectivityVerdict::SurjectiveOnTested
    };
    lemmas.dedup();
    Ok(SurjectivityCertificate { lemmas, targets, verdict })
}

/// Rational test targets: every coordinate point of each projective block
/// (and the origin of each affine block) with the other blocks random,
/// `random` points spread over the coordinate hyperplanes of each
/// projective block (at least one per hyperplane), and `random` general
/// points.
pub fn default_strata(target: &Space, random: usize, seed: u64) -> Vec<SpacePoint> {
    let q = Field::Rational;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut with_block = |b: usize, coords: Vec<Scalar>, rng: &mut ChaCha8Rng| {
        let mut blocks = random_point(target, &q, rng).blocks().to_vec();
        blocks[b] = coords;
        if let Ok(p) = SpacePoint::new(target, blocks) {
            out.push(p);
        }
    };
    for (b, f) in target.factors().iter().enumerate() {
        let w = f.width();
        if f.is_projective() {
            for i in 0..w {
                let e = (0..w).map(|j| Scalar::from_i64(&q, (i == j) as i64)).collect();
                with_block(b, e, &mut rng);
            }
            for k in 0..random.max(w) {
                let i = k % w;
                let h = (0..w).map(|j| if i == j { Scalar::zero(&q) } else { random_scalar(&q, &mut rng) }).collect();
                with_block(b, h, &mut rng);
            }
        } else {
            with_block(b, vec![Scalar::zero(&q); w], &mut rng);
        }
    }
    for _ in 0..random {
        out.push(random_point(target, &q, &mut rng));
    }
    out
}

/// Every point of `space` over a finite field, in canonical form.
pub fn all_points(space: &Space, field: &Field) -> Result<Vec<SpacePoint>, VerifyError> {
    let q = field.order().ok_or_else(|| VerifyError::Input(format!("{field} is not finite")))?;
    let mut out = Vec::new();
    for chart in space.standard_charts() {
        let free = chart.iter().filter(|s| **s == crate::varspace::Slot::Free).count() as u32;
        let count = q.checked_pow(free).filter(|&c| c <= ENUMERATION_CAP).ok_or_else(|| {
            VerifyError::Budget(format!("{q}^{free} points exceed the enumeration cap {ENUMERATION_CAP}"))
        })?;
        for mut idx in 0..count {
            let coords: Vec<Scalar> = chart
                .iter()
                .map(|s| match s {
                    crate::varspace::Slot::Zero => Scalar::zero(field),
                    crate::varspace::Slot::One => Scalar::one(field),
                    crate::varspace::Slot::Free => {
                        let v = Scalar::finite_element(field, idx % q).expect("in range");
                        idx /= q;
                        v
                    }
                })
                .collect();
            let blocks = (0..space.factors().len()).map(|i| coords[space.block_range(i)].to_vec()).collect();
            out.push(SpacePoint::new(space, blocks)?);
        }
        if out.len() as u64 > ENUMERATION_CAP {
            return Err(VerifyError::Budget(format!("more than {ENUMERATION_CAP} points")));
        }
    }
    Ok(out)
}
