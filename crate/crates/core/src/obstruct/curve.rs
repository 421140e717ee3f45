//! Smooth plane curves: the Jacobian criterion chart by chart.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ObstructError, Reason, Verdict, NOTE_SINGULAR};
use crate::exactpoly::{common_zero_2, vars, Witness2, ElimBudget, Field, MultiPoly, PolyError, Scalar, UniPoly};

/// Primes of the finite-field singular-point scan.
pub const PREFILTER_PRIMES: [u64; 2] = [101, 211];

const ELIM_SEED: u64 = 1;

/// A plane curve F(x, y, z) = 0 with F homogeneous over Q.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CurveRepr", into = "CurveRepr")]
pub struct PlaneCurve {
    f: MultiPoly,
    degree: u32,
}

#[derive(Serialize, Deserialize)]
struct CurveRepr {
    polynomial: MultiPoly,
}

impl TryFrom<CurveRepr> for PlaneCurve {
    type Error = ObstructError;
    fn try_from(r: CurveRepr) -> Result<Self, ObstructError> {
        PlaneCurve::new(r.polynomial)
    }
}

impl From<PlaneCurve> for CurveRepr {
    fn from(c: PlaneCurve) -> Self {
        CurveRepr { polynomial: c.f }
    }
}

impl PlaneCurve {
    pub fn new(f: MultiPoly) -> Result<Self, ObstructError> {
        if f.field() != &Field::Rational {
            return Err(ObstructError::Malformed(format!("coefficients must be rational, got {}", f.field())));
        }
        if f.vars().len() != 3 {
            return Err(ObstructError::Malformed(format!("expected 3 variables, got {}", f.vars().len())));
        }
        if f.is_zero() {
            return Err(ObstructError::Malformed("zero polynomial".into()));
        }
        let degree = f.total_degree();
        if degree == 0 {
            return Err(ObstructError::Malformed("constant polynomial".into()));
        }
        if f.terms().iter().any(|t| t.exp.iter().sum::<u32>() != degree) {
            return Err(ObstructError::Malformed(format!("{f} is not homogeneous")));
        }
        let f = f.with_vars(vars(&["x", "y", "z"]))?;
        Ok(PlaneCurve { f, degree })
    }

    /// Parses a form in `x, y, z`.
    pub fn parse(src: &str) -> Result<Self, ObstructError> {
        let f = MultiPoly::parse(src, vars(&["x", "y", "z"])).map_err(|e| ObstructError::Malformed(e.to_string()))?;
        PlaneCurve::new(f)
    }

    pub fn polynomial(&self) -> &MultiPoly {
        &self.f
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    fn gradient(&self) -> Result<[MultiPoly; 3], PolyError> {
        Ok([self.f.partial_derivative("x")?, self.f.partial_derivative("y")?, self.f.partial_derivative("z")?])
    }
}

impl fmt::Display for PlaneCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.f)
    }
}

/// A singular point, exactly over the algebraic closure of Q.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularWitness {
    /// The affine chart containing the point.
    pub chart: String,
    /// Defining equations of the singular points found in that chart.
    pub description: String,
    /// Homogeneous coordinates when the point is rational.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
}

impl fmt::Display for SingularWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.point {
            Some(p) => write!(f, "singular at {p}"),
            None => write!(f, "singular on {{{}}} in chart {}", self.description, self.chart),
        }
    }
}

/// Result of the singular-point scan over P²(F_p).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prefilter {
    pub p: u64,
    /// False when F does not reduce modulo p.
    pub applicable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub singular_point: Option<[u64; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Smoothness {
    pub smooth: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<SingularWitness>,
    pub prefilter: Vec<Prefilter>,
}

fn point_string(c: [&Scalar; 3]) -> String {
    format!("[{}:{}:{}]", c[0], c[1], c[2])
}

fn upoly_string(g: &UniPoly, var: &str) -> String {
    let vs = vars(&[var]);
    MultiPoly::from_dense(vs, g.field().clone(), 0, g.coeffs()).map_or_else(|_| "?".into(), |p| p.to_string())
}

/// The point of a witness whose m is linear and whose h has a single
/// (possibly repeated) root there.
fn rational_point(w: &Witness2) -> Option<(Scalar, Scalar)> {
    if w.m.degree() != Some(1) {
        return None;
    }
    let y = &-&w.m.coeffs()[0] * &w.m.coeffs()[1].inv()?;
    let h: Vec<Scalar> = w.h.as_ref()?.iter().map(|c| c.eval(&y)).collect::<Result<_, _>>().ok()?;
    let h = UniPoly::new(y.field(), h).ok()?;
    let sq = h.div_rem(&h.gcd(&h.derivative())).ok()?.0.monic();
    (sq.degree() == Some(1)).then(|| (-&sq.coeffs()[0], y))
}

/// Exact singular-point search: the chart z = 1, then the line z = 0 with
/// y = 1, then [1:0:0].
fn exact_singularity(c: &PlaneCurve) -> Result<Option<SingularWitness>, ObstructError> {
    let q = Field::Rational;
    let one = Scalar::one(&q);
    let zero = Scalar::zero(&q);
    let [fx, fy, fz] = c.gradient()?;
    let system = [c.f.clone(), fx, fy, fz];

    let affine: Vec<MultiPoly> =
        system.iter().map(|p| p.evaluate_partial(&[None, None, Some(one.clone())])).collect::<Result<_, _>>()?;
    if let Some(w) = common_zero_2(&affine, 0, 1, &ElimBudget::default(), ELIM_SEED)? {
        let point = rational_point(&w).map(|(a, b)| {
            let (x, y) = if w.x_var == "x" { (a, b) } else { (b, a) };
            point_string([&x, &y, &one])
        });
        return Ok(Some(SingularWitness { chart: "z = 1".into(), description: w.to_string(), point }));
    }

    let line: Vec<UniPoly> = system
        .iter()
        .map(|p| UniPoly::new(q.clone(), p.evaluate_partial(&[None, Some(one.clone()), Some(zero.clone())])?.to_dense(0)?))
        .collect::<Result<_, PolyError>>()?;
    let g = line.iter().fold(UniPoly::zero(q.clone()), |g, p| g.gcd(p));
    if g.is_zero() || g.degree().is_some_and(|d| d > 0) {
        let (description, point) = if g.is_zero() {
            ("every x".to_string(), Some(point_string([&zero, &one, &zero])))
        } else {
            let g = g.div_rem(&g.gcd(&g.derivative()))?.0.monic();
            let point = (g.degree() == Some(1)).then(|| point_string([&-&g.coeffs()[0], &one, &zero]));
            (format!("{} = 0", upoly_string(&g, "x")), point)
        };
        return Ok(Some(SingularWitness { chart: "z = 0, y = 1".into(), description, point }));
    }

    let at = [one.clone(), zero.clone(), zero.clone()];
    let values: Vec<Scalar> = system.iter().map(|p| p.evaluate(&at)).collect::<Result<_, _>>()?;
    if values.iter().all(|v| v.is_zero()) {
        return Ok(Some(SingularWitness {
            chart: "[1:0:0]".into(),
            description: "all partial derivatives vanish".into(),
            point: Some(point_string([&one, &zero, &zero])),
        }));
    }
    Ok(None)
}

/// A form with coefficients reduced modulo p, evaluated in u64 arithmetic.
struct ModForm {
    p: u64,
    terms: Vec<(u64, [u32; 3])>,
}

impl ModForm {
    fn new(f: &MultiPoly, p: u64) -> Result<Self, PolyError> {
        let g = f.to_field(&Field::Prime(p))?;
        let terms = g
            .terms()
            .iter()
            .map(|t| {
                let Scalar::Prime { v, .. } = t.coeff else { unreachable!("prime field coefficient") };
                (v, [t.exp[0], t.exp[1], t.exp[2]])
            })
            .collect();
        Ok(ModForm { p, terms })
    }

    fn eval(&self, pt: [u64; 3]) -> u64 {
        let p = self.p;
        let pow = |b: u64, e: u32| (0..e).fold(1u64, |acc, _| acc * b % p);
        self.terms.iter().fold(0, |acc, (c, e)| {
            (acc + c * pow(pt[0], e[0]) % p * pow(pt[1], e[1]) % p * pow(pt[2], e[2])) % p
        })
    }
}

fn prefilter(c: &PlaneCurve, p: u64) -> Result<Prefilter, ObstructError> {
    let Ok(f) = ModForm::new(&c.f, p) else { return Ok(Prefilter { p, applicable: false, singular_point: None }) };
    if f.terms.is_empty() {
        return Ok(Prefilter { p, applicable: false, singular_point: None });
    }
    let forms: Vec<ModForm> = std::iter::once(Ok(f))
        .chain(c.gradient()?.iter().map(|g| ModForm::new(g, p)))
        .collect::<Result<_, _>>()?;
    let singular = |pt: [u64; 3]| forms.iter().all(|g| g.eval(pt) == 0);
    let affine = (0..p).into_par_iter().find_map_first(|x| (0..p).map(|y| [x, y, 1]).find(|&pt| singular(pt)));
    let singular_point =
        affine.or_else(|| (0..p).map(|x| [x, 1, 0]).find(|&pt| singular(pt))).or_else(|| Some([1, 0, 0]).filter(|&pt| singular(pt)));
    Ok(Prefilter { p, applicable: true, singular_point })
}

/// Jacobian criterion: smooth iff F and its partials have no common
/// projective zero. Decided exactly over Q; the finite-field scans are
/// reported alongside.
pub fn curve_smoothness(c: &PlaneCurve) -> Result<Smoothness, ObstructError> {
    let prefilter = PREFILTER_PRIMES.iter().map(|&p| prefilter(c, p)).collect::<Result<Vec<_>, _>>()?;
    let witness = exact_singularity(c)?;
    Ok(Smoothness { smooth: witness.is_none(), witness, prefilter })
}

/// Genus (d−1)(d−2)/2 of a smooth plane curve; singular curves are refused.
pub fn plane_curve_genus(c: &PlaneCurve) -> Result<u32, ObstructError> {
    let s = curve_smoothness(c)?;
    match s.witness {
        Some(w) => Err(ObstructError::Singular(w)),
        None => Ok((c.degree - 1) * c.degree.saturating_sub(2) / 2),
    }
}

/// Verdict for S = P² ∖ C. Every curve of positive degree is ample on P².
pub fn corollary_verdict(c: &PlaneCurve) -> Result<Verdict, ObstructError> {
    match plane_curve_genus(c) {
        Ok(0) => Ok(Verdict::inconclusive(vec![format!("smooth curve of degree {} has genus 0", c.degree)])),
        Ok(g) => Ok(Verdict::obstructed(
            Reason::PositiveGenusAmpleCurve,
            format!("C = {{{c} = 0}} is smooth of degree {} and genus {g}", c.degree),
        )),
        Err(ObstructError::Singular(w)) => Ok(Verdict::inconclusive(vec![NOTE_SINGULAR.into(), w.to_string()])),
        Err(e) => Err(e),
    }
}
