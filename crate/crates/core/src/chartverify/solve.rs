//! Fibers along construction trees.
//!
//! A composition is solved from its last stage inwards: the fiber of the
//! outer map is computed first and every point of it is pulled back through
//! the earlier stages. A Segre stage followed by a linear projection is
//! solved as one stage, on the standard charts of (P¹)^n. Maps without a
//! usable construction are solved by elimination on each source chart.

use num_complex::Complex64;

use super::VerifyError;
use crate::atlasbuild::{Construction, PseudoChart};
use crate::exactpoly::elim::{common_field, solve_exact, solve_numeric, split_roots};
use crate::exactpoly::roots::complex_roots;
use crate::exactpoly::{ElimBudget, Field, MultiPoly, Scalar, UniPoly};
use crate::varspace::{evaluate_map, PolyMap, Slot, Space, SpacePoint};

/// How roots are found: exactly in finite-field extensions, or numerically
/// in the complex numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Mode {
    Exact,
    Numeric,
}

/// Points of one fiber; the multiplicity is known only along chains of
/// univariate stages.
#[derive(Clone, Debug, Default)]
pub(crate) struct Fiber {
    pub points: Vec<(SpacePoint, Option<usize>)>,
    pub positive_dimensional: bool,
}

const SEED: u64 = 0x5eed;
/// Relative size below which a complex coordinate is treated as zero.
const NEGLIGIBLE: f64 = 1e-12;
/// Relative size below which all components of a block count as vanishing.
const BASE_POINT_TOL: f64 = 1e-8;

/// Moves every coordinate into one field: C if any is complex, otherwise
/// the smallest common finite extension.
pub(crate) fn unify(blocks: Vec<Vec<Scalar>>) -> Result<Vec<Vec<Scalar>>, VerifyError> {
    let fields: Vec<Field> = blocks.iter().flatten().map(|s| s.field()).collect();
    let Some(first) = fields.first() else { return Ok(blocks) };
    if fields.iter().all(|f| f == first) {
        return Ok(blocks);
    }
    let target = if fields.contains(&Field::Complex) {
        Field::Complex
    } else {
        common_field(&fields)?.expect("nonempty")
    };
    Ok(blocks
        .into_iter()
        .map(|b| b.iter().map(|s| s.coerce_into(&target)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?)
}

/// Zeroes complex coordinates that are negligible against their block.
fn clean(p: &SpacePoint, space: &Space) -> Result<SpacePoint, VerifyError> {
    if p.field() != Some(Field::Complex) {
        return Ok(p.clone());
    }
    let blocks = p
        .blocks()
        .iter()
        .map(|b| {
            let scale = b.iter().map(|s| s.magnitude()).fold(0.0, f64::max);
            b.iter()
                .map(|s| if s.magnitude() <= NEGLIGIBLE * scale { Scalar::zero(&Field::Complex) } else { s.clone() })
                .collect()
        })
        .collect();
    Ok(SpacePoint::new(space, blocks)?)
}

fn point(space: &Space, blocks: Vec<Vec<Scalar>>) -> Result<SpacePoint, VerifyError> {
    Ok(SpacePoint::new(space, unify(blocks)?)?)
}

/// Roots with multiplicities of the polynomial with ascending `coeffs`;
/// `None` when it vanishes identically.
pub(crate) fn uni_roots(coeffs: Vec<Scalar>, mode: Mode) -> Result<Option<Vec<(Scalar, usize)>>, VerifyError> {
    let coeffs = unify(vec![coeffs])?.pop().expect("one block");
    let Some(field) = coeffs.first().map(|c| c.field()) else { return Ok(None) };
    let g = UniPoly::new(field, coeffs)?;
    if g.is_zero() {
        return Ok(None);
    }
    if g.is_constant() {
        return Ok(Some(vec![]));
    }
    match mode {
        Mode::Numeric => Ok(Some(complex_roots(&g)?)),
        Mode::Exact => {
            let mut out = Vec::new();
            for r in split_roots(&g)? {
                let mut cur = g.coerce_into(&r.field())?;
                let lin = UniPoly::linear_root(&r);
                let mut m = 0;
                loop {
                    let (q, rem) = cur.div_rem(&lin)?;
                    if !rem.is_zero() {
                        break;
                    }
                    m += 1;
                    cur = q;
                }
                out.push((r, m));
            }
            Ok(Some(out))
        }
    }
}

fn check_mode(y: &SpacePoint, mode: Mode) -> Result<(), VerifyError> {
    let f = y.field().unwrap_or(Field::Rational);
    match mode {
        Mode::Exact if !f.is_finite() => {
            Err(VerifyError::Input(format!("structured_exact needs a finite-field target, got one over {f}")))
        }
        Mode::Exact if f.characteristic() == 2 => {
            Err(VerifyError::Input("structured_exact needs odd characteristic".into()))
        }
        Mode::Numeric if f.is_finite() => {
            Err(VerifyError::Input(format!("structured_numeric needs a rational target, got one over {f}")))
        }
        _ => Ok(()),
    }
}

/// Fiber solver for one chart, remembering whether its map is the one its
/// construction builds.
pub(crate) struct Solver {
    construction: Construction,
    map: PolyMap,
    structured: bool,
}

impl Solver {
    pub fn for_chart(chart: &PseudoChart) -> Self {
        Solver {
            construction: chart.construction.clone(),
            map: chart.map.clone(),
            structured: chart.matches_construction(),
        }
    }

    pub fn for_construction(c: &Construction) -> Result<Self, VerifyError> {
        Ok(Solver { construction: c.clone(), map: c.map()?, structured: true })
    }

    pub fn map(&self) -> &PolyMap {
        &self.map
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    pub fn is_structured(&self) -> bool {
        self.structured
    }

    /// Fiber over `y` as points of the map's source.
    pub fn fiber(&self, y: &SpacePoint, mode: Mode) -> Result<Fiber, VerifyError> {
        y.check(self.map.target())?;
        check_mode(y, mode)?;
        let y = y.canonical(self.map.target())?;
        if !self.structured {
            return map_fiber(&self.map, &y, mode);
        }
        let raw = solve_stage(&self.construction, &y, mode)?;
        let source = self.map.source();
        if source.same_shape(&self.construction.source()) {
            return Ok(raw);
        }
        // a chart views its construction's affine factors as one block
        let points = raw
            .points
            .into_iter()
            .map(|(p, m)| Ok((SpacePoint::new(source, vec![p.coords()])?, m)))
            .collect::<Result<Vec<_>, VerifyError>>()?;
        Ok(Fiber { points, positive_dimensional: raw.positive_dimensional })
    }
}

fn mul(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    Some(a? * b?)
}

/// Splits the blocks of `y` into consecutive groups of the given sizes.
fn split_blocks(y: &SpacePoint, sizes: &[usize]) -> Vec<SpacePoint> {
    let mut out = Vec::new();
    let mut at = 0;
    for &s in sizes {
        out.push(SpacePoint::raw(y.blocks()[at..at + s].to_vec()));
        at += s;
    }
    out
}

enum Group<'a> {
    Single(&'a Construction),
    Fused { n: usize, coefficients: &'a [Vec<i64>] },
}

fn groups(stages: &[Construction]) -> Vec<Group<'_>> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < stages.len() {
        if let (Construction::Segre { n }, Some(Construction::LinearProjection { n: m, coefficients, .. })) =
            (&stages[i], stages.get(i + 1))
        {
            if n == m {
                out.push(Group::Fused { n: *n, coefficients });
                i += 2;
                continue;
            }
        }
        out.push(Group::Single(&stages[i]));
        i += 1;
    }
    out
}

pub(crate) fn solve_stage(c: &Construction, y: &SpacePoint, mode: Mode) -> Result<Fiber, VerifyError> {
    let target = c.target();
    let y = clean(&y.canonical(&target)?, &target)?;
    match c {
        Construction::DoubleCover => {
            let (a, b) = (&y.blocks()[0][0], &y.blocks()[0][1]);
            let source = c.source();
            let roots = uni_roots(vec![b.clone(), -a, b.clone()], mode)?.expect("a and b are not both zero");
            let points = roots
                .into_iter()
                .map(|(t, m)| Ok((point(&source, vec![vec![t]])?, Some(m))))
                .collect::<Result<Vec<_>, VerifyError>>()?;
            Ok(Fiber { points, positive_dimensional: false })
        }
        Construction::Identity { .. } => Ok(Fiber { points: vec![(y, Some(1))], positive_dimensional: false }),
        Construction::Sym2 => sym2_fiber(&y, mode),
        Construction::Segre { n } => segre_preimage(*n, &y),
        Construction::LinearProjection { .. } | Construction::Explicit { .. } => map_fiber(&c.map()?, &y, mode),
        Construction::Extend { cover, before, after } => {
            let nb = before.factors().len();
            let nc = cover.target().factors().len();
            let parts = split_blocks(&y, &[nb, nc, after.factors().len()]);
            let inner = solve_stage(cover, &parts[1], mode)?;
            let source = c.source();
            let points = inner
                .points
                .into_iter()
                .map(|(p, m)| {
                    let mut blocks = parts[0].blocks().to_vec();
                    blocks.extend(p.blocks().iter().cloned());
                    blocks.extend(parts[2].blocks().iter().cloned());
                    Ok((point(&source, blocks)?, m))
                })
                .collect::<Result<Vec<_>, VerifyError>>()?;
            Ok(Fiber { points, positive_dimensional: inner.positive_dimensional })
        }
        Construction::Product { factors } => {
            let sizes: Vec<usize> = factors.iter().map(|f| f.target().factors().len()).collect();
            let parts = split_blocks(&y, &sizes);
            let mut acc: Vec<(Vec<Vec<Scalar>>, Option<usize>)> = vec![(vec![], Some(1))];
            let mut positive_dimensional = false;
            for (f, part) in factors.iter().zip(&parts) {
                let fib = solve_stage(f, part, mode)?;
                positive_dimensional |= fib.positive_dimensional;
                acc = acc
                    .into_iter()
                    .flat_map(|(blocks, m)| {
                        fib.points.iter().map(move |(p, m2)| {
                            let mut b = blocks.clone();
                            b.extend(p.blocks().iter().cloned());
                            (b, mul(m, *m2))
                        })
                    })
                    .collect();
            }
            let source = c.source();
            let points = acc
                .into_iter()
                .map(|(b, m)| Ok((point(&source, b)?, m)))
                .collect::<Result<Vec<_>, VerifyError>>()?;
            Ok(Fiber { points, positive_dimensional })
        }
        Construction::Compose { stages } => {
            let mut current = Fiber { points: vec![(y, Some(1))], positive_dimensional: false };
            for g in groups(stages).iter().rev() {
                let mut next = Fiber { points: vec![], positive_dimensional: current.positive_dimensional };
                for (p, m) in &current.points {
                    let f = match g {
                        Group::Single(s) => solve_stage(s, p, mode)?,
                        Group::Fused { n, coefficients } => fused_fiber(*n, coefficients, p, mode)?,
                    };
                    next.positive_dimensional |= f.positive_dimensional;
                    next.points.extend(f.points.into_iter().map(|(q, m2)| (q, mul(*m, m2))));
                }
                current = next;
            }
            Ok(current)
        }
    }
}

/// Ordered factorizations of the binary form c2 u² + c1 u w + c0 w².
fn sym2_fiber(y: &SpacePoint, mode: Mode) -> Result<Fiber, VerifyError> {
    let c = &y.blocks()[0];
    let field = c[0].field();
    let roots = uni_roots(c.clone(), mode)?.expect("target is not zero");
    // a root z of the dehomogenized form is the factor u - z w, i.e. [1 : -z];
    // a drop in degree is a root at infinity, the factor w, i.e. [0 : 1]
    let mut factors: Vec<Vec<Scalar>> = Vec::new();
    for (z, m) in &roots {
        let f = z.field();
        for _ in 0..*m {
            factors.push(vec![Scalar::one(&f), -z]);
        }
    }
    while factors.len() < 2 {
        factors.push(vec![Scalar::zero(&field), Scalar::one(&field)]);
    }
    let source = Space::p1_power(2);
    let p12 = point(&source, vec![factors[0].clone(), factors[1].clone()])?;
    let p21 = point(&source, vec![factors[1].clone(), factors[0].clone()])?;
    let points = if p12.approx_eq(&p21, crate::varspace::COMPLEX_POINT_TOL) {
        vec![(p12, Some(2))]
    } else {
        vec![(p12, Some(1)), (p21, Some(1))]
    };
    Ok(Fiber { points, positive_dimensional: false })
}

/// The unique preimage under the Segre map, if `y` lies on its image.
fn segre_preimage(n: usize, y: &SpacePoint) -> Result<Fiber, VerifyError> {
    let c = &y.blocks()[0];
    let k0 = (0..c.len()).max_by(|&i, &j| c[i].magnitude().total_cmp(&c[j].magnitude())).expect("nonempty");
    let blocks: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            let bit = 1 << (n - 1 - i);
            vec![c[k0 & !bit].clone(), c[k0 | bit].clone()]
        })
        .collect();
    let source = Space::p1_power(n);
    let x = point(&source, blocks)?;
    let segre = Construction::Segre { n }.map()?;
    let image = evaluate_map(&segre, &x)?;
    let points = if image.approx_eq(y, crate::varspace::COMPLEX_POINT_TOL) { vec![(x, Some(1))] } else { vec![] };
    Ok(Fiber { points, positive_dimensional: false })
}

fn fused_fiber(n: usize, coefficients: &[Vec<i64>], y: &SpacePoint, mode: Mode) -> Result<Fiber, VerifyError> {
    let forms = crate::atlasbuild::pulled_back_forms(n, coefficients)?;
    map_fiber(&forms, y, mode)
}

/// `polys` restricted to a standard chart and rewritten in its free
/// variables; also returns the indices of those variables.
pub(crate) fn chart_system(
    polys: &[MultiPoly],
    chart: &[Slot],
    field: &Field,
) -> Result<(Vec<MultiPoly>, Vec<usize>), VerifyError> {
    let free: Vec<usize> = (0..chart.len()).filter(|&i| chart[i] == Slot::Free).collect();
    let Some(first) = polys.first() else { return Ok((vec![], free)) };
    let names: Vec<String> = free.iter().map(|&i| first.vars()[i].clone()).collect();
    let vars: crate::exactpoly::Vars = names.into();
    let images = chart
        .iter()
        .enumerate()
        .map(|(i, s)| match s {
            Slot::Zero => Ok(MultiPoly::zero(vars.clone(), field.clone())),
            Slot::One => Ok(MultiPoly::one(vars.clone(), field)),
            Slot::Free => MultiPoly::var(vars.clone(), field, &first.vars()[i]),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let sys = polys
        .iter()
        .map(|p| p.to_field(field)?.substitute(&images))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((sys, free))
}

/// The equations of the fiber over `y`: y_k F_j - y_j F_k in each projective
/// block (k the largest coordinate), F_j - y_j in affine blocks. Also
/// returns the pivot component of each projective block.
pub(crate) fn fiber_equations(
    map: &PolyMap,
    y: &SpacePoint,
) -> Result<(Vec<MultiPoly>, Vec<(usize, usize)>), VerifyError> {
    let field = y.field().unwrap_or(Field::Rational);
    if field == Field::Complex {
        return Err(VerifyError::Input("elimination needs an exact target".into()));
    }
    let mut eqs = Vec::new();
    let mut pivots = Vec::new();
    for (t, (block, fac)) in map.components().iter().zip(map.target().factors()).enumerate() {
        let yb = &y.blocks()[t];
        let comps = block.iter().map(|p| p.to_field(&field)).collect::<Result<Vec<_>, _>>()?;
        if fac.is_projective() {
            let k = yb.iter().position(|s| !s.is_zero()).expect("canonical point");
            pivots.push((t, k));
            for j in (0..comps.len()).filter(|&j| j != k) {
                eqs.push(&comps[j].scale(&yb[k]) - &comps[k].scale(&yb[j]));
            }
        } else {
            for (j, c) in comps.iter().enumerate() {
                eqs.push(c - &MultiPoly::constant(c.vars().clone(), yb[j].clone()));
            }
        }
    }
    Ok((eqs, pivots))
}

fn is_base_point(map: &PolyMap, x: &[Scalar], pivots: &[(usize, usize)]) -> Result<bool, VerifyError> {
    let xf = x.first().map(|s| s.field()).unwrap_or(Field::Rational);
    for &(t, _) in pivots {
        let vals = map.components()[t]
            .iter()
            .map(|p| if xf.is_finite() { p.to_field(&xf)?.evaluate(x) } else { p.evaluate(x) })
            .collect::<Result<Vec<_>, _>>()?;
        let vanishes = match x.first().map(|s| s.field()) {
            Some(Field::Complex) => {
                let size = x.iter().map(|s| s.magnitude()).fold(1.0, f64::max);
                vals.iter().all(|v| {
                    let deg = map.components()[t][0].total_degree() as i32;
                    v.magnitude() <= BASE_POINT_TOL * size.powi(deg) * map.components()[t][0].coefficient_scale()
                })
            }
            _ => vals.iter().all(|v| v.is_zero()),
        };
        if vanishes {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Fiber of an arbitrary map by elimination on every standard chart of its
/// source, discarding base points of the map.
pub(crate) fn map_fiber(map: &PolyMap, y: &SpacePoint, mode: Mode) -> Result<Fiber, VerifyError> {
    let (eqs, pivots) = fiber_equations(map, y)?;
    let field = y.field().unwrap_or(Field::Rational);
    let budget = ElimBudget::default();
    let source = map.source();
    let mut out = Fiber::default();
    for chart in source.standard_charts() {
        let (sys, free) = chart_system(&eqs, &chart, &field)?;
        let sols: Vec<Vec<Scalar>> = match mode {
            Mode::Exact => {
                let s = solve_exact(&sys, &budget, SEED)?;
                out.positive_dimensional |= s.positive_dimensional;
                s.points
            }
            Mode::Numeric => {
                let s = solve_numeric(&sys, &budget, SEED)?;
                out.positive_dimensional |= s.positive_dimensional;
                s.points.into_iter().map(|p| p.into_iter().map(|z: Complex64| Scalar::Complex(z)).collect()).collect()
            }
        };
        for sol in sols {
            let f = sol.first().map(|s| s.field()).unwrap_or_else(|| field.clone());
            let mut coords: Vec<Scalar> = chart
                .iter()
                .map(|s| match s {
                    Slot::Zero => Scalar::zero(&f),
                    _ => Scalar::one(&f),
                })
                .collect();
            for (v, s) in free.iter().zip(sol) {
                coords[*v] = s;
            }
            if is_base_point(map, &coords, &pivots)? {
                continue;
            }
            let mut blocks = Vec::new();
            for i in 0..source.factors().len() {
                blocks.push(coords[source.block_range(i)].to_vec());
            }
            out.points.push((SpacePoint::new(source, blocks)?, None));
        }
    }
    Ok(out)
}
