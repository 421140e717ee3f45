use std::fmt;

use super::space::{FactorKind, Space, SpacePoint};
use super::MapError;
use crate::exactpoly::{Field, MultiPoly, Scalar, Vars};

/// Polynomial map between products of spaces: one tuple of polynomials in
/// the source variables per target factor.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMap {
    source: Space,
    target: Space,
    components: Vec<Vec<MultiPoly>>,
    provenance: String,
    chart_local: bool,
}

impl PolyMap {
    /// Builds and validates a map. Projective target blocks must be
    /// multihomogeneous of a common multidegree in every projective source
    /// block; affine target components must have degree 0 there.
    pub fn new(
        source: Space,
        target: Space,
        components: Vec<Vec<MultiPoly>>,
        provenance: impl Into<String>,
    ) -> Result<Self, MapError> {
        let m = PolyMap { source, target, components, provenance: provenance.into(), chart_local: false };
        m.validate()?;
        Ok(m)
    }

    /// Like [`PolyMap::new`] but allows affine-valued components that are
    /// only meaningful on an affine chart of the source.
    pub fn new_chart_local(
        source: Space,
        target: Space,
        components: Vec<Vec<MultiPoly>>,
        provenance: impl Into<String>,
    ) -> Result<Self, MapError> {
        let m = PolyMap { source, target, components, provenance: provenance.into(), chart_local: true };
        m.validate()?;
        Ok(m)
    }

    pub fn identity(space: &Space) -> Self {
        let vars = space.all_vars();
        let components = (0..space.factors().len())
            .map(|i| {
                space
                    .block_range(i)
                    .map(|j| MultiPoly::var(vars.clone(), &Field::Rational, &vars[j]).expect("own variable"))
                    .collect()
            })
            .collect();
        PolyMap {
            source: space.clone(),
            target: space.clone(),
            components,
            provenance: "id".into(),
            chart_local: false,
        }
    }

    pub fn source(&self) -> &Space {
        &self.source
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    pub fn components(&self) -> &[Vec<MultiPoly>] {
        &self.components
    }

    pub fn flat_components(&self) -> Vec<MultiPoly> {
        self.components.iter().flatten().cloned().collect()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn is_chart_local(&self) -> bool {
        self.chart_local
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn source_vars(&self) -> Vars {
        self.source.all_vars()
    }

    pub fn field(&self) -> Field {
        self.components.iter().flatten().next().map(|p| p.field().clone()).unwrap_or(Field::Rational)
    }

    /// Replaces one component without revalidating homogeneity degrees
    /// against the others; intended for building controls.
    pub fn with_component(mut self, block: usize, index: usize, poly: MultiPoly) -> Result<Self, MapError> {
        let slot = self
            .components
            .get_mut(block)
            .and_then(|b| b.get_mut(index))
            .ok_or_else(|| MapError::SpaceMismatch(format!("no component ({block}, {index})")))?;
        *slot = poly;
        self.validate()?;
        Ok(self)
    }

    /// The same map on a relabeled affine source with the same number of
    /// coordinates (e.g. A¹ x A¹ viewed as A² with new names).
    pub fn with_affine_source(&self, source: Space) -> Result<PolyMap, MapError> {
        if !self.source.is_affine() || !source.is_affine() || source.nvars() != self.source.nvars() {
            return Err(MapError::SpaceMismatch(format!("cannot view {} as {}", self.source, source)));
        }
        let vars = source.all_vars();
        let components = self
            .components
            .iter()
            .map(|b| {
                b.iter()
                    .map(|p| {
                        let terms = p.terms().iter().map(|t| (t.exp.clone(), t.coeff.clone())).collect::<Vec<_>>();
                        MultiPoly::from_terms(vars.clone(), p.field().clone(), terms)
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PolyMap { source, components, ..self.clone() })
    }

    /// Coefficients reduced or embedded into `field`.
    pub fn to_field(&self, field: &Field) -> Result<PolyMap, MapError> {
        let components = self
            .components
            .iter()
            .map(|b| b.iter().map(|p| p.to_field(field)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PolyMap { components, ..self.clone() })
    }

    /// Degree of each projective target block in each projective source
    /// block, as `degrees[target_block][source_block]` (`None` for
    /// non-projective pairs or identically zero blocks).
    pub fn multidegrees(&self) -> Vec<Vec<Option<u32>>> {
        (0..self.target.factors().len())
            .map(|t| {
                (0..self.source.factors().len())
                    .map(|s| {
                        if !self.target.factors()[t].is_projective() || !self.source.factors()[s].is_projective() {
                            return None;
                        }
                        let block: Vec<usize> = self.source.block_range(s).collect();
                        self.components[t].iter().find_map(|p| p.block_degree_range(&block)).map(|r| r.0)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn validate(&self) -> Result<(), MapError> {
        let vars = self.source.all_vars();
        if self.components.len() != self.target.factors().len() {
            return Err(MapError::SpaceMismatch(format!(
                "{} component blocks for target {}",
                self.components.len(),
                self.target
            )));
        }
        let field = self.field();
        for (t, (block, factor)) in self.components.iter().zip(self.target.factors()).enumerate() {
            if block.len() != factor.width() {
                return Err(MapError::SpaceMismatch(format!(
                    "target block {t} needs {} components, got {}",
                    factor.width(),
                    block.len()
                )));
            }
            for p in block {
                if p.vars() != &vars {
                    return Err(MapError::SpaceMismatch(format!(
                        "component variables {:?} differ from source variables {:?}",
                        p.vars(),
                        vars
                    )));
                }
                if p.field() != &field {
                    return Err(MapError::SpaceMismatch("components over different fields".into()));
                }
            }
            for s in self.source.projective_blocks() {
                let src: Vec<usize> = self.source.block_range(s).collect();
                let mut common: Option<u32> = None;
                for (j, p) in block.iter().enumerate() {
                    let Some((lo, hi)) = p.block_degree_range(&src) else { continue };
                    let bad = |why: String| MapError::NotMultihomogeneous(format!("target block {t}, component {j}: {why}"));
                    if lo != hi {
                        return Err(bad(format!("degrees {lo}..{hi} in source block {s}")));
                    }
                    match factor.kind {
                        FactorKind::Affine if lo != 0 && !self.chart_local => {
                            return Err(bad(format!("affine component of degree {lo} in source block {s}")));
                        }
                        FactorKind::Projective => match common {
                            Some(d) if d != lo => {
                                return Err(bad(format!("degree {lo} in source block {s}, others have {d}")));
                            }
                            _ => common = Some(lo),
                        },
                        _ => {}
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}: ", self.source, self.target)?;
        let blocks: Vec<String> = self
            .components
            .iter()
            .zip(self.target.factors())
            .map(|(b, fac)| {
                let parts: Vec<String> = b.iter().map(|p| p.to_string()).collect();
                match fac.kind {
                    FactorKind::Projective => format!("[{}]", parts.join(" : ")),
                    FactorKind::Affine => format!("({})", parts.join(", ")),
                }
            })
            .collect();
        write!(f, "{}", blocks.join(" x "))
    }
}

/// Evaluates `f` at `x` and normalizes projective target blocks. A
/// projective block whose components all vanish is a base point.
pub fn evaluate_map(f: &PolyMap, x: &SpacePoint) -> Result<SpacePoint, MapError> {
    x.check(f.source())?;
    let coords = x.coords();
    let pf = x.field().unwrap_or(Field::Rational);
    let reduced;
    let map = if pf.is_finite() && !f.field().is_finite() {
        reduced = f.to_field(&pf)?;
        &reduced
    } else {
        f
    };
    let mut blocks = Vec::with_capacity(map.components.len());
    for (t, block) in map.components.iter().enumerate() {
        let vals = block.iter().map(|p| p.evaluate(&coords)).collect::<Result<Vec<Scalar>, _>>()?;
        if map.target.factors()[t].is_projective() && vals.iter().all(|v| v.is_zero()) {
            return Err(MapError::BasePointHit { block: t, witness: x.canonical(f.source())? });
        }
        blocks.push(vals);
    }
    SpacePoint::raw(blocks).canonical(f.target())
}

/// `g ∘ f`: substitutes the components of `f` into `g`.
pub fn compose(f: &PolyMap, g: &PolyMap) -> Result<PolyMap, MapError> {
    if !f.target.same_shape(&g.source) {
        return Err(MapError::SpaceMismatch(format!("cannot compose {} -> {} with {} -> {}", f.source, f.target, g.source, g.target)));
    }
    g.validate()?;
    let images = f.flat_components();
    let components = g
        .components
        .iter()
        .map(|b| b.iter().map(|p| p.substitute(&images)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let out = PolyMap {
        source: f.source.clone(),
        target: g.target.clone(),
        components,
        provenance: format!("{} . {}", g.provenance, f.provenance),
        chart_local: f.chart_local || g.chart_local,
    };
    out.validate()?;
    Ok(out)
}

/// `f × g` on the product of sources, with clashing source variables of `g`
/// renamed deterministically.
pub fn product_map(f: &PolyMap, g: &PolyMap) -> Result<PolyMap, MapError> {
    let (source, renamed) = f.source.product(&g.source);
    let (target, _) = f.target.product(&g.target);
    let all = source.all_vars();
    let g_vars: Vars = renamed.into();
    let mut components = Vec::with_capacity(f.components.len() + g.components.len());
    for b in &f.components {
        components.push(b.iter().map(|p| p.with_vars(all.clone())).collect::<Result<Vec<_>, _>>()?);
    }
    for b in &g.components {
        let moved = b
            .iter()
            .map(|p| {
                let relabeled = MultiPoly::from_terms(
                    g_vars.clone(),
                    p.field().clone(),
                    p.terms().iter().map(|t| (t.exp.clone(), t.coeff.clone())).collect::<Vec<_>>(),
                )?;
                relabeled.with_vars(all.clone())
            })
            .collect::<Result<Vec<_>, _>>()?;
        components.push(moved);
    }
    let out = PolyMap {
        source,
        target,
        components,
        provenance: format!("({} x {})", f.provenance, g.provenance),
        chart_local: f.chart_local || g.chart_local,
    };
    out.validate()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::vars;

    fn q(n: i64) -> Scalar {
        Scalar::from_i64(&Field::Rational, n)
    }

    fn h() -> PolyMap {
        let v = vars(&["t"]);
        PolyMap::new(
            Space::affine(1, "t"),
            Space::projective(1, "x"),
            vec![vec![MultiPoly::parse("t^2+1", v.clone()).unwrap(), MultiPoly::parse("t", v).unwrap()]],
            "h",
        )
        .unwrap()
    }

    fn square() -> PolyMap {
        let src = Space::projective(1, "a");
        let v = src.all_vars();
        let c = ["a0^2", "a0*a1", "a1^2"].map(|s| MultiPoly::parse(s, v.clone()).unwrap()).to_vec();
        PolyMap::new(src, Space::projective(2, "x"), vec![c], "square").unwrap()
    }

    fn at(t: i64) -> SpacePoint {
        SpacePoint::new(&Space::affine(1, "t"), vec![vec![q(t)]]).unwrap()
    }

    #[test]
    fn double_cover_values() {
        assert_eq!(evaluate_map(&h(), &at(0)).unwrap().to_string(), "(1:0)");
        assert_eq!(evaluate_map(&h(), &at(1)).unwrap().to_string(), "(1:1/2)");
    }

    #[test]
    fn identity_fixes_points() {
        let s = Space::projective(2, "x");
        let p = SpacePoint::new(&s, vec![vec![q(3), q(-2), q(5)]]).unwrap();
        assert_eq!(evaluate_map(&PolyMap::identity(&s), &p).unwrap(), p);
        assert_eq!(compose(&h(), &PolyMap::identity(h().target())).unwrap().components(), h().components());
    }

    #[test]
    fn composition_expands_and_commutes() {
        let c = compose(&h(), &square()).unwrap();
        let v = vars(&["t"]);
        let expect: Vec<MultiPoly> = ["t^4 + 2*t^2 + 1", "t^3 + t", "t^2"]
            .iter()
            .map(|s| MultiPoly::parse(s, v.clone()).unwrap())
            .collect();
        assert_eq!(c.components()[0], expect);
        let direct = evaluate_map(&c, &at(2)).unwrap();
        let staged = evaluate_map(&square(), &evaluate_map(&h(), &at(2)).unwrap()).unwrap();
        assert_eq!(direct, staged);
        let target = Space::projective(2, "x");
        assert_eq!(direct, SpacePoint::new(&target, vec![vec![q(25), q(10), q(4)]]).unwrap());
    }

    #[test]
    fn product_with_identity() {
        let m = product_map(&h(), &PolyMap::identity(&Space::affine(1, "t"))).unwrap();
        assert_eq!(m.to_string(), "A^1 x A^1 -> P^1 x A^1: [t^2 + 1 : t] x (t_2)");
        let x = SpacePoint::new(m.source(), vec![vec![q(2)], vec![q(7)]]).unwrap();
        assert_eq!(evaluate_map(&m, &x).unwrap().to_string(), "(1:2/5, 7)");
        let id2 = product_map(&PolyMap::identity(&Space::affine(1, "s")), &PolyMap::identity(&Space::projective(1, "x")))
            .unwrap();
        assert_eq!(id2.components(), PolyMap::identity(id2.source()).components());
    }

    #[test]
    fn base_point_reported() {
        let v = vars(&["t"]);
        let bad = PolyMap::new(
            Space::affine(1, "t"),
            Space::projective(1, "x"),
            vec![vec![MultiPoly::parse("t^2", v.clone()).unwrap(), MultiPoly::parse("t", v).unwrap()]],
            "bad",
        )
        .unwrap();
        assert!(matches!(evaluate_map(&bad, &at(0)), Err(MapError::BasePointHit { block: 0, .. })));
    }

    #[test]
    fn rejects_inhomogeneous_block() {
        let src = Space::projective(1, "a");
        let v = src.all_vars();
        let c = ["a0^2", "a0*a1", "a1^3"].map(|s| MultiPoly::parse(s, v.clone()).unwrap()).to_vec();
        assert!(matches!(
            PolyMap::new(src, Space::projective(2, "x"), vec![c], "bad"),
            Err(MapError::NotMultihomogeneous(_))
        ));
    }

    #[test]
    fn finite_field_evaluation_reduces_coefficients() {
        let f = Field::Prime(5);
        let x = SpacePoint::new(&Space::affine(1, "t"), vec![vec![Scalar::from_i64(&f, 2)]]).unwrap();
        // [5 : 2] = [0 : 1] over F_5
        assert_eq!(evaluate_map(&h(), &x).unwrap().to_string(), "(0:1)");
    }
}
