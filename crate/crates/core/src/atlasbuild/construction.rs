use serde::{Deserialize, Serialize};

use crate::exactpoly::{Field, MultiPoly, Scalar};
use crate::varspace::{compose, product_map, MapError, PolyMap, Space};

/// Construction tree of a chart. Leaves are the base maps; inner nodes
/// combine them. Every leaf knows its degree onto its image.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum Construction {
    /// A¹ -> P¹, t -> [t²+1 : t].
    DoubleCover,
    Identity { space: Space },
    /// P¹ x P¹ -> P², the coefficients of the product of two linear forms.
    Sym2,
    /// (P¹)^n -> P^(2^n - 1).
    Segre { n: usize },
    /// P^(2^n - 1) -> P^n by integer linear forms (rows), finite on the
    /// Segre variety when its center is disjoint from it.
    LinearProjection {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
        coefficients: Vec<Vec<i64>>,
    },
    /// `Id_before x cover x Id_after`.
    Extend { cover: Box<Construction>, before: Space, after: Space },
    Product { factors: Vec<Construction> },
    /// Stages applied left to right.
    Compose { stages: Vec<Construction> },
    /// A map given only by its components, with a declared degree.
    Explicit { map: PolyMap, degree: u64 },
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// `k` separate affine lines with coordinates `s1..sk`.
pub(crate) fn affine_lines(k: usize, prefix: &str) -> Space {
    (1..=k).fold(Space::point(), |acc, i| acc.product(&Space::affine(1, &format!("{prefix}{i}"))).0)
}

impl Construction {
    pub fn source(&self) -> Space {
        match self {
            Construction::DoubleCover => Space::affine(1, "t"),
            Construction::Identity { space } => space.clone(),
            Construction::Sym2 => Space::p1_power(2),
            Construction::Segre { n } => Space::p1_power(*n),
            Construction::LinearProjection { n, .. } => Space::projective((1 << n) - 1, "x"),
            Construction::Extend { cover, before, after } => before.product(&cover.source()).0.product(after).0,
            Construction::Product { factors } => {
                factors.iter().fold(Space::point(), |acc, f| acc.product(&f.source()).0)
            }
            Construction::Compose { stages } => stages.first().map(|s| s.source()).unwrap_or_else(Space::point),
            Construction::Explicit { map, .. } => map.source().clone(),
        }
    }

    pub fn target(&self) -> Space {
        match self {
            Construction::DoubleCover => Space::projective(1, "x"),
            Construction::Identity { space } => space.clone(),
            Construction::Sym2 => Space::projective(2, "x"),
            Construction::Segre { n } => Space::projective((1 << n) - 1, "x"),
            Construction::LinearProjection { n, .. } => Space::projective(*n, "y"),
            Construction::Extend { cover, before, after } => before.product(&cover.target()).0.product(after).0,
            Construction::Product { factors } => {
                factors.iter().fold(Space::point(), |acc, f| acc.product(&f.target()).0)
            }
            Construction::Compose { stages } => stages.last().map(|s| s.target()).unwrap_or_else(Space::point),
            Construction::Explicit { map, .. } => map.target().clone(),
        }
    }

    /// Product of the leaf degrees; a linear projection counts with the
    /// degree n! of the Segre variety it is applied to.
    pub fn degree(&self) -> u64 {
        match self {
            Construction::DoubleCover | Construction::Sym2 => 2,
            Construction::Identity { .. } | Construction::Segre { .. } => 1,
            Construction::LinearProjection { n, .. } => factorial(*n),
            Construction::Extend { cover, .. } => cover.degree(),
            Construction::Product { factors } => factors.iter().map(|f| f.degree()).product(),
            Construction::Compose { stages } => stages.iter().map(|s| s.degree()).product(),
            Construction::Explicit { degree, .. } => *degree,
        }
    }

    pub fn map(&self) -> Result<PolyMap, MapError> {
        let q = Field::Rational;
        let parse = |src: &str, space: &Space| MultiPoly::parse(src, space.all_vars()).map_err(MapError::from);
        match self {
            Construction::DoubleCover => {
                let s = self.source();
                let c = vec![parse("t^2 + 1", &s)?, parse("t", &s)?];
                PolyMap::new(s, self.target(), vec![c], "p1_double_cover")
            }
            Construction::Identity { space } => Ok(PolyMap::identity(space)),
            Construction::Sym2 => {
                let s = self.source();
                let c = vec![parse("b1*b2", &s)?, parse("a1*b2 + b1*a2", &s)?, parse("a1*a2", &s)?];
                PolyMap::new(s, self.target(), vec![c], "sym2")
            }
            Construction::Segre { n } => {
                let s = self.source();
                let vars = s.all_vars();
                let c = (0..1usize << n)
                    .map(|idx| {
                        let mut exp = vec![0u32; vars.len()];
                        for i in 0..*n {
                            let bit = (idx >> (n - 1 - i)) & 1;
                            exp[2 * i + bit] = 1;
                        }
                        MultiPoly::from_terms(vars.clone(), q.clone(), vec![(exp, Scalar::one(&q))])
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                PolyMap::new(s, self.target(), vec![c], format!("segre({n})"))
            }
            Construction::LinearProjection { n, coefficients, .. } => {
                let s = self.source();
                let vars = s.all_vars();
                if coefficients.len() != n + 1 || coefficients.iter().any(|r| r.len() != vars.len()) {
                    return Err(MapError::SpaceMismatch(format!(
                        "projection to P^{n} needs {} rows of {} coefficients",
                        n + 1,
                        vars.len()
                    )));
                }
                let c = coefficients
                    .iter()
                    .map(|row| {
                        let terms = row.iter().enumerate().map(|(k, &c)| {
                            let mut exp = vec![0u32; vars.len()];
                            exp[k] = 1;
                            (exp, Scalar::from_i64(&q, c))
                        });
                        MultiPoly::from_terms(vars.clone(), q.clone(), terms.collect::<Vec<_>>())
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                PolyMap::new(s, self.target(), vec![c], format!("projection({n})"))
            }
            Construction::Extend { cover, before, after } => {
                let inner = product_map(&PolyMap::identity(before), &cover.map()?)?;
                let m = product_map(&inner, &PolyMap::identity(after))?;
                Ok(m.with_provenance(format!("extend({})", cover.map()?.provenance())))
            }
            Construction::Product { factors } => {
                let mut acc = PolyMap::identity(&Space::point());
                for f in factors {
                    acc = product_map(&acc, &f.map()?)?;
                }
                Ok(acc)
            }
            Construction::Compose { stages } => {
                let mut it = stages.iter();
                let first = it.next().ok_or_else(|| MapError::SpaceMismatch("empty composition".into()))?;
                let mut acc = first.map()?;
                for s in it {
                    acc = compose(&acc, &s.map()?)?;
                }
                Ok(acc)
            }
            Construction::Explicit { map, .. } => Ok(map.clone()),
        }
    }
}
