use std::collections::HashSet;
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::MapError;
use crate::exactpoly::{Field, Scalar, Vars};

/// Relative tolerance for comparing complex points after normalization.
pub const COMPLEX_POINT_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorKind {
    Affine,
    Projective,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub kind: FactorKind,
    pub dim: usize,
    pub vars: Vec<String>,
}

impl Factor {
    /// Number of coordinates: `dim` for affine, `dim + 1` for projective.
    pub fn width(&self) -> usize {
        match self.kind {
            FactorKind::Affine => self.dim,
            FactorKind::Projective => self.dim + 1,
        }
    }

    pub fn is_projective(&self) -> bool {
        self.kind == FactorKind::Projective
    }
}

/// An ordered product of affine and projective factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SpaceRepr", into = "SpaceRepr")]
pub struct Space {
    factors: Vec<Factor>,
}

#[derive(Serialize, Deserialize)]
struct SpaceRepr {
    factors: Vec<Factor>,
}

impl TryFrom<SpaceRepr> for Space {
    type Error = MapError;
    fn try_from(r: SpaceRepr) -> Result<Self, MapError> {
        Space::new(r.factors)
    }
}

impl From<Space> for SpaceRepr {
    fn from(s: Space) -> Self {
        SpaceRepr { factors: s.factors }
    }
}

fn names(prefix: &str, count: usize, from: usize) -> Vec<String> {
    (from..from + count).map(|i| format!("{prefix}{i}")).collect()
}

impl Space {
    pub fn new(factors: Vec<Factor>) -> Result<Self, MapError> {
        let mut seen = HashSet::new();
        for f in &factors {
            if f.dim == 0 {
                return Err(MapError::InvalidSpace("factor of dimension 0".into()));
            }
            if f.vars.len() != f.width() {
                return Err(MapError::InvalidSpace(format!(
                    "{:?} factor of dimension {} needs {} variables, got {}",
                    f.kind,
                    f.dim,
                    f.width(),
                    f.vars.len()
                )));
            }
            for v in &f.vars {
                if !seen.insert(v.clone()) {
                    return Err(MapError::InvalidSpace(format!("duplicate variable {v}")));
                }
            }
        }
        Ok(Space { factors })
    }

    /// The zero-dimensional space (a point): the unit of products.
    pub fn point() -> Self {
        Space { factors: vec![] }
    }

    /// A^dim with variables `prefix` (dim 1) or `prefix1..prefixdim`.
    pub fn affine(dim: usize, prefix: &str) -> Self {
        let vars = if dim == 1 { vec![prefix.to_string()] } else { names(prefix, dim, 1) };
        Space::new(vec![Factor { kind: FactorKind::Affine, dim, vars }]).expect("valid affine space")
    }

    /// P^dim with variables `prefix0..prefixdim`.
    pub fn projective(dim: usize, prefix: &str) -> Self {
        let vars = names(prefix, dim + 1, 0);
        Space::new(vec![Factor { kind: FactorKind::Projective, dim, vars }]).expect("valid projective space")
    }

    /// (P¹)^n with blocks `[a1:b1], ..., [an:bn]`.
    pub fn p1_power(n: usize) -> Self {
        let factors = (1..=n)
            .map(|i| Factor { kind: FactorKind::Projective, dim: 1, vars: vec![format!("a{i}"), format!("b{i}")] })
            .collect();
        Space::new(factors).expect("distinct names")
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim).sum()
    }

    pub fn nvars(&self) -> usize {
        self.factors.iter().map(|f| f.width()).sum()
    }

    pub fn all_vars(&self) -> Vars {
        self.factors.iter().flat_map(|f| f.vars.iter().cloned()).collect::<Vec<_>>().into()
    }

    /// Index range of factor `i` within [`Space::all_vars`].
    pub fn block_range(&self, i: usize) -> Range<usize> {
        let start: usize = self.factors[..i].iter().map(|f| f.width()).sum();
        start..start + self.factors[i].width()
    }

    pub fn projective_blocks(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.factors.len()).filter(|&i| self.factors[i].is_projective())
    }

    pub fn is_affine(&self) -> bool {
        self.factors.iter().all(|f| f.kind == FactorKind::Affine)
    }

    /// Same factor kinds and dimensions, ignoring variable names.
    pub fn same_shape(&self, other: &Space) -> bool {
        self.factors.len() == other.factors.len()
            && self.factors.iter().zip(&other.factors).all(|(a, b)| a.kind == b.kind && a.dim == b.dim)
    }

    /// Product space. Names of `other` clashing with names already used are
    /// renamed deterministically by appending `_2`, `_3`, ...; returns the
    /// product and the (possibly renamed) variables of `other`, in order.
    pub fn product(&self, other: &Space) -> (Space, Vec<String>) {
        let mut used: HashSet<String> = self.factors.iter().flat_map(|f| f.vars.iter().cloned()).collect();
        let mut factors = self.factors.clone();
        let mut renamed = Vec::new();
        for f in &other.factors {
            let vars: Vec<String> = f
                .vars
                .iter()
                .map(|v| {
                    let mut name = v.clone();
                    let mut k = 2;
                    while used.contains(&name) {
                        name = format!("{v}_{k}");
                        k += 1;
                    }
                    used.insert(name.clone());
                    name
                })
                .collect();
            renamed.extend(vars.iter().cloned());
            factors.push(Factor { kind: f.kind, dim: f.dim, vars });
        }
        (Space { factors }, renamed)
    }
}

/// Role of one coordinate in a standard affine chart of a space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Zero,
    One,
    Free,
}

impl Space {
    /// The standard stratification into affine charts: in each projective
    /// block the first nonzero coordinate is set to 1 and earlier ones to 0.
    /// Every point lies in exactly one chart; there are prod (d_i + 1) charts.
    pub fn standard_charts(&self) -> Vec<Vec<Slot>> {
        let mut charts: Vec<Vec<Slot>> = vec![vec![]];
        for f in &self.factors {
            let options: Vec<Vec<Slot>> = match f.kind {
                FactorKind::Affine => vec![vec![Slot::Free; f.dim]],
                FactorKind::Projective => (0..=f.dim)
                    .map(|pivot| {
                        (0..=f.dim)
                            .map(|j| match j.cmp(&pivot) {
                                std::cmp::Ordering::Less => Slot::Zero,
                                std::cmp::Ordering::Equal => Slot::One,
                                std::cmp::Ordering::Greater => Slot::Free,
                            })
                            .collect()
                    })
                    .collect(),
            };
            charts = charts
                .into_iter()
                .flat_map(|c| {
                    options.iter().map(move |o| {
                        let mut c = c.clone();
                        c.extend(o.iter().copied());
                        c
                    })
                })
                .collect();
        }
        charts
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "pt");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|x| match x.kind {
                FactorKind::Affine => format!("A^{}", x.dim),
                FactorKind::Projective => format!("P^{}", x.dim),
            })
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Coordinates of a point, one block per factor. Points built through
/// [`SpacePoint::new`] are canonical: each projective block has its first
/// nonzero coordinate equal to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct SpacePoint {
    blocks: Vec<Vec<Scalar>>,
}

fn is_negligible(s: &Scalar, scale: f64) -> bool {
    match s {
        Scalar::Complex(z) => z.norm() <= 1e-12 * scale,
        other => other.is_zero(),
    }
}

impl SpacePoint {
    /// Validates `blocks` against `space` and normalizes projective blocks.
    pub fn new(space: &Space, blocks: Vec<Vec<Scalar>>) -> Result<Self, MapError> {
        let p = Self::raw(blocks);
        p.check(space)?;
        p.canonical(space)
    }

    /// Unnormalized point; call [`SpacePoint::canonical`] before comparing.
    pub fn raw(blocks: Vec<Vec<Scalar>>) -> Self {
        SpacePoint { blocks }
    }

    pub fn blocks(&self) -> &[Vec<Scalar>] {
        &self.blocks
    }

    pub fn coords(&self) -> Vec<Scalar> {
        self.blocks.iter().flatten().cloned().collect()
    }

    pub fn field(&self) -> Option<Field> {
        self.blocks.iter().flatten().next().map(|s| s.field())
    }

    pub fn check(&self, space: &Space) -> Result<(), MapError> {
        if self.blocks.len() != space.factors().len() {
            return Err(MapError::InvalidPoint(format!(
                "{} blocks for a space with {} factors",
                self.blocks.len(),
                space.factors().len()
            )));
        }
        let field = self.field();
        for (b, f) in self.blocks.iter().zip(space.factors()) {
            if b.len() != f.width() {
                return Err(MapError::InvalidPoint(format!("block of length {} for {} coordinates", b.len(), f.width())));
            }
            if b.iter().any(|s| Some(s.field()) != field) {
                return Err(MapError::InvalidPoint("coordinates over different fields".into()));
            }
            if f.is_projective() && b.iter().all(|s| s.is_zero()) {
                return Err(MapError::InvalidPoint("projective block is identically zero".into()));
            }
        }
        Ok(())
    }

    /// Scales every projective block so its first nonzero coordinate is 1.
    /// Complex coordinates below 1e-12 of the block's largest are treated as zero.
    pub fn canonical(&self, space: &Space) -> Result<Self, MapError> {
        let mut blocks = self.blocks.clone();
        for (i, f) in space.factors().iter().enumerate() {
            if !f.is_projective() {
                continue;
            }
            let b = &mut blocks[i];
            let scale = b.iter().map(|s| s.magnitude()).fold(0.0, f64::max);
            let pivot = b
                .iter()
                .position(|s| !is_negligible(s, scale))
                .ok_or_else(|| MapError::InvalidPoint("projective block is identically zero".into()))?;
            let inv = b[pivot].inv().expect("nonzero pivot");
            for (j, s) in b.iter_mut().enumerate() {
                *s = if j < pivot { Scalar::zero(&s.field()) } else { &*s * &inv };
            }
            b[pivot] = Scalar::one(&b[pivot].field());
        }
        Ok(SpacePoint { blocks })
    }

    /// Equality of canonical points: exact over exact fields, relative
    /// tolerance [`COMPLEX_POINT_TOL`] for complex coordinates.
    pub fn approx_eq(&self, other: &SpacePoint, tol: f64) -> bool {
        self.blocks.len() == other.blocks.len()
            && self.blocks.iter().zip(&other.blocks).all(|(a, b)| {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(y, tol))
            })
    }

    /// Coordinates embedded into a larger field.
    pub fn coerce_into(&self, field: &Field) -> Result<SpacePoint, MapError> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|s| s.coerce_into(field)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SpacePoint { blocks })
    }
}

impl fmt::Display for SpacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(":"))
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_scales_first_nonzero() {
        let s = Space::projective(2, "x");
        let q = Field::Rational;
        let p = SpacePoint::new(&s, vec![vec![Scalar::zero(&q), Scalar::from_i64(&q, 4), Scalar::from_i64(&q, 2)]])
            .unwrap();
        assert_eq!(p.to_string(), "(0:1:1/2)");
    }

    #[test]
    fn rejects_zero_projective_block() {
        let s = Space::projective(1, "x");
        let z = Scalar::zero(&Field::Rational);
        assert!(SpacePoint::new(&s, vec![vec![z.clone(), z]]).is_err());
    }

    #[test]
    fn product_renames_clashes() {
        let (p, renamed) = Space::affine(1, "t").product(&Space::affine(1, "t"));
        assert_eq!(&*p.all_vars(), &["t".to_string(), "t_2".to_string()]);
        assert_eq!(renamed, vec!["t_2"]);
    }

    #[test]
    fn chart_count() {
        let s = Space::p1_power(2).product(&Space::affine(1, "t")).0;
        let charts = s.standard_charts();
        assert_eq!(charts.len(), 4);
        assert_eq!(charts[1], vec![Slot::One, Slot::Free, Slot::Zero, Slot::One, Slot::Free]);
    }

    #[test]
    fn rejects_wrong_width() {
        let f = Factor { kind: FactorKind::Projective, dim: 2, vars: vec!["x".into(), "y".into()] };
        assert!(Space::new(vec![f]).is_err());
    }
}
