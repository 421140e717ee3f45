use serde::{Deserialize, Serialize};

use super::construction::Construction;
use super::projection::random_linear_projection;
use super::covers::product_p1_construction;
use super::{AtlasError, PseudoChart};
use crate::exactpoly::Scalar;
use crate::varspace::{MapError, Space, SpacePoint};

/// Change of trivialization from chart `from` to chart `to` over
/// U_from ∩ U_to: fiber coordinate k is multiplied by (x_from/x_to)^(a_k).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub from: usize,
    pub to: usize,
    /// Diagonal entry k as exponents of the base coordinates x_0..x_n.
    pub diagonal: Vec<Vec<i64>>,
}

impl Transition {
    /// Exponent vector of the determinant, a single Laurent monomial.
    pub fn determinant(&self) -> Vec<i64> {
        let width = self.diagonal.first().map_or(0, |d| d.len());
        (0..width).map(|j| self.diagonal.iter().map(|d| d[j]).sum()).collect()
    }

    /// Fiber coordinates in chart `to`; `None` off the overlap.
    pub fn apply(&self, base: &[Scalar], fiber: &[Scalar]) -> Option<Vec<Scalar>> {
        self.diagonal
            .iter()
            .zip(fiber)
            .map(|(mono, v)| {
                let mut acc = v.clone();
                for (x, &e) in base.iter().zip(mono) {
                    let f = if e >= 0 { x.pow(e as u32) } else { x.inv()?.pow((-e) as u32) };
                    acc = &acc * &f;
                }
                Some(acc)
            })
            .collect()
    }
}

/// P(O(a_0) ⊕ ... ⊕ O(a_r)) over P^n with one chart A^n x A^r -> U_i x P^r
/// per standard open set U_i = {x_i ≠ 0}.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BundleAtlas {
    pub n: usize,
    pub degrees: Vec<i64>,
    pub charts: Vec<PseudoChart>,
    pub transitions: Vec<Transition>,
    pub seed: u64,
}

/// A point of the bundle: a base point of P^n and fiber coordinates in the
/// trivialization over the first nonzero base coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct BundlePoint {
    pub base: SpacePoint,
    pub fiber: Vec<Scalar>,
}

impl BundlePoint {
    pub fn new(n: usize, base: Vec<Scalar>, fiber: Vec<Scalar>) -> Result<Self, MapError> {
        let base = SpacePoint::new(&Space::projective(n, "x"), vec![base])?;
        if fiber.iter().all(|s| s.is_zero()) {
            return Err(MapError::InvalidPoint("fiber coordinates are all zero".into()));
        }
        Ok(BundlePoint { base, fiber })
    }

    /// Index of the trivialization the fiber coordinates refer to.
    pub fn home_chart(&self) -> usize {
        self.base.blocks()[0].iter().position(|s| !s.is_zero()).expect("canonical point")
    }
}

impl BundleAtlas {
    pub fn transition(&self, from: usize, to: usize) -> Option<&Transition> {
        self.transitions.iter().find(|t| t.from == from && t.to == to)
    }

    /// The point of chart `j`'s target U_j x P^r lying over `p`, or `None`
    /// when the base point is off U_j.
    pub fn chart_target(&self, j: usize, p: &BundlePoint) -> Option<SpacePoint> {
        let x = &p.base.blocks()[0];
        let xj_inv = x.get(j)?.inv()?;
        let home = p.home_chart();
        let fiber = if home == j { p.fiber.clone() } else { self.transition(home, j)?.apply(x, &p.fiber)? };
        let u: Vec<Scalar> = x.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, s)| s * &xj_inv).collect();
        let target = self.charts[j].map.target();
        SpacePoint::new(target, vec![u, fiber]).ok()
    }
}

/// The chart family for the split bundle with the given splitting degrees
/// (r + 1 of them). The fiber cover of P^r is the double cover for r = 1
/// and the projection chart of degree r! 2^r for r = 2.
pub fn bundle_atlas(n: usize, degrees: &[i64], seed: u64) -> Result<BundleAtlas, AtlasError> {
    let r = degrees.len().saturating_sub(1);
    if n == 0 || !(1..=2).contains(&r) {
        return Err(AtlasError::Parameter(format!(
            "bundle atlas needs n >= 1 and 2 or 3 splitting degrees, got n = {n} and {} degrees",
            degrees.len()
        )));
    }
    let fiber = if r == 1 {
        Construction::DoubleCover
    } else {
        let proj = random_linear_projection(r, seed)?;
        Construction::Compose { stages: vec![product_p1_construction(r), Construction::Segre { n: r }, proj.construction] }
    };
    let chart = Construction::Extend { cover: Box::new(fiber), before: Space::affine(n, "u"), after: Space::point() };
    let chart = PseudoChart::from_construction(chart, (r > 1).then_some(seed))?;
    let charts = vec![chart; n + 1];
    let mut transitions = Vec::new();
    for from in 0..=n {
        for to in 0..=n {
            if from == to {
                continue;
            }
            let diagonal = degrees
                .iter()
                .map(|&a| {
                    let mut e = vec![0; n + 1];
                    e[from] += a;
                    e[to] -= a;
                    e
                })
                .collect();
            transitions.push(Transition { from, to, diagonal });
        }
    }
    Ok(BundleAtlas { n, degrees: degrees.to_vec(), charts, transitions, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::Field;

    fn q(v: i64) -> Scalar {
        Scalar::from_i64(&Field::Rational, v)
    }

    #[test]
    fn hirzebruch_atlas_shape() {
        let a = bundle_atlas(1, &[0, 2], 0).unwrap();
        assert_eq!(a.charts.len(), 2);
        assert_eq!(a.charts[0].claimed_degree, 2);
        assert_eq!(a.charts[0].map.target().to_string(), "A^1 x P^1");
        assert_eq!(a.transition(0, 1).unwrap().determinant(), vec![2, -2]);
    }

    #[test]
    fn fiber_coordinates_transform_by_monomials() {
        let a = bundle_atlas(1, &[0, 2], 0).unwrap();
        // base [1:2], fiber [1:1] over U_0; over U_1 the second entry scales by (1/2)^2
        let p = BundlePoint::new(1, vec![q(1), q(2)], vec![q(1), q(1)]).unwrap();
        let t = a.chart_target(1, &p).unwrap();
        assert_eq!(t.to_string(), "(1/2, 1:1/4)");
        let off = BundlePoint::new(1, vec![q(0), q(1)], vec![q(1), q(0)]).unwrap();
        assert!(a.chart_target(0, &off).is_none());
        assert_eq!(a.chart_target(1, &off).unwrap().to_string(), "(0, 1:0)");
    }

    #[test]
    fn rank_three_fiber_uses_projection_chart() {
        let a = bundle_atlas(2, &[0, 0, 1], 3).unwrap();
        assert_eq!(a.charts.len(), 3);
        assert_eq!(a.charts[0].claimed_degree, 8);
        assert_eq!(a.transitions.len(), 6);
        assert!(bundle_atlas(0, &[0, 1], 0).is_err());
        assert!(bundle_atlas(1, &[0, 1, 2, 3], 0).is_err());
    }
}
