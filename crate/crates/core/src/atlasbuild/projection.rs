use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::construction::Construction;
use super::covers::product_p1_construction;
use super::{AtlasError, PseudoChart};
use crate::exactpoly::{has_common_zero, ElimBudget, MultiPoly, Scalar};
use crate::varspace::{compose, PolyMap, Slot};

/// Draws tried by [`random_linear_projection`] before giving up.
pub const MAX_PROJECTION_ATTEMPTS: usize = 8;

/// Primes at which a draw is screened for F_p-points of the center on the
/// Segre variety before the exact check (n = 3 only).
const PREFILTER_PRIMES: [u64; 3] = [31, 37, 41];

/// Evidence that the pulled-back linear forms have no common zero on (P¹)^n.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CenterCertificate {
    pub n: usize,
    /// One line per standard chart of (P¹)^n.
    pub charts: Vec<String>,
    pub prefilter_primes: Vec<u64>,
    pub attempts: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Projection {
    pub construction: Construction,
    pub map: PolyMap,
    pub certificate: CenterCertificate,
}

impl Projection {
    pub fn coefficients(&self) -> &[Vec<i64>] {
        match &self.construction {
            Construction::LinearProjection { coefficients, .. } => coefficients,
            _ => unreachable!("a projection is built from its coefficients"),
        }
    }
}

fn check_n(n: usize) -> Result<(), AtlasError> {
    if !(2..=3).contains(&n) {
        return Err(AtlasError::Parameter(format!("linear projection of the Segre variety needs 2 <= n <= 3, got {n}")));
    }
    Ok(())
}

/// The forms L_j(segre(x)) on (P¹)^n, as a map (P¹)^n -> P^n.
pub fn pulled_back_forms(n: usize, coefficients: &[Vec<i64>]) -> Result<PolyMap, AtlasError> {
    let segre = Construction::Segre { n }.map()?;
    let proj = Construction::LinearProjection { n, seed: None, coefficients: coefficients.to_vec() }.map()?;
    Ok(compose(&segre, &proj)?)
}

/// Restricts polynomials on a space to one standard chart.
pub fn restrict_to_chart(polys: &[MultiPoly], chart: &[Slot]) -> Result<Vec<MultiPoly>, AtlasError> {
    let Some(first) = polys.first() else { return Ok(vec![]) };
    let field = first.field().clone();
    let slots: Vec<Option<Scalar>> = chart
        .iter()
        .map(|s| match s {
            Slot::Zero => Some(Scalar::zero(&field)),
            Slot::One => Some(Scalar::one(&field)),
            Slot::Free => None,
        })
        .collect();
    Ok(polys.iter().map(|p| p.evaluate_partial(&slots)).collect::<Result<Vec<_>, _>>()?)
}

fn chart_label(chart: &[Slot]) -> String {
    chart
        .chunks(2)
        .map(|c| if c[0] == Slot::One { "[1:*]" } else { "[0:1]" })
        .collect::<Vec<_>>()
        .join("x")
}

/// Does some point of (P¹)^n(F_p) lie on every pulled-back form?
fn has_fp_point(n: usize, coefficients: &[Vec<i64>], p: u64) -> bool {
    let p = p as i64;
    let per_factor: Vec<(i64, i64)> = (0..p).map(|t| (1, t)).chain(std::iter::once((0, 1))).collect();
    let total = per_factor.len().pow(n as u32);
    (0..total).any(|mut idx| {
        let mut pt = Vec::with_capacity(n);
        for _ in 0..n {
            pt.push(per_factor[idx % per_factor.len()]);
            idx /= per_factor.len();
        }
        coefficients.iter().all(|row| {
            let mut acc = 0i64;
            for (k, &c) in row.iter().enumerate() {
                let mut m = c.rem_euclid(p);
                for (i, &(a, b)) in pt.iter().enumerate() {
                    let bit = (k >> (n - 1 - i)) & 1;
                    m = m * if bit == 0 { a } else { b } % p;
                }
                acc = (acc + m) % p;
            }
            acc == 0
        })
    })
}

/// Certifies that the linear forms given by `coefficients` (n+1 rows of
/// 2^n integers) have a center disjoint from the Segre variety: on every
/// standard chart of (P¹)^n the pulled-back forms have no common zero.
pub fn certify_center(n: usize, coefficients: &[Vec<i64>]) -> Result<CenterCertificate, AtlasError> {
    check_n(n)?;
    let forms = pulled_back_forms(n, coefficients)?;
    let polys = forms.flat_components();
    let mut prefilter_primes = Vec::new();
    if n == 3 {
        prefilter_primes = PREFILTER_PRIMES.to_vec();
        if PREFILTER_PRIMES.iter().all(|&p| has_fp_point(n, coefficients, p)) {
            return Err(AtlasError::CenterMeetsVariety {
                attempts: 1,
                detail: format!("common zeros over F_p for every p in {PREFILTER_PRIMES:?}"),
            });
        }
    }
    let budget = ElimBudget::default();
    let mut charts = Vec::new();
    for chart in forms.source().standard_charts() {
        let label = chart_label(&chart);
        let system = restrict_to_chart(&polys, &chart)?;
        match has_common_zero(&system, &budget, 0x5eed)? {
            Some(false) => charts.push(format!("{label}: no common zero (elimination)")),
            Some(true) => {
                return Err(AtlasError::CenterMeetsVariety {
                    attempts: 1,
                    detail: format!("common zero on chart {label}"),
                })
            }
            None => {
                return Err(AtlasError::CenterMeetsVariety {
                    attempts: 1,
                    detail: format!("disjointness not certified on chart {label}"),
                })
            }
        }
    }
    Ok(CenterCertificate { n, charts, prefilter_primes, attempts: 1 })
}

/// A projection with the given coefficients, certified once.
pub fn projection_from_coefficients(n: usize, coefficients: Vec<Vec<i64>>) -> Result<Projection, AtlasError> {
    let certificate = certify_center(n, &coefficients)?;
    let construction = Construction::LinearProjection { n, seed: None, coefficients };
    Ok(Projection { map: construction.map()?, construction, certificate })
}

/// P^(2^n - 1) -> P^n by n+1 linear forms with coefficients drawn uniformly
/// from -9..=9 by a generator seeded with `seed`, redrawn until the center
/// is certified disjoint from the Segre variety.
pub fn random_linear_projection(n: usize, seed: u64) -> Result<Projection, AtlasError> {
    check_n(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = String::new();
    for attempt in 1..=MAX_PROJECTION_ATTEMPTS {
        let coefficients: Vec<Vec<i64>> =
            (0..=n).map(|_| (0..1usize << n).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        match certify_center(n, &coefficients) {
            Ok(mut certificate) => {
                certificate.attempts = attempt;
                let construction = Construction::LinearProjection { n, seed: Some(seed), coefficients };
                return Ok(Projection { map: construction.map()?, construction, certificate });
            }
            Err(AtlasError::CenterMeetsVariety { detail, .. }) => last = detail,
            Err(e) => return Err(e),
        }
    }
    Err(AtlasError::CenterMeetsVariety { attempts: MAX_PROJECTION_ATTEMPTS, detail: last })
}

/// A^n -> P^n: the (P¹)^n chart, the Segre map and a certified projection.
/// Claimed degree n! 2^n.
pub fn cover_pn(n: usize, seed: u64) -> Result<PseudoChart, AtlasError> {
    check_n(n)?;
    let proj = random_linear_projection(n, seed)?;
    let c = Construction::Compose {
        stages: vec![product_p1_construction(n), Construction::Segre { n }, proj.construction],
    };
    PseudoChart::from_construction(c, Some(seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bad_draw_is_rejected() {
        // no coefficient on x0 = a1*a2, so segre([1:0],[1:0]) is in the center
        let bad = vec![vec![0, 1, 2, 3], vec![0, 3, -1, 4], vec![0, -2, 5, 1]];
        assert!(matches!(projection_from_coefficients(2, bad), Err(AtlasError::CenterMeetsVariety { .. })));
    }

    #[test]
    fn draws_are_deterministic() {
        let a = random_linear_projection(2, 7).unwrap();
        let b = random_linear_projection(2, 7).unwrap();
        assert_eq!(a.construction, b.construction);
        assert_eq!(a.certificate.charts.len(), 4);
    }

    #[test]
    fn pn_claimed_degrees() {
        assert_eq!(cover_pn(2, 1).unwrap().claimed_degree, 8);
        let c3 = cover_pn(3, 1).unwrap();
        assert_eq!(c3.claimed_degree, 48);
        assert_eq!(c3.seed, Some(1));
        assert!(cover_pn(4, 1).is_err());
    }

    #[test]
    fn fp_screen_sees_rational_points() {
        let bad = vec![vec![0, 1, 2, 3, 1, 1, 1, 1], vec![0; 8], vec![0; 8], vec![0; 8]];
        assert!(has_fp_point(3, &bad, 31));
    }
}
