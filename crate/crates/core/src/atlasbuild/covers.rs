use super::construction::{affine_lines, Construction};
use super::{AtlasError, PseudoChart};
use crate::varspace::{product_map, MapError, PolyMap, Space};

/// A¹ -> P¹, t -> [t²+1 : t], degree 2. The components never vanish
/// together, and the fiber over [a:b] is cut out by b t² - a t + b, which
/// is never a nonzero constant.
pub fn p1_double_cover() -> PseudoChart {
    PseudoChart::from_construction(Construction::DoubleCover, None).expect("fixed construction")
}

/// `c x Id_Y`: A^n x Y -> X x Y.
pub fn extend_over_base(c: &PseudoChart, y: &Space) -> Result<PolyMap, MapError> {
    product_map(&c.map, &PolyMap::identity(y))
}

/// The product extension applied n times: stage i is the double cover on
/// factor i with the identity on the others, A^n -> (P¹)^n, degree 2^n.
pub fn cover_product_p1(n: usize) -> Result<PseudoChart, AtlasError> {
    if n == 0 {
        return Err(AtlasError::Parameter("cover_product_p1 needs n >= 1".into()));
    }
    PseudoChart::from_construction(product_p1_construction(n), None)
}

pub(crate) fn product_p1_construction(n: usize) -> Construction {
    let stages = (1..=n)
        .map(|i| Construction::Extend {
            cover: Box::new(Construction::DoubleCover),
            before: Space::p1_power(i - 1),
            after: affine_lines(n - i, "s"),
        })
        .collect();
    Construction::Compose { stages }
}

/// P¹ x P¹ -> P², ([a:b], [c:d]) -> [bd : ad + bc : ac]: the coefficients
/// of (a u + b)(c u + d), so the fiber over a point is the set of ordered
/// factorizations of a binary quadratic form.
pub fn sym2_cover() -> PolyMap {
    Construction::Sym2.map().expect("fixed construction")
}

/// A² -> P², the (P¹)² chart followed by the symmetric square, degree 8.
pub fn cover_p2() -> PseudoChart {
    let c = Construction::Compose { stages: vec![product_p1_construction(2), Construction::Sym2] };
    PseudoChart::from_construction(c, None).expect("fixed construction")
}

/// Segre map (P¹)^n -> P^(2^n - 1); coordinate k is the product choosing
/// b_i when bit i of k (first factor most significant) is set, a_i otherwise.
pub fn segre(n: usize) -> Result<PolyMap, AtlasError> {
    if !(1..=4).contains(&n) {
        return Err(AtlasError::Parameter(format!("segre needs 1 <= n <= 4, got {n}")));
    }
    Ok(Construction::Segre { n }.map()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{resultant, Field, MultiPoly, Scalar};
    use crate::varspace::{evaluate_map, SpacePoint};

    fn q(n: i64) -> Scalar {
        Scalar::from_i64(&Field::Rational, n)
    }

    #[test]
    fn double_cover_components() {
        let c = p1_double_cover();
        assert_eq!(c.map.to_string(), "A^1 -> P^1: [t^2 + 1 : t]");
        assert_eq!(c.claimed_degree, 2);
        let [f, g] = [&c.map.components()[0][0], &c.map.components()[0][1]];
        assert_eq!(resultant(f, g, "t").unwrap(), MultiPoly::one(f.vars().clone(), &Field::Rational));
    }

    #[test]
    fn product_cover_degrees() {
        for n in 1..=3 {
            let c = cover_product_p1(n).unwrap();
            assert_eq!(c.claimed_degree, 1 << n);
            assert_eq!(c.map.target().to_string(), vec!["P^1"; n].join(" x "));
        }
        assert!(cover_product_p1(0).is_err());
    }

    #[test]
    fn product_cover_two_formula() {
        let c = cover_product_p1(2).unwrap();
        assert_eq!(c.map.to_string(), "A^2 -> P^1 x P^1: [t1^2 + 1 : t1] x [t2^2 + 1 : t2]");
    }

    #[test]
    fn extension_over_line_and_point() {
        let h = p1_double_cover();
        let m = extend_over_base(&h, &Space::affine(1, "s")).unwrap();
        assert_eq!(m.to_string(), "A^1 x A^1 -> P^1 x A^1: [t^2 + 1 : t] x (s)");
        let p1 = extend_over_base(&h, &Space::projective(1, "y")).unwrap();
        assert_eq!(p1.target().to_string(), "P^1 x P^1");
        assert_eq!(extend_over_base(&h, &Space::point()).unwrap().components(), h.map.components());
    }

    #[test]
    fn sym2_values() {
        let s = sym2_cover();
        let x = SpacePoint::new(s.source(), vec![vec![q(1), q(0)], vec![q(1), q(0)]]).unwrap();
        assert_eq!(evaluate_map(&s, &x).unwrap().to_string(), "(0:0:1)");
    }

    #[test]
    fn segre_two() {
        assert_eq!(segre(2).unwrap().to_string(), "P^1 x P^1 -> P^3: [a1*a2 : a1*b2 : b1*a2 : b1*b2]");
        assert_eq!(segre(1).unwrap().components()[0].len(), 2);
        assert!(segre(5).is_err());
    }

    #[test]
    fn p2_chart() {
        let c = cover_p2();
        assert_eq!(c.claimed_degree, 8);
        assert!(c.matches_construction());
        let json = serde_json::to_string(&c).unwrap();
        let back: PseudoChart = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}
