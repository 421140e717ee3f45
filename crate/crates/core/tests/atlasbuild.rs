use num_complex::Complex64;
use proptest::prelude::*;
use pseudochart::atlasbuild::*;
use pseudochart::chartverify::{
    certify_chart, construction_fiber, generic_degree, measure_construction, Backend,
};
use pseudochart::exactpoly::{Field, MultiPoly, Scalar};
use pseudochart::varspace::{evaluate_map, Space, SpacePoint};

fn q(n: i64) -> Scalar {
    Scalar::from_i64(&Field::Rational, n)
}

fn pt(space: &Space, blocks: Vec<Vec<i64>>) -> SpacePoint {
    SpacePoint::new(space, blocks.into_iter().map(|b| b.into_iter().map(q).collect()).collect()).unwrap()
}

#[test]
fn extension_over_affine_and_projective_bases() {
    let c = p1_double_cover();
    let a = extend_over_base(&c, &Space::affine(1, "y")).unwrap();
    assert_eq!(a.target().to_string(), "P^1 x A^1");
    let chart = PseudoChart::explicit(a, 2).unwrap();
    assert_eq!(generic_degree(&chart, 10, 3).unwrap().inferred_degree, 2);

    let p = extend_over_base(&c, &Space::projective(1, "y")).unwrap();
    assert_eq!(p.to_string(), "A^1 x P^1 -> P^1 x P^1: [t^2 + 1 : t] x [y0 : y1]");
    let stage = Construction::Extend {
        cover: Box::new(Construction::DoubleCover),
        before: Space::point(),
        after: Space::projective(1, "y"),
    };
    assert_eq!(measure_construction(&stage, 10, 3).unwrap().inferred_degree, 2);

    assert_eq!(extend_over_base(&c, &Space::point()).unwrap().components(), c.map.components());
}

#[test]
fn product_cover_small_cases() {
    assert!(cover_product_p1(0).is_err());
    let one = cover_product_p1(1).unwrap();
    assert_eq!(one.map.components(), p1_double_cover().map.components());
    assert_eq!(one.claimed_degree, 2);
    let two = cover_product_p1(2).unwrap();
    assert_eq!(two.claimed_degree, 4);
    assert_eq!(generic_degree(&two, 12, 1).unwrap().inferred_degree, 4);
}

/// Distinct closure roots of b t^2 - a t + b, computed directly.
fn double_cover_count(a: &Scalar, b: &Scalar) -> usize {
    if b.is_zero() {
        return 1;
    }
    let disc = &(a * a) - &(&(b * b) * &q(4));
    if disc.is_zero() {
        1
    } else {
        2
    }
}

#[test]
fn product_cover_n3_degree_eight() {
    let c = cover_product_p1(3).unwrap();
    assert_eq!(c.claimed_degree, 8);
    let r = generic_degree(&c, 12, 5).unwrap();
    assert_eq!(r.inferred_degree, 8);
    // oracle: the fiber factors into three double-cover fibers
    for (y, card) in r.targets.iter().zip(&r.cardinalities) {
        let expected: usize = y.blocks().iter().map(|b| double_cover_count(&b[0], &b[1])).product();
        assert_eq!(Some(expected), *card);
    }
}

#[test]
fn sym2_examples() {
    let s = sym2_cover();
    let src = Space::p1_power(2);
    assert_eq!(evaluate_map(&s, &pt(&src, vec![vec![1, 0], vec![1, 0]])).unwrap().to_string(), "(0:0:1)");
    let p2 = Space::projective(2, "x");
    let r = construction_fiber(&Construction::Sym2, &pt(&p2, vec![vec![1, 0, 0]]), &Backend::StructuredNumeric)
        .unwrap();
    assert_eq!(r.closure_cardinality, Some(1));
    assert_eq!(r.weighted_cardinality, Some(2));
    assert!(r.solutions[0].approx_eq(&pt(&src, vec![vec![0, 1], vec![0, 1]]).coerce_into(&Field::Complex).unwrap(), 1e-9));

    let y = pt(&p2, vec![vec![1, 0, -1]]);
    let r = construction_fiber(&Construction::Sym2, &y, &Backend::StructuredNumeric).unwrap();
    assert_eq!(r.closure_cardinality, Some(2));
    // oracle: t^2 - 1 = (t - 1)(t + 1); the factors are the points [1:1] and [1:-1]
    let a = pt(&src, vec![vec![1, -1], vec![1, 1]]).coerce_into(&Field::Complex).unwrap();
    let b = pt(&src, vec![vec![1, 1], vec![1, -1]]).coerce_into(&Field::Complex).unwrap();
    assert!(r.solutions.iter().any(|s| s.approx_eq(&a, 1e-9)));
    assert!(r.solutions.iter().any(|s| s.approx_eq(&b, 1e-9)));
    for s in &r.solutions {
        let img = evaluate_map(&sym2_cover(), s).unwrap();
        assert!(img.approx_eq(&y.coerce_into(&Field::Complex).unwrap(), 1e-9));
    }
}

#[test]
fn cover_p2_degree_and_origin_fiber() {
    let c = cover_p2();
    assert_eq!(c.claimed_degree, 8);
    let r = generic_degree(&c, 25, 11).unwrap();
    assert_eq!(r.inferred_degree, 8);
    // oracle: the same fibers by elimination on the composite polynomials
    let direct = PseudoChart::explicit(c.map.clone(), 8).unwrap();
    let e = generic_degree(&direct, 10, 11).unwrap();
    assert_eq!(e.cardinalities, r.cardinalities[..10].to_vec());

    let origin = pt(c.map.source(), vec![vec![0, 0]]);
    let y = evaluate_map(&c.map, &origin).unwrap();
    let f = pseudochart::chartverify::fiber(&c, &y, &Backend::StructuredNumeric).unwrap();
    let o = origin.coerce_into(&Field::Complex).unwrap();
    assert!(f.solutions.iter().any(|s| s.approx_eq(&o, 1e-9)));
}

#[test]
fn segre_examples() {
    assert!(segre(0).is_err() && segre(5).is_err());
    let s1 = segre(1).unwrap();
    assert_eq!(s1.to_string(), "P^1 -> P^1: [a1 : b1]");
    assert_eq!(segre(2).unwrap().to_string(), "P^1 x P^1 -> P^3: [a1*a2 : a1*b2 : b1*a2 : b1*b2]");
    for (n, deg) in [(2usize, 2usize), (3, 6)] {
        let proj = random_linear_projection(n, 17).unwrap();
        let c = Construction::Compose { stages: vec![Construction::Segre { n }, proj.construction] };
        assert_eq!(measure_construction(&c, 10, 2).unwrap().inferred_degree, deg, "n = {n}");
    }
}

#[test]
fn bad_projection_draw_rejected() {
    // no weight on the first Segre coordinate: segre([1:0],[1:0]) lies in the center
    let coeffs = vec![vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]];
    assert!(matches!(projection_from_coefficients(2, coeffs), Err(AtlasError::CenterMeetsVariety { .. })));
    assert!(random_linear_projection(4, 0).is_err());
}

#[test]
fn cover_pn_two_routes_agree_on_p2() {
    let a = generic_degree(&cover_pn(2, 9).unwrap(), 12, 4).unwrap().inferred_degree;
    let b = generic_degree(&cover_p2(), 12, 4).unwrap().inferred_degree;
    assert_eq!((a, b), (8, 8));
    assert_eq!(cover_pn(2, 9).unwrap().claimed_degree, 8);
}

/// Multihomogeneous Bezout bound for n multilinear forms on (P¹)^n: the
/// permanent of the all-ones n x n matrix.
fn multilinear_bezout(n: usize) -> usize {
    (1..=n).product()
}

#[test]
fn cover_p3_degree_48() {
    let c = cover_pn(3, 2).unwrap();
    assert_eq!(c.claimed_degree, 48);
    let r = generic_degree(&c, 10, 8).unwrap();
    assert_eq!(r.inferred_degree, 48);
    assert!(r.is_generic());
    // oracle: 48 verified distinct solutions meet the upper bound 3! * 2^3
    let y = &r.targets[0];
    let f = pseudochart::chartverify::fiber(&c, y, &Backend::StructuredNumeric).unwrap();
    assert_eq!(f.solutions.len(), multilinear_bezout(3) * 8);
    let yc = y.coerce_into(&Field::Complex).unwrap();
    for (i, s) in f.solutions.iter().enumerate() {
        assert!(evaluate_map(&c.map, s).unwrap().approx_eq(&yc, 1e-6));
        for t in &f.solutions[..i] {
            let d: f64 = s.coords().iter().zip(t.coords()).map(|(a, b)| (a.to_complex().unwrap() - b.to_complex().unwrap()).norm()).sum();
            assert!(d > 1e-6);
        }
    }
}

#[test]
fn every_chart_passes_base_point_certificate() {
    let charts = vec![
        p1_double_cover(),
        cover_product_p1(2).unwrap(),
        cover_product_p1(3).unwrap(),
        cover_p2(),
        cover_pn(2, 0).unwrap(),
        cover_pn(3, 0).unwrap(),
    ];
    for c in charts.iter().chain(&bundle_atlas(1, &[0, 2], 0).unwrap().charts) {
        assert!(certify_chart(c).unwrap().is_certified(), "{}", c.map);
    }
}

fn leaf_degrees(c: &Construction) -> u64 {
    match c {
        Construction::Compose { stages } => stages.iter().map(leaf_degrees).product(),
        Construction::Product { factors } => factors.iter().map(leaf_degrees).product(),
        Construction::Extend { cover, .. } => leaf_degrees(cover),
        Construction::DoubleCover | Construction::Sym2 => 2,
        Construction::LinearProjection { n, .. } => (1..=*n as u64).product(),
        _ => 1,
    }
}

#[test]
fn claimed_degree_is_product_of_leaves() {
    for c in [cover_product_p1(3).unwrap(), cover_p2(), cover_pn(3, 4).unwrap()] {
        assert_eq!(c.claimed_degree, leaf_degrees(&c.construction));
    }
}

#[test]
fn chart_json_round_trip() {
    let c = cover_pn(2, 5).unwrap();
    let s = serde_json::to_string(&c).unwrap();
    let back: PseudoChart = serde_json::from_str(&s).unwrap();
    assert_eq!(back, c);
    assert!(back.matches_construction());
    assert!(s.contains("\"seed\":5"));
}

fn scalar_in(field: &Field, v: i64) -> Scalar {
    Scalar::from_i64(field, v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn double_cover_fiber_polynomial_never_nonzero_constant(
        p in prop::sample::select(vec![3u64, 5, 7, 11, 101]), a in -500i64..500, b in -500i64..500,
    ) {
        let field = Field::Prime(p);
        let (a, b) = (scalar_in(&field, a), scalar_in(&field, b));
        prop_assume!(!(a.is_zero() && b.is_zero()));
        let m = p1_double_cover().map.to_field(&field).unwrap();
        let (f0, f1) = (&m.components()[0][0], &m.components()[0][1]);
        let fiber_poly: MultiPoly = &f0.scale(&b) - &f1.scale(&a);
        prop_assert!(!(fiber_poly.is_constant() && !fiber_poly.is_zero()));
    }

    #[test]
    fn sym2_is_symmetric(x in prop::array::uniform4(-50i64..50)) {
        prop_assume!((x[0], x[1]) != (0, 0) && (x[2], x[3]) != (0, 0));
        let src = Space::p1_power(2);
        let s = sym2_cover();
        let a = evaluate_map(&s, &pt(&src, vec![vec![x[0], x[1]], vec![x[2], x[3]]])).unwrap();
        let b = evaluate_map(&s, &pt(&src, vec![vec![x[2], x[3]], vec![x[0], x[1]]])).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn segre_is_injective_on_random_pairs() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    for n in 1..=4 {
        let s = segre(n).unwrap();
        let src = Space::p1_power(n);
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| loop {
            let blocks: Vec<Vec<i64>> = (0..n).map(|_| vec![rng.gen_range(-3..=3), rng.gen_range(-3..=3)]).collect();
            if blocks.iter().all(|b| b != &vec![0, 0]) {
                return pt(&src, blocks);
            }
        };
        for _ in 0..100 {
            let (x, y) = (draw(&mut rng), draw(&mut rng));
            let same_image = evaluate_map(&s, &x).unwrap() == evaluate_map(&s, &y).unwrap();
            assert_eq!(same_image, x == y, "n = {n}: {x} vs {y}");
        }
    }
}

#[test]
fn numeric_fiber_of_double_cover_over_zero_one() {
    let c = p1_double_cover();
    let y = pt(c.map.target(), vec![vec![0, 1]]);
    let f = pseudochart::chartverify::fiber(&c, &y, &Backend::StructuredNumeric).unwrap();
    let mut roots: Vec<Complex64> = f.solutions.iter().map(|s| s.coords()[0].to_complex().unwrap()).collect();
    roots.sort_by(|a, b| a.im.total_cmp(&b.im));
    assert_eq!(roots.len(), 2);
    // oracle: t^2 + 1 vanishes at both
    for r in &roots {
        assert!((r * r + 1.0).norm() < 1e-12);
    }
    assert!((roots[0] + roots[1]).norm() < 1e-12);
}
