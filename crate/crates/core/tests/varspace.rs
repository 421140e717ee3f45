use proptest::prelude::*;
use pseudochart::atlasbuild::*;
use pseudochart::exactpoly::{Field, Scalar};
use pseudochart::varspace::{compose, evaluate_map, product_map, MapError, PolyMap, SpacePoint};

fn scalar(field: &Field, (n, d): (i64, i64)) -> Scalar {
    match field {
        Field::Rational => Scalar::rational(n, d),
        f => &Scalar::from_i64(f, n) * &Scalar::from_i64(f, d).inv().unwrap_or_else(|| Scalar::one(f)),
    }
}

fn point(map: &PolyMap, field: &Field, raw: &[(i64, i64)]) -> Option<SpacePoint> {
    let mut it = raw.iter();
    let blocks = map
        .source()
        .factors()
        .iter()
        .map(|f| (0..f.width()).map(|_| scalar(field, *it.next().unwrap())).collect())
        .collect();
    SpacePoint::new(map.source(), blocks).ok()
}

fn projective_maps() -> Vec<PolyMap> {
    vec![
        sym2_cover(),
        segre(2).unwrap(),
        segre(3).unwrap(),
        random_linear_projection(2, 5).unwrap().map,
        pulled_back_forms(2, &random_linear_projection(2, 5).unwrap().coefficients()).unwrap(),
    ]
}

fn field_of(k: u8) -> Field {
    match k {
        0 => Field::Rational,
        1 => Field::Prime(101),
        _ => Field::finite(5, 2).unwrap(),
    }
}

fn entry() -> impl Strategy<Value = (i64, i64)> {
    (-40i64..40, 1i64..25)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn evaluation_invariant_under_projective_scaling(
        which in 0usize..5,
        k in 0u8..3,
        raw in prop::collection::vec(entry(), 8),
        lambdas in prop::collection::vec((1i64..30, 1i64..30, any::<bool>()), 3),
    ) {
        let f = &projective_maps()[which];
        let field = field_of(k);
        let Some(x) = point(f, &field, &raw) else { return Ok(()) };
        let scaled_blocks: Vec<Vec<Scalar>> = x
            .blocks()
            .iter()
            .zip(&lambdas)
            .map(|(b, &(n, d, neg))| {
                let l = scalar(&field, (if neg { -n } else { n }, d));
                b.iter().map(|s| s * &l).collect()
            })
            .collect();
        let Some(y) = SpacePoint::new(f.source(), scaled_blocks).ok() else { return Ok(()) };
        match (evaluate_map(f, &x), evaluate_map(f, &y)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(MapError::BasePointHit { .. }), Err(MapError::BasePointHit { .. })) => {}
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn composition_commutes_with_evaluation(
        which in 0usize..3,
        k in 0u8..3,
        raw in prop::collection::vec(entry(), 8),
    ) {
        let dc = p1_double_cover().map;
        let proj = random_linear_projection(2, 9).unwrap().map;
        let (f, g) = match which {
            0 => (product_map(&dc, &dc).unwrap(), sym2_cover()),
            1 => (segre(2).unwrap(), proj),
            _ => (sym2_cover(), PolyMap::identity(sym2_cover().target())),
        };
        let field = field_of(k);
        let h = compose(&f, &g).unwrap();
        let Some(x) = point(&f, &field, &raw) else { return Ok(()) };
        let direct = evaluate_map(&h, &x);
        let stepwise = evaluate_map(&f, &x).and_then(|y| evaluate_map(&g, &y));
        match (direct, stepwise) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(MapError::BasePointHit { .. }), Err(MapError::BasePointHit { .. })) => {}
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
        }
    }
}
