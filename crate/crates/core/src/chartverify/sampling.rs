use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::VerifyError;
use crate::exactpoly::{Field, Scalar};
use crate::varspace::{evaluate_map, MapError, PolyMap, Space, SpacePoint};

/// Redraws allowed when a random source point is a base point.
const MAX_REDRAWS: usize = 100;

/// A rational with numerator in -200..=200 and denominator in 1..=200, or a
/// uniform element of a finite field.
pub(crate) fn random_scalar(field: &Field, rng: &mut ChaCha8Rng) -> Scalar {
    match field.order() {
        Some(q) => Scalar::finite_element(field, rng.gen_range(0..q)).expect("index in range"),
        None => Scalar::rational(rng.gen_range(-200..=200), rng.gen_range(1..=200)),
    }
}

/// A random point of `space` over `field` (rational or finite).
pub fn random_point(space: &Space, field: &Field, rng: &mut ChaCha8Rng) -> SpacePoint {
    loop {
        let blocks = space
            .factors()
            .iter()
            .map(|f| (0..f.width()).map(|_| random_scalar(field, rng)).collect())
            .collect();
        if let Ok(p) = SpacePoint::new(space, blocks) {
            return p;
        }
    }
}

pub(crate) fn random_image(map: &PolyMap, field: &Field, rng: &mut ChaCha8Rng) -> Result<SpacePoint, VerifyError> {
    let mut last = None;
    for _ in 0..MAX_REDRAWS {
        let x = random_point(map.source(), field, rng);
        match evaluate_map(map, &x) {
            Ok(y) => return Ok(y),
            Err(e @ MapError::BasePointHit { .. }) => last = Some(e),
            Err(e) => return Err(e.into()),
        }
    }
    Err(last.expect("at least one draw").into())
}

/// `samples` targets: the first half images of random source points, the
/// rest independent random points of the target.
pub fn sample_targets(map: &PolyMap, samples: usize, seed: u64, field: &Field) -> Result<Vec<SpacePoint>, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let images = samples.div_ceil(2);
    let mut out = Vec::with_capacity(samples);
    for _ in 0..images {
        out.push(random_image(map, field, &mut rng)?);
    }
    for _ in images..samples {
        out.push(random_point(map.target(), field, &mut rng));
    }
    Ok(out)
}
