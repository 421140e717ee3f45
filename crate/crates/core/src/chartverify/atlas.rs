use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::degree::{generic_degree, DegreeReport};
use super::sampling::random_scalar;
use super::solve::{Mode, Solver};
use super::VerifyError;
use crate::atlasbuild::{BundleAtlas, BundlePoint};
use crate::exactpoly::{Field, Scalar};

const DEGREE_SAMPLES: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtlasReport {
    pub n: usize,
    pub degrees: Vec<i64>,
    pub chart_degrees: Vec<DegreeReport>,
    pub samples: usize,
    pub seed: u64,
    /// For each sampled point, the charts whose image contains it.
    pub covering_charts: Vec<Vec<usize>>,
    pub uncovered: Vec<String>,
    pub pass: bool,
}

fn random_vector(len: usize, zero_at: Option<usize>, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    let q = Field::Rational;
    loop {
        let v: Vec<Scalar> =
            (0..len).map(|i| if Some(i) == zero_at { Scalar::zero(&q) } else { random_scalar(&q, rng) }).collect();
        if v.iter().any(|s| !s.is_zero()) {
            return v;
        }
    }
}

fn unit(len: usize, i: usize) -> Vec<Scalar> {
    (0..len).map(|j| Scalar::from_i64(&Field::Rational, (i == j) as i64)).collect()
}

/// Rational points of the bundle: coordinate base points with coordinate
/// and random fibers first, then points over coordinate hyperplanes of the
/// base, then general points.
pub fn sample_bundle_points(atlas: &BundleAtlas, samples: usize, seed: u64) -> Vec<BundlePoint> {
    let (n, r) = (atlas.n, atlas.degrees.len() - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut special = Vec::new();
    for i in 0..=n {
        for k in 0..=r {
            special.push((unit(n + 1, i), unit(r + 1, k)));
        }
        special.push((unit(n + 1, i), random_vector(r + 1, None, &mut rng)));
        let f = random_vector(r + 1, Some(rng.gen_range(0..=r)), &mut rng);
        special.push((random_vector(n + 1, Some(i), &mut rng), f));
    }
    let mut out: Vec<BundlePoint> = special
        .into_iter()
        .take(samples)
        .map(|(b, f)| BundlePoint::new(n, b, f).expect("nonzero coordinates"))
        .collect();
    while out.len() < samples {
        let b = random_vector(n + 1, None, &mut rng);
        let f = random_vector(r + 1, None, &mut rng);
        out.push(BundlePoint::new(n, b, f).expect("nonzero coordinates"));
    }
    out
}

/// Measures each chart's degree and checks that every sampled bundle point
/// lies in the image of some chart.
pub fn atlas_coverage(atlas: &BundleAtlas, samples: usize, seed: u64) -> Result<AtlasReport, VerifyError> {
    let chart_degrees = atlas
        .charts
        .iter()
        .map(|c| generic_degree(c, DEGREE_SAMPLES, seed))
        .collect::<Result<Vec<_>, _>>()?;
    let solvers: Vec<Solver> = atlas.charts.iter().map(Solver::for_chart).collect();
    let points = sample_bundle_points(atlas, samples, seed);
    let covering_charts = points
        .par_iter()
        .map(|p| {
            let mut charts = Vec::new();
            for (j, solver) in solvers.iter().enumerate() {
                if let Some(t) = atlas.chart_target(j, p) {
                    if !solver.fiber(&t, Mode::Numeric)?.points.is_empty() {
                        charts.push(j);
                    }
                }
            }
            Ok(charts)
        })
        .collect::<Result<Vec<_>, VerifyError>>()?;
    let uncovered: Vec<String> = points
        .iter()
        .zip(&covering_charts)
        .filter(|(_, c)| c.is_empty())
        .map(|(p, _)| format!("base {} fiber {:?}", p.base, p.fiber.iter().map(|s| s.to_string()).collect::<Vec<_>>()))
        .collect();
    Ok(AtlasReport {
        n: atlas.n,
        degrees: atlas.degrees.clone(),
        chart_degrees,
        samples,
        seed,
        pass: uncovered.is_empty(),
        covering_charts,
        uncovered,
    })
}
