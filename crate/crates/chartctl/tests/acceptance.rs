//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use chartctl::*;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use pseudochart::atlasbuild::*;
use pseudochart::chartverify::*;
use pseudochart::exactpoly::{Field, MultiPoly, Scalar};
use pseudochart::obstruct::*;
use pseudochart::varspace::{compose, evaluate_map, product_map, MapError, PolyMap, Space, SpacePoint};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(start.elapsed() < limit, format!("took {:.1?}, limit {limit:?}", start.elapsed()))
}

fn cfg(sub: &str, seed: u64, samples: usize) -> RunConfig {
    let mut c = RunConfig::new(sub, seed);
    c.samples = Some(samples);
    c
}

fn construct_kind(kind: &str, n: Option<usize>, degrees: Option<Vec<i64>>, seed: u64) -> Result<Document, String> {
    let mut c = RunConfig::new("construct", seed);
    c.construction = Some(kind.into());
    c.n = n;
    c.degrees = degrees;
    construct(&c).map_err(e)
}

fn c1_p2_degree() -> Check {
    let t = Instant::now();
    let doc = construct_kind("p2", None, None, 0)?;
    let r = verify(&doc, &cfg("verify", 1, 25)).map_err(e)?;
    let d = r.suite("degree").ok_or("no degree suite")?;
    let measured = d.detail["inferred_degree"].as_u64().ok_or("no degree")?;
    let samples = d.detail["cardinalities"].as_array().map_or(0, |a| a.len());
    ensure(measured == 8, format!("measured {measured}"))?;
    ensure(samples >= 25, format!("{samples} targets"))?;
    ensure(r.exit() == Exit::Ok, format!("exit {:?}", r.exit()))?;
    within(t, Duration::from_secs(30))?;
    Ok(format!("measured degree 8 at {samples} targets, all suites pass"))
}

/// Frobenius-fixed points are the F_p-rational ones.
fn is_fp_rational(x: &SpacePoint, p: u64) -> bool {
    x.coords().iter().all(|c| c.pow(p as u32) == *c)
}

fn c2_p1xp1_degree() -> Check {
    let t = Instant::now();
    let c = cover_product_p1(2).map_err(e)?;
    let r = generic_degree(&c, 25, 2).map_err(e)?;
    ensure(r.inferred_degree == 4, format!("measured {}", r.inferred_degree))?;
    let targets = all_points(c.map.target(), &Field::Prime(11)).map_err(e)?;
    let f11 = BruteTable::build(&c.map, 11, 1).map_err(e)?;
    let f121 = BruteTable::build(&c.map, 11, 2).map_err(e)?;
    for y in &targets {
        let exact = fiber(&c, y, &Backend::StructuredExact).map_err(e)?;
        let closure = exact.closure_cardinality.ok_or("positive-dimensional fiber")?;
        let rational = exact.solutions.iter().filter(|x| is_fp_rational(x, 11)).count();
        let b11 = f11.fiber(y).map_err(e)?.len();
        let b121 = f121.fiber(y).map_err(e)?.len();
        ensure(b11 == rational, format!("F_11 disagreement over {y}: brute {b11}, structured {rational}"))?;
        ensure(b121 == closure, format!("F_121 disagreement over {y}: brute {b121}, structured {closure}"))?;
    }
    within(t, Duration::from_secs(60))?;
    Ok(format!("measured 4; brute F_11 and F_121 agree with structured exact on all {} targets", targets.len()))
}

fn c3_segre_degree() -> Check {
    let t = Instant::now();
    for (n, want) in [(2usize, 2usize), (3, 6)] {
        for seed in 0..10 {
            let proj = random_linear_projection(n, seed).map_err(e)?;
            ensure(!proj.certificate.charts.is_empty(), "uncertified projection")?;
            let g = Construction::Compose { stages: vec![Construction::Segre { n }, proj.construction] };
            let d = measure_construction(&g, 10, seed).map_err(e)?.inferred_degree;
            ensure(d == want, format!("n = {n}, seed {seed}: fiber count {d}"))?;
        }
    }
    within(t, Duration::from_secs(120))?;
    Ok("projection fiber counts 2 (n=2) and 6 (n=3) for 10 certified projections each".into())
}

fn c4_pn_degree() -> Check {
    let t = Instant::now();
    let m2 = generic_degree(&cover_pn(2, 7).map_err(e)?, 25, 3).map_err(e)?.inferred_degree;
    let m3 = generic_degree(&cover_pn(3, 7).map_err(e)?, 25, 3).map_err(e)?.inferred_degree;
    ensure((m2, m3) == (8, 48), format!("measured ({m2}, {m3})"))?;
    let report = erratum(&cfg("erratum", 7, 25)).map_err(e)?;
    let row = |n| report.rows.iter().find(|r| r.family == "P^n" && r.n == n).ok_or("missing row");
    let (r2, r3) = (row(2)?, row(3)?);
    ensure((r2.stated_value, r3.stated_value) == (4, 24), "stated values")?;
    ensure((r2.measured, r3.measured) == (8, 48), "report measured values")?;
    let direct = generic_degree(&cover_p2(), 25, 3).map_err(e)?.inferred_degree;
    ensure(direct == m2, format!("direct P^2 chart measures {direct}"))?;
    ensure(r2.cross_checks.iter().any(|s| s.contains("measures 8")), "cross-check missing")?;
    within(t, Duration::from_secs(300))?;
    Ok(format!("measured 8 and 48 against stated 4 and 24; direct P^2 chart cross-check {direct}"))
}

fn c5_surjectivity() -> Check {
    let t = Instant::now();
    let p1 = p1_double_cover();
    let mut strata = all_points(p1.map.target(), &Field::Prime(101)).map_err(e)?;
    strata.push(SpacePoint::new(p1.map.target(), vec![vec![Scalar::rational(1, 1), Scalar::rational(0, 1)]]).map_err(e)?);
    let cert = surjectivity_scan(&p1, &strata).map_err(e)?;
    ensure(cert.verdict == SurjectivityVerdict::SurjectiveOnTested, format!("{:?}", cert.verdict))?;
    ensure(cert.targets.iter().all(|t| matches!(t.evidence, Evidence::Symbolic { .. })), "non-symbolic evidence")?;

    let p2 = cover_p2();
    let targets = default_strata(p2.map.target(), 30, 5);
    let zeros = |y: &SpacePoint| y.coords().iter().filter(|c| c.is_zero()).count();
    let coordinate = targets.iter().filter(|y| zeros(y) == 2).count();
    let hyperplane = targets.iter().filter(|y| zeros(y) == 1).count();
    let general = targets.iter().filter(|y| zeros(y) == 0).count();
    ensure((coordinate, hyperplane, general) == (3, 30, 30), format!("strata {coordinate}/{hyperplane}/{general}"))?;
    let cert = surjectivity_scan(&p2, &targets).map_err(e)?;
    ensure(cert.verdict == SurjectivityVerdict::SurjectiveOnTested, format!("{:?}", cert.verdict))?;

    let mut refuted = 0;
    for (src, nvars, target) in [(&["t", "1"][..], 1, Space::projective(1, "x")), (&["t1", "t2", "1"][..], 2, Space::projective(2, "x"))] {
        let source = Space::affine(nvars, "t");
        let comps = src.iter().map(|s| MultiPoly::parse(s, source.all_vars())).collect::<Result<_, _>>().map_err(e)?;
        let map = PolyMap::new(source, target.clone(), vec![comps], "control").map_err(e)?;
        let control = PseudoChart::explicit(map, 1).map_err(e)?;
        let cert = surjectivity_scan(&control, &default_strata(&target, 5, 1)).map_err(e)?;
        match cert.verdict {
            SurjectivityVerdict::NotSurjective { witness, .. } => {
                ensure(witness.coords().last().is_some_and(|c| c.is_zero()), format!("witness {witness}"))?;
                refuted += 1;
            }
            other => return Err(format!("control not refuted: {other:?}")),
        }
    }
    within(t, Duration::from_secs(120))?;
    Ok(format!("P^1 cover surjective at 103 targets; P^2 chart at 3+30+30 targets; {refuted} controls refuted with witnesses"))
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chartctl"))
}

fn c6_base_points() -> Check {
    match check_no_base_points(&p1_double_cover().map).map_err(e)? {
        BasePointOutcome::Certified { entries, .. } if entries.iter().any(|s| s.contains("Res_t(t^2 + 1, t) = 1")) => {}
        other => return Err(format!("p1 certificate: {other:?}")),
    }
    let mut charts = vec![p1_double_cover(), cover_p2(), cover_pn(2, 0).map_err(e)?, cover_pn(3, 0).map_err(e)?];
    for n in 1..=3 {
        charts.push(cover_product_p1(n).map_err(e)?);
    }
    for (n, d) in [(1usize, vec![0i64, 2]), (2, vec![0, 0, 1])] {
        charts.extend(bundle_atlas(n, &d, 0).map_err(e)?.charts);
    }
    for c in &charts {
        ensure(certify_chart(c).map_err(e)?.is_certified(), format!("uncertified: {}", c.map))?;
    }
    let dir = std::env::temp_dir().join(format!("chartctl-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(e)?;
    let Document::Chart { config, chart, base_points } = construct_kind("p2", None, None, 0)? else { unreachable!() };
    let zero = MultiPoly::zero(chart.map.source_vars(), Field::Rational);
    let bad = Document::Chart { config, chart: chart.corrupted(0, 0, zero).map_err(e)?, base_points };
    let path = dir.join("corrupted.json");
    std::fs::write(&path, serde_json::to_string(&bad).map_err(e)?).map_err(e)?;
    let out = bin().args(["verify", path.to_str().unwrap(), "--json"]).output().map_err(e)?;
    let code = out.status.code();
    let report: VerifyReport = serde_json::from_slice(&out.stdout).map_err(e)?;
    let witness = report.suite("base_points").and_then(|s| s.witness.clone()).unwrap_or_default();
    ensure(code == Some(2), format!("corrupted chart exit {code:?}"))?;
    ensure(witness.contains("BasePointHit"), format!("witness {witness:?}"))?;
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("Res_t(t^2 + 1, t) = 1; {} charts certified; corrupted chart exits 2 with {witness}", charts.len()))
}

const CORPUS: &[(&str, bool)] = &[
    ("x", true),
    ("x + y + z", true),
    ("2*x - 3*y + 5*z", true),
    ("x*z - y^2", true),
    ("x^2 + y^2 + z^2", true),
    ("x^2 + y^2 - z^2", true),
    ("x*y - z^2", true),
    ("3*x^2 - 7*y*z + x*y", true),
    ("x^3 + y^3 + z^3", true),
    ("x^3 + 2*y^3 + 3*z^3", true),
    ("y^2*z - x^3 - x*z^2", true),
    ("y^2*z - x^3 + 2*z^3", true),
    ("x^3 + y^3 + z^3 + x*y*z", true),
    ("x^4 + y^4 + z^4", true),
    ("x^3*y + y^3*z + z^3*x", true),
    ("x^4 + 2*y^4 + 3*z^4", true),
    ("x^4 + y^4 - z^4", true),
    ("y^2*z - x^3", false),
    ("y^2*z - x^3 - x^2*z", false),
    ("x*y", false),
    ("x*y*z", false),
    ("x^3 + y^3 + z^3 - 3*x*y*z", false),
    ("x^2", false),
    ("x^2 + 2*x*y + y^2", false),
    ("y*z^2 - x^3", false),
    ("x*z^2 - y^3", false),
    ("y^2*z^2 - x^4", false),
    ("x^2*y^2 + y^2*z^2 + z^2*x^2", false),
    ("y^4 - x^3*z", false),
    ("(x^2 + y^2 - z^2)*(x^2 + 2*y^2 - 3*z^2)", false),
    ("(x + y)^2*z^2 + x^4 + y^4", false),
];

fn c7_obstruction_corpus() -> Check {
    let t = Instant::now();
    let mut obstructed = 0;
    for &(src, smooth) in CORPUS {
        let c = PlaneCurve::parse(src).map_err(e)?;
        let v = corollary_verdict(&c).map_err(e)?;
        let want = smooth && c.degree() >= 3;
        ensure(v.is_obstructed() == want, format!("{src}: {:?}", v.outcome))?;
        if want {
            ensure(v.reason == Some(Reason::PositiveGenusAmpleCurve), format!("{src}: reason"))?;
            obstructed += 1;
        }
    }
    let verdict = |s| corollary_verdict(&PlaneCurve::parse(s).unwrap()).unwrap();
    ensure(verdict("x^3+y^3+z^3").is_obstructed(), "Fermat cubic")?;
    for singular in ["y^2*z - x^3 - x^2*z", "y^2*z - x^3"] {
        let v = verdict(singular);
        ensure(!v.is_obstructed() && v.notes.iter().any(|n| n == NOTE_SINGULAR), format!("{singular}"))?;
    }
    within(t, Duration::from_secs(60))?;
    Ok(format!("{} curves: {obstructed} obstructed, exactly the smooth ones of degree >= 3", CORPUS.len()))
}

fn c8_theorem_checks() -> Check {
    let models = catalog();
    let get = |name: &str| models.iter().find(|m| m.name == name).ok_or(format!("no model {name}"));
    let v = theorem_verdict(get("P1xP1 minus one ruling")?).map_err(e)?;
    ensure(v.reason == Some(Reason::TooFewComponents), format!("one ruling: {v:?}"))?;
    let v = theorem_verdict(get("P1xP1 minus two rulings")?).map_err(e)?;
    ensure(v.outcome == Outcome::Inconclusive, "two rulings")?;
    let v = theorem_verdict(get("P1xP1 minus two parallel fibers")?).map_err(e)?;
    ensure(v.reason == Some(Reason::ClassesDoNotGenerate), "rank-deficient classes")?;
    let mut matrices = 0;
    for m in &models {
        let rows: Vec<Vec<i64>> = m.boundary.iter().filter_map(|d| d.class.clone()).collect();
        let r = rank_over_q(&rows);
        for p in [10007, 65521, 1_000_003] {
            ensure(rank_mod_p(&rows, p) == r, format!("{}: rank mod {p}", m.name))?;
        }
        matrices += 1;
    }
    Ok(format!("one ruling TOO_FEW_COMPONENTS, two rulings INCONCLUSIVE, parallel fibers CLASSES_DO_NOT_GENERATE; Q-rank = F_p-rank on {matrices} matrices"))
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(Config { cases, failure_persistence: None, ..Config::default() }, TestRng::from_seed(RngAlgorithm::ChaCha, &[7; 32]))
}

fn rational() -> impl Strategy<Value = (i64, i64)> {
    (-30i64..30, 1i64..12)
}

fn c9_properties() -> Check {
    let maps = [sym2_cover(), segre(2).unwrap(), segre(3).unwrap(), random_linear_projection(3, 4).unwrap().map];
    runner(200)
        .run(&(0usize..4, prop::collection::vec(rational(), 8), prop::collection::vec((1i64..20, 1i64..20), 3)), |(w, raw, ls)| {
            let f = &maps[w];
            let mut it = raw.iter();
            let blocks: Vec<Vec<Scalar>> = f
                .source()
                .factors()
                .iter()
                .map(|fa| (0..fa.width()).map(|_| { let (n, d) = it.next().unwrap(); Scalar::rational(*n, *d) }).collect())
                .collect();
            let Ok(x) = SpacePoint::new(f.source(), blocks.clone()) else { return Ok(()) };
            let scaled: Vec<Vec<Scalar>> = blocks
                .iter()
                .zip(&ls)
                .map(|(b, (n, d))| b.iter().map(|s| s * &Scalar::rational(-*n, *d)).collect())
                .collect();
            let y = SpacePoint::new(f.source(), scaled).unwrap();
            match (evaluate_map(f, &x), evaluate_map(f, &y)) {
                (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
                (Err(MapError::BasePointHit { .. }), Err(MapError::BasePointHit { .. })) => {}
                (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
            }
            Ok(())
        })
        .map_err(|f| format!("scaling invariance: {f}"))?;

    let dc = p1_double_cover().map;
    let pairs = [
        (product_map(&dc, &dc).unwrap(), sym2_cover()),
        (segre(2).unwrap(), random_linear_projection(2, 9).unwrap().map),
        (segre(3).unwrap(), random_linear_projection(3, 9).unwrap().map),
    ];
    runner(200)
        .run(&(0usize..3, prop::collection::vec(rational(), 6)), |(w, raw)| {
            let (f, g) = &pairs[w];
            let h = compose(f, g).unwrap();
            let mut it = raw.iter();
            let blocks = f
                .source()
                .factors()
                .iter()
                .map(|fa| (0..fa.width()).map(|_| { let (n, d) = it.next().unwrap(); Scalar::rational(*n, *d) }).collect())
                .collect();
            let Ok(x) = SpacePoint::new(f.source(), blocks) else { return Ok(()) };
            match (evaluate_map(&h, &x), evaluate_map(f, &x).and_then(|y| evaluate_map(g, &y))) {
                (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
                (Err(MapError::BasePointHit { .. }), Err(MapError::BasePointHit { .. })) => {}
                (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
            }
            Ok(())
        })
        .map_err(|f| format!("composition: {f}"))?;

    let charts = [
        p1_double_cover(),
        cover_product_p1(2).unwrap(),
        cover_product_p1(3).unwrap(),
        cover_p2(),
        cover_pn(2, 3).unwrap(),
        cover_pn(3, 3).unwrap(),
    ];
    for c in &charts {
        let n = c.dim();
        runner(100)
            .run(&prop::collection::vec((-9i64..10, 1i64..6), n), |raw| {
                let coords = raw.iter().map(|&(a, b)| Scalar::rational(a, b)).collect();
                let x = SpacePoint::new(c.map.source(), vec![coords]).unwrap();
                let y = evaluate_map(&c.map, &x).unwrap();
                let r = fiber(c, &y, &Backend::StructuredNumeric).unwrap();
                let xc = x.coerce_into(&Field::Complex).unwrap();
                prop_assert!(r.solutions.iter().any(|s| s.approx_eq(&xc, 1e-6)), "{} missing from fiber over {}", x, y);
                Ok(())
            })
            .map_err(|f| format!("fiber round trip for {}: {f}", c.map.target()))?;
    }

    let docs = [construct_kind("p2", None, None, 0)?, construct_kind("pn", Some(2), None, 5)?, construct_kind("bundle", Some(1), Some(vec![0, 2]), 1)?];
    for doc in &docs {
        let run = |threads| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| serde_json::to_string(&verify(doc, &cfg("verify", 11, 25)).unwrap()).unwrap())
        };
        ensure(run(1) == run(4), "reports differ between 1 and 4 threads")?;
    }
    Ok("scaling 200, composition 200, fiber round trips 100 x 6 constructions, 1- vs 4-thread reports identical".into())
}

fn c10_bundle_atlas() -> Check {
    let doc = construct_kind("bundle", Some(1), Some(vec![0, 2]), 0)?;
    let Document::Atlas { atlas, .. } = &doc else { return Err("expected an atlas".into()) };
    ensure(atlas.charts.len() == 2, format!("{} charts", atlas.charts.len()))?;
    let r = atlas_coverage(atlas, 200, 3).map_err(e)?;
    let degrees: Vec<usize> = r.chart_degrees.iter().map(|d| d.inferred_degree).collect();
    ensure(degrees == [2, 2], format!("chart degrees {degrees:?}"))?;
    ensure(r.covering_charts.len() == 200 && r.covering_charts.iter().all(|c| !c.is_empty()), "uncovered points")?;
    ensure(r.pass, format!("{:?}", r.uncovered))?;
    let v = verify(&doc, &cfg("verify", 3, 200)).map_err(e)?;
    ensure(v.exit() == Exit::Ok, "atlas verification")?;
    Ok("2 charts of degree 2; 200 bundle points each covered".into())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("P^2 chart degree", c1_p2_degree),
        ("(P^1)^2 chart degree and backend agreement", c2_p1xp1_degree),
        ("Segre projection degree", c3_segre_degree),
        ("P^n chart degrees and erratum", c4_pn_degree),
        ("surjectivity certificates", c5_surjectivity),
        ("base-point certificates", c6_base_points),
        ("obstruction corpus", c7_obstruction_corpus),
        ("boundary obstruction checks", c8_theorem_checks),
        ("property suites", c9_properties),
        ("bundle atlas", c10_bundle_atlas),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or("panic".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} ({secs:.1} s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg} ({secs:.1} s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
