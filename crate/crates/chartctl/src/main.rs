use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use chartctl::*;
use clap::{ArgGroup, Parser, Subcommand};
use pseudochart::obstruct::{catalog, PlaneCurve, SurfaceModel};
use serde::Serialize;

/// Build, verify and obstruct surjective finite-fiber charts.
///
/// Exit codes: 0 success, 2 a verification suite failed, 3 malformed input,
/// 4 projection center meets the Segre variety, 5 inconclusive (budget).
#[derive(Parser)]
#[command(name = "chartctl", version)]
struct Cli {
    /// Print the JSON document on stdout instead of a summary.
    #[arg(long, global = true)]
    json: bool,
    /// Write the JSON document to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a chart (p1, p1n, p2, pn) or a bundle atlas (bundle).
    Construct {
        #[arg(value_parser = ["p1", "p1n", "p2", "pn", "bundle"])]
        kind: String,
        #[arg(long)]
        n: Option<usize>,
        /// Line bundle degrees a_0,...,a_r of the split bundle.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        degrees: Option<Vec<i64>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the base-point, surjectivity, finite-fiber and degree suites.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// structured (numeric over Q), exact (over F_p^k) or brute (enumerate F_p^k).
        #[arg(long, default_value = "structured")]
        backend: String,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Decide the boundary obstructions for P^2 minus a curve or a surface model.
    #[command(group(ArgGroup::new("input").required(true).args(["curve", "curve_file", "surface", "catalog"])))]
    Obstruct {
        /// A form in x, y, z such as "x^3+y^3+z^3".
        #[arg(long)]
        curve: Option<String>,
        #[arg(long)]
        curve_file: Option<PathBuf>,
        #[arg(long)]
        surface: Option<PathBuf>,
        /// Every preset surface model.
        #[arg(long)]
        catalog: bool,
    },
    /// Measured chart degrees next to the stated formulas.
    Erratum {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::malformed(format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(cli: &Cli, doc: &T, summary: &str) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(doc).expect("serializable document");
    if let Some(path) = &cli.out {
        std::fs::write(path, format!("{text}\n")).map_err(|e| CliError::malformed(format!("{}: {e}", path.display())))?;
    }
    // a closed pipe downstream is not an error of ours
    let _ = writeln!(std::io::stdout().lock(), "{}", if cli.json { &text } else { summary });
    Ok(())
}

fn threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("PSEUDOCHART_THREADS") else { return Ok(()) };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::malformed(format!("PSEUDOCHART_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::malformed(e.to_string()))
}

fn run(cli: &Cli) -> Result<Exit, CliError> {
    threads()?;
    match &cli.command {
        Command::Construct { kind, n, degrees, seed } => {
            let mut cfg = RunConfig::new("construct", *seed);
            cfg.construction = Some(kind.clone());
            cfg.n = *n;
            cfg.degrees = degrees.clone();
            let doc = construct(&cfg)?;
            let summary = match &doc {
                Document::Chart { chart, .. } => {
                    format!("{}\nclaimed degree {}, seed {}", chart.map, chart.claimed_degree, seed)
                }
                Document::Atlas { atlas, .. } => format!(
                    "atlas of {} charts over P^{} for degrees {:?}, seed {}",
                    atlas.charts.len(),
                    atlas.n,
                    atlas.degrees,
                    seed
                ),
            };
            emit(cli, &doc, &summary)?;
            Ok(Exit::Ok)
        }
        Command::Verify { file, samples, seed, backend, p, k } => {
            let doc = Document::parse(&read(file)?)?;
            let mut cfg = RunConfig::new("verify", *seed);
            cfg.samples = Some(*samples);
            cfg.backend = Some(BackendChoice::parse(backend)?);
            cfg.p = *p;
            cfg.k = *k;
            let report = verify(&doc, &cfg)?;
            let mut summary = vec![report.subject.clone()];
            for s in &report.suites {
                let w = s.witness.as_ref().map(|w| format!(" ({w})")).unwrap_or_default();
                summary.push(format!("{:<20} {:?}{w}", s.name, s.status));
            }
            if let Some(d) = report.suite("degree") {
                summary.push(format!("measured degree {}", d.detail["inferred_degree"]));
            }
            emit(cli, &report, &summary.join("\n"))?;
            Ok(report.exit())
        }
        Command::Obstruct { curve, curve_file, surface, catalog: all } => {
            let cfg = RunConfig::new("obstruct", 0);
            if *all {
                let reports = catalog().iter().map(|m| obstruct_surface(m, &cfg)).collect::<Result<Vec<_>, _>>()?;
                let summary: Vec<String> = reports
                    .iter()
                    .map(|r| format!("{:<50} {:?} {:?}", r.subject, r.verdict.outcome, r.verdict.reason))
                    .collect();
                emit(cli, &reports, &summary.join("\n"))?;
                return Ok(Exit::Ok);
            }
            let report = if let Some(src) = curve {
                obstruct_curve(&PlaneCurve::parse(src)?, &cfg)?
            } else if let Some(path) = curve_file {
                obstruct_curve(&parse_curve_json(&read(path)?)?, &cfg)?
            } else {
                let path = surface.as_ref().expect("one input is required");
                let model: SurfaceModel = serde_json::from_str(&read(path)?)
                    .map_err(|e| CliError::malformed(format!("not a surface model: {e}")))?;
                obstruct_surface(&model, &cfg)?
            };
            let v = &report.verdict;
            let reason = v.reason.map(|r| format!("({r:?})")).unwrap_or_default();
            let mut summary = format!("{}: {:?}{reason}\n{}", report.subject, v.outcome, v.citation);
            if let Some(w) = &v.witness {
                summary.push_str(&format!("\nwitness: {w}"));
            }
            for n in &v.notes {
                summary.push_str(&format!("\nnote: {n}"));
            }
            emit(cli, &report, &summary)?;
            Ok(Exit::Ok)
        }
        Command::Erratum { n, seed, samples } => {
            let mut cfg = RunConfig::new("erratum", *seed);
            cfg.n = *n;
            cfg.samples = Some(*samples);
            let report = erratum(&cfg)?;
            let mut summary = vec![format!("{:<8} {:>2} {:>12} {:>7} {:>9} {:>10}", "family", "n", "stated", "value", "measured", "corrected")];
            for r in &report.rows {
                summary.push(format!(
                    "{:<8} {:>2} {:>12} {:>7} {:>9} {:>10}",
                    r.family, r.n, r.stated_formula, r.stated_value, r.measured, r.corrected_value
                ));
            }
            summary.push(report.explanation.clone());
            emit(cli, &report, &summary.join("\n"))?;
            Ok(Exit::Ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Exit::Malformed as u8 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit as u8)
        }
    }
}
