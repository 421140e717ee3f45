use serde::{Deserialize, Serialize};

use super::solve::chart_system;
use super::VerifyError;
use crate::atlasbuild::{certify_center, AtlasError, Construction, PseudoChart};
use crate::exactpoly::elim::{solve_exact, solve_numeric};
use crate::exactpoly::{has_common_zero, resultant_at, ElimBudget, Field, Scalar};
use crate::varspace::{PolyMap, Slot};

const SEED: u64 = 0xba5e;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum BasePointOutcome {
    /// One line of evidence per checked (stage, block, chart).
    Certified { method: String, entries: Vec<String> },
    Witness { block: usize, point: String },
    Inconclusive { reason: String },
}

impl BasePointOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, BasePointOutcome::Certified { .. })
    }
}

fn chart_label(chart: &[Slot], names: &[String]) -> String {
    if chart.iter().all(|s| *s == Slot::Free) {
        return "affine".into();
    }
    chart
        .iter()
        .zip(names)
        .filter(|(s, _)| **s != Slot::Free)
        .map(|(s, v)| format!("{v}={}", if *s == Slot::One { 1 } else { 0 }))
        .collect::<Vec<_>>()
        .join(",")
}

fn describe(coords: &[Scalar], names: &[String]) -> String {
    coords.iter().zip(names).map(|(c, v)| format!("{v}={c}")).collect::<Vec<_>>().join(", ")
}

/// Certifies that the components of every projective target block of `f`
/// have no common zero on the source, chart by chart, or finds one.
pub fn check_no_base_points(f: &PolyMap) -> Result<BasePointOutcome, VerifyError> {
    let blocks: Vec<usize> = f.target().projective_blocks().collect();
    if blocks.is_empty() {
        return Err(VerifyError::Input(format!("target {} has no projective block", f.target())));
    }
    let budget = ElimBudget::default();
    let field = f.field();
    let names: Vec<String> = f.source().all_vars().iter().cloned().collect();
    let mut entries = Vec::new();
    for t in blocks {
        for chart in f.source().standard_charts() {
            let label = chart_label(&chart, &names);
            let (sys, free) = chart_system(&f.components()[t], &chart, &field)?;
            let decided = match has_common_zero(&sys, &budget, SEED) {
                Ok(d) => d,
                Err(crate::exactpoly::PolyError::Budget(b)) => {
                    return Ok(BasePointOutcome::Inconclusive { reason: format!("block {t}, chart {label}: {b}") })
                }
                Err(e) => return Err(e.into()),
            };
            match decided {
                Some(false) => {
                    let evidence = if sys.len() == 2 && free.len() == 1 && sys.iter().all(|p| p.involves(0)) {
                        let v = &sys[0].vars()[0];
                        format!("Res_{v}({}, {}) = {}", sys[0], sys[1], resultant_at(&sys[0], &sys[1], 0)?)
                    } else {
                        "eliminant is a nonzero constant".into()
                    };
                    entries.push(format!("block {t}, chart {label}: no common zero ({evidence})"));
                }
                Some(true) => {
                    let free_names: Vec<String> = free.iter().map(|&i| names[i].clone()).collect();
                    let point = witness(&sys, &field)?
                        .map(|c| describe(&c, &free_names))
                        .unwrap_or_else(|| "common zero exists (not isolated)".into());
                    return Ok(BasePointOutcome::Witness { block: t, point: format!("chart {label}: {point}") });
                }
                None => {
                    return Ok(BasePointOutcome::Inconclusive {
                        reason: format!("block {t}, chart {label}: elimination did not decide"),
                    })
                }
            }
        }
    }
    Ok(BasePointOutcome::Certified { method: "direct elimination".into(), entries })
}

fn witness(sys: &[crate::exactpoly::MultiPoly], field: &Field) -> Result<Option<Vec<Scalar>>, VerifyError> {
    let budget = ElimBudget::default();
    if field.is_finite() {
        return Ok(solve_exact(sys, &budget, SEED)?.points.into_iter().next());
    }
    let s = solve_numeric(sys, &budget, SEED)?;
    Ok(s.points.into_iter().next().map(|p| {
        p.into_iter()
            .map(|z| {
                // report exact small integers exactly
                let r = z.re.round();
                if (z - num_complex::Complex64::new(r, 0.0)).norm() < 1e-9 && r.abs() < 1e9 {
                    Scalar::from_i64(&Field::Rational, r as i64)
                } else {
                    Scalar::Complex(z)
                }
            })
            .collect()
    }))
}

fn stage_entries(c: &Construction, out: &mut Vec<String>) -> Result<Option<BasePointOutcome>, VerifyError> {
    match c {
        Construction::DoubleCover => {
            let m = c.map()?;
            let r = resultant_at(&m.components()[0][0], &m.components()[0][1], 0)?;
            out.push(format!("double cover: Res_t(t^2 + 1, t) = {r}"));
        }
        Construction::Identity { space } => out.push(format!("identity on {space}")),
        Construction::Explicit { map, .. } if map.target().projective_blocks().next().is_none() => {
            out.push(format!("{}: affine target", map.provenance()));
        }
        Construction::Sym2 | Construction::Segre { .. } | Construction::LinearProjection { .. } | Construction::Explicit { .. } => {
            match check_no_base_points(&c.map()?)? {
                BasePointOutcome::Certified { entries, .. } => {
                    let name = c.map()?.provenance().to_string();
                    out.extend(entries.into_iter().map(|e| format!("{name}: {e}")));
                }
                other => return Ok(Some(other)),
            }
        }
        Construction::Extend { cover, .. } => return stage_entries(cover, out),
        Construction::Product { factors } => {
            for f in factors {
                if let Some(o) = stage_entries(f, out)? {
                    return Ok(Some(o));
                }
            }
        }
        Construction::Compose { stages } => {
            let mut i = 0;
            while i < stages.len() {
                if let (Construction::Segre { n }, Some(Construction::LinearProjection { coefficients, .. })) =
                    (&stages[i], stages.get(i + 1))
                {
                    match certify_center(*n, coefficients) {
                        Ok(cert) => out.extend(cert.charts.into_iter().map(|e| format!("projection center: {e}"))),
                        Err(AtlasError::CenterMeetsVariety { detail, .. }) => {
                            return Ok(Some(BasePointOutcome::Witness { block: 0, point: detail }))
                        }
                        Err(e) => return Err(e.into()),
                    }
                    i += 2;
                    continue;
                }
                if let Some(o) = stage_entries(&stages[i], out)? {
                    return Ok(Some(o));
                }
                i += 1;
            }
        }
    }
    Ok(None)
}

/// Base-point certificate for a chart: stage by stage along its
/// construction when the map is the one the construction builds (a
/// composite of morphisms is a morphism), directly on the map otherwise.
pub fn certify_chart(c: &PseudoChart) -> Result<BasePointOutcome, VerifyError> {
    if c.map.target().projective_blocks().next().is_none() {
        return Ok(BasePointOutcome::Certified { method: "affine target".into(), entries: vec![] });
    }
    if !c.matches_construction() || matches!(c.construction, Construction::Explicit { .. }) {
        return check_no_base_points(&c.map);
    }
    let mut entries = Vec::new();
    match stage_entries(&c.construction, &mut entries)? {
        Some(o) => Ok(o),
        None => Ok(BasePointOutcome::Certified { method: "per stage".into(), entries }),
    }
}
