//! Compactified surfaces with boundary, and the boundary obstructions.

use serde::{Deserialize, Serialize};

use super::rank::rank_over_q;
use super::{ObstructError, Reason, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryComponent {
    pub name: String,
    /// Geometric genus; 0 for a rational curve.
    pub genus: u32,
    /// Class in the model's basis of Pic(S̄) ⊗ Q.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<Vec<i64>>,
}

impl BoundaryComponent {
    pub fn rational(name: &str, class: &[i64]) -> Self {
        BoundaryComponent { name: name.into(), genus: 0, class: Some(class.to_vec()) }
    }

    pub fn with_genus(name: &str, genus: u32, class: &[i64]) -> Self {
        BoundaryComponent { name: name.into(), genus, class: Some(class.to_vec()) }
    }
}

/// S = S̄ ∖ (D₁ ∪ … ∪ D_s) with S̄ smooth projective of Picard number ρ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceModel {
    pub name: String,
    pub rho: usize,
    /// Names of the Picard basis vectors.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub basis: Vec<String>,
    pub boundary: Vec<BoundaryComponent>,
}

impl SurfaceModel {
    pub fn validate(&self) -> Result<(), ObstructError> {
        if self.rho == 0 {
            return Err(ObstructError::Malformed("Picard number must be positive".into()));
        }
        if !self.basis.is_empty() && self.basis.len() != self.rho {
            return Err(ObstructError::Malformed(format!("basis has {} entries, rho = {}", self.basis.len(), self.rho)));
        }
        for d in &self.boundary {
            if let Some(c) = &d.class {
                if c.len() != self.rho {
                    return Err(ObstructError::Malformed(format!(
                        "class of {} has length {}, rho = {}",
                        d.name,
                        c.len(),
                        self.rho
                    )));
                }
            }
        }
        Ok(())
    }

    /// The model with boundary component `i` dropped.
    pub fn without(&self, i: usize) -> SurfaceModel {
        let mut m = self.clone();
        m.boundary.remove(i);
        m
    }
}

/// Checks, in order: rationality of each component, the component count
/// against ρ, and the rank of the class vectors (when all are given).
pub fn theorem_verdict(m: &SurfaceModel) -> Result<Verdict, ObstructError> {
    m.validate()?;
    if let Some(d) = m.boundary.iter().find(|d| d.genus > 0) {
        return Ok(Verdict::obstructed(
            Reason::NonRationalBoundary,
            format!("boundary component {} has genus {}", d.name, d.genus),
        ));
    }
    let s = m.boundary.len();
    if s < m.rho {
        return Ok(Verdict::obstructed(Reason::TooFewComponents, format!("{s} boundary components < rho = {}", m.rho)));
    }
    let classes: Option<Vec<Vec<i64>>> = m.boundary.iter().map(|d| d.class.clone()).collect();
    let mut notes = vec![];
    match classes {
        Some(rows) => {
            let r = rank_over_q(&rows);
            if r < m.rho {
                return Ok(Verdict::obstructed(
                    Reason::ClassesDoNotGenerate,
                    format!("boundary classes span rank {r} < rho = {}", m.rho),
                ));
            }
        }
        None => notes.push("some boundary classes missing: generation not tested".into()),
    }
    Ok(Verdict::inconclusive(notes))
}

fn unit(rho: usize, i: usize) -> Vec<i64> {
    (0..rho).map(|k| (k == i) as i64).collect()
}

fn model(name: &str, basis: &[&str], boundary: Vec<BoundaryComponent>) -> SurfaceModel {
    SurfaceModel { name: name.into(), rho: basis.len(), basis: basis.iter().map(|s| s.to_string()).collect(), boundary }
}

use BoundaryComponent as D;

/// Preset surfaces with standard Picard bases and sample boundaries.
pub fn catalog() -> Vec<SurfaceModel> {
    let mut out = vec![
        model("P2 minus a line", &["H"], vec![D::rational("L", &[1])]),
        model("P2 minus a conic", &["H"], vec![D::rational("Q", &[2])]),
        model("P2 minus a smooth cubic", &["H"], vec![D::with_genus("E", 1, &[3])]),
        model("P2 minus two lines", &["H"], vec![D::rational("L1", &[1]), D::rational("L2", &[1])]),
        model("P1xP1 minus one ruling", &["F1", "F2"], vec![D::rational("A", &[1, 0])]),
        model("P1xP1 minus two rulings", &["F1", "F2"], vec![D::rational("A", &[1, 0]), D::rational("B", &[0, 1])]),
        model("P1xP1 minus two parallel fibers", &["F1", "F2"], vec![D::rational("A", &[1, 0]), D::rational("A'", &[1, 0])]),
        model("P1xP1 minus the diagonal", &["F1", "F2"], vec![D::rational("Delta", &[1, 1])]),
        model("P1xP1 minus a smooth (2,2) curve", &["F1", "F2"], vec![D::with_genus("E", 1, &[2, 2]), D::rational("A", &[1, 0])]),
    ];
    for a in 0..=3 {
        let basis = ["f", "C0"];
        out.push(model(&format!("F{a} minus fiber and negative section"), &basis, vec![D::rational("f", &[1, 0]), D::rational("C0", &[0, 1])]));
        out.push(model(&format!("F{a} minus two fibers"), &basis, vec![D::rational("f", &[1, 0]), D::rational("f'", &[1, 0])]));
        out.push(model(&format!("F{a} minus a fiber"), &basis, vec![D::rational("f", &[1, 0])]));
    }
    for k in 1..=8 {
        let rho = k + 1;
        let names: Vec<String> = std::iter::once("H".to_string()).chain((1..=k).map(|i| format!("E{i}"))).collect();
        let basis: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let exceptional: Vec<D> = (1..=k).map(|i| D::rational(&format!("E{i}"), &unit(rho, i))).collect();
        let mut with_line = vec![D::rational("L", &unit(rho, 0))];
        with_line.extend(exceptional.iter().cloned());
        out.push(model(&format!("Bl{k}P2 minus a line and the exceptional curves"), &basis, with_line));
        out.push(model(&format!("Bl{k}P2 minus the exceptional curves"), &basis, exceptional));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn malformed_classes_rejected() {
        let m = model("bad", &["F1", "F2"], vec![D::rational("A", &[1])]);
        assert!(matches!(theorem_verdict(&m), Err(ObstructError::Malformed(_))));
    }

    #[test]
    fn missing_classes_skip_rank() {
        let m = SurfaceModel {
            name: "x".into(),
            rho: 1,
            basis: vec![],
            boundary: vec![D { name: "C".into(), genus: 0, class: None }],
        };
        let v = theorem_verdict(&m).unwrap();
        assert!(!v.is_obstructed());
        assert!(v.notes[0].contains("missing"));
    }
}
