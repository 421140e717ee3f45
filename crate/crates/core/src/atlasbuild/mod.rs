//! Explicit pseudo-charts: polynomial maps from affine space onto rational
//! varieties, each carrying the construction tree it was assembled from.

mod bundle;
mod construction;
mod covers;
mod projection;

pub use bundle::{bundle_atlas, BundleAtlas, BundlePoint, Transition};
pub use construction::Construction;
pub use covers::{cover_p2, cover_product_p1, extend_over_base, p1_double_cover, segre, sym2_cover};
pub use projection::{
    certify_center, cover_pn, projection_from_coefficients, pulled_back_forms, restrict_to_chart, random_linear_projection, CenterCertificate, Projection,
    MAX_PROJECTION_ATTEMPTS,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactpoly::PolyError;
use crate::varspace::{MapError, PolyMap, Space};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AtlasError {
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("projection center meets the Segre variety ({detail}) after {attempts} draw(s)")]
    CenterMeetsVariety { attempts: usize, detail: String },
    #[error("not a pseudo-chart: {0}")]
    NotAChart(String),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A map A^n -> X with dim X = n, its claimed degree and its construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PseudoChart {
    pub map: PolyMap,
    pub claimed_degree: u64,
    pub construction: Construction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl PseudoChart {
    /// Builds the map of `construction` and views its source as one affine
    /// block with coordinates `t1..tn`.
    pub fn from_construction(construction: Construction, seed: Option<u64>) -> Result<Self, AtlasError> {
        let map = construction.map()?;
        let n = map.source().nvars();
        if !map.source().is_affine() {
            return Err(AtlasError::NotAChart(format!("source {} is not affine", map.source())));
        }
        if map.target().dim() != n {
            return Err(AtlasError::NotAChart(format!("target {} does not have dimension {n}", map.target())));
        }
        let map = map.with_affine_source(Space::affine(n, "t"))?;
        let claimed_degree = construction.degree();
        Ok(PseudoChart { map, claimed_degree, construction, seed })
    }

    /// Wraps an arbitrary map from affine space. The dimension condition is
    /// left to the finite-fiber scan.
    pub fn explicit(map: PolyMap, claimed_degree: u64) -> Result<Self, AtlasError> {
        if !map.source().is_affine() {
            return Err(AtlasError::NotAChart(format!("source {} is not affine", map.source())));
        }
        let construction = Construction::Explicit { map: map.clone(), degree: claimed_degree };
        Ok(PseudoChart { map, claimed_degree, construction, seed: None })
    }

    pub fn dim(&self) -> usize {
        self.map.source().nvars()
    }

    /// True when `map` is exactly what the construction tree builds.
    pub fn matches_construction(&self) -> bool {
        if let Construction::Explicit { map, .. } = &self.construction {
            return map == &self.map;
        }
        PseudoChart::from_construction(self.construction.clone(), self.seed).is_ok_and(|c| c.map == self.map)
    }

    /// A copy whose map has one component replaced (for control experiments).
    pub fn corrupted(&self, block: usize, index: usize, poly: crate::exactpoly::MultiPoly) -> Result<Self, AtlasError> {
        Ok(PseudoChart { map: self.map.clone().with_component(block, index, poly)?, ..self.clone() })
    }
}
