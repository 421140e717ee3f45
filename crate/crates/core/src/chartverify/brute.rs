use std::collections::HashMap;

use rayon::prelude::*;

use super::VerifyError;
use crate::exactpoly::{Field, Scalar};
use crate::varspace::{MapError, PolyMap, SpacePoint};

/// Largest number of source points the brute backend enumerates.
pub const BRUTE_CAP: u64 = 1_000_000;

/// Every F_q-point of the source of a map, bucketed by its image.
#[derive(Clone, Debug)]
pub struct BruteTable {
    field: Field,
    target: crate::varspace::Space,
    buckets: HashMap<String, Vec<SpacePoint>>,
}

impl BruteTable {
    pub fn build(map: &PolyMap, p: u64, k: usize) -> Result<Self, VerifyError> {
        let field = Field::finite(p, k)?;
        let q = field.order().expect("finite field");
        let n = map.source().nvars() as u32;
        let total = q.checked_pow(n).filter(|&t| t <= BRUTE_CAP).ok_or_else(|| {
            VerifyError::Budget(format!("{q}^{n} source points exceed the brute-force cap {BRUTE_CAP}"))
        })?;
        let reduced = map.to_field(&field)?;
        let source = map.source().clone();
        let images: Vec<Result<(String, SpacePoint), VerifyError>> = (0..total)
            .into_par_iter()
            .map(|mut idx| {
                let mut coords = Vec::with_capacity(n as usize);
                for _ in 0..n {
                    coords.push(Scalar::finite_element(&field, idx % q).expect("in range"));
                    idx /= q;
                }
                let blocks: Vec<Vec<Scalar>> =
                    (0..source.factors().len()).map(|i| coords[source.block_range(i)].to_vec()).collect();
                let x = SpacePoint::raw(blocks);
                match crate::varspace::evaluate_map(&reduced, &x) {
                    Ok(y) => Ok((y.to_string(), x)),
                    Err(MapError::BasePointHit { block, witness }) => Err(VerifyError::Input(format!(
                        "base point {witness} in target block {block} over {field}"
                    ))),
                    Err(e) => Err(e.into()),
                }
            })
            .collect();
        let mut buckets: HashMap<String, Vec<SpacePoint>> = HashMap::new();
        for r in images {
            let (key, x) = r?;
            buckets.entry(key).or_default().push(x);
        }
        Ok(BruteTable { field, target: map.target().clone(), buckets })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Source points over the enumerated field mapping to `y`.
    pub fn fiber(&self, y: &SpacePoint) -> Result<Vec<SpacePoint>, VerifyError> {
        let y = y.coerce_into(&self.field)?.canonical(&self.target)?;
        Ok(self.buckets.get(&y.to_string()).cloned().unwrap_or_default())
    }

    /// Number of distinct image points.
    pub fn image_size(&self) -> usize {
        self.buckets.len()
    }
}
