//! JSON forms of points and maps. Points carry an optional field tag and
//! per-block coefficient arrays; maps carry source and target spaces,
//! per-block component polynomials and a provenance string.

use serde::{Deserialize, Serialize};

use super::map::PolyMap;
use super::space::{Space, SpacePoint};
use super::MapError;
use crate::exactpoly::{Field, FieldJson, MultiPoly, PolyJson, ScalarJson};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldJson>,
    pub blocks: Vec<Vec<ScalarJson>>,
}

impl From<&SpacePoint> for PointJson {
    fn from(p: &SpacePoint) -> Self {
        let field = match p.field() {
            None | Some(Field::Rational) => None,
            Some(f) => Some(FieldJson::from(&f)),
        };
        PointJson { field, blocks: p.blocks().iter().map(|b| b.iter().map(ScalarJson::from).collect()).collect() }
    }
}

impl PointJson {
    /// Decodes without normalization; pair with [`SpacePoint::new`] when a space is known.
    pub fn to_point(&self) -> Result<SpacePoint, MapError> {
        let field = match &self.field {
            None => Field::Rational,
            Some(f) => Field::try_from(f)?,
        };
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|c| c.to_scalar(&field)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SpacePoint::raw(blocks))
    }
}

impl Serialize for SpacePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PointJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpacePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        PointJson::deserialize(d)?.to_point().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapJson {
    pub source: Space,
    pub target: Space,
    pub components: Vec<Vec<PolyJson>>,
    pub provenance: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub chart_local: bool,
}

impl From<&PolyMap> for MapJson {
    fn from(m: &PolyMap) -> Self {
        MapJson {
            source: m.source().clone(),
            target: m.target().clone(),
            components: m.components().iter().map(|b| b.iter().map(PolyJson::from).collect()).collect(),
            provenance: m.provenance().to_string(),
            chart_local: m.is_chart_local(),
        }
    }
}

impl TryFrom<MapJson> for PolyMap {
    type Error = MapError;
    fn try_from(j: MapJson) -> Result<Self, MapError> {
        let components = j
            .components
            .into_iter()
            .map(|b| b.into_iter().map(MultiPoly::try_from).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        if j.chart_local {
            PolyMap::new_chart_local(j.source, j.target, components, j.provenance)
        } else {
            PolyMap::new(j.source, j.target, components, j.provenance)
        }
    }
}

impl Serialize for PolyMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MapJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        PolyMap::try_from(MapJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::Scalar;

    #[test]
    fn map_round_trip() {
        let src = Space::p1_power(2);
        let v = src.all_vars();
        let c = ["b1*b2", "a1*b2 + b1*a2", "a1*a2"].map(|s| MultiPoly::parse(s, v.clone()).unwrap()).to_vec();
        let m = PolyMap::new(src, Space::projective(2, "x"), vec![c], "sym2").unwrap();
        let s = serde_json::to_string(&m).unwrap();
        let back: PolyMap = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }

    #[test]
    fn point_round_trip_over_extension() {
        let f = Field::finite(3, 2).unwrap();
        let s = Space::projective(1, "x");
        let p = SpacePoint::new(&s, vec![vec![Scalar::finite_element(&f, 5).unwrap(), Scalar::one(&f)]]).unwrap();
        let j = serde_json::to_string(&p).unwrap();
        let back: SpacePoint = serde_json::from_str(&j).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn rejects_bad_space() {
        let j = r#"{"factors":[{"kind":"projective","dim":1,"vars":["x"]}]}"#;
        assert!(serde_json::from_str::<Space>(j).is_err());
    }
}
