//! The `scene.json` document shared by every pipeline stage.

use crate::construction::Configuration;
use crate::duality::{Attempt, Bands, DualScene};
use crate::extension::ExtendedCover;
use crate::geom::{BasePolygon, Point2};
use crate::prep::{Normalization, PrepError, PreparedPolygon, WedgeAssignment, WedgeTemplateSet};
use crate::rational::{self, Rational};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: &str = "coverkit-scene/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonRecord {
    /// Vertices as given.
    pub input: Vec<Point2>,
    /// Validated, normalized `S` used by every later stage.
    pub normalized: BasePolygon,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigurationRecord {
    pub k: usize,
    pub l: usize,
    #[serde(with = "rational::serde_str")]
    pub delta: Rational,
    pub assignment: WedgeAssignment,
    pub templates: WedgeTemplateSet,
    pub configuration: Configuration,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualRecord {
    pub scene: DualScene,
    pub bands: Bands,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rational")]
    pub epsilon: Option<Rational>,
    pub attempts: Vec<Attempt>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Certificate,
    Random,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub what: String,
    pub mode: Mode,
    pub params: BTreeMap<String, String>,
    pub passed: bool,
    pub summary: String,
    /// RFC 3339; the only field allowed to differ between identical runs.
    pub timestamp: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SceneDocument {
    pub schema_version: String,
    pub polygon: PolygonRecord,
    pub normalization: Normalization,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub configuration: Option<ConfigurationRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual: Option<DualRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtendedCover>,
    #[serde(default)]
    pub verdicts: Vec<Verdict>,
}

impl SceneDocument {
    pub fn new(prepared: &PreparedPolygon) -> Self {
        SceneDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            polygon: PolygonRecord { input: prepared.input.clone(), normalized: prepared.normalized.clone() },
            normalization: prepared.normalization.clone(),
            configuration: None,
            dual: None,
            extension: None,
            verdicts: Vec::new(),
        }
    }

    /// Re-derives the prepared polygon from the stored input.
    pub fn prepared(&self) -> Result<PreparedPolygon, PrepError> {
        PreparedPolygon::new(&self.polygon.input)
    }

    pub fn base(&self) -> &BasePolygon {
        &self.polygon.normalized
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scene serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// JSON with every verdict timestamp blanked, for reproducibility checks.
    pub fn without_timestamps(&self) -> SceneDocument {
        let mut d = self.clone();
        for v in &mut d.verdicts {
            v.timestamp.clear();
        }
        d
    }
}

mod opt_rational {
    use crate::rational::{format, parse, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&format(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality;
    use crate::prep::presets;
    use crate::rational::rat;

    #[test]
    fn round_trip_is_identity() {
        let p = PreparedPolygon::new(&presets::pentagon()).unwrap();
        let mut doc = SceneDocument::new(&p);
        let d = duality::dualize_with_retry(&p, 2, &rat(1, 64), None, 0).unwrap();
        let bands = duality::validate_bands(&d.scene, &p.height()).unwrap();
        doc.configuration = Some(ConfigurationRecord {
            k: 2,
            l: 2,
            delta: d.built.delta.clone(),
            assignment: d.built.templates.assignment,
            templates: d.built.templates.clone(),
            configuration: d.built.config.clone(),
        });
        doc.dual = Some(DualRecord { scene: d.scene, bands, epsilon: Some(rat(1, 10)), attempts: d.attempts });
        let json = doc.to_json();
        let back = SceneDocument::from_json(&json).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json(), json);
        assert!(json.contains("\"1/64\""));
    }
}
