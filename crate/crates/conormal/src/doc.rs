//! The canonical textual file format: a versioned JSON document listing
//! hyperface count, faces with tuples and parent maps, and optional
//! factorization provenance as nested documents.
//!
//! Serialization is canonical (faces in the complex's canonical order,
//! parent maps sorted by label), so `parse(serialize(c)) == c` and identical
//! complexes produce byte-identical documents.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::{Face, FaceComplex, FaceId, Label};
use crate::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FaceDocument {
    pub id: String,
    pub tuple: Vec<Label>,
    #[serde(default)]
    pub parents: BTreeMap<Label, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexDocument {
    pub format_version: u32,
    pub num_hyperfaces: u32,
    pub faces: Vec<FaceDocument>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<ComplexDocument>,
}

impl ComplexDocument {
    pub fn from_complex(cx: &FaceComplex) -> Self {
        ComplexDocument {
            format_version: FORMAT_VERSION,
            num_hyperfaces: cx.num_hyperfaces(),
            faces: cx
                .faces()
                .iter()
                .map(|f| FaceDocument {
                    id: f.id().to_string(),
                    tuple: f.tuple().to_vec(),
                    parents: f
                        .parents()
                        .iter()
                        .map(|(&l, id)| (l, id.to_string()))
                        .collect(),
                })
                .collect(),
            factors: cx
                .factors()
                .iter()
                .map(ComplexDocument::from_complex)
                .collect(),
        }
    }

    /// Rebuilds the complex; structural problems surface with the offending
    /// face named. Axiom checks stay with
    /// [`FaceComplex::validate`](crate::complex::FaceComplex::validate).
    pub fn to_complex(&self) -> Result<FaceComplex> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Structure(format!(
                "unsupported format_version {} (expected {})",
                self.format_version, FORMAT_VERSION
            )));
        }
        let faces: Vec<Face> = self
            .faces
            .iter()
            .map(|f| {
                let parents: BTreeMap<Label, FaceId> = f
                    .parents
                    .iter()
                    .map(|(&l, id)| (l, FaceId::new(id.clone())))
                    .collect();
                Face::new(f.id.clone(), f.tuple.clone(), parents)
            })
            .collect();
        let cx = FaceComplex::new(self.num_hyperfaces, faces)?;
        let factors: Vec<FaceComplex> = self
            .factors
            .iter()
            .map(ComplexDocument::to_complex)
            .collect::<Result<_>>()?;
        Ok(if factors.is_empty() {
            cx
        } else {
            cx.with_factors(factors)
        })
    }
}

/// Canonical JSON for a complex.
pub fn to_json(cx: &FaceComplex) -> String {
    serde_json::to_string_pretty(&ComplexDocument::from_complex(cx))
        .expect("document serialization cannot fail")
}

/// Parses JSON into a complex, reporting syntax and structural errors; the
/// result still needs `validate` before mathematical use.
pub fn parse_json(text: &str) -> Result<FaceComplex> {
    let doc: ComplexDocument = serde_json::from_str(text)?;
    doc.to_complex()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;

    #[test]
    fn round_trip_preserves_complexes() {
        for cx in builders::fixtures() {
            let parsed = parse_json(&to_json(&cx)).unwrap();
            assert_eq!(parsed, cx);
        }
    }

    #[test]
    fn round_trip_preserves_provenance() {
        let p =
            crate::products::product(&builders::interval(), &builders::two_chambers(1)).unwrap();
        let parsed = parse_json(&to_json(&p)).unwrap();
        assert_eq!(parsed.factors().len(), 2);
        assert_eq!(parsed, p);
    }

    #[test]
    fn serialization_is_byte_stable() {
        assert_eq!(to_json(&builders::cube()), to_json(&builders::cube()));
    }

    #[test]
    fn missing_parent_entry_names_the_face() {
        let text = r#"{
            "format_version": 1,
            "num_hyperfaces": 1,
            "faces": [
                {"id": "int", "tuple": []},
                {"id": "f1", "tuple": [1]}
            ]
        }"#;
        let err = parse_json(text).unwrap_err();
        assert!(
            err.to_string().contains("f1"),
            "error names the face: {err}"
        );
    }

    #[test]
    fn version_mismatch_is_rejected() {
        let text = r#"{"format_version": 99, "num_hyperfaces": 0, "faces": []}"#;
        assert!(parse_json(text).is_err());
    }

    #[test]
    fn malformed_json_is_rejected() {
        assert!(parse_json("{not json").is_err());
    }
}
