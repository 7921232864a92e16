//! JSON instance and witness documents.
//!
//! Rationals are written as strings (`"7/2"`, `"-3"`). On input a JSON
//! integer is accepted as shorthand; JSON floats are rejected.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::model::{Coloring, Instance, ModelError, RainbowFace, TverbergWitness};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("witness does not fit the instance: {0}")]
    Incompatible(String),
}

fn field_error(path: impl Into<String>, message: impl Into<String>) -> DocumentError {
    DocumentError::Field {
        path: path.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// On-disk instance: dimension, multiplicity, one rational vector per
/// vertex, and one class index per vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub d: usize,
    pub r: usize,
    pub points: Vec<Vec<Value>>,
    pub colors: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientEntry {
    pub vertex: usize,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDocument {
    pub faces: Vec<Vec<usize>>,
    pub point: Vec<Value>,
    pub coefficients: Vec<Vec<CoefficientEntry>>,
}

fn rational_value(value: &Rational) -> Value {
    Value::String(format_rational(value))
}

fn parse_value(value: &Value, path: &str) -> Result<Rational, DocumentError> {
    match value {
        Value::String(text) => parse_rational(text).map_err(|e| field_error(path, e.to_string())),
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            parse_rational(&n.to_string()).map_err(|e| field_error(path, e.to_string()))
        }
        Value::Number(n) => Err(field_error(
            path,
            format!("floating-point value {n} is not allowed; write a rational string"),
        )),
        other => Err(field_error(path, format!("expected a rational string, found {other}"))),
    }
}

impl InstanceDocument {
    pub fn from_instance(instance: &Instance, metadata: Option<Metadata>) -> Self {
        Self {
            d: instance.d(),
            r: instance.r(),
            points: instance
                .points()
                .iter()
                .map(|p| p.iter().map(rational_value).collect())
                .collect(),
            colors: instance.coloring().class_assignment().to_vec(),
            metadata,
        }
    }

    pub fn to_instance(&self) -> Result<Instance, DocumentError> {
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                if p.len() != self.d {
                    return Err(field_error(
                        format!("points[{i}]"),
                        format!("has {} coordinates, expected d = {}", p.len(), self.d),
                    ));
                }
                p.iter()
                    .enumerate()
                    .map(|(k, v)| parse_value(v, &format!("points[{i}][{k}]")))
                    .collect()
            })
            .collect::<Result<Vec<Vec<Rational>>, _>>()?;
        if self.colors.len() != points.len() {
            return Err(field_error(
                "colors",
                format!("{} entries for {} points", self.colors.len(), points.len()),
            ));
        }
        let coloring = Coloring::from_class_of(self.colors.clone())
            .map_err(|e| field_error("colors", e.to_string()))?;
        Ok(Instance::new(self.d, self.r, points, coloring)?)
    }
}

impl WitnessDocument {
    pub fn from_witness(witness: &TverbergWitness) -> Self {
        Self {
            faces: witness.family(),
            point: witness.point().iter().map(rational_value).collect(),
            coefficients: witness
                .coefficients()
                .iter()
                .map(|weights| {
                    weights
                        .iter()
                        .map(|(&vertex, value)| CoefficientEntry {
                            vertex,
                            value: rational_value(value),
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_witness(&self) -> Result<TverbergWitness, DocumentError> {
        let faces = self
            .faces
            .iter()
            .enumerate()
            .map(|(i, face)| {
                let built = RainbowFace::new(face.iter().copied())
                    .map_err(|e| field_error(format!("faces[{i}]"), e.to_string()))?;
                if built.len() != face.len() {
                    return Err(field_error(format!("faces[{i}]"), "repeated vertex"));
                }
                Ok(built)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let point = self
            .point
            .iter()
            .enumerate()
            .map(|(k, v)| parse_value(v, &format!("point[{k}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let coefficients = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, entries)| {
                let mut weights = BTreeMap::new();
                for (j, entry) in entries.iter().enumerate() {
                    let path = format!("coefficients[{i}][{j}]");
                    let value = parse_value(&entry.value, &format!("{path}.value"))?;
                    if weights.insert(entry.vertex, value).is_some() {
                        return Err(field_error(path, format!("vertex {} listed twice", entry.vertex)));
                    }
                }
                Ok(weights)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TverbergWitness::from_parts(faces, point, coefficients))
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, DocumentError> {
    serde_json::from_str::<InstanceDocument>(text)?.to_instance()
}

pub fn parse_instance_document(text: &str) -> Result<InstanceDocument, DocumentError> {
    let doc = serde_json::from_str::<InstanceDocument>(text)?;
    doc.to_instance()?;
    Ok(doc)
}

pub fn parse_witness(text: &str) -> Result<TverbergWitness, DocumentError> {
    serde_json::from_str::<WitnessDocument>(text)?.to_witness()
}

pub fn parse_witness_list(text: &str) -> Result<Vec<TverbergWitness>, DocumentError> {
    serde_json::from_str::<Vec<WitnessDocument>>(text)?
        .iter()
        .map(WitnessDocument::to_witness)
        .collect()
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("documents always serialize");
    text.push('\n');
    text
}

pub fn instance_to_json(instance: &Instance, metadata: Option<Metadata>) -> String {
    pretty(&InstanceDocument::from_instance(instance, metadata))
}

pub fn witness_to_json(witness: &TverbergWitness) -> String {
    pretty(&WitnessDocument::from_witness(witness))
}

pub fn witnesses_to_json(witnesses: &[TverbergWitness]) -> String {
    pretty(&witnesses.iter().map(WitnessDocument::from_witness).collect::<Vec<_>>())
}

/// Rejects witnesses that cannot even be evaluated against `instance`:
/// vertex indices out of range, wrong point dimension, or a coefficient
/// list count that differs from the face count.
pub fn check_compatible(instance: &Instance, witness: &TverbergWitness) -> Result<(), DocumentError> {
    let n = instance.num_vertices();
    let referenced = witness
        .faces()
        .iter()
        .flat_map(|f| f.vertices().iter().copied())
        .chain(witness.coefficients().iter().flat_map(|w| w.keys().copied()));
    if let Some(vertex) = referenced.into_iter().find(|&v| v >= n) {
        return Err(DocumentError::Incompatible(format!(
            "vertex {vertex} does not exist (instance has {n} vertices)"
        )));
    }
    if witness.point().len() != instance.d() {
        return Err(DocumentError::Incompatible(format!(
            "point has {} coordinates, instance has d = {}",
            witness.point().len(),
            instance.d()
        )));
    }
    if witness.coefficients().len() != witness.faces().len() {
        return Err(DocumentError::Incompatible(format!(
            "{} coefficient lists for {} faces",
            witness.coefficients().len(),
            witness.faces().len()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::solver::{solve, SearchConfig};
    use proptest::prelude::*;

    const SQUARE: &str = r#"{"d": 2, "r": 2,
        "points": [["0","0"],["2","0"],["2","2"],[0,2]],
        "colors": [0,1,2,3]}"#;

    #[test]
    fn integer_shorthand_is_accepted() {
        let inst = parse_instance(SQUARE).unwrap();
        assert_eq!(inst.point(3), &[int(0), int(2)]);
        assert_eq!(inst.coloring().num_classes(), 4);
    }

    #[test]
    fn floats_are_rejected_with_context() {
        let text = SQUARE.replace("[0,2]", "[0.5,2]");
        let err = parse_instance(&text).unwrap_err();
        assert!(err.to_string().starts_with("points[3][0]:"), "{err}");
        let text = SQUARE.replace(r#"["2","2"]"#, r#"["2","x"]"#);
        let err = parse_instance(&text).unwrap_err();
        assert!(err.to_string().starts_with("points[2][1]:"), "{err}");
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = parse_instance("{\"d\": 2,\n \"r\": }").unwrap_err();
        assert!(matches!(err, DocumentError::Json(_)));
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn shape_errors_name_the_field() {
        let text = SQUARE.replace("[0,1,2,3]", "[0,1,2]");
        assert!(parse_instance(&text).unwrap_err().to_string().starts_with("colors:"));
        let text = SQUARE.replace("[0,2]", "[0]");
        assert!(parse_instance(&text).unwrap_err().to_string().starts_with("points[3]:"));
        let text = SQUARE.replace("[0,1,2,3]", "[0,1,3,3]");
        assert!(parse_instance(&text).unwrap_err().to_string().starts_with("colors:"));
        let text = SQUARE.replace("\"r\": 2", "\"r\": 2, \"extra\": 1");
        assert!(matches!(parse_instance(&text), Err(DocumentError::Json(_))));
    }

    #[test]
    fn witness_round_trip_and_format() {
        let inst = parse_instance(SQUARE).unwrap();
        let w = solve(&inst, &SearchConfig::default()).unwrap();
        let text = witness_to_json(&w);
        assert!(text.contains("\"1/2\""));
        assert_eq!(parse_witness(&text).unwrap(), w);
        assert_eq!(witness_to_json(&parse_witness(&text).unwrap()), text);
    }

    #[test]
    fn witness_parse_rejects_duplicates() {
        let text = r#"{"faces": [[0,0],[1]], "point": ["0"], "coefficients": [[], []]}"#;
        assert!(parse_witness(text).unwrap_err().to_string().starts_with("faces[0]"));
        let text = r#"{"faces": [[0],[1]], "point": ["0"],
            "coefficients": [[{"vertex":0,"value":"1"},{"vertex":0,"value":"0"}], []]}"#;
        assert!(parse_witness(text).unwrap_err().to_string().starts_with("coefficients[0][1]"));
    }

    #[test]
    fn compatibility_checks() {
        let inst = parse_instance(SQUARE).unwrap();
        let w = solve(&inst, &SearchConfig::default()).unwrap();
        assert!(check_compatible(&inst, &w).is_ok());
        let small = Instance::from_integers(2, 2, &[vec![0, 0], vec![1, 1], vec![2, 0]], vec![0, 1, 2]).unwrap();
        assert!(matches!(check_compatible(&small, &w), Err(DocumentError::Incompatible(_))));
    }

    fn arbitrary_instance() -> impl Strategy<Value = Instance> {
        (1usize..4, 2usize..4, 1usize..7).prop_flat_map(|(d, r, n)| {
            (
                proptest::collection::vec(proptest::collection::vec((-1000i64..1000, 1i64..50), d), n),
                proptest::collection::vec(0usize..3, n),
            )
                .prop_map(move |(coords, raw)| {
                    let points = coords
                        .iter()
                        .map(|p| p.iter().map(|&(a, b)| ratio(a, b)).collect())
                        .collect();
                    let mut seen = Vec::new();
                    let class_of = raw
                        .iter()
                        .map(|c| {
                            if !seen.contains(c) {
                                seen.push(*c);
                            }
                            seen.iter().position(|x| x == c).unwrap()
                        })
                        .collect();
                    Instance::new(d, r, points, Coloring::from_class_of(class_of).unwrap()).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn instance_documents_round_trip(inst in arbitrary_instance(), seed in proptest::option::of(any::<u64>())) {
            let meta = seed.map(|s| Metadata { generator: Some("random".into()), seed: Some(s) });
            let text = instance_to_json(&inst, meta.clone());
            prop_assert_eq!(parse_instance(&text).unwrap(), inst.clone());
            let doc = parse_instance_document(&text).unwrap();
            prop_assert_eq!(&doc.metadata, &meta);
            prop_assert_eq!(instance_to_json(&doc.to_instance().unwrap(), doc.metadata.clone()), text);
        }
    }
}
