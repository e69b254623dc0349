//! JSON instance documents.
//!
//! ```text
//! {"n": 3, "arcs": [[0, 1], [1, 2]], "b": [1, 1, 1], "w": [3, "1/2"],
//!  "k": 2, "b_i": [[0, 1, 1], [0, 1, 0]], "b_prime": [0, 1, 1],
//!  "x": [1, 2], "matroids": [{"kind": "uniform", "rank": 1}, ...]}
//! ```
//!
//! Only `n`, `arcs` and `b` are always required; each subcommand asks for
//! the fields it needs. Errors carry the JSON path of the offending value.

use serde::{Deserialize, Deserializer};

use crate::digraph::{ArcId, ArcSubset, Digraph};
use crate::greedy::DualCertificate;
use crate::matroids::{partition_oracle, uniform_oracle, CapacityVector, DemandVector, MatroidOracle};
use crate::mrgreedy::MatroidAssignment;
use crate::weights::serde_rational::Wrapped;
use crate::weights::{Rational, WeightVector};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct DocumentError {
    pub path: String,
    pub message: String,
}

impl DocumentError {
    fn at(path: impl Into<String>, message: impl Into<String>) -> Self {
        DocumentError {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type DocumentResult<T> = std::result::Result<T, DocumentError>;

/// Per-vertex matroid on the arcs entering the vertex.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum MatroidSpec {
    /// At most `rank` entering arcs.
    Uniform { rank: usize },
    /// At most `caps[j]` arcs from `blocks[j]`; blocks partition the entering
    /// arcs and list arc ids.
    Partition { blocks: Vec<Vec<ArcId>>, caps: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub n: usize,
    pub arcs: Vec<(usize, usize)>,
    pub b: Vec<u32>,
    #[serde(default, deserialize_with = "optional_rationals")]
    pub w: Option<Vec<Rational>>,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub b_i: Option<Vec<Vec<u32>>>,
    #[serde(default)]
    pub b_prime: Option<Vec<u32>>,
    #[serde(default)]
    pub x: Option<Vec<u32>>,
    #[serde(default)]
    pub matroids: Option<Vec<MatroidSpec>>,
}

fn optional_rationals<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Rational>>, D::Error> {
    let v: Option<Vec<Wrapped>> = Option::deserialize(d)?;
    Ok(v.map(|v| v.into_iter().map(|w| w.0).collect()))
}

/// Deserializes `text`, reporting the path of the first bad value.
pub fn from_json<'de, T: Deserialize<'de>>(text: &'de str) -> DocumentResult<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { "$".to_string() } else { format!("$.{path}") };
        DocumentError::at(path, e.into_inner().to_string())
    })
}

fn check_len(path: &str, actual: usize, expected: usize, of: &str) -> DocumentResult<()> {
    if actual != expected {
        return Err(DocumentError::at(
            path,
            format!("expected {expected} entries ({of}), got {actual}"),
        ));
    }
    Ok(())
}

fn check_bounded(path: &str, values: &[u32], bound: &[u32]) -> DocumentResult<()> {
    for (v, (&d, &c)) in values.iter().zip(bound).enumerate() {
        if d > c {
            return Err(DocumentError::at(
                format!("{path}[{v}]"),
                format!("{d} exceeds b({v}) = {c}"),
            ));
        }
    }
    Ok(())
}

impl InstanceDocument {
    pub fn parse(text: &str) -> DocumentResult<Self> {
        from_json(text)
    }

    pub fn graph(&self) -> DocumentResult<Digraph> {
        for (i, &(t, h)) in self.arcs.iter().enumerate() {
            for (j, v) in [t, h].into_iter().enumerate() {
                if v >= self.n {
                    return Err(DocumentError::at(
                        format!("$.arcs[{i}][{j}]"),
                        format!("vertex {v} out of range for n = {}", self.n),
                    ));
                }
            }
        }
        Digraph::new(self.n, self.arcs.iter().copied()).map_err(|e| DocumentError::at("$.arcs", e.to_string()))
    }

    pub fn capacities(&self) -> DocumentResult<CapacityVector> {
        check_len("$.b", self.b.len(), self.n, "one per vertex")?;
        if let Some(v) = self.b.iter().position(|&c| c == 0) {
            return Err(DocumentError::at(format!("$.b[{v}]"), "capacity must be positive"));
        }
        CapacityVector::new(self.b.clone()).map_err(|e| DocumentError::at("$.b", e.to_string()))
    }

    pub fn weights(&self) -> DocumentResult<WeightVector> {
        let w = self.w.as_ref().ok_or_else(|| DocumentError::at("$.w", "missing field"))?;
        check_len("$.w", w.len(), self.arcs.len(), "one per arc")?;
        WeightVector::from_rationals(w).map_err(|e| DocumentError::at("$.w", e.to_string()))
    }

    pub fn k(&self) -> DocumentResult<usize> {
        match self.k {
            None => Err(DocumentError::at("$.k", "missing field")),
            Some(0) => Err(DocumentError::at("$.k", "must be positive")),
            Some(k) => Ok(k),
        }
    }

    /// The demand vectors `b_i`; `k`, when present, must equal their number.
    pub fn demands(&self) -> DocumentResult<Vec<DemandVector>> {
        let all = self.b_i.as_ref().ok_or_else(|| DocumentError::at("$.b_i", "missing field"))?;
        if all.is_empty() {
            return Err(DocumentError::at("$.b_i", "at least one demand vector is required"));
        }
        if let Some(k) = self.k {
            check_len("$.b_i", all.len(), k, "one per part, k")?;
        }
        all.iter()
            .enumerate()
            .map(|(i, d)| {
                let path = format!("$.b_i[{i}]");
                check_len(&path, d.len(), self.n, "one per vertex")?;
                check_bounded(&path, d, &self.b)?;
                if *d == self.b {
                    return Err(DocumentError::at(path, "must differ from b"));
                }
                Ok(DemandVector::new(d.clone()))
            })
            .collect()
    }

    pub fn b_prime(&self) -> DocumentResult<DemandVector> {
        let d = self.b_prime.as_ref().ok_or_else(|| DocumentError::at("$.b_prime", "missing field"))?;
        check_len("$.b_prime", d.len(), self.n, "one per vertex")?;
        check_bounded("$.b_prime", d, &self.b)?;
        if *d == self.b {
            return Err(DocumentError::at("$.b_prime", "must differ from b"));
        }
        Ok(DemandVector::new(d.clone()))
    }

    pub fn x(&self) -> DocumentResult<&[u32]> {
        let x = self.x.as_ref().ok_or_else(|| DocumentError::at("$.x", "missing field"))?;
        check_len("$.x", x.len(), self.arcs.len(), "one per arc")?;
        Ok(x)
    }

    /// Matroid oracles from `matroids`, or uniform ones of rank `b(v)` when
    /// the field is absent.
    pub fn matroids(&self, g: &Digraph, b: &CapacityVector) -> DocumentResult<MatroidAssignment> {
        let Some(specs) = &self.matroids else {
            return MatroidAssignment::uniform(g, b).map_err(|e| DocumentError::at("$.b", e.to_string()));
        };
        check_len("$.matroids", specs.len(), self.n, "one per vertex")?;
        let in_lists = g.in_arc_lists();
        let oracles = specs
            .iter()
            .zip(in_lists)
            .enumerate()
            .map(|(v, (spec, ground))| {
                let built: crate::Result<Box<dyn MatroidOracle>> = match spec {
                    MatroidSpec::Uniform { rank } => {
                        uniform_oracle(ground, *rank).map(|o| Box::new(o) as Box<dyn MatroidOracle>)
                    }
                    MatroidSpec::Partition { blocks, caps } => {
                        partition_oracle(ground, blocks.clone(), caps.clone())
                            .map(|o| Box::new(o) as Box<dyn MatroidOracle>)
                    }
                };
                built.map_err(|e| DocumentError::at(format!("$.matroids[{v}]"), e.to_string()))
            })
            .collect::<DocumentResult<Vec<_>>>()?;
        MatroidAssignment::new(g, b, oracles).map_err(|e| DocumentError::at("$.matroids", e.to_string()))
    }
}

/// The arc set and certificate checked by `verify`; the output of
/// `max-weight` has this shape.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct CertificateDocument {
    pub arcs: Vec<ArcId>,
    pub certificate: DualCertificate,
}

impl CertificateDocument {
    pub fn parse(text: &str) -> DocumentResult<Self> {
        from_json(text)
    }

    pub fn arc_subset(&self, g: &Digraph) -> DocumentResult<ArcSubset> {
        ArcSubset::new(g, self.arcs.iter().copied()).map_err(|e| DocumentError::at("$.arcs", e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_document() {
        let doc = InstanceDocument::parse(r#"{"n": 2, "arcs": [[0, 1], [1, 0]], "b": [1, 1], "w": [3, "1/2"]}"#)
            .unwrap();
        let g = doc.graph().unwrap();
        assert_eq!(g.arc_count(), 2);
        let w = doc.weights().unwrap();
        assert_eq!(w.get(1), Rational::new(1, 2));
        assert_eq!(doc.k().unwrap_err().path, "$.k");
    }

    #[test]
    fn errors_carry_paths() {
        let e = InstanceDocument::parse(r#"{"n": 2, "arcs": [[0, 1], [1, "x"]], "b": [1, 1]}"#).unwrap_err();
        assert_eq!(e.path, "$.arcs[1][1]");

        let e = InstanceDocument::parse(r#"{"n": 2, "arcs": [], "b": [1, 1], "w": ["1/0"]}"#).unwrap_err();
        assert_eq!(e.path, "$.w[0]");

        let e = InstanceDocument::parse(r#"{"n": 2, "arcs": [], "b": [1, 1], "extra": 1}"#).unwrap_err();
        assert_eq!(e.path, "$.extra");

        let doc = InstanceDocument::parse(r#"{"n": 2, "arcs": [[0, 2]], "b": [1, 0]}"#).unwrap();
        assert_eq!(doc.graph().unwrap_err().path, "$.arcs[0][1]");
        assert_eq!(doc.capacities().unwrap_err().path, "$.b[1]");
    }

    #[test]
    fn demand_checks() {
        let doc = InstanceDocument::parse(r#"{"n": 2, "arcs": [], "b": [1, 2], "k": 2, "b_i": [[1, 1], [1, 3]]}"#)
            .unwrap();
        assert_eq!(doc.demands().unwrap_err().path, "$.b_i[1][1]");
        let doc = InstanceDocument::parse(r#"{"n": 2, "arcs": [], "b": [1, 2], "k": 1, "b_i": [[1, 2]]}"#).unwrap();
        assert_eq!(doc.demands().unwrap_err().path, "$.b_i[0]");
    }

    #[test]
    fn matroid_specs() {
        let doc = InstanceDocument::parse(
            r#"{"n": 2, "arcs": [[0, 1], [0, 1]], "b": [1, 2],
                "matroids": [{"kind": "uniform", "rank": 0},
                             {"kind": "partition", "blocks": [[0], [1]], "caps": [1, 0]}]}"#,
        )
        .unwrap();
        let g = doc.graph().unwrap();
        let b = doc.capacities().unwrap();
        let m = doc.matroids(&g, &b).unwrap();
        assert_eq!(m.oracle(1).rank(), 1);

        let e = InstanceDocument::parse(r#"{"n": 1, "arcs": [], "b": [1], "matroids": [{"kind": "graphic"}]}"#)
            .unwrap_err();
        assert_eq!(e.path, "$.matroids[0].kind");
    }

    #[test]
    fn schema_lists_every_field() {
        let schema: serde_json::Value =
            serde_json::from_str(include_str!("../../../docs/instance.schema.json")).unwrap();
        let mut keys: Vec<&str> = schema["properties"].as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort_unstable();
        assert_eq!(keys, ["arcs", "b", "b_i", "b_prime", "k", "matroids", "n", "w", "x"]);
        for key in keys.iter().filter(|k| !["n", "arcs", "b"].contains(k)) {
            let doc = format!(r#"{{"n": 1, "arcs": [], "b": [1], "{key}": null}}"#);
            assert!(InstanceDocument::parse(&doc).is_ok(), "{key}");
        }
        let e = InstanceDocument::parse(r#"{"n": 1, "arcs": [], "b": [1], "y": null}"#).unwrap_err();
        assert!(e.message.contains("unknown field"), "{e}");
    }
}
