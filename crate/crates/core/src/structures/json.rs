//! Canonical JSON encoding shared by the CLI, file formats, and FFI.
//!
//! Envelope: `{"kind": "...", "vertices": [...], "relations": [[u,v,"lt"|"out"], ...],
//! "colors": {...}, "provenance": {...}}`. Relations are listed in ascending
//! (u, v) order so equal structures serialize identically.

use super::{ColoredPoset, Digraph, LinearOrder, Poset, ValidationReport, VertexId};
use crate::error::Error;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Serialize, Deserialize)]
struct StructureJson {
    kind: String,
    vertices: Vec<VertexId>,
    relations: Vec<(VertexId, VertexId, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    colors: Option<BTreeMap<String, u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<serde_json::Value>,
}

/// Union of the concrete structure kinds, for IO and dispatch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyStructure {
    Digraph(Digraph),
    Poset(Poset),
    ColoredPoset(ColoredPoset),
    LinearOrder(LinearOrder),
}

impl AnyStructure {
    pub fn kind(&self) -> &'static str {
        match self {
            AnyStructure::Digraph(_) => "digraph",
            AnyStructure::Poset(_) => "poset",
            AnyStructure::ColoredPoset(_) => "colored_poset",
            AnyStructure::LinearOrder(_) => "linear_order",
        }
    }

    pub fn n(&self) -> usize {
        match self {
            AnyStructure::Digraph(g) => g.n(),
            AnyStructure::Poset(p) => p.n(),
            AnyStructure::ColoredPoset(cp) => cp.n(),
            AnyStructure::LinearOrder(lo) => lo.n(),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        match self {
            AnyStructure::Digraph(g) => g.validate(),
            AnyStructure::Poset(p) => p.validate(),
            AnyStructure::ColoredPoset(cp) => cp.validate(),
            AnyStructure::LinearOrder(lo) => lo.validate(),
        }
    }

    pub fn as_poset(&self) -> Option<&Poset> {
        match self {
            AnyStructure::Poset(p) => Some(p),
            AnyStructure::LinearOrder(lo) => Some(lo.poset()),
            _ => None,
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        self.to_json_with_provenance(None)
    }

    pub fn to_json_with_provenance(&self, provenance: Option<serde_json::Value>) -> serde_json::Value {
        let (vertices, relations, colors) = match self {
            AnyStructure::Digraph(g) => (
                g.ids().to_vec(),
                g.arcs_iter()
                    .map(|(u, v)| (u, v, "out".to_string()))
                    .collect::<Vec<_>>(),
                None,
            ),
            AnyStructure::Poset(p) => (p.ids().to_vec(), lt_relations(p), None),
            AnyStructure::ColoredPoset(cp) => (
                cp.ids().to_vec(),
                lt_relations(&cp.poset),
                Some(
                    cp.ids()
                        .iter()
                        .enumerate()
                        .map(|(i, &v)| (v.to_string(), cp.color_pos(i)))
                        .collect(),
                ),
            ),
            AnyStructure::LinearOrder(lo) => (lo.ids().to_vec(), lt_relations(lo.poset()), None),
        };
        let mut relations = relations;
        relations.sort();
        serde_json::to_value(StructureJson {
            kind: self.kind().to_string(),
            vertices,
            relations,
            colors,
            provenance,
        })
        .expect("structure serialization cannot fail")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serialization cannot fail")
    }

    pub fn from_json_value(value: &serde_json::Value) -> Result<AnyStructure, Error> {
        let raw: StructureJson = serde_json::from_value(value.clone())?;
        let mut vertices = raw.vertices;
        vertices.sort_unstable();
        vertices.dedup();
        let mut lt_pairs = Vec::new();
        let mut arcs = Vec::new();
        for (u, v, label) in &raw.relations {
            match label.as_str() {
                "lt" => lt_pairs.push((*u, *v)),
                "out" => arcs.push((*u, *v)),
                other => {
                    return Err(Error::InvalidInput(format!(
                        "unknown relation label {other:?} (expected \"lt\" or \"out\")"
                    )))
                }
            }
        }
        let structure = match raw.kind.as_str() {
            "digraph" => {
                if !lt_pairs.is_empty() {
                    return Err(Error::InvalidInput("digraph cannot carry lt relations".into()));
                }
                AnyStructure::Digraph(Digraph::from_arcs(vertices, &arcs)?)
            }
            "poset" | "linear_order" | "colored_poset" => {
                if !arcs.is_empty() {
                    return Err(Error::InvalidInput("order cannot carry out relations".into()));
                }
                let poset = Poset::from_relations(vertices, &lt_pairs)?;
                match raw.kind.as_str() {
                    "poset" => AnyStructure::Poset(poset),
                    "linear_order" => AnyStructure::LinearOrder(LinearOrder::new(poset)?),
                    _ => {
                        let colors = raw.colors.unwrap_or_default();
                        let mut vec = Vec::with_capacity(poset.n());
                        for &v in poset.ids() {
                            let c = colors.get(&v.to_string()).copied().ok_or_else(|| {
                                Error::InvalidInput(format!("vertex {v} missing a color"))
                            })?;
                            vec.push(c);
                        }
                        AnyStructure::ColoredPoset(ColoredPoset::new(poset, vec)?)
                    }
                }
            }
            other => {
                return Err(Error::InvalidInput(format!("unknown structure kind {other:?}")))
            }
        };
        let report = structure.validate();
        if !report.pass() {
            return Err(Error::InvalidStructure(report));
        }
        Ok(structure)
    }

    pub fn from_json_str(s: &str) -> Result<AnyStructure, Error> {
        let value: serde_json::Value = serde_json::from_str(s)?;
        AnyStructure::from_json_value(&value)
    }
}

fn lt_relations(p: &Poset) -> Vec<(VertexId, VertexId, String)> {
    p.relations_iter()
        .map(|(u, v)| (u, v, "lt".to_string()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_roundtrip() {
        let p = AnyStructure::Poset(Poset::chain(3));
        let s = p.to_json_string();
        assert_eq!(AnyStructure::from_json_str(&s).unwrap(), p);
    }

    #[test]
    fn colored_roundtrip() {
        let cp = ColoredPoset::new(Poset::chain(2), vec![1, 2]).unwrap();
        let j = AnyStructure::ColoredPoset(cp).to_json_string();
        let back = AnyStructure::from_json_str(&j).unwrap();
        assert_eq!(j, back.to_json_string());
    }

    #[test]
    fn digraph_roundtrip() {
        let g = Digraph::from_arcs(vec![0, 1, 2], &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let j = AnyStructure::Digraph(g.clone()).to_json_string();
        assert_eq!(AnyStructure::from_json_str(&j).unwrap(), AnyStructure::Digraph(g));
    }

    #[test]
    fn invalid_structure_rejected_at_parse() {
        let bad = r#"{"kind":"poset","vertices":[0,1,2],"relations":[[0,1,"lt"],[1,2,"lt"]]}"#;
        assert!(matches!(
            AnyStructure::from_json_str(bad),
            Err(Error::InvalidStructure(_))
        ));
    }

    #[test]
    fn serialization_is_deterministic() {
        let g = Digraph::from_arcs(vec![0, 1, 2], &[(2, 0), (0, 1), (1, 2)]).unwrap();
        let a = AnyStructure::Digraph(g.clone()).to_json_string();
        let b = AnyStructure::Digraph(g).to_json_string();
        assert_eq!(a, b);
    }
}
