//! The JSON file format for groupoids and the JSON shapes of derived artifacts.
//!
//! ```json
//! {
//!   "schema_version": "finite-groupoid/1",
//!   "elements": ["e", "g"],
//!   "units": ["e"],
//!   "src": {"e": "e", "g": "e"},
//!   "rng": {"e": "e", "g": "e"},
//!   "comp": [["e", "e", "e"], ["e", "g", "g"], ["g", "e", "g"], ["g", "g", "e"]],
//!   "inv": {"e": "e", "g": "g"}
//! }
//! ```

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::abelian::{Character, DualBundle};
use crate::algebra::AlgebraElement;
use crate::functional::{CharacterFunctional, GelfandMatrix};
use crate::groupoid::FiniteGroupoid;
use crate::linalg::Subspace;
use crate::quotient::QuotientResult;
use crate::scalar::GaussRat;

pub const SCHEMA_VERSION: &str = "finite-groupoid/1";

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema_version {0:?}, expected {SCHEMA_VERSION:?}")]
    SchemaVersion(String),
    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),
    #[error("{field} refers to unknown label {label:?}")]
    UnknownLabel { field: &'static str, label: String },
    #[error("{field} has no entry for {label:?}")]
    MissingEntry { field: &'static str, label: String },
    #[error("comp lists ({0:?}, {1:?}) twice with different results")]
    ConflictingComposite(String, String),
    #[error("coefficient {0} does not fit the integer encoding")]
    Overflow(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidDocument {
    pub schema_version: String,
    pub elements: Vec<String>,
    pub units: Vec<String>,
    pub src: BTreeMap<String, String>,
    pub rng: BTreeMap<String, String>,
    pub comp: Vec<[String; 3]>,
    pub inv: BTreeMap<String, String>,
}

impl GroupoidDocument {
    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn encode(g: &FiniteGroupoid) -> Self {
        let label = |a: usize| g.label(a).to_string();
        let map = |table: &[usize]| -> BTreeMap<String, String> {
            g.elements().map(|a| (label(a), label(table[a]))).collect()
        };
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            elements: g.labels().to_vec(),
            units: g.units().iter().map(|&x| label(x)).collect(),
            src: map(g.src_table()),
            rng: map(g.rng_table()),
            comp: g
                .comp_triples()
                .into_iter()
                .map(|(a, b, c)| [label(a), label(b), label(c)])
                .collect(),
            inv: map(g.inv_table()),
        }
    }

    /// Decodes to a groupoid. Axioms are not checked here; see [`FiniteGroupoid::validate`].
    pub fn decode(&self) -> Result<FiniteGroupoid, DocumentError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(DocumentError::SchemaVersion(self.schema_version.clone()));
        }
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (i, l) in self.elements.iter().enumerate() {
            if index.insert(l.as_str(), i).is_some() {
                return Err(DocumentError::DuplicateLabel(l.clone()));
            }
        }
        let lookup = |field: &'static str, l: &str| {
            index
                .get(l)
                .copied()
                .ok_or_else(|| DocumentError::UnknownLabel {
                    field,
                    label: l.to_string(),
                })
        };
        let table = |field: &'static str, map: &BTreeMap<String, String>| {
            for k in map.keys() {
                lookup(field, k)?;
            }
            self.elements
                .iter()
                .map(|l| {
                    let v = map.get(l).ok_or_else(|| DocumentError::MissingEntry {
                        field,
                        label: l.clone(),
                    })?;
                    lookup(field, v)
                })
                .collect::<Result<Vec<usize>, DocumentError>>()
        };
        let units = self
            .units
            .iter()
            .map(|l| lookup("units", l))
            .collect::<Result<Vec<_>, _>>()?;
        let src = table("src", &self.src)?;
        let rng = table("rng", &self.rng)?;
        let inv = table("inv", &self.inv)?;
        let n = self.elements.len();
        let mut comp = vec![None; n * n];
        for [a, b, c] in &self.comp {
            let (ia, ib, ic) = (lookup("comp", a)?, lookup("comp", b)?, lookup("comp", c)?);
            match comp[ia * n + ib] {
                Some(prev) if prev != ic => {
                    return Err(DocumentError::ConflictingComposite(a.clone(), b.clone()))
                }
                _ => comp[ia * n + ib] = Some(ic),
            }
        }
        Ok(FiniteGroupoid::from_tables(
            self.elements.clone(),
            units,
            src,
            rng,
            comp,
            inv,
        ))
    }
}

/// `[re_num, re_den, im_num, im_den]`.
pub fn scalar_json(x: &GaussRat) -> Result<Value, DocumentError> {
    let p = x
        .to_parts()
        .ok_or_else(|| DocumentError::Overflow(x.to_string()))?;
    Ok(json!(p))
}

pub fn scalar_from_json(v: &Value) -> Option<GaussRat> {
    let parts: [i64; 4] = serde_json::from_value(v.clone()).ok()?;
    if parts[1] == 0 || parts[3] == 0 {
        return None;
    }
    Some(GaussRat::from_parts(parts[0], parts[1], parts[2], parts[3]))
}

/// Sparse `{label: scalar}` map of the nonzero coefficients.
pub fn algebra_element_json(f: &AlgebraElement) -> Result<Value, DocumentError> {
    let mut map = serde_json::Map::new();
    for (a, c) in f.coeffs().iter().enumerate() {
        if !num_traits::Zero::is_zero(c) {
            map.insert(f.host().label(a).to_string(), scalar_json(c)?);
        }
    }
    Ok(Value::Object(map))
}

/// Row-major basis of a subspace of `ℂG`, each row dense in the scalar encoding.
pub fn subspace_json(space: &Subspace) -> Result<Value, DocumentError> {
    let rows = space
        .dense_rows()
        .iter()
        .map(|r| r.iter().map(scalar_json).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(json!(rows))
}

pub fn character_json(unit_label: &str, chi: &Character) -> Value {
    json!({ "unit": unit_label, "factor_residues": chi.factor_residues() })
}

pub fn dual_bundle_json(g: &FiniteGroupoid, dual: &DualBundle) -> Value {
    let fibers: Vec<Value> = dual
        .fibers
        .iter()
        .map(|f| {
            let unit = g.label(f.unit);
            json!({
                "unit": unit,
                "order": f.group.order(),
                "exponent": f.group.exponent(),
                "invariant_factors": f.decomposition.factors,
                "generators": f.decomposition.generators.iter().map(|&h| g.label(f.arrows[h])).collect::<Vec<_>>(),
                "characters": f.characters.iter().map(|c| character_json(unit, c)).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "size": dual.len(), "fibers": fibers })
}

pub fn quotient_json(host: &FiniteGroupoid, q: &QuotientResult) -> Value {
    let class_map: BTreeMap<&str, &str> = host
        .elements()
        .map(|a| (host.label(a), q.quotient.label(q.class_map[a])))
        .collect();
    json!({
        "quotient": GroupoidDocument::encode(&q.quotient),
        "class_map": class_map,
    })
}

/// A functional as `{unit, factor_residues, values}`; each value is `[k, n]` for
/// `exp(2πi k/n)`, and zero values are omitted.
pub fn functional_json(g: &FiniteGroupoid, phi: &CharacterFunctional) -> Value {
    let values: BTreeMap<&str, [u64; 2]> = g
        .elements()
        .filter_map(|a| phi.value(a).map(|v| (g.label(a), [v.k, v.n])))
        .collect();
    json!({
        "unit": g.label(phi.point),
        "factor_residues": phi.character.factor_residues(),
        "values": values,
    })
}

/// Row-major Gelfand matrix; entries `[k, n]` or `null` for zero.
pub fn gelfand_json(g: &FiniteGroupoid, m: &GelfandMatrix) -> Value {
    let rows: Vec<Value> = m
        .rows
        .iter()
        .map(|(x, chi)| character_json(g.label(*x), chi))
        .collect();
    let entries: Vec<Vec<Option<[u64; 2]>>> = m
        .entries
        .iter()
        .map(|r| r.iter().map(|v| v.map(|v| [v.k, v.n])).collect())
        .collect();
    json!({ "rows": rows, "columns": g.labels(), "entries": entries })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::generators::{klein_cross, s3_a3_bundle};

    #[test]
    fn round_trip_named() {
        for g in [klein_cross(), s3_a3_bundle(), FiniteGroupoid::empty()] {
            let doc = GroupoidDocument::encode(&g);
            let text = doc.to_json_pretty();
            let back = GroupoidDocument::from_json(&text)
                .unwrap()
                .decode()
                .unwrap();
            assert_eq!(back, g);
        }
    }

    #[test]
    fn strict_fields() {
        let g = klein_cross();
        let mut v = serde_json::to_value(GroupoidDocument::encode(&g)).unwrap();
        v["extra"] = json!(1);
        assert!(matches!(
            GroupoidDocument::from_json(&v.to_string()),
            Err(DocumentError::Json(_))
        ));
    }

    #[test]
    fn decode_errors() {
        let g = s3_a3_bundle();
        let mut doc = GroupoidDocument::encode(&g);
        doc.schema_version = "v0".into();
        assert!(matches!(doc.decode(), Err(DocumentError::SchemaVersion(_))));

        let mut doc = GroupoidDocument::encode(&g);
        doc.elements.push(doc.elements[0].clone());
        assert!(matches!(
            doc.decode(),
            Err(DocumentError::DuplicateLabel(_))
        ));

        let mut doc = GroupoidDocument::encode(&g);
        doc.inv.insert("(e,p)".into(), "nope".into());
        assert!(matches!(
            doc.decode(),
            Err(DocumentError::UnknownLabel { field: "inv", .. })
        ));

        let mut doc = GroupoidDocument::encode(&g);
        doc.src.remove("(s,p)");
        assert!(matches!(
            doc.decode(),
            Err(DocumentError::MissingEntry { field: "src", .. })
        ));

        let mut doc = GroupoidDocument::encode(&g);
        let [a, b, _] = doc.comp[0].clone();
        doc.comp.push([a, b, "(s,q)".into()]);
        assert!(matches!(
            doc.decode(),
            Err(DocumentError::ConflictingComposite(..))
        ));
    }

    #[test]
    fn scalar_encoding() {
        let x = GaussRat::from_parts(-3, 4, 5, 6);
        assert_eq!(scalar_json(&x).unwrap(), json!([-3, 4, 5, 6]));
        assert_eq!(scalar_from_json(&json!([-3, 4, 5, 6])), Some(x));
        assert_eq!(scalar_from_json(&json!([1, 0, 0, 1])), None);
        let g = Arc::new(klein_cross());
        let d = AlgebraElement::delta(g.clone(), 3).scale(&GaussRat::i());
        assert_eq!(
            algebra_element_json(&d).unwrap(),
            json!({ g.label(3): [0, 1, 1, 1] })
        );
    }
}
