//! Canonical JSON interchange formats for semigroups, semiautomata, and
//! Rees matrix data, plus content digests over the canonical serialization.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::construct::ReesMatrixSpec;
use crate::error::{Error, Result};
use crate::semigroup::FiniteSemigroup;
use crate::transform::{PartialTransformation, Semiautomaton};

/// `{"order": n, "table": [[...]], "labels": [...]?}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SemigroupJson {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl SemigroupJson {
    pub fn from_semigroup(s: &FiniteSemigroup) -> SemigroupJson {
        SemigroupJson {
            order: s.order(),
            table: s.rows(),
            labels: s.labels().map(|ls| ls.to_vec()),
        }
    }

    pub fn into_semigroup(self) -> Result<FiniteSemigroup> {
        if self.table.len() != self.order {
            return Err(Error::MalformedTable);
        }
        FiniteSemigroup::new(self.table, self.labels)
    }
}

/// `{"states": n, "alphabet": ["a", ...], "action": {"a": [image or null, ...]}}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AutomatonJson {
    pub states: usize,
    pub alphabet: Vec<String>,
    pub action: BTreeMap<String, Vec<Option<usize>>>,
}

impl AutomatonJson {
    pub fn from_automaton(a: &Semiautomaton) -> AutomatonJson {
        let action = a
            .alphabet()
            .iter()
            .enumerate()
            .map(|(i, name)| (name.clone(), a.action(i).to_options()))
            .collect();
        AutomatonJson {
            states: a.states(),
            alphabet: a.alphabet().to_vec(),
            action,
        }
    }

    pub fn into_automaton(self) -> Result<Semiautomaton> {
        let mut actions = Vec::with_capacity(self.alphabet.len());
        for name in &self.alphabet {
            let images = self
                .action
                .get(name)
                .ok_or_else(|| Error::Parse(format!("missing action for letter {name:?}")))?;
            actions.push(PartialTransformation::new(self.states, images)?);
        }
        Semiautomaton::new(self.states, self.alphabet, actions)
    }
}

/// `{"I": n, "Lambda": m, "group": <semigroup>, "P": [[0 | 1-based index]]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReesJson {
    #[serde(rename = "I")]
    pub i: usize,
    #[serde(rename = "Lambda")]
    pub lambda: usize,
    pub group: SemigroupJson,
    #[serde(rename = "P")]
    pub p: Vec<Vec<usize>>,
}

impl ReesJson {
    pub fn from_spec(spec: &ReesMatrixSpec) -> ReesJson {
        ReesJson {
            i: spec.i_size,
            lambda: spec.lambda_size,
            group: SemigroupJson::from_semigroup(&spec.group),
            p: spec
                .p
                .iter()
                .map(|row| row.iter().map(|e| e.map_or(0, |g| g + 1)).collect())
                .collect(),
        }
    }

    pub fn into_spec(self) -> Result<ReesMatrixSpec> {
        let group = self.group.into_semigroup()?;
        let p = self
            .p
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|e| if e == 0 { None } else { Some(e - 1) })
                    .collect()
            })
            .collect();
        ReesMatrixSpec::new(self.i, group, self.lambda, p)
    }
}

pub fn read_semigroup(path: &std::path::Path) -> Result<FiniteSemigroup> {
    let text = std::fs::read_to_string(path)?;
    let json: SemigroupJson =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{path:?}: {e}")))?;
    json.into_semigroup()
}

pub fn read_automaton(path: &std::path::Path) -> Result<Semiautomaton> {
    let text = std::fs::read_to_string(path)?;
    let json: AutomatonJson =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{path:?}: {e}")))?;
    json.into_automaton()
}

pub fn read_rees(path: &std::path::Path) -> Result<ReesMatrixSpec> {
    let text = std::fs::read_to_string(path)?;
    let json: ReesJson =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{path:?}: {e}")))?;
    json.into_spec()
}

pub fn write_json<T: Serialize>(path: &std::path::Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Hex SHA-256 of the canonical serialization of a serializable value.
pub fn digest<T: Serialize>(value: &T) -> String {
    let canon = serde_json::to_string(value).expect("serializable");
    let hash = Sha256::digest(canon.as_bytes());
    let mut out = String::with_capacity(64);
    for byte in hash {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn semigroup_round_trip() {
        let b2 = catalog::b2();
        let json = SemigroupJson::from_semigroup(&b2);
        let text = serde_json::to_string(&json).unwrap();
        let back: SemigroupJson = serde_json::from_str(&text).unwrap();
        let s = back.into_semigroup().unwrap();
        assert_eq!(s, b2);
    }

    #[test]
    fn automaton_round_trip() {
        let a = catalog::t4_base();
        let json = AutomatonJson::from_automaton(&a);
        let text = serde_json::to_string(&json).unwrap();
        let back: AutomatonJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.into_automaton().unwrap(), a);
    }

    #[test]
    fn rees_round_trip_uses_one_based_entries() {
        let spec = catalog::order49_rees();
        let json = ReesJson::from_spec(&spec);
        assert_eq!(json.p[0], vec![1, 1, 1, 1]);
        assert_eq!(json.p[1], vec![0, 2, 0, 0]);
        let text = serde_json::to_string(&json).unwrap();
        let back: ReesJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.into_spec().unwrap(), spec);
    }

    #[test]
    fn digests_are_stable() {
        let b2 = catalog::b2();
        let d1 = digest(&SemigroupJson::from_semigroup(&b2));
        let d2 = digest(&SemigroupJson::from_semigroup(&catalog::b2()));
        assert_eq!(d1, d2);
        assert_eq!(d1.len(), 64);
        let y = digest(&SemigroupJson::from_semigroup(&catalog::y()));
        assert_ne!(d1, y);
    }
}
