//! Persistent classification results.
//!
//! A [`ClassDatabase`] is the classifier's output: canonical class
//! representatives in discovery order, their automorphism group orders,
//! and the neighbor multiplicity records that define the k = 1 operator.
//! The JSON encoding is canonical (RREF generators, struct field order,
//! decimal strings for the wide integers), so identical runs produce
//! byte-identical files.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::canon::Fingerprint;
use crate::code::{Code, CodeRepr};
use crate::error::{Error, Result};
use crate::perm::factorial_u128;
use crate::types::{self, TypeFamily};

/// One equivalence class: the canonical representative and its metadata.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodeClass {
    /// Hex SHA-256 of the canonical generator matrix.
    pub fingerprint: String,
    #[serde(with = "u128_string")]
    pub aut_order: u128,
    pub generators: CodeRepr,
}

/// Neighbor multiplicity: the number of codes in the family that are
/// 1-neighbors of the source representative and equivalent to the target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborRecord {
    pub source: usize,
    pub target: usize,
    pub count: u64,
}

#[derive(Serialize, Deserialize)]
pub struct ClassDatabase {
    pub schema_version: u32,
    pub tool_version: String,
    /// Registry name of the family, e.g. "2eI" or "qH:q=4".
    pub family: String,
    pub length: usize,
    pub complete: bool,
    pub classes: Vec<CodeClass>,
    pub neighbors: Vec<NeighborRecord>,
}

impl ClassDatabase {
    pub fn family(&self) -> Result<Arc<dyn TypeFamily>> {
        types::lookup(&self.family)
    }

    /// Code dimension n = N/2.
    pub fn n(&self) -> usize {
        self.length / 2
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn code(&self, idx: usize) -> Result<Code> {
        Code::from_repr(&self.classes[idx].generators)
    }

    pub fn fingerprint(&self, idx: usize) -> Option<Fingerprint> {
        Fingerprint::from_hex(&self.classes[idx].fingerprint)
    }

    /// Total number of distinct codes in the family: sum of the orbit sizes
    /// N!/|Aut(C)| over the classes.
    pub fn mass(&self) -> u128 {
        let nf = factorial_u128(self.length);
        self.classes.iter().map(|c| nf / c.aut_order).sum()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<ClassDatabase> {
        let text = std::fs::read_to_string(path)?;
        let db: ClassDatabase = serde_json::from_str(&text)?;
        db.validate()?;
        Ok(db)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for class in &self.classes {
            if !seen.insert(&class.fingerprint) {
                return Err(Error::Invalid(format!(
                    "duplicate class fingerprint {}",
                    class.fingerprint
                )));
            }
            if class.aut_order == 0 {
                return Err(Error::Invalid("automorphism order must be positive".into()));
            }
            if factorial_u128(self.length) % class.aut_order != 0 {
                return Err(Error::Invalid(
                    "automorphism order must divide N!".into(),
                ));
            }
        }
        for rec in &self.neighbors {
            if rec.source >= self.classes.len() || rec.target >= self.classes.len() {
                return Err(Error::Invalid("neighbor record out of range".into()));
            }
        }
        Ok(())
    }
}

pub(crate) mod u128_string {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u128, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u128, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_form;

    #[test]
    fn roundtrip_through_json() {
        let fam = types::lookup("2eI").unwrap();
        let seed = fam.seed(4).unwrap();
        let cc = canonical_form(&seed);
        let db = ClassDatabase {
            schema_version: crate::SCHEMA_VERSION,
            tool_version: crate::TOOL_VERSION.into(),
            family: fam.name(),
            length: 4,
            complete: true,
            classes: vec![CodeClass {
                fingerprint: cc.fingerprint.to_hex(),
                aut_order: cc.aut_order,
                generators: cc.canon.to_repr(),
            }],
            neighbors: vec![NeighborRecord { source: 0, target: 0, count: 2 }],
        };
        let text = serde_json::to_string_pretty(&db).unwrap();
        let back: ClassDatabase = serde_json::from_str(&text).unwrap();
        back.validate().unwrap();
        assert_eq!(back.classes[0].aut_order, cc.aut_order);
        assert_eq!(back.code(0).unwrap(), cc.canon);
        assert_eq!(back.mass(), 24 / cc.aut_order);
    }
}
