//! Module files: the UTF-8 JSON input format describing a bigraded
//! presentation by generator shifts and a matrix of polynomial strings
//! (rows = generators, columns = relations).

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::grammar::{parse_polynomial, render_polynomial};
use crate::module::{BigradedPresentation, FreeModule, ModuleMap};
use crate::ring::{BiDegree, Polynomial, RingSig};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RingSpec {
    pub base_vars: usize,
    pub fiber_vars: usize,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub x_shift: i64,
    pub t_shift: i64,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct Metadata {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_hint: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ModuleFile {
    pub ring: RingSpec,
    pub generators: Vec<GeneratorSpec>,
    pub relations: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

impl ModuleFile {
    pub fn parse(text: &str) -> Result<ModuleFile> {
        serde_json::from_str(text).map_err(|e| Error::ModuleFile(e.to_string()))
    }

    pub fn sig(&self) -> RingSig {
        RingSig::new(self.ring.base_vars, self.ring.fiber_vars)
    }

    /// Build the presentation, with errors naming the offending matrix entry.
    pub fn to_presentation(&self) -> Result<BigradedPresentation> {
        let sig = self.sig();
        let shifts: Vec<BiDegree> = self
            .generators
            .iter()
            .map(|g| BiDegree::new(g.x_shift, g.t_shift))
            .collect();
        let generators = FreeModule::new(sig, shifts.clone());
        if self.relations.len() != self.generators.len() {
            return Err(Error::ModuleFile(format!(
                "relations matrix has {} rows but there are {} generators (rows index generators)",
                self.relations.len(),
                self.generators.len()
            )));
        }
        let cols = self.relations.first().map(|r| r.len()).unwrap_or(0);
        let mut matrix: Vec<Vec<Polynomial>> = Vec::with_capacity(self.relations.len());
        for (i, row) in self.relations.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::ModuleFile(format!(
                    "relations row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    cols
                )));
            }
            let mut parsed = Vec::with_capacity(cols);
            for (j, text) in row.iter().enumerate() {
                let p = parse_polynomial(text, sig)
                    .map_err(|e| Error::ModuleFile(format!("relations[{i}][{j}]: {e}")))?;
                p.require_bihomogeneous()
                    .map_err(|e| Error::ModuleFile(format!("relations[{i}][{j}]: {e}")))?;
                parsed.push(p);
            }
            matrix.push(parsed);
        }
        // Infer each column's source shift from its first nonzero entry.
        let mut src_shifts = Vec::with_capacity(cols);
        for j in 0..cols {
            let mut inferred = BiDegree::new(0, 0);
            for (i, row) in matrix.iter().enumerate() {
                if let Some(deg) = row[j].bidegree() {
                    inferred = deg + shifts[i];
                    break;
                }
            }
            src_shifts.push(inferred);
        }
        let source = FreeModule::new(sig, src_shifts);
        let map = ModuleMap::new(source, generators.clone(), matrix)?;
        BigradedPresentation::new(generators, map)
    }

    pub fn from_presentation(g: &BigradedPresentation, name: Option<String>) -> ModuleFile {
        let sig = g.sig();
        ModuleFile {
            ring: RingSpec { base_vars: sig.base_vars, fiber_vars: sig.fiber_vars },
            generators: g
                .generators()
                .shifts
                .iter()
                .map(|s| GeneratorSpec { x_shift: s.x, t_shift: s.t })
                .collect(),
            relations: g
                .relations()
                .matrix
                .iter()
                .map(|row| row.iter().map(render_polynomial).collect())
                .collect(),
            metadata: name.map(|n| Metadata { weight_hint: None, name: Some(n) }),
        }
    }

    /// Canonical serialization: whitespace-insensitive digest input.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.canonical_json().as_bytes());
        format!("sha256:{:x}", hasher.finalize())
    }
}

pub fn load_presentation(text: &str) -> Result<(ModuleFile, BigradedPresentation)> {
    let file = ModuleFile::parse(text)?;
    let g = file.to_presentation()?;
    Ok((file, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piece::dim;

    fn sample() -> &'static str {
        r#"{
            "ring": {"base_vars": 1, "fiber_vars": 1},
            "generators": [{"x_shift": 0, "t_shift": 0}],
            "relations": [["x1"]],
            "metadata": {"name": "S/(x1)"}
        }"#
    }

    #[test]
    fn parses_and_builds() {
        let (file, g) = load_presentation(sample()).unwrap();
        assert_eq!(file.metadata.unwrap().name.unwrap(), "S/(x1)");
        assert_eq!(dim(&g, BiDegree::new(0, 2)), 1);
        assert_eq!(dim(&g, BiDegree::new(1, 2)), 0);
    }

    #[test]
    fn digest_ignores_whitespace() {
        let (a, _) = load_presentation(sample()).unwrap();
        let compact = sample().replace([' ', '\n'], "");
        let (b, _) = load_presentation(&compact).unwrap();
        assert_eq!(a.digest(), b.digest());
        assert!(a.digest().starts_with("sha256:"));
    }

    #[test]
    fn parse_error_names_entry_and_column() {
        let bad = r#"{
            "ring": {"base_vars": 1, "fiber_vars": 1},
            "generators": [{"x_shift": 0, "t_shift": 0}],
            "relations": [["t1^"]]
        }"#;
        let err = load_presentation(bad).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("relations[0][0]"), "{msg}");
        assert!(msg.contains("column 4"), "{msg}");
    }

    #[test]
    fn inhomogeneous_entry_names_monomials() {
        let bad = r#"{
            "ring": {"base_vars": 1, "fiber_vars": 1},
            "generators": [{"x_shift": 0, "t_shift": 0}],
            "relations": [["x1 + t1^2"]]
        }"#;
        let err = load_presentation(bad).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("x1") && msg.contains("t1^2"), "{msg}");
    }

    #[test]
    fn column_with_inconsistent_degrees_rejected() {
        let bad = r#"{
            "ring": {"base_vars": 1, "fiber_vars": 2},
            "generators": [{"x_shift": 0, "t_shift": 0}, {"x_shift": 0, "t_shift": 1}],
            "relations": [["t1^2"], ["t1^2"]]
        }"#;
        let err = load_presentation(bad).unwrap_err();
        assert!(matches!(err, Error::WrongEntryDegree { .. }), "{err}");
    }

    #[test]
    fn roundtrip_through_presentation() {
        let (_, g) = load_presentation(sample()).unwrap();
        let file = ModuleFile::from_presentation(&g, None);
        let g2 = file.to_presentation().unwrap();
        assert_eq!(g, g2);
    }
}
