//! JSON interchange for family sets and single matrices.
//!
//! Complex numbers are `[re, im]` pairs. Floats are written in the shortest
//! representation that reads back to the same `f64`.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use museb_core::{BasisFamily, ComplexMatrix, FamilySet, C64};
use serde::{Deserialize, Serialize};

pub const FAMILY_FORMAT: &str = "museb-1";
pub const MATRIX_FORMAT: &str = "museb-matrix-1";

/// Rows of `[re, im]` pairs.
pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format_version {found:?}, expected {expected:?}")]
    Version { found: String, expected: &'static str },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] museb_core::Error),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub format_version: String,
    pub d: usize,
    pub dprime: usize,
    pub k: usize,
    pub bases: Vec<Vec<JsonMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub format_version: String,
    pub rows: usize,
    pub cols: usize,
    pub entries: JsonMatrix,
}

fn encode(m: &ComplexMatrix) -> JsonMatrix {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| [m.get(r, c).re, m.get(r, c).im]).collect())
        .collect()
}

fn decode(rows: usize, cols: usize, data: &JsonMatrix, what: &str) -> Result<ComplexMatrix, FormatError> {
    if data.len() != rows || data.iter().any(|row| row.len() != cols) {
        return Err(FormatError::Invalid(format!("{what} is not {rows}x{cols}")));
    }
    let entries = data.iter().flatten().map(|&[re, im]| C64::new(re, im)).collect();
    ComplexMatrix::new(rows, cols, entries).map_err(|e| FormatError::Invalid(format!("{what}: {e}")))
}

impl FamilyFile {
    pub fn from_set(set: &FamilySet) -> Result<Self, FormatError> {
        let (d, dprime, k) = set
            .dims()
            .ok_or_else(|| FormatError::Invalid("cannot write an empty family set".into()))?;
        Ok(Self {
            format_version: FAMILY_FORMAT.into(),
            d,
            dprime,
            k,
            bases: set.families().iter().map(|f| f.elements().iter().map(encode).collect()).collect(),
            labels: Some(set.families().iter().map(|f| f.label().to_string()).collect()),
        })
    }

    pub fn to_set(&self) -> Result<FamilySet, FormatError> {
        if self.format_version != FAMILY_FORMAT {
            return Err(FormatError::Version {
                found: self.format_version.clone(),
                expected: FAMILY_FORMAT,
            });
        }
        if self.d == 0 || self.dprime == 0 {
            return Err(FormatError::Invalid("dimensions must be positive".into()));
        }
        if self.bases.is_empty() {
            return Err(FormatError::Invalid("no bases".into()));
        }
        if let Some(labels) = &self.labels {
            if labels.len() != self.bases.len() {
                return Err(FormatError::Invalid(format!(
                    "{} labels for {} bases",
                    labels.len(),
                    self.bases.len()
                )));
            }
        }
        let n = self.d * self.dprime;
        let mut families = Vec::with_capacity(self.bases.len());
        for (b, basis) in self.bases.iter().enumerate() {
            if basis.len() != n {
                return Err(FormatError::Invalid(format!("basis {b} has {} matrices, expected {n}", basis.len())));
            }
            let elements = basis
                .iter()
                .enumerate()
                .map(|(i, m)| decode(self.d, self.dprime, m, &format!("basis {b} element {i}")))
                .collect::<Result<Vec<_>, _>>()?;
            let label = self
                .labels
                .as_ref()
                .map(|l| l[b].clone())
                .unwrap_or_else(|| format!("basis{b}"));
            families.push(BasisFamily::new(self.d, self.dprime, self.k, elements, label)?);
        }
        Ok(FamilySet::new(families)?)
    }
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            format_version: MATRIX_FORMAT.into(),
            rows: m.rows(),
            cols: m.cols(),
            entries: encode(m),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, FormatError> {
        if self.format_version != MATRIX_FORMAT {
            return Err(FormatError::Version {
                found: self.format_version.clone(),
                expected: MATRIX_FORMAT,
            });
        }
        if self.rows == 0 || self.cols == 0 {
            return Err(FormatError::Invalid("dimensions must be positive".into()));
        }
        decode(self.rows, self.cols, &self.entries, "matrix")
    }
}

fn read_text(path: &Path) -> Result<String, FormatError> {
    let mut s = String::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_string(&mut s))
        .map_err(|source| FormatError::Io {
            path: path.display().to_string(),
            source,
        })?;
    Ok(s)
}

pub fn parse_family_set(text: &str) -> Result<FamilySet, FormatError> {
    serde_json::from_str::<FamilyFile>(text)?.to_set()
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix, FormatError> {
    serde_json::from_str::<MatrixFile>(text)?.to_matrix()
}

pub fn read_family_set(path: &Path) -> Result<FamilySet, FormatError> {
    parse_family_set(&read_text(path)?)
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, FormatError> {
    parse_matrix(&read_text(path)?)
}

pub fn family_set_to_json(set: &FamilySet) -> Result<String, FormatError> {
    Ok(serde_json::to_string(&FamilyFile::from_set(set)?)?)
}

pub fn matrix_to_json(m: &ComplexMatrix) -> Result<String, FormatError> {
    Ok(serde_json::to_string(&MatrixFile::from_matrix(m))?)
}

pub fn write_json(w: &mut dyn Write, json: &str) -> std::io::Result<()> {
    w.write_all(json.as_bytes())?;
    w.write_all(b"\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use museb_core::construct::{catalog, mumeb_qubit, weyl_meb};

    fn max_diff(a: &FamilySet, b: &FamilySet) -> f64 {
        let mut worst = 0.0f64;
        for (f, g) in a.families().iter().zip(b.families()) {
            for (x, y) in f.elements().iter().zip(g.elements()) {
                worst = worst.max(x.max_abs_diff(y).unwrap());
            }
        }
        worst
    }

    #[test]
    fn family_round_trip_is_exact() {
        for set in [catalog::r_set(), catalog::s_set(), mumeb_qubit(), FamilySet::new(vec![weyl_meb(2, 5).unwrap()]).unwrap()] {
            let back = parse_family_set(&family_set_to_json(&set).unwrap()).unwrap();
            assert_eq!(back.dims(), set.dims());
            assert_eq!(back.witness_count(), set.witness_count());
            assert_eq!(max_diff(&set, &back), 0.0);
            assert_eq!(back.families()[0].label(), set.families()[0].label());
        }
    }

    #[test]
    fn matrix_round_trip_is_exact() {
        let u = catalog::u();
        assert_eq!(parse_matrix(&matrix_to_json(&u).unwrap()).unwrap(), u);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        let good: FamilyFile = serde_json::from_str(&family_set_to_json(&catalog::r_set()).unwrap()).unwrap();

        let mut f = good.clone();
        f.bases[1].pop();
        assert!(f.to_set().is_err());

        let mut f = good.clone();
        f.bases[0][3][1].pop();
        assert!(f.to_set().is_err());

        let mut f = good.clone();
        f.k = 3;
        assert!(f.to_set().is_err());

        let mut f = good.clone();
        f.format_version = "museb-0".into();
        assert!(matches!(f.to_set(), Err(FormatError::Version { .. })));

        let mut f = good.clone();
        f.labels = Some(vec!["only one".into()]);
        assert!(f.to_set().is_err());

        let mut f = good;
        f.bases.clear();
        assert!(f.to_set().is_err());

        assert!(parse_family_set("{\"format_version\": \"museb-1\"").is_err());
        assert!(parse_matrix("{\"format_version\":\"museb-matrix-1\",\"rows\":1,\"cols\":1,\"entries\":[[[1.0]]]}").is_err());
    }

    #[test]
    fn labels_are_optional() {
        let mut f: FamilyFile = serde_json::from_str(&family_set_to_json(&catalog::r_set()).unwrap()).unwrap();
        f.labels = None;
        let json = serde_json::to_string(&f).unwrap();
        assert!(!json.contains("labels"));
        let set = parse_family_set(&json).unwrap();
        assert_eq!(set.families()[1].label(), "basis1");
    }
}
