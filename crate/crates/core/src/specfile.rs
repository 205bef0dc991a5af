//! Tiling spec files: a name, a dimension and one or two Gram matrices with
//! rational entries written as `"p/q"` strings.
//!
//! ```toml
//! name = "hexagonal"
//! dim = 2
//! gram_construction = [["2", "1"], ["1", "2"]]
//! gram_ambient = [["1", "1/4"], ["1/4", "1"]]
//! notes = "A2 root lattice"
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactgeom::{parse_scalar, QVec, QuadraticForm};
use crate::lattice::Lattice;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TilingSpec {
    pub name: String,
    pub dim: usize,
    pub gram_construction: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram_ambient: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
}

fn parse_matrix(rows: &[Vec<String>], dim: usize) -> Result<QuadraticForm> {
    if rows.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: rows.len(),
        });
    }
    let gram: Vec<QVec> = rows
        .iter()
        .map(|r| r.iter().map(|x| parse_scalar(x)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    QuadraticForm::new(gram)
}

impl TilingSpec {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidInput(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec serializes")
    }

    pub fn construction_form(&self) -> Result<QuadraticForm> {
        parse_matrix(&self.gram_construction, self.dim)
    }

    pub fn ambient_form(&self) -> Result<Option<QuadraticForm>> {
        self.gram_ambient
            .as_ref()
            .map(|g| parse_matrix(g, self.dim))
            .transpose()
    }

    /// The Voronoi case, ignoring any ambient matrix.
    pub fn voronoi_lattice(&self) -> Result<Lattice> {
        Ok(Lattice::voronoi(self.construction_form()?))
    }

    /// Construction and ambient forms as given; the ambient matrix is
    /// required.
    pub fn skew_lattice(&self) -> Result<Lattice> {
        let ambient = self.ambient_form()?.ok_or_else(|| {
            Error::InvalidInput(format!("spec '{}' has no gram_ambient", self.name))
        })?;
        Lattice::new(self.construction_form()?, ambient)
    }
}

/// All `*.toml` spec files directly inside `dir`, sorted by file name.
pub fn load_dir(dir: &Path) -> Result<Vec<TilingSpec>> {
    let entries = std::fs::read_dir(dir)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    paths.sort();
    paths.iter().map(|p| TilingSpec::load(p)).collect()
}
