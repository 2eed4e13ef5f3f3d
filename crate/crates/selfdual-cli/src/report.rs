//! Persisted spectrum artifacts and human-readable rendering.

use std::path::Path;

use anyhow::{Context, Result};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use selfdual::hecke::{HeckeMatrix, Spectrum};
use selfdual::types::TypeFamily;
use selfdual::wenum::{decode_vector, SparseWE};
use selfdual::ClassDatabase;

#[derive(Serialize, Deserialize)]
pub struct EigenRecord {
    /// Filtration indices sharing this eigenvalue (singleton normally).
    pub ms: Vec<usize>,
    /// Exact eigenvalue as a rational string.
    pub nu: String,
    pub dim: usize,
    /// Exact kernel basis, rational strings, vectors in the class basis.
    pub basis: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
pub struct DepthK {
    pub k: usize,
    pub entries: Vec<u64>,
    /// Coefficients c_i with T_k = sum c_i T^i, when an exact relation
    /// exists (reported, never asserted).
    pub polynomial_in_t: Option<Vec<String>>,
}

/// The spectrum artifact: everything the summary tables need, exact.
#[derive(Serialize, Deserialize)]
pub struct SpectrumFile {
    pub schema_version: u32,
    pub tool_version: String,
    pub family: String,
    pub length: usize,
    pub class_count: usize,
    /// Matrix of the depth-1 operator, row-major on the class basis.
    pub operator: Vec<u64>,
    pub eigenspaces: Vec<EigenRecord>,
    /// dim of the eigenspace for each filtration index m = 0.. (trailing
    /// zeros trimmed).
    pub y_dims: Vec<usize>,
    pub merged_eigenvalues: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth_k: Option<DepthK>,
}

impl SpectrumFile {
    pub fn new(
        db: &ClassDatabase,
        t: &HeckeMatrix,
        spec: &Spectrum,
        _fam: &dyn TypeFamily,
    ) -> Result<SpectrumFile> {
        let eigenspaces = spec
            .spaces
            .iter()
            .map(|s| EigenRecord {
                ms: s.ms.clone(),
                nu: s.nu.to_string(),
                dim: s.dim,
                basis: s
                    .basis
                    .iter()
                    .map(|v| v.iter().map(BigRational::to_string).collect())
                    .collect(),
            })
            .collect();
        Ok(SpectrumFile {
            schema_version: selfdual::SCHEMA_VERSION,
            tool_version: selfdual::TOOL_VERSION.into(),
            family: db.family.clone(),
            length: db.length,
            class_count: db.class_count(),
            operator: t.entries.clone(),
            eigenspaces,
            y_dims: spec.y_dims_trimmed()?,
            merged_eigenvalues: spec.merged,
            depth_k: None,
        })
    }

    pub fn set_depth_k(&mut self, k: usize, tk: &HeckeMatrix, rel: Option<Vec<BigRational>>) {
        self.depth_k = Some(DepthK {
            k,
            entries: tk.entries.clone(),
            polynomial_in_t: rel.map(|cs| cs.iter().map(BigRational::to_string).collect()),
        });
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<SpectrumFile> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Human-readable polynomial for small genus: variables are subscripted by
/// the vectors over GF(q).
pub fn render_enumerator(we: &SparseWE, q: u8) -> String {
    let mut parts = Vec::new();
    for (mono, &coeff) in &we.terms {
        let mut term = String::new();
        if coeff != 1 || mono.exps.is_empty() {
            term.push_str(&coeff.to_string());
        }
        for &(idx, e) in &mono.exps {
            let digits: Vec<String> =
                decode_vector(idx, mono.m, q).iter().map(|d| d.to_string()).collect();
            term.push_str(&format!("x{}", digits.join("")));
            if e > 1 {
                term.push_str(&format!("^{e}"));
            }
        }
        parts.push(term);
    }
    parts.join(" + ")
}
