//! JSON state files and `catalog:` pseudo-paths.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use witnesskit::catalog::{self, StateData};
use witnesskit::{CMatrix, CVector, DensityMatrix, Dims, PureState};

use crate::error::{CliError, CliResult};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub re: f64,
    pub im: f64,
}

impl From<Complex<f64>> for Entry {
    fn from(z: Complex<f64>) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// `{"dims": [..], "matrix": [[{re, im}, ..], ..]}` or the same with
/// `"vector"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<Entry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector: Option<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub parameters: BTreeMap<String, f64>,
}

fn default_schema() -> u32 {
    SCHEMA
}

/// A validated state.
#[derive(Debug, Clone)]
pub enum Loaded {
    Pure(PureState<f64>),
    Mixed(DensityMatrix<f64>),
}

impl Loaded {
    pub fn density(&self) -> DensityMatrix<f64> {
        match self {
            Loaded::Pure(p) => p.to_density(),
            Loaded::Mixed(m) => m.clone(),
        }
    }

    pub fn dims(&self) -> &Dims {
        match self {
            Loaded::Pure(p) => p.dims(),
            Loaded::Mixed(m) => m.dims(),
        }
    }
}

pub fn matrix_entries(m: &CMatrix<f64>) -> Vec<Vec<Entry>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| m[(r, c)].into()).collect()).collect()
}

impl StateFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        let f: StateFile = serde_json::from_str(text).map_err(|e| CliError::Parse(format!("state file: {e}")))?;
        if f.schema != SCHEMA {
            return Err(CliError::Parse(format!("schema: unsupported version {}, expected {SCHEMA}", f.schema)));
        }
        match (&f.matrix, &f.vector) {
            (Some(_), Some(_)) => Err(CliError::Parse("state file has both `matrix` and `vector`".into())),
            (None, None) => Err(CliError::Parse("state file needs `matrix` or `vector`".into())),
            _ => Ok(f),
        }
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn from_pure(psi: &PureState<f64>) -> Self {
        Self {
            schema: SCHEMA,
            dims: psi.dims().as_slice().to_vec(),
            matrix: None,
            vector: Some(psi.amplitudes().iter().map(|&z| z.into()).collect()),
            name: None,
            parameters: BTreeMap::new(),
        }
    }

    pub fn from_density(rho: &DensityMatrix<f64>) -> Self {
        Self {
            schema: SCHEMA,
            dims: rho.dims().as_slice().to_vec(),
            matrix: Some(matrix_entries(rho.matrix())),
            vector: None,
            name: None,
            parameters: BTreeMap::new(),
        }
    }

    fn layout(&self) -> CliResult<Dims> {
        Dims::new(self.dims.clone()).map_err(|e| CliError::Parse(format!("dims: {e}")))
    }

    /// The matrix as given, checked for shape only.
    pub fn raw_matrix(&self) -> CliResult<(CMatrix<f64>, Dims)> {
        let dims = self.layout()?;
        let d = dims.total();
        let rows = self.matrix.as_ref().ok_or_else(|| CliError::Parse("expected a `matrix` field".into()))?;
        if rows.len() != d {
            return Err(CliError::Parse(format!("matrix: expected {d} rows for dims {:?}, found {}", self.dims, rows.len())));
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(CliError::Parse(format!("matrix[{r}]: expected {d} entries, found {}", row.len())));
            }
        }
        Ok((CMatrix::from_fn(d, d, |r, c| Complex::new(rows[r][c].re, rows[r][c].im)), dims))
    }

    /// Validates the state; shape problems are parse errors, physical ones
    /// (Hermiticity, positivity, trace, norm) are invariant violations.
    pub fn load(&self) -> CliResult<Loaded> {
        let dims = self.layout()?;
        if let Some(v) = &self.vector {
            let d = dims.total();
            if v.len() != d {
                return Err(CliError::Parse(format!("vector: expected {d} entries for dims {:?}, found {}", self.dims, v.len())));
            }
            let amp = CVector::from_iterator(d, v.iter().map(|e| Complex::new(e.re, e.im)));
            return Ok(Loaded::Pure(PureState::new(amp, dims)?));
        }
        let (m, dims) = self.raw_matrix()?;
        Ok(Loaded::Mixed(DensityMatrix::new(m, dims)?))
    }

    /// Sorted keys, shortest round-trip floats, no whitespace.
    pub fn canonical(&self) -> String {
        canonical_json(&serde_json::to_value(self).expect("state files serialise"))
    }

    /// SHA-256 of [`canonical`](Self::canonical), hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }

    pub fn to_pretty(&self) -> String {
        let v = serde_json::to_value(self).expect("state files serialise");
        serde_json::to_string_pretty(&v).expect("value serialises")
    }
}

/// `serde_json` maps are ordered by key, so this is already canonical.
pub fn canonical_json(v: &serde_json::Value) -> String {
    serde_json::to_string(v).expect("value serialises")
}

/// Resolves a catalog entry to the state file the `catalog` command emits.
pub fn catalog_state_file(name: &str, params: &BTreeMap<String, f64>) -> CliResult<StateFile> {
    let named = catalog::by_name::<f64>(name, params)?;
    let mut f = match &named.state {
        StateData::Pure(p) => StateFile::from_pure(p),
        StateData::Mixed(m) => StateFile::from_density(m),
    };
    f.name = Some(named.name);
    f.parameters = named.parameters;
    Ok(f)
}

/// Parses `catalog:NAME[:k=v,...]`.
pub fn parse_catalog_spec(spec: &str) -> CliResult<(String, BTreeMap<String, f64>)> {
    let rest = spec.strip_prefix("catalog:").ok_or_else(|| CliError::Usage(format!("`{spec}` is not a catalog path")))?;
    let (name, args) = rest.split_once(':').unwrap_or((rest, ""));
    let mut params = BTreeMap::new();
    for kv in args.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Parse(format!("catalog parameter `{kv}` is not of the form key=value")))?;
        let value: f64 = v.trim().parse().map_err(|_| CliError::Parse(format!("catalog parameter `{k}`: `{v}` is not a number")))?;
        params.insert(k.trim().to_string(), value);
    }
    Ok((name.to_string(), params))
}

/// A path or a `catalog:` pseudo-path.
pub fn read_input(spec: &str) -> CliResult<StateFile> {
    if spec.starts_with("catalog:") {
        let (name, params) = parse_catalog_spec(spec)?;
        catalog_state_file(&name, &params)
    } else {
        StateFile::read(Path::new(spec))
    }
}
