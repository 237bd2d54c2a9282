//! The four subcommands as library functions returning report bodies.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Value};
use witnesskit::bell::bell_optimize;
use witnesskit::criteria::{pt_min_eigenvalue, run_criteria, Criterion};
use witnesskit::multiparty::{certify_nondistillable, cut_report, range_check};
use witnesskit::witness::{
    evaluate, indecomposable_witness, kernel_seed, low_dim_optimal_witness, pauli_decompose, pure_state_witness,
    robustness_radius, IndecomposableOptions, Partition, SearchOptions, Witness, WitnessKind,
};
use witnesskit::{Bipartition, DensityMatrix, Real};

use crate::error::{CliError, CliResult};
use crate::statefile::{matrix_entries, Loaded, StateFile, SCHEMA};

/// Seed and restart count shared by every search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunOptions {
    pub seed: u64,
    pub restarts: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { seed: 0, restarts: 20 }
    }
}

impl RunOptions {
    fn search(&self) -> SearchOptions {
        SearchOptions::default().with_seed(self.seed).with_restarts(self.restarts)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub generated_unix: u64,
    /// Everything that depends on the input and flags only.
    pub body: Value,
}

impl Report {
    pub fn new(body: Value) -> Self {
        let generated_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Self { schema: SCHEMA, generated_unix, body }
    }

    pub fn to_pretty(&self) -> String {
        serde_json::to_string_pretty(&serde_json::to_value(self).expect("report serialises")).expect("serialises")
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serialisable")
}

fn body(command: &str, input: &StateFile, settings: Value, results: Value) -> Value {
    json!({
        "tool": { "name": "witnesskit", "version": env!("CARGO_PKG_VERSION") },
        "command": command,
        "input": {
            "digest": input.digest(),
            "name": input.name,
            "dims": input.dims,
            "parameters": input.parameters,
        },
        "settings": settings,
        "tolerances": to_value(&f64::tolerances()),
        "results": results,
    })
}

/// Parses `ppt,reduction,entropy,majorization,rank[,range]`.
pub fn parse_criteria(list: &str) -> CliResult<Vec<Criterion>> {
    let mut out: Vec<Criterion> = Vec::new();
    for item in list.split(',').filter(|s| !s.trim().is_empty()) {
        let c = Criterion::from_str(item).map_err(|e| CliError::Usage(e.to_string()))?;
        if !out.contains(&c) {
            out.push(c);
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("empty criteria list".into()));
    }
    Ok(out)
}

fn parse_cut(label: &str, n_parties: usize) -> CliResult<Bipartition> {
    Bipartition::parse(label, n_parties).map_err(|e| CliError::Usage(e.to_string()))
}

fn need_parties(rho: &DensityMatrix<f64>) -> CliResult<()> {
    if rho.n_parties() < 2 {
        return Err(CliError::NotApplicable("entanglement analysis needs at least 2 parties".into()));
    }
    Ok(())
}

pub fn analyze(input: &StateFile, cut: Option<&str>, criteria: Option<&[Criterion]>, opts: &RunOptions) -> CliResult<Value> {
    let loaded = input.load()?;
    let rho = loaded.density();
    need_parties(&rho)?;
    let k = rho.n_parties();
    let which: Vec<Criterion> = match criteria {
        Some(c) => c.to_vec(),
        None if k >= 3 && cut.is_none() => {
            let mut v = Criterion::BIPARTITE.to_vec();
            v.push(Criterion::Range);
            v
        }
        None => Criterion::BIPARTITE.to_vec(),
    };
    let settings = json!({
        "seed": opts.seed,
        "restarts": opts.restarts,
        "criteria": which,
        "cut": cut,
    });
    let results = if cut.is_some() || k == 2 {
        let cut = match cut {
            Some(label) => parse_cut(label, k)?,
            None => Bipartition::two_party(),
        };
        let verdicts = run_criteria(&rho, &cut, &which)?;
        let range = if which.contains(&Criterion::Range) { Some(range_check(&rho, &opts.search())?) } else { None };
        json!({
            "mode": "single-cut",
            "cut": cut.label(),
            "pt_min_eigenvalue": pt_min_eigenvalue(&rho, &cut)?,
            "verdicts": verdicts,
            "range": range,
        })
    } else {
        let report = cut_report(&rho, &which, &opts.search())?;
        let cert = certify_nondistillable(&rho, &opts.search())?;
        json!({
            "mode": "all-cuts",
            "cut_report": report,
            "nondistillability": cert,
        })
    };
    Ok(body("analyze", input, settings, results))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Pure,
    LowDim,
    Indecomposable,
}

impl FromStr for Method {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "pure" => Ok(Method::Pure),
            "lowdim" => Ok(Method::LowDim),
            "indecomposable" => Ok(Method::Indecomposable),
            other => Err(CliError::Usage(format!("unknown method `{other}`; use pure, lowdim or indecomposable"))),
        }
    }
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Pure => "pure",
            Method::LowDim => "lowdim",
            Method::Indecomposable => "indecomposable",
        }
    }
}

fn witness_json(w: &Witness<f64>, rho: &DensityMatrix<f64>) -> CliResult<Value> {
    let value = evaluate(w, rho)?;
    let radius = robustness_radius(w, rho).ok();
    let plan = if w.dims().is_qubits() { Some(pauli_decompose(w)?) } else { None };
    Ok(json!({
        "witness": {
            "matrix": matrix_entries(w.observable()),
            "dims": w.dims().as_slice(),
            "partition": w.partition().label(),
            "kind": w.kind(),
            "provenance": w.provenance(),
            "trace": w.trace(),
            "hs_norm": w.hs_norm(),
        },
        "value": value,
        "detection_threshold": 0.0,
        "robustness_radius": radius,
        "measurement_plan": plan,
    }))
}

/// Reads a seed witness: a matrix state file with `Tr H = 1`.
fn seed_from_file(file: &StateFile, rho: &DensityMatrix<f64>, partition: &Partition) -> CliResult<Witness<f64>> {
    let (h, dims) = file.raw_matrix()?;
    if &dims != rho.dims() {
        return Err(CliError::Usage(format!("seed witness on {dims} does not match the state on {}", rho.dims())));
    }
    let prov = witnesskit::witness::Provenance::method("seed-file");
    Ok(Witness::new(h, dims, partition.clone(), WitnessKind::Unclassified, prov)?)
}

pub fn witness(
    input: &StateFile,
    method: Method,
    cut: Option<&str>,
    seed_witness: Option<&StateFile>,
    opts: &RunOptions,
) -> CliResult<Value> {
    let loaded = input.load()?;
    let rho = loaded.density();
    need_parties(&rho)?;
    let k = rho.n_parties();
    let bipartition = match cut {
        Some(label) => parse_cut(label, k)?,
        None => Bipartition::new(k, [0]).map_err(CliError::from)?,
    };
    let settings = json!({
        "method": method.name(),
        "cut": cut,
        "seed": opts.seed,
        "restarts": opts.restarts,
        "seed_witness": seed_witness.map(StateFile::digest),
    });
    let mut results = match method {
        Method::Pure => {
            let Loaded::Pure(psi) = &loaded else {
                return Err(CliError::NotApplicable("the pure method needs a state vector input".into()));
            };
            let (w, mu) = pure_state_witness(psi, &bipartition)?;
            let mut r = witness_json(&w, &rho)?;
            r["mu_min"] = json!(mu);
            r
        }
        Method::LowDim => {
            let (w, mu) = low_dim_optimal_witness(&rho, &bipartition)?;
            let mut r = witness_json(&w, &rho)?;
            r["mu_min"] = json!(mu);
            r
        }
        Method::Indecomposable => {
            let partition = match cut {
                Some(_) => Partition::from_cut(&bipartition),
                None => Partition::finest(k)?,
            };
            let seed = match seed_witness {
                Some(f) => seed_from_file(f, &rho, &partition)?,
                None => kernel_seed(&rho, &partition)?,
            };
            let iopts = IndecomposableOptions { search: opts.search(), ..IndecomposableOptions::default() };
            let w = indecomposable_witness(&rho, &seed, &iopts)?;
            witness_json(&w, &rho)?
        }
    };
    results["method"] = json!(method.name());
    Ok(body("witness", input, settings, results))
}

pub fn bell(input: &StateFile, opts: &RunOptions) -> CliResult<Value> {
    let rho = input.load()?.density();
    need_parties(&rho)?;
    let r = bell_optimize(&rho, opts.restarts, opts.seed)?;
    let settings = json!({ "seed": opts.seed, "restarts": opts.restarts });
    let results = json!({
        "value": r.value,
        "value_kind": "lower bound on the maximum over directions",
        "directions": r.directions,
        "separable_bound": r.separable_bound,
        "margin_over_separable_bound": r.value - r.separable_bound,
        "quantum_bound": 2f64.powf((rho.n_parties() as f64 + 1.0) / 2.0),
    });
    Ok(body("bell", input, settings, results))
}

/// The state file for a catalog entry; flags left `None` use the defaults.
pub fn catalog(name: &str, params: &BTreeMap<String, f64>) -> CliResult<StateFile> {
    crate::statefile::catalog_state_file(name, params)
}
