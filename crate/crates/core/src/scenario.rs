//! Scenario files: one JSON object per run.
//!
//! ```json
//! { "id": "set1", "alpha": 3, "beta": 0.8, "gamma": 0.01, "kappa_z": 0.9, "m": 2,
//!   "variant": "full", "grid": { "step": 0.001 }, "z_w": null,
//!   "classical": { "initial": { "tuned_radius": 2.0 }, "dt": 0.01, "steps": 20000, "betas": [-0.01] } }
//! ```
//!
//! Instead of the five numbers a scenario may name a `preset` (individual
//! keys then override it) or give a `physical` block in SI units.

use serde::Deserialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::channels::Variant;
use crate::classical::{tuned_initial_state, ClassicalModel, ClassicalState, ESCAPE_RADIUS};
use crate::error::{Error, Result};
use crate::fields::{derive_params, DimensionlessParams, FieldConfig};
use crate::pipeline::GridSpec;

const PRESET_FILES: [(&str, &str); 4] = [
    ("set1", include_str!("../presets/set1.json")),
    ("set2", include_str!("../presets/set2.json")),
    ("set1b", include_str!("../presets/set1b.json")),
    ("sweep", include_str!("../presets/sweep.json")),
];

/// Names of the embedded scenario files.
pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESET_FILES.iter().map(|(n, _)| *n)
}

/// Raw text of an embedded scenario file.
pub fn preset_text(name: &str) -> Option<&'static str> {
    PRESET_FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

const TOP_KEYS: [&str; 14] = [
    "id",
    "description",
    "preset",
    "alpha",
    "beta",
    "gamma",
    "kappa_z",
    "m",
    "physical",
    "variant",
    "grid",
    "z_w",
    "bound_states",
    "classical",
];

#[derive(Debug, Clone, PartialEq)]
pub enum InitialSpec {
    Explicit(ClassicalState),
    /// Circular orbit of the given radius, tuned at `beta`.
    Tuned { radius: f64, beta: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalSpec {
    pub initial: InitialSpec,
    pub dt: f64,
    pub steps: usize,
    pub betas: Vec<f64>,
    pub escape_radius: f64,
}

impl ClassicalSpec {
    pub fn initial_state(&self, model: &ClassicalModel) -> Result<ClassicalState> {
        match &self.initial {
            InitialSpec::Explicit(s) => Ok(*s),
            InitialSpec::Tuned { radius, beta } => tuned_initial_state(&model.with_beta(*beta), *radius),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub id: String,
    pub params: DimensionlessParams,
    pub variant: Variant,
    pub grid: GridSpec,
    pub z_w: Option<f64>,
    pub bound_states: usize,
    pub classical: Option<ClassicalSpec>,
    /// Hex SHA-256 of the exact input bytes.
    pub config_sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn number(obj: &Map<String, Value>, key: &str, path: &str) -> Result<Option<f64>> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v
            .as_f64()
            .filter(|x| x.is_finite())
            .map(Some)
            .ok_or_else(|| Error::config(path, "must be a finite number")),
    }
}

fn integer(obj: &Map<String, Value>, key: &str, path: &str) -> Result<Option<i64>> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v.as_i64().map(Some).ok_or_else(|| Error::config(path, "must be an integer")),
    }
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], prefix: &str) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::config(format!("{prefix}{k}"), "unknown key")),
        None => Ok(()),
    }
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::config(path, "must be a JSON object"))
}

fn parse_physical(v: &Value) -> Result<DimensionlessParams> {
    let obj = as_object(v, "physical")?;
    check_keys(obj, &["b_perp", "b_z", "omega", "kappa_z", "g", "mass", "m"], "physical.")?;
    let req = |k: &str| {
        let path = format!("physical.{k}");
        number(obj, k, &path)?.ok_or_else(|| Error::config(path, "missing required field"))
    };
    let cfg = FieldConfig::from_kappa(req("b_perp")?, req("b_z")?, req("omega")?, req("kappa_z")?, req("g")?, req("mass")?);
    let m = integer(obj, "m", "physical.m")?.unwrap_or(2);
    derive_params(&cfg, i32::try_from(m).map_err(|_| Error::config("physical.m", "out of range"))?)
}

fn parse_params(obj: &Map<String, Value>) -> Result<DimensionlessParams> {
    let base = match (obj.get("preset"), obj.get("physical")) {
        (Some(_), Some(_)) => return Err(Error::config("physical", "cannot be combined with `preset`")),
        (Some(p), None) => {
            let name = p.as_str().ok_or_else(|| Error::config("preset", "must be a string"))?;
            Some(DimensionlessParams::preset(name).ok_or_else(|| {
                Error::config("preset", format!("unknown preset `{name}`; known: {}", DimensionlessParams::PRESETS.join(", ")))
            })?)
        }
        (None, Some(phys)) => {
            if let Some(k) = ["alpha", "beta", "gamma", "kappa_z", "m"].iter().find(|k| obj.contains_key(**k)) {
                return Err(Error::config(*k, "cannot be combined with a `physical` block"));
            }
            Some(parse_physical(phys)?)
        }
        (None, None) => None,
    };
    let pick = |key: &str, fallback: Option<f64>| -> Result<f64> {
        number(obj, key, key)?.or(fallback).ok_or_else(|| Error::config(key, "missing required field"))
    };
    let m = match integer(obj, "m", "m")? {
        Some(m) => i32::try_from(m).map_err(|_| Error::config("m", "out of range"))?,
        None => base.map(|b| b.m).ok_or_else(|| Error::config("m", "missing required field"))?,
    };
    let p = DimensionlessParams {
        alpha: pick("alpha", base.map(|b| b.alpha))?,
        beta: pick("beta", base.map(|b| b.beta))?,
        gamma: pick("gamma", base.map(|b| b.gamma))?,
        kappa_z: pick("kappa_z", base.map(|b| b.kappa_z))?,
        m,
    };
    p.validate()?;
    Ok(p)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitInitial {
    position: [f64; 3],
    velocity: [f64; 3],
    spin_dir: [f64; 3],
    #[serde(default)]
    time: f64,
}

fn parse_classical(v: &Value, params: &DimensionlessParams) -> Result<ClassicalSpec> {
    let obj = as_object(v, "classical")?;
    check_keys(obj, &["initial", "dt", "steps", "betas", "escape_radius"], "classical.")?;
    let init = obj.get("initial").ok_or_else(|| Error::config("classical.initial", "missing required field"))?;
    let init_obj = as_object(init, "classical.initial")?;
    let initial = if init_obj.contains_key("tuned_radius") {
        check_keys(init_obj, &["tuned_radius", "tuned_beta"], "classical.initial.")?;
        let radius = number(init_obj, "tuned_radius", "classical.initial.tuned_radius")?
            .ok_or_else(|| Error::config("classical.initial.tuned_radius", "must be a number"))?;
        let beta = number(init_obj, "tuned_beta", "classical.initial.tuned_beta")?.unwrap_or(params.beta);
        InitialSpec::Tuned { radius, beta }
    } else {
        let e: ExplicitInitial = serde_json::from_value(init.clone())
            .map_err(|err| Error::config("classical.initial", err.to_string()))?;
        InitialSpec::Explicit(ClassicalState { position: e.position, velocity: e.velocity, spin_dir: e.spin_dir, time: e.time })
    };
    let dt = number(obj, "dt", "classical.dt")?.unwrap_or(1e-2);
    if dt <= 0.0 {
        return Err(Error::config("classical.dt", "must be positive"));
    }
    let steps = match integer(obj, "steps", "classical.steps")? {
        None => 20_000,
        Some(s) if s > 0 => s as usize,
        Some(_) => return Err(Error::config("classical.steps", "must be a positive integer")),
    };
    let betas = match obj.get("betas") {
        None => vec![params.beta],
        Some(Value::Array(a)) => a
            .iter()
            .enumerate()
            .map(|(i, b)| b.as_f64().ok_or_else(|| Error::config(format!("classical.betas[{i}]"), "must be a number")))
            .collect::<Result<Vec<_>>>()?,
        Some(_) => return Err(Error::config("classical.betas", "must be an array of numbers")),
    };
    if betas.is_empty() {
        return Err(Error::config("classical.betas", "must not be empty"));
    }
    let escape_radius = number(obj, "escape_radius", "classical.escape_radius")?.unwrap_or(ESCAPE_RADIUS);
    Ok(ClassicalSpec { initial, dt, steps, betas, escape_radius })
}

impl Scenario {
    /// Parses and validates a scenario. Syntax errors report line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| Error::config("<json>", format!("line {} column {}: {e}", e.line(), e.column())))?;
        let obj = as_object(&value, "<root>")?;
        check_keys(obj, &TOP_KEYS, "")?;

        let id = match obj.get("id") {
            Some(Value::String(s)) if !s.trim().is_empty() => s.clone(),
            Some(_) => return Err(Error::config("id", "must be a nonempty string")),
            None => return Err(Error::config("id", "missing required field")),
        };
        let params = parse_params(obj)?;
        let variant = match obj.get("variant") {
            None => Variant::default(),
            Some(Value::String(s)) => s.parse().map_err(|_| Error::config("variant", "must be `paraxial` or `full`"))?,
            Some(_) => return Err(Error::config("variant", "must be `paraxial` or `full`")),
        };
        let grid = match obj.get("grid") {
            None => GridSpec::default(),
            Some(g) => serde_json::from_value(g.clone()).map_err(|e| Error::config("grid", e.to_string()))?,
        };
        grid.points().map_err(|e| Error::config("grid", e.to_string()))?;
        let z_w = number(obj, "z_w", "z_w")?;
        if z_w.is_some_and(|z| z <= 0.0) {
            return Err(Error::config("z_w", "must be positive"));
        }
        let bound_states = match integer(obj, "bound_states", "bound_states")? {
            None => 3,
            Some(n) if n > 0 => n as usize,
            Some(_) => return Err(Error::config("bound_states", "must be a positive integer")),
        };
        let classical = obj.get("classical").map(|c| parse_classical(c, &params)).transpose()?;
        Ok(Scenario { id, params, variant, grid, z_w, bound_states, classical, config_sha256: sha256_hex(text.as_bytes()) })
    }

    /// One of the embedded scenario files.
    pub fn preset(name: &str) -> Result<Self> {
        let text = preset_text(name).ok_or_else(|| {
            Error::config("preset", format!("unknown preset `{name}`; known: {}", preset_names().collect::<Vec<_>>().join(", ")))
        })?;
        Scenario::from_json(text)
    }

    /// Reads a file, or an embedded preset when the path has the form `preset:<name>`.
    pub fn load(path: &str) -> Result<Self> {
        if let Some(name) = path.strip_prefix("preset:") {
            return Scenario::preset(name);
        }
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.to_string(), message: e.to_string() })?;
        Scenario::from_json(&text)
    }

    pub fn classical_model(&self) -> Result<ClassicalModel> {
        ClassicalModel::new(&self.params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field_of(text: &str) -> String {
        match Scenario::from_json(text).unwrap_err() {
            Error::Config { field, .. } => field,
            e => panic!("not a config error: {e}"),
        }
    }

    #[test]
    fn presets_parse() {
        for name in preset_names() {
            let s = Scenario::preset(name).unwrap();
            assert_eq!(s.id, name);
            assert_eq!(s.config_sha256.len(), 64);
        }
        let s = Scenario::preset("set2").unwrap();
        assert_eq!(s.params, DimensionlessParams::preset("set2").unwrap());
        let c = Scenario::preset("sweep").unwrap().classical.unwrap();
        assert_eq!(c.betas.len(), 5);
    }

    #[test]
    fn missing_alpha_named() {
        assert_eq!(field_of(r#"{"id":"x","beta":1,"gamma":0.01,"kappa_z":0.9,"m":2}"#), "alpha");
        assert_eq!(field_of(r#"{"beta":1}"#), "id");
        assert_eq!(field_of(r#"{"id":"x","preset":"set1","grid":{"stp":1}}"#), "grid");
        assert_eq!(field_of(r#"{"id":"x","preset":"set1","bogus":1}"#), "bogus");
        assert_eq!(field_of(r#"{"id":"x","preset":"set1","classical":{"dt":0.1}}"#), "classical.initial");
        assert_eq!(field_of(r#"{"id":"x","preset":"set1","gamma":-0.01}"#), "gamma");
    }

    #[test]
    fn syntax_error_has_line() {
        let e = Scenario::from_json("{\n  \"id\": \"x\",\n  oops\n}").unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
    }

    #[test]
    fn preset_override_and_physical() {
        let s = Scenario::from_json(r#"{"id":"b","preset":"set1","beta":0.01}"#).unwrap();
        assert_eq!(s.params, DimensionlessParams::preset("set1b").unwrap());
        let s = Scenario::from_json(
            r#"{"id":"p","physical":{"b_perp":1e-4,"b_z":0.0,"omega":1e6,"kappa_z":0.9,"g":1e8,"mass":1e-26}}"#,
        )
        .unwrap();
        assert!((s.params.gamma - 1e-2).abs() < 1e-15);
        assert_eq!(s.params.m, 2);
    }

    #[test]
    fn hash_tracks_bytes() {
        let a = Scenario::from_json(r#"{"id":"a","preset":"set1"}"#).unwrap();
        let b = Scenario::from_json(r#"{"id":"a", "preset":"set1"}"#).unwrap();
        assert_ne!(a.config_sha256, b.config_sha256);
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
