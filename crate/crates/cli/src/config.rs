use std::path::{Path, PathBuf};

use entpath_core::harness::{ConjectureConfig, MeasureName, TargetSpec};
use entpath_core::paths::DEFAULT_PATH_CAP;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::args::{GlobalArgs, MeasureArg};
use crate::error::CliError;

/// Reads a JSON config; errors name the offending field path. A
/// `manifest.json` from an earlier run is accepted in place of a config
/// as long as it was written by the same subcommand.
pub fn load<T: DeserializeOwned>(path: &Path, subcommand: &str) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let field_error = |at: String, msg: String| CliError::Config(format!("{}: {at}: {msg}", path.display()));
    if let Ok(serde_json::Value::Object(mut m)) = serde_json::from_str::<serde_json::Value>(&text) {
        if m.len() == 3 && m.contains_key("version") && m.contains_key("subcommand") {
            if let Some(config) = m.remove("config") {
                let written_by = m["subcommand"].as_str().unwrap_or_default();
                if written_by != subcommand {
                    return Err(field_error(
                        "subcommand".into(),
                        format!("manifest is for {written_by:?}, not {subcommand:?}"),
                    ));
                }
                return serde_path_to_error::deserialize(config)
                    .map_err(|e| field_error(format!("config.{}", e.path()), e.inner().to_string()));
            }
        }
    }
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| field_error(e.path().to_string(), e.inner().to_string()))
}

/// Directory that relative paths inside a config resolve against.
pub fn base_dir(args: &GlobalArgs) -> PathBuf {
    args.config
        .as_deref()
        .and_then(Path::parent)
        .map(Path::to_path_buf)
        .unwrap_or_default()
}

/// Absolute form of `p` taken relative to `base`, so a written config can be
/// re-run from any directory.
pub fn resolve_path(base: &Path, p: &Path) -> PathBuf {
    let joined = base.join(p);
    std::path::absolute(&joined).unwrap_or(joined)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomCircuits {
    pub n: usize,
    pub gates: usize,
    #[serde(default = "one")]
    pub count: usize,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    /// Circuit files in the circuit JSON format.
    #[serde(default)]
    pub circuits: Vec<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<RandomCircuits>,
    /// Initial basis configuration such as "010"; all zeros by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<String>,
    #[serde(default)]
    pub measure: MeasureName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cut: Option<u64>,
    #[serde(default)]
    pub seed: u64,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        Self {
            circuits: Vec::new(),
            random: Some(RandomCircuits { n: 3, gates: 4, count: 1 }),
            initial: None,
            measure: MeasureName::Geometric,
            cut: None,
            seed: 0,
        }
    }
}

fn default_cap() -> u64 {
    DEFAULT_PATH_CAP as u64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathsConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circuit: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<RandomCircuits>,
    /// Start configuration; all zeros by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<String>,
    /// End configurations to check; every configuration when empty.
    #[serde(default)]
    pub ends: Vec<String>,
    /// Maximum number of paths (4^R) that may be enumerated.
    #[serde(default = "default_cap")]
    pub cap: u64,
    #[serde(default)]
    pub seed: u64,
}

impl Default for PathsConfig {
    fn default() -> Self {
        Self {
            circuit: None,
            random: Some(RandomCircuits { n: 3, gates: 3, count: 1 }),
            start: None,
            ends: Vec::new(),
            cap: default_cap(),
            seed: 0,
        }
    }
}

fn default_variant() -> String {
    "not".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeutschConfig {
    #[serde(default = "default_variant")]
    pub variant: String,
}

impl Default for DeutschConfig {
    fn default() -> Self {
        Self {
            variant: default_variant(),
        }
    }
}

fn measure_name(m: MeasureArg) -> MeasureName {
    match m {
        MeasureArg::Geometric => MeasureName::Geometric,
        MeasureArg::Vonneumann => MeasureName::Vonneumann,
    }
}

/// Applies `--measure` and `--cut`. A new measure without a cut
/// drops the configured cut.
fn override_measure(args: &GlobalArgs, measure: &mut MeasureName, cut: &mut Option<u64>) {
    if let Some(m) = args.measure {
        *measure = measure_name(m);
        if args.cut.is_none() {
            *cut = None;
        }
    }
    if args.cut.is_some() {
        *cut = args.cut;
    }
}

pub fn resolve_simulate(args: &GlobalArgs) -> Result<SimulateConfig, CliError> {
    let mut c: SimulateConfig = match &args.config {
        Some(p) => load(p, "simulate")?,
        None => SimulateConfig::default(),
    };
    if let Some(s) = args.seed {
        c.seed = s;
    }
    override_measure(args, &mut c.measure, &mut c.cut);
    let base = base_dir(args);
    c.circuits = c.circuits.iter().map(|p| resolve_path(&base, p)).collect();
    if c.circuits.is_empty() && c.random.is_none() {
        return Err(CliError::Config("circuits: give circuit files or a random section".into()));
    }
    Ok(c)
}

pub fn resolve_paths(args: &GlobalArgs) -> Result<PathsConfig, CliError> {
    let mut c: PathsConfig = match &args.config {
        Some(p) => load(p, "paths")?,
        None => PathsConfig::default(),
    };
    if let Some(s) = args.seed {
        c.seed = s;
    }
    let base = base_dir(args);
    c.circuit = c.circuit.map(|p| resolve_path(&base, &p));
    if c.circuit.is_some() == c.random.is_some() {
        return Err(CliError::Config("circuit: give exactly one of circuit or random".into()));
    }
    Ok(c)
}

pub fn resolve_deutsch(args: &GlobalArgs, variant: Option<&str>) -> Result<DeutschConfig, CliError> {
    let mut c: DeutschConfig = match &args.config {
        Some(p) => load(p, "deutsch")?,
        None => DeutschConfig::default(),
    };
    if let Some(v) = variant {
        c.variant = v.to_string();
    }
    Ok(c)
}

pub fn resolve_conjecture(args: &GlobalArgs) -> Result<ConjectureConfig, CliError> {
    let Some(path) = &args.config else {
        return Err(CliError::Config("conjecture requires --config".into()));
    };
    let mut c: ConjectureConfig = load(path, "conjecture")?;
    if let Some(s) = args.seed {
        c.seed = s;
    }
    override_measure(args, &mut c.measure, &mut c.cut);
    if let TargetSpec::Files { files } = &mut c.targets {
        let base = base_dir(args);
        for f in files.iter_mut() {
            *f = resolve_path(&base, f);
        }
    }
    c.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(c)
}
