//! JSON configuration files.
//!
//! ```json
//! {"k": 2, "n": 1, "boundary": "plus", "spins": {"": 1, "1": -1, "2": 1, "3": 1}}
//! ```
//!
//! `boundary` is `"plus"`, `"minus"`, or an object assigning `1`/`-1` to every
//! vertex of `W_{n+1} ∪ W_{n+2}`. `spins` must assign every vertex of `V_n`.
//! Keys are reduced words; the root is the empty string. An optional
//! `manifest` field is carried along and otherwise ignored.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::configurations::{Boundary, Configuration};
use crate::error::{Error, Result};
use crate::model::Spin;
use crate::tree::{IndexedVolume, TreeParams, Vertex};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    k: usize,
    n: usize,
    boundary: RawBoundary,
    spins: BTreeMap<String, i64>,
    #[serde(default)]
    #[allow(dead_code)]
    manifest: Option<serde_json::Value>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawBoundary {
    Kind(String),
    Map(BTreeMap<String, i64>),
}

fn spin_map(raw: &BTreeMap<String, i64>, k: usize, what: &str) -> Result<BTreeMap<Vertex, Spin>> {
    raw.iter()
        .map(|(key, value)| {
            let v = Vertex::parse(key, k).map_err(|e| Error::InvalidConfig(format!("{what} key \"{key}\": {e}")))?;
            let s = Spin::from_value(*value)
                .map_err(|_| Error::InvalidConfig(format!("{what} value at \"{key}\" must be 1 or -1, got {value}")))?;
            Ok((v, s))
        })
        .collect()
}

/// Parse and validate a configuration file.
pub fn parse_config(text: &str) -> Result<Configuration> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| Error::Parse(format!("configuration file: {e}")))?;
    let params = TreeParams::new(raw.k, raw.n)?;
    if params.volume_size() > 1 << 24 {
        return Err(Error::InvalidConfig(format!("V_{} is too large for a configuration file", raw.n)));
    }
    let boundary = match raw.boundary {
        RawBoundary::Kind(s) if s == "plus" => Boundary::Plus,
        RawBoundary::Kind(s) if s == "minus" => Boundary::Minus,
        RawBoundary::Kind(s) => {
            return Err(Error::InvalidConfig(format!(
                "boundary must be \"plus\", \"minus\" or an object, got \"{s}\""
            )))
        }
        RawBoundary::Map(m) => Boundary::Explicit(spin_map(&m, raw.k, "boundary")?),
    };
    let volume = Arc::new(IndexedVolume::new(params));
    let assigned = spin_map(&raw.spins, raw.k, "spins")?;
    if let Some(v) = assigned.keys().find(|v| !volume.contains(v)) {
        return Err(Error::InvalidConfig(format!("spins key \"{v}\" lies outside V_{}", raw.n)));
    }
    let spins = volume
        .vertices()
        .iter()
        .map(|v| {
            assigned
                .get(v)
                .copied()
                .ok_or_else(|| Error::InvalidConfig(format!("spins has no value for vertex \"{v}\"")))
        })
        .collect::<Result<Vec<_>>>()?;
    Configuration::new(volume, spins, boundary)
}

struct OrderedSpins<'a>(Vec<(&'a Vertex, Spin)>);

impl Serialize for OrderedSpins<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (v, s) in &self.0 {
            map.serialize_entry(&v.to_string(), &s.value())?;
        }
        map.end()
    }
}

#[derive(Serialize)]
#[serde(untagged)]
enum BoundaryOut<'a> {
    Kind(&'static str),
    Map(OrderedSpins<'a>),
}

#[derive(Serialize)]
struct ConfigOut<'a> {
    k: usize,
    n: usize,
    boundary: BoundaryOut<'a>,
    spins: OrderedSpins<'a>,
    #[serde(skip_serializing_if = "Option::is_none")]
    manifest: Option<&'a serde_json::Value>,
}

/// Render a configuration file, keys in shortlex order.
pub fn render_config(config: &Configuration, manifest: Option<&serde_json::Value>) -> String {
    let boundary = match config.boundary() {
        Boundary::Plus => BoundaryOut::Kind("plus"),
        Boundary::Minus => BoundaryOut::Kind("minus"),
        Boundary::Explicit(m) => BoundaryOut::Map(OrderedSpins(m.iter().map(|(v, s)| (v, *s)).collect())),
    };
    let out = ConfigOut {
        k: config.k(),
        n: config.radius(),
        boundary,
        spins: OrderedSpins(config.volume().vertices().iter().zip(config.spins().iter().copied()).collect()),
        manifest,
    };
    serde_json::to_string(&out).expect("configuration serializes")
}
