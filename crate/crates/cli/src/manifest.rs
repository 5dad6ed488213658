//! Stage manifests: JSON proof logs with a fixed field order.

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::expect::ExpectationReport;
use crate::io::FileRecord;

/// Named counts in the order they were recorded.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Counters(Vec<(String, u64)>);

impl Counters {
    pub fn new() -> Self {
        Counters(Vec::new())
    }

    /// Sets `key`, keeping its first position if already present.
    pub fn set(&mut self, key: impl Into<String>, value: u64) {
        let key = key.into();
        match self.0.iter_mut().find(|(k, _)| *k == key) {
            Some(slot) => slot.1 = value,
            None => self.0.push((key, value)),
        }
    }

    pub fn get(&self, key: &str) -> Option<u64> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// True when the listed counters that are present never increase.
    pub fn is_non_increasing(&self, chain: &[&str]) -> bool {
        let values: Vec<u64> = chain.iter().filter_map(|k| self.get(k)).collect();
        values.windows(2).all(|w| w[0] >= w[1])
    }
}

impl Serialize for Counters {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// The filter chain of the extension search, in order.
pub const FILTER_CHAIN: [&str; 4] = ["generated", "after_dedup", "after_chi", "after_arrow"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageParams {
    pub n: Option<usize>,
    pub p: Option<usize>,
    pub s: Option<usize>,
    pub degree_prune: bool,
    pub arrow_filter: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StageManifest {
    pub stage: String,
    pub key: String,
    pub params: StageParams,
    pub inputs: Vec<FileRecord>,
    pub counters: Counters,
    pub outputs: Vec<FileRecord>,
    pub expectations: Option<ExpectationReport>,
    pub threads: usize,
    pub wall_seconds: f64,
}

impl StageManifest {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}
