//! JSON reports for the command-line tools.
//!
//! Every report has the top-level fields `command`, `model`, `ok`,
//! `violations`, `density`, `classes` and `stats`.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::Serialize;

use crate::analysis::{BlockClass, ClassDeficiency};
use crate::tiling::{DensitySample, Violation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ViolationEntry {
    pub i: i64,
    pub j: i64,
    pub value: String,
}

impl From<&Violation> for ViolationEntry {
    fn from(v: &Violation) -> Self {
        ViolationEntry {
            i: v.i,
            j: v.j,
            value: v.det.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleEntry {
    pub radius: u64,
    pub wild: u64,
    pub total: u64,
    pub ratio_num: u64,
    pub ratio_den: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum DensityEntry {
    Exact { exact_num: u64, exact_den: u64 },
    Samples { samples: Vec<SampleEntry> },
}

impl DensityEntry {
    pub fn exact(r: Ratio<u64>) -> Self {
        DensityEntry::Exact {
            exact_num: *r.numer(),
            exact_den: *r.denom(),
        }
    }

    pub fn samples(s: &[DensitySample]) -> Self {
        DensityEntry::Samples {
            samples: s
                .iter()
                .map(|x| {
                    let r = x.ratio();
                    SampleEntry {
                        radius: x.radius,
                        wild: x.wild,
                        total: x.total,
                        ratio_num: *r.numer(),
                        ratio_den: *r.denom(),
                    }
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassEntry {
    pub encoding: String,
    pub orbit_size: usize,
    pub deficiency: Option<usize>,
    pub method: Option<String>,
}

impl From<&BlockClass> for ClassEntry {
    fn from(c: &BlockClass) -> Self {
        ClassEntry {
            encoding: c.encoding.clone(),
            orbit_size: c.orbit_size,
            deficiency: None,
            method: None,
        }
    }
}

impl From<&ClassDeficiency> for ClassEntry {
    fn from(c: &ClassDeficiency) -> Self {
        let method = serde_json::to_value(c.method)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned));
        ClassEntry {
            deficiency: Some(c.deficiency),
            method,
            ..ClassEntry::from(&c.class)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub model: String,
    pub ok: bool,
    pub violations: Vec<ViolationEntry>,
    pub density: Option<DensityEntry>,
    pub classes: Vec<ClassEntry>,
    pub stats: BTreeMap<String, serde_json::Value>,
}

impl Report {
    pub fn new(command: &str, model: &str) -> Self {
        Report {
            command: command.into(),
            model: model.into(),
            ok: true,
            violations: Vec::new(),
            density: None,
            classes: Vec::new(),
            stats: BTreeMap::new(),
        }
    }

    pub fn stat(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).expect("stat values serialize");
        self.stats.insert(key.into(), v);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
