//! The scenario JSON document and the short preset syntax accepted on the
//! command line.
//!
//! ```json
//! {
//!   "universe_size": 4,
//!   "available": [0, 1, 2, 3],
//!   "class": [[0], [0, 1], [0, 2], [0, 3]],
//!   "target_generator": {"kind": "fixed", "target": [0]},
//!   "mode": "simplified"
//! }
//! ```
//!
//! `available` defaults to the whole universe. Generators that build their
//! own class (`lb_vc`, `bandit_world`, `appendix_c`) need neither field.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use prset_core::harness::{Scenario, TargetGenerator, World};
use prset_core::hypothesis::{appendix_c_default_block, powerset_class, star_class, HypothesisClass};
use prset_core::{FeedbackMode, ItemSet};

use crate::{LabError, LabResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub universe_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub available: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_generator: Option<TargetGenerator>,
    #[serde(default)]
    pub mode: FeedbackMode,
    /// Known VC dimension of the class over `available`; saves the oracle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vc_dimension: Option<usize>,
}

impl ScenarioFile {
    pub fn load(path: &Path) -> LabResult<ScenarioFile> {
        let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| LabError::Parse { path: path.to_path_buf(), source })
    }

    pub fn save(&self, path: &Path) -> LabResult<()> {
        let text = serde_json::to_string_pretty(self).expect("scenario serializes");
        fs::write(path, text + "\n").map_err(|e| LabError::io(path, e))
    }

    /// The explicit class and available set, if the file has a class.
    pub fn explicit_class(&self) -> LabResult<Option<(Arc<HypothesisClass>, ItemSet)>> {
        let Some(lists) = &self.class else {
            return Ok(None);
        };
        let mut class = HypothesisClass::from_item_lists(self.universe_size, lists)?;
        if let Some(labels) = &self.labels {
            class = class.with_labels(labels.clone())?;
        }
        let available = match &self.available {
            Some(items) => ItemSet::from_items(self.universe_size, items.iter().copied())?,
            None => ItemSet::full(self.universe_size),
        };
        Ok(Some((Arc::new(class), available)))
    }

    pub fn to_scenario(&self) -> LabResult<Scenario> {
        let Some(generator) = self.target_generator.clone() else {
            return Err(LabError::config("scenario file has no target_generator"));
        };
        let supplied = self.explicit_class()?;
        if supplied.is_none() && self.available.is_some() {
            return Err(LabError::config("`available` given without `class`"));
        }
        let mut scenario = Scenario::build(generator, supplied, self.mode)?;
        if scenario.view().universe_size() != self.universe_size {
            return Err(LabError::config(format!(
                "universe_size {} does not match the generator's universe {}",
                self.universe_size,
                scenario.view().universe_size()
            )));
        }
        if let Some(d) = self.vc_dimension {
            scenario = scenario.with_vc_dimension(d);
        }
        Ok(scenario)
    }

    /// The class and domain to analyse with the dimension oracles.
    pub fn class_and_domain(&self) -> LabResult<(Arc<HypothesisClass>, ItemSet)> {
        if let Some(pair) = self.explicit_class()? {
            return Ok(pair);
        }
        let s = self.to_scenario()?;
        Ok((s.view().class().clone(), s.view().available().clone()))
    }

    /// A file describing an explicit class with a given generator.
    pub fn explicit(class: &HypothesisClass, available: &ItemSet, generator: Option<TargetGenerator>, mode: FeedbackMode) -> ScenarioFile {
        let full = available.len() == available.universe_size();
        ScenarioFile {
            universe_size: class.universe_size(),
            available: (!full).then(|| available.to_vec()),
            class: Some(class.hypotheses().iter().map(ItemSet::to_vec).collect()),
            labels: class.labels().map(<[String]>::to_vec),
            target_generator: generator,
            mode,
            vc_dimension: None,
        }
    }
}

fn numbers(spec: &str, args: &str) -> LabResult<Vec<f64>> {
    args.split(',')
        .filter(|a| !a.is_empty())
        .map(|a| {
            a.trim()
                .parse::<f64>()
                .map_err(|_| LabError::config(format!("preset `{spec}`: `{a}` is not a number")))
        })
        .collect()
}

fn as_count(spec: &str, v: f64) -> LabResult<usize> {
    if v >= 0.0 && v.fract() == 0.0 {
        Ok(v as usize)
    } else {
        Err(LabError::config(format!("preset `{spec}`: `{v}` is not a count")))
    }
}

/// Parses a preset such as `star:50`, `powerset:6`, `lbvc:20`,
/// `bandit:200,10000,0.1194`, `bandit:5,40,0.1,II,2` or
/// `appendix-c:8,512,core`.
pub fn preset(spec: &str, mode: FeedbackMode) -> LabResult<Scenario> {
    let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
    let bad = |msg: &str| LabError::config(format!("preset `{spec}`: {msg}"));
    let scenario = match name {
        "star" => {
            let n = numbers(spec, args)?;
            let [n] = n.as_slice() else { return Err(bad("expected star:<n>")) };
            let class = Arc::new(star_class(as_count(spec, *n)?)?);
            let u = class.universe_size();
            Scenario::fixed(class, ItemSet::full(u), &[0], mode)?.with_vc_dimension(1)
        }
        "powerset" => {
            let n = numbers(spec, args)?;
            let [d] = n.as_slice() else { return Err(bad("expected powerset:<d>")) };
            let d = as_count(spec, *d)?;
            Scenario::realizable(Arc::new(powerset_class(d)?), ItemSet::full(d), mode)?.with_vc_dimension(d)
        }
        "lbvc" => {
            let n = numbers(spec, args)?;
            let [d] = n.as_slice() else { return Err(bad("expected lbvc:<d>")) };
            Scenario::lbvc(as_count(spec, *d)?, mode)?
        }
        "bandit" => {
            let parts: Vec<&str> = args.split(',').map(str::trim).collect();
            if !(3..=5).contains(&parts.len()) {
                return Err(bad("expected bandit:<k>,<n>,<epsilon>[,I|II[,<boosted>]]"));
            }
            let head = numbers(spec, &parts[..3].join(","))?;
            let world = match parts.get(3).copied() {
                None | Some("I") | Some("i") | Some("1") => World::I,
                Some("II") | Some("ii") | Some("2") => World::II,
                Some(w) => return Err(bad(&format!("unknown world `{w}`"))),
            };
            let boosted = match parts.get(4) {
                Some(b) => as_count(spec, numbers(spec, b)?[0])?,
                None => 2,
            };
            let generator = TargetGenerator::BanditWorld {
                k: as_count(spec, head[0])?,
                n: as_count(spec, head[1])?,
                epsilon: head[2],
                world,
                boosted,
            };
            Scenario::build(generator, None, mode)?
        }
        "appendix-c" => {
            let mut parts: Vec<&str> = args.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
            let core_only = parts.last() == Some(&"core");
            if core_only {
                parts.pop();
            }
            let n = numbers(spec, &parts.join(","))?;
            let (d, block) = match n.as_slice() {
                [d] => (as_count(spec, *d)?, appendix_c_default_block(as_count(spec, *d)?)),
                [d, b] => (as_count(spec, *d)?, as_count(spec, *b)?),
                _ => return Err(bad("expected appendix-c:<d>[,<block>][,core]")),
            };
            Scenario::appendix_c(d, block, core_only, mode)?
        }
        _ => return Err(bad("unknown preset")),
    };
    Ok(scenario)
}

pub fn is_preset(arg: &str) -> bool {
    ["star:", "powerset:", "lbvc:", "bandit:", "appendix-c:"]
        .iter()
        .any(|p| arg.starts_with(p))
}

/// A preset name or a path to a scenario file. `mode` overrides the file's
/// mode when given.
pub fn resolve(arg: &str, mode: Option<FeedbackMode>) -> LabResult<Scenario> {
    if is_preset(arg) {
        return preset(arg, mode.unwrap_or_default());
    }
    let file = ScenarioFile::load(Path::new(arg))?;
    let scenario = file.to_scenario()?;
    Ok(match mode {
        Some(m) => scenario.with_mode(m),
        None => scenario,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse() {
        let m = FeedbackMode::Simplified;
        assert_eq!(preset("star:50", m).unwrap().view().len(), 51);
        assert_eq!(preset("powerset:3", m).unwrap().vc_dimension(), Some(3));
        assert_eq!(preset("lbvc:6", m).unwrap().view().len(), 64);
        assert_eq!(preset("bandit:5,40,0.1,II", m).unwrap().view().len(), 5);
        let c = preset("appendix-c:3,4,core", m).unwrap();
        assert_eq!(c.view().available().len(), 3);
        assert_eq!(preset("appendix-c:2", m).unwrap().view().universe_size(), 2 + 4 * 128);
        for bad in ["star", "star:x", "bandit:5,40", "appendix-c:", "nope:1", "powerset:2.5"] {
            assert!(preset(bad, m).is_err(), "{bad}");
        }
    }

    #[test]
    fn explicit_file_round_trip() {
        let class = star_class(3).unwrap();
        let x = ItemSet::from_items(4, [0, 1, 2]).unwrap();
        let file = ScenarioFile::explicit(&class, &x, Some(TargetGenerator::Fixed { target: vec![0] }), FeedbackMode::Original);
        let text = serde_json::to_string(&file).unwrap();
        let back: ScenarioFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, file);
        let s = back.to_scenario().unwrap();
        assert_eq!(s.mode(), FeedbackMode::Original);
        assert_eq!(s.view().available(), &x);
    }

    #[test]
    fn construction_files_need_no_class() {
        let text = r#"{"universe_size": 4, "target_generator": {"kind": "lb_vc", "d": 4}}"#;
        let file: ScenarioFile = serde_json::from_str(text).unwrap();
        assert_eq!(file.to_scenario().unwrap().view().len(), 16);
        let wrong = r#"{"universe_size": 5, "target_generator": {"kind": "lb_vc", "d": 4}}"#;
        let file: ScenarioFile = serde_json::from_str(wrong).unwrap();
        assert!(file.to_scenario().is_err());
    }
}
