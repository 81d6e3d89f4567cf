//! Textual learner selection, e.g. `min-consistent`, `april:alpha=0.5,delta=0.1`
//! or `adapter(delta=0.05):halving`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::ToString;
use core::fmt;
use core::str::FromStr;

use super::{
    adapter_block_len, alpha_star, April, AprilAuto, AprilParams, ConsistentLearner, Exp3, FeedbackAdapter,
    HalvingReduction, Learner, LearnerContext, OnlineRule, SingletonProbe, SizePreference, Trivial, TrivialKind,
};
use crate::error::{config, Error, Result};
use crate::hypothesis::{vc_dimension, ClassView};
use crate::model::FeedbackMode;
use crate::rng::LANE_LEARNER;

pub const DEFAULT_DELTA: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LearnerKind {
    Halving,
    Soa,
    MinConsistent,
    MaxConsistent,
    SingletonProbe,
    Exp3,
    /// `alpha = None` means `min(α⋆, 1)` for the run's horizon.
    April { alpha: Option<f64>, delta: f64 },
    AprilAuto { delta: f64 },
    Empty,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LearnerSpec {
    pub kind: LearnerKind,
    /// Confidence of the original-feedback adapter, when wrapped.
    pub adapter: Option<f64>,
}

impl LearnerSpec {
    pub fn new(kind: LearnerKind) -> LearnerSpec {
        LearnerSpec { kind, adapter: None }
    }

    /// Builds a fresh learner for one run.
    pub fn build(&self, ctx: &LearnerContext) -> Result<Box<dyn Learner>> {
        match self.adapter {
            None => build_kind(self.kind, ctx),
            Some(delta) => {
                if ctx.mode != FeedbackMode::Original {
                    return config("adapter: only meaningful in original feedback mode");
                }
                let inner = build_kind(self.kind, ctx)?;
                Ok(Box::new(FeedbackAdapter::new(inner, adapter_block_len(ctx.horizon, delta))))
            }
        }
    }
}

fn vc_of(ctx: &LearnerContext) -> Result<usize> {
    match ctx.vc_dimension {
        Some(d) => Ok(d),
        None => vc_dimension(ctx.view.class(), ctx.view.available()),
    }
}

fn is_full_powerset(view: &ClassView) -> bool {
    let u = view.universe_size();
    if view.available().len() != u || u >= usize::BITS as usize || view.len() != 1 << u {
        return false;
    }
    view.class()
        .hypotheses()
        .iter()
        .enumerate()
        .all(|(i, h)| h.len() == i.count_ones() as usize && h.iter().all(|x| i >> x & 1 == 1))
}

fn build_kind(kind: LearnerKind, ctx: &LearnerContext) -> Result<Box<dyn Learner>> {
    let view = ctx.view.clone();
    Ok(match kind {
        LearnerKind::Halving => Box::new(HalvingReduction::new(view, OnlineRule::Halving)?),
        LearnerKind::Soa => Box::new(HalvingReduction::new(view, OnlineRule::Soa)?),
        LearnerKind::MinConsistent => Box::new(ConsistentLearner::new(view, SizePreference::Smallest)),
        LearnerKind::MaxConsistent => Box::new(ConsistentLearner::new(view, SizePreference::Largest)),
        LearnerKind::SingletonProbe => {
            if !is_full_powerset(&view) {
                return config("singleton-probe: requires the powerset class over the whole universe");
            }
            Box::new(SingletonProbe::new(view.available()))
        }
        LearnerKind::Exp3 => Box::new(Exp3::new(view.len(), ctx.horizon, ctx.rng.lane(LANE_LEARNER))),
        LearnerKind::April { alpha, delta } => {
            let d = vc_of(ctx)?;
            let alpha = alpha.unwrap_or_else(|| alpha_star(d, ctx.horizon, delta).min(1.0));
            let params = AprilParams { alpha, delta, horizon: ctx.horizon, vc_dimension: d };
            Box::new(April::new(view, params)?)
        }
        LearnerKind::AprilAuto { delta } => Box::new(AprilAuto::new(view, delta, ctx.horizon, vc_of(ctx)?)?),
        LearnerKind::Empty => Box::new(Trivial::new(TrivialKind::Empty)),
        LearnerKind::Full => Box::new(Trivial::new(TrivialKind::FullAvailable)),
    })
}

fn parse_params<'a>(text: &'a str, allowed: &[&str]) -> Result<impl Iterator<Item = (&'a str, f64)>> {
    let mut pairs = alloc::vec::Vec::new();
    for part in text.split(',').filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value, got `{part}`")))?;
        let key = key.trim();
        if !allowed.contains(&key) {
            return config(format!("unknown parameter `{key}` (expected one of {allowed:?})"));
        }
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("parameter `{key}`: `{value}` is not a number")))?;
        pairs.push((key, value));
    }
    Ok(pairs.into_iter())
}

fn parse_kind(text: &str) -> Result<LearnerKind> {
    let (name, params) = match text.split_once(':') {
        Some((n, p)) => (n.trim(), Some(p)),
        None => (text.trim(), None),
    };
    let plain = |kind: LearnerKind| match params {
        Some(p) if !p.trim().is_empty() => config(format!("learner `{name}` takes no parameters")),
        _ => Ok(kind),
    };
    match name {
        "halving" => plain(LearnerKind::Halving),
        "soa" => plain(LearnerKind::Soa),
        "min-consistent" => plain(LearnerKind::MinConsistent),
        "max-consistent" => plain(LearnerKind::MaxConsistent),
        "singleton-probe" => plain(LearnerKind::SingletonProbe),
        "exp3" => plain(LearnerKind::Exp3),
        "empty" => plain(LearnerKind::Empty),
        "full" => plain(LearnerKind::Full),
        "april" => {
            let (mut alpha, mut delta) = (None, DEFAULT_DELTA);
            for (k, v) in parse_params(params.unwrap_or(""), &["alpha", "delta"])? {
                match k {
                    "alpha" => alpha = Some(v),
                    _ => delta = v,
                }
            }
            Ok(LearnerKind::April { alpha, delta })
        }
        "april-auto" => {
            let mut delta = DEFAULT_DELTA;
            for (_, v) in parse_params(params.unwrap_or(""), &["delta"])? {
                delta = v;
            }
            Ok(LearnerKind::AprilAuto { delta })
        }
        "" => config("empty learner name"),
        other => config(format!("unknown learner `{other}`")),
    }
}

impl FromStr for LearnerSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<LearnerSpec> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("adapter") {
            let (delta, inner) = if let Some(inner) = rest.strip_prefix(':') {
                (DEFAULT_DELTA, inner)
            } else if let Some(rest) = rest.strip_prefix('(') {
                let (params, inner) = rest
                    .split_once("):")
                    .ok_or_else(|| Error::Config("expected `adapter(delta=..):<learner>`".to_string()))?;
                let mut delta = DEFAULT_DELTA;
                for (_, v) in parse_params(params, &["delta"])? {
                    delta = v;
                }
                (delta, inner)
            } else {
                return config(format!("unknown learner `{s}`"));
            };
            if !(delta > 0.0 && delta < 1.0) {
                return config(format!("adapter: delta must lie in (0, 1), got {delta}"));
            }
            if inner.trim_start().starts_with("adapter") {
                return config("adapter cannot be nested");
            }
            return Ok(LearnerSpec { kind: parse_kind(inner)?, adapter: Some(delta) });
        }
        Ok(LearnerSpec::new(parse_kind(s)?))
    }
}

impl fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LearnerKind::Halving => f.write_str("halving"),
            LearnerKind::Soa => f.write_str("soa"),
            LearnerKind::MinConsistent => f.write_str("min-consistent"),
            LearnerKind::MaxConsistent => f.write_str("max-consistent"),
            LearnerKind::SingletonProbe => f.write_str("singleton-probe"),
            LearnerKind::Exp3 => f.write_str("exp3"),
            LearnerKind::April { alpha: Some(a), delta } => write!(f, "april:alpha={a},delta={delta}"),
            LearnerKind::April { alpha: None, delta } => write!(f, "april:delta={delta}"),
            LearnerKind::AprilAuto { delta } => write!(f, "april-auto:delta={delta}"),
            LearnerKind::Empty => f.write_str("empty"),
            LearnerKind::Full => f.write_str("full"),
        }
    }
}

impl fmt::Display for LearnerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.adapter {
            Some(d) if d == DEFAULT_DELTA => write!(f, "adapter:{}", self.kind),
            Some(d) => write!(f, "adapter(delta={d}):{}", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_name() {
        for name in [
            "halving",
            "soa",
            "min-consistent",
            "max-consistent",
            "singleton-probe",
            "exp3",
            "april",
            "april-auto",
            "empty",
            "full",
            "adapter:min-consistent",
        ] {
            let spec: LearnerSpec = name.parse().unwrap();
            let again: LearnerSpec = spec.to_string().parse().unwrap();
            assert_eq!(spec, again, "{name}");
        }
    }

    #[test]
    fn parses_parameters() {
        let spec: LearnerSpec = "april:alpha=0.5,delta=0.2".parse().unwrap();
        assert_eq!(spec.kind, LearnerKind::April { alpha: Some(0.5), delta: 0.2 });
        let spec: LearnerSpec = "adapter(delta=0.05):exp3".parse().unwrap();
        assert_eq!(spec.adapter, Some(0.05));
        assert_eq!(spec.to_string(), "adapter(delta=0.05):exp3");
    }

    #[test]
    fn rejects_bad_strings() {
        for bad in ["", "nope", "halving:x=1", "april:beta=1", "april:alpha=x", "adapter:adapter:exp3", "adapterx"] {
            assert!(bad.parse::<LearnerSpec>().is_err(), "{bad}");
        }
    }
}
