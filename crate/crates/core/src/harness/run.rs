use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::optimal::{compute_optimal, compute_optimal_planted, OptimalityReport};
use super::scenario::{Instance, Scenario};
use crate::error::{config, Error, Result};
use crate::hypothesis::{vc_dimension, ClassView};
use crate::learners::{Learner, LearnerContext, LearnerKind, LearnerSpec, Play};
use crate::model::{realized_reward, Environment, FeedbackEvent, ItemSet};
use crate::ratio::Ratio;
use crate::rng::{Rng, RngStream, LANE_FEEDBACK, LANE_SCENARIO};

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub learner: LearnerSpec,
    pub horizon: usize,
    pub trials: usize,
    pub master_seed: u64,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return config("horizon must be at least 1");
        }
        if self.trials == 0 {
            return config("trials must be at least 1");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlayRecord {
    Hypothesis { index: usize },
    Empty,
    Available,
    Set { items: Vec<usize> },
}

impl From<&Play> for PlayRecord {
    fn from(play: &Play) -> PlayRecord {
        match play {
            Play::Hypothesis(index) => PlayRecord::Hypothesis { index: *index },
            Play::Empty => PlayRecord::Empty,
            Play::Available => PlayRecord::Available,
            Play::Set(s) => PlayRecord::Set { items: s.to_vec() },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub play: PlayRecord,
    /// Mean reward of the round's feedback events.
    pub realized_reward: f64,
    /// True reward `g(N_t)`.
    pub g: f64,
    /// `g⋆·t − Σ_{τ≤t} g(N_τ)`.
    pub cumulative_regret: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub learner: String,
    pub trial: usize,
    pub master_seed: u64,
    pub horizon: usize,
    pub optimum: OptimalityReport,
    pub rounds: Vec<RoundRecord>,
    pub final_regret: f64,
    pub total_realized_reward: f64,
}

impl RunRecord {
    pub fn regret_curve(&self) -> Vec<f64> {
        self.rounds.iter().map(|r| r.cumulative_regret).collect()
    }
}

/// What the harness saw in one round.
#[derive(Clone, Copy, Debug)]
pub struct RoundOutcome<'a> {
    pub round: usize,
    pub play: &'a Play,
    pub events: &'a [FeedbackEvent],
    pub g: Ratio,
}

/// The protocol loop: propose, sample feedback, report, observe.
pub fn simulate<L, F>(
    env: &Environment,
    view: &ClassView,
    learner: &mut L,
    horizon: usize,
    rng: &mut Rng,
    mut on_round: F,
) -> Result<()>
where
    L: Learner + ?Sized,
    F: FnMut(RoundOutcome<'_>),
{
    let empty = ItemSet::empty(view.universe_size());
    let g_empty = env.counts_restricted(&empty).reward();
    let g_available = env.counts_restricted(view.available()).reward();
    let mut by_index: BTreeMap<usize, Ratio> = BTreeMap::new();
    let mut last_set: Option<(Arc<ItemSet>, Ratio)> = None;
    for t in 1..=horizon {
        let play = learner.propose(t);
        let (set, g) = match &play {
            Play::Hypothesis(i) => {
                if *i >= view.len() {
                    return Err(Error::ItemOutOfRange { item: *i, universe: view.len() });
                }
                let h = view.hypothesis(*i);
                let g = *by_index.entry(*i).or_insert_with(|| env.counts_restricted(h).reward());
                (h, g)
            }
            Play::Empty => (&empty, g_empty),
            Play::Available => (view.available(), g_available),
            Play::Set(s) => {
                let g = match &last_set {
                    Some((prev, g)) if Arc::ptr_eq(prev, s) => *g,
                    _ => {
                        let g = env.counts(s)?.reward();
                        last_set = Some((s.clone(), g));
                        g
                    }
                };
                (&**s, g)
            }
        };
        let events = env.step(t, set, rng)?;
        on_round(RoundOutcome { round: t, play: &play, events: &events, g });
        learner.observe(&events);
    }
    Ok(())
}

/// Resolves the VC dimension with the oracle when the learner needs it and
/// the scenario does not know it.
pub fn prepare_scenario(scenario: &Scenario, spec: &LearnerSpec) -> Result<Scenario> {
    let needs = matches!(spec.kind, LearnerKind::April { .. } | LearnerKind::AprilAuto { .. });
    if needs && scenario.vc_dimension().is_none() {
        let view = scenario.view();
        let d = vc_dimension(view.class(), view.available())?;
        return Ok(scenario.clone().with_vc_dimension(d));
    }
    Ok(scenario.clone())
}

/// A trial ready to run: environment, optimum, fresh learner and the
/// feedback stream, all derived from `(master_seed, trial)`.
pub struct PreparedTrial {
    pub instance: Instance,
    pub optimum: OptimalityReport,
    pub learner: alloc::boxed::Box<dyn Learner>,
    pub feedback_rng: Rng,
}

pub fn prepare_trial(
    scenario: &Scenario,
    spec: &LearnerSpec,
    horizon: usize,
    master_seed: u64,
    trial: usize,
) -> Result<PreparedTrial> {
    let stream = RngStream::new(master_seed, trial as u64);
    let instance = scenario.generate(&mut stream.lane(LANE_SCENARIO))?;
    let view = scenario.view();
    let optimum = match instance.planted {
        Some(p) => compute_optimal_planted(view, &instance.env, p),
        None => compute_optimal(view, &instance.env),
    };
    let ctx = LearnerContext {
        view: view.clone(),
        horizon,
        mode: scenario.mode(),
        vc_dimension: scenario.vc_dimension(),
        rng: stream,
    };
    let learner = spec.build(&ctx)?;
    Ok(PreparedTrial { instance, optimum, learner, feedback_rng: stream.lane(LANE_FEEDBACK) })
}

/// One trial with its full per-round record.
pub fn run_trial(
    scenario: &Scenario,
    spec: &LearnerSpec,
    horizon: usize,
    master_seed: u64,
    trial: usize,
) -> Result<RunRecord> {
    let mut p = prepare_trial(scenario, spec, horizon, master_seed, trial)?;
    let g_star = p.optimum.g_star.to_f64();
    let mut rounds = Vec::with_capacity(horizon);
    let (mut sum_g, mut sum_realized) = (0.0, 0.0);
    simulate(&p.instance.env, scenario.view(), &mut p.learner, horizon, &mut p.feedback_rng, |o| {
        let g = o.g.to_f64();
        let realized = realized_reward(o.events);
        sum_g += g;
        sum_realized += realized;
        rounds.push(RoundRecord {
            round: o.round,
            play: o.play.into(),
            realized_reward: realized,
            g,
            cumulative_regret: g_star * o.round as f64 - sum_g,
        });
    })?;
    Ok(RunRecord {
        learner: spec.to_string(),
        trial,
        master_seed,
        horizon,
        optimum: p.optimum,
        final_regret: rounds.last().map_or(0.0, |r| r.cumulative_regret),
        total_realized_reward: sum_realized,
        rounds,
    })
}

/// Per-trial totals without the round log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub trial: usize,
    pub optimum: OptimalityReport,
    pub final_regret: f64,
    pub total_g: f64,
    pub total_realized_reward: f64,
    /// Cumulative pseudo-regret after each round, when requested.
    pub curve: Option<Vec<f64>>,
}

pub fn run_trial_summary(
    scenario: &Scenario,
    spec: &LearnerSpec,
    horizon: usize,
    master_seed: u64,
    trial: usize,
    keep_curve: bool,
) -> Result<TrialSummary> {
    let mut p = prepare_trial(scenario, spec, horizon, master_seed, trial)?;
    let g_star = p.optimum.g_star.to_f64();
    let mut curve = keep_curve.then(|| Vec::with_capacity(horizon));
    let (mut sum_g, mut sum_realized) = (0.0, 0.0);
    simulate(&p.instance.env, scenario.view(), &mut p.learner, horizon, &mut p.feedback_rng, |o| {
        sum_g += o.g.to_f64();
        sum_realized += realized_reward(o.events);
        if let Some(c) = curve.as_mut() {
            c.push(g_star * o.round as f64 - sum_g);
        }
    })?;
    Ok(TrialSummary {
        trial,
        optimum: p.optimum,
        final_regret: g_star * horizon as f64 - sum_g,
        total_g: sum_g,
        total_realized_reward: sum_realized,
        curve,
    })
}

/// All trials, sequentially; trial `i` uses stream id `i`.
pub fn run_experiment(cfg: &RunConfig) -> Result<Vec<RunRecord>> {
    cfg.validate()?;
    let scenario = prepare_scenario(&cfg.scenario, &cfg.learner)?;
    (0..cfg.trials)
        .map(|i| run_trial(&scenario, &cfg.learner, cfg.horizon, cfg.master_seed, i))
        .collect()
}
