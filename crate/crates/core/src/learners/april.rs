//! The agnostic learner with a margin parameter `α`.
//!
//! Stage 1 plays a fixed set and estimates every hypothesis' recall from the
//! recall samples; hypotheses with `r̂ ≥ 7α/8` survive. Stage 2 plays the
//! survivor with the best recall-per-item and turns its precision labels
//! into a target-size estimate, which yields a precision estimate for every
//! survivor; those with `p̂ ≥ 7α/16` form `Ĥ`. Stage 3 plays the argmax of
//! `r̂ + p̂` over `Ĥ`, re-estimated from stage-3 feedback alone. An empty `Ĥ`
//! means no hypothesis beats the trivial sets, and `∅` is played instead.

use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{Learner, Play};
use crate::error::{config, Result};
use crate::estimation::{
    est_target_size, estimate_precision, PrecisionObservation, RecallEstimator, TargetSizeAccumulator,
    TargetSizeEstimate,
};
use crate::hypothesis::ClassView;
use crate::model::{FeedbackEvent, FeedbackKind, FeedbackType};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AprilParams {
    pub alpha: f64,
    pub delta: f64,
    pub horizon: usize,
    /// VC dimension of the class over `X`.
    pub vc_dimension: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Stage1,
    Stage2,
    Stage3,
    Fallback,
}

/// Round budgets `(T1, T2)` of the two estimation stages.
pub fn stage_budgets(alpha: f64, delta: f64, vc_dimension: usize) -> (usize, usize) {
    let a2 = alpha * alpha;
    let d = vc_dimension as f64;
    let complexity = if vc_dimension == 0 {
        0.0
    } else {
        d * libm::log(64.0 * d / a2)
    };
    let t1 = libm::ceil(64.0 / a2 * (complexity + libm::log(4.0 / delta)));
    let t2 = libm::ceil(64.0 * libm::log(1.0 / delta) / a2);
    (t1 as usize, t2 as usize)
}

/// The smallest margin the horizon supports:
/// `(d·ln(2eT/d) + ln(T/δ))^{1/4} · T^{-1/4}`.
pub fn alpha_star(vc_dimension: usize, horizon: usize, delta: f64) -> f64 {
    let t = horizon as f64;
    let d = vc_dimension as f64;
    let complexity = if vc_dimension == 0 {
        0.0
    } else {
        d * libm::log(2.0 * core::f64::consts::E * t / d)
    };
    libm::pow(complexity + libm::log(t / delta), 0.25) * libm::pow(t, -0.25)
}

/// Everything stages 1 and 2 produced for one value of `α`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeOutcome {
    pub alpha: f64,
    pub t1: usize,
    pub t2: usize,
    pub r0: RecallEstimator,
    /// Hypotheses with `r̂_0 ≥ 7α/8`, ascending.
    pub h1: Vec<u32>,
    pub n1: Option<usize>,
    pub n_star0: Option<TargetSizeEstimate>,
    /// Members of `h1` with `p̂_0 ≥ 7α/16`, ascending.
    pub h_hat: Vec<u32>,
    /// `p̂_0` for each member of `h_hat`, in the same order.
    pub p0: Vec<f64>,
}

impl ProbeOutcome {
    pub fn feasible(&self) -> bool {
        !self.h_hat.is_empty()
    }
}

#[derive(Clone, Debug)]
struct Probe {
    view: Arc<ClassView>,
    alpha: f64,
    t1: usize,
    t2: usize,
    rounds: usize,
    r0: RecallEstimator,
    h1: Vec<u32>,
    n1: Option<usize>,
    obs: Vec<PrecisionObservation>,
}

impl Probe {
    fn new(view: Arc<ClassView>, alpha: f64, delta: f64, d: usize) -> Probe {
        let (t1, t2) = stage_budgets(alpha, delta, d);
        Probe {
            r0: RecallEstimator::new(view.len()),
            view,
            alpha,
            t1,
            t2,
            rounds: 0,
            h1: Vec::new(),
            n1: None,
            obs: Vec::new(),
        }
    }

    fn phase(&self) -> Phase {
        if self.rounds < self.t1 {
            Phase::Stage1
        } else {
            Phase::Stage2
        }
    }

    fn play(&self) -> Play {
        match self.n1 {
            Some(i) if self.rounds >= self.t1 => Play::Hypothesis(i),
            _ => Play::Hypothesis(0),
        }
    }

    fn observe(&mut self, events: &[FeedbackEvent]) -> Option<ProbeOutcome> {
        let in_stage1 = self.rounds < self.t1;
        self.rounds += 1;
        if in_stage1 {
            for e in events {
                match e.kind {
                    FeedbackKind::Recall { item, .. } => self.r0.update(&self.view, item),
                    FeedbackKind::EmptyConvention { which: FeedbackType::Recall } => {
                        self.r0.update_empty_target()
                    }
                    _ => {}
                }
            }
            if self.rounds == self.t1 {
                self.filter_recall();
                if self.h1.is_empty() {
                    return Some(self.finish(None));
                }
            }
            return None;
        }
        let n1 = self.n1.expect("stage 2 has a probe set");
        for (item, label) in events.iter().filter_map(FeedbackEvent::precision_item) {
            debug_assert!(self.view.contains(n1, item));
            self.obs.push(PrecisionObservation {
                set_size: self.view.size(n1),
                hypothesis: n1,
                label,
            });
        }
        if self.rounds < self.t1 + self.t2 {
            return None;
        }
        let floor = 3.0 * self.alpha / 16.0;
        let r0 = &self.r0;
        let n_star = est_target_size(|i| r0.estimate(i).unwrap_or(0.0), &self.obs, floor).ok();
        Some(self.finish(n_star))
    }

    fn filter_recall(&mut self) {
        if self.r0.samples() == 0 {
            return;
        }
        let m = self.r0.samples() as f64;
        let threshold = 7.0 * self.alpha / 8.0;
        self.h1 = (0..self.view.len())
            .filter(|&i| self.r0.hits(i) as f64 / m >= threshold)
            .map(|i| i as u32)
            .collect();
        // argmax hits / size, compared exactly; an empty set ranks highest.
        let mut best: Option<usize> = None;
        for &i in &self.h1 {
            let i = i as usize;
            let better = match best {
                None => true,
                Some(b) => {
                    let (hi, si) = (self.r0.hits(i) as u128, self.view.size(i) as u128);
                    let (hb, sb) = (self.r0.hits(b) as u128, self.view.size(b) as u128);
                    match (si, sb) {
                        (_, 0) => false,
                        (0, _) => true,
                        _ => hi * sb > hb * si,
                    }
                }
            };
            if better {
                best = Some(i);
            }
        }
        self.n1 = best;
    }

    fn finish(&mut self, n_star: Option<TargetSizeEstimate>) -> ProbeOutcome {
        let threshold = 7.0 * self.alpha / 16.0;
        let mut h_hat = Vec::new();
        let mut p0 = Vec::new();
        if let Some(n) = &n_star {
            for &i in &self.h1 {
                let r = self.r0.estimate(i as usize).unwrap_or(0.0);
                let p = estimate_precision(r, n, self.view.size(i as usize));
                if p >= threshold {
                    h_hat.push(i);
                    p0.push(p);
                }
            }
        }
        ProbeOutcome {
            alpha: self.alpha,
            t1: self.t1,
            t2: self.t2,
            r0: self.r0.clone(),
            h1: core::mem::take(&mut self.h1),
            n1: self.n1,
            n_star0: n_star,
            h_hat,
            p0,
        }
    }
}

/// Stage 3: argmax of `r̂_t + p̂_t` over `Ĥ`, estimated from stage-3 feedback.
/// A component with no stage-3 data yet falls back to its stage-2 value.
#[derive(Clone, Debug)]
struct Exploit {
    view: Arc<ClassView>,
    floor: f64,
    outcome: ProbeOutcome,
    recall: RecallEstimator,
    acc: TargetSizeAccumulator,
    current: Option<usize>,
    rounds: usize,
}

impl Exploit {
    fn new(view: Arc<ClassView>, outcome: ProbeOutcome) -> Exploit {
        Exploit {
            recall: RecallEstimator::tracking(view.len(), outcome.h_hat.clone()),
            floor: 3.0 * outcome.alpha / 16.0,
            view,
            outcome,
            acc: TargetSizeAccumulator::new(),
            current: None,
            rounds: 0,
        }
    }

    fn r0(&self, i: usize) -> f64 {
        self.outcome.r0.estimate(i).unwrap_or(0.0)
    }

    fn choose(&self) -> usize {
        let h_hat = &self.outcome.h_hat;
        let score: Vec<f64> = if self.rounds == 0 {
            h_hat
                .iter()
                .zip(&self.outcome.p0)
                .map(|(&i, &p)| self.r0(i as usize) + p)
                .collect()
        } else {
            let r_t = |i: usize| match self.recall.estimate(i) {
                Ok(r) => r,
                Err(_) => self.r0(i),
            };
            let n_t = self
                .acc
                .estimate(r_t, self.floor)
                .ok()
                .or(self.outcome.n_star0)
                .expect("stage 3 starts with a target-size estimate");
            h_hat
                .iter()
                .map(|&i| {
                    let i = i as usize;
                    let r = r_t(i);
                    r + estimate_precision(r, &n_t, self.view.size(i))
                })
                .collect()
        };
        let mut best = 0;
        for (j, s) in score.iter().enumerate() {
            if *s > score[best] {
                best = j;
            }
        }
        h_hat[best] as usize
    }

    fn play(&mut self) -> Play {
        let i = self.choose();
        self.current = Some(i);
        Play::Hypothesis(i)
    }

    fn observe(&mut self, events: &[FeedbackEvent]) {
        let Some(played) = self.current.take() else {
            return;
        };
        self.rounds += 1;
        for e in events {
            match e.kind {
                FeedbackKind::Recall { item, .. } => self.recall.update(&self.view, item),
                FeedbackKind::EmptyConvention { which: FeedbackType::Recall } => {
                    self.recall.update_empty_target()
                }
                FeedbackKind::Precision { label, .. } => self.acc.push(PrecisionObservation {
                    set_size: self.view.size(played),
                    hypothesis: played,
                    label,
                }),
                FeedbackKind::EmptyConvention { .. } => {}
            }
        }
    }
}

#[derive(Clone, Debug)]
enum State {
    Probing(Probe),
    Exploit(Exploit),
    Fallback(Option<ProbeOutcome>),
}

impl State {
    fn phase(&self) -> Phase {
        match self {
            State::Probing(p) => p.phase(),
            State::Exploit(_) => Phase::Stage3,
            State::Fallback(_) => Phase::Fallback,
        }
    }

    fn outcome(&self) -> Option<&ProbeOutcome> {
        match self {
            State::Probing(_) => None,
            State::Exploit(e) => Some(&e.outcome),
            State::Fallback(o) => o.as_ref(),
        }
    }

    fn commit(view: &Arc<ClassView>, outcome: Option<ProbeOutcome>) -> State {
        match outcome {
            Some(o) if o.feasible() => State::Exploit(Exploit::new(view.clone(), o)),
            other => State::Fallback(other),
        }
    }

    fn play(&mut self) -> Play {
        match self {
            State::Probing(p) => p.play(),
            State::Exploit(e) => e.play(),
            State::Fallback(_) => Play::Empty,
        }
    }
}

#[derive(Clone, Debug)]
pub struct April {
    view: Arc<ClassView>,
    params: AprilParams,
    t1: usize,
    t2: usize,
    state: State,
}

impl April {
    pub fn new(view: Arc<ClassView>, params: AprilParams) -> Result<April> {
        let AprilParams { alpha, delta, horizon, vc_dimension } = params;
        if !(alpha > 0.0 && alpha <= 1.0) {
            return config(alloc::format!("april: alpha must lie in (0, 1], got {alpha}"));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return config(alloc::format!("april: delta must lie in (0, 1), got {delta}"));
        }
        let (t1, t2) = stage_budgets(alpha, delta, vc_dimension);
        if horizon <= t1 + t2 {
            return config(alloc::format!(
                "april: horizon {horizon} must exceed T1 + T2 = {t1} + {t2} at alpha={alpha}, delta={delta}, d={vc_dimension}"
            ));
        }
        let probe = Probe::new(view.clone(), alpha, delta, vc_dimension);
        Ok(April { view, params, t1, t2, state: State::Probing(probe) })
    }

    pub fn params(&self) -> AprilParams {
        self.params
    }

    pub fn budgets(&self) -> (usize, usize) {
        (self.t1, self.t2)
    }

    pub fn phase(&self) -> Phase {
        self.state.phase()
    }

    /// Stage 1/2 results once stage 2 (or an empty `H1`) has ended.
    pub fn outcome(&self) -> Option<&ProbeOutcome> {
        self.state.outcome()
    }
}

impl Learner for April {
    fn name(&self) -> &str {
        "april"
    }

    fn propose(&mut self, _round: usize) -> Play {
        self.state.play()
    }

    fn observe(&mut self, events: &[FeedbackEvent]) {
        match &mut self.state {
            State::Probing(p) => {
                if let Some(outcome) = p.observe(events) {
                    self.state = State::commit(&self.view, Some(outcome));
                }
            }
            State::Exploit(e) => e.observe(events),
            State::Fallback(_) => {}
        }
    }
}

/// Binary search for the largest feasible margin over `[α⋆, 1]`. Each probe
/// runs stages 1 and 2 at the midpoint; a nonempty `Ĥ` moves the lower end
/// up. The search stops once the interval is narrower than `α⋆` or the next
/// probe would not fit in the horizon, and the best feasible probe is
/// committed to stage 3.
#[derive(Clone, Debug)]
pub struct AprilAuto {
    view: Arc<ClassView>,
    delta: f64,
    horizon: usize,
    vc_dimension: usize,
    alpha_star: f64,
    lo: f64,
    hi: f64,
    used: usize,
    probes: usize,
    best: Option<ProbeOutcome>,
    state: State,
}

impl AprilAuto {
    pub fn new(view: Arc<ClassView>, delta: f64, horizon: usize, vc_dimension: usize) -> Result<AprilAuto> {
        if !(delta > 0.0 && delta < 1.0) {
            return config(alloc::format!("april-auto: delta must lie in (0, 1), got {delta}"));
        }
        let alpha_star = alpha_star(vc_dimension, horizon, delta);
        if alpha_star.is_nan() || alpha_star > 1.0 {
            return config(alloc::format!(
                "april-auto: horizon {horizon} too short, alpha* = {alpha_star:.4} exceeds 1"
            ));
        }
        let mut auto = AprilAuto {
            view,
            delta,
            horizon,
            vc_dimension,
            alpha_star,
            lo: alpha_star,
            hi: 1.0,
            used: 0,
            probes: 0,
            best: None,
            state: State::Fallback(None),
        };
        auto.advance();
        Ok(auto)
    }

    pub fn alpha_star(&self) -> f64 {
        self.alpha_star
    }

    pub fn probes_run(&self) -> usize {
        self.probes
    }

    pub fn phase(&self) -> Phase {
        self.state.phase()
    }

    /// The margin of the committed probe, once the search is over.
    pub fn chosen(&self) -> Option<&ProbeOutcome> {
        match &self.state {
            State::Probing(_) => None,
            _ => self.best.as_ref(),
        }
    }

    /// Start the next probe, or commit when the search is over.
    fn advance(&mut self) {
        if self.hi - self.lo >= self.alpha_star {
            let mid = 0.5 * (self.lo + self.hi);
            let probe = Probe::new(self.view.clone(), mid, self.delta, self.vc_dimension);
            if self.used + probe.t1 + probe.t2 <= self.horizon {
                self.probes += 1;
                self.state = State::Probing(probe);
                return;
            }
        }
        self.state = State::commit(&self.view, self.best.clone());
    }
}

impl Learner for AprilAuto {
    fn name(&self) -> &str {
        "april-auto"
    }

    fn propose(&mut self, _round: usize) -> Play {
        self.state.play()
    }

    fn observe(&mut self, events: &[FeedbackEvent]) {
        match &mut self.state {
            State::Probing(p) => {
                self.used += 1;
                if let Some(outcome) = p.observe(events) {
                    if outcome.feasible() {
                        self.lo = outcome.alpha;
                        self.best = Some(outcome);
                    } else {
                        self.hi = outcome.alpha;
                    }
                    self.advance();
                }
            }
            State::Exploit(e) => e.observe(events),
            State::Fallback(_) => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budgets_match_hand_evaluation() {
        assert_eq!(stage_budgets(1.0, 0.5, 1), (400, 45));
        let (t1, _) = stage_budgets(0.5, 0.1, 0);
        assert_eq!(t1, libm::ceil(256.0 * 40f64.ln()) as usize);
    }

    #[test]
    fn alpha_star_decreases_with_horizon() {
        let a = alpha_star(3, 1_000, 0.1);
        let b = alpha_star(3, 1_000_000, 0.1);
        assert!(b < a);
        let t = 1e6f64;
        let expect = ((3.0 * (2.0 * core::f64::consts::E * t / 3.0).ln() + (t / 0.1).ln()) / t).powf(0.25);
        assert!((b - expect).abs() < 1e-12);
    }
}
