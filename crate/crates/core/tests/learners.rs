use std::sync::Arc;

use rand::Rng as _;

use prset_core::harness::{prepare_trial, run_trial, run_trial_summary, simulate, Scenario, World};
use prset_core::hypothesis::{powerset_class, HypothesisClass};
use prset_core::learners::{
    alpha_star, stage_budgets, April, AprilAuto, AprilParams, ConsistentLearner, HalvingReduction, Learner,
    LearnerSpec, OnlineRule, Phase, Play, SingletonProbe, SizePreference,
};
use prset_core::model::FeedbackType;
use prset_core::rng::{LANE_FEEDBACK, LANE_SCENARIO};
use prset_core::{ClassView, FeedbackEvent, FeedbackKind, FeedbackMode, ItemSet, RngStream};

const ALL: [&str; 10] = [
    "halving",
    "soa",
    "min-consistent",
    "max-consistent",
    "singleton-probe",
    "exp3",
    "april:alpha=1,delta=0.2",
    "april-auto:delta=0.2",
    "empty",
    "full",
];

fn powerset_scenario(d: usize, mode: FeedbackMode) -> Scenario {
    let class = Arc::new(powerset_class(d).unwrap());
    Scenario::realizable(class, ItemSet::full(d), mode).unwrap().with_vc_dimension(d)
}

fn proposals(spec: &str, mode: FeedbackMode, seed: u64) -> Vec<Play> {
    let scenario = powerset_scenario(3, mode);
    let spec: LearnerSpec = spec.parse().unwrap();
    let horizon = 1500;
    let mut p = prepare_trial(&scenario, &spec, horizon, seed, 4).unwrap();
    let mut out = Vec::new();
    simulate(&p.instance.env, scenario.view(), &mut p.learner, horizon, &mut p.feedback_rng, |o| {
        out.push(o.play.clone())
    })
    .unwrap();
    out
}

#[test]
fn equal_seeds_give_equal_proposals() {
    for spec in ALL {
        assert_eq!(proposals(spec, FeedbackMode::Simplified, 5), proposals(spec, FeedbackMode::Simplified, 5), "{spec}");
    }
    let adapted = "adapter:min-consistent";
    assert_eq!(proposals(adapted, FeedbackMode::Original, 5), proposals(adapted, FeedbackMode::Original, 5));
    assert_ne!(proposals("exp3", FeedbackMode::Simplified, 5), proposals("exp3", FeedbackMode::Simplified, 6));
}

fn random_event(rng: &mut impl rand::Rng, round: usize, universe: usize) -> FeedbackEvent {
    let kind = match rng.gen_range(0..4) {
        0 => FeedbackKind::EmptyConvention { which: FeedbackType::Recall },
        1 => FeedbackKind::EmptyConvention { which: FeedbackType::Precision },
        2 => FeedbackKind::Recall { item: rng.gen_range(0..universe), hit: rng.gen() },
        _ => FeedbackKind::Precision { item: rng.gen_range(0..universe), label: rng.gen() },
    };
    let reward = match kind {
        FeedbackKind::EmptyConvention { .. } => true,
        FeedbackKind::Recall { hit, .. } => hit,
        FeedbackKind::Precision { label, .. } => label,
    };
    FeedbackEvent { round, kind, reward }
}

fn assert_valid(play: &Play, view: &ClassView) {
    match play {
        Play::Hypothesis(i) => assert!(*i < view.len()),
        Play::Set(s) => assert_eq!(s.universe_size(), view.universe_size()),
        Play::Empty | Play::Available => {}
    }
}

/// Arbitrary, mostly inconsistent event streams heavy in empty-set events.
#[test]
fn learners_tolerate_empty_convention_and_garbage_feedback() {
    for (spec, mode) in ALL
        .iter()
        .map(|s| (*s, FeedbackMode::Simplified))
        .chain([("adapter:halving", FeedbackMode::Original), ("adapter:exp3", FeedbackMode::Original)])
    {
        let scenario = powerset_scenario(3, mode);
        let spec: LearnerSpec = spec.parse().unwrap();
        for seed in 0..5 {
            let mut p = prepare_trial(&scenario, &spec, 3000, seed, 0).unwrap();
            let mut rng = RngStream::new(seed, 99).lane(LANE_FEEDBACK);
            for t in 1..=3000 {
                let play = p.learner.propose(t);
                assert_valid(&play, scenario.view());
                let n = rng.gen_range(0..3);
                let events: Vec<FeedbackEvent> = (0..n).map(|_| random_event(&mut rng, t, 3)).collect();
                p.learner.observe(&events);
            }
        }
    }
}

#[test]
fn learners_run_against_an_empty_target() {
    let class = Arc::new(powerset_class(3).unwrap());
    for mode in [FeedbackMode::Simplified, FeedbackMode::Original] {
        let scenario = Scenario::fixed(class.clone(), ItemSet::full(3), &[], mode).unwrap().with_vc_dimension(3);
        for spec in ALL.iter().copied().chain(["adapter:max-consistent"]) {
            if spec.starts_with("adapter") && mode == FeedbackMode::Simplified {
                continue;
            }
            let spec: LearnerSpec = spec.parse().unwrap();
            let s = run_trial_summary(&scenario, &spec, 2000, 3, 0, false).unwrap();
            assert!(s.final_regret.is_finite() && s.final_regret >= 0.0, "{spec}");
        }
    }
}

/// Realizable runs: the version space never regains a hypothesis and never
/// loses the planted one; the smallest consistent size never decreases.
#[test]
fn version_spaces_shrink_monotonically_and_keep_the_target() {
    for d in [3usize, 5] {
        let class = Arc::new(powerset_class(d).unwrap());
        let view = Arc::new(ClassView::new(class, ItemSet::full(d)).unwrap());
        let scenario = Scenario::with_view(
            view.clone(),
            prset_core::harness::TargetGenerator::RealizableRandom { distribution: Default::default() },
            FeedbackMode::Simplified,
        )
        .unwrap();
        for trial in 0..20u64 {
            let stream = RngStream::new(21, trial);
            let inst = scenario.generate(&mut stream.lane(LANE_SCENARIO)).unwrap();
            let planted = (0..view.len()).find(|&i| view.hypothesis(i) == inst.env.target()).unwrap();
            let mut rng = stream.lane(LANE_FEEDBACK);
            let mut halving = HalvingReduction::new(view.clone(), OnlineRule::Halving).unwrap();
            let mut minimal = ConsistentLearner::new(view.clone(), SizePreference::Smallest);
            let mut prev_h: Vec<usize> = halving.version_space().iter().collect();
            let mut prev_m: Vec<usize> = minimal.version_space().iter().collect();
            let mut prev_size = 0;
            for t in 1..=300 {
                let Play::Set(s) = halving.propose(t) else { panic!() };
                let events = inst.env.step(t, &s, &mut rng).unwrap();
                halving.observe(&events);
                let Play::Hypothesis(i) = minimal.propose(t) else { panic!() };
                assert!(view.size(i) >= prev_size);
                prev_size = view.size(i);
                let events = inst.env.step(t, view.hypothesis(i), &mut rng).unwrap();
                minimal.observe(&events);
                for (prev, now) in [
                    (&mut prev_h, halving.version_space().iter().collect::<Vec<_>>()),
                    (&mut prev_m, minimal.version_space().iter().collect::<Vec<_>>()),
                ] {
                    assert!(now.iter().all(|i| prev.contains(i)));
                    assert!(now.contains(&planted));
                    *prev = now;
                }
            }
        }
    }
}

#[test]
fn april_phases_switch_at_the_budgets() {
    let d = 2;
    let (alpha, delta) = (1.0, 0.1);
    let (t1, t2) = stage_budgets(alpha, delta, d);
    assert_eq!(t1, (64.0 * (2.0 * 128f64.ln() + 40f64.ln())).ceil() as usize);
    assert_eq!(t2, (64.0 * 10f64.ln()).ceil() as usize);
    let scenario = powerset_scenario(d, FeedbackMode::Simplified);
    let view = scenario.view().clone();
    for trial in 0..10u64 {
        let stream = RngStream::new(31, trial);
        let inst = scenario.generate(&mut stream.lane(LANE_SCENARIO)).unwrap();
        let mut rng = stream.lane(LANE_FEEDBACK);
        let params = AprilParams { alpha, delta, horizon: t1 + t2 + 50, vc_dimension: d };
        let mut april = April::new(view.clone(), params).unwrap();
        for t in 1..=params.horizon {
            let expected = if t <= t1 {
                Phase::Stage1
            } else if t <= t1 + t2 {
                Phase::Stage2
            } else {
                Phase::Stage3
            };
            let phase = april.phase();
            assert!(phase == expected || (phase == Phase::Fallback && t > t1), "round {t}: {phase:?}");
            let play = april.propose(t);
            let set = match &play {
                Play::Hypothesis(i) => view.hypothesis(*i).clone(),
                Play::Empty => ItemSet::empty(d),
                _ => unreachable!(),
            };
            if t <= t1 {
                assert_eq!(play, Play::Hypothesis(0));
            }
            april.observe(&inst.env.step(t, &set, &mut rng).unwrap());
        }
        let o = april.outcome().unwrap();
        assert!(o.h_hat.iter().all(|i| o.h1.contains(i)));
        // With an empty target the probe set is `∅`, stage 2 sees no labels
        // and `∅` (optimal here) is played from then on.
        let expected = if inst.env.target().is_empty() { Phase::Fallback } else { Phase::Stage3 };
        assert_eq!(april.phase(), expected);
    }
}

#[test]
fn april_rejects_out_of_domain_parameters() {
    let view = powerset_scenario(2, FeedbackMode::Simplified).view().clone();
    let ok = AprilParams { alpha: 1.0, delta: 0.1, horizon: 100_000, vc_dimension: 2 };
    assert!(April::new(view.clone(), ok).is_ok());
    for bad in [
        AprilParams { alpha: 0.0, ..ok },
        AprilParams { alpha: 1.5, ..ok },
        AprilParams { delta: 1.0, ..ok },
        AprilParams { delta: 0.0, ..ok },
        AprilParams { horizon: 1000, ..ok },
    ] {
        assert!(April::new(view.clone(), bad).is_err(), "{bad:?}");
    }
}

/// A world where every hypothesis loses to the empty set: the filters empty
/// out and the learner falls back to `∅`, earning exactly ½ per round.
#[test]
fn april_falls_back_when_no_hypothesis_beats_the_trivial_sets() {
    let scenario = Scenario::bandit_world(10, 720, 0.1, World::I, FeedbackMode::Simplified).unwrap();
    let spec: LearnerSpec = "april:alpha=0.5,delta=0.1".parse().unwrap();
    for trial in 0..5 {
        let rec = run_trial(&scenario, &spec, 8000, 41, trial).unwrap();
        assert!(rec.optimum.g_star.to_f64() < 0.5);
        let (t1, _) = stage_budgets(0.5, 0.1, 1);
        assert!(rec.rounds[t1..].iter().all(|r| r.play == prset_core::harness::PlayRecord::Empty && r.g == 0.5));
    }
}

fn drive_until_committed(auto: &mut AprilAuto, scenario: &Scenario, seed: u64) {
    let stream = RngStream::new(seed, 0);
    let mut inst = scenario.generate(&mut stream.lane(LANE_SCENARIO)).unwrap();
    let mut draws = 1;
    while inst.env.target().is_empty() {
        inst = scenario.generate(&mut RngStream::new(seed, draws).lane(LANE_SCENARIO)).unwrap();
        draws += 1;
    }
    let mut rng = stream.lane(LANE_FEEDBACK);
    let view = scenario.view();
    let mut t = 0;
    while matches!(auto.phase(), Phase::Stage1 | Phase::Stage2) {
        t += 1;
        let set = match auto.propose(t) {
            Play::Hypothesis(i) => view.hypothesis(i).clone(),
            other => panic!("probe played {other:?}"),
        };
        auto.observe(&inst.env.step(t, &set, &mut rng).unwrap());
    }
}

#[test]
fn autotune_settles_near_one_on_realizable_scenarios() {
    let scenario = powerset_scenario(2, FeedbackMode::Simplified);
    let horizon = 1_000_000;
    let delta = 0.1;
    for seed in 0..3 {
        let mut auto = AprilAuto::new(scenario.view().clone(), delta, horizon, 2).unwrap();
        let a_star = alpha_star(2, horizon, delta);
        assert_eq!(auto.alpha_star(), a_star);
        drive_until_committed(&mut auto, &scenario, seed);
        assert_eq!(auto.phase(), Phase::Stage3);
        let chosen = auto.chosen().unwrap().alpha;
        assert!(chosen >= 1.0 - a_star, "chosen {chosen}, alpha* {a_star}");
        assert!(auto.probes_run() <= (1.0 / a_star).log2().ceil() as usize);
    }
}

#[test]
fn autotune_falls_back_when_every_probe_fails() {
    let scenario = Scenario::bandit_world(10, 720, 0.1, World::I, FeedbackMode::Simplified).unwrap();
    let horizon = 100_000;
    let mut auto = AprilAuto::new(scenario.view().clone(), 0.1, horizon, 1).unwrap();
    drive_until_committed(&mut auto, &scenario, 1);
    assert_eq!(auto.phase(), Phase::Fallback);
    assert!(auto.chosen().is_none());
    assert!(auto.probes_run() >= 1);
    assert!(auto.probes_run() <= (1.0 / auto.alpha_star()).log2().ceil() as usize);
    assert_eq!(auto.propose(1), Play::Empty);
}

#[test]
fn singleton_probe_regret_is_at_most_the_dimension() {
    for d in [0usize, 1, 4, 7] {
        let scenario = powerset_scenario(d, FeedbackMode::Simplified);
        let spec: LearnerSpec = "singleton-probe".parse().unwrap();
        for trial in 0..20 {
            let rec = run_trial(&scenario, &spec, 200, 51, trial).unwrap();
            assert!(rec.final_regret <= d as f64 + 1e-12, "d={d}: {}", rec.final_regret);
            if d == 0 {
                assert!(rec.rounds.iter().all(|r| r.play == prset_core::harness::PlayRecord::Set { items: vec![] }));
                assert_eq!(rec.final_regret, 0.0);
            }
        }
    }
    // After d answered probes the learned set is the target.
    let d = 5;
    let scenario = powerset_scenario(d, FeedbackMode::Original);
    let stream = RngStream::new(52, 0);
    let inst = scenario.generate(&mut stream.lane(LANE_SCENARIO)).unwrap();
    let mut rng = stream.lane(LANE_FEEDBACK);
    let mut probe = SingletonProbe::new(&ItemSet::full(d));
    let mut t = 0;
    while !probe.is_settled() {
        t += 1;
        let Play::Set(s) = probe.propose(t) else { panic!() };
        assert_eq!(s.len(), 1);
        probe.observe(&inst.env.step(t, &s, &mut rng).unwrap());
    }
    assert_eq!(probe.learned(), inst.env.target());
}

/// On a powerset class the full set stays consistent with every recall item,
/// so the largest-consistent rule keeps playing `X`.
#[test]
fn max_consistent_on_powerset_keeps_the_full_set() {
    let d = 4;
    let scenario = powerset_scenario(d, FeedbackMode::Simplified);
    let spec: LearnerSpec = "max-consistent".parse().unwrap();
    let full = (1usize << d) - 1;
    for trial in 0..10 {
        let rec = run_trial(&scenario, &spec, 500, 61, trial).unwrap();
        assert!(rec.rounds.iter().all(|r| r.play == prset_core::harness::PlayRecord::Hypothesis { index: full }));
    }
}

fn exp3_mean_regret(class: &Arc<HypothesisClass>, target: &[usize], horizon: usize, trials: usize) -> f64 {
    let u = class.universe_size();
    let scenario = Scenario::fixed(class.clone(), ItemSet::full(u), target, FeedbackMode::Simplified).unwrap();
    let spec: LearnerSpec = "exp3".parse().unwrap();
    (0..trials)
        .map(|i| run_trial_summary(&scenario, &spec, horizon, 71, i, false).unwrap().final_regret)
        .sum::<f64>()
        / trials as f64
}

/// Hypothesis `i` holds `i` target items and `K − 1 − i` others, so rewards
/// are distinct and increase with the index.
fn graded_class(k: usize) -> (Arc<HypothesisClass>, Vec<usize>) {
    let u = 2 * k;
    let lists: Vec<Vec<usize>> = (0..k).map(|i| (0..=i).chain(k + i..2 * k).collect()).collect();
    (Arc::new(HypothesisClass::from_item_lists(u, &lists).unwrap()), (0..k).collect())
}

#[test]
fn exp3_average_regret_vanishes() {
    let (class, target) = graded_class(4);
    let short = exp3_mean_regret(&class, &target, 2000, 100) / 2000.0;
    let long = exp3_mean_regret(&class, &target, 8000, 100) / 8000.0;
    assert!(long <= 0.6 * short, "per-round regret {short} at T=2000, {long} at T=8000");
}

#[test]
fn exp3_regret_scales_with_the_number_of_arms() {
    let horizon = 4000;
    let mut points = Vec::new();
    for k in [4usize, 16, 64] {
        let (class, target) = graded_class(k);
        let r = exp3_mean_regret(&class, &target, horizon, 40);
        let bound = (2.0 * horizon as f64 * k as f64 * (k as f64).ln()).sqrt();
        assert!(r <= bound, "K={k}: regret {r} above {bound}");
        points.push(((k as f64 * (k as f64).ln()).ln(), r.ln()));
    }
    let slope = (points[2].1 - points[0].1) / (points[2].0 - points[0].0);
    assert!(slope <= 0.75, "regret grows faster than sqrt(K ln K): slope {slope}");
    assert!(points[2].1 > points[0].1);
}
