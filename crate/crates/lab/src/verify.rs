//! A fast self-check of the oracles and invariants, run by `prset verify`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};

use prset_core::harness::{aggregate, compute_optimal, run_experiment, run_trial, RunConfig, Scenario};
use prset_core::hypothesis::{littlestone_dimension, powerset_class, star_class, vc_dimension};
use prset_core::learners::{adapter_block_len, stage_budgets, HalvingReduction, Learner, OnlineRule, Play};
use prset_core::rng::{Rng as CoreRng, LANE_FEEDBACK, LANE_SCENARIO};
use prset_core::{ClassView, Environment, FeedbackMode, ItemSet, Ratio, RngStream};

use crate::emit::sig6;

pub struct CheckResult {
    pub name: &'static str,
    pub outcome: Result<(), String>,
}

type Check = fn() -> Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exact_metrics() -> Result<(), String> {
    let mut rng = CoreRng::seed_from_u64(1);
    for case in 0..300 {
        let u = rng.gen_range(1..=64usize);
        let pick = |rng: &mut CoreRng, p: f64| -> Vec<bool> { (0..u).map(|_| rng.gen_bool(p)).collect() };
        let x = pick(&mut rng, 0.8);
        let t: Vec<bool> = pick(&mut rng, 0.4).iter().zip(&x).map(|(a, b)| *a && *b).collect();
        let n = pick(&mut rng, 0.5);
        let to_set = |v: &[bool]| ItemSet::from_items(u, (0..u).filter(|&i| v[i])).unwrap();
        let env = Environment::new(to_set(&x), to_set(&t), FeedbackMode::Simplified).map_err(|e| e.to_string())?;
        let played = to_set(&n);
        let overlap = (0..u).filter(|&i| n[i] && x[i] && t[i]).count() as u64;
        let size = (0..u).filter(|&i| n[i] && x[i]).count() as u64;
        let tsize = t.iter().filter(|&&b| b).count() as u64;
        let r = if tsize == 0 { Ratio::ONE } else { Ratio::new(overlap, tsize) };
        let p = if size == 0 { Ratio::ONE } else { Ratio::new(overlap, size) };
        let c = env.counts(&played).map_err(|e| e.to_string())?;
        ensure(c.recall() == r && c.precision() == p && c.reward() == r.midpoint(p), || {
            format!("case {case}: metrics disagree with the counting oracle")
        })?;
    }
    Ok(())
}

fn dimensions() -> Result<(), String> {
    for d in 0..=6 {
        let c = powerset_class(d).unwrap();
        let got = vc_dimension(&c, &ItemSet::full(d)).map_err(|e| e.to_string())?;
        ensure(got == d, || format!("VC(powerset({d})) = {got}"))?;
        if d <= 4 {
            let l = littlestone_dimension(&c, &ItemSet::full(d)).map_err(|e| e.to_string())?;
            ensure(l == d, || format!("Ldim(powerset({d})) = {l}"))?;
        }
    }
    for n in 1..=10 {
        let c = star_class(n).unwrap();
        let got = vc_dimension(&c, &ItemSet::full(n + 1)).map_err(|e| e.to_string())?;
        ensure(got == 1, || format!("VC(star({n})) = {got}"))?;
    }
    Ok(())
}

fn star_counterexample() -> Result<(), String> {
    let class = Arc::new(star_class(50).unwrap());
    let scenario = Scenario::fixed(class, ItemSet::full(51), &[0], FeedbackMode::Simplified).map_err(|e| e.to_string())?;
    for (learner, expect) in [("min-consistent", 0.0), ("max-consistent", 250.0)] {
        let cfg = RunConfig {
            scenario: scenario.clone(),
            learner: learner.parse().map_err(|e: prset_core::Error| e.to_string())?,
            horizon: 1000,
            trials: 2,
            master_seed: 3,
        };
        let records = run_experiment(&cfg).map_err(|e| e.to_string())?;
        ensure(records.iter().all(|r| r.final_regret == expect), || {
            format!("{learner}: final regrets {:?}", records.iter().map(|r| r.final_regret).collect::<Vec<_>>())
        })?;
    }
    Ok(())
}

fn singleton_probe() -> Result<(), String> {
    let d = 6;
    let scenario = Scenario::realizable(Arc::new(powerset_class(d).unwrap()), ItemSet::full(d), FeedbackMode::Simplified)
        .map_err(|e| e.to_string())?;
    let spec = "singleton-probe".parse().map_err(|e: prset_core::Error| e.to_string())?;
    for trial in 0..20 {
        let r = run_trial(&scenario, &spec, 100, 4, trial).map_err(|e| e.to_string())?;
        ensure(r.final_regret <= d as f64, || format!("trial {trial}: regret {}", r.final_regret))?;
    }
    Ok(())
}

fn formulas() -> Result<(), String> {
    ensure(stage_budgets(1.0, 0.5, 1) == (400, 45), || format!("budgets {:?}", stage_budgets(1.0, 0.5, 1)))?;
    ensure(adapter_block_len(1000, 0.1) == 15, || format!("block length {}", adapter_block_len(1000, 0.1)))
}

fn halving_mistakes() -> Result<(), String> {
    let d = 4;
    let view = Arc::new(ClassView::new(Arc::new(powerset_class(d).unwrap()), ItemSet::full(d)).unwrap());
    for seed in 0..30u64 {
        let stream = RngStream::new(5, seed);
        let mask = stream.lane(LANE_SCENARIO).gen_range(0..1usize << d);
        let target = view.hypothesis(mask).clone();
        let env = Environment::new(ItemSet::full(d), target, FeedbackMode::Simplified).unwrap();
        let mut rng = stream.lane(LANE_FEEDBACK);
        let mut h = HalvingReduction::new(view.clone(), OnlineRule::Halving).map_err(|e| e.to_string())?;
        for t in 1..=200 {
            let Play::Set(s) = h.propose(t) else { return Err("halving played a non-set".into()) };
            h.observe(&env.step(t, &s, &mut rng).map_err(|e| e.to_string())?);
        }
        ensure(h.mistakes() <= d, || format!("seed {seed}: {} mistakes", h.mistakes()))?;
    }
    Ok(())
}

fn optimum() -> Result<(), String> {
    let class = Arc::new(star_class(5).unwrap());
    let view = ClassView::new(class, ItemSet::full(6)).unwrap();
    let env = Environment::new(ItemSet::full(6), ItemSet::from_items(6, [0]).unwrap(), FeedbackMode::Simplified).unwrap();
    let r = compute_optimal(&view, &env);
    ensure(r.best_index == 0 && r.g_star == Ratio::ONE && r.alpha() == 1.0, || format!("{r:?}"))
}

fn determinism() -> Result<(), String> {
    let scenario = Scenario::realizable(Arc::new(powerset_class(4).unwrap()), ItemSet::full(4), FeedbackMode::Original)
        .map_err(|e| e.to_string())?;
    let cfg = RunConfig {
        scenario,
        learner: "exp3".parse().map_err(|e: prset_core::Error| e.to_string())?,
        horizon: 200,
        trials: 3,
        master_seed: 6,
    };
    let a = run_experiment(&cfg).map_err(|e| e.to_string())?;
    let b = run_experiment(&cfg).map_err(|e| e.to_string())?;
    ensure(a == b, || "equal seeds gave different records".into())
}

fn aggregation_and_format() -> Result<(), String> {
    let c = aggregate(&[vec![1.0, 2.5]]).map_err(|e| e.to_string())?;
    ensure(c.ci_low == c.mean && c.ci_high == c.mean, || "single curve has a band".into())?;
    for x in [1.0 / 3.0, 250.0, -0.0123456789, 98765.4321] {
        let back: f64 = sig6(x).parse().map_err(|_| format!("unparsable {}", sig6(x)))?;
        ensure((back - x).abs() <= 5e-6 * x.abs(), || format!("{x} -> {}", sig6(x)))?;
    }
    Ok(())
}

const CHECKS: &[(&str, Check)] = &[
    ("exact metrics agree with a counting oracle", exact_metrics),
    ("dimension oracles on powerset and star classes", dimensions),
    ("star class: minimal vs maximal consistent regret", star_counterexample),
    ("singleton probe regret at most d", singleton_probe),
    ("stage budgets and adapter block length", formulas),
    ("halving mistake bound", halving_mistakes),
    ("optimum on the star class", optimum),
    ("equal seeds give equal records", determinism),
    ("aggregation and number formatting", aggregation_and_format),
];

pub fn run_all() -> Vec<CheckResult> {
    CHECKS
        .iter()
        .map(|(name, check)| CheckResult { name, outcome: check() })
        .collect()
}
