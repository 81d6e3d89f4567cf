use std::collections::HashMap;
use std::sync::Arc;

use prset_core::harness::{
    aggregate, compute_optimal, run_trial_summary, Scenario, TargetGenerator, World,
};
use prset_core::hypothesis::{powerset_class, star_class, HypothesisClass};
use prset_core::learners::LearnerSpec;
use prset_core::rng::LANE_SCENARIO;
use prset_core::{ClassView, Environment, FeedbackMode, ItemSet, Ratio, RngStream};

#[test]
fn lbvc_targets_are_uniform_half_subsets() {
    let s = Scenario::lbvc(4, FeedbackMode::Simplified).unwrap();
    let mut rng = RngStream::new(1, 0).lane(LANE_SCENARIO);
    let n = 10_000;
    let mut freq: HashMap<Vec<usize>, usize> = HashMap::new();
    for _ in 0..n {
        let inst = s.generate(&mut rng).unwrap();
        assert_eq!(inst.env.target().len(), 2);
        let report = compute_optimal(s.view(), &inst.env);
        assert_eq!(report.g_star, Ratio::ONE);
        *freq.entry(inst.env.target().to_vec()).or_default() += 1;
    }
    assert_eq!(freq.len(), 6);
    for (subset, count) in freq {
        assert!((count as f64 / n as f64 - 1.0 / 6.0).abs() <= 0.02, "{subset:?}: {count}");
    }
}

#[test]
fn bandit_world_one_metrics() {
    let (k, n, eps) = (100, 990, 0.1);
    let s = Scenario::bandit_world(k, n, eps, World::I, FeedbackMode::Simplified).unwrap();
    let inst = s.generate(&mut RngStream::new(2, 0).lane(LANE_SCENARIO)).unwrap();
    assert_eq!(inst.env.target().len(), k * n / 2);
    let first = s.view().hypothesis(0);
    // r(N_1) = (1 + 2ε)/k and p(N_1) = ½ + ε.
    assert_eq!(inst.env.recall(first).unwrap(), Ratio::new(12, 1000));
    assert_eq!(inst.env.precision(first).unwrap(), Ratio::new(6, 10));
    let report = compute_optimal(s.view(), &inst.env);
    assert_eq!(report.best_index, 0);
    assert_eq!(report.g_star, Ratio::new(306, 1000));
    assert!((report.alpha() - -0.388).abs() < 1e-12);
    assert_eq!(report.g_empty, Ratio::HALF);
}

#[test]
fn bandit_world_two_keeps_the_target_size() {
    let (k, n) = (5, 40);
    let s = Scenario::bandit_world(k, n, 0.1, World::II, FeedbackMode::Simplified).unwrap();
    for trial in 0..10 {
        let inst = s.generate(&mut RngStream::new(3, trial).lane(LANE_SCENARIO)).unwrap();
        assert_eq!(inst.env.target().len(), k * n / 2);
        assert_eq!(compute_optimal(s.view(), &inst.env).best_index, 2);
    }
}

#[test]
fn appendix_c_shapes() {
    for core_only in [false, true] {
        let s = Scenario::appendix_c(5, 16, core_only, FeedbackMode::Simplified).unwrap();
        assert_eq!(s.view().len(), 32);
        assert_eq!(s.vc_dimension(), Some(5));
        let inst = s.generate(&mut RngStream::new(4, 0).lane(LANE_SCENARIO)).unwrap();
        assert!(inst.env.target().is_subset(s.view().available()).unwrap());
        assert_eq!(s.view().hypothesis(inst.planted.unwrap()), inst.env.target());
    }
}

#[test]
fn appendix_c_full_domain_is_identified_quickly() {
    let s = Scenario::appendix_c(8, 512, false, FeedbackMode::Simplified).unwrap();
    let spec: LearnerSpec = "min-consistent".parse().unwrap();
    let trials = 100;
    let good = (0..trials)
        .filter(|&i| run_trial_summary(&s, &spec, 100, 5, i, false).unwrap().final_regret <= 2.0)
        .count();
    assert!(good as f64 >= 0.95 * trials as f64, "{good}/{trials}");
}

#[test]
fn appendix_c_core_regret_grows_with_dimension() {
    let spec: LearnerSpec = "min-consistent".parse().unwrap();
    let means: Vec<f64> = [2usize, 4, 6]
        .iter()
        .map(|&d| {
            let s = Scenario::appendix_c(d, 4, true, FeedbackMode::Simplified).unwrap();
            (0..300).map(|i| run_trial_summary(&s, &spec, 200, 6, i, false).unwrap().final_regret).sum::<f64>() / 300.0
        })
        .collect();
    assert!(means[0] < means[1] && means[1] < means[2], "{means:?}");
}

/// Independent optimum: recount every metric item by item and compare
/// rewards as exact fractions `(num, den)`.
fn naive_best(class: &HypothesisClass, x: &[bool], target: &[bool]) -> (usize, f64, f64, f64) {
    let g = |members: &dyn Fn(usize) -> bool| -> (u128, u128) {
        let (mut overlap, mut size, mut tsize) = (0u128, 0u128, 0u128);
        for i in 0..x.len() {
            if target[i] {
                tsize += 1;
            }
            if x[i] && members(i) {
                size += 1;
                if target[i] {
                    overlap += 1;
                }
            }
        }
        let (rn, rd) = if tsize == 0 { (1, 1) } else { (overlap, tsize) };
        let (pn, pd) = if size == 0 { (1, 1) } else { (overlap, size) };
        (rn * pd + pn * rd, 2 * rd * pd)
    };
    let f = |(n, d): (u128, u128)| n as f64 / d as f64;
    let mut best = (0, (0u128, 1u128));
    for (i, h) in class.hypotheses().iter().enumerate() {
        let v = g(&|j| h.contains(j));
        if i == 0 || v.0 * best.1 .1 > best.1 .0 * v.1 {
            best = (i, v);
        }
    }
    (best.0, f(best.1), f(g(&|_| false)), f(g(&|_| true)))
}

#[test]
fn optimum_agrees_with_naive_search() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut corpus: Vec<(Arc<HypothesisClass>, ItemSet, ItemSet)> = Vec::new();
    for _ in 0..200 {
        let u = rng.gen_range(1..40);
        let k = rng.gen_range(1..30);
        let lists: Vec<Vec<usize>> = (0..k).map(|_| (0..u).filter(|_| rng.gen_bool(0.4)).collect()).collect();
        let x = ItemSet::from_items(u, (0..u).filter(|_| rng.gen_bool(0.8))).unwrap();
        let t = ItemSet::from_items(u, x.iter().filter(|_| rng.gen_bool(0.3))).unwrap();
        corpus.push((Arc::new(HypothesisClass::from_item_lists(u, &lists).unwrap()), x, t));
    }
    for (class, u) in [(star_class(9).unwrap(), 10), (powerset_class(4).unwrap(), 4)] {
        for mask in 0..16u32 {
            let t = ItemSet::from_items(u, (0..u.min(4)).filter(|j| mask >> j & 1 == 1)).unwrap();
            corpus.push((Arc::new(class.clone()), ItemSet::full(u), t));
        }
    }
    for (class, x, t) in corpus {
        let u = class.universe_size();
        let view = ClassView::new(class.clone(), x.clone()).unwrap();
        let env = Environment::new(x.clone(), t.clone(), FeedbackMode::Simplified).unwrap();
        let report = compute_optimal(&view, &env);
        let xb: Vec<bool> = (0..u).map(|i| x.contains(i)).collect();
        let tb: Vec<bool> = (0..u).map(|i| t.contains(i)).collect();
        let (best, g, g_empty, g_x) = naive_best(&class, &xb, &tb);
        assert_eq!(report.best_index, best);
        assert!((report.g_star.to_f64() - g).abs() < 1e-12);
        assert!((report.g_empty.to_f64() - g_empty).abs() < 1e-12);
        assert!((report.g_available.to_f64() - g_x).abs() < 1e-12);
        assert!((-1.0..=1.0).contains(&report.alpha()));
    }
}

#[test]
fn band_width_shrinks_like_inverse_root_of_trials() {
    let class = Arc::new(powerset_class(4).unwrap());
    let s = Scenario::realizable(class, ItemSet::full(4), FeedbackMode::Simplified).unwrap();
    let spec: LearnerSpec = "exp3".parse().unwrap();
    let curves: Vec<Vec<f64>> = (0..160)
        .map(|i| run_trial_summary(&s, &spec, 50, 8, i, true).unwrap().curve.unwrap())
        .collect();
    let width = |n: usize| {
        let c = aggregate(&curves[..n]).unwrap();
        c.ci_high[49] - c.ci_low[49]
    };
    let (w10, w40, w160) = (width(10), width(40), width(160));
    for (a, b) in [(w10, w40), (w40, w160)] {
        let ratio = a / b;
        assert!((1.4..=2.8).contains(&ratio), "widths {w10} {w40} {w160}");
    }
}

#[test]
fn generators_reject_bad_input() {
    assert!(Scenario::lbvc(21, FeedbackMode::Simplified).is_err());
    assert!(Scenario::bandit_world(2, 40, 0.1, World::I, FeedbackMode::Simplified).is_err());
    assert!(Scenario::bandit_world(5, 40, 0.2, World::I, FeedbackMode::Simplified).is_err());
    let class = Arc::new(star_class(3).unwrap());
    assert!(Scenario::fixed(class.clone(), ItemSet::from_items(4, [0, 1]).unwrap(), &[2], FeedbackMode::Simplified).is_err());
    let weighted = TargetGenerator::RealizableRandom {
        distribution: prset_core::harness::IndexDistribution::Weighted { weights: vec![1.0, 2.0] },
    };
    assert!(Scenario::build(weighted, Some((class, ItemSet::full(4))), FeedbackMode::Simplified).is_err());
}
