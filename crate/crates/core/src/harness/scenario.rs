//! Instance generators: fixed targets, random realizable targets, and the
//! adversarial constructions used by the lower-bound experiments.

use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{config, Error, Result};
use crate::hypothesis::{appendix_c_class, disjoint_blocks_class, powerset_class, ClassView, HypothesisClass};
use crate::model::{Environment, FeedbackMode, ItemSet};
use crate::ratio::gcd;

/// Largest `d` accepted by the shattered-set construction.
pub const LBVC_MAX_D: usize = crate::hypothesis::POWERSET_MAX_D;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum World {
    I,
    II,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IndexDistribution {
    #[default]
    Uniform,
    Weighted { weights: Vec<f64> },
}

/// How each trial's target is drawn.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetGenerator {
    Fixed {
        target: Vec<usize>,
    },
    /// Powerset of `d` items; the target is a uniform `d/2`-subset.
    LbVc {
        d: usize,
    },
    /// `k` disjoint blocks of `n` items. World I favours block 0 with
    /// `(½+ε)n` target items and gives every other block `(½ − ε/(k−1))n`.
    /// World II additionally raises block `boosted` to `(½+2ε)n` and lowers
    /// the remaining blocks to `(½ − 3ε/(k−2))n`.
    BanditWorld {
        k: usize,
        n: usize,
        epsilon: f64,
        world: World,
        #[serde(default = "default_boosted")]
        boosted: usize,
    },
    /// A random hypothesis of the class, restricted to `X`.
    RealizableRandom {
        #[serde(default)]
        distribution: IndexDistribution,
    },
    /// Core-plus-private-blocks class; the target is a uniform hypothesis.
    AppendixC {
        d: usize,
        block: usize,
        #[serde(default)]
        core_only: bool,
    },
}

fn default_boosted() -> usize {
    2
}

impl TargetGenerator {
    /// Whether the generator defines its own class and available set.
    pub fn is_construction(&self) -> bool {
        matches!(
            self,
            TargetGenerator::LbVc { .. } | TargetGenerator::BanditWorld { .. } | TargetGenerator::AppendixC { .. }
        )
    }
}

/// The `ε` of the bandit lower bound at horizon `T`: `min(√(k/(80T)), 1)`.
pub fn lower_bound_epsilon(k: usize, horizon: usize) -> f64 {
    libm::sqrt(k as f64 / (80.0 * horizon as f64)).min(1.0)
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Granularity of `εn` (in items) that keeps every block allocation integral.
fn epsilon_unit(k: usize, world: World) -> u64 {
    let k = k as u64;
    match world {
        World::I => k - 1,
        World::II => lcm(k - 1, (k - 2) / gcd(k - 2, 3)),
    }
}

/// The admissible `ε` closest to `target`, capped at `1/8`: `εn` must be a
/// multiple of the allocation granularity. Fails when no positive value fits.
pub fn snap_epsilon(k: usize, n: usize, target: f64, world: World) -> Result<f64> {
    if k < 3 || n == 0 || !n.is_multiple_of(2) {
        return config("bandit world needs k >= 3 and a positive even n");
    }
    let unit = epsilon_unit(k, world) as f64;
    let max_units = libm::floor(n as f64 / 8.0 / unit);
    if max_units < 1.0 {
        return config(alloc::format!("bandit world: n = {n} too small for k = {k}"));
    }
    let units = libm::round(target * n as f64 / unit).clamp(1.0, max_units);
    Ok(units * unit / n as f64)
}

/// Per-block target counts of a bandit world, validated to be integral.
pub fn bandit_allocation(k: usize, n: usize, epsilon: f64, world: World, boosted: usize) -> Result<Vec<usize>> {
    if k < 3 {
        return config("bandit world needs k >= 3");
    }
    if n == 0 || !n.is_multiple_of(2) {
        return config("bandit world needs a positive even block size n");
    }
    if !(0.0..=0.125).contains(&epsilon) {
        return config(alloc::format!("bandit world: epsilon must lie in [0, 1/8], got {epsilon}"));
    }
    if world == World::II && (boosted == 0 || boosted >= k) {
        return config(alloc::format!("bandit world II: boosted block must lie in 1..{k}, got {boosted}"));
    }
    let en = epsilon * n as f64;
    let units = libm::round(en);
    if (en - units).abs() > 1e-6 * en.max(1.0) {
        return config(alloc::format!("bandit world: epsilon*n = {en} is not an integer"));
    }
    let en = units as usize;
    let half = n / 2;
    let split = |total: usize, parts: usize| -> Result<usize> {
        if !total.is_multiple_of(parts) {
            return config(alloc::format!(
                "bandit world: {total} boosted items do not split evenly over {parts} blocks"
            ));
        }
        Ok(total / parts)
    };
    let mut counts = alloc::vec![0; k];
    counts[0] = half + en;
    match world {
        World::I => {
            let cut = split(en, k - 1)?;
            counts[1..].iter_mut().for_each(|c| *c = half - cut);
        }
        World::II => {
            let cut = split(3 * en, k - 2)?;
            counts[1..].iter_mut().for_each(|c| *c = half - cut);
            counts[boosted] = half + 2 * en;
        }
    }
    Ok(counts)
}

/// A class bound to its available set, a target generator and a feedback
/// mode. Cheap to clone; the class data is shared.
#[derive(Clone, Debug)]
pub struct Scenario {
    view: Arc<ClassView>,
    generator: TargetGenerator,
    mode: FeedbackMode,
    vc_dimension: Option<usize>,
    /// Block allocation for bandit worlds, validated once.
    allocation: Option<Vec<usize>>,
    weights: Option<WeightedIndex<f64>>,
}

/// One trial's environment. `planted` is the lowest hypothesis index whose
/// restriction equals the target, when the generator knows it.
#[derive(Clone, Debug)]
pub struct Instance {
    pub env: Environment,
    pub planted: Option<usize>,
}

impl Scenario {
    /// Builds a scenario. Construction generators define their own class;
    /// a supplied class must then match it. Other generators need one.
    pub fn build(
        generator: TargetGenerator,
        supplied: Option<(Arc<HypothesisClass>, ItemSet)>,
        mode: FeedbackMode,
    ) -> Result<Scenario> {
        let mut allocation = None;
        let (class, available, vc) = match &generator {
            TargetGenerator::LbVc { d } => {
                if d % 2 != 0 {
                    return config(alloc::format!("lbvc: d must be even, got {d}"));
                }
                let class = powerset_class(*d)?;
                (class, ItemSet::full(*d), Some(*d))
            }
            TargetGenerator::BanditWorld { k, n, epsilon, world, boosted } => {
                allocation = Some(bandit_allocation(*k, *n, *epsilon, *world, *boosted)?);
                let class = disjoint_blocks_class(*k, *n)?;
                let u = class.universe_size();
                (class, ItemSet::full(u), Some(1))
            }
            TargetGenerator::AppendixC { d, block, core_only } => {
                let (class, full, core) = appendix_c_class(*d, *block)?;
                (class, if *core_only { core } else { full }, Some(*d))
            }
            TargetGenerator::Fixed { .. } | TargetGenerator::RealizableRandom { .. } => {
                let Some((class, available)) = supplied else {
                    return config("this target generator needs an explicit class");
                };
                let view = Arc::new(ClassView::new(class, available)?);
                return Scenario::with_view(view, generator, mode);
            }
        };
        if let Some((c, x)) = &supplied {
            if c.hypotheses() != class.hypotheses() || *x != available {
                return config("supplied class or available set differs from the generator's construction");
            }
        }
        let view = Arc::new(ClassView::new(Arc::new(class), available)?);
        Ok(Scenario { view, generator, mode, vc_dimension: vc, allocation, weights: None })
    }

    /// A scenario over an existing view, for the generators that take a class.
    pub fn with_view(view: Arc<ClassView>, generator: TargetGenerator, mode: FeedbackMode) -> Result<Scenario> {
        let mut weights = None;
        match &generator {
            TargetGenerator::Fixed { target } => {
                let t = ItemSet::from_items(view.universe_size(), target.iter().copied())?;
                if !t.is_subset(view.available())? {
                    return config("fixed target is not a subset of the available set");
                }
            }
            TargetGenerator::RealizableRandom { distribution } => {
                if let IndexDistribution::Weighted { weights: w } = distribution {
                    if w.len() != view.len() {
                        return config(alloc::format!(
                            "weights: expected {} entries, got {}",
                            view.len(),
                            w.len()
                        ));
                    }
                    weights = Some(
                        WeightedIndex::new(w).map_err(|e| Error::Config(alloc::format!("weights: {e}")))?,
                    );
                }
            }
            _ => return config("construction generators define their own class"),
        }
        Ok(Scenario { view, generator, mode, vc_dimension: None, allocation: None, weights })
    }

    pub fn lbvc(d: usize, mode: FeedbackMode) -> Result<Scenario> {
        Scenario::build(TargetGenerator::LbVc { d }, None, mode)
    }

    pub fn bandit_world(k: usize, n: usize, epsilon: f64, world: World, mode: FeedbackMode) -> Result<Scenario> {
        let generator = TargetGenerator::BanditWorld { k, n, epsilon, world, boosted: default_boosted() };
        Scenario::build(generator, None, mode)
    }

    pub fn appendix_c(d: usize, block: usize, core_only: bool, mode: FeedbackMode) -> Result<Scenario> {
        Scenario::build(TargetGenerator::AppendixC { d, block, core_only }, None, mode)
    }

    pub fn fixed(class: Arc<HypothesisClass>, available: ItemSet, target: &[usize], mode: FeedbackMode) -> Result<Scenario> {
        let generator = TargetGenerator::Fixed { target: target.to_vec() };
        Scenario::build(generator, Some((class, available)), mode)
    }

    pub fn realizable(class: Arc<HypothesisClass>, available: ItemSet, mode: FeedbackMode) -> Result<Scenario> {
        let generator = TargetGenerator::RealizableRandom { distribution: IndexDistribution::Uniform };
        Scenario::build(generator, Some((class, available)), mode)
    }

    /// Overrides the VC dimension handed to learners that need it.
    pub fn with_vc_dimension(mut self, d: usize) -> Scenario {
        self.vc_dimension = Some(d);
        self
    }

    pub fn with_mode(mut self, mode: FeedbackMode) -> Scenario {
        self.mode = mode;
        self
    }

    pub fn view(&self) -> &Arc<ClassView> {
        &self.view
    }

    pub fn generator(&self) -> &TargetGenerator {
        &self.generator
    }

    pub fn mode(&self) -> FeedbackMode {
        self.mode
    }

    /// Known from the construction; `None` means "ask the oracle".
    pub fn vc_dimension(&self) -> Option<usize> {
        self.vc_dimension
    }

    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Instance> {
        let universe = self.view.universe_size();
        let available = self.view.available().clone();
        let (target, planted) = match &self.generator {
            TargetGenerator::Fixed { target } => (ItemSet::from_items(universe, target.iter().copied())?, None),
            TargetGenerator::LbVc { d } => {
                let picked = index::sample(rng, *d, d / 2);
                let planted = picked.iter().fold(0usize, |m, j| m | 1 << j);
                (ItemSet::from_items(universe, picked.iter())?, Some(planted))
            }
            TargetGenerator::BanditWorld { n, .. } => {
                let counts = self.allocation.as_ref().expect("validated at build");
                let mut bits = Bits::zeros(universe);
                for (b, &c) in counts.iter().enumerate() {
                    for j in index::sample(rng, *n, c).iter() {
                        bits.set(b * n + j);
                    }
                }
                (ItemSet::from_bits(bits), None)
            }
            TargetGenerator::RealizableRandom { .. } => {
                let i = match &self.weights {
                    Some(w) => w.sample(rng),
                    None => rng.gen_range(0..self.view.len()),
                };
                (self.view.hypothesis(i).clone(), None)
            }
            TargetGenerator::AppendixC { .. } => {
                let i = rng.gen_range(0..self.view.len());
                (self.view.hypothesis(i).clone(), Some(i))
            }
        };
        let env = Environment::new(available, target, self.mode)?;
        Ok(Instance { env, planted })
    }
}
