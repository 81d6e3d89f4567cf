//! Finite hypothesis classes and the constructions used by the lower-bound
//! and separation examples.

mod dims;
mod view;

pub use dims::{littlestone_dimension, vc_dimension, vc_witness, LittlestoneOracle, ShatterWitness};
pub use view::ClassView;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{config, Error, Result};
use crate::model::ItemSet;

/// A nonempty, ordered, finite family of item sets over one universe.
///
/// Hypothesis indices are stable; every argmin/argmax elsewhere in the crate
/// breaks ties towards the lowest index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisClass {
    universe_size: usize,
    hypotheses: Vec<ItemSet>,
    labels: Option<Vec<String>>,
}

pub const POWERSET_MAX_D: usize = 20;
pub const DISJOINT_MAX_ITEMS: usize = 1 << 22;
pub const APPENDIX_C_MAX_D: usize = 12;

impl HypothesisClass {
    pub fn new(universe_size: usize, hypotheses: Vec<ItemSet>) -> Result<HypothesisClass> {
        if hypotheses.is_empty() {
            return config("hypothesis class must be nonempty");
        }
        for h in &hypotheses {
            if h.universe_size() != universe_size {
                return Err(Error::UniverseMismatch {
                    expected: universe_size,
                    found: h.universe_size(),
                });
            }
        }
        Ok(HypothesisClass {
            universe_size,
            hypotheses,
            labels: None,
        })
    }

    pub fn from_item_lists(universe_size: usize, lists: &[Vec<usize>]) -> Result<HypothesisClass> {
        let hyps = lists
            .iter()
            .map(|l| ItemSet::from_items(universe_size, l.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        HypothesisClass::new(universe_size, hyps)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<HypothesisClass> {
        if labels.len() != self.hypotheses.len() {
            return config(format!(
                "{} labels for {} hypotheses",
                labels.len(),
                self.hypotheses.len()
            ));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn len(&self) -> usize {
        self.hypotheses.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, index: usize) -> &ItemSet {
        &self.hypotheses[index]
    }

    pub fn hypotheses(&self) -> &[ItemSet] {
        &self.hypotheses
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, index: usize) -> String {
        match &self.labels {
            Some(l) => l[index].clone(),
            None => format!("h{index}"),
        }
    }

    /// Every hypothesis intersected with `available`; size and order kept.
    pub fn restrict(&self, available: &ItemSet) -> Result<HypothesisClass> {
        let hypotheses = self
            .hypotheses
            .iter()
            .map(|h| h.intersection(available))
            .collect::<Result<Vec<_>>>()?;
        Ok(HypothesisClass {
            universe_size: self.universe_size,
            hypotheses,
            labels: self.labels.clone(),
        })
    }

    /// Same hypotheses in a different order (`order[i]` is the old index of
    /// the new `i`-th hypothesis).
    pub fn permuted(&self, order: &[usize]) -> Result<HypothesisClass> {
        if order.len() != self.len() {
            return config("permutation length differs from class size");
        }
        let hyps = order.iter().map(|&i| self.hypotheses[i].clone()).collect();
        HypothesisClass::new(self.universe_size, hyps)
    }
}

pub fn restrict_class(class: &HypothesisClass, available: &ItemSet) -> Result<HypothesisClass> {
    class.restrict(available)
}

/// All `2^d` subsets of `{0, .., d-1}`; hypothesis `i` holds the set bits of `i`.
pub fn powerset_class(d: usize) -> Result<HypothesisClass> {
    if d > POWERSET_MAX_D {
        return Err(Error::Capacity {
            what: "powerset dimension",
            limit: POWERSET_MAX_D,
            requested: d,
        });
    }
    let hyps = (0..1usize << d)
        .map(|mask| ItemSet::from_items(d, (0..d).filter(|j| mask >> j & 1 == 1)))
        .collect::<Result<Vec<_>>>()?;
    HypothesisClass::new(d, hyps)
}

/// `{0}, {0,1}, .., {0,n}` over `{0, .., n}`.
pub fn star_class(n: usize) -> Result<HypothesisClass> {
    if n == 0 {
        return config("star class needs n >= 1");
    }
    let u = n + 1;
    let mut hyps = Vec::with_capacity(u);
    hyps.push(ItemSet::from_items(u, [0])?);
    for i in 1..=n {
        hyps.push(ItemSet::from_items(u, [0, i])?);
    }
    HypothesisClass::new(u, hyps)
}

/// `k` pairwise-disjoint blocks of `n` items tiling a universe of `k·n` items.
pub fn disjoint_blocks_class(k: usize, n: usize) -> Result<HypothesisClass> {
    if k == 0 || n == 0 {
        return config("disjoint blocks need k >= 1 and n >= 1");
    }
    let total = k.saturating_mul(n);
    if total > DISJOINT_MAX_ITEMS {
        return Err(Error::Capacity {
            what: "disjoint blocks universe",
            limit: DISJOINT_MAX_ITEMS,
            requested: total,
        });
    }
    let hyps = (0..k)
        .map(|i| ItemSet::range(total, i * n, (i + 1) * n))
        .collect::<Result<Vec<_>>>()?;
    HypothesisClass::new(total, hyps)
}

/// A core `D = {0, .., d-1}` plus `2^d` private blocks `E_i` of `block`
/// items each. Hypothesis `i` is `C_i ∪ E_i`, where `C_i` holds the set bits
/// of `i`.
///
/// Returns the class, the full universe as available set, and `D`.
pub fn appendix_c_class(d: usize, block: usize) -> Result<(HypothesisClass, ItemSet, ItemSet)> {
    if d > APPENDIX_C_MAX_D {
        return Err(Error::Capacity {
            what: "appendix-C core size",
            limit: APPENDIX_C_MAX_D,
            requested: d,
        });
    }
    if block == 0 {
        return config("appendix-C block size must be >= 1");
    }
    let count = 1usize << d;
    let universe = d + count * block;
    let mut hyps = Vec::with_capacity(count);
    for i in 0..count {
        let core = (0..d).filter(|j| i >> j & 1 == 1);
        let start = d + i * block;
        hyps.push(ItemSet::from_items(universe, core.chain(start..start + block))?);
    }
    let class = HypothesisClass::new(universe, hyps)?;
    Ok((class, ItemSet::full(universe), ItemSet::range(universe, 0, d)?))
}

/// Default private-block size of [`appendix_c_class`] when none is given.
pub fn appendix_c_default_block(d: usize) -> usize {
    (64 * d).max(1)
}
