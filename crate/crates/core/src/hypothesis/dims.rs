//! Exhaustive VC and Littlestone dimension oracles.
//!
//! Both are exact and refuse to run past hard size limits.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::HypothesisClass;
use crate::error::{Error, Result};
use crate::model::ItemSet;

pub const VC_MAX_DOMAIN: usize = 24;
pub const LDIM_MAX_CLASS: usize = 64;
pub const LDIM_MAX_DOMAIN: usize = 16;

/// Evidence for a VC dimension value: a largest shattered point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShatterWitness {
    pub points: Vec<usize>,
    pub achieved_labelings: usize,
}

impl ShatterWitness {
    pub fn is_shattered(&self) -> bool {
        self.achieved_labelings == 1 << self.points.len()
    }
}

fn check_domain(class: &HypothesisClass, domain: &ItemSet) -> Result<()> {
    if domain.universe_size() != class.universe_size() {
        return Err(Error::UniverseMismatch {
            expected: class.universe_size(),
            found: domain.universe_size(),
        });
    }
    Ok(())
}

/// Membership of every hypothesis on the domain points, as bit masks.
fn projections(class: &HypothesisClass, points: &[usize]) -> Vec<u64> {
    class
        .hypotheses()
        .iter()
        .map(|h| {
            points
                .iter()
                .enumerate()
                .filter(|&(_, &x)| h.contains(x))
                .fold(0u64, |m, (j, _)| m | 1 << j)
        })
        .collect()
}

/// Number of distinct labelings the class induces on the point subset `sel`
/// (a mask over domain positions), stopping early at `2^|sel|`.
fn labelings_on(projs: &[u64], sel: u64, seen: &mut Vec<u64>) -> usize {
    let s = sel.count_ones() as usize;
    let full = 1usize << s;
    seen.clear();
    seen.resize(full.div_ceil(64), 0);
    let mut count = 0;
    for &p in projs {
        // Compress the selected bits of p into the low s bits.
        let mut code = 0usize;
        let mut rest = sel;
        let mut j = 0;
        while rest != 0 {
            let b = rest.trailing_zeros();
            if p >> b & 1 == 1 {
                code |= 1 << j;
            }
            rest &= rest - 1;
            j += 1;
        }
        let (w, bit) = (code / 64, code % 64);
        if seen[w] >> bit & 1 == 0 {
            seen[w] |= 1 << bit;
            count += 1;
            if count == full {
                break;
            }
        }
    }
    count
}

/// Next integer with the same popcount (Gosper's hack).
fn next_combination(x: u64) -> u64 {
    let c = x & x.wrapping_neg();
    let r = x + c;
    (((r ^ x) >> 2) / c) | r
}

/// A largest subset of `domain` shattered by `class`.
///
/// Shattering is hereditary, so sizes are tried in increasing order and the
/// search stops at the first size with no shattered subset.
pub fn vc_witness(class: &HypothesisClass, domain: &ItemSet) -> Result<ShatterWitness> {
    check_domain(class, domain)?;
    if domain.len() > VC_MAX_DOMAIN {
        return Err(Error::Capacity {
            what: "VC dimension domain",
            limit: VC_MAX_DOMAIN,
            requested: domain.len(),
        });
    }
    let points = domain.to_vec();
    let m = points.len();
    let projs = projections(class, &points);
    let mut distinct = projs.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let max_s = (usize::BITS - 1 - distinct.len().leading_zeros()) as usize;

    let mut seen = Vec::new();
    let mut best = ShatterWitness {
        points: vec![],
        achieved_labelings: 1,
    };
    for s in 1..=max_s.min(m) {
        let limit = 1u64 << m;
        let mut sel = (1u64 << s) - 1;
        let mut found = None;
        while sel < limit {
            if labelings_on(&distinct, sel, &mut seen) == 1 << s {
                found = Some(sel);
                break;
            }
            sel = next_combination(sel);
        }
        match found {
            Some(sel) => {
                best = ShatterWitness {
                    points: (0..m).filter(|j| sel >> j & 1 == 1).map(|j| points[j]).collect(),
                    achieved_labelings: 1 << s,
                };
            }
            None => break,
        }
    }
    Ok(best)
}

pub fn vc_dimension(class: &HypothesisClass, domain: &ItemSet) -> Result<usize> {
    Ok(vc_witness(class, domain)?.points.len())
}

/// Memoized Littlestone-dimension recursion over version spaces of at most
/// 64 hypotheses, represented as `u64` masks.
#[derive(Clone, Debug)]
pub struct LittlestoneOracle {
    points: Vec<usize>,
    point_masks: Vec<u64>,
    full: u64,
    memo: BTreeMap<u64, i32>,
}

impl LittlestoneOracle {
    pub fn new(class: &HypothesisClass, domain: &ItemSet) -> Result<LittlestoneOracle> {
        check_domain(class, domain)?;
        if class.len() > LDIM_MAX_CLASS {
            return Err(Error::Capacity {
                what: "Littlestone dimension class size",
                limit: LDIM_MAX_CLASS,
                requested: class.len(),
            });
        }
        if domain.len() > LDIM_MAX_DOMAIN {
            return Err(Error::Capacity {
                what: "Littlestone dimension domain",
                limit: LDIM_MAX_DOMAIN,
                requested: domain.len(),
            });
        }
        let points = domain.to_vec();
        let point_masks = points
            .iter()
            .map(|&x| {
                class
                    .hypotheses()
                    .iter()
                    .enumerate()
                    .filter(|(_, h)| h.contains(x))
                    .fold(0u64, |m, (i, _)| m | 1 << i)
            })
            .collect();
        let full = if class.len() == 64 {
            u64::MAX
        } else {
            (1u64 << class.len()) - 1
        };
        Ok(LittlestoneOracle {
            points,
            point_masks,
            full,
            memo: BTreeMap::new(),
        })
    }

    pub fn full_mask(&self) -> u64 {
        self.full
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    /// Hypotheses (as a mask) that contain the `j`-th domain point.
    pub fn point_mask(&self, j: usize) -> u64 {
        self.point_masks[j]
    }

    /// Littlestone dimension of the version space `mask`; `-1` when empty.
    pub fn ldim(&mut self, mask: u64) -> i32 {
        let n = mask.count_ones();
        if n == 0 {
            return -1;
        }
        if n == 1 {
            return 0;
        }
        if let Some(&v) = self.memo.get(&mask) {
            return v;
        }
        let cap = (31 - n.leading_zeros()) as i32;
        let mut best = 0;
        for j in 0..self.point_masks.len() {
            let ones = mask & self.point_masks[j];
            let zeros = mask & !self.point_masks[j];
            if ones == 0 || zeros == 0 {
                continue;
            }
            let (small, large) = if ones.count_ones() <= zeros.count_ones() {
                (ones, zeros)
            } else {
                (zeros, ones)
            };
            // A tree rooted here is at most 1 + floor(log2 |smaller side|) deep.
            let small_cap = 31 - small.count_ones().leading_zeros() as i32;
            if small_cap < best {
                continue;
            }
            let a = self.ldim(small);
            if a < best {
                continue;
            }
            let b = self.ldim(large);
            best = best.max(1 + a.min(b));
            if best == cap {
                break;
            }
        }
        self.memo.insert(mask, best);
        best
    }
}

pub fn littlestone_dimension(class: &HypothesisClass, domain: &ItemSet) -> Result<usize> {
    let mut oracle = LittlestoneOracle::new(class, domain)?;
    let full = oracle.full_mask();
    Ok(oracle.ldim(full).max(0) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypothesis::{
        appendix_c_class, disjoint_blocks_class, powerset_class, star_class,
    };

    fn full(c: &HypothesisClass) -> ItemSet {
        ItemSet::full(c.universe_size())
    }

    #[test]
    fn vc_examples() {
        let p3 = powerset_class(3).unwrap();
        assert_eq!(vc_dimension(&p3, &full(&p3)).unwrap(), 3);
        let p4 = powerset_class(4).unwrap();
        assert_eq!(vc_dimension(&p4, &full(&p4)).unwrap(), 4);
        let s5 = star_class(5).unwrap();
        assert_eq!(vc_dimension(&s5, &full(&s5)).unwrap(), 1);
        let single = HypothesisClass::from_item_lists(4, &[alloc::vec![1, 2]]).unwrap();
        assert_eq!(vc_dimension(&single, &full(&single)).unwrap(), 0);
    }

    #[test]
    fn witness_is_shattered() {
        let s5 = star_class(5).unwrap();
        let w = vc_witness(&s5, &full(&s5)).unwrap();
        assert!(w.is_shattered());
        assert_eq!(w.points.len(), 1);
        assert_ne!(w.points[0], 0, "item 0 is in every hypothesis");
    }

    #[test]
    fn disjoint_blocks_on_transversal() {
        let c = disjoint_blocks_class(4, 3).unwrap();
        let transversal = ItemSet::from_items(12, [0, 3]).unwrap();
        assert_eq!(vc_dimension(&c, &transversal).unwrap(), 1);
    }

    #[test]
    fn appendix_c_over_core() {
        let (c, _, core) = appendix_c_class(4, 3).unwrap();
        assert_eq!(vc_dimension(&c, &core).unwrap(), 4);
    }

    #[test]
    fn vc_capacity_limit() {
        let c = star_class(30).unwrap();
        assert!(matches!(
            vc_dimension(&c, &full(&c)),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn littlestone_examples() {
        let single = HypothesisClass::from_item_lists(3, &[alloc::vec![0]]).unwrap();
        assert_eq!(littlestone_dimension(&single, &full(&single)).unwrap(), 0);
        let p2 = powerset_class(2).unwrap();
        assert_eq!(littlestone_dimension(&p2, &full(&p2)).unwrap(), 2);
        let s3 = star_class(3).unwrap();
        let l = littlestone_dimension(&s3, &full(&s3)).unwrap();
        assert!(l >= vc_dimension(&s3, &full(&s3)).unwrap());
        assert!(littlestone_dimension(&powerset_class(7).unwrap(), &ItemSet::full(7)).is_err());
    }

    #[test]
    fn thresholds_have_logarithmic_ldim() {
        // Thresholds {0..i} for i < 8 over 7 points: VC 1, Ldim floor(log2 8) = 3.
        let lists: Vec<Vec<usize>> = (0..8).map(|i| (0..i).collect()).collect();
        let c = HypothesisClass::from_item_lists(7, &lists).unwrap();
        assert_eq!(vc_dimension(&c, &full(&c)).unwrap(), 1);
        assert_eq!(littlestone_dimension(&c, &full(&c)).unwrap(), 3);
    }
}
