use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::HypothesisClass;
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::model::ItemSet;

/// Above this many `hypotheses × available items` bits the per-item
/// hypothesis columns are not materialized.
const COLUMN_BUDGET_BITS: usize = 1 << 28;

/// A hypothesis class bound to an available set `X`, with the per-instance
/// lookups learners need: restricted hypotheses `N ∩ X`, their sizes, the
/// size orders, and per-item columns (which hypotheses contain item `x`).
///
/// Immutable after construction; shared across runs behind an `Arc`.
#[derive(Debug)]
pub struct ClassView {
    class: Arc<HypothesisClass>,
    available: ItemSet,
    /// `None` when `X` is the whole universe.
    restricted: Option<Vec<ItemSet>>,
    sizes: Vec<usize>,
    by_size_asc: Vec<u32>,
    by_size_desc: Vec<u32>,
    items: Vec<usize>,
    columns: Option<Columns>,
}

#[derive(Debug)]
struct Columns {
    position: Vec<u32>,
    cols: Vec<Bits>,
}

impl ClassView {
    pub fn new(class: Arc<HypothesisClass>, available: ItemSet) -> Result<ClassView> {
        if available.universe_size() != class.universe_size() {
            return Err(Error::UniverseMismatch {
                expected: class.universe_size(),
                found: available.universe_size(),
            });
        }
        let restricted = if available.len() == available.universe_size() {
            None
        } else {
            Some(
                class
                    .hypotheses()
                    .iter()
                    .map(|h| h.intersection(&available))
                    .collect::<Result<Vec<_>>>()?,
            )
        };
        let k = class.len();
        let sizes: Vec<usize> = match &restricted {
            Some(r) => r.iter().map(ItemSet::len).collect(),
            None => class.hypotheses().iter().map(ItemSet::len).collect(),
        };
        let mut by_size_asc: Vec<u32> = (0..k as u32).collect();
        by_size_asc.sort_by_key(|&i| (sizes[i as usize], i));
        let mut by_size_desc: Vec<u32> = (0..k as u32).collect();
        by_size_desc.sort_by_key(|&i| (core::cmp::Reverse(sizes[i as usize]), i));
        let items = available.to_vec();

        let mut view = ClassView {
            class,
            available,
            restricted,
            sizes,
            by_size_asc,
            by_size_desc,
            items,
            columns: None,
        };
        if k.saturating_mul(view.items.len()) <= COLUMN_BUDGET_BITS {
            view.columns = Some(view.build_columns());
        }
        Ok(view)
    }

    fn build_columns(&self) -> Columns {
        let k = self.class.len();
        let mut position = vec![u32::MAX; self.available.universe_size()];
        for (p, &x) in self.items.iter().enumerate() {
            position[x] = p as u32;
        }
        let mut cols = vec![Bits::zeros(k); self.items.len()];
        for i in 0..k {
            for x in self.hypothesis(i).iter() {
                cols[position[x] as usize].set(i);
            }
        }
        Columns { position, cols }
    }

    pub fn class(&self) -> &Arc<HypothesisClass> {
        &self.class
    }

    pub fn available(&self) -> &ItemSet {
        &self.available
    }

    pub fn universe_size(&self) -> usize {
        self.available.universe_size()
    }

    pub fn len(&self) -> usize {
        self.class.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `N_i ∩ X`.
    pub fn hypothesis(&self, index: usize) -> &ItemSet {
        match &self.restricted {
            Some(r) => &r[index],
            None => self.class.get(index),
        }
    }

    /// `|N_i ∩ X|`.
    pub fn size(&self, index: usize) -> usize {
        self.sizes[index]
    }

    /// Hypothesis indices by increasing `|N ∩ X|`, ties by index.
    pub fn by_size_asc(&self) -> &[u32] {
        &self.by_size_asc
    }

    /// Hypothesis indices by decreasing `|N ∩ X|`, ties by index.
    pub fn by_size_desc(&self) -> &[u32] {
        &self.by_size_desc
    }

    /// Members of `X` in increasing order.
    pub fn items(&self) -> &[usize] {
        &self.items
    }

    pub fn contains(&self, index: usize, item: usize) -> bool {
        self.hypothesis(index).contains(item)
    }

    pub(crate) fn column(&self, item: usize) -> Option<&Bits> {
        let c = self.columns.as_ref()?;
        match c.position.get(item) {
            Some(&p) if p != u32::MAX => Some(&c.cols[p as usize]),
            _ => None,
        }
    }
}
