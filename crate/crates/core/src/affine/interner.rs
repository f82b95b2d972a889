use dashmap::DashMap;
use parking_lot::RwLock;

use super::AffineElement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementId(pub u32);

/// Concurrent hash-consing table: each distinct `(λ, u)` gets one id.
#[derive(Debug, Default)]
pub struct ElementInterner {
    ids: DashMap<AffineElement, ElementId>,
    items: RwLock<Vec<AffineElement>>,
}

impl ElementInterner {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id and whether the element was new.
    pub fn intern(&self, w: &AffineElement) -> (ElementId, bool) {
        if let Some(id) = self.ids.get(w) {
            return (*id, false);
        }
        let mut fresh = false;
        let id = *self.ids.entry(w.clone()).or_insert_with(|| {
            fresh = true;
            let mut items = self.items.write();
            items.push(w.clone());
            ElementId((items.len() - 1) as u32)
        });
        (id, fresh)
    }

    pub fn get(&self, id: ElementId) -> AffineElement {
        self.items.read()[id.0 as usize].clone()
    }

    pub fn len(&self) -> usize {
        self.items.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All interned elements, sorted canonically.
    pub fn sorted(&self) -> Vec<AffineElement> {
        let mut v = self.items.read().clone();
        v.sort();
        v
    }
}
