use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{AffineElement, AffineWeylGroup};
use crate::error::{Error, Result};

const MAX_PARABOLIC_ORDER: usize = 1_000_000;

/// A `σ`-stable set `J` of affine simple reflections with `W_J` finite.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParahoricType {
    nodes: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Double,
}

impl ParahoricType {
    pub fn new(group: &AffineWeylGroup, nodes: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = nodes.into_iter().collect();
        if let Some(&bad) = set.iter().find(|&&i| i >= group.num_nodes()) {
            return Err(Error::Parahoric(format!("node {bad} out of range (the diagram has {} nodes)", group.num_nodes())));
        }
        for k in 0..group.num_affine_nodes() {
            if group.component_nodes(k).iter().all(|i| set.contains(i)) {
                return Err(Error::Parahoric(format!("J contains every node of component {k}, so W_J is infinite")));
            }
        }
        if set.iter().any(|&i| !set.contains(&group.sigma_node(i))) {
            return Err(Error::Parahoric("J is not σ-stable".into()));
        }
        Ok(Self { nodes: set.into_iter().collect() })
    }

    pub fn iwahori() -> Self {
        Self { nodes: Vec::new() }
    }

    /// The hyperspecial type: all finite simple reflections.
    pub fn hyperspecial(group: &AffineWeylGroup) -> Self {
        Self { nodes: (group.num_affine_nodes()..group.num_nodes()).collect() }
    }

    /// Every valid type, ordered by size and then lexicographically.
    pub fn all(group: &AffineWeylGroup) -> Vec<Self> {
        let n = group.num_nodes();
        let mut out: Vec<Self> = (0u64..1 << n)
            .filter_map(|mask| Self::new(group, (0..n).filter(|i| mask >> i & 1 == 1)).ok())
            .collect();
        out.sort_by(|a, b| (a.nodes.len(), &a.nodes).cmp(&(b.nodes.len(), &b.nodes)));
        out
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn is_iwahori(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, node: usize) -> bool {
        self.nodes.binary_search(&node).is_ok()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.nodes.iter().all(|&i| other.contains(i))
    }
}

/// The finite group `W_J`, enumerated.
#[derive(Debug, Clone)]
pub struct ParabolicSubgroup {
    ty: ParahoricType,
    elements: Vec<AffineElement>,
}

impl ParabolicSubgroup {
    pub fn new(group: &AffineWeylGroup, ty: &ParahoricType) -> Result<Self> {
        let id = group.identity();
        let mut seen = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(cur) = queue.pop_front() {
            for &s in ty.nodes() {
                let next = group.left_simple(s, &cur);
                if seen.insert(next.clone()) {
                    if seen.len() > MAX_PARABOLIC_ORDER {
                        return Err(Error::Parahoric("W_J is too large".into()));
                    }
                    queue.push_back(next);
                }
            }
        }
        let mut elements: Vec<AffineElement> = seen.into_iter().collect();
        elements.sort();
        Ok(Self { ty: ty.clone(), elements })
    }

    pub fn parahoric_type(&self) -> &ParahoricType {
        &self.ty
    }

    /// Sorted; the identity comes first.
    pub fn elements(&self) -> &[AffineElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, w: &AffineElement) -> bool {
        self.elements.binary_search(w).is_ok()
    }
}

impl AffineWeylGroup {
    /// `w ∈ ᴶW̃`: `ℓ(sw) > ℓ(w)` for every `s ∈ J`.
    pub fn is_left_minimal(&self, w: &AffineElement, j: &ParahoricType) -> bool {
        j.nodes().iter().all(|&s| self.left_simple(s, w).length > w.length)
    }

    /// `w ∈ W̃ᴶ`: `ℓ(ws) > ℓ(w)` for every `s ∈ J`.
    pub fn is_right_minimal(&self, w: &AffineElement, j: &ParahoricType) -> bool {
        j.nodes().iter().all(|&s| self.right_simple(w, s).length > w.length)
    }

    /// Minimal-length element of `W_J w`, `w W_J` or `W_J w W_J` by greedy descent.
    pub fn coset_min(&self, w: &AffineElement, j: &ParahoricType, side: Side) -> AffineElement {
        let mut cur = w.clone();
        loop {
            let mut changed = false;
            for &s in j.nodes() {
                if side != Side::Right {
                    let x = self.left_simple(s, &cur);
                    if x.length < cur.length {
                        cur = x;
                        changed = true;
                    }
                }
                if side != Side::Left {
                    let x = self.right_simple(&cur, s);
                    if x.length < cur.length {
                        cur = x;
                        changed = true;
                    }
                }
            }
            if !changed {
                return cur;
            }
        }
    }

    /// `W_J w W_J`, sorted.
    pub fn double_coset(&self, w: &AffineElement, wj: &ParabolicSubgroup) -> Vec<AffineElement> {
        let mut out = BTreeSet::new();
        for a in wj.elements() {
            let aw = self.mul(a, w);
            for b in wj.elements() {
                out.insert(self.mul(&aw, b));
            }
        }
        out.into_iter().collect()
    }

    /// `_J w^J`: the unique longest element among the minimal representatives
    /// of the right cosets `x W_J` contained in `W_J w W_J`.
    pub fn max_min_representative(&self, w: &AffineElement, wj: &ParabolicSubgroup) -> Result<AffineElement> {
        let j = wj.parahoric_type();
        let m = self.coset_min(w, j, Side::Double);
        let mins: BTreeSet<AffineElement> =
            wj.elements().iter().map(|a| self.coset_min(&self.mul(a, &m), j, Side::Right)).collect();
        let top = mins.iter().map(|x| x.length).max().expect("double coset is nonempty");
        let mut longest = mins.into_iter().filter(|x| x.length == top);
        let first = longest.next().expect("maximum exists");
        if longest.next().is_some() {
            return Err(Error::Internal(format!("no unique longest right-minimal element above {}", self.format(&m))));
        }
        Ok(first)
    }
}
