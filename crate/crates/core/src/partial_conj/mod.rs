//! Partial `σ`-conjugation by a parahoric `W_K`: canonical forms, the sets
//! `Σ_K(w)`, and the orders `≼_{K,σ}` on `ᴷW̃` and `≼` on straight classes.


use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::Arc;

use dashmap::DashMap;

use crate::affine::{AffineElement, AffineWeylGroup, ParabolicSubgroup, ParahoricType, Side};
use crate::error::{Error, Result};
use crate::sigma_classes::{is_straight, newton_pair, StraightClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    LengthPreserving,
    LengthDecreasing,
}

/// `from →^s to` with `to = s · from · σ(s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjStep {
    pub node: usize,
    pub kind: StepKind,
    pub from: AffineElement,
    pub to: AffineElement,
}

/// `I(J, x, σ)`: the largest `J' ⊆ J` with `x σ(J') x⁻¹ = J'`.
pub fn i_j_x_sigma(group: &AffineWeylGroup, j: &ParahoricType, x: &AffineElement) -> Result<Vec<usize>> {
    if !group.is_left_minimal(x, j) {
        return Err(Error::NotMinimal(group.format(x)));
    }
    let xinv = group.inverse(x);
    // Node of x σ(s) x⁻¹ when it is a simple reflection.
    let image: HashMap<usize, Option<usize>> = j
        .nodes()
        .iter()
        .map(|&s| {
            let c = group.mul_all([x, group.simple_reflection(group.sigma_node(s)), &xinv]);
            (s, (0..group.num_nodes()).find(|&t| *group.simple_reflection(t) == c))
        })
        .collect();
    let mut cur: BTreeSet<usize> = j.nodes().iter().copied().collect();
    loop {
        let next: BTreeSet<usize> = cur.iter().copied().filter(|s| image[s].is_some_and(|t| cur.contains(&t))).collect();
        if next == cur {
            return Ok(cur.into_iter().collect());
        }
        cur = next;
    }
}

/// If `w = u x` with `x ∈ ᴶW̃` and `u ∈ W_{I(J,x,σ)}`, returns `(x, u)`.
pub fn canonical_form(
    group: &AffineWeylGroup,
    w: &AffineElement,
    j: &ParahoricType,
) -> Result<Option<(AffineElement, AffineElement)>> {
    let x = group.coset_min(w, j, Side::Left);
    let u = group.mul(w, &group.inverse(&x));
    let i = i_j_x_sigma(group, j, &x)?;
    let (word, omega) = group.reduced_word(&u);
    debug_assert_eq!(omega, group.identity());
    Ok(word.iter().all(|s| i.contains(s)).then_some((x, u)))
}

/// Applicable steps from `w`, in node order.
pub fn steps(group: &AffineWeylGroup, w: &AffineElement, j: &ParahoricType) -> Vec<ConjStep> {
    j.nodes()
        .iter()
        .filter_map(|&s| {
            let to = group.sigma_conjugate_simple(s, w);
            let kind = match to.length().cmp(&w.length()) {
                std::cmp::Ordering::Less => StepKind::LengthDecreasing,
                std::cmp::Ordering::Equal => StepKind::LengthPreserving,
                std::cmp::Ordering::Greater => return None,
            };
            Some(ConjStep { node: s, kind, from: w.clone(), to })
        })
        .collect()
}

/// What a breadth-first search of the length-preserving orbit found.
enum OrbitHit {
    Canonical(AffineElement),
    Decreasing(ConjStep),
}

/// Searches the length-preserving orbit of `w` for a canonical element or a
/// length-decreasing step. Returns the hit, the path to it, and the elements
/// visited.
fn search_orbit(
    group: &AffineWeylGroup,
    w: &AffineElement,
    j: &ParahoricType,
) -> Result<(OrbitHit, Vec<ConjStep>, Vec<AffineElement>)> {
    let mut parent: HashMap<AffineElement, Option<ConjStep>> = HashMap::from([(w.clone(), None)]);
    let mut order = vec![w.clone()];
    let mut queue = VecDeque::from([w.clone()]);
    let path_to = |parent: &HashMap<AffineElement, Option<ConjStep>>, v: &AffineElement| {
        let mut path = Vec::new();
        let mut cur = v.clone();
        while let Some(Some(step)) = parent.get(&cur) {
            path.push(step.clone());
            cur = step.from.clone();
        }
        path.reverse();
        path
    };
    while let Some(v) = queue.pop_front() {
        if canonical_form(group, &v, j)?.is_some() {
            return Ok((OrbitHit::Canonical(v.clone()), path_to(&parent, &v), order));
        }
        let available = steps(group, &v, j);
        if let Some(dec) = available.iter().find(|s| s.kind == StepKind::LengthDecreasing) {
            return Ok((OrbitHit::Decreasing(dec.clone()), path_to(&parent, &v), order));
        }
        for step in available {
            if !parent.contains_key(&step.to) {
                order.push(step.to.clone());
                queue.push_back(step.to.clone());
                parent.insert(step.to.clone(), Some(step));
            }
        }
    }
    Err(Error::Internal(format!(
        "no canonical form reachable from {} by partial σ-conjugation",
        group.format(w)
    )))
}

/// Reduces `w` by `→_{J,σ}` steps to a canonical `u x`.
pub fn reduce_partial(
    group: &AffineWeylGroup,
    w: &AffineElement,
    j: &ParahoricType,
) -> Result<(AffineElement, AffineElement, Vec<ConjStep>)> {
    let mut trace = Vec::new();
    let mut cur = w.clone();
    loop {
        let (hit, path, _) = search_orbit(group, &cur, j)?;
        trace.extend(path);
        match hit {
            OrbitHit::Canonical(v) => {
                let (x, u) = canonical_form(group, &v, j)?.expect("hit is canonical");
                return Ok((x, u, trace));
            }
            OrbitHit::Decreasing(step) => {
                cur = step.to.clone();
                trace.push(step);
            }
        }
    }
}

/// Memoized `Σ_K(w)`:
/// `Σ_K(ux) = {x}` for canonical `ux`; `Σ_K(w) = Σ_K(swσ(s))` along
/// length-preserving steps; `Σ_K(w) = Σ_K(swσ(s)) ∪ Σ_K(sw)` when the step
/// decreases length.
pub struct SigmaK<'g> {
    group: &'g AffineWeylGroup,
    j: ParahoricType,
    memo: DashMap<AffineElement, Arc<Vec<AffineElement>>>,
}

impl<'g> SigmaK<'g> {
    pub fn new(group: &'g AffineWeylGroup, j: &ParahoricType) -> Self {
        Self { group, j: j.clone(), memo: DashMap::new() }
    }

    pub fn parahoric(&self) -> &ParahoricType {
        &self.j
    }

    /// Sorted.
    pub fn get(&self, w: &AffineElement) -> Result<Arc<Vec<AffineElement>>> {
        if let Some(hit) = self.memo.get(w) {
            return Ok(hit.clone());
        }
        let g = self.group;
        let (hit, _, visited) = search_orbit(g, w, &self.j)?;
        let result: Arc<Vec<AffineElement>> = match hit {
            OrbitHit::Canonical(v) => {
                let (x, _) = canonical_form(g, &v, &self.j)?.expect("hit is canonical");
                Arc::new(vec![x])
            }
            OrbitHit::Decreasing(step) => {
                let sw = g.left_simple(step.node, &step.from);
                let mut set: BTreeSet<AffineElement> = self.get(&step.to)?.iter().cloned().collect();
                set.extend(self.get(&sw)?.iter().cloned());
                Arc::new(set.into_iter().collect())
            }
        };
        for v in visited {
            self.memo.insert(v, result.clone());
        }
        Ok(result)
    }
}

fn require_minimal(group: &AffineWeylGroup, w: &AffineElement, j: &ParahoricType) -> Result<()> {
    if group.is_left_minimal(w, j) {
        Ok(())
    } else {
        Err(Error::NotMinimal(group.format(w)))
    }
}

/// `x' ≼_{K,σ} x`: some `y ∈ W_K` has `y x' σ(y)⁻¹ ≤ x`.
pub fn leq_k_sigma(group: &AffineWeylGroup, wk: &ParabolicSubgroup, lower: &AffineElement, upper: &AffineElement) -> Result<bool> {
    let j = wk.parahoric_type();
    require_minimal(group, lower, j)?;
    require_minimal(group, upper, j)?;
    let (word, omega) = group.reduced_word(upper);
    Ok(wk.elements().iter().any(|y| group.bruhat_leq_word(&group.sigma_conjugate(y, lower), &word, &omega)))
}

/// `{x' ∈ ᴷW̃ : x' ≼_{K,σ} x}`, sorted, checked to lie in `index_set`.
pub fn ekor_closure(
    group: &AffineWeylGroup,
    wk: &ParabolicSubgroup,
    x: &AffineElement,
    index_set: &[AffineElement],
) -> Result<Vec<AffineElement>> {
    let j = wk.parahoric_type();
    require_minimal(group, x, j)?;
    let mut out = BTreeSet::new();
    for v in group.bruhat_ideal(x) {
        for y in wk.elements() {
            // x' = y⁻¹ v σ(y)
            let c = group.sigma_conjugate(&group.inverse(y), &v);
            if group.is_left_minimal(&c, j) {
                out.insert(c);
            }
        }
    }
    let members: HashSet<&AffineElement> = index_set.iter().collect();
    if let Some(escaped) = out.iter().find(|c| !members.contains(c)) {
        return Err(Error::Internal(format!(
            "closure of {} contains {} outside the index set",
            group.format(x),
            group.format(escaped)
        )));
    }
    Ok(out.into_iter().collect())
}

/// `O' ≼ O`: a straight member of `O'` lies Bruhat-below a straight
/// member of `O`. Uses the representative of `upper`; with `check_all`,
/// every known member of `upper` is tried and must agree.
pub fn leq_straight(group: &AffineWeylGroup, lower: &StraightClass, upper: &StraightClass, check_all: bool) -> Result<bool> {
    let below = |w: &AffineElement| -> Result<bool> {
        for v in group.bruhat_ideal(w) {
            if v.length() <= w.length() && is_straight(group, &v)? && newton_pair(group, &v)? == lower.newton {
                return Ok(true);
            }
        }
        Ok(false)
    };
    let answer = below(upper.representative())?;
    if check_all {
        for w in &upper.members[1..] {
            if below(w)? != answer {
                return Err(Error::Internal(format!(
                    "≼ depends on the representative: {} vs {}",
                    group.format(upper.representative()),
                    group.format(w)
                )));
            }
        }
    }
    Ok(answer)
}
