//! The extended affine Weyl group `W̃ = X_* ⋊ W₀`.
//!
//! Elements are `t^λ u`. The base alcove is the dominant fundamental alcove,
//! so the length is the Iwahori–Matsumoto value
//! `ℓ(t^λ u) = Σ_{α>0, u⁻¹α>0} |⟨λ,α⟩| + Σ_{α>0, u⁻¹α<0} |⟨λ,α⟩ − 1|`.
//!
//! Affine simple reflections are indexed with the affine nodes first: node
//! `k < c` is `s₀ = t^{θ_k^∨} s_{θ_k}` for the `k`-th irreducible component,
//! node `c + i` is the finite simple reflection `s_i`.

mod bruhat;
mod cosets;
mod interner;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::root_datum::weyl::reflection_matrix;
use crate::root_datum::{dot, DiagramAutomorphism, RootDatum, WIdx};

pub use cosets::{ParabolicSubgroup, ParahoricType, Side};
pub use interner::{ElementId, ElementInterner};

pub type Translation = SmallVec<[i64; 6]>;

/// `t^λ u` with its length and `π₁`-component cached.
///
/// Equality and hashing use `(λ, u)` only. The ordering is by length, then
/// translation, then the index of `u`, which makes sorted output canonical.
#[derive(Clone)]
pub struct AffineElement {
    translation: Translation,
    finite: WIdx,
    length: u32,
    omega: SmallVec<[i64; 2]>,
}

impl AffineElement {
    pub fn translation(&self) -> &[i64] {
        &self.translation
    }

    pub fn finite(&self) -> WIdx {
        self.finite
    }

    pub fn length(&self) -> u32 {
        self.length
    }

    /// Image of `λ` in `π₁ = X_*/Q^∨`, i.e. the `Ω`-component.
    pub fn omega(&self) -> &[i64] {
        &self.omega
    }
}

impl PartialEq for AffineElement {
    fn eq(&self, other: &Self) -> bool {
        self.finite == other.finite && self.translation == other.translation
    }
}

impl Eq for AffineElement {}

impl Hash for AffineElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.translation.hash(state);
        self.finite.hash(state);
    }
}

impl Ord for AffineElement {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.length, &self.translation, self.finite).cmp(&(other.length, &other.translation, other.finite))
    }
}

impl PartialOrd for AffineElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{:?}*u{}(ℓ={})", self.translation.as_slice(), self.finite, self.length)
    }
}

/// `W̃` for a fixed root datum and Frobenius.
pub struct AffineWeylGroup {
    datum: RootDatum,
    sigma: DiagramAutomorphism,
    affine_nodes: usize,
    simple: Vec<AffineElement>,
    /// Component of each node.
    node_component: Vec<usize>,
    node_sigma: Vec<usize>,
    weyl_sigma_inverse: Vec<WIdx>,
}

impl fmt::Debug for AffineWeylGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AffineWeylGroup").field("datum", &self.datum.name()).field("sigma", &self.sigma).finish()
    }
}

impl AffineWeylGroup {
    pub fn new(datum: RootDatum, sigma: DiagramAutomorphism) -> Result<Self> {
        let c = datum.components().len();
        let n = datum.semisimple_rank();
        let mut group = Self {
            datum,
            sigma,
            affine_nodes: c,
            simple: Vec::with_capacity(c + n),
            node_component: Vec::with_capacity(c + n),
            node_sigma: Vec::new(),
            weyl_sigma_inverse: Vec::new(),
        };
        let d = &group.datum;
        let w = d.weyl();
        let mut simple = Vec::with_capacity(c + n);
        let mut node_component = Vec::with_capacity(c + n);
        for (k, &theta) in d.highest_roots().iter().enumerate() {
            let refl = reflection_matrix(&d.roots()[theta], &d.coroots()[theta]);
            let s_theta = w.lookup(&refl).ok_or_else(|| Error::Internal("s_θ not in W₀".into()))?;
            simple.push(group.element(&d.coroots()[theta], s_theta));
            node_component.push(k);
        }
        for i in 0..n {
            simple.push(group.element(&vec![0; d.rank()], w.simple_reflection(i)));
            let k = d.components().iter().position(|comp| comp.contains(&i)).expect("node outside every component");
            node_component.push(k);
        }
        group.simple = simple;
        group.node_component = node_component;

        let mut inv = vec![0; w.order()];
        for u in w.elements() {
            inv[group.sigma.apply_weyl(u) as usize] = u;
        }
        group.weyl_sigma_inverse = inv;

        let node_sigma = (0..c + n)
            .map(|i| {
                let image = group.apply_sigma(&group.simple[i]);
                group
                    .simple
                    .iter()
                    .position(|s| *s == image)
                    .ok_or_else(|| Error::Internal(format!("σ does not permute the affine simple reflections (node {i})")))
            })
            .collect::<Result<Vec<_>>>()?;
        group.node_sigma = node_sigma;
        Ok(group)
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn sigma(&self) -> &DiagramAutomorphism {
        &self.sigma
    }

    /// Number of affine simple reflections (affine nodes plus finite nodes).
    pub fn num_nodes(&self) -> usize {
        self.simple.len()
    }

    /// Number of affine nodes, i.e. irreducible components.
    pub fn num_affine_nodes(&self) -> usize {
        self.affine_nodes
    }

    /// All nodes of the affine Dynkin diagram of the `k`-th component.
    pub fn component_nodes(&self, k: usize) -> Vec<usize> {
        (0..self.num_nodes()).filter(|&i| self.node_component[i] == k).collect()
    }

    pub fn node_component(&self, node: usize) -> usize {
        self.node_component[node]
    }

    pub fn simple_reflection(&self, node: usize) -> &AffineElement {
        &self.simple[node]
    }

    /// Node index of `σ(s_node)`.
    pub fn sigma_node(&self, node: usize) -> usize {
        self.node_sigma[node]
    }

    /// Human-readable node name: `s0`, `s1`, … for an irreducible datum,
    /// `s0[k]` for the affine node of component `k` otherwise.
    pub fn node_name(&self, node: usize) -> String {
        if node < self.affine_nodes {
            if self.affine_nodes == 1 {
                "s0".into()
            } else {
                format!("s0[{node}]")
            }
        } else {
            format!("s{}", node - self.affine_nodes + 1)
        }
    }

    /// Builds `t^λ u`, computing its length and `Ω`-component.
    pub fn element(&self, lambda: &[i64], u: WIdx) -> AffineElement {
        debug_assert_eq!(lambda.len(), self.datum.rank());
        AffineElement {
            length: self.compute_length(lambda, u),
            omega: self.datum.project_pi1(lambda).into_iter().collect(),
            translation: lambda.iter().copied().collect(),
            finite: u,
        }
    }

    pub fn identity(&self) -> AffineElement {
        self.element(&vec![0; self.datum.rank()], self.datum.weyl().identity())
    }

    pub fn translation(&self, lambda: &[i64]) -> AffineElement {
        self.element(lambda, self.datum.weyl().identity())
    }

    pub fn finite(&self, u: WIdx) -> AffineElement {
        self.element(&vec![0; self.datum.rank()], u)
    }

    /// Iwahori–Matsumoto length, recomputed from `(λ, u)`.
    pub fn compute_length(&self, lambda: &[i64], u: WIdx) -> u32 {
        let neg = self.datum.inv_negative(u);
        self.datum
            .positive_roots()
            .iter()
            .zip(neg)
            .map(|(alpha, &negative)| {
                let p = dot(lambda, alpha);
                (if negative { p - 1 } else { p }).unsigned_abs() as u32
            })
            .sum()
    }

    /// `(t^λ u)(t^ν v) = t^{λ + uν} uv`.
    pub fn mul(&self, a: &AffineElement, b: &AffineElement) -> AffineElement {
        let w = self.datum.weyl();
        let moved = w.act(a.finite, &b.translation);
        let lambda: Vec<i64> = a.translation.iter().zip(&moved).map(|(x, y)| x + y).collect();
        self.element(&lambda, w.mul(a.finite, b.finite))
    }

    pub fn mul_all<'a>(&self, items: impl IntoIterator<Item = &'a AffineElement>) -> AffineElement {
        items.into_iter().fold(self.identity(), |acc, x| self.mul(&acc, x))
    }

    /// `(t^λ u)⁻¹ = t^{−u⁻¹λ} u⁻¹`.
    pub fn inverse(&self, a: &AffineElement) -> AffineElement {
        let w = self.datum.weyl();
        let uinv = w.inverse(a.finite);
        let lambda: Vec<i64> = w.act(uinv, &a.translation).into_iter().map(|x| -x).collect();
        self.element(&lambda, uinv)
    }

    pub fn left_simple(&self, node: usize, w: &AffineElement) -> AffineElement {
        self.mul(&self.simple[node], w)
    }

    pub fn right_simple(&self, w: &AffineElement, node: usize) -> AffineElement {
        self.mul(w, &self.simple[node])
    }

    /// `s · w · σ(s)`.
    pub fn sigma_conjugate_simple(&self, node: usize, w: &AffineElement) -> AffineElement {
        self.mul(&self.left_simple(node, w), &self.simple[self.node_sigma[node]])
    }

    /// `x · w · σ(x)⁻¹`.
    pub fn sigma_conjugate(&self, x: &AffineElement, w: &AffineElement) -> AffineElement {
        let sx_inv = self.inverse(&self.apply_sigma(x));
        self.mul(&self.mul(x, w), &sx_inv)
    }

    /// `σ(t^λ u) = t^{Sλ} σ(u)`.
    pub fn apply_sigma(&self, w: &AffineElement) -> AffineElement {
        if self.sigma.is_identity() {
            return w.clone();
        }
        let lambda = self.sigma.apply_lattice(&w.translation);
        self.element(&lambda, self.sigma.apply_weyl(w.finite))
    }

    pub fn apply_sigma_inverse(&self, w: &AffineElement) -> AffineElement {
        if self.sigma.is_identity() {
            return w.clone();
        }
        let lambda = self.sigma.apply_lattice_inverse(&w.translation);
        self.element(&lambda, self.weyl_sigma_inverse[w.finite as usize])
    }

    pub fn apply_sigma_power(&self, w: &AffineElement, k: usize) -> AffineElement {
        (0..k % self.sigma.order()).fold(w.clone(), |acc, _| self.apply_sigma(&acc))
    }

    /// Lowest-index node `s` with `ℓ(sw) < ℓ(w)`, with the product.
    pub fn first_left_descent(&self, w: &AffineElement) -> Option<(usize, AffineElement)> {
        if w.length == 0 {
            return None;
        }
        (0..self.num_nodes()).find_map(|i| {
            let sw = self.left_simple(i, w);
            (sw.length < w.length).then_some((i, sw))
        })
    }

    /// `w = s_{i₁}⋯s_{iℓ}·ω` by greedy left descent (lowest index first).
    pub fn reduced_word(&self, w: &AffineElement) -> (Vec<usize>, AffineElement) {
        let mut word = Vec::with_capacity(w.length as usize);
        let mut cur = w.clone();
        while let Some((i, next)) = self.first_left_descent(&cur) {
            word.push(i);
            cur = next;
        }
        debug_assert_eq!(word.len(), w.length as usize);
        (word, cur)
    }

    /// Product `s_{i₁}⋯s_{ik}`.
    pub fn word_product(&self, word: &[usize]) -> AffineElement {
        self.mul_all(word.iter().map(|&i| &self.simple[i]))
    }

    /// Kottwitz point: the image of `w` in `π₁(G)_σ`.
    pub fn kappa(&self, w: &AffineElement) -> Vec<i64> {
        self.sigma.coinvariants().project(&w.translation)
    }

    /// Canonical text `t[λ₁,…,λ_m]*w[one-line]`.
    pub fn format(&self, w: &AffineElement) -> String {
        let join = |v: &mut dyn Iterator<Item = String>| v.collect::<Vec<_>>().join(",");
        format!(
            "t[{}]*w[{}]",
            join(&mut w.translation.iter().map(|x| x.to_string())),
            join(&mut self.datum.one_line(w.finite).iter().map(|x| x.to_string()))
        )
    }

    /// Inverse of [`format`](Self::format).
    pub fn parse(&self, text: &str) -> Result<AffineElement> {
        let bad = || Error::Parse(text.to_string());
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let rest = s.strip_prefix("t[").ok_or_else(bad)?;
        let (lam, rest) = rest.split_once("]*w[").ok_or_else(bad)?;
        let perm = rest.strip_suffix(']').ok_or_else(bad)?;
        let ints = |p: &str| -> Result<Vec<i64>> {
            if p.is_empty() {
                return Ok(Vec::new());
            }
            p.split(',').map(|x| x.parse::<i64>().map_err(|_| bad())).collect()
        };
        let lambda = ints(lam)?;
        if lambda.len() != self.datum.rank() {
            return Err(bad());
        }
        let one_line: Vec<u32> = ints(perm)?.into_iter().map(|x| u32::try_from(x).map_err(|_| bad())).collect::<Result<_>>()?;
        let u = self.datum.from_one_line(&one_line).ok_or_else(bad)?;
        Ok(self.element(&lambda, u))
    }
}
