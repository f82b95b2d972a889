//! The stratification atlas for `(G, μ, σ, K)`: the KR, EKOR and Newton
//! index posets, the maps between them and predicted dimensions.
//!
//! Only index-level data is stored. Under the usual axioms on integral models
//! the computed index sets are exactly the nonempty strata: `Adm(μ)_K` for KR,
//! `Adm(μ) ∩ ᴷW̃` for EKOR and `B(G, μ)` for Newton.

mod cache;
mod dot;
#[cfg(test)]
mod tests;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::admissible::{admissible_k, admissible_set, ekor_index_set_checked, ConjClassCochar};
use crate::affine::{AffineElement, AffineWeylGroup, ParabolicSubgroup, ParahoricType};
use crate::error::{Error, Result};
use crate::num::format_rational;
use crate::partial_conj::{ekor_closure, SigmaK};
use crate::sigma_classes::{
    b_of_g_mu, defect, is_straight, leq_b, newton_dim_prediction, newton_pair, NewtonPair,
};

pub use cache::{cache_key, cache_load, cache_store};
pub use dot::to_dot;

/// Bumped whenever the document layout or any computation changes.
pub const ATLAS_VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "+atlas1");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumInfo {
    pub name: String,
    pub rank: usize,
    pub simple_roots: Vec<Vec<i64>>,
    pub simple_coroots: Vec<Vec<i64>>,
    pub sigma: Vec<usize>,
    pub sigma_matrix: Vec<Vec<i64>>,
}

impl DatumInfo {
    pub fn of(group: &AffineWeylGroup) -> Self {
        let d = group.datum();
        Self {
            name: d.name().to_string(),
            rank: d.rank(),
            simple_roots: d.simple_roots().to_vec(),
            simple_coroots: d.simple_coroots().to_vec(),
            sigma: group.sigma().permutation().to_vec(),
            sigma_matrix: group.sigma().matrix(),
        }
    }
}

/// Nodes plus Hasse covers `[lower, upper]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poset<N> {
    pub nodes: Vec<N>,
    pub covers: Vec<[usize; 2]>,
}

impl<N> Poset<N> {
    /// Builds the Hasse diagram of `leq` on `nodes`.
    pub fn from_relation(nodes: Vec<N>, leq: &[Vec<bool>]) -> Self {
        let covers = transitive_reduction(leq);
        Self { nodes, covers }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Reflexive-transitive closure of the covers.
    pub fn order(&self) -> Vec<Vec<bool>> {
        let n = self.nodes.len();
        let mut rel: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
        for &[a, b] in &self.covers {
            rel[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if rel[i][k] {
                    for j in 0..n {
                        if rel[k][j] {
                            rel[i][j] = true;
                        }
                    }
                }
            }
        }
        rel
    }
}

/// Covers of a partial order given as a reflexive relation matrix.
pub fn transitive_reduction(leq: &[Vec<bool>]) -> Vec<[usize; 2]> {
    let n = leq.len();
    let lt = |a: usize, b: usize| a != b && leq[a][b];
    let mut covers = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                covers.push([a, b]);
            }
        }
    }
    covers
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KrNode {
    pub id: usize,
    pub min_rep: String,
    pub max_min_rep: String,
    /// `ℓ(_Kwᴷ)`.
    pub dim: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EkorNode {
    pub id: usize,
    pub elt: String,
    pub length: u32,
    pub straight: bool,
    /// Newton node of a straight index.
    pub newton_class: Option<usize>,
    /// `ℓ(x)`.
    pub dim: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonNode {
    pub id: usize,
    pub nu: crate::Cochar,
    pub kappa: Vec<i64>,
    pub basic: bool,
    /// `⟨μ + ν, ρ⟩ − ½ def`, where the defect is available.
    pub dim: Option<String>,
    pub defect: Option<u32>,
    /// `⟨ν, 2ρ⟩`.
    pub leaf_dim: String,
}

impl NewtonNode {
    pub fn pair(&self) -> NewtonPair {
        NewtonPair { nu: self.nu.clone(), kappa: self.kappa.clone() }
    }
}

/// `Σ_K(w)` for an Iwahori index `w ∈ Adm(μ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IwahoriImage {
    pub elt: String,
    pub ekor: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasMaps {
    /// EKOR id to KR id: `x ↦ W_K x W_K`.
    pub ekor_to_kr: Vec<usize>,
    /// `[EKOR id, Newton id]` for straight EKOR indices.
    pub straight_ekor_to_newton: Vec<[usize; 2]>,
    /// Over `Adm(μ)` in sorted order.
    pub iwahori_to_ekor: Vec<IwahoriImage>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratAtlas {
    pub version: String,
    pub datum: DatumInfo,
    pub mu: Vec<i64>,
    pub parahoric: ParahoricType,
    /// Dimensions are predictions, not computed from geometry.
    pub dims: String,
    pub kr: Poset<KrNode>,
    pub ekor: Poset<EkorNode>,
    pub newton: Poset<NewtonNode>,
    pub maps: AtlasMaps,
}

impl StratAtlas {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("atlas serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }
}

pub fn build_atlas(group: &AffineWeylGroup, mu: &[i64], j: &ParahoricType) -> Result<StratAtlas> {
    let mu = ConjClassCochar::new(group, mu)?;
    let wk = ParabolicSubgroup::new(group, j)?;
    let adm = admissible_set(group, &mu);
    let adm_k = admissible_k(group, &adm, &wk)?;
    let index = ekor_index_set_checked(group, &adm, &adm_k)?;
    let classes = b_of_g_mu(group, &adm, false)?;

    // Newton.
    let pairs: Vec<NewtonPair> = classes.iter().map(|c| c.newton.clone()).collect();
    let newton_nodes = pairs
        .iter()
        .enumerate()
        .map(|(id, b)| {
            let def = defect(group, b).ok();
            let dim = if def.is_some() { Some(format_rational(&newton_dim_prediction(group, &mu, b)?)) } else { None };
            Ok(NewtonNode {
                id,
                nu: b.nu.clone(),
                kappa: b.kappa.clone(),
                basic: crate::sigma_classes::is_basic(group, b),
                dim,
                defect: def,
                leaf_dim: format_rational(&crate::sigma_classes::leaf_dim_prediction(group, b)?),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let newton_rel: Vec<Vec<bool>> = pairs.iter().map(|a| pairs.iter().map(|b| leq_b(group, a, b)).collect()).collect();
    let newton_pos: HashMap<&NewtonPair, usize> = pairs.iter().enumerate().map(|(i, b)| (b, i)).collect();

    // KR.
    let kr_nodes: Vec<KrNode> = adm_k
        .double_cosets
        .iter()
        .enumerate()
        .map(|(id, d)| KrNode {
            id,
            min_rep: group.format(&d.min_rep),
            max_min_rep: group.format(&d.max_min_rep),
            dim: d.max_min_rep.length(),
        })
        .collect();
    let nk = kr_nodes.len();
    let kr_rel: Vec<Vec<bool>> = (0..nk).map(|a| (0..nk).map(|b| adm_k.leq(group, a, b)).collect()).collect();

    // EKOR.
    let ekor_pos: HashMap<&AffineElement, usize> = index.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let ekor_nodes = index
        .iter()
        .enumerate()
        .map(|(id, x)| {
            let straight = is_straight(group, x)?;
            let newton_class = if straight {
                let b = newton_pair(group, x)?;
                Some(*newton_pos.get(&b).ok_or_else(|| {
                    Error::Internal(format!("straight index {} has class outside B(G, μ)", group.format(x)))
                })?)
            } else {
                None
            };
            Ok(EkorNode { id, elt: group.format(x), length: x.length(), straight, newton_class, dim: x.length() })
        })
        .collect::<Result<Vec<_>>>()?;
    let closures: Vec<Vec<AffineElement>> =
        index.par_iter().map(|x| ekor_closure(group, &wk, x, &index)).collect::<Result<_>>()?;
    let mut ekor_rel = vec![vec![false; index.len()]; index.len()];
    for (upper, below) in closures.iter().enumerate() {
        for x in below {
            ekor_rel[ekor_pos[x]][upper] = true;
        }
    }

    // Maps.
    let ekor_to_kr = index
        .iter()
        .map(|x| {
            adm_k.coset_of(group, x).ok_or_else(|| Error::Internal(format!("{} is in no KR double coset", group.format(x))))
        })
        .collect::<Result<Vec<_>>>()?;
    let straight_ekor_to_newton =
        ekor_nodes.iter().filter_map(|n| n.newton_class.map(|b| [n.id, b])).collect();
    let sigma_k = SigmaK::new(group, j);
    let iwahori_to_ekor = adm
        .elements()
        .iter()
        .map(|w| {
            let image = sigma_k.get(w)?;
            let mut ids = image
                .iter()
                .map(|x| {
                    ekor_pos.get(x).copied().ok_or_else(|| {
                        Error::Internal(format!("Σ_K({}) contains {} outside the index set", group.format(w), group.format(x)))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            ids.sort_unstable();
            Ok(IwahoriImage { elt: group.format(w), ekor: ids })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(StratAtlas {
        version: ATLAS_VERSION.to_string(),
        datum: DatumInfo::of(group),
        mu: mu.mu_dominant.clone(),
        parahoric: j.clone(),
        dims: "predicted".to_string(),
        kr: Poset::from_relation(kr_nodes, &kr_rel),
        ekor: Poset::from_relation(ekor_nodes, &ekor_rel),
        newton: Poset::from_relation(newton_nodes, &newton_rel),
        maps: AtlasMaps { ekor_to_kr, straight_ekor_to_newton, iwahori_to_ekor },
    })
}

/// For `K' ⊆ K`, sends each EKOR index `w` of `fine` (level `K'`) to the ids
/// of `Σ_K(w)` in `coarse` (level `K`).
pub fn change_parahoric(group: &AffineWeylGroup, fine: &StratAtlas, coarse: &StratAtlas) -> Result<Vec<Vec<usize>>> {
    if fine.datum != coarse.datum || fine.mu != coarse.mu || fine.datum != DatumInfo::of(group) {
        return Err(Error::Parahoric("atlases describe different data".into()));
    }
    if !fine.parahoric.is_subset(&coarse.parahoric) {
        return Err(Error::Parahoric(format!(
            "{:?} is not contained in {:?}",
            fine.parahoric.nodes(),
            coarse.parahoric.nodes()
        )));
    }
    let pos: HashMap<&str, usize> = coarse.ekor.nodes.iter().map(|n| (n.elt.as_str(), n.id)).collect();
    let sigma_k = SigmaK::new(group, &coarse.parahoric);
    fine.ekor
        .nodes
        .iter()
        .map(|n| {
            let w = group.parse(&n.elt)?;
            let mut ids = sigma_k
                .get(&w)?
                .iter()
                .map(|x| {
                    let s = group.format(x);
                    pos.get(s.as_str()).copied().ok_or_else(|| {
                        Error::Internal(format!("Σ_K({}) contains {s} outside the index set", n.elt))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            ids.sort_unstable();
            Ok(ids)
        })
        .collect()
}
