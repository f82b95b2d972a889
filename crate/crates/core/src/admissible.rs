//! Admissible sets `Adm(μ)`, their parahoric variants and the EKOR index set.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::Ratio;
use rayon::prelude::*;

use crate::affine::{AffineElement, AffineWeylGroup, ElementInterner, ParabolicSubgroup, ParahoricType, Side};
use crate::error::{Error, Result};
use crate::Cochar;

/// A conjugacy class `{μ}` of cocharacters, given by its dominant member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjClassCochar {
    pub mu_dominant: Vec<i64>,
    /// Average of the `σ`-orbit of `mu_dominant`.
    pub mu_bar: Cochar,
    /// Image in `π₁(G)_σ`.
    pub mu_natural: Vec<i64>,
}

impl ConjClassCochar {
    pub fn new(group: &AffineWeylGroup, mu: &[i64]) -> Result<Self> {
        let datum = group.datum();
        if mu.len() != datum.rank() {
            return Err(crate::root_datum::DatumError::WrongLength { rank: datum.rank(), got: mu.len() }.into());
        }
        if !datum.is_dominant_integral(mu) {
            return Err(Error::NotDominant(mu.to_vec()));
        }
        let sigma = group.sigma();
        let mut sum = Cochar::zero(mu.len());
        let mut cur = mu.to_vec();
        for _ in 0..sigma.order() {
            sum = &sum + &Cochar::from_integers(&cur);
            cur = sigma.apply_lattice(&cur);
        }
        let order = Ratio::from_integer(BigInt::from(sigma.order()));
        Ok(Self {
            mu_dominant: mu.to_vec(),
            mu_bar: sum.scale(&(Ratio::from_integer(BigInt::from(1)) / order)),
            mu_natural: sigma.coinvariants().project(mu),
        })
    }
}

/// `τ_μ`: the length-zero element in the `Ω`-component of `t^μ`.
pub fn tau_of_mu(group: &AffineWeylGroup, mu: &ConjClassCochar) -> Result<AffineElement> {
    let (_, omega) = group.reduced_word(&group.translation(&mu.mu_dominant));
    if omega.length() != 0 || group.kappa(&omega) != mu.mu_natural {
        return Err(Error::Internal("no length-zero element with the Kottwitz invariant of μ".into()));
    }
    Ok(omega)
}

/// `Adm(μ) = {w : w ≤ t^{xμ} for some x ∈ W₀}`.
#[derive(Debug, Clone)]
pub struct AdmSet {
    pub mu: ConjClassCochar,
    /// The distinct translations `t^{xμ}`, sorted.
    pub generators: Vec<AffineElement>,
    elements: Vec<AffineElement>,
}

impl AdmSet {
    /// Sorted canonically; `τ_μ` comes first.
    pub fn elements(&self) -> &[AffineElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, w: &AffineElement) -> bool {
        self.elements.binary_search(w).is_ok()
    }
}

pub fn admissible_set(group: &AffineWeylGroup, mu: &ConjClassCochar) -> AdmSet {
    let generators: Vec<AffineElement> = group
        .datum()
        .orbit(&mu.mu_dominant)
        .iter()
        .map(|lambda| group.translation(lambda))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let interner = ElementInterner::new();
    generators.par_iter().for_each(|t| {
        for w in group.bruhat_ideal(t) {
            interner.intern(&w);
        }
    });
    AdmSet { mu: mu.clone(), generators, elements: interner.sorted() }
}

/// A double coset `W_K w W_K` with its two distinguished representatives.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DoubleCoset {
    /// `ᴷwᴷ`, the minimal element.
    pub min_rep: AffineElement,
    /// `_Kwᴷ`, the longest minimal right-coset representative.
    pub max_min_rep: AffineElement,
}

/// `Adm(μ)^K = W_K Adm(μ) W_K` and `Adm(μ)_K`, its set of double cosets.
#[derive(Debug, Clone)]
pub struct AdmissibleK {
    pub parahoric: ParahoricType,
    pub adm_upper: Vec<AffineElement>,
    pub double_cosets: Vec<DoubleCoset>,
}

impl AdmissibleK {
    /// Index of the double coset containing `w`.
    pub fn coset_of(&self, group: &AffineWeylGroup, w: &AffineElement) -> Option<usize> {
        let m = group.coset_min(w, &self.parahoric, Side::Double);
        self.double_cosets.iter().position(|d| d.min_rep == m)
    }

    /// Order on `Adm(μ)_K`, via the minimal representatives.
    pub fn leq(&self, group: &AffineWeylGroup, a: usize, b: usize) -> bool {
        group.bruhat_leq(&self.double_cosets[a].min_rep, &self.double_cosets[b].min_rep)
    }
}

pub fn admissible_k(group: &AffineWeylGroup, adm: &AdmSet, wk: &ParabolicSubgroup) -> Result<AdmissibleK> {
    let j = wk.parahoric_type();
    let mins: BTreeSet<AffineElement> = adm.elements().iter().map(|w| group.coset_min(w, j, Side::Double)).collect();
    let double_cosets = mins
        .iter()
        .map(|m| Ok(DoubleCoset { min_rep: m.clone(), max_min_rep: group.max_min_representative(m, wk)? }))
        .collect::<Result<Vec<_>>>()?;
    let upper: BTreeSet<AffineElement> = mins.par_iter().flat_map_iter(|m| group.double_coset(m, wk)).collect();
    Ok(AdmissibleK { parahoric: j.clone(), adm_upper: upper.into_iter().collect(), double_cosets })
}

/// `Adm(μ) ∩ ᴷW̃`, sorted.
pub fn ekor_index_set(group: &AffineWeylGroup, adm: &AdmSet, j: &ParahoricType) -> Vec<AffineElement> {
    adm.elements().iter().filter(|w| group.is_left_minimal(w, j)).cloned().collect()
}

/// [`ekor_index_set`], additionally checking it against `Adm(μ)^K ∩ ᴷW̃`.
pub fn ekor_index_set_checked(group: &AffineWeylGroup, adm: &AdmSet, adm_k: &AdmissibleK) -> Result<Vec<AffineElement>> {
    let direct = ekor_index_set(group, adm, &adm_k.parahoric);
    let via_upper: Vec<AffineElement> =
        adm_k.adm_upper.iter().filter(|w| group.is_left_minimal(w, &adm_k.parahoric)).cloned().collect();
    if direct != via_upper {
        let extra: Vec<String> = via_upper.iter().filter(|w| !adm.contains(w)).map(|w| group.format(w)).collect();
        return Err(Error::Internal(format!("Adm^K ∩ ᴷW̃ differs from Adm ∩ ᴷW̃; extra elements {extra:?}")));
    }
    Ok(direct)
}
