//! Newton and Kottwitz invariants, `σ`-straight elements and `B(G, μ)`.

mod polygon;

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::admissible::{AdmSet, ConjClassCochar};
use crate::affine::{AffineElement, AffineWeylGroup};
use crate::error::{Error, Result};
use crate::root_datum::{DatumKind, RhoFactor};
use crate::Cochar;

pub use polygon::polygon_oracle;

type Q = Ratio<BigInt>;

/// A `σ`-conjugacy class `[b]`, recorded by its invariants.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NewtonPair {
    pub nu: Cochar,
    pub kappa: Vec<i64>,
}

/// A straight class together with the members found in the working set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StraightClass {
    pub newton: NewtonPair,
    /// Sorted; the first is the representative.
    pub members: Vec<AffineElement>,
}

impl StraightClass {
    pub fn representative(&self) -> &AffineElement {
        &self.members[0]
    }
}

/// Translation part of `(wσ)^n` and `n`, for the least `n` with
/// `(wσ)^n` a pure translation and `σ^n = 1`.
pub fn power_to_translation(group: &AffineWeylGroup, w: &AffineElement) -> Result<(Vec<i64>, usize)> {
    let order = group.sigma().order();
    let bound = group.datum().weyl().order() * order;
    let id = group.datum().weyl().identity();
    let mut acc = group.identity();
    let mut twisted = w.clone();
    for n in 1..=bound {
        acc = group.mul(&acc, &twisted);
        if acc.finite() == id && n % order == 0 {
            return Ok((acc.translation().to_vec(), n));
        }
        twisted = group.apply_sigma(&twisted);
    }
    Err(Error::Internal(format!("(wσ)^n is not a translation for n ≤ {bound}")))
}

pub fn newton_point(group: &AffineWeylGroup, w: &AffineElement) -> Result<Cochar> {
    let (lambda, n) = power_to_translation(group, w)?;
    let dom = group.datum().dominant_integral(&lambda);
    Ok(Cochar::from_scaled(&dom, n as i64))
}

pub fn kottwitz_point(group: &AffineWeylGroup, w: &AffineElement) -> Vec<i64> {
    group.kappa(w)
}

pub fn newton_pair(group: &AffineWeylGroup, w: &AffineElement) -> Result<NewtonPair> {
    Ok(NewtonPair { nu: newton_point(group, w)?, kappa: kottwitz_point(group, w) })
}

/// `ℓ(w) = ⟨ν(w), 2ρ⟩`, tested as `n·ℓ(w) = ⟨dom λ_n, 2ρ⟩`.
pub fn is_straight(group: &AffineWeylGroup, w: &AffineElement) -> Result<bool> {
    let (lambda, n) = power_to_translation(group, w)?;
    let datum = group.datum();
    let dom = datum.dominant_integral(&lambda);
    let pairing: i64 = dom.iter().zip(datum.two_rho()).map(|(a, b)| a * b).sum();
    Ok(pairing == n as i64 * i64::from(w.length()))
}

/// Length of `(wσ)^m`, i.e. of `w σ(w) ⋯ σ^{m−1}(w)`.
pub fn twisted_power_length(group: &AffineWeylGroup, w: &AffineElement, m: usize) -> u32 {
    let mut acc = group.identity();
    let mut twisted = w.clone();
    for _ in 0..m {
        acc = group.mul(&acc, &twisted);
        twisted = group.apply_sigma(&twisted);
    }
    acc.length()
}

/// Straight elements of `set` grouped by `(ν, κ)`, in canonical order.
///
/// With `verify`, the grouping is checked against explicit
/// `σ`-conjugation: every class must be connected by length-preserving
/// moves `w ↦ s w σ(s)` and conjugation by length-zero elements.
pub fn straight_classes_in(group: &AffineWeylGroup, set: &[AffineElement], verify: bool) -> Result<Vec<StraightClass>> {
    let mut grouped: HashMap<NewtonPair, Vec<AffineElement>> = HashMap::new();
    for w in set {
        if is_straight(group, w)? {
            grouped.entry(newton_pair(group, w)?).or_default().push(w.clone());
        }
    }
    let mut classes: Vec<StraightClass> = grouped
        .into_iter()
        .map(|(newton, mut members)| {
            members.sort();
            members.dedup();
            StraightClass { newton, members }
        })
        .collect();
    sort_newton(group, &mut classes, |c| &c.newton);
    if verify {
        verify_by_conjugation(group, &classes)?;
    }
    Ok(classes)
}

/// Canonical order: by `κ`, then `⟨ν, 2ρ⟩`, then `ν`. The basic class of each
/// `κ` comes first.
pub fn sort_newton<T>(group: &AffineWeylGroup, items: &mut [T], key: impl Fn(&T) -> &NewtonPair) {
    items.sort_by_cached_key(|x| {
        let b = key(x);
        (b.kappa.clone(), group.datum().rho_pairing(&b.nu, RhoFactor::Two, false), b.nu.clone())
    });
}

const ORBIT_CAP: usize = 200_000;

/// Length-zero elements `t^λ u` with `λ ∈ {−1,0,1}^m`; these generate `Ω`
/// for the built-in data.
pub fn small_length_zero_elements(group: &AffineWeylGroup) -> Vec<AffineElement> {
    let m = group.datum().rank();
    let mut out = Vec::new();
    let mut lambda = vec![-1i64; m];
    loop {
        for u in group.datum().weyl().elements() {
            if group.compute_length(&lambda, u) == 0 {
                out.push(group.element(&lambda, u));
            }
        }
        let Some(k) = lambda.iter().position(|&x| x < 1) else { break };
        lambda[k] += 1;
        for x in &mut lambda[..k] {
            *x = -1;
        }
    }
    out.sort();
    out
}

/// Searches the length-preserving `σ`-conjugation graph from `start` until
/// every element of `goal` has been reached (or a size cap is hit). Returns
/// the elements of `watch` that were reached.
pub fn conjugation_search(
    group: &AffineWeylGroup,
    start: &AffineElement,
    goal: &HashSet<AffineElement>,
    watch: &HashSet<AffineElement>,
    omegas: &[AffineElement],
) -> HashSet<AffineElement> {
    let mut seen = HashSet::from([start.clone()]);
    let mut found: HashSet<AffineElement> = watch.iter().filter(|t| *t == start).cloned().collect();
    let mut remaining = goal.iter().filter(|t| *t != start).count();
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(w) = queue.pop_front() {
        if remaining == 0 || seen.len() > ORBIT_CAP {
            break;
        }
        let simple = (0..group.num_nodes()).map(|s| group.sigma_conjugate_simple(s, &w));
        let by_omega = omegas.iter().map(|o| group.sigma_conjugate(o, &w));
        for next in simple.chain(by_omega) {
            if next.length() == w.length() && seen.insert(next.clone()) {
                if goal.contains(&next) {
                    remaining -= 1;
                }
                if watch.contains(&next) {
                    found.insert(next.clone());
                }
                queue.push_back(next);
            }
        }
    }
    found
}

fn verify_by_conjugation(group: &AffineWeylGroup, classes: &[StraightClass]) -> Result<()> {
    let omegas = small_length_zero_elements(group);
    let all: HashSet<AffineElement> = classes.iter().flat_map(|c| c.members.iter().cloned()).collect();
    for class in classes {
        let own: HashSet<AffineElement> = class.members.iter().cloned().collect();
        let found = conjugation_search(group, class.representative(), &own, &all, &omegas);
        if let Some(stranger) = found.iter().find(|w| !own.contains(*w)) {
            return Err(Error::Internal(format!(
                "{} and {} are σ-conjugate but have different Newton invariants",
                group.format(class.representative()),
                group.format(stranger)
            )));
        }
        if let Some(missing) = own.iter().find(|w| !found.contains(*w)) {
            return Err(Error::Internal(format!(
                "{} and {} share Newton invariants but were not connected by σ-conjugation",
                group.format(class.representative()),
                group.format(missing)
            )));
        }
    }
    Ok(())
}

/// `[b] ≤ [b']`: equal `κ` and `ν ≤ ν'` in the dominance order.
pub fn leq_b(group: &AffineWeylGroup, b: &NewtonPair, b2: &NewtonPair) -> bool {
    b.kappa == b2.kappa && group.datum().dominance_leq(&b.nu, &b2.nu).expect("Newton points are dominant")
}

/// `B(G, μ)` as the straight classes meeting `Adm(μ)`, checked against the
/// defining conditions `κ = μ^♮`, `ν ≤ μ̄`.
pub fn b_of_g_mu(group: &AffineWeylGroup, adm: &AdmSet, verify: bool) -> Result<Vec<StraightClass>> {
    let classes = straight_classes_in(group, adm.elements(), verify)?;
    let mu = &adm.mu;
    for c in &classes {
        let ok_nu = group.datum().dominance_leq(&c.newton.nu, &mu.mu_bar)?;
        if c.newton.kappa != mu.mu_natural || !ok_nu {
            return Err(Error::Internal(format!("class {:?} is not neutral acceptable for μ", c.newton)));
        }
    }
    Ok(classes)
}

/// `def([b])` for `GL(n)` with trivial `σ`: `n − Σ m_i`, where the slope
/// `p_i/q_i` (lowest terms) occurs `m_i q_i` times.
pub fn defect(group: &AffineWeylGroup, b: &NewtonPair) -> Result<u32> {
    let datum = group.datum();
    let DatumKind::GeneralLinear(n) = datum.kind() else {
        return Err(Error::DefectUnavailable(datum.name().to_string()));
    };
    if !group.sigma().is_identity() {
        return Err(Error::DefectUnavailable(format!("{} with nontrivial σ", datum.name())));
    }
    let mut mult: BTreeMap<&Q, u32> = BTreeMap::new();
    for slope in b.nu.coords() {
        *mult.entry(slope).or_default() += 1;
    }
    let blocks: u32 = mult
        .iter()
        .map(|(slope, &count)| {
            let q = u32::try_from(slope.denom()).expect("small denominator");
            count / q
        })
        .sum();
    Ok(n as u32 - blocks)
}

fn require_integral(x: Q) -> Result<Q> {
    if x.is_integer() {
        Ok(x)
    } else {
        Err(Error::NonIntegral(crate::num::format_rational(&x)))
    }
}

/// `⟨μ + ν, ρ⟩ − ½ def([b])`.
pub fn newton_dim_prediction(group: &AffineWeylGroup, mu: &ConjClassCochar, b: &NewtonPair) -> Result<Q> {
    let def = defect(group, b)?;
    let sum = &Cochar::from_integers(&mu.mu_dominant) + &b.nu;
    let rho = group.datum().rho_pairing(&sum, RhoFactor::One, false);
    require_integral(rho - Q::new(BigInt::from(def), BigInt::from(2)))
}

/// `⟨ν, 2ρ⟩`.
pub fn leaf_dim_prediction(group: &AffineWeylGroup, b: &NewtonPair) -> Result<Q> {
    require_integral(group.datum().rho_pairing(&b.nu, RhoFactor::Two, false))
}

/// Whether `ν` is central, i.e. the class is basic.
pub fn is_basic(group: &AffineWeylGroup, b: &NewtonPair) -> bool {
    let datum = group.datum();
    datum.simple_roots().iter().all(|a| b.nu.pair(a).is_zero())
}
