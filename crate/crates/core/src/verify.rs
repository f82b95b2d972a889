//! Exhaustive checks of the structural results at small rank. A failure is a
//! bug and comes with a counterexample dump.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::admissible::{admissible_k, admissible_set, ekor_index_set, tau_of_mu, AdmSet, ConjClassCochar};
use crate::affine::{AffineElement, AffineWeylGroup, ParabolicSubgroup, ParahoricType};
use crate::error::{Error, Result};
use crate::partial_conj::{ekor_closure, leq_straight, SigmaK};
use crate::sigma_classes::{b_of_g_mu, is_basic, is_straight, leq_b, newton_pair, polygon_oracle, NewtonPair, StraightClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    /// `None` for checks that do not depend on `K`.
    pub parahoric: Option<Vec<usize>>,
    pub status: Status,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, parahoric: Option<&ParahoricType>, failures: Vec<String>, ok_detail: String) -> Self {
        let (status, detail) = if failures.is_empty() {
            (Status::Pass, ok_detail)
        } else {
            let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
            (Status::Fail, format!("{} counterexample(s): {}", failures.len(), shown.join("; ")))
        };
        Self { name: name.into(), parahoric: parahoric.map(|j| j.nodes().to_vec()), status, detail }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub datum: String,
    pub sigma: Vec<usize>,
    pub mu: Vec<i64>,
    pub checks: Vec<CheckResult>,
}

impl InstanceReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

fn fmt_set(group: &AffineWeylGroup, items: impl IntoIterator<Item = AffineElement>) -> String {
    let v: Vec<String> = items.into_iter().map(|w| group.format(&w)).collect();
    format!("{{{}}}", v.join(", "))
}

/// `W_K Adm(μ) W_K ∩ ᴷW̃ = Adm(μ) ∩ ᴷW̃`.
pub fn check_adm_k_equality(group: &AffineWeylGroup, adm: &AdmSet, wk: &ParabolicSubgroup) -> Result<CheckResult> {
    let j = wk.parahoric_type();
    let adm_k = admissible_k(group, adm, wk)?;
    let upper: BTreeSet<AffineElement> = adm_k.adm_upper.iter().filter(|w| group.is_left_minimal(w, j)).cloned().collect();
    let direct: BTreeSet<AffineElement> = ekor_index_set(group, adm, j).into_iter().collect();
    let failures: Vec<String> = upper.symmetric_difference(&direct).map(|w| group.format(w)).collect();
    Ok(CheckResult::new("adm-k-equality", Some(j), failures, format!("{} indices", direct.len())))
}

/// Every class of `B(G, μ)` has a straight representative in `Adm(μ) ∩ ᴷW̃`.
pub fn check_surjectivity(
    group: &AffineWeylGroup,
    adm: &AdmSet,
    j: &ParahoricType,
    classes: &[StraightClass],
) -> Result<CheckResult> {
    let mut hit = HashSet::new();
    for x in ekor_index_set(group, adm, j) {
        if is_straight(group, &x)? {
            hit.insert(newton_pair(group, &x)?);
        }
    }
    let failures = classes.iter().filter(|c| !hit.contains(&c.newton)).map(|c| format!("{:?}", c.newton)).collect();
    Ok(CheckResult::new("surjectivity", Some(j), failures, format!("{} classes", classes.len())))
}

/// `⋃_{w ∈ Adm, w ≤ x} Σ_K(w) = {x' ∈ ᴷW̃ : x' ≼_{K,σ} x}` for each index `x`.
pub fn check_closure_identity(group: &AffineWeylGroup, adm: &AdmSet, wk: &ParabolicSubgroup) -> Result<CheckResult> {
    let j = wk.parahoric_type();
    let index = ekor_index_set(group, adm, j);
    let sigma_k = SigmaK::new(group, j);
    let failures: Vec<Option<String>> = index
        .par_iter()
        .map(|x| {
            let closure: BTreeSet<AffineElement> = ekor_closure(group, wk, x, &index)?.into_iter().collect();
            let mut union = BTreeSet::new();
            for w in group.bruhat_ideal(x) {
                if adm.contains(&w) {
                    union.extend(sigma_k.get(&w)?.iter().cloned());
                }
            }
            Ok((union != closure).then(|| {
                format!(
                    "x = {}: union {} vs closure {}",
                    group.format(x),
                    fmt_set(group, union),
                    fmt_set(group, closure)
                )
            }))
        })
        .collect::<Result<_>>()?;
    let failures: Vec<String> = failures.into_iter().flatten().collect();
    Ok(CheckResult::new("closure-identity", Some(j), failures, format!("{} indices", index.len())))
}

/// `≼` on straight classes, by Bruhat-ideal search, agrees with `leq_B`.
pub fn check_straight_order(group: &AffineWeylGroup, classes: &[StraightClass]) -> Result<CheckResult> {
    let mut failures = Vec::new();
    for a in classes {
        for b in classes {
            let by_ideal = leq_straight(group, a, b, true)?;
            if by_ideal != leq_b(group, &a.newton, &b.newton) {
                failures.push(format!("{:?} vs {:?}: ideal search says {by_ideal}", a.newton, b.newton));
            }
        }
    }
    Ok(CheckResult::new("straight-order-isomorphism", None, failures, format!("{} pairs", classes.len().pow(2))))
}

/// `τ_μ` has length zero, lies in `Adm(μ)` and is below every element.
pub fn check_tau_minimality(group: &AffineWeylGroup, adm: &AdmSet) -> Result<CheckResult> {
    let tau = tau_of_mu(group, &adm.mu)?;
    let mut failures = Vec::new();
    if tau.length() != 0 || !adm.contains(&tau) {
        failures.push(format!("τ = {} not a length-zero element of Adm", group.format(&tau)));
    }
    failures.extend(adm.elements().iter().filter(|w| !group.bruhat_leq(&tau, w)).map(|w| group.format(w)));
    Ok(CheckResult::new("tau-minimality", None, failures, group.format(&tau)))
}

/// `B(G, μ)` has a unique minimum, which is basic, and a unique maximum with
/// `ν = μ̄`.
pub fn check_newton_extremes(group: &AffineWeylGroup, adm: &AdmSet, classes: &[StraightClass]) -> CheckResult {
    let bs: Vec<&NewtonPair> = classes.iter().map(|c| &c.newton).collect();
    let minima: Vec<&&NewtonPair> = bs.iter().filter(|b| bs.iter().all(|o| leq_b(group, b, o))).collect();
    let maxima: Vec<&&NewtonPair> = bs.iter().filter(|b| bs.iter().all(|o| leq_b(group, o, b))).collect();
    let mut failures = Vec::new();
    if minima.len() != 1 || !is_basic(group, minima[0]) {
        failures.push(format!("minima {minima:?}"));
    }
    if maxima.len() != 1 || maxima[0].nu != adm.mu.mu_bar {
        failures.push(format!("maxima {maxima:?}"));
    }
    CheckResult::new("newton-extremes", None, failures, format!("{} classes", bs.len()))
}

/// The straight-class image of `Adm(μ)` equals the polygon enumeration.
pub fn check_polygon_oracle(group: &AffineWeylGroup, adm: &AdmSet, classes: &[StraightClass]) -> CheckResult {
    let ours: BTreeSet<NewtonPair> = classes.iter().map(|c| c.newton.clone()).collect();
    match polygon_oracle(group, &adm.mu) {
        Ok(oracle) => {
            let oracle: BTreeSet<NewtonPair> = oracle.into_iter().collect();
            let failures = ours.symmetric_difference(&oracle).map(|b| format!("{b:?}")).collect();
            CheckResult::new("polygon-oracle", None, failures, format!("{} classes", ours.len()))
        }
        Err(Error::Unsupported(why)) => CheckResult {
            name: "polygon-oracle".into(),
            parahoric: None,
            status: Status::Skipped,
            detail: why,
        },
        Err(e) => CheckResult::new("polygon-oracle", None, vec![e.to_string()], String::new()),
    }
}

/// Checks that depend only on `(G, μ)`.
pub fn verify_common(group: &AffineWeylGroup, mu: &[i64]) -> Result<Vec<CheckResult>> {
    let mu = ConjClassCochar::new(group, mu)?;
    let adm = admissible_set(group, &mu);
    let classes = b_of_g_mu(group, &adm, false)?;
    Ok(vec![
        check_tau_minimality(group, &adm)?,
        check_newton_extremes(group, &adm, &classes),
        check_polygon_oracle(group, &adm, &classes),
        check_straight_order(group, &classes)?,
    ])
}

/// Checks for one parahoric `K`.
pub fn verify_parahoric(group: &AffineWeylGroup, mu: &[i64], j: &ParahoricType) -> Result<Vec<CheckResult>> {
    let mu = ConjClassCochar::new(group, mu)?;
    let adm = admissible_set(group, &mu);
    let classes = b_of_g_mu(group, &adm, false)?;
    let wk = ParabolicSubgroup::new(group, j)?;
    Ok(vec![
        check_adm_k_equality(group, &adm, &wk)?,
        check_surjectivity(group, &adm, j, &classes)?,
        check_closure_identity(group, &adm, &wk)?,
    ])
}

/// Runs every check for `(G, μ)` and each `K` in `parahorics`.
pub fn verify_instance(group: &AffineWeylGroup, mu: &[i64], parahorics: &[ParahoricType]) -> Result<InstanceReport> {
    let dominant = ConjClassCochar::new(group, mu)?.mu_dominant;
    let mut checks = verify_common(group, mu)?;
    for j in parahorics {
        checks.extend(verify_parahoric(group, mu, j)?);
    }
    Ok(InstanceReport {
        datum: group.datum().name().to_string(),
        sigma: group.sigma().permutation().to_vec(),
        mu: dominant,
        checks,
    })
}
