//! Finite root data: lattices, roots and coroots, the Weyl group `W₀`,
//! dominance, `ρ`-pairings and the fundamental group `π₁ = X_*/Q^∨`.
//!
//! Cocharacters are integer column vectors in `Z^m`; characters (roots) are
//! integer covectors on the same lattice. Only unramified data are modelled:
//! `X_*` is torsion-free and Frobenius acts through a based-datum
//! automorphism ([`DiagramAutomorphism`]).

mod builtin;
mod json;
mod sigma;
pub mod weyl;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::num::{integer_matrix_to_rational, rat, solve_rational, RationalCochar, Scalar};
use crate::snf::AbelianQuotient;

pub use builtin::{parse_label, BuiltinLabel};
pub use json::UserDatumSpec;
pub use sigma::DiagramAutomorphism;
pub use weyl::{FiniteWeylGroup, WIdx};

const MAX_ROOTS: usize = 4_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DatumError {
    #[error("simple roots and simple coroots have different counts ({roots} vs {coroots})")]
    MismatchedCounts { roots: usize, coroots: usize },
    #[error("vector of length {got} does not match lattice rank {rank}")]
    WrongLength { rank: usize, got: usize },
    #[error("more simple roots ({count}) than the lattice rank ({rank})")]
    TooManySimpleRoots { count: usize, rank: usize },
    #[error("Cartan condition fails at ({i},{j}): {reason}")]
    Cartan { i: usize, j: usize, reason: String },
    #[error("Weyl group is infinite or too large to enumerate")]
    InfiniteWeylGroup,
    #[error("{0} is not dominant")]
    NotDominant(String),
    #[error("invalid diagram automorphism: {0}")]
    BadAutomorphism(String),
    #[error("unknown or malformed datum label `{0}`")]
    BadLabel(String),
    #[error("malformed datum document: {0}")]
    BadDocument(String),
    #[error("cannot convert {0:?} to lattice coordinates")]
    BadCoordinates(Vec<i64>),
}

/// Family of a datum; decides which closed-form oracles apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum DatumKind {
    /// `GL(n)`.
    GeneralLinear(usize),
    /// `GSp(2g)`, stored with `g`.
    Symplectic(usize),
    /// `SL(n)`.
    SpecialLinear(usize),
    Custom,
}

/// `⟨λ, ρ⟩` or `⟨λ, 2ρ⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhoFactor {
    One,
    Two,
}

pub struct RootDatum {
    name: String,
    kind: DatumKind,
    rank: usize,
    simple_roots: Vec<Vec<i64>>,
    simple_coroots: Vec<Vec<i64>>,
    cartan: Vec<Vec<i64>>,
    /// Positive roots first (by height), then their negatives in the same order.
    roots: Vec<Vec<i64>>,
    coroots: Vec<Vec<i64>>,
    root_heights: Vec<i64>,
    root_index: HashMap<Vec<i64>, usize>,
    components: Vec<Vec<usize>>,
    highest_roots: Vec<usize>,
    two_rho: Vec<i64>,
    weyl: FiniteWeylGroup,
    /// `inv_negative[u·N + k]`: whether `u⁻¹ α_k` is negative, `α_k` positive.
    inv_negative: Vec<bool>,
    display_weights: Vec<Vec<i64>>,
    display_perm: Vec<u32>,
    one_line_index: HashMap<Vec<u32>, WIdx>,
    ambient: bool,
    pi1: AbelianQuotient,
}

impl fmt::Debug for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RootDatum")
            .field("name", &self.name)
            .field("rank", &self.rank)
            .field("simple_roots", &self.simple_roots)
            .field("simple_coroots", &self.simple_coroots)
            .field("weyl_order", &self.weyl.order())
            .finish()
    }
}

impl RootDatum {
    /// Validates the data and enumerates roots and `W₀`.
    ///
    /// `display_weights` is a `W₀`-stable list of characters used for the
    /// one-line form of Weyl group elements; `ambient` marks it as a faithful
    /// coordinate system on `X_*` (so cocharacters may be given in it).
    pub fn new(
        name: impl Into<String>,
        kind: DatumKind,
        rank: usize,
        simple_roots: Vec<Vec<i64>>,
        simple_coroots: Vec<Vec<i64>>,
        display_weights: Option<Vec<Vec<i64>>>,
        ambient: bool,
    ) -> Result<Self, DatumError> {
        let n = simple_roots.len();
        if n != simple_coroots.len() {
            return Err(DatumError::MismatchedCounts { roots: n, coroots: simple_coroots.len() });
        }
        if n > rank {
            return Err(DatumError::TooManySimpleRoots { count: n, rank });
        }
        for v in simple_roots.iter().chain(&simple_coroots) {
            if v.len() != rank {
                return Err(DatumError::WrongLength { rank, got: v.len() });
            }
        }
        let cartan: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| dot(&simple_coroots[i], &simple_roots[j])).collect())
            .collect();
        check_cartan(&cartan)?;

        let (roots, coroots, root_heights) = enumerate_roots(&simple_roots, &simple_coroots, &cartan)?;
        let npos = roots.len() / 2;
        let root_index: HashMap<Vec<i64>, usize> =
            roots.iter().enumerate().map(|(k, r)| (r.clone(), k)).collect();

        let components = dynkin_components(&cartan);
        let highest_roots = components
            .iter()
            .map(|comp| {
                // Highest root: maximal height among positive roots supported on the component.
                (0..npos)
                    .filter(|&k| {
                        let coeffs = root_coefficients(&roots[k], &simple_roots);
                        coeffs.iter().enumerate().all(|(i, &c)| c == 0 || comp.contains(&i))
                    })
                    .max_by_key(|&k| (root_heights[k], std::cmp::Reverse(k)))
                    .expect("component without roots")
            })
            .collect();

        let two_rho = (0..rank).map(|j| roots[..npos].iter().map(|r| r[j]).sum()).collect();

        let generators = simple_roots
            .iter()
            .zip(&simple_coroots)
            .map(|(r, c)| weyl::reflection_matrix(r, c))
            .collect();
        let weyl = FiniteWeylGroup::generate(rank, generators)?;

        let mut inv_negative = Vec::with_capacity(weyl.order() * npos);
        for u in weyl.elements() {
            let uinv = weyl.inverse(u);
            for root in &roots[..npos] {
                let image = weyl.act_covector(uinv, root);
                inv_negative.push(root_index[&image] >= npos);
            }
        }

        let display_weights = display_weights.unwrap_or_else(|| roots.clone());
        let weight_index: HashMap<&Vec<i64>, u32> =
            display_weights.iter().enumerate().map(|(i, w)| (w, i as u32)).collect();
        let mut display_perm = Vec::with_capacity(weyl.order() * display_weights.len());
        let mut one_line_index = HashMap::new();
        for u in weyl.elements() {
            let start = display_perm.len();
            for w in &display_weights {
                let image = weyl.act_covector(u, w);
                let j = weight_index
                    .get(&image)
                    .copied()
                    .ok_or_else(|| DatumError::BadDocument("display weights are not W₀-stable".into()))?;
                display_perm.push(j);
            }
            one_line_index.insert(display_perm[start..].to_vec(), u);
        }
        if one_line_index.len() != weyl.order() {
            return Err(DatumError::BadDocument("display weights do not separate W₀".into()));
        }

        let pi1 = AbelianQuotient::new(rank, &simple_coroots);

        Ok(Self {
            name: name.into(),
            kind,
            rank,
            simple_roots,
            simple_coroots,
            cartan,
            roots,
            coroots,
            root_heights,
            root_index,
            components,
            highest_roots,
            two_rho,
            weyl,
            inv_negative,
            display_weights,
            display_perm,
            one_line_index,
            ambient,
            pi1,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> DatumKind {
        self.kind
    }

    /// Rank `m` of the cocharacter lattice.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number `n` of simple roots.
    pub fn semisimple_rank(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn simple_roots(&self) -> &[Vec<i64>] {
        &self.simple_roots
    }

    pub fn simple_coroots(&self) -> &[Vec<i64>] {
        &self.simple_coroots
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn coroots(&self) -> &[Vec<i64>] {
        &self.coroots
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.roots[..self.num_positive_roots()]
    }

    pub fn num_positive_roots(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn root_height(&self, k: usize) -> i64 {
        self.root_heights[k]
    }

    pub fn root_position(&self, root: &[i64]) -> Option<usize> {
        self.root_index.get(root).copied()
    }

    /// Simple-root indices of each irreducible component, in increasing order.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// Root index of the highest root of each component.
    pub fn highest_roots(&self) -> &[usize] {
        &self.highest_roots
    }

    pub fn weyl(&self) -> &FiniteWeylGroup {
        &self.weyl
    }

    /// Sum of the positive roots as a covector.
    pub fn two_rho(&self) -> &[i64] {
        &self.two_rho
    }

    pub fn pi1(&self) -> &AbelianQuotient {
        &self.pi1
    }

    pub(crate) fn inv_negative(&self, u: WIdx) -> &[bool] {
        let n = self.num_positive_roots();
        &self.inv_negative[u as usize * n..(u as usize + 1) * n]
    }

    /// One-line form of `u`: 1-based images of the display weights.
    pub fn one_line(&self, u: WIdx) -> Vec<u32> {
        let k = self.display_weights.len();
        self.display_perm[u as usize * k..(u as usize + 1) * k].iter().map(|j| j + 1).collect()
    }

    pub fn from_one_line(&self, one_line: &[u32]) -> Option<WIdx> {
        if one_line.contains(&0) {
            return None;
        }
        let key: Vec<u32> = one_line.iter().map(|j| j - 1).collect();
        self.one_line_index.get(&key).copied()
    }

    pub fn display_weights(&self) -> &[Vec<i64>] {
        &self.display_weights
    }

    /// Whether cocharacters may be given in display-weight ("ambient") coordinates.
    pub fn has_ambient_coordinates(&self) -> bool {
        self.ambient
    }

    /// Ambient coordinates `(χ_i(λ))_i` of a cocharacter.
    pub fn to_ambient(&self, lambda: &[i64]) -> Vec<i64> {
        self.display_weights.iter().map(|w| dot(w, lambda)).collect()
    }

    /// Accepts a cocharacter either in lattice coordinates (length `m`) or,
    /// when available, in ambient coordinates.
    pub fn cochar_from_user(&self, v: &[i64]) -> Result<Vec<i64>, DatumError> {
        if v.len() == self.rank {
            return Ok(v.to_vec());
        }
        if self.ambient && v.len() == self.display_weights.len() {
            let a = integer_matrix_to_rational::<i64>(&self.display_weights);
            let b: Vec<Ratio<i64>> = v.iter().map(|&x| Ratio::from_integer(x)).collect();
            let x = solve_rational(&a, &b).ok_or_else(|| DatumError::BadCoordinates(v.to_vec()))?;
            if x.iter().any(|c| !c.is_integer()) {
                return Err(DatumError::BadCoordinates(v.to_vec()));
            }
            return Ok(x.iter().map(|c| *c.numer()).collect());
        }
        Err(DatumError::WrongLength { rank: self.rank, got: v.len() })
    }

    /// `⟨λ, α⟩` for the `k`-th root.
    pub fn pair_root(&self, lambda: &[i64], k: usize) -> i64 {
        dot(lambda, &self.roots[k])
    }

    pub fn is_dominant_integral(&self, lambda: &[i64]) -> bool {
        self.simple_roots.iter().all(|a| dot(lambda, a) >= 0)
    }

    pub fn is_dominant<T: Scalar>(&self, lambda: &RationalCochar<T>) -> bool {
        self.simple_roots.iter().all(|a| !lambda.pair(a).is_negative())
    }

    /// Dominant representative of `W₀ · λ` with a witness `u`, `u·λ = λ_dom`.
    pub fn dominant_representative<T: Scalar>(&self, lambda: &RationalCochar<T>) -> (RationalCochar<T>, WIdx) {
        let mut cur = lambda.clone();
        let mut witness = self.weyl.identity();
        loop {
            let Some(i) = self.simple_roots.iter().position(|a| cur.pair(a).is_negative()) else {
                return (cur, witness);
            };
            let p = cur.pair(&self.simple_roots[i]);
            let shift = RationalCochar::from_integers(&self.simple_coroots[i]).scale(&p);
            cur = &cur - &shift;
            witness = self.weyl.mul(self.weyl.simple_reflection(i), witness);
        }
    }

    /// Integral version of [`dominant_representative`](Self::dominant_representative).
    pub fn dominant_integral(&self, lambda: &[i64]) -> Vec<i64> {
        let mut cur = lambda.to_vec();
        while let Some(i) = self.simple_roots.iter().position(|a| dot(&cur, a) < 0) {
            let p = dot(&cur, &self.simple_roots[i]);
            for (c, a) in cur.iter_mut().zip(&self.simple_coroots[i]) {
                *c -= p * a;
            }
        }
        cur
    }

    /// Dominance order on dominant rational cocharacters: `μ − λ` is a
    /// non-negative rational combination of simple coroots.
    pub fn dominance_leq<T: Scalar>(
        &self,
        lambda: &RationalCochar<T>,
        mu: &RationalCochar<T>,
    ) -> Result<bool, DatumError> {
        for v in [lambda, mu] {
            if v.rank() != self.rank {
                return Err(DatumError::WrongLength { rank: self.rank, got: v.rank() });
            }
            if !self.is_dominant(v) {
                return Err(DatumError::NotDominant(v.to_string()));
            }
        }
        Ok(self.coroot_coefficients(&(mu - lambda)).is_some_and(|c| c.iter().all(|x| !x.is_negative())))
    }

    /// Coefficients of `v` in the simple coroots, if `v` lies in their `Q`-span.
    pub fn coroot_coefficients<T: Scalar>(&self, v: &RationalCochar<T>) -> Option<Vec<Ratio<T>>> {
        let n = self.semisimple_rank();
        if n == 0 {
            return v.coords().iter().all(|c| c.is_zero()).then(Vec::new);
        }
        let a: Vec<Vec<Ratio<T>>> = (0..self.rank)
            .map(|i| (0..n).map(|j| rat(self.simple_coroots[j][i])).collect())
            .collect();
        solve_rational(&a, v.coords())
    }

    pub fn rho_pairing<T: Scalar>(&self, lambda: &RationalCochar<T>, factor: RhoFactor, dominantize: bool) -> Ratio<T> {
        let pairing = if dominantize {
            self.dominant_representative(lambda).0.pair(&self.two_rho)
        } else {
            lambda.pair(&self.two_rho)
        };
        match factor {
            RhoFactor::Two => pairing,
            RhoFactor::One => pairing / rat::<T>(2),
        }
    }

    /// Projection `X_* → π₁ = X_*/Q^∨` in normal-form coordinates.
    pub fn project_pi1(&self, lambda: &[i64]) -> Vec<i64> {
        self.pi1.project(lambda)
    }

    /// Ambient-coordinate `W₀`-orbit of `λ`, without repeats, in sorted order.
    pub fn orbit(&self, lambda: &[i64]) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = self.weyl.elements().map(|u| self.weyl.act(u, lambda)).collect();
        out.sort();
        out.dedup();
        out
    }
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_cartan(cartan: &[Vec<i64>]) -> Result<(), DatumError> {
    let n = cartan.len();
    for i in 0..n {
        for j in 0..n {
            let a = cartan[i][j];
            let reason = if i == j && a != 2 {
                Some(format!("diagonal entry is {a}, expected 2"))
            } else if i != j && a > 0 {
                Some(format!("off-diagonal entry {a} is positive"))
            } else if i != j && (a == 0) != (cartan[j][i] == 0) {
                Some("zero pattern is not symmetric".to_string())
            } else {
                None
            };
            if let Some(reason) = reason {
                return Err(DatumError::Cartan { i, j, reason });
            }
        }
    }
    Ok(())
}

type RootTables = (Vec<Vec<i64>>, Vec<Vec<i64>>, Vec<i64>);

/// Enumerates root/coroot pairs as the `W₀`-orbit of the simple pairs, tracking
/// coefficients in the simple roots. Fails when the orbit is infinite.
fn enumerate_roots(
    simple_roots: &[Vec<i64>],
    simple_coroots: &[Vec<i64>],
    cartan: &[Vec<i64>],
) -> Result<RootTables, DatumError> {
    let n = simple_roots.len();
    // A root is keyed by its coefficient vector c; its coroot by coefficient vector d.
    let mut seen: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let c: Vec<i64> = (0..n).map(|j| i64::from(i == j)).collect();
        seen.insert(c.clone(), c.clone());
        queue.push_back((c.clone(), c));
    }
    while let Some((c, d)) = queue.pop_front() {
        for i in 0..n {
            // s_i α = α − ⟨α_i^∨, α⟩ α_i,  s_i α^∨ = α^∨ − ⟨α^∨, α_i⟩ α_i^∨.
            let pa: i64 = (0..n).map(|j| c[j] * cartan[i][j]).sum();
            let pc: i64 = (0..n).map(|j| d[j] * cartan[j][i]).sum();
            let mut c2 = c.clone();
            c2[i] -= pa;
            let mut d2 = d.clone();
            d2[i] -= pc;
            if !seen.contains_key(&c2) {
                if c2.iter().any(|&x| x > 0) && c2.iter().any(|&x| x < 0) {
                    return Err(DatumError::InfiniteWeylGroup);
                }
                if seen.len() >= MAX_ROOTS {
                    return Err(DatumError::InfiniteWeylGroup);
                }
                seen.insert(c2.clone(), d2.clone());
                queue.push_back((c2, d2));
            }
        }
    }
    let mut positive: Vec<(Vec<i64>, Vec<i64>)> =
        seen.into_iter().filter(|(c, _)| c.iter().all(|&x| x >= 0)).collect();
    positive.sort_by(|(a, _), (b, _)| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    let rank = simple_roots.first().map_or(0, |r| r.len());
    let combine = |coeffs: &[i64], basis: &[Vec<i64>]| -> Vec<i64> {
        (0..rank).map(|j| coeffs.iter().zip(basis).map(|(c, b)| c * b[j]).sum()).collect()
    };
    let mut roots = Vec::new();
    let mut coroots = Vec::new();
    let mut heights = Vec::new();
    for (c, d) in &positive {
        roots.push(combine(c, simple_roots));
        coroots.push(combine(d, simple_coroots));
        heights.push(c.iter().sum());
    }
    let negatives: Vec<_> = roots.iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()).collect();
    let neg_coroots: Vec<_> = coroots.iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()).collect();
    let neg_heights: Vec<i64> = heights.iter().map(|h| -h).collect();
    roots.extend(negatives);
    coroots.extend(neg_coroots);
    heights.extend(neg_heights);
    Ok((roots, coroots, heights))
}

fn root_coefficients(root: &[i64], simple_roots: &[Vec<i64>]) -> Vec<i64> {
    let n = simple_roots.len();
    let rank = root.len();
    let a: Vec<Vec<Ratio<i64>>> = (0..rank)
        .map(|i| (0..n).map(|j| Ratio::from_integer(simple_roots[j][i])).collect())
        .collect();
    let b: Vec<Ratio<i64>> = root.iter().map(|&x| Ratio::from_integer(x)).collect();
    solve_rational(&a, &b)
        .expect("root outside the span of the simple roots")
        .iter()
        .map(|x| *x.numer())
        .collect()
}

fn dynkin_components(cartan: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = cartan.len();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![start];
        comp[start] = id;
        let mut k = 0;
        while k < members.len() {
            let i = members[k];
            for j in 0..n {
                if cartan[i][j] != 0 && comp[j] == usize::MAX {
                    comp[j] = id;
                    members.push(j);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}
