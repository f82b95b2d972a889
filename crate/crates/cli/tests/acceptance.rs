//! Acceptance suite. Each criterion prints one PASS/FAIL line; expected values
//! come from oracles written here, independent of the library algorithms.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_rational::Ratio;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strata::admissible::{admissible_set, ekor_index_set, ConjClassCochar};
use strata::affine::{AffineElement, AffineWeylGroup, ParahoricType};
use strata::atlas::build_atlas;
use strata::partial_conj::{leq_straight, SigmaK};
use strata::root_datum::{DatumKind, DiagramAutomorphism, RootDatum, WIdx};
use strata::sigma_classes::{b_of_g_mu, newton_dim_prediction, newton_pair, NewtonPair};
use strata_cli::{cmd_atlas, Format, JobSpec};

type Q = Ratio<i64>;
/// A `σ`-conjugacy class as (ambient Newton slopes in decreasing order, κ).
type ClassKey = (Vec<Q>, i64);
type DownSets = HashMap<AffineElement, BTreeSet<AffineElement>>;
type OutcomeMemo = HashMap<AffineElement, BTreeSet<Vec<AffineElement>>>;

// ---------------------------------------------------------------------------
// Instances

struct Instance {
    label: String,
    group: AffineWeylGroup,
    /// Lattice coordinates.
    mu: Vec<i64>,
}

fn identity_group(d: RootDatum) -> AffineWeylGroup {
    let s = DiagramAutomorphism::identity(&d);
    AffineWeylGroup::new(d, s).unwrap()
}

/// GL(2), GL(3), GL(4), GSp(4), GSp(6) with every non-central minuscule `μ`.
fn matrix() -> Vec<Instance> {
    let mut out = Vec::new();
    for n in 2..=4 {
        for k in 1..n {
            let mu: Vec<i64> = (0..n).map(|i| i64::from(i < k)).collect();
            out.push(Instance { label: format!("GL({n}) μ={mu:?}"), group: identity_group(RootDatum::gl(n).unwrap()), mu });
        }
    }
    for g in [2, 3] {
        // Siegel: x = (1,…,1), similitude 1.
        let mu = vec![1; g + 1];
        out.push(Instance { label: format!("GSp({}) Siegel", 2 * g), group: identity_group(RootDatum::gsp(g).unwrap()), mu });
    }
    out
}

// ---------------------------------------------------------------------------
// Coordinates and invariants for GL(n) and GSp(2g)

/// Ambient coordinates: identity for GL, `(x, c − x_g, …, c − x_1)` for GSp.
fn ambient<T: Clone + std::ops::Sub<Output = T>>(g: &AffineWeylGroup, v: &[T]) -> Vec<T> {
    match g.datum().kind() {
        DatumKind::GeneralLinear(_) => v.to_vec(),
        DatumKind::Symplectic(k) => {
            let c = v[k].clone();
            let mut out: Vec<T> = v[..k].to_vec();
            out.extend((0..k).rev().map(|i| c.clone() - v[i].clone()));
            out
        }
        other => panic!("no ambient coordinates for {other:?}"),
    }
}

/// `π₁` as `Z`: the sum for GL, the similitude for GSp.
fn kappa_oracle(g: &AffineWeylGroup, lambda: &[i64]) -> i64 {
    match g.datum().kind() {
        DatumKind::GeneralLinear(_) => lambda.iter().sum(),
        DatumKind::Symplectic(k) => lambda[k],
        other => panic!("no κ oracle for {other:?}"),
    }
}

/// `(λ_n, n)` with `w^n = t^{λ_n}`, trivial `σ`.
fn translation_power(g: &AffineWeylGroup, w: &AffineElement) -> (Vec<i64>, i64, AffineElement) {
    let id = g.identity().finite();
    let mut acc = w.clone();
    let mut n = 1;
    while acc.finite() != id {
        acc = g.mul(&acc, w);
        n += 1;
    }
    (acc.translation().to_vec(), n, acc)
}

fn class_of(g: &AffineWeylGroup, w: &AffineElement) -> ClassKey {
    let (lambda, n, _) = translation_power(g, w);
    let mut slopes: Vec<Q> = ambient(g, &lambda).into_iter().map(|x| Q::new(x, n)).collect();
    slopes.sort_by(|a, b| b.cmp(a));
    (slopes, kappa_oracle(g, w.translation()))
}

/// `ℓ(w^n) = n ℓ(w)` for the translation power `n` forces equality for all powers.
fn is_straight_oracle(g: &AffineWeylGroup, w: &AffineElement) -> bool {
    let (_, n, acc) = translation_power(g, w);
    i64::from(acc.length()) == n * i64::from(w.length())
}

fn library_key(g: &AffineWeylGroup, b: &NewtonPair) -> ClassKey {
    let coords: Vec<Q> = b
        .nu
        .coords()
        .iter()
        .map(|r| Q::new(r.numer().to_i64().unwrap(), r.denom().to_i64().unwrap()))
        .collect();
    let mut slopes = ambient(g, &coords);
    slopes.sort_by(|a, b| b.cmp(a));
    assert_eq!(b.kappa.len(), 1, "π₁ should be Z");
    (slopes, b.kappa[0])
}

/// Polygon dominance: equal κ and partial sums of `a` bounded by those of `b`.
fn dominance_oracle(a: &ClassKey, b: &ClassKey) -> bool {
    let (mut sa, mut sb) = (Q::from_integer(0), Q::from_integer(0));
    let mut ok = a.1 == b.1;
    for (x, y) in a.0.iter().zip(&b.0) {
        sa += x;
        sb += y;
        ok &= sa <= sb;
    }
    ok && sa == sb
}

/// Newton polygons of `B(G, μ)` for minuscule `μ`: concave, integral
/// breakpoints, slopes in `[0, 1]`; symmetric ones for GSp.
fn polygon_enumeration(g: &AffineWeylGroup, mu: &[i64]) -> BTreeSet<ClassKey> {
    fn rec(n: usize, k: i64, last: Option<Q>, acc: &mut Vec<Q>, out: &mut Vec<Vec<Q>>) {
        if n == 0 {
            if k == 0 {
                out.push(acc.clone());
            }
            return;
        }
        for a in 1..=n {
            for b in 0..=(a as i64).min(k) {
                let s = Q::new(b, a as i64);
                if last.is_some_and(|l| s >= l) {
                    continue;
                }
                let before = acc.len();
                acc.extend(std::iter::repeat_n(s, a));
                rec(n - a, k - b, Some(s), acc, out);
                acc.truncate(before);
            }
        }
    }
    let amb = ambient(g, mu);
    let n = amb.len();
    let k: i64 = amb.iter().sum();
    let mut polys = Vec::new();
    rec(n, k, None, &mut Vec::new(), &mut polys);
    let symmetric = matches!(g.datum().kind(), DatumKind::Symplectic(_));
    polys
        .into_iter()
        .filter(|p| !symmetric || (0..n).all(|i| p[i] + p[n - 1 - i] == Q::from_integer(1)))
        .map(|p| (p, kappa_oracle(g, mu)))
        .collect()
}

// ---------------------------------------------------------------------------
// Bruhat order from affine reflections

struct BruhatOracle<'g> {
    g: &'g AffineWeylGroup,
    /// `(α^∨, s_α)` for positive roots `α`.
    reflections: Vec<(Vec<i64>, WIdx)>,
}

impl<'g> BruhatOracle<'g> {
    fn new(g: &'g AffineWeylGroup) -> Self {
        let d = g.datum();
        let m = d.rank();
        let basis: Vec<Vec<i64>> = (0..m).map(|i| (0..m).map(|j| i64::from(i == j)).collect()).collect();
        let reflections = (0..d.num_positive_roots())
            .map(|r| {
                let (alpha, cor) = (&d.roots()[r], &d.coroots()[r]);
                assert_eq!(alpha.iter().zip(cor).map(|(a, b)| a * b).sum::<i64>(), 2);
                let reflect = |x: &Vec<i64>| -> Vec<i64> {
                    let p: i64 = x.iter().zip(alpha).map(|(a, b)| a * b).sum();
                    x.iter().zip(cor).map(|(a, c)| a - p * c).collect()
                };
                let u = d
                    .weyl()
                    .elements()
                    .find(|&u| basis.iter().all(|e| d.weyl().act(u, e) == reflect(e)))
                    .expect("reflection in W₀");
                (cor.clone(), u)
            })
            .collect();
        Self { g, reflections }
    }

    /// `{w t : ℓ(wt) = ℓ(w) − 1}` over affine reflections `t = t^{kα^∨} s_α`.
    fn lower_covers(&self, w: &AffineElement) -> Vec<AffineElement> {
        let bound = i64::from(w.length()) + 2;
        let mut out = BTreeSet::new();
        for (cor, u) in &self.reflections {
            for k in -bound..=bound {
                let lambda: Vec<i64> = cor.iter().map(|c| c * k).collect();
                let v = self.g.mul(w, &self.g.element(&lambda, *u));
                if v.length() + 1 == w.length() {
                    out.insert(v);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Down-sets of every element below `tops`.
    fn down_sets(&self, tops: &[AffineElement]) -> DownSets {
        let mut all = BTreeSet::new();
        let mut queue: VecDeque<AffineElement> = tops.iter().cloned().collect();
        let mut covers = HashMap::new();
        while let Some(w) = queue.pop_front() {
            if !all.insert(w.clone()) {
                continue;
            }
            let c = self.lower_covers(&w);
            queue.extend(c.iter().cloned());
            covers.insert(w, c);
        }
        let mut down = DownSets::new();
        // `all` is sorted by length first, so covers are finished before use.
        for w in &all {
            let mut set = BTreeSet::from([w.clone()]);
            for c in &covers[w] {
                set.extend(down[c].iter().cloned());
            }
            down.insert(w.clone(), set);
        }
        down
    }
}

/// `Adm(μ)` as the union of down-sets of `t^{xμ}`, with every down-set.
fn adm_oracle(o: &BruhatOracle, mu: &[i64]) -> (BTreeSet<AffineElement>, DownSets) {
    let g = o.g;
    let mut orbit = BTreeSet::from([g.translation(mu)]);
    let mut queue = VecDeque::from([g.translation(mu)]);
    while let Some(t) = queue.pop_front() {
        for i in 0..g.datum().semisimple_rank() {
            let s = g.finite(g.datum().weyl().simple_reflection(i));
            let c = g.mul_all([&s, &t, &s]);
            if orbit.insert(c.clone()) {
                queue.push_back(c);
            }
        }
    }
    let tops: Vec<AffineElement> = orbit.into_iter().collect();
    let down = o.down_sets(&tops);
    let adm = down.keys().cloned().collect();
    (adm, down)
}

// ---------------------------------------------------------------------------
// Parahoric subgroups and cosets

/// `σ`-stable types for trivial `σ`: subsets omitting a node of each component.
fn parahoric_oracle(g: &AffineWeylGroup) -> Vec<Vec<usize>> {
    let n = g.num_nodes();
    let comps: Vec<Vec<usize>> = (0..g.num_affine_nodes()).map(|k| g.component_nodes(k)).collect();
    (0u32..1 << n)
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect::<Vec<_>>())
        .filter(|s| comps.iter().all(|c| !c.iter().all(|x| s.contains(x))))
        .collect()
}

fn subgroup_oracle(g: &AffineWeylGroup, nodes: &[usize]) -> BTreeSet<AffineElement> {
    let mut seen = BTreeSet::from([g.identity()]);
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(w) = queue.pop_front() {
        for &s in nodes {
            let v = g.mul(g.simple_reflection(s), &w);
            if seen.insert(v.clone()) {
                queue.push_back(v);
            }
        }
    }
    seen
}

fn left_minimal_oracle(g: &AffineWeylGroup, nodes: &[usize], w: &AffineElement) -> bool {
    nodes.iter().all(|&s| g.mul(g.simple_reflection(s), w).length() > w.length())
}

fn left_min_oracle(g: &AffineWeylGroup, nodes: &[usize], w: &AffineElement) -> AffineElement {
    let mut cur = w.clone();
    while let Some(&s) = nodes.iter().find(|&&s| g.mul(g.simple_reflection(s), &cur).length() < cur.length()) {
        cur = g.mul(g.simple_reflection(s), &cur);
    }
    cur
}

// ---------------------------------------------------------------------------
// Criteria

type Outcome = Result<String, Vec<String>>;
type Criterion = (&'static str, fn() -> Outcome);

fn finish(detail: String, failures: Vec<String>) -> Outcome {
    if failures.is_empty() {
        Ok(detail)
    } else {
        Err(failures)
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for inst in matrix() {
        let g = &inst.group;
        let o = BruhatOracle::new(g);
        let (adm, _) = adm_oracle(&o, &inst.mu);
        let lib = admissible_set(g, &ConjClassCochar::new(g, &inst.mu).unwrap());
        if lib.elements().iter().cloned().collect::<BTreeSet<_>>() != adm {
            failures.push(format!("{}: library Adm differs from the reflection oracle", inst.label));
        }
        let types = parahoric_oracle(g);
        let lib_types: BTreeSet<Vec<usize>> = ParahoricType::all(g).iter().map(|j| j.nodes().to_vec()).collect();
        if lib_types != types.iter().cloned().collect() {
            failures.push(format!("{}: parahoric types differ", inst.label));
        }
        for nodes in types {
            let wk = subgroup_oracle(g, &nodes);
            let mut upper = BTreeSet::new();
            for w in &adm {
                for a in &wk {
                    let aw = g.mul(a, w);
                    for b in &wk {
                        let x = g.mul(&aw, b);
                        if left_minimal_oracle(g, &nodes, &x) {
                            upper.insert(x);
                        }
                    }
                }
            }
            let direct: BTreeSet<AffineElement> = adm.iter().filter(|w| left_minimal_oracle(g, &nodes, w)).cloned().collect();
            let j = ParahoricType::new(g, nodes.clone()).unwrap();
            let lib_index: BTreeSet<AffineElement> = ekor_index_set(g, &lib, &j).into_iter().collect();
            if upper != direct || lib_index != direct {
                failures.push(format!(
                    "{} J={nodes:?}: |Adm^K ∩ ᴷW̃| = {}, |Adm ∩ ᴷW̃| = {}, library {}",
                    inst.label,
                    upper.len(),
                    direct.len(),
                    lib_index.len()
                ));
            }
            checked += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 300.0 {
        failures.push(format!("took {secs:.1}s"));
    }
    finish(format!("{checked} (datum, μ, K) triples, {secs:.1}s"), failures)
}

/// Straight classes of `Adm(μ)` by oracle invariants.
fn straight_classes_oracle(g: &AffineWeylGroup, adm: &BTreeSet<AffineElement>) -> HashMap<ClassKey, Vec<AffineElement>> {
    let mut classes: HashMap<ClassKey, Vec<AffineElement>> = HashMap::new();
    for w in adm.iter().filter(|w| is_straight_oracle(g, w)) {
        classes.entry(class_of(g, w)).or_default().push(w.clone());
    }
    classes
}

fn criterion_2() -> Outcome {
    let mut failures = Vec::new();
    let mut pairs = 0;
    for inst in matrix() {
        let g = &inst.group;
        let o = BruhatOracle::new(g);
        let (adm, down) = adm_oracle(&o, &inst.mu);
        let classes = straight_classes_oracle(g, &adm);
        let lib = b_of_g_mu(g, &admissible_set(g, &ConjClassCochar::new(g, &inst.mu).unwrap()), false).unwrap();
        let lib_keys: Vec<ClassKey> = lib.iter().map(|c| library_key(g, &c.newton)).collect();
        if lib_keys.iter().cloned().collect::<HashSet<_>>() != classes.keys().cloned().collect() {
            failures.push(format!("{}: straight classes differ", inst.label));
            continue;
        }
        for (a, ka) in lib.iter().zip(&lib_keys) {
            for (b, kb) in lib.iter().zip(&lib_keys) {
                let by_bruhat = classes[ka].iter().any(|w1| classes[kb].iter().any(|w2| down[w2].contains(w1)));
                let by_dominance = dominance_oracle(ka, kb);
                let library = leq_straight(g, a, b, true).unwrap();
                if by_bruhat != by_dominance || library != by_dominance {
                    failures.push(format!(
                        "{}: {ka:?} vs {kb:?}: Bruhat {by_bruhat}, dominance {by_dominance}, library {library}",
                        inst.label
                    ));
                }
                pairs += 1;
            }
        }
    }
    finish(format!("{pairs} ordered pairs of straight classes"), failures)
}

fn criterion_3() -> Outcome {
    let mut failures = Vec::new();
    let mut counts = Vec::new();
    for inst in matrix() {
        let g = &inst.group;
        let o = BruhatOracle::new(g);
        let (adm, _) = adm_oracle(&o, &inst.mu);
        let image: BTreeSet<ClassKey> = straight_classes_oracle(g, &adm).into_keys().collect();
        let polygons = polygon_enumeration(g, &inst.mu);
        let lib = b_of_g_mu(g, &admissible_set(g, &ConjClassCochar::new(g, &inst.mu).unwrap()), true).unwrap();
        let lib_keys: BTreeSet<ClassKey> = lib.iter().map(|c| library_key(g, &c.newton)).collect();
        if image != polygons || lib_keys != polygons {
            failures.push(format!(
                "{}: straight image {}, library {}, polygons {}",
                inst.label,
                image.len(),
                lib_keys.len(),
                polygons.len()
            ));
        }
        counts.push((inst.label.clone(), polygons.len()));
    }
    for (label, expected) in [("GL(2) μ=[1, 0]", 2), ("GSp(4) Siegel", 3), ("GL(4) μ=[1, 1, 0, 0]", 5)] {
        let got = counts.iter().find(|(l, _)| l == label).map(|c| c.1);
        if got != Some(expected) {
            failures.push(format!("{label}: expected {expected} classes, polygon oracle gives {got:?}"));
        }
    }
    let summary: Vec<String> = counts.iter().map(|(l, c)| format!("{l}: {c}")).collect();
    finish(summary.join(", "), failures)
}

fn criterion_4() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for inst in matrix() {
        let g = &inst.group;
        let o = BruhatOracle::new(g);
        let (adm, _) = adm_oracle(&o, &inst.mu);
        let polygons = polygon_enumeration(g, &inst.mu);
        for nodes in parahoric_oracle(g) {
            let hit: BTreeSet<ClassKey> = adm
                .iter()
                .filter(|x| left_minimal_oracle(g, &nodes, x) && is_straight_oracle(g, x))
                .map(|x| class_of(g, x))
                .collect();
            let missed: Vec<&ClassKey> = polygons.difference(&hit).collect();
            if !missed.is_empty() {
                failures.push(format!("{} J={nodes:?}: classes without straight index {missed:?}", inst.label));
            }
            checked += 1;
        }
    }
    finish(format!("{checked} (datum, μ, K) triples"), failures)
}

fn criterion_5() -> Outcome {
    let mut failures = Vec::new();
    let mut indices = 0;
    for inst in matrix() {
        let g = &inst.group;
        let o = BruhatOracle::new(g);
        let (adm, down) = adm_oracle(&o, &inst.mu);
        for nodes in parahoric_oracle(g) {
            let j = ParahoricType::new(g, nodes.clone()).unwrap();
            let sigma_k = SigmaK::new(g, &j);
            let wk = subgroup_oracle(g, &nodes);
            for x in adm.iter().filter(|x| left_minimal_oracle(g, &nodes, x)) {
                let mut union = BTreeSet::new();
                for w in &down[x] {
                    union.extend(sigma_k.get(w).unwrap().iter().cloned());
                }
                let mut closure = BTreeSet::new();
                for v in &down[x] {
                    for y in &wk {
                        // σ is trivial: x' = y⁻¹ v y.
                        let c = g.mul_all([&g.inverse(y), v, y]);
                        if left_minimal_oracle(g, &nodes, &c) {
                            closure.insert(c);
                        }
                    }
                }
                if union != closure {
                    failures.push(format!("{} J={nodes:?} x={}: {} vs {}", inst.label, g.format(x), union.len(), closure.len()));
                }
                indices += 1;
            }
        }
    }
    finish(format!("{indices} EKOR indices"), failures)
}

fn criterion_6() -> Outcome {
    let mut failures = Vec::new();
    let g = identity_group(RootDatum::gl(2).unwrap());
    let mu = ConjClassCochar::new(&g, &[1, 0]).unwrap();
    // ρ = (1/2, −1/2). Basic: ν = (1/2, 1/2), one slope-1/2 block of size 2, so
    // def = 2 − 1 = 1 and ⟨μ + ν, ρ⟩ − def/2 = 1/2 − 1/2 = 0. Ordinary:
    // ν = (1, 0), def = 0, ⟨(2, 0), ρ⟩ = 1.
    let expected = [Q::from_integer(0), Q::from_integer(1)];
    let classes = b_of_g_mu(&g, &admissible_set(&g, &mu), true).unwrap();
    if classes.len() != 2 {
        failures.push(format!("expected 2 Newton classes, got {}", classes.len()));
    }
    for (c, want) in classes.iter().zip(expected) {
        let d = newton_dim_prediction(&g, &mu, &c.newton).unwrap();
        if !d.is_integer() || d.numer().to_i64() != Some(*want.numer()) {
            failures.push(format!("Newton dim of {:?} is {d}, expected {want}", c.newton));
        }
    }
    let atlas = build_atlas(&g, &[1, 0], &ParahoricType::hyperspecial(&g)).unwrap();
    let newton_dims: Vec<Option<String>> = atlas.newton.nodes.iter().map(|n| n.dim.clone()).collect();
    if newton_dims != [Some("0".to_string()), Some("1".to_string())] {
        failures.push(format!("atlas Newton dims {newton_dims:?}"));
    }
    let s1 = g.finite(g.datum().weyl().simple_reflection(0));
    let t10 = g.translation(&[1, 0]);
    let tau = g.mul(&t10, &s1);
    for (elt, want) in [(tau, 0), (t10, 1)] {
        let name = g.format(&elt);
        match atlas.ekor.nodes.iter().find(|n| n.elt == name) {
            Some(n) if n.dim == want && n.length == want => {}
            other => failures.push(format!("EKOR dim of {name}: {other:?}, expected {want}")),
        }
    }
    finish("Newton dims 0, 1; EKOR dims 0 (τ), 1 (t^(1,0))".into(), failures)
}

/// One length-zero element per `κ ∈ {−1, 0, 1}`.
fn omega_oracle(g: &AffineWeylGroup) -> Vec<AffineElement> {
    let m = g.datum().rank();
    let mut found: HashMap<i64, AffineElement> = HashMap::new();
    for code in 0..3usize.pow(m as u32) {
        let lambda: Vec<i64> = (0..m).map(|i| (code / 3usize.pow(i as u32) % 3) as i64 - 1).collect();
        for u in g.datum().weyl().elements() {
            let w = g.element(&lambda, u);
            let k = kappa_oracle(g, &lambda);
            if w.length() == 0 && (-1..=1).contains(&k) {
                found.entry(k).or_insert(w);
            }
        }
    }
    let mut out: Vec<AffineElement> = found.into_values().collect();
    out.sort();
    out
}

fn ball(g: &AffineWeylGroup, starts: &[AffineElement], radius: u32) -> BTreeSet<AffineElement> {
    let mut seen: BTreeSet<AffineElement> = starts.iter().cloned().collect();
    let mut queue: VecDeque<AffineElement> = starts.iter().cloned().collect();
    while let Some(w) = queue.pop_front() {
        for s in 0..g.num_nodes() {
            let v = g.mul(g.simple_reflection(s), &w);
            if v.length() <= radius && seen.insert(v.clone()) {
                queue.push_back(v);
            }
        }
    }
    seen
}

/// All results of the three rules over every choice, with the canonical form
/// recomputed from scratch.
fn sigma_k_outcomes(
    g: &AffineWeylGroup,
    nodes: &[usize],
    w: &AffineElement,
    memo: &mut OutcomeMemo,
) -> BTreeSet<Vec<AffineElement>> {
    if let Some(r) = memo.get(w) {
        return r.clone();
    }
    let conj = |s: usize, v: &AffineElement| {
        let r = g.simple_reflection(s);
        g.mul_all([r, v, g.simple_reflection(g.sigma_node(s))])
    };
    let mut orbit = BTreeSet::from([w.clone()]);
    let mut queue = VecDeque::from([w.clone()]);
    while let Some(v) = queue.pop_front() {
        for &s in nodes {
            let c = conj(s, &v);
            if c.length() == v.length() && orbit.insert(c.clone()) {
                queue.push_back(c);
            }
        }
    }
    let mut outcomes = BTreeSet::new();
    for v in &orbit {
        let x = left_min_oracle(g, nodes, v);
        let xinv = g.inverse(&x);
        // I(J, x, σ): shrink J until x σ(J') x⁻¹ = J'.
        let mut i: Vec<usize> = nodes.to_vec();
        loop {
            let keep: Vec<usize> = i
                .iter()
                .copied()
                .filter(|&s| {
                    let c = g.mul_all([&x, g.simple_reflection(g.sigma_node(s)), &xinv]);
                    i.iter().any(|&t| *g.simple_reflection(t) == c)
                })
                .collect();
            if keep == i {
                break;
            }
            i = keep;
        }
        let u = g.mul(v, &xinv);
        if subgroup_oracle(g, &i).contains(&u) {
            outcomes.insert(vec![x]);
        }
        for &s in nodes {
            let c = conj(s, v);
            if c.length() < v.length() {
                let sv = g.mul(g.simple_reflection(s), v);
                for a in sigma_k_outcomes(g, nodes, &c, memo) {
                    for b in sigma_k_outcomes(g, nodes, &sv, memo) {
                        let union: BTreeSet<AffineElement> = a.iter().chain(&b).cloned().collect();
                        outcomes.insert(union.into_iter().collect());
                    }
                }
            }
        }
    }
    for v in orbit {
        memo.insert(v, outcomes.clone());
    }
    outcomes
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();

    // Bruhat order against the transitive closure of reflection covers.
    let mut bruhat_pairs = 0;
    for n in [2, 3] {
        let g = identity_group(RootDatum::gl(n).unwrap());
        let o = BruhatOracle::new(&g);
        let elts: Vec<AffineElement> = ball(&g, &omega_oracle(&g), 6).into_iter().collect();
        let down = o.down_sets(&elts);
        for a in &elts {
            for b in &elts {
                if g.bruhat_leq(a, b) != down[b].contains(a) {
                    failures.push(format!("GL({n}): {} ≤ {}", g.format(a), g.format(b)));
                }
                bruhat_pairs += 1;
            }
        }
    }

    // Σ_K is independent of the order of steps.
    let mut sigma_elts = 0;
    for g in [identity_group(RootDatum::gl(2).unwrap()), identity_group(RootDatum::gsp(2).unwrap())] {
        let elts = ball(&g, &omega_oracle(&g), 5);
        for nodes in parahoric_oracle(&g) {
            let j = ParahoricType::new(&g, nodes.clone()).unwrap();
            let sigma_k = SigmaK::new(&g, &j);
            let mut memo = HashMap::new();
            for w in &elts {
                let outcomes = sigma_k_outcomes(&g, &nodes, w, &mut memo);
                let lib = sigma_k.get(w).unwrap();
                if outcomes.len() != 1 || outcomes.first() != Some(&*lib) {
                    failures.push(format!("{} J={nodes:?} w={}: {} outcomes", g.datum().name(), g.format(w), outcomes.len()));
                }
                sigma_elts += 1;
            }
        }
    }

    // ν is constant on σ-conjugacy classes.
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let gl3 = RootDatum::gl(3).unwrap();
    let flip = DiagramAutomorphism::flip(&gl3).unwrap();
    let groups = [AffineWeylGroup::new(gl3, flip).unwrap(), identity_group(RootDatum::gsp(2).unwrap())];
    for i in 0..10_000 {
        let g = &groups[i % 2];
        let mut random = || {
            let lambda: Vec<i64> = (0..g.datum().rank()).map(|_| rng.gen_range(-3..=3)).collect();
            let u = rng.gen_range(0..g.datum().weyl().order()) as WIdx;
            g.element(&lambda, u)
        };
        let (w, x) = (random(), random());
        let conj = g.sigma_conjugate(&x, &w);
        if newton_pair(g, &conj).unwrap() != newton_pair(g, &w).unwrap() {
            failures.push(format!("{}: ν({}) changes under conjugation by {}", g.datum().name(), g.format(&w), g.format(&x)));
        }
    }

    let secs = start.elapsed().as_secs_f64();
    if secs >= 120.0 {
        failures.push(format!("took {secs:.1}s"));
    }
    finish(
        format!("{bruhat_pairs} Bruhat pairs, {sigma_elts} Σ_K evaluations, 10000 conjugations, {secs:.1}s"),
        failures,
    )
}

fn criterion_8() -> Outcome {
    let mut failures = Vec::new();
    let all = JobSpec::new("GSp(4)", "identity", "1,1,0,0", "all").unwrap();
    for j in &all.parahorics {
        let nodes: Vec<String> = j.nodes().iter().map(usize::to_string).collect();
        let spec = JobSpec::new("GSp(4)", "identity", "1,1,0,0", &nodes.join(",")).unwrap();
        let a = cmd_atlas(&spec, Format::Json, false).unwrap();
        let b = cmd_atlas(&spec, Format::Json, false).unwrap();
        if a != b {
            failures.push(format!("K={:?}: two runs differ", j.nodes()));
        }
    }
    let run = || {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = strata_cli::run(
            ["strata", "atlas", "--datum", "GSp(4)", "--mu", "1,1,0,0", "--no-cache"],
            &mut out,
            &mut err,
        );
        (code, out)
    };
    let (c1, o1) = run();
    let (c2, o2) = run();
    if c1 != 0 || c2 != 0 || o1 != o2 || o1.is_empty() {
        failures.push("command-line runs differ".into());
    }
    finish(format!("{} bytes of atlas JSON, identical across runs", o1.len()), failures)
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("Adm^K ∩ ᴷW̃ = Adm ∩ ᴷW̃", criterion_1),
        ("straight-class order equals dominance order", criterion_2),
        ("straight image of Adm equals polygon enumeration", criterion_3),
        ("every class has a straight EKOR index", criterion_4),
        ("EKOR closure identity", criterion_5),
        ("GL(2) dimension sanity", criterion_6),
        ("kernel oracles", criterion_7),
        ("atlas determinism", criterion_8),
    ];
    let mut failed = 0;
    for (n, (title, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(vec![format!("panicked: {}", msg.unwrap_or_default())])
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {title} ({detail})", n + 1),
            Err(failures) => {
                failed += 1;
                println!("FAIL criterion {}: {title}", n + 1);
                for f in failures.iter().take(10) {
                    println!("    {f}");
                }
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
