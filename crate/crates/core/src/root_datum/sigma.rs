use super::weyl::{identity_matrix, mat_mul, WIdx};
use super::{dot, DatumError, RootDatum};
use crate::snf::AbelianQuotient;

const MAX_SIGMA_ORDER: usize = 24;

/// Frobenius acting on a root datum through a based-datum automorphism: a
/// permutation of the simple roots together with a compatible unimodular
/// lattice automorphism `S` of `X_*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramAutomorphism {
    perm: Vec<usize>,
    rank: usize,
    matrix: Vec<i64>,
    inverse: Vec<i64>,
    order: usize,
    /// `σ(u) = S u S⁻¹` on `W₀`.
    weyl_action: Vec<WIdx>,
    coinvariants: AbelianQuotient,
}

impl DiagramAutomorphism {
    pub fn identity(datum: &RootDatum) -> Self {
        let n = datum.semisimple_rank();
        let m = datum.rank();
        Self::new(datum, (0..n).collect(), (0..m).map(|i| (0..m).map(|j| i64::from(i == j)).collect()).collect())
            .expect("identity is always an automorphism")
    }

    /// `perm[i] = σ(i)` on simple-root indices; `matrix` is `S` row-major.
    pub fn new(datum: &RootDatum, perm: Vec<usize>, matrix: Vec<Vec<i64>>) -> Result<Self, DatumError> {
        let n = datum.semisimple_rank();
        let m = datum.rank();
        let bad = |msg: &str| DatumError::BadAutomorphism(msg.to_string());
        if perm.len() != n {
            return Err(bad("permutation length differs from the number of simple roots"));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(bad("not a permutation of the simple roots"));
            }
        }
        if matrix.len() != m || matrix.iter().any(|r| r.len() != m) {
            return Err(bad("lattice matrix has the wrong shape"));
        }
        let flat: Vec<i64> = matrix.iter().flatten().copied().collect();
        let apply = |x: &[i64]| -> Vec<i64> { (0..m).map(|i| dot(&flat[i * m..(i + 1) * m], x)).collect() };
        for i in 0..n {
            if apply(&datum.simple_coroots()[i]) != datum.simple_coroots()[perm[i]] {
                return Err(bad("S does not map simple coroots according to the permutation"));
            }
            // α_{σ(i)} ∘ S = α_i
            let pulled: Vec<i64> = (0..m)
                .map(|j| (0..m).map(|k| datum.simple_roots()[perm[i]][k] * flat[k * m + j]).sum())
                .collect();
            if pulled != datum.simple_roots()[i] {
                return Err(bad("S does not map simple roots according to the permutation"));
            }
        }

        let id = identity_matrix(m);
        let mut power = flat.clone();
        let mut order = 1;
        while power != id {
            power = mat_mul(&power, &flat, m);
            order += 1;
            if order > MAX_SIGMA_ORDER {
                return Err(bad("lattice automorphism has infinite or excessive order"));
            }
        }
        let mut inverse = id.clone();
        for _ in 1..order {
            inverse = mat_mul(&inverse, &flat, m);
        }

        let w = datum.weyl();
        let weyl_action = w
            .elements()
            .map(|u| {
                let conj = mat_mul(&mat_mul(&flat, w.matrix(u), m), &inverse, m);
                w.lookup(&conj).ok_or_else(|| bad("S does not normalise W₀"))
            })
            .collect::<Result<Vec<_>, _>>()?;

        let mut relations = datum.simple_coroots().to_vec();
        for j in 0..m {
            relations.push((0..m).map(|i| flat[i * m + j] - id[i * m + j]).collect());
        }
        let coinvariants = AbelianQuotient::new(m, &relations);

        Ok(Self { perm, rank: m, matrix: flat, inverse, order, weyl_action, coinvariants })
    }

    pub fn is_identity(&self) -> bool {
        self.order == 1
    }

    /// Order of `σ` as an automorphism of `X_*` (hence of `W̃`).
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn matrix(&self) -> Vec<Vec<i64>> {
        self.matrix.chunks(self.rank).map(|r| r.to_vec()).collect()
    }

    pub fn apply_lattice(&self, x: &[i64]) -> Vec<i64> {
        let m = x.len();
        (0..m).map(|i| dot(&self.matrix[i * m..(i + 1) * m], x)).collect()
    }

    pub fn apply_lattice_inverse(&self, x: &[i64]) -> Vec<i64> {
        let m = x.len();
        (0..m).map(|i| dot(&self.inverse[i * m..(i + 1) * m], x)).collect()
    }

    pub fn apply_weyl(&self, u: WIdx) -> WIdx {
        self.weyl_action[u as usize]
    }

    /// `π₁(G)_σ`: the quotient of `X_*` by coroots and the image of `σ − 1`.
    pub fn coinvariants(&self) -> &AbelianQuotient {
        &self.coinvariants
    }
}
