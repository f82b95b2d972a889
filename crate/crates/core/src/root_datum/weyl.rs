//! The finite Weyl group `W₀` as an enumerated table of integer matrices on `X_*`.

use std::collections::{HashMap, VecDeque};

use super::DatumError;

/// Index of an element of `W₀` in its [`FiniteWeylGroup`] table. Index 0 is
/// the identity; indices follow breadth-first (length) order.
pub type WIdx = u32;

const MAX_ORDER: usize = 200_000;
const TABLE_LIMIT: usize = 1_500;

#[derive(Debug)]
pub struct FiniteWeylGroup {
    rank: usize,
    matrices: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, WIdx>,
    inverse: Vec<WIdx>,
    length: Vec<u32>,
    word: Vec<Vec<usize>>,
    simple: Vec<WIdx>,
    table: Option<Vec<WIdx>>,
}

pub(crate) fn identity_matrix(rank: usize) -> Vec<i64> {
    let mut m = vec![0; rank * rank];
    for i in 0..rank {
        m[i * rank + i] = 1;
    }
    m
}

pub(crate) fn mat_mul(a: &[i64], b: &[i64], rank: usize) -> Vec<i64> {
    let mut out = vec![0; rank * rank];
    for i in 0..rank {
        for k in 0..rank {
            let aik = a[i * rank + k];
            if aik == 0 {
                continue;
            }
            for j in 0..rank {
                out[i * rank + j] += aik * b[k * rank + j];
            }
        }
    }
    out
}

/// Reflection `x ↦ x − ⟨x, α⟩ α^∨` as a flattened row-major matrix.
pub(crate) fn reflection_matrix(root: &[i64], coroot: &[i64]) -> Vec<i64> {
    let rank = root.len();
    let mut m = identity_matrix(rank);
    for i in 0..rank {
        for j in 0..rank {
            m[i * rank + j] -= coroot[i] * root[j];
        }
    }
    m
}

impl FiniteWeylGroup {
    /// Enumerates the group generated by the given reflections.
    pub(crate) fn generate(rank: usize, generators: Vec<Vec<i64>>) -> Result<Self, DatumError> {
        let id = identity_matrix(rank);
        let mut matrices = vec![id.clone()];
        let mut index = HashMap::from([(id, 0 as WIdx)]);
        let mut length = vec![0u32];
        let mut word: Vec<Vec<usize>> = vec![Vec::new()];
        let mut queue = VecDeque::from([0usize]);
        while let Some(cur) = queue.pop_front() {
            for (g, gen) in generators.iter().enumerate() {
                // Left multiplication: the new word is `s_g · word(cur)`.
                let next = mat_mul(gen, &matrices[cur], rank);
                if index.contains_key(&next) {
                    continue;
                }
                if matrices.len() >= MAX_ORDER {
                    return Err(DatumError::InfiniteWeylGroup);
                }
                let idx = matrices.len() as WIdx;
                index.insert(next.clone(), idx);
                matrices.push(next);
                length.push(length[cur] + 1);
                let mut w = vec![g];
                w.extend_from_slice(&word[cur]);
                word.push(w);
                queue.push_back(idx as usize);
            }
        }
        let simple = generators.iter().map(|g| index[g]).collect();
        let mut group = Self {
            rank,
            matrices,
            index,
            inverse: Vec::new(),
            length,
            word,
            simple,
            table: None,
        };
        group.inverse = (0..group.order())
            .map(|u| {
                // word is s_{i1}⋯s_{ik}; its inverse is s_{ik}⋯s_{i1}.
                let mut rev = identity_matrix(rank);
                for &g in &group.word[u] {
                    rev = mat_mul(&group.matrices[group.simple[g] as usize], &rev, rank);
                }
                group.index[&rev]
            })
            .collect();
        if group.order() <= TABLE_LIMIT {
            let n = group.order();
            let mut table = vec![0; n * n];
            for a in 0..n {
                for b in 0..n {
                    let p = mat_mul(&group.matrices[a], &group.matrices[b], rank);
                    table[a * n + b] = group.index[&p];
                }
            }
            group.table = Some(table);
        }
        Ok(group)
    }

    pub fn order(&self) -> usize {
        self.matrices.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn identity(&self) -> WIdx {
        0
    }

    pub fn simple_reflection(&self, i: usize) -> WIdx {
        self.simple[i]
    }

    pub fn matrix(&self, u: WIdx) -> &[i64] {
        &self.matrices[u as usize]
    }

    pub fn lookup(&self, matrix: &[i64]) -> Option<WIdx> {
        self.index.get(matrix).copied()
    }

    pub fn inverse(&self, u: WIdx) -> WIdx {
        self.inverse[u as usize]
    }

    pub fn length(&self, u: WIdx) -> u32 {
        self.length[u as usize]
    }

    /// A reduced word `s_{i1}⋯s_{ik}` in simple-reflection indices.
    pub fn reduced_word(&self, u: WIdx) -> &[usize] {
        &self.word[u as usize]
    }

    pub fn mul(&self, a: WIdx, b: WIdx) -> WIdx {
        match &self.table {
            Some(t) => t[a as usize * self.order() + b as usize],
            None => {
                let p = mat_mul(self.matrix(a), self.matrix(b), self.rank);
                self.index[&p]
            }
        }
    }

    /// `u · x` for a cocharacter `x`.
    pub fn act(&self, u: WIdx, x: &[i64]) -> Vec<i64> {
        let m = self.matrix(u);
        let r = self.rank;
        (0..r).map(|i| (0..r).map(|j| m[i * r + j] * x[j]).sum()).collect()
    }

    /// `u · φ = φ ∘ u⁻¹` for a character `φ`.
    pub fn act_covector(&self, u: WIdx, phi: &[i64]) -> Vec<i64> {
        let m = self.matrix(self.inverse(u));
        let r = self.rank;
        (0..r).map(|j| (0..r).map(|i| phi[i] * m[i * r + j]).sum()).collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = WIdx> {
        0..self.order() as WIdx
    }
}
