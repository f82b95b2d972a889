use std::collections::{BTreeSet, HashSet};

use super::{AffineElement, AffineWeylGroup};

impl AffineWeylGroup {
    /// Bruhat order on `W̃`: equal `Ω`-components and `w ≤ w'` in `W_aff`.
    ///
    /// Walks a fixed reduced word `s_{i₁}⋯s_{iℓ}·ω` of `w'`. For a left
    /// descent `s` of `w'`, `w ≤ w'` iff `sw ≤ sw'` when `sw < w`, and iff
    /// `w ≤ sw'` otherwise; after the word is exhausted the remainder must
    /// equal `ω`.
    pub fn bruhat_leq(&self, w: &AffineElement, w2: &AffineElement) -> bool {
        if w.omega != w2.omega || w.length > w2.length {
            return false;
        }
        if w.length == w2.length {
            return w == w2;
        }
        let (word, omega) = self.reduced_word(w2);
        self.bruhat_leq_word(w, &word, &omega)
    }

    /// [`bruhat_leq`](Self::bruhat_leq) against a precomputed reduced word of `w'`.
    pub fn bruhat_leq_word(&self, w: &AffineElement, word: &[usize], omega: &AffineElement) -> bool {
        if w.omega != omega.omega {
            return false;
        }
        let mut cur = w.clone();
        for (k, &s) in word.iter().enumerate() {
            if cur.length == 0 {
                break;
            }
            if cur.length as usize > word.len() - k {
                return false;
            }
            let sc = self.left_simple(s, &cur);
            if sc.length < cur.length {
                cur = sc;
            }
        }
        cur == *omega
    }

    /// Elements of length `ℓ(w) − 1` obtained by deleting one letter of the
    /// reduced word; these are exactly the Bruhat coatoms of `w`.
    pub fn bruhat_coatoms(&self, w: &AffineElement) -> Vec<AffineElement> {
        let (word, omega) = self.reduced_word(w);
        let l = word.len();
        if l == 0 {
            return Vec::new();
        }
        // prefix[j] = s_{i₁}⋯s_{ij}; suffix[j] = s_{i_{j+1}}⋯s_{iℓ}·ω.
        let mut prefix = Vec::with_capacity(l + 1);
        prefix.push(self.identity());
        for &s in &word {
            let next = self.right_simple(prefix.last().unwrap(), s);
            prefix.push(next);
        }
        let mut suffix = vec![omega; l + 1];
        for j in (0..l).rev() {
            suffix[j] = self.left_simple(word[j], &suffix[j + 1]);
        }
        let mut out: Vec<AffineElement> = (0..l)
            .map(|j| self.mul(&prefix[j], &suffix[j + 1]))
            .filter(|v| v.length as usize == l - 1)
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// `{v : v ≤ w}`, sorted.
    pub fn bruhat_ideal(&self, w: &AffineElement) -> Vec<AffineElement> {
        let mut all: BTreeSet<AffineElement> = BTreeSet::new();
        let mut level: HashSet<AffineElement> = HashSet::from([w.clone()]);
        while !level.is_empty() {
            let mut next = HashSet::new();
            for v in &level {
                next.extend(self.bruhat_coatoms(v));
            }
            all.extend(level);
            level = next;
        }
        all.into_iter().collect()
    }
}
