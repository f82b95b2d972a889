//! Smith normal form and finitely generated abelian quotients `Z^m / span(R)`.

use serde::{Deserialize, Serialize};

/// Diagonal form `U · R · V = D` of an integer matrix; only `U` is tracked.
#[derive(Debug, Clone)]
pub struct SmithForm {
    /// Nonzero diagonal entries, each dividing the next.
    pub diagonal: Vec<i64>,
    /// Unimodular row transform, `rows × rows`.
    pub left: Vec<Vec<i64>>,
}

/// Computes the Smith normal form of a `rows × cols` matrix.
pub fn smith_normal_form(matrix: &[Vec<i64>], rows: usize) -> SmithForm {
    let cols = matrix.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<i64>> = matrix.to_vec();
    if a.is_empty() {
        a = vec![Vec::new(); rows];
    }
    let mut u: Vec<Vec<i64>> = (0..rows)
        .map(|i| (0..rows).map(|j| i64::from(i == j)).collect())
        .collect();

    let mut diagonal = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t] != 0 {
                    let q = a[i][t].div_euclid(a[t][t]);
                    row_axpy(&mut a, i, t, -q);
                    row_axpy(&mut u, i, t, -q);
                    if a[i][t] != 0 {
                        a.swap(t, i);
                        u.swap(t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if a[t][j] != 0 {
                    let q = a[t][j].div_euclid(a[t][t]);
                    for row in a.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    if a[t][j] != 0 {
                        for row in a.iter_mut() {
                            row.swap(t, j);
                        }
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // Divisibility: fold any offending row into the pivot row.
            let pivot = a[t][t];
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % pivot != 0));
            match bad {
                Some(i) => {
                    row_axpy(&mut a, t, i, 1);
                    row_axpy(&mut u, t, i, 1);
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            a[t].iter_mut().for_each(|x| *x = -*x);
            u[t].iter_mut().for_each(|x| *x = -*x);
        }
        diagonal.push(a[t][t]);
        t += 1;
    }
    SmithForm { diagonal, left: u }
}

/// Row-style Hermite normal form: echelon with positive pivots and entries
/// above each pivot reduced into `[0, pivot)`. Makes the free coordinates
/// of a quotient canonical.
fn hermite_rows(mut rows: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut p = 0;
    for c in 0..cols {
        if p == rows.len() {
            break;
        }
        loop {
            let nonzero: Vec<usize> = (p..rows.len()).filter(|&i| rows[i][c] != 0).collect();
            let Some(&best) = nonzero.iter().min_by_key(|&&i| rows[i][c].abs()) else { break };
            rows.swap(p, best);
            let mut done = true;
            for i in p + 1..rows.len() {
                if rows[i][c] != 0 {
                    let q = rows[i][c].div_euclid(rows[p][c]);
                    row_axpy(&mut rows, i, p, -q);
                    done &= rows[i][c] == 0;
                }
            }
            if done {
                break;
            }
        }
        if rows.get(p).is_none_or(|r| r[c] == 0) {
            continue;
        }
        if rows[p][c] < 0 {
            rows[p].iter_mut().for_each(|x| *x = -*x);
        }
        for i in 0..p {
            let q = rows[i][c].div_euclid(rows[p][c]);
            row_axpy(&mut rows, i, p, -q);
        }
        p += 1;
    }
    rows
}

fn row_axpy(m: &mut [Vec<i64>], target: usize, source: usize, k: i64) {
    if k == 0 {
        return;
    }
    let src = m[source].clone();
    for (x, s) in m[target].iter_mut().zip(src) {
        *x += k * s;
    }
}

/// The quotient `Z^m / span(relations)` in normal form `⊕ Z/d_i ⊕ Z^r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianQuotient {
    /// Torsion orders `d_i > 1`.
    pub torsion: Vec<i64>,
    pub free_rank: usize,
    /// Rows of the left transform that carry the surviving coordinates.
    projection: Vec<Vec<i64>>,
}

impl AbelianQuotient {
    /// `relations` are vectors in `Z^ambient`.
    pub fn new(ambient: usize, relations: &[Vec<i64>]) -> Self {
        // Columns of the relation matrix are the relation vectors.
        let matrix: Vec<Vec<i64>> = (0..ambient)
            .map(|i| relations.iter().map(|r| r[i]).collect())
            .collect();
        let snf = smith_normal_form(&matrix, ambient);
        let mut torsion = Vec::new();
        let mut projection = Vec::new();
        for (i, &d) in snf.diagonal.iter().enumerate() {
            if d > 1 {
                torsion.push(d);
                projection.push(snf.left[i].clone());
            }
        }
        let free_rank = ambient - snf.diagonal.len();
        projection.extend(hermite_rows(snf.left[snf.diagonal.len()..].to_vec()));
        Self { torsion, free_rank, projection }
    }

    /// Normal-form coordinates of the class of `x`: torsion parts reduced to
    /// `[0, d)`, then free parts.
    pub fn project(&self, x: &[i64]) -> Vec<i64> {
        self.projection
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let v: i64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
                match self.torsion.get(i) {
                    Some(&d) => v.rem_euclid(d),
                    None => v,
                }
            })
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    /// Number of normal-form coordinates.
    pub fn width(&self) -> usize {
        self.projection.len()
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter()
            .zip(b)
            .enumerate()
            .map(|(i, (x, y))| match self.torsion.get(i) {
                Some(&d) => (x + y).rem_euclid(d),
                None => x + y,
            })
            .collect()
    }

    /// Human-readable isomorphism type, e.g. `Z`, `Z/2`, `Z/2 x Z^2`, `0`.
    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" x ")
        }
    }
}
