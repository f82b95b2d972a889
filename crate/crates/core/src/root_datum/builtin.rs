//! Built-in root data: `GL(n)`, `GSp(2g)`, `SL(n)`.

use num_rational::Ratio;

use super::{DatumError, DatumKind, DiagramAutomorphism, RootDatum};
use crate::num::solve_rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinLabel {
    GeneralLinear(usize),
    /// Holds `2g`.
    Symplectic(usize),
    SpecialLinear(usize),
}

/// Parses `GL(n)`, `GSp(2g)`, `SL(n)` (case-insensitive, parentheses optional).
pub fn parse_label(label: &str) -> Result<BuiltinLabel, DatumError> {
    let bad = || DatumError::BadLabel(label.to_string());
    let s: String = label.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
    let (family, rest) = if let Some(r) = s.strip_prefix("gsp") {
        ("gsp", r)
    } else if let Some(r) = s.strip_prefix("gl") {
        ("gl", r)
    } else if let Some(r) = s.strip_prefix("sl") {
        ("sl", r)
    } else {
        return Err(bad());
    };
    let digits = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
    let n: usize = digits.parse().map_err(|_| bad())?;
    match family {
        "gl" if n >= 1 => Ok(BuiltinLabel::GeneralLinear(n)),
        "sl" if n >= 2 => Ok(BuiltinLabel::SpecialLinear(n)),
        "gsp" if n >= 2 && n.is_multiple_of(2) => Ok(BuiltinLabel::Symplectic(n)),
        _ => Err(bad()),
    }
}

impl RootDatum {
    pub fn build(label: BuiltinLabel) -> Result<Self, DatumError> {
        match label {
            BuiltinLabel::GeneralLinear(n) => Self::gl(n),
            BuiltinLabel::Symplectic(n) => Self::gsp(n / 2),
            BuiltinLabel::SpecialLinear(n) => Self::sl(n),
        }
    }

    /// `GL(n)`: `X_* = Z^n`, simple roots `e_i − e_{i+1}`.
    pub fn gl(n: usize) -> Result<Self, DatumError> {
        let unit = |i: usize| -> Vec<i64> { (0..n).map(|j| i64::from(i == j)).collect() };
        let simple: Vec<Vec<i64>> = (0..n.saturating_sub(1))
            .map(|i| (0..n).map(|j| i64::from(j == i) - i64::from(j == i + 1)).collect())
            .collect();
        Self::new(
            format!("GL({n})"),
            DatumKind::GeneralLinear(n),
            n,
            simple.clone(),
            simple,
            Some((0..n).map(unit).collect()),
            true,
        )
    }

    /// `GSp(2g)` with torus `diag(t_1,…,t_g, c/t_g,…,c/t_1)`.
    ///
    /// Lattice coordinates are `(x_1,…,x_g, c)`; the ambient (`GL(2g)`)
    /// coordinates are `(x_1,…,x_g, c−x_g,…,c−x_1)`, matching a symplectic
    /// basis whose form has the unit anti-diagonal in the off-diagonal blocks.
    /// Simple roots are `e_i − e_{i+1}` and `2e_g − c` (type `C_g`).
    pub fn gsp(g: usize) -> Result<Self, DatumError> {
        let m = g + 1;
        let e = |i: usize| -> Vec<i64> { (0..m).map(|j| i64::from(i == j)).collect() };
        let mut roots = Vec::new();
        let mut coroots = Vec::new();
        for i in 0..g.saturating_sub(1) {
            let v: Vec<i64> = (0..m).map(|j| i64::from(j == i) - i64::from(j == i + 1)).collect();
            roots.push(v.clone());
            coroots.push(v);
        }
        let mut long = vec![0; m];
        long[g - 1] = 2;
        long[g] = -1;
        roots.push(long);
        coroots.push(e(g - 1));
        let mut weights: Vec<Vec<i64>> = (0..g).map(e).collect();
        for i in (0..g).rev() {
            let mut w = e(g);
            w[i] = -1;
            weights.push(w);
        }
        Self::new(format!("GSp({})", 2 * g), DatumKind::Symplectic(g), m, roots, coroots, Some(weights), true)
    }

    /// `SL(n)`, simply connected: `X_*` is the coroot lattice, written in the
    /// basis of simple coroots.
    pub fn sl(n: usize) -> Result<Self, DatumError> {
        let r = n - 1;
        let coroots: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
        let roots: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| match i.abs_diff(j) {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        // ε_i(α_j^∨) = δ_{ij} − δ_{i,j+1}
        let weights: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..r).map(|j| i64::from(i == j) - i64::from(i == j + 1)).collect())
            .collect();
        Self::new(format!("SL({n})"), DatumKind::SpecialLinear(n), r, roots, coroots, Some(weights), true)
    }
}

impl DiagramAutomorphism {
    /// The nontrivial involution of a type `A` diagram: the Frobenius of the
    /// quasi-split unitary group. On `GL(n)` it acts by `x ↦ −(x_n,…,x_1)`.
    pub fn flip(datum: &RootDatum) -> Result<Self, DatumError> {
        let n = datum.semisimple_rank();
        let m = datum.rank();
        let perm: Vec<usize> = (0..n).map(|i| n - 1 - i).collect();
        let matrix = match datum.kind() {
            DatumKind::GeneralLinear(_) => (0..m)
                .map(|i| (0..m).map(|j| if i + j == m - 1 { -1 } else { 0 }).collect())
                .collect(),
            _ => return Self::from_permutation(datum, perm),
        };
        Self::new(datum, perm, matrix)
    }

    /// Extends a permutation of simple indices to the lattice when the simple
    /// coroots form a `Z`-basis of `X_*`.
    pub fn from_permutation(datum: &RootDatum, perm: Vec<usize>) -> Result<Self, DatumError> {
        let m = datum.rank();
        if perm.iter().enumerate().all(|(i, &p)| i == p) {
            return Self::new(
                datum,
                perm,
                (0..m).map(|i| (0..m).map(|j| i64::from(i == j)).collect()).collect(),
            );
        }
        let n = datum.semisimple_rank();
        if n != m || perm.len() != n {
            return Err(DatumError::BadAutomorphism(
                "cannot extend the permutation to X_*; supply an explicit lattice matrix".into(),
            ));
        }
        // Columns of C are the simple coroots; S = C P C⁻¹.
        let c: Vec<Vec<Ratio<i64>>> = (0..m)
            .map(|i| (0..n).map(|j| Ratio::from_integer(datum.simple_coroots()[j][i])).collect())
            .collect();
        let mut cinv_cols = Vec::with_capacity(m);
        for k in 0..m {
            let e: Vec<Ratio<i64>> = (0..m).map(|i| Ratio::from_integer(i64::from(i == k))).collect();
            let col = solve_rational(&c, &e).ok_or_else(|| DatumError::BadAutomorphism("coroots are not a basis".into()))?;
            if col.iter().any(|x| !x.is_integer()) {
                return Err(DatumError::BadAutomorphism("coroots do not form a Z-basis of X_*".into()));
            }
            cinv_cols.push(col.iter().map(|x| *x.numer()).collect::<Vec<i64>>());
        }
        // S e_k = Σ_j (C⁻¹)_{jk} α^∨_{σ(j)}
        let matrix: Vec<Vec<i64>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|k| (0..n).map(|j| cinv_cols[k][j] * datum.simple_coroots()[perm[j]][i]).sum())
                    .collect()
            })
            .collect();
        Self::new(datum, perm, matrix)
    }
}
