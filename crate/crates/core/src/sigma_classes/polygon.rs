//! Independent enumeration of `B(G, μ)` by Newton polygons, for `GL(n)` and
//! `GSp(2g)` with trivial `σ`.

use num_bigint::BigInt;
use num_rational::Ratio;

use super::NewtonPair;
use crate::admissible::ConjClassCochar;
use crate::affine::AffineWeylGroup;
use crate::error::{Error, Result};
use crate::num::{integer_matrix_to_rational, solve_rational};
use crate::root_datum::DatumKind;
use crate::Cochar;

type R = Ratio<i64>;

/// Concave polygons with integral breakpoints, lying on or below the Hodge
/// polygon of `μ` with the same endpoints (symmetric ones only for `GSp`).
pub fn polygon_oracle(group: &AffineWeylGroup, mu: &ConjClassCochar) -> Result<Vec<NewtonPair>> {
    let datum = group.datum();
    let symmetric = match datum.kind() {
        DatumKind::GeneralLinear(_) => false,
        DatumKind::Symplectic(_) => true,
        _ => return Err(Error::Unsupported(format!("polygon enumeration for {}", datum.name()))),
    };
    if !group.sigma().is_identity() {
        return Err(Error::Unsupported("polygon enumeration with nontrivial σ".into()));
    }
    let hodge = datum.to_ambient(&mu.mu_dominant);
    let mut prefix = vec![0i64];
    for x in &hodge {
        prefix.push(prefix.last().unwrap() + x);
    }
    let mut out = Vec::new();
    let mut slopes = Vec::new();
    extend(&hodge, &prefix, 0, None, &mut slopes, &mut out);

    let weights = integer_matrix_to_rational::<BigInt>(datum.display_weights());
    let mut pairs = Vec::new();
    for nu in out {
        let n = nu.len();
        if symmetric && (0..n).any(|i| nu[i] + nu[n - 1 - i] != nu[0] + nu[n - 1]) {
            continue;
        }
        let ambient: Vec<Ratio<BigInt>> =
            nu.iter().map(|r| Ratio::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))).collect();
        let lattice = solve_rational(&weights, &ambient)
            .ok_or_else(|| Error::Internal("polygon is not a cocharacter".into()))?;
        pairs.push(NewtonPair { nu: Cochar::new(lattice), kappa: mu.mu_natural.clone() });
    }
    pairs.sort();
    Ok(pairs)
}

/// Appends segments starting at `x` with slope strictly below `last`.
fn extend(hodge: &[i64], prefix: &[i64], x: usize, last: Option<R>, slopes: &mut Vec<R>, out: &mut Vec<Vec<R>>) {
    let n = hodge.len();
    if x == n {
        if prefix[n] == slopes.iter().sum::<R>().to_integer() {
            out.push(slopes.clone());
        }
        return;
    }
    let y: R = slopes.iter().sum();
    let lo = *hodge.last().unwrap();
    let hi = hodge[0];
    for len in 1..=n - x {
        for h in lo * len as i64..=hi * len as i64 {
            let s = R::new(h, len as i64);
            if last.is_some_and(|l| s >= l) {
                continue;
            }
            let below = (1..=len).all(|k| y + s * R::from(k as i64) <= R::from(prefix[x + k]));
            if !below {
                continue;
            }
            let before = slopes.len();
            slopes.extend(std::iter::repeat_n(s, len));
            extend(hodge, prefix, x + len, Some(s), slopes, out);
            slopes.truncate(before);
        }
    }
}
