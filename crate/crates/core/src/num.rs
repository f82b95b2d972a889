//! Exact scalar arithmetic.
//!
//! Everything equality-sensitive (dominance, straightness, Newton points) is
//! computed over `Ratio<T>` for an integer type `T`. The crate root fixes
//! `T = BigInt` for the public pipeline; `i64` is available for callers that
//! know their values stay small.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Integer types usable as the backing ring of [`RationalCochar`].
pub trait Scalar:
    Integer + Signed + Clone + Hash + fmt::Debug + fmt::Display + FromPrimitive + ToPrimitive + FromStr + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Integer + Signed + Clone + Hash + fmt::Debug + fmt::Display + FromPrimitive + ToPrimitive + FromStr + Send + Sync + 'static
{
}

pub type Rational<T> = Ratio<T>;

pub(crate) fn rat<T: Scalar>(n: i64) -> Ratio<T> {
    Ratio::from_integer(T::from_i64(n).expect("scalar type cannot hold i64 value"))
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational<T: Scalar>(r: &Ratio<T>) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational<T: Scalar>(s: &str) -> Option<Ratio<T>> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = p.trim().parse::<T>().ok()?;
            let q = q.trim().parse::<T>().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Ratio::new(p, q))
        }
        None => Some(Ratio::from_integer(s.parse::<T>().ok()?)),
    }
}

/// A rational vector in `X_* ⊗ Q`, written in lattice coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalCochar<T: Scalar> {
    coords: Vec<Ratio<T>>,
}

impl<T: Scalar> RationalCochar<T> {
    pub fn new(coords: Vec<Ratio<T>>) -> Self {
        Self { coords }
    }

    pub fn zero(rank: usize) -> Self {
        Self { coords: vec![Ratio::zero(); rank] }
    }

    pub fn from_integers(v: &[i64]) -> Self {
        Self { coords: v.iter().map(|&x| rat(x)).collect() }
    }

    /// `v / denominator`, reduced.
    pub fn from_scaled(v: &[i64], denominator: i64) -> Self {
        assert!(denominator != 0, "zero denominator");
        let d = T::from_i64(denominator).expect("denominator out of range");
        Self {
            coords: v
                .iter()
                .map(|&x| Ratio::new(T::from_i64(x).expect("coordinate out of range"), d.clone()))
                .collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Ratio<T>] {
        &self.coords
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// Integer coordinates, if every coordinate is integral and fits in `i64`.
    pub fn to_integers(&self) -> Option<Vec<i64>> {
        self.coords
            .iter()
            .map(|c| if c.is_integer() { c.numer().to_i64() } else { None })
            .collect()
    }

    /// Pairing with an integral covector.
    pub fn pair(&self, covector: &[i64]) -> Ratio<T> {
        debug_assert_eq!(covector.len(), self.coords.len());
        self.coords
            .iter()
            .zip(covector)
            .fold(Ratio::zero(), |acc, (c, &k)| acc + c.clone() * rat::<T>(k))
    }

    /// Applies an integral matrix (row-major, acting on column vectors).
    pub fn transform(&self, matrix: &[Vec<i64>]) -> Self {
        Self {
            coords: matrix.iter().map(|row| self.pair(row)).collect(),
        }
    }

    pub fn scale(&self, k: &Ratio<T>) -> Self {
        Self { coords: self.coords.iter().map(|c| c.clone() * k.clone()).collect() }
    }

    /// Converts to another backing integer type through the decimal string form.
    pub fn convert<U: Scalar>(&self) -> RationalCochar<U> {
        RationalCochar {
            coords: self
                .coords
                .iter()
                .map(|c| {
                    let n = c.numer().to_string().parse::<U>().ok().expect("numerator overflow");
                    let d = c.denom().to_string().parse::<U>().ok().expect("denominator overflow");
                    Ratio::new(n, d)
                })
                .collect(),
        }
    }

    /// String coordinates, `"p"` or `"p/q"`.
    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(format_rational).collect()
    }

    pub fn from_strings<S: AsRef<str>>(items: &[S]) -> Option<Self> {
        items
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Option<Vec<_>>>()
            .map(Self::new)
    }
}

impl<T: Scalar> Add for &RationalCochar<T> {
    type Output = RationalCochar<T>;
    fn add(self, rhs: Self) -> RationalCochar<T> {
        assert_eq!(self.rank(), rhs.rank());
        RationalCochar {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<T: Scalar> Sub for &RationalCochar<T> {
    type Output = RationalCochar<T>;
    fn sub(self, rhs: Self) -> RationalCochar<T> {
        assert_eq!(self.rank(), rhs.rank());
        RationalCochar {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<T: Scalar> Neg for &RationalCochar<T> {
    type Output = RationalCochar<T>;
    fn neg(self) -> RationalCochar<T> {
        RationalCochar { coords: self.coords.iter().map(|c| -c.clone()).collect() }
    }
}

impl<T: Scalar> fmt::Debug for RationalCochar<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(","))
    }
}

impl<T: Scalar> fmt::Display for RationalCochar<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl<T: Scalar> Serialize for RationalCochar<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(serializer)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for RationalCochar<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let items = Vec::<String>::deserialize(deserializer)?;
        Self::from_strings(&items).ok_or_else(|| serde::de::Error::custom("malformed rational coordinate"))
    }
}

/// Solves `A x = b` exactly over `Q`, where `A` is `rows × cols`.
///
/// Returns `None` when the system is inconsistent. Free variables are set to
/// zero, so for full column rank the solution is the unique one.
pub fn solve_rational<T: Scalar>(a: &[Vec<Ratio<T>>], b: &[Ratio<T>]) -> Option<Vec<Ratio<T>>> {
    let rows = a.len();
    assert_eq!(rows, b.len());
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Ratio<T>>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Ratio::from_integer(T::one()) / m[r][c].clone();
        for k in c..=cols {
            m[r][k] = m[r][k].clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in c..=cols {
                    let delta = f.clone() * m[r][k].clone();
                    m[i][k] = m[i][k].clone() - delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Ratio::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

pub fn integer_matrix_to_rational<T: Scalar>(a: &[Vec<i64>]) -> Vec<Vec<Ratio<T>>> {
    a.iter().map(|row| row.iter().map(|&x| rat(x)).collect()).collect()
}
