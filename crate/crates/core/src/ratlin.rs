//! Exact rational vectors and matrices.
//!
//! Scalars are [`BigRational`](num_rational::BigRational), which keeps every value in
//! lowest terms with a positive denominator. Rank and square solves use fraction-free
//! (Bareiss) elimination on integer-scaled rows.

use std::fmt;
use std::ops::{Index, Neg};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Parses `"p/q"` or `"p"` with an optional leading minus sign.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::Input(format!("malformed rational {text:?} (expected \"p/q\" or \"p\")"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let digits = |s: &str, signed: bool| {
        let body = if signed { s.strip_prefix('-').unwrap_or(s) } else { s };
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits(num, true) || den.is_some_and(|d| !digits(d, false)) {
        return Err(bad());
    }
    let numer = BigInt::from_str(num).map_err(|_| bad())?;
    let denom = match den {
        Some(d) => BigInt::from_str(d).map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(Error::Input(format!("rational {text:?} has zero denominator")));
    }
    Ok(Rational::new(numer, denom))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatVec(Vec<Rational>);

impl RatVec {
    pub fn new(entries: Vec<Rational>) -> Self {
        Self(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![Rational::zero(); dim])
    }

    pub fn unit(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[k] = Rational::one();
        v
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        Self(entries.iter().map(|&e| int(e)).collect())
    }

    /// Parses each entry with [`parse_rational`].
    pub fn parse<S: AsRef<str>>(entries: &[S]) -> Result<Self> {
        entries.iter().map(|s| parse_rational(s.as_ref())).collect::<Result<Vec<_>>>().map(Self)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &RatVec) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, factor: &Rational) -> RatVec {
        RatVec(self.0.iter().map(|e| e * factor).collect())
    }

    pub fn add(&self, other: &RatVec) -> RatVec {
        RatVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RatVec) -> RatVec {
        RatVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `max |xᵢ|`, zero for the empty vector.
    pub fn max_abs(&self) -> Rational {
        self.0.iter().map(Signed::abs).max().unwrap_or_else(Rational::zero)
    }

    pub fn concat(parts: &[&RatVec]) -> RatVec {
        RatVec(parts.iter().flat_map(|p| p.0.iter().cloned()).collect())
    }
}

impl Neg for &RatVec {
    type Output = RatVec;

    fn neg(self) -> RatVec {
        RatVec(self.0.iter().map(|e| -e).collect())
    }
}

impl Index<usize> for RatVec {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl From<Vec<Rational>> for RatVec {
    fn from(entries: Vec<Rational>) -> Self {
        Self(entries)
    }
}

impl fmt::Display for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for RatVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for e in &self.0 {
            seq.serialize_element(&e.to_string())?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for RatVec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct RatVecVisitor;

        impl<'de> Visitor<'de> for RatVecVisitor {
            type Value = RatVec;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a list of rationals written as \"p/q\" or \"p\" strings")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<RatVec, A::Error> {
                let mut out = Vec::new();
                while let Some(entry) = seq.next_element::<RatEntry>()? {
                    out.push(entry.0);
                }
                Ok(RatVec(out))
            }
        }

        deserializer.deserialize_seq(RatVecVisitor)
    }
}

/// One rational in JSON: a `"p/q"` string or a JSON integer. Floats are rejected.
struct RatEntry(Rational);

impl<'de> Deserialize<'de> for RatEntry {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct EntryVisitor;

        impl<'de> Visitor<'de> for EntryVisitor {
            type Value = RatEntry;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<RatEntry, E> {
                parse_rational(v).map(RatEntry).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<RatEntry, E> {
                Ok(RatEntry(int(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<RatEntry, E> {
                Ok(RatEntry(Rational::from_integer(BigInt::from(v))))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<RatEntry, E> {
                Err(E::custom(format!("floating-point value {v} not allowed; write rationals as strings")))
            }
        }

        deserializer.deserialize_any(EntryVisitor)
    }
}

/// Serde helper for a single [`Rational`] stored as a string.
pub mod rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        RatEntry::deserialize(d).map(|e| e.0)
    }
}

/// Dense rectangular matrix stored by rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct RatMat {
    rows: Vec<RatVec>,
}

impl RatMat {
    pub fn from_rows(rows: Vec<RatVec>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::Dimension("matrix needs at least one row".into()));
        };
        let cols = first.dim();
        if cols == 0 {
            return Err(Error::Dimension("matrix needs at least one column".into()));
        }
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.dim() != cols) {
            return Err(Error::Dimension(format!("row {i} has {} entries, expected {cols}", row.dim())));
        }
        Ok(Self { rows })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| RatVec::from_ints(r)).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self { rows: (0..n).map(|k| RatVec::unit(n, k)).collect() }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows[0].dim()
    }

    pub fn rows(&self) -> &[RatVec] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &RatVec {
        &self.rows[i]
    }

    pub fn column(&self, j: usize) -> RatVec {
        RatVec(self.rows.iter().map(|r| r[j].clone()).collect())
    }

    pub fn columns(&self) -> Vec<RatVec> {
        (0..self.ncols()).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> RatMat {
        RatMat { rows: self.columns() }
    }

    pub fn mul_vec(&self, x: &RatVec) -> RatVec {
        RatVec(self.rows.iter().map(|r| r.dot(x)).collect())
    }

    pub fn rank(&self) -> usize {
        rank(&self.rows)
    }

    pub fn solve_square(&self, b: &RatVec) -> Result<Option<RatVec>> {
        if self.nrows() != self.ncols() {
            return Err(Error::Dimension(format!(
                "solve needs a square matrix, got {}x{}",
                self.nrows(),
                self.ncols()
            )));
        }
        if b.dim() != self.nrows() {
            return Err(Error::Dimension(format!("right-hand side has dim {}, expected {}", b.dim(), self.nrows())));
        }
        Ok(solve_square_rows(&self.rows, b))
    }
}

/// Scales a rational row by the lcm of its denominators, giving an integer row.
fn integer_row<'a>(entries: impl Iterator<Item = &'a Rational> + Clone) -> Vec<BigInt> {
    let lcm = entries.clone().fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
    entries.map(|e| e.numer() * (&lcm / e.denom())).collect()
}

/// Fraction-free forward elimination in place. Returns the pivot columns.
///
/// Every entry after step k is a (k+1)-minor of the input, so the division by the
/// previous pivot is exact.
fn bareiss_echelon(a: &mut [Vec<BigInt>], ncols: usize) -> Vec<usize> {
    let nrows = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..nrows {
            for j in col + 1..a[i].len() {
                let v = (&a[r][col] * &a[i][j] - &a[i][col] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[r][col].clone();
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Exact rank of a list of equal-length vectors.
pub fn rank(rows: &[RatVec]) -> usize {
    let Some(first) = rows.first() else { return 0 };
    let ncols = first.dim();
    let mut a: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r.iter())).collect();
    bareiss_echelon(&mut a, ncols).len()
}

/// Solves `M x = b` for square `M` given by rows; `None` when `M` is singular.
pub(crate) fn solve_square_rows(rows: &[RatVec], b: &RatVec) -> Option<RatVec> {
    solve_square_multi(rows, std::slice::from_ref(b)).map(|mut xs| xs.remove(0))
}

/// Solves `rows · x = b` for every `b` in `rhs` with a single elimination.
pub(crate) fn solve_square_multi(rows: &[RatVec], rhs: &[RatVec]) -> Option<Vec<RatVec>> {
    let n = rows.len();
    let k = rhs.len();
    let mut a: Vec<Vec<BigInt>> =
        rows.iter().enumerate().map(|(i, r)| integer_row(r.iter().chain(rhs.iter().map(move |b| &b[i])))).collect();
    let pivots = bareiss_echelon(&mut a, n);
    if pivots.len() < n {
        return None;
    }
    let solutions = (0..k)
        .map(|c| {
            let mut x = vec![Rational::zero(); n];
            for i in (0..n).rev() {
                let mut acc = Rational::from_integer(a[i][n + c].clone());
                for j in i + 1..n {
                    acc -= Rational::from_integer(a[i][j].clone()) * &x[j];
                }
                x[i] = acc / Rational::from_integer(a[i][i].clone());
            }
            RatVec(x)
        })
        .collect();
    Some(solutions)
}
