//! Exact scalars and dense exact linear algebra.
//!
//! `Rational` is an always-reduced arbitrary-precision fraction with a
//! positive denominator; `Matrix` is a dense row-major matrix of rationals
//! with a fraction-free (Bareiss) determinant and exact rank. Binomial
//! coefficients come in two flavours: [`binom`] with the combinatorial
//! convention (zero outside `0 <= bottom <= top`) and [`binom_poly`], the
//! polynomial `x(x-1)...(x-k+1)/k!` that stays meaningful for negative tops.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::Sign;
use num::rational::BigRational;
use num::{BigInt, Integer, One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Arbitrary-precision signed integer used throughout the crate.
pub type Int = BigInt;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix shape mismatch: {0} entries for {1}x{2}")]
    Shape(usize, usize, usize),
}

/// An exact rational number, always reduced, denominator always positive.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numerator: Int, denominator: Int) -> Result<Self, ArithError> {
        if denominator.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(numerator, denominator)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_int(n: impl Into<Int>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn numerator(&self) -> &Int {
        self.0.numer()
    }

    pub fn denominator(&self) -> &Int {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Sign as -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self.0.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        Ok(Rational(self.0.recip()))
    }

    /// Integer power; negative exponents invert (error on zero base).
    pub fn pow(&self, exp: i32) -> Result<Self, ArithError> {
        if exp < 0 && self.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        Ok(Rational(self.0.pow(exp)))
    }

    pub fn to_f64(&self) -> f64 {
        use num::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Rational {
    type Err = ArithError;

    /// Parses `"p/q"` or `"p"`, with an optional sign on `p`. Rejects `q = 0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ArithError::Parse(s.to_string());
        match s.split_once('/') {
            Some((p, q)) => {
                let p = Int::from_str(p.trim()).map_err(|_| bad())?;
                let q = Int::from_str(q.trim()).map_err(|_| bad())?;
                if q.sign() != Sign::Plus {
                    // text form keeps the sign on the numerator
                    return Err(bad());
                }
                Rational::new(p, q)
            }
            None => Ok(Rational::from_int(Int::from_str(s).map_err(|_| bad())?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<Int> for Rational {
    fn from(n: Int) -> Self {
        Rational::from_int(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, ArithError> {
        if entries.len() != rows * cols {
            return Err(ArithError::Shape(entries.len(), rows, cols));
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, ArithError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(ArithError::Shape(0, r, c));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Rational::one();
        }
        Matrix { rows: n, cols: n, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    /// Scales each row to integers (by the lcm of its denominators) and
    /// returns the integer matrix together with the product of the scales.
    fn to_int_rows(&self) -> (Vec<Vec<Int>>, Int) {
        let mut scale = Int::one();
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut l = Int::one();
            for j in 0..self.cols {
                l = l.lcm(self.at(i, j).denominator());
            }
            out.push(
                (0..self.cols)
                    .map(|j| {
                        let e = self.at(i, j);
                        e.numerator() * (&l / e.denominator())
                    })
                    .collect(),
            );
            scale *= l;
        }
        (out, scale)
    }

    /// Exact determinant by fraction-free elimination.
    pub fn det(&self) -> Result<Rational, ArithError> {
        if self.rows != self.cols {
            return Err(ArithError::NotSquare { rows: self.rows, cols: self.cols });
        }
        if self.rows == 0 {
            return Ok(Rational::one());
        }
        let (mut m, scale) = self.to_int_rows();
        let d = int_det_bareiss(&mut m);
        Ok(Rational::new(d, scale).expect("row scales are nonzero"))
    }

    /// Exact row rank.
    pub fn rank(&self) -> usize {
        let (mut m, _) = self.to_int_rows();
        int_rank(&mut m)
    }
}

/// Bareiss fraction-free determinant of an integer matrix (consumed).
pub(crate) fn int_det_bareiss(m: &mut [Vec<Int>]) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut sign = 1i32;
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev; // exact by Sylvester's identity
            }
            m[i][k] = Int::zero();
        }
        prev = m[k][k].clone();
    }
    let d = std::mem::take(&mut m[n - 1][n - 1]);
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Exact rank of an integer matrix by fraction-free elimination (consumed).
pub(crate) fn int_rank(m: &mut [Vec<Int>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = Int::one();
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let t = &m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j];
                m[i][j] = t / &prev;
            }
            m[i][col] = Int::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Binomial coefficient under the combinatorial convention: zero whenever
/// `bottom < 0` or `top < bottom` (including negative tops).
pub fn binom(top: i64, bottom: i64) -> Int {
    if bottom < 0 || top < bottom {
        return Int::zero();
    }
    let bottom = bottom.min(top - bottom);
    let mut acc = Int::one();
    for t in 0..bottom {
        acc = acc * Int::from(top - t) / Int::from(t + 1);
    }
    acc
}

/// Polynomial binomial `C(top, bottom) = top(top-1)...(top-bottom+1)/bottom!`
/// for `bottom >= 0` (zero otherwise). Agrees with [`binom`] for `top >= 0`
/// but stays nonzero for negative tops, e.g. `C(-1, 0) = 1`, `C(-1, 1) = -1`.
pub fn binom_poly(top: i64, bottom: i64) -> Int {
    if bottom < 0 {
        return Int::zero();
    }
    if top >= 0 {
        return binom(top, bottom);
    }
    // C(x, k) = (-1)^k C(k - x - 1, k)
    let flipped = binom(bottom - top - 1, bottom);
    if bottom % 2 == 0 {
        flipped
    } else {
        -flipped
    }
}

/// serde adapter for [`Int`] fields: arbitrary-precision JSON numbers.
pub mod serde_int {
    use super::Int;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Int, s: S) -> Result<S::Ok, S::Error> {
        let n: serde_json::Number = x
            .to_string()
            .parse()
            .map_err(|_| serde::ser::Error::custom("bigint to json number"))?;
        serde::Serialize::serialize(&n, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Int, D::Error> {
        let n = serde_json::Number::deserialize(d)?;
        n.to_string().parse().map_err(serde::de::Error::custom)
    }
}

/// `n!` as a big integer.
pub fn factorial(n: u32) -> Int {
    let mut acc = Int::one();
    for t in 2..=n as u64 {
        acc *= Int::from(t);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["3/4", "-3/4", "0", "7", "-12"] {
            assert_eq!(rat(s).to_string(), s);
        }
        assert_eq!(rat("6/4").to_string(), "3/2");
        assert_eq!(rat("-6/4").to_string(), "-3/2");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("1/-2".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn reduced_with_positive_denominator() {
        let r = Rational::new(Int::from(4), Int::from(-6)).unwrap();
        assert_eq!(r.numerator(), &Int::from(-2));
        assert_eq!(r.denominator(), &Int::from(3));
    }

    #[test]
    fn det_identity_is_one() {
        assert_eq!(Matrix::identity(3).det().unwrap(), Rational::one());
    }

    #[test]
    fn det_vandermonde_nodes_1_2_3() {
        // rows (1, x, x^2) on nodes 1, 2, 3; cofactor expansion by hand gives 2
        let m = Matrix::from_rows(
            (1..=3)
                .map(|x: i64| vec![Rational::one(), x.into(), (x * x).into()])
                .collect(),
        )
        .unwrap();
        assert_eq!(m.det().unwrap(), Rational::from(2));
    }

    #[test]
    fn det_equal_rows_is_zero() {
        let row: Vec<Rational> = vec![rat("1/2"), rat("3"), rat("-5/7")];
        let m = Matrix::from_rows(vec![row.clone(), vec![rat("1"), rat("0"), rat("2")], row])
            .unwrap();
        assert_eq!(m.det().unwrap(), Rational::zero());
    }

    #[test]
    fn det_rejects_non_square() {
        let m = Matrix::new(2, 3, vec![Rational::zero(); 6]).unwrap();
        assert!(matches!(m.det(), Err(ArithError::NotSquare { .. })));
    }

    #[test]
    fn det_upper_triangular_is_diagonal_product() {
        let m = Matrix::from_rows(vec![
            vec![rat("3/2"), rat("5"), rat("7")],
            vec![rat("0"), rat("-2"), rat("1/3")],
            vec![rat("0"), rat("0"), rat("4/5")],
        ])
        .unwrap();
        assert_eq!(m.det().unwrap(), rat("3/2") * rat("-2") * rat("4/5"));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(4).rank(), 4);
        assert_eq!(Matrix::new(3, 3, vec![Rational::zero(); 9]).unwrap().rank(), 0);
        let m = Matrix::from_rows(vec![
            vec![rat("1"), rat("2"), rat("3")],
            vec![rat("2"), rat("4"), rat("6")],
        ])
        .unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn binom_examples() {
        assert_eq!(binom(5, 2), Int::from(10));
        assert_eq!(binom(3, 5), Int::zero());
        assert_eq!(binom(-2, 0), Int::zero());
        assert_eq!(binom(7, 0), Int::one());
        assert_eq!(binom(4, -1), Int::zero());
    }

    #[test]
    fn binom_poly_examples() {
        assert_eq!(binom_poly(-1, 0), Int::one());
        assert_eq!(binom_poly(-1, 1), Int::from(-1));
        assert_eq!(binom_poly(-2, 2), Int::from(3));
        assert_eq!(binom_poly(5, 2), Int::from(10));
        assert_eq!(binom_poly(1, 2), Int::zero());
        assert_eq!(binom_poly(3, -1), Int::zero());
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=9)
            .prop_map(|(p, q)| Rational::new(Int::from(p), Int::from(q)).unwrap())
    }

    proptest! {
        #[test]
        fn field_laws(a in small_rat(), b in small_rat(), c in small_rat()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!((&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn pascal_rule(top in 1i64..=40, bottom in 1i64..=40) {
            prop_assert_eq!(
                binom(top, bottom),
                binom(top - 1, bottom - 1) + binom(top - 1, bottom)
            );
        }

        #[test]
        fn det_is_multiplicative(seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = 3;
            let mut mk = |_| {
                Matrix::from_rows(
                    (0..n)
                        .map(|_| {
                            (0..n)
                                .map(|_| {
                                    Rational::new(
                                        Int::from(rng.gen_range(-6i64..=6)),
                                        Int::from(rng.gen_range(1i64..=4)),
                                    )
                                    .unwrap()
                                })
                                .collect()
                        })
                        .collect(),
                )
                .unwrap()
            };
            let a = mk(());
            let b = mk(());
            let mut prod = vec![vec![Rational::zero(); n]; n];
            for i in 0..n {
                for j in 0..n {
                    let mut acc = Rational::zero();
                    for k in 0..n {
                        acc = acc + a.at(i, k) * b.at(k, j);
                    }
                    prod[i][j] = acc;
                }
            }
            let ab = Matrix::from_rows(prod).unwrap();
            prop_assert_eq!(ab.det().unwrap(), a.det().unwrap() * b.det().unwrap());
        }
    }
}
