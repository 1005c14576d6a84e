//! Coefficient rings and the Koszul sign rule.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, Zero};

/// Coefficients of every sparse combination in the engine.
///
/// Anything that behaves like a field of characteristic zero works; the
/// verification routines are instantiated with [`Rational`] so that every
/// residue is an exact zero or an exact nonzero.
pub trait Coeff:
    Clone + PartialEq + Debug + Display + Num + std::ops::Neg<Output = Self> + FromPrimitive + Send + Sync + 'static
{
    fn int(v: i64) -> Self {
        Self::from_i64(v).expect("integer coefficient out of range")
    }

    fn frac(num: i64, den: i64) -> Self {
        Self::int(num) / Self::int(den)
    }

    /// `+1` for an even exponent, `-1` for an odd one.
    fn sign(odd: bool) -> Self {
        if odd {
            -Self::one()
        } else {
            Self::one()
        }
    }
}

impl<T> Coeff for T where
    T: Clone + PartialEq + Debug + Display + Num + std::ops::Neg<Output = T> + FromPrimitive + Send + Sync + 'static
{
}

/// Exact arbitrary-precision rationals.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Canonical text form of a rational: `n` or `n/d`, reduced, positive denominator.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `n` or `n/d` (optionally signed).
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => text.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

pub fn is_negative(q: &Rational) -> bool {
    q.is_negative()
}

/// Parity of an integer degree.
#[inline]
pub fn odd(degree: i64) -> bool {
    degree.rem_euclid(2) == 1
}

/// Parity of the Koszul sign picked up when a homogeneous block of total
/// degree `Σ left` is moved past a block of total degree `Σ right`.
///
/// Every sign in the engine is computed through this function or
/// [`koszul_sign`].
#[inline]
pub fn koszul_parity(left: &[i64], right: &[i64]) -> bool {
    let l: i64 = left.iter().sum();
    let r: i64 = right.iter().sum();
    odd(l) && odd(r)
}

/// `(-1)^{Σ_{i,j} l_i r_j}` as a coefficient.
pub fn koszul_sign<C: Coeff>(left: &[i64], right: &[i64]) -> C {
    C::sign(koszul_parity(left, right))
}
