//! Field abstraction shared by the floating-point and exact rational
//! evaluations of the closed-form element matrices.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_int(v: i64) -> Self;

    fn zero() -> Self {
        Self::from_int(0)
    }
}

impl Scalar for f64 {
    fn from_int(v: i64) -> Self {
        v as f64
    }
}

impl Scalar for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

/// Exact fraction kept unnormalized: arithmetic never takes a gcd, which
/// makes long products of dyadic inputs much cheaper than [`BigRational`].
/// Equality is by cross-multiplication.
#[derive(Debug, Clone)]
pub struct Fraction {
    num: BigInt,
    /// Always positive.
    den: BigInt,
}

impl Fraction {
    pub fn new(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if den.is_negative() {
            Self { num: -num, den: -den }
        } else {
            Self { num, den }
        }
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.num.clone(), self.den.clone())
    }
}

impl From<&BigRational> for Fraction {
    fn from(r: &BigRational) -> Self {
        Self {
            num: r.numer().clone(),
            den: r.denom().clone(),
        }
    }
}

impl PartialEq for Fraction {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl PartialEq<BigRational> for Fraction {
    fn eq(&self, other: &BigRational) -> bool {
        &self.num * other.denom() == other.numer() * &self.den
    }
}

impl Add for Fraction {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        if self.den == rhs.den {
            Self {
                num: self.num + rhs.num,
                den: self.den,
            }
        } else {
            Self {
                num: self.num * &rhs.den + rhs.num * &self.den,
                den: self.den * rhs.den,
            }
        }
    }
}

impl Sub for Fraction {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for Fraction {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Self {
            num: self.num * rhs.num,
            den: self.den * rhs.den,
        }
    }
}

impl Div for Fraction {
    type Output = Self;

    fn div(self, rhs: Self) -> Self {
        Self::new(self.num * rhs.den, self.den * rhs.num)
    }
}

impl Neg for Fraction {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Scalar for Fraction {
    fn from_int(v: i64) -> Self {
        Self {
            num: BigInt::from(v),
            den: BigInt::from(1),
        }
    }
}

/// 6×6 matrix in basis order (corner 1..3, then mid 12, 23, 31 / edge
/// families 1..6).
pub type Mat6<S> = [[S; 6]; 6];

pub fn map6<S, T>(m: &Mat6<S>, mut f: impl FnMut(&S) -> T) -> Mat6<T> {
    std::array::from_fn(|i| std::array::from_fn(|j| f(&m[i][j])))
}

pub fn transpose6<S: Clone>(m: &Mat6<S>) -> Mat6<S> {
    std::array::from_fn(|i| std::array::from_fn(|j| m[j][i].clone()))
}
