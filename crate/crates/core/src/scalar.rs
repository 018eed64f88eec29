//! Numeric traits shared by every estimator.
//!
//! The averaging machinery only needs ordered field arithmetic, so it is
//! generic over [`Scalar`], which is implemented for `f32`, `f64` and exact
//! rationals. Anything that touches characters, square roots or FFTs requires
//! the floating-point refinement [`Real`].

use std::fmt::{Debug, Display};
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::{BigRational, Ratio};
use num_traits::{Float, FloatConst, Num, Signed, ToPrimitive};
use rustfft::FftNum;

/// Ordered field used by means, seminorms and window sums.
///
/// Implemented explicitly (no blanket impl) so that `Complex<T>` can never
/// be a `Scalar`.
pub trait Scalar: Clone + PartialOrd + Num + Signed + Debug + Send + Sync + 'static {
    /// Exact image of a nonnegative integer count.
    fn from_count(n: u64) -> Self;

    /// Lossy conversion for reporting.
    fn to_f64_lossy(&self) -> f64;

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }
}

/// Floating-point scalar: everything needed for characters and transforms.
pub trait Real: Scalar + Float + FloatConst + FftNum + Copy + Default + Display {
    fn from_f64_lossy(v: f64) -> Self;
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_count(n: u64) -> Self {
                n as $t
            }
            fn to_f64_lossy(&self) -> f64 {
                *self as f64
            }
        }
        impl Real for $t {
            fn from_f64_lossy(v: f64) -> Self {
                v as $t
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

macro_rules! ratio_scalar {
    ($int:ty) => {
        impl Scalar for Ratio<$int> {
            fn from_count(n: u64) -> Self {
                Ratio::from_integer(n as $int)
            }
            fn to_f64_lossy(&self) -> f64 {
                self.to_f64().unwrap_or(f64::NAN)
            }
        }
    };
}

ratio_scalar!(i64);
ratio_scalar!(i128);

impl Scalar for BigRational {
    fn from_count(n: u64) -> Self {
        Ratio::from_integer(BigInt::from(n))
    }
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// A sample value that can be averaged: a real scalar or a complex number.
pub trait Value<S: Scalar>:
    Clone + Debug + Send + Sync + Add<Output = Self> + Sub<Output = Self> + 'static
{
    fn zero_value() -> Self;
    fn divide_by(self, denom: &S) -> Self;
    /// `|self - other|`.
    fn distance(&self, other: &Self) -> S;
    fn real_part(&self) -> S;
    fn modulus(&self) -> S;
}

impl<S: Scalar> Value<S> for S {
    fn zero_value() -> Self {
        S::zero()
    }
    fn divide_by(self, denom: &S) -> Self {
        self / denom.clone()
    }
    fn distance(&self, other: &Self) -> S {
        (self.clone() - other.clone()).abs()
    }
    fn real_part(&self) -> S {
        self.clone()
    }
    fn modulus(&self) -> S {
        self.abs()
    }
}

impl<T: Real> Value<T> for Complex<T> {
    fn zero_value() -> Self {
        Complex::new(T::zero(), T::zero())
    }
    fn divide_by(self, denom: &T) -> Self {
        self / *denom
    }
    fn distance(&self, other: &Self) -> T {
        (*self - *other).norm()
    }
    fn real_part(&self) -> T {
        self.re
    }
    fn modulus(&self) -> T {
        self.norm()
    }
}

/// `exp(-2πi·theta·t)` with the phase reduced mod 1 before scaling.
pub fn character_conj<T: Real>(theta: T, t: i64) -> Complex<T> {
    let tt = T::from_f64_lossy(t as f64);
    let hi = theta * tt;
    let lo = theta.mul_add(tt, -hi);
    let phase = reduce_unit(reduce_unit(hi) + lo);
    let angle = -T::TAU() * phase;
    Complex::new(angle.cos(), angle.sin())
}

/// Reduce into `[0, 1)`.
pub fn reduce_unit<T: Real>(v: T) -> T {
    let r = v - v.floor();
    if r >= T::one() {
        T::zero()
    } else {
        r
    }
}

/// Distance between two points of the circle `R/Z`.
pub fn circle_distance<T: Real>(a: T, b: T) -> T {
    let d = reduce_unit(a - b);
    d.min(T::one() - d)
}
