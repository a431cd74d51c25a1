//! Scalar traits shared by the exact and numerical halves of the crate.
//!
//! Exact code is generic over [`Int`] (`BigInt` by default, `i64`/`i128`
//! when the caller knows the inputs stay small). Numerical code is generic
//! over [`Scalar`] (`f64` by default).

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::{Integer, Roots};
use num_rational::Ratio;
use num_traits::{Float, FloatConst, FromPrimitive, Signed, ToPrimitive};

/// Signed integer type usable for exact arithmetic.
///
/// Fixed-width implementors overflow silently in release builds; use the
/// default `BigInt` unless the magnitudes involved are known.
pub trait Int:
    Integer + Signed + Roots + Clone + FromPrimitive + ToPrimitive + Debug + Display + Hash + Send + Sync + 'static
{
}

impl<T> Int for T where
    T: Integer + Signed + Roots + Clone + FromPrimitive + ToPrimitive + Debug + Display + Hash + Send + Sync + 'static
{
}

/// Floating point type used for q-expansions and root finding.
pub trait Scalar: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {}

impl<T> Scalar for T where T: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {}

/// Small integer literal converted into `I`.
#[inline]
pub(crate) fn lit<I: Int>(v: i64) -> I {
    I::from_i64(v).expect("integer literal fits every Int type")
}

/// Small float literal converted into `T`.
#[inline]
pub(crate) fn flit<T: Scalar>(v: f64) -> T {
    T::from_f64(v).expect("float literal fits every Scalar type")
}

/// Exact square root, if `n` is a perfect square.
pub fn exact_sqrt<I: Int>(n: &I) -> Option<I> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (r.clone() * r.clone() == *n).then_some(r)
}

/// `n mod 4` in `0..4`.
#[inline]
pub(crate) fn mod4<I: Int>(n: &I) -> i64 {
    n.mod_floor(&lit(4)).to_i64().expect("residue fits i64")
}

/// gcd of a list of rationals: the positive rational `g` with every entry an
/// integer multiple of `g` and the multiples coprime. Zero entries are skipped.
pub(crate) fn rational_gcd<I: Int>(values: &[Ratio<I>]) -> Option<Ratio<I>> {
    let mut num: Option<I> = None;
    let mut den = I::one();
    for v in values.iter().filter(|v| !v.numer().is_zero()) {
        num = Some(match num {
            None => v.numer().abs(),
            Some(n) => n.gcd(v.numer()),
        });
        den = den.lcm(v.denom());
    }
    num.map(|n| Ratio::new(n, den))
}

pub(crate) fn to_f64<I: Int>(n: &I) -> f64 {
    n.to_f64().unwrap_or(f64::NAN)
}
