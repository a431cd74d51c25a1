//! Numerical j-invariant and the real-j locus.
//!
//! `j = E₄³/Δ` is evaluated from q-expansions after reducing the argument to
//! the standard fundamental domain. `j − 1728 = E₆²/Δ` is evaluated
//! separately so that points near `i` keep full relative precision.
//!
//! The real-j locus `𝔗 = {it : t ≥ 1} ∪ {1/2 + it : t > 1/2}` meets every
//! real j-value exactly once: `t ↦ j(it)` increases from 1728 on the first
//! branch and `t ↦ j(1/2 + it)` decreases from 1728 on the second.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::cm::TauExact;
use crate::isogeny::IntMatrix2;
use crate::num::{flit, lit, Int, Scalar};
use crate::{Error, Result};

const SERIES_REL_TOL: f64 = 1e-20;
const SERIES_MAX_TERMS: usize = 64;
const REDUCTION_MAX_STEPS: usize = 10_000;
/// `|j − 1728|` below which a value is treated as exactly 1728 (branch `T1`, `t = 1`).
const JUNCTION_TOL: f64 = 1e-12;

/// Numerical point `x + iy` of the upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UHPoint<T = f64> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> UHPoint<T> {
    pub fn new(x: T, y: T) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() || y <= T::zero() {
            return Err(Error::InvalidPoint(format!("x={x}, y={y}")));
        }
        Ok(Self { x, y })
    }

    pub fn from_tau<I: Int>(t: &TauExact<I>) -> Self {
        let (x, y) = t.to_complex();
        Self {
            x: T::from_f64(x).expect("finite"),
            y: T::from_f64(y).expect("finite"),
        }
    }

    pub fn to_complex(self) -> Complex<T> {
        Complex::new(self.x, self.y)
    }

    /// Translate and invert until `|x| ≤ 1/2` and `|τ| ≥ 1`.
    pub fn reduce(self) -> Self {
        let (mut x, mut y) = (self.x, self.y);
        for _ in 0..REDUCTION_MAX_STEPS {
            x = x - x.round();
            let r2 = x * x + y * y;
            if r2 >= T::one() {
                break;
            }
            x = -x / r2;
            y = y / r2;
        }
        Self { x, y }
    }
}

/// `(E₄, E₆, Δ)` at nome `q`.
pub fn modular_forms<T: Scalar>(q: Complex<T>) -> (Complex<T>, Complex<T>, Complex<T>) {
    let (e4, e6, eta24) = forms_over_q(q);
    (e4, e6, q * eta24)
}

/// `(E₄, E₆, Δ/q)`; keeping `q` out of `Δ` avoids underflow far up the cusp.
fn forms_over_q<T: Scalar>(q: Complex<T>) -> (Complex<T>, Complex<T>, Complex<T>) {
    let tol = flit::<T>(SERIES_REL_TOL);
    let one = Complex::<T>::one();
    let mut s3 = Complex::<T>::zero();
    let mut s5 = Complex::<T>::zero();
    let mut prod = one;
    let mut qn = one;
    for n in 1..=SERIES_MAX_TERMS {
        qn = qn * q;
        let nn = flit::<T>(n as f64);
        let lambert = qn / (one - qn);
        let t3 = lambert * (nn * nn * nn);
        let t5 = t3 * (nn * nn);
        s3 = s3 + t3;
        s5 = s5 + t5;
        let factor = one - qn;
        let f2 = factor * factor;
        let f4 = f2 * f2;
        let f8 = f4 * f4;
        prod = prod * f8 * f8 * f8;
        let e4_mag = (one + s3 * flit::<T>(240.0)).norm();
        let e6_mag = (one - s5 * flit::<T>(504.0)).norm();
        let small = |term: Complex<T>, scale: T, total: T| term.norm() * scale < tol * total;
        if small(t3, flit(240.0), e4_mag)
            && small(t5, flit(504.0), e6_mag)
            && qn.norm() < tol
        {
            break;
        }
    }
    let e4 = one + s3 * flit::<T>(240.0);
    let e6 = one - s5 * flit::<T>(504.0);
    (e4, e6, prod)
}

fn nome<T: Scalar>(p: UHPoint<T>) -> Complex<T> {
    // exp(2πiτ)
    let mag = (-(T::PI() + T::PI()) * p.y).exp();
    let (c, s) = cis_two_pi(p.x);
    Complex::new(mag * c, mag * s)
}

/// `e^{2πix}`, exact at multiples of 1/4 so that overflowed products keep
/// their zero components.
fn cis_two_pi<T: Scalar>(x: T) -> (T, T) {
    let r = x - x.round();
    let quarter = flit::<T>(0.25);
    if r == T::zero() {
        (T::one(), T::zero())
    } else if r.abs() == flit(0.5) {
        (-T::one(), T::zero())
    } else if r.abs() == quarter {
        (T::zero(), r.signum())
    } else {
        let angle = (T::PI() + T::PI()) * r;
        (angle.cos(), angle.sin())
    }
}

/// `1/q = e^{−2πiτ}`; components overflow to a correctly signed infinity.
fn inverse_nome<T: Scalar>(p: UHPoint<T>) -> Complex<T> {
    let mag = ((T::PI() + T::PI()) * p.y).exp();
    let (c, s) = cis_two_pi(-p.x);
    let scale = |u: T| if u == T::zero() { T::zero() } else { mag * u };
    Complex::new(scale(c), scale(s))
}

fn over_q<T: Scalar>(value: Complex<T>, p: UHPoint<T>) -> Complex<T> {
    let inv = inverse_nome(p);
    if inv.re.is_finite() && inv.im.is_finite() {
        return value * inv;
    }
    // Here |q| < e^-700, so `value` is 1 up to rounding noise; drop the noise
    // and read 0·∞ as 0.
    let floor = value.norm() * flit::<T>(1e-12);
    let mul = |a: T, b: T| if a.abs() <= floor || b == T::zero() { T::zero() } else { a * b };
    Complex::new(
        mul(value.re, inv.re) - mul(value.im, inv.im),
        mul(value.re, inv.im) + mul(value.im, inv.re),
    )
}

/// `j(τ)`; beyond the float range the value is a signed infinity.
pub fn j_numeric<T: Scalar>(p: UHPoint<T>) -> Complex<T> {
    let p = p.reduce();
    let (e4, _, eta24) = forms_over_q(nome(p));
    over_q(e4 * e4 * e4 / eta24, p)
}

/// `j(τ) − 1728`, computed as `E₆²/Δ`.
pub fn j_minus_1728<T: Scalar>(p: UHPoint<T>) -> Complex<T> {
    let p = p.reduce();
    let (_, e6, eta24) = forms_over_q(nome(p));
    over_q(e6 * e6 / eta24, p)
}

/// `j(1/2 + it)` for `t ≥ 1/2`.
pub fn f_curve<T: Scalar>(t: T) -> T {
    let j = j_numeric(UHPoint { x: flit(0.5), y: t });
    debug_assert!(
        !j.re.is_finite() || j.im.abs() < flit::<T>(1e-9) * (T::one() + j.norm()),
        "j(1/2 + it) should be real, got {j}"
    );
    j.re
}

/// `j(it)` for `t ≥ 1`.
pub fn axis_curve<T: Scalar>(t: T) -> T {
    j_numeric(UHPoint { x: T::zero(), y: t }).re
}

/// Reduces a CM point to `|b| ≤ a ≤ c`, with `−a ≤ b < a` and `b ≤ 0` when
/// `a = c`. Returns the reduced point and the unimodular `M` with
/// `M(input) = output`.
pub fn reduce_fundamental<I: Int>(t: &TauExact<I>) -> (TauExact<I>, IntMatrix2<I>) {
    let (mut a, mut b, mut c) = t.coefficients();
    let mut m = IntMatrix2::identity();
    let two = lit::<I>(2);
    loop {
        // τ ↦ τ + k sends (a, b, c) to (a, b − 2ak, ak² − bk + c)
        let k = (b.clone() + a.clone()).div_floor(&(two.clone() * a.clone()));
        if !k.is_zero() {
            let nb = b.clone() - two.clone() * a.clone() * k.clone();
            c = a.clone() * k.clone() * k.clone() - b.clone() * k.clone() + c;
            b = nb;
            m = &IntMatrix2::translation(k) * &m;
        }
        if a > c || (a == c && b.is_positive()) {
            // τ ↦ −1/τ sends (a, b, c) to (c, −b, a)
            std::mem::swap(&mut a, &mut c);
            b = -b;
            m = &IntMatrix2::inversion() * &m;
            continue;
        }
        break;
    }
    let reduced = TauExact::new(a, b, c).expect("reduction preserves the discriminant");
    (reduced, m)
}

/// Real-j criterion on the reduced form: `b = 0`, `|b| = a` or `a = c`.
pub fn is_real_j<I: Int>(t: &TauExact<I>) -> bool {
    let (r, _) = reduce_fundamental(t);
    r.b().is_zero() || r.b().abs() == *r.a() || r.a() == r.c()
}

/// Numerical counterpart of [`is_real_j`]: `|Im j| < 1e−6·(1 + |j|)`.
pub fn is_real_j_numeric<I: Int>(t: &TauExact<I>) -> bool {
    let j = j_numeric(UHPoint::<f64>::from_tau(t));
    j.im.abs() < 1e-6 * (1.0 + j.norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    /// `τ = it`, `t ≥ 1`
    T1,
    /// `τ = 1/2 + it`, `t > 1/2`
    T2,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::T1 => "T1",
            Branch::T2 => "T2",
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A point of the real-j locus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TPoint<T = f64> {
    pub branch: Branch,
    pub t: T,
}

impl<T: Scalar> TPoint<T> {
    pub fn new(branch: Branch, t: T) -> Result<Self> {
        let ok = match branch {
            Branch::T1 => t >= T::one(),
            Branch::T2 => t > flit(0.5),
        };
        if !ok || !t.is_finite() {
            return Err(Error::InvalidPoint(format!("{branch} with t={t}")));
        }
        Ok(Self { branch, t })
    }

    pub fn to_point(self) -> UHPoint<T> {
        let x = match self.branch {
            Branch::T1 => T::zero(),
            Branch::T2 => flit(0.5),
        };
        UHPoint { x, y: self.t }
    }

    pub fn j(self) -> T {
        j_numeric(self.to_point()).re
    }
}

/// Largest `t` with `pred(t)` false, given `pred(lo)` false and `pred` monotone.
fn bisect<T: Scalar>(lo: T, mut pred: impl FnMut(T) -> bool) -> T {
    let two = flit::<T>(2.0);
    let mut lo = lo;
    let mut hi = lo + T::one();
    while !pred(hi) {
        lo = hi;
        hi = hi * two;
        if !hi.is_finite() {
            return lo;
        }
    }
    for _ in 0..400 {
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo + hi) / two
}

/// The unique point of the real-j locus with the same j as `t`.
pub fn t_representative<T: Scalar, I: Int>(tau: &TauExact<I>) -> Result<TPoint<T>> {
    if !is_real_j(tau) {
        return Err(Error::NotRealJ);
    }
    let point = UHPoint::<T>::from_tau(tau);
    let target = j_minus_1728(point).re;
    if target.abs() < flit(JUNCTION_TOL) {
        return TPoint::new(Branch::T1, T::one());
    }
    // Compare in whichever form is accurate at the target: E₄³/Δ has full
    // relative precision near j = 0, E₆²/Δ near j = 1728.
    let near_zero = j_numeric(point).re.abs() < target.abs();
    let shifted = move |p: UHPoint<T>| {
        if near_zero {
            j_numeric(p).re
        } else {
            j_minus_1728(p).re
        }
    };
    let goal = shifted(point);
    if target > T::zero() {
        // j(it) increases on t ≥ 1
        let t = bisect(T::one(), |s| shifted(UHPoint { x: T::zero(), y: s }) >= goal);
        TPoint::new(Branch::T1, t)
    } else {
        // j(1/2 + it) decreases on t > 1/2
        let t = bisect(flit(0.5), |s| shifted(UHPoint { x: flit(0.5), y: s }) <= goal);
        TPoint::new(Branch::T2, t)
    }
}
