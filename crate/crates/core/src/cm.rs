//! CM points of the upper half-plane and their lattices.
//!
//! A CM point `τ` is stored exactly as the primitive triple `(a, b, c)` of
//! its minimal equation `aτ² + bτ + c = 0` with `a > 0`, denoting the root
//! with positive imaginary part. `Λ_τ = Zτ + Z` has multiplier ring
//! `O_τ = Z[aτ]`, the order of discriminant `b² − 4ac`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::num::{exact_sqrt, lit, mod4, rational_gcd, to_f64, Int};
use crate::quadratic::{Parity, QuadOrder, SquarefreeD};
use crate::{Error, Result};

/// `x + y√d` with rational `x, y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElement<I: Int = BigInt> {
    x: Ratio<I>,
    y: Ratio<I>,
    d: SquarefreeD<I>,
}

impl<I: Int> QuadElement<I> {
    pub fn new(x: Ratio<I>, y: Ratio<I>, d: SquarefreeD<I>) -> Self {
        Self { x, y, d }
    }

    pub fn integer(n: I, d: SquarefreeD<I>) -> Self {
        Self::new(Ratio::from_integer(n), Ratio::zero(), d)
    }

    /// `√d` itself.
    pub fn sqrt_d(d: SquarefreeD<I>) -> Self {
        Self::new(Ratio::zero(), Ratio::one(), d)
    }

    pub fn rational_part(&self) -> &Ratio<I> {
        &self.x
    }

    pub fn irrational_part(&self) -> &Ratio<I> {
        &self.y
    }

    pub fn radicand(&self) -> &SquarefreeD<I> {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.x.clone(), -self.y.clone(), self.d.clone())
    }

    pub fn trace(&self) -> Ratio<I> {
        self.x.clone() + self.x.clone()
    }

    pub fn norm(&self) -> Ratio<I> {
        let d = Ratio::from_integer(self.d.value().clone());
        self.x.clone() * self.x.clone() - d * self.y.clone() * self.y.clone()
    }

    pub fn scale(&self, k: &Ratio<I>) -> Self {
        Self::new(self.x.clone() * k.clone(), self.y.clone() * k.clone(), self.d.clone())
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        (!n.is_zero()).then(|| self.conj().scale(&n.recip()))
    }

    /// Complex value, taking `√d = i√|d|` for `d < 0`.
    pub fn to_complex(&self) -> (f64, f64) {
        let x = ratio_f64(&self.x);
        let y = ratio_f64(&self.y);
        let d = to_f64(self.d.value());
        if d < 0.0 {
            (x, y * (-d).sqrt())
        } else {
            (x + y * d.sqrt(), 0.0)
        }
    }

    fn same_field(&self, other: &Self) {
        assert_eq!(self.d, other.d, "quadratic elements from different fields");
    }
}

pub(crate) fn ratio_f64<I: Int>(r: &Ratio<I>) -> f64 {
    to_f64(r.numer()) / to_f64(r.denom())
}

impl<I: Int> Add for &QuadElement<I> {
    type Output = QuadElement<I>;
    fn add(self, rhs: Self) -> QuadElement<I> {
        self.same_field(rhs);
        QuadElement::new(self.x.clone() + rhs.x.clone(), self.y.clone() + rhs.y.clone(), self.d.clone())
    }
}

impl<I: Int> Sub for &QuadElement<I> {
    type Output = QuadElement<I>;
    fn sub(self, rhs: Self) -> QuadElement<I> {
        self.same_field(rhs);
        QuadElement::new(self.x.clone() - rhs.x.clone(), self.y.clone() - rhs.y.clone(), self.d.clone())
    }
}

impl<I: Int> Mul for &QuadElement<I> {
    type Output = QuadElement<I>;
    fn mul(self, rhs: Self) -> QuadElement<I> {
        self.same_field(rhs);
        let d = Ratio::from_integer(self.d.value().clone());
        QuadElement::new(
            self.x.clone() * rhs.x.clone() + d * self.y.clone() * rhs.y.clone(),
            self.x.clone() * rhs.y.clone() + self.y.clone() * rhs.x.clone(),
            self.d.clone(),
        )
    }
}

impl<I: Int> Neg for &QuadElement<I> {
    type Output = QuadElement<I>;
    fn neg(self) -> QuadElement<I> {
        QuadElement::new(-self.x.clone(), -self.y.clone(), self.d.clone())
    }
}

impl<I: Int> fmt::Display for QuadElement<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ({})√{}", self.x, self.y, self.d)
    }
}

/// The lattice `Z·g1 + Z·g2` inside a quadratic field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice<I: Int = BigInt> {
    g1: QuadElement<I>,
    g2: QuadElement<I>,
}

impl<I: Int> Lattice<I> {
    pub fn new(g1: QuadElement<I>, g2: QuadElement<I>) -> Result<Self> {
        if g1.d != g2.d {
            return Err(Error::FieldMismatch);
        }
        let det = g1.x.clone() * g2.y.clone() - g2.x.clone() * g1.y.clone();
        if det.is_zero() {
            return Err(Error::DegenerateLattice);
        }
        Ok(Self { g1, g2 })
    }

    pub fn generators(&self) -> (&QuadElement<I>, &QuadElement<I>) {
        (&self.g1, &self.g2)
    }

    pub fn radicand(&self) -> &SquarefreeD<I> {
        &self.g1.d
    }

    /// Rational `(p, q)` with `z = p·g1 + q·g2`.
    pub fn coordinates(&self, z: &QuadElement<I>) -> Result<(Ratio<I>, Ratio<I>)> {
        if z.d != self.g1.d {
            return Err(Error::FieldMismatch);
        }
        let (g1, g2) = (&self.g1, &self.g2);
        let det = g1.x.clone() * g2.y.clone() - g2.x.clone() * g1.y.clone();
        let p = (z.x.clone() * g2.y.clone() - g2.x.clone() * z.y.clone()) / det.clone();
        let q = (g1.x.clone() * z.y.clone() - z.x.clone() * g1.y.clone()) / det;
        Ok((p, q))
    }

    pub fn contains(&self, z: &QuadElement<I>) -> bool {
        self.coordinates(z)
            .map(|(p, q)| p.is_integer() && q.is_integer())
            .unwrap_or(false)
    }

    /// True iff `u·L ⊆ L`.
    pub fn is_multiplier(&self, u: &QuadElement<I>) -> bool {
        self.contains(&(u * &self.g1)) && self.contains(&(u * &self.g2))
    }

    /// `{u ∈ K : uL ⊆ L}` solved exactly.
    ///
    /// Multiplication by `u = x + y√d` acts on lattice coordinates as
    /// `x·I + y·C`, where `C` is the coordinate matrix of `√d`. Integrality of
    /// the off-diagonal entries and of `y(C₂₂ − C₁₁)` pins `y` to `y₀Z`; the
    /// diagonal then pins `x` modulo `Z`. The ring is `Z + Z(−y₀C₁₁ + y₀√d)`.
    pub fn multiplier_ring(&self) -> Result<QuadOrder<I>> {
        let root = QuadElement::sqrt_d(self.radicand().clone());
        let (c11, c21) = self.coordinates(&(&root * &self.g1))?;
        let (c12, c22) = self.coordinates(&(&root * &self.g2))?;
        let g = rational_gcd(&[c12, c21, c22 - c11.clone()])
            .ok_or_else(|| Error::Invariant("√d acts as a scalar on a lattice".into()))?;
        let y0 = g.recip();
        let d = self.radicand().clone();
        let f = if d.is_one_mod_four() {
            y0.clone() * Ratio::from_integer(lit::<I>(2))
        } else {
            y0.clone()
        };
        if !f.is_integer() {
            return Err(Error::Invariant(format!("multiplier ring with non-integral conductor {f}")));
        }
        let order = QuadOrder::new(d.clone(), f.to_integer())?;
        let omega = QuadElement::new(-(y0.clone() * c11), y0, d);
        if !order.contains(&omega) {
            return Err(Error::Invariant(format!("generator {omega} outside {order}")));
        }
        Ok(order)
    }
}

impl<I: Int> fmt::Display for Lattice<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.g1, self.g2)
    }
}

impl<I: Int> QuadOrder<I> {
    /// Membership of `z` in `Z + Z·ω`, `ω = f√d` or `f(1+√d)/2`.
    pub fn contains(&self, z: &QuadElement<I>) -> bool {
        if z.d != *self.radicand() {
            return false;
        }
        let f = Ratio::from_integer(self.conductor().clone());
        if self.radicand().is_one_mod_four() {
            let half = f / Ratio::from_integer(lit::<I>(2));
            let q = z.y.clone() / half.clone();
            let p = z.x.clone() - q.clone() * half;
            p.is_integer() && q.is_integer()
        } else {
            let q = z.y.clone() / f;
            z.x.is_integer() && q.is_integer()
        }
    }
}

/// Exact CM point `τ = (−b + √(b² − 4ac)) / 2a` in the upper half-plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TauExact<I = BigInt> {
    a: I,
    b: I,
    c: I,
}

impl<I: Int> TauExact<I> {
    /// Any nonzero multiple of the minimal equation is accepted; the stored
    /// triple is primitive with `a > 0`.
    pub fn new(a: I, b: I, c: I) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::InvalidTau("leading coefficient a must be nonzero".into()));
        }
        let disc = b.clone() * b.clone() - lit::<I>(4) * a.clone() * c.clone();
        if !disc.is_negative() {
            return Err(Error::InvalidTau(format!(
                "discriminant b²−4ac = {disc} must be negative"
            )));
        }
        let mut g = a.gcd(&b).gcd(&c);
        if a.is_negative() {
            g = -g;
        }
        Ok(Self {
            a: a / g.clone(),
            b: b / g.clone(),
            c: c / g,
        })
    }

    /// Minimal equation of a non-real element `x + y√d` (`d < 0`); the
    /// conjugate with `y < 0` is taken so that the result lies in `H`.
    pub fn from_element(z: &QuadElement<I>) -> Result<Self> {
        if !z.d.is_imaginary() || z.y.is_zero() {
            return Err(Error::InvalidTau(format!("{z} is not in the upper half-plane")));
        }
        // τ² − tr·τ + N = 0, cleared of denominators
        let tr = z.trace();
        let n = z.norm();
        let den = tr.denom().lcm(n.denom());
        let den_r = Ratio::from_integer(den.clone());
        Self::new(
            den,
            -(tr * den_r.clone()).to_integer(),
            (n * den_r).to_integer(),
        )
    }

    pub fn a(&self) -> &I {
        &self.a
    }

    pub fn b(&self) -> &I {
        &self.b
    }

    pub fn c(&self) -> &I {
        &self.c
    }

    pub fn coefficients(&self) -> (I, I, I) {
        (self.a.clone(), self.b.clone(), self.c.clone())
    }

    /// `b² − 4ac`, also the discriminant of `O_τ`.
    pub fn discriminant(&self) -> I {
        self.b.clone() * self.b.clone() - lit::<I>(4) * self.a.clone() * self.c.clone()
    }

    /// `O_τ` decomposed as `(d, f)`.
    pub fn order(&self) -> Result<QuadOrder<I>> {
        QuadOrder::from_discriminant(&self.discriminant())
    }

    /// Parity of `O_τ`, read from the parity of `b² − 4ac` (equivalently of `b`).
    pub fn parity(&self) -> Parity {
        Parity::of_integer(&self.b)
    }

    pub fn field(&self) -> Result<SquarefreeD<I>> {
        Ok(SquarefreeD::squarefree_part(&self.discriminant())?.0)
    }

    /// Whether both points generate the same imaginary quadratic field,
    /// i.e. `Δ₁Δ₂` is a perfect square. No factoring involved.
    pub fn same_field(&self, other: &Self) -> bool {
        exact_sqrt(&(self.discriminant() * other.discriminant())).is_some()
    }

    /// `−b/2a`
    pub fn real_part(&self) -> Ratio<I> {
        Ratio::new(-self.b.clone(), lit::<I>(2) * self.a.clone())
    }

    /// `τ` as an element of `Q(√d)`; `d` must be the squarefree part of the
    /// discriminant.
    pub fn element_in(&self, d: &SquarefreeD<I>) -> Result<QuadElement<I>> {
        let disc = self.discriminant();
        let ratio = Ratio::new(disc, d.value().clone());
        let s = ratio
            .is_integer()
            .then(|| exact_sqrt(&ratio.to_integer()))
            .flatten()
            .ok_or(Error::FieldMismatch)?;
        let two_a = lit::<I>(2) * self.a.clone();
        Ok(QuadElement::new(
            Ratio::new(-self.b.clone(), two_a.clone()),
            Ratio::new(s, two_a),
            d.clone(),
        ))
    }

    pub fn element(&self) -> Result<QuadElement<I>> {
        self.element_in(&self.field()?)
    }

    /// `Λ_τ = [τ, 1]` over a known field.
    pub fn lattice_in(&self, d: &SquarefreeD<I>) -> Result<Lattice<I>> {
        let tau = self.element_in(d)?;
        Lattice::new(tau, QuadElement::integer(I::one(), d.clone()))
    }

    pub fn lattice(&self) -> Result<Lattice<I>> {
        self.lattice_in(&self.field()?)
    }

    /// Floating point `(Re τ, Im τ)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let a2 = 2.0 * to_f64(&self.a);
        let disc = to_f64(&self.discriminant());
        (-to_f64(&self.b) / a2, (-disc).sqrt() / a2)
    }
}

impl<I: Int> fmt::Display for TauExact<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

pub fn order_of_tau<I: Int>(t: &TauExact<I>) -> Result<QuadOrder<I>> {
    t.order()
}

pub fn parity_of_tau<I: Int>(t: &TauExact<I>) -> Parity {
    t.parity()
}

pub fn lattice_of_tau<I: Int>(t: &TauExact<I>) -> Result<Lattice<I>> {
    t.lattice()
}

pub fn multiplier_ring<I: Int>(l: &Lattice<I>) -> Result<QuadOrder<I>> {
    l.multiplier_ring()
}

/// `τ = 1/2 + √D/(2β)` for `D < 0`, `D ≡ 1 (mod 4)` and odd `β > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BetaPoint<I = BigInt> {
    disc: I,
    beta: I,
    dgcd: I,
}

impl<I: Int> BetaPoint<I> {
    pub fn new(disc: I, beta: I) -> Result<Self> {
        if !disc.is_negative() || mod4(&disc) != 1 {
            return Err(Error::BadDiscriminant(disc.to_string()));
        }
        if !beta.is_positive() || beta.is_even() {
            return Err(Error::BadBeta(beta.to_string()));
        }
        let dgcd = disc.abs().gcd(&(beta.clone() * beta.clone()));
        Ok(Self { disc, beta, dgcd })
    }

    pub fn disc(&self) -> &I {
        &self.disc
    }

    pub fn beta(&self) -> &I {
        &self.beta
    }

    /// `gcd(|D|, β²)`
    pub fn dgcd(&self) -> &I {
        &self.dgcd
    }

    /// Primitive triple `(β²/𝐝, −β²/𝐝, (β² − D)/(4𝐝))`.
    pub fn tau(&self) -> TauExact<I> {
        let b2 = self.beta.clone() * self.beta.clone();
        let a = b2.clone() / self.dgcd.clone();
        let c = (b2 - self.disc.clone()) / (lit::<I>(4) * self.dgcd.clone());
        let t = TauExact::new(a.clone(), -a.clone(), c.clone()).expect("negative discriminant");
        assert!(
            t.a == a && t.c == c,
            "closed-form triple for D={}, β={} is not primitive",
            self.disc,
            self.beta
        );
        t
    }

    /// `(β²/𝐝)·(D/𝐝)`
    pub fn predicted_discriminant(&self) -> I {
        let b2 = self.beta.clone() * self.beta.clone();
        (b2 / self.dgcd.clone()) * (self.disc.clone() / self.dgcd.clone())
    }

    /// `β | D`
    pub fn halfint_membership(&self) -> bool {
        self.disc.is_multiple_of(&self.beta)
    }

    /// Whether `(1+√D)/2` multiplies `Λ_τ` into itself, checked on the lattice.
    pub fn halfint_in_multiplier_ring(&self) -> Result<bool> {
        let (d, s) = SquarefreeD::squarefree_part(&self.disc)?;
        let two = lit::<I>(2);
        let w = QuadElement::new(Ratio::new(I::one(), two.clone()), Ratio::new(s, two), d.clone());
        Ok(self.tau().lattice_in(&d)?.is_multiplier(&w))
    }

    /// `gcd(β, |D|/β) = 1`; requires `β | D`.
    pub fn is_maximal_halfint(&self) -> Result<bool> {
        if !self.halfint_membership() {
            return Err(Error::NotADivisor {
                divisor: self.beta.to_string(),
                n: self.disc.to_string(),
            });
        }
        let co = self.disc.abs() / self.beta.clone();
        Ok(self.beta.gcd(&co).is_one())
    }
}

pub fn tau_from_beta<I: Int>(disc: I, beta: I) -> Result<TauExact<I>> {
    Ok(BetaPoint::new(disc, beta)?.tau())
}

pub fn halfint_membership<I: Int>(disc: I, beta: I) -> Result<bool> {
    Ok(BetaPoint::new(disc, beta)?.halfint_membership())
}

pub fn is_maximal_halfint<I: Int>(disc: I, beta: I) -> Result<bool> {
    BetaPoint::new(disc, beta)?.is_maximal_halfint()
}
