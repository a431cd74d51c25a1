//! Quadratic fields, their orders, and the parity of an order.
//!
//! An order of `Q(√d)` is determined by the squarefree radicand `d` and the
//! conductor `f`; its discriminant is `f² · disc(K)`. The order is *odd* when
//! that discriminant is odd and *even* otherwise.

use std::fmt;

use num_bigint::BigInt;

use crate::factor::FactoredInt;
use crate::num::{exact_sqrt, lit, mod4, Int};
use crate::{Error, Result};

/// A squarefree integer `d ∉ {0, 1}`, the radicand of `Q(√d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquarefreeD<I = BigInt>(I);

impl<I: Int> SquarefreeD<I> {
    /// Validates `d` by factoring it; non-squarefree inputs are rejected,
    /// never reduced.
    pub fn new(d: I) -> Result<Self> {
        if d.is_zero() || d.is_one() {
            return Err(Error::TrivialRadicand);
        }
        if !FactoredInt::of(&d)?.is_squarefree() {
            return Err(Error::NotSquarefree(d.to_string()));
        }
        Ok(Self(d))
    }

    /// Squarefree part of a nonzero integer that is not a perfect square,
    /// with the sign of `n`, together with the root `s` in `n = s²·d`.
    pub fn squarefree_part(n: &I) -> Result<(Self, I)> {
        let f = FactoredInt::of(n)?;
        let (core, root) = f.square_decomposition();
        let core = I::from_u64(core).expect("core fits");
        let d = if n.is_negative() { -core } else { core };
        if d.is_one() {
            return Err(Error::NotADiscriminant(n.to_string()));
        }
        Ok((Self(d), I::from_u64(root).expect("root fits")))
    }

    pub fn value(&self) -> &I {
        &self.0
    }

    pub fn into_inner(self) -> I {
        self.0
    }

    pub fn is_imaginary(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_one_mod_four(&self) -> bool {
        mod4(&self.0) == 1
    }

    /// `d` if `d ≡ 1 (mod 4)`, else `4d`.
    pub fn field_discriminant(&self) -> I {
        if self.is_one_mod_four() {
            self.0.clone()
        } else {
            lit::<I>(4) * self.0.clone()
        }
    }
}

impl<I: Int> fmt::Display for SquarefreeD<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of_integer<I: Int>(n: &I) -> Self {
        if n.is_odd() {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The additive subgroup of `Z` generated by traces of an order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TraceLattice {
    /// `tr(O) = Z`
    Integers,
    /// `tr(O) = 2Z`
    EvenIntegers,
}

/// Canonical generator of an order: `Z[(1+√D)/2]` or `Z[√D]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CanonicalForm<I = BigInt> {
    /// `O = Z + Z(1+√D)/2` with `D ≡ 1 (mod 4)`; discriminant `D`.
    HalfInteger(I),
    /// `O = Z + Z√D`; discriminant `4D`.
    Integer(I),
}

impl<I: Int> CanonicalForm<I> {
    pub fn radicand(&self) -> &I {
        match self {
            CanonicalForm::HalfInteger(d) | CanonicalForm::Integer(d) => d,
        }
    }

    pub fn discriminant(&self) -> I {
        match self {
            CanonicalForm::HalfInteger(d) => d.clone(),
            CanonicalForm::Integer(d) => lit::<I>(4) * d.clone(),
        }
    }

    pub fn parity(&self) -> Parity {
        match self {
            CanonicalForm::HalfInteger(_) => Parity::Odd,
            CanonicalForm::Integer(_) => Parity::Even,
        }
    }

    /// Rebuilds the order generated by this form.
    pub fn to_order(&self) -> Result<QuadOrder<I>> {
        QuadOrder::from_discriminant(&self.discriminant())
    }
}

/// The order `Z + f·O_K` in `K = Q(√d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadOrder<I = BigInt> {
    d: SquarefreeD<I>,
    conductor: I,
}

impl<I: Int> QuadOrder<I> {
    pub fn new(d: SquarefreeD<I>, conductor: I) -> Result<Self> {
        if !conductor.is_positive() {
            return Err(Error::BadConductor(conductor.to_string()));
        }
        Ok(Self { d, conductor })
    }

    pub fn maximal(d: SquarefreeD<I>) -> Self {
        Self {
            d,
            conductor: I::one(),
        }
    }

    /// The unique order with the given discriminant.
    pub fn from_discriminant(disc: &I) -> Result<Self> {
        let bad = || Error::NotADiscriminant(disc.to_string());
        let r = mod4(disc);
        if disc.is_zero() || (r != 0 && r != 1) {
            return Err(bad());
        }
        let (d, root) = SquarefreeD::squarefree_part(disc).map_err(|e| match e {
            Error::TooLarge(_) => e,
            _ => bad(),
        })?;
        let conductor = if d.is_one_mod_four() {
            root
        } else {
            // disc = root²·d with d ≡ 2, 3 (mod 4) forces root even
            if root.is_odd() {
                return Err(bad());
            }
            root / lit(2)
        };
        Ok(Self { d, conductor })
    }

    pub fn radicand(&self) -> &SquarefreeD<I> {
        &self.d
    }

    pub fn conductor(&self) -> &I {
        &self.conductor
    }

    pub fn field_discriminant(&self) -> I {
        self.d.field_discriminant()
    }

    /// `f² · disc(K)`.
    pub fn discriminant(&self) -> I {
        self.conductor.clone() * self.conductor.clone() * self.field_discriminant()
    }

    pub fn parity(&self) -> Parity {
        Parity::of_integer(&self.discriminant())
    }

    /// Parity read off the factors: odd iff `disc(K)` and `f` are both odd.
    pub fn parity_from_components(&self) -> Parity {
        if self.field_discriminant().is_odd() && self.conductor.is_odd() {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    /// Subgroup of `Z` generated by `tr(1) = 2` and the trace of the
    /// generator `f√d` or `f(1+√d)/2`.
    pub fn trace_lattice(&self) -> TraceLattice {
        let gen_trace = if self.d.is_one_mod_four() {
            self.conductor.clone()
        } else {
            I::zero()
        };
        if lit::<I>(2).gcd(&gen_trace).is_one() {
            TraceLattice::Integers
        } else {
            TraceLattice::EvenIntegers
        }
    }

    pub fn canonical_generator(&self) -> CanonicalForm<I> {
        let f = &self.conductor;
        let d = self.d.value().clone();
        let form = match self.parity() {
            Parity::Odd => CanonicalForm::HalfInteger(self.discriminant()),
            Parity::Even => {
                let m = if self.d.is_one_mod_four() {
                    f.clone() / lit(2)
                } else {
                    f.clone()
                };
                CanonicalForm::Integer(m.clone() * m * d)
            }
        };
        assert!(
            exact_sqrt(form.radicand()).is_none(),
            "canonical radicand of an order is never a square"
        );
        form
    }
}

impl<I: Int> fmt::Display for QuadOrder<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O(d={}, f={})", self.d, self.conductor)
    }
}
