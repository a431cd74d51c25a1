//! Odd-degree isogenies between CM lattices.
//!
//! `G = GL₂(Z₍₂₎)⁺` acts on the upper half-plane by Möbius transformations.
//! For `M ∈ G`, clearing the (odd) denominators of `M` gives an integral
//! matrix whose determinant is odd, and `u = c̃τ + d̃` maps `Λ_{M(τ)}` into
//! `Λ_τ` with that odd index.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use rand::Rng;

use crate::cm::{Lattice, QuadElement, TauExact};
use crate::num::{lit, Int};
use crate::quadratic::SquarefreeD;
use crate::{Error, Result};

/// Integral 2×2 matrix `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix2<I = BigInt> {
    pub a: I,
    pub b: I,
    pub c: I,
    pub d: I,
}

impl<I: Int> IntMatrix2<I> {
    pub fn new(a: I, b: I, c: I, d: I) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::new(I::one(), I::zero(), I::zero(), I::one())
    }

    /// `τ ↦ τ + k`
    pub fn translation(k: I) -> Self {
        Self::new(I::one(), k, I::zero(), I::one())
    }

    /// `τ ↦ −1/τ`
    pub fn inversion() -> Self {
        Self::new(I::zero(), -I::one(), I::one(), I::zero())
    }

    pub fn det(&self) -> I {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn to_rational(&self) -> RatMatrix2<I> {
        RatMatrix2::from_integers(self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone())
    }
}

impl<I: Int> Mul for &IntMatrix2<I> {
    type Output = IntMatrix2<I>;
    fn mul(self, r: Self) -> IntMatrix2<I> {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        IntMatrix2::new(
            a.clone() * r.a.clone() + b.clone() * r.c.clone(),
            a.clone() * r.b.clone() + b.clone() * r.d.clone(),
            c.clone() * r.a.clone() + d.clone() * r.c.clone(),
            c.clone() * r.b.clone() + d.clone() * r.d.clone(),
        )
    }
}

impl<I: Int> fmt::Display for IntMatrix2<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {}; {} {}]", self.a, self.b, self.c, self.d)
    }
}

/// Rational 2×2 matrix `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix2<I: Int = BigInt> {
    pub a: Ratio<I>,
    pub b: Ratio<I>,
    pub c: Ratio<I>,
    pub d: Ratio<I>,
}

impl<I: Int> RatMatrix2<I> {
    pub fn new(a: Ratio<I>, b: Ratio<I>, c: Ratio<I>, d: Ratio<I>) -> Self {
        Self { a, b, c, d }
    }

    pub fn from_integers(a: I, b: I, c: I, d: I) -> Self {
        Self::new(
            Ratio::from_integer(a),
            Ratio::from_integer(b),
            Ratio::from_integer(c),
            Ratio::from_integer(d),
        )
    }

    pub fn identity() -> Self {
        Self::from_integers(I::one(), I::zero(), I::zero(), I::one())
    }

    pub fn diag(a: Ratio<I>, d: Ratio<I>) -> Self {
        Self::new(a, Ratio::zero(), Ratio::zero(), d)
    }

    pub fn entries(&self) -> [&Ratio<I>; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self) -> Ratio<I> {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    /// Membership in `GL₂(Z₍₂₎)⁺`: odd denominators and a positive
    /// determinant whose numerator and denominator are both odd.
    pub fn check_in_g(&self) -> Result<()> {
        if let Some(e) = self.entries().into_iter().find(|e| e.denom().is_even()) {
            return Err(Error::NotInG(format!("entry {e} has an even denominator")));
        }
        let det = self.det();
        if !det.is_positive() {
            return Err(Error::NotInG(format!("determinant {det} is not positive")));
        }
        if det.numer().is_even() {
            return Err(Error::NotInG(format!("determinant {det} is not a 2-adic unit")));
        }
        Ok(())
    }

    pub fn is_in_g(&self) -> bool {
        self.check_in_g().is_ok()
    }

    /// Least common denominator `n` and the primitive integral matrix
    /// `nM / g` with `g` the gcd of the entries of `nM`.
    pub fn primitive_integral(&self) -> (I, I, IntMatrix2<I>) {
        let n = self
            .entries()
            .into_iter()
            .fold(I::one(), |acc, e| acc.lcm(e.denom()));
        let nr = Ratio::from_integer(n.clone());
        let [a, b, c, d] = self
            .entries()
            .map(|e| (e.clone() * nr.clone()).to_integer());
        let g = a.gcd(&b).gcd(&c).gcd(&d);
        let m = if g.is_zero() {
            IntMatrix2::new(a, b, c, d)
        } else {
            IntMatrix2::new(a / g.clone(), b / g.clone(), c / g.clone(), d / g.clone())
        };
        (n, g, m)
    }
}

impl<I: Int> Mul for &RatMatrix2<I> {
    type Output = RatMatrix2<I>;
    fn mul(self, r: Self) -> RatMatrix2<I> {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        RatMatrix2::new(
            a.clone() * r.a.clone() + b.clone() * r.c.clone(),
            a.clone() * r.b.clone() + b.clone() * r.d.clone(),
            c.clone() * r.a.clone() + d.clone() * r.c.clone(),
            c.clone() * r.b.clone() + d.clone() * r.d.clone(),
        )
    }
}

impl<I: Int> fmt::Display for RatMatrix2<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {}; {} {}]", self.a, self.b, self.c, self.d)
    }
}

/// `M(τ)` for an integral `M` with positive determinant.
///
/// Substituting `τ = (dτ' − b)/(−cτ' + a)` into `Aτ² + Bτ + C = 0`.
pub fn moebius_int<I: Int>(m: &IntMatrix2<I>, t: &TauExact<I>) -> TauExact<I> {
    assert!(m.det().is_positive(), "Möbius action needs a positive determinant");
    let (ta, tb, tc) = t.coefficients();
    let (a, b, c, d) = (&m.a, &m.b, &m.c, &m.d);
    let two = lit::<I>(2);
    let na = ta.clone() * d.clone() * d.clone() - tb.clone() * c.clone() * d.clone()
        + tc.clone() * c.clone() * c.clone();
    let nb = -(two.clone() * ta.clone() * b.clone() * d.clone())
        + tb.clone() * (a.clone() * d.clone() + b.clone() * c.clone())
        - two * tc.clone() * a.clone() * c.clone();
    let nc = ta * b.clone() * b.clone() - tb * a.clone() * b.clone() + tc * a.clone() * a.clone();
    TauExact::new(na, nb, nc).expect("Möbius image of a CM point is a CM point")
}

/// `M(τ) = (aτ + b)/(cτ + d)`; the determinant of `M` must be positive.
pub fn moebius<I: Int>(m: &RatMatrix2<I>, t: &TauExact<I>) -> TauExact<I> {
    let (_, _, integral) = m.primitive_integral();
    moebius_int(&integral, t)
}

/// `φ_u : C/source → C/target`, `z ↦ uz`, with `degree = [target : u·source]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isogeny<I: Int = BigInt> {
    pub multiplier: QuadElement<I>,
    pub source: Lattice<I>,
    pub target: Lattice<I>,
    pub degree: I,
    /// The primitive integral matrix `M̃` the isogeny was built from.
    pub integral_matrix: IntMatrix2<I>,
}

/// Index of `u·L1` in `L2`.
pub fn lattice_index<I: Int>(u: &QuadElement<I>, l1: &Lattice<I>, l2: &Lattice<I>) -> Result<I> {
    if u.is_zero() {
        return Err(Error::ZeroMultiplier);
    }
    let (g1, g2) = l1.generators();
    let (p1, q1) = l2.coordinates(&(u * g1))?;
    let (p2, q2) = l2.coordinates(&(u * g2))?;
    if [&p1, &q1, &p2, &q2].iter().any(|v| !v.is_integer()) {
        return Err(Error::NotASublattice);
    }
    Ok((p1 * q2 - p2 * q1).to_integer().abs())
}

/// Isogeny `E_{M(τ)} → E_τ` of odd degree for `M ∈ G`.
pub fn odd_isogeny<I: Int>(m: &RatMatrix2<I>, t: &TauExact<I>) -> Result<Isogeny<I>> {
    odd_isogeny_in(m, t, t.field()?)
}

/// [`odd_isogeny`] with the field of `t` already known.
pub(crate) fn odd_isogeny_in<I: Int>(
    m: &RatMatrix2<I>,
    t: &TauExact<I>,
    field: SquarefreeD<I>,
) -> Result<Isogeny<I>> {
    m.check_in_g()?;
    let (_, _, mt) = m.primitive_integral();
    let image = moebius_int(&mt, t);
    let target = t.lattice_in(&field)?;
    let source = image.lattice_in(&field)?;
    let tau = target.generators().0.clone();
    let multiplier = &tau.scale(&Ratio::from_integer(mt.c.clone()))
        + &QuadElement::integer(mt.d.clone(), field);
    let degree = mt.det();
    if degree.is_even() {
        return Err(Error::Invariant(format!("isogeny from {m} has even degree {degree}")));
    }
    let index = lattice_index(&multiplier, &source, &target)?;
    if index != degree {
        return Err(Error::Invariant(format!(
            "degree {degree} disagrees with lattice index {index}"
        )));
    }
    Ok(Isogeny {
        multiplier,
        source,
        target,
        degree,
        integral_matrix: mt,
    })
}

/// Whether `M(τ)` and `τ` have the same parity; always true for `M ∈ G`.
pub fn parity_transport_check<I: Int>(m: &RatMatrix2<I>, t: &TauExact<I>) -> Result<bool> {
    m.check_in_g()?;
    Ok(moebius(m, t).parity() == t.parity())
}

/// Rejection-samples an element of `G` with numerators in `[-num_bound, num_bound]`
/// and odd denominators in `[1, den_bound]`.
pub fn random_g_matrix<I: Int, R: Rng + ?Sized>(rng: &mut R, num_bound: i64, den_bound: i64) -> RatMatrix2<I> {
    assert!(num_bound >= 1 && den_bound >= 1);
    let odd_count = (den_bound + 1) / 2;
    loop {
        let mut entry = || {
            let n = rng.random_range(-num_bound..=num_bound);
            let q = 2 * rng.random_range(0..odd_count) + 1;
            Ratio::new(lit::<I>(n), lit::<I>(q))
        };
        let m = RatMatrix2::new(entry(), entry(), entry(), entry());
        if m.is_in_g() {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Parity;

    fn tau(a: i64, b: i64, c: i64) -> TauExact<i64> {
        TauExact::new(a, b, c).unwrap()
    }

    fn ints(a: i64, b: i64, c: i64, d: i64) -> RatMatrix2<i64> {
        RatMatrix2::from_integers(a, b, c, d)
    }

    #[test]
    fn moebius_examples() {
        let t = tau(7, 5, 3);
        assert_eq!(moebius(&RatMatrix2::identity(), &t), t);
        let img = moebius(&ints(3, 0, 0, 5), &tau(1, 0, 1));
        assert_eq!(img.coefficients(), (25, 0, 9));
        assert_eq!(img.discriminant(), -900);
        let img = moebius(&ints(1, 1, 0, 1), &tau(1, -1, 1));
        assert_eq!(img.coefficients(), (1, -3, 3));
        assert_eq!(img.discriminant(), -3);
    }

    /// Image computed by field arithmetic: (aτ + b)(cτ + d)⁻¹.
    fn moebius_by_field(m: &RatMatrix2<i64>, t: &TauExact<i64>) -> TauExact<i64> {
        let z = t.element().unwrap();
        let d = z.radicand().clone();
        let num = &z.scale(&m.a) + &QuadElement::new(m.b, Ratio::from_integer(0), d.clone());
        let den = &z.scale(&m.c) + &QuadElement::new(m.d, Ratio::from_integer(0), d);
        TauExact::from_element(&(&num * &den.inverse().unwrap())).unwrap()
    }

    #[test]
    fn moebius_matches_field_arithmetic() {
        let m = RatMatrix2::new(Ratio::new(3, 5), Ratio::new(-1, 3), Ratio::new(2, 7), Ratio::new(1, 1));
        for t in [tau(1, 0, 1), tau(1, -1, 1), tau(3, 1, 5), tau(4, -4, 13)] {
            assert_eq!(moebius(&m, &t), moebius_by_field(&m, &t));
        }
    }

    #[test]
    fn membership_in_g() {
        assert!(ints(3, 0, 0, 5).is_in_g());
        assert!(matches!(ints(2, 0, 0, 1).check_in_g(), Err(Error::NotInG(_))));
        assert!(matches!(ints(0, 1, 1, 0).check_in_g(), Err(Error::NotInG(_))));
        let half = RatMatrix2::diag(Ratio::new(1, 2), Ratio::from_integer(1));
        assert!(matches!(half.check_in_g(), Err(Error::NotInG(_))));
        let m = RatMatrix2::diag(Ratio::new(3, 5), Ratio::from_integer(1));
        assert!(m.is_in_g());
    }

    #[test]
    fn odd_isogeny_examples() {
        for t in [tau(1, 0, 1), tau(1, -1, 1), tau(3, 1, 5)] {
            assert_eq!(odd_isogeny(&ints(3, 0, 0, 5), &t).unwrap().degree, 15);
        }
        let iso = odd_isogeny(&ints(1, 1, 0, 3), &tau(1, -1, 1)).unwrap();
        assert_eq!(iso.degree, 3);
        let m = RatMatrix2::diag(Ratio::new(3, 5), Ratio::from_integer(1));
        let (n, g, mt) = m.primitive_integral();
        assert_eq!((n, g), (5, 1));
        assert_eq!(mt, IntMatrix2::new(3, 0, 0, 5));
        let iso = odd_isogeny(&m, &tau(1, 0, 1)).unwrap();
        assert_eq!(iso.degree, 15);
        assert_eq!(lattice_index(&iso.multiplier, &iso.source, &iso.target).unwrap(), 15);
    }

    #[test]
    fn odd_isogeny_divides_out_content() {
        let iso = odd_isogeny(&ints(3, 3, 0, 9), &tau(1, 0, 1)).unwrap();
        assert_eq!(iso.integral_matrix, IntMatrix2::new(1, 1, 0, 3));
        assert_eq!(iso.degree, 3);
    }

    #[test]
    fn odd_isogeny_rejects_outside_g() {
        assert!(matches!(odd_isogeny(&ints(2, 0, 0, 1), &tau(1, 0, 1)), Err(Error::NotInG(_))));
    }

    #[test]
    fn lattice_index_examples() {
        let i = tau(1, 0, 1);
        let l = i.lattice().unwrap();
        let d = l.radicand().clone();
        assert_eq!(lattice_index(&QuadElement::integer(1, d.clone()), &l, &l).unwrap(), 1);
        assert_eq!(lattice_index(&QuadElement::integer(2, d.clone()), &l, &l).unwrap(), 4);
        let l1 = tau(25, 0, 9).lattice_in(&d).unwrap();
        assert_eq!(lattice_index(&QuadElement::integer(5, d.clone()), &l1, &l).unwrap(), 15);
        assert_eq!(
            lattice_index(&QuadElement::integer(1, d.clone()), &l1, &l),
            Err(Error::NotASublattice)
        );
        assert_eq!(
            lattice_index(&QuadElement::integer(0, d), &l, &l),
            Err(Error::ZeroMultiplier)
        );
    }

    #[test]
    fn parity_transport_examples() {
        assert!(parity_transport_check(&ints(3, 0, 0, 5), &tau(1, 0, 1)).unwrap());
        assert!(parity_transport_check(&ints(1, 1, 0, 3), &tau(1, -1, 1)).unwrap());
        assert!(parity_transport_check(&RatMatrix2::identity(), &tau(3, 1, 5)).unwrap());
        assert_eq!(moebius(&ints(1, 1, 0, 3), &tau(1, -1, 1)).parity(), Parity::Odd);
    }

    #[test]
    fn random_matrices_are_in_g() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let m: RatMatrix2<i64> = random_g_matrix(&mut rng, 40, 15);
            assert!(m.is_in_g());
            assert!(m.entries().iter().all(|e| e.denom() % 2 == 1 && *e.denom() <= 15));
        }
    }
}
