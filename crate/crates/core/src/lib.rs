//! Parity of imaginary quadratic orders and CM points, odd-degree isogenies
//! between CM lattices, and the real CM j-invariants of odd discriminant.
//!
//! Exact types are generic over an integer type (`BigInt` by default) and
//! numerical routines over a float type (`f64` by default); the aliases
//! below fix the common concrete choices.

pub mod cm;
pub mod density;
pub mod enumeration;
mod error;
pub mod factor;
pub mod isogeny;
pub mod modular;
pub mod num;
pub mod quadratic;

pub use cm::{
    halfint_membership, is_maximal_halfint, lattice_of_tau, multiplier_ring, order_of_tau, parity_of_tau,
    tau_from_beta, BetaPoint, Lattice, QuadElement, TauExact,
};
pub use density::{
    emit, sample_complex, sample_complex_with, sample_even, sample_odd, CoverageReport, DensityConfig,
    DensityMode, EmitFormat, Sample, SampleLabel,
};
pub use enumeration::{
    count_saturated_below_sqrt, enumerate_real_odd_cm, saturated_divisors, CMClassPoint, EnumerationSummary,
};
pub use error::{Error, Result};
pub use factor::FactoredInt;
pub use isogeny::{
    lattice_index, moebius, odd_isogeny, parity_transport_check, random_g_matrix, IntMatrix2, Isogeny,
    RatMatrix2,
};
pub use modular::{
    axis_curve, f_curve, is_real_j, is_real_j_numeric, j_minus_1728, j_numeric, reduce_fundamental,
    t_representative, Branch, TPoint, UHPoint,
};
pub use num::{Int, Scalar};
pub use quadratic::{CanonicalForm, Parity, QuadOrder, SquarefreeD, TraceLattice};

/// Arbitrary-precision integer used by default throughout.
pub type Integer = num_bigint::BigInt;
/// Arbitrary-precision rational.
pub type Rational = num_rational::BigRational;
/// Default floating point type.
pub type Real = f64;
pub type Complex = num_complex::Complex<Real>;

pub type QuadOrder64 = QuadOrder<i64>;
pub type TauExact64 = TauExact<i64>;
pub type RatMatrix64 = RatMatrix2<i64>;
pub type UHPoint32 = UHPoint<f32>;
