//! Saturated divisors and the real CM j-invariants of an odd discriminant.
//!
//! A divisor `r` of `n` is saturated when `gcd(r, n/r) = 1`. For `D < 0`,
//! `D ≡ 1 (mod 4)`, the real j-invariants of CM curves with endomorphism
//! ring of discriminant `D` are exactly `j(1/2 + √D/(2β))` for the positive
//! saturated divisors `β < √|D|`.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::cm::{BetaPoint, TauExact};
use crate::modular::{j_numeric, UHPoint};
use crate::num::{mod4, Int};
use crate::quadratic::Parity;
use crate::{Error, FactoredInt, Result};

/// Positive saturated divisors of `n`, ascending.
pub fn saturated_divisors<I: Int>(n: &I) -> Result<Vec<I>> {
    let f = FactoredInt::of(n)?;
    let mut out: Vec<u64> = (0..1u64 << f.num_primes()).map(|mask| f.subset_product(mask)).collect();
    out.sort_unstable();
    Ok(out.into_iter().map(|r| I::from_u64(r).expect("divisor fits")).collect())
}

fn check_odd_negative<I: Int>(n: &I) -> Result<()> {
    if !n.is_negative() || mod4(n) != 1 {
        return Err(Error::BadDiscriminant(n.to_string()));
    }
    Ok(())
}

/// Positive saturated divisors `r` of `n` with `r² < |n|`.
fn saturated_below_sqrt<I: Int>(n: &I) -> Result<Vec<I>> {
    check_odd_negative(n)?;
    let abs = n.abs();
    let below: Vec<I> = saturated_divisors(n)?
        .into_iter()
        .filter(|r| {
            // |n| ≡ 3 (mod 4) is never a square, so r² ≠ |n|
            assert!(r.clone() * r.clone() != abs);
            r.clone() * r.clone() < abs
        })
        .collect();
    let expected = 1usize << (FactoredInt::of(n)?.num_primes() - 1);
    assert_eq!(below.len(), expected, "saturated divisors of {n} below √|n|");
    Ok(below)
}

/// Count of positive saturated divisors below `√|n|`, equal to `2^(#P_n − 1)`.
pub fn count_saturated_below_sqrt<I: Int>(n: &I) -> Result<usize> {
    Ok(saturated_below_sqrt(n)?.len())
}

/// One real CM j-invariant of discriminant `D`.
#[derive(Clone, Debug, PartialEq)]
pub struct CMClassPoint<I = BigInt> {
    pub beta: I,
    pub tau: TauExact<I>,
    pub j_estimate: f64,
}

/// All real j-invariants of CM curves whose endomorphism ring has
/// discriminant `D`, sorted by `β`.
///
/// `j_estimate` is a double; it saturates to `−∞` once `π√|D|` exceeds the
/// `f64` range (around `|D| > 5·10⁴`).
pub fn enumerate_real_odd_cm<I: Int>(disc: &I) -> Result<Vec<CMClassPoint<I>>> {
    check_odd_negative(disc)?;
    let betas = saturated_below_sqrt(disc)?;
    let mut points = betas
        .into_par_iter()
        .map(|beta| {
            let bp = BetaPoint::new(disc.clone(), beta.clone())?;
            let tau = bp.tau();
            if tau.discriminant() != *disc {
                return Err(Error::Invariant(format!(
                    "saturated β={beta} gave discriminant {} instead of {disc}",
                    tau.discriminant()
                )));
            }
            debug_assert_eq!(tau.parity(), Parity::Odd);
            let j = j_numeric(UHPoint::<f64>::from_tau(&tau)).re;
            Ok(CMClassPoint {
                beta,
                tau,
                j_estimate: j,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    points.sort_by(|p, q| p.beta.cmp(&q.beta));
    if let Some(first) = points.first() {
        assert!(first.beta.is_one());
        let finite_min = points
            .iter()
            .map(|p| p.j_estimate)
            .fold(f64::INFINITY, f64::min);
        if first.j_estimate.is_finite() && first.j_estimate != finite_min {
            return Err(Error::Invariant(format!(
                "minimum j for D={disc} not attained at β=1"
            )));
        }
    }
    Ok(points)
}

/// Numerical summary of an enumeration.
#[derive(Clone, Debug, PartialEq)]
pub struct EnumerationSummary {
    pub count: usize,
    pub min_j: f64,
    pub max_j: f64,
    /// Smallest distance between two j-estimates; `None` for a single point.
    pub min_gap: Option<f64>,
    /// Whether every estimate lies in `[j((1+√D)/2), 1728)`.
    pub in_interval: bool,
}

impl EnumerationSummary {
    pub fn of<I: Int>(points: &[CMClassPoint<I>]) -> Self {
        let mut js: Vec<f64> = points.iter().map(|p| p.j_estimate).collect();
        js.sort_by(f64::total_cmp);
        let min_gap = js
            .windows(2)
            .map(|w| w[1] - w[0])
            .min_by(f64::total_cmp);
        let lower = points.first().map(|p| p.j_estimate).unwrap_or(f64::NEG_INFINITY);
        Self {
            count: js.len(),
            min_j: js.first().copied().unwrap_or(f64::NAN),
            max_j: js.last().copied().unwrap_or(f64::NAN),
            min_gap,
            in_interval: js.iter().all(|&j| j >= lower && j < 1728.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_saturated(n: i64) -> Vec<i64> {
        let m = n.abs();
        (1..=m)
            .filter(|r| m % r == 0 && num_integer::gcd(*r, m / r) == 1)
            .collect()
    }

    #[test]
    fn saturated_examples() {
        assert_eq!(saturated_divisors(&-15i64).unwrap(), vec![1, 3, 5, 15]);
        assert_eq!(saturated_divisors(&-3i64).unwrap(), vec![1, 3]);
        assert_eq!(saturated_divisors(&12i64).unwrap(), vec![1, 3, 4, 12]);
        for n in [-15, -3, 12, 360, -1155] {
            assert_eq!(saturated_divisors(&n).unwrap(), brute_saturated(n));
        }
        assert_eq!(saturated_divisors(&0i64), Err(Error::Zero));
    }

    #[test]
    fn count_below_sqrt_examples() {
        assert_eq!(count_saturated_below_sqrt(&-15i64).unwrap(), 2);
        assert_eq!(count_saturated_below_sqrt(&-3i64).unwrap(), 1);
        assert_eq!(count_saturated_below_sqrt(&-1155i64).unwrap(), 8);
        assert_eq!(
            saturated_below_sqrt(&-1155i64).unwrap(),
            vec![1, 3, 5, 7, 11, 15, 21, 33]
        );
        assert!(count_saturated_below_sqrt(&-4i64).is_err());
        assert!(count_saturated_below_sqrt(&5i64).is_err());
    }

    #[test]
    fn enumerate_minus_3() {
        let pts = enumerate_real_odd_cm(&-3i64).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].tau.coefficients(), (1, -1, 1));
        assert!(pts[0].j_estimate.abs() < 1e-6);
    }

    #[test]
    fn enumerate_minus_15_conjugates() {
        let pts = enumerate_real_odd_cm(&-15i64).unwrap();
        let betas: Vec<i64> = pts.iter().map(|p| p.beta).collect();
        assert_eq!(betas, vec![1, 3]);
        let (j1, j3) = (pts[0].j_estimate, pts[1].j_estimate);
        assert!((j1 + 191657.83).abs() < 0.01, "{j1}");
        assert!((j3 - 632.83).abs() < 0.01, "{j3}");
        // conjugate algebraic integers: integer trace and norm
        let (s, p) = (j1 + j3, j1 * j3);
        assert!((s - s.round()).abs() < 1e-3 * s.abs());
        assert!((p - p.round()).abs() < 1e-3 * p.abs());
        assert_eq!(s.round(), -191025.0);
        let summary = EnumerationSummary::of(&pts);
        assert!(summary.in_interval);
        assert_eq!(summary.min_j, j1);
    }

    #[test]
    fn enumerate_minus_1155() {
        let pts = enumerate_real_odd_cm(&BigInt::from(-1155)).unwrap();
        assert_eq!(pts.len(), 8);
        assert!(pts.iter().all(|p| p.tau.discriminant() == BigInt::from(-1155)));
        assert!(pts.iter().all(|p| p.j_estimate < 1728.0));
    }

    #[test]
    fn enumerate_rejects_bad_discriminants() {
        assert!(matches!(enumerate_real_odd_cm(&-4i64), Err(Error::BadDiscriminant(_))));
        assert!(matches!(enumerate_real_odd_cm(&5i64), Err(Error::BadDiscriminant(_))));
        assert!(matches!(enumerate_real_odd_cm(&-1i64), Err(Error::BadDiscriminant(_))));
    }
}
