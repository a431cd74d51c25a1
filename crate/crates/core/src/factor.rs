//! Integer factorization for desk-scale inputs.
//!
//! Trial division up to 10⁶ followed by a deterministic Miller-Rabin test on
//! the cofactor. A composite cofactor left after trial division has at most
//! two prime factors (inputs are capped at 10¹⁸), which Pollard-Brent splits.

use num_traits::One;

use crate::num::Int;
use crate::{Error, Result};

/// Largest absolute value accepted by [`FactoredInt::of`].
pub const MAX_FACTORABLE: u64 = 1_000_000_000_000_000_000;

const TRIAL_BOUND: u64 = 1_000_000;

/// A nonzero integer stored as `sign · ∏ p^e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactoredInt {
    sign: i8,
    factors: Vec<(u64, u32)>,
}

impl FactoredInt {
    pub fn of<I: Int>(n: &I) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::Zero);
        }
        let magnitude = n
            .abs()
            .to_u64()
            .filter(|&m| m <= MAX_FACTORABLE)
            .ok_or_else(|| Error::TooLarge(n.to_string()))?;
        Ok(Self {
            sign: if n.is_negative() { -1 } else { 1 },
            factors: factor_u64(magnitude),
        })
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Prime-exponent pairs, primes strictly increasing.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Number of distinct prime divisors.
    pub fn num_primes(&self) -> usize {
        self.factors.len()
    }

    pub fn magnitude(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }

    pub fn value<I: Int>(&self) -> I {
        let m = I::from_u64(self.magnitude()).expect("magnitude fits");
        if self.sign < 0 {
            -m
        } else {
            m
        }
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Writes `|n| = root² · core` with `core` squarefree.
    pub fn square_decomposition(&self) -> (u64, u64) {
        let mut core = 1u64;
        let mut root = 1u64;
        for &(p, e) in &self.factors {
            if e % 2 == 1 {
                core *= p;
            }
            root *= p.pow(e / 2);
        }
        (core, root)
    }

    /// The full prime power `p^e` for every prime selected by `mask`
    /// (bit `i` selects the `i`-th prime), multiplied together.
    pub fn subset_product(&self, mask: u64) -> u64 {
        self.factors
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &(p, e))| p.pow(e))
            .product()
    }
}

fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut p = 5u64;
    while p <= TRIAL_BOUND && p * p <= n {
        push(p, &mut n);
        push(p + 2, &mut n);
        p += 6;
    }
    if n > 1 {
        if n < p * p || is_prime(n) {
            out.push((n, 1));
        } else if let Some(r) = exact_sqrt_u64(n) {
            out.push((r, 2));
        } else {
            let a = pollard_brent(n);
            let (a, b) = (a.min(n / a), a.max(n / a));
            out.push((a, 1));
            out.push((b, 1));
        }
    }
    out
}

fn exact_sqrt_u64(n: u64) -> Option<u64> {
    let r = num_integer::Roots::sqrt(&n);
    (r * r == n).then_some(r)
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A nontrivial factor of the odd composite `n`.
fn pollard_brent(n: u64) -> u64 {
    use num_integer::Integer;
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        while g.is_one() {
            x = f(x);
            y = f(f(y));
            g = x.abs_diff(y).gcd(&n);
        }
        if g != n {
            return g;
        }
    }
    unreachable!("Pollard rho always finds a factor of a composite")
}
