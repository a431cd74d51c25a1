use cmparity::{
    count_saturated_below_sqrt, enumerate_real_odd_cm, is_real_j, saturated_divisors, t_representative,
    Branch, FactoredInt, Parity, TPoint,
};
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn brute_saturated(n: i64) -> Vec<i64> {
    let m = n.abs();
    let mut out = Vec::new();
    let mut r = 1;
    while r * r <= m {
        if m % r == 0 {
            for s in [r, m / r] {
                if s.gcd(&(m / s)) == 1 && !out.contains(&s) {
                    out.push(s);
                }
            }
        }
        r += 1;
    }
    out.sort_unstable();
    out
}

#[test]
fn saturated_divisor_structure() {
    for abs in 2..=10_000i64 {
        for n in [abs, -abs] {
            let sat = saturated_divisors(&n).unwrap();
            let primes = FactoredInt::of(&n).unwrap().num_primes();
            assert_eq!(sat.len(), 1 << primes, "n={n}");
            assert_eq!(sat, brute_saturated(n));
            let mut flipped: Vec<i64> = sat.iter().map(|r| abs / r).collect();
            flipped.sort_unstable();
            assert_eq!(flipped, sat);
        }
    }
}

#[test]
fn disjoint_subsets_multiply() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..2000 {
        let n: i64 = rng.random_range(2..=1_000_000);
        let f = FactoredInt::of(&n).unwrap();
        let k = f.num_primes();
        let s1: u64 = rng.random_range(0..1u64 << k);
        let s2: u64 = rng.random_range(0..1u64 << k) & !s1;
        let (r1, r2) = (f.subset_product(s1), f.subset_product(s2));
        assert_eq!(f.subset_product(s1 | s2), r1 * r2);
        assert_eq!(r1.gcd(&r2), 1);
    }
}

#[test]
fn counts_below_sqrt() {
    for n in (-10_000..=-3i64).filter(|n| n.rem_euclid(4) == 1) {
        let primes = FactoredInt::of(&n).unwrap().num_primes();
        assert_eq!(count_saturated_below_sqrt(&n).unwrap(), 1 << (primes - 1), "n={n}");
    }
}

#[test]
fn enumeration_properties_down_to_minus_999() {
    for disc in (-999..=-3i64).filter(|d| d.rem_euclid(4) == 1) {
        let pts = enumerate_real_odd_cm(&disc).unwrap();
        let primes = FactoredInt::of(&disc).unwrap().num_primes();
        assert_eq!(pts.len(), 1 << (primes - 1), "D={disc}");
        assert!(pts.windows(2).all(|w| w[0].beta < w[1].beta));
        for p in &pts {
            assert_eq!(p.tau.discriminant(), disc);
            assert_eq!(p.tau.parity(), Parity::Odd);
            assert!(p.j_estimate < 1728.0);
            assert!(is_real_j(&p.tau));
            let rep: TPoint = t_representative(&p.tau).unwrap();
            let want = (disc.abs() as f64).sqrt() / (2.0 * p.beta as f64);
            assert_eq!(rep.branch, Branch::T2);
            assert!((rep.t - want).abs() < 1e-9, "D={disc} β={}: {} vs {want}", p.beta, rep.t);
        }
        let js: Vec<f64> = pts.iter().map(|p| p.j_estimate).collect();
        for (i, a) in js.iter().enumerate() {
            for b in &js[i + 1..] {
                assert_ne!(a, b, "D={disc}");
            }
        }
    }
}
