//! Quadratic character arithmetic over the prime field F_p.
//!
//! Everything here is a pure function of its arguments. The quartic sum
//! [`quartic_char_sum`] is an O(p) direct summation meant for verification at
//! small and moderate p, not for hot loops.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Witnesses making Miller-Rabin deterministic for every `n < 3.3 * 10^24`.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for all 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &MR_WITNESSES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES {
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

/// An odd prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 3 && is_prime(p) {
            Ok(PrimeModulus(p))
        } else {
            Err(Error::NotOddPrime(p))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// Reduce any integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, a: i128) -> u64 {
        a.rem_euclid(self.0 as i128) as u64
    }
}

impl TryFrom<u64> for PrimeModulus {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        PrimeModulus::new(p)
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Legendre symbol `(a | p)` via Euler's criterion.
pub fn legendre(a: i128, p: PrimeModulus) -> i8 {
    let m = p.get();
    let a = p.reduce(a);
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (m - 1) / 2, m) == 1 {
        1
    } else {
        -1
    }
}

/// Legendre symbol `(a | p)` via the quadratic reciprocity (Jacobi) ladder.
/// Agrees with [`legendre`] everywhere; used as a faster path and a cross-check.
pub fn legendre_reciprocity(a: i128, p: PrimeModulus) -> i8 {
    let mut n = p.get();
    let mut a = p.reduce(a);
    let mut sign = 1i8;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// All Legendre symbols `(k | p)` for `k` in `[0, p)`.
pub fn legendre_table(p: PrimeModulus) -> Vec<i8> {
    let m = p.get();
    let mut table = vec![-1i8; m as usize];
    table[0] = 0;
    for k in 1..=(m - 1) / 2 {
        table[mul_mod(k, k, m) as usize] = 1;
    }
    table
}

/// `|sum_k e^{2 pi i j k / p} (k|p) - i^{(p-1)^2/4} sqrt(p) (j|p)|`,
/// evaluated in double precision.
pub fn gauss_sum_residual(p: PrimeModulus, j: i128) -> f64 {
    let m = p.get();
    let j = p.reduce(j);
    let table = legendre_table(p);
    let mut sum = Complex64::new(0.0, 0.0);
    for (k, &chi) in table.iter().enumerate() {
        if chi == 0 {
            continue;
        }
        // Reduce the phase exactly before converting to an angle.
        let phase = mul_mod(j, k as u64, m) as f64 / m as f64;
        sum += Complex64::from_polar(chi as f64, 2.0 * PI * phase);
    }
    let half = ((m - 1) / 2) as u128;
    let unit = match (half * half) % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    let predicted = unit * (m as f64).sqrt() * legendre(j as i128, p) as f64;
    (sum - predicted).norm()
}

/// The quartic character sum `L(a,b,c)` split into main and error terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuarticSumResult {
    pub value: i64,
    pub is_square_case: bool,
    /// `p` when `x(x-a)(x-b)(x-c)` is a square in F_p[x], else 0.
    pub main_term: i64,
    pub error_term: i64,
}

/// Whether `x(x-a)(x-b)(x-c)` is a square in F_p[x], decided by the three
/// ways its roots can pair up.
pub fn is_square_polynomial(a: i128, b: i128, c: i128, p: PrimeModulus) -> bool {
    let (a, b, c) = (p.reduce(a), p.reduce(b), p.reduce(c));
    (a == c && b == 0) || (b == a && c == 0) || (c == b && a == 0)
}

/// `L(a,b,c) = sum_{x in F_p} ((x(x-a)(x-b)(x-c)) | p)` by direct summation.
pub fn quartic_char_sum(a: i128, b: i128, c: i128, p: PrimeModulus) -> QuarticSumResult {
    let m = p.get();
    let (a, b, c) = (p.reduce(a), p.reduce(b), p.reduce(c));
    let mut value = 0i64;
    for x in 0..m {
        let f1 = (x + m - a) % m;
        let f2 = (x + m - b) % m;
        let f3 = (x + m - c) % m;
        let prod = mul_mod(mul_mod(x, f1, m), mul_mod(f2, f3, m), m);
        value += legendre(prod as i128, p) as i64;
    }
    let is_square_case = is_square_polynomial(a as i128, b as i128, c as i128, p);
    let main_term = if is_square_case { m as i64 } else { 0 };
    QuarticSumResult {
        value,
        is_square_case,
        main_term,
        error_term: value - main_term,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn small_odd_primes(limit: u64) -> Vec<PrimeModulus> {
        (3..=limit).filter(|&n| is_prime(n)).map(pm).collect()
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..5000u64 {
            let trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), trial, "n = {n}");
        }
    }

    #[test]
    fn primality_large_cases() {
        assert!(is_prime(18_446_744_073_709_551_557)); // largest 64-bit prime
        assert!(!is_prime(18_446_744_073_709_551_615));
        // strong pseudoprime to bases 2..=37 below 2^64 would be a counterexample;
        // these Carmichael numbers must be rejected
        assert!(!is_prime(3_215_031_751));
        assert!(!is_prime(561));
        assert!(!is_prime(3_825_123_056_546_413_051));
    }

    #[test]
    fn modulus_rejects_non_odd_primes() {
        for bad in [0, 1, 2, 4, 9, 15, 21] {
            assert!(matches!(PrimeModulus::new(bad), Err(Error::NotOddPrime(_))));
        }
        assert_eq!(PrimeModulus::new(7).unwrap().get(), 7);
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(0, pm(7)), 0);
        assert_eq!(legendre(2, pm(7)), 1);
        assert_eq!(legendre(3, pm(7)), -1);
        assert_eq!(legendre(-1, pm(7)), -1);
        assert_eq!(legendre(-1, pm(5)), 1);
        assert_eq!(legendre(14, pm(7)), 0);
    }

    #[test]
    fn legendre_matches_squares_listing() {
        for p in small_odd_primes(101) {
            let m = p.get();
            let squares: Vec<u64> = (1..m).map(|x| x * x % m).collect();
            for a in 0..m {
                let expected = if a == 0 {
                    0
                } else if squares.contains(&a) {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre(a as i128, p), expected);
            }
        }
    }

    #[test]
    fn multiplicativity_and_euler_consistency() {
        for p in small_odd_primes(101) {
            let m = p.get();
            let table = legendre_table(p);
            for a in 0..m {
                let euler = pow_mod(a, (m - 1) / 2, m);
                let l = legendre(a as i128, p);
                let as_residue = match l {
                    0 => 0,
                    1 => 1,
                    _ => m - 1,
                };
                assert_eq!(euler, as_residue);
                assert_eq!(table[a as usize], l);
                assert_eq!(legendre_reciprocity(a as i128, p), l);
                for b in 0..m {
                    assert_eq!(
                        legendre((a * b) as i128, p),
                        l * legendre(b as i128, p),
                        "p={m} a={a} b={b}"
                    );
                }
            }
        }
    }

    #[test]
    fn gauss_sum_examples() {
        assert!(gauss_sum_residual(pm(5), 0) < 1e-9);
        assert!(gauss_sum_residual(pm(5), 1) < 1e-9);
        assert!(gauss_sum_residual(pm(23), 7) < 1e-6);
    }

    #[test]
    fn gauss_sum_all_small_primes() {
        for p in small_odd_primes(101) {
            for j in 0..p.get() as i128 {
                assert!(gauss_sum_residual(p, j) < 1e-6 * p.get() as f64);
            }
        }
    }

    #[test]
    fn quartic_sum_root_structure() {
        for p in small_odd_primes(31) {
            let m = p.get() as i64;
            assert_eq!(quartic_char_sum(0, 0, 0, p).value, m - 1);
            for a in 1..m as i128 {
                let r = quartic_char_sum(a, 0, a, p);
                assert!(r.is_square_case);
                assert_eq!(r.value, m - 2);
                assert_eq!(r.error_term, -2);
            }
        }
    }

    #[test]
    fn quartic_sum_small_example() {
        let r = quartic_char_sum(1, 2, 3, pm(7));
        // x(x-1)(x-2)(x-3) for x = 0..7 -> products 0,0,0,0,24,120,360
        let direct: i64 = [0i128, 0, 0, 0, 24, 120, 360]
            .iter()
            .map(|&v| legendre(v, pm(7)) as i64)
            .sum();
        assert_eq!(r.value, direct);
        assert!(!r.is_square_case);
        assert!((r.value.abs() as f64) <= 3.0 * 7f64.sqrt());
    }

    #[test]
    fn square_classification_examples() {
        assert!(is_square_polynomial(0, 0, 0, pm(13)));
        assert!(is_square_polynomial(3, 0, 3, pm(11)));
        assert!(!is_square_polynomial(1, 2, 3, pm(7)));
    }

    /// Expand x(x-a)(x-b)(x-c) and search for a monic quadratic whose square
    /// equals it.
    fn square_by_expansion(a: u64, b: u64, c: u64, m: u64) -> bool {
        let e1 = (a + b + c) % m;
        let e2 = (a * b + a * c + b * c) % m;
        let e3 = a * b % m * c % m;
        // x^4 - e1 x^3 + e2 x^2 - e3 x
        let target = [0, (m - e3) % m, e2, (m - e1) % m];
        for u in 0..m {
            for v in 0..m {
                // (x^2 + u x + v)^2 = x^4 + 2u x^3 + (u^2 + 2v) x^2 + 2uv x + v^2
                let sq = [
                    v * v % m,
                    2 * u * v % m,
                    (u * u + 2 * v) % m,
                    2 * u % m,
                ];
                if sq == target {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn square_classification_matches_expansion() {
        for p in small_odd_primes(11) {
            let m = p.get();
            for a in 0..m {
                for b in 0..m {
                    for c in 0..m {
                        assert_eq!(
                            is_square_polynomial(a as i128, b as i128, c as i128, p),
                            square_by_expansion(a, b, c, m),
                            "p={m} ({a},{b},{c})"
                        );
                    }
                }
            }
        }
    }
}
