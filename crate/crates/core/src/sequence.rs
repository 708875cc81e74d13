//! Generalized Fekete sequences, their Littlewood variants, and exact
//! autocorrelation-based norms.
//!
//! For a coefficient sequence `f_0 .. f_{t-1}` with aperiodic autocorrelations
//! `c_u = sum_j f_j f_{j+u}`, the fourth power of the L4 norm on the unit
//! circle is `c_0^2 + 2 sum_{u>=1} c_u^2`. All norms returned here are exact
//! integers.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::character::{legendre, legendre_table, PrimeModulus};
use crate::error::{Error, Result};

/// Largest length accepted by the quadruple-sum oracle [`char_sum_l4`].
pub const CHAR_SUM_MAX_T: usize = 64;

/// Rounding residual above which the spectral kernel reports failure.
pub const FAST_KERNEL_TOLERANCE: f64 = 1e-3;

/// The triple `(p, r, t)` defining `f_p^(r,t)` and `g_p^(r,t)`.
///
/// `r` may be any integer; it is only reduced mod `p` when a Legendre symbol
/// is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeketeSpec {
    pub p: PrimeModulus,
    pub r: i64,
    pub t: usize,
}

impl FeketeSpec {
    pub fn new(p: u64, r: i64, t: usize) -> Result<Self> {
        let p = PrimeModulus::new(p)?;
        if t == 0 {
            return Err(Error::EmptySequence);
        }
        Ok(FeketeSpec { p, r, t })
    }
}

/// A polynomial coefficient vector over `{-1, 0, +1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientSequence {
    coeffs: Vec<i8>,
    is_littlewood: bool,
}

impl CoefficientSequence {
    pub fn new(coeffs: Vec<i8>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptySequence);
        }
        if let Some((index, &value)) = coeffs.iter().enumerate().find(|(_, v)| v.abs() > 1) {
            return Err(Error::BadCoefficient { index, value });
        }
        let is_littlewood = coeffs.iter().all(|&v| v != 0);
        Ok(CoefficientSequence {
            coeffs,
            is_littlewood,
        })
    }

    pub fn coeffs(&self) -> &[i8] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True iff every coefficient is `+1` or `-1`.
    pub fn is_littlewood(&self) -> bool {
        self.is_littlewood
    }

    pub fn into_inner(self) -> Vec<i8> {
        self.coeffs
    }
}

/// Aperiodic autocorrelations `c_0 .. c_{t-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutocorrelationProfile {
    pub values: Vec<i64>,
}

impl AutocorrelationProfile {
    /// `c_0^2 + 2 sum_{u>=1} c_u^2`.
    pub fn l4_norm_pow4(&self) -> u128 {
        let mut iter = self.values.iter().map(|&c| (c as i128 * c as i128) as u128);
        let head = iter.next().unwrap_or(0);
        head + 2 * iter.sum::<u128>()
    }
}

/// Which autocorrelation routine computes the profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Kernel {
    Naive,
    #[default]
    Fast,
}

/// Coefficients `(j + r | p)` for `0 <= j < t`.
pub fn fekete_coeffs(spec: &FeketeSpec) -> CoefficientSequence {
    let m = spec.p.get();
    let coeffs: Vec<i8> = if spec.t as u64 >= m {
        let table = legendre_table(spec.p);
        let start = spec.p.reduce(spec.r as i128);
        (0..spec.t as u64)
            .map(|j| table[((start + j % m) % m) as usize])
            .collect()
    } else {
        (0..spec.t as i128)
            .map(|j| legendre(j + spec.r as i128, spec.p))
            .collect()
    };
    CoefficientSequence::new(coeffs).expect("legendre values lie in {-1,0,1} and t >= 1")
}

/// Replace every zero coefficient by `+1`.
pub fn littlewoodize(seq: &CoefficientSequence) -> CoefficientSequence {
    CoefficientSequence {
        coeffs: seq
            .coeffs
            .iter()
            .map(|&v| if v == 0 { 1 } else { v })
            .collect(),
        is_littlewood: true,
    }
}

/// `g_p^(r,t)`: the generalized Fekete sequence with zeros replaced by `+1`.
pub fn littlewood_coeffs(spec: &FeketeSpec) -> CoefficientSequence {
    littlewoodize(&fekete_coeffs(spec))
}

/// Direct O(t^2) autocorrelation.
pub fn autocorrelation_naive(seq: &CoefficientSequence) -> AutocorrelationProfile {
    let f = &seq.coeffs;
    let t = f.len();
    assert!(t <= i32::MAX as usize, "sequence too long for 32-bit lag sums");
    let values = (0..t)
        .map(|u| {
            f[..t - u]
                .iter()
                .zip(&f[u..])
                .map(|(&a, &b)| (a * b) as i32)
                .sum::<i32>() as i64
        })
        .collect();
    AutocorrelationProfile { values }
}

struct SpectralPlan {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

fn spectral_plan(size: usize) -> SpectralPlan {
    let mut planner = FftPlanner::new();
    SpectralPlan {
        forward: planner.plan_fft_forward(size),
        inverse: planner.plan_fft_inverse(size),
    }
}

/// O(t log t) autocorrelation through the power spectrum, zero-padded to
/// the next power of two `>= 2t - 1`.
///
/// Fails with [`Error::Precision`] if any lag lands further than
/// [`FAST_KERNEL_TOLERANCE`] from an integer.
pub fn autocorrelation_fast(seq: &CoefficientSequence) -> Result<AutocorrelationProfile> {
    let t = seq.len();
    let size = (2 * t - 1).next_power_of_two();
    let plan = spectral_plan(size);
    let mut buf: Vec<Complex64> = seq
        .coeffs
        .iter()
        .map(|&v| Complex64::new(v as f64, 0.0))
        .chain(std::iter::repeat(Complex64::new(0.0, 0.0)))
        .take(size)
        .collect();
    plan.forward.process(&mut buf);
    for z in buf.iter_mut() {
        *z = Complex64::new(z.norm_sqr(), 0.0);
    }
    plan.inverse.process(&mut buf);
    let scale = 1.0 / size as f64;
    let mut values = Vec::with_capacity(t);
    for (lag, z) in buf.iter().take(t).enumerate() {
        let x = z.re * scale;
        let rounded = x.round();
        let residual = (x - rounded).abs();
        if residual >= FAST_KERNEL_TOLERANCE || !residual.is_finite() {
            return Err(Error::Precision { lag, residual });
        }
        values.push(rounded as i64);
    }
    Ok(AutocorrelationProfile { values })
}

pub fn autocorrelation(seq: &CoefficientSequence, kernel: Kernel) -> Result<AutocorrelationProfile> {
    match kernel {
        Kernel::Naive => Ok(autocorrelation_naive(seq)),
        Kernel::Fast => autocorrelation_fast(seq),
    }
}

/// `||f||_4^4` exactly, via the direct autocorrelation.
pub fn l4_norm_pow4(seq: &CoefficientSequence) -> u128 {
    autocorrelation_naive(seq).l4_norm_pow4()
}

/// `||f||_4^4` with an explicit choice of autocorrelation kernel.
pub fn l4_norm_pow4_with(seq: &CoefficientSequence, kernel: Kernel) -> Result<u128> {
    Ok(autocorrelation(seq, kernel)?.l4_norm_pow4())
}

/// `||f||_2^2 = sum_j f_j^2`.
pub fn l2_norm_pow2(seq: &CoefficientSequence) -> u64 {
    seq.coeffs.iter().filter(|&&v| v != 0).count() as u64
}

/// Merit factor from precomputed norms.
pub fn merit_factor_from_norms(l2_pow2: u64, l4_pow4: u128) -> Result<f64> {
    let l2_pow4 = l2_pow2 as u128 * l2_pow2 as u128;
    if l4_pow4 <= l2_pow4 {
        return Err(Error::DegenerateMeritFactor);
    }
    Ok(l2_pow4 as f64 / (l4_pow4 - l2_pow4) as f64)
}

/// `||f||_2^4 / (||f||_4^4 - ||f||_2^4)`.
pub fn merit_factor(seq: &CoefficientSequence) -> Result<f64> {
    merit_factor_from_norms(l2_norm_pow2(seq), l4_norm_pow4(seq))
}

/// `||f_p^(r,t)||_4^4` as the constrained quadruple character sum
/// `sum_{j1+j2=j3+j4} ((j1+r)(j2+r)(j3+r)(j4+r) | p)`.
///
/// Independent of the autocorrelation path; limited to `t <= 64`.
pub fn char_sum_l4(spec: &FeketeSpec) -> Result<i64> {
    let t = spec.t;
    if t > CHAR_SUM_MAX_T {
        return Err(Error::OutOfScale {
            what: "t",
            value: t as u64,
            limit: CHAR_SUM_MAX_T as u64,
        });
    }
    let m = spec.p.get();
    let table = legendre_table(spec.p);
    // (j + r) mod p for each index
    let shifted: Vec<u64> = (0..t as i128)
        .map(|j| spec.p.reduce(j + spec.r as i128))
        .collect();
    let mut total = 0i64;
    for j1 in 0..t {
        for j2 in 0..t {
            let s = j1 + j2;
            let left = shifted[j1] as u128 * shifted[j2] as u128 % m as u128;
            for j3 in s.saturating_sub(t - 1)..t.min(s + 1) {
                let j4 = s - j3;
                let right = shifted[j3] as u128 * shifted[j4] as u128 % m as u128;
                total += table[(left * right % m as u128) as usize] as i64;
            }
        }
    }
    Ok(total)
}

/// `sum_{n in Z} max(0, t - |n| m)^2`, the L4 floor for m-periodic
/// Littlewood sequences of length t.
pub fn periodic_lower_bound(t: u64, m: u64) -> u128 {
    assert!(t >= 1 && m >= 1, "t and m must be positive");
    let mut total = (t as u128) * (t as u128);
    let mut n = 1u64;
    while n.saturating_mul(m) < t {
        let d = (t - n * m) as u128;
        total += 2 * d * d;
        n += 1;
    }
    total
}
