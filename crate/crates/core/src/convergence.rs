//! Finite-p experiments: the five-term split of `||f_p^(r,t)||_4^4`, the
//! exponential-sum bound behind its error term, and convergence of exact
//! norms of `g_p^(r,t)` to the asymptotic model.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotic::{ratio_limit_u, LimitPoint};
use crate::character::{is_prime, PrimeModulus};
use crate::error::{Error, Result};
use crate::sequence::{
    fekete_coeffs, l4_norm_pow4_with, littlewood_coeffs, periodic_lower_bound, FeketeSpec, Kernel,
};

/// Largest `t` accepted by [`five_term_decomposition`].
pub const DECOMPOSITION_MAX_T: usize = 10_000;
/// Largest modulus accepted by [`technical_lemma_check`].
pub const LEMMA_MAX_N: u64 = 24;
/// Largest length accepted by [`technical_lemma_check`].
pub const LEMMA_MAX_T: u64 = 32;

/// Round to 15 significant digits.
pub fn round_sig15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

/// All odd primes in `[lo, hi]`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Result<Vec<u64>> {
    if lo < 3 || lo > hi || hi >= 1 << 63 {
        return Err(Error::InvalidRange { lo, hi });
    }
    Ok((lo..=hi).filter(|&n| n % 2 == 1 && is_prime(n)).collect())
}

/// Smallest odd prime `>= n`.
pub fn next_prime(n: u64) -> u64 {
    let mut k = n.max(3);
    while !is_prime(k) {
        k += 1;
    }
    k
}

fn prev_prime(n: u64) -> Option<u64> {
    (3..=n).rev().find(|&k| is_prime(k))
}

/// `count` geometrically spaced targets across `[lo, hi]`, each snapped to
/// the nearest prime above (or below, if none lies above within range).
/// Duplicates are dropped, so tight ranges give fewer primes.
pub fn prime_ladder(lo: u64, hi: u64, count: usize) -> Result<Vec<u64>> {
    if lo < 3 || lo > hi || hi >= 1 << 62 {
        return Err(Error::InvalidRange { lo, hi });
    }
    if count == 0 {
        return Err(Error::InvalidArgument("prime ladder needs at least one rung".into()));
    }
    let ratio = hi as f64 / lo as f64;
    let mut ladder: Vec<u64> = (0..count)
        .filter_map(|k| {
            let frac = if count == 1 { 0.0 } else { k as f64 / (count - 1) as f64 };
            let target = ((lo as f64) * ratio.powf(frac)).round() as u64;
            let target = target.clamp(lo, hi);
            let up = next_prime(target);
            if up <= hi {
                Some(up)
            } else {
                prev_prime(target).filter(|&q| q >= lo)
            }
        })
        .collect();
    ladder.dedup();
    Ok(ladder)
}

/// One finite-p measurement of `g_p^(r,t)` against its predicted limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub p: u64,
    pub r: i64,
    pub t: usize,
    /// Exact `||g_p^(r,t)||_4^4`.
    pub l4_pow4: u128,
    /// `l4_pow4 / t^2`
    pub ratio4: f64,
    /// `u(R, T)`
    pub limit: f64,
    pub abs_err: f64,
    pub rel_err: f64,
}

impl ExperimentRecord {
    /// Copy with every float rounded to 15 significant digits, as exported.
    pub fn rounded(&self) -> ExperimentRecord {
        ExperimentRecord {
            ratio4: round_sig15(self.ratio4),
            limit: round_sig15(self.limit),
            abs_err: round_sig15(self.abs_err),
            rel_err: round_sig15(self.rel_err),
            ..self.clone()
        }
    }
}

/// `(round(R p), max(1, round(T p)))`, rounding half away from zero.
pub fn discretize(r: f64, t: f64, p: u64) -> (i64, usize) {
    let rr = (r * p as f64).round() as i64;
    let tt = ((t * p as f64).round() as i64).max(1) as usize;
    (rr, tt)
}

/// Measure `g_p^(r,t)` at the discretization of `(R, T)` for one prime.
pub fn experiment_record(pt: &LimitPoint, p: u64, kernel: Kernel) -> Result<ExperimentRecord> {
    let (r, t) = discretize(pt.r, pt.t, p);
    let spec = FeketeSpec::new(p, r, t)?;
    let g = littlewood_coeffs(&spec);
    let l4_pow4 = l4_norm_pow4_with(&g, kernel)?;
    let ratio4 = l4_pow4 as f64 / (t as f64 * t as f64);
    let limit = ratio_limit_u(pt);
    let abs_err = (ratio4 - limit).abs();
    Ok(ExperimentRecord {
        p,
        r,
        t,
        l4_pow4,
        ratio4,
        limit,
        abs_err,
        rel_err: abs_err / limit,
    })
}

/// Exact norms along a prime ladder from `p_lo` to `p_hi`, sorted by `p`.
pub fn run_convergence(
    r: f64,
    t: f64,
    p_lo: u64,
    p_hi: u64,
    count: usize,
) -> Result<Vec<ExperimentRecord>> {
    let pt = LimitPoint::new(r, t)?;
    if count < 2 {
        return Err(Error::InvalidArgument(format!(
            "convergence runs need at least 2 primes, got {count}"
        )));
    }
    let ladder = prime_ladder(p_lo, p_hi, count)?;
    let mut records = ladder
        .par_iter()
        .map(|&p| experiment_record(&pt, p, Kernel::Fast))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|rec| rec.p);
    Ok(records)
}

/// `||f_p^(r,t)||_4^4 = A + B + C + D + E` with `A, B, C, D` in closed form
/// and `E` obtained by subtraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub p: u64,
    pub r: i64,
    pub t: usize,
    /// Exact `||f_p^(r,t)||_4^4`.
    pub l4_pow4: u128,
    /// `sum_n max(0, t - |n| p)^2`
    pub a: u128,
    pub b: u128,
    /// `sum_n max(0, t - |t - 1 + 2r - n p|)^2`
    pub c: u128,
    /// `3p * D = -2t(2t^2 + 1)`
    pub d_times_3p: i128,
    /// `3p * E`, exact
    pub e_times_3p: i128,
    pub d: f64,
    pub e_actual: f64,
    /// `E / p^2`
    pub e_normalized: f64,
}

impl DecompositionReport {
    /// `3p (A + B + C + D + E) == 3p ||f||_4^4`, in integers.
    pub fn identity_holds(&self) -> bool {
        let three_p = 3 * self.p as i128;
        three_p * (self.a + self.b + self.c) as i128 + self.d_times_3p + self.e_times_3p
            == three_p * self.l4_pow4 as i128
    }
}

/// `sum_{n in Z} max(0, t - |offset - n p|)^2`.
fn folded_square_sum(t: i128, offset: i128, p: i128) -> u128 {
    // |offset - n p| < t  <=>  n in ((offset - t)/p, (offset + t)/p)
    let lo = (offset - t).div_euclid(p);
    let hi = (offset + t).div_euclid(p) + 1;
    (lo..=hi)
        .map(|n| (t - (offset - n * p).abs()).max(0))
        .map(|k| (k * k) as u128)
        .sum()
}

pub fn five_term_decomposition(spec: &FeketeSpec) -> Result<DecompositionReport> {
    if spec.t > DECOMPOSITION_MAX_T {
        return Err(Error::OutOfScale {
            what: "t",
            value: spec.t as u64,
            limit: DECOMPOSITION_MAX_T as u64,
        });
    }
    let p = spec.p.get() as i128;
    let t = spec.t as i128;
    let r = spec.r as i128;
    let l4_pow4 = l4_norm_pow4_with(&fekete_coeffs(spec), Kernel::Fast)?;
    let a = periodic_lower_bound(spec.t as u64, spec.p.get());
    let c = folded_square_sum(t, t - 1 + 2 * r, p);
    let d_times_3p = -2 * t * (2 * t * t + 1);
    let three_p = 3 * p;
    let e_times_3p = three_p * l4_pow4 as i128 - three_p * (2 * a + c) as i128 - d_times_3p;
    let e_actual = e_times_3p as f64 / three_p as f64;
    Ok(DecompositionReport {
        p: spec.p.get(),
        r: spec.r,
        t: spec.t,
        l4_pow4,
        a,
        b: a,
        c,
        d_times_3p,
        e_times_3p,
        d: d_times_3p as f64 / three_p as f64,
        e_actual,
        e_normalized: e_actual / (p * p) as f64,
    })
}

/// Outcome of [`technical_lemma_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub n: u64,
    pub t: u64,
    pub g: f64,
    pub bound: f64,
    pub ok: bool,
}

/// `64 max(n,t)^3 (1 + ln n)^3`.
pub fn technical_lemma_bound(n: u64, t: u64) -> f64 {
    64.0 * (n.max(t) as f64).powi(3) * (1.0 + (n as f64).ln()).powi(3)
}

/// `G = sum_{a,b,c mod n} |sum_{j1+j2=j3+j4} e_a^{-j2} e_b^{j3} e_c^{j4}|` with
/// `e_k = exp(2 pi i k / n)` and all `j` in `[0, t)`, against its bound.
///
/// The inner sum is grouped by `h = j3 + j4`: for each `h` the admissible
/// `j2` are `[h - t + 1, h] ∩ [0, t)` (so that `j1 = h - j2` is in range),
/// and the `(j3, j4)` pairs are those summing to `h`.
pub fn technical_lemma_check(n: u64, t: u64) -> Result<LemmaCheck> {
    if n == 0 || n > LEMMA_MAX_N {
        return Err(Error::OutOfScale {
            what: "n",
            value: n,
            limit: LEMMA_MAX_N,
        });
    }
    if t == 0 || t > LEMMA_MAX_T {
        return Err(Error::OutOfScale {
            what: "t",
            value: t,
            limit: LEMMA_MAX_T,
        });
    }
    let (nu, tu) = (n as usize, t as usize);
    let roots: Vec<Complex64> = (0..nu)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
        .collect();
    let power = |a: usize, j: usize| roots[(a * j) % nu];
    let heights = 2 * tu - 1;

    // outer[a][h] = sum over admissible j2 of e_a^{-j2}
    let outer: Vec<Vec<Complex64>> = (0..nu)
        .map(|a| {
            let neg_a = (nu - a) % nu;
            (0..heights)
                .map(|h| {
                    let lo = h.saturating_sub(tu - 1);
                    let hi = h.min(tu - 1);
                    (lo..=hi).map(|j2| power(neg_a, j2)).sum()
                })
                .collect()
        })
        .collect();

    let mut g = 0.0;
    let mut pairs = vec![Complex64::new(0.0, 0.0); heights];
    for b in 0..nu {
        for c in 0..nu {
            pairs.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            for j3 in 0..tu {
                for j4 in 0..tu {
                    pairs[j3 + j4] += power(b, j3) * power(c, j4);
                }
            }
            for row in &outer {
                let s: Complex64 = row.iter().zip(&pairs).map(|(w, v)| w * v).sum();
                g += s.norm();
            }
        }
    }
    let bound = technical_lemma_bound(n, t);
    Ok(LemmaCheck {
        n,
        t,
        g,
        bound,
        ok: g <= bound,
    })
}

/// Checks `||g||_4^4 / t^2 >= 1 + 2(1 - p/t)^2` exactly for `t/p > 3/2`.
pub fn large_t_check(p: u64, r: i64, t: usize) -> Result<bool> {
    let modulus = PrimeModulus::new(p)?;
    if 2 * t as u128 <= 3 * p as u128 {
        return Err(Error::LengthTooShort { p, t });
    }
    let spec = FeketeSpec {
        p: modulus,
        r,
        t,
    };
    let l4 = l4_norm_pow4_with(&littlewood_coeffs(&spec), Kernel::Fast)?;
    let (tt, pp) = (t as u128, p as u128);
    // l4 / t^2 >= (t^2 + 2 (t - p)^2) / t^2
    Ok(l4 >= tt * tt + 2 * (tt - pp) * (tt - pp))
}

/// Export encodings for [`export_records`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordFormat {
    Csv,
    Json,
}

pub const CSV_HEADER: &str = "p,r,t,l4_pow4,ratio4,limit,abs_err,rel_err";

pub fn write_records<W: Write>(
    records: &[ExperimentRecord],
    format: RecordFormat,
    mut out: W,
) -> Result<()> {
    if records.is_empty() {
        return Err(Error::NoRecords);
    }
    let io = |source| Error::Io {
        path: "<stream>".into(),
        source,
    };
    match format {
        RecordFormat::Csv => {
            writeln!(out, "{CSV_HEADER}").map_err(io)?;
            for rec in records.iter().map(ExperimentRecord::rounded) {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    rec.p, rec.r, rec.t, rec.l4_pow4, rec.ratio4, rec.limit, rec.abs_err, rec.rel_err
                )
                .map_err(io)?;
            }
        }
        RecordFormat::Json => {
            let rounded: Vec<_> = records.iter().map(ExperimentRecord::rounded).collect();
            serde_json::to_writer_pretty(&mut out, &rounded)?;
            writeln!(out).map_err(io)?;
        }
    }
    out.flush().map_err(io)
}

/// Write records to `destination` as CSV or JSON.
pub fn export_records(
    records: &[ExperimentRecord],
    format: RecordFormat,
    destination: &Path,
) -> Result<()> {
    if records.is_empty() {
        return Err(Error::NoRecords);
    }
    let with_path = |source| Error::Io {
        path: destination.to_path_buf(),
        source,
    };
    let file = File::create(destination).map_err(with_path)?;
    write_records(records, format, BufWriter::new(file)).map_err(|e| match e {
        Error::Io { source, .. } => with_path(source),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::{l4_norm_pow4, CoefficientSequence};

    fn spec(p: u64, r: i64, t: usize) -> FeketeSpec {
        FeketeSpec::new(p, r, t).unwrap()
    }

    #[test]
    fn primes_examples() {
        assert_eq!(primes_in(3, 20).unwrap(), vec![3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(primes_in(90, 100).unwrap(), vec![97]);
        assert!(primes_in(25, 28).unwrap().is_empty());
        assert!(primes_in(2, 10).is_err());
        assert!(primes_in(10, 5).is_err());
    }

    #[test]
    fn ladder_is_geometric_and_prime() {
        let ladder = prime_ladder(100, 10_000, 8).unwrap();
        assert_eq!(ladder.len(), 8);
        assert_eq!(ladder[0], 101);
        assert!(ladder.windows(2).all(|w| w[0] < w[1]));
        assert!(ladder.iter().all(|&p| is_prime(p) && p <= 10_000));
        assert_eq!(prime_ladder(3, 3, 2).unwrap(), vec![3]);
    }

    #[test]
    fn rounding_is_half_away_from_zero() {
        assert_eq!(discretize(0.5, 1.0, 7), (4, 7));
        assert_eq!(discretize(-0.5, 1.0, 7), (-4, 7));
        assert_eq!(discretize(0.0, 0.001, 7), (0, 1));
    }

    /// Quadruples `j1 + j2 = j3 + j4` in `[0, t)` satisfying `keep`, counted
    /// by enumerating `(j2, j3, j4)`.
    fn count_quadruples(t: usize, keep: impl Fn(usize, usize, usize, usize) -> bool) -> u128 {
        let mut n = 0;
        for j2 in 0..t {
            for j3 in 0..t {
                for j4 in 0..t {
                    let s = j3 + j4;
                    if s >= j2 && s - j2 < t && keep(s - j2, j2, j3, j4) {
                        n += 1;
                    }
                }
            }
        }
        n
    }

    #[test]
    fn closed_forms_match_counting() {
        for &(p, r, t) in &[(3u64, 0i64, 3usize), (5, 2, 9), (7, 1, 7), (7, -3, 12), (11, 5, 16)] {
            let rep = five_term_decomposition(&spec(p, r, t)).unwrap();
            let pu = p as usize;
            let a = count_quadruples(t, |_, j2, _, j4| (j4 + pu * t - j2).is_multiple_of(pu));
            let b = count_quadruples(t, |_, j2, j3, _| (j3 + pu * t - j2).is_multiple_of(pu));
            let shift = (2 * r).rem_euclid(p as i64) as usize;
            let c = count_quadruples(t, |_, _, j3, j4| (j3 + j4 + shift).is_multiple_of(pu));
            let all = count_quadruples(t, |_, _, _, _| true) as i128;
            assert_eq!(rep.a, a);
            assert_eq!(rep.b, b);
            assert_eq!(rep.c, c);
            assert_eq!(rep.d_times_3p, -6 * all);
            assert!(rep.identity_holds());
        }
    }

    #[test]
    fn decomposition_example() {
        let rep = five_term_decomposition(&spec(7, 1, 7)).unwrap();
        assert_eq!(rep.l4_pow4, 50);
        assert_eq!((rep.a, rep.b), (49, 49));
        assert_eq!(rep.d, -66.0);
        // (t - 1 + 2r)/p = 8/7: terms n = 1, 2 give 6^2 and 1^2
        assert_eq!(rep.c, 37);
        assert_eq!(rep.e_times_3p, 21 * (50 - 49 - 49 - 37 + 66));
        assert!(matches!(
            five_term_decomposition(&spec(7, 1, 10_001)),
            Err(Error::OutOfScale { .. })
        ));
    }

    /// `E` from its defining character sum,
    /// `p^-2 sum_{a,b,c} N(a,b,c) e^{r(-a+b+c)} sum_{j} e_a^{-j2} e_b^{j3} e_c^{j4}`.
    fn error_term_from_characters(p: u64, r: i64, t: usize) -> f64 {
        use crate::character::quartic_char_sum;
        let m = p as usize;
        let modulus = PrimeModulus::new(p).unwrap();
        let unit = |k: i64| Complex64::from_polar(1.0, 2.0 * PI * k.rem_euclid(p as i64) as f64 / p as f64);
        let mut total = Complex64::new(0.0, 0.0);
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let q = quartic_char_sum(a as i128, b as i128, c as i128, modulus);
                    if q.error_term == 0 {
                        continue;
                    }
                    let mut inner = Complex64::new(0.0, 0.0);
                    for j2 in 0..t {
                        for j3 in 0..t {
                            for j4 in 0..t {
                                let s = j3 + j4;
                                if s >= j2 && s - j2 < t {
                                    let k = -(a as i64) * j2 as i64
                                        + b as i64 * j3 as i64
                                        + c as i64 * j4 as i64;
                                    inner += unit(k);
                                }
                            }
                        }
                    }
                    let phase = unit(r * (-(a as i64) + b as i64 + c as i64));
                    total += q.error_term as f64 * phase * inner;
                }
            }
        }
        assert!(total.im.abs() < 1e-6);
        total.re / (p * p) as f64
    }

    #[test]
    fn error_term_matches_character_sum() {
        for &(p, r, t) in &[(3u64, 0i64, 3usize), (5, 1, 4), (5, 2, 8), (7, 1, 7), (7, 3, 5)] {
            let rep = five_term_decomposition(&spec(p, r, t)).unwrap();
            let direct = error_term_from_characters(p, r, t);
            assert!(
                (rep.e_actual - direct).abs() < 1e-6,
                "p={p} r={r} t={t}: {} vs {direct}",
                rep.e_actual
            );
        }
    }

    /// Literal triple loop over `(j2, j3, j4)` for every `(a, b, c)`.
    fn lemma_sum_direct(n: u64, t: u64) -> f64 {
        let e = |k: i64| Complex64::from_polar(1.0, 2.0 * PI * k.rem_euclid(n as i64) as f64 / n as f64);
        let t = t as i64;
        let mut g = 0.0;
        for a in 0..n as i64 {
            for b in 0..n as i64 {
                for c in 0..n as i64 {
                    let mut s = Complex64::new(0.0, 0.0);
                    for j2 in 0..t {
                        for j3 in 0..t {
                            for j4 in 0..t {
                                let j1 = j3 + j4 - j2;
                                if (0..t).contains(&j1) {
                                    s += e(-a * j2 + b * j3 + c * j4);
                                }
                            }
                        }
                    }
                    g += s.norm();
                }
            }
        }
        g
    }

    #[test]
    fn lemma_grouping_matches_direct_loop() {
        for n in 1..=6 {
            for t in 1..=7 {
                let fast = technical_lemma_check(n, t).unwrap().g;
                let direct = lemma_sum_direct(n, t);
                assert!((fast - direct).abs() < 1e-9 * direct.max(1.0), "n={n} t={t}");
            }
        }
    }

    #[test]
    fn lemma_examples() {
        let one = technical_lemma_check(1, 1).unwrap();
        assert!((one.g - 1.0).abs() < 1e-12);
        assert_eq!(one.bound, 64.0);
        assert!(one.ok);
        assert!(technical_lemma_check(5, 5).unwrap().ok);
        assert!(technical_lemma_check(24, 32).unwrap().ok);
        assert!(technical_lemma_check(25, 1).is_err());
        assert!(technical_lemma_check(3, 33).is_err());
        assert!(technical_lemma_check(0, 3).is_err());
    }

    #[test]
    fn large_t_examples() {
        assert!(large_t_check(7, 0, 14).unwrap());
        assert!(large_t_check(11, 3, 17).unwrap());
        assert!(matches!(large_t_check(7, 0, 10), Err(Error::LengthTooShort { .. })));
        assert!(matches!(large_t_check(9, 0, 30), Err(Error::NotOddPrime(9))));
    }

    #[test]
    fn experiment_record_fields() {
        let pt = LimitPoint::new(0.25, 1.0).unwrap();
        let rec = experiment_record(&pt, 3, Kernel::Naive).unwrap();
        assert_eq!((rec.p, rec.r, rec.t), (3, 1, 3));
        let g = CoefficientSequence::new(vec![1, -1, 1]).unwrap();
        assert_eq!(rec.l4_pow4, l4_norm_pow4(&g));
        assert_eq!(rec.ratio4, rec.l4_pow4 as f64 / 9.0);
        assert_eq!(rec.limit, 7.0 / 6.0);
        assert_eq!(rec.abs_err, (rec.ratio4 - rec.limit).abs());
        assert_eq!(rec.rel_err, rec.abs_err / rec.limit);
        assert!(rec.ratio4 >= 1.0);
    }

    #[test]
    fn single_prime_run() {
        let recs = run_convergence(0.25, 1.0, 3, 3, 2).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].p, 3);
        assert!(run_convergence(0.25, 1.0, 3, 100, 1).is_err());
        assert!(run_convergence(0.25, 0.0, 3, 100, 4).is_err());
    }

    #[test]
    fn csv_export_shape() {
        let recs = run_convergence(0.25, 1.0, 3, 3, 2).unwrap();
        let mut buf = Vec::new();
        write_records(&recs, RecordFormat::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER);
        assert!(lines[1].starts_with("3,1,3,"));
        assert!(matches!(
            write_records(&[], RecordFormat::Csv, Vec::new()),
            Err(Error::NoRecords)
        ));
    }

    #[test]
    fn json_round_trip() {
        let recs = run_convergence(0.22, 1.05, 50, 400, 4).unwrap();
        let mut buf = Vec::new();
        write_records(&recs, RecordFormat::Json, &mut buf).unwrap();
        let parsed: Vec<ExperimentRecord> = serde_json::from_slice(&buf).unwrap();
        let expected: Vec<_> = recs.iter().map(ExperimentRecord::rounded).collect();
        assert_eq!(parsed, expected);
        let mut again = Vec::new();
        write_records(&parsed, RecordFormat::Json, &mut again).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn export_reports_destination() {
        let recs = run_convergence(0.25, 1.0, 3, 3, 2).unwrap();
        let bad = Path::new("/nonexistent-dir/runs.csv");
        let err = export_records(&recs, RecordFormat::Csv, bad).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/runs.csv"));
    }

    #[test]
    fn sig15_rounding() {
        assert_eq!(round_sig15(7.0 / 6.0).to_string(), "1.16666666666667");
        assert_eq!(round_sig15(0.0), 0.0);
        assert_eq!(round_sig15(123456.0), 123456.0);
    }
}
