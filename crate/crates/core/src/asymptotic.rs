//! The asymptotic L4 model for `g_p^(r,t)` as `p -> infinity` with
//! `r/p -> R` and `t/p -> T`.
//!
//! The limit of `||g||_4^4 / p^2` is
//!
//! ```text
//! Phi(R,T) = -4T^3/3 + 2 sum_n max(0, T - |n|)^2 + sum_n max(0, T - |T + 2R - n|)^2
//! ```
//!
//! and the limit of `||g||_4^4 / ||g||_2^4` is `u(R,T) = Phi(R,T) / T^2`.
//! `u` has period 1/2 in `R`, and on the box `[0,1/2] x [1/2,3/2]` it is a
//! rational function on each of six polygonal pieces `D1 .. D6`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on the minimum of `u`, the previous best ratio being `7/6`.
pub const RECORD_UPPER_BOUND: f64 = 22.0 / 19.0;

/// `(R, T)`: limiting rotation and length fractions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitPoint {
    pub r: f64,
    pub t: f64,
}

impl LimitPoint {
    pub fn new(r: f64, t: f64) -> Result<Self> {
        if !r.is_finite() {
            return Err(Error::InvalidRotationFraction(r));
        }
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidLengthFraction(t));
        }
        Ok(LimitPoint { r, t })
    }
}

/// `sum_{|n| <= ceil(T)} max(0, T - |n|)^2`
fn centered_lattice_sum(t: f64) -> f64 {
    let reach = t.ceil() as i64;
    (-reach..=reach)
        .map(|n| (t - n.abs() as f64).max(0.0).powi(2))
        .sum()
}

/// Window of `n` covering the support of `max(0, T - |x - n|)` for
/// `x = T + 2R`, i.e. `n` in `(2R, 2T + 2R)`, padded by one on each side.
fn shifted_window(pt: &LimitPoint) -> std::ops::RangeInclusive<i64> {
    let lo = (2.0 * pt.r).floor() as i64 - 1;
    let hi = (2.0 * pt.t + 2.0 * pt.r).ceil() as i64 + 1;
    lo..=hi
}

fn shifted_lattice_sum(pt: &LimitPoint) -> f64 {
    let x = pt.t + 2.0 * pt.r;
    shifted_window(pt)
        .map(|n| (pt.t - (x - n as f64).abs()).max(0.0).powi(2))
        .sum()
}

/// `Phi(R,T)`, the limit of `||g_p^(r,t)||_4^4 / p^2`.
pub fn limit_l4_normalized(pt: &LimitPoint) -> f64 {
    let t = pt.t;
    -4.0 * t * t * t / 3.0 + 2.0 * centered_lattice_sum(t) + shifted_lattice_sum(pt)
}

/// `u(R,T) = Phi(R,T) / T^2`, the limit of `||g||_4^4 / ||g||_2^4`.
pub fn ratio_limit_u(pt: &LimitPoint) -> f64 {
    limit_l4_normalized(pt) / (pt.t * pt.t)
}

/// Convenience wrapper validating `(R, T)` first.
pub fn u(r: f64, t: f64) -> Result<f64> {
    Ok(ratio_limit_u(&LimitPoint::new(r, t)?))
}

/// Analytic gradient `(du/dR, du/dT)`. Valid away from the kinks of the
/// lattice terms, where it is a one-sided derivative.
pub fn ratio_limit_gradient(pt: &LimitPoint) -> (f64, f64) {
    let t = pt.t;
    let x = t + 2.0 * pt.r;
    let reach = t.ceil() as i64;
    let d_centered: f64 = (-reach..=reach)
        .map(|n| 2.0 * (t - n.abs() as f64).max(0.0))
        .sum();
    let (mut d_shift_r, mut d_shift_t) = (0.0, 0.0);
    for n in shifted_window(pt) {
        let offset = x - n as f64;
        let k = (t - offset.abs()).max(0.0);
        if k > 0.0 {
            let s = offset.signum();
            d_shift_r += -4.0 * k * s;
            d_shift_t += 2.0 * k * (1.0 - s);
        }
    }
    let phi = limit_l4_normalized(pt);
    let phi_t = -4.0 * t * t + 2.0 * d_centered + d_shift_t;
    let t2 = t * t;
    (d_shift_r / t2, phi_t / t2 - 2.0 * phi / (t2 * t))
}

/// `R mod 1/2`, in `[0, 1/2)`.
pub fn normalize_r(r: f64) -> f64 {
    let v = r.rem_euclid(0.5);
    if v >= 0.5 {
        0.0
    } else {
        v
    }
}

/// The six pieces covering `D = [0,1/2] x [1/2,3/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    D1,
    D2,
    D3,
    D4,
    D5,
    D6,
    Outside,
}

impl Region {
    pub const PIECES: [Region; 6] = [
        Region::D1,
        Region::D2,
        Region::D3,
        Region::D4,
        Region::D5,
        Region::D6,
    ];

    /// Whether `(r, t)` satisfies this piece's inequalities, with `r`
    /// already in `[0, 1/2]`. Boundaries are inclusive up to `slack`.
    pub fn contains(self, r: f64, t: f64, slack: f64) -> bool {
        let in_box = (-slack..=0.5 + slack).contains(&r) && (0.5 - slack..=1.5 + slack).contains(&t);
        let le = |a: f64, b: f64| a <= b + slack;
        in_box
            && match self {
                Region::D1 => le(t + 2.0 * r, 1.0),
                Region::D2 => le(1.0, t + 2.0 * r) && le(t + r, 1.0),
                Region::D3 => le(1.0, t + r) && le(t, 1.0),
                Region::D4 => le(1.0, t) && le(t + r, 1.5),
                Region::D5 => le(1.5, t + r) && le(t + 2.0 * r, 2.0),
                Region::D6 => le(2.0, t + 2.0 * r),
                Region::Outside => false,
            }
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Region::D1 => "D1",
            Region::D2 => "D2",
            Region::D3 => "D3",
            Region::D4 => "D4",
            Region::D5 => "D5",
            Region::D6 => "D6",
            Region::Outside => "OUTSIDE",
        };
        f.write_str(name)
    }
}

/// Lowest-indexed piece containing the point after reducing `R` mod 1/2.
pub fn region_classify(pt: &LimitPoint) -> Region {
    let r = normalize_r(pt.r);
    if !(0.5..=1.5).contains(&pt.t) {
        return Region::Outside;
    }
    Region::PIECES
        .into_iter()
        .find(|piece| piece.contains(r, pt.t, 0.0))
        .unwrap_or(Region::Outside)
}

/// Closed form of `u` on `D4`:
/// `-4T/3 + 2 + 4(T-1)^2/T^2 + (1-2R)^2/T^2 + (2T+2R-2)^2/T^2`.
pub fn u4_closed_form(pt: &LimitPoint) -> Result<f64> {
    let (r, t) = (pt.r, pt.t);
    if !Region::D4.contains(r, t, 1e-12) {
        return Err(Error::OutsideD4 { r, t });
    }
    let t2 = t * t;
    Ok(-4.0 * t / 3.0
        + 2.0
        + 4.0 * (t - 1.0).powi(2) / t2
        + (1.0 - 2.0 * r).powi(2) / t2
        + (2.0 * t + 2.0 * r - 2.0).powi(2) / t2)
}

/// `u4((3 - 2T)/4, T) = (-8T^3 + 48T^2 - 60T + 27) / (6T^2)`.
pub fn u4_on_valley(t: f64) -> f64 {
    (-8.0 * t.powi(3) + 48.0 * t * t - 60.0 * t + 27.0) / (6.0 * t * t)
}

/// Limit on the full-length line `T = 1`: `7/6 + 8(|R| - 1/4)^2`.
pub fn full_length_limit(r: f64) -> Result<f64> {
    if r.is_nan() || r.abs() > 0.5 {
        return Err(Error::RotationOutOfRange(r));
    }
    Ok(7.0 / 6.0 + 8.0 * (r.abs() - 0.25).powi(2))
}

/// `c3 x^3 + c2 x^2 + c1 x + c0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cubic {
    pub c3: f64,
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl Cubic {
    pub const fn new(c3: f64, c2: f64, c1: f64, c0: f64) -> Self {
        Cubic { c3, c2, c1, c0 }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        ((self.c3 * x + self.c2) * x + self.c1) * x + self.c0
    }

    #[inline]
    pub fn derivative(&self, x: f64) -> f64 {
        (3.0 * self.c3 * x + 2.0 * self.c2) * x + self.c1
    }

    /// `max(1, |c3|, |c2|, |c1|, |c0|)`, the scale for residual tolerances.
    pub fn scale(&self) -> f64 {
        [1.0, self.c3.abs(), self.c2.abs(), self.c1.abs(), self.c0.abs()]
            .into_iter()
            .fold(0.0, f64::max)
    }

    /// Root on `[lo, hi]` by bisection down to adjacent floats, then up to a
    /// few Newton steps kept only while they reduce the residual and stay in
    /// the bracket.
    pub fn root_in(&self, lo: f64, hi: f64) -> Result<f64> {
        let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let (fa, fb) = (self.eval(a), self.eval(b));
        if fa == 0.0 {
            return Ok(a);
        }
        if fb == 0.0 {
            return Ok(b);
        }
        if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
            return Err(Error::NoSignChange { lo, hi });
        }
        let a_negative = fa < 0.0;
        for _ in 0..2000 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let fm = self.eval(mid);
            if fm == 0.0 {
                return Ok(mid);
            }
            if (fm < 0.0) == a_negative {
                a = mid;
            } else {
                b = mid;
            }
        }
        let mut x = if self.eval(a).abs() <= self.eval(b).abs() { a } else { b };
        for _ in 0..4 {
            let d = self.derivative(x);
            if d == 0.0 {
                break;
            }
            let next = x - self.eval(x) / d;
            if next.is_finite()
                && (lo.min(hi)..=lo.max(hi)).contains(&next)
                && self.eval(next).abs() < self.eval(x).abs()
            {
                x = next;
            } else {
                break;
            }
        }
        Ok(x)
    }

    /// All real roots in ascending order, isolated between the critical
    /// points of the cubic. Repeated roots are reported once.
    pub fn real_roots(&self) -> Vec<f64> {
        if self.c3 == 0.0 {
            return Vec::new();
        }
        // Cauchy bound on root magnitude
        let bound = 1.0
            + [self.c2, self.c1, self.c0]
                .iter()
                .map(|c| (c / self.c3).abs())
                .fold(0.0, f64::max);
        let (qa, qb, qc) = (3.0 * self.c3, 2.0 * self.c2, self.c1);
        let disc = qb * qb - 4.0 * qa * qc;
        let mut knots = vec![-bound];
        if disc > 0.0 {
            let sq = disc.sqrt();
            let mut crit = [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)];
            crit.sort_by(f64::total_cmp);
            knots.extend(crit);
        }
        knots.push(bound);
        let mut roots: Vec<f64> = Vec::new();
        for w in knots.windows(2) {
            let (a, b) = (w[0], w[1]);
            let root = if self.eval(a) == 0.0 {
                Some(a)
            } else if self.eval(b) == 0.0 {
                Some(b)
            } else {
                self.root_in(a, b).ok()
            };
            if let Some(x) = root {
                if roots.last().is_none_or(|&prev| prev != x) {
                    roots.push(x);
                }
            }
        }
        roots
    }
}

/// Root of `c3 x^3 + c2 x^2 + c1 x + c0` on `[lo, hi]`.
pub fn solve_cubic_root(c3: f64, c2: f64, c1: f64, c0: f64, lo: f64, hi: f64) -> Result<f64> {
    Cubic::new(c3, c2, c1, c0).root_in(lo, hi)
}

/// `4x^3 - 30x + 27`, whose middle root is the optimal length fraction.
pub const LENGTH_CUBIC: Cubic = Cubic::new(4.0, 0.0, -30.0, 27.0);

/// `27x^3 - 498x^2 + 1164x - 722`, whose smallest root is the optimal ratio.
pub const RATIO_CUBIC: Cubic = Cubic::new(27.0, -498.0, 1164.0, -722.0);

/// The optimal point `(R0, T0)` and value `c = u(R0, T0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecordConstants {
    #[serde(rename = "T0")]
    pub t0: f64,
    #[serde(rename = "R0")]
    pub r0: f64,
    pub c: f64,
    /// `1 / (c - 1)`
    pub merit_factor_limit: f64,
}

impl RecordConstants {
    pub fn point(&self) -> LimitPoint {
        LimitPoint {
            r: self.r0,
            t: self.t0,
        }
    }
}

pub fn record_constants() -> RecordConstants {
    let length_roots = LENGTH_CUBIC.real_roots();
    let ratio_roots = RATIO_CUBIC.real_roots();
    // Both cubics have three simple real roots; fall back to the known
    // brackets if isolation ever merges two of them.
    let t0 = match length_roots.as_slice() {
        [_, mid, _] if (1.0..=1.5).contains(mid) => *mid,
        _ => LENGTH_CUBIC.root_in(1.0, 1.5).expect("sign change on [1, 3/2]"),
    };
    let c = match ratio_roots.first() {
        Some(&x) if ratio_roots.len() == 3 => x,
        _ => RATIO_CUBIC.root_in(1.0, RECORD_UPPER_BOUND).expect("sign change on [1, 22/19]"),
    };
    RecordConstants {
        t0,
        r0: (3.0 - 2.0 * t0) / 4.0,
        c,
        merit_factor_limit: 1.0 / (c - 1.0),
    }
}

/// Axis-aligned search box for [`minimize_u_over`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBox {
    pub r_lo: f64,
    pub r_hi: f64,
    pub t_lo: f64,
    pub t_hi: f64,
}

impl SearchBox {
    /// `D = [0, 1/2] x [1/2, 3/2]`.
    pub const D: SearchBox = SearchBox {
        r_lo: 0.0,
        r_hi: 0.5,
        t_lo: 0.5,
        t_hi: 1.5,
    };

    fn clamp_r(&self, r: f64) -> f64 {
        r.clamp(self.r_lo, self.r_hi)
    }

    fn clamp_t(&self, t: f64) -> f64 {
        t.clamp(self.t_lo, self.t_hi)
    }
}

/// Result of [`minimize_u`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub r: f64,
    pub t: f64,
    pub u: f64,
    /// Smallest value seen on the grid, before refinement.
    pub grid_u: f64,
    pub grid_r: f64,
    pub grid_t: f64,
    pub grid_points: usize,
    pub sweeps: usize,
}

fn axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round().max(0.0) as usize;
    let mut v: Vec<f64> = (0..=n).map(|i| lo + i as f64 * step).collect();
    if let Some(last) = v.last_mut() {
        *last = last.min(hi);
    }
    v
}

fn better(a: (f64, f64, f64), b: (f64, f64, f64)) -> (f64, f64, f64) {
    // (u, R, T): by value, ties broken lexicographically on (R, T)
    let ord = a
        .0
        .total_cmp(&b.0)
        .then(a.1.total_cmp(&b.1))
        .then(a.2.total_cmp(&b.2));
    if ord.is_le() {
        a
    } else {
        b
    }
}

/// Minimize `u(R, .)` or `u(., T)` along one axis on `[lo, hi]` starting from
/// `x`: bisect the derivative when it changes sign, else step to the lower end.
fn line_minimize(
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    x: f64,
    lo: f64,
    hi: f64,
) -> f64 {
    let (mut a, mut b) = (lo, hi);
    if a >= b {
        return x;
    }
    let (ga, gb) = (df(a), df(b));
    let mut best = x;
    if ga < 0.0 && gb > 0.0 {
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if df(mid) < 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        let cand = if f(a) <= f(b) { a } else { b };
        if f(cand) <= f(best) {
            best = cand;
        }
    } else {
        for cand in [lo, hi] {
            if f(cand) < f(best) {
                best = cand;
            }
        }
    }
    best
}

/// Largest `s >= 0` keeping `x + s * d` inside `[lo, hi]`.
fn axis_room(x: f64, d: f64, lo: f64, hi: f64) -> f64 {
    if d > 0.0 {
        (hi - x) / d
    } else if d < 0.0 {
        (lo - x) / d
    } else {
        f64::INFINITY
    }
}

/// Grid scan of `u` over `area` at spacing `grid_step`, then cyclic
/// coordinate descent from the best grid point until no coordinate moves by
/// more than `refine_tol`. Each sweep is followed by a line search along its
/// net displacement.
pub fn minimize_u_over(area: SearchBox, grid_step: f64, refine_tol: f64) -> Result<Minimum> {
    if !(grid_step > 0.0 && grid_step.is_finite()) {
        return Err(Error::InvalidArgument(format!("grid step {grid_step}")));
    }
    if refine_tol.is_nan() || refine_tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("refinement tolerance {refine_tol}")));
    }
    if !(area.t_lo > 0.0 && area.t_lo <= area.t_hi && area.r_lo <= area.r_hi) {
        return Err(Error::InvalidArgument(format!("search box {area:?}")));
    }
    let rs = axis(area.r_lo, area.r_hi, grid_step);
    let ts = axis(area.t_lo, area.t_hi, grid_step);
    let grid_points = rs.len() * ts.len();
    let (grid_u, grid_r, grid_t) = ts
        .par_iter()
        .map(|&t| {
            rs.iter()
                .map(|&r| (ratio_limit_u(&LimitPoint { r, t }), r, t))
                .fold((f64::INFINITY, f64::NAN, f64::NAN), better)
        })
        .reduce(|| (f64::INFINITY, f64::NAN, f64::NAN), better);

    let value = |r: f64, t: f64| ratio_limit_u(&LimitPoint { r, t });
    let (mut r, mut t) = (grid_r, grid_t);
    let reach = grid_step;
    let mut sweeps = 0;
    while sweeps < 100_000 {
        sweeps += 1;
        let new_r = line_minimize(
            |x| value(x, t),
            |x| ratio_limit_gradient(&LimitPoint { r: x, t }).0,
            r,
            area.clamp_r(r - reach),
            area.clamp_r(r + reach),
        );
        let new_t = line_minimize(
            |y| value(new_r, y),
            |y| ratio_limit_gradient(&LimitPoint { r: new_r, t: y }).1,
            t,
            area.clamp_t(t - reach),
            area.clamp_t(t + reach),
        );
        let moved = (new_r - r).abs().max((new_t - t).abs());
        let (dr, dt) = (new_r - r, new_t - t);
        r = new_r;
        t = new_t;
        if moved < refine_tol {
            break;
        }
        // Pattern move along the sweep displacement, which points down the
        // valley where the coordinate steps zigzag.
        let s_max = [
            axis_room(r, dr, area.r_lo, area.r_hi),
            axis_room(t, dt, area.t_lo, area.t_hi),
            reach / moved,
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min);
        if s_max > 0.0 {
            let along = |s: f64| LimitPoint {
                r: r + s * dr,
                t: t + s * dt,
            };
            let s = line_minimize(
                |s| ratio_limit_u(&along(s)),
                |s| {
                    let (gr, gt) = ratio_limit_gradient(&along(s));
                    gr * dr + gt * dt
                },
                0.0,
                0.0,
                s_max,
            );
            let q = along(s);
            r = area.clamp_r(q.r);
            t = area.clamp_t(q.t);
        }
    }
    Ok(Minimum {
        r,
        t,
        u: value(r, t),
        grid_u,
        grid_r,
        grid_t,
        grid_points,
        sweeps,
    })
}

/// [`minimize_u_over`] on `D = [0, 1/2] x [1/2, 3/2]`.
pub fn minimize_u(grid_step: f64, refine_tol: f64) -> Result<Minimum> {
    if grid_step > 1.0 / 64.0 {
        return Err(Error::InvalidArgument(format!(
            "grid step {grid_step} is coarser than 1/64"
        )));
    }
    minimize_u_over(SearchBox::D, grid_step, refine_tol)
}
