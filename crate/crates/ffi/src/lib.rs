//! C ABI over `fekete-core`.
//!
//! Every fallible call returns a [`FeketeStatus`] and writes its result
//! through an out-pointer. Sequences and convergence runs are opaque handles
//! owned by the caller and released with the matching `_free` function.
//! Panics never cross the boundary; they surface as `FEKETE_STATUS_PANIC`.

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fekete_core::asymptotic::{ratio_limit_u, record_constants, LimitPoint};
use fekete_core::character::{legendre, PrimeModulus};
use fekete_core::convergence::{run_convergence, ExperimentRecord};
use fekete_core::sequence::{
    fekete_coeffs, l2_norm_pow2, l4_norm_pow4_with, littlewoodize, merit_factor_from_norms,
    CoefficientSequence, FeketeSpec, Kernel,
};
use fekete_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeketeStatus {
    Ok = 0,
    NullPointer = 1,
    NotOddPrime = 2,
    InvalidArgument = 3,
    Precision = 4,
    Overflow = 5,
    DegenerateMeritFactor = 6,
    BufferTooSmall = 7,
    OutOfRange = 8,
    Panic = 9,
}

impl From<&Error> for FeketeStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::NotOddPrime(_) => FeketeStatus::NotOddPrime,
            Error::Precision { .. } => FeketeStatus::Precision,
            Error::DegenerateMeritFactor => FeketeStatus::DegenerateMeritFactor,
            _ => FeketeStatus::InvalidArgument,
        }
    }
}

/// A generalized Fekete sequence, raw or with zeros replaced by +1.
pub struct FeketeSequence {
    seq: CoefficientSequence,
}

/// The records of one convergence run, sorted by prime.
pub struct FeketeRecords {
    records: Vec<ExperimentRecord>,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeketeRecordConstants {
    pub t0: f64,
    pub r0: f64,
    pub c: f64,
    pub merit_factor_limit: f64,
}

/// One finite-p measurement. The exact fourth power of the L4 norm is split
/// into high and low 64-bit halves.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeketeRecord {
    pub p: u64,
    pub r: i64,
    pub t: usize,
    pub l4_pow4_hi: u64,
    pub l4_pow4_lo: u64,
    pub ratio4: f64,
    pub limit: f64,
    pub abs_err: f64,
    pub rel_err: f64,
}

fn guard(body: impl FnOnce() -> Result<(), FeketeStatus>) -> FeketeStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => FeketeStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => FeketeStatus::Panic,
    }
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), FeketeStatus> {
    if out.is_null() {
        return Err(FeketeStatus::NullPointer);
    }
    out.write(value);
    Ok(())
}

unsafe fn borrow<'a, T>(handle: *const T) -> Result<&'a T, FeketeStatus> {
    handle.as_ref().ok_or(FeketeStatus::NullPointer)
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn fekete_status_message(status: FeketeStatus) -> *const c_char {
    let text: &'static [u8] = match status {
        FeketeStatus::Ok => b"ok\0",
        FeketeStatus::NullPointer => b"null pointer argument\0",
        FeketeStatus::NotOddPrime => b"modulus is not an odd prime\0",
        FeketeStatus::InvalidArgument => b"invalid argument\0",
        FeketeStatus::Precision => b"spectral autocorrelation lost precision\0",
        FeketeStatus::Overflow => b"value does not fit the output type\0",
        FeketeStatus::DegenerateMeritFactor => b"merit factor undefined\0",
        FeketeStatus::BufferTooSmall => b"output buffer too small\0",
        FeketeStatus::OutOfRange => b"index out of range\0",
        FeketeStatus::Panic => b"internal error\0",
    };
    text.as_ptr().cast()
}

/// Legendre symbol `(a | p)`.
///
/// # Safety
/// `out` must be null or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn fekete_legendre(a: i64, p: u64, out: *mut i8) -> FeketeStatus {
    guard(|| {
        let p = PrimeModulus::new(p).map_err(|e| FeketeStatus::from(&e))?;
        write(out, legendre(a as i128, p))
    })
}

/// Build the coefficients `(j + r | p)`, `0 <= j < t`, replacing zeros by +1
/// when `littlewood` is set.
///
/// # Safety
/// `out` must be null or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn fekete_sequence_new(
    p: u64,
    r: i64,
    t: usize,
    littlewood: bool,
    out: *mut *mut FeketeSequence,
) -> FeketeStatus {
    guard(|| {
        if out.is_null() {
            return Err(FeketeStatus::NullPointer);
        }
        let spec = FeketeSpec::new(p, r, t).map_err(|e| FeketeStatus::from(&e))?;
        let raw = fekete_coeffs(&spec);
        let seq = if littlewood { littlewoodize(&raw) } else { raw };
        write(out, Box::into_raw(Box::new(FeketeSequence { seq })))
    })
}

/// # Safety
/// `handle` must be null or come from `fekete_sequence_new` and not have
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn fekete_sequence_free(handle: *mut FeketeSequence) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of coefficients, or 0 for a null handle.
///
/// # Safety
/// `handle` must be null or a live sequence handle.
#[no_mangle]
pub unsafe extern "C" fn fekete_sequence_len(handle: *const FeketeSequence) -> usize {
    handle.as_ref().map_or(0, |h| h.seq.len())
}

/// Copy the coefficients into `buf`. `written` receives the sequence length
/// even when `capacity` is too small.
///
/// # Safety
/// `handle` must be a live sequence handle, `buf` valid for `capacity`
/// writes and `written` null or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn fekete_sequence_coeffs(
    handle: *const FeketeSequence,
    buf: *mut i8,
    capacity: usize,
    written: *mut usize,
) -> FeketeStatus {
    guard(|| {
        let coeffs = borrow(handle)?.seq.coeffs();
        if !written.is_null() {
            written.write(coeffs.len());
        }
        if capacity < coeffs.len() {
            return Err(FeketeStatus::BufferTooSmall);
        }
        if buf.is_null() {
            return Err(FeketeStatus::NullPointer);
        }
        ptr::copy_nonoverlapping(coeffs.as_ptr(), buf, coeffs.len());
        Ok(())
    })
}

/// `||f||_2^2`.
///
/// # Safety
/// `handle` must be a live sequence handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn fekete_sequence_l2_pow2(
    handle: *const FeketeSequence,
    out: *mut u64,
) -> FeketeStatus {
    guard(|| write(out, l2_norm_pow2(&borrow(handle)?.seq)))
}

/// Exact `||f||_4^4`. Fails with `FEKETE_STATUS_OVERFLOW` past `u64`.
///
/// # Safety
/// `handle` must be a live sequence handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn fekete_sequence_l4_pow4(
    handle: *const FeketeSequence,
    naive: bool,
    out: *mut u64,
) -> FeketeStatus {
    guard(|| {
        let kernel = if naive { Kernel::Naive } else { Kernel::Fast };
        let l4 = l4_norm_pow4_with(&borrow(handle)?.seq, kernel).map_err(|e| FeketeStatus::from(&e))?;
        write(out, u64::try_from(l4).map_err(|_| FeketeStatus::Overflow)?)
    })
}

/// `||f||_2^4 / (||f||_4^4 - ||f||_2^4)`.
///
/// # Safety
/// `handle` must be a live sequence handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn fekete_sequence_merit_factor(
    handle: *const FeketeSequence,
    out: *mut f64,
) -> FeketeStatus {
    guard(|| {
        let seq = &borrow(handle)?.seq;
        let l4 = l4_norm_pow4_with(seq, Kernel::Fast).map_err(|e| FeketeStatus::from(&e))?;
        let mf = merit_factor_from_norms(l2_norm_pow2(seq), l4).map_err(|e| FeketeStatus::from(&e))?;
        write(out, mf)
    })
}

/// Asymptotic ratio `u(R, T)`.
///
/// # Safety
/// `out` must be null or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn fekete_limit_u(r: f64, t: f64, out: *mut f64) -> FeketeStatus {
    guard(|| {
        let pt = LimitPoint::new(r, t).map_err(|e| FeketeStatus::from(&e))?;
        write(out, ratio_limit_u(&pt))
    })
}

/// # Safety
/// `out` must be null or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn fekete_record_constants(out: *mut FeketeRecordConstants) -> FeketeStatus {
    guard(|| {
        let k = record_constants();
        write(
            out,
            FeketeRecordConstants {
                t0: k.t0,
                r0: k.r0,
                c: k.c,
                merit_factor_limit: k.merit_factor_limit,
            },
        )
    })
}

/// Exact norms at `count` primes spread geometrically over `[p_lo, p_hi]`.
///
/// # Safety
/// `out` must be null or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn fekete_convergence_run(
    r: f64,
    t: f64,
    p_lo: u64,
    p_hi: u64,
    count: usize,
    out: *mut *mut FeketeRecords,
) -> FeketeStatus {
    guard(|| {
        if out.is_null() {
            return Err(FeketeStatus::NullPointer);
        }
        let records = run_convergence(r, t, p_lo, p_hi, count).map_err(|e| FeketeStatus::from(&e))?;
        write(out, Box::into_raw(Box::new(FeketeRecords { records })))
    })
}

/// # Safety
/// `handle` must be null or a live records handle.
#[no_mangle]
pub unsafe extern "C" fn fekete_records_len(handle: *const FeketeRecords) -> usize {
    handle.as_ref().map_or(0, |h| h.records.len())
}

/// # Safety
/// `handle` must be a live records handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn fekete_records_get(
    handle: *const FeketeRecords,
    index: usize,
    out: *mut FeketeRecord,
) -> FeketeStatus {
    guard(|| {
        let rec = borrow(handle)?
            .records
            .get(index)
            .ok_or(FeketeStatus::OutOfRange)?;
        write(
            out,
            FeketeRecord {
                p: rec.p,
                r: rec.r,
                t: rec.t,
                l4_pow4_hi: (rec.l4_pow4 >> 64) as u64,
                l4_pow4_lo: rec.l4_pow4 as u64,
                ratio4: rec.ratio4,
                limit: rec.limit,
                abs_err: rec.abs_err,
                rel_err: rec.rel_err,
            },
        )
    })
}

/// # Safety
/// `handle` must be null or come from `fekete_convergence_run` and not have
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn fekete_records_free(handle: *mut FeketeRecords) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}
