//! C ABI over the `qsearch` core.
//!
//! Every function returns a [`QsStatus`]; results come back through out
//! pointers. On failure the message is kept per thread and can be read with
//! [`qs_last_error`]. Handles are opaque and must be released with their
//! matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::atomic::{AtomicUsize, Ordering};

use qsearch::lab::DEFAULT_MAX_N;
use qsearch::lattice::Lattice;
use qsearch::spatial::{run_search, SearchConfig, SearchResult};
use qsearch::walk::WalkOperator;
use qsearch::{grover, Complex64, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Infeasible = 3,
    Consistency = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

pub struct QsLattice(Lattice);

pub struct QsWalk(WalkOperator);

pub struct QsSearchResult(SearchResult);

static MAX_N: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_N);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> QsStatus {
    match err {
        Error::InfeasibleSize { .. } | Error::SizeOverflow { .. } => QsStatus::Infeasible,
        e if e.is_consistency_failure() => QsStatus::Consistency,
        _ => QsStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (QsStatus, String)>) -> QsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QsStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            QsStatus::Panic
        }
    }
}

fn core<T>(r: qsearch::Result<T>) -> Result<T, (QsStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null<T>() -> Result<T, (QsStatus, String)> {
    Err((QsStatus::NullPointer, "null pointer argument".into()))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, (QsStatus, String)> {
    p.as_mut().map_or_else(null, Ok)
}

unsafe fn get<'a, T>(p: *const T) -> Result<&'a T, (QsStatus, String)> {
    p.as_ref().map_or_else(null, Ok)
}

/// Copies the last error message of this thread into `buf` as a
/// NUL-terminated string and returns the full message length (excluding
/// the terminator). Returns 0 when there is no error. Pass a null `buf` to
/// query the length.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn qs_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Largest state dimension a lattice handle may have. Defaults to 2^22.
#[no_mangle]
pub extern "C" fn qs_set_max_n(max_n: usize) {
    MAX_N.store(max_n, Ordering::Relaxed);
}

#[no_mangle]
pub extern "C" fn qs_max_n() -> usize {
    MAX_N.load(Ordering::Relaxed)
}

/// Success probability after `queries` Grover iterations with `marked`
/// of `size` items marked.
///
/// # Safety
/// `out_p` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qs_grover_success_probability(
    size: usize,
    marked: usize,
    queries: usize,
    out_p: *mut f64,
) -> QsStatus {
    guard(|| {
        let o = out(out_p)?;
        *o = core(grover::success_probability(size, marked, queries))?;
        Ok(())
    })
}

/// Query count maximizing the success probability, and that probability.
///
/// # Safety
/// `out_q` and `out_p` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn qs_grover_optimal_queries(
    size: usize,
    marked: usize,
    out_q: *mut usize,
    out_p: *mut f64,
) -> QsStatus {
    guard(|| {
        let (oq, op) = (out(out_q)?, out(out_p)?);
        let (q, p) = core(grover::optimal_queries(size, marked))?;
        *oq = q;
        *op = p;
        Ok(())
    })
}

/// Runs `queries` iterations by state-vector simulation and writes the
/// success probability after each, starting at 0, into `trace`
/// (`queries + 1` entries).
///
/// # Safety
/// `marked` must point to `marked_len` indices and `trace` to `trace_len`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qs_grover_run(
    size: usize,
    marked: *const usize,
    marked_len: usize,
    queries: usize,
    trace: *mut f64,
    trace_len: usize,
) -> QsStatus {
    guard(|| {
        if marked.is_null() || trace.is_null() {
            return null();
        }
        if trace_len < queries + 1 {
            return Err((QsStatus::BufferTooSmall, format!("trace needs {} entries", queries + 1)));
        }
        if size > qs_max_n() {
            return core(Err(Error::InfeasibleSize { size, cap: qs_max_n() }));
        }
        let marked = std::slice::from_raw_parts(marked, marked_len);
        let run = core(grover::run_grover(size, marked, queries))?;
        let trace = std::slice::from_raw_parts_mut(trace, trace_len);
        for (slot, (_, p)) in trace.iter_mut().zip(&run.trace) {
            *slot = *p;
        }
        Ok(())
    })
}

/// Creates a periodic lattice of `side^dim` vertices.
///
/// # Safety
/// `out_lattice` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qs_lattice_new(dim: usize, side: usize, out_lattice: *mut *mut QsLattice) -> QsStatus {
    guard(|| {
        let o = out(out_lattice)?;
        let lat = core(Lattice::new(dim, side))?;
        if lat.size() > qs_max_n() {
            return core(Err(Error::InfeasibleSize {
                size: lat.size(),
                cap: qs_max_n(),
            }));
        }
        *o = Box::into_raw(Box::new(QsLattice(lat)));
        Ok(())
    })
}

/// # Safety
/// `lattice` must be null or a handle from [`qs_lattice_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qs_lattice_free(lattice: *mut QsLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice));
    }
}

/// # Safety
/// `lattice` must be a live handle and `out_size` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qs_lattice_size(lattice: *const QsLattice, out_size: *mut usize) -> QsStatus {
    guard(|| {
        *out(out_size)? = get(lattice)?.0.size();
        Ok(())
    })
}

/// Creates the walk step `W^t1` at hop angle `tau`. A NaN `tau` tunes it.
///
/// # Safety
/// `lattice` must be a live handle and `out_walk` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qs_walk_new(
    lattice: *const QsLattice,
    tau: f64,
    t1: usize,
    out_walk: *mut *mut QsWalk,
) -> QsStatus {
    guard(|| {
        let o = out(out_walk)?;
        let lat = &get(lattice)?.0;
        let mut cfg = SearchConfig::new(lat.clone(), t1);
        if !tau.is_nan() {
            cfg = cfg.with_tau(tau);
        }
        if t1 == 0 {
            return core(Err(Error::InvalidParameter("t1 must be at least 1".into())));
        }
        let walk = core(cfg.walk())?;
        *o = Box::into_raw(Box::new(QsWalk(walk)));
        Ok(())
    })
}

/// # Safety
/// `walk` must be null or a handle from [`qs_walk_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qs_walk_free(walk: *mut QsWalk) {
    if !walk.is_null() {
        drop(Box::from_raw(walk));
    }
}

/// # Safety
/// `walk` must be a live handle and `out_tau` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qs_walk_tau(walk: *const QsWalk, out_tau: *mut f64) -> QsStatus {
    guard(|| {
        *out(out_tau)? = get(walk)?.0.tau();
        Ok(())
    })
}

/// Applies `W^t1` in place to a state of `2 * N` doubles stored as
/// interleaved (re, im) pairs.
///
/// # Safety
/// `walk` must be a live handle and `amps` must point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qs_walk_apply(walk: *const QsWalk, amps: *mut f64, len: usize) -> QsStatus {
    guard(|| {
        let w = &get(walk)?.0;
        if amps.is_null() {
            return null();
        }
        let n = w.lattice().size();
        if len != 2 * n {
            return core(Err(Error::DimensionMismatch { left: 2 * n, right: len }));
        }
        let raw = std::slice::from_raw_parts_mut(amps, len);
        let mut v: Vec<Complex64> = raw.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect();
        w.walk_in_place(&mut v, &mut Vec::new());
        for (c, a) in raw.chunks_exact_mut(2).zip(&v) {
            c[0] = a.re;
            c[1] = a.im;
        }
        Ok(())
    })
}

/// Runs spatial search for the vertex at index 0.
///
/// `tau` NaN tunes the hop angle; `cos_delta` NaN runs without the
/// ancilla regulator; `t2_max` 0 uses the default query budget.
///
/// # Safety
/// `lattice` must be a live handle and `out_result` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qs_search_run(
    lattice: *const QsLattice,
    t1: usize,
    tau: f64,
    cos_delta: f64,
    t2_max: usize,
    out_result: *mut *mut QsSearchResult,
) -> QsStatus {
    guard(|| {
        let o = out(out_result)?;
        let lat = &get(lattice)?.0;
        let mut cfg = SearchConfig::new(lat.clone(), t1);
        if !tau.is_nan() {
            cfg = cfg.with_tau(tau);
        }
        if !cos_delta.is_nan() {
            cfg = cfg.with_tulsi(cos_delta);
        }
        if t2_max > 0 {
            cfg = cfg.with_budget(t2_max);
        }
        let r = core(run_search(&cfg))?;
        *o = Box::into_raw(Box::new(QsSearchResult(r)));
        Ok(())
    })
}

/// # Safety
/// `result` must be null or a handle from [`qs_search_run`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qs_search_result_free(result: *mut QsSearchResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QsSearchSummary {
    pub tau: f64,
    pub t2_star: usize,
    pub p_max: f64,
    pub effective_queries: f64,
    pub walk_steps_total: usize,
    pub budget_limited: bool,
    pub curve_len: usize,
}

/// # Safety
/// `result` must be a live handle and `out_summary` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qs_search_result_summary(
    result: *const QsSearchResult,
    out_summary: *mut QsSearchSummary,
) -> QsStatus {
    guard(|| {
        let r = &get(result)?.0;
        *out(out_summary)? = QsSearchSummary {
            tau: r.tau,
            t2_star: r.t2_star,
            p_max: r.p_max,
            effective_queries: r.effective_queries,
            walk_steps_total: r.walk_steps_total,
            budget_limited: r.budget_limited,
            curve_len: r.p_curve.len(),
        };
        Ok(())
    })
}

/// Copies the probability curve (index = query count) into `buf`.
///
/// # Safety
/// `result` must be a live handle and `buf` must point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qs_search_result_curve(result: *const QsSearchResult, buf: *mut f64, len: usize) -> QsStatus {
    guard(|| {
        let r = &get(result)?.0;
        if buf.is_null() {
            return null();
        }
        if len < r.p_curve.len() {
            return Err((QsStatus::BufferTooSmall, format!("curve needs {} entries", r.p_curve.len())));
        }
        std::slice::from_raw_parts_mut(buf, len)[..r.p_curve.len()].copy_from_slice(&r.p_curve);
        Ok(())
    })
}
