//! C ABI for the nurse-cp solver.
//!
//! Instances and schedules are opaque heap handles created and destroyed
//! through this interface. Fallible calls return an [`NcpStatus`]; on failure
//! a description is available from [`ncp_last_error_message`] on the same
//! thread. Panics never cross the boundary: they are caught and reported as
//! [`NcpStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use nurse_cp::cp::{solve_optimize, solve_satisfy, SearchConfig, SearchStatus, VarHeuristic};
use nurse_cp::io::{parse_instance, parse_roster, render_roster, write_instance};
use nurse_cp::nsp::{
    benchmark_instance, canonical_instance, check_roster, compile, fitness, RosterInstance,
    RosterObjective, Schedule,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    /// The instance has no roster satisfying the hard constraints.
    Unsatisfiable = 5,
    /// A search limit fired before any roster was found.
    LimitReached = 6,
    Panic = 7,
}

/// Opaque roster instance.
pub struct NcpInstance(RosterInstance);

/// Opaque roster: one shift code per (nurse, day), 0 meaning Off.
pub struct NcpSchedule(Schedule);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NcpFitness {
    pub fairness_f: f64,
    pub preference_g: f64,
    pub combined: f64,
    pub alpha: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NcpSolveOptions {
    /// Branch-and-bound on fitness instead of stopping at the first roster.
    pub optimize: bool,
    /// Branch on variables in index order instead of smallest domain first.
    pub input_order: bool,
    /// Wall-clock limit in milliseconds; negative means none.
    pub time_limit_ms: i64,
    /// Node limit; 0 means none.
    pub node_limit: u64,
    /// Break first-fail ties randomly with `seed`.
    pub randomize_ties: bool,
    pub seed: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NcpSolveStats {
    pub nodes: u64,
    pub backtracks: u64,
    pub wall_ms: f64,
    /// Search finished: the roster is the first found or a proven optimum.
    pub complete: bool,
}

type Failure = (NcpStatus, String);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> NcpStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => NcpStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {message}"));
            NcpStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    (NcpStatus::NullPointer, format!("{what} is null"))
}

unsafe fn c_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|e| (NcpStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn deref<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Failure> {
    ptr.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message describing the last failed call on this thread, or null.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ncp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ncp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses an instance in the `.nsp` text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ncp_instance_parse(
    text: *const c_char,
    out: *mut *mut NcpInstance,
) -> NcpStatus {
    guard(|| {
        let src = c_str(text, "text")?;
        let inst = parse_instance(src).map_err(|e| (NcpStatus::ParseError, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(NcpInstance(inst))), "out")
    })
}

/// The four-nurse, three-shift, one-week instance. Never null.
#[no_mangle]
pub extern "C" fn ncp_instance_canonical() -> *mut NcpInstance {
    Box::into_raw(Box::new(NcpInstance(canonical_instance())))
}

/// Seeded benchmark instance; needs `shifts >= 1`, `days >= 1` and
/// `nurses > shifts`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ncp_instance_benchmark(
    nurses: usize,
    shifts: u32,
    days: usize,
    seed: u64,
    out: *mut *mut NcpInstance,
) -> NcpStatus {
    guard(|| {
        if shifts == 0 || days == 0 || nurses <= shifts as usize {
            return Err((NcpStatus::InvalidArgument, format!("need shifts >= 1, days >= 1 and nurses > shifts (got {nurses}, {shifts}, {days})")));
        }
        let inst = benchmark_instance(nurses, shifts, days, seed);
        inst.validate()
            .map_err(|e| (NcpStatus::InvalidArgument, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(NcpInstance(inst))), "out")
    })
}

/// Serializes an instance to the `.nsp` format; free with [`ncp_string_free`].
/// Returns null if `instance` is null.
///
/// # Safety
/// `instance` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ncp_instance_to_string(instance: *const NcpInstance) -> *mut c_char {
    let mut s = ptr::null_mut();
    guard(|| {
        s = owned_string(write_instance(&deref(instance, "instance")?.0));
        Ok(())
    });
    s
}

/// Number of nurses, or 0 for a null handle.
///
/// # Safety
/// `instance` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ncp_instance_nurses(instance: *const NcpInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.0.num_nurses)
}

/// Number of days, or 0 for a null handle.
///
/// # Safety
/// `instance` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ncp_instance_days(instance: *const NcpInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.0.num_days)
}

/// Number of working shifts, or 0 for a null handle.
///
/// # Safety
/// `instance` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ncp_instance_shifts(instance: *const NcpInstance) -> u32 {
    instance.as_ref().map_or(0, |i| i.0.num_shifts)
}

/// # Safety
/// `instance` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ncp_instance_free(instance: *mut NcpInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// First-fail, no limits, satisfaction only.
#[no_mangle]
pub extern "C" fn ncp_solve_options_default() -> NcpSolveOptions {
    NcpSolveOptions {
        optimize: false,
        input_order: false,
        time_limit_ms: -1,
        node_limit: 0,
        randomize_ties: false,
        seed: 0,
    }
}

fn search_config(o: &NcpSolveOptions) -> SearchConfig {
    SearchConfig {
        var_heuristic: if o.input_order {
            VarHeuristic::InputOrder
        } else {
            VarHeuristic::FirstFail
        },
        time_limit: u64::try_from(o.time_limit_ms)
            .ok()
            .map(Duration::from_millis),
        node_limit: (o.node_limit > 0).then_some(o.node_limit),
        randomize_ties: o.randomize_ties,
        seed: o.seed,
        ..Default::default()
    }
}

/// Solves `instance`. On success `out` receives a new schedule; with a limit
/// set this may be the best roster found rather than a proven optimum, which
/// `stats->complete` tells apart. `options` and `stats` may be null.
///
/// # Safety
/// `instance` must be a live handle, `out` a valid pointer, and `options` /
/// `stats` null or valid.
#[no_mangle]
pub unsafe extern "C" fn ncp_solve(
    instance: *const NcpInstance,
    options: *const NcpSolveOptions,
    out: *mut *mut NcpSchedule,
    stats: *mut NcpSolveStats,
) -> NcpStatus {
    guard(|| {
        let inst = &deref(instance, "instance")?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        let opts = options
            .as_ref()
            .copied()
            .unwrap_or_else(|| ncp_solve_options_default());
        let config = search_config(&opts);
        let compiled = compile(inst).map_err(|e| (NcpStatus::InvalidArgument, e.to_string()))?;
        let mut model = compiled.model.clone();
        let (solution, search) = if opts.optimize {
            let objective = RosterObjective::new(inst, &compiled);
            let (best, search) = solve_optimize(&mut model, &objective, &config);
            (best.map(|(s, _)| s), search)
        } else {
            solve_satisfy(&mut model, &config)
        };
        if let Some(stats) = stats.as_mut() {
            *stats = NcpSolveStats {
                nodes: search.nodes,
                backtracks: search.backtracks,
                wall_ms: search.wall_time_ms(),
                complete: search.status.is_complete(),
            };
        }
        match solution {
            Some(s) => write_out(
                out,
                Box::into_raw(Box::new(NcpSchedule(compiled.schedule(&s)))),
                "out",
            ),
            None if search.status == SearchStatus::Unsat => Err((
                NcpStatus::Unsatisfiable,
                "no roster satisfies the hard constraints".into(),
            )),
            None => Err((
                NcpStatus::LimitReached,
                format!("{:?} before any roster was found", search.status),
            )),
        }
    })
}

/// Parses a roster grid for `instance`.
///
/// # Safety
/// `instance` must be a live handle, `text` a NUL-terminated string and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ncp_schedule_parse(
    instance: *const NcpInstance,
    text: *const c_char,
    out: *mut *mut NcpSchedule,
) -> NcpStatus {
    guard(|| {
        let inst = &deref(instance, "instance")?.0;
        let schedule = parse_roster(c_str(text, "text")?, inst)
            .map_err(|e| (NcpStatus::ParseError, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(NcpSchedule(schedule))), "out")
    })
}

/// Shift code of `nurse` on `day` (both 0-based).
///
/// # Safety
/// `schedule` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ncp_schedule_get(
    schedule: *const NcpSchedule,
    nurse: usize,
    day: usize,
    out: *mut u32,
) -> NcpStatus {
    guard(|| {
        let s = &deref(schedule, "schedule")?.0;
        if nurse >= s.nurses() || day >= s.days() {
            return Err((
                NcpStatus::InvalidArgument,
                format!("cell ({nurse}, {day}) outside {}x{}", s.nurses(), s.days()),
            ));
        }
        write_out(out, s.get(nurse, day), "out")
    })
}

/// # Safety
/// `schedule` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ncp_schedule_nurses(schedule: *const NcpSchedule) -> usize {
    schedule.as_ref().map_or(0, |s| s.0.nurses())
}

/// # Safety
/// `schedule` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ncp_schedule_days(schedule: *const NcpSchedule) -> usize {
    schedule.as_ref().map_or(0, |s| s.0.days())
}

/// # Safety
/// `schedule` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ncp_schedule_free(schedule: *mut NcpSchedule) {
    if !schedule.is_null() {
        drop(Box::from_raw(schedule));
    }
}

/// Fairness, preference satisfaction and their weighted combination.
///
/// # Safety
/// Both handles must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ncp_fitness(
    schedule: *const NcpSchedule,
    instance: *const NcpInstance,
    out: *mut NcpFitness,
) -> NcpStatus {
    guard(|| {
        let s = &deref(schedule, "schedule")?.0;
        let inst = &deref(instance, "instance")?.0;
        let r = fitness(s, inst).map_err(|e| (NcpStatus::InvalidArgument, e.to_string()))?;
        let report = NcpFitness {
            fairness_f: r.fairness_f,
            preference_g: r.preference_g,
            combined: r.combined,
            alpha: r.alpha,
        };
        write_out(out, report, "out")
    })
}

/// Number of hard-constraint violations; 0 means the roster is valid.
///
/// # Safety
/// Both handles must be live and `out_count` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ncp_check(
    schedule: *const NcpSchedule,
    instance: *const NcpInstance,
    out_count: *mut usize,
) -> NcpStatus {
    guard(|| {
        let s = &deref(schedule, "schedule")?.0;
        let inst = &deref(instance, "instance")?.0;
        let violations =
            check_roster(s, inst).map_err(|e| (NcpStatus::InvalidArgument, e.to_string()))?;
        write_out(out_count, violations.len(), "out_count")
    })
}

/// Roster grid text; free with [`ncp_string_free`]. Null on error.
///
/// # Safety
/// Both handles must be null or live.
#[no_mangle]
pub unsafe extern "C" fn ncp_render_roster(
    schedule: *const NcpSchedule,
    instance: *const NcpInstance,
) -> *mut c_char {
    let mut text = ptr::null_mut();
    guard(|| {
        let s = &deref(schedule, "schedule")?.0;
        let inst = &deref(instance, "instance")?.0;
        s.check_shape(inst)
            .map_err(|e| (NcpStatus::InvalidArgument, e.to_string()))?;
        text = owned_string(render_roster(s, inst));
        Ok(())
    });
    text
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ncp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
