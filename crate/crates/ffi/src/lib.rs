//! C interface to `gup-core`.
//!
//! Every call returns a [`GupStatus`]. Results go through out-pointers and
//! are written only on success. After a failure,
//! [`gup_last_error_message`] returns the message for the calling thread.
//! Solutions are opaque handles, created by [`gup_solution_new`] and
//! released by [`gup_solution_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gup_core::algebra::{DeformationParams, ModelSpec, Rep};
use gup_core::oracle::verify_spectrum;
use gup_core::phase;
use gup_core::solutions::{solve, ClosedFormSolution};
use gup_core::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GupStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Unsupported = 3,
    ComplexSpectrum = 4,
    NonPhysical = 5,
    NoRoot = 6,
    Numerical = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GupModel {
    HarmonicOscillator = 0,
    Swanson = 1,
    PoschlTeller = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GupRep {
    Pi1 = 0,
    Pi2 = 1,
    Pi3 = 2,
    Pi4 = 3,
    Pi4Prime = 4,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GupParams {
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
    pub tau: f64,
}

/// Opaque solved (model, representation) pair.
pub struct GupSolution {
    inner: ClosedFormSolution,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> GupStatus {
    match e {
        Error::InvalidParameter(_)
        | Error::IntrinsicNoncommutativity
        | Error::DomainMismatch(_)
        | Error::DomainError(_)
        | Error::JacobiParameter { .. } => GupStatus::InvalidArgument,
        Error::UnsupportedPair { .. } | Error::UnsupportedOrder(_) | Error::CommutativeLimit => GupStatus::Unsupported,
        Error::ComplexSpectrum => GupStatus::ComplexSpectrum,
        Error::NonPhysical => GupStatus::NonPhysical,
        Error::NoRoot => GupStatus::NoRoot,
        _ => GupStatus::Numerical,
    }
}

struct Fail(GupStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(GupStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, turning errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> GupStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GupStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            GupStatus::Panic
        }
    }
}

fn params(p: &GupParams) -> Result<DeformationParams, Fail> {
    Ok(DeformationParams::new(p.hbar, p.mass, p.omega, p.tau)?)
}

fn model(m: GupModel, alpha: f64, beta: f64) -> ModelSpec {
    match m {
        GupModel::HarmonicOscillator => ModelSpec::HarmonicOscillator,
        GupModel::Swanson => ModelSpec::Swanson { alpha, beta },
        GupModel::PoschlTeller => ModelSpec::PoschlTeller { alpha, beta },
    }
}

fn rep(r: GupRep) -> Rep {
    match r {
        GupRep::Pi1 => Rep::Pi1,
        GupRep::Pi2 => Rep::Pi2,
        GupRep::Pi3 => Rep::Pi3,
        GupRep::Pi4 => Rep::Pi4,
        GupRep::Pi4Prime => Rep::Pi4Prime,
    }
}

unsafe fn solution<'a>(h: *const GupSolution) -> Result<&'a ClosedFormSolution, Fail> {
    h.as_ref().map(|s| &s.inner).ok_or_else(|| null("solution handle"))
}

/// Natural units, `ħ = m = ω = 1`.
#[no_mangle]
pub extern "C" fn gup_params_natural(tau: f64) -> GupParams {
    GupParams {
        hbar: 1.0,
        mass: 1.0,
        omega: 1.0,
        tau,
    }
}

/// Solves `(model, rep)`. `alpha` and `beta` are ignored for the oscillator.
///
/// # Safety
/// `params_in` must point to a `GupParams`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gup_solution_new(
    model_kind: GupModel,
    alpha: f64,
    beta: f64,
    representation: GupRep,
    params_in: *const GupParams,
    out: *mut *mut GupSolution,
) -> GupStatus {
    guard(|| {
        let p = params(params_in.as_ref().ok_or_else(|| null("params"))?)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let m = model(model_kind, alpha, beta);
        m.validate(&p)?;
        let inner = solve(m, rep(representation), p)?;
        *out = Box::into_raw(Box::new(GupSolution { inner }));
        Ok(())
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `h` must come from `gup_solution_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gup_solution_free(h: *mut GupSolution) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Whether the spectrum is real and bounded below (1) or not (0).
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gup_solution_is_physical(h: *const GupSolution, out: *mut i32) -> GupStatus {
    guard(|| {
        let s = solution(h)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = i32::from(s.physical());
        Ok(())
    })
}

/// Energy of level `n`; the imaginary part is nonzero in the broken phase.
///
/// # Safety
/// `h` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gup_solution_energy(h: *const GupSolution, n: usize, re: *mut f64, im: *mut f64) -> GupStatus {
    guard(|| {
        let s = solution(h)?;
        if re.is_null() || im.is_null() {
            return Err(null("re/im"));
        }
        let e = s.energy(n)?;
        *re = e.re;
        *im = e.im;
        Ok(())
    })
}

/// Normalized eigenfunction of level `n` at `len` points of the real
/// parametrization (`p = i t` for Π₄), written to `out[0..len]`.
///
/// # Safety
/// `ts` must hold `len` values and `out` room for `len` values.
#[no_mangle]
pub unsafe extern "C" fn gup_solution_wavefunction(
    h: *const GupSolution,
    n: usize,
    ts: *const f64,
    len: usize,
    out: *mut f64,
) -> GupStatus {
    guard(|| {
        let s = solution(h)?;
        if len == 0 {
            return Ok(());
        }
        if ts.is_null() || out.is_null() {
            return Err(null("ts/out"));
        }
        let ts = std::slice::from_raw_parts(ts, len);
        let psi = s.wavefunction(n, ts)?;
        let out = std::slice::from_raw_parts_mut(out, len);
        for (o, v) in out.iter_mut().zip(psi) {
            *o = v.re;
        }
        Ok(())
    })
}

/// Metric `ρ(t)`, normalized so that the first states are orthonormal.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gup_solution_metric(h: *const GupSolution, t: f64, out: *mut f64) -> GupStatus {
    guard(|| {
        let s = solution(h)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = s.metric(t)?;
        Ok(())
    })
}

/// Finite-difference eigenvalues of the first `count` levels on grids
/// `grid`, `2·grid`, `4·grid`, extrapolated.
///
/// # Safety
/// `h` must be a live handle; `out` must have room for `count` values.
#[no_mangle]
pub unsafe extern "C" fn gup_solution_oracle_energies(
    h: *const GupSolution,
    count: usize,
    grid: usize,
    out: *mut f64,
) -> GupStatus {
    guard(|| {
        let s = solution(h)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let report = verify_spectrum(s.model, s.rep, s.params, count, grid)?;
        let out = std::slice::from_raw_parts_mut(out, count);
        for (o, l) in out.iter_mut().zip(&report.levels) {
            *o = l.oracle;
        }
        Ok(())
    })
}

/// Swanson reality discriminant `D(α, β)`; the spectrum is real iff `D ≥ 0`.
///
/// # Safety
/// `params_in` must point to a `GupParams`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gup_swanson_discriminant(
    alpha: f64,
    beta: f64,
    params_in: *const GupParams,
    out: *mut f64,
) -> GupStatus {
    guard(|| {
        let p = params(params_in.as_ref().ok_or_else(|| null("params"))?)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = phase::discriminant(alpha, beta, &p);
        Ok(())
    })
}

/// Roots β of `D(α, β) = 0` with `Ω > 0`, ascending; at most two. `count`
/// receives the number written.
///
/// # Safety
/// `params_in` must point to a `GupParams`; `out` must have room for `cap`
/// values; `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gup_phase_boundary(
    alpha: f64,
    params_in: *const GupParams,
    out: *mut f64,
    cap: usize,
    count: *mut usize,
) -> GupStatus {
    guard(|| {
        let p = params(params_in.as_ref().ok_or_else(|| null("params"))?)?;
        let count = count.as_mut().ok_or_else(|| null("count"))?;
        let roots = phase::boundary_beta(alpha, &p)?;
        *count = roots.len();
        if roots.len() > cap {
            return Err(Fail(GupStatus::BufferTooSmall, format!("{} roots, capacity {cap}", roots.len())));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        std::slice::from_raw_parts_mut(out, roots.len()).copy_from_slice(&roots);
        Ok(())
    })
}

/// Copies the calling thread's last error message into `buf` (NUL
/// terminated, truncated to `len`). Returns the full message length without
/// the terminator, or 0 when there is none.
///
/// # Safety
/// `buf` must have room for `len` bytes, or be null with `len == 0`.
#[no_mangle]
pub unsafe extern "C" fn gup_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        None => 0,
        Some(msg) => {
            let bytes = msg.as_bytes();
            if !buf.is_null() && len > 0 {
                let n = bytes.len().min(len - 1);
                ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
                *buf.add(n) = 0;
            }
            bytes.len()
        }
    })
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn gup_status_string(status: GupStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        GupStatus::Ok => b"ok\0",
        GupStatus::NullPointer => b"null pointer\0",
        GupStatus::InvalidArgument => b"invalid argument\0",
        GupStatus::Unsupported => b"unsupported\0",
        GupStatus::ComplexSpectrum => b"complex spectrum\0",
        GupStatus::NonPhysical => b"non-physical representation\0",
        GupStatus::NoRoot => b"no root\0",
        GupStatus::Numerical => b"numerical failure\0",
        GupStatus::BufferTooSmall => b"buffer too small\0",
        GupStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}
