//! C ABI for the circle graph measurement simulator.
//!
//! Every function returns a [`CmStatus`]. On failure a message is kept per
//! thread and can be read with [`cm_last_error_message`] until the next call.
//! Strings handed out by the library must be released with [`cm_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use circle_mbqc::gaussian::{self, Outcome};
use circle_mbqc::{BlochVector, DoubleOccurrenceWord, LocalFrame, MeasurementPlan, Simulator};
use nalgebra::DMatrix;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed input: bad JSON, wrong lengths.
    InvalidArgument = 3,
    /// Well-formed input rejected by the library (e.g. a word that is not a valid tour).
    DomainError = 4,
    Panic = 5,
}

/// Opaque simulator handle.
pub struct CmSimulator {
    inner: Simulator,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Fail(CmStatus, String);

impl From<circle_mbqc::Error> for Fail {
    fn from(e: circle_mbqc::Error) -> Self {
        Fail(CmStatus::DomainError, e.to_string())
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CmStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CmStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            CmStatus::Panic
        }
    }
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail(CmStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    non_null(p, what)?;
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail(CmStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn parse_json<'a, T: serde::Deserialize<'a>>(text: &'a str, what: &str) -> Result<T, Fail> {
    serde_json::from_str(text).map_err(|e| Fail(CmStatus::InvalidArgument, format!("invalid {what}: {e}")))
}

unsafe fn sim_ref<'a>(sim: *const CmSimulator) -> Result<&'a Simulator, Fail> {
    non_null(sim, "simulator")?;
    Ok(&(*sim).inner)
}

/// Builds a simulator from a word given one character per letter
/// (whitespace ignored), e.g. `"abcabc"`. `frame_json` may be null, otherwise
/// `{"q": [[[re,im],[re,im]],[[re,im],[re,im]]]}` per rotated qubit.
///
/// # Safety
/// `letters` must be a valid C string, `frame_json` null or a valid C string,
/// `out` a valid pointer. On success `*out` owns a handle to free with
/// [`cm_simulator_free`].
#[no_mangle]
pub unsafe extern "C" fn cm_simulator_new(
    letters: *const c_char,
    frame_json: *const c_char,
    out: *mut *mut CmSimulator,
) -> CmStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let letters = read_str(letters, "letters")?;
        let word: DoubleOccurrenceWord = letters
            .parse()
            .map_err(|e: circle_mbqc::Error| Fail(CmStatus::DomainError, e.to_string()))?;
        let frame: Option<LocalFrame> = if frame_json.is_null() {
            None
        } else {
            Some(parse_json(read_str(frame_json, "frame")?, "frame")?)
        };
        let inner = Simulator::with_frame(&word, frame.as_ref())?;
        *out = Box::into_raw(Box::new(CmSimulator { inner }));
        Ok(())
    })
}

/// # Safety
/// `sim` must be null or a handle from [`cm_simulator_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cm_simulator_free(sim: *mut CmSimulator) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// # Safety
/// `sim` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cm_simulator_num_qubits(sim: *const CmSimulator, out: *mut usize) -> CmStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = sim_ref(sim)?.num_qubits();
        Ok(())
    })
}

/// Joint probability of the outcomes in `measure_json`, which is
/// `[[qubit, [x, y, z], +1 | -1], ...]` with directions in the lab frame.
///
/// # Safety
/// `sim` must be a live handle, `measure_json` a valid C string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cm_simulator_marginal(
    sim: *const CmSimulator,
    measure_json: *const c_char,
    out: *mut f64,
) -> CmStatus {
    guard(|| {
        non_null(out, "out")?;
        let sim = sim_ref(sim)?;
        let entries: Vec<(String, [f64; 3], i64)> = parse_json(read_str(measure_json, "measure")?, "measure")?;
        let mut measured = Vec::with_capacity(entries.len());
        for (q, [x, y, z], o) in &entries {
            let outcome = Outcome::from_i64(*o).map_err(|e| Fail(CmStatus::InvalidArgument, e.to_string()))?;
            measured.push((q.as_str(), BlochVector::new(*x, *y, *z), outcome));
        }
        *out = sim.marginal(&measured)?;
        Ok(())
    })
}

/// Overlap `|<phi|psi>|^2` of the unrotated graph state with the product state
/// given by `n` pure Bloch vectors, `blochs[3*v..3*v+3]` for vertex rank `v`.
///
/// # Safety
/// `sim` must be a live handle, `blochs` must point to `3 * n` doubles, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cm_simulator_overlap(
    sim: *const CmSimulator,
    blochs: *const f64,
    n: usize,
    out: *mut f64,
) -> CmStatus {
    guard(|| {
        non_null(out, "out")?;
        non_null(blochs, "blochs")?;
        let sim = sim_ref(sim)?;
        if n != sim.num_qubits() {
            return Err(Fail(
                CmStatus::InvalidArgument,
                format!("expected {} Bloch vectors, got {n}", sim.num_qubits()),
            ));
        }
        let raw = std::slice::from_raw_parts(blochs, 3 * n);
        let vs: Vec<BlochVector> = raw.chunks(3).map(|c| BlochVector::new(c[0], c[1], c[2])).collect();
        let phi = gaussian::product_covariance(&vs);
        *out = gaussian::overlap_full(&phi, sim.covariance())?.value;
        Ok(())
    })
}

/// Runs one adaptive measurement plan and writes the transcript as JSON.
/// The plan is `{"steps":[{"qubit":"a","basis":{"static":[x,y,z]}}, ...]}`,
/// or `{"adaptive":{"": [..], "+": [..]}}` keyed by earlier outcomes.
///
/// # Safety
/// `sim` must be a live handle, `plan_json` a valid C string, `out_json` a valid
/// pointer. The string written to `*out_json` must be freed with [`cm_string_free`].
#[no_mangle]
pub unsafe extern "C" fn cm_simulator_sample(
    sim: *const CmSimulator,
    plan_json: *const c_char,
    seed: u64,
    stream: u64,
    out_json: *mut *mut c_char,
) -> CmStatus {
    guard(|| {
        non_null(out_json, "out_json")?;
        *out_json = ptr::null_mut();
        let sim = sim_ref(sim)?;
        let plan: MeasurementPlan = parse_json(read_str(plan_json, "plan")?, "plan")?;
        let transcript = sim.sample_run(&plan, seed, stream)?;
        let text = serde_json::to_string(&transcript).map_err(|e| Fail(CmStatus::Panic, e.to_string()))?;
        *out_json = CString::new(text).unwrap_or_default().into_raw();
        Ok(())
    })
}

/// Pfaffian of a real skew-symmetric `dim x dim` matrix in row-major order.
///
/// # Safety
/// `matrix` must point to `dim * dim` doubles (may be null when `dim == 0`), `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cm_pfaffian(matrix: *const f64, dim: usize, out: *mut f64) -> CmStatus {
    guard(|| {
        non_null(out, "out")?;
        let m = if dim == 0 {
            DMatrix::zeros(0, 0)
        } else {
            non_null(matrix, "matrix")?;
            DMatrix::from_row_slice(dim, dim, std::slice::from_raw_parts(matrix, dim * dim))
        };
        *out = gaussian::pfaffian(&m)?;
        Ok(())
    })
}

/// Message for the last failed call on this thread, or null. The pointer stays
/// valid until the next library call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn cm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn cm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
