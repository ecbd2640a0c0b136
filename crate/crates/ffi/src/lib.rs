//! C ABI for loading trained checkpoints, running predictions and
//! evaluating variational circuits.
//!
//! Every fallible function returns a [`QlstmaStatus`]. On failure the
//! message is kept per thread and can be fetched with
//! [`qlstma_last_error_message`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use ndarray::{Array3, ArrayView2};
use qlstma::network::param_count;
use qlstma::qsim::{vqc_forward, Entangler, VqcParams};
use qlstma::training::{load_checkpoint, predict_curve, Checkpoint};
use qlstma::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QlstmaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    Parse = 4,
    UnsupportedVersion = 5,
    Validation = 6,
    Numeric = 7,
    Panic = 8,
}

/// A loaded checkpoint. Create with [`qlstma_model_load`], release with
/// [`qlstma_model_free`].
pub struct QlstmaModel {
    checkpoint: Checkpoint,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> QlstmaStatus {
    match e {
        Error::Io { .. } => QlstmaStatus::Io,
        Error::Parse(_) => QlstmaStatus::Parse,
        Error::UnsupportedVersion { .. } => QlstmaStatus::UnsupportedVersion,
        Error::Numeric(_) => QlstmaStatus::Numeric,
        Error::Validation(_) | Error::Domain(_) | Error::DegenerateRange(_) => QlstmaStatus::Validation,
        Error::Config(_) | Error::Shape(_) | Error::Index(_) | Error::Usage(_) => QlstmaStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (QlstmaStatus, String)>) -> QlstmaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            QlstmaStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            QlstmaStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (QlstmaStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (QlstmaStatus, String) {
    (QlstmaStatus::NullPointer, format!("`{what}` is null"))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qlstma_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copy of the last error message on this thread, or NULL if the last call
/// succeeded. Free with [`qlstma_string_free`].
#[no_mangle]
pub extern "C" fn qlstma_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |m| m.clone().into_raw()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qlstma_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads a checkpoint JSON file.
///
/// # Safety
/// `path` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qlstma_model_load(path: *const c_char, out: *mut *mut QlstmaModel) -> QlstmaStatus {
    guard(|| {
        if path.is_null() {
            return Err(null("path"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| (QlstmaStatus::InvalidArgument, "path is not valid UTF-8".to_string()))?;
        let checkpoint = load_checkpoint(path).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(QlstmaModel { checkpoint }));
        Ok(())
    })
}

/// # Safety
/// `model` must be NULL or a handle from [`qlstma_model_load`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qlstma_model_free(model: *mut QlstmaModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Features per time step the model expects.
///
/// # Safety
/// `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qlstma_model_input_dim(model: *const QlstmaModel) -> usize {
    model.as_ref().map_or(0, |m| m.checkpoint.params.config.input_dim)
}

/// Resampling length the model was trained on.
///
/// # Safety
/// `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qlstma_model_timesteps(model: *const QlstmaModel) -> usize {
    model.as_ref().map_or(0, |m| m.checkpoint.config.timesteps)
}

/// Trainable parameters in the recurrent block and in the whole model.
///
/// # Safety
/// `model` must be a live handle; `recurrent` and `total` valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn qlstma_model_param_count(
    model: *const QlstmaModel,
    recurrent: *mut usize,
    total: *mut usize,
) -> QlstmaStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let c = param_count(&m.checkpoint.params);
        if let Some(r) = recurrent.as_mut() {
            *r = c.recurrent;
        }
        if let Some(t) = total.as_mut() {
            *t = c.total;
        }
        Ok(())
    })
}

/// Predicts a permeability curve in mD from normalized features.
///
/// `features` is row-major `(n_steps, n_features)`; `out` receives
/// `n_steps` values.
///
/// # Safety
/// `features` must hold `n_steps * n_features` doubles and `out` room for
/// `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qlstma_model_predict(
    model: *const QlstmaModel,
    features: *const f64,
    n_steps: usize,
    n_features: usize,
    out: *mut f64,
    out_len: usize,
) -> QlstmaStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        if features.is_null() {
            return Err(null("features"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        if out_len < n_steps {
            return Err((
                QlstmaStatus::InvalidArgument,
                format!("output buffer holds {out_len} values, need {n_steps}"),
            ));
        }
        let len = n_steps
            .checked_mul(n_features)
            .ok_or_else(|| (QlstmaStatus::InvalidArgument, "feature buffer size overflows".to_string()))?;
        let data = slice::from_raw_parts(features, len);
        let view = ArrayView2::from_shape((n_steps, n_features), data)
            .map_err(|e| (QlstmaStatus::InvalidArgument, e.to_string()))?;
        let pred = predict_curve(&m.checkpoint, view).map_err(lib_err)?;
        slice::from_raw_parts_mut(out, n_steps).copy_from_slice(&pred);
        Ok(())
    })
}

/// Pauli-Z expectations of the variational circuit.
///
/// `angles` holds `n_layers * n_qubits * 3` rotation angles laid out as
/// `[layer][qubit][phi, theta, omega]`; `out` receives `n_qubits` values.
///
/// # Safety
/// `inputs` must hold `n_qubits` doubles, `angles` the amount above and
/// `out` room for `n_qubits` doubles.
#[no_mangle]
pub unsafe extern "C" fn qlstma_vqc_forward(
    inputs: *const f64,
    n_qubits: usize,
    angles: *const f64,
    n_layers: usize,
    ring: bool,
    out: *mut f64,
) -> QlstmaStatus {
    guard(|| {
        if inputs.is_null() {
            return Err(null("inputs"));
        }
        if angles.is_null() {
            return Err(null("angles"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let len = n_layers
            .checked_mul(n_qubits)
            .and_then(|v| v.checked_mul(3))
            .ok_or_else(|| (QlstmaStatus::InvalidArgument, "angle buffer size overflows".to_string()))?;
        let x = slice::from_raw_parts(inputs, n_qubits);
        let a = Array3::from_shape_vec((n_layers, n_qubits, 3), slice::from_raw_parts(angles, len).to_vec())
            .map_err(|e| (QlstmaStatus::InvalidArgument, e.to_string()))?;
        let params = VqcParams {
            angles: a,
            entangler: if ring { Entangler::Ring } else { Entangler::Chain },
        };
        let res = vqc_forward(x, &params).map_err(lib_err)?;
        slice::from_raw_parts_mut(out, n_qubits).copy_from_slice(&res.expectations);
        Ok(())
    })
}
