//! C ABI for the stenoflow solver.
//!
//! Parameters and models are opaque handles created and destroyed through
//! this interface. Every fallible call returns an `SfStatus`; on failure a
//! description is available from `sf_last_error_message` on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use stenoflow::hemodynamics::{axial_sweep_results, LocalFlow};
use stenoflow::{ArteryGeometry, Error, FlowParams};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    UnknownKey = 3,
    GeometryInvalid = 4,
    NoConvergence = 5,
    SeriesDivergent = 6,
    Domain = 7,
    DegenerateFlow = 8,
    Internal = 9,
}

/// Model inputs. Created with `sf_params_new`, released with `sf_params_free`.
pub struct SfParams {
    inner: FlowParams,
}

/// A validated artery. Created with `sf_model_new`, released with `sf_model_free`.
pub struct SfModel {
    geometry: ArteryGeometry,
}

/// One station of an axial sweep.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SfAxialRecord {
    pub z: f64,
    pub eta: f64,
    pub dpdz_bar: f64,
    pub tau_bar: f64,
    pub u_center: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn status_of(error: &Error) -> SfStatus {
    match error {
        Error::InvalidParameter { .. } | Error::Config { .. } => SfStatus::InvalidParameter,
        Error::GeometryInvalid { .. } => SfStatus::GeometryInvalid,
        Error::NoConvergence { .. } => SfStatus::NoConvergence,
        Error::SeriesDivergent { .. } => SfStatus::SeriesDivergent,
        Error::Domain { .. } => SfStatus::Domain,
        Error::DegenerateFlow { .. } => SfStatus::DegenerateFlow,
        Error::Sweep { failures } => failures
            .first()
            .map(|f| status_of(&f.error))
            .unwrap_or(SfStatus::Internal),
        _ => SfStatus::Internal,
    }
}

fn fail(status: SfStatus, message: impl Into<String>) -> SfStatus {
    set_last_error(message.into());
    status
}

fn from_error(error: Error) -> SfStatus {
    let status = status_of(&error);
    fail(status, error.to_string())
}

/// Runs `body`, converting panics into `SF_STATUS_INTERNAL`.
fn guard(body: impl FnOnce() -> SfStatus) -> SfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(SfStatus::Internal, "internal panic"),
    }
}

unsafe fn key_str<'a>(key: *const c_char) -> Result<&'a str, SfStatus> {
    if key.is_null() {
        return Err(fail(SfStatus::NullPointer, "key is null"));
    }
    CStr::from_ptr(key)
        .to_str()
        .map_err(|_| fail(SfStatus::UnknownKey, "key is not valid UTF-8"))
}

fn whole(key: &str, value: f64) -> Result<u64, SfStatus> {
    if value.fract() == 0.0 && value >= 0.0 && value <= u32::MAX as f64 {
        Ok(value as u64)
    } else {
        Err(fail(
            SfStatus::InvalidParameter,
            format!("{key} must be a non-negative integer, got {value}"),
        ))
    }
}

/// Message for the most recent failure on this thread, or NULL if none.
/// The pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn sf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn sf_status_message(status: SfStatus) -> *const c_char {
    let text: &'static CStr = match status {
        SfStatus::Ok => c"ok",
        SfStatus::NullPointer => c"null pointer argument",
        SfStatus::InvalidParameter => c"invalid parameter",
        SfStatus::UnknownKey => c"unknown parameter key",
        SfStatus::GeometryInvalid => c"wall radius is not positive",
        SfStatus::NoConvergence => c"series did not converge",
        SfStatus::SeriesDivergent => c"viscosity vanishes inside the lumen",
        SfStatus::Domain => c"radial position outside the lumen",
        SfStatus::DegenerateFlow => c"degenerate flux bracket",
        SfStatus::Internal => c"internal error",
    };
    text.as_ptr()
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn sf_version() -> *const c_char {
    static VERSION: &CStr =
        match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
            Ok(v) => v,
            Err(_) => c"unknown",
        };
    VERSION.as_ptr()
}

/// New parameter set holding the defaults.
#[no_mangle]
pub extern "C" fn sf_params_new() -> *mut SfParams {
    Box::into_raw(Box::new(SfParams {
        inner: FlowParams::default(),
    }))
}

/// # Safety
/// `params` must be NULL or a handle from `sf_params_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sf_params_free(params: *mut SfParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Sets one parameter by name. Keys: alpha, hematocrit, beta, m, hartmann,
/// permeability, l, d, length, severity, tol, n_max. Values are checked when
/// a model is built, except that m and n_max must be integers.
///
/// # Safety
/// `params` must be a live handle and `key` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sf_params_set(
    params: *mut SfParams,
    key: *const c_char,
    value: f64,
) -> SfStatus {
    guard(|| {
        let Some(params) = params.as_mut() else {
            return fail(SfStatus::NullPointer, "params is null");
        };
        let key = match key_str(key) {
            Ok(k) => k,
            Err(status) => return status,
        };
        let p = &mut params.inner;
        match key {
            "alpha" => p.alpha = value,
            "hematocrit" => p.hematocrit = value,
            "beta" => p.beta = value,
            "hartmann" => p.hartmann = value,
            "permeability" => p.permeability = value,
            "l" => p.throat_spacing = value,
            "d" => p.onset = value,
            "length" => p.length = value,
            "severity" => p.severity = value,
            "tol" => p.tol = value,
            "m" => match whole(key, value) {
                Ok(v) => p.m = v as u32,
                Err(status) => return status,
            },
            "n_max" => match whole(key, value) {
                Ok(v) => p.n_max = v as usize,
                Err(status) => return status,
            },
            other => return fail(SfStatus::UnknownKey, format!("unknown parameter `{other}`")),
        }
        SfStatus::Ok
    })
}

/// Reads one parameter by name into `*out`.
///
/// # Safety
/// `params` must be a live handle, `key` a NUL-terminated string and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn sf_params_get(
    params: *const SfParams,
    key: *const c_char,
    out: *mut f64,
) -> SfStatus {
    guard(|| {
        let (Some(params), false) = (params.as_ref(), out.is_null()) else {
            return fail(SfStatus::NullPointer, "params or out is null");
        };
        let key = match key_str(key) {
            Ok(k) => k,
            Err(status) => return status,
        };
        let p = &params.inner;
        let value = match key {
            "alpha" => p.alpha,
            "hematocrit" => p.hematocrit,
            "beta" => p.beta,
            "m" => p.m as f64,
            "hartmann" => p.hartmann,
            "permeability" => p.permeability,
            "l" => p.throat_spacing,
            "d" => p.onset,
            "length" => p.length,
            "severity" => p.severity,
            "tol" => p.tol,
            "n_max" => p.n_max as f64,
            other => return fail(SfStatus::UnknownKey, format!("unknown parameter `{other}`")),
        };
        *out = value;
        SfStatus::Ok
    })
}

/// Validates `params` and builds a model into `*out`. The parameter handle
/// may be freed afterwards.
///
/// # Safety
/// `params` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sf_model_new(params: *const SfParams, out: *mut *mut SfModel) -> SfStatus {
    guard(|| {
        let (Some(params), false) = (params.as_ref(), out.is_null()) else {
            return fail(SfStatus::NullPointer, "params or out is null");
        };
        *out = ptr::null_mut();
        match ArteryGeometry::new(params.inner) {
            Ok(geometry) => {
                *out = Box::into_raw(Box::new(SfModel { geometry }));
                SfStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `model` must be NULL or a handle from `sf_model_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sf_model_free(model: *mut SfModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

unsafe fn with_flow(
    model: *const SfModel,
    z: f64,
    out: *mut f64,
    f: impl FnOnce(&LocalFlow) -> f64,
) -> SfStatus {
    guard(|| {
        let (Some(model), false) = (model.as_ref(), out.is_null()) else {
            return fail(SfStatus::NullPointer, "model or out is null");
        };
        match LocalFlow::at_station(&model.geometry, z) {
            Ok(flow) => {
                *out = f(&flow);
                SfStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Wall radius ratio R(z)/R0.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sf_radius_ratio(model: *const SfModel, z: f64, out: *mut f64) -> SfStatus {
    guard(|| {
        let (Some(model), false) = (model.as_ref(), out.is_null()) else {
            return fail(SfStatus::NullPointer, "model or out is null");
        };
        let length = model.geometry.params().length;
        if !(0.0..=length).contains(&z) {
            return fail(
                SfStatus::InvalidParameter,
                format!("z = {z} outside [0, {length}]"),
            );
        }
        *out = model.geometry.radius_ratio(z);
        SfStatus::Ok
    })
}

/// Pressure gradient over its normal-artery value at station `z`.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sf_pressure_gradient_ratio(
    model: *const SfModel,
    z: f64,
    out: *mut f64,
) -> SfStatus {
    with_flow(model, z, out, LocalFlow::dpdz_bar)
}

/// Wall shear stress over its normal-artery value at station `z`.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sf_wall_shear_ratio(
    model: *const SfModel,
    z: f64,
    out: *mut f64,
) -> SfStatus {
    with_flow(model, z, out, LocalFlow::wall_shear_ratio)
}

/// Flow rate ratio at station `z` under the pressure gradient ratio
/// `dpdz_bar`. Equals 1 for the value from `sf_pressure_gradient_ratio`.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sf_flow_rate(
    model: *const SfModel,
    z: f64,
    dpdz_bar: f64,
    out: *mut f64,
) -> SfStatus {
    with_flow(model, z, out, |flow| flow.flow_rate(dpdz_bar))
}

/// Samples the velocity ratio at `n` uniform radial points from the axis to
/// the wall. `xi` and `u_bar` must each hold `n` values.
///
/// # Safety
/// `model` must be a live handle; `xi` and `u_bar` must be writable for `n`
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn sf_velocity_profile(
    model: *const SfModel,
    z: f64,
    n: usize,
    xi: *mut f64,
    u_bar: *mut f64,
) -> SfStatus {
    guard(|| {
        let Some(model) = model.as_ref() else {
            return fail(SfStatus::NullPointer, "model is null");
        };
        if xi.is_null() || u_bar.is_null() {
            return fail(SfStatus::NullPointer, "output buffer is null");
        }
        let profile = match LocalFlow::at_station(&model.geometry, z).and_then(|f| f.profile(z, n))
        {
            Ok(p) => p,
            Err(e) => return from_error(e),
        };
        std::slice::from_raw_parts_mut(xi, n).copy_from_slice(&profile.xi);
        std::slice::from_raw_parts_mut(u_bar, n).copy_from_slice(&profile.u_bar);
        SfStatus::Ok
    })
}

/// Evaluates `n` stations `z[0..n]` into `records[0..n]`. Stations are
/// independent and computed in parallel; output order follows `z`. On
/// failure `*failed_index` (if not NULL) receives the first failing station
/// and no record is written.
///
/// # Safety
/// `model` must be a live handle, `z` readable and `records` writable for
/// `n` elements; `failed_index` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn sf_axial_sweep(
    model: *const SfModel,
    z: *const f64,
    n: usize,
    records: *mut SfAxialRecord,
    failed_index: *mut usize,
) -> SfStatus {
    guard(|| {
        let Some(model) = model.as_ref() else {
            return fail(SfStatus::NullPointer, "model is null");
        };
        if n == 0 {
            return SfStatus::Ok;
        }
        if z.is_null() || records.is_null() {
            return fail(SfStatus::NullPointer, "z or records is null");
        }
        let stations = std::slice::from_raw_parts(z, n);
        let mut computed = Vec::with_capacity(n);
        for (i, result) in axial_sweep_results(&model.geometry, stations)
            .into_iter()
            .enumerate()
        {
            match result {
                Ok(r) => computed.push(SfAxialRecord {
                    z: r.z,
                    eta: r.eta,
                    dpdz_bar: r.dpdz_bar,
                    tau_bar: r.tau_bar,
                    u_center: r.u_center,
                }),
                Err(e) => {
                    if !failed_index.is_null() {
                        *failed_index = i;
                    }
                    return from_error(e);
                }
            }
        }
        std::slice::from_raw_parts_mut(records, n).copy_from_slice(&computed);
        SfStatus::Ok
    })
}
