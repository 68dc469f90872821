//! C ABI over `magspec`.
//!
//! Every fallible call returns a [`MagspecStatus`]; on anything other than
//! `MAGSPEC_STATUS_OK` the message is available from [`magspec_last_error`]
//! on the same thread. Handles are opaque, owned by the caller and released
//! with the matching `_free` function. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use magspec::dirac::dirac_bounds;
use magspec::geometry::{mask_asymmetry, rasterize, DomainSpec, RasterDomain};
use magspec::maglap::{assemble_landau, assemble_torsion_gauge, eigenvalues};
use magspec::torsion::{solve_torsion_fd, TorsionField};
use magspec::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MagspecStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidDomain = 3,
    NumericalFailure = 4,
    Unsupported = 5,
    Io = 6,
    Panic = 7,
}

/// Built-in unit-area shapes; the parameter is the aspect ratio, or the area
/// for a disk.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MagspecShape {
    Disk = 0,
    Rectangle = 1,
    Ellipse = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MagspecGauge {
    /// Needs the torsion function of the same domain.
    Torsion = 0,
    Landau = 1,
}

/// A rasterized domain.
pub struct MagspecDomain {
    raster: RasterDomain,
}

/// Torsion function of one [`MagspecDomain`].
pub struct MagspecTorsion {
    spec: DomainSpec,
    resolution: usize,
    field: TorsionField,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(message: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = message);
}

struct Failure(MagspecStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidDomain(_)
            | Error::NonSimplePolygon(..)
            | Error::EmptyMask
            | Error::DisconnectedMask { .. }
            | Error::ResolutionTooLow(..)
            | Error::DomainFile { .. } => MagspecStatus::InvalidDomain,
            Error::InvalidArgument(_) | Error::WeightOverflow(_) => MagspecStatus::InvalidArgument,
            Error::NotPositiveDefinite { .. }
            | Error::LinearSolve { .. }
            | Error::EigenNonConvergence { .. } => MagspecStatus::NumericalFailure,
            Error::Unsupported(_) => MagspecStatus::Unsupported,
            Error::Io(_) | Error::Csv(_) | Error::Json(_) => MagspecStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(MagspecStatus::NullPointer, format!("{what} is null"))
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure(MagspecStatus::InvalidArgument, message.into())
}

/// Runs `f`, records its error message and converts panics to a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MagspecStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            MagspecStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| (*s).to_owned())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_owned());
            set_error(format!("internal panic: {message}"));
            MagspecStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    // SAFETY: the caller passes null or a valid, live pointer.
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null and, per the caller's contract, writable.
    unsafe { out.write(value) };
    Ok(())
}

fn new_domain(spec: DomainSpec, resolution: u32) -> Result<*mut MagspecDomain, Failure> {
    let raster = rasterize(&spec, resolution as usize)?;
    Ok(Box::into_raw(Box::new(MagspecDomain { raster })))
}

fn torsion_for<'a>(
    d: &MagspecDomain,
    t: *const MagspecTorsion,
) -> Result<&'a TorsionField, Failure> {
    // SAFETY: forwarded from the caller's contract.
    let t = unsafe { deref(t, "torsion") }?;
    if t.spec != d.raster.spec || t.resolution != d.raster.resolution {
        return Err(invalid(
            "torsion handle belongs to a different domain or resolution",
        ));
    }
    Ok(&t.field)
}

/// Rasterizes a built-in shape at `resolution` cells per unit length.
///
/// # Safety
/// `out` must be null or valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn magspec_domain_new(
    shape: MagspecShape,
    parameter: f64,
    resolution: u32,
    out: *mut *mut MagspecDomain,
) -> MagspecStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = match shape {
            MagspecShape::Disk => DomainSpec::disk(parameter),
            MagspecShape::Rectangle => DomainSpec::rectangle(parameter),
            MagspecShape::Ellipse => DomainSpec::ellipse(parameter),
        }?;
        // SAFETY: checked non-null above.
        unsafe { write(out, new_domain(spec, resolution)?, "out") }
    })
}

/// Rasterizes the simple polygon with `vertex_count` vertices stored as
/// interleaved `x, y` pairs.
///
/// # Safety
/// `xy` must point to `2 * vertex_count` readable doubles; `out` must be null
/// or valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn magspec_domain_polygon(
    xy: *const f64,
    vertex_count: usize,
    resolution: u32,
    out: *mut *mut MagspecDomain,
) -> MagspecStatus {
    guard(|| {
        if xy.is_null() {
            return Err(null("xy"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        // SAFETY: the caller guarantees 2 * vertex_count readable values.
        let coords = unsafe { std::slice::from_raw_parts(xy, 2 * vertex_count) };
        let vertices = coords.chunks_exact(2).map(|c| [c[0], c[1]]).collect();
        let spec = DomainSpec::polygon(vertices)?;
        // SAFETY: checked non-null above.
        unsafe { write(out, new_domain(spec, resolution)?, "out") }
    })
}

/// # Safety
/// `domain` must be null or a handle from a `magspec_domain_*` constructor
/// that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn magspec_domain_free(domain: *mut MagspecDomain) {
    if !domain.is_null() {
        // SAFETY: allocated by Box::into_raw in new_domain.
        drop(unsafe { Box::from_raw(domain) });
    }
}

/// Rasterized area: cell count times cell area.
///
/// # Safety
/// `domain` must be a live handle; `area` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn magspec_domain_area(
    domain: *const MagspecDomain,
    area: *mut f64,
) -> MagspecStatus {
    guard(|| {
        // SAFETY: caller contract.
        let d = unsafe { deref(domain, "domain") }?;
        unsafe { write(area, d.raster.mask.area(), "area") }
    })
}

/// Fraenkel asymmetry of the rasterized domain.
///
/// # Safety
/// `domain` must be a live handle; `alpha` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn magspec_asymmetry(
    domain: *const MagspecDomain,
    alpha: *mut f64,
) -> MagspecStatus {
    guard(|| {
        // SAFETY: caller contract.
        let d = unsafe { deref(domain, "domain") }?;
        let a = mask_asymmetry(&d.raster.mask, d.raster.area());
        unsafe { write(alpha, a.alpha, "alpha") }
    })
}

/// Solves the torsion problem on `domain`.
///
/// # Safety
/// `domain` must be a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn magspec_torsion_solve(
    domain: *const MagspecDomain,
    out: *mut *mut MagspecTorsion,
) -> MagspecStatus {
    guard(|| {
        // SAFETY: caller contract.
        let d = unsafe { deref(domain, "domain") }?;
        if out.is_null() {
            return Err(null("out"));
        }
        let field = solve_torsion_fd(&d.raster)?;
        let t = MagspecTorsion {
            spec: d.raster.spec.clone(),
            resolution: d.raster.resolution,
            field,
        };
        unsafe { write(out, Box::into_raw(Box::new(t)), "out") }
    })
}

/// # Safety
/// `torsion` must be null or a handle from [`magspec_torsion_solve`] that
/// has not been freed.
#[no_mangle]
pub unsafe extern "C" fn magspec_torsion_free(torsion: *mut MagspecTorsion) {
    if !torsion.is_null() {
        // SAFETY: allocated by Box::into_raw in magspec_torsion_solve.
        drop(unsafe { Box::from_raw(torsion) });
    }
}

/// Maximum of the torsion function and a maximizer. `x` and `y` may be null.
///
/// # Safety
/// `torsion` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn magspec_torsion_max(
    torsion: *const MagspecTorsion,
    value: *mut f64,
    x: *mut f64,
    y: *mut f64,
) -> MagspecStatus {
    guard(|| {
        // SAFETY: caller contract.
        let t = unsafe { deref(torsion, "torsion") }?;
        unsafe { write(value, t.field.max_value, "value") }?;
        let [px, py] = t.field.max_location;
        // SAFETY: optional outputs are written only when non-null.
        unsafe {
            if !x.is_null() {
                x.write(px);
            }
            if !y.is_null() {
                y.write(py);
            }
        }
        Ok(())
    })
}

/// The `n` lowest eigenvalues of the magnetic Dirichlet Laplacian shifted by
/// `field`, ascending, written to `values[0..n]`. `torsion` is required for
/// the torsion gauge and ignored for the Landau gauge.
///
/// # Safety
/// `domain` must be a live handle, `torsion` null or a live handle, and
/// `values` valid for `n` writes.
#[no_mangle]
pub unsafe extern "C" fn magspec_eigenvalues(
    domain: *const MagspecDomain,
    torsion: *const MagspecTorsion,
    gauge: MagspecGauge,
    field: f64,
    n: usize,
    values: *mut f64,
) -> MagspecStatus {
    guard(|| {
        // SAFETY: caller contract.
        let d = unsafe { deref(domain, "domain") }?;
        if values.is_null() {
            return Err(null("values"));
        }
        if n == 0 {
            return Err(invalid("n must be at least 1"));
        }
        let form = match gauge {
            MagspecGauge::Landau => assemble_landau(&d.raster, field)?,
            MagspecGauge::Torsion => {
                assemble_torsion_gauge(&d.raster, field, torsion_for(d, torsion)?)?
            }
        };
        let s = eigenvalues(&form, n)?;
        // SAFETY: the caller guarantees room for n values.
        let out = unsafe { std::slice::from_raw_parts_mut(values, n) };
        out.copy_from_slice(&s.eigenvalues[..n]);
        Ok(())
    })
}

/// Upper bounds for the first `n` positive Dirac eigenvalues from the
/// magnetic Hardy space of degree `basis_degree`, written to `upper[0..n]`,
/// and the analytic lower bound for the first one written to `lower`
/// (may be null). Smooth shapes only.
///
/// # Safety
/// `domain` and `torsion` must be live handles for the same domain, `upper`
/// valid for `n` writes, and `lower` null or writable.
#[no_mangle]
pub unsafe extern "C" fn magspec_dirac_bounds(
    domain: *const MagspecDomain,
    torsion: *const MagspecTorsion,
    field: f64,
    basis_degree: usize,
    n: usize,
    upper: *mut f64,
    lower: *mut f64,
) -> MagspecStatus {
    guard(|| {
        // SAFETY: caller contract.
        let d = unsafe { deref(domain, "domain") }?;
        let tf = torsion_for(d, torsion)?;
        if upper.is_null() {
            return Err(null("upper"));
        }
        if n == 0 {
            return Err(invalid("n must be at least 1"));
        }
        let rows = dirac_bounds(&d.raster, tf, field, basis_degree, n)?;
        // SAFETY: the caller guarantees room for n values.
        let out = unsafe { std::slice::from_raw_parts_mut(upper, n) };
        for (o, r) in out.iter_mut().zip(&rows) {
            *o = r.upper;
        }
        if !lower.is_null() {
            // SAFETY: non-null and writable per the contract.
            unsafe { lower.write(rows[0].lower.unwrap_or(f64::NAN)) };
        }
        Ok(())
    })
}

/// Copies the last error message of this thread into `buffer` (truncated,
/// always NUL-terminated when `capacity > 0`) and returns the length of the
/// full message excluding the terminator. The message is empty after a
/// successful call.
///
/// # Safety
/// `buffer` must be null or valid for `capacity` writes.
#[no_mangle]
pub unsafe extern "C" fn magspec_last_error(buffer: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|e| {
        let message = e.borrow();
        let bytes = message.as_bytes();
        if !buffer.is_null() && capacity > 0 {
            let len = bytes.len().min(capacity - 1);
            // SAFETY: len + 1 ≤ capacity writable bytes.
            unsafe {
                ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buffer, len);
                buffer.add(len).write(0);
            }
        }
        bytes.len()
    })
}

/// Static, NUL-terminated name of `status`.
#[no_mangle]
pub extern "C" fn magspec_status_name(status: MagspecStatus) -> *const c_char {
    let name: &'static CStr = match status {
        MagspecStatus::Ok => c"ok",
        MagspecStatus::NullPointer => c"null pointer",
        MagspecStatus::InvalidArgument => c"invalid argument",
        MagspecStatus::InvalidDomain => c"invalid domain",
        MagspecStatus::NumericalFailure => c"numerical failure",
        MagspecStatus::Unsupported => c"unsupported",
        MagspecStatus::Io => c"i/o error",
        MagspecStatus::Panic => c"internal panic",
    };
    name.as_ptr()
}
