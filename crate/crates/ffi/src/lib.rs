//! C ABI over the 8-bar linkages.
//!
//! Handles are opaque and owned by the caller once returned; free each one
//! with its `_free` function. Every fallible call returns a [`BlStatus`] and
//! leaves a message for [`bl_last_error_message`] on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use bennett_linkage::cli::specfile::SpecFile;
use bennett_linkage::cli::{load, Loaded};
use bennett_linkage::isogram::{coupled_angle, transmission_coefficient, Branch, SphericalIsogramSpec};
use bennett_linkage::linkage::{AnyPose, EightBar};
use bennett_linkage::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidSpec = 3,
    InvalidArgument = 4,
    DegenerateGeometry = 5,
    ClosureFailure = 6,
    CollapsedPose = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlBranch {
    Plus = 0,
    Minus = 1,
}

fn branch_of(code: i32) -> Option<Branch> {
    match code {
        c if c == BlBranch::Plus as i32 => Some(Branch::Plus),
        c if c == BlBranch::Minus as i32 => Some(Branch::Minus),
        _ => None,
    }
}

/// A validated spherical or spatial 8-bar.
pub struct BlLinkage {
    inner: EightBar,
}

/// One assembled pose of a [`BlLinkage`].
pub struct BlPose {
    inner: AnyPose,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn fail(status: BlStatus, message: impl Into<String>) -> BlStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = message.into());
    status
}

fn status_of(e: &Error) -> BlStatus {
    match e {
        Error::InvalidSpec(_) => BlStatus::InvalidSpec,
        Error::InvalidArgument(_) => BlStatus::InvalidArgument,
        Error::ClosureFailure { .. } => BlStatus::ClosureFailure,
        Error::CollapsedPose(_) => BlStatus::CollapsedPose,
        Error::DegenerateCircle(_) | Error::ParallelLines(_) | Error::NoFiniteAxis | Error::DegenerateBranch { .. } => {
            BlStatus::DegenerateGeometry
        }
    }
}

fn from_error(e: Error) -> BlStatus {
    fail(status_of(&e), e.to_string())
}

/// Runs `f`, turning a panic into [`BlStatus::Panic`] so it never unwinds
/// across the boundary.
fn guard(f: impl FnOnce() -> BlStatus) -> BlStatus {
    LAST_ERROR.with(|e| e.borrow_mut().clear());
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(BlStatus::Panic, "internal panic"))
}

/// Copies the last error message of this thread into `buf` as a
/// NUL-terminated string, truncating to fit. Returns the full message
/// length in bytes, without the terminator; 0 when there is no error.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes of writes.
#[no_mangle]
pub unsafe extern "C" fn bl_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            // SAFETY: caller guarantees `len` writable bytes at `buf`
            unsafe {
                std::ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
                *buf.add(n) = 0;
            }
        }
        msg.len()
    })
}

/// Transmission coefficient `c21` of a spherical isogram, so that
/// `tan(phi2/2) = c21 tan(phi1/2)`. `branch` is a [`BlBranch`] value.
///
/// # Safety
/// `out` must be null or point to a writable `double`.
#[no_mangle]
pub unsafe extern "C" fn bl_transmission_coefficient(alpha: f64, beta: f64, branch: i32, out: *mut f64) -> BlStatus {
    guard(|| {
        if out.is_null() {
            return fail(BlStatus::NullPointer, "out is null");
        }
        let Some(branch) = branch_of(branch) else {
            return fail(BlStatus::InvalidArgument, format!("branch must be 0 (plus) or 1 (minus), got {branch}"));
        };
        match SphericalIsogramSpec::new(alpha, beta, branch).and_then(|s| transmission_coefficient(&s)) {
            Ok(c) => {
                // SAFETY: checked non-null, caller guarantees validity
                unsafe { *out = c };
                BlStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Arm angle at B for arm angle `phi1` at A, in (-pi, pi]. NaN in, NaN out.
#[no_mangle]
pub extern "C" fn bl_coupled_angle(c21: f64, phi1: f64) -> f64 {
    coupled_angle(c21, phi1)
}

/// Parses a TOML spec of kind `spherical8` or `spatial8` and builds the
/// linkage. On success `*out` owns a new handle.
///
/// # Safety
/// `toml` must be null or a NUL-terminated string; `out` must be null or
/// point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn bl_linkage_from_toml(toml: *const c_char, out: *mut *mut BlLinkage) -> BlStatus {
    guard(|| {
        if toml.is_null() || out.is_null() {
            return fail(BlStatus::NullPointer, "toml and out must be non-null");
        }
        // SAFETY: caller guarantees a NUL-terminated string
        let Ok(text) = unsafe { CStr::from_ptr(toml) }.to_str() else {
            return fail(BlStatus::InvalidUtf8, "spec text is not UTF-8");
        };
        let loaded = match SpecFile::parse(text).and_then(|s| load(&s)) {
            Ok(l) => l,
            Err(e) => return from_error(e),
        };
        let Loaded::EightBar(inner) = loaded else {
            return fail(BlStatus::InvalidSpec, "expected kind spherical8 or spatial8");
        };
        // SAFETY: checked non-null
        unsafe { *out = Box::into_raw(Box::new(BlLinkage { inner })) };
        BlStatus::Ok
    })
}

/// # Safety
/// `linkage` must be null or a handle from [`bl_linkage_from_toml`] not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn bl_linkage_free(linkage: *mut BlLinkage) {
    if !linkage.is_null() {
        // SAFETY: caller hands back ownership of a live handle
        drop(unsafe { Box::from_raw(linkage) });
    }
}

/// 1 for a spatial linkage, 0 for a spherical one or a null handle.
///
/// # Safety
/// `linkage` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bl_linkage_is_spatial(linkage: *const BlLinkage) -> i32 {
    // SAFETY: caller guarantees a live handle or null
    unsafe { linkage.as_ref() }.map_or(0, |l| i32::from(l.inner.is_spatial()))
}

/// Assembles the pose with driving angle `phi1`. Aligned poses are valid
/// results, see [`bl_pose_is_collapsed`].
///
/// # Safety
/// `linkage` must be null or a live handle; `out` must be null or point to
/// writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn bl_linkage_assemble(linkage: *const BlLinkage, phi1: f64, out: *mut *mut BlPose) -> BlStatus {
    guard(|| {
        // SAFETY: caller guarantees a live handle or null
        let Some(l) = (unsafe { linkage.as_ref() }) else {
            return fail(BlStatus::NullPointer, "linkage is null");
        };
        if out.is_null() {
            return fail(BlStatus::NullPointer, "out is null");
        }
        match l.inner.assemble(phi1) {
            Ok(inner) => {
                // SAFETY: checked non-null
                unsafe { *out = Box::into_raw(Box::new(BlPose { inner })) };
                BlStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `pose` must be null or a handle from [`bl_linkage_assemble`] not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn bl_pose_free(pose: *mut BlPose) {
    if !pose.is_null() {
        // SAFETY: caller hands back ownership of a live handle
        drop(unsafe { Box::from_raw(pose) });
    }
}

/// 1 when every bar lies on the base circle or line, else 0 (also for null).
///
/// # Safety
/// `pose` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bl_pose_is_collapsed(pose: *const BlPose) -> i32 {
    // SAFETY: caller guarantees a live handle or null
    unsafe { pose.as_ref() }.map_or(0, |p| i32::from(p.inner.is_collapsed()))
}

/// Number of doubles [`bl_pose_joint_coordinates`] writes: 36 for a
/// spherical pose (12 unit vectors), 72 for a spatial one (12 lines as
/// point then direction). 0 for null.
///
/// # Safety
/// `pose` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bl_pose_coordinate_count(pose: *const BlPose) -> usize {
    // SAFETY: caller guarantees a live handle or null
    unsafe { pose.as_ref() }.map_or(0, |p| p.inner.joint_coordinates().len())
}

/// Writes the joint coordinates in the order R01, R02, R03, R10, R12, R13,
/// R20, R21, R23, R30, R31, R32.
///
/// # Safety
/// `pose` must be null or a live handle; `buf` must be null or valid for
/// `len` doubles of writes.
#[no_mangle]
pub unsafe extern "C" fn bl_pose_joint_coordinates(pose: *const BlPose, buf: *mut f64, len: usize) -> BlStatus {
    guard(|| {
        // SAFETY: caller guarantees a live handle or null
        let Some(p) = (unsafe { pose.as_ref() }) else {
            return fail(BlStatus::NullPointer, "pose is null");
        };
        if buf.is_null() {
            return fail(BlStatus::NullPointer, "buf is null");
        }
        let xs = p.inner.joint_coordinates();
        if len < xs.len() {
            return fail(BlStatus::BufferTooSmall, format!("need {} doubles, got {len}", xs.len()));
        }
        // SAFETY: `buf` holds at least `xs.len()` doubles
        unsafe { std::ptr::copy_nonoverlapping(xs.as_ptr(), buf, xs.len()) };
        BlStatus::Ok
    })
}

/// Largest residual over every check that applies to the pose: the
/// symmetry statements for regular poses, the alignment check for
/// collapsed ones.
///
/// # Safety
/// `pose` must be null or a live handle; `out` must be null or point to a
/// writable `double`.
#[no_mangle]
pub unsafe extern "C" fn bl_pose_max_residual(pose: *const BlPose, out: *mut f64) -> BlStatus {
    guard(|| {
        // SAFETY: caller guarantees a live handle or null
        let Some(p) = (unsafe { pose.as_ref() }) else {
            return fail(BlStatus::NullPointer, "pose is null");
        };
        if out.is_null() {
            return fail(BlStatus::NullPointer, "out is null");
        }
        let r = if p.inner.is_collapsed() {
            p.inner.collapse_residual()
        } else {
            match p.inner.report() {
                Ok(r) => r.max(),
                Err(e) => return from_error(e),
            }
        };
        // SAFETY: checked non-null
        unsafe { *out = r };
        BlStatus::Ok
    })
}
