use std::ffi::{c_char, CString};
use std::ptr;

use bennett_linkage_ffi::*;

const SPHERICAL: &str = r#"
schema_version = 1
kind = "spherical8"
u1 = 0.0
u2 = 1.0471975511965976
u3 = 1.8325957145940461
beta1 = 0.7853981633974483
beta2 = 0.6283185307179586
branch1 = "plus"
branch2 = "plus"
derive = true
"#;

const SPATIAL: &str = r#"
schema_version = 1
kind = "spatial8"
u1 = 0.0
u2 = 1.0471975511965976
u3 = 1.8325957145940461
beta1 = 0.7853981633974483
beta2 = 0.6283185307179586
branch1 = "plus"
branch2 = "plus"
a1 = 1.0
a2 = 0.6
derive = true
"#;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    let n = unsafe { bl_last_error_message(buf.as_mut_ptr(), buf.len()) };
    let bytes: Vec<u8> = buf.iter().take(n.min(255)).map(|&c| c as u8).collect();
    String::from_utf8(bytes).unwrap()
}

fn linkage(text: &str) -> *mut BlLinkage {
    let c = CString::new(text).unwrap();
    let mut lk = ptr::null_mut();
    assert_eq!(unsafe { bl_linkage_from_toml(c.as_ptr(), &mut lk) }, BlStatus::Ok, "{}", last_error());
    lk
}

#[test]
fn coefficient_and_coupled_angle() {
    let mut c = 0.0;
    let s = unsafe { bl_transmission_coefficient(0.9, 0.9, BlBranch::Plus as i32, &mut c) };
    assert_eq!(s, BlStatus::Ok);
    assert_eq!(c, 0.0);
    assert_eq!(bl_coupled_angle(0.0, 1.0), 0.0);
    assert!((bl_coupled_angle(0.5, std::f64::consts::FRAC_PI_2) - 2.0 * 0.5f64.atan()).abs() < 1e-15);

    let s = unsafe { bl_transmission_coefficient(0.7, 0.7, BlBranch::Minus as i32, &mut c) };
    assert_eq!(s, BlStatus::DegenerateGeometry);
    assert!(last_error().contains("denominator"));
    let s = unsafe { bl_transmission_coefficient(0.7, 0.3, 5, &mut c) };
    assert_eq!(s, BlStatus::InvalidArgument);
    let s = unsafe { bl_transmission_coefficient(0.7, 0.3, 0, ptr::null_mut()) };
    assert_eq!(s, BlStatus::NullPointer);
}

#[test]
fn spherical_pose_round_trip() {
    let lk = linkage(SPHERICAL);
    assert_eq!(unsafe { bl_linkage_is_spatial(lk) }, 0);
    let mut pose = ptr::null_mut();
    assert_eq!(unsafe { bl_linkage_assemble(lk, 0.8, &mut pose) }, BlStatus::Ok);
    assert_eq!(unsafe { bl_pose_is_collapsed(pose) }, 0);
    let n = unsafe { bl_pose_coordinate_count(pose) };
    assert_eq!(n, 36);
    let mut xs = vec![f64::NAN; n];
    assert_eq!(unsafe { bl_pose_joint_coordinates(pose, xs.as_mut_ptr(), n) }, BlStatus::Ok);
    for j in xs.chunks(3) {
        assert!((j[0] * j[0] + j[1] * j[1] + j[2] * j[2] - 1.0).abs() < 1e-12);
    }
    // R01 sits at u1 on the base circle
    assert!((xs[0] - 1.0).abs() < 1e-12 && xs[2].abs() < 1e-12);
    let mut r = f64::NAN;
    assert_eq!(unsafe { bl_pose_max_residual(pose, &mut r) }, BlStatus::Ok);
    assert!(r < 1e-9, "{r}");
    assert_eq!(unsafe { bl_pose_joint_coordinates(pose, xs.as_mut_ptr(), 10) }, BlStatus::BufferTooSmall);
    assert!(last_error().contains("36"));
    unsafe {
        bl_pose_free(pose);
        bl_linkage_free(lk);
    }
}

#[test]
fn spatial_pose_and_collapse() {
    let lk = linkage(SPATIAL);
    assert_eq!(unsafe { bl_linkage_is_spatial(lk) }, 1);
    let mut pose = ptr::null_mut();
    assert_eq!(unsafe { bl_linkage_assemble(lk, 0.0, &mut pose) }, BlStatus::Ok);
    assert_eq!(unsafe { bl_pose_is_collapsed(pose) }, 1);
    assert_eq!(unsafe { bl_pose_coordinate_count(pose) }, 72);
    let mut r = f64::NAN;
    assert_eq!(unsafe { bl_pose_max_residual(pose, &mut r) }, BlStatus::Ok);
    assert!(r < 1e-10);
    unsafe { bl_pose_free(pose) };
    assert_eq!(unsafe { bl_linkage_assemble(lk, f64::NAN, &mut pose) }, BlStatus::InvalidArgument);
    unsafe { bl_linkage_free(lk) };
}

#[test]
fn rejected_specs_report_why() {
    let mut lk = ptr::null_mut();
    let bad = CString::new(SPHERICAL.replace("u3 = 1.8325957145940461", "u3 = 3.3")).unwrap();
    assert_eq!(unsafe { bl_linkage_from_toml(bad.as_ptr(), &mut lk) }, BlStatus::InvalidSpec);
    assert!(lk.is_null());
    assert!(last_error().contains("u3 - u1"), "{}", last_error());

    let iso = CString::new("schema_version = 1\nkind = \"spherical-isogram\"\nalpha = 1.0\nbeta = 0.5\nbranch = \"plus\"\n").unwrap();
    assert_eq!(unsafe { bl_linkage_from_toml(iso.as_ptr(), &mut lk) }, BlStatus::InvalidSpec);

    let invalid = [0xffu8 as c_char, 0];
    assert_eq!(unsafe { bl_linkage_from_toml(invalid.as_ptr(), &mut lk) }, BlStatus::InvalidUtf8);
    assert_eq!(unsafe { bl_linkage_from_toml(ptr::null(), &mut lk) }, BlStatus::NullPointer);
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        bl_linkage_free(ptr::null_mut());
        bl_pose_free(ptr::null_mut());
        assert_eq!(bl_pose_is_collapsed(ptr::null()), 0);
        assert_eq!(bl_pose_coordinate_count(ptr::null()), 0);
        let mut pose = ptr::null_mut();
        assert_eq!(bl_linkage_assemble(ptr::null(), 0.3, &mut pose), BlStatus::NullPointer);
    }
}

#[test]
fn message_truncates_and_reports_length() {
    let mut c = 0.0;
    unsafe { bl_transmission_coefficient(-1.0, 0.5, 0, &mut c) };
    let mut small = [1 as c_char; 8];
    let n = unsafe { bl_last_error_message(small.as_mut_ptr(), small.len()) };
    assert!(n > 7);
    assert_eq!(small[7], 0);
    assert_eq!(unsafe { bl_last_error_message(ptr::null_mut(), 0) }, n);
}

#[test]
fn header_is_current() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/bennett_linkage.h")).unwrap();
    for name in [
        "bl_last_error_message",
        "bl_transmission_coefficient",
        "bl_coupled_angle",
        "bl_linkage_from_toml",
        "bl_linkage_free",
        "bl_linkage_is_spatial",
        "bl_linkage_assemble",
        "bl_pose_free",
        "bl_pose_is_collapsed",
        "bl_pose_coordinate_count",
        "bl_pose_joint_coordinates",
        "bl_pose_max_residual",
        "typedef struct BlLinkage BlLinkage;",
        "BL_STATUS_CLOSURE_FAILURE = 6",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let status = std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-Iinclude", "examples/pose.c"])
        .current_dir(dir)
        .status();
    match status {
        Ok(s) => assert!(s.success(), "cc rejected the header or example"),
        Err(e) => eprintln!("skipped: no C compiler ({e})"),
    }
}
