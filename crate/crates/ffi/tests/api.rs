use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use magspec_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as std::ffi::c_char; 256];
    unsafe { magspec_last_error(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_string_lossy()
        .into_owned()
}

fn domain(shape: MagspecShape, parameter: f64, resolution: u32) -> *mut MagspecDomain {
    let mut d = ptr::null_mut();
    let s = unsafe { magspec_domain_new(shape, parameter, resolution, &mut d) };
    assert_eq!(s, MagspecStatus::Ok, "{}", last_error());
    d
}

fn torsion(d: *const MagspecDomain) -> *mut MagspecTorsion {
    let mut t = ptr::null_mut();
    assert_eq!(
        unsafe { magspec_torsion_solve(d, &mut t) },
        MagspecStatus::Ok
    );
    t
}

#[test]
fn disk_torsion_and_area() {
    let d = domain(MagspecShape::Disk, 1.0, 128);
    let mut area = 0.0;
    assert_eq!(
        unsafe { magspec_domain_area(d, &mut area) },
        MagspecStatus::Ok
    );
    assert!((area - 1.0).abs() < 0.02);
    let t = torsion(d);
    let (mut v, mut x) = (0.0, f64::NAN);
    assert_eq!(
        unsafe { magspec_torsion_max(t, &mut v, &mut x, ptr::null_mut()) },
        MagspecStatus::Ok
    );
    assert!((v - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-3);
    assert!(x.abs() < 0.02);
    unsafe {
        magspec_torsion_free(t);
        magspec_domain_free(d);
    }
}

#[test]
fn gauges_agree_on_square() {
    let d = domain(MagspecShape::Rectangle, 1.0, 64);
    let t = torsion(d);
    let (mut a, mut b) = ([0.0; 3], [0.0; 3]);
    unsafe {
        assert_eq!(
            magspec_eigenvalues(d, t, MagspecGauge::Torsion, 10.0, 3, a.as_mut_ptr()),
            MagspecStatus::Ok
        );
        assert_eq!(
            magspec_eigenvalues(
                d,
                ptr::null(),
                MagspecGauge::Landau,
                10.0,
                3,
                b.as_mut_ptr()
            ),
            MagspecStatus::Ok
        );
    }
    for (x, y) in a.iter().zip(&b) {
        assert!((x / y - 1.0).abs() < 0.03, "{a:?} vs {b:?}");
    }
    assert!(a.windows(2).all(|w| w[0] <= w[1]));
    unsafe {
        magspec_torsion_free(t);
        magspec_domain_free(d);
    }
}

#[test]
fn dirac_sandwich_and_asymmetry() {
    let d = domain(MagspecShape::Ellipse, 1.5, 96);
    let t = torsion(d);
    let (mut upper, mut lower) = ([0.0; 2], 0.0);
    let s = unsafe { magspec_dirac_bounds(d, t, 10.0, 8, 2, upper.as_mut_ptr(), &mut lower) };
    assert_eq!(s, MagspecStatus::Ok, "{}", last_error());
    assert!(lower <= upper[0] && upper[0] <= upper[1]);
    let mut alpha = 0.0;
    assert_eq!(
        unsafe { magspec_asymmetry(d, &mut alpha) },
        MagspecStatus::Ok
    );
    assert!((alpha - 0.256).abs() < 0.02);
    unsafe {
        magspec_torsion_free(t);
        magspec_domain_free(d);
    }
}

#[test]
fn errors_are_reported() {
    let mut d = ptr::null_mut();
    let s = unsafe { magspec_domain_new(MagspecShape::Ellipse, -1.0, 64, &mut d) };
    assert_eq!(s, MagspecStatus::InvalidDomain);
    assert!(d.is_null() && !last_error().is_empty());
    let bowtie = [0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0, 1.0];
    let s = unsafe { magspec_domain_polygon(bowtie.as_ptr(), 4, 64, &mut d) };
    assert_eq!(s, MagspecStatus::InvalidDomain);
    assert_eq!(
        unsafe { magspec_domain_new(MagspecShape::Disk, 1.0, 64, ptr::null_mut()) },
        MagspecStatus::NullPointer
    );
    assert_eq!(
        unsafe { magspec_domain_new(MagspecShape::Disk, 1.0, 4, &mut d) },
        MagspecStatus::InvalidDomain
    );

    let sq = domain(MagspecShape::Rectangle, 1.0, 64);
    let other = domain(MagspecShape::Disk, 1.0, 64);
    let t = torsion(other);
    let mut v = [0.0; 1];
    let s = unsafe { magspec_eigenvalues(sq, t, MagspecGauge::Torsion, 5.0, 1, v.as_mut_ptr()) };
    assert_eq!(s, MagspecStatus::InvalidArgument);
    let s = unsafe {
        magspec_eigenvalues(
            sq,
            ptr::null(),
            MagspecGauge::Torsion,
            5.0,
            1,
            v.as_mut_ptr(),
        )
    };
    assert_eq!(s, MagspecStatus::NullPointer);
    let sq_t = torsion(sq);
    let mut up = [0.0; 1];
    let s = unsafe { magspec_dirac_bounds(sq, sq_t, 0.0, 8, 1, up.as_mut_ptr(), ptr::null_mut()) };
    assert_eq!(s, MagspecStatus::Unsupported);
    let mut area = 0.0;
    assert_eq!(
        unsafe { magspec_domain_area(sq, &mut area) },
        MagspecStatus::Ok
    );
    assert!(last_error().is_empty());
    unsafe {
        magspec_torsion_free(t);
        magspec_torsion_free(sq_t);
        magspec_domain_free(sq);
        magspec_domain_free(other);
        magspec_domain_free(ptr::null_mut());
    }
}

#[test]
fn truncated_error_message_reports_full_length() {
    let mut d = ptr::null_mut();
    unsafe { magspec_domain_new(MagspecShape::Disk, 0.0, 64, &mut d) };
    let full = unsafe { magspec_last_error(ptr::null_mut(), 0) };
    let mut buf = [1 as std::ffi::c_char; 4];
    assert_eq!(unsafe { magspec_last_error(buf.as_mut_ptr(), 4) }, full);
    assert_eq!(buf[3], 0);
    let name = unsafe { CStr::from_ptr(magspec_status_name(MagspecStatus::InvalidDomain)) };
    assert_eq!(name.to_str().unwrap(), "invalid domain");
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/magspec.h");
    let text = std::fs::read_to_string(&header).unwrap();
    assert!(text.contains("magspec_eigenvalues") && text.contains("size_t n"));
    let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .status()
    else {
        return;
    };
    assert!(status.success());
}
