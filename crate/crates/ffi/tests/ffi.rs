use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use commat_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    commat_string_free(p);
    s
}

fn last_error() -> String {
    unsafe { take(commat_last_error()) }
}

const D3EQ: &str = include_str!("../../core/assets/d3genEq.cdg");

#[test]
fn diagram_handle_lifecycle() {
    unsafe {
        let mut d = ptr::null_mut();
        assert_eq!(
            commat_diagram_parse(c(D3EQ).as_ptr(), ptr::null(), &mut d),
            CommatStatus::Ok
        );
        let (mut v, mut g, mut e) = (0, 0, 0);
        assert_eq!(
            commat_diagram_size(d, &mut v, &mut g, &mut e),
            CommatStatus::Ok
        );
        assert_eq!((v, g, e), (7, 3, 12));
        let mut violations = 99;
        assert_eq!(commat_diagram_lint(d, &mut violations), CommatStatus::Ok);
        assert_eq!(violations, 0);
        let (mut m, mut a) = (0, 0);
        assert_eq!(commat_diagram_dims(d, &mut m, &mut a), CommatStatus::Ok);
        assert_eq!((m, a), (7, 7));
        let mut json = ptr::null_mut();
        assert_eq!(commat_diagram_report_json(d, &mut json), CommatStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["input"]["kind"], "inline");
        assert!(v["relations"]
            .as_array()
            .unwrap()
            .iter()
            .any(|r| r == "a^2 = bc"));
        let mut text = ptr::null_mut();
        assert_eq!(commat_diagram_to_cdg(d, &mut text), CommatStatus::Ok);
        let round = take(text);
        commat_diagram_free(d);

        let mut d2 = ptr::null_mut();
        assert_eq!(
            commat_diagram_parse(c(&round).as_ptr(), c("F3").as_ptr(), &mut d2),
            CommatStatus::Ok
        );
        assert_eq!(commat_diagram_dims(d2, &mut m, &mut a), CommatStatus::Ok);
        assert_eq!((m, a), (7, 7));
        commat_diagram_free(d2);
        commat_diagram_free(ptr::null_mut());
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let mut d = ptr::null_mut();
        let bad = c("gens a\nverts x y\na: x -> q\n");
        assert_eq!(
            commat_diagram_parse(bad.as_ptr(), ptr::null(), &mut d),
            CommatStatus::ParseError
        );
        assert!(d.is_null());
        assert!(last_error().contains("unknown name `q`"));

        assert_eq!(
            commat_diagram_parse(ptr::null(), ptr::null(), &mut d),
            CommatStatus::NullPointer
        );
        let invalid = [0xffu8, 0];
        assert_eq!(
            commat_diagram_parse(invalid.as_ptr().cast(), ptr::null(), &mut d),
            CommatStatus::InvalidUtf8
        );
        let ok = c("gens a b\nverts x y z\na: x -> y\nb: y -> z\n");
        assert_eq!(
            commat_diagram_parse(ok.as_ptr(), c("F9").as_ptr(), &mut d),
            CommatStatus::InvalidArgument
        );
        assert_eq!(
            commat_diagram_parse(ok.as_ptr(), ptr::null(), &mut d),
            CommatStatus::Ok
        );
        let mut count = 0;
        assert_eq!(commat_diagram_lint(d, &mut count), CommatStatus::Ok);
        assert_eq!(count, 1);
        let (mut m, mut a) = (0, 0);
        assert_eq!(
            commat_diagram_dims(d, &mut m, &mut a),
            CommatStatus::NonCommuting
        );
        assert!(last_error().contains("do not commute"));
        assert_eq!(
            commat_diagram_dims(d, ptr::null_mut(), &mut a),
            CommatStatus::NonCommuting
        );
        commat_diagram_free(d);
        assert_eq!(
            commat_diagram_dims(ptr::null(), &mut m, &mut a),
            CommatStatus::NullPointer
        );
    }
}

#[test]
fn last_error_is_per_thread() {
    unsafe {
        let mut d = ptr::null_mut();
        assert_eq!(
            commat_diagram_parse(ptr::null(), ptr::null(), &mut d),
            CommatStatus::NullPointer
        );
    }
    let other = std::thread::spawn(|| commat_last_error().is_null())
        .join()
        .unwrap();
    assert!(other);
    assert!(last_error().contains("null"));
}

#[test]
fn families_rt_and_search() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(
            commat_family_report_json(
                c("abxy").as_ptr(),
                2,
                0,
                0,
                ptr::null(),
                0,
                ptr::null(),
                &mut out
            ),
            CommatStatus::Ok
        );
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(
            (v["dimM"].as_u64(), v["dimA"].as_u64()),
            (Some(13), Some(16))
        );
        let n = [1usize, 1, 1, 1];
        assert_eq!(
            commat_family_report_json(
                c("frobenius").as_ptr(),
                0,
                0,
                0,
                n.as_ptr(),
                4,
                c("F2").as_ptr(),
                &mut out
            ),
            CommatStatus::Ok
        );
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["socleLength"], 1);
        assert_eq!(
            commat_family_report_json(
                c("de").as_ptr(),
                3,
                0,
                0,
                ptr::null(),
                0,
                c("F3").as_ptr(),
                &mut out
            ),
            CommatStatus::InvalidArgument
        );
        assert!(last_error().contains("at least 4"));

        assert_eq!(
            commat_rt_json(
                c("Z").as_ptr(),
                c("4,2").as_ptr(),
                c("0").as_ptr(),
                0,
                &mut out
            ),
            CommatStatus::Ok
        );
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!((v["ltA"].as_u64(), v["ltM"].as_u64()), (Some(2), Some(3)));
        assert_eq!(
            commat_rt_json(
                c("F2x").as_ptr(),
                c("x^3,x").as_ptr(),
                ptr::null(),
                5,
                &mut out
            ),
            CommatStatus::Ok
        );
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["holds"], true);
        assert_eq!(
            commat_rt_json(
                c("Z").as_ptr(),
                c("4,2").as_ptr(),
                c("[[1,2],[1,1]]").as_ptr(),
                0,
                &mut out
            ),
            CommatStatus::InvalidArgument
        );

        assert_eq!(
            commat_search_json(4, 4, 0, 2, ptr::null(), &mut out),
            CommatStatus::Ok
        );
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["bestExcess"]["excess"], 1);
        assert_eq!(
            commat_search_json(0, 4, 0, 1, ptr::null(), &mut out),
            CommatStatus::InvalidArgument
        );
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(commat_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

/// Compiles a small C program against the generated header and static library.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include/commat.h");
    assert!(header.exists(), "header is generated by the build script");
    let deps = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let lib_dir = deps.parent().unwrap();
    let lib = lib_dir.join("libcommat_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("no C compiler or static library; skipping");
        return;
    }
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("commat_smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("4 5 "), "{text}");
}
