use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use crgsys_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { crg_string_free(s) };
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(crg_last_error_message()) }.to_str().unwrap().to_string()
}

fn compute(group: &str, source: Option<&str>) -> Result<*mut CrgSystem, (CrgStatus, String)> {
    let g = CString::new(group).unwrap();
    let s = source.map(|s| CString::new(s).unwrap());
    let mut out = ptr::null_mut();
    let st = unsafe { crg_compute(g.as_ptr(), s.as_ref().map_or(ptr::null(), |s| s.as_ptr()), &mut out) };
    if st == CrgStatus::CrgOk { Ok(out) } else { Err((st, last_error())) }
}

#[test]
fn d8_round_trip() {
    let sys = compute("D8", None).unwrap();
    assert_eq!(unsafe { crg_system_rank(sys) }, 2);
    assert_eq!(unsafe { crg_system_verify(sys) }, CrgStatus::CrgOk);
    assert_eq!(last_error(), "");

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { crg_system_to_json(sys, &mut s) }, CrgStatus::CrgOk);
    let json = take(s);
    assert!(json.contains("\"group\""));

    let c = CString::new(json.clone()).unwrap();
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { crg_system_from_json(c.as_ptr(), &mut back) }, CrgStatus::CrgOk);
    assert_eq!(unsafe { crg_system_verify(back) }, CrgStatus::CrgOk);
    let mut s2 = ptr::null_mut();
    assert_eq!(unsafe { crg_system_to_json(back, &mut s2) }, CrgStatus::CrgOk);
    assert_eq!(take(s2), json);

    let mut r = ptr::null_mut();
    assert_eq!(unsafe { crg_system_report(back, &mut r) }, CrgStatus::CrgOk);
    assert_eq!(take(r), "");
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { crg_system_report(sys, &mut r) }, CrgStatus::CrgOk);
    assert!(take(r).contains("integrability"));

    let fmt = CString::new("latex").unwrap();
    let mut l = ptr::null_mut();
    assert_eq!(unsafe { crg_system_render(sys, fmt.as_ptr(), &mut l) }, CrgStatus::CrgOk);
    assert!(take(l).contains("\\begin{pmatrix}"));
    let fmt = CString::new("yaml").unwrap();
    let mut l = ptr::null_mut();
    assert_eq!(unsafe { crg_system_render(sys, fmt.as_ptr(), &mut l) }, CrgStatus::CrgErrInput);
    assert!(l.is_null());

    unsafe {
        crg_system_free(sys);
        crg_system_free(back);
        crg_system_free(ptr::null_mut());
        crg_string_free(ptr::null_mut());
    }
}

#[test]
fn reynolds_source() {
    let sys = compute("G(2,1,2)", Some("reynolds")).unwrap();
    assert_eq!(unsafe { crg_system_verify(sys) }, CrgStatus::CrgOk);
    unsafe { crg_system_free(sys) };
    assert_eq!(compute("D8", Some("magic")).unwrap_err().0, CrgStatus::CrgErrInput);
}

#[test]
fn unknown_group() {
    let (st, msg) = compute("G99", None).unwrap_err();
    assert_eq!(st, CrgStatus::CrgErrInput);
    assert!(msg.contains("G99"), "{msg}");
}

#[test]
fn invalid_utf8() {
    let bad = [0xffu8, 0];
    let mut out = ptr::null_mut();
    let st = unsafe { crg_compute(bad.as_ptr().cast(), ptr::null(), &mut out) };
    assert_eq!(st, CrgStatus::CrgErrInvalidUtf8);
    assert!(out.is_null());
}

#[test]
fn non_integrable_json_fails_verification() {
    let sys = compute("D8", None).unwrap();
    let mut s = ptr::null_mut();
    unsafe { crg_system_to_json(sys, &mut s) };
    let json: String = take(s);
    unsafe { crg_system_free(sys) };
    let mut v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let entry = &mut v["matrices"][0][0][0]["num"];
    let tweaked = format!("{} + z2", entry.as_str().unwrap());
    *entry = serde_json::Value::String(tweaked);
    let c = CString::new(v.to_string()).unwrap();
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { crg_system_from_json(c.as_ptr(), &mut back) }, CrgStatus::CrgOk);
    assert_eq!(unsafe { crg_system_verify(back) }, CrgStatus::CrgErrVerification);
    assert!(!last_error().is_empty());
    unsafe { crg_system_free(back) };

    let garbage = CString::new("{\"group\": 1}").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { crg_system_from_json(garbage.as_ptr(), &mut out) }, CrgStatus::CrgErrInput);
}

#[test]
fn spec_json_and_rewrite() {
    let spec = CString::new(
        r#"{"name": "C3xC2", "conductor": 3, "rank": 2,
            "generators": [[["zeta","0"],["0","1"]], [["1","0"],["0","-1"]]]}"#,
    )
    .unwrap();
    let src = CString::new("reynolds").unwrap();
    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { crg_compute_from_spec(spec.as_ptr(), src.as_ptr(), &mut sys) }, CrgStatus::CrgOk, "{}", last_error());
    assert_eq!(unsafe { crg_system_verify(sys) }, CrgStatus::CrgOk);
    unsafe { crg_system_free(sys) };

    let g = CString::new("D8").unwrap();
    let e = CString::new("x1^4 + x2^4").unwrap();
    let mut z = ptr::null_mut();
    assert_eq!(unsafe { crg_rewrite(g.as_ptr(), e.as_ptr(), &mut z) }, CrgStatus::CrgOk, "{}", last_error());
    let z = take(z);
    assert!(z.contains("z1") || z.contains("z2"), "{z}");
    let e = CString::new("x1").unwrap();
    let mut z = ptr::null_mut();
    assert_eq!(unsafe { crg_rewrite(g.as_ptr(), e.as_ptr(), &mut z) }, CrgStatus::CrgErrInput);

    let mut names = ptr::null_mut();
    assert_eq!(unsafe { crg_catalog_names(&mut names) }, CrgStatus::CrgOk);
    assert!(take(names).lines().any(|l| l == "G7"));
}

// Compiles a C program against the generated header and the static library.
#[test]
fn c_consumer() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let libdir = exe.parent().unwrap().parent().unwrap();
    let lib = libdir.join("libcrgsys_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let tmp = std::env::temp_dir().join(format!("crgsys_ffi_c_{}", std::process::id()));
    std::fs::create_dir_all(&tmp).unwrap();
    let src = tmp.join("main.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include <string.h>
#include "crgsys.h"
int main(void) {
    CrgSystem *sys = NULL;
    if (crg_compute("G4", NULL, &sys) != CRG_OK) { fprintf(stderr, "%s\n", crg_last_error_message()); return 1; }
    if (crg_system_verify(sys) != CRG_OK) return 2;
    char *text = NULL;
    if (crg_system_render(sys, "text", &text) != CRG_OK) return 3;
    printf("%zu\n%s", crg_system_rank(sys), text);
    crg_string_free(text);
    crg_system_free(sys);
    if (crg_compute("nope", NULL, &sys) != CRG_ERR_INPUT) return 4;
    return strlen(crg_last_error_message()) == 0 ? 5 : 0;
}
"#,
    )
    .unwrap();
    let bin = tmp.join("consumer");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(cc)
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{:?}", out);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("2\n"), "{stdout}");
    assert!(stdout.contains("z1"), "{stdout}");
    std::fs::remove_dir_all(&tmp).ok();
}
