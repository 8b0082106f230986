use std::ffi::{CStr, CString};
use std::ptr;

use cuboid_ffi::*;
use libc::c_char;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    cuboid_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(cuboid_last_error()).to_str().unwrap().to_owned()
}

unsafe fn point(n: &str, x: &str, y: &str) -> *mut CuboidPoint {
    let mut p = ptr::null_mut();
    assert_eq!(
        cuboid_point_new(c(n).as_ptr(), c(x).as_ptr(), c(y).as_ptr(), &mut p),
        CuboidStatus::Ok
    );
    p
}

unsafe fn point_json(p: *const CuboidPoint) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(cuboid_point_to_json(p, &mut s), CuboidStatus::Ok);
    take(s)
}

#[test]
fn point_arithmetic() {
    unsafe {
        let p = point("5", "-4", "6");
        let mut d = ptr::null_mut();
        assert_eq!(cuboid_point_double(p, &mut d), CuboidStatus::Ok);
        assert_eq!(point_json(d), r#"{"N":5,"x":"1681/144","y":"-62279/1728"}"#);

        let mut r = ptr::null_mut();
        assert_eq!(
            cuboid_point_reflect(p, CuboidReflection::Second, &mut r),
            CuboidStatus::Ok
        );
        assert_eq!(point_json(r), r#"{"N":5,"x":"-5/9","y":"100/27"}"#);

        let mut neg = ptr::null_mut();
        assert_eq!(cuboid_point_mul(p, -1, &mut neg), CuboidStatus::Ok);
        let mut zero = ptr::null_mut();
        assert_eq!(cuboid_point_add(p, neg, &mut zero), CuboidStatus::Ok);
        assert!(cuboid_point_is_infinity(zero));
        assert_eq!(point_json(zero), r#"{"N":5,"infinity":true}"#);

        for h in [p, d, r, neg, zero] {
            cuboid_point_free(h);
        }
    }
}

#[test]
fn error_reporting() {
    unsafe {
        let mut p = ptr::null_mut();
        let st = cuboid_point_new(c("5").as_ptr(), c("1").as_ptr(), c("1").as_ptr(), &mut p);
        assert_eq!(st, CuboidStatus::DomainError);
        assert!(p.is_null());
        assert!(last_error().contains("not on the curve"));

        let st = cuboid_point_new(c("5").as_ptr(), c("1/0").as_ptr(), c("1").as_ptr(), &mut p);
        assert_eq!(st, CuboidStatus::ParseError);

        let st = cuboid_point_new(ptr::null(), c("1").as_ptr(), c("1").as_ptr(), &mut p);
        assert_eq!(st, CuboidStatus::NullPointer);

        let a = point("5", "-4", "6");
        let b = point("6", "-3", "9");
        assert_eq!(cuboid_point_add(a, b, &mut p), CuboidStatus::DomainError);
        assert_eq!(cuboid_point_double(a, ptr::null_mut()), CuboidStatus::NullPointer);
        cuboid_point_free(a);
        cuboid_point_free(b);

        let t = point("5", "0", "0");
        assert_eq!(
            cuboid_point_reflect(t, CuboidReflection::First, &mut p),
            CuboidStatus::DomainError
        );
        cuboid_point_free(t);

        // null handles are accepted by the free functions
        cuboid_point_free(ptr::null_mut());
        cuboid_npc_free(ptr::null_mut());
        cuboid_recovered_free(ptr::null_mut());
        cuboid_string_free(ptr::null_mut());
    }
}

#[test]
fn generate_verify_invert() {
    unsafe {
        let mut npc = ptr::null_mut();
        let st = cuboid_npc_generate(
            c("5").as_ptr(),
            c("25/4").as_ptr(),
            c("1681/144").as_ptr(),
            c("invariant").as_ptr(),
            &mut npc,
        );
        assert_eq!(st, CuboidStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(cuboid_npc_to_json(npc, &mut s), CuboidStatus::Ok);
        assert_eq!(
            take(s),
            r#"{"a":9840,"b":4557,"c":3124,"d_ac":10324,"d_bc":5525,"d_s":11285,"d_ab_sq":117591849,"pc":false}"#
        );
        let (mut valid, mut pc) = (false, true);
        assert_eq!(cuboid_npc_verify(npc, &mut valid, &mut pc), CuboidStatus::Ok);
        assert!(valid && !pc);
        cuboid_npc_free(npc);

        let st = cuboid_npc_generate(
            c("5").as_ptr(),
            c("25/4").as_ptr(),
            c("1681/144").as_ptr(),
            c("sideways").as_ptr(),
            &mut npc,
        );
        assert_eq!(st, CuboidStatus::ParseError);

        let rec = c(r#"{"a":672,"b":153,"c":104,"d_ac":680,"d_bc":185,"d_s":697}"#);
        assert_eq!(cuboid_npc_from_json(rec.as_ptr(), &mut npc), CuboidStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(cuboid_invert(npc, c("invariant").as_ptr(), &mut r), CuboidStatus::Ok);
        assert_eq!(cuboid_recovered_pair_count(r), 4);
        assert_eq!(cuboid_recovered_n(r, &mut s), CuboidStatus::Ok);
        assert_eq!(take(s), "34");
        let (mut x, mut z) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(cuboid_recovered_pair(r, 0, &mut x, &mut z), CuboidStatus::Ok);
        assert_eq!((take(x), take(z)), ("833/16".to_string(), "153/4".to_string()));
        assert_eq!(cuboid_recovered_pair(r, 4, &mut x, &mut z), CuboidStatus::OutOfRange);
        cuboid_recovered_free(r);

        assert_eq!(cuboid_invert(npc, c("first").as_ptr(), &mut r), CuboidStatus::Ok);
        assert_eq!(cuboid_recovered_to_json(r, &mut s), CuboidStatus::Ok);
        assert_eq!(
            take(s),
            r#"{"N":4305,"pairs":[{"X":"452025/64","Z":"18081/4","which":"I"},{"X":"-2624","Z":"-4100","which":"II"}],"family":"first"}"#
        );
        cuboid_recovered_free(r);
        cuboid_npc_free(npc);

        let bad = c(r#"{"a":672,"b":153,"c":105,"d_ac":680,"d_bc":185,"d_s":697}"#);
        assert_eq!(cuboid_npc_from_json(bad.as_ptr(), &mut npc), CuboidStatus::Ok);
        assert_eq!(cuboid_npc_verify(npc, &mut valid, &mut pc), CuboidStatus::Ok);
        assert!(!valid);
        assert_eq!(
            cuboid_invert(npc, c("invariant").as_ptr(), &mut r),
            CuboidStatus::DomainError
        );
        cuboid_npc_free(npc);
    }
}

#[test]
fn errors_are_per_thread() {
    unsafe {
        let mut p = ptr::null_mut();
        cuboid_point_new(c("5").as_ptr(), c("1").as_ptr(), c("1").as_ptr(), &mut p);
        std::thread::spawn(|| assert!(cuboid_last_error().is_null()))
            .join()
            .unwrap();
        assert!(!cuboid_last_error().is_null());
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/cuboid.h")).unwrap();
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() > 10);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use_header.c");
    std::fs::write(
        &src,
        "#include \"cuboid.h\"\nint main(void) { CuboidPoint *p = 0; return cuboid_point_is_infinity(p) ? 1 : CUBOID_STATUS_OK; }\n",
    )
    .unwrap();
    let status = std::process::Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&src)
        .status();
    match status {
        Ok(s) => assert!(s.success(), "header failed to compile"),
        Err(e) => eprintln!("skipping: no C compiler ({e})"),
    }
}
