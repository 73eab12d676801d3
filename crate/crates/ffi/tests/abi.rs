use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use residue_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    residue_string_free(p);
    s
}

unsafe fn last_error() -> String {
    let p = residue_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_str().unwrap().to_string()
}

unsafe fn context(ring: &str) -> *mut ResidueContext {
    let mut ctx = ptr::null_mut();
    assert_eq!(residue_context_new(c(ring).as_ptr(), &mut ctx), ResidueStatus::Ok);
    assert!(!ctx.is_null());
    ctx
}

#[test]
fn residues_through_the_abi() {
    unsafe {
        let ctx = context("QQ[x,y]");
        let mut out = ptr::null_mut();
        let st = residue_symbol(ctx, c("d(x)/\\d(y)").as_ptr(), c("x, y").as_ptr(), &mut out);
        assert_eq!(st, ResidueStatus::Ok);
        assert_eq!(take(out), "1");
        let st = residue_symbol(ctx, c("x*d(x)/\\d(y)").as_ptr(), c("x^2, y").as_ptr(), &mut out);
        assert_eq!(st, ResidueStatus::Ok);
        assert_eq!(take(out), "1");
        let st = residue_symbol(ctx, c("d(x)/\\d(y)").as_ptr(), c("x^2, y").as_ptr(), &mut out);
        assert_eq!(st, ResidueStatus::Ok);
        assert_eq!(take(out), "0");
        assert!(residue_last_error().is_null());

        residue_context_describe(ctx, &mut out);
        assert_eq!(take(out), "QQ[x,y]");
        residue_context_free(ctx);
    }
}

#[test]
fn relative_trace_and_queries() {
    unsafe {
        let ctx = context("QQ[y][T]");
        let mut out = ptr::null_mut();
        assert_eq!(residue_trace(ctx, c("T^2 - y").as_ptr(), c("T^2").as_ptr(), &mut out), ResidueStatus::Ok);
        assert_eq!(take(out), "2*y");
        let q = c(r#"{"cmd":"klt","form":"d(y)","denoms":["T^2 - y"]}"#);
        assert_eq!(residue_query(ctx, q.as_ptr(), &mut out), ResidueStatus::Ok);
        assert_eq!(take(out), "\"2*d(y)\"");
        residue_context_free(ctx);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut ctx = ptr::null_mut();
        assert_eq!(residue_context_new(c("QQ[x").as_ptr(), &mut ctx), ResidueStatus::Usage);
        assert!(last_error().starts_with("INVALID_CONTEXT"));
        assert_eq!(residue_context_new(c("Fp:8[x]").as_ptr(), &mut ctx), ResidueStatus::Usage);
        assert_eq!(residue_context_new(ptr::null(), &mut ctx), ResidueStatus::NullPointer);

        let ctx = context("QQ[x,y]");
        let mut out = ptr::null_mut();
        let st = residue_symbol(ctx, c("d(x)/\\d(y)").as_ptr(), c("x*y, y").as_ptr(), &mut out);
        assert_eq!(st, ResidueStatus::NotZeroDimensional);
        assert!(last_error().starts_with("NOT_ZERO_DIMENSIONAL"));
        let st = residue_symbol(ctx, c("d(x) + 1").as_ptr(), c("x, y").as_ptr(), &mut out);
        assert_eq!(st, ResidueStatus::Syntax);
        assert!(last_error().contains("1:6"));
        let st = residue_symbol(ctx, c("d(z)").as_ptr(), c("x, y").as_ptr(), &mut out);
        assert_eq!(st, ResidueStatus::Syntax);
        assert_eq!(residue_symbol(ctx, c("d(x)").as_ptr(), c("x").as_ptr(), ptr::null_mut()), ResidueStatus::NullPointer);
        assert_eq!(residue_symbol(ptr::null(), c("1").as_ptr(), c("x").as_ptr(), &mut out), ResidueStatus::NullPointer);
        let bad = [0xffu8, 0];
        let st = residue_symbol(ctx, bad.as_ptr() as *const c_char, c("x, y").as_ptr(), &mut out);
        assert_eq!(st, ResidueStatus::InvalidUtf8);
        residue_context_free(ctx);
        residue_context_free(ptr::null_mut());
        residue_string_free(ptr::null_mut());
    }
}

#[test]
fn jobs_and_verification() {
    unsafe {
        let job = c(r#"{"ring":{"field":"QQ","fiber":["x"]},"queries":[{"cmd":"residue","form":"d(x)","denoms":["x"]},{"cmd":"residue","form":"d(x)","denoms":["x^2"]}]}"#);
        let mut out = ptr::null_mut();
        assert_eq!(residue_run_job(job.as_ptr(), &mut out), ResidueStatus::Ok);
        let text = take(out);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].contains("\"value\":\"1\""));
        assert!(lines[1].contains("\"value\":\"0\""));
        assert_eq!(residue_run_job(c("{").as_ptr(), &mut out), ResidueStatus::Syntax);

        let st = residue_verify(c("R6").as_ptr(), 2, 0, 2, c("QQ").as_ptr(), 7, 5, &mut out);
        assert_eq!(st, ResidueStatus::Ok);
        let report: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(report["attempted"], 5);
        assert_eq!(report["failed"], 0);
        let st = residue_verify(c("R99").as_ptr(), 2, 0, 2, c("QQ").as_ptr(), 7, 5, &mut out);
        assert_eq!(st, ResidueStatus::Usage);
        let st = residue_verify(c("R6").as_ptr(), 5, 0, 2, c("QQ").as_ptr(), 7, 5, &mut out);
        assert_eq!(st, ResidueStatus::Usage);
    }
}

#[test]
fn errors_are_per_thread() {
    unsafe {
        let mut ctx = ptr::null_mut();
        residue_context_new(c("QQ[").as_ptr(), &mut ctx);
        std::thread::spawn(|| assert!(residue_last_error().is_null())).join().unwrap();
        assert!(!residue_last_error().is_null());
    }
}

#[test]
fn header_is_valid_c() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/residue.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["residue_context_new", "residue_symbol", "residue_run_job", "residue_last_error", "RESIDUE_STATUS_OK"] {
        assert!(text.contains(name), "{name} missing from the header");
    }
    let probe = tempfile::Builder::new().suffix(".c").tempfile().unwrap();
    std::fs::write(probe.path(), "#include \"residue.h\"\nint main(void) { return (int)RESIDUE_STATUS_OK; }\n").unwrap();
    let Ok(out) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(dir.join("include"))
        .arg(probe.path())
        .output()
    else {
        eprintln!("no C compiler; skipping the compile check");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
