use std::ffi::c_char;
use std::ptr;

use bw_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    let n = unsafe { bw_last_error_message(buf.as_mut_ptr(), buf.len()) };
    let bytes: Vec<u8> = buf[..n.min(255)].iter().map(|&b| b as u8).collect();
    String::from_utf8(bytes).unwrap()
}

#[test]
fn dist_lifecycle() {
    let mut d: *mut BwDist = ptr::null_mut();
    assert_eq!(unsafe { bw_dist_new(3.0, 1.0, 2.0, 0.4, &mut d) }, BwStatus::Ok);
    let mut q = 0.0;
    assert_eq!(unsafe { bw_dist_quantile(d, 0.5, &mut q) }, BwStatus::Ok);
    assert!((q - 0.50091).abs() < 5e-4);
    let mut u = 0.0;
    assert_eq!(unsafe { bw_dist_cdf(d, q, &mut u) }, BwStatus::Ok);
    assert!((u - 0.5).abs() < 1e-10);
    let (mut f, mut s, mut h) = (0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(bw_dist_pdf(d, 1.0, &mut f), BwStatus::Ok);
        assert_eq!(bw_dist_survival(d, 1.0, &mut s), BwStatus::Ok);
        assert_eq!(bw_dist_hazard(d, 1.0, &mut h), BwStatus::Ok);
    }
    assert!((h - f / s).abs() < 1e-12);
    let mut m = BwMomentSummary::default();
    assert_eq!(unsafe { bw_dist_moments(d, &mut m) }, BwStatus::Ok);
    assert!(m.sd > 0.0 && m.raw_moments[0] > 0.0);
    let mut a = vec![0.0; 100];
    let mut b = vec![0.0; 100];
    unsafe {
        assert_eq!(bw_dist_sample(d, 100, 9, 1, a.as_mut_ptr()), BwStatus::Ok);
        assert_eq!(bw_dist_sample(d, 100, 9, 1, b.as_mut_ptr()), BwStatus::Ok);
    }
    assert_eq!(a, b);
    assert!(a.iter().all(|v| *v > 0.0));
    unsafe { bw_dist_free(d) };
}

#[test]
fn error_codes() {
    let mut d: *mut BwDist = ptr::null_mut();
    assert_eq!(unsafe { bw_dist_new(-1.0, 1.0, 1.0, 1.0, &mut d) }, BwStatus::Domain);
    assert!(d.is_null());
    assert!(last_error().contains("domain"), "{}", last_error());
    assert_eq!(unsafe { bw_dist_new(1.0, 1.0, 1.0, 1.0, ptr::null_mut()) }, BwStatus::NullPointer);
    assert_eq!(unsafe { bw_dist_new(1.0, 1.0, 1.0, 3.0, &mut d) }, BwStatus::Ok);
    let mut y = 0.0;
    assert_eq!(unsafe { bw_dist_pdf(d, -1.0, &mut y) }, BwStatus::Domain);
    assert_eq!(unsafe { bw_dist_hazard(d, 50.0, &mut y) }, BwStatus::Range);
    assert_eq!(unsafe { bw_dist_quantile(d, 1.0, &mut y) }, BwStatus::Domain);
    assert_eq!(unsafe { bw_dist_pdf(ptr::null(), 1.0, &mut y) }, BwStatus::NullPointer);
    assert_eq!(unsafe { bw_dist_sample(d, 0, 1, 1, [0.0].as_mut_ptr()) }, BwStatus::Domain);
    unsafe {
        bw_dist_free(d);
        bw_dist_free(ptr::null_mut());
    }
    let mut short = [0 as c_char; 4];
    let n = unsafe { bw_last_error_message(short.as_mut_ptr(), short.len()) };
    assert!(n > 3 && short[3] == 0);
}

#[test]
fn kevlar_fit() {
    let x = bw_core::kevlar_dataset();
    let mut f: *mut BwFit = ptr::null_mut();
    let st = unsafe { bw_fit(x.values().as_ptr(), x.len(), BwModel::Weibull, 4, 1, &mut f) };
    assert_eq!(st, BwStatus::Ok);
    let mut s = BwFitSummary::default();
    assert_eq!(unsafe { bw_fit_summary(f, &mut s) }, BwStatus::Ok);
    assert!((s.log_likelihood + 102.9768).abs() < 0.01 && s.converged && s.n == 101);
    let mut p = [0.0; 4];
    let mut count = 0;
    assert_eq!(unsafe { bw_fit_params(f, p.as_mut_ptr(), 1, &mut count) }, BwStatus::BufferTooSmall);
    assert_eq!(count, 2);
    assert_eq!(unsafe { bw_fit_params(f, p.as_mut_ptr(), 4, &mut count) }, BwStatus::Ok);
    assert!((p[0] - 0.98994).abs() < 1e-3);
    unsafe { bw_fit_free(f) };
    let st = unsafe { bw_fit([1.0].as_ptr(), 1, BwModel::Bw, 4, 1, &mut f) };
    assert_eq!(st, BwStatus::Domain);
}

#[test]
fn header_declares_the_abi() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/bw_dist.h")).unwrap();
    for sym in [
        "bw_dist_new",
        "bw_dist_free",
        "bw_dist_quantile",
        "bw_dist_sample",
        "bw_fit",
        "bw_fit_params",
        "bw_fit_summary",
        "bw_last_error_message",
        "BW_STATUS_DOMAIN",
        "typedef struct BwDist BwDist",
    ] {
        assert!(h.contains(sym), "{sym} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else { return };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("probe.c");
    std::fs::write(
        &src,
        "#include \"bw_dist.h\"\nint main(void) { BwDist *d = 0; return bw_dist_new(1, 1, 1, 1, &d) == BW_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let status = std::process::Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success());
}

fn which_cc() -> Result<&'static str, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if std::process::Command::new(cc).arg("--version").output().is_ok() {
            return Ok(cc);
        }
    }
    Err(())
}
