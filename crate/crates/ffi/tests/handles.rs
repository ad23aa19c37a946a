use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use rca_ffi::*;

fn last_error() -> String {
    let p = rca_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn lcg(seed: u64, len: usize) -> Vec<f64> {
    let mut s = seed;
    (0..len)
        .map(|_| {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        })
        .collect()
}

#[test]
fn rca_fit_round_trip() {
    let g = [3.0, 1.0, 0.0, 1.0, 3.0, 0.0, 0.0, 0.0, 1.0];
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(
            rca_fit_new(g.as_ptr(), 3, ptr::null(), 1.0, &mut h),
            RcaStatus::Ok
        );
        assert!(rca_last_error().is_null());
        let (mut n, mut q) = (0, 0);
        assert_eq!(rca_fit_shape(h, &mut n, &mut q), RcaStatus::Ok);
        assert_eq!((n, q), (3, 2));
        let mut vals = [0.0; 3];
        assert_eq!(rca_fit_eigenvalues(h, vals.as_mut_ptr(), 3), RcaStatus::Ok);
        assert!((vals[0] - 4.0).abs() < 1e-12 && (vals[1] - 2.0).abs() < 1e-12);
        let mut w = [0.0; 6];
        assert_eq!(rca_fit_loadings(h, w.as_mut_ptr(), 6), RcaStatus::Ok);
        // loadings reproduce the residual: W·Wᵀ = G - I
        for i in 0..3 {
            for j in 0..3 {
                let ww = w[2 * i] * w[2 * j] + w[2 * i + 1] * w[2 * j + 1];
                let want = g[3 * i + j] - if i == j { 1.0 } else { 0.0 };
                assert!((ww - want).abs() < 1e-10);
            }
        }
        let mut short = [0.0; 5];
        assert_eq!(
            rca_fit_loadings(h, short.as_mut_ptr(), 5),
            RcaStatus::BufferTooSmall
        );
        assert!(last_error().contains("6 needed"));
        rca_fit_free(h);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let asym = [1.0, 2.0, 0.0, 1.0];
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(
            rca_fit_new(asym.as_ptr(), 2, ptr::null(), 1.0, &mut h),
            RcaStatus::NotSymmetric
        );
        assert!(h.is_null());
        assert!(last_error().contains("symmetric"));
        assert_eq!(
            rca_fit_new(ptr::null(), 2, ptr::null(), 1.0, &mut h),
            RcaStatus::NullPointer
        );
        let eye = [1.0, 0.0, 0.0, 1.0];
        assert_eq!(
            rca_fit_new(eye.as_ptr(), 2, ptr::null(), -1.0, &mut h),
            RcaStatus::InvalidArgument
        );
        let indefinite = [1.0, 2.0, 2.0, 1.0];
        assert_eq!(
            rca_fit_new(eye.as_ptr(), 2, indefinite.as_ptr(), 0.0, &mut h),
            RcaStatus::NotPositiveDefinite
        );
        let bad = [1.0, f64::NAN, 2.0, 3.0];
        assert_eq!(
            rca_ppca_new(bad.as_ptr(), 2, 2, 0.1, &mut h),
            RcaStatus::NonFinite
        );
        let mut q = 0;
        assert_eq!(
            rca_fit_shape(ptr::null(), &mut q, &mut q),
            RcaStatus::NullPointer
        );
        rca_fit_free(ptr::null_mut());
    }
}

#[test]
fn cca_handle_reports_correlations() {
    let rows = 40;
    let z = lcg(1, rows);
    let e1 = lcg(2, rows * 2);
    let e2 = lcg(3, rows * 2);
    let y1: Vec<f64> = (0..rows * 2).map(|k| z[k / 2] + 0.3 * e1[k]).collect();
    let y2: Vec<f64> = (0..rows * 2)
        .map(|k| z[k / 2] * if k % 2 == 0 { 1.0 } else { -2.0 } + 0.3 * e2[k])
        .collect();
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(
            rca_cca_new(y1.as_ptr(), y2.as_ptr(), rows, 2, 2, &mut h),
            RcaStatus::Ok
        );
        let mut q = 0;
        assert_eq!(rca_cca_rank(h, &mut q), RcaStatus::Ok);
        assert!(q >= 1);
        let mut rho = vec![0.0; q];
        assert_eq!(rca_cca_correlations(h, rho.as_mut_ptr(), q), RcaStatus::Ok);
        assert!(rho[0] > 0.9 && rho[0] <= 1.0);
        let mut s = vec![0.0; 2 * q];
        assert_eq!(
            rca_cca_directions(h, 2, s.as_mut_ptr(), s.len()),
            RcaStatus::Ok
        );
        assert_eq!(
            rca_cca_directions(h, 3, s.as_mut_ptr(), s.len()),
            RcaStatus::InvalidArgument
        );
        rca_cca_free(h);
        assert_eq!(
            rca_cca_new(y1.as_ptr(), y2.as_ptr(), rows, 2, 0, &mut h),
            RcaStatus::DimensionMismatch
        );
    }
}

#[test]
fn shared_private_model_predicts() {
    let rows = 200;
    let z = lcg(4, rows);
    let (e1, e2) = (lcg(5, rows * 3), lcg(6, rows * 2));
    let y1: Vec<f64> = (0..rows * 3)
        .map(|k| z[k / 3] * (1.0 + (k % 3) as f64) + 0.2 * e1[k])
        .collect();
    let y2: Vec<f64> = (0..rows * 2)
        .map(|k| z[k / 2] * (2.0 - (k % 2) as f64) + 0.2 * e2[k])
        .collect();
    let mut h = ptr::null_mut();
    unsafe {
        let status = rca_itrca_new(
            y1.as_ptr(),
            y2.as_ptr(),
            rows,
            3,
            2,
            0.1,
            0.0,
            200,
            RcaRankRule::SamplingEdge,
            &mut h,
        );
        assert_eq!(status, RcaStatus::Ok);
        let (mut qs, mut q1, mut q2) = (0, 0, 0);
        assert_eq!(rca_itrca_ranks(h, &mut qs, &mut q1, &mut q2), RcaStatus::Ok);
        assert!(qs >= 1);
        let (mut it, mut conv, mut ll) = (0, false, 0.0);
        assert_eq!(
            rca_itrca_summary(h, &mut it, &mut conv, &mut ll),
            RcaStatus::Ok
        );
        assert!(it >= 1 && ll.is_finite());
        let mut pred = vec![0.0; rows * 3];
        assert_eq!(
            rca_itrca_predict(
                h,
                y2.as_ptr(),
                rows,
                RcaPredictor::Exact,
                pred.as_mut_ptr(),
                pred.len()
            ),
            RcaStatus::Ok
        );
        let err: f64 = pred
            .iter()
            .zip(&y1)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            / y1.len() as f64;
        let var: f64 = y1.iter().map(|v| v * v).sum::<f64>() / y1.len() as f64;
        assert!(err < 0.2 * var, "mse {err} vs {var}");
        rca_itrca_free(h);

        let status = rca_itrca_new(
            y1.as_ptr(),
            y2.as_ptr(),
            rows,
            3,
            2,
            1.5,
            0.0,
            200,
            RcaRankRule::Strict,
            &mut h,
        );
        assert_eq!(status, RcaStatus::InvalidArgument);
        assert!(last_error().contains("alpha"));
    }
}

#[test]
fn header_declares_every_export_and_compiles() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/rca.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "rca_last_error",
        "rca_fit_new",
        "rca_ppca_new",
        "rca_fit_loadings",
        "rca_fit_free",
        "rca_cca_new",
        "rca_cca_directions",
        "rca_itrca_new",
        "rca_itrca_predict",
        "rca_itrca_free",
        "RCA_STATUS_BUFFER_TOO_SMALL",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .status()
    else {
        eprintln!("no C compiler; skipping syntax check");
        return;
    };
    assert!(status.success());
}
