use std::ffi::{CStr, CString};
use std::ptr;

use biquad_ffi::*;

fn dense_identity() -> *mut BqTensor {
    let mut e = [0.0; 16];
    for i in 0..2 {
        for j in 0..2 {
            e[((i * 2 + j) * 2 + i) * 2 + j] = 1.0;
        }
    }
    let mut t = ptr::null_mut();
    let s = unsafe { bq_tensor_new_dense(2, 2, e.as_ptr(), e.len(), &mut t) };
    assert_eq!(s, BqStatus::Ok);
    t
}

fn last_error() -> String {
    let p = bq_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn dense_roundtrip_and_dims() {
    let t = dense_identity();
    let (mut m, mut n) = (0, 0);
    unsafe {
        assert_eq!(bq_tensor_dims(t, &mut m, &mut n), BqStatus::Ok);
        let mut v = 0.0;
        assert_eq!(bq_tensor_entry(t, 1, 0, 1, 0, &mut v), BqStatus::Ok);
        assert_eq!(v, 1.0);
        assert_eq!(bq_tensor_entry(t, 2, 0, 1, 0, &mut v), BqStatus::DimensionMismatch);

        let mut s = ptr::null_mut();
        assert_eq!(bq_tensor_to_json(t, &mut s), BqStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(bq_tensor_from_json(s, &mut back), BqStatus::Ok);
        bq_string_free(s);
        assert_eq!(bq_tensor_entry(back, 0, 1, 0, 1, &mut v), BqStatus::Ok);
        assert_eq!(v, 1.0);
        bq_tensor_free(back);
        bq_tensor_free(t);
    }
    assert_eq!((m, n), (2, 2));
}

#[test]
fn wrong_entry_count_is_reported() {
    let e = [1.0; 15];
    let mut t = ptr::null_mut();
    let s = unsafe { bq_tensor_new_dense(2, 2, e.as_ptr(), e.len(), &mut t) };
    assert_eq!(s, BqStatus::DimensionMismatch);
    assert!(t.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn null_pointers_are_rejected() {
    let mut t = ptr::null_mut();
    let s = unsafe { bq_tensor_new_dense(2, 2, ptr::null(), 16, &mut t) };
    assert_eq!(s, BqStatus::NullPointer);
    assert!(last_error().contains("entries"));
    let mut v = 0.0;
    let s = unsafe { bq_tensor_entry(ptr::null(), 0, 0, 0, 0, &mut v) };
    assert_eq!(s, BqStatus::NullPointer);
    unsafe {
        bq_tensor_free(ptr::null_mut());
        bq_eigen_list_free(ptr::null_mut());
        bq_string_free(ptr::null_mut());
    }
}

#[test]
fn malformed_json_is_a_parse_error() {
    let text = CString::new("{\"m\": 2").unwrap();
    let mut t = ptr::null_mut();
    let s = unsafe { bq_tensor_from_json(text.as_ptr(), &mut t) };
    assert_eq!(s, BqStatus::Parse);
    assert!(t.is_null());
}

#[test]
fn contractions_on_identity() {
    let t = dense_identity();
    let x = [0.6, 0.8];
    let y = [1.0, 0.0];
    let (mut f, mut r) = (0.0, 0.0);
    let mut g = [0.0; 2];
    let mut h = [0.0; 2];
    unsafe {
        assert_eq!(bq_eval_f(t, x.as_ptr(), 2, y.as_ptr(), 2, &mut f), BqStatus::Ok);
        assert_eq!(bq_grad_g(t, x.as_ptr(), 2, y.as_ptr(), 2, g.as_mut_ptr(), 2), BqStatus::Ok);
        assert_eq!(bq_grad_h(t, x.as_ptr(), 2, y.as_ptr(), 2, h.as_mut_ptr(), 2), BqStatus::Ok);
        assert_eq!(bq_residual(t, 1.0, x.as_ptr(), 2, y.as_ptr(), 2, &mut r), BqStatus::Ok);
        assert_eq!(
            bq_grad_g(t, x.as_ptr(), 2, y.as_ptr(), 2, g.as_mut_ptr(), 3),
            BqStatus::DimensionMismatch
        );
        bq_tensor_free(t);
    }
    assert!((f - 1.0).abs() < 1e-15);
    assert!((g[0] - 0.6).abs() < 1e-15 && (g[1] - 0.8).abs() < 1e-15);
    assert!((h[0] - 1.0).abs() < 1e-15 && h[1].abs() < 1e-15);
    assert!(r < 1e-15);
}

#[test]
fn collatz_run_and_multistart() {
    let b = [2.0, 1.0, 1.0, 2.0];
    let c = [3.0, 1.0, 1.0, 3.0];
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { bq_kron_build(b.as_ptr(), 2, c.as_ptr(), 2, &mut t) }, BqStatus::Ok);

    let cfg = bq_collatz_default_config();
    assert_eq!(cfg.k_max, 1000);
    let x0 = [0.6, 0.8];
    let y0 = [0.8, 0.6];
    let mut sum = BqCollatzSummary {
        status: BqCollatzStatus::MaxIterations,
        lambda_lower: 0.0,
        lambda_upper: 0.0,
        lambda_est: 0.0,
        iterations: 0,
        residual: 0.0,
    };
    let mut x = [0.0; 2];
    let mut y = [0.0; 2];
    unsafe {
        let s = bq_collatz_run(t, x0.as_ptr(), 2, y0.as_ptr(), 2, &cfg, &mut sum, x.as_mut_ptr(), y.as_mut_ptr());
        assert_eq!(s, BqStatus::Ok);
    }
    assert!(matches!(
        sum.status,
        BqCollatzStatus::ConvergedGap | BqCollatzStatus::ConvergedStagnation
    ));
    assert!((sum.lambda_est - 12.0).abs() < 1e-6);
    let s2 = 0.5f64.sqrt();
    assert!((x[0] - s2).abs() < 1e-4 && (y[1] - s2).abs() < 1e-4);

    let (mut lo, mut hi) = (0.0, 0.0);
    unsafe {
        let s = bq_collatz_multistart(t, &cfg, 10, 7, &mut sum, &mut lo, &mut hi);
        assert_eq!(s, BqStatus::Ok);
        bq_tensor_free(t);
    }
    assert!((sum.lambda_est - 12.0).abs() < 1e-6);
    assert_eq!((lo, hi), (1.0, 1.0));
}

#[test]
fn kron_rejects_asymmetric_factor() {
    let b = [2.0, 1.0, 0.0, 2.0];
    let c = [1.0];
    let mut t = ptr::null_mut();
    let s = unsafe { bq_kron_build(b.as_ptr(), 2, c.as_ptr(), 1, &mut t) };
    assert_ne!(s, BqStatus::Ok);
    assert!(t.is_null());
}

#[test]
fn enumerate_identity() {
    let t = dense_identity();
    let mut list = ptr::null_mut();
    unsafe {
        assert_eq!(bq_enumerate_2x2(t, 360, 1e-10, &mut list), BqStatus::Ok);
        let len = bq_eigen_list_len(list);
        assert!(len >= 1);
        let (mut lambda, mut class) = (0.0, BqEigenClass::M);
        let mut x = [0.0; 2];
        let mut y = [0.0; 2];
        let s = bq_eigen_list_get(list, 0, &mut lambda, x.as_mut_ptr(), 2, y.as_mut_ptr(), 2, &mut class);
        assert_eq!(s, BqStatus::Ok);
        assert!((lambda - 1.0).abs() < 1e-10);
        let s = bq_eigen_list_get(list, len, &mut lambda, x.as_mut_ptr(), 2, y.as_mut_ptr(), 2, &mut class);
        assert_eq!(s, BqStatus::DimensionMismatch);
        bq_eigen_list_free(list);
        bq_tensor_free(t);
    }
}

#[test]
fn irreducibility_of_identity() {
    let t = dense_identity();
    let mut r = BqIrreducibility {
        x_partial: true,
        y_partial: true,
        irreducible: true,
        method_agreement: false,
    };
    unsafe {
        assert_eq!(bq_irreducibility(t, 1e-12, &mut r), BqStatus::Ok);
        bq_tensor_free(t);
    }
    assert!(!r.x_partial && !r.y_partial && !r.irreducible);
    assert!(r.method_agreement);
}

#[test]
fn generator_is_seeded() {
    let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
    let (mut va, mut vb) = (0.0, 0.0);
    unsafe {
        assert_eq!(bq_gen_random_symmetric(3, 4, 9, &mut a), BqStatus::Ok);
        assert_eq!(bq_gen_random_symmetric(3, 4, 9, &mut b), BqStatus::Ok);
        bq_tensor_entry(a, 2, 3, 1, 0, &mut va);
        bq_tensor_entry(b, 2, 3, 1, 0, &mut vb);
        bq_tensor_free(a);
        bq_tensor_free(b);
    }
    assert_eq!(va, vb);
}
