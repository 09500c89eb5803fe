use regensim_web::{ar_path_values, dary_histogram_values, rho_curve_values};

#[test]
fn path_has_requested_length_and_signs() {
    let p = ar_path_values(0.2, vec![0.3], 0.0, 0.0, false, 50, 4).unwrap();
    assert_eq!(p.symbols.len(), 50);
    assert!(p.symbols.iter().all(|&s| s == 1 || s == -1));
    assert!(p.tau <= 0);
    assert_eq!(
        p,
        ar_path_values(0.2, vec![0.3], 0.0, 0.0, false, 50, 4).unwrap()
    );
}

#[test]
fn logistic_with_tail() {
    let p = ar_path_values(0.1, vec![0.4, -0.2], 0.3, 0.5, true, 30, 9).unwrap();
    assert_eq!(p.symbols.len(), 30);
}

#[test]
fn invalid_linear_model_is_an_error() {
    assert!(ar_path_values(0.8, vec![0.3], 0.0, 0.0, false, 10, 1).is_err());
}

#[test]
fn histogram_counts_all_samples() {
    let h = dary_histogram_values(0.5, 0.5, 4, 2000, 1).unwrap();
    assert_eq!(h.len(), 16);
    assert_eq!(h.iter().sum::<u32>(), 2000);
    assert!(dary_histogram_values(0.5, 0.5, 0, 10, 1).is_err());
}

#[test]
fn geometric_curve_levels_off() {
    let v = rho_curve_values("geometric", 0.5, 0.5, 100).unwrap();
    let beta_end = v[100];
    assert!((beta_end - 0.288_788_095_086_602_4).abs() < 1e-9);
}
