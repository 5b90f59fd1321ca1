mod common;
mod suites;

#[test]
fn trapezoid_is_bounded_and_piecewise_linear() {
    suites::trapezoid(1000).unwrap();
}

#[test]
fn raw_preference_is_bilinear() {
    suites::bilinearity(500).unwrap();
}

#[test]
fn iqr_is_translation_and_scale_equivariant() {
    suites::iqr_equivariance(500).unwrap();
}

#[test]
fn phase_machine_keeps_referential_integrity() {
    suites::phase_machine(1000).unwrap();
}
