use num_complex::Complex64;

use slicekit::checks::sqrt_stem_system;
use slicekit::stemtensor::{validate_stem_system, StemSystem, StemSystemFile, ValidationSettings};
use slicekit::{NPartPath, PathSegment, Quaternion, SliceFunctionModel};

fn max_gap(a: &StemSystem, b: &StemSystem) -> f64 {
    let mut worst: f64 = 0.0;
    for (x, y) in a.entries().iter().zip(b.entries()) {
        let c = x.function.center();
        let r = 0.5 * x.function.radius();
        for k in 0..6 {
            let z = c + Complex64::from_polar(r, k as f64);
            worst = worst.max(x.function.value(z).unwrap().max_distance(&y.function.value(z).unwrap()));
        }
    }
    worst
}

fn poly_system(coeffs: Vec<Quaternion>) -> StemSystem {
    StemSystem::from_model(&SliceFunctionModel::Poly { coeffs }, &[NPartPath::out_and_back()], 1.0, 8, 0.5).unwrap()
}

#[test]
fn ring_laws_hold_entrywise() {
    let s1 = poly_system(vec![Quaternion::J, Quaternion::ONE]);
    let s2 = poly_system(vec![Quaternion::K, Quaternion::ZERO, Quaternion::I]);
    let s3 = StemSystem::from_model(&SliceFunctionModel::Sqrt, &[NPartPath::out_and_back()], 1.0, 8, 0.5).unwrap();

    let zero = s3.zero_like().unwrap();
    assert_eq!(max_gap(&s3.add(&zero).unwrap(), &s3), 0.0);
    let one = s3.identity_like().unwrap();
    assert_eq!(max_gap(&one.star(&s3).unwrap(), &s3), 0.0);

    let lhs = s1.add(&s2).unwrap().star(&s1).unwrap();
    let rhs = s1.star(&s1).unwrap().add(&s2.star(&s1).unwrap()).unwrap();
    assert!(max_gap(&lhs, &rhs) < 1e-10);
}

#[test]
fn products_of_valid_systems_are_valid() {
    let s = poly_system(vec![Quaternion::new(1.0, 0.5, 0.0, 0.0), Quaternion::J]);
    let product = s.star(&s).unwrap();
    assert!(validate_stem_system(&product, &ValidationSettings::default()).unwrap().passed());
}

#[test]
fn file_round_trip_keeps_validity() {
    let system = sqrt_stem_system().unwrap();
    let file = system.to_file(17, 64).unwrap();
    let text = serde_json::to_string(&file).unwrap();
    let parsed: StemSystemFile = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed, file);
    let restored = StemSystem::from_file(&parsed).unwrap();
    assert_eq!(restored.entries().len(), system.entries().len());
    let report = validate_stem_system(&restored, &ValidationSettings::default()).unwrap();
    assert!(report.passed(), "{:?}", report.failed_conditions());
}

#[test]
fn systems_with_distant_disks_validate() {
    let far = NPartPath::from_segments(vec![PathSegment::line(Complex64::new(1.0, 0.0), Complex64::new(3.0, 0.0))]).unwrap();
    let near = NPartPath::constant(1.0);
    let system = StemSystem::from_model(&SliceFunctionModel::Sqrt, &[near, far], 1.0, 1, 0.3).unwrap();
    let report = validate_stem_system(&system, &ValidationSettings::default()).unwrap();
    assert!(report.passed(), "{:?}", report.failed_conditions());
}
