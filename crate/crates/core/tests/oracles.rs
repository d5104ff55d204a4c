//! Cross-checks of the main routines against independent reference computations.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use slicekit::oracle::{
    basis_matrix, generator_matrix, left_dependence_dimension, left_mult_matrix, right_mult_matrix,
    solve_left_linear, tensor_matrix,
};
use slicekit::sampling::Sampler;
use slicekit::sliceunits::StemStructureMatrix;
use slicekit::stemtensor::basis::basis_product;
use slicekit::stemtensor::{
    from_tensor, stem_derivative, stem_derivative_contour, tensor_derivative_contour, tensor_mul,
    to_tensor, SliceStem, TensorValue,
};
use slicekit::{NPartPath, PathSegment, Quaternion, QuaternionMatrix, SliceFunctionModel};

#[test]
fn multiplication_matrices_match_hamilton_products() {
    let mut s = Sampler::new(1);
    for _ in 0..50 {
        let (a, b) = (s.quaternion(), s.quaternion());
        let v = nalgebra::DVector::from_column_slice(&b.to_array());
        let left = left_mult_matrix(a) * &v;
        let right = right_mult_matrix(a) * &v;
        let ab = (a * b).to_array();
        let ba = (b * a).to_array();
        for k in 0..4 {
            assert!((left[k] - ab[k]).abs() < 1e-13);
            assert!((right[k] - ba[k]).abs() < 1e-13);
        }
    }
}

#[test]
fn basis_product_law_matches_kronecker_picture() {
    for n in 1..=3 {
        for a in 1..=1 << n {
            for b in 1..=1 << n {
                let (sign, c) = basis_product(n, a, b);
                let lhs = basis_matrix(n, a) * basis_matrix(n, b);
                let rhs = basis_matrix(n, c) * f64::from(sign);
                assert_eq!(lhs, rhs, "N = {n}, a = {a}, b = {b}");
            }
        }
    }
}

/// Coordinates of a Kronecker matrix in the basis, found by least squares over all
/// basis matrices: real coefficients only, since the matrices in question are signed
/// basis elements.
fn basis_coordinates(n: usize, m: &DMatrix<f64>) -> Vec<f64> {
    let d = 1 << n;
    let columns: Vec<DMatrix<f64>> = (1..=d).map(|k| basis_matrix(n, k)).collect();
    let size = m.len();
    let a = DMatrix::from_fn(size, d, |r, k| columns[k].as_slice()[r]);
    let rhs = nalgebra::DVector::from_column_slice(m.as_slice());
    let x = a.svd(true, true).solve(&rhs, 1e-12).unwrap();
    x.iter().copied().collect()
}

#[test]
fn structure_matrix_recomputed_from_the_oracle() {
    for n in 1..=4 {
        let sigma = StemStructureMatrix::new(n);
        let e = generator_matrix(n, n);
        for m in 1..=1 << n {
            let coords = basis_coordinates(n, &(&e * basis_matrix(n, m)));
            for (k, x) in coords.iter().enumerate() {
                let expected = f64::from(sigma.get(k, m - 1));
                assert!((x - expected).abs() < 1e-12, "N = {n}, row {k}, column {m}");
            }
        }
    }
}

#[test]
fn frozen_structure_matrix_for_three_factors() {
    // Recomputed by `structure_matrix_recomputed_from_the_oracle`.
    let expected: [[i8; 8]; 8] = [
        [0, 0, 0, 0, 0, 0, 0, -1],
        [0, 0, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, -1, 0, 0],
        [0, 0, 0, 0, 1, 0, 0, 0],
        [0, 0, 0, -1, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, 0, 0],
        [0, -1, 0, 0, 0, 0, 0, 0],
        [1, 0, 0, 0, 0, 0, 0, 0],
    ];
    let sigma = StemStructureMatrix::new(3);
    for (r, row) in expected.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            assert_eq!(sigma.get(r, c), v, "row {r}, column {c}");
        }
    }
}

#[test]
fn tensor_product_matches_kronecker_picture_for_three_factors() {
    let mut s = Sampler::new(2);
    for _ in 0..50 {
        let a = to_tensor(&s.stem_value(3));
        let b = to_tensor(&s.stem_value(3));
        let c = tensor_mul(&a, &b).unwrap();
        let lhs = tensor_matrix(3, a.coeffs()) * tensor_matrix(3, b.coeffs());
        let rhs = tensor_matrix(3, c.coeffs());
        assert!((lhs - rhs).amax() < 1e-12);
    }
}

#[test]
fn last_generator_and_points_in_the_kronecker_picture() {
    for n in 1..=3 {
        let e = TensorValue::last_generator(n);
        assert_eq!(tensor_matrix(n, e.coeffs()), generator_matrix(n, n));
        let z = Complex64::new(0.3, -1.7);
        let p = TensorValue::point(n, z);
        let expected = DMatrix::identity(4 << n, 4 << n) * z.re + generator_matrix(n, n) * z.im;
        assert!((tensor_matrix(n, p.coeffs()) - expected).amax() < 1e-15);
    }
}

#[test]
fn left_dependence_agrees_with_adjoint_rank() {
    let mut s = Sampler::new(3);
    for trial in 0..60 {
        let rows = 1 + trial % 4;
        let cols = 1 + (trial / 4) % 4;
        let mut m = s.matrix(rows, cols);
        if trial % 3 == 0 && rows >= 2 {
            // Make the last row a left combination of the first.
            let c = s.quaternion();
            let first: Vec<Quaternion> = m.row(0).to_vec();
            for (j, v) in first.iter().enumerate() {
                m[(rows - 1, j)] = c * *v;
            }
        }
        let vectors: Vec<Vec<Quaternion>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
        assert_eq!(rows - left_dependence_dimension(&vectors), m.rank(), "trial {trial}");
    }
}

#[test]
fn identical_rows_have_one_dimensional_dependence() {
    let row = vec![Quaternion::ONE, Quaternion::I];
    assert_eq!(left_dependence_dimension(&[row.clone(), row]), 1);
}

#[test]
fn real_solver_agrees_with_adjoint_inverse() {
    let mut s = Sampler::new(4);
    for n in 1..=4 {
        for _ in 0..10 {
            let m = s.matrix(n, n);
            let b: Vec<Quaternion> = (0..n).map(|_| s.quaternion()).collect();
            let direct = m.inverse().unwrap().mul_vec(&b).unwrap();
            let real = solve_left_linear(&m, &b).unwrap();
            for (x, y) in direct.iter().zip(&real) {
                assert!((*x - *y).norm() < 1e-9);
            }
        }
    }
}

#[test]
fn adjoint_is_multiplicative() {
    let mut s = Sampler::new(5);
    for _ in 0..30 {
        let a = s.matrix(3, 2);
        let b = s.matrix(2, 4);
        let lhs = a.mul(&b).unwrap().complex_adjoint();
        let rhs = a.complex_adjoint() * b.complex_adjoint();
        assert!((lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-12);
        let back = QuaternionMatrix::from_complex_adjoint(&a.complex_adjoint()).unwrap();
        assert_eq!(back, a);
    }
}

/// Square root tracked along a path in many small steps on one slice, choosing at each
/// step the root closest to the previous one.
fn tracked_sqrt(path: &PathSegment, steps: usize) -> Complex64 {
    let mut w = path.start().sqrt();
    for k in 1..=steps {
        let r = path.eval(k as f64 / steps as f64).sqrt();
        w = if (r - w).norm() <= (-r - w).norm() { r } else { -r };
    }
    w
}

#[test]
fn sqrt_continuation_matches_step_tracking() {
    let mut s = Sampler::new(6);
    for _ in 0..20 {
        let unit = s.unit();
        let turns = s.uniform(-7.0, 7.0);
        let arc = PathSegment::half_turns(turns);
        let path = NPartPath::from_segments(vec![arc.clone()]).unwrap();
        let value = SliceFunctionModel::Sqrt.evaluate_lifted(&path, &[unit], 1.0, unit).unwrap();
        let expected = slicekit::embed_slice(tracked_sqrt(&arc, 4000), unit);
        assert!((value - expected).norm() < 1e-9, "turns {turns}");
    }
}

#[test]
fn log_continuation_matches_winding() {
    let mut s = Sampler::new(7);
    for _ in 0..20 {
        let unit = s.unit();
        let turns = s.uniform(-7.0, 7.0);
        let path = NPartPath::from_segments(vec![PathSegment::half_turns(turns)]).unwrap();
        let v = SliceFunctionModel::Log.evaluate_lifted(&path, &[unit], 1.0, unit).unwrap();
        let expected = unit.as_quaternion() * (turns * PI);
        assert!((v - expected).norm() < 1e-12, "turns {turns}");
    }
}

#[test]
fn derivative_routes_agree_with_finite_differences() {
    let stem = SliceStem::new(SliceFunctionModel::Sqrt, NPartPath::out_and_back(), 1.0, 0.4).unwrap();
    let z0 = Complex64::new(1.05, 0.05);
    let fd = stem_derivative(&stem, z0, 1e-5).unwrap();
    let contour = stem_derivative_contour(&stem, z0, 1, 0.2, 64).unwrap();
    let tensor = from_tensor(&tensor_derivative_contour(&stem, z0, 1, 0.2, 64).unwrap());
    assert!(fd.max_distance(&contour) < 1e-8);
    assert!(contour.max_distance(&tensor) < 1e-12);
}
