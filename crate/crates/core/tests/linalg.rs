use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wmono_core::qlinalg::{
    hermitian_eig, kron, partial_trace, partial_transpose, trace_norm, ComplexMatrix, DimList,
};
use wmono_core::verify::{complex_gaussian, random_density_matrix};

fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let g = random_matrix(n, n, rng);
    g.add(&g.adjoint()).unwrap().scale(Complex64::new(0.5, 0.0))
}

#[test]
fn kron_is_associative() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let a = random_matrix(2, 3, &mut rng);
    let b = random_matrix(3, 2, &mut rng);
    let c = random_matrix(2, 2, &mut rng);
    let left = kron(&kron(&a, &b), &c);
    let right = kron(&a, &kron(&b, &c));
    assert!(left.max_abs_diff(&right) < 1e-13);
}

#[test]
fn partial_trace_of_product_recovers_factor() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let dims = DimList::new(vec![2, 3, 2]).unwrap();
    let r0 = random_density_matrix(DimList::qubits(1).unwrap(), 2, &mut rng).unwrap();
    let r1 = random_density_matrix(DimList::new(vec![3]).unwrap(), 2, &mut rng).unwrap();
    let r2 = random_density_matrix(DimList::qubits(1).unwrap(), 1, &mut rng).unwrap();
    let rho = kron(&kron(r0.matrix(), r1.matrix()), r2.matrix());
    let kept = partial_trace(&rho, &dims, &[1]).unwrap();
    assert!(kept.max_abs_diff(r1.matrix()) < 1e-13);
    let kept = partial_trace(&rho, &dims, &[0, 2]).unwrap();
    assert!(kept.max_abs_diff(&kron(r0.matrix(), r2.matrix())) < 1e-13);
}

#[test]
fn partial_trace_preserves_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in 2..=5 {
        let dims = DimList::qubits(n).unwrap();
        let rho = random_density_matrix(dims.clone(), 3, &mut rng).unwrap();
        let keep: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
        let t = partial_trace(rho.matrix(), &dims, &keep).unwrap().trace();
        assert!(
            (t - Complex64::new(1.0, 0.0)).norm() < 1e-12,
            "n={n} keep={keep:?}"
        );
    }
}

#[test]
fn eigen_reconstructs_random_hermitian() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for n in [1, 2, 3, 4, 7, 8, 16, 32, 64] {
        let h = random_hermitian(n, &mut rng);
        let e = hermitian_eig(&h).unwrap();
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        let back = e.reconstruct_with(|v| v);
        assert!(
            back.max_abs_diff(&h) < 1e-10 * h.frobenius_norm().max(1.0),
            "n={n}"
        );
        let vv = e.vectors.adjoint().matmul(&e.vectors).unwrap();
        assert!(
            vv.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-10,
            "n={n}"
        );
        let tr: f64 = e.values.iter().sum();
        assert!((tr - h.trace().re).abs() < 1e-10 * (n as f64));
    }
}

#[test]
fn trace_norm_of_density_matrix_is_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for rank in 1..=4 {
        let rho = random_density_matrix(DimList::qubits(3).unwrap(), rank, &mut rng).unwrap();
        assert!((trace_norm(rho.matrix()).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn partial_transpose_is_an_involution() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let dims = DimList::qubits(3).unwrap();
    let rho = random_density_matrix(dims.clone(), 2, &mut rng).unwrap();
    let once = partial_transpose(rho.matrix(), &dims, 1).unwrap();
    let twice = partial_transpose(&once, &dims, 1).unwrap();
    assert!(twice.max_abs_diff(rho.matrix()) < 1e-15);
    assert!((once.trace() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
}
