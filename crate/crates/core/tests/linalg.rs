use necklace::linalg::{embed_pair, embed_single, hermitian_eig, hermitian_func, kron, pauli, ComplexMatrix, C64};
use proptest::prelude::*;

fn matrix(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim * dim)
        .prop_map(|v| ComplexMatrix::from_row_major(v.into_iter().map(|(re, im)| C64::new(re, im)).collect()).unwrap())
}

fn hermitian(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    matrix(dim).prop_map(|m| m.hermitian_part())
}

fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
    (a - b).max_abs() <= tol
}

/// exp(-h / t) by scaling and squaring a truncated Taylor series.
fn taylor_exp(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let x = h.scale(-1.0 / t);
    let squarings = (x.frobenius_norm().log2().ceil().max(0.0) as u32) + 4;
    let x = x.scale(0.5f64.powi(squarings as i32));
    let mut term = ComplexMatrix::identity(x.dim());
    let mut sum = term.clone();
    for k in 1..30 {
        term = term.matmul(&x).scale(1.0 / k as f64);
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum);
    }
    sum
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_is_associative(a in matrix(2), b in matrix(2), c in matrix(2)) {
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        prop_assert!(close(&left, &right, 1e-14));
    }

    #[test]
    fn kron_trace_factorizes(a in matrix(2), b in matrix(4)) {
        let t = kron(&a, &b).trace();
        prop_assert!((t - a.trace() * b.trace()).norm() < 1e-12);
    }

    #[test]
    fn kron_mixed_product(a in matrix(2), b in matrix(2), c in matrix(2), d in matrix(2)) {
        let lhs = kron(&a, &b).matmul(&kron(&c, &d));
        let rhs = kron(&a.matmul(&c), &b.matmul(&d));
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn eigenvalues_sum_to_trace(h in hermitian(8)) {
        let s = hermitian_eig(&h).unwrap();
        let sum: f64 = s.eigenvalues().iter().sum();
        prop_assert!((sum - h.trace().re).abs() < 1e-12);
        prop_assert!(s.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn spectrum_invariants(h in hermitian(8)) {
        let s = hermitian_eig(&h).unwrap();
        let v = s.eigenvectors();
        prop_assert!(close(&v.adjoint().matmul(v), &ComplexMatrix::identity(8), 1e-12));
        prop_assert!(close(&s.reconstruct(), &h, 1e-12));
        for k in 0..8 {
            let col = s.eigenvector(k);
            let lead = col.iter().find(|z| z.norm() > 1e-8).unwrap();
            prop_assert!(lead.im.abs() < 1e-14 && lead.re > 0.0);
        }
    }

    #[test]
    fn exp_log_round_trip(h in hermitian(4)) {
        let e = hermitian_func(&h, f64::exp).unwrap();
        let back = hermitian_func(&e, f64::ln).unwrap();
        prop_assert!(close(&back, &h, 1e-10));
    }

    #[test]
    fn embeds_on_distinct_qubits_commute(a in hermitian(2), b in hermitian(2), qa in 0usize..4, qb in 0usize..4) {
        prop_assume!(qa != qb);
        let ea = embed_single(&a, qa, 4).unwrap();
        let eb = embed_single(&b, qb, 4).unwrap();
        prop_assert!(ea.commutator(&eb).max_abs() < 1e-13);
    }

    #[test]
    fn pair_embed_is_product_of_singles(a in matrix(2), b in matrix(2), qa in 0usize..3, qb in 0usize..3) {
        prop_assume!(qa != qb);
        let pair = embed_pair(&a, qa, &b, qb, 3).unwrap();
        let product = embed_single(&a, qa, 3).unwrap().matmul(&embed_single(&b, qb, 3).unwrap());
        prop_assert!(close(&pair, &product, 1e-13));
    }
}

#[test]
fn gibbs_weight_matches_taylor_oracle() {
    let mut state = 0x2545_f491_4f6c_dd1du64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    let h = ComplexMatrix::from_fn(8, |_, _| C64::new(next(), next())).hermitian_part();
    for t in [0.3, 1.0, 5.0] {
        let via_eig = hermitian_func(&h, |e| (-e / t).exp()).unwrap();
        let oracle = taylor_exp(&h, t);
        let scale = oracle.max_abs();
        assert!((&via_eig - &oracle).max_abs() / scale < 1e-8, "T = {t}");
    }
}

#[test]
fn spin_operators_obey_su2() {
    let (x, y, z) = (pauli::spin_x(), pauli::spin_y(), pauli::spin_z());
    let i = C64::new(0.0, 1.0);
    assert!(close(&x.commutator(&y), &z.scale_complex(i), 1e-15));
    assert!(close(&y.commutator(&z), &x.scale_complex(i), 1e-15));
    let casimir = &(&x.matmul(&x) + &y.matmul(&y)) + &z.matmul(&z);
    assert!(close(&casimir, &ComplexMatrix::identity(2).scale(0.75), 1e-15));
}
