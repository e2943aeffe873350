use monokit::fem1d::{wp_norm, Mesh1D};
use monokit::inequality::{lemma_integral_exact, lemma_lower_bound};
use monokit::verifier::{delta_at_point, monotone_gap_ratio, smallest_eigenvalue_sym, theoretical_c};
use monokit::{DiscreteFunctionF64, FamilySpecF64, LemmaInput, Matrix, Tridiagonal};
use proptest::prelude::*;

fn component() -> impl Strategy<Value = f64> {
    prop_oneof![-10.0..-1e-3, 1e-3..10.0]
}

fn point(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(component(), dim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn lemma_bound_holds(a in -10.0f64..10.0, b in -10.0f64..10.0, s in 0.0f64..6.0) {
        let i = LemmaInput::new(a, b, s).unwrap();
        let bound = lemma_lower_bound(&i);
        prop_assert!(lemma_integral_exact(&i) >= bound - 1e-12 * bound.max(1.0));
    }

    #[test]
    fn lemma_is_homogeneous(a in -5.0f64..5.0, b in -5.0f64..5.0, s in 0.0f64..4.0, lambda in 0.1f64..4.0) {
        let base = lemma_integral_exact(&LemmaInput::new(a, b, s).unwrap());
        let scaled = lemma_integral_exact(&LemmaInput::new(lambda * a, lambda * b, s).unwrap());
        prop_assert!((scaled - lambda.powf(s) * base).abs() <= 1e-10 * scaled.abs().max(1e-12));
    }

    #[test]
    fn eigenvalue_shifts_with_identity(entries in prop::collection::vec(-5.0f64..5.0, 6), t in -3.0f64..3.0) {
        let rows = vec![
            vec![entries[0], entries[1], entries[2]],
            vec![entries[1], entries[3], entries[4]],
            vec![entries[2], entries[4], entries[5]],
        ];
        let a = Matrix::from_rows(&rows).unwrap();
        let base = smallest_eigenvalue_sym(&a).unwrap();
        let shifted = smallest_eigenvalue_sym(&a.add_scaled_identity(t)).unwrap();
        prop_assert!((shifted - base - t).abs() <= 1e-10);
    }

    #[test]
    fn odd_families_are_odd(xi in point(3), p in 2.0..4.0) {
        let minus: Vec<f64> = xi.iter().map(|x| -x).collect();
        for spec in [
            FamilySpecF64::example1(p, 2).unwrap(),
            FamilySpecF64::example2(p, 2).unwrap(),
            FamilySpecF64::example4(p, 2, 1).unwrap(),
        ] {
            let a = spec.eval_coefficients(&xi).unwrap();
            let b = spec.eval_coefficients(&minus).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert_eq!(*x, -*y);
            }
        }
    }

    #[test]
    fn example4_is_block_triangular(xi in point(4), p in 2.0..4.0, k in 0usize..3) {
        let spec = FamilySpecF64::example4(p, 3, k).unwrap();
        let j = spec.eval_jacobian(&xi).unwrap();
        for i in k + 1..4 {
            for c in 0..=k {
                prop_assert_eq!(j[(i, c)], 0.0);
            }
        }
    }

    #[test]
    fn example1_commutes_with_permutations(xi in point(4), p in 2.0..5.0) {
        let spec = FamilySpecF64::example1(p, 3).unwrap();
        let perm = [2usize, 0, 3, 1];
        let permuted: Vec<f64> = perm.iter().map(|&i| xi[i]).collect();
        let a = spec.eval_coefficients(&xi).unwrap();
        let b = spec.eval_coefficients(&permuted).unwrap();
        for (slot, &i) in perm.iter().enumerate() {
            prop_assert_eq!(b[slot], a[i]);
        }
        let d1 = delta_at_point(&spec, &xi).unwrap();
        let d2 = delta_at_point(&spec, &permuted).unwrap();
        prop_assert!((d1 - d2).abs() <= 1e-12);
    }

    #[test]
    fn example2_gradient_permutation_keeps_delta(xi in point(3), p in 2.0..4.0) {
        let spec = FamilySpecF64::example2(p, 2).unwrap();
        let swapped = vec![xi[0], xi[2], xi[1]];
        let d1 = delta_at_point(&spec, &xi).unwrap();
        let d2 = delta_at_point(&spec, &swapped).unwrap();
        prop_assert!((d1 - d2).abs() <= 1e-10 * d1.abs().max(1.0));
    }

    #[test]
    fn gap_ratio_dominates_constant(x in point(3), y in point(3), p in 2.0..4.0) {
        let spec = FamilySpecF64::example1(p, 2).unwrap();
        let c = theoretical_c(p - 1.0, p).unwrap();
        let r = monotone_gap_ratio(&spec, &x, &y).unwrap();
        prop_assert!(r >= c - 1e-10, "{} < {}", r, c);
        let back = monotone_gap_ratio(&spec, &y, &x).unwrap();
        prop_assert!((r - back).abs() <= 1e-12 * r.abs());
    }

    #[test]
    fn tridiagonal_solve_inverts_matvec(v in prop::collection::vec(-5.0f64..5.0, 8), off in -1.0f64..1.0) {
        let n = v.len();
        let t = Tridiagonal {
            lower: vec![off; n - 1],
            diag: vec![3.0; n],
            upper: vec![-off; n - 1],
        };
        let x = t.solve(&t.mul_vec(&v)).unwrap();
        for (a, b) in x.iter().zip(&v) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn wp_norm_scales_linearly(values in prop::collection::vec(-3.0..3.0, 7), lambda in -5.0..5.0, p in 2.0..5.0) {
        let u = DiscreteFunctionF64::new(Mesh1D::new(8).unwrap(), values).unwrap();
        let lhs = wp_norm(&u.scale(lambda), p).unwrap();
        let rhs = f64::abs(lambda) * wp_norm(&u, p).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
    }
}
