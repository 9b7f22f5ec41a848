use ergocoef::bounds::{constancy_probe, largest_bound, smallest_bound_singular};
use ergocoef::coefficients::column_stat;
use ergocoef::matrix::{invert, scaled_power};
use ergocoef::report::{canonicalize, AnalysisReport};
use ergocoef::spectrum::spectrum;
use ergocoef::{tau, tau_1, tau_1_minform, EMatrix, Matrix, PNorm};
use proptest::prelude::*;
use serde_json::json;

fn ematrix(n: usize) -> impl Strategy<Value = EMatrix> {
    (prop::collection::vec(-5.0f64..5.0, n * n), -5.0f64..5.0).prop_map(move |(data, c)| {
        let mut rows: Vec<Vec<f64>> = data.chunks(n).map(<[f64]>::to_vec).collect();
        for row in &mut rows {
            let delta = (c - row.iter().sum::<f64>()) / n as f64;
            row.iter_mut().for_each(|x| *x += delta);
        }
        EMatrix::from_rows(&rows).unwrap()
    })
}

fn any_ematrix() -> impl Strategy<Value = EMatrix> {
    (2usize..=7).prop_flat_map(ematrix)
}

fn pair() -> impl Strategy<Value = (EMatrix, EMatrix)> {
    (2usize..=7).prop_flat_map(|n| (ematrix(n), ematrix(n)))
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn min_form_matches_pairwise(a in any_ematrix()) {
        prop_assert!(close(tau_1(a.matrix()), tau_1_minform(&a), 1e-12));
    }

    #[test]
    fn column_statistic_is_a_median_split(col in prop::collection::vec(-10.0f64..10.0, 1..12)) {
        // Upper half minus lower half equals the L1 distance to a median.
        let cs = column_stat(&col, 0).cs_value;
        let mut sorted = col.clone();
        sorted.sort_by(f64::total_cmp);
        let t = sorted[(sorted.len() - 1) / 2];
        let l1: f64 = col.iter().map(|x| (x - t).abs()).sum();
        prop_assert!(close(cs, l1, 1e-12), "{} vs {}", cs, l1);
    }

    #[test]
    fn rank_one_shift_leaves_tau_unchanged(a in any_ematrix(), alpha in -4.0f64..4.0) {
        for p in PNorm::ALL {
            let shifted = a.add_rank_one_shift(alpha);
            prop_assert!(close(tau(shifted.matrix(), p), tau(a.matrix(), p), 1e-12));
            prop_assert!(close(largest_bound(&shifted, p, 3), largest_bound(&a, p, 3), 1e-9));
        }
    }

    #[test]
    fn rank_one_matrices_have_zero_coefficient(
        v in prop::collection::vec(-5.0f64..5.0, 2..8),
    ) {
        let n = v.len();
        let rows: Vec<Vec<f64>> = (0..n).map(|_| v.clone()).collect();
        let m = Matrix::from_rows(&rows).unwrap();
        for p in PNorm::ALL {
            prop_assert!(tau(&m, p).abs() <= 1e-12);
        }
    }

    #[test]
    fn coefficient_dominated_by_induced_norm(a in any_ematrix()) {
        use ergocoef::induced_norm;
        // tau_1 is bounded by the column-sum norm of A^T, i.e. the row-sum norm of A.
        prop_assert!(tau(a.matrix(), PNorm::One) <= induced_norm(a.matrix(), PNorm::Infinity) + 1e-9);
        prop_assert!(tau(a.matrix(), PNorm::Infinity) <= induced_norm(a.matrix(), PNorm::One) + 1e-9);
    }

    #[test]
    fn scaled_power_matches_repeated_product(a in any_ematrix(), k in 1u64..7) {
        let mut naive = a.matrix().clone();
        for _ in 1..k {
            naive = naive.multiply(a.matrix()).unwrap();
        }
        let fast = scaled_power(&a, k).reconstruct();
        let scale = naive.max_abs().max(1.0);
        prop_assert!(fast.max_abs_diff(&naive).unwrap() <= 1e-10 * scale);
    }

    #[test]
    fn inverse_round_trip(a in any_ematrix()) {
        if let Ok(inv) = invert(&a) {
            let prod = a.matrix().multiply(inv.matrix()).unwrap();
            let cond = a.matrix().max_abs() * inv.matrix().max_abs() * a.dim() as f64;
            prop_assume!(cond < 1e8);
            prop_assert!(prod.max_abs_diff(&Matrix::identity(a.dim())).unwrap() <= 1e-12 * cond);
            prop_assert!(close(inv.trivial_eigenvalue() * a.trivial_eigenvalue(), 1.0, 1e-8));
        }
    }

    #[test]
    fn brauer_shift_moves_only_the_trivial_eigenvalue(n in 2usize..=5, alpha in 0.5f64..3.0) {
        // Symmetric zero-row-sum input, so the spectrum is real.
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if i != j && (i + j) % 2 == 1 {
                    m.set(i, j, -1.0);
                }
            }
        }
        for i in 0..n {
            let s: f64 = m.row(i).iter().sum();
            m.set(i, i, -s);
        }
        let a = EMatrix::new(m).unwrap();
        let mut before: Vec<f64> = spectrum(a.matrix()).unwrap().eigenvalues.iter().map(|z| z.re).collect();
        let mut after: Vec<f64> = spectrum(a.add_rank_one_shift(alpha).matrix())
            .unwrap()
            .eigenvalues
            .iter()
            .map(|z| z.re)
            .collect();
        // Replace the trivial eigenvalue 0 by n*alpha and compare multisets.
        let pos = before.iter().position(|x| x.abs() < 1e-9).unwrap();
        before[pos] = n as f64 * alpha;
        before.sort_by(f64::total_cmp);
        after.sort_by(f64::total_cmp);
        for (x, y) in before.iter().zip(&after) {
            prop_assert!(close(*x, *y, 1e-9));
        }
    }

    #[test]
    fn ematrices_closed_under_operations((a, b) in pair(), c in -3.0f64..3.0) {
        let sum = a.add(&b).unwrap();
        prop_assert!(close(sum.trivial_eigenvalue(), a.trivial_eigenvalue() + b.trivial_eigenvalue(), 1e-12));
        let prod = a.multiply(&b).unwrap();
        prop_assert!(close(prod.trivial_eigenvalue(), a.trivial_eigenvalue() * b.trivial_eigenvalue(), 1e-9));
        prop_assert!(close(a.scale(c).trivial_eigenvalue(), c * a.trivial_eigenvalue(), 1e-12));
    }

    #[test]
    fn singular_bound_independent_of_shift(n in 2usize..=6, alpha in 0.2f64..5.0) {
        let path = ergocoef::Graph::path(n);
        let l = ergocoef::laplacian(&path);
        for p in PNorm::ALL {
            let base = smallest_bound_singular(&l, p, 2, 1.0).unwrap();
            let other = smallest_bound_singular(&l, p, 2, alpha).unwrap();
            prop_assert!(close(base, other, 1e-8), "{} vs {}", base, other);
        }
    }

    #[test]
    fn probe_of_constant_matrix_is_zero(n in 2usize..=6, c in -3.0f64..3.0) {
        let a = EMatrix::constant(n, c);
        for p in PNorm::ALL {
            let probe = constancy_probe(&a, p, 5);
            prop_assert!(probe.constant_all);
            prop_assert!(probe.values.iter().all(|&(_, v)| v == 0.0));
        }
    }

    #[test]
    fn report_json_round_trips(values in prop::collection::vec(-1e6f64..1e6, 1..10), key in "[a-z]{1,8}") {
        let mut r = AnalysisReport::new("bounds", "input.txt");
        r.p = vec!["1".into()];
        r.results = json!({ key: values, "k": 3, "alpha": 0.1 });
        let text = r.to_json();
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        let again = serde_json::to_string_pretty(&canonicalize(parsed)).unwrap();
        prop_assert_eq!(text, again);
    }
}
