use attnet_core::stats::*;
use proptest::prelude::*;

fn table_strategy() -> impl Strategy<Value = Vec<Vec<u64>>> {
    (2usize..=4, 2usize..=4).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(1u64..60, c), r))
}

fn finite_vec(n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0f64..100.0, n)
}

/// Two-sided signed-rank p by listing every sign assignment.
fn brute_force_wilcoxon(ranks: &[f64], v: f64) -> f64 {
    let n = ranks.len();
    let (mut lo, mut hi) = (0u64, 0u64);
    for mask in 0u32..(1 << n) {
        let s: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
        if s <= v + 1e-9 {
            lo += 1;
        }
        if s >= v - 1e-9 {
            hi += 1;
        }
    }
    (2.0 * lo.min(hi) as f64 / (1u64 << n) as f64).min(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn polychoric_is_symmetric_in_its_arguments(counts in table_strategy()) {
        let t = ContingencyTable::from_counts(counts).unwrap();
        let a = polychoric(&t).unwrap().rho;
        let b = polychoric(&t.transpose()).unwrap().rho;
        prop_assert!((a - b).abs() <= 1e-8, "{a} vs {b}");
        prop_assert!((-1.0..=1.0).contains(&a));
    }

    #[test]
    fn reversing_one_variable_flips_the_sign(counts in table_strategy()) {
        let t = ContingencyTable::from_counts(counts).unwrap();
        let a = polychoric(&t).unwrap().rho;
        prop_assert!((a + polychoric(&t.reverse_rows()).unwrap().rho).abs() <= 1e-8);
        prop_assert!((a + polychoric(&t.reverse_cols()).unwrap().rho).abs() <= 1e-8);
    }

    #[test]
    fn balanced_tetrachoric_matches_closed_form(a in 1u64..500, b in 1u64..500) {
        let t = ContingencyTable::from_counts(vec![vec![a, b], vec![b, a]]).unwrap();
        let p11 = a as f64 / (2 * (a + b)) as f64;
        let closed = (2.0 * std::f64::consts::PI * (p11 - 0.25)).sin();
        let est = polychoric(&t).unwrap();
        // Near-perfect tables hit the clamp instead of the closed form.
        if closed.abs() < RHO_BOUND - 1e-3 {
            prop_assert!((est.rho - closed).abs() <= 1e-3, "{} vs {closed}", est.rho);
        }
    }

    #[test]
    fn correlations_lie_in_unit_interval(
        x in finite_vec(5..40),
        seed in 0u64..1000,
    ) {
        let n = x.len();
        let y: Vec<f64> = (0..n).map(|i| ((i as u64 * 7919 + seed) % 101) as f64 - x[i] * 0.3).collect();
        let bin: Vec<u8> = (0..n).map(|i| u8::from((i as u64 + seed) % 3 == 0)).collect();
        for r in [pearson(&x, &y).map(|c| c.r), spearman(&x, &y).map(|c| c.r)].into_iter().flatten() {
            prop_assert!((-1.0..=1.0).contains(&r));
        }
        for r in [biserial(&x, &bin), point_biserial(&x, &bin)].into_iter().flatten() {
            prop_assert!((-1.0..=1.0).contains(&r));
        }
    }

    #[test]
    fn ols_slope_is_r_times_sd_ratio(x in finite_vec(3..50), noise in finite_vec(50..51), slope in -5.0f64..5.0) {
        let y: Vec<f64> = x.iter().zip(&noise).map(|(a, e)| slope * a + e).collect();
        if let (Ok(fit), Ok(c)) = (ols_simple(&x, &y), pearson(&x, &y)) {
            let expected = c.r * sample_sd(&y) / sample_sd(&x);
            prop_assert!((fit.slope - expected).abs() <= 1e-10 * expected.abs().max(1.0));
        }
    }

    #[test]
    fn exact_wilcoxon_matches_enumeration(
        a in prop::collection::vec(0i32..6, 1..=12),
        b in prop::collection::vec(0i32..6, 12),
    ) {
        let a: Vec<f64> = a.iter().map(|&v| v as f64).collect();
        let b: Vec<f64> = b[..a.len()].iter().map(|&v| v as f64).collect();
        let diffs: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).filter(|d| *d != 0.0).collect();
        prop_assume!(!diffs.is_empty());
        let res = wilcoxon_signed_rank_with(&a, &b, WilcoxonMode::Exact).unwrap();
        let ranks = midranks(&diffs.iter().map(|d| d.abs()).collect::<Vec<_>>());
        prop_assert_eq!(res.p_value, brute_force_wilcoxon(&ranks, res.statistic));
        prop_assert!((0.0..=1.0).contains(&res.effect_size));
    }
}
