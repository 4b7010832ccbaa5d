mod common;

use proptest::prelude::*;

use bicneuron::bicluster::{msr, Bicluster};
use bicneuron::contrastive::filter_pairs;
use bicneuron::contrastive::generate_contrastive;
use bicneuron::dataset::{min_max_normalize, split_by_class, DataMatrix, LabelMap, LabeledDataset};
use bicneuron::evaluation::{metrics, stratified_folds, wilcoxon_exact};
use bicneuron::perceptron::Kernel;

fn matrix_strategy(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-10.0f64..10.0, c), r)
    })
}

fn host(rows: &[Vec<f64>]) -> DataMatrix {
    DataMatrix::from_rows(rows).unwrap()
}

proptest! {
    #[test]
    fn msr_is_shift_invariant(
        m in matrix_strategy(8, 8),
        row_shift in prop::collection::vec(-5.0f64..5.0, 8),
        col_shift in prop::collection::vec(-5.0f64..5.0, 8),
    ) {
        let shifted: Vec<Vec<f64>> = m
            .iter()
            .enumerate()
            .map(|(i, r)| r.iter().enumerate().map(|(j, v)| v + row_shift[i] + col_shift[j]).collect())
            .collect();
        let rows: Vec<usize> = (0..m.len()).collect();
        let cols: Vec<usize> = (0..m[0].len()).collect();
        let a = msr(&host(&m), &rows, &cols).unwrap();
        let b = msr(&host(&shifted), &rows, &cols).unwrap();
        prop_assert!(a >= 0.0);
        prop_assert!((a - b).abs() <= 1e-9);
    }

    #[test]
    fn normalization_is_idempotent_and_bounded(m in matrix_strategy(10, 6)) {
        let (once, _) = min_max_normalize(&host(&m));
        let (twice, _) = min_max_normalize(&once);
        for (a, b) in once.values().iter().zip(twice.values()) {
            prop_assert!((0.0..=1.0).contains(a));
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn class_split_round_trips(labels in prop::collection::vec(prop::bool::ANY, 2..30)) {
        prop_assume!(labels.iter().any(|&b| b) && labels.iter().any(|&b| !b));
        let rows: Vec<Vec<f64>> = (0..labels.len()).map(|i| vec![i as f64, 0.5]).collect();
        let roles: Vec<i8> = labels.iter().map(|&b| if b { 1 } else { -1 }).collect();
        let d = LabeledDataset::new(host(&rows), roles.clone(), LabelMap::default()).unwrap();
        let s = split_by_class(&d).unwrap();
        let mut seen: Vec<usize> = s.class1_rows.iter().chain(&s.class2_rows).copied().collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..labels.len()).collect::<Vec<_>>());
        for (k, &i) in s.class1_rows.iter().enumerate() {
            prop_assert_eq!(roles[i], 1);
            prop_assert_eq!(s.class1.row(k)[0], i as f64);
        }
    }

    #[test]
    fn wilcoxon_is_symmetric_and_a_probability(
        pairs in prop::collection::vec((0i32..6, 0i32..6), 1..14)
    ) {
        let a: Vec<f64> = pairs.iter().map(|p| p.0 as f64).collect();
        let b: Vec<f64> = pairs.iter().map(|p| p.1 as f64).collect();
        let p = wilcoxon_exact(&a, &b).unwrap();
        prop_assert!(p > 0.0 && p <= 1.0);
        prop_assert_eq!(p, wilcoxon_exact(&b, &a).unwrap());
        prop_assert_eq!(p, common::brute_wilcoxon(&a, &b));
    }

    #[test]
    fn folds_partition_and_stratify(
        n1 in 5usize..30, n2 in 5usize..30, k in 2usize..6, seed in any::<u64>()
    ) {
        let labels: Vec<i8> = (0..n1 + n2).map(|i| if i % 3 == 0 && i / 3 < n1 { 1 } else { -1 }).collect();
        let ones = labels.iter().filter(|&&l| l == 1).count();
        prop_assume!(ones >= k && labels.len() - ones >= k);
        let plan = stratified_folds(&labels, k, seed).unwrap();
        let mut all: Vec<usize> = (0..k).flat_map(|f| plan.test_indices(f)).collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..labels.len()).collect::<Vec<_>>());
        for class in [1i8, -1] {
            let counts: Vec<usize> = (0..k)
                .map(|f| plan.test_indices(f).iter().filter(|&&i| labels[i] == class).count())
                .collect();
            prop_assert!(counts.iter().max().unwrap() - counts.iter().min().unwrap() <= 1);
        }
        prop_assert_eq!(plan, stratified_folds(&labels, k, seed).unwrap());
    }

    #[test]
    fn rbf_kernel_is_bounded_and_symmetric(
        a in prop::collection::vec(-3.0f64..3.0, 4),
        b in prop::collection::vec(-3.0f64..3.0, 4),
        sigma in 0.01f64..5.0,
    ) {
        let k = Kernel::Rbf { sigma };
        let ab = k.eval(&a, &b).unwrap();
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert_eq!(ab, k.eval(&b, &a).unwrap());
        prop_assert_eq!(k.eval(&a, &a).unwrap(), 1.0);
    }

    #[test]
    fn balanced_auc_equals_accuracy(preds in prop::collection::vec(prop::bool::ANY, 1..30)) {
        let n = preds.len();
        let truth: Vec<i8> = (0..2 * n).map(|i| if i < n { 1 } else { -1 }).collect();
        let guess: Vec<i8> = preds
            .iter()
            .chain(preds.iter().rev())
            .map(|&b| if b { 1 } else { -1 })
            .collect();
        let r = metrics(&truth, &guess, 1).unwrap();
        prop_assert!((r.auc - r.acc).abs() <= 1e-12);
    }

    #[test]
    fn filtered_pairs_are_sorted_and_below_tau(
        m in matrix_strategy(9, 4),
        tau in 0.05f64..3.0,
    ) {
        prop_assume!(m.len() >= 4 && m[0].len() >= 2);
        let (c1, c2) = m.split_at(m.len() / 2);
        let (h1, h2) = (host(c1), host(c2));
        let cols: Vec<usize> = (0..m[0].len()).collect();
        let pairs: Vec<_> = (0..h1.n_rows().saturating_sub(1))
            .map(|i| {
                let b = Bicluster::new(&h1, vec![i, i + 1], cols.clone()).unwrap();
                generate_contrastive(&b, &h1, &h2).unwrap()
            })
            .collect();
        let kept = filter_pairs(&pairs, tau);
        let ratios: Vec<f64> = kept.iter().map(|p| p.ratio.value().unwrap()).collect();
        prop_assert!(ratios.iter().all(|&r| r <= tau));
        prop_assert!(ratios.windows(2).all(|w| w[0] <= w[1]));
        let eligible = pairs.iter().filter(|p| p.ratio.value().is_some_and(|r| r <= tau)).count();
        prop_assert_eq!(kept.len(), eligible);
    }
}
