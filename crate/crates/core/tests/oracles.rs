mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bicneuron::bicluster::{
    build_dendrogram, cut_dendrogram, mine_biclusters, msr, residue, Bicluster, BiclusteringParams,
};
use bicneuron::contrastive::{centroid, generate_contrastive, subspace_distance};
use bicneuron::dataset::{min_max_normalize, DataMatrix, LabelMap, LabeledDataset, CLASS1, CLASS2};
use bicneuron::evaluation::{metrics, stratified_folds};
use bicneuron::perceptron::{Kernel, KernelPerceptron, StandardPerceptron};
use bicneuron::pipeline::{candidate_auc, fit, BicNeuronConfig, PipelineError};
use bicneuron::synthetic::{planted_subspace, uniform_noise, PlantedSpec};
use bicneuron::LearnerKind;
use common::*;

fn matrix(rows: &[Vec<f64>]) -> DataMatrix {
    DataMatrix::from_rows(rows).unwrap()
}

#[test]
fn msr_matches_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let (r, c) = (rng.gen_range(1..9), rng.gen_range(1..9));
        let m = random_matrix(&mut rng, r, c);
        let host = matrix(&m);
        let rows: Vec<usize> = (0..r).filter(|_| rng.gen_bool(0.7)).collect();
        let cols: Vec<usize> = (0..c).filter(|_| rng.gen_bool(0.7)).collect();
        if rows.is_empty() || cols.is_empty() {
            continue;
        }
        let got = msr(&host, &rows, &cols).unwrap();
        assert!((got - brute_msr(&m, &rows, &cols)).abs() < 1e-12);
    }
}

#[test]
fn residue_on_rounded_toy_values() {
    let m: Vec<Vec<f64>> = TOY_ROUNDED.iter().map(|r| r.to_vec()).collect();
    let host = matrix(&m[..4]);
    let r = residue(&host, &[0, 1, 2], &[0, 1, 2], 1, 2).unwrap();
    assert!((r - (-0.0089)).abs() < 1e-3, "{r}");
    assert!((msr(&host, &[0, 1, 2], &[0, 1, 2]).unwrap() - 0.0002).abs() <= 0.0002);
}

/// Average linkage by repeated full rescans.
fn naive_average_linkage(values: &[f64], t_d: f64) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = (0..values.len()).map(|i| vec![i]).collect();
    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let mut total = 0.0;
                for &i in &clusters[a] {
                    for &j in &clusters[b] {
                        total += (values[i] - values[j]).abs();
                    }
                }
                let d = total / (clusters[a].len() * clusters[b].len()) as f64;
                if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, a, b));
                }
            }
        }
        match best {
            Some((d, a, b)) if d <= t_d => {
                let moved = clusters.remove(b);
                clusters[a].extend(moved);
                clusters[a].sort_unstable();
            }
            _ => break,
        }
    }
    clusters.sort();
    clusters
}

#[test]
fn dendrogram_cut_matches_naive_linkage() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let n = rng.gen_range(1..15);
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let t_d = rng.gen_range(0.0..0.6);
        let mut got = cut_dendrogram(&build_dendrogram(&values), t_d);
        got.sort();
        assert_eq!(got, naive_average_linkage(&values, t_d), "values {values:?} t_d {t_d}");
    }
}

#[test]
fn dendrogram_heights_are_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..50 {
        let values: Vec<f64> = (0..20).map(|_| rng.gen_range(0.0..1.0)).collect();
        let d = build_dendrogram(&values);
        assert_eq!(d.merges.len(), 19);
        assert!(d.merges.windows(2).all(|w| w[0].distance <= w[1].distance));
        assert_eq!(d.merges.last().unwrap().size, 20);
    }
}

#[test]
fn mined_biclusters_are_valid_and_column_maximal() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let params = BiclusteringParams::new(0.5, 0.02);
    for trial in 0..30 {
        let (r, c) = (rng.gen_range(3..8), rng.gen_range(3..7));
        let m = if trial % 2 == 0 {
            additive_matrix(&mut rng, r, c, 0.05)
        } else {
            random_matrix(&mut rng, r, c)
        };
        let host = matrix(&m);
        let found = mine_biclusters(&host, &params).unwrap();
        for b in &found {
            assert!(b.n_rows() >= 2 && b.n_cols() >= 2);
            let exact = brute_msr(&m, b.rows(), b.cols());
            assert!((b.msr() - exact).abs() < 1e-12);
            assert!(exact <= params.t_m + 1e-12);
            for cols in subsets(c, 2) {
                let superset = cols.len() > b.n_cols() && b.cols().iter().all(|j| cols.contains(j));
                if superset {
                    assert!(brute_msr(&m, b.rows(), &cols) > params.t_m - 1e-12);
                }
            }
        }
        let mut sorted = found.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), found.len());
    }
}

#[test]
fn contrastive_partner_is_nearest_rows() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..50 {
        let c1 = random_matrix(&mut rng, 5, 4);
        let n2 = rng.gen_range(1..9);
        let c2 = random_matrix(&mut rng, n2, 4);
        let (h1, h2) = (matrix(&c1), matrix(&c2));
        let b = Bicluster::new(&h1, vec![0, 2, 4], vec![1, 3]).unwrap();
        let pair = generate_contrastive(&b, &h1, &h2).unwrap();

        let cent: Vec<f64> = [1, 3]
            .iter()
            .map(|&j| (c1[0][j] + c1[2][j] + c1[4][j]) / 3.0)
            .collect();
        let mut dist: Vec<(f64, usize)> = (0..c2.len())
            .map(|i| {
                let d = ((c2[i][1] - cent[0]).powi(2) + (c2[i][3] - cent[1]).powi(2)).sqrt();
                (d, i)
            })
            .collect();
        dist.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut expect: Vec<usize> = dist.iter().take(3.min(c2.len())).map(|p| p.1).collect();
        expect.sort_unstable();
        assert_eq!(pair.b2.rows(), expect.as_slice());
        for (a, e) in centroid(&b, &h1).iter().zip(&cent) {
            assert!((a - e).abs() < 1e-12);
        }
        let d0 = subspace_distance(h2.row(0), &cent, &[1, 3]).unwrap();
        assert!((d0 - dist.iter().find(|p| p.1 == 0).unwrap().0).abs() < 1e-12);
    }
}

#[test]
fn metrics_from_confusion_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let n = rng.gen_range(1..40);
        let t: Vec<i8> = (0..n).map(|_| if rng.gen_bool(0.4) { 1 } else { -1 }).collect();
        let p: Vec<i8> = (0..n).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
        let r = metrics(&t, &p, 1).unwrap();
        let tp = (0..n).filter(|&i| t[i] == 1 && p[i] == 1).count();
        let tn = (0..n).filter(|&i| t[i] == -1 && p[i] == -1).count();
        let pos = t.iter().filter(|&&v| v == 1).count();
        let neg = n - pos;
        assert_eq!((r.tp, r.tn), (tp, tn));
        assert!((r.acc - (tp + tn) as f64 / n as f64).abs() < 1e-15);
        let tpr = if pos == 0 { 1.0 } else { tp as f64 / pos as f64 };
        let tnr = if neg == 0 { 1.0 } else { tn as f64 / neg as f64 };
        assert!((r.auc - (tpr + tnr) / 2.0).abs() < 1e-15);
        assert_eq!(r.missing_class, pos == 0 || neg == 0);
    }
}

#[test]
fn majority_predictions_on_sixty_forty() {
    let t: Vec<i8> = (0..100).map(|i| if i < 40 { 1 } else { -1 }).collect();
    let r = metrics(&t, &[-1; 100], 1).unwrap();
    assert_eq!((r.acc, r.acc_minor, r.acc_major, r.auc), (0.6, 0.0, 1.0, 0.5));
}

#[test]
fn stratified_fold_counts() {
    let labels: Vec<i8> = [vec![1; 20], vec![-1; 20]].concat();
    let plan = stratified_folds(&labels, 10, 3).unwrap();
    for f in 0..10 {
        let idx = plan.test_indices(f);
        assert_eq!(idx.iter().filter(|&&i| labels[i] == 1).count(), 2);
        assert_eq!(idx.len(), 4);
    }
    let labels: Vec<i8> = [vec![1; 9], vec![-1; 5]].concat();
    let plan = stratified_folds(&labels, 5, 3).unwrap();
    for class in [1, -1] {
        let counts: Vec<usize> = (0..5)
            .map(|f| plan.test_indices(f).iter().filter(|&&i| labels[i] == class).count())
            .collect();
        assert!(counts.iter().max().unwrap() - counts.iter().min().unwrap() <= 1);
    }
}

#[test]
fn standard_perceptron_by_hand() {
    let data = LabeledDataset::new(matrix(&[vec![1.0, 0.0]]), vec![1], LabelMap::default()).unwrap();
    let p = StandardPerceptron::train(&data, 0.1, 1, 0).unwrap();
    assert_eq!(p.weights, vec![0.1, 0.0, 0.1]);
    assert!((p.score(&[1.0, 0.0]).unwrap() - 0.2).abs() < 1e-15);
}

#[test]
fn kernel_perceptron_rbf_separates_two_points() {
    let data = LabeledDataset::new(
        matrix(&[vec![0.2, 0.4], vec![0.7, 0.1]]),
        vec![1, -1],
        LabelMap::default(),
    )
    .unwrap();
    let kp = KernelPerceptron::train(&data, Kernel::Rbf { sigma: 0.1 }, 5).unwrap();
    assert_eq!(kp.predict(&[0.2, 0.4]).unwrap(), 1);
    assert_eq!(kp.predict(&[0.7, 0.1]).unwrap(), -1);
    let k = Kernel::Rbf { sigma: 0.1 }.eval(&[0.0], &[0.1]).unwrap();
    assert!((k - (-0.5f64).exp()).abs() < 1e-15);
}

#[test]
fn planted_fit_finds_planted_columns() {
    for seed in 0..5 {
        let p = planted_subspace(&PlantedSpec::default(), seed);
        let cfg = BicNeuronConfig::new(0.5, 0.02, 0.5, LearnerKind::standard(seed));
        let model = fit(&p.data, &cfg).unwrap();
        let overlap = model.columns.iter().filter(|j| p.planted.contains(j)).count();
        assert!(overlap >= 3, "seed {seed}: {:?} vs {:?}", model.columns, p.planted);

        // winner optimality and independent AUC recomputation
        let best = model
            .diagnostics
            .candidates
            .iter()
            .map(|c| c.auc)
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(model.training_auc, best);
        assert_eq!(model.diagnostics.n_pairs, model.diagnostics.candidates.len());
        let (norm, _) = min_max_normalize(&p.data.matrix);
        let full = p.data.with_matrix(norm).unwrap();
        let auc = candidate_auc(&model.perceptron, &model.columns, &full).unwrap();
        let preds: Vec<i8> = (0..full.n_rows())
            .map(|i| model.predict_role(p.data.matrix.row(i)).unwrap())
            .collect();
        let r = metrics(full.labels(), &preds, CLASS1).unwrap();
        let tpr = r.tp as f64 / (r.tp + r.fn_) as f64;
        let tnr = r.tn as f64 / (r.tn + r.fp) as f64;
        assert!((auc - (tpr + tnr) / 2.0).abs() < 1e-12);
        assert_eq!(auc, model.training_auc);
    }
}

#[test]
fn noise_with_strict_tau_has_no_subspace() {
    let mut failures = 0;
    for seed in 0..10 {
        let data = uniform_noise(40, 60, 12, seed);
        let cfg = BicNeuronConfig::new(0.5, 0.02, 0.1, LearnerKind::standard(seed));
        if matches!(fit(&data, &cfg), Err(PipelineError::NoDiscriminativeSubspace)) {
            failures += 1;
        }
    }
    assert!(failures >= 9, "{failures}/10");
}

#[test]
fn predict_maps_back_to_original_labels() {
    let p = planted_subspace(&PlantedSpec::default(), 1);
    let cfg = BicNeuronConfig::new(0.5, 0.02, 0.5, LearnerKind::kernel_linear());
    let model = fit(&p.data, &cfg).unwrap();
    for i in 0..p.data.n_rows() {
        let x = p.data.matrix.row(i);
        let role = model.predict_role(x).unwrap();
        let name = model.predict(x).unwrap();
        assert_eq!(name, if role == CLASS1 { "planted" } else { "noise" });
        assert!(role == CLASS1 || role == CLASS2);
    }
}
