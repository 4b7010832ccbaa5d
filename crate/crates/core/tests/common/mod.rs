#![allow(dead_code)]

//! Independent reference implementations used as test oracles. None of these
//! call into the library's numeric code.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// MSR straight from the definition, on a row-major `Vec<Vec<f64>>`.
pub fn brute_msr(m: &[Vec<f64>], rows: &[usize], cols: &[usize]) -> f64 {
    let nr = rows.len() as f64;
    let nc = cols.len() as f64;
    let row_mean = |i: usize| cols.iter().map(|&j| m[i][j]).sum::<f64>() / nc;
    let col_mean = |j: usize| rows.iter().map(|&i| m[i][j]).sum::<f64>() / nr;
    let all = rows
        .iter()
        .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
        .map(|(i, j)| m[i][j])
        .sum::<f64>()
        / (nr * nc);
    let mut total = 0.0;
    for &i in rows {
        for &j in cols {
            let r = m[i][j] - row_mean(i) - col_mean(j) + all;
            total += r * r;
        }
    }
    total / (nr * nc)
}

/// Two-sided signed-rank p-value by walking all `2^m` sign vectors, with
/// fractional mid-ranks.
pub fn brute_wilcoxon(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| x - y)
        .filter(|v| *v != 0.0)
        .collect();
    let m = d.len();
    if m == 0 {
        return 1.0;
    }
    let abs: Vec<f64> = d.iter().map(|v| v.abs()).collect();
    let ranks: Vec<f64> = abs
        .iter()
        .map(|&v| {
            let below = abs.iter().filter(|&&w| w < v).count() as f64;
            let equal = abs.iter().filter(|&&w| w == v).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect();
    let total: f64 = ranks.iter().sum();
    let stat = |signs: &dyn Fn(usize) -> bool| {
        let plus: f64 = (0..m).filter(|&k| signs(k)).map(|k| ranks[k]).sum();
        plus.min(total - plus)
    };
    let observed = stat(&|k| d[k] > 0.0);
    let mut count = 0u64;
    for mask in 0u64..(1 << m) {
        if stat(&|k| mask >> k & 1 == 1) <= observed + 1e-9 {
            count += 1;
        }
    }
    count as f64 / (1u64 << m) as f64
}

/// All subsets of `0..n` with at least `min` elements, as sorted vectors.
pub fn subsets(n: usize, min: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << n))
        .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|s| s.len() >= min)
        .collect()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<f64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(0.0..1.0)).collect())
        .collect()
}

/// `a_i + b_j` plus uniform noise in `[-noise, noise]`.
pub fn additive_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, noise: f64) -> Vec<Vec<f64>> {
    let a: Vec<f64> = (0..rows).map(|_| rng.gen_range(0.0..0.5)).collect();
    let b: Vec<f64> = (0..cols).map(|_| rng.gen_range(0.0..0.5)).collect();
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    let e = if noise > 0.0 { rng.gen_range(-noise..=noise) } else { 0.0 };
                    a[i] + b[j] + e
                })
                .collect()
        })
        .collect()
}

/// Min-max scaling of one value by hand.
pub fn scale(v: f64, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        (v - lo) / (hi - lo)
    } else {
        0.0
    }
}

/// Raw values of the nine-row worked example (rows o1..o9, columns f1..f4) and labels.
pub const TOY_RAW: [[f64; 4]; 9] = [
    [15.0, 12.0, 20.0, 13.0],
    [20.0, 18.0, 25.0, 7.0],
    [25.0, 22.0, 30.0, 35.0],
    [33.0, 7.0, 46.0, 50.0],
    [10.0, 10.0, 35.0, 45.0],
    [15.0, 30.0, 40.0, 41.0],
    [22.0, 20.0, 20.0, 10.0],
    [30.0, 15.0, 25.0, 32.0],
    [20.0, 17.0, 30.0, 50.0],
];

/// The same table min-max scaled and rounded to two decimals.
pub const TOY_ROUNDED: [[f64; 4]; 9] = [
    [0.22, 0.22, 0.00, 0.14],
    [0.43, 0.48, 0.19, 0.00],
    [0.65, 0.65, 0.38, 0.65],
    [1.00, 0.00, 1.00, 1.00],
    [0.00, 0.13, 0.58, 0.88],
    [0.22, 1.00, 0.77, 0.79],
    [0.52, 0.57, 0.00, 0.07],
    [0.87, 0.35, 0.19, 0.58],
    [0.43, 0.43, 0.38, 1.00],
];

pub fn toy_csv_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/toy.csv")
}

pub fn toy_fixture_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/toy_biclusters.txt")
}
