//! Exact two-sided Wilcoxon signed-rank test for paired samples.

use super::EvalError;

/// Largest number of pairs handled by exact enumeration.
pub const MAX_EXACT_N: usize = 25;

/// Two-sided exact p-value of the signed-rank test on `a - b`.
///
/// Zero differences are dropped and tied magnitudes share their mid-rank.
/// The statistic is `W = min(W+, W-)`; the p-value is the fraction of the
/// `2^m` sign assignments over the `m` non-zero differences whose statistic
/// is at most the observed one. With no non-zero difference, `p = 1`.
pub fn wilcoxon_exact(a: &[f64], b: &[f64]) -> Result<f64, EvalError> {
    if a.len() != b.len() {
        return Err(EvalError::LengthMismatch(a.len(), b.len()));
    }
    if a.len() > MAX_EXACT_N {
        return Err(EvalError::ExactRegimeExceeded(a.len()));
    }
    let diffs: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| x - y)
        .filter(|d| *d != 0.0)
        .collect();
    let m = diffs.len();
    if m == 0 {
        return Ok(1.0);
    }
    let ranks = doubled_midranks(&diffs);
    let total: usize = ranks.iter().sum();
    let positive: usize = diffs
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| r)
        .sum();
    let observed = positive.min(total - positive);

    // counts[s]: number of sign assignments whose positive doubled-rank sum is s
    let mut counts = vec![0u64; total + 1];
    counts[0] = 1;
    let mut reach = 0;
    for &r in &ranks {
        for s in (0..=reach).rev() {
            if counts[s] > 0 {
                counts[s + r] += counts[s];
            }
        }
        reach += r;
    }
    let extreme: u64 = (0..=total)
        .filter(|&s| s.min(total - s) <= observed)
        .map(|s| counts[s])
        .sum();
    Ok(extreme as f64 / (1u64 << m) as f64)
}

/// Twice the mid-rank of each |d|, so tied ranks stay integral.
fn doubled_midranks(diffs: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..diffs.len()).collect();
    order.sort_by(|&x, &y| diffs[x].abs().total_cmp(&diffs[y].abs()));
    let mut ranks = vec![0; diffs.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start;
        while end + 1 < order.len() && diffs[order[end + 1]].abs() == diffs[order[start]].abs() {
            end += 1;
        }
        // positions start..=end hold ranks start+1..=end+1
        let doubled = (start + 1) + (end + 1);
        for &i in &order[start..=end] {
            ranks[i] = doubled;
        }
        start = end + 1;
    }
    ranks
}
