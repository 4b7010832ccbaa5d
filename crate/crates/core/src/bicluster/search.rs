//! Seed expansion, refinement, merging and the full mining procedure.

use rayon::prelude::*;

use super::{
    build_dendrogram, cut_dendrogram, msr_unchecked, row_residue_scores, Bicluster,
    BiclusterError, BiclusteringParams,
};
use crate::dataset::DataMatrix;

/// Column pools up to this size get an exhaustive superset check once greedy
/// expansion stalls.
const EXACT_CLOSURE_MAX_POOL: usize = 10;

fn with_col(cols: &[usize], extra: usize) -> Vec<usize> {
    let pos = cols.partition_point(|&c| c < extra);
    let mut out = Vec::with_capacity(cols.len() + 1);
    out.extend_from_slice(&cols[..pos]);
    out.push(extra);
    out.extend_from_slice(&cols[pos..]);
    out
}

fn sorted_union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Greedily grows the column set of `seed`, one column at a time, always
/// taking the column that gives the lowest MSR as long as it stays within
/// `t_m` (ties go to the lowest column index). Rows are never changed.
///
/// When no single column qualifies and at most
/// `EXACT_CLOSURE_MAX_POOL` columns remain, every superset of the remaining
/// columns is tried and the largest admissible one is added, so the result
/// has no admissible column superset.
pub fn expand(seed: &Bicluster, host: &DataMatrix, params: &BiclusteringParams) -> Bicluster {
    let rows = seed.rows().to_vec();
    let mut cols = seed.cols().to_vec();
    let mut current = seed.msr();
    loop {
        let mut best: Option<(usize, f64)> = None;
        for c in 0..host.n_cols() {
            if cols.binary_search(&c).is_ok() {
                continue;
            }
            let score = msr_unchecked(host, &rows, &with_col(&cols, c));
            if score <= params.t_m && best.is_none_or(|(_, b)| score < b) {
                best = Some((c, score));
            }
        }
        match best {
            Some((c, score)) => {
                cols = with_col(&cols, c);
                current = score;
            }
            None => break,
        }
    }

    let pool: Vec<usize> = (0..host.n_cols())
        .filter(|c| cols.binary_search(c).is_err())
        .collect();
    if pool.len() >= 2 && pool.len() <= EXACT_CLOSURE_MAX_POOL {
        // Single additions were already rejected, so only subsets of size
        // two or more can qualify.
        let mut best: Option<(usize, f64, Vec<usize>)> = None;
        for mask in 1u32..(1u32 << pool.len()) {
            let size = mask.count_ones() as usize;
            if size < 2 {
                continue;
            }
            if let Some((bs, _, _)) = &best {
                if size < *bs {
                    continue;
                }
            }
            let extra: Vec<usize> = (0..pool.len())
                .filter(|k| mask & (1 << k) != 0)
                .map(|k| pool[k])
                .collect();
            let candidate = sorted_union(&cols, &extra);
            let score = msr_unchecked(host, &rows, &candidate);
            if score > params.t_m {
                continue;
            }
            let better = match &best {
                None => true,
                Some((bs, bscore, bcols)) => {
                    size > *bs || (score < *bscore) || (score == *bscore && candidate < *bcols)
                }
            };
            if better {
                best = Some((size, score, candidate));
            }
        }
        if let Some((_, score, candidate)) = best {
            cols = candidate;
            current = score;
        }
    }

    Bicluster {
        rows,
        cols,
        msr: current,
    }
}

/// Removes the row with the largest mean squared residue while the MSR is
/// above `t_m` and more than `min_rows` rows remain. Ties remove the lowest
/// row index first.
pub fn refine(b: &Bicluster, host: &DataMatrix, params: &BiclusteringParams) -> Bicluster {
    let mut rows = b.rows().to_vec();
    let cols = b.cols().to_vec();
    let mut current = b.msr();
    while current > params.t_m && rows.len() > params.min_rows {
        let scores = row_residue_scores(host, &rows, &cols);
        let mut worst = 0;
        for (k, &s) in scores.iter().enumerate() {
            if s > scores[worst] {
                worst = k;
            }
        }
        rows.remove(worst);
        current = msr_unchecked(host, &rows, &cols);
    }
    Bicluster {
        rows,
        cols,
        msr: current,
    }
}

fn normalize_set(mut bics: Vec<Bicluster>) -> Vec<Bicluster> {
    bics.sort();
    bics.dedup();
    bics
}

/// Merges overlapping biclusters whose union stays within `t_m`.
///
/// Pairs are scanned in sorted order; two biclusters sharing at least one row
/// and one column are replaced by their union when the union's MSR is at most
/// `t_m`, and the scan restarts. Once no pair merges, duplicates and
/// biclusters strictly contained in another are dropped.
pub fn merge_all(
    bics: &[Bicluster],
    host: &DataMatrix,
    params: &BiclusteringParams,
) -> Vec<Bicluster> {
    let mut set = normalize_set(bics.to_vec());
    'scan: loop {
        for a in 0..set.len() {
            for b in a + 1..set.len() {
                if !set[a].overlaps(&set[b]) {
                    continue;
                }
                let rows = sorted_union(set[a].rows(), set[b].rows());
                let cols = sorted_union(set[a].cols(), set[b].cols());
                let score = msr_unchecked(host, &rows, &cols);
                if score <= params.t_m {
                    let union = Bicluster {
                        rows,
                        cols,
                        msr: score,
                    };
                    set.remove(b);
                    set.remove(a);
                    set.push(union);
                    set = normalize_set(set);
                    continue 'scan;
                }
            }
        }
        break;
    }
    let kept: Vec<bool> = (0..set.len())
        .map(|a| {
            !(0..set.len()).any(|b| b != a && set[a] != set[b] && set[a].is_contained_in(&set[b]))
        })
        .collect();
    set.into_iter()
        .zip(kept)
        .filter_map(|(b, keep)| keep.then_some(b))
        .collect()
}

fn admissible(b: &Bicluster, params: &BiclusteringParams) -> bool {
    b.n_rows() >= params.min_rows && b.n_cols() >= params.min_cols && b.msr() <= params.t_m
}

/// Mines coherent biclusters from `matrix`.
///
/// Every column is clustered on its own (average linkage, cut at `t_d`); each
/// cluster with at least `min_rows` rows seeds a one-column bicluster which is
/// expanded and refined. Survivors are merged, re-expanded and merged again
/// until nothing changes. Output is sorted and deterministic.
pub fn mine_biclusters(
    matrix: &DataMatrix,
    params: &BiclusteringParams,
) -> Result<Vec<Bicluster>, BiclusterError> {
    params.validate()?;
    if matrix.n_rows() < params.min_rows || matrix.n_cols() < params.min_cols {
        return Err(BiclusterError::MatrixTooSmall {
            rows: matrix.n_rows(),
            cols: matrix.n_cols(),
            min_rows: params.min_rows,
            min_cols: params.min_cols,
        });
    }

    let seeded: Vec<Bicluster> = (0..matrix.n_cols())
        .into_par_iter()
        .map(|col| {
            let dendrogram = build_dendrogram(&matrix.column(col));
            cut_dendrogram(&dendrogram, params.t_d)
                .into_iter()
                .filter(|rows| rows.len() >= params.min_rows)
                .map(|rows| {
                    let seed = Bicluster::from_sorted(matrix, rows, vec![col]);
                    refine(&expand(&seed, matrix, params), matrix, params)
                })
                .filter(|b| admissible(b, params))
                .collect::<Vec<_>>()
        })
        .flatten()
        .collect();

    let mut current = normalize_set(seeded);
    loop {
        let merged = merge_all(&current, matrix, params);
        let grown = normalize_set(
            merged
                .iter()
                .map(|b| expand(b, matrix, params))
                .collect(),
        );
        if grown == merged {
            return Ok(merged);
        }
        current = grown;
    }
}
