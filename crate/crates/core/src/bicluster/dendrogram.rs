//! Average-linkage (UPGMA) agglomerative clustering of scalar values.

use serde::{Deserialize, Serialize};

/// One agglomeration step. Cluster ids follow the usual convention: leaves
/// are `0..n`, the cluster created by merge `k` has id `n + k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub distance: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    pub n_leaves: usize,
    pub merges: Vec<Merge>,
}

struct Active {
    id: usize,
    key: usize,
    size: usize,
}

/// Builds the UPGMA dendrogram of `values` under absolute difference.
///
/// At each step the closest pair of clusters is merged; equal distances are
/// resolved by the smallest member index of each cluster, lowest pair first.
pub fn build_dendrogram(values: &[f64]) -> Dendrogram {
    let n = values.len();
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    if n < 2 {
        return Dendrogram {
            n_leaves: n,
            merges,
        };
    }

    // Slots are indexed by leaf; a merged cluster reuses the slot of the
    // member with the smaller key, which is also its own key.
    let mut dist = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            dist[i * n + j] = (values[i] - values[j]).abs();
        }
    }
    let mut slots: Vec<Option<Active>> = (0..n)
        .map(|i| {
            Some(Active {
                id: i,
                key: i,
                size: 1,
            })
        })
        .collect();
    // nearest[p]: closest live slot q > p, ties to the smallest q.
    let nearest_of = |p: usize, slots: &[Option<Active>], dist: &[f64]| -> Option<usize> {
        let mut best: Option<usize> = None;
        for q in p + 1..n {
            if slots[q].is_none() {
                continue;
            }
            match best {
                Some(b) if dist[p * n + q] >= dist[p * n + b] => {}
                _ => best = Some(q),
            }
        }
        best
    };
    let mut nearest: Vec<Option<usize>> = (0..n).map(|p| nearest_of(p, &slots, &dist)).collect();
    let mut last = 0.0f64;

    for step in 0..n - 1 {
        let mut pick: Option<(usize, usize)> = None;
        for p in 0..n {
            if slots[p].is_none() {
                continue;
            }
            if let Some(q) = nearest[p] {
                match pick {
                    Some((bp, bq)) if dist[p * n + q] >= dist[bp * n + bq] => {}
                    _ => pick = Some((p, q)),
                }
            }
        }
        let (a, b) = pick.expect("at least two live clusters");
        let ca = slots[a].take().expect("live");
        let cb = slots[b].take().expect("live");
        debug_assert!(ca.key < cb.key);
        let d = dist[a * n + b].max(last);
        last = d;
        let size = ca.size + cb.size;
        merges.push(Merge {
            left: ca.id.min(cb.id),
            right: ca.id.max(cb.id),
            distance: d,
            size,
        });

        let (wa, wb) = (ca.size as f64, cb.size as f64);
        for k in 0..n {
            if k == a || slots[k].is_none() {
                continue;
            }
            let updated = (wa * dist[k * n + a] + wb * dist[k * n + b]) / (wa + wb);
            dist[k * n + a] = updated;
            dist[a * n + k] = updated;
        }
        slots[a] = Some(Active {
            id: n + step,
            key: ca.key,
            size,
        });
        nearest[b] = None;

        for p in 0..n {
            if slots[p].is_none() {
                continue;
            }
            if p == a {
                nearest[p] = nearest_of(p, &slots, &dist);
                continue;
            }
            match nearest[p] {
                Some(q) if q == a || q == b => nearest[p] = nearest_of(p, &slots, &dist),
                Some(q) if p < a => {
                    let da = dist[p * n + a];
                    let dq = dist[p * n + q];
                    if da < dq || (da == dq && a < q) {
                        nearest[p] = Some(a);
                    }
                }
                None if p < a => nearest[p] = Some(a),
                _ => {}
            }
        }
    }

    Dendrogram {
        n_leaves: n,
        merges,
    }
}

/// Flat clusters from applying every merge whose distance is at most `t_d`.
/// Each cluster lists leaf indices in ascending order; clusters are ordered
/// by their smallest member.
pub fn cut_dendrogram(d: &Dendrogram, t_d: f64) -> Vec<Vec<usize>> {
    let n = d.n_leaves;
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    members.reserve(d.merges.len());
    let mut alive = vec![true; n + d.merges.len()];
    for m in &d.merges {
        if m.distance <= t_d {
            let mut joined = std::mem::take(&mut members[m.left]);
            joined.append(&mut std::mem::take(&mut members[m.right]));
            alive[m.left] = false;
            alive[m.right] = false;
            members.push(joined);
        } else {
            // Everything after this point is at least as far apart.
            break;
        }
    }
    let mut clusters: Vec<Vec<usize>> = members
        .into_iter()
        .enumerate()
        .filter(|(id, c)| alive[*id] && !c.is_empty())
        .map(|(_, mut c)| {
            c.sort_unstable();
            c
        })
        .collect();
    clusters.sort_unstable_by_key(|c| c[0]);
    clusters
}
