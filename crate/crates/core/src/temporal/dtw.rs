use serde::{Deserialize, Serialize};

use super::{common_dim, squared_distance};
use crate::anim::PoseFeature;
use crate::{Error, Result};

/// Pointwise cost between two aligned frames.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointMetric {
    #[default]
    Euclidean,
    SquaredEuclidean,
}

impl PointMetric {
    pub fn cost(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            PointMetric::Euclidean => squared_distance(a, b).sqrt(),
            PointMetric::SquaredEuclidean => squared_distance(a, b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DtwResult {
    pub cost: f64,
    /// Aligned `(index in a, index in b)` pairs from `(0, 0)` to the last frames.
    pub path: Vec<(usize, usize)>,
}

/// DTW under Euclidean pointwise distance.
pub fn dtw(a: &[PoseFeature], b: &[PoseFeature]) -> Result<DtwResult> {
    dtw_with(a, b, PointMetric::Euclidean)
}

/// Minimal-cost monotone alignment with steps (1,1), (1,0), (0,1).
///
/// Backtracking breaks ties in that order of preference.
pub fn dtw_with(a: &[PoseFeature], b: &[PoseFeature], metric: PointMetric) -> Result<DtwResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::structural("dtw needs two non-empty sequences"));
    }
    common_dim(a.iter().chain(b))?;
    let (n, m) = (a.len(), b.len());
    let mut acc = vec![0.0f64; n * m];
    let at = |i: usize, j: usize| i * m + j;
    for i in 0..n {
        for j in 0..m {
            let d = metric.cost(a[i].as_slice(), b[j].as_slice());
            let best = match (i, j) {
                (0, 0) => 0.0,
                (0, _) => acc[at(0, j - 1)],
                (_, 0) => acc[at(i - 1, 0)],
                _ => acc[at(i - 1, j - 1)].min(acc[at(i - 1, j)]).min(acc[at(i, j - 1)]),
            };
            acc[at(i, j)] = best + d;
        }
    }

    let mut path = Vec::with_capacity(n + m);
    let (mut i, mut j) = (n - 1, m - 1);
    path.push((i, j));
    while (i, j) != (0, 0) {
        (i, j) = match (i, j) {
            (0, _) => (0, j - 1),
            (_, 0) => (i - 1, 0),
            _ => {
                let diag = acc[at(i - 1, j - 1)];
                let up = acc[at(i - 1, j)];
                let left = acc[at(i, j - 1)];
                if diag <= up && diag <= left {
                    (i - 1, j - 1)
                } else if up <= left {
                    (i - 1, j)
                } else {
                    (i, j - 1)
                }
            }
        };
        path.push((i, j));
    }
    path.reverse();
    Ok(DtwResult { cost: acc[at(n - 1, m - 1)], path })
}
