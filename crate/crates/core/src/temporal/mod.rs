//! Whole-clip timeline analysis: alignment, averaging and pose clustering.

mod clustering;
mod dba;
mod dtw;
mod kmeans;
mod xmeans;

pub use clustering::{
    clip_features, cluster_poses, median_filter, segments_from_labels, ClusterParams, PoseClustering, Segment,
    PALETTE,
};
pub use dba::{dba_average, DbaOutcome, DbaParams};
pub use dtw::{dtw, dtw_with, DtwResult, PointMetric};
pub use kmeans::{kmeans, kmeans_plus_plus, KMeansResult};
pub use xmeans::{bic, xmeans, XMeansParams};

use crate::anim::PoseFeature;
use crate::{Error, Result};

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Common dimension of all features, or a structural error.
pub(crate) fn common_dim<'a>(features: impl IntoIterator<Item = &'a PoseFeature>) -> Result<usize> {
    let mut dim = None;
    for f in features {
        match dim {
            None => dim = Some(f.dim()),
            Some(d) if d != f.dim() => {
                return Err(Error::structural(format!("feature dimension mismatch: {d} vs {}", f.dim())))
            }
            _ => {}
        }
    }
    dim.ok_or_else(|| Error::structural("no features"))
}

/// Component-wise mean of the given features.
pub(crate) fn mean_of<'a>(dim: usize, features: impl IntoIterator<Item = &'a PoseFeature>) -> PoseFeature {
    let mut acc = vec![0.0; dim];
    let mut n = 0usize;
    for f in features {
        for (a, v) in acc.iter_mut().zip(f.as_slice()) {
            *a += v;
        }
        n += 1;
    }
    if n > 0 {
        let inv = n as f64;
        acc.iter_mut().for_each(|a| *a /= inv);
    }
    PoseFeature(acc)
}
