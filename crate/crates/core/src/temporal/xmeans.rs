use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::kmeans::{kmeans, kmeans_plus_plus};
use super::{common_dim, mean_of, squared_distance};
use crate::anim::PoseFeature;
use crate::config::{DEFAULT_KMEANS_MAX_ITER, DEFAULT_K_MAX, DEFAULT_K_MIN};
use crate::{Error, Result};

/// RNG stream reserved for x-means seeding.
pub(crate) const XMEANS_STREAM: u64 = 2;

/// Per-dimension variance floor, in squared length units.
const VARIANCE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct XMeansParams {
    pub k_min: usize,
    pub k_max: usize,
    pub max_iter: usize,
}

impl Default for XMeansParams {
    fn default() -> Self {
        Self { k_min: DEFAULT_K_MIN, k_max: DEFAULT_K_MAX, max_iter: DEFAULT_KMEANS_MAX_ITER }
    }
}

/// Bayesian information criterion of a hard clustering under a mixture of
/// spherical Gaussians sharing one variance (higher is better).
///
/// The variance is the unbiased pooled estimate
/// `sum ||x - mu||^2 / (M (R - K))`; the free-parameter count is
/// `(K - 1) + M K + 1`. Returns `-inf` when `R <= K`.
pub fn bic(points: &[PoseFeature], centroids: &[PoseFeature], labels: &[usize]) -> f64 {
    let r = points.len();
    let k = centroids.len();
    if r <= k || k == 0 {
        return f64::NEG_INFINITY;
    }
    let m = points[0].dim() as f64;
    let rf = r as f64;
    let mut counts = vec![0usize; k];
    let mut ss = 0.0;
    for (p, &l) in points.iter().zip(labels) {
        counts[l] += 1;
        ss += squared_distance(p.as_slice(), centroids[l].as_slice());
    }
    let variance = (ss / (m * (rf - k as f64))).max(VARIANCE_FLOOR);
    let mixing: f64 = counts
        .iter()
        .filter(|&&n| n > 0)
        .map(|&n| {
            let n = n as f64;
            n * (n / rf).ln()
        })
        .sum();
    let log_likelihood =
        mixing - 0.5 * rf * m * (2.0 * std::f64::consts::PI * variance).ln() - ss / (2.0 * variance);
    let params = (k as f64 - 1.0) + m * k as f64 + 1.0;
    log_likelihood - 0.5 * params * rf.ln()
}

/// X-means: k-means with the cluster count chosen by BIC-guided splitting.
///
/// Starts from `k_min` seeded k-means++ centroids. Each round tries a 2-way
/// split of every cluster and keeps the splits whose local BIC beats the
/// unsplit cluster, largest gain first, without exceeding `k_max`. Accepted
/// splits are followed by a full k-means refinement. With `k_min == k_max`
/// this is plain seeded k-means.
pub fn xmeans(points: &[PoseFeature], params: XMeansParams, seed: u64) -> Result<Vec<PoseFeature>> {
    if points.is_empty() {
        return Err(Error::structural("x-means needs at least one point"));
    }
    if params.k_min == 0 || params.k_min > params.k_max {
        return Err(Error::validation(format!(
            "need 1 <= k_min <= k_max, got {}..{}",
            params.k_min, params.k_max
        )));
    }
    common_dim(points)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(XMEANS_STREAM);

    let init = kmeans_plus_plus(points, params.k_min, &mut rng);
    let mut state = kmeans(points, init, params.max_iter)?;

    while state.centroids.len() < params.k_max {
        let dim = points[0].dim();
        let mut proposals: Vec<(f64, usize, Vec<PoseFeature>)> = Vec::new();
        for c in 0..state.centroids.len() {
            let members: Vec<PoseFeature> = points
                .iter()
                .zip(&state.labels)
                .filter(|(_, &l)| l == c)
                .map(|(p, _)| p.clone())
                .collect();
            if members.len() < 3 || members.iter().all(|p| p == &members[0]) {
                continue;
            }
            let parent = mean_of(dim, &members);
            let parent_bic = bic(&members, std::slice::from_ref(&parent), &vec![0; members.len()]);
            let child_init = kmeans_plus_plus(&members, 2, &mut rng);
            let children = kmeans(&members, child_init, params.max_iter)?;
            let child_bic = bic(&members, &children.centroids, &children.labels);
            if child_bic > parent_bic {
                proposals.push((child_bic - parent_bic, c, children.centroids));
            }
        }
        if proposals.is_empty() {
            break;
        }
        proposals.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let budget = params.k_max - state.centroids.len();
        proposals.truncate(budget);
        proposals.sort_by_key(|p| p.1);

        let mut next = Vec::with_capacity(state.centroids.len() + proposals.len());
        let mut split = proposals.into_iter().peekable();
        for (c, centroid) in state.centroids.iter().enumerate() {
            match split.peek() {
                Some((_, sc, _)) if *sc == c => {
                    let (_, _, children) = split.next().expect("peeked");
                    next.extend(children);
                }
                _ => next.push(centroid.clone()),
            }
        }
        state = kmeans(points, next, params.max_iter)?;
    }
    Ok(state.centroids)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_distr::{Distribution, Normal};

    fn blob(rng: &mut ChaCha8Rng, center: &[f64], sigma: f64, n: usize) -> Vec<PoseFeature> {
        let normal = Normal::new(0.0, sigma).unwrap();
        (0..n).map(|_| PoseFeature(center.iter().map(|c| c + normal.sample(rng)).collect())).collect()
    }

    #[test]
    fn two_blobs_give_two_clusters() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let sigma = 0.1;
        let a = [0.0, 0.0, 0.0, 0.0];
        let b = [2.0, 0.0, 1.0, 0.5];
        let mut points = blob(&mut rng, &a, sigma, 60);
        points.extend(blob(&mut rng, &b, sigma, 60));
        let mut centroids = xmeans(&points, XMeansParams::default(), 5).unwrap();
        assert_eq!(centroids.len(), 2);
        centroids.sort_by(|x, y| x.0[0].total_cmp(&y.0[0]));
        for (c, truth) in centroids.iter().zip([a, b]) {
            let d = squared_distance(c.as_slice(), &truth).sqrt();
            assert!(d < 3.0 * sigma, "{d}");
        }
    }

    #[test]
    fn single_blob_is_not_split() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let points = blob(&mut rng, &[1.0, 2.0, 3.0], 0.5, 200);
        assert_eq!(xmeans(&points, XMeansParams::default(), 1).unwrap().len(), 1);
    }

    #[test]
    fn identical_points_give_k_min() {
        let points = vec![PoseFeature(vec![1.0, -1.0]); 40];
        for k_min in [1, 3] {
            let params = XMeansParams { k_min, ..Default::default() };
            let c = xmeans(&points, params, 0).unwrap();
            assert_eq!(c.len(), k_min);
            assert!(c.iter().all(|c| c.as_slice() == [1.0, -1.0]));
        }
    }

    #[test]
    fn fixed_k_is_plain_kmeans() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let points: Vec<PoseFeature> = (0..50).map(|_| PoseFeature(vec![rng.random::<f64>(), rng.random::<f64>()])).collect();
        let params = XMeansParams { k_min: 4, k_max: 4, ..Default::default() };
        let c = xmeans(&points, params, 42).unwrap();
        let mut expect_rng = ChaCha8Rng::seed_from_u64(42);
        expect_rng.set_stream(XMEANS_STREAM);
        let init = kmeans_plus_plus(&points, 4, &mut expect_rng);
        assert_eq!(c, kmeans(&points, init, params.max_iter).unwrap().centroids);
    }

    #[test]
    fn respects_k_max() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut points = Vec::new();
        for i in 0..6 {
            points.extend(blob(&mut rng, &[10.0 * i as f64, 0.0], 0.1, 20));
        }
        let params = XMeansParams { k_min: 1, k_max: 4, ..Default::default() };
        assert!(xmeans(&points, params, 0).unwrap().len() <= 4);
        let all = xmeans(&points, XMeansParams::default(), 0).unwrap();
        assert_eq!(all.len(), 6);
    }

    #[test]
    fn bic_prefers_true_split() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut points = blob(&mut rng, &[0.0, 0.0], 0.1, 30);
        points.extend(blob(&mut rng, &[5.0, 5.0], 0.1, 30));
        let one = mean_of(2, &points);
        let bic1 = bic(&points, &[one], &vec![0; 60]);
        let left = mean_of(2, &points[..30]);
        let right = mean_of(2, &points[30..]);
        let labels: Vec<usize> = (0..60).map(|i| usize::from(i >= 30)).collect();
        let bic2 = bic(&points, &[left, right], &labels);
        assert!(bic2 > bic1);
    }

    #[test]
    fn rejects_bad_bounds() {
        let points = vec![PoseFeature(vec![0.0])];
        assert!(xmeans(&points, XMeansParams { k_min: 0, k_max: 2, max_iter: 10 }, 0).is_err());
        assert!(xmeans(&points, XMeansParams { k_min: 3, k_max: 2, max_iter: 10 }, 0).is_err());
    }
}
