use rand::Rng;

use super::{common_dim, mean_of, squared_distance};
use crate::anim::PoseFeature;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    pub centroids: Vec<PoseFeature>,
    pub labels: Vec<usize>,
    pub iterations: usize,
    /// Sum of squared distances to assigned centroids.
    pub inertia: f64,
}

/// Seeded k-means++ initialization. Falls back to uniform picks when every
/// remaining point coincides with a chosen center.
pub fn kmeans_plus_plus<R: Rng + ?Sized>(points: &[PoseFeature], k: usize, rng: &mut R) -> Vec<PoseFeature> {
    assert!(!points.is_empty() && k >= 1);
    let mut centers = Vec::with_capacity(k);
    centers.push(points[rng.random_range(0..points.len())].clone());
    let mut nearest: Vec<f64> = points.iter().map(|p| squared_distance(p.as_slice(), centers[0].as_slice())).collect();
    while centers.len() < k {
        let total: f64 = nearest.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = points.len() - 1;
            for (i, w) in nearest.iter().enumerate() {
                acc += w;
                if acc > target && *w > 0.0 {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            rng.random_range(0..points.len())
        };
        let c = points[pick].clone();
        for (n, p) in nearest.iter_mut().zip(points) {
            *n = n.min(squared_distance(p.as_slice(), c.as_slice()));
        }
        centers.push(c);
    }
    centers
}

fn assign(points: &[PoseFeature], centroids: &[PoseFeature]) -> (Vec<usize>, Vec<f64>) {
    points
        .iter()
        .map(|p| {
            let mut best = (0, f64::INFINITY);
            for (c, centroid) in centroids.iter().enumerate() {
                let d = squared_distance(p.as_slice(), centroid.as_slice());
                if d < best.1 {
                    best = (c, d);
                }
            }
            best
        })
        .unzip()
}

/// Lloyd iterations from the given centroids until the assignment stops
/// changing or `max_iter` updates have run.
///
/// Assignment ties go to the lowest centroid index. A cluster left empty is
/// re-seeded at the point farthest from its assigned centroid.
pub fn kmeans(points: &[PoseFeature], init: Vec<PoseFeature>, max_iter: usize) -> Result<KMeansResult> {
    if points.is_empty() {
        return Err(Error::structural("k-means needs at least one point"));
    }
    if init.is_empty() {
        return Err(Error::structural("k-means needs at least one centroid"));
    }
    let dim = common_dim(points.iter().chain(&init))?;
    let k = init.len();
    let mut centroids = init;
    let (mut labels, mut dists) = assign(points, &centroids);
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let mut counts = vec![0usize; k];
        for &l in &labels {
            counts[l] += 1;
        }
        let mut reseeded = false;
        let mut taken = vec![false; points.len()];
        for c in 0..k {
            if counts[c] > 0 {
                centroids[c] = mean_of(dim, points.iter().zip(&labels).filter(|(_, &l)| l == c).map(|(p, _)| p));
                continue;
            }
            let far = dists
                .iter()
                .enumerate()
                .filter(|(i, _)| !taken[*i])
                .fold(None::<(usize, f64)>, |best, (i, &d)| match best {
                    Some((_, bd)) if bd >= d => best,
                    _ => Some((i, d)),
                });
            if let Some((i, d)) = far {
                if d > 0.0 {
                    taken[i] = true;
                    centroids[c] = points[i].clone();
                    reseeded = true;
                }
            }
        }
        let (new_labels, new_dists) = assign(points, &centroids);
        let converged = new_labels == labels && !reseeded;
        labels = new_labels;
        dists = new_dists;
        if converged {
            break;
        }
    }
    let inertia = dists.iter().sum();
    Ok(KMeansResult { centroids, labels, iterations, inertia })
}
