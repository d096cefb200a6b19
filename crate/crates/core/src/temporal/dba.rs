use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::dtw::{dtw_with, PointMetric};
use super::{common_dim, mean_of};
use crate::anim::PoseFeature;
use crate::config::{DEFAULT_DBA_MAX_ITER, DEFAULT_DBA_TOL};
use crate::{Error, Result};

/// RNG stream reserved for reference selection.
pub(crate) const DBA_STREAM: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DbaParams {
    pub max_iter: usize,
    /// Stop once the relative decrease of total alignment cost falls below this.
    pub tol: f64,
}

impl Default for DbaParams {
    fn default() -> Self {
        Self { max_iter: DEFAULT_DBA_MAX_ITER, tol: DEFAULT_DBA_TOL }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DbaOutcome {
    pub average: Vec<PoseFeature>,
    /// Index of the randomly chosen initial reference sequence.
    pub reference: usize,
    /// Total alignment cost of the initial reference, then after each update.
    pub costs: Vec<f64>,
}

impl DbaOutcome {
    pub fn iterations(&self) -> usize {
        self.costs.len() - 1
    }
}

/// DTW barycenter averaging.
///
/// Starts from a seeded random reference, then alternates aligning every
/// sequence to the current average and replacing each average frame with the
/// mean of the frames aligned to it. Alignments use squared Euclidean cost,
/// for which the per-frame mean is the exact minimizer, so total cost never
/// increases.
pub fn dba_average(sequences: &[Vec<PoseFeature>], seed: u64, params: DbaParams) -> Result<DbaOutcome> {
    if sequences.is_empty() {
        return Err(Error::EmptySession);
    }
    if params.max_iter == 0 || !(params.tol > 0.0) {
        return Err(Error::validation("dba needs max_iter >= 1 and tol > 0"));
    }
    if let Some(i) = sequences.iter().position(|s| s.is_empty()) {
        return Err(Error::structural(format!("sequence {i} is empty")));
    }
    let dim = common_dim(sequences.iter().flatten())?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(DBA_STREAM);
    let reference = rng.random_range(0..sequences.len());

    let mut average = sequences[reference].clone();
    let (mut cost, mut paths) = align_all(&average, sequences)?;
    let mut costs = vec![cost];
    for _ in 0..params.max_iter {
        if cost == 0.0 {
            break;
        }
        let mut buckets: Vec<Vec<&PoseFeature>> = vec![Vec::new(); average.len()];
        for (seq, path) in sequences.iter().zip(&paths) {
            for &(ai, si) in path {
                buckets[ai].push(&seq[si]);
            }
        }
        let updated: Vec<PoseFeature> = buckets.into_iter().map(|b| mean_of(dim, b)).collect();
        let (new_cost, new_paths) = align_all(&updated, sequences)?;
        costs.push(new_cost);
        let relative_drop = (cost - new_cost) / cost;
        if new_cost <= cost {
            average = updated;
            paths = new_paths;
            cost = new_cost;
        }
        if relative_drop < params.tol {
            break;
        }
    }
    Ok(DbaOutcome { average, reference, costs })
}

type Alignment = Vec<(usize, usize)>;

fn align_all(average: &[PoseFeature], sequences: &[Vec<PoseFeature>]) -> Result<(f64, Vec<Alignment>)> {
    let mut total = 0.0;
    let mut paths = Vec::with_capacity(sequences.len());
    for seq in sequences {
        let r = dtw_with(average, seq, PointMetric::SquaredEuclidean)?;
        total += r.cost;
        paths.push(r.path);
    }
    Ok((total, paths))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(v: &[f64], len: usize) -> Vec<PoseFeature> {
        vec![PoseFeature(v.to_vec()); len]
    }

    #[test]
    fn single_sequence_is_returned() {
        let s: Vec<PoseFeature> = (0..5).map(|i| PoseFeature(vec![i as f64, 1.0])).collect();
        let out = dba_average(&[s.clone()], 9, DbaParams::default()).unwrap();
        assert_eq!(out.average, s);
        assert_eq!(out.iterations(), 0);
    }

    #[test]
    fn identical_sequences() {
        let s: Vec<PoseFeature> = (0..7).map(|i| PoseFeature(vec![(i as f64).sin(), 2.0])).collect();
        let out = dba_average(&vec![s.clone(); 5], 3, DbaParams::default()).unwrap();
        assert_eq!(out.average, s);
    }

    #[test]
    fn two_constants_average_to_midpoint() {
        let a = constant(&[1.0, -2.0, 4.0], 6);
        let b = constant(&[3.0, 2.0, 0.0], 6);
        for seed in 0..4 {
            let out = dba_average(&[a.clone(), b.clone()], seed, DbaParams::default()).unwrap();
            assert_eq!(out.average.len(), 6);
            for f in &out.average {
                for (x, e) in f.as_slice().iter().zip([2.0, 0.0, 2.0]) {
                    assert!((x - e).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn cost_never_increases() {
        let seqs: Vec<Vec<PoseFeature>> = (0..4)
            .map(|k| (0..(8 + k)).map(|i| PoseFeature(vec![((i * (k + 1)) as f64 * 0.7).sin(), k as f64 * 0.1])).collect())
            .collect();
        let out = dba_average(&seqs, 1, DbaParams { max_iter: 30, tol: 1e-12 }).unwrap();
        for w in out.costs.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12), "{:?}", out.costs);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(dba_average(&[], 0, DbaParams::default()).unwrap_err(), Error::EmptySession);
        let s = constant(&[0.0], 2);
        assert!(dba_average(&[s.clone()], 0, DbaParams { max_iter: 0, tol: 1e-6 }).is_err());
        assert!(dba_average(&[s.clone(), constant(&[0.0, 1.0], 2)], 0, DbaParams::default()).is_err());
    }
}
