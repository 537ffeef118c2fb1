//! TF-IDF vectorization and Lloyd's K-Means.

use std::path::Path;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::persist;
use crate::vocab::{top_indices, Vocabulary};

const FORMAT: &str = "toplab-kmeans";

/// Dense document-term matrix with `tf · idf` weights, rows L2-normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct TfidfMatrix {
    pub rows: Vec<Vec<f64>>,
    pub vocab: Vocabulary,
    pub idf: Vec<f64>,
    /// Documents with no tokens; their rows are all zero.
    pub empty_rows: Vec<usize>,
}

/// `tf` = raw count, `idf = ln((1 + M) / (1 + df)) + 1`, then unit-length rows.
pub fn tfidf<S: AsRef<str>>(documents: &[Vec<S>]) -> Result<TfidfMatrix> {
    if documents.is_empty() {
        return Err(Error::InvalidArgument("corpus is empty".into()));
    }
    let vocab = Vocabulary::from_documents(documents);
    let m = documents.len() as f64;
    let mut counts = vec![vec![0.0f64; vocab.len()]; documents.len()];
    let mut df = vec![0usize; vocab.len()];
    for (row, doc) in counts.iter_mut().zip(documents) {
        for w in vocab.encode(doc) {
            if row[w] == 0.0 {
                df[w] += 1;
            }
            row[w] += 1.0;
        }
    }
    let idf: Vec<f64> = df
        .iter()
        .map(|&d| ((1.0 + m) / (1.0 + d as f64)).ln() + 1.0)
        .collect();
    let mut empty_rows = Vec::new();
    for (i, row) in counts.iter_mut().enumerate() {
        for (x, w) in row.iter_mut().zip(&idf) {
            *x *= w;
        }
        let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            empty_rows.push(i);
        } else {
            row.iter_mut().for_each(|x| *x /= norm);
        }
    }
    Ok(TfidfMatrix {
        rows: counts,
        vocab,
        idf,
        empty_rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansParams {
    pub k: usize,
    pub n_init: usize,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for KMeansParams {
    fn default() -> Self {
        KMeansParams {
            k: 3,
            n_init: 1,
            max_iter: 100,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansModel {
    pub k: usize,
    pub n_init: usize,
    pub max_iter: usize,
    pub seed: u64,
    /// Empty when fitted on raw points.
    pub vocab: Vocabulary,
    pub centroids: Vec<Vec<f64>>,
    pub assignments: Vec<usize>,
    /// Σ_i ‖x_i − c_{a(i)}‖² for the final centroids.
    pub inertia: f64,
    pub converged: bool,
    /// Inertia after every centroid update, one list per restart.
    pub inertia_history: Vec<Vec<f64>>,
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = (0, f64::INFINITY);
    for (j, c) in centroids.iter().enumerate() {
        let d = squared_distance(point, c);
        if d < best.1 {
            best = (j, d);
        }
    }
    best.0
}

pub fn inertia(points: &[Vec<f64>], centroids: &[Vec<f64>], assignments: &[usize]) -> f64 {
    points
        .iter()
        .zip(assignments)
        .map(|(p, &a)| squared_distance(p, &centroids[a]))
        .sum()
}

struct Run {
    centroids: Vec<Vec<f64>>,
    assignments: Vec<usize>,
    inertia: f64,
    converged: bool,
    history: Vec<f64>,
}

fn lloyd(points: &[Vec<f64>], mut centroids: Vec<Vec<f64>>, max_iter: usize) -> Run {
    let k = centroids.len();
    let dim = points[0].len();
    let mut assignments: Vec<usize> = Vec::new();
    let mut history = Vec::new();
    let mut converged = false;
    for _ in 0..max_iter {
        let next: Vec<usize> = points.iter().map(|p| nearest(p, &centroids)).collect();
        if next == assignments {
            converged = true;
            break;
        }
        assignments = next;

        let mut sums = vec![vec![0.0; dim]; k];
        let mut sizes = vec![0usize; k];
        for (p, &a) in points.iter().zip(&assignments) {
            sizes[a] += 1;
            for (s, x) in sums[a].iter_mut().zip(p) {
                *s += x;
            }
        }
        let mut reseeded: Vec<usize> = Vec::new();
        for j in 0..k {
            if sizes[j] > 0 {
                let n = sizes[j] as f64;
                centroids[j] = sums[j].iter().map(|s| s / n).collect();
            }
        }
        for j in (0..k).filter(|&j| sizes[j] == 0) {
            // Empty cluster: move it onto the point farthest from its own centroid.
            let far = (0..points.len())
                .filter(|i| !reseeded.contains(i))
                .max_by(|&a, &b| {
                    let da = squared_distance(&points[a], &centroids[assignments[a]]);
                    let db = squared_distance(&points[b], &centroids[assignments[b]]);
                    da.total_cmp(&db).then(b.cmp(&a))
                });
            if let Some(i) = far {
                centroids[j] = points[i].clone();
                reseeded.push(i);
            }
        }
        history.push(inertia(points, &centroids, &assignments));
    }
    let inertia = inertia(points, &centroids, &assignments);
    Run {
        centroids,
        assignments,
        inertia,
        converged,
        history,
    }
}

/// Lloyd's algorithm on arbitrary points with Forgy initialization over the
/// non-zero rows. The best of `n_init` restarts by inertia is kept (first wins ties).
pub fn fit_points(points: &[Vec<f64>], params: &KMeansParams) -> Result<KMeansModel> {
    let KMeansParams {
        k,
        n_init,
        max_iter,
        seed,
    } = *params;
    if k < 1 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if n_init < 1 || max_iter < 1 {
        return Err(Error::InvalidArgument(
            "n_init and max_iter must be at least 1".into(),
        ));
    }
    let usable: Vec<usize> = (0..points.len())
        .filter(|&i| points[i].iter().any(|&x| x != 0.0))
        .collect();
    if k > usable.len() {
        return Err(Error::InvalidArgument(format!(
            "k = {k} exceeds the {} non-zero rows",
            usable.len()
        )));
    }
    if points.iter().any(|p| p.len() != points[0].len()) {
        return Err(Error::InvalidArgument(
            "points have different dimensions".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<Run> = None;
    let mut histories = Vec::with_capacity(n_init);
    for _ in 0..n_init {
        let init = sample(&mut rng, usable.len(), k)
            .into_iter()
            .map(|i| points[usable[i]].clone())
            .collect();
        let run = lloyd(points, init, max_iter);
        histories.push(run.history.clone());
        if best.as_ref().is_none_or(|b| run.inertia < b.inertia) {
            best = Some(run);
        }
    }
    let best = best.expect("n_init >= 1");
    Ok(KMeansModel {
        k,
        n_init,
        max_iter,
        seed,
        vocab: Vocabulary::default(),
        centroids: best.centroids,
        assignments: best.assignments,
        inertia: best.inertia,
        converged: best.converged,
        inertia_history: histories,
    })
}

pub fn fit_kmeans(x: &TfidfMatrix, params: &KMeansParams) -> Result<KMeansModel> {
    let mut model = fit_points(&x.rows, params)?;
    model.vocab = x.vocab.clone();
    Ok(model)
}

impl KMeansModel {
    /// Terms with the largest positive centroid coordinates, descending,
    /// ties to the lower vocabulary index. An all-zero centroid yields nothing.
    pub fn top_terms(&self, cluster: usize, n: usize) -> Result<Vec<(String, f64)>> {
        if cluster >= self.k {
            return Err(Error::InvalidArgument(format!(
                "cluster {cluster} out of range (model has {})",
                self.k
            )));
        }
        let centroid = &self.centroids[cluster];
        let terms: Vec<(String, f64)> = top_indices(centroid, n)
            .into_iter()
            .filter(|&t| centroid[t] > 0.0)
            .map(|t| (self.vocab.word(t).to_string(), centroid[t]))
            .collect();
        if terms.is_empty() {
            log::warn!("cluster {cluster} has an all-zero centroid");
        }
        Ok(terms)
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &a in &self.assignments {
            sizes[a] += 1;
        }
        sizes
    }

    pub fn to_json(&self) -> String {
        persist::to_json(FORMAT, self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        persist::from_json(FORMAT, text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        persist::save(path.as_ref(), FORMAT, self)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        persist::load(path.as_ref(), FORMAT)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pts(raw: &[(f64, f64)]) -> Vec<Vec<f64>> {
        raw.iter().map(|&(x, y)| vec![x, y]).collect()
    }

    #[test]
    fn idf_of_ubiquitous_term_is_one() {
        let docs = vec![vec!["a", "b"], vec!["a"], vec!["a", "c"]];
        let x = tfidf(&docs).unwrap();
        assert_eq!(x.idf[x.vocab.id("a").unwrap()], 1.0);
    }

    #[test]
    fn single_document_row_is_proportional_to_counts() {
        let x = tfidf(&[vec!["a", "a", "b"]]).unwrap();
        let norm = 5f64.sqrt();
        assert!((x.rows[0][0] - 2.0 / norm).abs() < 1e-15);
        assert!((x.rows[0][1] - 1.0 / norm).abs() < 1e-15);
    }

    #[test]
    fn empty_document_gives_flagged_zero_row() {
        let x = tfidf(&[vec!["a"], vec![]]).unwrap();
        assert_eq!(x.empty_rows, [1]);
        assert!(x.rows[1].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_cluster_is_the_mean() {
        let points = pts(&[(0.0, 0.0), (2.0, 0.0), (1.0, 3.0)]);
        let model = fit_points(
            &points,
            &KMeansParams {
                k: 1,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(model.centroids[0], [1.0, 1.0]);
        // Σ‖x − mean‖² = 1 + 1 + 0 + 1 + 1 + 4
        assert!((model.inertia - 8.0).abs() < 1e-12);
    }

    #[test]
    fn two_obvious_groups() {
        let points = pts(&[(0.0, 0.0), (0.0, 1.0), (10.0, 0.0), (10.0, 1.0)]);
        let model = fit_points(
            &points,
            &KMeansParams {
                k: 2,
                n_init: 5,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(model.assignments[0], model.assignments[1]);
        assert_eq!(model.assignments[2], model.assignments[3]);
        assert_ne!(model.assignments[0], model.assignments[2]);
        let mut centroids = model.centroids.clone();
        centroids.sort_by(|a, b| a[0].total_cmp(&b[0]));
        assert_eq!(centroids, [vec![0.0, 0.5], vec![10.0, 0.5]]);
        assert!((model.inertia - 1.0).abs() < 1e-12);
    }

    #[test]
    fn too_many_clusters_is_an_error() {
        let points = pts(&[(1.0, 0.0), (0.0, 0.0)]);
        assert!(matches!(
            fit_points(
                &points,
                &KMeansParams {
                    k: 2,
                    ..Default::default()
                }
            ),
            Err(Error::InvalidArgument(_))
        ));
        assert!(fit_points(
            &points,
            &KMeansParams {
                k: 0,
                ..Default::default()
            }
        )
        .is_err());
    }

    #[test]
    fn top_terms_ordering_and_errors() {
        let docs = vec![
            vec!["lda", "lda", "nmf", "used"],
            vec!["lda", "nmf", "nmf"],
            vec!["news", "headline"],
        ];
        let x = tfidf(&docs).unwrap();
        let model = fit_kmeans(
            &x,
            &KMeansParams {
                k: 2,
                n_init: 4,
                ..Default::default()
            },
        )
        .unwrap();
        for c in 0..2 {
            let terms = model.top_terms(c, 3).unwrap();
            assert!(!terms.is_empty());
            assert!(terms.windows(2).all(|w| w[0].1 >= w[1].1));
        }
        assert_eq!(model.top_terms(0, 1).unwrap().len(), 1);
        assert!(model.top_terms(2, 3).is_err());
    }

    #[test]
    fn zero_centroid_has_no_terms() {
        let model = KMeansModel {
            k: 1,
            n_init: 1,
            max_iter: 1,
            seed: 0,
            vocab: Vocabulary::from(vec!["a".to_string()]),
            centroids: vec![vec![0.0]],
            assignments: vec![],
            inertia: 0.0,
            converged: true,
            inertia_history: vec![],
        };
        assert!(model.top_terms(0, 3).unwrap().is_empty());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let points = pts(&[(0.1, 0.2), (0.3, 0.7), (5.0, 1.0), (4.5, 0.9)]);
        let model = fit_points(
            &points,
            &KMeansParams {
                k: 2,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(KMeansModel::from_json(&model.to_json()).unwrap(), model);
    }

    proptest! {
        #[test]
        fn lloyd_invariants(
            raw in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 4..12),
            k in 1usize..4,
            seed in 0u64..1000,
        ) {
            let points = pts(&raw);
            let params = KMeansParams { k, n_init: 3, max_iter: 100, seed };
            let model = fit_points(&points, &params).unwrap();
            for history in &model.inertia_history {
                for w in history.windows(2) {
                    prop_assert!(w[1] <= w[0] + 1e-12);
                }
            }
            prop_assert!(model.assignments.iter().all(|&a| a < k));
            let recomputed = inertia(&points, &model.centroids, &model.assignments);
            prop_assert!((model.inertia - recomputed).abs() < 1e-9);
            for (j, c) in model.centroids.iter().enumerate() {
                let members: Vec<_> = points.iter().zip(&model.assignments)
                    .filter(|(_, &a)| a == j).map(|(p, _)| p).collect();
                if members.is_empty() { continue; }
                for d in 0..2 {
                    let mean = members.iter().map(|p| p[d]).sum::<f64>() / members.len() as f64;
                    prop_assert!((c[d] - mean).abs() < 1e-9);
                }
            }
            if model.converged {
                for (p, &a) in points.iter().zip(&model.assignments) {
                    let own = squared_distance(p, &model.centroids[a]);
                    prop_assert!(model.centroids.iter().all(|c| own <= squared_distance(p, c) + 1e-12));
                }
            }
            prop_assert_eq!(fit_points(&points, &params).unwrap(), model);
        }
    }
}
