//! Exact nearest-neighbor search.
//!
//! [`KnnIndex`] is a bucketed kd-tree. Every query has a brute-force twin
//! and both return identical answers: neighbors are ordered by
//! `(distance, index)` and distances are computed by the same function.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum Metric {
    /// Max-norm; the metric of the KSG family.
    #[default]
    Chebyshev,
    Euclidean,
}

impl Metric {
    #[inline]
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Metric::Chebyshev => a
                .iter()
                .zip(b)
                .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs())),
            Metric::Euclidean => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
        }
    }

    /// Log-volume of the unit-radius ball in `d` dimensions.
    pub fn log_unit_ball_volume(&self, d: usize) -> f64 {
        let d = d as f64;
        match self {
            Metric::Chebyshev => d * std::f64::consts::LN_2,
            Metric::Euclidean => {
                0.5 * d * std::f64::consts::PI.ln()
                    - statrs::function::gamma::ln_gamma(0.5 * d + 1.0)
            }
        }
    }
}

const LEAF_SIZE: usize = 12;

#[derive(Debug, Clone)]
enum Node {
    Leaf {
        lo: usize,
        hi: usize,
    },
    Split {
        dim: usize,
        value: f64,
        left: usize,
        right: usize,
    },
}

/// Exact k-NN and fixed-radius index over a point set.
#[derive(Debug, Clone)]
pub struct KnnIndex {
    points: Vec<f64>,
    dim: usize,
    metric: Metric,
    perm: Vec<usize>,
    nodes: Vec<Node>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    dist: f64,
    idx: usize,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist
            .total_cmp(&other.dist)
            .then(self.idx.cmp(&other.idx))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl KnnIndex {
    /// Builds an index over row-major `points` of dimension `dim`.
    pub fn new(points: Vec<f64>, dim: usize, metric: Metric) -> Self {
        assert!(dim > 0 && points.len().is_multiple_of(dim));
        let n = points.len() / dim;
        let mut index = Self {
            points,
            dim,
            metric,
            perm: (0..n).collect(),
            nodes: Vec::new(),
        };
        if n > 0 {
            index.build(0, n);
        }
        index
    }

    /// Builds an index over selected columns of a column-major sample.
    pub fn from_columns(columns: &[&[f64]], metric: Metric) -> Self {
        let dim = columns.len();
        let n = columns.first().map_or(0, |c| c.len());
        let mut points = Vec::with_capacity(n * dim);
        for i in 0..n {
            points.extend(columns.iter().map(|c| c[i]));
        }
        Self::new(points, dim, metric)
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    fn build(&mut self, lo: usize, hi: usize) -> usize {
        let id = self.nodes.len();
        if hi - lo <= LEAF_SIZE {
            self.nodes.push(Node::Leaf { lo, hi });
            return id;
        }
        let dim = (0..self.dim)
            .map(|d| {
                let (mn, mx) = self.perm[lo..hi].iter().fold(
                    (f64::INFINITY, f64::NEG_INFINITY),
                    |(mn, mx), &p| {
                        let v = self.points[p * self.dim + d];
                        (mn.min(v), mx.max(v))
                    },
                );
                (d, mx - mn)
            })
            .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
            .map(|(d, _)| d)
            .unwrap_or(0);
        let mid = lo + (hi - lo) / 2;
        {
            let points = &self.points;
            let stride = self.dim;
            self.perm[lo..hi].select_nth_unstable_by(mid - lo, |&a, &b| {
                points[a * stride + dim].total_cmp(&points[b * stride + dim])
            });
        }
        let value = self.points[self.perm[mid] * self.dim + dim];
        self.nodes.push(Node::Leaf { lo, hi });
        let left = self.build(lo, mid);
        let right = self.build(mid, hi);
        self.nodes[id] = Node::Split {
            dim,
            value,
            left,
            right,
        };
        id
    }

    /// The `k` nearest points to `query`, sorted by `(distance, index)`,
    /// skipping `exclude` if given.
    pub fn knn(&self, query: &[f64], k: usize, exclude: Option<usize>) -> Vec<(f64, usize)> {
        if k == 0 || self.is_empty() {
            return Vec::new();
        }
        let mut heap: BinaryHeap<Candidate> = BinaryHeap::with_capacity(k + 1);
        self.knn_rec(0, query, k, exclude, &mut heap);
        let mut out: Vec<Candidate> = heap.into_vec();
        out.sort();
        out.into_iter().map(|c| (c.dist, c.idx)).collect()
    }

    fn knn_rec(
        &self,
        node: usize,
        q: &[f64],
        k: usize,
        exclude: Option<usize>,
        heap: &mut BinaryHeap<Candidate>,
    ) {
        match self.nodes[node] {
            Node::Leaf { lo, hi } => {
                for &p in &self.perm[lo..hi] {
                    if Some(p) == exclude {
                        continue;
                    }
                    let c = Candidate {
                        dist: self.metric.distance(q, self.point(p)),
                        idx: p,
                    };
                    if heap.len() < k {
                        heap.push(c);
                    } else if c < *heap.peek().expect("heap is full") {
                        heap.pop();
                        heap.push(c);
                    }
                }
            }
            Node::Split {
                dim,
                value,
                left,
                right,
            } => {
                let diff = q[dim] - value;
                let (first, second) = if diff < 0.0 {
                    (left, right)
                } else {
                    (right, left)
                };
                self.knn_rec(first, q, k, exclude, heap);
                if heap.len() < k || diff.abs() <= heap.peek().map_or(f64::INFINITY, |c| c.dist) {
                    self.knn_rec(second, q, k, exclude, heap);
                }
            }
        }
    }

    /// Distance from point `i` to its `k`-th nearest other point.
    pub fn kth_distance(&self, i: usize, k: usize) -> f64 {
        self.knn(self.point(i), k, Some(i))
            .last()
            .map_or(f64::INFINITY, |c| c.0)
    }

    /// Nearest other point to point `i` (lowest index on ties).
    pub fn nearest(&self, i: usize) -> Option<usize> {
        self.knn(self.point(i), 1, Some(i)).first().map(|c| c.1)
    }

    /// Number of points `j != i` with `d(i, j) < r` (strict) or `<= r`.
    pub fn count_within(&self, i: usize, r: f64, strict: bool) -> usize {
        self.count_rec(0, self.point(i), r, strict, Some(i))
    }

    /// Number of indexed points within `r` of an arbitrary query.
    pub fn count_within_point(&self, q: &[f64], r: f64, strict: bool) -> usize {
        self.count_rec(0, q, r, strict, None)
    }

    fn count_rec(
        &self,
        node: usize,
        q: &[f64],
        r: f64,
        strict: bool,
        exclude: Option<usize>,
    ) -> usize {
        let inside = |d: f64| if strict { d < r } else { d <= r };
        match self.nodes[node] {
            Node::Leaf { lo, hi } => self.perm[lo..hi]
                .iter()
                .filter(|&&p| Some(p) != exclude && inside(self.metric.distance(q, self.point(p))))
                .count(),
            Node::Split {
                dim,
                value,
                left,
                right,
            } => {
                let diff = q[dim] - value;
                let (near, far) = if diff < 0.0 {
                    (left, right)
                } else {
                    (right, left)
                };
                let mut c = self.count_rec(near, q, r, strict, exclude);
                if inside(diff.abs()) {
                    c += self.count_rec(far, q, r, strict, exclude);
                }
                c
            }
        }
    }
}

/// Brute-force counterpart of [`KnnIndex`], used as a test oracle and for
/// tiny inputs.
#[derive(Debug, Clone)]
pub struct BruteForce {
    points: Vec<f64>,
    dim: usize,
    metric: Metric,
}

impl BruteForce {
    pub fn new(points: Vec<f64>, dim: usize, metric: Metric) -> Self {
        Self {
            points,
            dim,
            metric,
        }
    }

    pub fn from_columns(columns: &[&[f64]], metric: Metric) -> Self {
        let dim = columns.len();
        let n = columns.first().map_or(0, |c| c.len());
        let mut points = Vec::with_capacity(n * dim);
        for i in 0..n {
            points.extend(columns.iter().map(|c| c[i]));
        }
        Self::new(points, dim, metric)
    }

    fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn len(&self) -> usize {
        self.points.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn knn(&self, query: &[f64], k: usize, exclude: Option<usize>) -> Vec<(f64, usize)> {
        let mut all: Vec<Candidate> = (0..self.len())
            .filter(|&j| Some(j) != exclude)
            .map(|j| Candidate {
                dist: self.metric.distance(query, self.point(j)),
                idx: j,
            })
            .collect();
        all.sort();
        all.truncate(k);
        all.into_iter().map(|c| (c.dist, c.idx)).collect()
    }

    pub fn kth_distance(&self, i: usize, k: usize) -> f64 {
        self.knn(self.point(i), k, Some(i))
            .last()
            .map_or(f64::INFINITY, |c| c.0)
    }

    pub fn nearest(&self, i: usize) -> Option<usize> {
        self.knn(self.point(i), 1, Some(i)).first().map(|c| c.1)
    }

    pub fn count_within(&self, i: usize, r: f64, strict: bool) -> usize {
        let q = self.point(i);
        (0..self.len())
            .filter(|&j| j != i)
            .filter(|&j| {
                let d = self.metric.distance(q, self.point(j));
                if strict {
                    d < r
                } else {
                    d <= r
                }
            })
            .count()
    }
}

/// Which neighbor-search backend an estimator uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NeighborSearch {
    #[default]
    KdTree,
    BruteForce,
}

/// Backend-agnostic view used by the estimators.
pub(crate) enum Searcher {
    Tree(KnnIndex),
    Brute(BruteForce),
}

impl Searcher {
    pub(crate) fn build(columns: &[&[f64]], metric: Metric, search: NeighborSearch) -> Self {
        match search {
            NeighborSearch::KdTree => Searcher::Tree(KnnIndex::from_columns(columns, metric)),
            NeighborSearch::BruteForce => {
                Searcher::Brute(BruteForce::from_columns(columns, metric))
            }
        }
    }

    pub(crate) fn kth_distance(&self, i: usize, k: usize) -> f64 {
        match self {
            Searcher::Tree(t) => t.kth_distance(i, k),
            Searcher::Brute(b) => b.kth_distance(i, k),
        }
    }

    pub(crate) fn count_within(&self, i: usize, r: f64, strict: bool) -> usize {
        match self {
            Searcher::Tree(t) => t.count_within(i, r, strict),
            Searcher::Brute(b) => b.count_within(i, r, strict),
        }
    }
}
