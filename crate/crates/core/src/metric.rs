//! Finite metric spaces given by exact distance matrices.
//!
//! A [`DistanceMatrix`] is raw input; [`FiniteMetricSpace`] is the same data
//! after the metric axioms have been checked, and carries every pointwise
//! predicate. Points are addressed by index in label order of the input;
//! witnesses are reported as indices and resolved through [`FiniteMetricSpace::label`].
//!
//! Predicates that describe infinite spaces (1-sphericity, the Banakh
//! property, rays) are evaluated on the finite sample as necessary
//! conditions. A window cut out of an infinite space legitimately has empty
//! spheres near its edge, so those are reported, not treated as failures.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::scalar::{QuadScalar, Radicand, Rational, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("matrix shape mismatch: {labels} labels but row {row} has {len} entries")]
    RowLength { labels: usize, row: usize, len: usize },
    #[error("matrix shape mismatch: {labels} labels but {rows} rows")]
    RowCount { labels: usize, rows: usize },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("not a metric: {} violation(s)", .0.len())]
    Invalid(Vec<Violation>),
    #[error("unknown point label {0:?}")]
    UnknownLabel(String),
    #[error("sphere radius must be nonnegative")]
    NegativeRadius,
    #[error("a one-point space has no nonzero distances")]
    Singleton,
}

/// One failed metric axiom, by point index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NonzeroDiagonal { i: usize },
    Asymmetric { i: usize, j: usize },
    NonPositive { i: usize, j: usize },
    /// `dist(i, k) > dist(i, j) + dist(j, k)`.
    Triangle { i: usize, j: usize, k: usize },
}

/// Unvalidated labels plus an `n × n` matrix of distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    labels: Vec<String>,
    entries: Vec<QuadScalar>,
    radicand: Radicand,
}

impl DistanceMatrix {
    pub fn new(labels: Vec<String>, rows: Vec<Vec<QuadScalar>>) -> Result<Self, MetricError> {
        let n = labels.len();
        if rows.len() != n {
            return Err(MetricError::RowCount { labels: n, rows: rows.len() });
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(MetricError::DuplicateLabel(l.clone()));
            }
        }
        let mut radicand = Radicand::ONE;
        let mut entries = Vec::with_capacity(n * n);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != n {
                return Err(MetricError::RowLength { labels: n, row, len: r.len() });
            }
            for x in r {
                radicand = radicand.join(x.radicand())?;
                entries.push(x);
            }
        }
        Ok(DistanceMatrix { labels, entries, radicand })
    }

    /// The matrix induced by points of the real line, `dist(i, j) = |x_i − x_j|`.
    pub fn from_points(labels: Vec<String>, points: &[QuadScalar]) -> Result<Self, MetricError> {
        let rows = points
            .iter()
            .map(|x| points.iter().map(|y| x.checked_sub(y).map(|v| v.abs())).collect())
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        Self::new(labels, rows)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> &QuadScalar {
        &self.entries[i * self.len() + j]
    }

    /// Every violated axiom, in index order. Empty iff the matrix is a metric.
    pub fn verify_metric(&self) -> Vec<Violation> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            if !self.get(i, i).is_zero() {
                out.push(Violation::NonzeroDiagonal { i });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.get(i, j) != self.get(j, i) {
                    out.push(Violation::Asymmetric { i, j });
                }
                if !self.get(i, j).is_positive() || !self.get(j, i).is_positive() {
                    out.push(Violation::NonPositive { i, j });
                }
            }
        }
        for i in 0..n {
            for k in i + 1..n {
                for j in 0..n {
                    if j == i || j == k {
                        continue;
                    }
                    if *self.get(i, k) > self.get(i, j) + self.get(j, k) {
                        out.push(Violation::Triangle { i, j, k });
                    }
                }
            }
        }
        out
    }
}

/// A validated finite metric space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    matrix: DistanceMatrix,
}

impl TryFrom<DistanceMatrix> for FiniteMetricSpace {
    type Error = MetricError;

    fn try_from(matrix: DistanceMatrix) -> Result<Self, MetricError> {
        let violations = matrix.verify_metric();
        if violations.is_empty() {
            Ok(FiniteMetricSpace { matrix })
        } else {
            Err(MetricError::Invalid(violations))
        }
    }
}

/// Members of `S(center; radius)`, by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereResult {
    pub center: usize,
    pub radius: QuadScalar,
    pub members: Vec<usize>,
}

/// A relabeling `(a, b, c, d)` with `ab = cd`, `bc = ad`, `ac = ab + bc = bd`,
/// isometric to `{(±p, ±q)}` under the ℓ1 metric with `p ≤ q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectangleWitness {
    pub corners: [usize; 4],
    pub p: QuadScalar,
    pub q: QuadScalar,
}

/// The minimum sphere size over all centers and nonzero realized radii.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sphericity {
    pub value: usize,
    pub center: usize,
    pub radius: QuadScalar,
}

/// An empty sphere `S(center; radius)` at a realized radius.
///
/// `within_reach` is false when the radius exceeds the eccentricity of the
/// center: no point of the sample lies that far away in any direction, which
/// is what the edge of a window of an unbounded space looks like.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deficiency {
    pub center: usize,
    pub radius: QuadScalar,
    pub within_reach: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayReport {
    pub subline: bool,
    pub apexes: Vec<usize>,
    pub deficiencies: Vec<Deficiency>,
}

impl RayReport {
    /// A finite sample of a ray must be a subline with at least one apex.
    pub fn consistent(&self) -> bool {
        self.subline && !self.apexes.is_empty()
    }
}

impl FiniteMetricSpace {
    pub fn new(matrix: DistanceMatrix) -> Result<Self, MetricError> {
        Self::try_from(matrix)
    }

    /// Validated space induced by distinct points of the line.
    pub fn from_points(labels: Vec<String>, points: &[QuadScalar]) -> Result<Self, MetricError> {
        Self::new(DistanceMatrix::from_points(labels, points)?)
    }

    pub fn len(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        self.matrix.labels()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.matrix.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.matrix.labels.iter().position(|l| l == label)
    }

    pub fn radicand(&self) -> Radicand {
        self.matrix.radicand
    }

    pub fn dist(&self, i: usize, j: usize) -> &QuadScalar {
        self.matrix.get(i, j)
    }

    pub fn matrix(&self) -> &DistanceMatrix {
        &self.matrix
    }

    /// The lexicographically first triple `i < j < k` for which all three
    /// Triangle Equalities fail, if any.
    pub fn subline_failure(&self) -> Option<[usize; 3]> {
        let n = self.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if !self.triangle_equality(i, j, k) {
                        return Some([i, j, k]);
                    }
                }
            }
        }
        None
    }

    pub fn is_subline(&self) -> bool {
        self.subline_failure().is_none()
    }

    /// One side of the triangle equals the sum of the other two.
    pub fn triangle_equality(&self, x: usize, y: usize, z: usize) -> bool {
        let (xy, yz, xz) = (self.dist(x, y), self.dist(y, z), self.dist(x, z));
        *yz == xy + xz || *xz == xy + yz || *xy == xz + yz
    }

    pub fn detect_l1_rectangle(&self) -> Option<RectangleWitness> {
        if self.len() != 4 {
            return None;
        }
        for [a, b, c, d] in permutations4() {
            let (ab, bc, cd, ad) = (self.dist(a, b), self.dist(b, c), self.dist(c, d), self.dist(a, d));
            let (ac, bd) = (self.dist(a, c), self.dist(b, d));
            if ab == cd && bc == ad && *ac == ab + bc && ac == bd {
                let half = Rational::new(1.into(), 2.into());
                let (short, long) = if ab <= bc { (ab, bc) } else { (bc, ab) };
                return Some(RectangleWitness {
                    corners: [a, b, c, d],
                    p: short.mul_by_rational(&half),
                    q: long.mul_by_rational(&half),
                });
            }
        }
        None
    }

    pub fn sphere_at(&self, center: usize, radius: &QuadScalar) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.dist(center, x) == radius).collect()
    }

    pub fn sphere(&self, center: &str, radius: &QuadScalar) -> Result<SphereResult, MetricError> {
        let c = self
            .index_of(center)
            .ok_or_else(|| MetricError::UnknownLabel(center.into()))?;
        if radius.is_negative() {
            return Err(MetricError::NegativeRadius);
        }
        Ok(SphereResult {
            center: c,
            radius: radius.clone(),
            members: self.sphere_at(c, radius),
        })
    }

    /// Distinct values of the metric, ascending, always starting with 0.
    pub fn distance_set(&self) -> Vec<QuadScalar> {
        let mut set = BTreeSet::new();
        set.insert(QuadScalar::zero());
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                set.insert(self.dist(i, j).clone());
            }
        }
        set.into_iter().collect()
    }

    /// Histogram of distances from `center` to the other points.
    fn sphere_sizes(&self, center: usize) -> BTreeMap<&QuadScalar, usize> {
        let mut counts = BTreeMap::new();
        for x in 0..self.len() {
            if x != center {
                *counts.entry(self.dist(center, x)).or_insert(0) += 1;
            }
        }
        counts
    }

    pub fn eccentricity(&self, center: usize) -> QuadScalar {
        (0..self.len())
            .map(|x| self.dist(center, x))
            .max()
            .cloned()
            .unwrap_or_else(QuadScalar::zero)
    }

    /// `min |S(c; r)|` over `c ∈ X`, `r ∈ d[X²] ∖ {0}`; the first minimizer in
    /// (center, radius) order is the witness.
    pub fn sphericity(&self) -> Result<Sphericity, MetricError> {
        if self.len() < 2 {
            return Err(MetricError::Singleton);
        }
        let radii = self.distance_set();
        let mut best: Option<Sphericity> = None;
        for c in 0..self.len() {
            let sizes = self.sphere_sizes(c);
            for r in &radii[1..] {
                let size = sizes.get(r).copied().unwrap_or(0);
                if best.as_ref().map_or(true, |b| size < b.value) {
                    best = Some(Sphericity { value: size, center: c, radius: r.clone() });
                }
            }
        }
        Ok(best.expect("at least one nonzero radius"))
    }

    /// The largest sphere at a nonzero radius, `(size, center, radius)`.
    pub fn largest_sphere(&self) -> Option<(usize, usize, QuadScalar)> {
        let mut best: Option<(usize, usize, QuadScalar)> = None;
        for c in 0..self.len() {
            for (r, size) in self.sphere_sizes(c) {
                if best.as_ref().map_or(true, |b| size > b.0) {
                    best = Some((size, c, r.clone()));
                }
            }
        }
        best
    }

    /// First `(c, r)` with `S(c; r)` not a doubleton `{x, y}` with `xy = 2r`,
    /// quantifying over the given centers and radii only. Radius 0 is skipped.
    pub fn banakh_failure_within(
        &self,
        centers: &[usize],
        radii: &[QuadScalar],
    ) -> Option<(usize, QuadScalar)> {
        for &c in centers {
            for r in radii.iter().filter(|r| !r.is_zero()) {
                let members = self.sphere_at(c, r);
                let ok = match members.as_slice() {
                    [x, y] => *self.dist(*x, *y) == r + r,
                    _ => false,
                };
                if !ok {
                    return Some((c, r.clone()));
                }
            }
        }
        None
    }

    pub fn banakh_failure(&self) -> Option<(usize, QuadScalar)> {
        let centers: Vec<usize> = (0..self.len()).collect();
        self.banakh_failure_within(&centers, &self.distance_set())
    }

    pub fn is_banakh_window(&self) -> bool {
        self.banakh_failure().is_none()
    }

    /// Points all of whose spheres hold at most one point, i.e. whose
    /// distances to the other points are pairwise distinct.
    pub fn apex_candidates(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&o| self.sphere_sizes(o).values().all(|&s| s <= 1))
            .collect()
    }

    /// Every empty sphere at a realized nonzero radius.
    pub fn sphericity_deficiencies(&self) -> Vec<Deficiency> {
        let radii = self.distance_set();
        let mut out = Vec::new();
        for c in 0..self.len() {
            let sizes = self.sphere_sizes(c);
            let reach = self.eccentricity(c);
            for r in &radii[1..] {
                if !sizes.contains_key(r) {
                    out.push(Deficiency {
                        center: c,
                        radius: r.clone(),
                        within_reach: r.cmp(&reach) != Ordering::Greater,
                    });
                }
            }
        }
        out
    }

    pub fn is_consistent_with_ray(&self) -> RayReport {
        RayReport {
            subline: self.is_subline(),
            apexes: self.apex_candidates(),
            deficiencies: self.sphericity_deficiencies(),
        }
    }
}

fn permutations4() -> impl Iterator<Item = [usize; 4]> {
    (0..4usize).flat_map(|a| {
        (0..4usize).flat_map(move |b| {
            (0..4usize).flat_map(move |c| {
                (0..4usize).filter_map(move |d| {
                    let p = [a, b, c, d];
                    let distinct = (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j]));
                    distinct.then_some(p)
                })
            })
        })
    })
}
