//! Isometric embeddings of finite sublines into the real line.
//!
//! [`embed_line`] is the constructive route: take a diameter pair `(a, b)` and
//! map every point to its distance from `a`. In a subline that is not an
//! ℓ1-rectangle this is an isometry; the result is verified pair by pair
//! before it is returned, so every [`LineEmbedding`] in circulation is
//! certified. [`brute_force_embed`] is an independent exhaustive search over
//! sign choices used as an oracle.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::metric::{FiniteMetricSpace, RectangleWitness};
use crate::scalar::QuadScalar;

/// Largest input accepted by [`brute_force_embed`].
pub const BRUTE_FORCE_LIMIT: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbedError {
    #[error("brute-force search is limited to {BRUTE_FORCE_LIMIT} points, got {0}")]
    TooLarge(usize),
    #[error("internal inconsistency: subline without rectangle witness failed to embed")]
    Inconsistent,
}

/// Coordinates on the line, one per point, with `|f(x) − f(y)| = xy` checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineEmbedding {
    labels: Vec<String>,
    coords: Vec<QuadScalar>,
}

impl LineEmbedding {
    /// Accept `coords` only if they reproduce every distance of `space`.
    pub fn certify(space: &FiniteMetricSpace, coords: Vec<QuadScalar>) -> Option<Self> {
        if coords.len() != space.len() {
            return None;
        }
        for i in 0..coords.len() {
            for j in i + 1..coords.len() {
                if (&coords[i] - &coords[j]).abs() != *space.dist(i, j) {
                    return None;
                }
            }
        }
        Some(LineEmbedding {
            labels: space.labels().to_vec(),
            coords,
        })
    }

    /// The identity embedding of labeled points of the line. `None` if two
    /// points coincide or the lengths differ.
    pub fn from_points(labels: Vec<String>, coords: Vec<QuadScalar>) -> Option<Self> {
        let space = FiniteMetricSpace::from_points(labels, &coords).ok()?;
        Some(LineEmbedding {
            labels: space.labels().to_vec(),
            coords,
        })
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn coords(&self) -> &[QuadScalar] {
        &self.coords
    }

    pub fn coordinate(&self, label: &str) -> Option<&QuadScalar> {
        self.labels.iter().position(|l| l == label).map(|i| &self.coords[i])
    }

    /// `(label, coordinate)` pairs in ascending coordinate order.
    pub fn sorted_by_coordinate(&self) -> Vec<(&str, &QuadScalar)> {
        let mut out: Vec<_> = self.labels.iter().map(String::as_str).zip(&self.coords).collect();
        out.sort_by(|a, b| a.1.cmp(b.1));
        out
    }

    /// Indices in ascending label order.
    fn label_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| self.labels[a].cmp(&self.labels[b]));
        idx
    }
}

/// The diameter pair `(a, b)` minimizing `(label(a), label(b))` among all
/// pairs at maximal distance.
fn diameter_pair(space: &FiniteMetricSpace) -> (usize, usize) {
    let mut best = (0, 1);
    for i in 0..space.len() {
        for j in 0..space.len() {
            if i == j {
                continue;
            }
            let key = (space.label(i), space.label(j));
            let best_key = (space.label(best.0), space.label(best.1));
            match space.dist(i, j).cmp(space.dist(best.0, best.1)) {
                Ordering::Greater => best = (i, j),
                Ordering::Equal if key < best_key => best = (i, j),
                _ => {}
            }
        }
    }
    best
}

/// Embed via distances from one end of a diameter; `None` if the result does
/// not verify, which happens exactly when the space is not embeddable.
pub fn embed_line(space: &FiniteMetricSpace) -> Option<LineEmbedding> {
    let coords = match space.len() {
        0 => Vec::new(),
        1 => alloc::vec![QuadScalar::zero()],
        2 => alloc::vec![QuadScalar::zero(), space.dist(0, 1).clone()],
        _ => {
            let (a, _) = diameter_pair(space);
            (0..space.len()).map(|x| space.dist(a, x).clone()).collect()
        }
    };
    LineEmbedding::certify(space, coords)
}

/// Exhaustive search: pin the first two points (in label order) at `0` and
/// their distance, then try `±dist(x₀, x)` for each remaining point with
/// pruning. Returns the first certified embedding in depth-first order.
pub fn brute_force_embed(space: &FiniteMetricSpace) -> Result<Option<LineEmbedding>, EmbedError> {
    let n = space.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(EmbedError::TooLarge(n));
    }
    if n == 0 {
        return Ok(LineEmbedding::certify(space, Vec::new()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| space.label(a).cmp(space.label(b)));

    let x0 = order[0];
    let mut coords: Vec<Option<QuadScalar>> = alloc::vec![None; n];
    coords[x0] = Some(QuadScalar::zero());
    if n >= 2 {
        coords[order[1]] = Some(space.dist(x0, order[1]).clone());
    }
    let placed: Vec<usize> = order.iter().copied().take(2).collect();

    fn search(
        space: &FiniteMetricSpace,
        order: &[usize],
        depth: usize,
        placed: &mut Vec<usize>,
        coords: &mut Vec<Option<QuadScalar>>,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let x = order[depth];
        let r = space.dist(order[0], x);
        for candidate in [r.clone(), -r] {
            let fits = placed.iter().all(|&y| {
                let fy = coords[y].as_ref().expect("placed");
                (&candidate - fy).abs() == *space.dist(x, y)
            });
            if fits {
                coords[x] = Some(candidate);
                placed.push(x);
                if search(space, order, depth + 1, placed, coords) {
                    return true;
                }
                placed.pop();
                coords[x] = None;
            }
        }
        false
    }

    let mut placed = placed;
    let start = placed.len();
    if !search(space, &order, start, &mut placed, &mut coords) {
        return Ok(None);
    }
    let coords = coords.into_iter().map(|c| c.expect("all placed")).collect();
    Ok(LineEmbedding::certify(space, coords))
}

/// Outcome of the line-embedding decision; exactly one certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmbedDecision {
    Embeddable(LineEmbedding),
    Rectangle(Box<RectangleWitness>),
    NotSubline([usize; 3]),
}

impl EmbedDecision {
    pub fn is_embeddable(&self) -> bool {
        matches!(self, EmbedDecision::Embeddable(_))
    }

    pub fn embedding(&self) -> Option<&LineEmbedding> {
        match self {
            EmbedDecision::Embeddable(e) => Some(e),
            _ => None,
        }
    }
}

/// Embeddable iff subline and not an ℓ1-rectangle; the constructive embedding
/// is required to agree.
pub fn decide_embeddable(space: &FiniteMetricSpace) -> Result<EmbedDecision, EmbedError> {
    if let Some(triple) = space.subline_failure() {
        return Ok(EmbedDecision::NotSubline(triple));
    }
    if let Some(w) = space.detect_l1_rectangle() {
        return Ok(EmbedDecision::Rectangle(Box::new(w)));
    }
    embed_line(space)
        .map(EmbedDecision::Embeddable)
        .ok_or(EmbedError::Inconsistent)
}

/// Normal form modulo isometries of the line: the minimum coordinate is 0 and
/// of the two reflections the one whose coordinates, read in label order, are
/// lexicographically smaller is kept.
pub fn canonicalize(e: &LineEmbedding) -> LineEmbedding {
    let (Some(min), Some(max)) = (e.coords.iter().min(), e.coords.iter().max()) else {
        return e.clone();
    };
    let forward: Vec<QuadScalar> = e.coords.iter().map(|x| x - min).collect();
    let backward: Vec<QuadScalar> = e.coords.iter().map(|x| max - x).collect();
    let order = e.label_order();
    let fwd_seq = order.iter().map(|&i| &forward[i]);
    let bwd_seq = order.iter().map(|&i| &backward[i]);
    let coords = if bwd_seq.lt(fwd_seq) { backward } else { forward };
    LineEmbedding {
        labels: e.labels.clone(),
        coords,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::DistanceMatrix;
    use crate::scalar::parse_literal;
    use alloc::format;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    fn q(s: &str) -> QuadScalar {
        parse_literal(s).unwrap().value
    }

    fn space_of(points: &[QuadScalar]) -> FiniteMetricSpace {
        let labels = (0..points.len()).map(|i| format!("p{i:02}")).collect();
        FiniteMetricSpace::from_points(labels, points).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<QuadScalar> {
        v.iter().map(|&x| QuadScalar::from_integer(x)).collect()
    }

    fn rectangle() -> FiniteMetricSpace {
        let pts = [(1i64, 2i64), (1, -2), (-1, 2), (-1, -2)];
        let rows = pts
            .iter()
            .map(|a| {
                pts.iter()
                    .map(|b| QuadScalar::from_integer((a.0 - b.0).abs() + (a.1 - b.1).abs()))
                    .collect()
            })
            .collect();
        let labels = (0..4).map(|i| format!("r{i}")).collect();
        FiniteMetricSpace::new(DistanceMatrix::new(labels, rows).unwrap()).unwrap()
    }

    fn equilateral() -> FiniteMetricSpace {
        let one = QuadScalar::one();
        let z = QuadScalar::zero();
        let rows = vec![
            vec![z.clone(), one.clone(), one.clone()],
            vec![one.clone(), z.clone(), one.clone()],
            vec![one.clone(), one, z],
        ];
        let labels = vec!["a".into(), "b".into(), "c".into()];
        FiniteMetricSpace::new(DistanceMatrix::new(labels, rows).unwrap()).unwrap()
    }

    #[test]
    fn embed_line_examples() {
        let e = embed_line(&space_of(&ints(&[0, 1, 3, 6]))).unwrap();
        assert_eq!(e.coords(), ints(&[0, 1, 3, 6]).as_slice());
        assert_eq!(embed_line(&rectangle()), None);
        let single = space_of(&ints(&[42]));
        assert_eq!(embed_line(&single).unwrap().coords(), &[QuadScalar::zero()]);
        assert_eq!(embed_line(&equilateral()), None);
    }

    #[test]
    fn diameter_ties_use_label_order() {
        // {0, 2, 4} relabeled so the diameter is found from "a" at 4.
        let labels = vec!["c".to_string(), "b".to_string(), "a".to_string()];
        let space = FiniteMetricSpace::from_points(labels, &ints(&[0, 2, 4])).unwrap();
        let e = embed_line(&space).unwrap();
        assert_eq!(e.coordinate("a"), Some(&QuadScalar::zero()));
        assert_eq!(e.coordinate("c"), Some(&QuadScalar::from_integer(4)));
    }

    #[test]
    fn brute_force_examples() {
        assert!(brute_force_embed(&rectangle()).unwrap().is_none());
        assert!(brute_force_embed(&equilateral()).unwrap().is_none());
        let e = brute_force_embed(&space_of(&ints(&[0, 5, 2, -3]))).unwrap().unwrap();
        assert_eq!(e.coords(), ints(&[0, 5, 2, -3]).as_slice());
        let big = space_of(&ints(&(0..15).collect::<Vec<_>>()));
        assert_eq!(brute_force_embed(&big), Err(EmbedError::TooLarge(15)));
    }

    #[test]
    fn decide_examples() {
        let pts = vec![q("0"), q("1+1*sqrt(2)"), q("2+2*sqrt(2)")];
        match decide_embeddable(&space_of(&pts)).unwrap() {
            EmbedDecision::Embeddable(e) => assert_eq!(e.coords(), pts.as_slice()),
            other => panic!("unexpected {other:?}"),
        }
        match decide_embeddable(&rectangle()).unwrap() {
            EmbedDecision::Rectangle(w) => assert_eq!((w.p, w.q), (ints(&[1])[0].clone(), ints(&[2])[0].clone())),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            decide_embeddable(&equilateral()).unwrap(),
            EmbedDecision::NotSubline([0, 1, 2])
        );
    }

    #[test]
    fn canonicalize_examples() {
        let labels: Vec<String> = vec!["a".into(), "b".into(), "c".into()];
        let e = LineEmbedding::from_points(labels.clone(), ints(&[5, 6, 8])).unwrap();
        assert_eq!(canonicalize(&e).coords(), ints(&[0, 1, 3]).as_slice());
        let e = LineEmbedding::from_points(labels, ints(&[0, -1, -3])).unwrap();
        assert_eq!(canonicalize(&e).coords(), ints(&[0, 1, 3]).as_slice());
    }

    fn arb_points() -> impl Strategy<Value = Vec<QuadScalar>> {
        prop::collection::btree_set((-12i64..12, -6i64..6), 1..10).prop_map(|s| {
            s.into_iter()
                .map(|(m, n)| q(&format!("{m}+{n}*sqrt(2)")))
                .collect::<alloc::collections::BTreeSet<_>>()
                .into_iter()
                .collect()
        })
    }

    proptest! {
        #[test]
        fn canonicalize_is_idempotent(pts in arb_points()) {
            let labels = (0..pts.len()).map(|i| format!("x{i}")).collect();
            let e = LineEmbedding::from_points(labels, pts).unwrap();
            let c = canonicalize(&e);
            prop_assert_eq!(canonicalize(&c), c);
        }

        #[test]
        fn embedding_round_trip(pts in arb_points()) {
            let space = space_of(&pts);
            let e = embed_line(&space).unwrap();
            let truth = LineEmbedding::from_points(space.labels().to_vec(), pts).unwrap();
            prop_assert_eq!(canonicalize(&e), canonicalize(&truth));
            // collinear ⇒ Triangle Equality everywhere
            let again = FiniteMetricSpace::from_points(e.labels().to_vec(), e.coords()).unwrap();
            prop_assert!(again.is_subline());
        }

        #[test]
        fn relabeling_does_not_change_canonical_form(pts in arb_points(), seed in any::<u64>()) {
            let n = pts.len();
            // a permutation of label names driven by the seed
            let mut names: Vec<String> = (0..n).map(|i| format!("x{i:02}")).collect();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                names.swap(i, (s >> 33) as usize % (i + 1));
            }
            let permuted = FiniteMetricSpace::from_points(names.clone(), &pts).unwrap();
            let got = canonicalize(&embed_line(&permuted).unwrap());
            let truth = canonicalize(&LineEmbedding::from_points(names, pts).unwrap());
            prop_assert_eq!(got, truth);
        }

        #[test]
        fn oracle_agrees_on_small_integer_spaces(
            n in 3usize..6,
            entries in prop::collection::vec(1i64..9, 10),
        ) {
            let mut rows = vec![vec![QuadScalar::zero(); n]; n];
            let mut it = entries.into_iter();
            for (i, j) in (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))) {
                let v = QuadScalar::from_integer(it.next().unwrap());
                rows[j][i] = v.clone();
                rows[i][j] = v;
            }
            let labels = (0..n).map(|i| format!("v{i}")).collect();
            if let Ok(space) = FiniteMetricSpace::new(DistanceMatrix::new(labels, rows).unwrap()) {
                let expected = space.is_subline() && space.detect_l1_rectangle().is_none();
                prop_assert_eq!(embed_line(&space).is_some(), expected);
                prop_assert_eq!(brute_force_embed(&space).unwrap().is_some(), expected);
            }
        }
    }
}
