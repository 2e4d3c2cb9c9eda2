//! Infinite subsets of the line with exact membership.
//!
//! A [`Lattice`] is a finitely generated subgroup of `ℚ(√d)`, stored in
//! coordinates over the ℚ-basis `(1, √d)`: a common denominator `D` and the
//! Hermite normal form of the integer lattice `D·L ⊆ ℤ²`. With `D` minimal the
//! pair is unique, so lattices compare by their canonical data.
//!
//! [`SymbolicSet`] layers positive cones, unions of two cosets and images
//! under additive maps on top. Finite samples are taken as [`Window`]s:
//! members whose coordinates in the canonical basis are bounded by `N`.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::embed::LineEmbedding;
use crate::involution::AdditiveMap;
use crate::scalar::{QuadScalar, Radicand, Rational, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolicError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("a lattice needs at least one generator")]
    EmptyGenerators,
    #[error("{0} is not a member of the set")]
    NotAMember(Box<QuadScalar>),
    #[error("sphere radius must be nonnegative")]
    NegativeRadius,
    #[error("subgroup reconstruction needs at least two points")]
    Degenerate,
    #[error("additive map is singular")]
    SingularMap,
    #[error("additive maps need an irrational field, got sqrt({0})")]
    RationalField(u64),
    #[error("invalid radicand {0}: expected a squarefree integer >= 2")]
    InvalidRadicand(u64),
    #[error("generators must be positive")]
    NonPositiveGenerator,
    #[error("invalid range: need lo < hi and at least one bucket")]
    InvalidRange,
}

type IntVec = [BigInt; 2];

/// A subgroup `⟨g₁, …, g_k⟩ ⊆ ℚ(√d)` of rank at most 2.
#[derive(Debug, Clone)]
pub struct Lattice {
    generators: Vec<QuadScalar>,
    radicand: Radicand,
    denominator: BigInt,
    basis: Vec<IntVec>,
}

/// Lattices are equal when they contain the same numbers.
impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.radicand == other.radicand
            && self.denominator == other.denominator
            && self.basis == other.basis
    }
}

impl Eq for Lattice {}

impl Lattice {
    pub fn new(generators: Vec<QuadScalar>) -> Result<Self, SymbolicError> {
        if generators.is_empty() {
            return Err(SymbolicError::EmptyGenerators);
        }
        let mut radicand = Radicand::ONE;
        let mut denominator = BigInt::one();
        for g in &generators {
            radicand = radicand.join(g.radicand())?;
            denominator = denominator.lcm(g.rat_part().denom()).lcm(g.irr_part().denom());
        }
        let rows = generators
            .iter()
            .map(|g| scaled(g, &denominator).expect("denominator clears every generator"))
            .collect();
        let mut basis = hermite_normal_form(rows);

        // Shrink D until it is the least common denominator of the lattice.
        let g = basis
            .iter()
            .flat_map(|r| r.iter())
            .fold(denominator.clone(), |acc, x| acc.gcd(x));
        if !g.is_one() {
            denominator /= &g;
            for row in &mut basis {
                for x in row.iter_mut() {
                    *x /= &g;
                }
            }
        }
        if basis.iter().all(|r| r[1].is_zero()) {
            radicand = Radicand::ONE;
        }
        Ok(Lattice { generators, radicand, denominator, basis })
    }

    pub fn generators(&self) -> &[QuadScalar] {
        &self.generators
    }

    pub fn radicand(&self) -> Radicand {
        self.radicand
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    /// Hermite normal form rows of `D·L` over `(1, √d)`.
    pub fn hnf_rows(&self) -> &[[BigInt; 2]] {
        &self.basis
    }

    /// The canonical basis as numbers.
    pub fn basis(&self) -> Vec<QuadScalar> {
        let d = Rational::from_integer(self.denominator.clone());
        self.basis
            .iter()
            .map(|[p, q]| {
                QuadScalar::new(
                    Rational::from_integer(p.clone()) / &d,
                    Rational::from_integer(q.clone()) / &d,
                    self.radicand,
                )
            })
            .collect()
    }

    /// Integer coordinates of `x` in the canonical basis, or `None` if `x ∉ L`.
    pub fn coordinates(&self, x: &QuadScalar) -> Result<Option<Vec<BigInt>>, SymbolicError> {
        self.radicand.join(x.radicand())?;
        let Some(mut rem) = scaled(x, &self.denominator) else {
            return Ok(None);
        };
        let mut coords = Vec::with_capacity(self.basis.len());
        for row in &self.basis {
            let col = if row[0].is_zero() { 1 } else { 0 };
            let (k, r) = rem[col].div_rem(&row[col]);
            if !r.is_zero() {
                return Ok(None);
            }
            rem[0] -= &k * &row[0];
            rem[1] -= &k * &row[1];
            coords.push(k);
        }
        Ok((rem[0].is_zero() && rem[1].is_zero()).then_some(coords))
    }

    pub fn contains(&self, x: &QuadScalar) -> Result<bool, SymbolicError> {
        Ok(self.coordinates(x)?.is_some())
    }

    /// The lattice point with the given coordinates.
    pub fn point(&self, coords: &[BigInt]) -> QuadScalar {
        let mut p = BigInt::zero();
        let mut q = BigInt::zero();
        for (k, row) in coords.iter().zip(&self.basis) {
            p += k * &row[0];
            q += k * &row[1];
        }
        let d = &self.denominator;
        QuadScalar::new(
            Rational::new(p, d.clone()),
            Rational::new(q, d.clone()),
            self.radicand,
        )
    }

    /// All points with every coordinate in `[−n, n]`, in coordinate order.
    pub fn box_points(&self, n: u32) -> Vec<QuadScalar> {
        let n = i64::from(n);
        match self.rank() {
            0 => alloc::vec![QuadScalar::zero()],
            1 => (-n..=n).map(|i| self.point(&[BigInt::from(i)])).collect(),
            _ => (-n..=n)
                .flat_map(|i| (-n..=n).map(move |j| (i, j)))
                .map(|(i, j)| self.point(&[BigInt::from(i), BigInt::from(j)]))
                .collect(),
        }
    }
}

/// `D·(p, q)` as integers, if `D` clears both denominators.
fn scaled(x: &QuadScalar, d: &BigInt) -> Option<IntVec> {
    let clear = |r: &Rational| {
        let v = r * Rational::from_integer(d.clone());
        v.is_integer().then(|| v.to_integer())
    };
    Some([clear(x.rat_part())?, clear(x.irr_part())?])
}

/// Row-style Hermite normal form of an integer matrix with two columns:
/// upper triangular, positive pivots, entries above a pivot reduced into
/// `[0, pivot)`, zero rows removed.
pub fn hermite_normal_form(mut rows: Vec<IntVec>) -> Vec<IntVec> {
    let mut out: Vec<IntVec> = Vec::new();
    for col in 0..2 {
        loop {
            rows.retain(|r| !(r[0].is_zero() && r[1].is_zero()));
            let nonzero: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
            if nonzero.len() <= 1 {
                if let Some(&i) = nonzero.first() {
                    let mut pivot = rows.remove(i);
                    if pivot[col].is_negative() {
                        pivot = [-&pivot[0], -&pivot[1]];
                    }
                    out.push(pivot);
                }
                break;
            }
            let p = *nonzero
                .iter()
                .min_by(|&&a, &&b| rows[a][col].abs().cmp(&rows[b][col].abs()))
                .expect("nonempty");
            let pivot = rows[p].clone();
            for &i in &nonzero {
                if i != p {
                    let k = rows[i][col].div_floor(&pivot[col]);
                    rows[i][0] -= &k * &pivot[0];
                    rows[i][1] -= &k * &pivot[1];
                }
            }
        }
    }
    if out.len() == 2 {
        let k = out[0][1].div_floor(&out[1][1]);
        let (lo, hi) = out.split_at_mut(1);
        lo[0][1] -= &k * &hi[0][1];
    }
    out
}

/// An exactly decidable infinite subset of the line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymbolicSet {
    Group(Lattice),
    /// `L ∩ [0, ∞)`.
    Cone(Lattice),
    /// `(H + a) ∪ (H + b)`.
    CosetPair { subgroup: Lattice, a: QuadScalar, b: QuadScalar },
    /// `Φ[S]` for an invertible additive map.
    Image { map: AdditiveMap, set: Box<SymbolicSet> },
}

impl SymbolicSet {
    pub fn image(map: AdditiveMap, set: SymbolicSet) -> Self {
        SymbolicSet::Image { map, set: Box::new(set) }
    }

    pub fn member(&self, x: &QuadScalar) -> Result<bool, SymbolicError> {
        Ok(match self {
            SymbolicSet::Group(l) => l.contains(x)?,
            SymbolicSet::Cone(l) => l.contains(x)? && !x.is_negative(),
            SymbolicSet::CosetPair { subgroup, a, b } => {
                subgroup.contains(&x.checked_sub(a)?)? || subgroup.contains(&x.checked_sub(b)?)?
            }
            SymbolicSet::Image { map, set } => set.member(&map.apply_inverse(x)?)?,
        })
    }

    /// The subgroup whose coordinate box seeds [`SymbolicSet::window`].
    pub fn underlying_lattice(&self) -> Result<Lattice, SymbolicError> {
        match self {
            SymbolicSet::Group(l) | SymbolicSet::Cone(l) => Ok(l.clone()),
            SymbolicSet::CosetPair { subgroup, .. } => Ok(subgroup.clone()),
            SymbolicSet::Image { map, set } => map.image_lattice(&set.underlying_lattice()?),
        }
    }

    /// `{c − r, c + r} ∩ S` in ascending order.
    pub fn sphere(&self, c: &QuadScalar, r: &QuadScalar) -> Result<Vec<QuadScalar>, SymbolicError> {
        if !self.member(c)? {
            return Err(SymbolicError::NotAMember(Box::new(c.clone())));
        }
        if r.is_negative() {
            return Err(SymbolicError::NegativeRadius);
        }
        if r.is_zero() {
            return Ok(alloc::vec![c.clone()]);
        }
        let mut out = Vec::with_capacity(2);
        for x in [c.checked_sub(r)?, c.checked_add(r)?] {
            if self.member(&x)? {
                out.push(x);
            }
        }
        Ok(out)
    }

    pub fn window(&self, n: u32) -> Result<Window, SymbolicError> {
        let lattice = self.underlying_lattice()?;
        let candidates: Vec<QuadScalar> = match self {
            SymbolicSet::CosetPair { a, b, .. } => lattice
                .box_points(n)
                .into_iter()
                .flat_map(|h| [&h + a, &h + b])
                .collect(),
            _ => lattice.box_points(n),
        };
        let mut elements = BTreeSet::new();
        for x in candidates {
            if self.member(&x)? {
                elements.insert(x);
            }
        }
        Ok(Window {
            source: self.clone(),
            coeff_bound: n,
            elements: elements.into_iter().collect(),
        })
    }
}

/// A sorted finite sample of a [`SymbolicSet`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub source: SymbolicSet,
    pub coeff_bound: u32,
    pub elements: Vec<QuadScalar>,
}

impl Window {
    /// Distinct positive values `|x − y|` over pairs of window elements.
    pub fn positive_differences(&self) -> Vec<QuadScalar> {
        let mut set = BTreeSet::new();
        for (i, x) in self.elements.iter().enumerate() {
            for y in &self.elements[i + 1..] {
                set.insert(y - x);
            }
        }
        set.into_iter().collect()
    }
}

pub fn lattice_membership(l: &Lattice, x: &QuadScalar) -> Result<bool, SymbolicError> {
    l.contains(x)
}

pub fn lattice_equal(l1: &Lattice, l2: &Lattice) -> Result<bool, SymbolicError> {
    l1.radicand.join(l2.radicand)?;
    Ok(l1 == l2)
}

/// Outcome of sampling the two algebraic ray conditions on a window:
/// (1) every `x` has `x − r` or `x + r` in the set; (2) at `o`, at most one of
/// `o ± r` is in the set. Each check is exact, the sample is finite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayConditionReport {
    pub scale: u32,
    pub points_checked: usize,
    pub radii_checked: usize,
    pub cond1_failures: Vec<(QuadScalar, QuadScalar)>,
    pub cond2_failures: Vec<QuadScalar>,
}

impl RayConditionReport {
    /// Passed at this scale; not a proof for the infinite set.
    pub fn passed(&self) -> bool {
        self.cond1_failures.is_empty() && self.cond2_failures.is_empty()
    }
}

pub fn check_ray_conditions(
    set: &SymbolicSet,
    o: &QuadScalar,
    n: u32,
) -> Result<RayConditionReport, SymbolicError> {
    if !set.member(o)? {
        return Err(SymbolicError::NotAMember(Box::new(o.clone())));
    }
    let window = set.window(n)?;
    let lattice = set.underlying_lattice()?;
    let mut coords = Vec::with_capacity(window.elements.len());
    for x in &window.elements {
        match small_coordinates(&lattice, x)? {
            Some(c) => coords.push(c),
            None => return check_ray_conditions_direct(set, o, &window),
        }
    }

    // Window points are lattice points, so every x ± r is one too and the
    // membership queries can be keyed by integer coordinates.
    let mut radius_coords = BTreeSet::new();
    for (i, x) in coords.iter().enumerate() {
        for y in &coords[i + 1..] {
            radius_coords.insert([y[0] - x[0], y[1] - x[1]]);
        }
    }
    let mut radii: Vec<(QuadScalar, [i64; 2])> =
        radius_coords.into_iter().map(|c| (point_of(&lattice, c), c)).collect();
    radii.sort_by(|a, b| a.0.cmp(&b.0));

    let mut memo: BTreeMap<[i64; 2], bool> = BTreeMap::new();
    let mut member_at = |c: [i64; 2]| -> Result<bool, SymbolicError> {
        if let Some(&m) = memo.get(&c) {
            return Ok(m);
        }
        let m = set.member(&point_of(&lattice, c))?;
        memo.insert(c, m);
        Ok(m)
    };
    let mut cond1_failures = Vec::new();
    for (x, cx) in window.elements.iter().zip(&coords) {
        for (r, cr) in &radii {
            if !member_at([cx[0] + cr[0], cx[1] + cr[1]])? && !member_at([cx[0] - cr[0], cx[1] - cr[1]])? {
                cond1_failures.push((x.clone(), r.clone()));
            }
        }
    }
    let mut cond2_failures = Vec::new();
    for (r, _) in &radii {
        if set.member(&(o - r))? && set.member(&(o + r))? {
            cond2_failures.push(r.clone());
        }
    }
    Ok(RayConditionReport {
        scale: n,
        points_checked: window.elements.len(),
        radii_checked: radii.len(),
        cond1_failures,
        cond2_failures,
    })
}

fn small_coordinates(l: &Lattice, x: &QuadScalar) -> Result<Option<[i64; 2]>, SymbolicError> {
    let Some(c) = l.coordinates(x)? else {
        return Ok(None);
    };
    let mut out = [0i64; 2];
    for (slot, k) in out.iter_mut().zip(&c) {
        match k.to_i64() {
            Some(v) if v.unsigned_abs() < 1 << 40 => *slot = v,
            _ => return Ok(None),
        }
    }
    Ok(Some(out))
}

fn point_of(l: &Lattice, c: [i64; 2]) -> QuadScalar {
    let c: Vec<BigInt> = c[..l.rank()].iter().map(|&k| BigInt::from(k)).collect();
    l.point(&c)
}

fn check_ray_conditions_direct(
    set: &SymbolicSet,
    o: &QuadScalar,
    window: &Window,
) -> Result<RayConditionReport, SymbolicError> {
    let radii = window.positive_differences();
    let mut cond1_failures = Vec::new();
    for x in &window.elements {
        for r in &radii {
            if !set.member(&(x + r))? && !set.member(&(x - r))? {
                cond1_failures.push((x.clone(), r.clone()));
            }
        }
    }
    let mut cond2_failures = Vec::new();
    for r in &radii {
        if set.member(&(o - r))? && set.member(&(o + r))? {
            cond2_failures.push(r.clone());
        }
    }
    Ok(RayConditionReport {
        scale: window.coeff_bound,
        points_checked: window.elements.len(),
        radii_checked: radii.len(),
        cond1_failures,
        cond2_failures,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureOp {
    Sum,
    Difference,
}

/// `left ∘ right = value` lies inside the sample's coordinate box but is
/// missing from the sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureViolation {
    pub left: QuadScalar,
    pub right: QuadScalar,
    pub op: ClosureOp,
    pub value: QuadScalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    pub lattice: Lattice,
    /// Coordinates after translation and orientation, ascending.
    pub points: Vec<QuadScalar>,
    pub closure_violations: Vec<ClosureViolation>,
}

/// Recover the subgroup sampled by a line embedding.
///
/// The lower-median point is moved to 0, the picture is reflected if the
/// point nearest 0 lies only below it, and the lattice generated by the
/// coordinates is returned together with every sum or difference of two
/// sample points that falls inside the sample's coordinate box (in the
/// lattice's canonical basis) without being a sample point.
pub fn reconstruct_subgroup(e: &LineEmbedding) -> Result<Reconstruction, SymbolicError> {
    if e.len() < 2 {
        return Err(SymbolicError::Degenerate);
    }
    let mut coords: Vec<QuadScalar> = e.coords().to_vec();
    coords.sort();
    let center = coords[(coords.len() - 1) / 2].clone();
    let mut points: Vec<QuadScalar> = coords.iter().map(|x| x - &center).collect();
    let nearest = points
        .iter()
        .filter(|x| !x.is_zero())
        .min_by(|a, b| a.abs().cmp(&b.abs()).then_with(|| b.cmp(a)))
        .expect("at least two distinct points");
    if nearest.is_negative() {
        points = points.iter().rev().map(|x| -x).collect();
    }

    let lattice = Lattice::new(points.clone())?;
    let present: BTreeSet<&QuadScalar> = points.iter().collect();
    let coords_of = |x: &QuadScalar| lattice.coordinates(x).map(|c| c.expect("lattice point"));
    let all: Vec<Vec<BigInt>> = points.iter().map(coords_of).collect::<Result<_, _>>()?;
    let bounds: Vec<(BigInt, BigInt)> = (0..lattice.rank())
        .map(|k| {
            let col = all.iter().map(|c| &c[k]);
            (col.clone().min().unwrap().clone(), col.max().unwrap().clone())
        })
        .collect();
    let in_box = |c: &[BigInt]| c.iter().zip(&bounds).all(|(x, (lo, hi))| lo <= x && x <= hi);

    let mut closure_violations = Vec::new();
    for (i, x) in points.iter().enumerate() {
        for (j, y) in points.iter().enumerate() {
            let mut check = |value: QuadScalar, op| -> Result<(), SymbolicError> {
                if !present.contains(&value) && in_box(&coords_of(&value)?) {
                    closure_violations.push(ClosureViolation { left: x.clone(), right: y.clone(), op, value });
                }
                Ok(())
            };
            if i <= j {
                check(x + y, ClosureOp::Sum)?;
            }
            if i != j {
                check(x - y, ClosureOp::Difference)?;
            }
        }
    }
    Ok(Reconstruction { lattice, points, closure_violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::involution::AdditiveMap;
    use crate::scalar::parse_literal;
    use alloc::format;
    use alloc::string::String;
    use alloc::vec;
    use proptest::prelude::*;

    fn q(s: &str) -> QuadScalar {
        parse_literal(s).unwrap().value
    }

    fn lat(gens: &[&str]) -> Lattice {
        Lattice::new(gens.iter().map(|g| q(g)).collect()).unwrap()
    }

    fn flip() -> AdditiveMap {
        AdditiveMap::from_integers([[-1, 0], [0, 1]], 2).unwrap()
    }

    #[test]
    fn hnf_is_canonical() {
        let b = |v: &[[i64; 2]]| v.iter().map(|r| [BigInt::from(r[0]), BigInt::from(r[1])]).collect::<Vec<_>>();
        assert_eq!(hermite_normal_form(b(&[[4, 6], [6, 9]])), b(&[[2, 3]]));
        assert_eq!(hermite_normal_form(b(&[[2, 0], [0, 2], [1, 1]])), b(&[[1, 1], [0, 2]]));
        assert_eq!(hermite_normal_form(b(&[[0, -3], [0, 6]])), b(&[[0, 3]]));
        assert_eq!(hermite_normal_form(b(&[[3, 5], [0, 4]])), b(&[[3, 1], [0, 4]]));
        assert_eq!(hermite_normal_form(b(&[[0, 0]])), b(&[]));
    }

    #[test]
    fn membership_examples() {
        let l = lat(&["1", "1*sqrt(2)"]);
        assert!(lattice_membership(&l, &q("-3+2*sqrt(2)")).unwrap());
        assert!(!lattice_membership(&l, &q("1/2")).unwrap());
        let l2 = lat(&["2", "2*sqrt(2)"]);
        assert!(!lattice_membership(&l2, &q("1+1*sqrt(2)")).unwrap());
        assert_eq!(
            lattice_membership(&l, &q("1*sqrt(3)")),
            Err(SymbolicError::Scalar(ScalarError::RadicandMismatch { expected: 2, found: 3 }))
        );
        // a rational lattice simply does not contain irrationals
        assert!(!lat(&["1"]).contains(&q("1*sqrt(3)")).unwrap());
    }

    #[test]
    fn equality_examples() {
        let l = lat(&["1", "1*sqrt(2)"]);
        assert!(lattice_equal(&l, &lat(&["1+1*sqrt(2)", "1*sqrt(2)"])).unwrap());
        assert!(!lattice_equal(&lat(&["1"]), &lat(&["2"])).unwrap());
        assert!(!lattice_equal(&l, &lat(&["1", "2*sqrt(2)"])).unwrap());
        assert_eq!(lat(&["2/3", "4/9"]), lat(&["2/9"]));
        assert_eq!(lat(&["1/3"]).denominator(), &BigInt::from(3));
        assert!(Lattice::new(vec![]).is_err());
    }

    #[test]
    fn member_examples() {
        let g = lat(&["1", "1*sqrt(2)"]);
        assert!(!SymbolicSet::Cone(g.clone()).member(&q("-3+2*sqrt(2)")).unwrap());
        let x = SymbolicSet::image(flip(), SymbolicSet::Cone(g));
        assert!(x.member(&q("-3+2*sqrt(2)")).unwrap());
        let pair = SymbolicSet::CosetPair { subgroup: lat(&["2"]), a: q("0"), b: q("1") };
        assert!(pair.member(&q("5")).unwrap());
        let pair = SymbolicSet::CosetPair { subgroup: lat(&["4"]), a: q("0"), b: q("1") };
        assert!(!pair.member(&q("3")).unwrap());
    }

    #[test]
    fn sphere_examples() {
        let g = lat(&["1", "1*sqrt(2)"]);
        let r = q("1+1*sqrt(2)");
        assert_eq!(
            SymbolicSet::Group(g.clone()).sphere(&q("0"), &r).unwrap(),
            vec![q("-1-1*sqrt(2)"), r.clone()]
        );
        assert_eq!(SymbolicSet::Cone(g.clone()).sphere(&q("0"), &r).unwrap(), vec![r.clone()]);
        assert_eq!(SymbolicSet::Cone(g.clone()).sphere(&q("3"), &q("0")).unwrap(), vec![q("3")]);
        assert_eq!(
            SymbolicSet::Cone(g.clone()).sphere(&q("-1"), &r),
            Err(SymbolicError::NotAMember(Box::new(q("-1"))))
        );
        assert_eq!(
            SymbolicSet::Group(g).sphere(&q("0"), &q("-1")),
            Err(SymbolicError::NegativeRadius)
        );
    }

    #[test]
    fn window_examples() {
        let w = SymbolicSet::Cone(lat(&["1"])).window(3).unwrap();
        assert_eq!(w.elements, vec![q("0"), q("1"), q("2"), q("3")]);

        let w = SymbolicSet::Group(lat(&["1", "1*sqrt(2)"])).window(1).unwrap();
        // all nine combinations m + n√2, |m|, |n| ≤ 1, sorted by an f64 oracle
        let mut expected: Vec<(f64, QuadScalar)> = (-1..=1)
            .flat_map(|m| (-1..=1).map(move |n| (m, n)))
            .map(|(m, n)| (m as f64 + n as f64 * 2f64.sqrt(), q(&format!("{m}+{n}*sqrt(2)"))))
            .collect();
        expected.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        assert_eq!(w.elements, expected.into_iter().map(|e| e.1).collect::<Vec<_>>());

        let x = SymbolicSet::image(flip(), SymbolicSet::Cone(lat(&["1", "1*sqrt(2)"])));
        let w = x.window(2).unwrap();
        for s in ["-2", "-1", "0", "1*sqrt(2)", "-1+1*sqrt(2)"] {
            assert!(w.elements.contains(&q(s)), "{s}");
        }
        let brute: Vec<QuadScalar> = {
            let mut v: Vec<_> = (-2..=2)
                .flat_map(|m| (-2..=2).map(move |n| (m, n)))
                .filter(|&(m, n)| -(m as f64) + n as f64 * 2f64.sqrt() >= 0.0)
                .map(|(m, n)| q(&format!("{m}+{n}*sqrt(2)")))
                .collect();
            v.sort();
            v
        };
        assert_eq!(w.elements, brute);
    }

    #[test]
    fn ray_condition_examples() {
        let cone = SymbolicSet::Cone(lat(&["1"]));
        for n in [1, 4, 9] {
            assert!(check_ray_conditions(&cone, &q("0"), n).unwrap().passed());
        }
        let group = SymbolicSet::Group(lat(&["1"]));
        let rep = check_ray_conditions(&group, &q("0"), 3).unwrap();
        assert!(rep.cond1_failures.is_empty());
        assert_eq!(rep.cond2_failures.len(), 6);
        let x = SymbolicSet::image(flip(), SymbolicSet::Cone(lat(&["1", "1*sqrt(2)"])));
        assert!(check_ray_conditions(&x, &q("0"), 6).unwrap().passed());
        assert!(check_ray_conditions(&cone, &q("-1"), 2).is_err());
    }

    #[test]
    fn coordinate_path_matches_direct_path() {
        let sets = [
            SymbolicSet::Cone(lat(&["1", "1*sqrt(2)"])),
            SymbolicSet::Group(lat(&["1/2"])),
            SymbolicSet::Cone(lat(&["2/3", "1/2*sqrt(5)"])),
            SymbolicSet::image(
                AdditiveMap::from_integers([[2, 1], [1, 1]], 2).unwrap(),
                SymbolicSet::Cone(lat(&["1", "1*sqrt(2)"])),
            ),
            SymbolicSet::image(
                AdditiveMap::from_integers([[1, 1], [0, 1]], 3).unwrap(),
                SymbolicSet::Group(lat(&["1", "1*sqrt(3)"])),
            ),
        ];
        for s in &sets {
            let w = s.window(3).unwrap();
            let fast = check_ray_conditions(s, &q("0"), 3).unwrap();
            let slow = check_ray_conditions_direct(s, &q("0"), &w).unwrap();
            assert_eq!(fast, slow, "{s:?}");
        }
    }

    fn embedding_of(values: &[&str]) -> LineEmbedding {
        let labels: Vec<String> = (0..values.len()).map(|i| format!("p{i}")).collect();
        LineEmbedding::from_points(labels, values.iter().map(|v| q(v)).collect()).unwrap()
    }

    #[test]
    fn reconstruction_examples() {
        let r = reconstruct_subgroup(&embedding_of(&["0", "1", "-1", "2", "-2", "3", "-3"])).unwrap();
        assert_eq!(r.lattice, lat(&["1"]));
        assert!(r.closure_violations.is_empty());

        let r = reconstruct_subgroup(&embedding_of(&["0", "1", "3"])).unwrap();
        assert_eq!(r.lattice, lat(&["1"]));
        assert!(!r.closure_violations.is_empty());

        let r = reconstruct_subgroup(&embedding_of(&[
            "0", "1", "-1", "1*sqrt(2)", "-1*sqrt(2)", "1-1*sqrt(2)", "-1+1*sqrt(2)",
        ]))
        .unwrap();
        assert_eq!(r.lattice, lat(&["1", "1*sqrt(2)"]));
        // 1 + √2 has coordinates (1, 1) inside the sample's box but is absent
        assert!(r.closure_violations.iter().any(|v| v.value == q("1+1*sqrt(2)")));

        assert_eq!(
            reconstruct_subgroup(&embedding_of(&["5"])),
            Err(SymbolicError::Degenerate)
        );
    }

    #[test]
    fn reconstruction_orients_toward_nearest_point() {
        let r = reconstruct_subgroup(&embedding_of(&["0", "-1", "5"])).unwrap();
        assert_eq!(r.points, vec![q("-5"), q("0"), q("1")]);
    }

    fn arb_lattice() -> impl Strategy<Value = Lattice> {
        prop::collection::vec((-6i64..6, 1i64..4, -6i64..6, 1i64..4), 1..4).prop_map(|gens| {
            Lattice::new(
                gens.into_iter()
                    .map(|(a, b, c, d)| q(&format!("{a}/{b}+{c}/{d}*sqrt(2)")))
                    .collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn groups_are_symmetric_two_sublines(l in arb_lattice(), i in -3i64..3, j in -3i64..3) {
            let g = SymbolicSet::Group(l.clone());
            for x in l.box_points(2) {
                prop_assert_eq!(g.member(&x).unwrap(), g.member(&-&x).unwrap());
            }
            let pts = l.box_points(3);
            let c = &pts[pts.len() / 2 + i as usize % 3];
            let r = l.point(&[BigInt::from(j.abs() + 1), BigInt::from(j)][..l.rank()]).abs();
            if !r.is_zero() {
                prop_assert_eq!(g.sphere(c, &r).unwrap().len(), 2);
            }
        }

        #[test]
        fn generators_are_members_and_equality_is_double_inclusion(a in arb_lattice(), b in arb_lattice()) {
            for g in a.generators() {
                prop_assert!(a.contains(g).unwrap());
            }
            let a_in_b = a.generators().iter().all(|g| b.contains(g).unwrap());
            let b_in_a = b.generators().iter().all(|g| a.contains(g).unwrap());
            prop_assert_eq!(a == b, a_in_b && b_in_a);
        }

        #[test]
        fn windows_grow_and_verify(l in arb_lattice(), n in 1u32..3) {
            let s = SymbolicSet::Cone(l);
            let small = s.window(n).unwrap();
            let big = s.window(n + 1).unwrap();
            for x in &small.elements {
                prop_assert!(big.elements.contains(x));
                prop_assert!(s.member(x).unwrap());
            }
            for x in &big.elements {
                prop_assert!(s.sphere(x, &q("1")).unwrap().len() <= 2);
            }
        }

        #[test]
        fn cone_apex_condition_holds(l in arb_lattice(), n in 1u32..3) {
            let s = SymbolicSet::Cone(l);
            let w = s.window(n).unwrap();
            for r in w.positive_differences() {
                prop_assert_eq!(s.sphere(&q("0"), &r).unwrap().len(), 1);
            }
        }
    }
}
