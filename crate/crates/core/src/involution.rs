//! Additive maps of `ℚ(√d)` and the dense ray built from one.
//!
//! An [`AdditiveMap`] is a rational 2×2 matrix acting on the coordinates
//! `(p, q)` of `p + q·√d`. The construction in [`Example1Instance`] takes
//! `G = ⟨a, b⟩` with `a` rational and `b` a rational multiple of `√d`, the
//! involution `Φ` with `Φ(a) = −a`, `Φ(b) = b`, and the set `X = Φ[G ∩ [0, ∞)]`.
//! `X` is a ray with apex 0 that is dense in the line, and unlike the cone it
//! has points on both sides of its apex.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::scalar::{QuadScalar, Radicand, Rational, ScalarError};
use crate::symbolic::{check_ray_conditions, Lattice, RayConditionReport, SymbolicError, SymbolicSet};

type Matrix = [[Rational; 2]; 2];

/// `p + q√d ↦ (m₀₀p + m₀₁q) + (m₁₀p + m₁₁q)√d`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AdditiveMap {
    matrix: Matrix,
    inverse: Matrix,
    radicand: Radicand,
}

impl fmt::Debug for AdditiveMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.matrix;
        write!(
            f,
            "AdditiveMap([[{}, {}], [{}, {}]] over sqrt({}))",
            m[0][0], m[0][1], m[1][0], m[1][1], self.radicand.get()
        )
    }
}

fn det(m: &Matrix) -> Rational {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

impl AdditiveMap {
    pub fn new(matrix: Matrix, radicand: Radicand) -> Result<Self, SymbolicError> {
        if radicand.is_rational() {
            return Err(SymbolicError::RationalField(radicand.get()));
        }
        let d = det(&matrix);
        if d.is_zero() {
            return Err(SymbolicError::SingularMap);
        }
        let inverse = [
            [&matrix[1][1] / &d, -&matrix[0][1] / &d],
            [-&matrix[1][0] / &d, &matrix[0][0] / &d],
        ];
        Ok(AdditiveMap { matrix, inverse, radicand })
    }

    pub fn from_integers(m: [[i64; 2]; 2], d: u64) -> Result<Self, SymbolicError> {
        let r = |x: i64| Rational::from_integer(x.into());
        let radicand = Radicand::new(d).map_err(|_| SymbolicError::InvalidRadicand(d))?;
        Self::new([[r(m[0][0]), r(m[0][1])], [r(m[1][0]), r(m[1][1])]], radicand)
    }

    pub fn identity(radicand: Radicand) -> Result<Self, SymbolicError> {
        let (o, z) = (Rational::one(), Rational::zero());
        Self::new([[o.clone(), z.clone()], [z, o]], radicand)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn radicand(&self) -> Radicand {
        self.radicand
    }

    pub fn determinant(&self) -> Rational {
        det(&self.matrix)
    }

    fn act(&self, m: &Matrix, x: &QuadScalar) -> Result<QuadScalar, ScalarError> {
        self.radicand.join(x.radicand())?;
        let (p, q) = (x.rat_part(), x.irr_part());
        Ok(QuadScalar::new(
            &m[0][0] * p + &m[0][1] * q,
            &m[1][0] * p + &m[1][1] * q,
            self.radicand,
        ))
    }

    pub fn apply(&self, x: &QuadScalar) -> Result<QuadScalar, ScalarError> {
        self.act(&self.matrix, x)
    }

    pub fn apply_inverse(&self, x: &QuadScalar) -> Result<QuadScalar, ScalarError> {
        self.act(&self.inverse, x)
    }

    pub fn inverse(&self) -> AdditiveMap {
        AdditiveMap {
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
            radicand: self.radicand,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AdditiveMap) -> Result<AdditiveMap, SymbolicError> {
        let radicand = self.radicand.join(other.radicand)?;
        Self::new(mul(&self.matrix, &other.matrix), radicand)
    }

    pub fn is_involution(&self) -> bool {
        self.matrix == self.inverse
    }

    /// `Φ[L]`, the lattice generated by the images of a basis of `L`.
    pub fn image_lattice(&self, l: &Lattice) -> Result<Lattice, SymbolicError> {
        let mut gens = l
            .basis()
            .iter()
            .map(|g| self.apply(g))
            .collect::<Result<Vec<_>, _>>()?;
        if gens.is_empty() {
            gens.push(QuadScalar::zero());
        }
        Lattice::new(gens)
    }
}

/// `G = ⟨a, b√d⟩`, `Φ = diag(−1, 1)` and `X = Φ[Cone(G)]` with apex 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example1Instance {
    pub radicand: Radicand,
    pub a: QuadScalar,
    pub b: QuadScalar,
    pub group: Lattice,
    pub map: AdditiveMap,
    pub ray: SymbolicSet,
    pub apex: QuadScalar,
}

pub fn build_example1(d: u64, a: &Rational, b_coeff: &Rational) -> Result<Example1Instance, SymbolicError> {
    let radicand = match Radicand::new(d) {
        Ok(r) if !r.is_rational() => r,
        _ => return Err(SymbolicError::InvalidRadicand(d)),
    };
    if !a.is_positive() || !b_coeff.is_positive() {
        return Err(SymbolicError::NonPositiveGenerator);
    }
    let a = QuadScalar::from_rational(a.clone());
    let b = QuadScalar::sqrt_multiple(b_coeff.clone(), radicand);
    let group = Lattice::new(alloc::vec![a.clone(), b.clone()])?;
    let map = AdditiveMap::from_integers([[-1, 0], [0, 1]], d)?;
    assert!(map.is_involution());
    assert_eq!(map.image_lattice(&group)?, group);
    let ray = SymbolicSet::image(map.clone(), SymbolicSet::Cone(group.clone()));
    Ok(Example1Instance { radicand, a, b, group, map, ray, apex: QuadScalar::zero() })
}

/// Nearest members of `window(S, N)` strictly below and strictly above `o`.
///
/// Candidates are scanned outward from `o` and each pair is confirmed by the
/// metric identity `|x − o| + |o − y| = |x − y|`.
pub fn straddle_witness(
    s: &SymbolicSet,
    o: &QuadScalar,
    n: u32,
) -> Result<Option<(QuadScalar, QuadScalar)>, SymbolicError> {
    if !s.member(o)? {
        return Err(SymbolicError::NotAMember(Box::new(o.clone())));
    }
    let window = s.window(n)?;
    let below = window.elements.iter().rev().filter(|x| *x < o);
    let above: Vec<&QuadScalar> = window.elements.iter().filter(|y| *y > o).collect();
    for x in below {
        for &y in &above {
            if (x - o).abs() + (o - y).abs() == (x - y).abs() {
                return Ok(Some((x.clone(), y.clone())));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bucket {
    pub lo: QuadScalar,
    pub hi: QuadScalar,
    pub count: usize,
}

/// Window members counted in equal-width buckets `[lo + kw, lo + (k+1)w)`;
/// the last bucket also holds `hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    pub lo: QuadScalar,
    pub hi: QuadScalar,
    pub scale: u32,
    pub buckets: Vec<Bucket>,
}

impl DensityReport {
    pub fn empty_buckets(&self) -> usize {
        self.buckets.iter().filter(|b| b.count == 0).count()
    }

    /// Dense at this scale: no bucket is empty.
    pub fn all_nonempty(&self) -> bool {
        self.empty_buckets() == 0
    }
}

pub fn density_report(
    s: &SymbolicSet,
    lo: &QuadScalar,
    hi: &QuadScalar,
    buckets: usize,
    n: u32,
) -> Result<DensityReport, SymbolicError> {
    let width = hi.checked_sub(lo)?;
    if buckets == 0 || !width.is_positive() {
        return Err(SymbolicError::InvalidRange);
    }
    let count = QuadScalar::from_integer(buckets as i64);
    let mut counts = alloc::vec![0usize; buckets];
    for x in s.window(n)?.elements {
        if &x < lo || &x > hi {
            continue;
        }
        // floor((x − lo)·B / (hi − lo)), clamped so hi lands in the last bucket
        let k = ((&x - lo) * &count).checked_div(&width)?.floor();
        let k = usize::try_from(k).map_or(buckets - 1, |k| k.min(buckets - 1));
        counts[k] += 1;
    }
    let step = width.checked_div(&count)?;
    let edge = |k: usize| lo + &step * &QuadScalar::from_integer(k as i64);
    Ok(DensityReport {
        lo: lo.clone(),
        hi: hi.clone(),
        scale: n,
        buckets: counts
            .into_iter()
            .enumerate()
            .map(|(k, count)| Bucket { lo: edge(k), hi: edge(k + 1), count })
            .collect(),
    })
}

/// `member(X, r)` xor `member(X, −r)` for every nonzero `r` in `window(G, N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntisymmetryCheck {
    pub checked: usize,
    pub failures: Vec<QuadScalar>,
}

pub fn check_antisymmetry(inst: &Example1Instance, n: u32) -> Result<AntisymmetryCheck, SymbolicError> {
    let mut checked = 0;
    let mut failures = Vec::new();
    for r in SymbolicSet::Group(inst.group.clone()).window(n)?.elements {
        if r.is_zero() {
            continue;
        }
        checked += 1;
        if inst.ray.member(&r)? == inst.ray.member(&-&r)? {
            failures.push(r);
        }
    }
    Ok(AntisymmetryCheck { checked, failures })
}

/// For every nonzero `c` in the cone's window, the first window radius `r`
/// with `|S(c; r)| = 2`; points without one are reported.
pub fn cone_apex_uniqueness(group: &Lattice, n: u32) -> Result<Vec<QuadScalar>, SymbolicError> {
    let cone = SymbolicSet::Cone(group.clone());
    let window = cone.window(n)?;
    let radii: Vec<&QuadScalar> = window.elements.iter().filter(|r| r.is_positive()).collect();
    let mut lonely = Vec::new();
    for c in window.elements.iter().filter(|c| !c.is_zero()) {
        let mut found = false;
        for r in &radii {
            if cone.sphere(c, r)?.len() == 2 {
                found = true;
                break;
            }
        }
        if !found {
            lonely.push(c.clone());
        }
    }
    Ok(lonely)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertificateParams {
    /// Coefficient bound for windows in the antisymmetry, straddle and density parts.
    pub scale: u32,
    /// Coefficient bound for the ray conditions, which are quadratic in the window.
    pub ray_scale: u32,
    pub buckets: usize,
}

impl Default for CertificateParams {
    fn default() -> Self {
        CertificateParams { scale: 50, ray_scale: 20, buckets: 25 }
    }
}

/// The checks that together distinguish `X` from the cone over `G` at a
/// declared scale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example1Certificate {
    pub params: CertificateParams,
    pub image_fixed: bool,
    pub involution: bool,
    pub antisymmetry: AntisymmetryCheck,
    pub ray: RayConditionReport,
    pub straddle: Option<(QuadScalar, QuadScalar)>,
    pub cone_straddle: Option<(QuadScalar, QuadScalar)>,
    pub cone_apex_failures: Vec<QuadScalar>,
    pub density: DensityReport,
}

impl Example1Certificate {
    /// Named pass/fail parts in report order.
    pub fn parts(&self) -> [(&'static str, bool); 6] {
        [
            ("image-fixed", self.image_fixed),
            ("involution", self.involution),
            ("antisymmetry", self.antisymmetry.failures.is_empty()),
            ("ray-conditions", self.ray.passed()),
            (
                "straddle",
                self.straddle.is_some() && self.cone_straddle.is_none() && self.cone_apex_failures.is_empty(),
            ),
            ("density", self.density.all_nonempty()),
        ]
    }

    pub fn passed(&self) -> bool {
        self.parts().iter().all(|p| p.1)
    }
}

/// Density is measured on `[0, 5]`.
pub fn example1_certificate(
    inst: &Example1Instance,
    params: CertificateParams,
) -> Result<Example1Certificate, SymbolicError> {
    let cone = SymbolicSet::Cone(inst.group.clone());
    Ok(Example1Certificate {
        params,
        image_fixed: inst.map.image_lattice(&inst.group)? == inst.group,
        involution: inst.map.compose(&inst.map)? == AdditiveMap::identity(inst.radicand)?,
        antisymmetry: check_antisymmetry(inst, params.scale)?,
        ray: check_ray_conditions(&inst.ray, &inst.apex, params.ray_scale)?,
        straddle: straddle_witness(&inst.ray, &inst.apex, params.scale)?,
        cone_straddle: straddle_witness(&cone, &inst.apex, params.scale)?,
        cone_apex_failures: cone_apex_uniqueness(&inst.group, params.scale)?,
        density: density_report(
            &inst.ray,
            &QuadScalar::zero(),
            &QuadScalar::from_integer(5),
            params.buckets,
            params.scale,
        )?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_literal;
    use alloc::collections::BTreeSet;
    use alloc::format;
    use alloc::vec;
    use proptest::prelude::*;

    fn q(s: &str) -> QuadScalar {
        parse_literal(s).unwrap().value
    }

    fn lat(gens: &[&str]) -> Lattice {
        Lattice::new(gens.iter().map(|g| q(g)).collect()).unwrap()
    }

    fn canonical() -> Example1Instance {
        build_example1(2, &Rational::one(), &Rational::one()).unwrap()
    }

    fn r2() -> Radicand {
        Radicand::new(2).unwrap()
    }

    #[test]
    fn apply_examples() {
        let flip = AdditiveMap::from_integers([[-1, 0], [0, 1]], 2).unwrap();
        assert_eq!(flip.apply(&q("3+2*sqrt(2)")).unwrap(), q("-3+2*sqrt(2)"));
        let id = AdditiveMap::identity(r2()).unwrap();
        assert_eq!(id.apply(&q("3+2*sqrt(2)")).unwrap(), q("3+2*sqrt(2)"));
        assert_eq!(id.apply(&q("7/3")).unwrap(), q("7/3"));
        assert!(flip.apply(&q("1*sqrt(3)")).is_err());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            AdditiveMap::from_integers([[1, 2], [2, 4]], 2),
            Err(SymbolicError::SingularMap)
        );
        assert_eq!(
            AdditiveMap::from_integers([[1, 0], [0, 1]], 1),
            Err(SymbolicError::RationalField(1))
        );
        assert_eq!(
            build_example1(4, &Rational::one(), &Rational::one()),
            Err(SymbolicError::InvalidRadicand(4))
        );
        assert_eq!(
            build_example1(1, &Rational::one(), &Rational::one()),
            Err(SymbolicError::InvalidRadicand(1))
        );
        assert_eq!(
            build_example1(2, &-Rational::one(), &Rational::one()),
            Err(SymbolicError::NonPositiveGenerator)
        );
    }

    #[test]
    fn image_lattice_examples() {
        let g = lat(&["1", "1*sqrt(2)"]);
        let flip = AdditiveMap::from_integers([[-1, 0], [0, 1]], 2).unwrap();
        assert_eq!(flip.image_lattice(&g).unwrap(), g);
        let stretch = AdditiveMap::from_integers([[2, 0], [0, 1]], 2).unwrap();
        assert_eq!(stretch.image_lattice(&g).unwrap(), lat(&["2", "1*sqrt(2)"]));
    }

    #[test]
    fn swap_image_agrees_with_membership() {
        let swap = AdditiveMap::from_integers([[0, 1], [1, 0]], 2).unwrap();
        for g in [lat(&["1", "1*sqrt(2)"]), lat(&["1/2", "3*sqrt(2)"]), lat(&["2+1*sqrt(2)", "4"])] {
            let img = swap.image_lattice(&g).unwrap();
            // images of lattice points are in the image, preimages of image points in g
            for x in g.box_points(3) {
                assert!(img.contains(&swap.apply(&x).unwrap()).unwrap());
            }
            for y in img.box_points(3) {
                assert!(g.contains(&swap.apply_inverse(&y).unwrap()).unwrap());
            }
        }
        let g = lat(&["1", "1*sqrt(2)"]);
        assert_eq!(swap.image_lattice(&g).unwrap(), g);
    }

    #[test]
    fn example1_members() {
        let inst = canonical();
        assert_eq!(inst.group, lat(&["1", "1*sqrt(2)"]));
        assert!(inst.ray.member(&q("-5")).unwrap());
        assert!(!inst.ray.member(&q("1-1*sqrt(2)")).unwrap());
        assert!(inst.ray.member(&q("-1+1*sqrt(2)")).unwrap());
        assert_eq!(inst.map.apply(&inst.a).unwrap(), -&inst.a);
        assert_eq!(inst.map.apply(&inst.b).unwrap(), inst.b);

        let other = build_example1(3, &Rational::new(1.into(), 2.into()), &Rational::from_integer(2.into())).unwrap();
        assert_eq!(other.group, lat(&["1/2", "2*sqrt(3)"]));
        assert!(other.ray.member(&q("-1/2")).unwrap());
    }

    #[test]
    fn straddle_examples() {
        let inst = canonical();
        let (x, y) = straddle_witness(&inst.ray, &inst.apex, 3).unwrap().unwrap();
        assert!(x.is_negative() && y.is_positive());
        // the pair (−1, √2) is a straddle pair in this window as well
        let w = inst.ray.window(3).unwrap();
        let (a, b) = (q("-1"), q("1*sqrt(2)"));
        assert!(w.elements.contains(&a) && w.elements.contains(&b));
        assert_eq!(a.abs() + b.abs(), (&a - &b).abs());

        let cone = SymbolicSet::Cone(lat(&["1", "1*sqrt(2)"]));
        for n in [1, 3, 6] {
            assert_eq!(straddle_witness(&cone, &q("0"), n).unwrap(), None);
        }
        let z = SymbolicSet::Group(lat(&["1"]));
        for n in [1, 2, 5] {
            assert_eq!(straddle_witness(&z, &q("0"), n).unwrap(), Some((q("-1"), q("1"))));
        }
    }

    #[test]
    fn density_examples() {
        let inst = canonical();
        let rep = density_report(&inst.ray, &q("0"), &q("5"), 25, 50).unwrap();
        assert!(rep.all_nonempty());

        let cone = SymbolicSet::Cone(lat(&["1"]));
        let rep = density_report(&cone, &q("0"), &q("5"), 25, 10).unwrap();
        let nonempty: Vec<usize> = (0..25).filter(|&k| rep.buckets[k].count > 0).collect();
        assert_eq!(nonempty, vec![0, 5, 10, 15, 20, 24]);
        assert_eq!(rep.buckets[24].count, 1);

        let g = SymbolicSet::Group(lat(&["1", "1*sqrt(2)"]));
        assert!(density_report(&g, &q("-2"), &q("2"), 16, 50).unwrap().all_nonempty());

        assert_eq!(density_report(&g, &q("2"), &q("2"), 4, 3), Err(SymbolicError::InvalidRange));
        assert_eq!(density_report(&g, &q("0"), &q("2"), 0, 3), Err(SymbolicError::InvalidRange));
    }

    #[test]
    fn density_buckets_are_exact_at_irrational_edges() {
        let g = SymbolicSet::Group(lat(&["1", "1*sqrt(2)"]));
        let rep = density_report(&g, &q("0"), &q("2*sqrt(2)"), 2, 4).unwrap();
        // √2 sits exactly on the shared edge and belongs to the upper bucket
        assert_eq!(rep.buckets[1].lo, q("1*sqrt(2)"));
        let w = g.window(4).unwrap();
        let lower = w.elements.iter().filter(|x| !x.is_negative() && **x < q("1*sqrt(2)")).count();
        assert_eq!(rep.buckets[0].count, lower);
    }

    #[test]
    fn antisymmetry_and_differences() {
        let inst = canonical();
        assert!(check_antisymmetry(&inst, 10).unwrap().failures.is_empty());

        let n = 6;
        let wx = inst.ray.window(n).unwrap().elements;
        let mut diffs = BTreeSet::new();
        for x in &wx {
            for y in &wx {
                let d = x - y;
                assert!(inst.group.contains(&d).unwrap());
                diffs.insert(d);
            }
        }
        for g in SymbolicSet::Group(inst.group.clone()).window(n / 2).unwrap().elements {
            assert!(diffs.contains(&g), "{g} is not a difference");
        }
    }

    #[test]
    fn cone_has_a_unique_apex_at_scale() {
        let inst = canonical();
        assert!(cone_apex_uniqueness(&inst.group, 8).unwrap().is_empty());
    }

    #[test]
    fn certificate_passes_for_canonical_instance() {
        let params = CertificateParams { scale: 20, ray_scale: 6, buckets: 10 };
        let cert = example1_certificate(&canonical(), params).unwrap();
        assert!(cert.passed(), "{:?}", cert.parts());
    }

    fn arb_scalar() -> impl Strategy<Value = QuadScalar> {
        (-50i64..50, 1i64..8, -50i64..50, 1i64..8)
            .prop_map(|(a, b, c, d)| q(&format!("{a}/{b}+{c}/{d}*sqrt(2)")))
    }

    fn arb_map() -> impl Strategy<Value = AdditiveMap> {
        prop::array::uniform4(-5i64..5)
            .prop_filter_map("singular", |m| AdditiveMap::from_integers([[m[0], m[1]], [m[2], m[3]]], 2).ok())
    }

    proptest! {
        #[test]
        fn maps_are_additive(m in arb_map(), x in arb_scalar(), y in arb_scalar()) {
            prop_assert_eq!(m.apply(&(&x + &y)).unwrap(), m.apply(&x).unwrap() + m.apply(&y).unwrap());
            prop_assert_eq!(m.apply_inverse(&m.apply(&x).unwrap()).unwrap(), x.clone());
            prop_assert_eq!(m.inverse().apply(&m.apply(&x).unwrap()).unwrap(), x);
        }

        #[test]
        fn example1_map_is_an_involution(x in arb_scalar()) {
            let inst = canonical();
            prop_assert_eq!(inst.map.apply(&inst.map.apply(&x).unwrap()).unwrap(), x);
        }

        #[test]
        fn example1_image_is_fixed(d in prop::sample::select(vec![2u64, 3, 5, 6, 7, 10]), a in 1i64..9, b in 1i64..9, c in 1i64..9) {
            let inst = build_example1(d, &Rational::new(a.into(), c.into()), &Rational::new(b.into(), c.into())).unwrap();
            prop_assert_eq!(inst.map.image_lattice(&inst.group).unwrap(), inst.group.clone());
            prop_assert!(inst.map.compose(&inst.map).unwrap().is_involution());
        }

        #[test]
        fn composition_matches_sequential_application(f in arb_map(), g in arb_map(), x in arb_scalar()) {
            let fg = f.compose(&g).unwrap();
            prop_assert_eq!(fg.apply(&x).unwrap(), f.apply(&g.apply(&x).unwrap()).unwrap());
            prop_assert_eq!(fg.determinant(), f.determinant() * g.determinant());
        }
    }
}
