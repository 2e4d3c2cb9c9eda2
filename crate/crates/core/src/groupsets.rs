//! Semiaffine and midconvex sets in `ℤ_n`, and midconvex traces in `ℤ`.
//!
//! `X` is semiaffine when `{x+y−z, x−y+z}` meets `X` for all `x, y, z ∈ X`,
//! and midconvex when every `z` with `2z = x+y` lies in `X`. The semiaffine
//! sets are exactly `(H+a) ∪ (H+b)` and `(H∖C)+g` with `C` midconvex in the
//! subgroup `H`; [`classify_semiaffine`] finds such a decomposition by search.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

/// A subset of `ℤ_n` as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclicGroupSubset {
    modulus: u32,
    words: Vec<u64>,
}

impl fmt::Debug for CyclicGroupSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} in Z_{}", self.members(), self.modulus)
    }
}

impl CyclicGroupSubset {
    /// # Panics
    /// If `modulus` is zero.
    pub fn empty(modulus: u32) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        CyclicGroupSubset { modulus, words: vec![0; (modulus as usize).div_ceil(64)] }
    }

    pub fn full(modulus: u32) -> Self {
        let mut s = Self::empty(modulus);
        for x in 0..modulus {
            s.insert(x);
        }
        s
    }

    /// Elements are reduced mod `n`.
    pub fn from_elements(modulus: u32, elements: impl IntoIterator<Item = i64>) -> Self {
        let mut s = Self::empty(modulus);
        for x in elements {
            s.insert(x.rem_euclid(i64::from(modulus)) as u32);
        }
        s
    }

    /// The subset whose indicator is the low `n` bits of `mask`.
    pub fn from_mask(modulus: u32, mask: u64) -> Self {
        Self::from_elements(modulus, (0..modulus.min(64)).filter(|i| mask >> i & 1 == 1).map(i64::from))
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn insert(&mut self, x: u32) {
        let x = x % self.modulus;
        self.words[x as usize / 64] |= 1 << (x % 64);
    }

    pub fn contains(&self, x: u32) -> bool {
        let x = x % self.modulus;
        self.words[x as usize / 64] >> (x % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn members(&self) -> Vec<u32> {
        (0..self.modulus).filter(|&x| self.contains(x)).collect()
    }

    pub fn translate(&self, g: u32) -> Self {
        let mut out = Self::empty(self.modulus);
        for x in self.members() {
            out.insert((x + g % self.modulus) % self.modulus);
        }
        out
    }

    fn add(&self, x: u32, y: u32) -> u32 {
        ((u64::from(x) + u64::from(y)) % u64::from(self.modulus)) as u32
    }

    fn sub(&self, x: u32, y: u32) -> u32 {
        self.add(x, self.modulus - y % self.modulus)
    }
}

/// The subgroup `dℤ_n` for a divisor `d` of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subgroup {
    pub modulus: u32,
    pub step: u32,
}

impl Subgroup {
    pub fn size(&self) -> u32 {
        self.modulus / self.step
    }

    pub fn index(&self) -> u32 {
        self.step
    }

    pub fn contains(&self, x: u32) -> bool {
        x % self.modulus % self.step == 0
    }

    pub fn as_subset(&self) -> CyclicGroupSubset {
        CyclicGroupSubset::from_elements(self.modulus, (0..self.size()).map(|k| i64::from(k * self.step)))
    }

    /// `C ⊆ H` re-indexed as a subset of `ℤ_{|H|}` via `k·d ↦ k`.
    fn reindex(&self, c: &CyclicGroupSubset) -> CyclicGroupSubset {
        CyclicGroupSubset::from_elements(
            self.size(),
            c.members().into_iter().filter(|&x| self.contains(x)).map(|x| i64::from(x / self.step)),
        )
    }
}

/// Subgroups of `ℤ_n`, one per divisor, smallest first.
pub fn enumerate_subgroups(n: u32) -> Vec<Subgroup> {
    assert!(n >= 1, "modulus must be positive");
    let mut out: Vec<Subgroup> = (1..=n).filter(|d| n % d == 0).map(|step| Subgroup { modulus: n, step }).collect();
    out.reverse();
    out
}

/// The first `(x, y, z)` in lexicographic order whose doubleton
/// `{x+y−z, x−y+z}` misses the set.
pub fn semiaffine_failure(s: &CyclicGroupSubset) -> Option<(u32, u32, u32)> {
    let m = s.members();
    for &x in &m {
        for &y in &m {
            for &z in &m {
                let u = s.sub(s.add(x, y), z);
                let v = s.add(s.sub(x, y), z);
                if !s.contains(u) && !s.contains(v) {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

pub fn is_semiaffine(s: &CyclicGroupSubset) -> bool {
    semiaffine_failure(s).is_none()
}

/// Solutions of `2z ≡ t (mod n)`, ascending.
pub fn halves(t: u32, n: u32) -> Vec<u32> {
    let t = t % n;
    if n % 2 == 1 {
        // 2⁻¹ = (n+1)/2
        vec![((u64::from(t) * u64::from(n.div_ceil(2))) % u64::from(n)) as u32]
    } else if t % 2 == 0 {
        vec![t / 2, t / 2 + n / 2]
    } else {
        Vec::new()
    }
}

/// The first `(x, y, z)` with `x ≤ y`, `2z = x + y` and `z` outside the set.
pub fn midconvex_failure(s: &CyclicGroupSubset) -> Option<(u32, u32, u32)> {
    let m = s.members();
    for (i, &x) in m.iter().enumerate() {
        for &y in &m[i..] {
            for z in halves(s.add(x, y), s.modulus) {
                if !s.contains(z) {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

pub fn is_midconvex(s: &CyclicGroupSubset) -> bool {
    midconvex_failure(s).is_none()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemiaffineDecomposition {
    /// `(H + a) ∪ (H + b)`.
    CosetPair { subgroup: Subgroup, a: u32, b: u32 },
    /// `(H ∖ C) + g` with `C ⊆ H` midconvex in `H`.
    GroupMinusMidconvex { subgroup: Subgroup, removed: CyclicGroupSubset, shift: u32 },
}

impl SemiaffineDecomposition {
    pub fn subgroup(&self) -> Subgroup {
        match self {
            SemiaffineDecomposition::CosetPair { subgroup, .. }
            | SemiaffineDecomposition::GroupMinusMidconvex { subgroup, .. } => *subgroup,
        }
    }

    /// The set the decomposition describes.
    pub fn reconstruct(&self) -> CyclicGroupSubset {
        match self {
            SemiaffineDecomposition::CosetPair { subgroup, a, b } => {
                let h = subgroup.as_subset();
                let mut out = h.translate(*a);
                for x in h.translate(*b).members() {
                    out.insert(x);
                }
                out
            }
            SemiaffineDecomposition::GroupMinusMidconvex { subgroup, removed, shift } => {
                let kept = subgroup.as_subset().members().into_iter().filter(|&x| !removed.contains(x));
                CyclicGroupSubset::from_elements(subgroup.modulus, kept.map(i64::from)).translate(*shift)
            }
        }
    }

    /// Reconstructs `s`, and in the second form `C ⊆ H` is midconvex in `H`.
    pub fn verify(&self, s: &CyclicGroupSubset) -> bool {
        if self.reconstruct() != *s {
            return false;
        }
        match self {
            SemiaffineDecomposition::CosetPair { .. } => true,
            SemiaffineDecomposition::GroupMinusMidconvex { subgroup, removed, .. } => {
                removed.members().iter().all(|&x| subgroup.contains(x)) && is_midconvex(&subgroup.reindex(removed))
            }
        }
    }
}

/// Search for a decomposition: the coset-pair form first, then `(H∖C)+g`;
/// within a form the smallest `H`, and the least coset representatives.
pub fn classify_semiaffine(s: &CyclicGroupSubset) -> Option<SemiaffineDecomposition> {
    let n = s.modulus();
    let subgroups = enumerate_subgroups(n);
    let members = s.members();

    if let Some(&first) = members.first() {
        for &h in &subgroups {
            let second = members.iter().copied().find(|&x| (x + n - first) % h.step != 0).unwrap_or(first);
            let candidate = SemiaffineDecomposition::CosetPair { subgroup: h, a: first, b: second };
            if candidate.reconstruct() == *s {
                return Some(candidate);
            }
        }
    }

    for &h in &subgroups {
        // S − g ⊆ H forces g into the coset of S; translating C preserves midconvexity
        let shift = members.first().map_or(0, |&x| x % h.step);
        if members.iter().any(|&x| (x + n - shift) % h.step != 0) {
            continue;
        }
        let inside = s.translate(n - shift);
        let removed = CyclicGroupSubset::from_elements(
            n,
            h.as_subset().members().into_iter().filter(|&x| !inside.contains(x)).map(i64::from),
        );
        let candidate = SemiaffineDecomposition::GroupMinusMidconvex { subgroup: h, removed, shift };
        if candidate.verify(s) {
            return Some(candidate);
        }
    }
    None
}

/// A subset of the integer window `[−N, N]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntWindowSubset {
    bound: i64,
    members: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowError {
    OutOfWindow { value: i64, bound: i64 },
}

impl fmt::Display for WindowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowError::OutOfWindow { value, bound } => write!(f, "{value} lies outside the window [-{bound}, {bound}]"),
        }
    }
}

impl IntWindowSubset {
    pub fn new(bound: i64, members: impl IntoIterator<Item = i64>) -> Result<Self, WindowError> {
        let mut members: Vec<i64> = members.into_iter().collect();
        if let Some(&value) = members.iter().find(|x| x.abs() > bound) {
            return Err(WindowError::OutOfWindow { value, bound });
        }
        members.sort_unstable();
        members.dedup();
        Ok(IntWindowSubset { bound, members })
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn members(&self) -> &[i64] {
        &self.members
    }

    pub fn contains(&self, x: i64) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    /// Midpoints of member pairs are members. Midpoints of points in the
    /// window stay in the window, so no constraint is cut off here.
    pub fn is_midconvex(&self) -> bool {
        let m = &self.members;
        m.iter().enumerate().all(|(i, &x)| m[i..].iter().all(|&y| (x + y) % 2 != 0 || self.contains((x + y) / 2)))
    }
}

/// `T = [lo, hi] ∩ (offset + step·ℤ)` with `step` odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Progression {
    pub lo: i64,
    pub hi: i64,
    pub step: i64,
    /// `lo mod step`, in `[0, step)`.
    pub offset: i64,
    /// The next term below `lo` would leave the window, so `lo` may be an
    /// artifact of truncation.
    pub open_below: bool,
    pub open_above: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceShape {
    Empty,
    Progression(Progression),
}

/// Decide whether `T` is an order-convex piece of a coset of `dℤ` with `d` odd.
pub fn analyze_trace_set(t: &IntWindowSubset) -> Option<TraceShape> {
    let m = t.members();
    let (Some(&lo), Some(&hi)) = (m.first(), m.last()) else {
        return Some(TraceShape::Empty);
    };
    let step = m.iter().fold(0i64, |g, &x| g.gcd(&(x - lo)));
    let step = if step == 0 { 1 } else { step };
    if step % 2 == 0 || (hi - lo) / step + 1 != m.len() as i64 {
        return None;
    }
    Some(TraceShape::Progression(Progression {
        lo,
        hi,
        step,
        offset: lo.rem_euclid(step),
        open_below: lo - step < -t.bound(),
        open_above: hi + step > t.bound(),
    }))
}
