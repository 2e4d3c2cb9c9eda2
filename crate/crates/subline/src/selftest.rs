//! The acceptance suite, shared by `subline selftest` and the `acceptance`
//! test target. Every check is exact; random inputs come from fixed seeds.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use subline_core::groupsets::{classify_semiaffine, enumerate_subgroups, is_midconvex, is_semiaffine, CyclicGroupSubset};
use subline_core::involution::{build_example1, example1_certificate, CertificateParams};
use subline_core::scalar::Radicand;
use subline_core::{
    brute_force_embed, canonicalize, check_ray_conditions, decide_embeddable, embed_line, reconstruct_subgroup,
    AdditiveMap, DistanceMatrix, FiniteMetricSpace, Lattice, LineEmbedding, QuadScalar, Rational, SymbolicSet,
};

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] {}: {} ({:.1}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

/// Criterion number, title and check.
pub type Criterion = (u8, &'static str, fn() -> (bool, String));

pub const CRITERIA: [Criterion; 9] = [
    (1, "4-point sublines embed iff they are not rectangles", four_point_sublines),
    (2, "embedding round trip", embedding_round_trip),
    (3, "no sphere in a subline has 3 points", no_three_point_spheres),
    (4, "windows of aZ+ and their one-point deletions", integer_ray_windows),
    (5, "subgroup windows are 2-sublines and reconstruct", subgroup_windows),
    (6, "dense ray certificate", dense_ray_certificate),
    (7, "semiaffine sets decompose, n <= 12", semiaffine_decompositions),
    (8, "midconvex subgroups have odd index, n <= 60", midconvex_subgroups),
    (9, "images of the cone under automorphisms are rays", image_rays),
];

pub fn run_one(id: u8) -> Option<CriterionResult> {
    let &(id, title, check) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let (passed, detail) = check();
    Some(CriterionResult { id, title, passed, detail, elapsed: start.elapsed() })
}

/// Run the selected criteria on separate threads; results come back in id order.
pub fn run(ids: &[u8]) -> Vec<CriterionResult> {
    std::thread::scope(|s| {
        let handles: Vec<_> = ids.iter().map(|&id| s.spawn(move || run_one(id))).collect();
        handles.into_iter().filter_map(|h| h.join().expect("criterion panicked")).collect()
    })
}

fn int(n: i64) -> QuadScalar {
    QuadScalar::from_integer(n)
}

fn ratio(n: i64, d: i64) -> QuadScalar {
    QuadScalar::from_ratio(n, d)
}

fn r2() -> Radicand {
    Radicand::new(2).expect("squarefree")
}

fn quad(m: i64, n: i64) -> QuadScalar {
    int(m) + QuadScalar::sqrt_multiple(Rational::from_integer(n.into()), r2())
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i:02}")).collect()
}

fn four_point_sublines() -> (bool, String) {
    const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let perms: Vec<[usize; 4]> = {
        let mut v = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let p = [a, b, c, d];
                        if BTreeSet::from(p).len() == 4 {
                            v.push(p);
                        }
                    }
                }
            }
        }
        v
    };
    let pair_index = |i: usize, j: usize| PAIRS.iter().position(|&(a, b)| (a, b) == (i.min(j), i.max(j))).unwrap();

    let (mut classes, mut metrics, mut sublines, mut embeddable, mut rectangles) = (0, 0, 0, 0, 0);
    let mut mismatches = Vec::new();
    let mut t = [1u8; 6];
    loop {
        // keep one representative per relabeling orbit: the lexicographically least
        let least = perms.iter().all(|p| {
            let image: [u8; 6] = PAIRS.map(|(i, j)| t[pair_index(p[i], p[j])]);
            image >= t
        });
        if least {
            classes += 1;
            let rows: Vec<Vec<QuadScalar>> = (0..4)
                .map(|i| (0..4).map(|j| if i == j { int(0) } else { int(i64::from(t[pair_index(i, j)])) }).collect())
                .collect();
            let m = DistanceMatrix::new(labels(4), rows).expect("square");
            if let Ok(space) = FiniteMetricSpace::new(m) {
                metrics += 1;
                if space.is_subline() {
                    sublines += 1;
                    let decided = decide_embeddable(&space).expect("consistent");
                    let brute = brute_force_embed(&space).expect("small");
                    let rect = space.detect_l1_rectangle().is_some();
                    embeddable += usize::from(decided.is_embeddable());
                    rectangles += usize::from(rect);
                    if decided.is_embeddable() != brute.is_some() || decided.is_embeddable() == rect {
                        mismatches.push(t);
                    }
                }
            }
        }
        // next tuple in 1..=8
        let mut k = 5;
        loop {
            if t[k] < 8 {
                t[k] += 1;
                break;
            }
            t[k] = 1;
            if k == 0 {
                let ok = mismatches.is_empty() && sublines > 0 && rectangles > 0;
                return (
                    ok,
                    format!(
                        "{classes} relabeling classes, {metrics} metrics, {sublines} sublines, \
                         {embeddable} embeddable, {rectangles} rectangles, {} disagreements",
                        mismatches.len()
                    ),
                );
            }
            k -= 1;
        }
    }
}

fn random_points(rng: &mut ChaCha8Rng, size: usize, quadratic: bool) -> Vec<QuadScalar> {
    let mut set = BTreeSet::new();
    while set.len() < size {
        let x = if quadratic {
            quad(rng.random_range(-15..=15), rng.random_range(-15..=15))
        } else {
            ratio(rng.random_range(-60..=60), rng.random_range(1..=6))
        };
        set.insert(x);
    }
    let mut v: Vec<QuadScalar> = set.into_iter().collect();
    v.shuffle(rng);
    v
}

fn embedding_round_trip() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut failures = 0;
    for trial in 0..1000 {
        let size = rng.random_range(2..=12);
        let points = random_points(&mut rng, size, trial % 2 == 1);
        let names = labels(size);
        let truth = LineEmbedding::from_points(names.clone(), points.clone()).expect("distinct");
        let space = FiniteMetricSpace::from_points(names, &points).expect("metric");
        match embed_line(&space) {
            Some(e) if canonicalize(&e) == canonicalize(&truth) => {}
            _ => failures += 1,
        }
    }
    (failures == 0, format!("1000 random sets over Q and Z+Z*sqrt(2), {failures} mismatches"))
}

fn rectangle(p: &QuadScalar, q: &QuadScalar) -> FiniteMetricSpace {
    // (p,q), (p,-q), (-p,-q), (-p,q) under the l1 norm
    let (s, t) = (p + p, q + q);
    let u = &s + &t;
    let z = int(0);
    let rows = vec![
        vec![z.clone(), t.clone(), u.clone(), s.clone()],
        vec![t.clone(), z.clone(), s.clone(), u.clone()],
        vec![u.clone(), s.clone(), z.clone(), t.clone()],
        vec![s, u, t, z],
    ];
    FiniteMetricSpace::new(DistanceMatrix::new(labels(4), rows).expect("square")).expect("metric")
}

fn positive(rng: &mut ChaCha8Rng, quadratic: bool) -> QuadScalar {
    loop {
        let x = if quadratic {
            quad(rng.random_range(-6..=6), rng.random_range(-6..=6))
        } else {
            ratio(rng.random_range(1..=30), rng.random_range(1..=5))
        };
        if x.is_positive() {
            return x;
        }
    }
}

fn no_three_point_spheres() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut bad = 0;
    let mut largest = 0;
    for trial in 0..500 {
        let quadratic = trial % 4 >= 2;
        let space = if trial % 2 == 0 {
            let size = rng.random_range(3..=12);
            FiniteMetricSpace::from_points(labels(size), &random_points(&mut rng, size, quadratic)).expect("metric")
        } else {
            let p = positive(&mut rng, quadratic);
            let q = positive(&mut rng, quadratic);
            let r = rectangle(&p, &q);
            let w = r.detect_l1_rectangle().expect("rectangle");
            if (w.p.clone(), w.q.clone()) != (p.clone().min(q.clone()), p.max(q)) {
                bad += 1;
            }
            r
        };
        let size = space.largest_sphere().map_or(0, |s| s.0);
        largest = largest.max(size);
        let spherical = space.sphericity().map_or(0, |s| s.value);
        if !space.is_subline() || size > 2 || spherical > 2 {
            bad += 1;
        }
    }
    (bad == 0, format!("500 sublines (250 collinear, 250 rectangles), largest sphere {largest}, {bad} failures"))
}

fn integer_ray_windows() -> (bool, String) {
    let mut failures = Vec::new();
    let mut literal_hits = 0;
    for a in [ratio(1, 1), ratio(1, 2), ratio(3, 1)] {
        let names: Vec<String> = (0..=30).map(|k| format!("{k}a")).collect();
        let points: Vec<QuadScalar> = (0..=30).map(|k| &a * &int(k)).collect();
        let full = FiniteMetricSpace::from_points(names.clone(), &points).expect("metric");
        let ray = full.is_consistent_with_ray();
        if !ray.subline || full.subline_failure().is_some() || !ray.apexes.contains(&0) {
            failures.push(format!("a={a}: full window"));
            continue;
        }
        let before: BTreeSet<(String, QuadScalar)> =
            ray.deficiencies.iter().map(|d| (full.label(d.center).to_string(), d.radius.clone())).collect();
        let steps = [a.clone(), &a + &a];
        for k in 1..30usize {
            let keep: Vec<usize> = (0..=30).filter(|&i| i != k).collect();
            let space = FiniteMetricSpace::from_points(
                keep.iter().map(|&i| names[i].clone()).collect(),
                &keep.iter().map(|&i| points[i].clone()).collect::<Vec<_>>(),
            )
            .expect("metric");
            if !space.is_subline() {
                continue;
            }
            let apex = space.index_of("0a").expect("apex kept");
            let fresh: Vec<_> = space
                .sphericity_deficiencies()
                .into_iter()
                .filter(|d| d.within_reach && !before.contains(&(space.label(d.center).to_string(), d.radius.clone())))
                .collect();
            // the missing point is the far end of S(c; c + a) or S(c; c + 2a)
            // for a center c measured from the apex
            let witnessed = fresh.iter().any(|d| steps.contains(&(&d.radius - space.dist(apex, d.center))));
            literal_hits += usize::from(fresh.iter().any(|d| steps.contains(&d.radius)));
            if !witnessed {
                failures.push(format!("a={a}: deleting {k}a"));
            }
        }
    }
    (
        failures.is_empty(),
        format!(
            "3 windows, 87 deletions, {} undetected; {literal_hits} deletions also leave an empty sphere of radius a or 2a{}",
            failures.len(),
            if failures.is_empty() { String::new() } else { format!(" [{}]", failures.join(", ")) }
        ),
    )
}

fn subgroup_windows() -> (bool, String) {
    let lattices = [
        ("<1>", vec![int(1)], 10u32),
        ("<1/3>", vec![ratio(1, 3)], 10),
        ("<1, sqrt(2)>", vec![int(1), quad(0, 1)], 5),
    ];
    let mut failures = Vec::new();
    let mut spheres = 0;
    for (name, gens, n) in lattices {
        let l = Lattice::new(gens).expect("generators");
        let g = SymbolicSet::Group(l.clone());
        let window = g.window(n).expect("window").elements;
        for c in window.iter().filter(|c| !c.is_zero()) {
            for r in window.iter().filter(|r| r.is_positive()) {
                spheres += 1;
                if g.sphere(c, r).expect("member").len() != 2 {
                    failures.push(format!("{name}: S({c}; {r})"));
                }
            }
        }
        for k in 1..=n {
            let points = g.window(k).expect("window").elements;
            let space = FiniteMetricSpace::from_points(labels(points.len()), &points).expect("metric");
            let e = embed_line(&space).expect("embeddable");
            let rec = reconstruct_subgroup(&e).expect("at least two points");
            if rec.lattice != l || !rec.closure_violations.is_empty() {
                failures.push(format!("{name}: reconstruction at N={k}"));
            }
        }
    }
    (failures.is_empty(), format!("{spheres} spheres, 3 lattices reconstructed; {} failures", failures.len()))
}

fn dense_ray_certificate() -> (bool, String) {
    let one = Rational::from_integer(1.into());
    let inst = build_example1(2, &one, &one).expect("valid instance");
    let cert = example1_certificate(&inst, CertificateParams::default()).expect("certificate");
    let parts: Vec<String> =
        cert.parts().iter().map(|(name, ok)| format!("{name} {}", if *ok { "ok" } else { "FAILED" })).collect();
    let straddle = cert.straddle.as_ref().map_or("none".into(), |(x, y)| format!("({x}, {y})"));
    (
        cert.passed(),
        format!(
            "{}; straddle {straddle}; {} of {} buckets nonempty",
            parts.join(", "),
            cert.density.buckets.len() - cert.density.empty_buckets(),
            cert.density.buckets.len()
        ),
    )
}

fn semiaffine_decompositions() -> (bool, String) {
    let (mut sets, mut semiaffine, mut bad) = (0u64, 0u64, 0u64);
    for n in 1..=12u32 {
        for mask in 0..1u64 << n {
            let s = CyclicGroupSubset::from_mask(n, mask);
            let semi = is_semiaffine(&s);
            let found = classify_semiaffine(&s);
            sets += 1;
            semiaffine += u64::from(semi);
            let ok = match &found {
                Some(d) => semi && d.verify(&s),
                None => !semi,
            };
            bad += u64::from(!ok);
        }
    }
    (bad == 0, format!("{sets} subsets, {semiaffine} semiaffine, {bad} disagreements"))
}

fn midconvex_subgroups() -> (bool, String) {
    let (mut checked, mut bad, mut size_parity_misses) = (0, 0, 0);
    for n in 1..=60u32 {
        for h in enumerate_subgroups(n) {
            checked += 1;
            let mid = is_midconvex(&h.as_subset());
            // the quotient Z_n / dZ_n is cyclic of order d
            if mid != (h.index() % 2 == 1) {
                bad += 1;
            }
            if mid != (h.size() % 2 == 1) {
                size_parity_misses += 1;
            }
        }
    }
    (
        bad == 0,
        format!(
            "{checked} subgroups, {bad} disagree with odd quotient order; \
             subgroup-order parity would disagree on {size_parity_misses}"
        ),
    )
}

fn image_rays() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let groups: Vec<(u64, Lattice)> = [(2u64, int(1), 1i64), (3, int(1), 1), (5, ratio(1, 2), 1)]
        .into_iter()
        .map(|(d, a, b)| {
            let r = Radicand::new(d).expect("squarefree");
            let b = QuadScalar::sqrt_multiple(Rational::from_integer(b.into()), r);
            (d, Lattice::new(vec![a, b]).expect("generators"))
        })
        .collect();
    let mut failures = 0;
    let mut maps = 0;
    while maps < 50 {
        let (d, g) = &groups[maps % groups.len()];
        let m: [[i64; 2]; 2] = [
            [rng.random_range(-3..=3), rng.random_range(-3..=3)],
            [rng.random_range(-3..=3), rng.random_range(-3..=3)],
        ];
        let Ok(phi) = AdditiveMap::from_integers(m, *d) else { continue };
        if phi.image_lattice(g).expect("same field") != *g {
            continue;
        }
        maps += 1;
        let o = phi.apply(&QuadScalar::zero()).expect("same field");
        let x = SymbolicSet::image(phi, SymbolicSet::Cone(g.clone()));
        let report = check_ray_conditions(&x, &o, 10).expect("apex is a member");
        failures += usize::from(!report.passed());
    }
    (failures == 0, format!("{maps} maps over 3 groups at N=10, {failures} with failures"))
}
