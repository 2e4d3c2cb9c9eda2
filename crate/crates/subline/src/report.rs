//! The `check` pipeline and its report.

use std::fmt::{self, Write as _};

use serde::Serialize;
use subline_core::metric::{Deficiency, Violation};
use subline_core::symbolic::{ClosureOp, Reconstruction};
use subline_core::{
    decide_embeddable, reconstruct_subgroup, DistanceMatrix, EmbedDecision, FiniteMetricSpace,
    LineEmbedding, QuadScalar,
};

/// Process exit codes, one per first failure class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Ok,
    ParseError,
    InvalidMetric,
    NotSubline,
    Rectangle,
    Inconsistent,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Ok => 0,
            Verdict::ParseError => 1,
            Verdict::InvalidMetric => 2,
            Verdict::NotSubline => 3,
            Verdict::Rectangle => 4,
            Verdict::Inconsistent => 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Point {
    pub label: String,
    pub coordinate: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RectangleReport {
    pub corners: [String; 4],
    pub p: String,
    pub q: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SphereWitness {
    pub size: usize,
    pub center: String,
    pub radius: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeficiencyReport {
    pub center: String,
    pub radius: String,
    pub within_reach: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupReport {
    pub rank: usize,
    pub basis: Vec<String>,
    pub points: Vec<String>,
    /// `x+y=v` or `x-y=v` inside the sample's coordinate box but missing.
    pub closure_violations: Vec<String>,
}

/// Everything `check` learns about a matrix. Fields after a failed stage are
/// `null`, since the pipeline stops there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub verdict: Verdict,
    pub points: usize,
    pub radicand: u64,
    pub metric_valid: bool,
    pub violations: Vec<String>,
    pub subline: Option<bool>,
    pub subline_failure: Option<[String; 3]>,
    pub rectangle: Option<RectangleReport>,
    pub embeddable: Option<bool>,
    pub embedding: Option<Vec<Point>>,
    pub sphericity: Option<SphereWitness>,
    pub largest_sphere: Option<SphereWitness>,
    pub banakh_window: Option<bool>,
    pub banakh_failure: Option<SphereWitness>,
    pub apexes: Vec<String>,
    pub ray_consistent: Option<bool>,
    pub deficiencies: Vec<DeficiencyReport>,
    pub reconstructed_group: Option<GroupReport>,
}

fn violation_text(m: &DistanceMatrix, v: &Violation) -> String {
    let l = |i: usize| &m.labels()[i];
    match *v {
        Violation::NonzeroDiagonal { i } => format!("d({0},{0}) = {1} is not 0", l(i), m.get(i, i)),
        Violation::Asymmetric { i, j } => {
            format!("d({},{}) = {} but d({},{}) = {}", l(i), l(j), m.get(i, j), l(j), l(i), m.get(j, i))
        }
        Violation::NonPositive { i, j } => format!("d({},{}) = {} is not positive", l(i), l(j), m.get(i, j)),
        Violation::Triangle { i, j, k } => format!(
            "d({},{}) = {} exceeds d({},{}) + d({},{}) = {}",
            l(i),
            l(k),
            m.get(i, k),
            l(i),
            l(j),
            l(j),
            l(k),
            m.get(i, j) + m.get(j, k)
        ),
    }
}

pub fn embedding_points(e: &LineEmbedding) -> Vec<Point> {
    e.sorted_by_coordinate()
        .into_iter()
        .map(|(label, x)| Point { label: label.to_string(), coordinate: x.to_string() })
        .collect()
}

fn group_report(r: &Reconstruction) -> GroupReport {
    let s = |x: &QuadScalar| x.to_string();
    GroupReport {
        rank: r.lattice.rank(),
        basis: r.lattice.basis().iter().map(s).collect(),
        points: r.points.iter().map(s).collect(),
        closure_violations: r
            .closure_violations
            .iter()
            .map(|v| {
                let op = match v.op {
                    ClosureOp::Sum => '+',
                    ClosureOp::Difference => '-',
                };
                format!("({}){op}({})={}", v.left, v.right, v.value)
            })
            .collect(),
    }
}

fn deficiency(space: &FiniteMetricSpace, d: &Deficiency) -> DeficiencyReport {
    DeficiencyReport { center: space.label(d.center).to_string(), radius: d.radius.to_string(), within_reach: d.within_reach }
}

/// Run the pipeline: metric axioms, Triangle Equality, rectangle test,
/// embedding, sphere statistics, apexes and, for embeddable inputs, the
/// subgroup the points generate.
pub fn classify(matrix: &DistanceMatrix) -> ClassificationReport {
    let mut report = ClassificationReport {
        verdict: Verdict::Ok,
        points: matrix.len(),
        radicand: (0..matrix.len())
            .flat_map(|i| (0..matrix.len()).map(move |j| matrix.get(i, j).radicand().get()))
            .max()
            .unwrap_or(1),
        metric_valid: false,
        violations: Vec::new(),
        subline: None,
        subline_failure: None,
        rectangle: None,
        embeddable: None,
        embedding: None,
        sphericity: None,
        largest_sphere: None,
        banakh_window: None,
        banakh_failure: None,
        apexes: Vec::new(),
        ray_consistent: None,
        deficiencies: Vec::new(),
        reconstructed_group: None,
    };
    let violations = matrix.verify_metric();
    if !violations.is_empty() {
        report.verdict = Verdict::InvalidMetric;
        report.violations = violations.iter().map(|v| violation_text(matrix, v)).collect();
        return report;
    }
    report.metric_valid = true;
    let space = FiniteMetricSpace::new(matrix.clone()).expect("verified above");
    let label = |i: usize| space.label(i).to_string();

    if let Some([x, y, z]) = space.subline_failure() {
        report.verdict = Verdict::NotSubline;
        report.subline = Some(false);
        report.subline_failure = Some([label(x), label(y), label(z)]);
        return report;
    }
    report.subline = Some(true);

    match decide_embeddable(&space) {
        Ok(EmbedDecision::Embeddable(e)) => {
            report.embeddable = Some(true);
            report.embedding = Some(embedding_points(&e));
            if let Ok(r) = reconstruct_subgroup(&e) {
                report.reconstructed_group = Some(group_report(&r));
            }
        }
        Ok(EmbedDecision::Rectangle(w)) => {
            report.verdict = Verdict::Rectangle;
            report.embeddable = Some(false);
            report.rectangle = Some(RectangleReport {
                corners: w.corners.map(label),
                p: w.p.to_string(),
                q: w.q.to_string(),
            });
        }
        Ok(EmbedDecision::NotSubline(_)) => unreachable!("subline checked above"),
        Err(_) => {
            report.verdict = Verdict::Inconsistent;
            report.embeddable = Some(false);
            return report;
        }
    }

    if let Ok(s) = space.sphericity() {
        report.sphericity = Some(SphereWitness { size: s.value, center: label(s.center), radius: s.radius.to_string() });
    }
    if let Some((size, c, r)) = space.largest_sphere() {
        report.largest_sphere = Some(SphereWitness { size, center: label(c), radius: r.to_string() });
    }
    let banakh = space.banakh_failure();
    report.banakh_window = Some(banakh.is_none());
    report.banakh_failure = banakh.map(|(c, r)| SphereWitness {
        size: space.sphere_at(c, &r).len(),
        center: label(c),
        radius: r.to_string(),
    });
    let ray = space.is_consistent_with_ray();
    report.apexes = ray.apexes.iter().map(|&i| label(i)).collect();
    report.ray_consistent = Some(ray.consistent());
    report.deficiencies = ray.deficiencies.iter().map(|d| deficiency(&space, d)).collect();
    report
}

fn opt<T: fmt::Display>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(|| "-".to_string(), |v| v.to_string())
}

impl fmt::Display for SphereWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (center {}, radius {})", self.size, self.center, self.radius)
    }
}

impl ClassificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(w, "verdict: {}", serde_json::to_value(self.verdict).unwrap().as_str().unwrap());
        let _ = writeln!(w, "points: {}", self.points);
        if self.radicand > 1 {
            let _ = writeln!(w, "field: Q(sqrt({}))", self.radicand);
        }
        let _ = writeln!(w, "metric: {}", if self.metric_valid { "valid" } else { "invalid" });
        for v in &self.violations {
            let _ = writeln!(w, "  {v}");
        }
        if let Some(s) = self.subline {
            let _ = writeln!(w, "subline: {}", if s { "yes" } else { "no" });
        }
        if let Some([x, y, z]) = &self.subline_failure {
            let _ = writeln!(w, "  no Triangle Equality on {x} {y} {z}");
        }
        if let Some(r) = &self.rectangle {
            let _ = writeln!(w, "rectangle: {} with p={} q={}", r.corners.join(" "), r.p, r.q);
        }
        if let Some(e) = self.embeddable {
            let _ = writeln!(w, "embeddable: {}", if e { "yes" } else { "no" });
        }
        if let Some(points) = &self.embedding {
            for p in points {
                let _ = writeln!(w, "  {}\t{}", p.label, p.coordinate);
            }
        }
        if self.sphericity.is_some() {
            let _ = writeln!(w, "sphericity: {}", opt(&self.sphericity));
            let _ = writeln!(w, "largest sphere: {}", opt(&self.largest_sphere));
        }
        if let Some(b) = self.banakh_window {
            let _ = writeln!(w, "banakh window: {}", if b { "yes" } else { "no" });
        }
        if let Some(f) = &self.banakh_failure {
            let _ = writeln!(w, "  fails at {f}");
        }
        if let Some(r) = self.ray_consistent {
            let _ = writeln!(w, "apexes: {}", if self.apexes.is_empty() { "-".to_string() } else { self.apexes.join(" ") });
            let _ = writeln!(w, "ray consistent: {}", if r { "yes" } else { "no" });
            let inside = self.deficiencies.iter().filter(|d| d.within_reach).count();
            let _ = writeln!(
                w,
                "empty spheres: {} ({} within reach of their center)",
                self.deficiencies.len(),
                inside
            );
        }
        if let Some(g) = &self.reconstructed_group {
            let _ = writeln!(w, "group: <{}> (rank {})", g.basis.join(", "), g.rank);
            if g.closure_violations.is_empty() {
                let _ = writeln!(w, "closure: complete within the sample box");
            } else {
                let _ = writeln!(w, "closure: {} missing", g.closure_violations.len());
                for v in g.closure_violations.iter().take(10) {
                    let _ = writeln!(w, "  {v}");
                }
            }
        }
        out
    }
}
