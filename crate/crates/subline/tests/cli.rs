use std::io::Write;
use std::process::{Command, Output};

fn subline(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subline")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

struct TempFile(std::path::PathBuf);

impl TempFile {
    fn new(name: &str, text: &str) -> Self {
        let path = std::env::temp_dir().join(format!("subline-{}-{name}", std::process::id()));
        std::fs::File::create(&path).unwrap().write_all(text.as_bytes()).unwrap();
        TempFile(path)
    }

    fn path(&self) -> &str {
        self.0.to_str().unwrap()
    }
}

impl Drop for TempFile {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.0);
    }
}

fn points_matrix(points: &[i64]) -> String {
    let mut out = format!("{}\n", points.len());
    let labels: Vec<String> = (0..points.len()).map(|i| format!("p{i}")).collect();
    out += &labels.join(" ");
    out.push('\n');
    for x in points {
        let row: Vec<String> = points.iter().map(|y| (x - y).abs().to_string()).collect();
        out += &row.join(" ");
        out.push('\n');
    }
    out
}

#[test]
fn square_is_a_rectangle() {
    let f = TempFile::new("square", "4\na b c d\n0 2 6 4\n2 0 4 6\n6 4 0 2\n4 6 2 0\n");
    let o = subline(&["check", f.path()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("p=1 q=2"), "{}", stdout(&o));

    let o = subline(&["check", f.path(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "rectangle");

    let o = subline(&["embed", f.path()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("p=1 q=2"));
}

#[test]
fn symmetric_integers_reconstruct_the_integers() {
    let f = TempFile::new("ints", &points_matrix(&[-3, -2, -1, 0, 1, 2, 3]));
    let o = subline(&["check", f.path(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["reconstructed_group"]["rank"], 1);
    assert_eq!(v["reconstructed_group"]["basis"], serde_json::json!(["1"]));
}

#[test]
fn equilateral_triangle_is_not_a_subline() {
    let f = TempFile::new("tri", "3\na b c\n0 1 1\n1 0 1\n1 1 0\n");
    assert_eq!(subline(&["check", f.path()]).status.code(), Some(3));
    assert_eq!(subline(&["embed", f.path()]).status.code(), Some(3));
}

#[test]
fn invalid_metric_and_parse_errors() {
    let f = TempFile::new("bad", "3\na b c\n0 1 5\n1 0 1\n5 1 0\n");
    assert_eq!(subline(&["check", f.path()]).status.code(), Some(2));
    let f = TempFile::new("syntax", "2\na b\n0 1\n1 0x\n");
    let o = subline(&["check", f.path()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains(&format!("{}:4:4", f.path())), "{}", stderr(&o));
}

#[test]
fn embed_round_trip() {
    let f = TempFile::new("line", &points_matrix(&[10, 11, 13, 16]));
    let o = subline(&["embed", "--canonical", f.path()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "p0\t0\np1\t1\np2\t3\np3\t6\n");

    let coords: Vec<i64> = stdout(&o).lines().map(|l| l.split('\t').nth(1).unwrap().parse().unwrap()).collect();
    let g = TempFile::new("line2", &points_matrix(&coords));
    let again = subline(&["embed", "--canonical", g.path()]);
    assert_eq!(stdout(&again), stdout(&o));
}

#[test]
fn symbolic_queries() {
    let x = "image:[-1,0;0,1]:cone:1,1*sqrt(2)";
    assert_eq!(stdout(&subline(&["symbolic", "member", x, "--x", "-3"])), "true\n");
    assert_eq!(stdout(&subline(&["symbolic", "member", x, "--x", "3"])), "false\n");
    assert_eq!(stdout(&subline(&["symbolic", "member", x, "--x", "1-1*sqrt(2)"])), "false\n");
    let o = subline(&["symbolic", "sphere", "group:1,1*sqrt(2)", "--c", "0", "--r", "1*sqrt(2)"]);
    assert_eq!(stdout(&o), "-1*sqrt(2)\n1*sqrt(2)\n");
    assert_eq!(stdout(&subline(&["symbolic", "window", "cone:1", "--N", "3"])), "0\n1\n2\n3\n");
    let o = subline(&["symbolic", "ray", x, "--o", "0", "--N", "4"]);
    assert!(stdout(&o).contains("cond1 failures: 0") && stdout(&o).contains("cond2 failures: 0"));
    let o = subline(&["symbolic", "ray", "group:1", "--o", "0", "--N", "3"]);
    assert!(!stdout(&o).contains("cond2 failures: 0"));
    assert_eq!(subline(&["symbolic", "member", "grp:1", "--x", "0"]).status.code(), Some(1));
    let o = subline(&["symbolic", "sphere", "cone:1,1*sqrt(2)", "--c", "0", "--r", "1+1*sqrt(2)"]);
    assert_eq!(stdout(&o), "1+1*sqrt(2)\n");
    assert_eq!(stdout(&subline(&["symbolic", "member", "group:1,1*sqrt(2)", "--x", "1/2"])), "false\n");
    let o = subline(&["symbolic", "sphere", "cone:1", "--c", "-1", "--r", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn groupset_queries() {
    let o = subline(&["groupset", "--mod", "12", "--set", "0,1,6,7", "--check", "semiaffine", "--classify"]);
    assert!(stdout(&o).starts_with("semiaffine: yes"));
    let o = subline(&["groupset", "--mod", "6", "--set", "0,2,4", "--check", "midconvex"]);
    assert!(stdout(&o).starts_with("midconvex: no"));
    let o = subline(&["groupset", "--mod", "9", "--set", "0,3,6", "--check", "midconvex"]);
    assert!(stdout(&o).starts_with("midconvex: yes"));
    let o = subline(&["groupset", "--window", "5", "--set=-4,-1,2,5", "--trace", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["trace"]["step"], 3);
}

#[test]
fn example1_small_certificate() {
    let o = subline(&["example1", "--N", "12", "--ray-N", "5", "--buckets", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(subline(&["nope"]).status.code(), Some(1));
    assert_eq!(subline(&["--help"]).status.code(), Some(0));
    assert_eq!(subline(&["symbolic", "member", "group:1", "--x", "0", "--d", "4"]).status.code(), Some(1));
}
