//! End-to-end runs of the binary: every subcommand, the file formats, and
//! the exit code contract (0 ok, 1 internal, 2 user error).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_steepness"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn gen_heisenberg_prints_ranks() {
    let out = bin().args(["gen", "heisenberg", "--n", "1"]).output().unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("ranks (1, 3, 3, 1)"), "{}", stdout(&out));
}

#[test]
fn gen_chessboard_two_by_two() {
    let out = bin()
        .args(["gen", "chessboard", "--m", "2", "--n", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    // four squares, two diagonal placements
    assert!(stdout(&out).contains("ranks (4, 2)"), "{}", stdout(&out));
}

#[test]
fn gen_independence_describes_largest_boundary() {
    let out = bin()
        .args(["gen", "independence", "--graph", "hypercube:3"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("dim 3"), "{text}");
    assert!(text.contains("largest boundary"), "{text}");
}

#[test]
fn validate_accepts_the_shipped_fixture() {
    let out = bin()
        .arg("validate")
        .arg(fixture("trefoil.chc"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("ok"), "{}", stdout(&out));
}

#[test]
fn validate_rejects_broken_composition() {
    let dir = std::env::temp_dir().join("steepness-cli-validate");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.chc");
    std::fs::write(
        &path,
        r#"{"ring":"Z","ranks":[1,1,1],"boundaries":[{"k":1,"entries":[[1,1,"1"]]},{"k":2,"entries":[[1,1,"1"]]}]}"#,
    )
    .unwrap();
    let out = bin().arg("validate").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("nonzero"), "{}", stderr(&out));
}

#[test]
fn reduce_trefoil_reaches_reference_residual() {
    let dir = std::env::temp_dir().join("steepness-cli-reduce");
    std::fs::create_dir_all(&dir).unwrap();
    let reduced = dir.join("trefoil-reduced.chc");
    let report = dir.join("report.json");
    let out = bin()
        .arg("reduce")
        .arg(fixture("trefoil.chc"))
        .args(["--ring", "z", "--passes", "auto"])
        .arg("--out")
        .arg(&reduced)
        .arg("--report")
        .arg(&report)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("passes: 2"), "{}", stdout(&out));
    assert!(stdout(&out).contains("final ranks (2, 0, 2, 2)"));

    let residual: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&reduced).unwrap()).unwrap();
    assert_eq!(residual["ranks"], serde_json::json!([2, 0, 2, 2]));
    assert_eq!(
        residual["boundaries"][2]["entries"],
        serde_json::json!([[2, 1, "2"]])
    );

    // the pass report tracks strictly shrinking rank vectors
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let passes = report["passes"].as_array().unwrap();
    assert_eq!(passes.len(), 2);
    let mut prev: Vec<u64> = report["input_ranks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    for pass in passes {
        let ranks: Vec<u64> = pass["ranks"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_u64().unwrap())
            .collect();
        assert!(ranks.iter().zip(&prev).all(|(a, b)| a <= b));
        assert!(ranks.iter().sum::<u64>() < prev.iter().sum::<u64>());
        prev = ranks;
    }
}

#[test]
fn reduce_over_gf2_kills_all_boundaries() {
    let out = bin()
        .arg("reduce")
        .arg(fixture("trefoil.chc"))
        .args(["--ring", "gf:2", "--passes", "auto", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).lines().next().unwrap()).unwrap();
    // mod-2 Betti numbers of the trefoil complex
    assert_eq!(v["final_ranks"], serde_json::json!([2, 0, 2, 2]));
}

#[test]
fn reduce_zero_complex_is_a_no_op() {
    let dir = std::env::temp_dir().join("steepness-cli-zero");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("zero.chc");
    std::fs::write(
        &path,
        r#"{"ring":"Z","ranks":[2,3],"boundaries":[{"k":1,"entries":[]}]}"#,
    )
    .unwrap();
    let out = bin()
        .arg("reduce")
        .arg(&path)
        .args(["--passes", "auto"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("passes: 0"), "{}", stdout(&out));
    assert!(stdout(&out).contains("final ranks (2, 3)"));
}

#[test]
fn emit_f_writes_comparison_maps() {
    let dir = std::env::temp_dir().join("steepness-cli-emitf");
    std::fs::create_dir_all(&dir).unwrap();
    let f_path = dir.join("trefoil-f.json");
    let out = bin()
        .arg("reduce")
        .arg(fixture("trefoil.chc"))
        .args(["--passes", "auto"])
        .arg("--emit-f")
        .arg(&f_path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&f_path).unwrap()).unwrap();
    assert_eq!(v["ring"], "Z");
    let maps = v["maps"].as_array().unwrap();
    assert_eq!(maps.len(), 4);
    assert_eq!(maps[0]["nrows"], 4);
    assert_eq!(maps[0]["ncols"], 2);
}

#[test]
fn homology_pipeline_from_facet_file() {
    let dir = std::env::temp_dir().join("steepness-cli-rp2");
    std::fs::create_dir_all(&dir).unwrap();
    let chc = dir.join("rp2.chc");
    let out = bin()
        .args(["gen", "simplicial", "--facets"])
        .arg(fixture("rp2.facets"))
        .arg("--out")
        .arg(&chc)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("ranks (6, 15, 10)"));

    let out = bin().arg("homology").arg(&chc).args(["--ring", "z"]).output().unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("H_0 = Z"), "{text}");
    assert!(text.contains("H_1 = Z/2"), "{text}");
    assert!(text.contains("H_2 = 0"), "{text}");

    let out = bin()
        .arg("homology")
        .arg(&chc)
        .args(["--ring", "gf:2", "--generators"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("H_2 = GF(2)"), "{text}");
    // the top generator is the sum of all ten triangles
    let top: Vec<&str> = text.lines().filter(|l| l.starts_with("gen H_2")).collect();
    assert_eq!(top.len(), 1);
    assert_eq!(top[0].matches('+').count(), 9, "{}", top[0]);

    let out = bin()
        .arg("homology")
        .arg(&chc)
        .args(["--ring", "zloc:2", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["homology"][1]["torsion"], serde_json::json!(["2"]));
}

#[test]
fn reorder_improves_staircase_matching() {
    // the staircase pattern whose default matching has a single pair
    let dir = std::env::temp_dir().join("steepness-cli-reorder");
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("staircase.chc");
    std::fs::write(
        &input,
        r#"{"ring":"Z","ranks":[4,4],"boundaries":[{"k":1,"entries":[[1,3,"1"],[1,4,"1"],[2,2,"1"],[2,3,"1"],[3,1,"1"],[3,2,"1"],[4,1,"1"]]}]}"#,
    )
    .unwrap();
    let out_path = dir.join("sorted.chc");
    let out = bin()
        .arg("reorder")
        .arg(&input)
        .args(["--reorder", "cols"])
        .arg("--out")
        .arg(&out_path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("steepness matching sizes"));
    assert!(out_path.exists());
}

#[test]
fn bench_emits_one_json_line_per_run() {
    let out = bin()
        .arg("bench")
        .arg(fixture("trefoil.chc"))
        .args(["--repeat", "2"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    for line in lines {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["passes"], 2);
    }
}

/// The report shows the fill-in phenomenon on the first-column-plus-last-row
/// family: the worst ordering reduces to a full matrix, the doubly-swapped
/// ordering to an empty one.
#[test]
fn report_densities_show_fill_in_contrast() {
    let dir = std::env::temp_dir().join("steepness-cli-fillin");
    std::fs::create_dir_all(&dir).unwrap();
    // 4x4 worst case: first column and last row of ones
    let worst = dir.join("worst.chc");
    std::fs::write(
        &worst,
        r#"{"ring":"Z","ranks":[4,4],"boundaries":[{"k":1,"entries":[[1,1,"1"],[2,1,"1"],[3,1,"1"],[4,1,"1"],[4,2,"1"],[4,3,"1"],[4,4,"1"]]}]}"#,
    )
    .unwrap();
    // same complex with first/last row and first/last column swapped
    let best = dir.join("best.chc");
    std::fs::write(
        &best,
        r#"{"ring":"Z","ranks":[4,4],"boundaries":[{"k":1,"entries":[[1,1,"1"],[1,2,"1"],[1,3,"1"],[1,4,"1"],[2,4,"1"],[3,4,"1"],[4,4,"1"]]}]}"#,
    )
    .unwrap();

    let density_after_one_pass = |input: &Path| -> String {
        let report = dir.join("report.json");
        let out = bin()
            .arg("reduce")
            .arg(input)
            .args(["--passes", "1"])
            .arg("--report")
            .arg(&report)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", stderr(&out));
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
        v["passes"][0]["densities"][0].as_str().unwrap().to_string()
    };

    assert_eq!(density_after_one_pass(&worst), "9/9");
    assert_eq!(density_after_one_pass(&best), "0/4");
}

#[test]
fn user_errors_exit_two() {
    let out = bin().arg("validate").arg("/nonexistent.chc").output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin()
        .arg("homology")
        .arg(fixture("trefoil.chc"))
        .args(["--ring", "gf:4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not prime"), "{}", stderr(&out));

    let out = bin()
        .args(["gen", "independence", "--graph", "dodecahedron:1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // clap usage errors share the same code
    let out = bin().arg("homology").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
