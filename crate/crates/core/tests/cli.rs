use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::{Command, Output};

use commat::cli::{AnalysisReport, RepsReport};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_commat"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn report(args: &[&str]) -> AnalysisReport {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = bin(&full);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn analyze_bundled_examples() {
    let r = report(&["analyze", "assets/d4gen.cdg"]);
    assert_eq!((r.dim_m, r.dim_a, r.excess), (4, 5, 1));
    assert!(!r.gerstenhaber_holds);
    assert_eq!(r.basis, ["1", "e13", "e14", "e23", "e24"]);
    let r = report(&["analyze", "bundled:d3genEq"]);
    assert_eq!((r.dim_m, r.dim_a), (7, 7));
    assert!(
        r.relations.iter().any(|s| s == "a^2 = bc"),
        "{:?}",
        r.relations
    );
}

#[test]
fn exit_codes_and_diagnostics() {
    let o = bin(&["analyze", "tests/data/broken.cdg"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(
        stderr(&o).contains("tests/data/broken.cdg: parallelogram violation at (x1, y1, z2)"),
        "{}",
        stderr(&o)
    );

    let o = bin(&["analyze", "tests/data/noncommuting.cdg"]);
    assert_eq!(o.status.code(), Some(2));
    let o = bin(&["analyze", "--no-lint", "tests/data/noncommuting.cdg"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("do not commute"));

    let o = bin(&["analyze", "tests/data/syntax.cdg"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("tests/data/syntax.cdg:3:3:"),
        "{}",
        stderr(&o)
    );
    let o = bin(&["analyze", "tests/data/unknown_name.cdg"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("tests/data/unknown_name.cdg:3:"));

    let o = bin(&["lint", "tests/data/broken.cdg"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(bin(&["lint", "bundled:d3genEq"]).status.code(), Some(0));

    let o = bin(&["family", "abxy", "--m", "0"]);
    assert_ne!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let o = bin(&["family", "de", "--m", "3", "--field", "F3"]);
    assert_ne!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("at least 4"));
}

#[test]
fn family_examples() {
    let r = report(&["family", "abxy", "--m", "3"]);
    assert_eq!((r.dim_m, r.dim_a), (27, 33));
    let r = report(&["family", "rd", "--e0", "3", "--e1", "5"]);
    assert_eq!((r.dim_m, r.dim_a), (8, 16));
    let r = report(&["family", "de", "--m", "3", "--field", "F7"]);
    assert_eq!((r.dim_m, r.dim_a), (12, 15));
}

#[test]
fn family_emits_a_diagram_that_analyzes_the_same() {
    let dir = tempfile::tempdir().unwrap();
    let cdg = dir.path().join("abxy2.cdg");
    let svg = dir.path().join("abxy2.svg");
    let a = report(&[
        "family",
        "abxy-alt",
        "--m",
        "2",
        "--emit-cdg",
        cdg.to_str().unwrap(),
        "--emit-svg",
        svg.to_str().unwrap(),
    ]);
    let b = report(&["analyze", cdg.to_str().unwrap()]);
    assert_eq!(
        (a.dim_m, a.dim_a, &a.relations),
        (b.dim_m, b.dim_a, &b.relations)
    );
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    let o = bin(&[
        "family",
        "de",
        "--m",
        "2",
        "--emit-cdg",
        cdg.to_str().unwrap(),
    ]);
    assert_ne!(o.status.code(), Some(0));
}

/// Reads `key: value` lines of the text report back into JSON values.
fn parse_text(text: &str) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    let mut relations = Vec::new();
    for line in text.lines() {
        if let Some(rel) = line.strip_prefix("  ") {
            relations.push(rel.to_string());
        } else if let Some((k, v)) = line.split_once(": ") {
            out.insert(k.to_string(), v.to_string());
        } else if let Some(k) = line.strip_suffix(':') {
            out.insert(k.to_string(), String::new());
        }
    }
    out.insert("relations".into(), relations.join("; "));
    out
}

fn json_as_text(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::Null => "-".into(),
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Array(items) => items
            .iter()
            .map(json_as_text)
            .collect::<Vec<_>>()
            .join(", "),
        other => other.to_string(),
    }
}

#[test]
fn text_and_json_agree() {
    for args in [
        vec!["analyze", "bundled:d3gen2"],
        vec!["family", "abxy", "--m", "2"],
        vec!["family", "frobenius", "--n", "1,1,1,1", "--field", "F2"],
        vec!["family", "de", "--m", "2", "--field", "F5"],
    ] {
        let text = parse_text(&stdout(&bin(&args)));
        let mut j = vec!["--json"];
        j.extend(&args);
        let json: serde_json::Value = serde_json::from_str(&stdout(&bin(&j))).unwrap();
        let obj = json.as_object().unwrap();
        for (k, v) in obj {
            match k.as_str() {
                "schemaVersion" | "input" => {}
                "relations" => {
                    let rels: Vec<String> =
                        v.as_array().unwrap().iter().map(json_as_text).collect();
                    assert_eq!(text["relations"], rels.join("; "));
                }
                _ => assert_eq!(text.get(k), Some(&json_as_text(v)), "{args:?} {k}"),
            }
        }
    }
}

fn golden_cases() -> Vec<(&'static str, Vec<&'static str>)> {
    vec![
        ("d4gen", vec!["analyze", "bundled:d4gen"]),
        ("d4gen2", vec!["analyze", "bundled:d4gen2"]),
        ("d3gen1", vec!["analyze", "bundled:d3gen1"]),
        ("d3gen2", vec!["analyze", "bundled:d3gen2"]),
        ("d3genEq", vec!["analyze", "bundled:d3genEq"]),
        ("abxy_1", vec!["family", "abxy", "--m", "1"]),
        ("abxy_2", vec!["family", "abxy", "--m", "2"]),
        ("abxy_alt_1", vec!["family", "abxy-alt", "--m", "1"]),
        ("abxy_alt_2", vec!["family", "abxy-alt", "--m", "2"]),
        ("matrix_units", vec!["family", "matrix-units"]),
        ("de_2_f5", vec!["family", "de", "--m", "2", "--field", "F5"]),
        ("rd_3_5", vec!["family", "rd", "--e0", "3", "--e1", "5"]),
        ("rd_1_1", vec!["family", "rd", "--e0", "1", "--e1", "1"]),
        (
            "frobenius_1111",
            vec!["family", "frobenius", "--n", "1,1,1,1"],
        ),
        ("st_power_3", vec!["family", "st-power", "--n", "3"]),
    ]
}

/// Set `UPDATE_GOLDEN=1` to rewrite the files after an intended schema change.
#[test]
fn golden_reports() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, args) in golden_cases() {
        let mut full = vec!["--json"];
        full.extend(&args);
        let o = bin(&full);
        assert_eq!(o.status.code(), Some(0), "{name}");
        let got = stdout(&o);
        let path = dir.join(format!("{name}.json"));
        if update {
            std::fs::write(&path, &got).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path)
            .unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
        assert_eq!(got, want, "{name}");
        let parsed: AnalysisReport = serde_json::from_str(&want).unwrap();
        assert_eq!(
            serde_json::to_string_pretty(&parsed).unwrap() + "\n",
            want,
            "{name} round trip"
        );
    }
}

#[test]
fn rt_examples() {
    let o = bin(&[
        "--json",
        "rt",
        "--ring",
        "Z",
        "--factors",
        "4,2",
        "--endo",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["ltA"].as_u64(), v["ltM"].as_u64()), (Some(2), Some(3)));
    assert_eq!(v["holds"], true);
    assert_eq!(v["embedding"], true);

    for seed in ["7", "8", "9"] {
        let o = bin(&[
            "--json",
            "--seed",
            seed,
            "rt",
            "--ring",
            "F2x",
            "--factors",
            "x^2,x",
            "--random",
        ]);
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["holds"], true);
    }
    let a = bin(&["--json", "--seed", "3", "rt", "--ring", "Z", "--random"]);
    let b = bin(&["--json", "--seed", "3", "rt", "--ring", "Z", "--random"]);
    assert_eq!(a.stdout, b.stdout);

    // The row of the second summand sends a generator of Z/2 to 1 in Z/4.
    let o = bin(&[
        "rt",
        "--ring",
        "Z",
        "--factors",
        "4,2",
        "--endo",
        "[[1,2],[1,1]]",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("entry (1, 0)"), "{}", stderr(&o));
    let o = bin(&[
        "rt",
        "--ring",
        "Z",
        "--factors",
        "4,2",
        "--endo",
        "[[1,0],[2,1]]",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

/// Counts pairs of commuting 3x3 matrices `S, T` over F2 with `S^2 = ST = T^2 = 0`.
fn st2_dim3_oracle() -> (u64, u64) {
    type M = [[u8; 3]; 3];
    let mat = |bits: u32| -> M {
        let mut m = [[0u8; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = ((bits >> (3 * i + j)) & 1) as u8;
            }
        }
        m
    };
    let mul = |a: &M, b: &M| -> M {
        let mut c = [[0u8; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                c[i][j] = (0..3).fold(0, |acc, k| acc ^ (a[i][k] & b[k][j]));
            }
        }
        c
    };
    let zero = [[0u8; 3]; 3];
    let squares_zero: Vec<M> = (0..512).map(mat).filter(|m| mul(m, m) == zero).collect();
    let (mut total, mut faithful) = (0, 0);
    for s in &squares_zero {
        for t in &squares_zero {
            if mul(s, t) != zero || mul(t, s) != zero {
                continue;
            }
            total += 1;
            // Faithful iff 1, S, T are independent: S, T independent and neither equals I.
            let is = |m: &M| m.iter().flatten().copied().collect::<Vec<u8>>();
            let (vs, vt) = (is(s), is(t));
            let nonzero = |v: &[u8]| v.contains(&1);
            let sum: Vec<u8> = vs.iter().zip(&vt).map(|(a, b)| a ^ b).collect();
            if nonzero(&vs) && nonzero(&vt) && nonzero(&sum) {
                faithful += 1;
            }
        }
    }
    (total, faithful)
}

#[test]
fn enumreps_matches_brute_force() {
    let o = bin(&[
        "--json",
        "enumreps",
        "--algebra",
        "st2",
        "--dim",
        "3",
        "--field",
        "F2",
    ]);
    let r: RepsReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.exhaustive);
    assert_eq!((r.modules, r.faithful), st2_dim3_oracle());
    for d in ["1", "2"] {
        let o = bin(&["--json", "enumreps", "--algebra", "st2", "--dim", d]);
        let r: RepsReport = serde_json::from_str(&stdout(&o)).unwrap();
        assert!(r.exhaustive);
        assert_eq!(r.faithful, 0, "dim {d} is below the algebra length");
    }
    let o = bin(&[
        "--json",
        "--budget",
        "10",
        "enumreps",
        "--algebra",
        "st2",
        "--dim",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r: RepsReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!r.exhaustive);
}

#[test]
fn search_writes_report_and_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = bin(&[
        "--json",
        "search",
        "--gens",
        "4",
        "--max-verts",
        "4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["bestExcess"]["excess"], 1);
    assert_eq!(v["exhaustive"], true);
    let saved: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(saved, v);
    let witness = out.join("best_excess.cdg");
    let r = report(&["analyze", witness.to_str().unwrap(), "--field", "F2"]);
    assert_eq!((r.dim_m, r.dim_a), (4, 5));

    let o = bin(&["--json", "search", "--gens", "1", "--max-verts", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["bestExcess"]["excess"].as_i64().unwrap() <= 0);
    assert_eq!(v["classesPerLevel"], serde_json::json!([1, 2, 4]));

    let one = bin(&[
        "--json",
        "search",
        "--gens",
        "3",
        "--max-verts",
        "5",
        "--workers",
        "1",
    ]);
    let four = bin(&[
        "--json",
        "search",
        "--gens",
        "3",
        "--max-verts",
        "5",
        "--workers",
        "4",
    ]);
    assert_eq!(one.stdout, four.stdout);

    let o = bin(&[
        "--json",
        "--budget",
        "100",
        "search",
        "--gens",
        "3",
        "--max-verts",
        "6",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["exhaustive"], false);
}
