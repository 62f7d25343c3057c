use amenable_core::picard_fuchs::DiffOperator;
use serde_json::Value;
use std::process::{Command, Output};

fn amenable(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amenable")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn nonsense_input_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nonsense.txt");
    std::fs::write(&path, "x ^^ y +\n").unwrap();
    let o = amenable(&["analyze", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = amenable(&["analyze", dir.path().join("missing.txt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn apery_polynomial_report() {
    let args = ["analyze", "corpus/beukers_peters", "--terms", "12", "--apery-terms", "200", "--json", "-"];
    let o = amenable(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let values: Vec<&str> = v["periods"]["values"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(&values[..3], &["1", "5", "73"]);
    let got = DiffOperator::parse(v["operator"]["text"].as_str().unwrap()).unwrap();
    let want = DiffOperator::parse("D^3 - t (34 D^3 + 51 D^2 + 27 D + 5) + t^2 (D + 1)^3").unwrap();
    assert!(got.equivalent(&want));
    let rec: Vec<&str> = v["apery"]["unit_windows"].as_array().unwrap().iter().filter_map(|w| w["recognized"].as_str()).collect();
    assert!(rec.contains(&"1/6 * zeta(3)"), "{rec:?}");
    assert_eq!(v["amenability"]["strictly_amenable"], "Certified");
    // byte-stable without --timings
    let again = amenable(&args);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn several_inputs_in_one_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    std::fs::write(&path, "x + y + 1/(x y)\n").unwrap();
    let o = amenable(&["analyze", path.to_str().unwrap(), "corpus/beukers_peters", "--terms", "12", "--apery-terms", "0", "--json", "-"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 2);
    assert_eq!(arr[0]["periods"]["values"][3], "6");
    assert_eq!(arr[1]["input"], "corpus/beukers_peters");
}

#[test]
fn refuted_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    std::fs::write(&path, "3 x + y + 1/(x y)\n").unwrap();
    let o = amenable(&["analyze", path.to_str().unwrap(), "--terms", "12", "--apery-terms", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn periods_stream_one_per_line() {
    let o = amenable(&["periods", "corpus/lg_1_3_gr25", "--terms", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().take(4).collect::<Vec<_>>(), vec!["1", "18", "1710", "246960"]);
}

#[test]
fn fast_verify_groups_pass() {
    let o = amenable(&["corpus", "verify", "--only", "pullbacks,singular,ramification"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn triangulation_group_reports_the_finding() {
    let o = amenable(&["corpus", "verify", "--only", "triangulations"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("ok   triangulations/lg_1_3_gr25"));
    assert!(out.contains("FAIL triangulations/lg_1_1_gr25"));
    assert!(!out.contains("pullbacks/"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("triangulations/lg_1_1_gr25"));
}

#[test]
fn corrupted_series_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let src = concat!(env!("CARGO_MANIFEST_DIR"), "/../amenable-core/corpus");
    for f in std::fs::read_dir(src).unwrap() {
        let f = f.unwrap().path();
        let mut text = std::fs::read_to_string(&f).unwrap();
        if f.file_name().unwrap() == "lg_1_3_gr25.json" {
            text = text.replace("1710 t^2", "1711 t^2");
        }
        std::fs::write(dir.path().join(f.file_name().unwrap()), text).unwrap();
    }
    let o = amenable(&["corpus", "verify", "--quick", "--only", "periods", "--corpus-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("periods/lg_1_3_gr25") && err.contains("1711"), "{err}");
}

#[test]
fn unknown_group_is_rejected() {
    let o = amenable(&["corpus", "verify", "--only", "everything"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn mutation_keeps_periods() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    std::fs::write(&path, "1/x + y + (1 + x)^2/y\n").unwrap();
    let o = amenable(&["mutate", path.to_str().unwrap(), "--weight", "0,1", "--factor", "1 + x", "--check", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("periods agree through 8 terms"));
}

#[test]
fn monodromy_and_triangulate_subcommands() {
    let o = amenable(&["monodromy", "corpus/lg_111111_gr27"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["defect"].as_i64(), v["ih1_open"].as_i64(), v["remark_r"].as_i64()), (Some(1), Some(2), Some(2)));
    let o = amenable(&["triangulate", "corpus/lg_2_2_gr25"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dual_matches"], true);
    let o = amenable(&["triangulate", "corpus/lg_1111_gr26"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["sublattice_index"].as_str(), v["fine_in_sublattice"].as_bool()), (Some("8"), Some(true)));
}

#[test]
fn apery_subcommand_with_windows() {
    let o = amenable(&["apery", "D^3 - t (34 D^3 + 51 D^2 + 27 D + 5) + t^2 (D + 1)^3", "--a", "1,5", "--b", "0,6", "--terms", "300"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("limit 1.2020569031595942853997381615114499907649"), "{out}");
    assert!(out.contains("recognized: 1 * zeta(3)"));
}
