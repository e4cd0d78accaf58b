use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_casimir-film"));
    c.env_remove("CASIMIR_FILM_MATERIALS").env("RUST_LOG", "error");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "failed: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Header and rows of a CSV document.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn col(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn compute_smoke() {
    let out = stdout(&run(&[
        "compute",
        "--material",
        "gold",
        "--model",
        "plasma",
        "--a",
        "100e-9",
        "--T",
        "50",
        "--outputs",
        "free_energy,entropy",
    ]));
    let (h, rows) = csv_rows(&out);
    assert_eq!(rows.len(), 1);
    assert!(col(&h, &rows, "S_J_per_m2K")[0] > 0.0);
    assert!(col(&h, &rows, "F_J_per_m2")[0] < 0.0);
    let raw = rows[0][h.iter().position(|c| c == "F_J_per_m2").unwrap()].clone();
    let mantissa = raw.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
    assert!(mantissa.len() >= 12, "{raw}");
}

#[test]
fn compare_asymptotics_ratio_settles_at_low_temperature() {
    let out = stdout(&run(&[
        "compare-asymptotics",
        "--material",
        "gold",
        "--a",
        "100e-9",
        "--T-sweep",
        "1:50:log:10",
    ]));
    let (h, rows) = csv_rows(&out);
    assert_eq!(rows.len(), 10);
    let r = col(&h, &rows, "dF_ratio");
    // the ratio is flat at the low-temperature end; its limit is 4/3
    assert!((r[0] - r[1]).abs() < 1e-3);
    assert!((r[0] - 4.0 / 3.0).abs() < 2e-3, "{r:?}");
    let s = col(&h, &rows, "S_ratio");
    assert!((s[0] - r[0]).abs() < 1e-3);
    assert!(rows
        .iter()
        .all(|row| row[h.iter().position(|c| c == "validity_flag").unwrap()] == "inside"));
}

#[test]
fn table_iii_values() {
    let out = stdout(&run(&["table-III"]));
    let (h, rows) = csv_rows(&out);
    let i1 = col(&h, &rows, "I1");
    let i2 = col(&h, &rows, "I2_exact");
    let c = col(&h, &rows, "C_exact");
    let within = |v: f64, t: f64, tol: f64| (v - t).abs() <= tol;
    assert!(within(i1[0], -0.79575, 1e-5) && within(i1[1], -0.04049, 1e-5) && within(i1[2], -4.894e-6, 1e-9));
    assert!(within(i2[0], -0.02456, 1e-5) && within(i2[1], -0.006684, 1e-6) && within(i2[2], -1.5966e-6, 1e-10));
    assert!(within(c[0], 0.38175, 1e-5) && within(c[1], 1.15489, 1e-5) && within(c[2], 1.20205, 1e-5));
}

#[test]
fn output_is_deterministic() {
    let args = [
        "sweep",
        "--model",
        "both",
        "--a-sweep",
        "5e-8,1e-7",
        "--T",
        "300",
        "--outputs",
        "free_energy,pressure",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn json_matches_schema() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("out.json");
    let schema = dir.path().join("schema.json");
    stdout(&run(&[
        "sweep",
        "--format",
        "json",
        "--model",
        "both",
        "--T-sweep",
        "0,300",
        "--outputs",
        "free_energy,entropy,decomposition",
        "--out",
        doc.to_str().unwrap(),
    ]));
    std::fs::write(&schema, stdout(&run(&["schema"]))).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&doc).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert!(v["rows"][0]["F_plasma"].is_null());

    let check =
        "import json,sys,jsonschema; jsonschema.validate(json.load(open(sys.argv[1])), json.load(open(sys.argv[2])))";
    match Command::new("python3")
        .args(["-c", check, doc.to_str().unwrap(), schema.to_str().unwrap()])
        .output()
    {
        Ok(o) if String::from_utf8_lossy(&o.stderr).contains("No module named") => {
            eprintln!("python jsonschema unavailable; schema validation skipped")
        }
        Ok(o) => assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr)),
        Err(_) => eprintln!("python3 unavailable; schema validation skipped"),
    }
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "model = \"drude\"\nT = 20.0\na = 1e-7\noutputs = [\"free_energy\"]\n",
    )
    .unwrap();
    let out = stdout(&run(&["compute", "--config", cfg.to_str().unwrap(), "--T", "30"]));
    let (h, rows) = csv_rows(&out);
    assert_eq!(col(&h, &rows, "T_K"), vec![30.0]);
    assert_eq!(rows[0][h.iter().position(|c| c == "model").unwrap()], "drude");
}

#[test]
fn structured_errors() {
    let o = run(&["compute", "--material", "unobtainium"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unobtainium"));

    let o = run(&["sweep", "--T-sweep", "10,5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("increasing"));

    let o = run(&["compute", "--T-sweep", "1,2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn materials_from_search_path() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("silver.toml"),
        "name = \"silver\"\nomega_p_rad_s = 1.37e16\ngamma_ref_rad_s = 2.7e13\nT_ref_K = 300.0\nT_debye_K = 215.0\nbeta_low = 2.0\n",
    )
    .unwrap();
    let o = bin()
        .args(["materials", "list"])
        .env("CASIMIR_FILM_MATERIALS", dir.path())
        .output()
        .unwrap();
    let (_, rows) = csv_rows(&stdout(&o));
    let names: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert!(names.contains(&"silver") && names.contains(&"gold"));

    let o = bin()
        .args(["compute", "--material", "silver", "--T", "10"])
        .env("CASIMIR_FILM_MATERIALS", dir.path())
        .output()
        .unwrap();
    assert_eq!(csv_rows(&stdout(&o)).1.len(), 1);
    assert!(Path::new(&dir.path().join("silver.toml")).exists());
}

#[test]
fn bound_check_and_decompose() {
    let (h, rows) = csv_rows(&stdout(&run(&["bound-check", "--a-sweep", "11e-9,55e-9", "--T", "5"])));
    assert_eq!(rows.len(), 2);
    let i = h.iter().position(|c| c == "bound_ok").unwrap();
    assert!(rows.iter().all(|r| r[i] == "true"));

    let (h, rows) = csv_rows(&stdout(&run(&["decompose", "--a", "100e-9", "--T", "50"])));
    let total = col(&h, &rows, "decomposition_total")[0];
    let parts = col(&h, &rows, "F_plasma")[0] + col(&h, &rows, "F0_drude")[0] - col(&h, &rows, "F0_plasma")[0]
        + col(&h, &rows, "F_gamma")[0];
    assert!((total - parts).abs() <= 1e-12 * total.abs());
}
