use std::path::Path;
use std::process::{Command, Output};

fn harmdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_harmdist"))
        .args(args)
        .env("HARMDIST_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    harmdist(args).status.code().expect("exit code")
}

fn stdout_json(args: &[&str]) -> serde_json::Value {
    let out = harmdist(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn exact_mobius_identity_passes() {
    let args = [
        "verify",
        "--map",
        "hmobius-halfplane-0.3",
        "--bound",
        "mobius_exact",
        "--pairs",
        "300",
    ];
    assert_eq!(code(&args), 0);
}

#[test]
fn becker_harmonic_passes_on_small_shear() {
    let args = [
        "verify",
        "--map",
        "shear-identity-0.3z",
        "--bound",
        "becker_harmonic_bounds",
        "--pairs",
        "300",
    ];
    assert_eq!(code(&args), 0);
}

#[test]
fn order_below_true_order_is_detected() {
    let args = [
        "verify",
        "--map",
        "koebe",
        "--bound",
        "dhk_bounds",
        "--alpha",
        "0.5",
        "--pairs",
        "300",
    ];
    assert_eq!(code(&args), 2);
}

#[test]
fn unmet_hypothesis_has_its_own_exit_code() {
    let args = [
        "verify",
        "--map",
        "koebe",
        "--bound",
        "kim_minda_convex_lower",
        "--pairs",
        "100",
    ];
    assert_eq!(code(&args), 3);
    let mut relaxed = args.to_vec();
    relaxed.push("--allow-unmet");
    assert_eq!(code(&relaxed), 0);
}

#[test]
fn configuration_errors_exit_four() {
    assert_eq!(code(&["verify", "--map", "koebe"]), 4);
    assert_eq!(
        code(&["verify", "--map", "no-such-map", "--bound", "blatter_lower"]),
        4
    );
    assert_eq!(code(&["verify", "--unknown-flag"]), 4);
    assert_eq!(code(&["analyze", "--map", "koebe", "--grid", "3"]), 4);
    assert_eq!(code(&["--help"]), 0);

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"map": "koebe", "bound": "blatter_lower", "pairz": 10}"#,
    )
    .unwrap();
    assert_eq!(code(&["verify", "--config", cfg.to_str().unwrap()]), 4);

    let desc = dir.path().join("map.json");
    std::fs::write(&desc, r#"{"id": "x", "h": "z", "omega": "0.1z", "g": "z"}"#).unwrap();
    assert_eq!(code(&["analyze", "--map", desc.to_str().unwrap()]), 4);
}

#[test]
fn bad_thread_count_is_a_configuration_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_harmdist"))
        .args(["catalog"])
        .env("HARMDIST_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn config_file_and_descriptor_file_work() {
    let dir = tempfile::tempdir().unwrap();
    let desc = dir.path().join("shear.json");
    std::fs::write(&desc, r#"{"id": "my-shear", "h": "z", "omega": "0.3z"}"#).unwrap();
    let cfg = dir.path().join("run.json");
    let cfg_text = serde_json::json!({
        "map": desc.to_str().unwrap(),
        "bound": "becker_harmonic_bounds",
        "pairs": 200,
        "seed": 7,
    });
    std::fs::write(&cfg, cfg_text.to_string()).unwrap();
    let report = stdout_json(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(report["map_id"], "my-shear");
    assert_eq!(report["status"], "passed");
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn output_files_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = dir.path().to_str().unwrap();
        let args = [
            "verify",
            "--map",
            "koebe",
            "--bound",
            "blatter_lower",
            "--pairs",
            "300",
            "--seed",
            "11",
            "--out",
            out,
        ];
        assert_eq!(code(&args), 0);
    }
    for file in ["blatter_lower.json", "blatter_lower.csv"] {
        assert_eq!(
            read(&a.path().join(file)),
            read(&b.path().join(file)),
            "{file}"
        );
    }
    let csv = String::from_utf8(read(&a.path().join("blatter_lower.csv"))).unwrap();
    assert!(
        csv.starts_with("re_a,im_a,re_b,im_b,rho,d,lower,actual,upper,lower_margin,upper_margin")
    );
}

#[test]
fn catalog_lists_known_properties() {
    let listing = stdout_json(&["catalog", "--json"]);
    let entries = listing["entries"].as_array().unwrap();
    let find = |name: &str| entries.iter().find(|e| e["name"] == name).unwrap().clone();
    assert_eq!(find("koebe")["order"]["value"], 2.0);
    assert_eq!(find("halfplane")["convex"]["value"], true);
    assert!(listing["families"][0]
        .as_str()
        .unwrap()
        .starts_with("harmonic-mobius"));
}

#[test]
fn analyze_reports_norms() {
    let identity = stdout_json(&["analyze", "--map", "identity", "--grid", "16,64"]);
    assert!(
        identity["norms"]["schwarzian_h"]["value"]
            .as_f64()
            .unwrap()
            .abs()
            < 1e-9
    );

    let koebe = stdout_json(&["analyze", "--map", "koebe"]);
    let s = koebe["norms"]["schwarzian_h"]["value"].as_f64().unwrap();
    assert!((s - 6.0).abs() < 1e-6, "{s}");
    assert!((koebe["norms"]["order_h"]["alpha"].as_f64().unwrap() - 2.0).abs() < 1e-3);
}

#[test]
fn plot_writes_svg_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(
        code(&["plot", "--map", "shear-halfplane-0.3z", "--out", out]),
        0
    );
    let svg = String::from_utf8(read(&dir.path().join("image.svg"))).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert!(read(&dir.path().join("image.csv")).len() > 1000);
}

fn curve_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn assert_matches_fixture(map: &str, fixture: &str) {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&["plot", "--map", map, "--out", dir.path().to_str().unwrap()]),
        0
    );
    let got = String::from_utf8(read(&dir.path().join("image.csv"))).unwrap();
    let pinned = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/fixtures")
            .join(fixture),
    )
    .unwrap();
    let (got, pinned) = (curve_rows(&got), curve_rows(&pinned));
    assert_eq!(got.len(), pinned.len());
    for (g, p) in got.iter().zip(&pinned) {
        assert_eq!(g[..2], p[..2]);
        for (x, y) in g[2..].iter().zip(&p[2..]) {
            let (x, y): (f64, f64) = (x.parse().unwrap(), y.parse().unwrap());
            assert!(
                (x - y).abs() <= 1e-9 * y.abs().max(1.0),
                "{fixture}: {x} vs {y}"
            );
        }
    }
}

#[test]
fn koebe_image_matches_pinned_curves() {
    assert_matches_fixture("koebe", "koebe-image.csv");
}

#[test]
fn halfplane_shear_image_matches_pinned_curves() {
    let dir = tempfile::tempdir().unwrap();
    let desc = dir.path().join("shear.json");
    std::fs::write(
        &desc,
        r#"{"id": "shear-halfplane-z", "h": "halfplane", "omega": "z"}"#,
    )
    .unwrap();
    assert_matches_fixture(desc.to_str().unwrap(), "shear-halfplane-z-image.csv");
}

#[test]
fn halfplane_shear_fixture_agrees_with_closed_form() {
    use num_complex::Complex64 as C;
    // h = z/(1-z), g' = z h', so g = 1/(1-z) + log(1-z) - 1
    let text = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/shear-halfplane-z-image.csv"),
    )
    .unwrap();
    for row in curve_rows(&text).iter().step_by(97) {
        let v: Vec<f64> = row[2..].iter().map(|s| s.parse().unwrap()).collect();
        let z = C::new(v[1], v[2]);
        let one = C::new(1.0, 0.0);
        let h = z / (one - z);
        let g = one / (one - z) + (one - z).ln() - one;
        let f = h + g.conj();
        assert!(
            (f - C::new(v[3], v[4])).norm() < 1e-9 * f.norm().max(1.0),
            "{z}: {f}"
        );
    }
}

#[test]
fn inline_descriptor_on_command_line() {
    let report = stdout_json(&[
        "analyze",
        "--map",
        r#"{"id": "s", "h": "identity", "omega": "0.3z"}"#,
        "--grid",
        "16,64",
    ]);
    assert_eq!(report["map_id"], "s");
    let w = report["norms"]["omega_inf"]["value"].as_f64().unwrap();
    assert!((w - 0.3).abs() < 1e-3, "{w}");
}
