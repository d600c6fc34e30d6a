use std::path::Path;
use std::process::{Command, Output};

use v2xsim::channel::{all_presets, read_tap_table};
use v2xsim::harness::{
    csv_string, read_csv, BlerCurve, BlerPoint, CurveSummary, ErrorBreakdown, McsScheme, Technology,
};

fn v2xsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_v2xsim")).args(args).env_remove("V2XSIM_OUTPUT_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

const QUICK: [&str; 4] = ["--max-trials", "16", "--target-errors", "4"];

#[test]
fn list_channels_table() {
    let o = v2xsim(&["list-channels"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let eva = text.lines().find(|l| l.starts_with("itu_eva")).expect("itu_eva row");
    assert!(eva.contains("9 taps"), "{eva}");
    assert!(text.lines().any(|l| l.starts_with("rural_los")));
}

#[test]
fn list_channels_csv_parses_back() {
    let o = v2xsim(&["list-channels", "--format", "csv"]);
    assert!(o.status.success());
    let parsed = read_tap_table(o.stdout.as_slice()).unwrap();
    let registry = all_presets();
    assert_eq!(parsed.len(), registry.len());
    for (p, r) in parsed.iter().zip(&registry) {
        assert_eq!(p.name, r.name);
        assert_eq!(p.taps, r.taps);
    }
}

#[test]
fn run_writes_one_row_per_snr_point() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let svg = dir.path().join("out.svg");
    let mut args = vec!["run", "--tech", "cv2x", "--mcs", "qpsk_half", "--channel", "awgn_only", "--snr", "-2:1:8"];
    args.extend(["--seed", "7", "--output", path_str(&csv), "--plot", path_str(&svg)]);
    args.extend(QUICK);
    let o = v2xsim(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let curves = read_csv(&csv).unwrap();
    assert_eq!(curves.len(), 1);
    assert_eq!(curves[0].points.len(), 11);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.lines().any(|l| l.starts_with('#') && l.contains("seed=7")));
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<svg"));
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for workers in ["1", "3"] {
        let csv = dir.path().join(format!("w{workers}.csv"));
        let mut args = vec!["run", "--tech", "dot11p,cv2x", "--mcs", "qpsk_threequarter", "--channel", "itu_va"];
        args.extend(["--snr", "2,8", "--seed", "11", "--workers", workers, "--output", path_str(&csv)]);
        args.extend(QUICK);
        let o = v2xsim(&args);
        assert!(o.status.success(), "{}", stderr(&o));
        outputs.push(std::fs::read(&csv).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn missing_flag_is_a_usage_error() {
    let o = v2xsim(&["run", "--tech", "cv2x", "--mcs", "qpsk_half", "--snr", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--channel"));
    assert!(stderr(&o).contains("Usage"));
}

#[test]
fn unknown_names_list_the_options() {
    let o = v2xsim(&["run", "--tech", "cv2x", "--mcs", "qpsk_half", "--channel", "itu_vc", "--snr", "0", "--dry-run"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("itu_vc") && err.contains("itu_va") && err.contains("highway_nlos"), "{err}");

    let o = v2xsim(&["run", "--tech", "cv2x", "--mcs", "16qam", "--channel", "itu_va", "--snr", "0", "--dry-run"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("qpsk_threequarter"));
}

#[test]
fn dry_run_prints_config_and_runs_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("never.csv");
    let args =
        ["run", "--tech", "dot11p", "--mcs", "qpsk_half", "--channel", "itu_va", "--snr", "0:2:4", "--seed", "3"];
    let mut args = args.to_vec();
    args.extend(["--output", path_str(&csv), "--dry-run"]);
    let o = v2xsim(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("seed = 3"));
    assert!(text.contains("snr_db_list = [0.0, 2.0, 4.0]"), "{text}");
    assert!(!csv.exists());
}

#[test]
fn manifest_and_flags_resolve_identically() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("run.toml");
    std::fs::write(
        &manifest,
        r#"
seed = 21
output = "curves.csv"

[[sweep]]
technology = "cv2x"
mcs_scheme = "qpsk_threequarter"
channel = "urban_nlos"
snr = "-1:0.5:1"
max_trials = 400

[[sweep]]
technology = "dot11p"
mcs_scheme = "qpsk_threequarter"
channel = "urban_nlos"
snr_db_list = [-1, -0.5, 0, 0.5, 1]
max_trials = 400
"#,
    )
    .unwrap();
    let from_file = v2xsim(&["run", "--config", path_str(&manifest), "--dry-run"]);
    assert!(from_file.status.success(), "{}", stderr(&from_file));
    let mut args = vec!["run", "--tech", "cv2x,dot11p", "--mcs", "qpsk_threequarter", "--channel", "urban_nlos"];
    args.extend(["--snr", "-1:0.5:1", "--seed", "21", "--output", "curves.csv", "--max-trials", "400", "--dry-run"]);
    let from_flags = v2xsim(&args);
    assert!(from_flags.status.success(), "{}", stderr(&from_flags));
    assert_eq!(stdout(&from_file), stdout(&from_flags));
}

#[test]
fn manifest_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("bad.toml");
    std::fs::write(
        &manifest,
        "[[sweep]]\ntechnology = \"cv2x\"\nmcs_scheme = \"qpsk_half\"\nchannel = \"itu_va\"\nsnr_db_list = [0]\nvelocity = 3\n",
    )
    .unwrap();
    let o = v2xsim(&["run", "--config", path_str(&manifest), "--dry-run", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("velocity"));
}

#[test]
fn output_directory_override() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["run", "--tech", "dot11p", "--mcs", "qpsk_half", "--channel", "awgn_only", "--snr", "inf"];
    args.extend(["--seed", "1", "--output", "rel.csv"]);
    args.extend(QUICK);
    let o = Command::new(env!("CARGO_BIN_EXE_v2xsim"))
        .args(&args)
        .env("V2XSIM_OUTPUT_DIR", dir.path())
        .current_dir(dir.path().parent().unwrap())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let curves = read_csv(&dir.path().join("rel.csv")).unwrap();
    assert_eq!(curves[0].points[0].errors, 0);
}

#[test]
fn unwritable_output_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("out.csv");
    let mut args = vec!["run", "--tech", "dot11p", "--mcs", "qpsk_half", "--channel", "awgn_only", "--snr", "inf"];
    args.extend(["--seed", "1", "--output", path_str(&target)]);
    args.extend(QUICK);
    let o = v2xsim(&args);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

fn fixture(tech: Technology, channel: &str, offset: f64) -> BlerCurve {
    let points = [(0.0, 900), (2.0, 300), (4.0, 50), (6.0, 4)]
        .iter()
        .map(|&(snr, errors)| {
            BlerPoint::new(snr + offset, 1000, ErrorBreakdown { payload: errors, ..Default::default() })
        })
        .collect();
    BlerCurve { summary: CurveSummary { technology: tech, mcs: McsScheme::QpskHalf, channel: channel.into() }, points }
}

fn write_fixture(dir: &Path, name: &str, curves: &[BlerCurve]) -> String {
    let path = dir.join(name);
    std::fs::write(&path, csv_string(curves, &[]).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn compare_reports_gains() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_fixture(dir.path(), "a.csv", &[fixture(Technology::Dot11p, "itu_va", 0.0)]);
    let b = write_fixture(dir.path(), "b.csv", &[fixture(Technology::Cv2x, "itu_va", -3.0)]);

    let same = v2xsim(&["compare", &a, &a]);
    assert!(same.status.success());
    assert!(stdout(&same).contains("gain: 0.00 dB"), "{}", stdout(&same));

    let shifted = v2xsim(&["compare", &a, &b, "--target-bler", "0.1"]);
    assert!(shifted.status.success());
    assert!(stdout(&shifted).contains("gain: 3.00 dB"), "{}", stdout(&shifted));
}

#[test]
fn compare_marks_non_crossing_curves() {
    let dir = tempfile::tempdir().unwrap();
    let mut floor = fixture(Technology::Dot11p, "itu_vb", 0.0);
    for p in &mut floor.points {
        *p = BlerPoint::new(p.snr_db, 1000, ErrorBreakdown { payload: 400, ..Default::default() });
    }
    let a = write_fixture(dir.path(), "a.csv", &[floor, fixture(Technology::Dot11p, "itu_va", 0.0)]);
    let b = write_fixture(
        dir.path(),
        "b.csv",
        &[fixture(Technology::Cv2x, "itu_vb", -2.0), fixture(Technology::Cv2x, "itu_va", -1.0)],
    );
    let o = v2xsim(&["compare", &a, &b]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("gain: n/a"), "{text}");
    assert!(text.contains("gain: 1.00 dB"), "{text}");
}

#[test]
fn plot_command_combines_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_fixture(dir.path(), "a.csv", &[fixture(Technology::Dot11p, "itu_va", 0.0)]);
    let b = write_fixture(dir.path(), "b.csv", &[fixture(Technology::Cv2x, "itu_va", -3.0)]);
    let svg = dir.path().join("both.svg");
    let o = v2xsim(&["plot", &a, &b, "--output", path_str(&svg)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<polyline").count(), 2);
}
