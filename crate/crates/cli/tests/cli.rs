use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use accordion_core::instrument::{BitDepth, DEFAULT_PIXEL_SCALE};
use accordion_core::io::{read_manifest, read_measurements, write_pgm};
use accordion_core::GrayImage;

fn accordion(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_accordion"))
        .args(args)
        .env_remove("ACCORDION_OUT_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn spacing_table() {
    let o = accordion(&[
        "spacing",
        "--wavelength",
        "0.532",
        "--focal",
        "30000",
        "--separation",
        "19250",
    ]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("spacing (lambda f/D)  0.8291 um"), "{s}");
    assert!(s.contains("spacing (thin lens)   0.8707 um"), "{s}");
    assert!(s.contains("beam angle            37.43 deg"), "{s}");

    let o = accordion(&[
        "spacing",
        "--wavelength",
        "0.532",
        "--focal",
        "80000",
        "--target-spacing",
        "11.2",
    ]);
    assert!(stdout(&o).contains("3800.0 um"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        accordion(&["spacing", "--wavelength", "0.532"])
            .status
            .code(),
        Some(2)
    );
    let o = accordion(&[
        "spacing",
        "--wavelength",
        "0.532",
        "--focal",
        "30000",
        "--separation",
        "70000",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x");
    assert_eq!(
        accordion(&["accordion", "--preset", "fig9", "--out", path(&out)])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        accordion(&[
            "accordion",
            "--preset",
            "fig4b",
            "--speed",
            "1",
            "--out",
            path(&out)
        ])
        .status
        .code(),
        Some(2)
    );
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "seed = seven\n").unwrap();
    assert_eq!(
        accordion(&["accordion", "--config", path(&cfg), "--out", path(&out)])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn sensitivity_table() {
    let o = accordion(&[
        "sensitivity",
        "--deviation",
        "2.13,0",
        "--deviation",
        "0.266",
        "--spacing",
        "10",
    ]);
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(lines[1], "2.13,4.2600,8.0075,80.0752,0");
    assert_eq!(lines[2], "0,0.0000,0.0000,0.0000,0");
    assert_eq!(lines[3], "0.266,0.5320,1.0000,10.0000,0");
}

#[test]
fn accordion_runs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = accordion(&[
            "accordion",
            "--preset",
            "fig6b",
            "--seed",
            "7",
            "--read-noise",
            "2",
            "--out",
            path(out),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(dir_bytes(&a), dir_bytes(&b));
    let manifest = read_manifest(&a.join("manifest.csv")).unwrap();
    assert_eq!(manifest.len(), 76);
    assert!((manifest.last().unwrap().time_s - 2.5).abs() < 1e-12);
    assert!(a.join("composite.pgm").is_file());

    // the echoed config replays the run
    let c = dir.path().join("c");
    let o = accordion(&[
        "accordion",
        "--config",
        path(&a.join("run.cfg")),
        "--out",
        path(&c),
    ]);
    assert!(o.status.success());
    assert_eq!(dir_bytes(&a), dir_bytes(&c));
}

#[test]
fn long_sweep_duration() {
    let dir = tempfile::tempdir().unwrap();
    let o = accordion(&[
        "accordion",
        "--preset",
        "fig6a",
        "--sensor-height",
        "8",
        "--out",
        path(dir.path()),
    ]);
    assert!(o.status.success());
    assert!(
        stdout(&o).contains("136 frames over 4.500 s"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn env_sets_default_output() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from-env");
    let o = Command::new(env!("CARGO_BIN_EXE_accordion"))
        .args(["accordion", "--preset", "fig4a"])
        .env("ACCORDION_OUT_DIR", &target)
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(target.join("frame_0000.pgm").is_file());
    assert!(!target.join("composite.pgm").exists());
}

#[test]
fn analyze_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("run");
    assert!(
        accordion(&["accordion", "--preset", "fig6b", "--out", path(&run)])
            .status
            .success()
    );
    let o = accordion(&["analyze", path(&run)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.contains("76 of 76 frames measured"), "{s}");
    assert!(s.contains("period range 0.9715..11.1723 um"), "{s}");
    let drift: f64 = s
        .lines()
        .find_map(|l| l.strip_prefix("center fringe max drift "))
        .and_then(|l| l.split_whitespace().next())
        .unwrap()
        .parse()
        .unwrap();
    assert!(drift <= 0.01);

    let manifest = read_manifest(&run.join("manifest.csv")).unwrap();
    let rows = read_measurements(&run.join("measurements.csv")).unwrap();
    assert_eq!(rows.len(), manifest.len());
    for (m, r) in manifest.iter().zip(&rows) {
        assert_eq!(m.frame, r.frame);
        let d = r.period_um.unwrap();
        assert!(
            ((d - m.analytic_spacing_um) / m.analytic_spacing_um).abs() <= 0.005,
            "{}",
            m.frame
        );
    }
}

#[test]
fn analyze_without_scale_reports_pixels() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("run");
    assert!(
        accordion(&["accordion", "--preset", "fig4a", "--out", path(&run)])
            .status
            .success()
    );
    let frame = run.join("frame_0000.pgm");
    let out = dir.path().join("single");
    let o = accordion(&["analyze", path(&frame), "--out", path(&out)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains(" px (no pixel scale"));
    let rows = read_measurements(&out.join("measurements.csv")).unwrap();
    assert_eq!(rows[0].period_um, None);
    assert!((rows[0].period_px * DEFAULT_PIXEL_SCALE - 0.8291).abs() < 0.004);
}

#[test]
fn uniform_image_has_no_fringe() {
    let dir = tempfile::tempdir().unwrap();
    let img = GrayImage::new(64, 8, BitDepth::Eight, vec![120; 64 * 8]).unwrap();
    let p = dir.path().join("flat.pgm");
    write_pgm(&p, &img).unwrap();
    let o = accordion(&["analyze", path(&p)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no fringe found"));
}

#[test]
fn calibrate_separation_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("run");
    let seps = "5000,6300,7600,8900,10200,11500,12800,14100,15400,16700,18000,19250";
    let o = accordion(&[
        "accordion",
        "--preset",
        "fig4b",
        "--separations",
        seps,
        "--read-noise",
        "2",
        "--seed",
        "1",
        "--out",
        path(&run),
    ]);
    assert!(o.status.success());
    let o = accordion(&["analyze", path(&run), "--calibrate"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    let scale: f64 = s
        .lines()
        .find_map(|l| l.strip_prefix("pixel scale "))
        .and_then(|l| l.split_whitespace().next())
        .unwrap()
        .parse()
        .unwrap();
    assert!((scale - 0.0853).abs() <= 0.0005, "{s}");
    let report = fs::read_to_string(run.join("calibration.csv")).unwrap();
    assert_eq!(report.lines().count(), 13);

    let o = accordion(&["analyze", path(&run.join("frame_0000.pgm")), "--calibrate"]);
    assert_eq!(o.status.code(), Some(2));
}
