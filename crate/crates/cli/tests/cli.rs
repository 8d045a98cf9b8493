use std::path::Path;

use hchain_cli::format::round_sig;
use hchain_cli::run;
use serde_json::Value;

fn args(s: &str) -> Vec<String> {
    std::iter::once("hchain".to_string())
        .chain(s.split_whitespace().map(String::from))
        .collect()
}

/// Runs the CLI in-process, returning (exit code, stdout, stderr).
fn hchain(s: &str) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&args(s), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn ok(s: &str) -> String {
    let (code, out, err) = hchain(s);
    assert_eq!(code, 0, "`{s}` failed: {err}");
    out
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

#[test]
fn modes_two_particles() {
    let out = ok("modes --n 2");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "m,k_m,omega_m,parity,Y_1,Y_2");
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[1], "0,0,0,even,0.707106781187,0.707106781187");
    assert_eq!(lines[2], "1,1.57079632679,1.41421356237,odd,-0.707106781187,0.707106781187");
}

#[test]
fn golden_outputs() {
    for (cmd, file) in [
        ("modes --n 3", "modes_n3.csv"),
        ("thermo --n 4 --temp 0.5", "thermo_n4_t0.5.csv"),
        ("length --n 16 --temp 2", "length_n16_t2.csv"),
        ("spectrum --n 3 --cutoff 2.5", "spectrum_n3.csv"),
    ] {
        assert_eq!(ok(cmd), golden(file), "{cmd}");
    }
}

#[test]
fn golden_headers() {
    let header = |cmd: &str| ok(cmd).lines().next().unwrap().to_string();
    assert_eq!(
        header("sweep --n-min 4 --n-max 16"),
        "N,T,gamma,mean_length,variance_exact,rel_dispersion,asymptotic,ratio"
    );
    assert_eq!(
        header("preset --n 64"),
        "preset,N,mass,kappa,xi,omega_max,hbar_omega_max_J,hbar_omega_max_eV,T,kT_J,kT_eV,gamma,mean_length,rel_dispersion,asymptotic"
    );
    assert_eq!(header("thermo --n 3"), "m,omega_m,beta_hbar_omega,Z,nu_mean,u2_mean");
    let sweep = ok("sweep --n-min 4 --n-max 64 --fit-min-n 4");
    let fits = sweep.split("\n\n").nth(1).unwrap();
    assert_eq!(fits.lines().next().unwrap(), "T,slope,intercept,residual,points");
}

#[test]
fn exit_codes() {
    let (code, _, err) = hchain("modes --n 1");
    assert_eq!(code, 1);
    assert!(err.contains("n >= 2"), "{err}");
    assert_eq!(hchain("modes --kappa 0").0, 1);
    assert_eq!(hchain("length --temp -3").0, 1);
    assert_eq!(hchain("modes --unknown 3").0, 1);
    assert_eq!(hchain("frobnicate").0, 1);
    assert_eq!(hchain("--help").0, 0);
    // runtime failure: enumeration blows past its state limit
    let (code, _, err) = hchain("spectrum --n 40 --cutoff 200");
    assert_eq!(code, 2, "{err}");
    // unwritable output path
    assert_eq!(hchain("modes --out /nonexistent-dir/modes.csv").0, 2);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for fmt in ["csv", "json"] {
        let mut outputs = Vec::new();
        for _ in 0..2 {
            let path = dir.path().join(format!("sweep.{fmt}"));
            ok(&format!(
                "sweep --n-min 8 --n-max 512 --temps 0.5,50 --fit-min-n 8 --format {fmt} --out {}",
                path.display()
            ));
            let mut bytes = std::fs::read(&path).unwrap();
            if fmt == "csv" {
                bytes.extend(std::fs::read(dir.path().join("sweep.fit.csv")).unwrap());
            }
            outputs.push(bytes);
        }
        assert_eq!(outputs[0], outputs[1], "{fmt}");
    }
    assert_eq!(ok("length --n 100 --temp 3 --format json"), ok("length --n 100 --temp 3 --format json"));
}

#[test]
fn json_round_trip_matches_in_memory_values() {
    use harmonic_chain::{length_statistics, ChainSpec, ThermoState, UnitSystem};
    for precision in [4, 12, 17] {
        let out = ok(&format!("length --n 33 --temp 0.7 --xi 1.3 --format json --precision {precision}"));
        let doc: Value = serde_json::from_str(&out).unwrap();
        let row = &doc["rows"][0];
        let spec = ChainSpec::new(33, 1.0, 1.0, 1.3, UnitSystem::reduced()).unwrap();
        let stats = length_statistics(&spec, &ThermoState::new(0.7, UnitSystem::reduced()).unwrap()).unwrap();
        for (col, value) in [
            ("mean_length", stats.mean),
            ("variance_exact", stats.variance),
            ("rel_dispersion", stats.relative_dispersion),
            ("gamma", stats.gamma),
            ("riemann_bound", stats.bound.unwrap()),
        ] {
            assert_eq!(row[col].as_f64().unwrap(), round_sig(value, precision), "{col} @ {precision}");
        }
        assert_eq!(doc["metadata"]["precision"], precision);
        assert_eq!(doc["metadata"]["units"], "reduced");
        assert_eq!(doc["metadata"]["spec"]["n"], 33);
    }
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    let csv = ok("thermo --n 6 --temp 1.5");
    let json: Value = serde_json::from_str(&ok("thermo --n 6 --temp 1.5 --format json")).unwrap();
    let mut lines = csv.lines();
    let columns: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(json["columns"].as_array().unwrap().len(), columns.len());
    for (i, line) in lines.enumerate() {
        for (col, field) in columns.iter().zip(line.split(',')) {
            assert_eq!(json["rows"][i][col].as_f64().unwrap(), field.parse::<f64>().unwrap());
        }
    }
}

fn stored_slopes(fits_csv: &str) -> Vec<f64> {
    fits_csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect()
}

#[test]
fn fit_reproduces_stored_sweep_slope() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = "sweep --n-min 16 --n-max 4096 --temps 0.01,1,1000 --fit-min-n 16";

    // CSV: table in --out, fits in the sidecar
    let csv = dir.path().join("sweep.csv");
    ok(&format!("{sweep} --out {}", csv.display()));
    let stored = stored_slopes(&std::fs::read_to_string(dir.path().join("sweep.fit.csv")).unwrap());
    let refit = stored_slopes(&ok(&format!("fit --input {} --fit-min-n 16", csv.display())));
    assert_eq!(stored.len(), 3);
    for (a, b) in stored.iter().zip(&refit) {
        assert!((a - b).abs() < 1e-12, "csv: {a} vs {b}");
    }

    // JSON
    let json = dir.path().join("sweep.json");
    ok(&format!("{sweep} --format json --out {}", json.display()));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let refit: Value =
        serde_json::from_str(&ok(&format!("fit --input {} --fit-min-n 16 --format json", json.display()))).unwrap();
    for i in 0..3 {
        let a = doc["fits"]["rows"][i]["slope"].as_f64().unwrap();
        let b = refit["rows"][i]["slope"].as_f64().unwrap();
        assert!((a - b).abs() < 1e-12, "json: {a} vs {b}");
    }
    // classical temperature approaches the N^-1/2 law
    assert!((doc["fits"]["rows"][2]["slope"].as_f64().unwrap() + 0.5).abs() < 0.05);

    // combined stdout stream parses too
    let stream = dir.path().join("stream.csv");
    std::fs::write(&stream, ok(sweep)).unwrap();
    let refit = stored_slopes(&ok(&format!("fit --input {} --fit-min-n 16", stream.display())));
    for (a, b) in stored.iter().zip(&refit) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("chain.conf");
    std::fs::write(&conf, "# test chain\nn = 8\ntemp = 2   # reduced units\nformat = json\n").unwrap();
    let doc: Value = serde_json::from_str(&ok(&format!("length --config {} --n 16", conf.display()))).unwrap();
    assert_eq!(doc["rows"][0]["N"], 16);
    assert_eq!(doc["rows"][0]["T"], 2.0);
    std::fs::write(&conf, "n = 8\nspring = 3\n").unwrap();
    let (code, _, err) = hchain(&format!("length --config {}", conf.display()));
    assert_eq!(code, 1);
    assert!(err.contains("spring"));
}

#[test]
fn zero_temperature_is_flagged() {
    let doc: Value = serde_json::from_str(&ok("length --n 10 --temp 0 --format json")).unwrap();
    assert!(doc["metadata"]["notes"][0].as_str().unwrap().contains("ground state"));
    assert_eq!(doc["rows"][0]["asymptotic"], Value::Null);
    assert!(doc["rows"][0]["variance_exact"].as_f64().unwrap() > 0.0);
}

#[test]
fn si_units_with_suffixes() {
    let a = ok("length --units si --n 1000 --temp 300K --xi 5e-10m");
    let b = ok("length --units si --n 1000 --temp 300 --xi 5e-10");
    assert_eq!(a, b);
    assert_eq!(hchain("length --n 1000 --temp 300K").0, 1);
}
