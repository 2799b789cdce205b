use codedcast::harness::{run_experiment, write_outputs, ExperimentSpec, Scheme};
use codedcast::Error;

const SMALL: &str = r#"{
  "network": {"m": 12, "n": 4, "B": 6, "M": 2, "L": 2, "Q": {"zipf": {"gamma": 0.4}}},
  "sweep": {"param": "M", "values": [0, 3, 6]},
  "schemes": ["GCLC", "HGLC", "LFU-sim", "GCLC2-only", "bound-GCLC", "bound-LFU"],
  "trials": 6,
  "seed": 17
}"#;

#[test]
fn outputs_are_byte_identical_across_runs() {
    let spec = ExperimentSpec::from_json_str(SMALL).unwrap();
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for dir in &dirs {
        let result = run_experiment(&spec).unwrap();
        write_outputs(&result, dir.path()).unwrap();
    }
    for name in ["results.csv", "trials.csv", "rates.svg"] {
        let a = std::fs::read(dirs[0].path().join(name)).unwrap();
        let b = std::fs::read(dirs[1].path().join(name)).unwrap();
        if name == "trials.csv" {
            // Runtimes differ; everything before them must not.
            let strip = |bytes: &[u8]| -> Vec<String> {
                String::from_utf8(bytes.to_vec())
                    .unwrap()
                    .lines()
                    .map(|l| {
                        let mut cols: Vec<&str> = l.split(',').collect();
                        cols.remove(9);
                        cols.join(",")
                    })
                    .collect()
            };
            assert_eq!(strip(&a), strip(&b));
        } else {
            assert_eq!(a, b, "{name} differs");
        }
    }
    let csv = std::fs::read_to_string(dirs[0].path().join("results.csv")).unwrap();
    assert!(csv.starts_with("sweep_param,value,scheme,mean_rate,ci95_lo,ci95_hi,trials\n"));
    assert_eq!(csv.lines().count(), 1 + 3 * 6);
}

#[test]
fn records_hold_scheme_invariants() {
    let spec = ExperimentSpec::from_json_str(SMALL).unwrap();
    let result = run_experiment(&spec).unwrap();
    assert_eq!(result.records.len(), 3 * 6 * 6);
    for point in 0..3 {
        for trial in 0..6 {
            let rate = |s: Scheme| {
                result
                    .records
                    .iter()
                    .find(|r| r.point == point && r.trial == trial && r.scheme == s)
                    .unwrap()
            };
            let two = rate(Scheme::Gclc2Only);
            for s in [Scheme::Gclc, Scheme::Hglc] {
                let r = rate(s);
                assert!(r.rate <= two.rate);
                assert_eq!(r.rate, r.nu.unwrap() as f64 / 6.0);
                assert_eq!(r.decode_ok, Some(true));
                assert_eq!(r.vertices, two.vertices);
            }
        }
    }
}

#[test]
fn full_caches_cost_nothing() {
    let text = SMALL.replace("[0, 3, 6]", "[12]");
    let spec = ExperimentSpec::from_json_str(&text).unwrap();
    let result = run_experiment(&spec).unwrap();
    for agg in &result.aggregates {
        assert_eq!(agg.mean_rate, 0.0, "{}", agg.scheme);
    }
}

#[test]
fn spec_errors_point_at_the_field() {
    let bad = SMALL.replace("\"trials\": 6", "\"trials\": \"six\"");
    match ExperimentSpec::from_json_str(&bad) {
        Err(Error::ConfigParse { path, line, .. }) => {
            assert_eq!(path, "trials");
            assert_eq!(line, 5);
        }
        other => panic!("unexpected {other:?}"),
    }
    let unknown = SMALL.replace("\"GCLC\",", "\"GCLC3\",");
    assert!(ExperimentSpec::from_json_str(&unknown)
        .unwrap_err()
        .is_config_error());
    let zero = SMALL.replace("\"trials\": 6", "\"trials\": 0");
    assert!(ExperimentSpec::from_json_str(&zero)
        .unwrap_err()
        .is_config_error());
    let empty = SMALL.replace("[0, 3, 6]", "[]");
    assert!(ExperimentSpec::from_json_str(&empty)
        .unwrap_err()
        .is_config_error());
}
