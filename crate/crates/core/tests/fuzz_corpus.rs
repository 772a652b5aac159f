//! Replays the checked-in fuzz seeds through the properties the fuzz
//! targets assert.

use std::path::PathBuf;

use tau2::algebra::{parse_spec, Algebra, BuildOptions};
use tau2::modcat::{module_from_json, module_to_json};

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(PathBuf, String)> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| {
            let path = e.unwrap().path();
            let text = std::fs::read_to_string(&path).unwrap();
            (path, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out
}

#[test]
fn parse_spec_seeds_round_trip() {
    for (path, text) in seeds("parse_spec") {
        let spec = parse_spec(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(parse_spec(&spec.to_text()).unwrap(), spec, "{}", path.display());
    }
}

#[test]
fn build_algebra_seeds() {
    let mut built = 0;
    for (_, text) in seeds("build_algebra") {
        let spec = parse_spec(&text).unwrap();
        let opts = BuildOptions {
            max_path_len: 8,
            max_paths: 512,
        };
        if let Ok(alg) = Algebra::build_with(spec, opts) {
            assert!(alg.check_associative());
            built += 1;
        }
    }
    assert!(built > 0);
}

#[test]
fn module_json_seeds() {
    let alg = Algebra::from_text("field 5\nvertices 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\nrelation b*a\n").unwrap();
    let mut parsed = 0;
    for (_, text) in seeds("module_json") {
        if let Ok(m) = module_from_json(&alg, &text) {
            assert!(module_from_json(&alg, &module_to_json(&m).to_string()).unwrap() == m);
            parsed += 1;
        }
    }
    assert!(parsed >= 3);
}
