#![no_main]

use libfuzzer_sys::fuzz_target;
use tau2::algebra::{parse_spec, Algebra, BuildOptions};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = parse_spec(text) else { return };
    if spec.vertices.len() > 6 || spec.arrows.len() > 8 {
        return;
    }
    let opts = BuildOptions {
        max_path_len: 8,
        max_paths: 512,
    };
    if let Ok(alg) = Algebra::build_with(spec, opts) {
        assert!(alg.check_associative());
        assert!(alg.dim() >= alg.num_vertices());
    }
});
