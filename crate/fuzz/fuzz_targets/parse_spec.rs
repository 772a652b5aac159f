#![no_main]

use libfuzzer_sys::fuzz_target;
use tau2::algebra::parse_spec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = parse_spec(text) {
        let again = parse_spec(&spec.to_text()).expect("printed spec reparses");
        assert_eq!(again, spec);
    }
});
