#![no_main]

use std::sync::{Arc, OnceLock};

use libfuzzer_sys::fuzz_target;
use tau2::algebra::Algebra;
use tau2::modcat::{module_from_json, module_to_json};

fn lambda3() -> &'static Arc<Algebra> {
    static ALG: OnceLock<Arc<Algebra>> = OnceLock::new();
    ALG.get_or_init(|| {
        Algebra::from_text("field 5\nvertices 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\nrelation b*a\n").unwrap()
    })
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = module_from_json(lambda3(), text) {
        if m.total_dim() > 64 {
            return;
        }
        let back = module_from_json(lambda3(), &module_to_json(&m).to_string()).expect("serialized module reparses");
        assert!(back == m);
    }
});
