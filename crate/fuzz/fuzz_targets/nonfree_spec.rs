#![no_main]

use lambda_systems::abelian::{build_h, divisibility_evidence, NonfreeSpec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(spec) = serde_json::from_slice::<NonfreeSpec>(data) else { return };
    // keep the normal forms small
    if spec.j > 12 || spec.r > 4 || spec.validate().is_err() {
        return;
    }
    let h = build_h(&spec).unwrap();
    assert!(h.is_free());
    let m = spec.relation_count().saturating_sub(1).min(3);
    if let Ok(ev) = divisibility_evidence(&spec, m) {
        assert!(ev.verify(&spec));
    }
});
