#![no_main]

use lambda_systems::whitehead::{coloring_from_json, coloring_to_json, WitnessDoc};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(c) = coloring_from_json(s) {
        let again = coloring_from_json(&coloring_to_json(&c).to_string()).unwrap();
        assert_eq!(again, c);
    }
    if let Ok(doc) = serde_json::from_str::<WitnessDoc>(s) {
        let _ = doc.into_witness();
    }
});
