#![no_main]

use lambda_systems::lambda_core::{node_key, parse_node_key};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(node) = parse_node_key(s) {
        assert_eq!(node_key(&node), s);
    }
});
