#![no_main]

use lambda_systems::int::{parse_decimal, parse_rational, rational_to_string};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Some(v) = parse_decimal(s) {
        assert_eq!(parse_decimal(&v.to_string()), Some(v));
    }
    if let Some(q) = parse_rational(s) {
        assert_eq!(parse_rational(&rational_to_string(&q)), Some(q));
    }
});
