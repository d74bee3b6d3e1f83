#![no_main]

use lambda_systems::lambda_core::{check_beautiful, LambdaDoc};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok((sys, fam)) = LambdaDoc::from_json(s) else { return };
    let report = sys.validate();
    if report.is_valid() {
        let _ = fam.validate(&sys);
        let _ = check_beautiful(&sys, &fam);
    }
    let json = serde_json::to_string(&LambdaDoc::from_parts(&sys, &fam)).unwrap();
    let (sys2, fam2) = LambdaDoc::from_json(&json).unwrap();
    assert_eq!(sys, sys2);
    assert_eq!(fam, fam2);
});
