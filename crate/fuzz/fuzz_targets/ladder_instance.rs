#![no_main]

use lambda_systems::uniformization::LadderInstance;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(inst) = LadderInstance::from_json(s) else { return };
    // large primes or long colorings make validation itself expensive
    if inst.p.is_some_and(|p| p > 1000) || inst.levels.iter().any(|l| l.c.len() > 3) {
        return;
    }
    let _ = inst.validate();
    let json = serde_json::to_string(&inst).unwrap();
    assert_eq!(LadderInstance::from_json(&json).unwrap(), inst);
});
