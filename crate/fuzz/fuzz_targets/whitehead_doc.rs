#![no_main]

use lambda_systems::whitehead::WhiteheadDoc;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok((ws, order)) = WhiteheadDoc::from_json(s) else { return };
    let _ = ws.validate();
    let json = serde_json::to_string(&WhiteheadDoc::from_parts(&ws, order.as_ref())).unwrap();
    let (back, order_back) = WhiteheadDoc::from_json(&json).unwrap();
    assert_eq!(back.q, ws.q);
    assert_eq!(back.pins, ws.pins);
    assert_eq!(order_back, order);
});
