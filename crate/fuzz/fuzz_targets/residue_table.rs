#![no_main]

use lambda_systems::uniformization::ResidueTable;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(table) = serde_json::from_slice::<ResidueTable>(data) else { return };
    for (lo, hi) in table.ones.intervals() {
        assert_eq!(table.eval(lo), 1);
        assert_eq!(table.eval(hi), 1);
    }
    let json = serde_json::to_string(&table).unwrap();
    assert_eq!(serde_json::from_str::<ResidueTable>(&json).unwrap(), table);
});
