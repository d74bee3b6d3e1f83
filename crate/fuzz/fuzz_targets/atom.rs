#![no_main]

use lambda_systems::lambda_core::Atom;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(atom) = Atom::parse(s) {
        // the printed form is canonical
        let printed = atom.to_string();
        assert_eq!(printed, s);
        assert_eq!(Atom::parse(&printed).unwrap(), atom);
    }
});
