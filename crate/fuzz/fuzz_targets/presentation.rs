#![no_main]

use lambda_systems::abelian::{Presentation, PresentationDoc};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(doc) = serde_json::from_slice::<PresentationDoc>(data) else { return };
    let Ok(p) = Presentation::from_doc(doc) else { return };
    if p.generators().len() > 8 || p.relations().rows() > 8 {
        return;
    }
    let factors = p.invariant_factors();
    assert!(factors.windows(2).all(|w| (&w[1] % &w[0]) == 0.into()));
    assert_eq!(Presentation::from_doc(p.to_doc()).unwrap(), p);
});
