#![no_main]

use libfuzzer_sys::fuzz_target;
use spconj::centralizer::centralizer_order;
use spconj::classify::InvariantDescriptor;

fuzz_target!(|data: &[u8]| {
    let Ok(value) = serde_json::from_slice::<serde_json::Value>(data) else { return };
    if let Ok(d) = InvariantDescriptor::from_json(&value) {
        let label = d.label();
        let again = InvariantDescriptor::from_json(&serde_json::from_str(label.as_str()).unwrap()).unwrap();
        assert_eq!(again.label(), label);
        if d.n <= 64 {
            let _ = centralizer_order(&d);
        }
    }
});
