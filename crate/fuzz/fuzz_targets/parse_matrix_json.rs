#![no_main]

use libfuzzer_sys::fuzz_target;
use spconj::{Field, Matrix};

fuzz_target!(|data: &[u8]| {
    let Ok(value) = serde_json::from_slice::<serde_json::Value>(data) else { return };
    if let Ok(m) = Matrix::from_json(&value) {
        assert_eq!(Matrix::from_json(&m.to_json()).unwrap(), m);
    }
    let _ = Matrix::from_nested_json(&Field::prime(5).unwrap(), &value);
});
