#![no_main]

use libfuzzer_sys::fuzz_target;
use spconj::symform::{symplectic_basis, SkewForm};

fuzz_target!(|data: &[u8]| {
    let Ok(value) = serde_json::from_slice::<serde_json::Value>(data) else { return };
    if let Ok(form) = SkewForm::from_json(&value) {
        if form.dim() <= 16 {
            if let Ok(t) = symplectic_basis(&form) {
                let std = SkewForm::standard(form.field(), form.dim()).unwrap();
                assert_eq!(&t.transpose().mul(form.gram()).mul(&t), std.gram());
            }
        }
    }
});
