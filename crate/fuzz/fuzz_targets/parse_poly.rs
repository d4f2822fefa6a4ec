#![no_main]

use libfuzzer_sys::fuzz_target;
use spconj::{Field, Poly};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let field = Field::prime(7).unwrap();
    if let Ok(p) = Poly::parse(&field, text) {
        // printing and reparsing must be lossless
        assert_eq!(Poly::parse(&field, &p.to_text()).unwrap(), p);
        if p.degree().is_some_and(|d| d <= 12) {
            if let Ok(factors) = p.factor() {
                let product = factors
                    .iter()
                    .fold(Poly::one(&field), |acc, (f, k)| acc.mul(&f.pow(*k)));
                assert_eq!(product, p.monic());
            }
        }
    }
});
