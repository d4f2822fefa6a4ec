//! Text and JSON decoders must reject malformed input with an error, never a
//! panic, and accept what their encoders produce.

use proptest::prelude::*;
use serde_json::Value;
use spconj::classify::{enumerate_classes, InvariantDescriptor};
use spconj::symform::{random_symplectic, SkewForm};
use spconj::{Field, Matrix, Poly};

fn json_strategy() -> impl Strategy<Value = Value> {
    let leaf = prop_oneof![
        Just(Value::Null),
        any::<bool>().prop_map(Value::Bool),
        (-20i64..40).prop_map(Value::from),
        "[-+0-9,a-z ]{0,8}".prop_map(Value::String),
    ];
    leaf.prop_recursive(4, 48, 8, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..8).prop_map(Value::Array),
            prop::collection::btree_map(
                prop_oneof![
                    Just("p".to_string()),
                    Just("n".to_string()),
                    Just("ext".to_string()),
                    Just("rows".to_string()),
                    Just("cols".to_string()),
                    Just("entries".to_string()),
                    Just("skew".to_string()),
                    Just("split".to_string()),
                    Just("selfbar".to_string()),
                    Just("linear".to_string()),
                    Just("sign".to_string()),
                    Just("b".to_string()),
                    Just("a".to_string()),
                    Just("q".to_string()),
                    Just("pair".to_string()),
                    Just("disc".to_string()),
                ],
                inner,
                0..8
            )
            .prop_map(|m| Value::Object(m.into_iter().collect())),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn poly_parse_never_panics(text in "[-0-9, ]{0,24}", p in prop::sample::select(vec![3u64, 5, 7])) {
        let field = Field::prime(p).unwrap();
        if let Ok(poly) = Poly::parse(&field, &text) {
            prop_assert_eq!(Poly::parse(&field, &poly.to_text()).unwrap(), poly);
        }
    }

    #[test]
    fn json_decoders_never_panic(value in json_strategy()) {
        let _ = Matrix::from_json(&value);
        let _ = Matrix::from_nested_json(&Field::prime(3).unwrap(), &value);
        let _ = SkewForm::from_json(&value);
        let _ = InvariantDescriptor::from_json(&value);
    }

    #[test]
    fn matrix_json_round_trips(seed in any::<u64>(), p in prop::sample::select(vec![3u64, 5, 7])) {
        let field = Field::prime(p).unwrap();
        let u = random_symplectic(4, &field, seed).unwrap();
        prop_assert_eq!(&Matrix::from_json(&u.matrix().to_json()).unwrap(), u.matrix());
        prop_assert_eq!(&Matrix::from_nested_json(&field, &u.matrix().to_nested_json()).unwrap(), u.matrix());
    }
}

#[test]
fn descriptor_json_round_trips_for_every_class() {
    for (n, p) in [(2, 3), (4, 3), (4, 5), (6, 3)] {
        for d in enumerate_classes(n, &Field::prime(p).unwrap()).unwrap() {
            let text = d.label().to_string();
            let back = InvariantDescriptor::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            assert_eq!(back, d);
        }
    }
}

#[test]
fn malformed_inputs_are_errors() {
    let f3 = Field::prime(3).unwrap();
    for bad in [
        r#"{"p":3,"rows":0,"cols":0,"entries":[]}"#,
        r#"{"p":9,"rows":1,"cols":1,"entries":[1]}"#,
        r#"{"p":3,"ext":"1,1,1","rows":1,"cols":1,"entries":[1]}"#,
        r#"{"p":3,"rows":1,"cols":1,"entries":[1.5]}"#,
        r#"{"p":3,"rows":1,"cols":1,"entries":["x"]}"#,
        r#"[1,2]"#,
    ] {
        let v: Value = serde_json::from_str(bad).unwrap();
        assert!(Matrix::from_json(&v).is_err(), "{bad}");
    }
    let ragged: Value = serde_json::from_str("[[1,2],[3]]").unwrap();
    assert!(Matrix::from_nested_json(&f3, &ragged).is_err());
    let unflagged: Value = serde_json::from_str(r#"{"p":3,"rows":2,"cols":2,"entries":[0,1,2,0],"skew":false}"#).unwrap();
    assert!(SkewForm::from_json(&unflagged).is_err());
    assert!(Poly::parse(&f3, "1,,2").is_err());
    assert!(Poly::parse(&f3, "a").is_err());
}

/// The checked-in fuzz seeds decode as their names suggest.
#[test]
fn fuzz_corpus_seeds_decode() {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus");
    let read = |target: &str, name: &str| std::fs::read(root.join(target).join(name)).unwrap();
    let f7 = Field::prime(7).unwrap();
    for name in ["x2_plus_1", "x_minus_1", "zero", "degree6", "negative"] {
        let text = String::from_utf8(read("parse_poly", name)).unwrap();
        assert!(Poly::parse(&f7, &text).is_ok(), "{name}");
    }
    let value = |target: &str, name: &str| serde_json::from_slice::<Value>(&read(target, name)).unwrap();
    for name in ["transvection", "extension"] {
        assert!(Matrix::from_json(&value("parse_matrix_json", name)).is_ok(), "{name}");
    }
    assert!(Matrix::from_json(&value("parse_matrix_json", "short")).is_err());
    assert!(Matrix::from_nested_json(&f7, &value("parse_matrix_json", "nested")).is_ok());
    for name in ["standard2", "swapped", "standard4", "degenerate"] {
        assert!(SkewForm::from_json(&value("parse_skewform_json", name)).is_ok(), "{name}");
    }
    for name in ["transvection", "rotation", "split", "mixed"] {
        assert!(InvariantDescriptor::from_json(&value("parse_descriptor_json", name)).is_ok(), "{name}");
    }
}
