use std::f64::consts::FRAC_PI_4;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qfa::{parse, serialize, Document, DocumentError};
use qfa_core::analysis::{random_automaton, random_word, RandomSpec};
use qfa_core::fixtures;
use qfa_core::models::ModelKind;
use qfa_core::sim::value;
use qfa_core::Automaton;

fn fixture_documents() -> Vec<Document> {
    vec![
        Document::new(fixtures::rotation_kwqfa(FRAC_PI_4)),
        Document::new(fixtures::dephasing_nqfa(FRAC_PI_4)),
        Document::new(fixtures::identity_kwqfa()),
        Document::new(fixtures::trivial_qfc(true)),
        Document::new(fixtures::binary_expansion_pfa()),
        Document::new(fixtures::binary_expansion_pfa().into_gpfa()),
    ]
}

fn same_outputs(a: &Automaton, b: &Automaton, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = a.alphabet().len();
    for _ in 0..20 {
        let w = random_word(&mut rng, sigma, 10);
        assert_eq!(
            value(a, &w).unwrap().to_bits(),
            value(b, &w).unwrap().to_bits()
        );
    }
}

#[test]
fn fixtures_round_trip_exactly() {
    for doc in fixture_documents() {
        let text = serialize(&doc);
        let back = parse(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(serialize(&back), text);
        same_outputs(&doc.automaton, &back.automaton, 1);
    }
}

#[test]
fn random_models_round_trip_exactly() {
    for (i, kind) in ModelKind::ALL.into_iter().cycle().take(20).enumerate() {
        let spec = RandomSpec::new(i as u64, 2 + i % 3, 1 + i % 3);
        let mut doc = Document::new(random_automaton(kind, &spec).unwrap());
        doc.metadata.seed = Some(i as u64);
        let text = serialize(&doc);
        let back = parse(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(serialize(&back), text);
        same_outputs(&doc.automaton, &back.automaton, i as u64);
    }
}

#[test]
fn identity_machine_lists_every_tape_symbol() {
    let text = serialize(&Document::new(fixtures::identity_kwqfa()));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["kind"], "kwqfa");
    assert_eq!(v["format_version"], "1");
    let keys: Vec<&String> = v["unitaries"].as_object().unwrap().keys().collect();
    assert_eq!(keys, ["$", "a", "b", "¢"]);
    assert!(v.get("measurements").is_none());
}

#[test]
fn rotation_entries_are_decimal_strings() {
    let text = serialize(&Document::new(fixtures::rotation_kwqfa(FRAC_PI_4)));
    assert!(text.contains("\"0.7071067811865476\""));
    // sin(π/4) rounds one ulp lower than cos(π/4).
    assert!(text.contains("\"-0.7071067811865475\""));
}

fn rotation_value() -> serde_json::Value {
    serde_json::from_str(&serialize(&Document::new(fixtures::rotation_kwqfa(
        FRAC_PI_4,
    ))))
    .unwrap()
}

#[test]
fn non_unitary_matrix_is_reported_at_its_path() {
    let mut v = rotation_value();
    v["unitaries"]["a"][0][0] = serde_json::json!(["0.5", "0"]);
    match parse(&v.to_string()) {
        Err(DocumentError::Validation { violations, .. }) => {
            assert!(violations
                .iter()
                .any(|(p, m)| p == "unitaries.a" && m.contains("not unitary")));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn bad_number_is_reported_at_its_path() {
    let mut v = rotation_value();
    v["unitaries"]["a"][0][1] = serde_json::json!(["x", "0"]);
    match parse(&v.to_string()) {
        Err(DocumentError::Schema { path, .. }) => assert_eq!(path, "unitaries.a[0][1][0]"),
        other => panic!("unexpected {other:?}"),
    }
    v["unitaries"]["a"][0][1] = serde_json::json!([0.5, 0]);
    assert!(matches!(
        parse(&v.to_string()),
        Err(DocumentError::Schema { .. })
    ));
}

#[test]
fn truncated_document_is_a_syntax_error_with_offset() {
    let text = serialize(&Document::new(fixtures::identity_kwqfa()));
    let cut = &text[..text.len() / 2];
    match parse(cut) {
        Err(DocumentError::Syntax { offset, line, .. }) => {
            assert!(offset <= cut.len());
            assert!(offset > 0);
            assert!(line > 1);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn unknown_keys_are_rejected() {
    let mut v = rotation_value();
    v["unitary"] = serde_json::json!({});
    match parse(&v.to_string()) {
        Err(DocumentError::Schema { message, .. }) => assert!(message.contains("unitary")),
        other => panic!("unexpected {other:?}"),
    }
    let mut v = rotation_value();
    v["partition"]["halting"] = serde_json::json!([]);
    let e = parse(&v.to_string());
    assert!(
        matches!(&e, Err(DocumentError::Schema { path, .. }) if path == "partition.halting"),
        "{e:?}"
    );
}

#[test]
fn header_errors() {
    let mut v = rotation_value();
    v["kind"] = serde_json::json!("dfa");
    assert_eq!(
        parse(&v.to_string()),
        Err(DocumentError::UnknownKind("dfa".into()))
    );
    v["format_version"] = serde_json::json!("2");
    assert_eq!(
        parse(&v.to_string()),
        Err(DocumentError::UnsupportedVersion("2".into()))
    );
}

#[test]
fn kind_must_match_payload() {
    let mut v = rotation_value();
    v["kind"] = serde_json::json!("nqfa");
    assert!(
        matches!(parse(&v.to_string()), Err(DocumentError::Schema { path, .. }) if path == "measurements")
    );
    v["kind"] = serde_json::json!("gpfa");
    assert!(matches!(
        parse(&v.to_string()),
        Err(DocumentError::Schema { .. })
    ));
}

#[test]
fn missing_marker_unitary_is_a_validation_error() {
    let mut v = rotation_value();
    v["unitaries"].as_object_mut().unwrap().remove("$");
    match parse(&v.to_string()) {
        Err(DocumentError::Validation { violations, .. }) => {
            assert!(
                violations.iter().any(|(p, _)| p == "unitaries.$"),
                "{violations:?}"
            );
        }
        other => panic!("unexpected {other:?}"),
    }
}
