use std::path::PathBuf;

use poisson_avg::fixtures;
use poisson_avg_cli::{canonical_json, parse_spec, parse_spec_str};

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"))
}

#[test]
fn bundled_fixtures_match_library_models() {
    for m in fixtures::all() {
        let path = fixture_path(&m.name);
        let parsed = parse_spec(&path).unwrap_or_else(|e| panic!("{e}"));
        assert_eq!(parsed, m, "{}", path.display());
    }
}

#[test]
fn canonical_form_round_trips() {
    for m in fixtures::all() {
        let text = std::fs::read_to_string(fixture_path(&m.name)).unwrap();
        let again = canonical_json(&parse_spec_str(&text, &m.name).unwrap());
        assert_eq!(again, text, "{}", m.name);
    }
}

#[test]
fn minimal_zero_bivector_parses() {
    let m = parse_spec_str(r#"{"name": "zero", "coordinates": ["u", "v"], "pi": {}}"#, "inline").unwrap();
    assert_eq!(m.dim(), 2);
    assert!(m.pi.unwrap().is_zero());
}

#[test]
fn three_index_bivector_entry_names_the_field() {
    let text = r#"{"name": "bad", "coordinates": ["u", "v", "w"], "pi": {"u v w": "1"}}"#;
    let err = parse_spec_str(text, "inline").unwrap_err();
    assert_eq!(err.diagnostics.len(), 1);
    assert_eq!(err.diagnostics[0].location, "pi.u v w");
    assert!(err.diagnostics[0].message.contains("3 indices"));
}

#[test]
fn out_of_order_key_picks_up_the_sign() {
    let a = parse_spec_str(r#"{"name": "a", "coordinates": ["u", "v"], "pi": {"v u": "u"}}"#, "a").unwrap();
    let b = parse_spec_str(r#"{"name": "a", "coordinates": ["u", "v"], "pi": {"u v": "-u"}}"#, "b").unwrap();
    assert_eq!(a, b);
}

#[test]
fn syntax_errors_carry_line_and_column() {
    let err = parse_spec_str("{\n  \"name\": \"x\",\n  \"coordinates\": [\"u\",]\n}", "inline").unwrap_err();
    assert_eq!(err.diagnostics[0].location, "3:23");
}

#[test]
fn unknown_fields_are_rejected() {
    let err = parse_spec_str(r#"{"name": "x", "coordinates": ["u"], "colour": 1}"#, "inline").unwrap_err();
    assert!(err.diagnostics[0].message.contains("colour"));
}

#[test]
fn semantic_errors_are_all_collected() {
    let text = r#"{
        "name": "x",
        "coordinates": ["u", "v"],
        "pi": {"u v": "u +* v", "u u": "1", "u z": "1"},
        "mode": "symplectic",
        "boxes": {"b": {"min": ["0", "a"], "max": ["1", "1"]}}
    }"#;
    let err = parse_spec_str(text, "f.json").unwrap_err();
    let locations: Vec<&str> = err.diagnostics.iter().map(|d| d.location.as_str()).collect();
    for want in ["pi.u v", "pi.u u", "pi.u z", "mode", "boxes.b.min[1]"] {
        assert!(locations.contains(&want), "{want} missing from {locations:?}");
    }
    assert!(err.to_string().starts_with("f.json:"));
}

#[test]
fn inconsistent_pi_and_data_are_rejected() {
    let mut text = std::fs::read_to_string(fixture_path("flat")).unwrap();
    text = text.replacen("\"p\": {", "\"pi\": {\"x1 y1\": \"1\"},\n  \"p\": {", 1);
    let err = parse_spec_str(&text, "flat").unwrap_err();
    assert_eq!(err.diagnostics[0].location, "pi");
}

#[test]
fn missing_file_is_a_diagnostic() {
    let err = parse_spec(&fixture_path("does-not-exist")).unwrap_err();
    assert_eq!(err.diagnostics[0].location, "file");
}

#[test]
fn bivector_on_a_line_is_a_diagnostic() {
    let err = parse_spec_str(r#"{"name": "line", "coordinates": ["u"], "pi": {}}"#, "inline").unwrap_err();
    assert_eq!(err.diagnostics[0].location, "pi");
}

#[test]
fn size_guards_are_diagnostics() {
    let coords: Vec<String> = (0..9).map(|k| format!("\"c{k}\"")).collect();
    let text = format!(r#"{{"name": "big", "coordinates": [{}]}}"#, coords.join(", "));
    let err = parse_spec_str(&text, "inline").unwrap_err();
    assert_eq!(err.diagnostics[0].location, "coordinates");
    let err = parse_spec_str(r#"{"name": "d", "coordinates": ["u", "v"], "pi": {"u v": "u^13"}}"#, "inline").unwrap_err();
    assert_eq!(err.diagnostics[0].location, "pi.u v");
}
