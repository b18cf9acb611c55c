//! The shipped ring files must stay in sync with the in-crate builders.

use mapsphere::poincare::{parse_and_validate, RingDescription};
use mapsphere::ringgen;

fn corpus_path(slug: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(format!("{slug}.json"))
}

#[test]
fn corpus_files_match_builders() {
    let cases = [
        ("cp2", ringgen::cp2()),
        ("cp3", ringgen::cp3()),
        ("s2xs2", ringgen::s2xs2()),
        ("s3xs3", ringgen::s3xs3()),
        ("cp2xcp2", ringgen::cp2xcp2()),
    ];
    for (slug, built) in cases {
        let text = std::fs::read_to_string(corpus_path(slug))
            .unwrap_or_else(|e| panic!("missing corpus file {slug}.json: {e}"));
        let from_file: serde_json::Value = serde_json::from_str(&text).unwrap();
        let from_builder: serde_json::Value =
            serde_json::from_str(&built.to_json()).unwrap();
        assert_eq!(from_file, from_builder, "corpus file {slug}.json diverges");
    }
}

#[test]
fn corpus_files_validate() {
    for slug in ["cp2", "cp3", "s2xs2", "s3xs3", "cp2xcp2"] {
        let text = std::fs::read_to_string(corpus_path(slug)).unwrap();
        let desc = RingDescription::from_json(&text).unwrap();
        parse_and_validate(&desc)
            .unwrap_or_else(|e| panic!("corpus file {slug}.json invalid: {e}"));
    }
}
