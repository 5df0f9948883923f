//! The generated C header must exist, declare the full surface, and parse
//! as C99.

fn header_path() -> &'static str {
    concat!(env!("CARGO_MANIFEST_DIR"), "/include/echelon.h")
}

#[test]
fn generated_header_declares_the_surface() {
    let header = std::fs::read_to_string(header_path())
        .expect("build.rs generates include/echelon.h");
    for symbol in [
        "EchPoset",
        "ECH_STATUS_OK",
        "ECH_STATUS_NULL_ARGUMENT",
        "ECH_STATUS_PARSE",
        "ECH_STATUS_INVALID",
        "ECH_STATUS_CAPACITY",
        "ech_version",
        "ech_last_error_message",
        "ech_poset_from_json",
        "ech_poset_from_family",
        "ech_poset_to_json",
        "ech_string_free",
        "ech_poset_free",
        "ech_poset_size",
        "ech_poset_leq",
        "ech_first_extension",
        "ech_echelonmotion",
        "ech_is_echelon_independent",
        "ech_rowmotion",
        "ech_macneille_completion",
    ] {
        assert!(header.contains(symbol), "header is missing {symbol}");
    }
}

#[test]
fn generated_header_parses_as_c() {
    let status = std::process::Command::new("cc")
        .args(["-std=c99", "-fsyntax-only", "-x", "c", header_path()])
        .status()
        .expect("a C compiler is available");
    assert!(status.success(), "generated header fails the C syntax check");
}
