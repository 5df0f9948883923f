//! Serialization: the `poset-v1` JSON format, comma-separated extension and
//! bijection arrays, and line-delimited JSON report streams.
//!
//! JSON posets use 0-based element indices; the comma-separated extension and
//! bijection arrays are 1-based, matching how worked examples are usually
//! written down.

use crate::extension::{ElementBijection, LinearExtension};
use crate::poset::{Poset, PosetError};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

const POSET_FORMAT: &str = "poset-v1";

#[derive(Serialize, Deserialize)]
struct PosetV1 {
    format: String,
    n: usize,
    covers: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
}

/// Serializes a poset as one-line `poset-v1` JSON.
pub fn poset_to_json(p: &Poset) -> String {
    let doc = PosetV1 {
        format: POSET_FORMAT.to_string(),
        n: p.n(),
        covers: p.covers().to_vec(),
        names: p.names().map(|ns| ns.to_vec()),
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

/// Parses `poset-v1` JSON.  The cover list need not be transitively reduced;
/// reduction is applied on load.
pub fn poset_from_json(s: &str) -> Result<Poset, IoError> {
    let doc: PosetV1 = serde_json::from_str(s)?;
    if doc.format != POSET_FORMAT {
        return Err(IoError::Parse(format!(
            "unsupported format tag \"{}\", expected \"{POSET_FORMAT}\"",
            doc.format
        )));
    }
    let p = Poset::from_covers(doc.n, &doc.covers)?;
    match doc.names {
        Some(names) => Ok(p.with_names(names)?),
        None => Ok(p),
    }
}

fn csv_numbers(s: &str, what: &str) -> Result<Vec<usize>, IoError> {
    s.trim()
        .split(',')
        .enumerate()
        .map(|(i, field)| {
            let field = field.trim();
            let v: usize = field.parse().map_err(|_| {
                IoError::Parse(format!(
                    "{what}: field {} is \"{field}\", expected a positive integer",
                    i + 1
                ))
            })?;
            if v == 0 {
                return Err(IoError::Parse(format!(
                    "{what}: field {} is 0, but entries are 1-based",
                    i + 1
                )));
            }
            Ok(v - 1)
        })
        .collect()
}

/// Writes a linear extension as the comma-separated list of 1-based
/// positions, indexed by element (the identity extension of a 5-element
/// poset is `1,2,3,4,5`).
pub fn extension_to_csv(sigma: &LinearExtension) -> String {
    join_one_based(sigma.positions())
}

/// Parses a comma-separated 1-based position array and validates it against
/// the poset as a linear extension.
pub fn extension_from_csv(p: &Poset, s: &str) -> Result<LinearExtension, IoError> {
    let pos = csv_numbers(s, "extension")?;
    Ok(LinearExtension::new(p, pos)?)
}

/// Writes a bijection as the comma-separated list of 1-based images, indexed
/// by element.
pub fn bijection_to_csv(b: &ElementBijection) -> String {
    join_one_based(b.images())
}

/// Parses a comma-separated 1-based image array as a bijection.
pub fn bijection_from_csv(s: &str) -> Result<ElementBijection, IoError> {
    let images = csv_numbers(s, "bijection")?;
    Ok(ElementBijection::new(images)?)
}

fn join_one_based(values: &[usize]) -> String {
    values
        .iter()
        .map(|&v| (v + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Writes records as line-delimited JSON, one object per line.
pub fn write_jsonl<T: Serialize>(items: &[T], out: &mut impl Write) -> Result<(), IoError> {
    for item in items {
        serde_json::to_writer(&mut *out, item)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads line-delimited JSON records, reporting the offending line on
/// failure.  Blank lines are skipped.
pub fn read_jsonl<T: DeserializeOwned>(reader: impl BufRead) -> Result<Vec<T>, IoError> {
    let mut out = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let item = serde_json::from_str(&line).map_err(|e| {
            IoError::Parse(format!("line {}: {e}", lineno + 1))
        })?;
        out.push(item);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::test_fixtures::r5;
    use proptest::prelude::*;

    #[test]
    fn poset_json_roundtrip() {
        let p = r5();
        let json = poset_to_json(&p);
        assert_eq!(
            json,
            r#"{"format":"poset-v1","n":5,"covers":[[0,1],[0,2],[1,3],[2,3],[3,4]]}"#
        );
        let q = poset_from_json(&json).unwrap();
        assert_eq!(q.n(), p.n());
        assert_eq!(q.covers(), p.covers());
        assert_eq!(q.names(), None);
    }

    #[test]
    fn names_survive_the_roundtrip() {
        let p = crate::families::r5_example();
        let q = poset_from_json(&poset_to_json(&p)).unwrap();
        assert_eq!(q.names(), p.names());
    }

    #[test]
    fn unreduced_covers_are_reduced_on_load() {
        let q = poset_from_json(
            r#"{"format":"poset-v1","n":3,"covers":[[0,1],[1,2],[0,2]]}"#,
        )
        .unwrap();
        assert_eq!(q.covers(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn malformed_posets_are_rejected() {
        assert!(matches!(
            poset_from_json(r#"{"format":"poset-v2","n":1,"covers":[]}"#),
            Err(IoError::Parse(_))
        ));
        assert!(matches!(
            poset_from_json(r#"{"n":1,"covers":[]}"#),
            Err(IoError::Json(_))
        ));
        // A cycle is a poset error, not a parse error.
        assert!(matches!(
            poset_from_json(r#"{"format":"poset-v1","n":2,"covers":[[0,1],[1,0]]}"#),
            Err(IoError::Poset(_))
        ));
    }

    #[test]
    fn extension_csv_matches_the_worked_example() {
        let p = r5();
        let sigma = p.first_extension();
        assert_eq!(extension_to_csv(&sigma), "1,2,3,4,5");
        let back = extension_from_csv(&p, "1,2,3,4,5").unwrap();
        assert_eq!(back, sigma);
        // Positions that violate the order are rejected by validation.
        assert!(extension_from_csv(&p, "5,2,3,4,1").is_err());
        // Field context in parse errors.
        let err = extension_from_csv(&p, "1,2,x,4,5").unwrap_err();
        assert!(err.to_string().contains("field 3"), "{err}");
        let err = extension_from_csv(&p, "0,1,2,3,4").unwrap_err();
        assert!(err.to_string().contains("1-based"), "{err}");
    }

    #[test]
    fn bijection_csv_matches_the_worked_example() {
        let b = ElementBijection::new(vec![4, 2, 1, 0, 3]).unwrap();
        assert_eq!(bijection_to_csv(&b), "5,3,2,1,4");
        assert_eq!(bijection_from_csv("5,3,2,1,4").unwrap(), b);
        assert!(bijection_from_csv("1,1,2").is_err());
    }

    #[test]
    fn jsonl_roundtrip_reports_line_numbers() {
        #[derive(Serialize, Deserialize, PartialEq, Debug)]
        struct Row {
            id: usize,
            ok: bool,
        }
        let rows = vec![Row { id: 0, ok: true }, Row { id: 1, ok: false }];
        let mut buf = Vec::new();
        write_jsonl(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        let back: Vec<Row> = read_jsonl(text.as_bytes()).unwrap();
        assert_eq!(back, rows);

        let bad = "{\"id\":0,\"ok\":true}\n{broken\n";
        let err = read_jsonl::<Row>(bad.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    proptest! {
        #[test]
        fn bijection_csv_roundtrips(perm in proptest::sample::subsequence((0..8usize).collect::<Vec<_>>(), 8).prop_shuffle()) {
            let b = ElementBijection::new(perm).unwrap();
            let back = bijection_from_csv(&bijection_to_csv(&b)).unwrap();
            prop_assert_eq!(back, b);
        }

        #[test]
        fn poset_json_roundtrips_arbitrary_small_posets(mask in 0u32..1 << 15) {
            // Interpret the mask as a subset of the upper-triangle pairs on
            // 6 elements; the closure of any such subset is a valid poset.
            let pairs: Vec<(usize, usize)> = (0..6)
                .flat_map(|i| (i + 1..6).map(move |j| (i, j)))
                .collect();
            let covers: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|&(b, _)| mask & (1 << b) != 0)
                .map(|(_, &pr)| pr)
                .collect();
            let p = Poset::from_covers(6, &covers).unwrap();
            let q = poset_from_json(&poset_to_json(&p)).unwrap();
            prop_assert_eq!(q.covers(), p.covers());
        }

        #[test]
        fn extension_csv_roundtrips_sampled_extensions(seed in 0u64..1024) {
            use rand::SeedableRng;
            let p = r5();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let sigma = p.sample_extension_greedy(&mut rng);
            let back = extension_from_csv(&p, &extension_to_csv(&sigma)).unwrap();
            prop_assert_eq!(back, sigma);
        }
    }
}
