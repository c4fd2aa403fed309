//! Reading and writing models.
//!
//! Two formats are supported for [`QuboModel`]:
//!
//! * JSON: `{"num_vars": n, "linear": [[i, v], ...], "quadratic": [[i, j, v], ...], "offset": v}`
//!   with `i < j` required for every quadratic entry.
//! * Coordinate text: `c` comment lines, an `n <num_vars>` header, an optional
//!   `o <offset>` line, then one `i j v` entry per line (`i i v` is linear).
//!   Entries with `i > j` are normalized on read.
//!
//! Both readers reject duplicate entries and non-finite values.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{IsingBuilder, IsingModel, QuboBuilder, QuboModel};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuboJson {
    num_vars: usize,
    linear: Vec<(usize, f64)>,
    quadratic: Vec<(usize, usize, f64)>,
    offset: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IsingJson {
    num_spins: usize,
    fields: Vec<(usize, f64)>,
    couplings: Vec<(usize, usize, f64)>,
    offset: f64,
}

fn finite(v: f64, line: usize) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Parse {
            line,
            msg: format!("non-finite value {v}"),
        })
    }
}

fn qubo_to_json_value(model: &QuboModel) -> QuboJson {
    QuboJson {
        num_vars: model.num_vars(),
        linear: model.linear().iter().map(|(&i, &v)| (i, v)).collect(),
        quadratic: model
            .quadratic()
            .iter()
            .map(|(&(i, j), &v)| (i, j, v))
            .collect(),
        offset: model.offset(),
    }
}

pub fn qubo_to_json(model: &QuboModel) -> String {
    serde_json::to_string_pretty(&qubo_to_json_value(model)).expect("model serializes")
}

pub fn qubo_from_json(text: &str) -> Result<QuboModel> {
    let raw: QuboJson = serde_json::from_str(text)?;
    // JSON has no meaningful line numbers per entry; report the entry index instead.
    let mut b = QuboBuilder::new(raw.num_vars);
    let mut seen = BTreeSet::new();
    for (k, &(i, v)) in raw.linear.iter().enumerate() {
        let v = finite(v, k + 1)?;
        if !seen.insert((i, i)) {
            return Err(Error::Parse {
                line: k + 1,
                msg: format!("duplicate linear entry {i}"),
            });
        }
        b.set_linear(i, v)?;
    }
    for (k, &(i, j, v)) in raw.quadratic.iter().enumerate() {
        let v = finite(v, k + 1)?;
        if i >= j {
            return Err(Error::Parse {
                line: k + 1,
                msg: format!("quadratic entry ({i}, {j}) must have i < j"),
            });
        }
        if !seen.insert((i, j)) {
            return Err(Error::Parse {
                line: k + 1,
                msg: format!("duplicate quadratic entry ({i}, {j})"),
            });
        }
        b.set_quadratic(i, j, v)?;
    }
    b.set_offset(finite(raw.offset, 0)?)?;
    Ok(b.build())
}

pub fn ising_to_json(model: &IsingModel) -> String {
    let raw = IsingJson {
        num_spins: model.num_spins(),
        fields: model.fields().iter().map(|(&i, &v)| (i, v)).collect(),
        couplings: model
            .couplings()
            .iter()
            .map(|(&(i, j), &v)| (i, j, v))
            .collect(),
        offset: model.offset(),
    };
    serde_json::to_string_pretty(&raw).expect("model serializes")
}

pub fn ising_from_json(text: &str) -> Result<IsingModel> {
    let raw: IsingJson = serde_json::from_str(text)?;
    let mut b = IsingBuilder::new(raw.num_spins);
    for (k, &(i, v)) in raw.fields.iter().enumerate() {
        b.set_field(i, finite(v, k + 1)?)?;
    }
    for (k, &(i, j, v)) in raw.couplings.iter().enumerate() {
        if i >= j {
            return Err(Error::Parse {
                line: k + 1,
                msg: format!("coupling ({i}, {j}) must have i < j"),
            });
        }
        b.set_coupling(i, j, finite(v, k + 1)?)?;
    }
    b.set_offset(finite(raw.offset, 0)?)?;
    Ok(b.build())
}

/// Coordinate text, entries in ascending `(i, j)` order with linear terms as `(i, i)`.
pub fn qubo_to_coordinate(model: &QuboModel) -> String {
    let mut entries: Vec<((usize, usize), f64)> = model
        .linear()
        .iter()
        .map(|(&i, &v)| ((i, i), v))
        .chain(model.quadratic().iter().map(|(&k, &v)| (k, v)))
        .collect();
    entries.sort_by_key(|&(k, _)| k);

    let mut out = String::new();
    writeln!(out, "c l1-qubo coordinate model").unwrap();
    writeln!(out, "n {}", model.num_vars()).unwrap();
    writeln!(out, "o {}", model.offset()).unwrap();
    for ((i, j), v) in entries {
        writeln!(out, "{i} {j} {v}").unwrap();
    }
    out
}

pub fn qubo_from_coordinate(text: &str) -> Result<QuboModel> {
    let parse_err = |line: usize, msg: String| Error::Parse { line, msg };
    let mut builder: Option<QuboBuilder> = None;
    let mut offset: Option<f64> = None;
    let mut seen = BTreeSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        let Some(&head) = tokens.first() else {
            continue;
        };
        match head {
            "c" => continue,
            "n" => {
                if builder.is_some() {
                    return Err(parse_err(line, "duplicate `n` header".into()));
                }
                let [_, n] = tokens[..] else {
                    return Err(parse_err(line, "expected `n <num_vars>`".into()));
                };
                let n: usize = n
                    .parse()
                    .map_err(|e| parse_err(line, format!("bad variable count: {e}")))?;
                builder = Some(QuboBuilder::new(n));
            }
            "o" => {
                if offset.is_some() {
                    return Err(parse_err(line, "duplicate offset line".into()));
                }
                let [_, v] = tokens[..] else {
                    return Err(parse_err(line, "expected `o <offset>`".into()));
                };
                let v: f64 = v
                    .parse()
                    .map_err(|e| parse_err(line, format!("bad offset: {e}")))?;
                offset = Some(finite(v, line)?);
            }
            _ => {
                let b = builder
                    .as_mut()
                    .ok_or_else(|| parse_err(line, "entry before `n` header".into()))?;
                let [i, j, v] = tokens[..] else {
                    return Err(parse_err(line, "expected `i j value`".into()));
                };
                let i: usize = i
                    .parse()
                    .map_err(|e| parse_err(line, format!("bad index: {e}")))?;
                let j: usize = j
                    .parse()
                    .map_err(|e| parse_err(line, format!("bad index: {e}")))?;
                let v: f64 = v
                    .parse()
                    .map_err(|e| parse_err(line, format!("bad value: {e}")))?;
                let v = finite(v, line)?;
                let key = (i.min(j), i.max(j));
                if !seen.insert(key) {
                    return Err(parse_err(
                        line,
                        format!("duplicate entry ({}, {})", key.0, key.1),
                    ));
                }
                let res = if i == j {
                    b.set_linear(i, v).map(|_| ())
                } else {
                    b.set_quadratic(key.0, key.1, v).map(|_| ())
                };
                res.map_err(|e| parse_err(line, e.to_string()))?;
            }
        }
    }

    let mut b =
        builder.ok_or_else(|| parse_err(text.lines().count(), "missing `n` header".into()))?;
    b.set_offset(offset.unwrap_or(0.0))?;
    Ok(b.build())
}

/// Model file format, chosen from the file extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelFormat {
    Json,
    Coordinate,
}

impl ModelFormat {
    /// `.json` is JSON; anything else is coordinate text.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => ModelFormat::Json,
            _ => ModelFormat::Coordinate,
        }
    }
}

pub fn read_qubo(path: &Path) -> Result<QuboModel> {
    let text = fs::read_to_string(path)?;
    match ModelFormat::from_path(path) {
        ModelFormat::Json => qubo_from_json(&text),
        ModelFormat::Coordinate => qubo_from_coordinate(&text),
    }
}

pub fn write_qubo(path: &Path, model: &QuboModel) -> Result<()> {
    let text = match ModelFormat::from_path(path) {
        ModelFormat::Json => qubo_to_json(model),
        ModelFormat::Coordinate => qubo_to_coordinate(model),
    };
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> QuboModel {
        let mut b = QuboBuilder::new(4);
        b.set_linear(0, -2.0).unwrap();
        b.set_linear(3, 0.1).unwrap();
        b.set_quadratic(0, 1, 4.0).unwrap();
        b.set_quadratic(2, 3, -1e-7).unwrap();
        b.set_offset(1.25).unwrap();
        b.build()
    }

    #[test]
    fn json_roundtrip() {
        let m = sample();
        assert_eq!(qubo_from_json(&qubo_to_json(&m)).unwrap(), m);
    }

    #[test]
    fn coordinate_roundtrip() {
        let m = sample();
        let text = qubo_to_coordinate(&m);
        assert_eq!(qubo_from_coordinate(&text).unwrap(), m);
    }

    #[test]
    fn coordinate_writer_is_ordered() {
        let text = qubo_to_coordinate(&sample());
        let body: Vec<&str> = text.lines().skip(3).collect();
        assert_eq!(body, ["0 0 -2", "0 1 4", "2 3 -0.0000001", "3 3 0.1"]);
    }

    #[test]
    fn coordinate_normalizes_reversed_pairs() {
        let m = qubo_from_coordinate("n 3\n2 0 1.5\n").unwrap();
        assert_eq!(m.quadratic().get(&(0, 2)), Some(&1.5));
    }

    #[test]
    fn coordinate_rejects_duplicates_with_line_number() {
        let err = qubo_from_coordinate("c x\nn 2\n0 1 1\n1 0 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
    }

    #[test]
    fn coordinate_rejects_bad_values() {
        for text in ["n 2\n0 1 NaN\n", "n 2\n0 0 inf\n", "n 2\no -inf\n"] {
            assert!(matches!(
                qubo_from_coordinate(text),
                Err(Error::Parse { line: 2, .. })
            ));
        }
        assert!(matches!(
            qubo_from_coordinate("0 1 1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            qubo_from_coordinate("n 2\n0 5 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(qubo_from_coordinate("c only comments\n").is_err());
    }

    #[test]
    fn json_enforces_ordering_and_uniqueness() {
        let bad = r#"{"num_vars": 2, "linear": [], "quadratic": [[1, 0, 1.0]], "offset": 0}"#;
        assert!(matches!(qubo_from_json(bad), Err(Error::Parse { .. })));
        let dup = r#"{"num_vars": 2, "linear": [[0, 1], [0, 2]], "quadratic": [], "offset": 0}"#;
        assert!(matches!(qubo_from_json(dup), Err(Error::Parse { .. })));
        let big = r#"{"num_vars": 1, "linear": [[0, 1e999]], "quadratic": [], "offset": 0}"#;
        assert!(qubo_from_json(big).is_err());
    }

    #[test]
    fn ising_json_roundtrip() {
        let s = sample().to_ising();
        assert_eq!(ising_from_json(&ising_to_json(&s)).unwrap(), s);
    }
}
