//! Builtin groups and their shipped character tables.

use std::sync::Arc;

use serde_json::Value;

use super::perm::Perm;
use super::perm_group::PermGroup;
use super::table::CharacterTable;
use crate::error::{Error, Result};

pub const GROUP_SCHEMA_VERSION: u64 = 1;

fn cycle(points: impl Iterator<Item = usize>) -> String {
    let body: Vec<String> = points.map(|p| p.to_string()).collect();
    format!("({})", body.join(" "))
}

fn named(degree: usize, gens: &[String], name: &str) -> Result<Arc<PermGroup>> {
    let gens: Vec<&str> = gens.iter().map(String::as_str).collect();
    Ok(PermGroup::from_cycle_strings(degree, &gens)?.with_name(name))
}

pub fn symmetric(n: usize) -> Result<Arc<PermGroup>> {
    let gens = if n < 2 { vec![] } else { vec!["(0 1)".to_string(), cycle(0..n)] };
    named(n.max(1), &gens, &format!("S{n}"))
}

pub fn alternating(n: usize) -> Result<Arc<PermGroup>> {
    let gens = match n {
        0..=2 => vec![],
        3 => vec!["(0 1 2)".to_string()],
        _ if n % 2 == 1 => vec!["(0 1 2)".to_string(), cycle(0..n)],
        _ => vec!["(0 1 2)".to_string(), cycle(1..n)],
    };
    named(n.max(1), &gens, &format!("A{n}"))
}

pub fn cyclic(n: usize) -> Result<Arc<PermGroup>> {
    let gens = if n < 2 { vec![] } else { vec![cycle(0..n)] };
    named(n.max(1), &gens, &format!("C{n}"))
}

/// Symmetries of the `n`-gon, of order `2n`.
pub fn dihedral(n: usize) -> Result<Arc<PermGroup>> {
    if n < 3 {
        return Err(Error::Parse(format!("D{n}: the polygon needs at least 3 vertices")));
    }
    let reflection = Perm::from_images((0..n).map(|i| (n - i) % n).collect())?;
    named(n, &[cycle(0..n), reflection.to_string()], &format!("D{n}"))
}

/// GL(3,2) acting on the seven points of the Fano plane, lines `{i, i+1, i+3} mod 7`.
pub fn gl32() -> Result<Arc<PermGroup>> {
    named(7, &["(0 1 2 3 4 5 6)".into(), "(2 4)(5 6)".into()], "GL32")
}

/// `S3`, `S4`, `A5`, `C6`, `D4`, `GL32`, …
pub fn builtin_group(name: &str) -> Result<Arc<PermGroup>> {
    let t = name.trim();
    if t.eq_ignore_ascii_case("GL32") || t.eq_ignore_ascii_case("GL(3,2)") {
        return gl32();
    }
    let unknown = || Error::Parse(format!("unknown builtin group {name:?}"));
    let (kind, digits) = t.split_at(1.min(t.len()));
    let n: usize = digits.parse().map_err(|_| unknown())?;
    if n == 0 || n > 8 {
        return Err(unknown());
    }
    match kind {
        "S" | "s" => symmetric(n),
        "A" | "a" => alternating(n),
        "C" | "c" => cyclic(n),
        "D" | "d" => dihedral(n),
        _ => Err(unknown()),
    }
}

fn table_text(name: &str) -> Option<&'static str> {
    match name {
        "S3" => Some(include_str!("../../fixtures/tables/S3.json")),
        "S4" => Some(include_str!("../../fixtures/tables/S4.json")),
        "S5" => Some(include_str!("../../fixtures/tables/S5.json")),
        "GL32" => Some(include_str!("../../fixtures/tables/GL32.json")),
        _ => None,
    }
}

/// The shipped table for a builtin group, validated against it; `None` when none ships.
pub fn builtin_table(group: &Arc<PermGroup>) -> Option<Result<CharacterTable>> {
    let text = table_text(group.name()?)?;
    Some(CharacterTable::from_json_str(group, text))
}

/// A group file: `{"schema_version": 1, "degree": n, "generators": ["(0 1)", …]}`.
pub fn group_from_json(v: &Value) -> Result<Arc<PermGroup>> {
    let schema = |m: &str| Error::Schema(format!("group file: {m}"));
    match v.get("schema_version").and_then(Value::as_u64) {
        Some(GROUP_SCHEMA_VERSION) => {}
        _ => return Err(schema("missing or unsupported schema_version")),
    }
    let degree = v.get("degree").and_then(Value::as_u64).ok_or_else(|| schema("degree"))? as usize;
    let gens = v
        .get("generators")
        .and_then(Value::as_array)
        .ok_or_else(|| schema("generators"))?
        .iter()
        .map(|g| g.as_str().ok_or_else(|| schema("generator must be a string")))
        .collect::<Result<Vec<_>>>()?;
    let g = PermGroup::from_cycle_strings(degree, &gens)?;
    Ok(match v.get("name").and_then(Value::as_str) {
        Some(name) => g.with_name(name),
        None => g,
    })
}

pub fn group_to_json(g: &PermGroup) -> Value {
    let mut v = serde_json::json!({
        "schema_version": GROUP_SCHEMA_VERSION,
        "degree": g.degree(),
        "generators": g.generators().iter().map(ToString::to_string).collect::<Vec<_>>(),
    });
    if let Some(name) = g.name() {
        v["name"] = Value::String(name.to_string());
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_orders() {
        let cases = [("S3", 6), ("S4", 24), ("S5", 120), ("A4", 12), ("A5", 60), ("C5", 5), ("D4", 8), ("D5", 10), ("GL32", 168)];
        for (name, order) in cases {
            assert_eq!(builtin_group(name).unwrap().order(), order, "{name}");
        }
        assert!(builtin_group("X3").is_err());
        assert!(builtin_group("S").is_err());
    }

    #[test]
    fn gl32_preserves_fano_lines() {
        let g = gl32().unwrap();
        let lines: Vec<Vec<usize>> = (0..7)
            .map(|i| {
                let mut l = vec![i, (i + 1) % 7, (i + 3) % 7];
                l.sort();
                l
            })
            .collect();
        for p in g.generators() {
            for l in &lines {
                let mut image: Vec<usize> = l.iter().map(|&x| p.apply(x)).collect();
                image.sort();
                assert!(lines.contains(&image));
            }
        }
    }

    #[test]
    fn group_file_roundtrip() {
        let g = builtin_group("D4").unwrap();
        let back = group_from_json(&group_to_json(&g)).unwrap();
        assert!(back.same_as(&g));
        assert_eq!(back.name(), Some("D4"));
        assert!(matches!(group_from_json(&serde_json::json!({"degree": 3})), Err(Error::Schema(_))));
    }
}
