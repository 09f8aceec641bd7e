use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::class_function::{tolerance, CharValue, ClassFunction};
use super::perm::Perm;
use super::perm_group::PermGroup;
use crate::algebra::format_rational;
use crate::error::{Error, Result};

pub const TABLE_SCHEMA_VERSION: u64 = 1;

/// Irreducible characters of a group, loaded from data and checked for
/// orthonormality.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    group: Arc<PermGroup>,
    names: Vec<String>,
    irreducibles: Vec<ClassFunction>,
}

impl CharacterTable {
    pub fn new(group: &Arc<PermGroup>, names: Vec<String>, irreducibles: Vec<ClassFunction>) -> Result<CharacterTable> {
        if names.len() != irreducibles.len() {
            return Err(Error::InvalidTable("one name per character".into()));
        }
        if irreducibles.len() != group.num_classes() {
            return Err(Error::InvalidTable(format!(
                "{} characters for {} classes",
                irreducibles.len(),
                group.num_classes()
            )));
        }
        let tol = tolerance();
        for (i, a) in irreducibles.iter().enumerate() {
            if !a.group().same_as(group) {
                return Err(Error::InvalidTable(format!("{} is on another group", names[i])));
            }
            for (j, b) in irreducibles.iter().enumerate() {
                let (re, im) = a.inner(b)?;
                let want = if i == j { BigRational::one() } else { BigRational::zero() };
                if (re - want).abs() > tol || im.abs() > tol {
                    return Err(Error::InvalidTable(format!(
                        "characters {} and {} are not orthonormal",
                        names[i], names[j]
                    )));
                }
            }
        }
        Ok(CharacterTable {
            group: group.clone(),
            names,
            irreducibles,
        })
    }

    pub fn from_json_str(group: &Arc<PermGroup>, text: &str) -> Result<CharacterTable> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        CharacterTable::from_json(group, &v)
    }

    /// Class columns in the file are matched to the group's classes through
    /// their representatives, and the recorded sizes must agree.
    pub fn from_json(group: &Arc<PermGroup>, v: &Value) -> Result<CharacterTable> {
        let schema = |m: &str| Error::Schema(format!("character table: {m}"));
        match v.get("schema_version").and_then(Value::as_u64) {
            Some(TABLE_SCHEMA_VERSION) => {}
            _ => return Err(schema("missing or unsupported schema_version")),
        }
        let classes = v.get("classes").and_then(Value::as_array).ok_or_else(|| schema("classes"))?;
        let sizes = group.class_sizes();
        let mut column_class = Vec::with_capacity(classes.len());
        let mut used = vec![false; group.num_classes()];
        for c in classes {
            let rep = c.get("representative").and_then(Value::as_str).ok_or_else(|| schema("representative"))?;
            let size = c.get("size").and_then(Value::as_u64).ok_or_else(|| schema("size"))?;
            let perm = Perm::parse_cycles(rep, group.degree())?;
            let idx = group
                .index_of(&perm)
                .ok_or_else(|| Error::InvalidTable(format!("{rep} is not in the group")))?;
            let k = group.class_of(idx);
            if sizes[k] as u64 != size {
                return Err(Error::InvalidTable(format!(
                    "class of {rep} has size {} but the table says {size}",
                    sizes[k]
                )));
            }
            if std::mem::replace(&mut used[k], true) {
                return Err(Error::InvalidTable(format!("class of {rep} listed twice")));
            }
            column_class.push(k);
        }
        if column_class.len() != group.num_classes() {
            return Err(Error::InvalidTable("not every class is listed".into()));
        }
        let chars = v.get("characters").and_then(Value::as_array).ok_or_else(|| schema("characters"))?;
        let mut names = Vec::new();
        let mut irreducibles = Vec::new();
        for (i, ch) in chars.iter().enumerate() {
            let name = ch
                .get("name")
                .and_then(Value::as_str)
                .map(str::to_string)
                .unwrap_or_else(|| format!("chi{}", i + 1));
            let vals = ch.get("values").and_then(Value::as_array).ok_or_else(|| schema("values"))?;
            if vals.len() != column_class.len() {
                return Err(Error::InvalidTable(format!("{name} has {} values", vals.len())));
            }
            let mut values = vec![CharValue::zero(); group.num_classes()];
            for (col, val) in vals.iter().enumerate() {
                values[column_class[col]] = CharValue::from_json(val)?;
            }
            names.push(name);
            irreducibles.push(ClassFunction::new(group, values)?);
        }
        CharacterTable::new(group, names, irreducibles)
    }

    pub fn to_json(&self) -> Value {
        let classes: Vec<Value> = self
            .group
            .classes()
            .iter()
            .map(|c| json!({ "representative": self.group.element(c[0]).to_string(), "size": c.len() }))
            .collect();
        let chars: Vec<Value> = self
            .names
            .iter()
            .zip(&self.irreducibles)
            .map(|(n, c)| json!({ "name": n, "values": c.to_json() }))
            .collect();
        json!({ "schema_version": TABLE_SCHEMA_VERSION, "classes": classes, "characters": chars })
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn irreducibles(&self) -> &[ClassFunction] {
        &self.irreducibles
    }

    pub fn len(&self) -> usize {
        self.irreducibles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreducibles.is_empty()
    }

    /// Multiplicities `⟨chi, irr_i⟩`, rounded once each is within tolerance of an integer.
    pub fn decompose(&self, chi: &ClassFunction) -> Result<Vec<i64>> {
        let tol = tolerance();
        self.irreducibles
            .iter()
            .zip(&self.names)
            .map(|(irr, name)| {
                let (re, im) = chi.inner(irr)?;
                let rounded = re.round();
                if (&re - &rounded).abs() > tol || im.abs() > tol {
                    return Err(Error::NotVirtualCharacter {
                        name: name.clone(),
                        value: format_rational(&re),
                    });
                }
                let n: BigInt = rounded.to_integer();
                i64::try_from(n).map_err(|_| Error::Internal("multiplicity overflow".into()))
            })
            .collect()
    }

    /// `Σ m_i irr_i`
    pub fn compose(&self, multiplicities: &[i64]) -> Result<ClassFunction> {
        if multiplicities.len() != self.len() {
            return Err(Error::DimensionMismatch("one multiplicity per irreducible".into()));
        }
        let mut acc = ClassFunction::zero(&self.group);
        for (m, irr) in multiplicities.iter().zip(&self.irreducibles) {
            acc = acc.add(&irr.scale_int(*m))?;
        }
        Ok(acc)
    }
}

pub fn decompose(chi: &ClassFunction, table: &CharacterTable) -> Result<Vec<i64>> {
    table.decompose(chi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::fixtures;

    #[test]
    fn shipped_tables_validate() {
        for name in ["S3", "S4", "S5", "GL32"] {
            let g = fixtures::builtin_group(name).unwrap();
            let t = fixtures::builtin_table(&g).unwrap().unwrap();
            assert_eq!(t.len(), g.num_classes(), "{name}");
            let degrees: i64 = t
                .irreducibles()
                .iter()
                .map(|c| {
                    let d = c.degree().as_rational().unwrap().to_integer();
                    i64::try_from(d * c.degree().as_rational().unwrap().to_integer()).unwrap()
                })
                .sum();
            assert_eq!(degrees as usize, g.order(), "{name}: sum of squared degrees");
        }
    }

    #[test]
    fn decompose_examples() {
        let g = fixtures::builtin_group("S3").unwrap();
        let t = fixtures::builtin_table(&g).unwrap().unwrap();
        assert_eq!(t.decompose(&ClassFunction::regular(&g)).unwrap(), vec![1, 1, 2]);
        assert_eq!(t.decompose(&ClassFunction::zero(&g)).unwrap(), vec![0, 0, 0]);
        assert_eq!(t.decompose(&ClassFunction::trivial(&g)).unwrap(), vec![1, 0, 0]);
        let half = ClassFunction::regular(&g).scale(&BigRational::new(1.into(), 4.into()));
        assert!(matches!(t.decompose(&half), Err(Error::NotVirtualCharacter { .. })));
        let virt = t.compose(&[1, -2, 0]).unwrap();
        assert_eq!(t.decompose(&virt).unwrap(), vec![1, -2, 0]);
    }

    #[test]
    fn rejects_broken_tables() {
        let g = fixtures::builtin_group("S3").unwrap();
        let bad_values = r#"{"schema_version":1,"classes":[{"representative":"()","size":1},{"representative":"(0 1)","size":3},{"representative":"(0 1 2)","size":2}],
            "characters":[{"name":"a","values":["1","1","1"]},{"name":"b","values":["1","1","1"]},{"name":"c","values":["2","0","-1"]}]}"#;
        assert!(matches!(CharacterTable::from_json_str(&g, bad_values), Err(Error::InvalidTable(_))));
        let bad_size = bad_values.replace("\"size\":3", "\"size\":2");
        assert!(matches!(CharacterTable::from_json_str(&g, &bad_size), Err(Error::InvalidTable(_))));
        assert!(matches!(CharacterTable::from_json_str(&g, "{"), Err(Error::Schema(_))));
        assert!(matches!(CharacterTable::from_json_str(&g, "{}"), Err(Error::Schema(_))));
    }

    #[test]
    fn gl32_complex_pair_decomposes() {
        let g = fixtures::builtin_group("GL32").unwrap();
        let t = fixtures::builtin_table(&g).unwrap().unwrap();
        // three ⊗ three_bar = trivial + eight
        let prod = t.irreducibles()[1].mul(&t.irreducibles()[2]).unwrap();
        assert_eq!(t.decompose(&prod).unwrap(), vec![1, 0, 0, 0, 0, 1]);
    }
}
