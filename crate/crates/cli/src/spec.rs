//! Parsers for the `--group`, `--field`, `--poset` and `--coeff` strings.

use std::path::Path;
use std::sync::Arc;

use serde_json::Value;
use transporter_core::gmodule::rational_irreducibles;
use transporter_core::gposet::{
    barycentric_subdivision, chain_poset, coset_poset, hollow_triangle, p_subgroup_poset, parabolic_orbit_poset,
    point_poset,
};
use transporter_core::group::{fixtures, sylow_p, CharacterTable, Perm};
use transporter_core::inductions::levi_sign_modules;
use transporter_core::presheaf::{atomic_presheaf, constant_presheaf, coset_presheaf, fixed_point_presheaf};
use transporter_core::{Error, Field, GModule, GPoset, GPresheaf, PSubgroupVariant, PermGroup, Subgroup};

use crate::CliError;

pub fn read_json(path: &str) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_string(), e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Core(Error::Schema(format!("{path}: {e}"))))
}

/// A builtin name (`S4`, `GL32`, `D5`, …) or a group file.
pub fn parse_group(src: &str) -> Result<Arc<PermGroup>, CliError> {
    if src.ends_with(".json") || Path::new(src).exists() {
        return Ok(fixtures::group_from_json(&read_json(src)?)?);
    }
    Ok(fixtures::builtin_group(src)?)
}

pub fn parse_field(s: &str) -> Result<Field, CliError> {
    let t = s.trim();
    // accept GF7 as well as GF(7)
    let normalized = match t.strip_prefix("GF").or_else(|| t.strip_prefix("gf")) {
        Some(rest) if !rest.starts_with('(') => format!("GF({rest})"),
        _ => t.to_string(),
    };
    normalized.parse::<Field>().map_err(|e| match e {
        Error::NotPrime(_) => CliError::Core(e),
        other => CliError::Usage(format!("field {s:?}: {other}")),
    })
}

/// An explicit table file, `builtin`, or `None` for the shipped table when there is one.
pub fn parse_table(g: &Arc<PermGroup>, src: Option<&str>) -> Result<Option<CharacterTable>, CliError> {
    match src {
        None | Some("builtin") => match fixtures::builtin_table(g) {
            Some(t) => Ok(Some(t?)),
            None if src.is_some() => Err(CliError::Usage("no builtin table for this group".into())),
            None => Ok(None),
        },
        Some(path) => Ok(Some(CharacterTable::from_json(g, &read_json(path)?)?)),
    }
}

/// `sylow<p>`, `trivial`, `whole`, or generators in cycle notation separated by `;`.
pub fn parse_subgroup(g: &Arc<PermGroup>, s: &str) -> Result<Subgroup, CliError> {
    let t = s.trim();
    if let Some(p) = t.strip_prefix("sylow") {
        let p: usize = p.parse().map_err(|_| CliError::Usage(format!("subgroup {s:?}")))?;
        if !transporter_core::algebra::is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64).into());
        }
        return Ok(sylow_p(g, p));
    }
    match t {
        "trivial" => Ok(Subgroup::trivial(g)),
        "whole" => Ok(Subgroup::whole(g)),
        _ => {
            let gens = t
                .split(';')
                .map(|c| Perm::parse_cycles(c.trim(), g.degree()))
                .collect::<transporter_core::Result<Vec<_>>>()?;
            Ok(Subgroup::from_perms(g, &gens)?)
        }
    }
}

/// A parsed `--poset` together with the subgroup a coset poset was built from.
pub struct PosetSpec {
    pub poset: GPoset,
    pub coset_subgroup: Option<Subgroup>,
}

fn need_group<'a>(g: Option<&'a Arc<PermGroup>>, what: &str) -> Result<&'a Arc<PermGroup>, CliError> {
    g.ok_or_else(|| CliError::Usage(format!("poset {what} needs --group")))
}

fn own_group(g: Option<&Arc<PermGroup>>, what: &str) -> Result<(), CliError> {
    match g {
        Some(_) => Err(CliError::Usage(format!("poset {what} carries its own group; omit --group"))),
        None => Ok(()),
    }
}

/// `Sp:p`, `Sp1:p`, `Bp:p`, `coset:<subgroup>`, `parabolic:<subgroup>`, `point`,
/// `chain:<n>`, `triangle`, `sd:<poset>`, `file:<path>`.
pub fn parse_poset(g: Option<&Arc<PermGroup>>, s: &str) -> Result<PosetSpec, CliError> {
    let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
    let plain = |poset| Ok(PosetSpec { poset, coset_subgroup: None });
    let usage = || CliError::Usage(format!("poset {s:?}"));
    match kind.trim() {
        "Sp" | "Sp1" | "Bp" => {
            let variant: PSubgroupVariant = kind.trim().parse()?;
            let p: usize = arg.trim().parse().map_err(|_| usage())?;
            plain(p_subgroup_poset(need_group(g, s)?, p, variant)?)
        }
        "coset" => {
            let g = need_group(g, s)?;
            let h = parse_subgroup(g, arg)?;
            Ok(PosetSpec {
                poset: coset_poset(g, &h)?,
                coset_subgroup: Some(h),
            })
        }
        "parabolic" => {
            let g = need_group(g, s)?;
            plain(parabolic_orbit_poset(g, &parse_subgroup(g, arg)?)?)
        }
        "point" => plain(point_poset(need_group(g, s)?)?),
        "chain" => {
            own_group(g, s)?;
            plain(chain_poset(arg.trim().parse().map_err(|_| usage())?)?)
        }
        "triangle" => {
            own_group(g, s)?;
            plain(hollow_triangle()?)
        }
        "sd" => {
            let inner = parse_poset(g, arg)?;
            plain(barycentric_subdivision(&inner.poset)?.poset)
        }
        "file" => plain(GPoset::from_json(need_group(g, s)?, &read_json(arg)?)?),
        _ => Err(usage()),
    }
}

fn sign_module(g: &Arc<PermGroup>, field: Field) -> transporter_core::Result<GModule> {
    let values: Vec<i64> = g
        .generators()
        .iter()
        .map(|p| {
            let transpositions: usize = p.cycles().iter().map(|c| c.len().saturating_sub(1)).sum();
            if transpositions.is_multiple_of(2) { 1 } else { -1 }
        })
        .collect();
    GModule::linear(g, field, &values)
}

/// `trivial`, `regular`, `natural`, `sign`, `irr<k>`, `linear:<a,b,…>`,
/// `coset:<subgroup>`, `file:<path>`.
pub fn parse_module(g: &Arc<PermGroup>, field: Field, s: &str) -> Result<GModule, CliError> {
    let t = s.trim();
    let usage = || CliError::Usage(format!("module {s:?}"));
    if let Some(k) = t.strip_prefix("irr") {
        let k: usize = k.parse().map_err(|_| usage())?;
        if !field.is_rational() {
            return Err(Error::UnsupportedField(field).into());
        }
        return rational_irreducibles(g)?
            .into_iter()
            .nth(k)
            .ok_or_else(|| CliError::Usage(format!("only irreducibles irr0.. exist; got {s:?}")));
    }
    let (kind, arg) = t.split_once(':').unwrap_or((t, ""));
    Ok(match kind {
        "trivial" => GModule::trivial(g, field),
        "regular" => GModule::regular(g, field),
        "natural" => GModule::natural(g, field)?,
        "sign" => sign_module(g, field)?,
        "linear" => {
            let values = arg
                .split(',')
                .map(|v| v.trim().parse::<i64>().map_err(|_| usage()))
                .collect::<Result<Vec<_>, _>>()?;
            GModule::linear(g, field, &values)?
        }
        "coset" => GModule::coset(&parse_subgroup(g, arg)?, field)?,
        "file" => {
            let m = GModule::from_json(g, &read_json(arg)?)?;
            if m.field() != field {
                return Err(Error::FieldMismatch(m.field(), field).into());
            }
            m
        }
        _ => return Err(usage()),
    })
}

/// A module of `N_G(v)`: `levi-sign<k>` picks the `k`-th `±1` character trivial on `v`.
pub fn parse_levi_module(v: &Subgroup, field: Field, s: &str) -> Result<GModule, CliError> {
    if let Some(k) = s.trim().strip_prefix("levi-sign") {
        let k: usize = k.parse().map_err(|_| CliError::Usage(format!("module {s:?}")))?;
        return levi_sign_modules(v)?
            .into_iter()
            .nth(k)
            .ok_or_else(|| CliError::Usage(format!("no Levi sign character {k}")));
    }
    parse_module(v.normalizer().as_group(), field, s)
}

/// Strips an optional `constant:` so module-taking commands accept both forms.
pub fn module_part(coeff: &str) -> &str {
    coeff.strip_prefix("constant:").unwrap_or(coeff)
}

/// `constant:<module>`, `fixed:<module>`, `induced:<module of H>` on a coset poset,
/// `atomic:<x>:<module of G_x>`, `file:<path>`.
pub fn parse_presheaf(spec: &PosetSpec, field: Field, s: &str) -> Result<GPresheaf, CliError> {
    let p = &spec.poset;
    let g = p.group();
    let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
    match kind.trim() {
        "constant" => Ok(constant_presheaf(p, &parse_module(g, field, arg)?)?),
        "fixed" => Ok(fixed_point_presheaf(p, &parse_module(g, field, arg)?)?),
        "induced" => {
            let h = spec
                .coset_subgroup
                .as_ref()
                .ok_or_else(|| CliError::Usage("induced coefficients need a coset poset".into()))?;
            Ok(coset_presheaf(g, h, &parse_module(h.as_group(), field, arg)?)?)
        }
        "atomic" => {
            let (x, m) = arg
                .split_once(':')
                .ok_or_else(|| CliError::Usage(format!("coefficients {s:?}: atomic:<x>:<module>")))?;
            let x: usize = x.trim().parse().map_err(|_| CliError::Usage(format!("coefficients {s:?}")))?;
            if x >= p.len() {
                return Err(CliError::Usage(format!("poset has no element {x}")));
            }
            let stab = p.stabilizer(x);
            Ok(atomic_presheaf(p, x, &parse_module(stab.as_group(), field, m)?)?)
        }
        "file" => Ok(GPresheaf::from_json(p, &read_json(arg)?)?),
        _ => Err(CliError::Usage(format!("coefficients {s:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_spellings() {
        assert!(parse_field("Q").unwrap().is_rational());
        assert_eq!(parse_field("GF7").unwrap(), parse_field("GF(7)").unwrap());
        assert!(matches!(parse_field("GF(4)"), Err(CliError::Core(Error::NotPrime(4)))));
        assert!(matches!(parse_field("R"), Err(CliError::Usage(_))));
    }

    #[test]
    fn subgroups_by_name_and_generators() {
        let g = fixtures::symmetric(4).unwrap();
        assert_eq!(parse_subgroup(&g, "sylow2").unwrap().order(), 8);
        assert_eq!(parse_subgroup(&g, "(0 1)(2 3);(0 2)(1 3)").unwrap().order(), 4);
        assert_eq!(parse_subgroup(&g, "whole").unwrap().order(), 24);
        assert!(parse_subgroup(&g, "sylow6").is_err());
    }

    #[test]
    fn posets_check_the_group_flag() {
        let g = fixtures::symmetric(3).unwrap();
        assert_eq!(parse_poset(Some(&g), "Sp:2").unwrap().poset.len(), 3);
        assert!(parse_poset(Some(&g), "coset:sylow3").unwrap().coset_subgroup.is_some());
        assert!(matches!(parse_poset(None, "Sp:2"), Err(CliError::Usage(_))));
        assert!(matches!(parse_poset(Some(&g), "triangle"), Err(CliError::Usage(_))));
        assert_eq!(parse_poset(None, "sd:chain:2").unwrap().poset.len(), 3);
    }

    #[test]
    fn presheaf_kinds() {
        let g = fixtures::symmetric(3).unwrap();
        let spec = parse_poset(Some(&g), "Sp:2").unwrap();
        let f = parse_presheaf(&spec, Field::Rational, "constant:natural").unwrap();
        assert_eq!(f.dim(0), 3);
        assert!(parse_presheaf(&spec, Field::Rational, "induced:trivial").is_err());
        assert!(parse_presheaf(&spec, Field::Rational, "atomic:9:trivial").is_err());
        assert_eq!(module_part("constant:sign"), "sign");
    }
}
