use std::sync::Arc;

use serde_json::{json, Map, Value};
use transporter_core::gmodule::{rational_irreducibles, IRREDUCIBLE_ORDER_BOUND};
use transporter_core::group::fixtures::group_to_json;
use transporter_core::homology::{build_complex, homology, subdivision_compare};
use transporter_core::inductions::{
    alvis_curtis, alvis_curtis_on, harish_chandra_induce, induction_span_check, lk_pi, simple_formula_check,
    steinberg, steinberg_twist_check, summand_check, VirtualClass,
};
use transporter_core::{CharacterTable, Field, GModule, PermGroup};

use crate::spec::{self, PosetSpec};
use crate::{Command, CliError, Job, Outcome, REPORT_SCHEMA_VERSION};

struct Ctx {
    group: Option<Arc<PermGroup>>,
    field: Field,
}

impl Ctx {
    fn new(job: &Job) -> Result<Ctx, CliError> {
        Ok(Ctx {
            group: job.group.as_deref().map(spec::parse_group).transpose()?,
            field: spec::parse_field(&job.field)?,
        })
    }

    fn group(&self) -> Result<&Arc<PermGroup>, CliError> {
        self.group
            .as_ref()
            .ok_or_else(|| CliError::Usage("this command needs --group".into()))
    }

    fn poset(&self, job: &Job) -> Result<PosetSpec, CliError> {
        let s = job
            .poset
            .as_deref()
            .ok_or_else(|| CliError::Usage("this command needs --poset".into()))?;
        spec::parse_poset(self.group.as_ref(), s)
    }

    fn rational(&self) -> Result<(), CliError> {
        if self.field.is_rational() {
            Ok(())
        } else {
            Err(transporter_core::Error::UnsupportedField(self.field).into())
        }
    }
}

fn inputs(name: &str, job: &Job) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), json!(name));
    m.insert("field".into(), json!(job.field));
    let mut put = |k: &str, v: Option<Value>| {
        if let Some(v) = v {
            m.insert(k.into(), v);
        }
    };
    put("group", job.group.as_ref().map(|s| json!(s)));
    put("poset", job.poset.as_ref().map(|s| json!(s)));
    put("coeff", job.coeff.as_ref().map(|s| json!(s)));
    put("table", job.table.as_ref().map(|s| json!(s)));
    put("element", job.element.map(|x| json!(x)));
    put("subgroup", job.subgroup.as_ref().map(|s| json!(s)));
    put("prime", job.prime.map(|p| json!(p)));
    Value::Object(m)
}

fn outcome(name: &str, job: &Job, result: Value, passed: Option<bool>, summary: String) -> Outcome {
    let mut report = json!({
        "schema_version": REPORT_SCHEMA_VERSION,
        "inputs": inputs(name, job),
        "result": result,
    });
    if let Some(p) = passed {
        report["passed"] = json!(p);
    }
    let verdict = match passed {
        Some(true) => " [pass]",
        Some(false) => " [FAIL]",
        None => "",
    };
    Outcome {
        report,
        passed,
        summary: format!("{name}: {summary}{verdict}"),
    }
}

fn degree_string(c: &VirtualClass) -> String {
    c.degree()
        .map(|d| d.to_string())
        .unwrap_or_else(|| "?".into())
}

fn class_json(c: VirtualClass, table: Option<&CharacterTable>) -> Result<Value, CliError> {
    Ok(match table {
        Some(t) => c.with_table(t)?.to_json(),
        None => c.to_json(),
    })
}

fn table_for(ctx: &Ctx, job: &Job, group: &Arc<PermGroup>) -> Result<Option<CharacterTable>, CliError> {
    if !ctx.field.is_rational() {
        return Ok(None);
    }
    spec::parse_table(group, job.table.as_deref())
}

pub fn dispatch(command: &Command) -> Result<Outcome, CliError> {
    let job = crate::job(command);
    let ctx = Ctx::new(job)?;
    match command {
        Command::GroupInfo(_) => group_info(&ctx, job),
        Command::PosetBuild(_) => poset_build(&ctx, job),
        Command::Homology(_) => homology_cmd(&ctx, job),
        Command::LkPi(_) => lk_pi_cmd(&ctx, job),
        Command::Steinberg(_) => steinberg_cmd(&ctx, job),
        Command::Thm31(_) => thm31(&ctx, job),
        Command::Cor54(_) => cor54(&ctx, job),
        Command::SimpleFormula(_) => simple_formula(&ctx, job),
        Command::HcInduce(_) => hc_induce(&ctx, job),
        Command::AlvisCurtis(_) => alvis_curtis_cmd(&ctx, job),
        Command::SpanCheck(_) => span_check(&ctx, job),
        Command::SubdivisionCompare(_) => subdivision(&ctx, job),
    }
}

fn group_info(ctx: &Ctx, job: &Job) -> Result<Outcome, CliError> {
    let g = ctx.group()?;
    let sizes = g.class_sizes();
    let classes: Vec<Value> = g
        .class_representatives()
        .iter()
        .zip(&sizes)
        .map(|(&r, &n)| json!({ "representative": g.element(r).to_string(), "size": n, "order": g.element_order(r) }))
        .collect();
    let mut result = json!({
        "group": group_to_json(g),
        "order": g.order(),
        "classes": classes,
    });
    if let Some(t) = table_for(ctx, job, g)? {
        result["table"] = t.to_json();
    }
    if g.order() <= IRREDUCIBLE_ORDER_BOUND {
        let degrees: Vec<usize> = rational_irreducibles(g)?.iter().map(GModule::dim).collect();
        result["rational_irreducible_degrees"] = json!(degrees);
    }
    let summary = format!("order {}, {} classes", g.order(), sizes.len());
    Ok(outcome("group-info", job, result, None, summary))
}

fn poset_build(ctx: &Ctx, job: &Job) -> Result<Outcome, CliError> {
    let p = ctx.poset(job)?.poset;
    let chains: Vec<usize> = p.chains().iter().map(Vec::len).collect();
    let result = json!({
        "poset": p.to_json(),
        "size": p.len(),
        "orbits": p.orbit_representatives().len(),
        "components": p.connected_components().len(),
        "component_orbits": p.component_orbit_count(),
        "chains_by_length": chains,
    });
    let summary = format!("{} elements, {} orbits", p.len(), p.orbit_representatives().len());
    Ok(outcome("poset-build", job, result, None, summary))
}

fn presheaf(ctx: &Ctx, job: &Job, spec: &PosetSpec) -> Result<transporter_core::GPresheaf, CliError> {
    spec::parse_presheaf(spec, ctx.field, job.coeff.as_deref().unwrap_or("constant:trivial"))
}

fn module(ctx: &Ctx, job: &Job, g: &Arc<PermGroup>) -> Result<GModule, CliError> {
    spec::parse_module(g, ctx.field, spec::module_part(job.coeff.as_deref().unwrap_or("trivial")))
}

fn homology_cmd(ctx: &Ctx, job: &Job) -> Result<Outcome, CliError> {
    let ps = ctx.poset(job)?;
    let f = presheaf(ctx, job, &ps)?;
    let g = ps.poset.group().clone();
    let complex = build_complex(&f)?;
    let invariants = complex.check_invariants();
    let h = homology(&complex)?;
    let table = table_for(ctx, job, &g)?;
    let mut result = h.to_json(table.as_ref())?;
    result["chain_dims"] = json!(complex.dims());
    result["invariants"] = json!(invariants.as_ref().map(|_| "ok".to_string()).unwrap_or_else(|e| e.to_string()));
    let mut passed = invariants.is_ok() && complex.euler_characteristic() == h.euler_characteristic();
    if ctx.field.is_rational() {
        let chain = complex.lefschetz_character()?;
        let hom = h.lefschetz_character(&g)?;
        passed &= chain == hom;
        result["lefschetz"] = chain.to_json();
    }
    let dims: Vec<String> = h.dims().iter().map(|(d, n)| format!("H_{d}={n}")).collect();
    Ok(outcome("homology", job, result, Some(passed), dims.join(" ")))
}

fn lk_pi_cmd(ctx: &Ctx, job: &Job) -> Result<Outcome, CliError> {
    ctx.rational()?;
    let ps = ctx.poset(job)?;
    let f = presheaf(ctx, job, &ps)?;
    let class = lk_pi(&f)?;
    let summary = format!("degree {}", degree_string(&class));
    let table = table_for(ctx, job, ps.poset.group())?;
    let result = json!({ "class": class_json(class, table.as_ref())? });
    Ok(outcome("lk-pi", job, result, None, summary))
}

fn steinberg_cmd(ctx: &Ctx, job: &Job) -> Result<Outcome, CliError> {
    ctx.rational()?;
    let p = ctx.poset(job)?.poset;
    let st = steinberg(&p)?;
    let degree = st.degree().map(|d| d.to_string());
    let summary = format!("identity value {}", degree_string(&st));
    let table = table_for(ctx, job, p.group())?;
    let result = json!({ "class": class_json(st, table.as_ref())?, "identity_value": degree });
    Ok(outcome("steinberg", job, result, None, summary))
}

fn thm31(ctx: &Ctx, job: &Job) -> Result<Outcome, CliError> {
    let p = ctx.poset(job)?.poset;
    let m = module(ctx, job, p.group())?;
    let table = table_for(ctx, job, p.group())?;
    let r = summand_check(&p, &m, table.as_ref())?;
    let summary = format!("dim H_0 {} (expected {}), summand {}", r.h0_dimension, r.expected_dimension, r.summand);
    Ok(outcome("thm31", job, r.to_json(), Some(r.passed), summary))
}

fn cor54(ctx: &Ctx, job: &Job) -> Result<Outcome, CliError> {
    ctx.rational()?;
    let p = ctx.poset(job)?.poset;
    let m = module(ctx, job, p.group())?;
    let table = table_for(ctx, job, p.group())?;
    let r = steinberg_twist_check(&p, &m, table.as_ref())?;
    let summary = format!("both sides of degree {}", degree_string(&r.lhs));
    Ok(outcome("cor54", job, r.to_json(), Some(r.passed), summary))
}

fn simple_formula(ctx: &Ctx, job: &Job) -> Result<Outcome, CliError> {
    ctx.rational()?;
    let p = ctx.poset(job)?.poset;
    let elements = match job.element {
        Some(x) if x < p.len() => vec![x],
        Some(x) => return Err(CliError::Usage(format!("poset has no element {x}"))),
        None => p.orbit_representatives(),
    };
    let mut checks = Vec::new();
    let mut passed = true;
    for x in elements {
        let stab = p.stabilizer(x);
        let modules = match &job.coeff {
            Some(c) => vec![spec::parse_module(stab.as_group(), ctx.field, spec::module_part(c))?],
            None => rational_irreducibles(stab.as_group())?,
        };
        for (k, v) in modules.iter().enumerate() {
            let r = simple_formula_check(&p, x, v)?;
            passed &= r.passed;
            let mut entry = r.to_json();
            entry["label"] = json!(p.label(x));
            entry["module"] = json!(k);
            checks.push(entry);
        }
    }
    let summary = format!("{} cases", checks.len());
    Ok(outcome("simple-formula", job, json!({ "checks": checks }), Some(passed), summary))
}

fn hc_induce(ctx: &Ctx, job: &Job) -> Result<Outcome, CliError> {
    ctx.rational()?;
    let g = ctx.group()?;
    let s = job
        .subgroup
        .as_deref()
        .ok_or_else(|| CliError::Usage("hc-induce needs --subgroup".into()))?;
    let v = spec::parse_subgroup(g, s)?;
    let n = spec::parse_levi_module(&v, ctx.field, spec::module_part(job.coeff.as_deref().unwrap_or("trivial")))?;
    let table = table_for(ctx, job, g)?;
    let r = harish_chandra_induce(&v, &n)?;
    let passed = r.passed();
    let summary = format!("orbit of {}, degree {}", r.orbit_size, degree_string(&r.homology_class));
    let mut result = r.to_json();
    result["homology_class"] = class_json(r.homology_class, table.as_ref())?;
    Ok(outcome("hc-induce", job, result, Some(passed), summary))
}

fn alvis_curtis_cmd(ctx: &Ctx, job: &Job) -> Result<Outcome, CliError> {
    ctx.rational()?;
    let g = ctx.group()?;
    let m = module(ctx, job, g)?;
    let table = table_for(ctx, job, g)?;
    let r = match (&job.poset, job.prime) {
        (Some(_), None) => alvis_curtis_on(&ctx.poset(job)?.poset, &m, table.as_ref())?,
        (None, p) => alvis_curtis(&m, p.unwrap_or(2), table.as_ref())?,
        (Some(_), Some(_)) => return Err(CliError::Usage("give either --poset or --prime".into())),
    };
    let sign = match r.steinberg_sign {
        Some(1) => "+St",
        Some(_) => "−St",
        None => "not ±St",
    };
    let summary = format!("degree {}, {sign}", degree_string(&r.dual));
    let passed = r.consistent();
    Ok(outcome("alvis-curtis", job, r.to_json(), Some(passed), summary))
}

fn span_check(ctx: &Ctx, job: &Job) -> Result<Outcome, CliError> {
    ctx.rational()?;
    let p = ctx.poset(job)?.poset;
    let table = table_for(ctx, job, p.group())?
        .ok_or_else(|| CliError::Usage("span-check needs a character table".into()))?;
    let r = induction_span_check(&p, &table)?;
    let summary = format!("rank {} of {}, lattice spanned: {}", r.rank, table.len(), r.spans_lattice);
    Ok(outcome("span-check", job, r.to_json(), None, summary))
}

fn subdivision(ctx: &Ctx, job: &Job) -> Result<Outcome, CliError> {
    let ps = ctx.poset(job)?;
    let f = presheaf(ctx, job, &ps)?;
    let cmp = subdivision_compare(&ps.poset, &f)?;
    let agree = cmp.agree()?;
    let table = table_for(ctx, job, ps.poset.group())?;
    let result = json!({
        "original": cmp.original.to_json(table.as_ref())?,
        "subdivided": cmp.subdivided.to_json(table.as_ref())?,
        "agree": agree,
    });
    let summary = format!("{} degrees compared", cmp.original.groups.len());
    Ok(outcome("subdivision-compare", job, result, Some(agree), summary))
}
