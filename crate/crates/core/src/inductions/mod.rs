//! Inductions realized as homology: `lk_π`, `r_π`, generalized Steinberg classes,
//! Harish-Chandra induction and the Alvis–Curtis operator.

mod lattice;

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::algebra::{Field, Matrix};
use crate::error::{Error, Result};
use crate::gmodule::{linear_sign_characters, rational_irreducibles, GModule};
use crate::gposet::{p_subgroup_poset, parabolic_orbit_poset, GPoset, PSubgroupVariant};
use crate::group::{induce_class_function, CharacterTable, ClassFunction, PermGroup, Subgroup};
use crate::homology::{build_complex, homology, lowest_homology, reduced_complex};
use crate::presheaf::{atomic_presheaf, constant_presheaf, fixed_point_presheaf, GPresheaf};

pub use lattice::{hermite_rows, spans_full_lattice};

pub const REPORT_SCHEMA_VERSION: u64 = 1;

/// An element of the Grothendieck group, kept as its class function with
/// optional coordinates in a table's irreducibles.
#[derive(Clone, Debug, PartialEq)]
pub struct VirtualClass {
    character: ClassFunction,
    coordinates: Option<Vec<i64>>,
}

impl VirtualClass {
    pub fn new(character: ClassFunction) -> VirtualClass {
        VirtualClass {
            character,
            coordinates: None,
        }
    }

    /// Attaches multiplicities and checks that they rebuild the class function.
    pub fn with_table(mut self, table: &CharacterTable) -> Result<VirtualClass> {
        let coords = table.decompose(&self.character)?;
        let rebuilt = table.compose(&coords)?;
        if !rebuilt.approx_eq(&self.character, &crate::group::tolerance()) {
            return Err(Error::NotVirtualCharacter {
                name: "class".into(),
                value: "not in the span of the table".into(),
            });
        }
        self.coordinates = Some(coords);
        Ok(self)
    }

    pub fn character(&self) -> &ClassFunction {
        &self.character
    }

    pub fn coordinates(&self) -> Option<&[i64]> {
        self.coordinates.as_deref()
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        self.character.group()
    }

    /// Value at the identity, when it is rational.
    pub fn degree(&self) -> Option<BigRational> {
        self.character.degree().as_rational().cloned()
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "character": self.character.to_json() });
        if let Some(c) = &self.coordinates {
            v["coordinates"] = json!(c);
        }
        v
    }
}

fn require_rational(field: Field) -> Result<()> {
    if field.is_rational() {
        Ok(())
    } else {
        Err(Error::UnsupportedField(field))
    }
}

fn with_optional_table(class: VirtualClass, table: Option<&CharacterTable>) -> Result<VirtualClass> {
    match table {
        Some(t) => class.with_table(t),
        None => Ok(class),
    }
}

/// `[F] ↦ Σ (−1)^i [H_i(P;F)]`, read off chain-level traces.
pub fn lk_pi(f: &GPresheaf) -> Result<VirtualClass> {
    require_rational(f.field())?;
    Ok(VirtualClass::new(build_complex(f)?.lefschetz_character()?))
}

/// Restriction along `P⋊G → G`: the constant presheaf.
pub fn r_pi(m: &GModule, p: &GPoset) -> Result<GPresheaf> {
    constant_presheaf(p, m)
}

/// `St_P(G) = lk_π(κ_R) − [R]`
pub fn steinberg(p: &GPoset) -> Result<VirtualClass> {
    let g = p.group();
    let lk = lk_pi(&r_pi(&GModule::trivial(g, Field::Rational), p)?)?;
    Ok(VirtualClass::new(lk.character.sub(&ClassFunction::trivial(g))?))
}

/// Elements of `g` carrying `set` onto itself.
fn setwise_stabilizer(p: &GPoset, set: &[usize]) -> Result<Subgroup> {
    let g = p.group();
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    let members: Vec<usize> = (0..g.order())
        .filter(|&e| sorted.binary_search(&p.act(e, sorted[0])).is_ok())
        .collect();
    Subgroup::from_members(g, &members)
}

#[derive(Clone, Debug)]
pub struct SummandReport {
    pub components: usize,
    pub component_stabilizer_order: usize,
    pub h0_dimension: usize,
    pub expected_dimension: usize,
    /// character comparisons, present in characteristic zero
    pub h0_character: Option<ClassFunction>,
    pub expected_character: Option<ClassFunction>,
    pub matches_module: Option<bool>,
    pub summand: bool,
    pub summand_method: &'static str,
    pub passed: bool,
}

impl SummandReport {
    pub fn to_json(&self) -> Value {
        json!({
            "components": self.components,
            "component_stabilizer_order": self.component_stabilizer_order,
            "h0_dimension": self.h0_dimension,
            "expected_dimension": self.expected_dimension,
            "h0_character": self.h0_character.as_ref().map(ClassFunction::to_json),
            "expected_character": self.expected_character.as_ref().map(ClassFunction::to_json),
            "matches_module": self.matches_module,
            "summand": self.summand,
            "summand_method": self.summand_method,
            "passed": self.passed,
        })
    }
}

/// `H_0(P;κ_M) ≅ R(G/H) ⊗ M` with `H` the stabilizer of one component, which is
/// `M` itself when `P` is connected.
pub fn summand_check(p: &GPoset, m: &GModule, table: Option<&CharacterTable>) -> Result<SummandReport> {
    let orbits = p.component_orbit_count();
    if orbits != 1 {
        return Err(Error::Disconnected(orbits));
    }
    let comps = p.connected_components();
    let h = setwise_stabilizer(p, &comps[0])?;
    let index = h.index();
    let h0 = lowest_homology(&build_complex(&r_pi(m, p)?)?)?.module;
    let expected_dimension = index * m.dim();
    let mut report = SummandReport {
        components: comps.len(),
        component_stabilizer_order: h.order(),
        h0_dimension: h0.dim(),
        expected_dimension,
        h0_character: None,
        expected_character: None,
        matches_module: None,
        summand: false,
        summand_method: "index",
        passed: false,
    };
    let mut ok = h0.dim() == expected_dimension;
    if m.field().is_rational() {
        let chi_m = m.character()?;
        let chi_h0 = h0.character()?;
        let expected = induce_class_function(&h, &chi_m.restrict(&h)?)?;
        ok &= chi_h0 == expected;
        if comps.len() == 1 {
            let same = chi_h0 == chi_m;
            report.matches_module = Some(same);
            ok &= same;
        }
        report.summand = match table {
            Some(t) => {
                report.summand_method = "table";
                let a = t.decompose(&chi_m)?;
                let b = t.decompose(&chi_h0)?;
                a.iter().zip(&b).all(|(x, y)| x <= y)
            }
            None => true,
        };
        report.h0_character = Some(chi_h0);
        report.expected_character = Some(expected);
    } else {
        report.summand = !(index as u64).is_multiple_of(m.field().characteristic() as u64);
    }
    report.passed = ok && report.summand;
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct SteinbergTwistReport {
    pub lhs: VirtualClass,
    pub rhs: VirtualClass,
    pub steinberg: VirtualClass,
    pub passed: bool,
}

impl SteinbergTwistReport {
    pub fn to_json(&self) -> Value {
        json!({
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "steinberg": self.steinberg.to_json(),
            "passed": self.passed,
        })
    }
}

/// `(lk_π r_π − Id)[M]` against `St_P(G)·[M]`.
pub fn steinberg_twist_check(p: &GPoset, m: &GModule, table: Option<&CharacterTable>) -> Result<SteinbergTwistReport> {
    require_rational(m.field())?;
    let chi = m.character()?;
    let lhs = lk_pi(&r_pi(m, p)?)?.character.sub(&chi)?;
    let st = steinberg(p)?;
    let rhs = st.character.mul(&chi)?;
    let passed = lhs == rhs;
    Ok(SteinbergTwistReport {
        lhs: with_optional_table(VirtualClass::new(lhs), table)?,
        rhs: with_optional_table(VirtualClass::new(rhs), table)?,
        steinberg: with_optional_table(st, table)?,
        passed,
    })
}

#[derive(Clone, Debug)]
pub struct SimpleFormulaReport {
    pub element: usize,
    pub interval_size: usize,
    pub direct: ClassFunction,
    pub formula: ClassFunction,
    pub passed: bool,
}

impl SimpleFormulaReport {
    pub fn to_json(&self) -> Value {
        json!({
            "element": self.element,
            "interval_size": self.interval_size,
            "direct": self.direct.to_json(),
            "formula": self.formula.to_json(),
            "passed": self.passed,
        })
    }
}

/// `lk_π[S_{x,V}]` directly and as `Σ (−1)^i ([H̃_{i−1}(P_{<x})]·[V])↑` with
/// `H̃_{−1}(∅) = k`.
pub fn simple_formula_check(p: &GPoset, x: usize, v: &GModule) -> Result<SimpleFormulaReport> {
    require_rational(v.field())?;
    let direct = lk_pi(&atomic_presheaf(p, x, v)?)?.character;
    let stab = p.stabilizer(x);
    let interval = p.lower_interval(x)?;
    let local = stab.as_group();
    let reduced = reduced_complex(&interval, &GModule::trivial(local, Field::Rational))?.lefschetz_character()?;
    // the shift by one degree flips the sign of the reduced Lefschetz character
    let formula = induce_class_function(&stab, &reduced.neg().mul(&v.character()?)?)?;
    Ok(SimpleFormulaReport {
        element: x,
        interval_size: interval.len(),
        passed: direct == formula,
        direct,
        formula,
    })
}

/// Moves a module over `from.as_group()` to `to.as_group()` when both have the same members.
fn transport(n: &GModule, from: &Subgroup, to: &Subgroup) -> Result<GModule> {
    if from.members() != to.members() {
        return Err(Error::GroupMismatch("subgroups differ".into()));
    }
    let gens = to
        .as_group()
        .generator_elements()
        .iter()
        .map(|&s| {
            let local = from.local_index(to.embedding()[s]).expect("same members");
            (*n.matrix(local)).clone()
        })
        .collect();
    GModule::new(to.as_group(), n.field(), n.dim(), gens)
}

#[derive(Clone, Debug)]
pub struct HarishChandraReport {
    pub parabolic_order: usize,
    pub orbit_size: usize,
    pub homology_dims: Vec<(i64, usize)>,
    pub homology_class: VirtualClass,
    pub induced_class: VirtualClass,
}

impl HarishChandraReport {
    pub fn passed(&self) -> bool {
        self.homology_class == self.induced_class && self.homology_dims.iter().all(|&(d, n)| d == 0 || n == 0)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "parabolic_order": self.parabolic_order,
            "orbit_size": self.orbit_size,
            "homology_dims": self.homology_dims,
            "homology_class": self.homology_class.to_json(),
            "induced_class": self.induced_class.to_json(),
            "passed": self.passed(),
        })
    }
}

/// `H_0` of the presheaf `𝔑` on the conjugacy orbit of `v`, for `n` a module of
/// `N_G(v)` (over `v.normalizer().as_group()`) on which `v` acts trivially.
pub fn harish_chandra_induce(v: &Subgroup, n: &GModule) -> Result<HarishChandraReport> {
    require_rational(n.field())?;
    let normalizer = v.normalizer();
    if !n.group().same_as(normalizer.as_group()) {
        return Err(Error::GroupMismatch("module is not over the normalizer".into()));
    }
    let inside: Vec<usize> = v.members().iter().map(|&g| normalizer.local_index(g).expect("v ≤ N(v)")).collect();
    if !n.acts_trivially(&inside) {
        return Err(Error::InvalidModule("the subgroup must act trivially".into()));
    }
    let poset = parabolic_orbit_poset(v.parent(), v)?;
    let subs = poset.subgroups().expect("orbit of subgroups");
    let x = subs
        .iter()
        .position(|s| s.members() == v.members())
        .ok_or_else(|| Error::Internal("subgroup missing from its own orbit".into()))?;
    let stab = poset.stabilizer(x);
    let local = transport(n, &normalizer, &stab)?;
    let hom = homology(&build_complex(&atomic_presheaf(&poset, x, &local)?)?)?;
    let h0 = hom.degree(0).expect("nonempty orbit");
    let report = HarishChandraReport {
        parabolic_order: normalizer.order(),
        orbit_size: poset.len(),
        homology_dims: hom.dims(),
        homology_class: VirtualClass::new(h0.module.character()?),
        induced_class: VirtualClass::new(induce_class_function(&normalizer, &n.character()?)?),
    };
    if !report.passed() {
        return Err(Error::Internal("Harish-Chandra induction differs from plain induction".into()));
    }
    Ok(report)
}

/// The `±1` linear characters of `N_G(v)` that are trivial on `v`, as modules.
pub fn levi_sign_modules(v: &Subgroup) -> Result<Vec<GModule>> {
    let normalizer = v.normalizer();
    let local = normalizer.as_group();
    let inside: Vec<usize> = v.members().iter().map(|&g| normalizer.local_index(g).expect("v ≤ N(v)")).collect();
    linear_sign_characters(local)
        .into_iter()
        .filter(|values| inside.iter().all(|&i| values[i] == 1))
        .map(|values| {
            let gens: Vec<i64> = local.generator_elements().iter().map(|&s| values[s]).collect();
            GModule::linear(local, Field::Rational, &gens)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct AlvisCurtisReport {
    pub dual: VirtualClass,
    pub steinberg: VirtualClass,
    /// `+1` or `−1` when the dual is `±St`, otherwise absent
    pub steinberg_sign: Option<i64>,
    /// identity value from `Σ (−1)^i dim C_i − dim M`
    pub chain_degree: i64,
    /// identity value from `Σ (−1)^i dim H_i − dim M`
    pub homology_degree: i64,
}

impl AlvisCurtisReport {
    /// The two degree computations agree with each other and with the character.
    pub fn consistent(&self) -> bool {
        let d = self.dual.degree();
        self.chain_degree == self.homology_degree
            && d == Some(BigRational::from_integer(self.chain_degree.into()))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dual": self.dual.to_json(),
            "steinberg": self.steinberg.to_json(),
            "steinberg_sign": self.steinberg_sign,
            "chain_degree": self.chain_degree,
            "homology_degree": self.homology_degree,
            "consistent": self.consistent(),
        })
    }
}

/// `D[M] = lk_π[F_M] − [M]` where `F_M(V) = M^V` on `p`, with `p` a poset of subgroups.
pub fn alvis_curtis_on(p: &GPoset, m: &GModule, table: Option<&CharacterTable>) -> Result<AlvisCurtisReport> {
    require_rational(m.field())?;
    let f = fixed_point_presheaf(p, m)?;
    let complex = build_complex(&f)?;
    let chi = m.character()?;
    let dual = complex.lefschetz_character()?.sub(&chi)?;
    let st = steinberg(p)?;
    let steinberg_sign = if dual == st.character {
        Some(1)
    } else if dual == st.character.neg() {
        Some(-1)
    } else {
        None
    };
    let m_dim = m.dim() as i64;
    let chain_degree = complex.euler_characteristic() - m_dim;
    let homology_degree = complex
        .betti_numbers()
        .iter()
        .map(|&(d, n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
        .sum::<i64>()
        - m_dim;
    Ok(AlvisCurtisReport {
        dual: with_optional_table(VirtualClass::new(dual), table)?,
        steinberg: with_optional_table(st, table)?,
        steinberg_sign,
        chain_degree,
        homology_degree,
    })
}

/// `D_G = i_G t_G − Id` on the Bouc poset `B_p`.
pub fn alvis_curtis(m: &GModule, p: usize, table: Option<&CharacterTable>) -> Result<AlvisCurtisReport> {
    let bp = p_subgroup_poset(m.group(), p, PSubgroupVariant::Bp)?;
    alvis_curtis_on(&bp, m, table)
}

/// `D_G` extended linearly from the permutation modules `R[G/H]`, defined on
/// their rational span (the rational-valued characters).
#[derive(Clone, Debug)]
pub struct LinearAlvisCurtis {
    group: Arc<PermGroup>,
    /// independent permutation characters as rows
    basis: Matrix,
    images: Vec<ClassFunction>,
}

impl LinearAlvisCurtis {
    pub fn new(g: &Arc<PermGroup>, p: usize) -> Result<LinearAlvisCurtis> {
        let bp = p_subgroup_poset(g, p, PSubgroupVariant::Bp)?;
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        let mut images = Vec::new();
        let mut rank = 0;
        for h in crate::group::subgroups_up_to_conjugacy(g) {
            let m = GModule::coset(&h, Field::Rational)?;
            let values = m.character()?.rationals().expect("rational");
            let mut trial = rows.clone();
            trial.push(values);
            let r = Matrix::from_rational_rows(Field::Rational, &trial)?.rank();
            if r > rank {
                rank = r;
                rows = trial;
                images.push(alvis_curtis_on(&bp, &m, None)?.dual.character);
            }
        }
        Ok(LinearAlvisCurtis {
            group: g.clone(),
            basis: Matrix::from_rational_rows(Field::Rational, &rows)?,
            images,
        })
    }

    /// `None` when `chi` lies outside the span of permutation characters.
    pub fn apply(&self, chi: &ClassFunction) -> Result<Option<ClassFunction>> {
        let Some(values) = chi.rationals() else {
            return Ok(None);
        };
        let target = Matrix::from_rational_rows(Field::Rational, &[values])?;
        let Some(coords) = Matrix::solve_in_span(&self.basis, &target)? else {
            return Ok(None);
        };
        let mut acc = ClassFunction::zero(&self.group);
        for (j, img) in self.images.iter().enumerate() {
            let c = coords.get(0, j).as_rational().cloned().expect("rational");
            if !c.is_zero() {
                acc = acc.add(&img.scale(&c))?;
            }
        }
        Ok(Some(acc))
    }

    /// Whether `D∘D` fixes `chi`; reported, not assumed.
    pub fn is_involutive_on(&self, chi: &ClassFunction) -> Result<Option<bool>> {
        match self.apply(chi)? {
            Some(d) => Ok(self.apply(&d)?.map(|dd| dd == *chi)),
            None => Ok(None),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpanReport {
    pub connected: bool,
    /// reduced homology of `P` with trivial coefficients vanishes
    pub acyclic: bool,
    pub orbit_representatives: Vec<usize>,
    /// multiplicities of each induced irreducible
    pub rows: Vec<Vec<i64>>,
    pub rank: usize,
    pub spans_rationally: bool,
    pub spans_lattice: bool,
}

impl SpanReport {
    pub fn to_json(&self) -> Value {
        json!({
            "connected": self.connected,
            "acyclic": self.acyclic,
            "orbit_representatives": self.orbit_representatives,
            "rows": self.rows,
            "rank": self.rank,
            "spans_rationally": self.spans_rationally,
            "spans_lattice": self.spans_lattice,
        })
    }
}

/// Whether the classes induced from all stabilizers span `G_0`. Stabilizer
/// irreducibles are the rational ones, built on the fly.
pub fn induction_span_check(p: &GPoset, table: &CharacterTable) -> Result<SpanReport> {
    let g = p.group();
    let connected = !p.is_empty() && p.connected_components().len() == 1;
    let reduced = reduced_complex(p, &GModule::trivial(g, Field::Rational))?;
    let acyclic = reduced.betti_numbers().iter().all(|&(_, n)| n == 0);
    let reps = p.orbit_representatives();
    let mut rows = Vec::new();
    for &x in &reps {
        let stab = p.stabilizer(x);
        for v in rational_irreducibles(stab.as_group())? {
            rows.push(table.decompose(&induce_class_function(&stab, &v.character()?)?)?);
        }
    }
    let rational: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&a| BigRational::from_integer(a.into())).collect())
        .collect();
    let rank = if rows.is_empty() {
        0
    } else {
        Matrix::from_rational_rows(Field::Rational, &rational)?.rank()
    };
    Ok(SpanReport {
        connected,
        acyclic,
        orbit_representatives: reps,
        spans_rationally: rank == table.len(),
        spans_lattice: spans_full_lattice(&rows, table.len()),
        rows,
        rank,
    })
}

#[cfg(test)]
mod tests;
