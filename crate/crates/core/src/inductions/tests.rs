use super::*;
use crate::gposet::{chain_poset, coset_poset, point_poset};
use crate::group::{fixtures, subgroups_up_to_conjugacy, sylow_p, Perm};
use crate::presheaf::coset_presheaf;

fn q() -> Field {
    Field::Rational
}

fn ints(chi: &ClassFunction) -> Vec<i64> {
    chi.rationals()
        .unwrap()
        .iter()
        .map(|v| i64::try_from(v.to_integer()).unwrap())
        .collect()
}

fn deg(c: &VirtualClass) -> i64 {
    i64::try_from(c.degree().unwrap().to_integer()).unwrap()
}

fn induced_trivial(h: &Subgroup) -> ClassFunction {
    induce_class_function(h, &ClassFunction::trivial(h.as_group())).unwrap()
}

#[test]
fn lk_of_coset_presheaf_is_induction() {
    let s4 = fixtures::symmetric(4).unwrap();
    for h in subgroups_up_to_conjugacy(&s4) {
        for n in rational_irreducibles(h.as_group()).unwrap() {
            let f = coset_presheaf(&s4, &h, &n).unwrap();
            let expected = induce_class_function(&h, &n.character().unwrap()).unwrap();
            assert_eq!(lk_pi(&f).unwrap().character(), &expected);
        }
    }
}

#[test]
fn lk_on_contractible_and_char_p() {
    let c = chain_poset(3).unwrap();
    let lk = lk_pi(&r_pi(&GModule::trivial(c.group(), q()), &c).unwrap()).unwrap();
    assert_eq!(ints(lk.character()), vec![1]);
    assert!(steinberg(&c).unwrap().character().is_zero());
    let f2 = Field::prime(2).unwrap();
    let k = r_pi(&GModule::trivial(c.group(), f2), &c).unwrap();
    assert!(matches!(lk_pi(&k), Err(Error::UnsupportedField(_))));
}

#[test]
fn atomic_at_minimal_element_is_induced() {
    let s4 = fixtures::symmetric(4).unwrap();
    let p = p_subgroup_poset(&s4, 2, PSubgroupVariant::Sp).unwrap();
    for x in p.orbit_representatives().into_iter().filter(|&x| p.is_minimal(x)) {
        let stab = p.stabilizer(x);
        for v in rational_irreducibles(stab.as_group()).unwrap() {
            let lk = lk_pi(&atomic_presheaf(&p, x, &v).unwrap()).unwrap();
            assert_eq!(lk.character(), &induce_class_function(&stab, &v.character().unwrap()).unwrap());
        }
    }
}

#[test]
fn summand_examples() {
    let s4 = fixtures::symmetric(4).unwrap();
    let table = fixtures::builtin_table(&s4).unwrap().unwrap();
    let p = p_subgroup_poset(&s4, 2, PSubgroupVariant::Sp).unwrap();
    for m in rational_irreducibles(&s4).unwrap() {
        let r = summand_check(&p, &m, Some(&table)).unwrap();
        assert_eq!(r.components, 1);
        assert_eq!(r.matches_module, Some(true));
        assert!(r.passed);
    }

    let s3 = fixtures::symmetric(3).unwrap();
    let sp = p_subgroup_poset(&s3, 2, PSubgroupVariant::Sp).unwrap();
    let r = summand_check(&sp, &GModule::trivial(&s3, q()), None).unwrap();
    assert_eq!(r.components, 3);
    assert_eq!(r.component_stabilizer_order, 2);
    // classes of S3 are ordered identity, transpositions, 3-cycles
    let classes: Vec<usize> = s3.class_representatives().iter().map(|&g| s3.element_order(g)).collect();
    let h0 = ints(r.h0_character.as_ref().unwrap());
    for (o, v) in classes.iter().zip(&h0) {
        assert_eq!(*v, [0, 3, 1, 0][*o]);
    }
    assert!(r.summand && r.passed);

    // on G/H the tensor identity with the permutation character
    let h = sylow_p(&s4, 3);
    let cp = coset_poset(&s4, &h).unwrap();
    let nat = GModule::natural(&s4, q()).unwrap();
    let r = summand_check(&cp, &nat, None).unwrap();
    let perm = induced_trivial(&h);
    assert_eq!(r.h0_character.unwrap(), nat.character().unwrap().mul(&perm).unwrap());

    let f3 = Field::prime(3).unwrap();
    let r = summand_check(&sp, &GModule::trivial(&s3, f3), None).unwrap();
    assert!(!r.summand);
    assert!(matches!(
        summand_check(&chain_poset(0).unwrap(), &GModule::trivial(chain_poset(0).unwrap().group(), q()), None),
        Err(Error::Disconnected(0))
    ));
}

#[test]
fn steinberg_of_gl32_building() {
    let g = fixtures::gl32().unwrap();
    let p = p_subgroup_poset(&g, 2, PSubgroupVariant::Bp).unwrap();
    let st = steinberg(&p).unwrap();
    assert_eq!(deg(&st).abs(), 8);
    let mut parabolics: Vec<Subgroup> = p
        .orbit_representatives()
        .into_iter()
        .map(|x| p.stabilizer(x))
        .collect();
    parabolics.sort_by_key(Subgroup::index);
    let indices: Vec<usize> = parabolics.iter().map(Subgroup::index).collect();
    assert_eq!(indices, vec![7, 7, 21]);
    let alt = ClassFunction::trivial(&g)
        .sub(&induced_trivial(&parabolics[0]))
        .unwrap()
        .sub(&induced_trivial(&parabolics[1]))
        .unwrap()
        .add(&induced_trivial(&parabolics[2]))
        .unwrap();
    assert!(st.character() == &alt || st.character() == &alt.neg());
    let table = fixtures::builtin_table(&g).unwrap().unwrap();
    let coords = st.clone().with_table(&table).unwrap();
    assert_eq!(coords.coordinates().unwrap().iter().map(|c| c.abs()).sum::<i64>(), 1);
}

#[test]
fn steinberg_of_three_points() {
    let s3 = fixtures::symmetric(3).unwrap();
    let p = p_subgroup_poset(&s3, 2, PSubgroupVariant::Sp).unwrap();
    assert_eq!(deg(&steinberg(&p).unwrap()), 2);
}

#[test]
fn steinberg_twists() {
    for (n, primes) in [(3, vec![2, 3]), (4, vec![2, 3])] {
        let g = fixtures::symmetric(n).unwrap();
        let table = fixtures::builtin_table(&g).unwrap().unwrap();
        for p in primes {
            let poset = p_subgroup_poset(&g, p, PSubgroupVariant::Sp).unwrap();
            for m in rational_irreducibles(&g).unwrap() {
                let r = steinberg_twist_check(&poset, &m, Some(&table)).unwrap();
                assert!(r.passed, "S{n} p={p}");
            }
        }
    }
    let c = chain_poset(2).unwrap();
    let r = steinberg_twist_check(&c, &GModule::regular(c.group(), q()), None).unwrap();
    assert!(r.lhs.character().is_zero() && r.passed);
}

#[test]
fn simple_formula_on_sylow_posets() {
    for n in [3, 4] {
        let g = fixtures::symmetric(n).unwrap();
        let p = p_subgroup_poset(&g, 2, PSubgroupVariant::Sp).unwrap();
        for x in p.orbit_representatives() {
            for v in rational_irreducibles(p.stabilizer(x).as_group()).unwrap() {
                let r = simple_formula_check(&p, x, &v).unwrap();
                assert!(r.passed, "S{n} at {}", p.label(x));
            }
        }
    }
    // a contractible poset at its top element
    let c = chain_poset(3).unwrap();
    let r = simple_formula_check(&c, 2, &GModule::trivial(c.group(), q())).unwrap();
    assert_eq!(r.interval_size, 2);
    assert_eq!(ints(&r.direct), vec![0]);
    assert!(r.passed);
    let r = simple_formula_check(&c, 0, &GModule::trivial(c.group(), q())).unwrap();
    assert_eq!(r.interval_size, 0);
    assert_eq!(ints(&r.formula), vec![1]);
}

#[test]
fn harish_chandra_cases() {
    let g = fixtures::gl32().unwrap();
    let borel = sylow_p(&g, 2);
    let r = harish_chandra_induce(&borel, &GModule::trivial(borel.normalizer().as_group(), q())).unwrap();
    assert_eq!(r.orbit_size, 21);
    assert_eq!(deg(&r.homology_class), 21);

    let p = p_subgroup_poset(&g, 2, PSubgroupVariant::Bp).unwrap();
    let subs = p.subgroups().unwrap();
    for x in p.orbit_representatives() {
        let v = &subs[x];
        for n in levi_sign_modules(v).unwrap() {
            let r = harish_chandra_induce(v, &n).unwrap();
            assert!(r.passed());
            assert_eq!(r.orbit_size, 168 / r.parabolic_order);
        }
        if v.order() == 4 {
            let r = harish_chandra_induce(v, &GModule::trivial(v.normalizer().as_group(), q())).unwrap();
            assert_eq!(deg(&r.homology_class), 7);
        }
    }

    let s4 = fixtures::symmetric(4).unwrap();
    let v4 = Subgroup::from_perms(
        &s4,
        &[Perm::parse_cycles("(0 1)(2 3)", 4).unwrap(), Perm::parse_cycles("(0 2)(1 3)", 4).unwrap()],
    )
    .unwrap();
    for n in levi_sign_modules(&v4).unwrap() {
        let r = harish_chandra_induce(&v4, &n).unwrap();
        assert_eq!(r.orbit_size, 1);
        let normalizer = v4.normalizer();
        let chi = n.character().unwrap();
        let on_s4 = ClassFunction::pull_back(&s4, &chi, |g| normalizer.local_index(g).unwrap());
        assert_eq!(r.homology_class.character(), &on_s4);
    }
    // the regular module of the normalizer is not trivial on v
    assert!(harish_chandra_induce(&v4, &GModule::regular(v4.normalizer().as_group(), q())).is_err());
}

#[test]
fn alvis_curtis_on_gl32() {
    let g = fixtures::gl32().unwrap();
    let table = fixtures::builtin_table(&g).unwrap().unwrap();
    let r = alvis_curtis(&GModule::trivial(&g, q()), 2, Some(&table)).unwrap();
    assert!(r.steinberg_sign.is_some());
    assert_eq!(deg(&r.dual).abs(), 8);
    assert!(r.consistent());

    let control = p_subgroup_poset(&g, 2, PSubgroupVariant::Sp1).unwrap();
    let r = alvis_curtis_on(&control, &GModule::trivial(&g, q()), None).unwrap();
    assert!(r.dual.character().is_zero());

    let r = alvis_curtis(&GModule::regular(&g, q()), 2, None).unwrap();
    assert!(r.consistent());
}

#[test]
fn linear_extension_agrees_on_modules() {
    let s4 = fixtures::symmetric(4).unwrap();
    let d = LinearAlvisCurtis::new(&s4, 2).unwrap();
    for m in rational_irreducibles(&s4).unwrap() {
        let direct = alvis_curtis(&m, 2, None).unwrap().dual;
        assert_eq!(d.apply(&m.character().unwrap()).unwrap().as_ref(), Some(direct.character()));
    }
    assert!(d.is_involutive_on(&ClassFunction::trivial(&s4)).unwrap().is_some());
}

#[test]
fn span_checks() {
    let s4 = fixtures::symmetric(4).unwrap();
    let table = fixtures::builtin_table(&s4).unwrap().unwrap();
    let pt = point_poset(&s4).unwrap();
    let r = span_check_ok(&pt, &table);
    assert!(r.spans_lattice && r.acyclic && r.connected);

    let p = p_subgroup_poset(&s4, 2, PSubgroupVariant::Sp).unwrap();
    let r = span_check_ok(&p, &table);
    assert_eq!(r.orbit_representatives.len(), 6);
    assert!(r.rank <= table.len());

    let g = fixtures::gl32().unwrap();
    let t = fixtures::builtin_table(&g).unwrap().unwrap();
    let b = p_subgroup_poset(&g, 2, PSubgroupVariant::Bp).unwrap();
    let r = span_check_ok(&b, &t);
    // parabolic characters are rational, so the conjugate pair of degree 3 is never separated
    assert!(!r.spans_rationally);
}

fn span_check_ok(p: &GPoset, t: &CharacterTable) -> SpanReport {
    induction_span_check(p, t).unwrap()
}
