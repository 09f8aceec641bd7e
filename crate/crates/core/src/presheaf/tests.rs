use super::*;
use crate::gmodule::rational_irreducibles;
use crate::gposet::{
    barycentric_subdivision, chain_poset, coset_poset, hollow_triangle, p_subgroup_poset, point_poset, PSubgroupVariant,
    TransporterMorphism,
};
use crate::group::{fixtures, Perm, Subgroup};

fn q() -> Field {
    Field::Rational
}

fn same_data(a: &GPresheaf, b: &GPresheaf) -> bool {
    let p = a.poset();
    a.dims() == b.dims()
        && a.generator_maps() == b.generator_maps()
        && (0..p.len()).all(|x| (0..p.len()).filter(|&y| p.leq(x, y)).all(|y| a.relation(x, y) == b.relation(x, y)))
}

/// Every transporter morphism composes contravariantly: `F(f∘e) = F(f)·F(e)`.
fn check_against_morphisms(f: &GPresheaf) {
    let p = f.poset();
    let all = TransporterMorphism::all(p);
    for e in &all {
        for h in all.iter().filter(|h| h.source == e.target) {
            let fe = h.compose(p, e).unwrap();
            let direct = f.morphism_map(fe.source, fe.target, fe.g).unwrap();
            let composed = f
                .morphism_map(h.source, h.target, h.g)
                .unwrap()
                .mul(&f.morphism_map(e.source, e.target, e.g).unwrap())
                .unwrap();
            assert_eq!(direct, composed);
        }
    }
}

#[test]
fn constant_examples() {
    let s3 = fixtures::symmetric(3).unwrap();
    let p = p_subgroup_poset(&s3, 2, PSubgroupVariant::Sp).unwrap();
    let k = constant_presheaf(&p, &GModule::trivial(&s3, q())).unwrap();
    assert_eq!(k.dims(), &[1, 1, 1]);
    let reg = constant_presheaf(&p, &GModule::regular(&s3, q())).unwrap();
    assert_eq!(reg.dims(), &[6, 6, 6]);
    let c = chain_poset(3).unwrap();
    let kc = constant_presheaf(&c, &GModule::trivial(c.group(), q())).unwrap();
    assert!(kc.relation(0, 2).is_identity());
    check_against_morphisms(&reg);
}

#[test]
fn coset_presheaf_of_whole_group_is_constant_on_a_point() {
    let s3 = fixtures::symmetric(3).unwrap();
    let whole = Subgroup::whole(&s3);
    for m in rational_irreducibles(&s3).unwrap() {
        let n = m.rehome(whole.as_group()).unwrap();
        let a = coset_presheaf(&s3, &whole, &n).unwrap();
        let b = constant_presheaf(&point_poset(&s3).unwrap(), &m).unwrap();
        assert!(same_data(&a, &b));
    }
}

#[test]
fn coset_presheaf_over_a3() {
    let s3 = fixtures::symmetric(3).unwrap();
    let a3 = Subgroup::from_perms(&s3, &[Perm::parse_cycles("(0 1 2)", 3).unwrap()]).unwrap();
    let f = coset_presheaf(&s3, &a3, &GModule::trivial(a3.as_group(), q())).unwrap();
    assert_eq!(f.dims(), &[1, 1]);
    for (k, s) in s3.generators().iter().enumerate() {
        let e = s3.index_of(s).unwrap();
        for x in 0..2 {
            assert!(f.generator_map(k, x).is_identity());
            // transpositions swap the two cosets, the 3-cycle fixes them
            let moved = f.poset().act(e, x) != x;
            assert_eq!(moved, s.cycles().iter().any(|c| c.len() == 2));
        }
    }
    check_against_morphisms(&f);
}

#[test]
fn coset_representatives_match_uniquely() {
    let s4 = fixtures::symmetric(4).unwrap();
    let sylow = crate::group::sylow_p(&s4, 2);
    let cosets = sylow.left_cosets();
    let reps: Vec<usize> = cosets.iter().map(|c| c[0]).collect();
    let p = coset_poset(&s4, &sylow).unwrap();
    for g in 0..s4.order() {
        for (j, &gj) in reps.iter().enumerate() {
            let i = p.act(g, j);
            let h = s4.mul(s4.inv(reps[i]), s4.mul(g, gj));
            assert!(sylow.contains(h));
            let others = (0..reps.len()).filter(|&l| sylow.contains(s4.mul(s4.inv(reps[l]), s4.mul(g, gj))));
            assert_eq!(others.count(), 1);
        }
    }
}

#[test]
fn fixed_point_examples() {
    let s3 = fixtures::symmetric(3).unwrap();
    let p = p_subgroup_poset(&s3, 2, PSubgroupVariant::Sp).unwrap();
    let t = GModule::trivial(&s3, q());
    assert!(same_data(&fixed_point_presheaf(&p, &t).unwrap(), &constant_presheaf(&p, &t).unwrap()));
    let reg = fixed_point_presheaf(&p, &GModule::regular(&s3, q())).unwrap();
    assert_eq!(reg.dims(), &[3, 3, 3]);

    let s4 = fixtures::symmetric(4).unwrap();
    let p4 = p_subgroup_poset(&s4, 2, PSubgroupVariant::Sp).unwrap();
    let nat = GModule::natural(&s4, q()).unwrap();
    let f = fixed_point_presheaf(&p4, &nat).unwrap();
    for (x, v) in p4.subgroups().unwrap().iter().enumerate() {
        assert_eq!(f.dim(x), nat.fixed_points(v).unwrap().rows());
    }
}

#[test]
fn fixed_points_of_regular_module_on_gl32_building() {
    let g = fixtures::gl32().unwrap();
    let p = p_subgroup_poset(&g, 2, PSubgroupVariant::Bp).unwrap();
    let f = fixed_point_presheaf(&p, &GModule::regular(&g, q())).unwrap();
    for (x, v) in p.subgroups().unwrap().iter().enumerate() {
        assert_eq!(f.dim(x), 168 / v.order());
    }
    let mut dims: Vec<usize> = f.dims().to_vec();
    dims.sort_unstable();
    dims.dedup();
    assert_eq!(dims, vec![21, 42]);
}

#[test]
fn atomic_examples() {
    let s3 = fixtures::symmetric(3).unwrap();
    let a3 = Subgroup::from_perms(&s3, &[Perm::parse_cycles("(0 1 2)", 3).unwrap()]).unwrap();
    let cp = coset_poset(&s3, &a3).unwrap();
    let direct = coset_presheaf(&s3, &a3, &GModule::trivial(a3.as_group(), q())).unwrap();
    let stab = cp.stabilizer(0);
    let atomic = atomic_presheaf(&cp, 0, &GModule::trivial(stab.as_group(), q())).unwrap();
    assert!(same_data(&atomic, &direct));

    let c = chain_poset(3).unwrap();
    let stab = c.stabilizer(1);
    let point = atomic_presheaf(&c, 1, &GModule::trivial(stab.as_group(), q())).unwrap();
    assert_eq!(point.dims(), &[0, 1, 0]);

    let s4 = fixtures::symmetric(4).unwrap();
    let p = p_subgroup_poset(&s4, 2, PSubgroupVariant::Sp).unwrap();
    for x in p.orbit_representatives() {
        let stab = p.stabilizer(x);
        for v in rational_irreducibles(stab.as_group()).unwrap() {
            let f = atomic_presheaf(&p, x, &v).unwrap();
            for a in 0..p.len() {
                for b in (0..p.len()).filter(|&b| p.lt(a, b)) {
                    assert!(f.relation(a, b).is_zero());
                }
            }
        }
    }
}

#[test]
fn atomic_presheaf_respects_morphisms() {
    let s3 = fixtures::symmetric(3).unwrap();
    let p = p_subgroup_poset(&s3, 2, PSubgroupVariant::Sp1).unwrap();
    for x in p.orbit_representatives() {
        let stab = p.stabilizer(x);
        for v in rational_irreducibles(stab.as_group()).unwrap() {
            check_against_morphisms(&atomic_presheaf(&p, x, &v).unwrap());
        }
    }
}

#[test]
fn pullback_along_subdivision() {
    let t = hollow_triangle().unwrap();
    let sd = barycentric_subdivision(&t).unwrap();
    let f = constant_presheaf(&t, &GModule::trivial(t.group(), q())).unwrap();
    let pulled = pullback(&sd, &f).unwrap();
    assert_eq!(pulled.dims().len(), sd.poset.len());
    assert!(pulled.dims().iter().all(|&d| d == 1));
}

#[test]
fn rejects_broken_data() {
    let c = chain_poset(3).unwrap();
    let one = Matrix::identity(q(), 1);
    let two = one.scale(&q().from_i64(2)).unwrap();
    // R(0<2) ≠ R(1<2)·R(0<1)
    let rels = vec![((0, 1), one.clone()), ((1, 2), one.clone()), ((0, 2), two)];
    assert!(GPresheaf::new(&c, q(), vec![1, 1, 1], rels, vec![]).is_err());
    assert!(GPresheaf::new(&c, q(), vec![1, 1, 1], vec![((0, 1), one.clone())], vec![]).is_err());
    assert!(GPresheaf::new(&c, q(), vec![1, 1, 1], vec![((1, 0), one.clone())], vec![]).is_err());

    // a sign on one generator that is not a homomorphism: C3 acting by −1
    let t = hollow_triangle().unwrap();
    let minus = one.neg();
    let ok = constant_presheaf(&t, &GModule::trivial(t.group(), q())).unwrap();
    let mut rels: Vec<((usize, usize), Matrix)> = Vec::new();
    for x in 0..t.len() {
        for y in (0..t.len()).filter(|&y| t.lt(x, y)) {
            rels.push(((x, y), ok.relation(x, y).clone()));
        }
    }
    let bad = vec![vec![minus.clone(); t.len()]];
    assert!(matches!(
        GPresheaf::new(&t, q(), vec![1; t.len()], rels.clone(), bad),
        Err(Error::InvalidPresheaf(_))
    ));
    // mixing: twisting one vertex by −1 breaks the relation squares
    let mut twisted = vec![one.clone(); t.len()];
    twisted[0] = minus.clone();
    twisted[1] = minus;
    assert!(GPresheaf::new(&t, q(), vec![1; t.len()], rels, vec![twisted]).is_err());
}

#[test]
fn json_roundtrip() {
    let s3 = fixtures::symmetric(3).unwrap();
    let p = p_subgroup_poset(&s3, 2, PSubgroupVariant::Sp1).unwrap();
    let f = fixed_point_presheaf(&p, &GModule::natural(&s3, q()).unwrap()).unwrap();
    let back = GPresheaf::from_json(&p, &f.to_json()).unwrap();
    assert!(same_data(&f, &back));
    let mut broken = f.to_json();
    broken["schema_version"] = json!(7);
    assert!(matches!(GPresheaf::from_json(&p, &broken), Err(Error::Schema(_))));
}
