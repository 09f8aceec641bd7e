use super::GPoset;
use crate::error::{Error, Result};
use crate::group::PermGroup;

/// A morphism `x → y` of `P⋊G`: a group element `g` with `ᵍx ≤ y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransporterMorphism {
    pub source: usize,
    pub target: usize,
    pub g: usize,
}

impl TransporterMorphism {
    pub fn new(p: &GPoset, source: usize, target: usize, g: usize) -> Result<TransporterMorphism> {
        if source >= p.len() || target >= p.len() || g >= p.group().order() {
            return Err(Error::NotComposable("index out of range".into()));
        }
        if !p.leq(p.act(g, source), target) {
            return Err(Error::NotComposable(format!(
                "{} moved by {} is not below {}",
                p.label(source),
                p.group().element(g),
                p.label(target)
            )));
        }
        Ok(TransporterMorphism { source, target, g })
    }

    pub fn identity(x: usize) -> TransporterMorphism {
        TransporterMorphism {
            source: x,
            target: x,
            g: PermGroup::IDENTITY,
        }
    }

    /// `self ∘ e`, defined when `e` ends where `self` starts; the group part is `g·h`.
    pub fn compose(&self, p: &GPoset, e: &TransporterMorphism) -> Result<TransporterMorphism> {
        if e.target != self.source {
            return Err(Error::NotComposable(format!(
                "{} does not end at {}",
                p.label(e.source),
                p.label(self.source)
            )));
        }
        TransporterMorphism::new(p, e.source, self.target, p.group().mul(self.g, e.g))
    }

    /// Every morphism of `P⋊G`.
    pub fn all(p: &GPoset) -> Vec<TransporterMorphism> {
        let mut out = Vec::new();
        for x in 0..p.len() {
            for g in 0..p.group().order() {
                let gx = p.act(g, x);
                for y in 0..p.len() {
                    if p.leq(gx, y) {
                        out.push(TransporterMorphism { source: x, target: y, g });
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gposet::{coset_poset, p_subgroup_poset, PSubgroupVariant};
    use crate::group::{fixtures, Perm, Subgroup};
    use rand::{Rng, SeedableRng};

    #[test]
    fn identity_law() {
        let c = crate::gposet::chain_poset(2).unwrap();
        let f = TransporterMorphism::new(&c, 0, 1, 0).unwrap();
        assert_eq!(f.compose(&c, &TransporterMorphism::identity(0)).unwrap(), f);
        assert_eq!(TransporterMorphism::identity(1).compose(&c, &f).unwrap(), f);
        assert!(TransporterMorphism::new(&c, 1, 0, 0).is_err());
    }

    #[test]
    fn coset_composition() {
        let s3 = fixtures::symmetric(3).unwrap();
        let h = Subgroup::from_perms(&s3, &[Perm::parse_cycles("(0 1)", 3).unwrap()]).unwrap();
        let p = coset_poset(&s3, &h).unwrap();
        let r = s3.index_of(&Perm::parse_cycles("(0 1 2)", 3).unwrap()).unwrap();
        let x0 = 0;
        let x1 = p.act(r, x0);
        let x2 = p.act(r, x1);
        let e = TransporterMorphism::new(&p, x0, x1, r).unwrap();
        let f = TransporterMorphism::new(&p, x1, x2, r).unwrap();
        let fe = f.compose(&p, &e).unwrap();
        assert_eq!(s3.element(fe.g), &Perm::parse_cycles("(0 2 1)", 3).unwrap());
        assert_eq!((fe.source, fe.target), (x0, x2));
        assert!(e.compose(&p, &e).is_err());
    }

    #[test]
    fn exhaustive_associativity_on_small_poset() {
        let s3 = fixtures::symmetric(3).unwrap();
        let p = p_subgroup_poset(&s3, 2, PSubgroupVariant::Sp1).unwrap();
        let all = TransporterMorphism::all(&p);
        assert!(all.len() <= 5000);
        for a in &all {
            for b in all.iter().filter(|b| b.source == a.target) {
                for c in all.iter().filter(|c| c.source == b.target) {
                    let left = c.compose(&p, b).unwrap().compose(&p, a).unwrap();
                    let right = c.compose(&p, &b.compose(&p, a).unwrap()).unwrap();
                    assert_eq!(left, right);
                }
            }
            assert_eq!(a.compose(&p, &TransporterMorphism::identity(a.source)).unwrap(), *a);
        }
    }

    #[test]
    fn associativity_on_s2_s4() {
        let s4 = fixtures::symmetric(4).unwrap();
        let p = p_subgroup_poset(&s4, 2, PSubgroupVariant::Sp).unwrap();
        let all = TransporterMorphism::all(&p);
        let mut by_source: Vec<Vec<TransporterMorphism>> = vec![Vec::new(); p.len()];
        for m in &all {
            by_source[m.source].push(*m);
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let a = all[rng.gen_range(0..all.len())];
            let b = by_source[a.target][rng.gen_range(0..by_source[a.target].len())];
            let c = by_source[b.target][rng.gen_range(0..by_source[b.target].len())];
            let left = c.compose(&p, &b).unwrap().compose(&p, &a).unwrap();
            let right = c.compose(&p, &b.compose(&p, &a).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }
}
