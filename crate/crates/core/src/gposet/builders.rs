use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::GPoset;
use crate::error::{Error, Result};
use crate::group::{all_p_subgroups, fixtures, o_p, PermGroup, Subgroup};

/// Left cosets `gH` as an antichain, ordered by least member, with `G` acting by left multiplication.
pub fn coset_poset(g: &Arc<PermGroup>, h: &Subgroup) -> Result<GPoset> {
    if !h.parent().same_as(g) {
        return Err(Error::GroupMismatch("subgroup of another group".into()));
    }
    let cosets = h.left_cosets();
    let mut coset_of = vec![0; g.order()];
    for (i, c) in cosets.iter().enumerate() {
        for &x in c {
            coset_of[x] = i;
        }
    }
    let labels = cosets.iter().map(|c| format!("{}H", g.element(c[0]))).collect();
    let n = cosets.len();
    let leq = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
    let actions = g
        .generator_elements()
        .iter()
        .map(|&s| cosets.iter().map(|c| coset_of[g.mul(s, c[0])]).collect())
        .collect();
    GPoset::new(g, labels, leq, actions)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PSubgroupVariant {
    /// nontrivial p-subgroups
    Sp,
    /// all p-subgroups
    Sp1,
    /// nontrivial V with V = O_p(N_G(V))
    Bp,
}

impl fmt::Display for PSubgroupVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PSubgroupVariant::Sp => "S_p",
            PSubgroupVariant::Sp1 => "S_p1",
            PSubgroupVariant::Bp => "B_p",
        })
    }
}

impl FromStr for PSubgroupVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "").as_str() {
            "sp" | "s" => Ok(PSubgroupVariant::Sp),
            "sp1" | "s1" => Ok(PSubgroupVariant::Sp1),
            "bp" | "b" => Ok(PSubgroupVariant::Bp),
            _ => Err(Error::Parse(format!("unknown p-subgroup poset {s:?}"))),
        }
    }
}

/// `V = O_p(N_G(V))` for a nontrivial p-subgroup `V`.
pub fn in_bouc_poset(v: &Subgroup, p: usize) -> bool {
    v.order() > 1 && o_p(&v.normalizer(), p) == *v
}

fn subgroup_poset(g: &Arc<PermGroup>, subs: Vec<Subgroup>) -> Result<GPoset> {
    let index: HashMap<Vec<usize>, usize> =
        subs.iter().enumerate().map(|(i, s)| (s.members().to_vec(), i)).collect();
    let leq = subs
        .iter()
        .map(|a| subs.iter().map(|b| a.is_subgroup_of(b)).collect())
        .collect();
    let actions = g
        .generator_elements()
        .iter()
        .map(|&s| {
            subs.iter()
                .map(|v| {
                    index
                        .get(v.conjugate(s).members())
                        .copied()
                        .ok_or_else(|| Error::InvalidPoset("family is not closed under conjugation".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let labels = subs.iter().map(Subgroup::label).collect();
    Ok(GPoset::new(g, labels, leq, actions)?.with_subgroups(subs))
}

/// p-subgroups ordered by inclusion, `G` acting by conjugation.
pub fn p_subgroup_poset(g: &Arc<PermGroup>, p: usize, variant: PSubgroupVariant) -> Result<GPoset> {
    if !crate::algebra::is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    let subs = match variant {
        PSubgroupVariant::Sp => all_p_subgroups(g, p, false),
        PSubgroupVariant::Sp1 => all_p_subgroups(g, p, true),
        PSubgroupVariant::Bp => all_p_subgroups(g, p, false)
            .into_iter()
            .filter(|v| in_bouc_poset(v, p))
            .collect(),
    };
    subgroup_poset(g, subs)
}

fn prime_of_p_group(order: usize) -> Option<usize> {
    let p = (2..=order).find(|d| order.is_multiple_of(*d))?;
    let mut n = order;
    while n.is_multiple_of(p) {
        n /= p;
    }
    (n == 1).then_some(p)
}

/// The conjugacy orbit `{ᵍV}` of a member of the Bouc poset, as an antichain.
pub fn parabolic_orbit_poset(g: &Arc<PermGroup>, v: &Subgroup) -> Result<GPoset> {
    if !v.parent().same_as(g) {
        return Err(Error::GroupMismatch("subgroup of another group".into()));
    }
    let p = prime_of_p_group(v.order())
        .ok_or_else(|| Error::NotInBoucPoset(format!("{} is not a nontrivial p-group", v.label())))?;
    if !in_bouc_poset(v, p) {
        return Err(Error::NotInBoucPoset(format!("{} differs from O_p of its normalizer", v.label())));
    }
    let mut orbit: Vec<Subgroup> = v.conjugates().into_iter().map(|(_, c)| c).collect();
    orbit.sort_by(|a, b| a.members().cmp(b.members()));
    subgroup_poset(g, orbit)
}

/// Barycentric subdivision with the map `τ` sending a chain to its maximum.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub poset: GPoset,
    /// the chain each element of `poset` stands for
    pub chains: Vec<Vec<usize>>,
    pub tau: Vec<usize>,
}

/// Nonempty chains ordered by inclusion, ordered by length and then lexicographically.
pub fn barycentric_subdivision(p: &GPoset) -> Result<Subdivision> {
    let mut chains: Vec<Vec<usize>> = p.chains().into_iter().flatten().collect();
    chains.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let index: HashMap<&[usize], usize> = chains.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
    let is_sub = |a: &[usize], b: &[usize]| a.iter().all(|x| b.contains(x));
    let leq = chains
        .iter()
        .map(|a| chains.iter().map(|b| is_sub(a, b)).collect())
        .collect();
    let g = p.group();
    let actions = g
        .generator_elements()
        .iter()
        .map(|&s| {
            chains
                .iter()
                .map(|c| {
                    let image: Vec<usize> = c.iter().map(|&x| p.act(s, x)).collect();
                    index[image.as_slice()]
                })
                .collect()
        })
        .collect();
    let labels = chains
        .iter()
        .map(|c| {
            let parts: Vec<&str> = c.iter().map(|&x| p.label(x)).collect();
            format!("{{{}}}", parts.join(" < "))
        })
        .collect();
    let tau = chains.iter().map(|c| *c.last().expect("nonempty")).collect();
    Ok(Subdivision {
        poset: GPoset::new(g, labels, leq, actions)?,
        chains,
        tau,
    })
}

/// The single-element poset with trivial action.
pub fn point_poset(g: &Arc<PermGroup>) -> Result<GPoset> {
    let actions = vec![vec![0]; g.generators().len()];
    GPoset::new(g, vec!["*".into()], vec![vec![true]], actions)
}

/// A totally ordered poset `x0 < x1 < …` with trivial group.
pub fn chain_poset(n: usize) -> Result<GPoset> {
    let g = PermGroup::enumerate(1, vec![])?;
    let labels = (0..n).map(|i| format!("x{i}")).collect();
    let leq = (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect();
    GPoset::new(&g, labels, leq, vec![])
}

/// Face poset of the boundary of a triangle, with `C3` rotating it.
pub fn hollow_triangle() -> Result<GPoset> {
    let g = fixtures::cyclic(3)?;
    let labels = ["v0", "v1", "v2", "e01", "e12", "e20"].map(String::from).to_vec();
    let covers = [(0, 3), (1, 3), (1, 4), (2, 4), (2, 5), (0, 5)];
    GPoset::from_covers(&g, labels, &covers, vec![vec![1, 2, 0, 4, 5, 3]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{sylow_p, Perm};

    #[test]
    fn coset_examples() {
        let s3 = fixtures::symmetric(3).unwrap();
        let a3 = Subgroup::from_perms(&s3, &[Perm::parse_cycles("(0 1 2)", 3).unwrap()]).unwrap();
        let p = coset_poset(&s3, &a3).unwrap();
        assert_eq!(p.len(), 2);
        assert!(!p.leq(0, 1) && !p.leq(1, 0));
        assert_eq!(coset_poset(&s3, &Subgroup::whole(&s3)).unwrap().len(), 1);
        let s4 = fixtures::symmetric(4).unwrap();
        let q = coset_poset(&s4, &sylow_p(&s4, 2)).unwrap();
        assert_eq!(q.len(), 3);
        assert_eq!(q.orbits().len(), 1);
        assert_eq!(q.connected_components().len(), 3);
    }

    #[test]
    fn p_subgroup_examples() {
        let s3 = fixtures::symmetric(3).unwrap();
        let sp = p_subgroup_poset(&s3, 2, PSubgroupVariant::Sp).unwrap();
        assert_eq!(sp.len(), 3);
        assert_eq!(sp.connected_components().len(), 3);
        let sp1 = p_subgroup_poset(&s3, 2, PSubgroupVariant::Sp1).unwrap();
        assert_eq!(sp1.len(), 4);
        assert_eq!(sp1.connected_components().len(), 1);
        assert!(p_subgroup_poset(&s3, 5, PSubgroupVariant::Sp).unwrap().is_empty());
        let s4 = fixtures::symmetric(4).unwrap();
        let s2 = p_subgroup_poset(&s4, 2, PSubgroupVariant::Sp).unwrap();
        assert_eq!(s2.len(), 19);
        assert_eq!(s2.connected_components().len(), 1);
        assert!(p_subgroup_poset(&s4, 4, PSubgroupVariant::Sp).is_err());
    }

    /// Brute-force Bouc membership over every 2-subgroup, against the Fano incidence structure.
    #[test]
    fn gl32_bouc_poset_is_fano_flags() {
        let g = fixtures::gl32().unwrap();
        let b = p_subgroup_poset(&g, 2, PSubgroupVariant::Bp).unwrap();
        assert_eq!(b.len(), 35);
        let subs = b.subgroups().unwrap();
        let small: Vec<usize> = (0..35).filter(|&i| subs[i].order() == 4).collect();
        let big: Vec<usize> = (0..35).filter(|&i| subs[i].order() == 8).collect();
        assert_eq!((small.len(), big.len()), (14, 21));
        // each Sylow contains exactly two Bouc subgroups of order 4 (a flag = point + line)
        for &s in &big {
            assert_eq!(small.iter().filter(|&&v| b.lt(v, s)).count(), 2);
        }
        // each order-4 member lies in three Sylows (points on a line / lines through a point)
        for &v in &small {
            assert_eq!(big.iter().filter(|&&s| b.lt(v, s)).count(), 3);
        }
        // the order-4 members split into two orbits of 7: points and lines
        let mut orbit_sizes: Vec<usize> = b.orbits().iter().map(Vec::len).collect();
        orbit_sizes.sort();
        assert_eq!(orbit_sizes, vec![7, 7, 21]);
        // B_p sits inside S_p^1
        let all = all_p_subgroups(&g, 2, true);
        assert!(subs.iter().all(|v| all.contains(v)));
    }

    #[test]
    fn parabolic_orbits() {
        let g = fixtures::gl32().unwrap();
        let b = p_subgroup_poset(&g, 2, PSubgroupVariant::Bp).unwrap();
        let subs = b.subgroups().unwrap();
        let v4 = subs.iter().find(|v| v.order() == 4).unwrap();
        let p = parabolic_orbit_poset(&g, v4).unwrap();
        assert_eq!(p.len(), 7);
        assert_eq!(p.len(), v4.normalizer().index());
        let syl = sylow_p(&g, 2);
        assert_eq!(parabolic_orbit_poset(&g, &syl).unwrap().len(), 21);
        let s4 = fixtures::symmetric(4).unwrap();
        let klein = o_p(&Subgroup::whole(&s4), 2);
        assert_eq!(parabolic_orbit_poset(&s4, &klein).unwrap().len(), 1);
        let t = Subgroup::from_perms(&s4, &[Perm::parse_cycles("(0 1)", 4).unwrap()]).unwrap();
        assert!(matches!(parabolic_orbit_poset(&s4, &t), Err(Error::NotInBoucPoset(_))));
    }

    #[test]
    fn subdivision_examples() {
        let c = chain_poset(2).unwrap();
        let sd = barycentric_subdivision(&c).unwrap();
        assert_eq!(sd.poset.len(), 3);
        assert!(sd.poset.lt(0, 2) && sd.poset.lt(1, 2));
        assert_eq!(sd.tau, vec![0, 1, 1]);
        let s3 = fixtures::symmetric(3).unwrap();
        let sp = p_subgroup_poset(&s3, 2, PSubgroupVariant::Sp).unwrap();
        let sd = barycentric_subdivision(&sp).unwrap();
        assert_eq!(sd.poset.len(), 3);
        assert_eq!(sd.poset.connected_components().len(), 3);
        let tri = hollow_triangle().unwrap();
        let sd = barycentric_subdivision(&tri).unwrap();
        assert_eq!(sd.poset.len(), 12);
        assert_eq!(sd.poset.connected_components().len(), 1);
    }

    #[test]
    fn stabilizers_are_subgroups() {
        let s4 = fixtures::symmetric(4).unwrap();
        let s2 = p_subgroup_poset(&s4, 2, PSubgroupVariant::Sp).unwrap();
        for x in 0..s2.len() {
            let st = s2.stabilizer(x);
            assert_eq!(st, s2.subgroups().unwrap()[x].normalizer());
            assert_eq!(st.index(), s2.orbits().iter().find(|o| o.contains(&x)).unwrap().len());
        }
    }
}
