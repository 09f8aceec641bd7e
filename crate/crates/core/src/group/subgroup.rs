use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use super::perm::Perm;
use super::perm_group::PermGroup;
use crate::error::{Error, Result};

/// A subgroup of an enumerated group, stored as its sorted member indices.
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<PermGroup>,
    members: Vec<usize>,
    mask: Vec<bool>,
    group: OnceLock<Arc<PermGroup>>,
    embedding: OnceLock<Vec<usize>>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && self.parent.same_as(&other.parent)
    }
}

impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {}, <", self.order())?;
        let gens: Vec<String> = self.generators().iter().map(|&g| self.parent.element(g).to_string()).collect();
        write!(f, "{}>)", gens.join(", "))
    }
}

impl Subgroup {
    fn from_sorted(parent: Arc<PermGroup>, members: Vec<usize>) -> Subgroup {
        let mut mask = vec![false; parent.order()];
        for &m in &members {
            mask[m] = true;
        }
        Subgroup {
            parent,
            members,
            mask,
            group: OnceLock::new(),
            embedding: OnceLock::new(),
        }
    }

    pub fn whole(parent: &Arc<PermGroup>) -> Subgroup {
        Subgroup::from_sorted(parent.clone(), (0..parent.order()).collect())
    }

    pub fn trivial(parent: &Arc<PermGroup>) -> Subgroup {
        Subgroup::from_sorted(parent.clone(), vec![PermGroup::IDENTITY])
    }

    /// The subgroup generated by the given element indices.
    pub fn generated(parent: &Arc<PermGroup>, gens: &[usize]) -> Subgroup {
        let mut mask = vec![false; parent.order()];
        mask[PermGroup::IDENTITY] = true;
        let mut members = vec![PermGroup::IDENTITY];
        let mut queue = VecDeque::from([PermGroup::IDENTITY]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = parent.mul(x, s);
                if !mask[y] {
                    mask[y] = true;
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
        members.sort_unstable();
        Subgroup {
            parent: parent.clone(),
            members,
            mask,
            group: OnceLock::new(),
            embedding: OnceLock::new(),
        }
    }

    pub fn from_perms(parent: &Arc<PermGroup>, gens: &[Perm]) -> Result<Subgroup> {
        let idx = gens
            .iter()
            .map(|p| {
                parent
                    .index_of(p)
                    .ok_or_else(|| Error::InvalidSubgroup(format!("{p} is not in the group")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Subgroup::generated(parent, &idx))
    }

    /// Checks closure before accepting an explicit member list.
    pub fn from_members(parent: &Arc<PermGroup>, members: &[usize]) -> Result<Subgroup> {
        let mut sorted: Vec<usize> = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.iter().any(|&m| m >= parent.order()) {
            return Err(Error::InvalidSubgroup("member index out of range".into()));
        }
        let h = Subgroup::from_sorted(parent.clone(), sorted);
        if !h.contains(PermGroup::IDENTITY) {
            return Err(Error::InvalidSubgroup("identity missing".into()));
        }
        for &a in &h.members {
            if !h.contains(parent.inv(a)) {
                return Err(Error::InvalidSubgroup("not closed under inverses".into()));
            }
            for &b in &h.members {
                if !h.contains(parent.mul(a, b)) {
                    return Err(Error::InvalidSubgroup("not closed under products".into()));
                }
            }
        }
        Ok(h)
    }

    pub fn parent(&self) -> &Arc<PermGroup> {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.order()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.mask[g]
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.order() <= other.order() && self.members.iter().all(|&m| other.contains(m))
    }

    /// Greedy generating set: members in index order that enlarge the span.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = Subgroup::trivial(&self.parent);
        for &m in &self.members {
            if span.order() == self.order() {
                break;
            }
            if !span.contains(m) {
                gens.push(m);
                span = Subgroup::generated(&self.parent, &gens);
            }
        }
        gens
    }

    /// The subgroup as a group in its own right, enumerated from its generators.
    pub fn as_group(&self) -> &Arc<PermGroup> {
        self.group.get_or_init(|| {
            let gens = self.generators().iter().map(|&g| self.parent.element(g).clone()).collect();
            PermGroup::enumerate(self.parent.degree(), gens).expect("subgroup of an enumerated group")
        })
    }

    /// Maps element indices of `as_group()` to element indices of the parent.
    pub fn embedding(&self) -> &[usize] {
        self.embedding.get_or_init(|| {
            self.as_group()
                .elements()
                .iter()
                .map(|p| self.parent.index_of(p).expect("subgroup element"))
                .collect()
        })
    }

    /// Parent element index to `as_group()` element index.
    pub fn local_index(&self, g: usize) -> Option<usize> {
        if !self.contains(g) {
            return None;
        }
        self.as_group().index_of(self.parent.element(g))
    }

    /// `g H g⁻¹`
    pub fn conjugate(&self, g: usize) -> Subgroup {
        let mut members: Vec<usize> = self.members.iter().map(|&h| self.parent.conjugate(g, h)).collect();
        members.sort_unstable();
        Subgroup::from_sorted(self.parent.clone(), members)
    }

    pub fn normalizes(&self, g: usize) -> bool {
        self.generators().iter().all(|&h| self.contains(self.parent.conjugate(g, h)))
    }

    pub fn normalizer(&self) -> Subgroup {
        let gens = self.generators();
        let members: Vec<usize> = (0..self.parent.order())
            .filter(|&g| gens.iter().all(|&h| self.contains(self.parent.conjugate(g, h))))
            .collect();
        Subgroup::from_sorted(self.parent.clone(), members)
    }

    pub fn is_normal(&self) -> bool {
        self.parent.generator_elements().iter().all(|&g| self.normalizes(g))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let members = self.members.iter().copied().filter(|&m| other.contains(m)).collect();
        Subgroup::from_sorted(self.parent.clone(), members)
    }

    /// Smallest subgroup containing both.
    pub fn join(&self, other: &Subgroup) -> Subgroup {
        let mut gens = self.generators();
        gens.extend(other.generators());
        Subgroup::generated(&self.parent, &gens)
    }

    /// Left cosets `gH` as sorted member lists, ordered by least member.
    pub fn left_cosets(&self) -> Vec<Vec<usize>> {
        let n = self.parent.order();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for g in 0..n {
            if seen[g] {
                continue;
            }
            let mut coset: Vec<usize> = self.members.iter().map(|&h| self.parent.mul(g, h)).collect();
            coset.sort_unstable();
            for &x in &coset {
                seen[x] = true;
            }
            out.push(coset);
        }
        out
    }

    /// Canonical label of the conjugacy class: the least conjugate member list.
    pub fn conjugacy_key(&self) -> Vec<usize> {
        (0..self.parent.order())
            .map(|g| self.conjugate(g).members)
            .min()
            .expect("nonempty group")
    }

    /// Representatives of the distinct conjugates in first-found order with their conjugating element.
    pub fn conjugates(&self) -> Vec<(usize, Subgroup)> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for g in 0..self.parent.order() {
            let c = self.conjugate(g);
            if seen.insert(c.members.clone()) {
                out.push((g, c));
            }
        }
        out
    }

    pub fn label(&self) -> String {
        let gens: Vec<String> = self.generators().iter().map(|&g| self.parent.element(g).to_string()).collect();
        format!("<{}>", gens.join(", "))
    }
}

fn is_p_power(mut n: usize, p: usize) -> bool {
    while n > 1 {
        if !n.is_multiple_of(p) {
            return false;
        }
        n /= p;
    }
    true
}

/// Non-identity elements whose order is a power of `p`.
pub fn p_elements(g: &PermGroup, p: usize) -> Vec<usize> {
    (1..g.order()).filter(|&x| is_p_power(g.element_order(x), p)).collect()
}

/// A Sylow `p`-subgroup, grown greedily by normalizing `p`-elements.
pub fn sylow_p(g: &Arc<PermGroup>, p: usize) -> Subgroup {
    let target = g.p_part(p);
    let pe = p_elements(g, p);
    let mut q = Subgroup::trivial(g);
    while q.order() < target {
        // Any p-subgroup short of Sylow order is properly contained in its
        // normalizer inside some Sylow, so a normalizing p-element exists.
        let x = pe
            .iter()
            .copied()
            .find(|&x| !q.contains(x) && q.normalizes(x))
            .expect("p-subgroup below Sylow order has a normalizing p-element");
        let mut gens = q.generators();
        gens.push(x);
        q = Subgroup::generated(g, &gens);
    }
    q
}

/// Every `p`-subgroup exactly once, sorted by order and then by members.
pub fn all_p_subgroups(g: &Arc<PermGroup>, p: usize, include_trivial: bool) -> Vec<Subgroup> {
    let pe = p_elements(g, p);
    let mut known: BTreeMap<Vec<usize>, Subgroup> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for &x in &pe {
        let c = Subgroup::generated(g, &[x]);
        if !known.contains_key(&c.members) {
            known.insert(c.members.clone(), c.clone());
            queue.push_back(c);
        }
    }
    while let Some(q) = queue.pop_front() {
        let gens = q.generators();
        for &x in &pe {
            if q.contains(x) || !q.normalizes(x) {
                continue;
            }
            let mut ext = gens.clone();
            ext.push(x);
            let r = Subgroup::generated(g, &ext);
            if !known.contains_key(&r.members) {
                known.insert(r.members.clone(), r.clone());
                queue.push_back(r);
            }
        }
    }
    let mut out: Vec<Subgroup> = known.into_values().collect();
    if include_trivial {
        out.push(Subgroup::trivial(g));
    }
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members.cmp(&b.members)));
    out
}

/// `O_p(H)`: the intersection of all Sylow `p`-subgroups of `h`.
pub fn o_p(h: &Subgroup, p: usize) -> Subgroup {
    let local = h.as_group();
    let sylow = sylow_p(local, p);
    let mut core = sylow.clone();
    for x in 0..local.order() {
        core = core.intersection(&sylow.conjugate(x));
    }
    let members: Vec<usize> = core.members().iter().map(|&m| h.embedding()[m]).collect();
    Subgroup::from_members(h.parent(), &members).expect("intersection of subgroups")
}

/// Every subgroup, by joining cyclic subgroups until nothing new appears.
pub fn all_subgroups(g: &Arc<PermGroup>) -> Vec<Subgroup> {
    let mut cyclic: BTreeMap<Vec<usize>, Subgroup> = BTreeMap::new();
    for x in 0..g.order() {
        let c = Subgroup::generated(g, &[x]);
        cyclic.entry(c.members.clone()).or_insert(c);
    }
    let cyclic: Vec<Subgroup> = cyclic.into_values().collect();
    let mut known: BTreeMap<Vec<usize>, Subgroup> =
        cyclic.iter().map(|c| (c.members.clone(), c.clone())).collect();
    let mut queue: VecDeque<Subgroup> = cyclic.iter().cloned().collect();
    while let Some(h) = queue.pop_front() {
        for c in &cyclic {
            if c.is_subgroup_of(&h) {
                continue;
            }
            let j = h.join(c);
            if !known.contains_key(&j.members) {
                known.insert(j.members.clone(), j.clone());
                queue.push_back(j);
            }
        }
    }
    let mut out: Vec<Subgroup> = known.into_values().collect();
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members.cmp(&b.members)));
    out
}

/// One subgroup per conjugacy class, the representative being the least conjugate.
pub fn subgroups_up_to_conjugacy(g: &Arc<PermGroup>) -> Vec<Subgroup> {
    let mut classes: BTreeMap<Vec<usize>, Subgroup> = BTreeMap::new();
    for h in all_subgroups(g) {
        let key = h.conjugacy_key();
        if key == h.members {
            classes.insert(key, h);
        }
    }
    let mut out: Vec<Subgroup> = classes.into_values().collect();
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members.cmp(&b.members)));
    out
}
