use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use super::perm::Perm;
use crate::error::{Error, Result};

/// Default bound on the order of an enumerated group.
pub const DEFAULT_ORDER_BOUND: usize = 20_000;

/// A finite permutation group with every element enumerated.
///
/// Elements are numbered in breadth-first order over generator words, with
/// generators tried in the order given; index 0 is the identity. Each element
/// remembers the word that reached it, so module matrices for arbitrary
/// elements can be formed from generator matrices.
pub struct PermGroup {
    name: Option<String>,
    degree: usize,
    generators: Vec<Perm>,
    generator_elements: Vec<usize>,
    elements: Vec<Perm>,
    lookup: HashMap<Perm, usize>,
    /// `elements[i] = elements[parent] * generators[gen]`
    tree: Vec<Option<(usize, usize)>>,
    inverse: Vec<usize>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl PermGroup {
    pub fn enumerate(degree: usize, generators: Vec<Perm>) -> Result<Arc<PermGroup>> {
        PermGroup::enumerate_bounded(degree, generators, DEFAULT_ORDER_BOUND)
    }

    pub fn enumerate_bounded(degree: usize, generators: Vec<Perm>, bound: usize) -> Result<Arc<PermGroup>> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::InvalidPermutation(format!(
                    "generator {g} has degree {} but the group has degree {degree}",
                    g.degree()
                )));
            }
        }
        let id = Perm::identity(degree);
        let mut elements = vec![id.clone()];
        let mut lookup = HashMap::from([(id, 0usize)]);
        let mut tree = vec![None];
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (k, s) in generators.iter().enumerate() {
                let y = elements[x].compose(s);
                if lookup.contains_key(&y) {
                    continue;
                }
                if elements.len() == bound {
                    return Err(Error::SizeBound { bound });
                }
                lookup.insert(y.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(y);
                tree.push(Some((x, k)));
            }
        }
        let generator_elements = generators.iter().map(|g| lookup[g]).collect();
        let inverse = elements.iter().map(|e| lookup[&e.inverse()]).collect();
        let mut group = PermGroup {
            name: None,
            degree,
            generators,
            generator_elements,
            elements,
            lookup,
            tree,
            inverse,
            classes: Vec::new(),
            class_of: Vec::new(),
        };
        group.compute_classes();
        Ok(Arc::new(group))
    }

    /// Parses generators in cycle notation.
    pub fn from_cycle_strings(degree: usize, generators: &[&str]) -> Result<Arc<PermGroup>> {
        let gens = generators
            .iter()
            .map(|s| Perm::parse_cycles(s, degree))
            .collect::<Result<Vec<_>>>()?;
        PermGroup::enumerate(degree, gens)
    }

    pub fn with_name(self: Arc<Self>, name: &str) -> Arc<PermGroup> {
        let mut g = Arc::try_unwrap(self).unwrap_or_else(|arc| arc.duplicate());
        g.name = Some(name.to_string());
        Arc::new(g)
    }

    fn duplicate(&self) -> PermGroup {
        PermGroup {
            name: self.name.clone(),
            degree: self.degree,
            generators: self.generators.clone(),
            generator_elements: self.generator_elements.clone(),
            elements: self.elements.clone(),
            lookup: self.lookup.clone(),
            tree: self.tree.clone(),
            inverse: self.inverse.clone(),
            classes: self.classes.clone(),
            class_of: self.class_of.clone(),
        }
    }

    fn compute_classes(&mut self) {
        let n = self.elements.len();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for start in 0..n {
            if class_of[start] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = vec![start];
            class_of[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &s in &self.generator_elements {
                    let y = self.conjugate(s, x);
                    if class_of[y] == usize::MAX {
                        class_of[y] = id;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// Element indices of the generators.
    pub fn generator_elements(&self) -> &[usize] {
        &self.generator_elements
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.lookup.get(p).copied()
    }

    pub const IDENTITY: usize = 0;

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.lookup[&self.elements[a].compose(&self.elements[b])]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `g x g⁻¹`
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        let p = self.elements[g]
            .compose(&self.elements[x])
            .compose(&self.elements[self.inverse[g]]);
        self.lookup[&p]
    }

    /// Generator indices `w` with `element(i) = gen[w0] * gen[w1] * …`.
    pub fn word(&self, i: usize) -> Vec<usize> {
        let mut w = Vec::new();
        let mut cur = i;
        while let Some((parent, k)) = self.tree[cur] {
            w.push(k);
            cur = parent;
        }
        w.reverse();
        w
    }

    /// Tree edge reaching `i`: `element(i) = element(parent) * gen[k]`.
    pub fn tree_edge(&self, i: usize) -> Option<(usize, usize)> {
        self.tree[i]
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut x = i;
        while x != Self::IDENTITY {
            x = self.mul(x, i);
            k += 1;
        }
        k
    }

    /// Conjugacy classes as sorted element-index lists, ordered by least member.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// The least element index in each class.
    pub fn class_representatives(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c[0]).collect()
    }

    /// Same degree and same enumerated element sequence.
    pub fn same_as(&self, other: &PermGroup) -> bool {
        std::ptr::eq(self, other) || (self.degree == other.degree && self.elements == other.elements)
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.order()
    }

    /// Largest power of `p` dividing the order.
    pub fn p_part(&self, p: usize) -> usize {
        let mut n = self.order();
        let mut part = 1;
        while n.is_multiple_of(p) {
            n /= p;
            part *= p;
        }
        part
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Closure by repeated multiplication of everything found so far.
    fn brute_force_order(degree: usize, gens: &[&str]) -> usize {
        let gens: Vec<Perm> = gens.iter().map(|s| Perm::parse_cycles(s, degree).unwrap()).collect();
        let mut set: HashSet<Perm> = HashSet::from([Perm::identity(degree)]);
        loop {
            let current: Vec<Perm> = set.iter().cloned().collect();
            let before = set.len();
            for a in &current {
                for g in &gens {
                    set.insert(a.compose(g));
                }
            }
            if set.len() == before {
                return set.len();
            }
        }
    }

    #[test]
    fn enumerate_examples() {
        let s3 = PermGroup::from_cycle_strings(3, &["(0 1)", "(0 1 2)"]).unwrap();
        assert_eq!(s3.order(), brute_force_order(3, &["(0 1)", "(0 1 2)"]));
        assert_eq!(s3.order(), 6);
        let trivial = PermGroup::enumerate(4, vec![]).unwrap();
        assert_eq!(trivial.order(), 1);
        let f21 = ["(0 1 2 3 4 5 6)", "(1 2 4)(3 6 5)"];
        let g = PermGroup::from_cycle_strings(7, &f21).unwrap();
        assert_eq!(g.order(), brute_force_order(7, &f21));
        assert_eq!(g.order(), 21);
    }

    #[test]
    fn size_bound_is_enforced() {
        let gens = vec![
            Perm::parse_cycles("(0 1)", 5).unwrap(),
            Perm::parse_cycles("(0 1 2 3 4)", 5).unwrap(),
        ];
        assert!(matches!(
            PermGroup::enumerate_bounded(5, gens, 100),
            Err(Error::SizeBound { bound: 100 })
        ));
    }

    #[test]
    fn words_reproduce_elements() {
        let g = PermGroup::from_cycle_strings(4, &["(0 1)", "(0 1 2 3)"]).unwrap();
        for i in 0..g.order() {
            let mut p = Perm::identity(4);
            for k in g.word(i) {
                p = p.compose(&g.generators()[k]);
            }
            assert_eq!(&p, g.element(i));
        }
    }

    #[test]
    fn class_examples() {
        let s3 = PermGroup::from_cycle_strings(3, &["(0 1)", "(0 1 2)"]).unwrap();
        let mut sizes = s3.class_sizes();
        assert_eq!(s3.classes()[0], vec![0]);
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        // brute-force conjugation orbits
        for c in s3.classes() {
            let orbit: HashSet<usize> = (0..6).map(|g| s3.conjugate(g, c[0])).collect();
            assert_eq!(orbit, c.iter().copied().collect());
        }
        assert_eq!(PermGroup::enumerate(2, vec![]).unwrap().num_classes(), 1);
        let c4 = PermGroup::from_cycle_strings(4, &["(0 1 2 3)"]).unwrap();
        assert_eq!(c4.num_classes(), 4);
        assert!(c4.is_abelian());
    }

    #[test]
    fn class_sizes_divide_order() {
        let g = PermGroup::from_cycle_strings(7, &["(0 1 2 3 4 5 6)", "(2 4)(5 6)"]).unwrap();
        assert_eq!(g.order(), 168);
        assert_eq!(g.class_sizes().iter().sum::<usize>(), 168);
        assert!(g.class_sizes().iter().all(|s| 168 % s == 0));
        assert_eq!(g.num_classes(), 6);
        let mut reps: Vec<usize> = g.class_representatives();
        reps.sort();
        assert_eq!(reps, g.class_representatives());
    }
}
