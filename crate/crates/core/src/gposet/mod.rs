//! Finite posets with an order-preserving group action.

mod builders;
mod transporter;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{PermGroup, Subgroup};

pub use builders::{
    barycentric_subdivision, chain_poset, coset_poset, hollow_triangle, p_subgroup_poset, parabolic_orbit_poset,
    point_poset, PSubgroupVariant, Subdivision,
};
pub use transporter::TransporterMorphism;

pub const POSET_SCHEMA_VERSION: u64 = 1;

/// A finite poset on `0..len` with `G` acting by automorphisms from the left.
#[derive(Clone)]
pub struct GPoset {
    group: Arc<PermGroup>,
    labels: Vec<String>,
    leq: Vec<bool>,
    /// `action[g][x] = ᵍx` for every group element `g`
    action: Vec<Vec<u32>>,
    /// Set when the elements are subgroups of `group`, acted on by conjugation.
    subgroups: Option<Vec<Subgroup>>,
}

impl fmt::Debug for GPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GPoset")
            .field("len", &self.len())
            .field("group_order", &self.group.order())
            .field("labels", &self.labels)
            .finish()
    }
}

impl GPoset {
    /// Builds and checks a G-poset from its full `≤` relation and one image
    /// array per group generator.
    pub fn new(
        group: &Arc<PermGroup>,
        labels: Vec<String>,
        leq: Vec<Vec<bool>>,
        generator_actions: Vec<Vec<usize>>,
    ) -> Result<GPoset> {
        let n = labels.len();
        let bad = |m: String| Error::InvalidPoset(m);
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(bad("order relation must be square over the elements".into()));
        }
        let flat: Vec<bool> = leq.into_iter().flatten().collect();
        let at = |x: usize, y: usize| flat[x * n + y];
        for x in 0..n {
            if !at(x, x) {
                return Err(bad(format!("{} is not below itself", labels[x])));
            }
            for y in 0..n {
                if x != y && at(x, y) && at(y, x) {
                    return Err(bad(format!("{} and {} violate antisymmetry", labels[x], labels[y])));
                }
                if !at(x, y) {
                    continue;
                }
                for z in 0..n {
                    if at(y, z) && !at(x, z) {
                        return Err(bad(format!("transitivity fails at {} ≤ {} ≤ {}", labels[x], labels[y], labels[z])));
                    }
                }
            }
        }
        if generator_actions.len() != group.generators().len() {
            return Err(bad("one action array per generator".into()));
        }
        for (k, images) in generator_actions.iter().enumerate() {
            let mut seen = vec![false; n];
            if images.len() != n || images.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
                return Err(bad(format!("generator {k} does not permute the elements")));
            }
            for x in 0..n {
                for y in 0..n {
                    if at(x, y) != at(images[x], images[y]) {
                        return Err(bad(format!("generator {k} is not an order automorphism")));
                    }
                }
            }
        }
        let action = extend_action(group, &generator_actions, n)?;
        Ok(GPoset {
            group: group.clone(),
            labels,
            leq: flat,
            action,
            subgroups: None,
        })
    }

    /// Builds from cover pairs `(x, y)` meaning `x < y`, taking the reflexive-transitive closure.
    pub fn from_covers(
        group: &Arc<PermGroup>,
        labels: Vec<String>,
        covers: &[(usize, usize)],
        generator_actions: Vec<Vec<usize>>,
    ) -> Result<GPoset> {
        let n = labels.len();
        let mut leq = vec![vec![false; n]; n];
        for (x, row) in leq.iter_mut().enumerate() {
            row[x] = true;
        }
        for &(x, y) in covers {
            if x >= n || y >= n {
                return Err(Error::InvalidPoset(format!("cover ({x}, {y}) out of range")));
            }
            leq[x][y] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        GPoset::new(group, labels, leq, generator_actions)
    }

    pub(crate) fn with_subgroups(mut self, subgroups: Vec<Subgroup>) -> GPoset {
        debug_assert_eq!(subgroups.len(), self.len());
        self.subgroups = Some(subgroups);
        self
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.len() + y]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    /// `ᵍx`
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g][x] as usize
    }

    pub fn subgroups(&self) -> Option<&[Subgroup]> {
        self.subgroups.as_deref()
    }

    pub fn stabilizer(&self, x: usize) -> Subgroup {
        let members: Vec<usize> = (0..self.group.order()).filter(|&g| self.act(g, x) == x).collect();
        Subgroup::from_members(&self.group, &members).expect("stabilizers are subgroups")
    }

    /// G-orbits, each sorted, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for x in 0..self.len() {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = (0..self.group.order()).map(|g| self.act(g, x)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn orbit_representatives(&self) -> Vec<usize> {
        self.orbits().into_iter().map(|o| o[0]).collect()
    }

    /// For each element `y`, the first group element (in enumeration order) carrying the
    /// least element of its orbit to `y`.
    pub fn transversal(&self) -> Vec<(usize, usize)> {
        let mut out = vec![(usize::MAX, usize::MAX); self.len()];
        for orbit in self.orbits() {
            let x = orbit[0];
            for g in 0..self.group.order() {
                let y = self.act(g, x);
                if out[y].0 == usize::MAX {
                    out[y] = (x, g);
                }
            }
        }
        out
    }

    pub fn is_maximal(&self, x: usize) -> bool {
        (0..self.len()).all(|y| !self.lt(x, y))
    }

    pub fn is_minimal(&self, x: usize) -> bool {
        (0..self.len()).all(|y| !self.lt(y, x))
    }

    /// Connected components of the comparability graph, each sorted, ordered by least element.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for y in 0..n {
                    if comp[y] == usize::MAX && (self.leq(x, y) || self.leq(y, x)) {
                        comp[y] = id;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Number of G-orbits on connected components; `P⋊G` is connected when this is 1.
    pub fn component_orbit_count(&self) -> usize {
        let comps = self.connected_components();
        let mut comp_of = vec![0; self.len()];
        for (i, c) in comps.iter().enumerate() {
            for &x in c {
                comp_of[x] = i;
            }
        }
        let mut seen = vec![false; comps.len()];
        let mut count = 0;
        for i in 0..comps.len() {
            if seen[i] {
                continue;
            }
            count += 1;
            for g in 0..self.group.order() {
                seen[comp_of[self.act(g, comps[i][0])]] = true;
            }
        }
        count
    }

    /// Strictly increasing chains grouped by length − 1, each degree in lexicographic order.
    pub fn chains(&self) -> Vec<Vec<Vec<usize>>> {
        let n = self.len();
        let above: Vec<Vec<usize>> = (0..n).map(|x| (0..n).filter(|&y| self.lt(x, y)).collect()).collect();
        let mut out: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        fn walk(above: &[Vec<usize>], stack: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
            let d = stack.len() - 1;
            if out.len() <= d {
                out.resize(d + 1, Vec::new());
            }
            out[d].push(stack.clone());
            let last = *stack.last().expect("nonempty chain");
            for &y in &above[last] {
                stack.push(y);
                walk(above, stack, out);
                stack.pop();
            }
        }
        for x in 0..n {
            stack.push(x);
            walk(&above, &mut stack, &mut out);
            stack.pop();
        }
        for level in &mut out {
            level.sort();
        }
        out
    }

    /// The elements in `elements`, as a poset for a subgroup `h` that must preserve them.
    pub fn restrict(&self, h: &Subgroup, elements: &[usize]) -> Result<GPoset> {
        if !h.parent().same_as(&self.group) {
            return Err(Error::GroupMismatch("restriction to a subgroup of another group".into()));
        }
        let mut pos = HashMap::new();
        for (i, &x) in elements.iter().enumerate() {
            pos.insert(x, i);
        }
        let local = h.as_group();
        let emb = h.embedding();
        let gen_actions = local
            .generator_elements()
            .iter()
            .map(|&s| {
                elements
                    .iter()
                    .map(|&x| {
                        pos.get(&self.act(emb[s], x))
                            .copied()
                            .ok_or_else(|| Error::InvalidPoset("subset is not stable under the subgroup".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let leq = elements
            .iter()
            .map(|&x| elements.iter().map(|&y| self.leq(x, y)).collect())
            .collect();
        let labels = elements.iter().map(|&x| self.labels[x].clone()).collect();
        GPoset::new(local, labels, leq, gen_actions)
    }

    /// `P_{<x}` as a `G_x`-poset.
    pub fn lower_interval(&self, x: usize) -> Result<GPoset> {
        let below: Vec<usize> = (0..self.len()).filter(|&y| self.lt(y, x)).collect();
        self.restrict(&self.stabilizer(x), &below)
    }

    /// `P_{>x}` as a `G_x`-poset.
    pub fn upper_interval(&self, x: usize) -> Result<GPoset> {
        let above: Vec<usize> = (0..self.len()).filter(|&y| self.lt(x, y)).collect();
        self.restrict(&self.stabilizer(x), &above)
    }

    /// Image arrays of the group generators.
    pub fn generator_actions(&self) -> Vec<Vec<usize>> {
        self.group
            .generator_elements()
            .iter()
            .map(|&s| (0..self.len()).map(|x| self.act(s, x)).collect())
            .collect()
    }

    /// Cover pairs `(x, y)`: `x < y` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.lt(x, y) && !(0..n).any(|z| self.lt(x, z) && self.lt(z, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": POSET_SCHEMA_VERSION,
            "labels": self.labels,
            "covers": self.covers().iter().map(|&(x, y)| json!([x, y])).collect::<Vec<_>>(),
            "actions": self.generator_actions(),
        })
    }

    /// Reads `{"labels": [...], "covers": [[x, y], ...], "actions": [[...], ...]}`.
    pub fn from_json(group: &Arc<PermGroup>, v: &Value) -> Result<GPoset> {
        let schema = |m: &str| Error::Schema(format!("poset file: {m}"));
        match v.get("schema_version").and_then(Value::as_u64) {
            Some(POSET_SCHEMA_VERSION) => {}
            _ => return Err(schema("missing or unsupported schema_version")),
        }
        let labels = v
            .get("labels")
            .and_then(Value::as_array)
            .ok_or_else(|| schema("labels"))?
            .iter()
            .map(|l| l.as_str().map(str::to_string).ok_or_else(|| schema("label must be a string")))
            .collect::<Result<Vec<_>>>()?;
        let index = |x: &Value| x.as_u64().map(|i| i as usize).ok_or_else(|| schema("index"));
        let covers = v
            .get("covers")
            .and_then(Value::as_array)
            .ok_or_else(|| schema("covers"))?
            .iter()
            .map(|c| match c.as_array().map(Vec::as_slice) {
                Some([a, b]) => Ok((index(a)?, index(b)?)),
                _ => Err(schema("cover must be a pair")),
            })
            .collect::<Result<Vec<_>>>()?;
        let actions = v
            .get("actions")
            .and_then(Value::as_array)
            .ok_or_else(|| schema("actions"))?
            .iter()
            .map(|a| {
                a.as_array()
                    .ok_or_else(|| schema("action must be an array"))?
                    .iter()
                    .map(index)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        GPoset::from_covers(group, labels, &covers, actions)
    }
}

/// Extends generator image arrays to every element along the enumeration tree
/// and checks `act(g·s) = act(g)∘act(s)` for every element `g` and generator `s`,
/// which makes the extension a homomorphism.
fn extend_action(group: &PermGroup, gens: &[Vec<usize>], n: usize) -> Result<Vec<Vec<u32>>> {
    let mut action: Vec<Vec<u32>> = Vec::with_capacity(group.order());
    action.push((0..n as u32).collect());
    for i in 1..group.order() {
        let (parent, k) = group.tree_edge(i).expect("non-identity has a parent");
        let row = (0..n).map(|x| action[parent][gens[k][x]]).collect();
        action.push(row);
    }
    for g in 0..group.order() {
        for (k, &s) in group.generator_elements().iter().enumerate() {
            let gs = group.mul(g, s);
            if (0..n).any(|x| action[gs][x] != action[g][gens[k][x]]) {
                return Err(Error::InvalidPoset("generator images do not define a group action".into()));
            }
        }
    }
    Ok(action)
}
