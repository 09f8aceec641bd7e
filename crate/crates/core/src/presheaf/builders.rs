use super::{invalid, GPresheaf};
use crate::algebra::{Echelon, Matrix};
use crate::error::{Error, Result};
use crate::gmodule::GModule;
use crate::gposet::{coset_poset, GPoset, Subdivision};
use crate::group::{PermGroup, Subgroup};

fn poset_identities(p: &GPoset, m: &GModule) -> Vec<((usize, usize), Matrix)> {
    let mut out = Vec::new();
    for x in 0..p.len() {
        for y in (0..p.len()).filter(|&y| p.lt(x, y)) {
            out.push(((x, y), Matrix::identity(m.field(), m.dim())));
        }
    }
    out
}

/// `κ_M`: fiber `M` everywhere, identities on relations, `ρ(s)` on generators.
pub fn constant_presheaf(p: &GPoset, m: &GModule) -> Result<GPresheaf> {
    if !m.group().same_as(p.group()) {
        return Err(Error::GroupMismatch("module and poset have different groups".into()));
    }
    let generators = m
        .generator_matrices()
        .iter()
        .map(|a| vec![a.clone(); p.len()])
        .collect();
    GPresheaf::new(p, m.field(), vec![m.dim(); p.len()], poset_identities(p, m), generators)
}

/// Fiber `N` at each coset of `H`; generator `s` at `g_jH` acts by `g_i⁻¹ s g_j ∈ H`
/// where `s g_jH = g_iH` and the `g`'s are least coset members.
pub fn coset_presheaf(g: &std::sync::Arc<PermGroup>, h: &Subgroup, n: &GModule) -> Result<GPresheaf> {
    if !n.group().same_as(h.as_group()) || n.group().generators() != h.as_group().generators() {
        return Err(Error::GroupMismatch("coefficient module is not over the subgroup".into()));
    }
    let poset = coset_poset(g, h)?;
    let reps: Vec<usize> = h.left_cosets().iter().map(|c| c[0]).collect();
    let generators = twisted_maps(&poset, &reps, h, n)?;
    GPresheaf::new(&poset, n.field(), vec![n.dim(); poset.len()], Vec::new(), generators)
}

/// `M_s(y) = ρ(t_{sy}⁻¹ s t_y)` for transversal elements `t` of an orbit with stabilizer `h`.
fn twisted_maps(poset: &GPoset, transversal: &[usize], h: &Subgroup, n: &GModule) -> Result<Vec<Vec<Matrix>>> {
    let g = poset.group();
    g.generator_elements()
        .iter()
        .map(|&s| {
            (0..poset.len())
                .map(|y| {
                    if transversal[y] == usize::MAX {
                        return Ok(Matrix::zeros(n.field(), 0, 0));
                    }
                    let sy = poset.act(s, y);
                    let k = g.mul(g.inv(transversal[sy]), g.mul(s, transversal[y]));
                    let local = h
                        .local_index(k)
                        .ok_or_else(|| Error::Internal("transversal element leaves the stabilizer".into()))?;
                    Ok((*n.matrix(local)).clone())
                })
                .collect()
        })
        .collect()
}

/// Fiber `M^V` at each subgroup `V`, in the echelon basis of the fixed space.
pub fn fixed_point_presheaf(p: &GPoset, m: &GModule) -> Result<GPresheaf> {
    if !m.group().same_as(p.group()) {
        return Err(Error::GroupMismatch("module and poset have different groups".into()));
    }
    let subgroups = p
        .subgroups()
        .ok_or_else(|| invalid("fixed points need a poset of subgroups"))?;
    let spaces: Vec<Echelon> = subgroups
        .iter()
        .map(|v| m.fixed_points(v).map(|b| Echelon::new(&b)))
        .collect::<Result<_>>()?;
    let coords = |target: usize, rows: &Matrix| -> Result<Matrix> {
        if rows.rows() == 0 {
            return Ok(Matrix::zeros(m.field(), 0, spaces[target].rank()));
        }
        spaces[target]
            .coordinates(rows)?
            .ok_or_else(|| Error::Internal("fixed space not carried into a smaller subgroup's fixed space".into()))
    };
    let mut relations = Vec::new();
    for x in 0..p.len() {
        for y in (0..p.len()).filter(|&y| p.lt(x, y)) {
            relations.push(((x, y), coords(x, spaces[y].basis())?));
        }
    }
    let g = p.group();
    let generators = g
        .generator_elements()
        .iter()
        .map(|&s| {
            let rho = m.matrix(s);
            (0..p.len())
                .map(|x| coords(x, &spaces[p.act(s, x)].basis().mul(&rho)?))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let dims = spaces.iter().map(Echelon::rank).collect();
    GPresheaf::new(p, m.field(), dims, relations, generators)
}

/// The presheaf supported on the orbit of `x` with fiber `V` there and zero
/// maps between distinct elements. Orbit elements `y = t_y x` use the first
/// `t_y` in enumeration order.
pub fn atomic_presheaf(p: &GPoset, x: usize, v: &GModule) -> Result<GPresheaf> {
    if x >= p.len() {
        return Err(invalid(format!("no element {x}")));
    }
    let stab = p.stabilizer(x);
    if !v.group().same_as(stab.as_group()) || v.group().generators() != stab.as_group().generators() {
        return Err(Error::GroupMismatch("coefficient module is not over the stabilizer".into()));
    }
    let g = p.group();
    let mut transversal = vec![usize::MAX; p.len()];
    for e in 0..g.order() {
        let y = p.act(e, x);
        if transversal[y] == usize::MAX {
            transversal[y] = e;
        }
    }
    let dims: Vec<usize> = transversal
        .iter()
        .map(|&t| if t == usize::MAX { 0 } else { v.dim() })
        .collect();
    let mut relations = Vec::new();
    for a in 0..p.len() {
        for b in (0..p.len()).filter(|&b| p.lt(a, b)) {
            relations.push(((a, b), Matrix::zeros(v.field(), dims[b], dims[a])));
        }
    }
    let generators = twisted_maps(p, &transversal, &stab, v)?;
    GPresheaf::new(p, v.field(), dims, relations, generators)
}

/// `τ*F` on a barycentric subdivision: the fiber at a chain is the fiber at its maximum.
pub fn pullback(sd: &Subdivision, f: &GPresheaf) -> Result<GPresheaf> {
    let q = &sd.poset;
    if !q.group().same_as(f.group()) {
        return Err(Error::GroupMismatch("subdivision of another poset".into()));
    }
    let tau = &sd.tau;
    let dims = tau.iter().map(|&t| f.dim(t)).collect();
    let mut relations = Vec::new();
    for a in 0..q.len() {
        for b in (0..q.len()).filter(|&b| q.lt(a, b)) {
            relations.push(((a, b), f.relation(tau[a], tau[b]).clone()));
        }
    }
    let generators = (0..q.group().generators().len())
        .map(|k| (0..q.len()).map(|c| f.generator_map(k, tau[c]).clone()).collect())
        .collect();
    GPresheaf::new(q, f.field(), dims, relations, generators)
}
