//! The chain complex `C_i = ⊕_{x_0<…<x_i} F(x_i)` of a presheaf, its homology
//! as `G`-modules, Lefschetz characters and augmented cones.

use std::collections::HashMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::algebra::{row_quotient, Echelon, Field, Matrix, SparseBuilder, SparseMatrix};
use crate::error::{Error, Result};
use crate::gmodule::GModule;
use crate::gposet::{barycentric_subdivision, GPoset};
use crate::group::{CharacterTable, ClassFunction, PermGroup};
use crate::presheaf::{constant_presheaf, pullback, GPresheaf};

#[derive(Clone, Debug)]
enum Source {
    Chains {
        presheaf: Arc<GPresheaf>,
        chains: Vec<Vec<usize>>,
        offsets: Vec<usize>,
    },
    Module(GModule),
}

#[derive(Clone, Debug)]
struct Term {
    dim: usize,
    source: Source,
}

/// A bounded complex of right `G`-modules. `differentials[k]` maps term `k + 1`
/// to term `k` and is stored as a `dim_{k+1} × dim_k` matrix.
#[derive(Clone, Debug)]
pub struct EquivariantComplex {
    group: Arc<PermGroup>,
    field: Field,
    min_degree: i64,
    terms: Vec<Term>,
    differentials: Vec<SparseMatrix>,
    /// `actions[k][j]`: generator `j` on term `k`
    actions: Vec<Vec<SparseMatrix>>,
}

fn sign(k: i64) -> bool {
    k % 2 != 0
}

/// `C_*(P; F)` with the simplicial differential whose last face applies `F(x_{i−1} ≤ x_i)`
/// and the action sending the summand at `c` to the summand at `g⁻¹c`.
pub fn build_complex(f: &GPresheaf) -> Result<EquivariantComplex> {
    let f = Arc::new(f.clone());
    let p = f.poset();
    let g = p.group().clone();
    let field = f.field();
    let by_degree = p.chains();
    let mut terms = Vec::with_capacity(by_degree.len());
    let mut index: Vec<HashMap<Vec<usize>, usize>> = Vec::with_capacity(by_degree.len());
    for chains in by_degree {
        let mut offsets = Vec::with_capacity(chains.len());
        let mut dim = 0;
        for c in &chains {
            offsets.push(dim);
            dim += f.dim(*c.last().expect("nonempty chain"));
        }
        index.push(chains.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect());
        terms.push(Term {
            dim,
            source: Source::Chains {
                presheaf: f.clone(),
                chains,
                offsets,
            },
        });
    }
    let chain_data = |k: usize| match &terms[k].source {
        Source::Chains { chains, offsets, .. } => (chains, offsets),
        Source::Module(_) => unreachable!("chain terms only"),
    };
    let mut differentials = Vec::new();
    for i in 1..terms.len() {
        let (chains, offsets) = chain_data(i);
        let (_, face_offsets) = chain_data(i - 1);
        let mut b = SparseBuilder::new(field, terms[i].dim, terms[i - 1].dim);
        for (c, &o) in chains.iter().zip(offsets) {
            let top = c[i];
            for t in 0..=i {
                let mut face = c.clone();
                face.remove(t);
                let fo = face_offsets[index[i - 1][&face]];
                if t < i {
                    b.add_identity(o, fo, f.dim(top), sign(t as i64))?;
                } else {
                    b.add_block(o, fo, f.relation(c[i - 1], top), sign(i as i64))?;
                }
            }
        }
        differentials.push(b.finish());
    }
    let gen_inv: Vec<usize> = g.generator_elements().iter().map(|&s| g.inv(s)).collect();
    let mut actions = Vec::with_capacity(terms.len());
    for (i, term) in terms.iter().enumerate() {
        let (chains, offsets) = chain_data(i);
        let mut per_gen = Vec::with_capacity(gen_inv.len());
        for (k, &sinv) in gen_inv.iter().enumerate() {
            let mut b = SparseBuilder::new(field, term.dim, term.dim);
            for (c, &o) in chains.iter().zip(offsets) {
                let image: Vec<usize> = c.iter().map(|&x| p.act(sinv, x)).collect();
                let target = offsets[index[i][&image]];
                b.add_block(o, target, f.generator_map(k, image[i]), false)?;
            }
            per_gen.push(b.finish());
        }
        actions.push(per_gen);
    }
    Ok(EquivariantComplex {
        group: g,
        field,
        min_degree: 0,
        terms,
        differentials,
        actions,
    })
}

/// The augmentation `C_*(P; κ_M) → M` as a complex with `M` in degree −1.
pub fn augmented_cone(c: &EquivariantComplex, m: &GModule) -> Result<EquivariantComplex> {
    if c.min_degree != 0 || !m.group().same_as(&c.group) || m.field() != c.field {
        return Err(Error::NotConstant("augmentation needs a chain complex over the module's group".into()));
    }
    if let Some(Term {
        source: Source::Chains { presheaf, .. },
        ..
    }) = c.terms.first()
    {
        let p = presheaf.poset();
        let expected = constant_presheaf(p, m)?;
        let same = presheaf.dims() == expected.dims()
            && presheaf.generator_maps() == expected.generator_maps()
            && (0..p.len()).all(|x| (0..p.len()).filter(|&y| p.lt(x, y)).all(|y| presheaf.relation(x, y).is_identity()));
        if !same {
            return Err(Error::NotConstant("coefficients are not the constant presheaf of the module".into()));
        }
    }
    let mut terms = vec![Term {
        dim: m.dim(),
        source: Source::Module(m.clone()),
    }];
    terms.extend(c.terms.iter().cloned());
    let mut differentials = Vec::with_capacity(c.differentials.len() + 1);
    let mut actions = vec![m
        .generator_matrices()
        .iter()
        .map(SparseMatrix::from_dense)
        .collect::<Vec<_>>()];
    actions.extend(c.actions.iter().cloned());
    if let Some(c0) = c.terms.first() {
        let mut b = SparseBuilder::new(c.field, c0.dim, m.dim());
        for block in 0..c0.dim / m.dim().max(1) {
            b.add_identity(block * m.dim(), 0, m.dim(), false)?;
        }
        differentials.push(b.finish());
    }
    differentials.extend(c.differentials.iter().cloned());
    Ok(EquivariantComplex {
        group: c.group.clone(),
        field: c.field,
        min_degree: -1,
        terms,
        differentials,
        actions,
    })
}

/// Reduced chains of `P` with coefficients in `M`: the augmented complex of `κ_M`.
pub fn reduced_complex(p: &GPoset, m: &GModule) -> Result<EquivariantComplex> {
    augmented_cone(&build_complex(&constant_presheaf(p, m)?)?, m)
}

impl EquivariantComplex {
    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degrees `min_degree, min_degree + 1, …` paired with term dimensions.
    pub fn dims(&self) -> Vec<(i64, usize)> {
        self.terms
            .iter()
            .enumerate()
            .map(|(k, t)| (self.min_degree + k as i64, t.dim))
            .collect()
    }

    /// `∂` out of the term at position `k + 1`.
    pub fn differential(&self, k: usize) -> &SparseMatrix {
        &self.differentials[k]
    }

    pub fn generator_action(&self, k: usize, j: usize) -> &SparseMatrix {
        &self.actions[k][j]
    }

    /// `Σ (−1)^i dim C_i`
    pub fn euler_characteristic(&self) -> i64 {
        self.dims()
            .iter()
            .map(|&(d, n)| if sign(d) { -(n as i64) } else { n as i64 })
            .sum()
    }

    /// Action of an arbitrary element on term `k`.
    pub fn element_action(&self, g: usize, k: usize) -> Result<SparseMatrix> {
        let term = &self.terms[k];
        match &term.source {
            Source::Module(m) => Ok(SparseMatrix::from_dense(&m.matrix(g))),
            Source::Chains {
                presheaf,
                chains,
                offsets,
            } => {
                let p = presheaf.poset();
                let ginv = self.group.inv(g);
                let index: HashMap<&[usize], usize> =
                    chains.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
                let mut b = SparseBuilder::new(self.field, term.dim, term.dim);
                for (c, &o) in chains.iter().zip(offsets) {
                    let image: Vec<usize> = c.iter().map(|&x| p.act(ginv, x)).collect();
                    let top = *image.last().expect("nonempty chain");
                    b.add_block(o, offsets[index[image.as_slice()]], &presheaf.group_map(g, top), false)?;
                }
                Ok(b.finish())
            }
        }
    }

    /// Trace of `g` on term `k`, summing only over chains that `g` fixes.
    pub fn trace(&self, g: usize, k: usize) -> Result<BigRational> {
        if !self.field.is_rational() {
            return Err(Error::UnsupportedField(self.field));
        }
        let rational = |m: &Matrix| m.trace().as_rational().cloned().expect("rational");
        match &self.terms[k].source {
            Source::Module(m) => Ok(rational(&m.matrix(g))),
            Source::Chains { presheaf, chains, .. } => {
                let p = presheaf.poset();
                let mut total = BigRational::zero();
                for c in chains {
                    if c.iter().all(|&x| p.act(g, x) == x) {
                        total += rational(&presheaf.group_map(g, *c.last().expect("nonempty chain")));
                    }
                }
                Ok(total)
            }
        }
    }

    /// `Σ (−1)^i χ_{C_i}` from chain-level traces.
    pub fn lefschetz_character(&self) -> Result<ClassFunction> {
        if !self.field.is_rational() {
            return Err(Error::UnsupportedField(self.field));
        }
        let mut values = Vec::with_capacity(self.group.num_classes());
        for rep in self.group.class_representatives() {
            let mut v = BigRational::zero();
            for k in 0..self.terms.len() {
                let t = self.trace(rep, k)?;
                if sign(self.min_degree + k as i64) {
                    v -= t;
                } else {
                    v += t;
                }
            }
            values.push(v);
        }
        ClassFunction::from_rationals(&self.group, values)
    }

    /// `∂² = 0`, generator actions commute with `∂`, and element actions
    /// multiply correctly on a deterministic sample of pairs.
    pub fn check_invariants(&self) -> Result<()> {
        for k in 1..self.differentials.len() {
            if !self.differentials[k].mul(&self.differentials[k - 1])?.is_zero() {
                return Err(Error::Internal(format!("∂∘∂ ≠ 0 at position {k}")));
            }
        }
        for (k, d) in self.differentials.iter().enumerate() {
            for j in 0..self.group.generators().len() {
                let left = self.actions[k + 1][j].mul(d)?;
                let right = d.mul(&self.actions[k][j])?;
                if left != right {
                    return Err(Error::Internal(format!("generator {j} does not commute with ∂ at position {k}")));
                }
            }
        }
        let n = self.group.order();
        let pairs: Vec<(usize, usize)> = if n * n <= 256 {
            (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect()
        } else {
            (0..64).map(|i| ((i * 7919 + 3) % n, (i * 104_729 + 11) % n)).collect()
        };
        for k in 0..self.terms.len() {
            for &(a, b) in &pairs {
                let ab = self.element_action(a, k)?.mul(&self.element_action(b, k)?)?;
                if ab != self.element_action(self.group.mul(a, b), k)? {
                    return Err(Error::Internal(format!("chain action is not multiplicative on term {k}")));
                }
            }
        }
        Ok(())
    }

    /// Homology dimensions from sparse ranks, without module structure.
    pub fn betti_numbers(&self) -> Vec<(i64, usize)> {
        let ranks: Vec<usize> = self.differentials.iter().map(SparseMatrix::rank).collect();
        (0..self.terms.len())
            .map(|k| {
                let out = if k > 0 { ranks[k - 1] } else { 0 };
                let inn = ranks.get(k).copied().unwrap_or(0);
                (self.min_degree + k as i64, self.terms[k].dim - out - inn)
            })
            .collect()
    }
}

/// One homology group with its cycle representatives and induced action.
#[derive(Clone, Debug)]
pub struct HomologyGroup {
    pub degree: i64,
    /// rows are cycles in the chain group, independent modulo boundaries
    pub representatives: Matrix,
    pub module: GModule,
}

impl HomologyGroup {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }
}

#[derive(Clone, Debug)]
pub struct HomologyResult {
    pub groups: Vec<HomologyGroup>,
}

/// `H_k = ker ∂ / im ∂` per degree, with the action computed on representatives
/// modulo boundaries.
pub fn homology(c: &EquivariantComplex) -> Result<HomologyResult> {
    let field = c.field;
    let mut groups = Vec::with_capacity(c.terms.len());
    if !c.terms.is_empty() {
        groups.push(lowest_homology(c)?);
    }
    for k in 1..c.terms.len() {
        let dim = c.terms[k].dim;
        let cycles = c.differentials[k - 1].to_dense().left_kernel_basis();
        let boundaries = match c.differentials.get(k) {
            Some(d) => Echelon::new(&d.to_dense()),
            None => Echelon::empty(field, dim),
        };
        let classes = Echelon::new(&boundaries.reduce(&cycles)?);
        let reps = classes.basis().clone();
        let mut gens = Vec::with_capacity(c.group.generators().len());
        for action in &c.actions[k] {
            let image = boundaries.reduce(&action.left_mul_dense(&reps)?)?;
            let coords = if reps.rows() == 0 {
                Matrix::zeros(field, 0, 0)
            } else {
                classes
                    .coordinates(&image)?
                    .ok_or_else(|| Error::Internal("action does not preserve homology classes".into()))?
            };
            gens.push(coords);
        }
        let module = GModule::new(&c.group, field, reps.rows(), gens)?;
        groups.push(HomologyGroup {
            degree: c.min_degree + k as i64,
            representatives: reps,
            module,
        });
    }
    Ok(HomologyResult { groups })
}

/// The bottom homology group as a quotient by boundaries, by sparse
/// elimination; representatives are standard basis vectors.
pub fn lowest_homology(c: &EquivariantComplex) -> Result<HomologyGroup> {
    let term = c
        .terms
        .first()
        .ok_or_else(|| Error::Internal("empty complex has no bottom degree".into()))?;
    let maps: Vec<&SparseMatrix> = c.actions[0].iter().collect();
    let (free, gens) = row_quotient(c.field, term.dim, c.differentials.first(), &maps)?;
    let mut reps = Matrix::zeros(c.field, free.len(), term.dim);
    for (i, &j) in free.iter().enumerate() {
        reps.set(i, j, c.field.one())?;
    }
    Ok(HomologyGroup {
        degree: c.min_degree,
        representatives: reps,
        module: GModule::new(&c.group, c.field, free.len(), gens)?,
    })
}

impl HomologyResult {
    pub fn degree(&self, d: i64) -> Option<&HomologyGroup> {
        self.groups.iter().find(|h| h.degree == d)
    }

    /// `(degree, dim H)` pairs.
    pub fn dims(&self) -> Vec<(i64, usize)> {
        self.groups.iter().map(|h| (h.degree, h.dim())).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.groups
            .iter()
            .map(|h| if sign(h.degree) { -(h.dim() as i64) } else { h.dim() as i64 })
            .sum()
    }

    /// `Σ (−1)^i χ_{H_i}`
    pub fn lefschetz_character(&self, group: &Arc<PermGroup>) -> Result<ClassFunction> {
        let mut total = ClassFunction::zero(group);
        for h in &self.groups {
            let chi = h.module.character()?;
            total = if sign(h.degree) { total.sub(&chi)? } else { total.add(&chi)? };
        }
        Ok(total)
    }

    /// Per-degree dimensions and characters, with decompositions when a table is given.
    pub fn to_json(&self, table: Option<&CharacterTable>) -> Result<Value> {
        let mut degrees = Vec::new();
        for h in &self.groups {
            let mut entry = json!({ "degree": h.degree, "dimension": h.dim() });
            if h.module.field().is_rational() {
                let chi = h.module.character()?;
                entry["character"] = chi.to_json();
                if let Some(t) = table {
                    entry["decomposition"] = json!(t.decompose(&chi)?);
                }
            }
            degrees.push(entry);
        }
        Ok(json!({ "degrees": degrees, "euler_characteristic": self.euler_characteristic() }))
    }
}

/// Homology of `(sd P, τ*F)` and of `(P, F)` side by side.
#[derive(Clone, Debug)]
pub struct SubdivisionComparison {
    pub subdivided: HomologyResult,
    pub original: HomologyResult,
}

impl SubdivisionComparison {
    /// Degreewise equality of characters in characteristic zero, of dimensions otherwise.
    pub fn agree(&self) -> Result<bool> {
        if self.subdivided.dims() != self.original.dims() {
            return Ok(false);
        }
        for (a, b) in self.subdivided.groups.iter().zip(&self.original.groups) {
            if a.module.field().is_rational() && a.module.character()? != b.module.character()? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn subdivision_compare(p: &GPoset, f: &GPresheaf) -> Result<SubdivisionComparison> {
    let sd = barycentric_subdivision(p)?;
    let pulled = pullback(&sd, f)?;
    Ok(SubdivisionComparison {
        subdivided: homology(&build_complex(&pulled)?)?,
        original: homology(&build_complex(f)?)?,
    })
}

/// `dim Hom_G(H_0(P;F), M)` and `dim Hom(F, κ_M)`, which the adjunction makes equal.
pub fn adjunction_dims(f: &GPresheaf, m: &GModule) -> Result<(usize, usize)> {
    let h = homology(&build_complex(f)?)?;
    let h0 = match h.degree(0) {
        Some(g) => g.module.hom_dimension(m)?,
        None => 0,
    };
    Ok((h0, f.hom_to_constant(m)?))
}
