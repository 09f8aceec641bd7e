//! Finite-dimensional right modules `v ↦ v·ρ(g)` over Q or GF(p).

mod irreducible;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_rational::BigRational;
use serde_json::{json, Value};

use crate::algebra::{parse_rational, Echelon, Field, Matrix, Scalar};
use crate::error::{Error, Result};
use crate::group::{ClassFunction, PermGroup, Subgroup};

pub use irreducible::{linear_sign_characters, rational_irreducibles, IRREDUCIBLE_ORDER_BOUND};

pub const MODULE_SCHEMA_VERSION: u64 = 1;

/// A right `G`-module given by one matrix per generator. Matrices of other
/// elements are products along the enumeration words, memoized on demand.
pub struct GModule {
    group: Arc<PermGroup>,
    field: Field,
    dim: usize,
    generators: Vec<Matrix>,
    cache: Mutex<HashMap<usize, Arc<Matrix>>>,
}

impl Clone for GModule {
    fn clone(&self) -> Self {
        GModule {
            group: self.group.clone(),
            field: self.field,
            dim: self.dim,
            generators: self.generators.clone(),
            cache: Mutex::new(self.cache.lock().expect("cache lock").clone()),
        }
    }
}

impl fmt::Debug for GModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GModule")
            .field("field", &self.field)
            .field("dim", &self.dim)
            .field("group_order", &self.group.order())
            .finish()
    }
}

/// The matrix of `e_i ↦ e_{images[i]}`.
pub fn permutation_matrix(field: Field, images: &[usize]) -> Matrix {
    let n = images.len();
    let mut m = Matrix::zeros(field, n, n);
    for (i, &j) in images.iter().enumerate() {
        m.set_i64(i, j, 1);
    }
    m
}

impl GModule {
    /// Checks shapes, field, and that the generator matrices define a
    /// homomorphism: `ρ(g)ρ(s) = ρ(gs)` for every element `g` and generator `s`.
    pub fn new(group: &Arc<PermGroup>, field: Field, dim: usize, generators: Vec<Matrix>) -> Result<GModule> {
        let m = GModule::new_unchecked(group, field, dim, generators)?;
        m.check_multiplicative()?;
        Ok(m)
    }

    /// Shape and field checks only, for matrices that are homomorphic by construction.
    pub(crate) fn new_unchecked(
        group: &Arc<PermGroup>,
        field: Field,
        dim: usize,
        generators: Vec<Matrix>,
    ) -> Result<GModule> {
        if generators.len() != group.generators().len() {
            return Err(Error::InvalidModule(format!(
                "{} matrices for {} generators",
                generators.len(),
                group.generators().len()
            )));
        }
        for m in &generators {
            m.check_field(field)?;
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::InvalidModule(format!(
                    "generator matrix is {}x{}, expected {dim}x{dim}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(GModule {
            group: group.clone(),
            field,
            dim,
            generators,
            cache: Mutex::new(HashMap::new()),
        })
    }

    /// Runs the Schreier-edge check one basis vector at a time, so only
    /// `|G|` vectors are held at once.
    fn check_multiplicative(&self) -> Result<()> {
        let g = &self.group;
        let id = Matrix::identity(self.field, self.dim);
        for j in 0..self.dim {
            let mut orbit: Vec<Matrix> = Vec::with_capacity(g.order());
            orbit.push(id.row(j));
            for i in 1..g.order() {
                let (parent, k) = g.tree_edge(i).expect("non-identity has a parent");
                let v = orbit[parent].mul(&self.generators[k])?;
                orbit.push(v);
            }
            for i in 0..g.order() {
                for (k, &s) in g.generator_elements().iter().enumerate() {
                    if orbit[i].mul(&self.generators[k])? != orbit[g.mul(i, s)] {
                        return Err(Error::InvalidModule(format!(
                            "generator matrices violate the relations of the group (element {}, generator {})",
                            g.element(i),
                            g.generators()[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator_matrices(&self) -> &[Matrix] {
        &self.generators
    }

    /// `ρ(g)` for any element index.
    pub fn matrix(&self, g: usize) -> Arc<Matrix> {
        if let Some(m) = self.cache.lock().expect("cache lock").get(&g) {
            return m.clone();
        }
        let m = match self.group.tree_edge(g) {
            None => Matrix::identity(self.field, self.dim),
            Some((parent, k)) => self.matrix(parent).mul(&self.generators[k]).expect("square matrices"),
        };
        let m = Arc::new(m);
        self.cache.lock().expect("cache lock").insert(g, m.clone());
        m
    }

    pub fn trivial(group: &Arc<PermGroup>, field: Field) -> GModule {
        let gens = vec![Matrix::identity(field, 1); group.generators().len()];
        GModule::new_unchecked(group, field, 1, gens).expect("well formed")
    }

    /// `e_s · g = e_{g⁻¹s}` for a left action given by generator image arrays.
    pub fn permutation(group: &Arc<PermGroup>, generator_images: &[Vec<usize>], field: Field) -> Result<GModule> {
        let n = generator_images.first().map_or(0, Vec::len);
        let mut gens = Vec::new();
        for images in generator_images {
            if images.len() != n {
                return Err(Error::InvalidModule("action arrays of different lengths".into()));
            }
            // row s has its one at g⁻¹s, i.e. at the t with images[t] = s
            let mut m = Matrix::zeros(field, n, n);
            let mut hit = vec![false; n];
            for (t, &s) in images.iter().enumerate() {
                if s >= n || std::mem::replace(&mut hit[s], true) {
                    return Err(Error::InvalidModule("action array is not a permutation".into()));
                }
                m.set_i64(s, t, 1);
            }
            gens.push(m);
        }
        if gens.len() != group.generators().len() {
            return Err(Error::InvalidModule("one action array per generator".into()));
        }
        GModule::new(group, field, n, gens)
    }

    /// The permutation module of the natural action on points.
    pub fn natural(group: &Arc<PermGroup>, field: Field) -> Result<GModule> {
        let images: Vec<Vec<usize>> = group.generators().iter().map(|p| p.images().collect()).collect();
        GModule::permutation(group, &images, field)
    }

    /// `RG` with basis the group elements, `G` permuting them by left multiplication.
    pub fn regular(group: &Arc<PermGroup>, field: Field) -> GModule {
        let images: Vec<Vec<usize>> = group
            .generator_elements()
            .iter()
            .map(|&s| (0..group.order()).map(|x| group.mul(s, x)).collect())
            .collect();
        GModule::permutation(group, &images, field).expect("left multiplication is an action")
    }

    /// Permutation module on the left cosets of `h`, in `h.left_cosets()` order.
    pub fn coset(h: &Subgroup, field: Field) -> Result<GModule> {
        let g = h.parent();
        let cosets = h.left_cosets();
        let mut coset_of = vec![0; g.order()];
        for (i, c) in cosets.iter().enumerate() {
            for &x in c {
                coset_of[x] = i;
            }
        }
        let images: Vec<Vec<usize>> = g
            .generator_elements()
            .iter()
            .map(|&s| cosets.iter().map(|c| coset_of[g.mul(s, c[0])]).collect())
            .collect();
        GModule::permutation(g, &images, field)
    }

    /// A one-dimensional module from a `±1`-valued (or any) scalar per generator.
    pub fn linear(group: &Arc<PermGroup>, field: Field, values: &[i64]) -> Result<GModule> {
        let gens = values
            .iter()
            .map(|&v| Matrix::from_i64_rows(field, &[vec![v]]))
            .collect::<Result<Vec<_>>>()?;
        GModule::new(group, field, 1, gens)
    }

    fn require_char_zero(&self) -> Result<()> {
        if self.field.is_rational() {
            Ok(())
        } else {
            Err(Error::UnsupportedField(self.field))
        }
    }

    /// Traces of class representatives; characteristic zero only.
    pub fn character(&self) -> Result<ClassFunction> {
        self.require_char_zero()?;
        Ok(ClassFunction::from_element_fn(&self.group, |g| rational(&self.matrix(g).trace())))
    }

    /// Rows of a basis of `{v : v·ρ(h) = v for all h ∈ H}`, in reduced echelon form.
    pub fn fixed_points(&self, h: &Subgroup) -> Result<Matrix> {
        if !h.parent().same_as(&self.group) {
            return Err(Error::GroupMismatch("fixed points under a subgroup of another group".into()));
        }
        self.fixed_points_of(&h.generators())
    }

    /// Fixed space of the subgroup generated by `elements`.
    pub fn fixed_points_of(&self, elements: &[usize]) -> Result<Matrix> {
        if elements.is_empty() {
            return Ok(Matrix::identity(self.field, self.dim));
        }
        let blocks = elements
            .iter()
            .map(|&g| self.matrix(g).minus_identity())
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<&Matrix> = blocks.iter().collect();
        let stacked = Matrix::hstack(self.field, self.dim, &refs)?;
        Ok(Echelon::new(&stacked.left_kernel_basis()).basis().clone())
    }

    /// Generator matrices replaced by their inverse transposes.
    pub fn contragredient(&self) -> Result<GModule> {
        let gens = self
            .generators
            .iter()
            .map(|m| Ok(m.inverse()?.transpose()))
            .collect::<Result<Vec<_>>>()?;
        GModule::new_unchecked(&self.group, self.field, self.dim, gens)
    }

    /// The restriction to `h`, as a module for `h.as_group()`.
    pub fn restrict(&self, h: &Subgroup) -> Result<GModule> {
        if !h.parent().same_as(&self.group) {
            return Err(Error::GroupMismatch("restriction to a subgroup of another group".into()));
        }
        let local = h.as_group();
        let gens = local
            .generator_elements()
            .iter()
            .map(|&s| (*self.matrix(h.embedding()[s])).clone())
            .collect();
        GModule::new_unchecked(local, self.field, self.dim, gens)
    }

    /// The same matrices read over another group with identical generators.
    pub fn rehome(&self, group: &Arc<PermGroup>) -> Result<GModule> {
        if group.generators() != self.group.generators() {
            return Err(Error::GroupMismatch("generators differ".into()));
        }
        GModule::new_unchecked(group, self.field, self.dim, self.generators.clone())
    }

    /// Whether every element of `elements` acts as the identity.
    pub fn acts_trivially(&self, elements: &[usize]) -> bool {
        elements.iter().all(|&g| self.matrix(g).is_identity())
    }

    /// Dimension of `Hom_G(self, other)`: matrices `X` with `ρ(s)X = Xσ(s)` for every generator.
    pub fn hom_dimension(&self, other: &GModule) -> Result<usize> {
        if !self.group.same_as(&other.group) || self.field != other.field {
            return Err(Error::GroupMismatch("modules over different groups or fields".into()));
        }
        let (m, n) = (self.dim, other.dim);
        let unknowns = m * n;
        if unknowns == 0 {
            return Ok(0);
        }
        // row-major vec: vec(AX) = (A ⊗ I)vec(X), vec(XB) = (I ⊗ Bᵀ)vec(X)
        let blocks = self
            .generators
            .iter()
            .zip(&other.generators)
            .map(|(a, b)| {
                let left = a.kronecker(&Matrix::identity(self.field, n))?;
                let right = Matrix::identity(self.field, m).kronecker(&b.transpose())?;
                left.sub(&right)
            })
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<&Matrix> = blocks.iter().collect();
        let system = Matrix::vstack(self.field, unknowns, &refs)?;
        Ok(unknowns - system.rank())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": MODULE_SCHEMA_VERSION,
            "field": self.field.to_string(),
            "dimension": self.dim,
            "generators": self.generators.iter().map(Matrix::to_strings).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(group: &Arc<PermGroup>, v: &Value) -> Result<GModule> {
        let schema = |m: &str| Error::Schema(format!("module file: {m}"));
        match v.get("schema_version").and_then(Value::as_u64) {
            Some(MODULE_SCHEMA_VERSION) => {}
            _ => return Err(schema("missing or unsupported schema_version")),
        }
        let field: Field = v.get("field").and_then(Value::as_str).ok_or_else(|| schema("field"))?.parse()?;
        let dim = v.get("dimension").and_then(Value::as_u64).ok_or_else(|| schema("dimension"))? as usize;
        let gens = v
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| schema("generators"))?
            .iter()
            .map(|m| matrix_from_json(field, dim, m))
            .collect::<Result<Vec<_>>>()?;
        GModule::new(group, field, dim, gens)
    }
}

fn matrix_from_json(field: Field, dim: usize, v: &Value) -> Result<Matrix> {
    let schema = |m: &str| Error::Schema(format!("module matrix: {m}"));
    let rows = v.as_array().ok_or_else(|| schema("rows"))?;
    if rows.len() != dim {
        return Err(schema("row count differs from dimension"));
    }
    let mut entries = Vec::with_capacity(dim * dim);
    for r in rows {
        let r = r.as_array().ok_or_else(|| schema("row"))?;
        if r.len() != dim {
            return Err(schema("row length differs from dimension"));
        }
        for e in r {
            let q = match e {
                Value::String(s) => parse_rational(s)?,
                Value::Number(n) => parse_rational(&n.to_string())?,
                _ => return Err(schema("entry")),
            };
            entries.push(field.from_rational(&q)?);
        }
    }
    if dim == 0 {
        return Ok(Matrix::zeros(field, 0, 0));
    }
    Matrix::from_scalars(dim, dim, entries)
}

fn rational(s: &Scalar) -> BigRational {
    s.as_rational().cloned().expect("characteristic zero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{fixtures, Perm};

    fn ints(c: &ClassFunction) -> Vec<i64> {
        c.rationals()
            .unwrap()
            .iter()
            .map(|q| i64::try_from(q.to_integer()).unwrap())
            .collect()
    }

    fn class_values(g: &Arc<PermGroup>, c: &ClassFunction, reps: &[&str]) -> Vec<i64> {
        reps.iter()
            .map(|r| {
                let e = g.index_of(&Perm::parse_cycles(r, g.degree()).unwrap()).unwrap();
                i64::try_from(c.value_at(e).as_rational().unwrap().to_integer()).unwrap()
            })
            .collect()
    }

    #[test]
    fn trivial_modules() {
        let s3 = fixtures::symmetric(3).unwrap();
        let t = GModule::trivial(&s3, Field::Rational);
        assert_eq!(t.dim(), 1);
        assert_eq!(ints(&t.character().unwrap()), vec![1, 1, 1]);
        assert_eq!(GModule::trivial(&PermGroup::enumerate(1, vec![]).unwrap(), Field::Rational).dim(), 1);
        let gl = fixtures::gl32().unwrap();
        let t2 = GModule::trivial(&gl, Field::Prime(2));
        assert_eq!(t2.dim(), 1);
        assert!(matches!(t2.character(), Err(Error::UnsupportedField(_))));
    }

    #[test]
    fn permutation_characters() {
        let s3 = fixtures::symmetric(3).unwrap();
        let nat = GModule::natural(&s3, Field::Rational).unwrap();
        assert_eq!(class_values(&s3, &nat.character().unwrap(), &["()", "(0 1)", "(0 1 2)"]), vec![3, 1, 0]);
        let reg = GModule::regular(&s3, Field::Rational);
        assert_eq!(reg.character().unwrap(), ClassFunction::regular(&s3));
        let s4 = fixtures::symmetric(4).unwrap();
        let nat4 = GModule::natural(&s4, Field::Rational).unwrap();
        assert_eq!(
            class_values(&s4, &nat4.character().unwrap(), &["()", "(0 1)", "(0 1)(2 3)", "(0 1 2)", "(0 1 2 3)"]),
            vec![4, 2, 0, 1, 0]
        );
        let point = GModule::permutation(&s3, &[vec![0], vec![0]], Field::Rational).unwrap();
        assert_eq!(point.character().unwrap(), ClassFunction::trivial(&s3));
    }

    #[test]
    fn permutation_convention_uses_inverse() {
        // e_s · g = e_{g⁻¹ s}
        let s3 = fixtures::symmetric(3).unwrap();
        let nat = GModule::natural(&s3, Field::Rational).unwrap();
        let g = s3.index_of(&Perm::parse_cycles("(0 1 2)", 3).unwrap()).unwrap();
        let m = nat.matrix(g);
        // g⁻¹ sends 0 to 2
        assert_eq!(m.get(0, 2), Field::Rational.one());
    }

    #[test]
    fn rejects_non_modules() {
        let s3 = fixtures::symmetric(3).unwrap();
        // (0 1) ↦ 2 is not an involution
        assert!(GModule::linear(&s3, Field::Rational, &[2, 1]).is_err());
        assert!(GModule::linear(&s3, Field::Rational, &[-1, 1]).is_ok());
        assert!(GModule::linear(&s3, Field::Rational, &[1, -1]).is_err());
    }

    #[test]
    fn fixed_point_examples() {
        let s3 = fixtures::symmetric(3).unwrap();
        let a3 = Subgroup::from_perms(&s3, &[Perm::parse_cycles("(0 1 2)", 3).unwrap()]).unwrap();
        let t = GModule::trivial(&s3, Field::Rational);
        assert_eq!(t.fixed_points(&a3).unwrap().rows(), 1);
        let reg = GModule::regular(&s3, Field::Rational);
        assert_eq!(reg.fixed_points(&a3).unwrap().rows(), 2);
        let two = rational_irreducibles(&s3).unwrap().into_iter().find(|m| m.dim() == 2).unwrap();
        assert_eq!(two.fixed_points(&Subgroup::whole(&s3)).unwrap().rows(), 0);
    }

    #[test]
    fn contragredient_examples() {
        let s4 = fixtures::symmetric(4).unwrap();
        let nat = GModule::natural(&s4, Field::Rational).unwrap();
        let dual = nat.contragredient().unwrap();
        assert_eq!(dual.character().unwrap(), nat.character().unwrap());
        assert_eq!(dual.contragredient().unwrap().generator_matrices(), nat.generator_matrices());
        let t = GModule::trivial(&s4, Field::Rational);
        assert_eq!(t.contragredient().unwrap().generator_matrices(), t.generator_matrices());
    }

    #[test]
    fn frobenius_reciprocity_for_fixed_points() {
        let s4 = fixtures::symmetric(4).unwrap();
        let modules = [GModule::natural(&s4, Field::Rational).unwrap(), GModule::regular(&s4, Field::Rational)];
        for m in &modules {
            let chi = m.character().unwrap();
            for h in crate::group::subgroups_up_to_conjugacy(&s4) {
                let res = chi.restrict(&h).unwrap();
                let (ip, _) = res.inner(&ClassFunction::trivial(h.as_group())).unwrap();
                assert_eq!(BigRational::from_integer(m.fixed_points(&h).unwrap().rows().into()), ip);
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        let s3 = fixtures::symmetric(3).unwrap();
        let nat = GModule::natural(&s3, Field::Rational).unwrap();
        let back = GModule::from_json(&s3, &nat.to_json()).unwrap();
        assert_eq!(back.generator_matrices(), nat.generator_matrices());
        let mut bad = nat.to_json();
        bad["generators"][0][0][0] = Value::String("5".into());
        assert!(GModule::from_json(&s3, &bad).is_err());
    }

    #[test]
    fn hom_dimensions() {
        let s3 = fixtures::symmetric(3).unwrap();
        let nat = GModule::natural(&s3, Field::Rational).unwrap();
        let t = GModule::trivial(&s3, Field::Rational);
        assert_eq!(nat.hom_dimension(&t).unwrap(), 1);
        assert_eq!(nat.hom_dimension(&nat).unwrap(), 2);
    }
}
