//! Presheaves on the transporter category `P⋊G`, held as poset maps plus one
//! map per group generator.
//!
//! For `x ≤ y` the matrix `relation(x, y)` is `d_y × d_x` and maps `F(y) → F(x)`;
//! for a generator `s` the matrix `generator_map(k, x)` is `d_{sx} × d_x` and
//! maps `F(sx) → F(x)`. Vectors are rows.

mod builders;

use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::{parse_rational, Field, Matrix};
use crate::error::{Error, Result};
use crate::gmodule::GModule;
use crate::gposet::GPoset;
use crate::group::PermGroup;

pub use builders::{atomic_presheaf, constant_presheaf, coset_presheaf, fixed_point_presheaf, pullback};

pub const PRESHEAF_SCHEMA_VERSION: u64 = 1;

#[derive(Clone, Debug)]
pub struct GPresheaf {
    poset: GPoset,
    field: Field,
    dims: Vec<usize>,
    /// `relations[x * n + y]` for `x ≤ y`
    relations: Vec<Option<Matrix>>,
    /// `generators[k][x]` for the `k`-th group generator
    generators: Vec<Vec<Matrix>>,
}

fn invalid(m: impl Into<String>) -> Error {
    Error::InvalidPresheaf(m.into())
}

impl GPresheaf {
    /// Checks shapes and all presheaf laws. `relations` lists the strict
    /// relations `x < y`; the identities are implied.
    pub fn new(
        poset: &GPoset,
        field: Field,
        dims: Vec<usize>,
        relations: Vec<((usize, usize), Matrix)>,
        generators: Vec<Vec<Matrix>>,
    ) -> Result<GPresheaf> {
        let f = GPresheaf::assemble(poset, field, dims, relations, generators)?;
        f.validate()?;
        Ok(f)
    }

    fn assemble(
        poset: &GPoset,
        field: Field,
        dims: Vec<usize>,
        relations: Vec<((usize, usize), Matrix)>,
        generators: Vec<Vec<Matrix>>,
    ) -> Result<GPresheaf> {
        let n = poset.len();
        if dims.len() != n {
            return Err(invalid(format!("{} fiber dimensions for {n} elements", dims.len())));
        }
        let mut table: Vec<Option<Matrix>> = vec![None; n * n];
        for x in 0..n {
            table[x * n + x] = Some(Matrix::identity(field, dims[x]));
        }
        for ((x, y), m) in relations {
            if x >= n || y >= n || !poset.lt(x, y) {
                return Err(invalid(format!("no strict relation {x} < {y}")));
            }
            if table[x * n + y].is_some() {
                return Err(invalid(format!("relation {x} < {y} given twice")));
            }
            m.check_field(field)?;
            if m.rows() != dims[y] || m.cols() != dims[x] {
                return Err(invalid(format!(
                    "map for {} < {} is {}x{}, expected {}x{}",
                    poset.label(x),
                    poset.label(y),
                    m.rows(),
                    m.cols(),
                    dims[y],
                    dims[x]
                )));
            }
            table[x * n + y] = Some(m);
        }
        for x in 0..n {
            for y in 0..n {
                if poset.lt(x, y) && table[x * n + y].is_none() {
                    return Err(invalid(format!("missing map for {} < {}", poset.label(x), poset.label(y))));
                }
            }
        }
        let g = poset.group();
        if generators.len() != g.generators().len() {
            return Err(invalid("one list of maps per group generator"));
        }
        for (k, maps) in generators.iter().enumerate() {
            if maps.len() != n {
                return Err(invalid("one generator map per element"));
            }
            let s = g.generator_elements()[k];
            for (x, m) in maps.iter().enumerate() {
                m.check_field(field)?;
                let sx = poset.act(s, x);
                if m.rows() != dims[sx] || m.cols() != dims[x] {
                    return Err(invalid(format!(
                        "generator {} at {} has shape {}x{}, expected {}x{}",
                        g.generators()[k],
                        poset.label(x),
                        m.rows(),
                        m.cols(),
                        dims[sx],
                        dims[x]
                    )));
                }
            }
        }
        Ok(GPresheaf {
            poset: poset.clone(),
            field,
            dims,
            relations: table,
            generators,
        })
    }

    /// Functoriality on every triple, the cocycle law through a Schreier check
    /// from each orbit representative, and the mixing law on every relation
    /// and generator.
    pub fn validate(&self) -> Result<()> {
        self.check_functorial()?;
        self.check_cocycle()?;
        self.check_mixing()
    }

    pub fn check_functorial(&self) -> Result<()> {
        let p = &self.poset;
        let n = p.len();
        for x in 0..n {
            for y in (0..n).filter(|&y| p.lt(x, y)) {
                for z in (0..n).filter(|&z| p.lt(y, z)) {
                    let composite = self.relation(y, z).mul(self.relation(x, y))?;
                    if &composite != self.relation(x, z) {
                        return Err(invalid(format!(
                            "not functorial on {} < {} < {}",
                            p.label(x),
                            p.label(y),
                            p.label(z)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Generator maps are invertible and `M_{gh}(x) = M_g(hx)·M_h(x)` holds for all
    /// elements. Since every fiber in an orbit is reached invertibly from the
    /// representative, following basis vectors of the representative fibers
    /// along all Schreier edges suffices.
    pub fn check_cocycle(&self) -> Result<()> {
        let p = &self.poset;
        let g = p.group();
        for maps in &self.generators {
            for m in maps {
                if m.rows() != m.cols() || m.rank() != m.rows() {
                    return Err(invalid("a generator map is not invertible"));
                }
            }
        }
        let gen_inv: Vec<usize> = g.generator_elements().iter().map(|&s| g.inv(s)).collect();
        // (point, vector) · s = (s⁻¹ point, vector · M_s(s⁻¹ point))
        let step = |y: usize, v: &Matrix, k: usize| -> Result<(usize, Matrix)> {
            let z = p.act(gen_inv[k], y);
            Ok((z, v.mul(&self.generators[k][z])?))
        };
        for x in p.orbit_representatives() {
            let id = Matrix::identity(self.field, self.dims[x]);
            for j in 0..self.dims[x] {
                let mut walk: Vec<(usize, Matrix)> = Vec::with_capacity(g.order());
                walk.push((x, id.row(j)));
                for e in 1..g.order() {
                    let (parent, k) = g.tree_edge(e).expect("non-identity has a parent");
                    let next = step(walk[parent].0, &walk[parent].1, k)?;
                    walk.push(next);
                }
                for e in 0..g.order() {
                    for (k, &s) in g.generator_elements().iter().enumerate() {
                        let got = step(walk[e].0, &walk[e].1, k)?;
                        if got != walk[g.mul(e, s)] {
                            return Err(invalid(format!(
                                "group maps are not multiplicative (element {}, generator {})",
                                g.element(e),
                                g.generators()[k]
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `R(sa ≤ sb)·M_s(a) = M_s(b)·R(a ≤ b)` for every strict relation and generator.
    pub fn check_mixing(&self) -> Result<()> {
        let p = &self.poset;
        let g = p.group();
        for (k, &s) in g.generator_elements().iter().enumerate() {
            for a in 0..p.len() {
                for b in (0..p.len()).filter(|&b| p.lt(a, b)) {
                    let left = self.relation(p.act(s, a), p.act(s, b)).mul(&self.generators[k][a])?;
                    let right = self.generators[k][b].mul(self.relation(a, b))?;
                    if left != right {
                        return Err(invalid(format!(
                            "mixing law fails for {} < {} under {}",
                            p.label(a),
                            p.label(b),
                            g.generators()[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn poset(&self) -> &GPoset {
        &self.poset
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        self.poset.group()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, x: usize) -> usize {
        self.dims[x]
    }

    /// `F(y) → F(x)` for `x ≤ y`.
    pub fn relation(&self, x: usize, y: usize) -> &Matrix {
        let n = self.poset.len();
        self.relations[x * n + y]
            .as_ref()
            .unwrap_or_else(|| panic!("{} is not below {}", self.poset.label(x), self.poset.label(y)))
    }

    /// `F(s_k x) → F(x)` for the `k`-th generator.
    pub fn generator_map(&self, k: usize, x: usize) -> &Matrix {
        &self.generators[k][x]
    }

    pub fn generator_maps(&self) -> &[Vec<Matrix>] {
        &self.generators
    }

    /// `F(gx) → F(x)` for any element, from `M_{hs}(x) = M_h(sx)·M_s(x)`.
    pub fn group_map(&self, g: usize, x: usize) -> Matrix {
        let grp = self.poset.group();
        match grp.tree_edge(g) {
            None => Matrix::identity(self.field, self.dims[x]),
            Some((parent, k)) => {
                let s = grp.generator_elements()[k];
                self.group_map(parent, self.poset.act(s, x))
                    .mul(&self.generators[k][x])
                    .expect("composable fibers")
            }
        }
    }

    /// The map of a transporter morphism `x → y` given by `g` with `ᵍx ≤ y`:
    /// `F(y) → F(gx) → F(x)`.
    pub fn morphism_map(&self, source: usize, target: usize, g: usize) -> Result<Matrix> {
        let gx = self.poset.act(g, source);
        if !self.poset.leq(gx, target) {
            return Err(Error::NotComposable(format!(
                "{} moved by {} is not below {}",
                self.poset.label(source),
                self.group().element(g),
                self.poset.label(target)
            )));
        }
        self.relation(gx, target).mul(&self.group_map(g, source))
    }

    /// Dimension of the space of presheaf maps `F → κ_M`.
    pub fn hom_to_constant(&self, m: &GModule) -> Result<usize> {
        if !m.group().same_as(self.group()) || m.field() != self.field {
            return Err(Error::GroupMismatch("module over another group or field".into()));
        }
        let p = &self.poset;
        let n = p.len();
        let dm = m.dim();
        let mut offsets = Vec::with_capacity(n);
        let mut total = 0;
        for &d in &self.dims {
            offsets.push(total);
            total += d * dm;
        }
        if total == 0 {
            return Ok(0);
        }
        // unknown φ_x is d_x × dim M, stored row-major at offsets[x];
        // vec(A·φ·B) = (A ⊗ Bᵀ)·vec(φ)
        let mut blocks: Vec<Matrix> = Vec::new();
        let idm = Matrix::identity(self.field, dm);
        let mut push = |terms: Vec<(usize, Matrix)>, rows: usize| -> Result<()> {
            let mut eq = Matrix::zeros(self.field, rows, total);
            for (x, coeff) in terms {
                let current = eq.block(0, offsets[x], rows, coeff.cols());
                eq.set_block(0, offsets[x], &current.add(&coeff)?)?;
            }
            blocks.push(eq);
            Ok(())
        };
        // R(x≤y)·φ_x = φ_y for every cover
        for (x, y) in p.covers() {
            let rows = self.dims[y] * dm;
            let left = self.relation(x, y).kronecker(&idm)?;
            let right = Matrix::identity(self.field, rows).neg();
            push(vec![(x, left), (y, right)], rows)?;
        }
        // M_s(x)·φ_x = φ_{sx}·ρ(s)
        let g = p.group();
        for (k, &s) in g.generator_elements().iter().enumerate() {
            let rho_t = m.matrix(s).transpose();
            for x in 0..n {
                let sx = p.act(s, x);
                let rows = self.dims[sx] * dm;
                let left = self.generators[k][x].kronecker(&idm)?;
                let right = Matrix::identity(self.field, self.dims[sx]).kronecker(&rho_t)?.neg();
                push(vec![(x, left), (sx, right)], rows)?;
            }
        }
        if blocks.is_empty() {
            return Ok(total);
        }
        let refs: Vec<&Matrix> = blocks.iter().collect();
        let system = Matrix::vstack(self.field, total, &refs)?;
        Ok(total - system.rank())
    }

    pub fn to_json(&self) -> Value {
        let p = &self.poset;
        let mut relations = Vec::new();
        for x in 0..p.len() {
            for y in (0..p.len()).filter(|&y| p.lt(x, y)) {
                relations.push(json!({
                    "lower": x,
                    "upper": y,
                    "matrix": self.relation(x, y).to_strings(),
                }));
            }
        }
        json!({
            "schema_version": PRESHEAF_SCHEMA_VERSION,
            "field": self.field.to_string(),
            "dims": self.dims,
            "relations": relations,
            "generators": self.generators.iter().map(|maps| maps.iter().map(Matrix::to_strings).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    /// Reads the format of [`GPresheaf::to_json`] over a given poset.
    pub fn from_json(poset: &GPoset, v: &Value) -> Result<GPresheaf> {
        let schema = |m: &str| Error::Schema(format!("presheaf file: {m}"));
        match v.get("schema_version").and_then(Value::as_u64) {
            Some(PRESHEAF_SCHEMA_VERSION) => {}
            _ => return Err(schema("missing or unsupported schema_version")),
        }
        let field: Field = v.get("field").and_then(Value::as_str).ok_or_else(|| schema("field"))?.parse()?;
        let dims: Vec<usize> = v
            .get("dims")
            .and_then(Value::as_array)
            .ok_or_else(|| schema("dims"))?
            .iter()
            .map(|d| d.as_u64().map(|d| d as usize).ok_or_else(|| schema("dims entry")))
            .collect::<Result<_>>()?;
        if dims.len() != poset.len() {
            return Err(schema("dims length differs from the poset"));
        }
        let mut relations = Vec::new();
        for r in v.get("relations").and_then(Value::as_array).ok_or_else(|| schema("relations"))? {
            let x = r.get("lower").and_then(Value::as_u64).ok_or_else(|| schema("lower"))? as usize;
            let y = r.get("upper").and_then(Value::as_u64).ok_or_else(|| schema("upper"))? as usize;
            if x >= dims.len() || y >= dims.len() {
                return Err(schema("relation index out of range"));
            }
            let m = matrix_from_json(field, dims[y], dims[x], r.get("matrix").ok_or_else(|| schema("matrix"))?)?;
            relations.push(((x, y), m));
        }
        let g = poset.group();
        let gens_json = v.get("generators").and_then(Value::as_array).ok_or_else(|| schema("generators"))?;
        let mut generators = Vec::new();
        for (k, maps) in gens_json.iter().enumerate() {
            let s = *g.generator_elements().get(k).ok_or_else(|| schema("too many generator lists"))?;
            let maps = maps.as_array().ok_or_else(|| schema("generator maps"))?;
            if maps.len() != dims.len() {
                return Err(schema("one generator map per element"));
            }
            let parsed = maps
                .iter()
                .enumerate()
                .map(|(x, m)| matrix_from_json(field, dims[poset.act(s, x)], dims[x], m))
                .collect::<Result<Vec<_>>>()?;
            generators.push(parsed);
        }
        GPresheaf::new(poset, field, dims, relations, generators)
    }
}

fn matrix_from_json(field: Field, rows: usize, cols: usize, v: &Value) -> Result<Matrix> {
    let schema = |m: &str| Error::Schema(format!("presheaf matrix: {m}"));
    let list = v.as_array().ok_or_else(|| schema("rows"))?;
    if list.len() != rows {
        return Err(schema("wrong row count"));
    }
    let mut m = Matrix::zeros(field, rows, cols);
    for (i, r) in list.iter().enumerate() {
        let r = r.as_array().ok_or_else(|| schema("row"))?;
        if r.len() != cols {
            return Err(schema("wrong row length"));
        }
        for (j, e) in r.iter().enumerate() {
            let q = match e {
                Value::String(s) => parse_rational(s)?,
                Value::Number(n) => parse_rational(&n.to_string())?,
                _ => return Err(schema("entry")),
            };
            m.set(i, j, field.from_rational(&q)?)?;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests;
