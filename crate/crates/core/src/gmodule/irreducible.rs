//! Irreducible modules over Q, built without a character table.
//!
//! The sums of rational classes span a split commutative algebra whose
//! primitive idempotents are the central idempotents of QG. Each simple
//! component is then cut down by an idempotent `e_{H,λ}` of a subgroup with a
//! `±1`-valued linear character until the right ideal has the dimension of a
//! simple module.

use std::sync::Arc;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::GModule;
use crate::algebra::{Echelon, Field, Matrix};
use crate::error::{Error, Result};
use crate::group::{subgroups_up_to_conjugacy, PermGroup, Subgroup};

/// Largest group order accepted by [`rational_irreducibles`].
pub const IRREDUCIBLE_ORDER_BOUND: usize = 1000;

/// Every `±1`-valued linear character, as values on all elements.
pub fn linear_sign_characters(group: &PermGroup) -> Vec<Vec<i64>> {
    let k = group.generators().len();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << k) {
        let sign = |j: usize| if mask >> j & 1 == 1 { -1 } else { 1 };
        let mut values = vec![1i64; group.order()];
        for i in 1..group.order() {
            let (parent, j) = group.tree_edge(i).expect("non-identity has a parent");
            values[i] = values[parent] * sign(j);
        }
        let consistent = (0..group.order()).all(|x| {
            group
                .generator_elements()
                .iter()
                .enumerate()
                .all(|(j, &s)| values[group.mul(x, s)] == values[x] * sign(j))
        });
        if consistent {
            out.push(values);
        }
    }
    out
}

/// Classes of `g ~ g^k` for `k` prime to the order, as lists of conjugacy classes.
fn rational_classes(g: &PermGroup) -> Vec<Vec<usize>> {
    let mut owner = vec![usize::MAX; g.num_classes()];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (c, &rep) in g.class_representatives().iter().enumerate() {
        if owner[c] != usize::MAX {
            continue;
        }
        let n = g.element_order(rep);
        let mut members = Vec::new();
        let mut power = PermGroup::IDENTITY;
        for k in 1..=n {
            power = g.mul(power, rep);
            if k.gcd(&n) == 1 {
                let d = g.class_of(power);
                if owner[d] == usize::MAX {
                    owner[d] = out.len();
                    members.push(d);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Splits `space` (rows) into common eigenspaces of the operators `x ↦ x·A`.
fn split_common(space: Matrix, ops: &[(Matrix, i64)]) -> Result<Vec<Matrix>> {
    let mut pieces = vec![space];
    for (a, bound) in ops {
        let mut next = Vec::new();
        for w in pieces {
            if w.rows() == 1 {
                next.push(w);
                continue;
            }
            let field = w.field();
            let mut found = 0;
            for lambda in -bound..=*bound {
                if found == w.rows() {
                    break;
                }
                let shifted = a.sub(&Matrix::identity(field, a.rows()).scale(&field.from_i64(lambda))?)?;
                // coordinates c with (c·W)·(A − λ) = 0
                let image = w.mul(&shifted)?;
                let coeffs = image.left_kernel_basis();
                if coeffs.rows() > 0 {
                    found += coeffs.rows();
                    next.push(coeffs.mul(&w)?);
                }
            }
            if found != w.rows() {
                return Err(Error::Internal("class sum algebra is not split over Q".into()));
            }
        }
        pieces = next;
    }
    Ok(pieces)
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// `f·x` in the right regular representation: coefficient of `y` moves to `yx`.
fn right_translate(g: &PermGroup, f: &[BigRational], x: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); f.len()];
    for (y, c) in f.iter().enumerate() {
        if !c.is_zero() {
            out[g.mul(y, x)] = c.clone();
        }
    }
    out
}

fn row(values: Vec<BigRational>) -> Result<Matrix> {
    Matrix::from_rational_rows(Field::Rational, &[values])
}

struct Component {
    idempotent: Vec<BigRational>,
    galois: usize,
    degree: usize,
}

fn central_idempotents(g: &PermGroup) -> Result<Vec<Component>> {
    let classes = rational_classes(g);
    let r = classes.len();
    let mut rclass_of = vec![0; g.order()];
    let mut sizes = vec![0i64; r];
    for (i, cl) in classes.iter().enumerate() {
        for &c in cl {
            for &x in &g.classes()[c] {
                rclass_of[x] = i;
                sizes[i] += 1;
            }
        }
    }
    let reps: Vec<usize> = classes.iter().map(|cl| g.classes()[cl[0]][0]).collect();
    // a[j][i][k] = #{a ∈ S_j : a⁻¹ z_k ∈ S_i}
    let mut ops = Vec::with_capacity(r);
    for i in 0..r {
        let mut m = vec![vec![0i64; r]; r];
        for a in 0..g.order() {
            let j = rclass_of[a];
            let ainv = g.inv(a);
            for (k, &z) in reps.iter().enumerate() {
                if rclass_of[g.mul(ainv, z)] == i {
                    m[j][k] += 1;
                }
            }
        }
        ops.push((Matrix::from_i64_rows(Field::Rational, &m)?, sizes[i]));
    }
    let lines = split_common(Matrix::identity(Field::Rational, r), &ops)?;
    let class_sums: Vec<Vec<BigRational>> = g
        .classes()
        .iter()
        .map(|c| {
            let mut v = vec![BigRational::zero(); g.order()];
            for &x in c {
                v[x] = BigRational::one();
            }
            v
        })
        .collect();
    let mut out = Vec::with_capacity(r);
    for line in lines {
        if line.rows() != 1 {
            return Err(Error::Internal("class sum algebra did not split into lines".into()));
        }
        let coeffs: Vec<BigRational> = (0..r).map(|j| line.get(0, j).as_rational().cloned().expect("rational")).collect();
        let u: Vec<BigRational> = (0..g.order()).map(|x| coeffs[rclass_of[x]].clone()).collect();
        // u = c·e with e idempotent, so c = (u²)(1)/u(1)
        let square_at_one: BigRational = (0..g.order()).map(|x| &u[x] * &u[g.inv(x)]).sum();
        let c = square_at_one / &u[PermGroup::IDENTITY];
        let e: Vec<BigRational> = u.iter().map(|x| x / &c).collect();
        let dim = &e[PermGroup::IDENTITY] * q(g.order() as i64);
        if !dim.is_integer() {
            return Err(Error::Internal("central idempotent has fractional rank".into()));
        }
        let dim = usize::try_from(dim.to_integer()).map_err(|_| Error::Internal("rank".into()))?;
        // |Ω| = dim of the centre of the component
        let centre = class_sums
            .iter()
            .map(|s| row(group_product(g, &e, s)))
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<&Matrix> = centre.iter().collect();
        let galois = Matrix::vstack(Field::Rational, g.order(), &refs)?.rank();
        let square = dim / galois;
        let degree = (square as f64).sqrt().round() as usize;
        if galois * degree * degree != dim {
            return Err(Error::Internal("component dimension is not |Ω|·χ(1)²".into()));
        }
        out.push(Component {
            idempotent: e,
            galois,
            degree,
        });
    }
    Ok(out)
}

fn group_product(g: &PermGroup, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); g.order()];
    for (x, ax) in a.iter().enumerate() {
        if ax.is_zero() {
            continue;
        }
        for (y, by) in b.iter().enumerate() {
            if !by.is_zero() {
                out[g.mul(x, y)] += ax * by;
            }
        }
    }
    out
}

/// Right ideal `f·QG` as a module, in the echelon basis of its span.
fn ideal_module(group: &Arc<PermGroup>, f: &[BigRational], dim: usize) -> Result<GModule> {
    let g = group.as_ref();
    let mut rows: Vec<Matrix> = Vec::new();
    let mut ech = Echelon::empty(Field::Rational, g.order());
    for x in 0..g.order() {
        let v = row(right_translate(g, f, x))?;
        if !ech.contains(&v)? {
            rows.push(v);
            let refs: Vec<&Matrix> = rows.iter().collect();
            ech = Echelon::new(&Matrix::vstack(Field::Rational, g.order(), &refs)?);
            if ech.rank() == dim {
                break;
            }
        }
    }
    if ech.rank() != dim {
        return Err(Error::Internal("right ideal has the wrong dimension".into()));
    }
    let basis = ech.basis().clone();
    let mut gens = Vec::new();
    for &s in g.generator_elements() {
        let mut m = Matrix::zeros(Field::Rational, dim, dim);
        for j in 0..dim {
            let b: Vec<BigRational> = (0..g.order())
                .map(|y| basis.get(j, y).as_rational().cloned().expect("rational"))
                .collect();
            let image = row(right_translate(g, &b, s))?;
            let coords = ech
                .coordinates(&image)?
                .ok_or_else(|| Error::Internal("right ideal is not closed".into()))?;
            m.set_block(j, 0, &coords)?;
        }
        gens.push(m);
    }
    GModule::new_unchecked(group, Field::Rational, dim, gens)
}

fn simple_module(group: &Arc<PermGroup>, subgroups: &[(Subgroup, Vec<Vec<i64>>)], comp: &Component) -> Result<GModule> {
    let g = group.as_ref();
    let e = &comp.idempotent;
    for schur in 1..=comp.degree {
        let target = comp.galois * comp.degree * schur;
        for (h, chars) in subgroups {
            let local = h.as_group();
            for lambda in chars {
                // dim e_{H,λ}·e·QG = (|G|/|H|)·Σ λ(h) e(h⁻¹)
                let mut s = BigRational::zero();
                for (li, &x) in h.embedding().iter().enumerate() {
                    s += q(lambda[li]) * &e[g.inv(x)];
                }
                let dim = s * q(g.order() as i64) / q(local.order() as i64);
                if dim != q(target as i64) {
                    continue;
                }
                let mut eh = vec![BigRational::zero(); g.order()];
                for (li, &x) in h.embedding().iter().enumerate() {
                    eh[x] = BigRational::new(lambda[li].into(), (local.order() as i64).into());
                }
                let f = group_product(g, &eh, e);
                let m = ideal_module(group, &f, target)?;
                let chi = m.character()?;
                let (norm, _) = chi.inner(&chi)?;
                if norm != q((comp.galois * schur * schur) as i64) {
                    return Err(Error::Internal("constructed module is not irreducible".into()));
                }
                return Ok(m);
            }
        }
    }
    Err(Error::Internal(
        "no monomial construction found for an irreducible component".into(),
    ))
}

/// One module per irreducible representation over Q, ordered by dimension and
/// then by character values with larger values first, so the trivial module
/// comes first.
pub fn rational_irreducibles(group: &Arc<PermGroup>) -> Result<Vec<GModule>> {
    if group.order() > IRREDUCIBLE_ORDER_BOUND {
        return Err(Error::SizeBound {
            bound: IRREDUCIBLE_ORDER_BOUND,
        });
    }
    let components = central_idempotents(group)?;
    let mut subgroups: Vec<(Subgroup, Vec<Vec<i64>>)> = subgroups_up_to_conjugacy(group)
        .into_iter()
        .map(|h| {
            let chars = linear_sign_characters(h.as_group());
            (h, chars)
        })
        .collect();
    subgroups.reverse();
    let mut modules = components
        .iter()
        .map(|c| simple_module(group, &subgroups, c))
        .collect::<Result<Vec<_>>>()?;
    let keys: Vec<Vec<BigRational>> = modules
        .iter()
        .map(|m| m.character().and_then(|c| c.rationals().ok_or_else(|| Error::Internal("irrational".into()))))
        .collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..modules.len()).collect();
    order.sort_by(|&a, &b| {
        modules[a]
            .dim()
            .cmp(&modules[b].dim())
            .then_with(|| keys[b].iter().cmp(keys[a].iter()))
    });
    let mut sorted = Vec::with_capacity(modules.len());
    for i in order {
        sorted.push(std::mem::replace(&mut modules[i], GModule::trivial(group, Field::Rational)));
    }
    Ok(sorted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{fixtures, ClassFunction};

    fn degrees(mods: &[GModule]) -> Vec<usize> {
        mods.iter().map(GModule::dim).collect()
    }

    /// Independent check: characters are pairwise orthogonal and the regular
    /// character decomposes with multiplicity χ(1)/s over them.
    fn check_complete(g: &Arc<PermGroup>, mods: &[GModule]) {
        let chars: Vec<ClassFunction> = mods.iter().map(|m| m.character().unwrap()).collect();
        let reg = ClassFunction::regular(g);
        let mut total = ClassFunction::zero(g);
        for (i, a) in chars.iter().enumerate() {
            for (j, b) in chars.iter().enumerate() {
                let (ip, _) = a.inner(b).unwrap();
                if i != j {
                    assert!(ip.is_zero());
                }
            }
            let (self_ip, _) = a.inner(a).unwrap();
            let (mult, _) = reg.inner(a).unwrap();
            // mult = |Ω|·s·χ(1), self_ip = |Ω|·s²
            total = total.add(&a.scale(&(mult / self_ip))).unwrap();
        }
        assert_eq!(total, reg);
    }

    #[test]
    fn sign_characters() {
        assert_eq!(linear_sign_characters(&fixtures::symmetric(4).unwrap()).len(), 2);
        assert_eq!(linear_sign_characters(&fixtures::dihedral(4).unwrap()).len(), 4);
        assert_eq!(linear_sign_characters(&fixtures::cyclic(3).unwrap()).len(), 1);
        assert_eq!(linear_sign_characters(&fixtures::gl32().unwrap()).len(), 1);
    }

    #[test]
    fn rational_class_counts() {
        assert_eq!(rational_classes(&fixtures::cyclic(5).unwrap()).len(), 2);
        assert_eq!(rational_classes(&fixtures::symmetric(4).unwrap()).len(), 5);
        assert_eq!(rational_classes(&fixtures::gl32().unwrap()).len(), 5);
    }

    #[test]
    fn symmetric_groups() {
        let s3 = fixtures::symmetric(3).unwrap();
        let m3 = rational_irreducibles(&s3).unwrap();
        assert_eq!(degrees(&m3), vec![1, 1, 2]);
        assert_eq!(m3[0].character().unwrap(), ClassFunction::trivial(&s3));
        check_complete(&s3, &m3);
        let s4 = fixtures::symmetric(4).unwrap();
        let m4 = rational_irreducibles(&s4).unwrap();
        assert_eq!(degrees(&m4), vec![1, 1, 2, 3, 3]);
        check_complete(&s4, &m4);
    }

    #[test]
    fn non_split_components() {
        let c5 = fixtures::cyclic(5).unwrap();
        let m = rational_irreducibles(&c5).unwrap();
        assert_eq!(degrees(&m), vec![1, 4]);
        check_complete(&c5, &m);
        let c4 = fixtures::cyclic(4).unwrap();
        assert_eq!(degrees(&rational_irreducibles(&c4).unwrap()), vec![1, 1, 2]);
    }

    #[test]
    fn small_groups_match_shipped_tables() {
        for name in ["S3", "S4"] {
            let g = fixtures::builtin_group(name).unwrap();
            let table = fixtures::builtin_table(&g).unwrap().unwrap();
            for m in rational_irreducibles(&g).unwrap() {
                let coeffs = table.decompose(&m.character().unwrap()).unwrap();
                assert_eq!(coeffs.iter().filter(|c| !c.is_zero()).count(), 1, "{name}");
            }
        }
    }

    #[test]
    fn gl32_irreducibles() {
        let g = fixtures::gl32().unwrap();
        let mods = rational_irreducibles(&g).unwrap();
        assert_eq!(degrees(&mods), vec![1, 6, 6, 7, 8]);
        check_complete(&g, &mods);
    }

    #[test]
    fn trivial_group() {
        let g = PermGroup::enumerate(1, vec![]).unwrap();
        assert_eq!(degrees(&rational_irreducibles(&g).unwrap()), vec![1]);
    }
}
