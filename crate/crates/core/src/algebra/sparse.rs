//! Row-sparse matrices for chain complexes, where dense elimination is too slow.

use std::collections::HashMap;

use num_rational::BigRational;

use super::arith::{Arith, FpArith, QArith};
use super::field::{Field, Scalar};
use super::matrix::{Data, Matrix};
use crate::error::{Error, Result};

type Rows<E> = Vec<Vec<(usize, E)>>;

#[derive(Clone, Debug, PartialEq, Eq)]
enum SData {
    Q(Rows<BigRational>),
    Fp(u32, Rows<u32>),
}

/// Rows hold `(column, value)` pairs sorted by column, without zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: SData,
}

fn merge_row<A: Arith>(ar: &A, mut row: Vec<(usize, A::E)>) -> Vec<(usize, A::E)> {
    row.sort_by_key(|e| e.0);
    let mut out: Vec<(usize, A::E)> = Vec::with_capacity(row.len());
    for (j, v) in row {
        match out.last_mut() {
            Some((k, acc)) if *k == j => *acc = ar.add(acc, &v),
            _ => out.push((j, v)),
        }
    }
    out.retain(|(_, v)| !ar.is_zero(v));
    out
}

/// `a + f·b` on sorted sparse rows.
fn axpy<A: Arith>(ar: &A, a: &[(usize, A::E)], f: &A::E, b: &[(usize, A::E)]) -> Vec<(usize, A::E)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, ar.mul(f, &b[j].1)));
            j += 1;
        } else {
            let mut v = a[i].1.clone();
            ar.add_mul_assign(&mut v, f, &b[j].1);
            if !ar.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Pivot rows keyed by leading column, each scaled to lead with one.
fn echelon<A: Arith>(ar: &A, rows: &Rows<A::E>) -> HashMap<usize, Vec<(usize, A::E)>> {
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by_key(|&i| (rows[i].len(), rows[i].first().map(|e| e.0)));
    let mut pivots: HashMap<usize, Vec<(usize, A::E)>> = HashMap::new();
    for i in order {
        let mut row = rows[i].clone();
        while let Some((lead, value)) = row.first().cloned() {
            match pivots.get(&lead) {
                Some(p) => {
                    let f = ar.neg(&value);
                    row = axpy(ar, &row, &f, p);
                }
                None => {
                    let inv = ar.inv(&value);
                    let normalized = row.into_iter().map(|(j, v)| (j, ar.mul(&v, &inv))).collect();
                    pivots.insert(lead, normalized);
                    break;
                }
            }
        }
    }
    pivots
}

fn sparse_rank<A: Arith>(ar: &A, rows: &Rows<A::E>) -> usize {
    echelon(ar, rows).len()
}

/// Clears every pivot column from `row`. Pivot rows only reach columns at or
/// after their lead, so a left-to-right sweep suffices.
fn reduce_fully<A: Arith>(
    ar: &A,
    pivots: &HashMap<usize, Vec<(usize, A::E)>>,
    mut row: Vec<(usize, A::E)>,
) -> Vec<(usize, A::E)> {
    let mut i = 0;
    while i < row.len() {
        match pivots.get(&row[i].0) {
            Some(p) => {
                let f = ar.neg(&row[i].1);
                row = axpy(ar, &row, &f, p);
            }
            None => i += 1,
        }
    }
    row
}

fn quotient<A: Arith>(
    ar: &A,
    cols: usize,
    relations: &Rows<A::E>,
    maps: &[&Rows<A::E>],
) -> (Vec<usize>, Vec<Vec<A::E>>) {
    let pivots = echelon(ar, relations);
    let free: Vec<usize> = (0..cols).filter(|j| !pivots.contains_key(j)).collect();
    let position: HashMap<usize, usize> = free.iter().enumerate().map(|(i, &j)| (j, i)).collect();
    let k = free.len();
    let images = maps
        .iter()
        .map(|m| {
            let mut out = vec![ar.zero(); k * k];
            for (i, &j) in free.iter().enumerate() {
                for (c, v) in reduce_fully(ar, &pivots, m[j].clone()) {
                    out[i * k + position[&c]] = v;
                }
            }
            out
        })
        .collect();
    (free, images)
}

fn sparse_mul<A: Arith>(ar: &A, a: &Rows<A::E>, b: &Rows<A::E>) -> Rows<A::E> {
    a.iter()
        .map(|row| {
            let mut acc: Vec<(usize, A::E)> = Vec::new();
            for (t, x) in row {
                for (j, y) in &b[*t] {
                    acc.push((*j, ar.mul(x, y)));
                }
            }
            merge_row(ar, acc)
        })
        .collect()
}

fn sparse_transpose<E: Clone>(rows: &Rows<E>, cols: usize) -> Rows<E> {
    let mut out: Rows<E> = vec![Vec::new(); cols];
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row {
            out[*j].push((i, v.clone()));
        }
    }
    out
}

fn from_dense<A: Arith>(ar: &A, rows: usize, cols: usize, v: &[A::E]) -> Rows<A::E> {
    (0..rows)
        .map(|i| {
            (0..cols)
                .filter(|&j| !ar.is_zero(&v[i * cols + j]))
                .map(|j| (j, v[i * cols + j].clone()))
                .collect()
        })
        .collect()
}

fn to_dense<A: Arith>(ar: &A, cols: usize, rows: &Rows<A::E>) -> Vec<A::E> {
    let mut out = vec![ar.zero(); rows.len() * cols];
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row {
            out[i * cols + j] = v.clone();
        }
    }
    out
}

/// `m · s` for dense `m`.
fn dense_times_sparse<A: Arith>(ar: &A, n: usize, k: usize, m: usize, a: &[A::E], b: &Rows<A::E>) -> Vec<A::E> {
    let mut out = vec![ar.zero(); n * m];
    for i in 0..n {
        for t in 0..k {
            let x = &a[i * k + t];
            if ar.is_zero(x) {
                continue;
            }
            for (j, y) in &b[t] {
                ar.add_mul_assign(&mut out[i * m + j], x, y);
            }
        }
    }
    out
}

impl SparseMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> SparseMatrix {
        let data = match field {
            Field::Rational => SData::Q(vec![Vec::new(); rows]),
            Field::Prime(p) => SData::Fp(p, vec![Vec::new(); rows]),
        };
        SparseMatrix { rows, cols, data }
    }

    pub fn from_dense(m: &Matrix) -> SparseMatrix {
        let (r, c) = (m.rows(), m.cols());
        let data = match m.data() {
            Data::Q(v) => SData::Q(from_dense(&QArith, r, c, v)),
            Data::Fp(p, v) => SData::Fp(*p, from_dense(&FpArith(*p), r, c, v)),
        };
        SparseMatrix { rows: r, cols: c, data }
    }

    pub fn to_dense(&self) -> Matrix {
        let data = match &self.data {
            SData::Q(rows) => Data::Q(to_dense(&QArith, self.cols, rows)),
            SData::Fp(p, rows) => Data::Fp(*p, to_dense(&FpArith(*p), self.cols, rows)),
        };
        Matrix::from_data(self.rows, self.cols, data)
    }

    pub fn field(&self) -> Field {
        match &self.data {
            SData::Q(_) => Field::Rational,
            SData::Fp(p, _) => Field::Prime(*p),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        match &self.data {
            SData::Q(r) => r.iter().map(Vec::len).sum(),
            SData::Fp(_, r) => r.iter().map(Vec::len).sum(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn transpose(&self) -> SparseMatrix {
        let data = match &self.data {
            SData::Q(r) => SData::Q(sparse_transpose(r, self.cols)),
            SData::Fp(p, r) => SData::Fp(*p, sparse_transpose(r, self.cols)),
        };
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(self.field(), other.field()));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = match (&self.data, &other.data) {
            (SData::Q(a), SData::Q(b)) => SData::Q(sparse_mul(&QArith, a, b)),
            (SData::Fp(p, a), SData::Fp(_, b)) => SData::Fp(*p, sparse_mul(&FpArith(*p), a, b)),
            _ => unreachable!("fields checked"),
        };
        Ok(SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// `m · self` for a dense `m`.
    pub fn left_mul_dense(&self, m: &Matrix) -> Result<Matrix> {
        if m.field() != self.field() {
            return Err(Error::FieldMismatch(self.field(), m.field()));
        }
        if m.cols() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                m.rows(),
                m.cols(),
                self.rows,
                self.cols
            )));
        }
        let (n, k, c) = (m.rows(), m.cols(), self.cols);
        let data = match (m.data(), &self.data) {
            (Data::Q(a), SData::Q(b)) => Data::Q(dense_times_sparse(&QArith, n, k, c, a, b)),
            (Data::Fp(p, a), SData::Fp(_, b)) => Data::Fp(*p, dense_times_sparse(&FpArith(*p), n, k, c, a, b)),
            _ => unreachable!("fields checked"),
        };
        Ok(Matrix::from_data(n, c, data))
    }

    pub fn rank(&self) -> usize {
        // eliminate along the shorter side
        let t;
        let m = if self.rows > self.cols {
            t = self.transpose();
            &t
        } else {
            self
        };
        match &m.data {
            SData::Q(r) => sparse_rank(&QArith, r),
            SData::Fp(p, r) => sparse_rank(&FpArith(*p), r),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.rows && j < self.cols, "index out of range");
        match &self.data {
            SData::Q(r) => Scalar::Rational(
                r[i].iter()
                    .find(|e| e.0 == j)
                    .map_or_else(|| QArith.zero(), |e| e.1.clone()),
            ),
            SData::Fp(p, r) => Scalar::Prime {
                value: r[i].iter().find(|e| e.0 == j).map_or(0, |e| e.1),
                p: *p,
            },
        }
    }
}

/// The quotient of `F^dim` by the row span of `relations`, with basis the
/// non-pivot standard vectors (returned as column indices), and the matrices
/// each of `maps` induces on it. The maps must preserve the row span.
pub fn row_quotient(
    field: Field,
    dim: usize,
    relations: Option<&SparseMatrix>,
    maps: &[&SparseMatrix],
) -> Result<(Vec<usize>, Vec<Matrix>)> {
    let empty = SparseMatrix::zeros(field, 0, dim);
    let rel = relations.unwrap_or(&empty);
    for m in maps.iter().copied().chain([rel]) {
        if m.field() != field {
            return Err(Error::FieldMismatch(field, m.field()));
        }
        if m.cols != dim || (!std::ptr::eq(m, rel) && m.rows != dim) {
            return Err(Error::DimensionMismatch("quotient maps must act on the ambient space".into()));
        }
    }
    let (free, images) = match &rel.data {
        SData::Q(r) => {
            let ms: Vec<&Rows<BigRational>> = maps
                .iter()
                .map(|m| match &m.data {
                    SData::Q(x) => x,
                    SData::Fp(..) => unreachable!("fields checked"),
                })
                .collect();
            let (free, im) = quotient(&QArith, dim, r, &ms);
            (free, im.into_iter().map(Data::Q).collect::<Vec<_>>())
        }
        SData::Fp(p, r) => {
            let ms: Vec<&Rows<u32>> = maps
                .iter()
                .map(|m| match &m.data {
                    SData::Fp(_, x) => x,
                    SData::Q(_) => unreachable!("fields checked"),
                })
                .collect();
            let (free, im) = quotient(&FpArith(*p), dim, r, &ms);
            (free, im.into_iter().map(|v| Data::Fp(*p, v)).collect())
        }
    };
    let k = free.len();
    Ok((free, images.into_iter().map(|d| Matrix::from_data(k, k, d)).collect()))
}

/// Accumulates blocks and entries, summing repeated positions.
pub struct SparseBuilder {
    rows: usize,
    cols: usize,
    data: SData,
}

impl SparseBuilder {
    pub fn new(field: Field, rows: usize, cols: usize) -> SparseBuilder {
        let SparseMatrix { data, .. } = SparseMatrix::zeros(field, rows, cols);
        SparseBuilder { rows, cols, data }
    }

    /// Adds `sign · block` with its top-left corner at `(r0, c0)`.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &Matrix, negate: bool) -> Result<()> {
        if r0 + block.rows() > self.rows || c0 + block.cols() > self.cols {
            return Err(Error::DimensionMismatch("block does not fit".into()));
        }
        let (br, bc) = (block.rows(), block.cols());
        match (&mut self.data, block.data()) {
            (SData::Q(rows), Data::Q(v)) => {
                for i in 0..br {
                    for j in 0..bc {
                        let e = &v[i * bc + j];
                        if !QArith.is_zero(e) {
                            rows[r0 + i].push((c0 + j, if negate { -e } else { e.clone() }));
                        }
                    }
                }
            }
            (SData::Fp(p, rows), Data::Fp(_, v)) => {
                let ar = FpArith(*p);
                for i in 0..br {
                    for j in 0..bc {
                        let e = v[i * bc + j];
                        if e != 0 {
                            rows[r0 + i].push((c0 + j, if negate { ar.neg(&e) } else { e }));
                        }
                    }
                }
            }
            (data, _) => {
                let field = match data {
                    SData::Q(_) => Field::Rational,
                    SData::Fp(p, _) => Field::Prime(*p),
                };
                return Err(Error::FieldMismatch(field, block.field()));
            }
        }
        Ok(())
    }

    /// Adds `±1` times the identity of size `n` at `(r0, c0)`.
    pub fn add_identity(&mut self, r0: usize, c0: usize, n: usize, negate: bool) -> Result<()> {
        if r0 + n > self.rows || c0 + n > self.cols {
            return Err(Error::DimensionMismatch("block does not fit".into()));
        }
        match &mut self.data {
            SData::Q(rows) => {
                let one = if negate { -QArith.one() } else { QArith.one() };
                for i in 0..n {
                    rows[r0 + i].push((c0 + i, one.clone()));
                }
            }
            SData::Fp(p, rows) => {
                let ar = FpArith(*p);
                let one = if negate { ar.neg(&ar.one()) } else { ar.one() };
                for i in 0..n {
                    rows[r0 + i].push((c0 + i, one));
                }
            }
        }
        Ok(())
    }

    pub fn finish(self) -> SparseMatrix {
        let data = match self.data {
            SData::Q(rows) => SData::Q(rows.into_iter().map(|r| merge_row(&QArith, r)).collect()),
            SData::Fp(p, rows) => {
                let ar = FpArith(p);
                SData::Fp(p, rows.into_iter().map(|r| merge_row(&ar, r)).collect())
            }
        };
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense(field: Field, r: usize, c: usize, v: &[i64]) -> Matrix {
        if r == 0 {
            return Matrix::zeros(field, 0, c);
        }
        let rows: Vec<Vec<i64>> = (0..r).map(|i| v[i * c..(i + 1) * c].to_vec()).collect();
        Matrix::from_i64_rows(field, &rows).unwrap()
    }

    #[test]
    fn builder_sums_repeats() {
        let mut b = SparseBuilder::new(Field::Rational, 2, 2);
        b.add_identity(0, 0, 2, false).unwrap();
        b.add_identity(0, 0, 2, true).unwrap();
        b.add_block(1, 0, &dense(Field::Rational, 1, 2, &[3, 0]), false).unwrap();
        let m = b.finish();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.to_dense(), dense(Field::Rational, 2, 2, &[0, 0, 3, 0]));
        let mut bad = SparseBuilder::new(Field::Rational, 1, 1);
        assert!(bad.add_identity(0, 0, 2, false).is_err());
    }

    #[test]
    fn quotient_of_cyclic_permutation() {
        let q = Field::Rational;
        let rel = SparseMatrix::from_dense(&dense(q, 2, 3, &[1, -1, 0, 0, 1, -1]));
        let cycle = SparseMatrix::from_dense(&dense(q, 3, 3, &[0, 1, 0, 0, 0, 1, 1, 0, 0]));
        let (free, maps) = row_quotient(q, 3, Some(&rel), &[&cycle]).unwrap();
        assert_eq!(free, vec![2]);
        assert!(maps[0].is_identity());
        let (free, maps) = row_quotient(q, 3, None, &[&cycle]).unwrap();
        assert_eq!(free.len(), 3);
        assert_eq!(maps[0], cycle.to_dense());
    }

    proptest! {
        #[test]
        fn agrees_with_dense(r in 0usize..6, c in 0usize..6, k in 0usize..6,
                             v in proptest::collection::vec(-2i64..3, 36),
                             w in proptest::collection::vec(-2i64..3, 36),
                             p in prop_oneof![Just(0u32), Just(2), Just(3)]) {
            let field = if p == 0 { Field::Rational } else { Field::Prime(p) };
            let a = dense(field, r, c, &v[..r * c]);
            let b = dense(field, c, k, &w[..c * k]);
            let sa = SparseMatrix::from_dense(&a);
            let sb = SparseMatrix::from_dense(&b);
            prop_assert_eq!(sa.to_dense(), a.clone());
            prop_assert_eq!(sa.rank(), a.rank());
            prop_assert_eq!(sa.transpose().to_dense(), a.transpose());
            prop_assert_eq!(sa.mul(&sb).unwrap().to_dense(), a.mul(&b).unwrap());
            prop_assert_eq!(sb.left_mul_dense(&a).unwrap(), a.mul(&b).unwrap());
            let (free, _) = row_quotient(field, c, Some(&sa), &[]).unwrap();
            prop_assert_eq!(free.len(), c - a.rank());
        }
    }
}
