use std::fmt;

use num_rational::BigRational;

use super::arith::{self, Arith, FpArith, QArith};
use super::field::{Field, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) enum Data {
    Q(Vec<BigRational>),
    Fp(u32, Vec<u32>),
}

impl Data {
    fn field(&self) -> Field {
        match self {
            Data::Q(_) => Field::Rational,
            Data::Fp(p, _) => Field::Prime(*p),
        }
    }

    fn zeros(field: Field, len: usize) -> Data {
        match field {
            Field::Rational => Data::Q(vec![QArith.zero(); len]),
            Field::Prime(p) => Data::Fp(p, vec![0; len]),
        }
    }
}

/// Dense row-major matrix over one field. Vectors are `1 × n` matrices and
/// modules are row spaces: `v ↦ v · A`.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Data,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field())?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: Data::zeros(field, rows * cols),
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set_i64(i, i, 1);
        }
        m
    }

    /// Integer entries mapped into `field`.
    pub fn from_i64_rows(field: Field, rows: &[Vec<i64>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Matrix::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for (j, &v) in r.iter().enumerate() {
                m.set_i64(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn from_rational_rows(field: Field, rows: &[Vec<BigRational>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Matrix::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, field.from_rational(v)?)?;
            }
        }
        Ok(m)
    }

    /// Builds a matrix from scalars, rejecting entries from more than one field.
    pub fn from_scalars(rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Matrix> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let field = entries.first().map_or(Field::Rational, Scalar::field);
        let mut m = Matrix::zeros(field, rows, cols);
        for (k, s) in entries.into_iter().enumerate() {
            m.set(k / cols.max(1), k % cols.max(1), s)?;
        }
        Ok(m)
    }

    /// A `1 × n` row vector.
    pub fn row_vector(entries: Vec<Scalar>, field: Field) -> Result<Matrix> {
        let n = entries.len();
        if n == 0 {
            return Ok(Matrix::zeros(field, 1, 0));
        }
        let m = Matrix::from_scalars(1, n, entries)?;
        m.check_field(field)?;
        Ok(m)
    }

    pub fn field(&self) -> Field {
        self.data.field()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub(crate) fn check_field(&self, field: Field) -> Result<()> {
        if self.field() != field {
            return Err(Error::FieldMismatch(self.field(), field));
        }
        Ok(())
    }

    fn check_same_field(&self, other: &Matrix) -> Result<()> {
        self.check_field(other.field())
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.rows && j < self.cols, "index out of range");
        let k = i * self.cols + j;
        match &self.data {
            Data::Q(v) => Scalar::Rational(v[k].clone()),
            Data::Fp(p, v) => Scalar::Prime { value: v[k], p: *p },
        }
    }

    pub fn set(&mut self, i: usize, j: usize, s: Scalar) -> Result<()> {
        assert!(i < self.rows && j < self.cols, "index out of range");
        let k = i * self.cols + j;
        let field = self.field();
        match (&mut self.data, s) {
            (Data::Q(v), Scalar::Rational(q)) => v[k] = q,
            (Data::Fp(p, v), Scalar::Prime { value, p: q }) if *p == q => v[k] = value,
            (_, s) => return Err(Error::FieldMismatch(field, s.field())),
        }
        Ok(())
    }

    pub fn set_i64(&mut self, i: usize, j: usize, v: i64) {
        let s = self.field().from_i64(v);
        self.set(i, j, s).expect("same field");
    }

    pub fn is_zero(&self) -> bool {
        match &self.data {
            Data::Q(v) => v.iter().all(|e| QArith.is_zero(e)),
            Data::Fp(_, v) => v.iter().all(|&e| e == 0),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(self.field(), self.rows)
    }

    /// Number of nonzero entries.
    pub fn nnz(&self) -> usize {
        match &self.data {
            Data::Q(v) => v.iter().filter(|e| !QArith.is_zero(e)).count(),
            Data::Fp(_, v) => v.iter().filter(|&&e| e != 0).count(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        fn t<E: Clone>(r: usize, c: usize, v: &[E]) -> Vec<E> {
            let mut out = Vec::with_capacity(v.len());
            for j in 0..c {
                for i in 0..r {
                    out.push(v[i * c + j].clone());
                }
            }
            out
        }
        let data = match &self.data {
            Data::Q(v) => Data::Q(t(self.rows, self.cols, v)),
            Data::Fp(p, v) => Data::Fp(*p, t(self.rows, self.cols, v)),
        };
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let data = match (&self.data, &other.data) {
            (Data::Q(a), Data::Q(b)) => Data::Q(arith::matmul(&QArith, n, k, m, a, b)),
            (Data::Fp(p, a), Data::Fp(_, b)) => Data::Fp(*p, arith::matmul(&FpArith(*p), n, k, m, a, b)),
            _ => unreachable!("fields checked"),
        };
        Ok(Matrix { rows: n, cols: m, data })
    }

    fn zip_with(&self, other: &Matrix, subtract: bool) -> Result<Matrix> {
        self.check_same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        fn go<A: Arith>(ar: &A, a: &[A::E], b: &[A::E], sub: bool) -> Vec<A::E> {
            a.iter()
                .zip(b)
                .map(|(x, y)| if sub { ar.sub(x, y) } else { ar.add(x, y) })
                .collect()
        }
        let data = match (&self.data, &other.data) {
            (Data::Q(a), Data::Q(b)) => Data::Q(go(&QArith, a, b, subtract)),
            (Data::Fp(p, a), Data::Fp(_, b)) => Data::Fp(*p, go(&FpArith(*p), a, b, subtract)),
            _ => unreachable!("fields checked"),
        };
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, false)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, true)
    }

    pub fn scale(&self, s: &Scalar) -> Result<Matrix> {
        self.check_field(s.field())?;
        let data = match (&self.data, s) {
            (Data::Q(a), Scalar::Rational(q)) => Data::Q(a.iter().map(|x| x * q).collect()),
            (Data::Fp(p, a), Scalar::Prime { value, .. }) => {
                let ar = FpArith(*p);
                Data::Fp(*p, a.iter().map(|x| ar.mul(x, value)).collect())
            }
            _ => unreachable!("fields checked"),
        };
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&self.field().from_i64(-1)).expect("same field")
    }

    pub fn trace(&self) -> Scalar {
        let mut acc = self.field().zero();
        for i in 0..self.rows.min(self.cols) {
            acc = scalar_add(&acc, &self.get(i, i));
        }
        acc
    }

    pub fn row(&self, i: usize) -> Matrix {
        self.select_rows(&[i])
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        fn pick<E: Clone>(cols: usize, v: &[E], idx: &[usize]) -> Vec<E> {
            idx.iter()
                .flat_map(|&i| v[i * cols..(i + 1) * cols].iter().cloned())
                .collect()
        }
        let data = match &self.data {
            Data::Q(v) => Data::Q(pick(self.cols, v, idx)),
            Data::Fp(p, v) => Data::Fp(*p, pick(self.cols, v, idx)),
        };
        Matrix {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        self.transpose().select_rows(idx).transpose()
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) -> Result<()> {
        self.check_same_field(block)?;
        if r0 + block.rows > self.rows || c0 + block.cols > self.cols {
            return Err(Error::DimensionMismatch("block out of range".into()));
        }
        let cols = self.cols;
        match (&mut self.data, &block.data) {
            (Data::Q(dst), Data::Q(src)) => copy_block(dst, cols, src, block.rows, block.cols, r0, c0),
            (Data::Fp(_, dst), Data::Fp(_, src)) => {
                copy_block(dst, cols, src, block.rows, block.cols, r0, c0)
            }
            _ => unreachable!("fields checked"),
        }
        Ok(())
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(self.field(), rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(r0 + i, c0 + j)).expect("same field");
            }
        }
        out
    }

    /// Stacks matrices vertically; all must share a column count and field.
    pub fn vstack(field: Field, cols: usize, parts: &[&Matrix]) -> Result<Matrix> {
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut r = 0;
        for m in parts {
            if m.cols != cols {
                return Err(Error::DimensionMismatch("vstack column count".into()));
            }
            out.set_block(r, 0, m)?;
            r += m.rows;
        }
        Ok(out)
    }

    pub fn hstack(field: Field, rows: usize, parts: &[&Matrix]) -> Result<Matrix> {
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut c = 0;
        for m in parts {
            if m.rows != rows {
                return Err(Error::DimensionMismatch("hstack row count".into()));
            }
            out.set_block(0, c, m)?;
            c += m.cols;
        }
        Ok(out)
    }

    /// Block-diagonal sum.
    pub fn direct_sum(field: Field, parts: &[&Matrix]) -> Result<Matrix> {
        let rows = parts.iter().map(|m| m.rows).sum();
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let (mut r, mut c) = (0, 0);
        for m in parts {
            out.set_block(r, c, m)?;
            r += m.rows;
            c += m.cols;
        }
        Ok(out)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kronecker(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_field(other)?;
        let mut out = Matrix::zeros(self.field(), self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                out.set_block(i * other.rows, j * other.cols, &other.scale(&a)?)?;
            }
        }
        Ok(out)
    }

    /// Reduced row-echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut out = self.clone();
        let (r, c) = (self.rows, self.cols);
        let pivots = match &mut out.data {
            Data::Q(v) => arith::rref(&QArith, r, c, v),
            Data::Fp(p, v) => arith::rref(&FpArith(*p), r, c, v),
        };
        (out, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rows form a basis of `{x : self · xᵀ = 0}`.
    pub fn kernel_basis(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let cols = self.cols;
        let (k, data) = match &r.data {
            Data::Q(v) => {
                let (k, out) = arith::null_space_from_rref(&QArith, cols, v, &pivots);
                (k, Data::Q(out))
            }
            Data::Fp(p, v) => {
                let (k, out) = arith::null_space_from_rref(&FpArith(*p), cols, v, &pivots);
                (k, Data::Fp(*p, out))
            }
        };
        Matrix { rows: k, cols, data }
    }

    /// Rows form a basis of `{x : x · self = 0}`.
    pub fn left_kernel_basis(&self) -> Matrix {
        self.transpose().kernel_basis()
    }

    /// Coordinates `c` with `c · basis = target`, or `None` when `target` is outside the row span.
    /// Basis rows are assumed independent.
    pub fn solve_in_span(basis: &Matrix, target: &Matrix) -> Result<Option<Matrix>> {
        basis.check_same_field(target)?;
        if target.rows != 1 || target.cols != basis.cols {
            return Err(Error::DimensionMismatch(format!(
                "target {}x{} against basis of width {}",
                target.rows, target.cols, basis.cols
            )));
        }
        let k = basis.rows;
        let system = Matrix::hstack(basis.field(), basis.cols, &[&basis.transpose(), &target.transpose()])?;
        let (r, pivots) = system.rref();
        if pivots.contains(&k) {
            return Ok(None);
        }
        if pivots.len() != k {
            return Err(Error::DimensionMismatch("basis rows are dependent".into()));
        }
        let mut coords = Matrix::zeros(basis.field(), 1, k);
        for (row, &p) in pivots.iter().enumerate() {
            coords.set(0, p, r.get(row, k))?;
        }
        Ok(Some(coords))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = Matrix::hstack(self.field(), n, &[self, &Matrix::identity(self.field(), n)])?;
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[..n].iter().enumerate().any(|(i, &p)| p != i) {
            return Err(Error::Singular);
        }
        Ok(r.block(0, n, n, n))
    }

    /// `self - I`
    pub fn minus_identity(&self) -> Result<Matrix> {
        self.sub(&Matrix::identity(self.field(), self.rows))
    }

    /// Entry strings in canonical form (`p/q` for rationals, residues for GF(p)).
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }

    pub(crate) fn from_data(rows: usize, cols: usize, data: Data) -> Matrix {
        Matrix { rows, cols, data }
    }

    pub(crate) fn data(&self) -> &Data {
        &self.data
    }
}

fn copy_block<E: Clone>(dst: &mut [E], cols: usize, src: &[E], br: usize, bc: usize, r0: usize, c0: usize) {
    for i in 0..br {
        let d = (r0 + i) * cols + c0;
        dst[d..d + bc].clone_from_slice(&src[i * bc..(i + 1) * bc]);
    }
}

pub(crate) fn scalar_add(a: &Scalar, b: &Scalar) -> Scalar {
    match (a, b) {
        (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
        (Scalar::Prime { value: x, p }, Scalar::Prime { value: y, .. }) => Scalar::Prime {
            value: FpArith(*p).add(x, y),
            p: *p,
        },
        _ => panic!("scalar field mismatch"),
    }
}

/// A row space held in reduced echelon form, for repeated membership and
/// coordinate queries.
#[derive(Clone, Debug)]
pub struct Echelon {
    basis: Matrix,
    pivots: Vec<usize>,
    supports: Vec<Vec<usize>>,
}

impl Echelon {
    pub fn new(m: &Matrix) -> Echelon {
        let (r, pivots) = m.rref();
        let basis = r.select_rows(&(0..pivots.len()).collect::<Vec<_>>());
        let supports = (0..basis.rows)
            .map(|i| (0..basis.cols).filter(|&j| !basis.get(i, j).is_zero()).collect())
            .collect();
        Echelon {
            basis,
            pivots,
            supports,
        }
    }

    pub fn empty(field: Field, cols: usize) -> Echelon {
        Echelon::new(&Matrix::zeros(field, 0, cols))
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The reduced basis rows.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Each row of `m` reduced modulo the span: the result vanishes on all pivot columns.
    pub fn reduce(&self, m: &Matrix) -> Result<Matrix> {
        m.check_same_field(&self.basis)?;
        if m.cols != self.basis.cols {
            return Err(Error::DimensionMismatch("reduce width".into()));
        }
        let mut out = m.clone();
        let cols = m.cols;
        match (&mut out.data, &self.basis.data) {
            (Data::Q(v), Data::Q(e)) => {
                for row in v.chunks_mut(cols.max(1)).take(m.rows) {
                    arith::reduce_against(&QArith, cols, e, &self.pivots, &self.supports, row);
                }
            }
            (Data::Fp(p, v), Data::Fp(_, e)) => {
                let ar = FpArith(*p);
                for row in v.chunks_mut(cols.max(1)).take(m.rows) {
                    arith::reduce_against(&ar, cols, e, &self.pivots, &self.supports, row);
                }
            }
            _ => unreachable!("fields checked"),
        }
        Ok(out)
    }

    /// Coordinates of every row of `m` with respect to the reduced basis,
    /// or `None` if some row is not in the span.
    pub fn coordinates(&self, m: &Matrix) -> Result<Option<Matrix>> {
        let reduced = self.reduce(m)?;
        if !reduced.is_zero() {
            return Ok(None);
        }
        Ok(Some(m.select_cols(&self.pivots)))
    }

    pub fn contains(&self, v: &Matrix) -> Result<bool> {
        Ok(self.reduce(v)?.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_i64_rows(Field::Rational, rows).unwrap()
    }

    #[test]
    fn rref_identity() {
        let m = q(&[vec![1, 0], vec![0, 1]]);
        let (r, p) = m.rref();
        assert_eq!(r, m);
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn rref_rank_one() {
        let (r, p) = q(&[vec![1, 2], vec![2, 4]]).rref();
        assert_eq!(r, q(&[vec![1, 2], vec![0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn rref_over_gf2() {
        // Hand reduction: R2 += R1 gives [[1,1],[0,1]], then R1 += R2 gives the identity.
        let m = Matrix::from_i64_rows(Field::Prime(2), &[vec![1, 1], vec![1, 2]]).unwrap();
        // 2 ≡ 0 in GF(2): the matrix is [[1,1],[1,0]].
        let (r, p) = m.rref();
        assert_eq!(r, Matrix::identity(Field::Prime(2), 2));
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::zeros(Field::Rational, 2, 3).kernel_basis().rows(), 3);
        assert_eq!(Matrix::identity(Field::Rational, 3).kernel_basis().rows(), 0);
        let m = q(&[vec![1, 1, 0]]);
        let k = m.kernel_basis();
        assert_eq!(k.rows(), 2);
        assert!(m.mul(&k.transpose()).unwrap().is_zero());
        assert_eq!(k.rank(), 2);
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::identity(Field::Rational, 2);
        let c = Matrix::solve_in_span(&id, &q(&[vec![3, 5]])).unwrap().unwrap();
        assert_eq!(c, q(&[vec![3, 5]]));
        let b = q(&[vec![1, 1]]);
        assert_eq!(
            Matrix::solve_in_span(&b, &q(&[vec![2, 2]])).unwrap().unwrap(),
            q(&[vec![2]])
        );
        assert!(Matrix::solve_in_span(&b, &q(&[vec![1, 0]])).unwrap().is_none());
        assert!(Matrix::solve_in_span(&b, &q(&[vec![1, 0, 0]])).is_err());
    }

    #[test]
    fn field_mismatch_is_rejected() {
        let a = Matrix::identity(Field::Rational, 2);
        let b = Matrix::identity(Field::Prime(3), 2);
        assert!(matches!(a.mul(&b), Err(Error::FieldMismatch(..))));
        let mixed = vec![Field::Rational.one(), Field::Prime(5).one()];
        assert!(matches!(
            Matrix::from_scalars(1, 2, mixed),
            Err(Error::FieldMismatch(..))
        ));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = q(&[vec![2, 1], vec![7, 4]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        assert!(matches!(q(&[vec![1, 2], vec![2, 4]]).inverse(), Err(Error::Singular)));
    }

    #[test]
    fn echelon_coordinates() {
        let e = Echelon::new(&q(&[vec![1, 1, 0], vec![0, 1, 1]]));
        let v = q(&[vec![2, 5, 3]]);
        let c = e.coordinates(&v).unwrap().unwrap();
        let back = c.mul(e.basis()).unwrap();
        assert_eq!(back, v);
        assert!(e.coordinates(&q(&[vec![1, 0, 0]])).unwrap().is_none());
    }
}
