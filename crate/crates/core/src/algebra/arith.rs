//! Field-generic dense kernels. `Matrix` dispatches into these once per call.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::inv_mod;

pub(crate) trait Arith {
    type E: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn is_one(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    /// `acc -= a * b`
    fn sub_mul_assign(&self, acc: &mut Self::E, a: &Self::E, b: &Self::E);
    /// `acc += a * b`
    fn add_mul_assign(&self, acc: &mut Self::E, a: &Self::E, b: &Self::E);
}

pub(crate) struct QArith;

impl Arith for QArith {
    type E = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn sub_mul_assign(&self, acc: &mut BigRational, a: &BigRational, b: &BigRational) {
        if a.is_one() {
            *acc -= b;
        } else if b.is_one() {
            *acc -= a;
        } else {
            *acc -= a * b;
        }
    }
    fn add_mul_assign(&self, acc: &mut BigRational, a: &BigRational, b: &BigRational) {
        if a.is_one() {
            *acc += b;
        } else if b.is_one() {
            *acc += a;
        } else {
            *acc += a * b;
        }
    }
}

pub(crate) struct FpArith(pub u32);

impl Arith for FpArith {
    type E = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1 % self.0
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn is_one(&self, a: &u32) -> bool {
        *a == 1
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + *b as u64) % self.0 as u64) as u32
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + self.0 as u64 - *b as u64) % self.0 as u64) as u32
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        (*a as u64 * *b as u64 % self.0 as u64) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.0 - a
        }
    }
    fn inv(&self, a: &u32) -> u32 {
        inv_mod(*a, self.0)
    }
    fn sub_mul_assign(&self, acc: &mut u32, a: &u32, b: &u32) {
        *acc = self.sub(acc, &self.mul(a, b));
    }
    fn add_mul_assign(&self, acc: &mut u32, a: &u32, b: &u32) {
        *acc = self.add(acc, &self.mul(a, b));
    }
}

/// In-place reduced row-echelon form of a row-major `rows × cols` block.
/// Returns the pivot columns.
pub(crate) fn rref<A: Arith>(ar: &A, rows: usize, cols: usize, m: &mut [A::E]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Prefer a unit pivot, which keeps rational entries small.
        let mut chosen = None;
        for i in r..rows {
            let e = &m[i * cols + c];
            if !ar.is_zero(e) {
                if ar.is_one(e) {
                    chosen = Some(i);
                    break;
                }
                if chosen.is_none() {
                    chosen = Some(i);
                }
            }
        }
        let Some(p) = chosen else { continue };
        if p != r {
            for j in 0..cols {
                m.swap(p * cols + j, r * cols + j);
            }
        }
        let lead = m[r * cols + c].clone();
        if !ar.is_one(&lead) {
            let inv = ar.inv(&lead);
            for j in c..cols {
                let e = &mut m[r * cols + j];
                if !ar.is_zero(e) {
                    *e = ar.mul(e, &inv);
                }
            }
        }
        let support: Vec<usize> = (c..cols)
            .filter(|&j| !ar.is_zero(&m[r * cols + j]))
            .collect();
        let pivot_row: Vec<A::E> = support.iter().map(|&j| m[r * cols + j].clone()).collect();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = m[i * cols + c].clone();
            if ar.is_zero(&f) {
                continue;
            }
            for (k, &j) in support.iter().enumerate() {
                ar.sub_mul_assign(&mut m[i * cols + j], &f, &pivot_row[k]);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Zero-skipping dense product of `a (n × k)` and `b (k × m)`.
pub(crate) fn matmul<A: Arith>(
    ar: &A,
    n: usize,
    k: usize,
    m: usize,
    a: &[A::E],
    b: &[A::E],
) -> Vec<A::E> {
    let mut out = vec![ar.zero(); n * m];
    for i in 0..n {
        for t in 0..k {
            let x = &a[i * k + t];
            if ar.is_zero(x) {
                continue;
            }
            let row = &b[t * m..(t + 1) * m];
            let dst = &mut out[i * m..(i + 1) * m];
            for (d, y) in dst.iter_mut().zip(row) {
                if !ar.is_zero(y) {
                    ar.add_mul_assign(d, x, y);
                }
            }
        }
    }
    out
}

/// Rows of a basis of the right null space of a matrix already in rref.
pub(crate) fn null_space_from_rref<A: Arith>(
    ar: &A,
    cols: usize,
    r: &[A::E],
    pivots: &[usize],
) -> (usize, Vec<A::E>) {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let mut out = vec![ar.zero(); free.len() * cols];
    for (k, &f) in free.iter().enumerate() {
        out[k * cols + f] = ar.one();
        for (row, &p) in pivots.iter().enumerate() {
            let e = &r[row * cols + f];
            if !ar.is_zero(e) {
                out[k * cols + p] = ar.neg(e);
            }
        }
    }
    (free.len(), out)
}

/// Subtracts multiples of echelon rows so that `v` vanishes on every pivot column.
pub(crate) fn reduce_against<A: Arith>(
    ar: &A,
    cols: usize,
    echelon: &[A::E],
    pivots: &[usize],
    supports: &[Vec<usize>],
    v: &mut [A::E],
) {
    for (row, &p) in pivots.iter().enumerate() {
        let f = v[p].clone();
        if ar.is_zero(&f) {
            continue;
        }
        for &j in &supports[row] {
            ar.sub_mul_assign(&mut v[j], &f, &echelon[row * cols + j]);
        }
    }
}
