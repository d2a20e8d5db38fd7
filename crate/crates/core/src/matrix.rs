//! Exact integer and rational linear algebra.
//!
//! Everything here is exact: determinants via fraction-free elimination,
//! inverses over the rationals, Smith normal form with recorded unimodular
//! transforms, primitive kernel vectors, and definiteness tests through
//! leading principal minors. No floating point anywhere.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Exact integer scalar.
pub type Int = BigInt;
/// Exact rational scalar.
pub type Rat = BigRational;

/// Convert an `i64` slice to an exact integer vector.
pub fn vec_int(xs: &[i64]) -> Vec<Int> {
    xs.iter().map(|&x| Int::from(x)).collect()
}

/// Exact dot product of two integer vectors.
pub fn dot(a: &[Int], b: &[Int]) -> Int {
    assert_eq!(a.len(), b.len(), "dot: length mismatch");
    let mut acc = Int::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Int::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(
            rows.iter().all(|row| row.len() == c),
            "from_rows: ragged rows"
        );
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Convenience constructor from machine integers (tests, fixtures).
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| vec_int(r)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn require_symmetric(&self) -> Result<()> {
        self.require_square()?;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return Err(Error::NotSymmetric { i, j });
                }
            }
        }
        Ok(())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "mul: inner dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn matvec(&self, x: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, x.len(), "matvec: dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// Delete one row and the same-numbered column (square matrices).
    pub fn delete_row_col(&self, k: usize) -> IntMatrix {
        assert!(self.is_square() && k < self.rows);
        let keep: Vec<usize> = (0..self.rows).filter(|&i| i != k).collect();
        let mut out = IntMatrix::zeros(keep.len(), keep.len());
        for (ii, &i) in keep.iter().enumerate() {
            for (jj, &j) in keep.iter().enumerate() {
                out.set(ii, jj, self.get(i, j).clone());
            }
        }
        out
    }

    /// Reorder rows and columns of a square matrix by `perm` (new index ->
    /// old index).
    pub fn permute(&self, perm: &[usize]) -> IntMatrix {
        assert!(self.is_square() && perm.len() == self.rows);
        let mut out = IntMatrix::zeros(self.rows, self.rows);
        for i in 0..self.rows {
            for j in 0..self.rows {
                out.set(i, j, self.get(perm[i], perm[j]).clone());
            }
        }
        out
    }

    /// Block diagonal sum of two square matrices.
    pub fn direct_sum(&self, other: &IntMatrix) -> IntMatrix {
        assert!(self.is_square() && other.is_square());
        let n = self.rows + other.rows;
        let mut out = IntMatrix::zeros(n, n);
        for i in 0..self.rows {
            for j in 0..self.rows {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.rows {
                out.set(self.rows + i, self.rows + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination with row pivoting.
    pub fn det(&self) -> Result<Int> {
        let n = self.require_square()?;
        if n == 0 {
            return Ok(Int::one());
        }
        let mut m = self.to_rows();
        let mut sign = 1i32;
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                    return Ok(Int::zero());
                };
                m.swap(k, r);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    m[i][j] = q;
                }
                m[i][k] = Int::zero();
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        Ok(if sign < 0 { -d } else { d })
    }

    /// Leading principal minors `det(A[..k]) for k = 1..=n`, computed
    /// fraction-free without pivoting. Returns `None` if some leading minor
    /// is zero (in which case the form is not definite).
    pub fn leading_principal_minors(&self) -> Result<Option<Vec<Int>>> {
        let n = self.require_square()?;
        let mut m = self.to_rows();
        let mut minors = Vec::with_capacity(n);
        let mut prev = Int::one();
        for k in 0..n {
            if m[k][k].is_zero() {
                return Ok(None);
            }
            minors.push(m[k][k].clone());
            if k + 1 == n {
                break;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    m[i][j] = q;
                }
                m[i][k] = Int::zero();
            }
            prev = m[k][k].clone();
        }
        Ok(Some(minors))
    }

    /// Negative definiteness: `(-1)^k * minor_k > 0` for all k.
    pub fn is_negative_definite(&self) -> Result<bool> {
        self.require_symmetric()?;
        let Some(minors) = self.leading_principal_minors()? else {
            return Ok(false);
        };
        Ok(minors
            .iter()
            .enumerate()
            .all(|(i, m)| if i % 2 == 0 { m.is_negative() } else { m.is_positive() }))
    }

    /// Exact rational inverse. Errors on singular input.
    pub fn invert(&self) -> Result<RatMatrix> {
        let n = self.require_square()?;
        let mut a: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| Rat::from_integer(x.clone()))
                    .collect()
            })
            .collect();
        let mut inv: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Rat::one()
                        } else {
                            Rat::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return Err(Error::SingularMatrix);
            };
            a.swap(k, p);
            inv.swap(k, p);
            let piv = a[k][k].clone();
            for j in 0..n {
                a[k][j] /= piv.clone();
                inv[k][j] /= piv.clone();
            }
            for i in 0..n {
                if i == k || a[i][k].is_zero() {
                    continue;
                }
                let f = a[i][k].clone();
                for j in 0..n {
                    let av = &a[k][j] * &f;
                    a[i][j] -= av;
                    let bv = &inv[k][j] * &f;
                    inv[i][j] -= bv;
                }
            }
        }
        Ok(RatMatrix::from_rows(inv))
    }

    /// Adjugate matrix: `adj(A) = det(A) * A^{-1}`, exactly integral.
    pub fn adjugate(&self) -> Result<IntMatrix> {
        let n = self.require_square()?;
        let d = self.det()?;
        if d.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let inv = self.invert()?;
        let mut out = IntMatrix::zeros(n, n);
        let dr = Rat::from_integer(d);
        for i in 0..n {
            for j in 0..n {
                let v = inv.get(i, j) * &dr;
                debug_assert!(v.is_integer(), "adjugate entries must be integral");
                out.set(i, j, v.to_integer());
            }
        }
        Ok(out)
    }

    /// Smith normal form with recorded transforms: `U * A * V = D`.
    ///
    /// Pivot selection: smallest nonzero absolute value in the active
    /// submatrix, ties broken by lowest row then lowest column. The diagonal
    /// is normalized non-negative and satisfies the divisibility chain
    /// `d_1 | d_2 | ...`.
    pub fn smith_normal_form(&self) -> SnfResult {
        let n = self.rows;
        let m = self.cols;
        let mut d = self.clone();
        let mut u = IntMatrix::identity(n);
        let mut v = IntMatrix::identity(m);
        let steps = n.min(m);
        'stages: for t in 0..steps {
            loop {
                // Pivot: smallest |value|, lowest row then column.
                let mut pivot: Option<(usize, usize)> = None;
                for i in t..n {
                    for j in t..m {
                        if d.get(i, j).is_zero() {
                            continue;
                        }
                        let better = match pivot {
                            None => true,
                            Some((pi, pj)) => {
                                let cur = d.get(pi, pj).abs();
                                let cand = d.get(i, j).abs();
                                cand < cur
                            }
                        };
                        if better {
                            pivot = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = pivot else {
                    break 'stages; // remaining submatrix is zero
                };
                if pi != t {
                    d.swap_rows(t, pi);
                    u.swap_rows(t, pi);
                }
                if pj != t {
                    d.swap_cols(t, pj);
                    v.swap_cols(t, pj);
                }
                // Clear column and row t.
                let mut clean = true;
                for i in t + 1..n {
                    if d.get(i, t).is_zero() {
                        continue;
                    }
                    let q = d.get(i, t).div_floor(d.get(t, t));
                    if !q.is_zero() {
                        d.row_sub(i, t, &q);
                        u.row_sub(i, t, &q);
                    }
                    if !d.get(i, t).is_zero() {
                        clean = false;
                    }
                }
                for j in t + 1..m {
                    if d.get(t, j).is_zero() {
                        continue;
                    }
                    let q = d.get(t, j).div_floor(d.get(t, t));
                    if !q.is_zero() {
                        d.col_sub(j, t, &q);
                        v.col_sub(j, t, &q);
                    }
                    if !d.get(t, j).is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    continue;
                }
                // Divisibility: the pivot must divide the rest.
                let mut fixed = false;
                'search: for i in t + 1..n {
                    for j in t + 1..m {
                        if !d.get(i, j).mod_floor(d.get(t, t)).is_zero() {
                            d.row_add(t, i);
                            u.row_add(t, i);
                            fixed = true;
                            break 'search;
                        }
                    }
                }
                if !fixed {
                    break;
                }
            }
        }
        for t in 0..steps {
            if d.get(t, t).is_negative() {
                d.negate_row(t);
                u.negate_row(t);
            }
        }
        SnfResult { d, u, v }
    }

    /// Diagonal of the Smith normal form (includes zeros for singular input).
    pub fn invariant_factors(&self) -> Vec<Int> {
        let snf = self.smith_normal_form();
        (0..self.rows.min(self.cols))
            .map(|i| snf.d.get(i, i).clone())
            .collect()
    }

    /// Primitive kernel vector of a square matrix whose kernel has rank
    /// exactly one. Normalized so the last nonzero entry is positive.
    pub fn kernel_primitive(&self) -> Result<Vec<Int>> {
        let n = self.require_square()?;
        let snf = self.smith_normal_form();
        let zero_cols: Vec<usize> = (0..n).filter(|&i| snf.d.get(i, i).is_zero()).collect();
        match zero_cols.len() {
            0 => Err(Error::KernelTrivial),
            1 => {
                let j = zero_cols[0];
                let mut x: Vec<Int> = (0..n).map(|i| snf.v.get(i, j).clone()).collect();
                normalize_primitive(&mut x);
                Ok(x)
            }
            _ => Err(Error::KernelRankTooHigh),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row a -= q * row b
    fn row_sub(&mut self, a: usize, b: usize, q: &Int) {
        for j in 0..self.cols {
            let sub = q * self.get(b, j);
            let v = self.get(a, j) - sub;
            self.set(a, j, v);
        }
    }

    /// row a += row b
    fn row_add(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            let v = self.get(a, j) + self.get(b, j);
            self.set(a, j, v);
        }
    }

    /// col a -= q * col b
    fn col_sub(&mut self, a: usize, b: usize, q: &Int) {
        for i in 0..self.rows {
            let sub = q * self.get(i, b);
            let v = self.get(i, a) - sub;
            self.set(i, a, v);
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self.get(a, j);
            self.set(a, j, v);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Divide by the gcd and make the last nonzero entry positive.
pub fn normalize_primitive(x: &mut [Int]) {
    let mut g = Int::zero();
    for v in x.iter() {
        g = g.gcd(v);
    }
    if g.is_zero() {
        return;
    }
    if !g.is_one() {
        for v in x.iter_mut() {
            *v = &*v / &g;
        }
    }
    if let Some(last) = x.iter().rev().find(|v| !v.is_zero()) {
        if last.is_negative() {
            for v in x.iter_mut() {
                *v = -&*v;
            }
        }
    }
}

/// Result of a Smith normal form computation: `u * a * v = d`.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

/// Dense row-major rational matrix (exact).
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c));
        RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    /// Multiply every entry by a rational scalar.
    pub fn scale(&self, s: &Rat) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// True when every entry is an integer; returns the integer matrix.
    pub fn to_int(&self) -> Option<IntMatrix> {
        if self.data.iter().all(|x| x.is_integer()) {
            Some(IntMatrix {
                rows: self.rows,
                cols: self.cols,
                data: self.data.iter().map(|x| x.to_integer()).collect(),
            })
        } else {
            None
        }
    }

    pub fn mul_int(&self, other: &IntMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows());
        let mut data = vec![Rat::zero(); self.rows * other.cols()];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols() {
                    data[i * other.cols() + j] += a * Rat::from_integer(other.get(k, j).clone());
                }
            }
        }
        RatMatrix {
            rows: self.rows,
            cols: other.cols(),
            data,
        }
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> IntMatrix {
        IntMatrix::from_i64(&[&[-3, 1, 0], &[1, -5, 1], &[0, 1, -2]])
    }

    #[test]
    fn det_chain() {
        assert_eq!(chain3().det().unwrap(), Int::from(-25));
    }

    #[test]
    fn det_singular_and_permutation_sign() {
        let m = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.det().unwrap(), Int::from(-1));
        let s = IntMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.det().unwrap(), Int::zero());
    }

    #[test]
    fn negative_definite_checks() {
        assert!(chain3().is_negative_definite().unwrap());
        let indef = IntMatrix::from_i64(&[&[-1, 2], &[2, -1]]);
        assert!(!indef.is_negative_definite().unwrap());
        let pos = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        assert!(!pos.is_negative_definite().unwrap());
    }

    #[test]
    fn invert_chain_exact() {
        // -25 * inverse of the (-3,-5,-2) chain.
        let inv = chain3().invert().unwrap();
        let scaled = inv.scale(&Rat::from_integer(Int::from(-25)));
        let expect = IntMatrix::from_i64(&[&[9, 2, 1], &[2, 6, 3], &[1, 3, 14]]);
        assert_eq!(scaled.to_int().unwrap(), expect);
        // Reversed ordering carries the companion inverse.
        let rev = IntMatrix::from_i64(&[&[-2, 1, 0], &[1, -5, 1], &[0, 1, -3]]);
        let scaled = rev
            .invert()
            .unwrap()
            .scale(&Rat::from_integer(Int::from(-25)));
        let expect = IntMatrix::from_i64(&[&[14, 3, 1], &[3, 6, 2], &[1, 2, 9]]);
        assert_eq!(scaled.to_int().unwrap(), expect);
    }

    #[test]
    fn adjugate_matches_det_times_inverse() {
        let m = chain3();
        let adj = m.adjugate().unwrap();
        let prod = m.mul(&adj);
        let mut expect = IntMatrix::zeros(3, 3);
        for i in 0..3 {
            expect.set(i, i, Int::from(-25));
        }
        assert_eq!(prod, expect);
    }

    #[test]
    fn snf_verified_by_multiplication() {
        let m = chain3();
        let snf = m.smith_normal_form();
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
        assert_eq!(snf.u.det().unwrap().abs(), Int::one());
        assert_eq!(snf.v.det().unwrap().abs(), Int::one());
        let f = m.invariant_factors();
        assert_eq!(f, vec_int(&[1, 1, 25]));
    }

    #[test]
    fn invariant_factor_fixtures() {
        let wahl = IntMatrix::from_i64(&[
            &[-4, 1, 1, 1],
            &[1, -3, 0, 0],
            &[1, 0, -3, 0],
            &[1, 0, 0, -3],
        ]);
        assert_eq!(wahl.invariant_factors(), vec_int(&[1, 1, 3, 27]));
    }

    #[test]
    fn kernel_primitive_rank_one() {
        // Kernel of [[2, -4], [1, -2]] is spanned by (2, 1).
        let m = IntMatrix::from_i64(&[&[2, -4], &[1, -2]]);
        assert_eq!(m.kernel_primitive().unwrap(), vec_int(&[2, 1]));
        let ns = chain3();
        assert_eq!(ns.kernel_primitive(), Err(Error::KernelTrivial));
        let z = IntMatrix::zeros(2, 2);
        assert_eq!(z.kernel_primitive(), Err(Error::KernelRankTooHigh));
    }

    #[test]
    fn primitive_normalization_sign() {
        let mut v = vec_int(&[4, -2, -6]);
        normalize_primitive(&mut v);
        assert_eq!(v, vec_int(&[-2, 1, 3]));
    }
}
