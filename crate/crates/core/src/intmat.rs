//! Integer linear algebra with checked `i128` arithmetic.
//!
//! Everything over ℤ[ℤ/k] is reduced to this module by restriction of
//! scalars, so the Smith normal form here is the single source of truth for
//! homology, solvability and kernels.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

fn ck(v: Option<i128>) -> Result<i128> {
    v.ok_or(Error::Overflow)
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> IntMat {
        IntMat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> IntMat {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i128>]) -> IntMat {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = IntMat::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<i128>) -> IntMat {
        assert_eq!(data.len(), rows * cols);
        IntMat { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i128 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i128) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<i128> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> Result<IntMat> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(alloc::format!(
                "{}x{} times {}x{}",
                self.rows,
                self.cols,
                other.rows,
                other.cols
            )));
        }
        let mut out = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if b != 0 {
                        let cur = out.data[i * other.cols + j];
                        out.data[i * other.cols + j] = ck(cur.checked_add(ck(a.checked_mul(b))?))?;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[i128]) -> Result<Vec<i128>> {
        assert_eq!(x.len(), self.cols);
        let mut out = vec![0i128; self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, xj) in x.iter().enumerate() {
                *o = ck(o.checked_add(ck(self.get(i, j).checked_mul(*xj))?))?;
            }
        }
        Ok(out)
    }

    /// Rows `r0..r1` as a new matrix.
    pub fn row_range(&self, r0: usize, r1: usize) -> IntMat {
        IntMat::from_vec(r1 - r0, self.cols, self.data[r0 * self.cols..r1 * self.cols].to_vec())
    }

    /// Columns `c0..c1` as a new matrix.
    pub fn col_range(&self, c0: usize, c1: usize) -> IntMat {
        let mut m = IntMat::zeros(self.rows, c1 - c0);
        for r in 0..self.rows {
            for c in c0..c1 {
                m.set(r, c - c0, self.get(r, c));
            }
        }
        m
    }

    fn row_axpy(&mut self, dst: usize, src: usize, c: i128) -> Result<()> {
        for j in 0..self.cols {
            let v = ck(self.get(src, j).checked_mul(c))?;
            let w = ck(self.get(dst, j).checked_add(v))?;
            self.set(dst, j, w);
        }
        Ok(())
    }

    fn col_axpy(&mut self, dst: usize, src: usize, c: i128) -> Result<()> {
        for i in 0..self.rows {
            let v = ck(self.get(i, src).checked_mul(c))?;
            let w = ck(self.get(i, dst).checked_add(v))?;
            self.set(i, dst, w);
        }
        Ok(())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            self.data[a * self.cols + j] = -self.data[a * self.cols + j];
        }
    }
}

/// Smith normal form `U A V = D` with the inverses of both transforms.
///
/// `diag` holds the nonzero invariant factors `d_1 | d_2 | … | d_rank`, all
/// positive, sitting at positions `(t, t)` of `D`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMat,
    pub u_inv: IntMat,
    pub v: IntMat,
    pub v_inv: IntMat,
    pub diag: Vec<i128>,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }
}

struct Work {
    a: IntMat,
    u: IntMat,
    u_inv: IntMat,
    v: IntMat,
    v_inv: IntMat,
}

impl Work {
    // row_dst += c * row_src
    fn row_add(&mut self, dst: usize, src: usize, c: i128) -> Result<()> {
        self.a.row_axpy(dst, src, c)?;
        self.u.row_axpy(dst, src, c)?;
        self.u_inv.col_axpy(src, dst, -c)
    }

    // col_dst += c * col_src
    fn col_add(&mut self, dst: usize, src: usize, c: i128) -> Result<()> {
        self.a.col_axpy(dst, src, c)?;
        self.v.col_axpy(dst, src, c)?;
        self.v_inv.row_axpy(src, dst, -c)
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn row_negate(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        for r in 0..self.u_inv.rows {
            let x = self.u_inv.get(r, i);
            self.u_inv.set(r, i, -x);
        }
    }
}

/// Smith normal form with transforms.
pub fn snf(a: &IntMat) -> Result<Snf> {
    let (m, n) = (a.rows, a.cols);
    let mut w = Work {
        a: a.clone(),
        u: IntMat::identity(m),
        u_inv: IntMat::identity(m),
        v: IntMat::identity(n),
        v_inv: IntMat::identity(n),
    };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = w.a.get(i, j);
                if x != 0 && best.is_none_or(|(bi, bj)| x.unsigned_abs() < w.a.get(bi, bj).unsigned_abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.row_swap(t, pi);
        w.col_swap(t, pj);
        loop {
            let p = w.a.get(t, t);
            let mut clean = true;
            for i in t + 1..m {
                let x = w.a.get(i, t);
                if x != 0 {
                    w.row_add(i, t, -x.div_euclid(p))?;
                    if w.a.get(i, t) != 0 {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                let x = w.a.get(t, j);
                if x != 0 {
                    w.col_add(j, t, -x.div_euclid(p))?;
                    if w.a.get(t, j) != 0 {
                        clean = false;
                    }
                }
            }
            if !clean {
                // move the smallest remainder in row/column t to the pivot
                let mut bi = None;
                let mut bj = None;
                let mut bv = p.unsigned_abs();
                for i in t + 1..m {
                    let x = w.a.get(i, t).unsigned_abs();
                    if x != 0 && x < bv {
                        bv = x;
                        bi = Some(i);
                        bj = None;
                    }
                }
                for j in t + 1..n {
                    let x = w.a.get(t, j).unsigned_abs();
                    if x != 0 && x < bv {
                        bv = x;
                        bj = Some(j);
                        bi = None;
                    }
                }
                if let Some(i) = bi {
                    w.row_swap(t, i);
                } else if let Some(j) = bj {
                    w.col_swap(t, j);
                }
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let mut offending = None;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    if w.a.get(i, j) % p != 0 {
                        offending = Some(i);
                        break 'scan;
                    }
                }
            }
            match offending {
                Some(i) => w.row_add(t, i, 1)?,
                None => break,
            }
        }
        if w.a.get(t, t) < 0 {
            w.row_negate(t);
        }
        diag.push(w.a.get(t, t));
        t += 1;
    }
    Ok(Snf { u: w.u, u_inv: w.u_inv, v: w.v, v_inv: w.v_inv, diag })
}

/// Rank of an integer matrix (equal to its rank over ℚ).
pub fn rank(a: &IntMat) -> Result<usize> {
    Ok(snf(a)?.rank())
}

/// Some integer solution of `A x = b`, or `None` when there is none.
pub fn solve(a: &IntMat, b: &[i128]) -> Result<Option<Vec<i128>>> {
    solve_with(&snf(a)?, b)
}

/// As [`solve`] with a precomputed Smith form of `A`.
pub fn solve_with(s: &Snf, b: &[i128]) -> Result<Option<Vec<i128>>> {
    let c = s.u.mul_vec(b)?;
    let mut y = vec![0i128; s.v.rows];
    for (i, ci) in c.iter().enumerate() {
        if i < s.rank() {
            if ci % s.diag[i] != 0 {
                return Ok(None);
            }
            y[i] = ci / s.diag[i];
        } else if *ci != 0 {
            return Ok(None);
        }
    }
    Ok(Some(s.v.mul_vec(&y)?))
}

/// Solve `A X = B` column by column.
pub fn solve_matrix(a: &IntMat, b: &IntMat) -> Result<Option<IntMat>> {
    let s = snf(a)?;
    let mut x = IntMat::zeros(a.cols, b.cols);
    for c in 0..b.cols {
        match solve_with(&s, &b.column(c))? {
            Some(col) => {
                for (r, v) in col.into_iter().enumerate() {
                    x.set(r, c, v);
                }
            }
            None => return Ok(None),
        }
    }
    Ok(Some(x))
}

/// A ℤ-basis of `ker A`, as the columns of the returned matrix.
pub fn kernel(a: &IntMat) -> Result<IntMat> {
    let s = snf(a)?;
    Ok(s.v.col_range(s.rank(), a.cols))
}

/// Whether a square matrix is invertible over ℤ.
pub fn is_unimodular(a: &IntMat) -> Result<bool> {
    if a.rows != a.cols {
        return Ok(false);
    }
    let s = snf(a)?;
    Ok(s.rank() == a.rows && s.diag.iter().all(|&d| d == 1))
}

/// Whether the columns of `a` span a direct summand of ℤ^rows of full column rank.
pub fn is_split_injective(a: &IntMat) -> Result<bool> {
    let s = snf(a)?;
    Ok(s.rank() == a.cols && s.diag.iter().all(|&d| d == 1))
}

/// Inverse of a unimodular matrix.
pub fn inverse(a: &IntMat) -> Result<Option<IntMat>> {
    if a.rows != a.cols {
        return Ok(None);
    }
    solve_matrix(a, &IntMat::identity(a.rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(a: &IntMat) {
        let s = snf(a).unwrap();
        let d = s.u.mul(a).unwrap().mul(&s.v).unwrap();
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let expect = if i == j && i < s.rank() { s.diag[i] } else { 0 };
                assert_eq!(d.get(i, j), expect, "D[{i}][{j}] for {a:?}");
            }
        }
        assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntMat::identity(a.rows()));
        assert_eq!(s.v.mul(&s.v_inv).unwrap(), IntMat::identity(a.cols()));
        for w in s.diag.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
    }

    #[test]
    fn snf_small_cases() {
        check_snf(&IntMat::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]));
        check_snf(&IntMat::from_rows(&[vec![2, 0], vec![0, 3]]));
        check_snf(&IntMat::zeros(3, 2));
        check_snf(&IntMat::zeros(0, 4));
        let s = snf(&IntMat::from_rows(&[vec![2, 0], vec![0, 3]])).unwrap();
        assert_eq!(s.diag, vec![1, 6]);
    }

    #[test]
    fn snf_pseudo_random() {
        let mut x: i128 = 12345;
        for _ in 0..200 {
            let m = (x as usize % 4) + 1;
            x = (x * 1103515245 + 12345) % 2147483648;
            let n = (x as usize % 4) + 1;
            let mut data = Vec::new();
            for _ in 0..m * n {
                x = (x * 1103515245 + 12345) % 2147483648;
                data.push((x % 11) - 5);
            }
            check_snf(&IntMat::from_vec(m, n, data));
        }
    }

    #[test]
    fn solve_and_kernel() {
        let a = IntMat::from_rows(&[vec![2, 4], vec![1, 3]]);
        let x = solve(&a, &[2, 2]).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), vec![2, 2]);
        let b = IntMat::from_rows(&[vec![2, 0]]);
        assert!(solve(&b, &[1]).unwrap().is_none());
        let k = kernel(&IntMat::from_rows(&[vec![1, 1, 1]])).unwrap();
        assert_eq!(k.cols(), 2);
        assert!(IntMat::from_rows(&[vec![1, 1, 1]]).mul(&k).unwrap().is_zero());
    }
}
