//! Dense matrices over a [`Ring`].
//!
//! A matrix of a map `K → L` between f.g. free modules has `rank L` rows and
//! `rank K` columns and acts on column vectors. `M*` is the conjugate
//! transpose, which is the matrix of the dual map `L* → K*`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::intmat::{self, IntMat};
use crate::ring::{Ring, RingElem};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<RingElem>,
}

impl Matrix {
    pub fn zeros(ring: Ring, rows: usize, cols: usize) -> Matrix {
        Matrix { ring, rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: Ring, n: usize) -> Matrix {
        let mut m = Matrix::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    /// `c` times the identity.
    pub fn scalar(ring: Ring, n: usize, c: i64) -> Matrix {
        Matrix::identity(ring, n).scale(c)
    }

    /// Row-major integer entries mapped into `ring`.
    pub fn from_ints(ring: Ring, rows: usize, cols: usize, entries: &[i64]) -> Matrix {
        assert_eq!(entries.len(), rows * cols, "entry count");
        Matrix { ring, rows, cols, data: entries.iter().map(|&x| ring.from_int(x)).collect() }
    }

    /// Build from rows of ring elements; every entry must lie in `ring`.
    pub fn from_rows(ring: Ring, cols: usize, rows: Vec<Vec<RingElem>>) -> Result<Matrix> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            for (j, e) in row.into_iter().enumerate() {
                if !ring.contains(&e) {
                    return Err(Error::RingMismatch(format!("entry ({i},{j}) = {e} is not in {ring}")));
                }
                data.push(e);
            }
        }
        Ok(Matrix { ring, rows: nrows, cols, data })
    }

    pub fn from_fn(ring: Ring, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> RingElem) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                debug_assert!(ring.contains(&e));
                data.push(e);
            }
        }
        Matrix { ring, rows, cols, data }
    }

    #[inline]
    pub fn ring(&self) -> Ring {
        self.ring
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
    pub fn get(&self, r: usize, c: usize) -> &RingElem {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: RingElem) {
        debug_assert!(self.ring.contains(&v));
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[RingElem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RingElem::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Conjugate transpose: `(M*)_{pq} = involute(M_{qp})`.
    pub fn star(&self) -> Matrix {
        Matrix::from_fn(self.ring, self.cols, self.rows, |i, j| self.get(j, i).involute())
    }

    pub fn scale(&self, c: i64) -> Matrix {
        Matrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| e.scale(c)).collect(),
        }
    }

    /// Multiply every entry on the left by a ring element.
    pub fn scale_elem(&self, a: &RingElem) -> Matrix {
        Matrix { ring: self.ring, rows: self.rows, cols: self.cols, data: self.data.iter().map(|e| a * e).collect() }
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        Ok(Matrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.checked_add(b))
                .collect::<Option<_>>()
                .ok_or(Error::Overflow)?,
        })
    }

    fn same_shape(&self, other: &Matrix) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring, other.ring)));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// The submatrix with rows `r0..r0+nr` and columns `c0..c0+nc`.
    pub fn sub_block(&self, r0: usize, nr: usize, c0: usize, nc: usize) -> Matrix {
        Matrix::from_fn(self.ring, nr, nc, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// Write `m` into this matrix with its top-left corner at `(r0, c0)`.
    pub fn put(&mut self, r0: usize, c0: usize, m: &Matrix) {
        assert!(r0 + m.rows <= self.rows && c0 + m.cols <= self.cols, "block out of range");
        for i in 0..m.rows {
            for j in 0..m.cols {
                self.set(r0 + i, c0 + j, m.get(i, j).clone());
            }
        }
    }

    /// Assemble a block matrix. `row_sizes` and `col_sizes` give the block
    /// grid; `parts` lists `(block_row, block_col, matrix)`, the rest is zero.
    pub fn blocks(ring: Ring, row_sizes: &[usize], col_sizes: &[usize], parts: &[(usize, usize, &Matrix)]) -> Matrix {
        let offsets = |sizes: &[usize]| -> Vec<usize> {
            let mut o = Vec::with_capacity(sizes.len());
            let mut acc = 0;
            for s in sizes {
                o.push(acc);
                acc += s;
            }
            o
        };
        let ro = offsets(row_sizes);
        let co = offsets(col_sizes);
        let mut m = Matrix::zeros(ring, row_sizes.iter().sum(), col_sizes.iter().sum());
        for (bi, bj, part) in parts {
            assert_eq!(
                (part.rows, part.cols),
                (row_sizes[*bi], col_sizes[*bj]),
                "block ({bi},{bj}) has the wrong shape"
            );
            m.put(ro[*bi], co[*bj], part);
        }
        m
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        Matrix::blocks(self.ring, &[self.rows, other.rows], &[self.cols, other.cols], &[(0, 0, self), (1, 1, other)])
    }

    /// Restriction of scalars to ℤ via the regular representation; `None` over ℚ.
    ///
    /// An entry `a ∈ ℤ[ℤ/k]` becomes the `k × k` block `R(a)[i][j] = a_{(i−j) mod k}`,
    /// so `restrict(MN) = restrict(M) restrict(N)` and `restrict(M*) = restrict(M)ᵀ`.
    pub fn restrict(&self) -> Option<IntMat> {
        let k = match self.ring {
            Ring::Integers => 1,
            Ring::CyclicGroupRing(k) => k,
            Ring::Rationals => return None,
        };
        let mut out = IntMat::zeros(self.rows * k, self.cols * k);
        for p in 0..self.rows {
            for q in 0..self.cols {
                let c = self.get(p, q).coords()?;
                for i in 0..k {
                    for j in 0..k {
                        out.set(p * k + i, q * k + j, c[(i + k - j) % k] as i128);
                    }
                }
            }
        }
        Some(out)
    }

    /// Read a ring matrix back from a ℤ-matrix whose columns are coordinate
    /// vectors: column `q` of the result is assembled from rows `p·k..p·k+k`.
    pub fn from_coord_columns(ring: Ring, x: &IntMat) -> Result<Matrix> {
        let k = ring.z_rank();
        if !ring.is_integral() || !x.rows().is_multiple_of(k) {
            return Err(Error::UnsupportedRing(format!("{ring}")));
        }
        let rows = x.rows() / k;
        let mut m = Matrix::zeros(ring, rows, x.cols());
        for p in 0..rows {
            for q in 0..x.cols() {
                let mut coords = Vec::with_capacity(k);
                for i in 0..k {
                    coords.push(i64::try_from(x.get(p * k + i, q)).map_err(|_| Error::Overflow)?);
                }
                let e = match ring {
                    Ring::Integers => RingElem::Int(coords[0]),
                    _ => RingElem::Group(coords),
                };
                m.set(p, q, e);
            }
        }
        Ok(m)
    }

    /// The coordinate vectors of the columns: a `(rows·k) × cols` integer matrix.
    pub fn coord_columns(&self) -> Option<IntMat> {
        let k = self.ring.z_rank();
        let mut out = IntMat::zeros(self.rows * k, self.cols);
        for p in 0..self.rows {
            for q in 0..self.cols {
                let c = self.get(p, q).coords()?;
                for (i, ci) in c.into_iter().enumerate() {
                    out.set(p * k + i, q, ci as i128);
                }
            }
        }
        Some(out)
    }

    /// Entries as exact rationals (ℤ and ℚ only).
    pub fn to_rational(&self) -> Option<Vec<Vec<Ratio<i128>>>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).to_rational().map(|q| Ratio::new(*q.numer() as i128, *q.denom() as i128)))
                    .collect()
            })
            .collect()
    }

    /// Some `X` with `self · X = b`, or `None`.
    ///
    /// Integral rings solve over ℤ after restriction of scalars, one column of
    /// `b` at a time; a coordinate solution is automatically a ring solution
    /// because `R(A)·coords(x) = coords(A x)`. ℚ uses exact elimination.
    pub fn solve(&self, b: &Matrix) -> Result<Option<Matrix>> {
        if b.rows != self.rows || b.ring != self.ring {
            return Err(Error::DimensionMismatch(format!(
                "solve: {}x{} against {}x{}",
                self.rows, self.cols, b.rows, b.cols
            )));
        }
        match self.ring {
            Ring::Rationals => Ok(rational_solve(self, b)),
            ring => {
                let a = self.restrict().ok_or(Error::Overflow)?;
                let rhs = b.coord_columns().ok_or(Error::Overflow)?;
                match intmat::solve_matrix(&a, &rhs)? {
                    Some(x) => Ok(Some(Matrix::from_coord_columns(ring, &x)?)),
                    None => Ok(None),
                }
            }
        }
    }

    /// Rank over ℤ after restriction of scalars (ℚ: rank over ℚ).
    pub fn z_rank(&self) -> Result<usize> {
        match self.restrict() {
            Some(a) => intmat::rank(&a),
            None => Ok(rational_rank(self)),
        }
    }
}

fn rref(a: &mut [Vec<Ratio<i128>>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| *a[i][c].numer() != 0) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..a.len() {
            if i != r && *a[i][c].numer() != 0 {
                let f = a[i][c];
                let row_r = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(row_r) {
                    *x -= f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    pivots
}

fn rational_rank(m: &Matrix) -> usize {
    let mut a = m.to_rational().expect("rational entries");
    rref(&mut a, m.cols).len()
}

fn rational_solve(m: &Matrix, b: &Matrix) -> Option<Matrix> {
    let ma = m.to_rational()?;
    let mb = b.to_rational()?;
    let mut aug: Vec<Vec<Ratio<i128>>> = ma
        .into_iter()
        .zip(mb)
        .map(|(mut r, rb)| {
            r.extend(rb);
            r
        })
        .collect();
    let pivots = rref(&mut aug, m.cols);
    // inconsistent if a zero row of A carries a nonzero right-hand side
    for row in aug.iter().skip(pivots.len()) {
        if row[m.cols..].iter().any(|x| *x.numer() != 0) {
            return None;
        }
    }
    let mut x = Matrix::zeros(Ring::Rationals, m.cols, b.cols);
    for (r, &c) in pivots.iter().enumerate() {
        for j in 0..b.cols {
            let v = aug[r][m.cols + j];
            let n = i64::try_from(*v.numer()).ok()?;
            let d = i64::try_from(*v.denom()).ok()?;
            x.set(c, j, RingElem::Rat(Ratio::new(n, d)));
        }
    }
    Some(x)
}

/// Exact product; errors on a ring or inner-dimension mismatch.
pub fn ring_matmul(m: &Matrix, n: &Matrix) -> Result<Matrix> {
    if m.ring != n.ring {
        return Err(Error::RingMismatch(format!("{} vs {}", m.ring, n.ring)));
    }
    if m.cols != n.rows {
        return Err(Error::DimensionMismatch(format!("{}x{} times {}x{}", m.rows, m.cols, n.rows, n.cols)));
    }
    let mut out = Matrix::zeros(m.ring, m.rows, n.cols);
    for i in 0..m.rows {
        for l in 0..m.cols {
            let a = m.get(i, l);
            if a.is_zero() {
                continue;
            }
            for j in 0..n.cols {
                let b = n.get(l, j);
                if !b.is_zero() {
                    let cur = &out.data[i * n.cols + j];
                    let prod = a.checked_mul(b).ok_or(Error::Overflow)?;
                    out.data[i * n.cols + j] = cur.checked_add(&prod).ok_or(Error::Overflow)?;
                }
            }
        }
    }
    Ok(out)
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        ring_matmul(self, rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self + &(-rhs)
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(-1)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}
