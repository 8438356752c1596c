//! `(−1)^i`-quadratic forms, lagrangians, formations, the instant surgery
//! obstruction, and Witt classification over ℤ.
//!
//! Forms are stored as `(λ, μ)` with `μ` given on basis vectors only; on a
//! general vector it is extended by `μ(x + y) = μ(x) + μ(y) + λ(x, y)` and
//! `μ(xa) = ā μ(x) a`, with `λ(x, y) = x* λ y`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Add;

use num_rational::Ratio;

use crate::complex::{ChainComplex, Report};
use crate::error::{Error, Result};
use crate::intmat::{self, IntMat};
use crate::matrix::Matrix;
use crate::ring::{q_reduce, Parity, QClass, Ring, RingElem};
use crate::structure::{is_poincare_quad, QuadraticComplex};

/// A `(−1)^i`-quadratic form on a free module `K` of rank `rank()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsQuadraticForm {
    ring: Ring,
    parity: Parity,
    lambda: Matrix,
    mu: Vec<QClass>,
}

impl EpsQuadraticForm {
    /// Validate `λ = (−1)^i λ*` and `λ(e_j, e_j) = μ_j + (−1)^i μ̄_j`.
    pub fn new(ring: Ring, i: i64, lambda: Matrix, mu: Vec<RingElem>) -> Result<EpsQuadraticForm> {
        let parity = Parity::of(i);
        let eps = parity.sign();
        if !lambda.is_square() || lambda.rows() != mu.len() {
            return Err(Error::DimensionMismatch(format!(
                "λ is {}x{} with {} μ values",
                lambda.rows(),
                lambda.cols(),
                mu.len()
            )));
        }
        if lambda.ring() != ring || mu.iter().any(|m| !ring.contains(m)) {
            return Err(Error::RingMismatch(format!("form entries are not in {ring}")));
        }
        if lambda != lambda.star().scale(eps) {
            return Err(Error::Malformed(format!("λ ≠ {}λ*", if eps == 1 { "" } else { "−" })));
        }
        for (j, m) in mu.iter().enumerate() {
            if lambda.get(j, j) != &(m + &m.involute().scale(eps)) {
                return Err(Error::Malformed(format!("λ({j},{j}) ≠ μ + ε μ̄ at basis vector {j}")));
            }
        }
        let mu = mu.iter().map(|m| q_reduce(m, parity)).collect();
        Ok(EpsQuadraticForm { ring, parity, lambda, mu })
    }

    /// The form `(ψ + (−1)^i ψ*, [ψ_jj])` of a quadratic matrix `ψ`.
    pub fn from_psi(i: i64, psi: &Matrix) -> Result<EpsQuadraticForm> {
        if !psi.is_square() {
            return Err(Error::DimensionMismatch(format!("ψ is {}x{}", psi.rows(), psi.cols())));
        }
        let eps = Parity::of(i).sign();
        let lambda = psi + &psi.star().scale(eps);
        let mu = (0..psi.rows()).map(|j| psi.get(j, j).clone()).collect();
        EpsQuadraticForm::new(psi.ring(), i, lambda, mu)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn rank(&self) -> usize {
        self.lambda.rows()
    }

    pub fn lambda(&self) -> &Matrix {
        &self.lambda
    }

    /// `μ` on the basis vectors, as canonical `Q`-classes.
    pub fn mu(&self) -> &[QClass] {
        &self.mu
    }

    /// `λ(x, y) = x* λ y` for column vectors `x`, `y`.
    pub fn lambda_of(&self, x: &Matrix, y: &Matrix) -> RingElem {
        (&(&x.star() * &self.lambda) * y).get(0, 0).clone()
    }

    /// `μ(x)` for a column vector `x`.
    pub fn mu_of(&self, x: &Matrix) -> QClass {
        let mut acc = self.ring.zero();
        for j in 0..self.rank() {
            let a = x.get(j, 0);
            if a.is_zero() {
                continue;
            }
            acc = &acc + &(&(&a.involute() * self.mu[j].rep()) * a);
            for k in j + 1..self.rank() {
                acc = &acc + &(&(&a.involute() * self.lambda.get(j, k)) * x.get(k, 0));
            }
        }
        q_reduce(&acc, self.parity)
    }

    /// `λ` is invertible over the ring.
    pub fn is_nonsingular(&self) -> Result<bool> {
        is_invertible(&self.lambda)
    }

    pub fn direct_sum(&self, other: &EpsQuadraticForm) -> Result<EpsQuadraticForm> {
        if self.ring != other.ring || self.parity != other.parity {
            return Err(Error::RingMismatch("direct sum of forms over different rings or parities".into()));
        }
        let mut mu = self.mu.clone();
        mu.extend(other.mu.iter().cloned());
        Ok(EpsQuadraticForm { ring: self.ring, parity: self.parity, lambda: self.lambda.direct_sum(&other.lambda), mu })
    }

    /// The form pulled back along a basis change `x`: `(x* λ x, μ(x_j))`.
    pub fn pullback(&self, x: &Matrix) -> EpsQuadraticForm {
        let lambda = &(&x.star() * &self.lambda) * x;
        let mu = (0..x.cols()).map(|j| self.mu_of(&x.sub_block(0, x.rows(), j, 1))).collect();
        EpsQuadraticForm { ring: self.ring, parity: self.parity, lambda, mu }
    }

    /// Mod-2 reduction `(λ mod 2, μ mod 2)` over ℤ with `i` odd.
    fn mod2(&self) -> Result<(Vec<Vec<u8>>, Vec<u8>)> {
        if self.ring != Ring::Integers || self.parity.is_even() {
            return Err(Error::UnsupportedRing(format!("Arf invariant needs ℤ and odd i, got {}", self.ring)));
        }
        let n = self.rank();
        let lam = (0..n)
            .map(|a| (0..n).map(|b| self.lambda.get(a, b).as_int().map_or(0, |v| v.rem_euclid(2) as u8)).collect())
            .collect();
        let mu = self.mu.iter().map(|m| m.rep().as_int().map_or(0, |v| v.rem_euclid(2) as u8)).collect();
        Ok((lam, mu))
    }
}

fn is_invertible(m: &Matrix) -> Result<bool> {
    if !m.is_square() {
        return Ok(false);
    }
    match m.restrict() {
        Some(a) => intmat::is_unimodular(&a),
        None => Ok(m.z_rank()? == m.rows()),
    }
}

/// The hyperbolic form `H_{(−1)^i}(L)` on `L ⊕ L*`, `L = A^g`.
///
/// The basis is ordered `e_1, f_1, …, e_g, f_g`, so `λ` is block diagonal
/// with blocks `[[0, 1], [(−1)^i, 0]]` and `μ` vanishes on the basis.
pub fn hyperbolic(ring: Ring, g: usize, i: i64) -> EpsQuadraticForm {
    let parity = Parity::of(i);
    let mut lambda = Matrix::zeros(ring, 2 * g, 2 * g);
    for k in 0..g {
        lambda.set(2 * k, 2 * k + 1, ring.one());
        lambda.set(2 * k + 1, 2 * k, ring.from_int(parity.sign()));
    }
    EpsQuadraticForm { ring, parity, lambda, mu: vec![QClass::zero(ring, parity); 2 * g] }
}

/// Inclusion matrix of the standard lagrangian `L = ⟨e_1, …, e_g⟩` of [`hyperbolic`].
pub fn hyperbolic_lagrangian(ring: Ring, g: usize) -> Matrix {
    let mut m = Matrix::zeros(ring, 2 * g, g);
    for k in 0..g {
        m.set(2 * k, k, ring.one());
    }
    m
}

/// Inclusion matrix of the dual lagrangian `L* = ⟨f_1, …, f_g⟩` of [`hyperbolic`].
pub fn hyperbolic_dual_lagrangian(ring: Ring, g: usize) -> Matrix {
    let mut m = Matrix::zeros(ring, 2 * g, g);
    for k in 0..g {
        m.set(2 * k + 1, k, ring.one());
    }
    m
}

/// Rank of the submodule spanned by the columns, after restriction of scalars.
fn span_rank(m: &Matrix) -> Result<usize> {
    m.z_rank()
}

/// Columns span a direct summand: split injective after restriction of scalars.
fn is_summand_inclusion(m: &Matrix) -> Result<bool> {
    match m.restrict() {
        Some(a) => intmat::is_split_injective(&a),
        None => Ok(m.z_rank()? == m.cols()),
    }
}

/// Check that the columns of `l` include a lagrangian of `q`.
pub fn check_lagrangian(q: &EpsQuadraticForm, l: &Matrix) -> Result<Report> {
    if !q.is_nonsingular()? {
        return Err(Error::Singular("lagrangians are only defined for nonsingular forms".into()));
    }
    if l.rows() != q.rank() || l.ring() != q.ring() {
        return Err(Error::DimensionMismatch(format!("inclusion has {} rows, form has rank {}", l.rows(), q.rank())));
    }
    let mut rep = Report::ok();
    if !is_summand_inclusion(l)? {
        rep.push("L is not a direct summand".into());
    }
    if !(&(&l.star() * q.lambda()) * l).is_zero() {
        rep.push("λ(L)(L) ≠ 0".into());
    }
    for j in 0..l.cols() {
        if !q.mu_of(&l.sub_block(0, l.rows(), j, 1)).is_zero() {
            rep.push(format!("μ ≠ 0 on generator {j}"));
        }
    }
    // L ⊂ L^⊥ both summands, so equality is a rank count
    let annihilator_rank = match (&l.star() * q.lambda()).restrict() {
        Some(a) => a.cols() - intmat::rank(&a)?,
        None => q.rank() - (&l.star() * q.lambda()).z_rank()?,
    };
    if annihilator_rank != span_rank(l)? {
        rep.push(format!("L^⊥ has rank {annihilator_rank}, L has rank {}", span_rank(l)?));
    }
    Ok(rep)
}

/// A `(−1)^i`-quadratic formation `(K, λ, μ; F, G)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formation {
    pub form: EpsQuadraticForm,
    pub f: Matrix,
    pub g: Matrix,
}

pub fn check_formation(phi: &Formation) -> Result<Report> {
    let mut rep = Report::ok();
    rep.merge("F", check_lagrangian(&phi.form, &phi.f)?);
    rep.merge("G", check_lagrangian(&phi.form, &phi.g)?);
    Ok(rep)
}

/// Evidence that a formation is trivial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrivialWitness {
    /// `F ⊕ G = K`.
    Complementary,
    /// A lagrangian complementary to both `F` and `G`.
    CommonComplement(Matrix),
}

fn is_complement(a: &Matrix, b: &Matrix) -> Result<bool> {
    let ring = a.ring();
    let ab = Matrix::blocks(ring, &[a.rows()], &[a.cols(), b.cols()], &[(0, 0, a), (0, 1, b)]);
    is_invertible(&ab)
}

pub fn is_trivial_witness(phi: &Formation, w: &TrivialWitness) -> Result<Report> {
    let mut rep = check_formation(phi)?;
    match w {
        TrivialWitness::Complementary => {
            if !is_complement(&phi.f, &phi.g)? {
                rep.push("[F | G] is not invertible".into());
            }
        }
        TrivialWitness::CommonComplement(h) => {
            rep.merge("H", check_lagrangian(&phi.form, h)?);
            if !is_complement(&phi.f, h)? {
                rep.push("H is not a complement of F".into());
            }
            if !is_complement(&phi.g, h)? {
                rep.push("H is not a complement of G".into());
            }
        }
    }
    Ok(rep)
}

/// Matrix of a structure component as a plain integer matrix.
fn to_intmat(m: &Matrix) -> IntMat {
    let mut out = IntMat::zeros(m.rows(), m.cols());
    for a in 0..m.rows() {
        for b in 0..m.cols() {
            out.set(a, b, m.get(a, b).as_int().expect("integer entry") as i128);
        }
    }
    out
}

fn from_intmat(a: &IntMat) -> Result<Matrix> {
    let mut m = Matrix::zeros(Ring::Integers, a.rows(), a.cols());
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            m.set(r, c, RingElem::Int(i64::try_from(a.get(r, c)).map_err(|_| Error::Overflow)?));
        }
    }
    Ok(m)
}

/// The instant obstruction with the chosen cokernel basis.
#[derive(Clone, Debug)]
pub struct InstantObstruction {
    pub form: EpsQuadraticForm,
    /// `ψ` on the cokernel basis; `form` is `from_psi(i, psi)`.
    pub psi: Matrix,
    /// Columns: lifts of the cokernel basis to `C^i ⊕ C_{i+1}`.
    pub basis: Matrix,
}

/// Instant surgery obstruction of a `2i`-dimensional quadratic Poincaré complex over ℤ.
///
/// The form lives on the cokernel of
/// `[[d*, 0], [(−1)^{i+1}(1+T)ψ_0, d]]: C^{i−1} ⊕ C_{i+2} → C^i ⊕ C_{i+1}`
/// and is induced by `[[ψ_0, d], [0, 0]]`.
pub fn instant_obstruction(x: &QuadraticComplex) -> Result<InstantObstruction> {
    let n = x.n();
    if x.ring() != Ring::Integers {
        return Err(Error::UnsupportedRing(format!("{}", x.ring())));
    }
    if n.rem_euclid(2) != 0 {
        return Err(Error::Malformed(format!("instant obstruction needs even dimension, got {n}")));
    }
    if !is_poincare_quad(x)? {
        return Err(Error::NotPoincare("instant obstruction needs a Poincaré complex".into()));
    }
    let i = n / 2;
    let c = x.complex();
    let ring = Ring::Integers;
    let (a0, a1, b0, b1) = (c.rank(i), c.rank(i + 1), c.rank(i - 1), c.rank(i + 2));
    // the (−1)^r in the dual differential absorbs the printed (−1)^{i+1}
    let top = c.d(i).star();
    let mid = x.sym_psi0(i + 1);
    let bottom = c.d(i + 2);
    let a = Matrix::blocks(ring, &[a0, a1], &[b0, b1], &[(0, 0, &top), (1, 0, &mid), (1, 1, &bottom)]);
    // matrices act on columns, so the printed [[ψ_0, d], [0, 0]] becomes its transpose
    let d1 = c.d(i + 1).star();
    let psi_big = Matrix::blocks(ring, &[a0, a1], &[a0, a1], &[(0, 0, &x.psi(0, i)), (1, 0, &d1)]);
    let big = EpsQuadraticForm::from_psi(i, &psi_big)?;

    // the image must be in the radical of λ and μ-isotropic
    if !(&a.star() * big.lambda()).is_zero() {
        return Err(Error::NonDescending("λ does not vanish on the image".into()));
    }
    for j in 0..a.cols() {
        if !big.mu_of(&a.sub_block(0, a.rows(), j, 1)).is_zero() {
            return Err(Error::NonDescending(format!("μ does not vanish on image generator {j}")));
        }
    }

    let basis = if a.is_zero() {
        Matrix::identity(ring, a0 + a1)
    } else {
        let s = intmat::snf(&to_intmat(&a))?;
        let torsion: Vec<i128> = s.diag.iter().copied().filter(|&d| d != 1).collect();
        if !torsion.is_empty() {
            return Err(Error::TorsionCokernel(torsion));
        }
        // u a v = diag, so the last rows of u give coordinates on the cokernel
        // and the matching columns of u⁻¹ lift its basis
        let m = a0 + a1;
        from_intmat(&s.u_inv.col_range(s.rank(), m))?
    };
    let psi = &(&basis.star() * &psi_big) * &basis;
    let form = EpsQuadraticForm::from_psi(i, &psi)?;
    if !form.is_nonsingular()? {
        return Err(Error::Singular("instant obstruction form is singular".into()));
    }
    Ok(InstantObstruction { form, psi, basis })
}

type Q = Ratio<i128>;

/// Sylvester signature of a symmetric matrix over ℤ or ℚ by exact congruence diagonalization.
pub fn signature(lambda: &Matrix) -> Result<i64> {
    if lambda != &lambda.star() {
        return Err(Error::Malformed("signature needs a symmetric matrix".into()));
    }
    let mut a: Vec<Vec<Q>> =
        lambda.to_rational().ok_or_else(|| Error::UnsupportedRing(format!("{}", lambda.ring())))?;
    let n = a.len();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut sig = 0i64;
    while !alive.is_empty() {
        let pivot = alive.iter().copied().find(|&p| a[p][p] != Q::from_integer(0));
        let p = match pivot {
            Some(p) => p,
            None => {
                let pair = alive
                    .iter()
                    .flat_map(|&p| alive.iter().map(move |&q| (p, q)))
                    .find(|&(p, q)| p != q && a[p][q] != Q::from_integer(0));
                let Some((p, q)) = pair else { break };
                // e_p ← e_p + e_q makes the diagonal 2 a_pq ≠ 0
                for k in 0..n {
                    let v = a[q][k];
                    a[p][k] += v;
                }
                for k in 0..n {
                    let v = a[k][q];
                    a[k][p] += v;
                }
                p
            }
        };
        let piv = a[p][p];
        sig += if piv > Q::from_integer(0) { 1 } else { -1 };
        alive.retain(|&k| k != p);
        for &k in &alive {
            let f = a[k][p] / piv;
            if f == Q::from_integer(0) {
                continue;
            }
            for &m in &alive {
                let v = a[p][m];
                a[k][m] -= f * v;
            }
        }
        for &k in &alive {
            a[k][p] = Q::from_integer(0);
            a[p][k] = Q::from_integer(0);
        }
    }
    Ok(sig)
}

/// Arf invariant of a nonsingular `(−1)`-quadratic form over ℤ via a mod-2 symplectic basis.
pub fn arf(q: &EpsQuadraticForm) -> Result<u8> {
    let (lam, mu) = q.mod2()?;
    let n = lam.len();
    let ev = |x: &[u8]| quad_mod2(&lam, &mu, x);
    let bil = |x: &[u8], y: &[u8]| -> u8 {
        let mut s = 0u8;
        for a in 0..n {
            for b in 0..n {
                s ^= x[a] & lam[a][b] & y[b];
            }
        }
        s
    };
    let mut pool: Vec<Vec<u8>> = (0..n).map(|k| (0..n).map(|j| u8::from(j == k)).collect()).collect();
    let mut total = 0u8;
    while let Some(x) = pool.pop() {
        if x.iter().all(|&v| v == 0) {
            continue;
        }
        let Some(pos) = pool.iter().position(|y| bil(&x, y) == 1) else {
            return Err(Error::Singular("λ is singular mod 2".into()));
        };
        let y = pool.remove(pos);
        total ^= ev(&x) & ev(&y);
        // v ← v + λ(v, y) x + λ(v, x) y keeps the rest orthogonal to x, y
        for v in pool.iter_mut() {
            let (cy, cx) = (bil(v, &y), bil(v, &x));
            for k in 0..n {
                v[k] ^= (cy & x[k]) ^ (cx & y[k]);
            }
        }
    }
    Ok(total)
}

fn quad_mod2(lam: &[Vec<u8>], mu: &[u8], x: &[u8]) -> u8 {
    let n = x.len();
    let mut s = 0u8;
    for j in 0..n {
        if x[j] == 0 {
            continue;
        }
        s ^= mu[j];
        for k in j + 1..n {
            s ^= x[k] & lam[j][k];
        }
    }
    s
}

/// Arf invariant by counting zeros of `μ` on `(ℤ/2)^{2g}`:
/// `2^{2g−1} + 2^{g−1}` zeros means 0, `2^{2g−1} − 2^{g−1}` means 1.
pub fn arf_by_counting(q: &EpsQuadraticForm) -> Result<u8> {
    let (lam, mu) = q.mod2()?;
    let n = lam.len();
    if n % 2 != 0 || n > 30 {
        return Err(Error::Singular(format!("rank {n} cannot carry a nonsingular skew form")));
    }
    if n == 0 {
        return Ok(0);
    }
    let zeros = (0u64..1 << n)
        .filter(|bits| {
            let x: Vec<u8> = (0..n).map(|k| ((bits >> k) & 1) as u8).collect();
            quad_mod2(&lam, &mu, &x) == 0
        })
        .count() as u64;
    let g = n / 2;
    let big = 1u64 << (n - 1);
    let small = 1u64 << (g - 1);
    if zeros == big + small {
        Ok(0)
    } else if zeros == big - small {
        Ok(1)
    } else {
        Err(Error::Singular(format!("{zeros} zeros: λ is singular mod 2")))
    }
}

/// Class of a form in `L_{2i}(ℤ)`: signature/8 for `i` even, Arf for `i` odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WittClassZ {
    pub parity: Parity,
    pub value: i64,
}

impl Add for WittClassZ {
    type Output = WittClassZ;
    fn add(self, rhs: WittClassZ) -> WittClassZ {
        assert_eq!(self.parity, rhs.parity, "adding Witt classes of different parity");
        let value = if self.parity.is_even() { self.value + rhs.value } else { (self.value + rhs.value).rem_euclid(2) };
        WittClassZ { parity: self.parity, value }
    }
}

impl core::fmt::Display for WittClassZ {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.parity.is_even() {
            write!(f, "signature/8 = {}", self.value)
        } else {
            write!(f, "Arf = {}", self.value)
        }
    }
}

pub fn witt_class_z(q: &EpsQuadraticForm) -> Result<WittClassZ> {
    if q.ring() != Ring::Integers {
        return Err(Error::UnsupportedRing(format!("Witt classification is over ℤ only, got {}", q.ring())));
    }
    if !q.is_nonsingular()? {
        return Err(Error::Singular("Witt class of a singular form".into()));
    }
    if q.parity().is_even() {
        for j in 0..q.rank() {
            let v = q.lambda().get(j, j).as_int().unwrap_or(1);
            if v.rem_euclid(2) != 0 {
                return Err(Error::NotEven(format!("λ({j},{j}) = {v}")));
            }
        }
        let sig = signature(q.lambda())?;
        if sig.rem_euclid(8) != 0 {
            return Err(Error::NotEven(format!("signature {sig} of an even unimodular form")));
        }
        Ok(WittClassZ { parity: q.parity(), value: sig / 8 })
    } else {
        Ok(WittClassZ { parity: q.parity(), value: i64::from(arf(q)?) })
    }
}

/// Homology with ℚ coefficients vanishes in every degree.
pub fn is_rationally_acyclic(c: &ChainComplex) -> Result<bool> {
    if c.ring() == Ring::Rationals {
        return rational_acyclic(c);
    }
    rational_acyclic(&c.restrict_scalars()?)
}

fn rational_acyclic(c: &ChainComplex) -> Result<bool> {
    if c.lo() > c.hi() {
        return Ok(true);
    }
    for r in c.lo()..=c.hi() {
        let out = c.d(r).z_rank()?;
        let inc = c.d(r + 1).z_rank()?;
        if c.rank(r) != out + inc {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Scale a ℚ-matrix by the least common multiple of its denominators.
pub fn clear_denominators(m: &Matrix) -> Result<(Matrix, i64)> {
    let rows = m.to_rational().ok_or_else(|| Error::UnsupportedRing(format!("{}", m.ring())))?;
    let mut l: i128 = 1;
    for row in &rows {
        for x in row {
            l = num_integer::lcm(l, *x.denom());
        }
    }
    let mut out = Matrix::zeros(Ring::Integers, m.rows(), m.cols());
    for (a, row) in rows.iter().enumerate() {
        for (b, x) in row.iter().enumerate() {
            let v = (x * Q::from_integer(l)).to_integer();
            out.set(a, b, RingElem::Int(i64::try_from(v).map_err(|_| Error::Overflow)?));
        }
    }
    Ok((out, i64::try_from(l).map_err(|_| Error::Overflow)?))
}
